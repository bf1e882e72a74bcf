//! Nerves of crossed modules `(H, V)` built from toral groups, the matching
//! maps of those nerves, and cocycle pairs describing simplicial maps from
//! the nerve of a finite group.

pub mod check;
pub mod group_nerve;
pub mod matching;
pub mod pair;
pub mod simplex;

pub use check::{nerve_check, retract_check, NerveCheckOptions, NerveCheckReport, RetractReport};
pub use group_nerve::{all_tuples, degenerate_simplices, edge_products};
pub use matching::{check_compatible, level_three_expression, matching_tuple, solve_matching, MatchingSolution};
pub use pair::{pair_to_simplex, retract, validate_pair, CocyclePair, PairReport};
pub use simplex::{IdentityFailure, NerveCoordinates, NerveSimplex};
