/// Resource bounds shared by the enumeration routines.
///
/// Every bound is checked before work starts, so an oversized input fails
/// fast with [`crate::Error::SizeLimitExceeded`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Bound on `|G| * |P|` for homomorphism enumeration between finite groups.
    pub hom_product: u128,
    /// Largest group order accepted by subgroup enumeration.
    pub subgroup_order: usize,
    /// Largest group order accepted for cochain complexes.
    pub cochain_group_order: usize,
    /// Highest cohomological degree computed.
    pub max_cohomology_degree: usize,
    /// Largest component group for which a multiplication table is built.
    pub component_table: usize,
    /// Largest state space the brute-force oracle walks through.
    pub oracle_states: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            hom_product: 1 << 20,
            subgroup_order: 48,
            cochain_group_order: 24,
            max_cohomology_degree: 3,
            component_table: 256,
            oracle_states: 50_000_000,
        }
    }
}

impl Limits {
    /// Applies a single `--size-cap` style override to the group-size bounds.
    pub fn with_size_cap(mut self, cap: usize) -> Self {
        self.subgroup_order = cap;
        self.cochain_group_order = cap;
        self.hom_product = (cap as u128) * (cap as u128).max(1 << 10);
        self
    }
}
