/// Size caps shared by every expensive operation.
///
/// Exceeding a cap is always reported as an error, never as a truncated
/// result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group stored with a dense Cayley table.
    pub max_order: usize,
    /// Largest subgroup of a direct power built by closure.
    pub max_closure: usize,
    /// Largest number of candidate tuples `|G|^n` an enumeration may visit.
    pub max_candidates: u128,
    /// Largest group whose full subgroup lattice is computed.
    pub max_lattice_order: usize,
}

pub const CLOSURE_ENV_VAR: &str = "HOMCOVER_MAX_CLOSURE";

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 20_000,
            max_closure: 1 << 22,
            max_candidates: 1_000_000_000,
            max_lattice_order: 400,
        }
    }
}

impl Limits {
    /// Defaults, with the closure cap overridden by `HOMCOVER_MAX_CLOSURE`
    /// when that variable holds a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(CLOSURE_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            limits.max_closure = cap;
        }
        limits
    }
}
