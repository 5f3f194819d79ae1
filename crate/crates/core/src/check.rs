use crate::linalg::Tolerance;

/// Shared knobs for the sampling-based checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub tol: Tolerance,
    pub trials: usize,
    pub seed: u64,
}

impl CheckConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            trials: 20,
            seed: 0,
        }
    }
}
