use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 8;

/// Degree bound for canonicalization and generation.
///
/// Read once from `JDC_MAX_DEGREE`, falling back to [`DEFAULT_MAX_DEGREE`].
pub fn max_degree() -> usize {
    static BOUND: OnceLock<usize> = OnceLock::new();
    *BOUND.get_or_init(|| std::env::var("JDC_MAX_DEGREE").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEGREE))
}

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    let bound = max_degree();
    if degree > bound {
        return Err(Error::Capacity { degree, bound });
    }
    Ok(())
}
