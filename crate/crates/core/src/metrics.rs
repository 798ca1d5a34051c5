//! Polarization metrics shared by the spatial and temporal pipelines.
//!
//! A concept with `a` American and `b` British occurrences scores
//! `(a - b) / (a + b)`, constrained to `[-1, 1]`: `-1` is purely British,
//! `+1` purely American. Cell and year scores are unweighted means of the
//! concept scores observed there.

use crate::scalar::Scalar;

/// Polarization of one concept from its American (`a`) and British (`b`)
/// occurrence counts. Requires `a + b >= 1`; concepts never observed carry
/// no score and must be excluded by the caller.
pub fn concept_polarization<F: Scalar>(a: u64, b: u64) -> F {
    debug_assert!(a + b >= 1, "polarization undefined for a = b = 0");
    let a = F::from_count(a);
    let b = F::from_count(b);
    (a - b) / (a + b)
}

/// Unweighted mean of concept polarizations over `(a, b)` pairs, plus the
/// number of concepts that entered the mean. Pairs with `a + b = 0` are
/// skipped. Returns `None` when nothing was observed.
pub fn mean_polarization<F: Scalar>(counts: impl IntoIterator<Item = (u64, u64)>) -> Option<(F, usize)> {
    let mut sum = F::zero();
    let mut n = 0usize;
    for (a, b) in counts {
        if a + b == 0 {
            continue;
        }
        sum = sum + concept_polarization::<F>(a, b);
        n += 1;
    }
    if n == 0 {
        None
    } else {
        Some((sum / F::from_count(n as u64), n))
    }
}
