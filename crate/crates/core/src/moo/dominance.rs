use crate::error::{Error, Result};

/// Pareto dominance for minimization: `a` is no worse everywhere and
/// strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return Ok(false);
        }
        if x < y {
            strict = true;
        }
    }
    Ok(strict)
}
