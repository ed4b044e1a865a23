use crate::Error;

/// Bracket and stopping rule for [`bisect`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bisection {
    pub lo: f64,
    pub hi: f64,
    pub max_iterations: u32,
    /// Stop once the bracket half-width drops below this.
    pub tolerance: f64,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            lo: 1e-12,
            hi: 1.0 - 1e-12,
            max_iterations: 200,
            tolerance: 1e-12,
        }
    }
}

/// Root of `f` on the bracket, which must show a sign change.
pub fn bisect(what: &'static str, f: impl Fn(f64) -> f64, cfg: Bisection) -> Result<f64, Error> {
    let (mut lo, mut hi) = (cfg.lo, cfg.hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { what, lo, hi });
    }
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || 0.5 * (hi - lo) < cfg.tolerance {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
