//! The lower real branch W_{-1} of the Lambert W function and the threshold
//! solving `a^x / x^b = c`.

use crate::error::{Error, Result};

// -1/e split into a double and its rounding error
const NEG_INV_E_HI: f64 = -0.367_879_441_171_442_33;
const NEG_INV_E_LO: f64 = 1.242_875_367_278_836_3e-17;

/// `z + 1/e` with extra precision near the branch point.
fn offset_from_branch(z: f64) -> f64 {
    (z - NEG_INV_E_HI) - NEG_INV_E_LO
}

/// W_{-1}(z) for z in [-1/e, 0): the solution y <= -1 of y e^y = z.
pub fn lambert_w_m1(z: f64) -> Result<f64> {
    if !z.is_finite() || z >= 0.0 {
        return Err(Error::LambertDomain(z));
    }
    let d = offset_from_branch(z);
    if d < 0.0 {
        if d > -1e-15 {
            return Ok(-1.0);
        }
        return Err(Error::LambertDomain(z));
    }
    if d == 0.0 {
        return Ok(-1.0);
    }
    let init = if d < 0.05 {
        // series in p = -sqrt(2(1 + e z)) around the branch point
        let p = -(2.0 * std::f64::consts::E * d).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))
    } else {
        let l1 = (-z).ln();
        let l2 = (-l1).ln();
        if l1 < -1.5 {
            l1 - l2 + l2 / l1
        } else {
            -1.0 - (2.0 * std::f64::consts::E * d).sqrt()
        }
    };
    Ok(refine(z, init.min(-1.0)))
}

/// Halley iteration on `y e^y - z`, kept inside a bracket [lo, hi] with hi = -1.
fn refine(z: f64, init: f64) -> f64 {
    let g = |y: f64| y * y.exp() - z;
    let mut hi = -1.0_f64;
    let mut lo = init.min(-1.0);
    // g is decreasing on (-inf, -1]; g(lo) must be > 0
    let mut step = 1.0;
    while g(lo) <= 0.0 {
        lo -= step;
        step *= 2.0;
    }
    let mut y = init.clamp(lo, hi);
    for _ in 0..100 {
        let ey = y.exp();
        let f = y * ey - z;
        if f == 0.0 {
            return y;
        }
        if f > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let fp = ey * (y + 1.0);
        let mut next = if fp != 0.0 {
            y - f / (fp - (y + 2.0) * f / (2.0 * (y + 1.0)))
        } else {
            f64::NAN
        };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 4.0 * f64::EPSILON * y.abs() {
            return next;
        }
        y = next;
    }
    y
}

/// Threshold of the lemma with all inputs in log form: `ln_a = ln a`, `ln_c = ln c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaSolution {
    /// x* with a^x / x^b > c for x > x*.
    pub x_star: f64,
    /// The argument passed to W_{-1}.
    pub w_arg: f64,
    /// `ln(c^(1/b) b / ln a)`; the hypothesis is that this is >= 1.
    pub hypothesis_log: f64,
}

pub fn lemma_threshold_ln(ln_a: f64, b: f64, ln_c: f64) -> Result<LemmaSolution> {
    if !(ln_a > 0.0 && b > 0.0 && ln_c.is_finite()) {
        return Err(Error::InvalidParams("need a > 1, b > 0, c > 0".into()));
    }
    let hypothesis_log = ln_c / b + b.ln() - ln_a.ln();
    if hypothesis_log < 1.0 {
        return Err(Error::LemmaHypothesis {
            value: hypothesis_log.exp(),
        });
    }
    let w_arg = -(-hypothesis_log).exp();
    let w = lambert_w_m1(w_arg)?;
    Ok(LemmaSolution {
        x_star: -b * w / ln_a,
        w_arg,
        hypothesis_log,
    })
}

/// `x* = -b W_{-1}(-ln a / (c^(1/b) b)) / ln a`.
pub fn lemma_threshold(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 1.0 && c > 0.0) {
        return Err(Error::InvalidParams("need a > 1, b > 0, c > 0".into()));
    }
    Ok(lemma_threshold_ln(a.ln(), b, c.ln())?.x_star)
}
