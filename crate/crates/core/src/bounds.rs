//! Explicit irreducibility bounds: N_d, the two case inequalities, Omega,
//! and the threshold C obtained from the lower Lambert W branch.
//!
//! Every logarithm named `log_*` here is base q unless its name says `ln`.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lambert::lemma_threshold_ln;

/// Which integer enters the exponent `10 (x + 1)^7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpBase {
    D,
    R,
}

impl ExpBase {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpBase::D => "d",
            ExpBase::R => "r",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub q: u64,
    pub d: u64,
    pub r: u64,
    pub h: BigRational,
    pub h_g: BigRational,
    /// log_q c_2.
    pub log_c2: f64,
    pub exp_base: ExpBase,
}

impl BoundParams {
    pub fn new(q: u64, d: u64, r: u64, h: BigRational, h_g: BigRational) -> Self {
        BoundParams {
            q,
            d,
            r,
            h,
            h_g,
            log_c2: 0.0,
            exp_base: ExpBase::D,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.d < 1 || self.r < 2 {
            return Err(Error::InvalidParams("need q >= 2, d >= 1, r >= 2".into()));
        }
        if !self.log_c2.is_finite() {
            return Err(Error::InvalidParams("log_c2 must be finite".into()));
        }
        if self.h < BigRational::default() || self.h_g < BigRational::default() {
            return Err(Error::InvalidParams("heights must be nonnegative".into()));
        }
        Ok(())
    }

    fn ln_q(&self) -> f64 {
        (self.q as f64).ln()
    }

    fn log_q(&self, x: f64) -> f64 {
        x.ln() / self.ln_q()
    }

    fn n_d(&self) -> f64 {
        n_d(self.d) as f64
    }
}

/// `10 (d + 1)^7`.
pub fn n_d(d: u64) -> u128 {
    10 * (d as u128 + 1).pow(7)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// log_q of `c_2 (d h)^(10 (e + 1)^7)` with e = d or r; `d h` is clamped below at 1.
pub fn dd_log_degree_bound(p: &BoundParams, h: &BigRational) -> f64 {
    let e = match p.exp_base {
        ExpBase::D => p.d,
        ExpBase::R => p.r,
    };
    p.log_c2 + n_d(e) as f64 * p.log_q((p.d as f64 * to_f64(h)).max(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseVerdict {
    pub deg_ell: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// LHS <= RHS: this case is not excluded.
    pub holds: bool,
}

/// `h_G + 1 + q/(q-1) - q^r/(q^r-1)`, i.e. `h_G + 1 + 1/(q-1) - 1/(q^r-1)`.
fn ineq1_log_argument(p: &BoundParams) -> f64 {
    let q = p.q as f64;
    to_f64(&p.h_g) + 1.0 + 1.0 / (q - 1.0) - 1.0 / (q.powi(p.r as i32) - 1.0)
}

/// Right side of the case-1 inequality.
pub fn ineq1_rhs(p: &BoundParams) -> f64 {
    p.log_c2
        + p.n_d()
            * (p.log_q(p.d as f64) + p.r as f64 + p.log_q(ineq1_log_argument(p).max(1.0)))
}

/// Right side of the case-2 inequality, read as `log_q(d h)`.
pub fn ineq2_rhs(p: &BoundParams) -> f64 {
    p.log_c2 + p.n_d() * p.log_q((p.d as f64 * to_f64(&p.h)).max(1.0))
}

/// Right side of the case-2 inequality, read as `log_q(d) * h`.
pub fn ineq2_rhs_alt(p: &BoundParams) -> f64 {
    p.log_c2 + p.n_d() * p.log_q(p.d as f64) * to_f64(&p.h)
}

pub fn ineq1_holds(deg_ell: u64, p: &BoundParams) -> Result<CaseVerdict> {
    if deg_ell == 0 {
        return Err(Error::InvalidParams("deg ell must be at least 1".into()));
    }
    let lhs = deg_ell as f64 - p.n_d() * p.log_q(deg_ell as f64);
    let rhs = ineq1_rhs(p);
    Ok(CaseVerdict {
        deg_ell,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

pub fn ineq2_holds(deg_ell: u64, p: &BoundParams) -> Result<CaseVerdict> {
    if deg_ell == 0 {
        return Err(Error::InvalidParams("deg ell must be at least 1".into()));
    }
    let rhs = ineq2_rhs(p);
    let lhs = deg_ell as f64;
    Ok(CaseVerdict {
        deg_ell,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

pub fn omega_phi(p: &BoundParams) -> f64 {
    ineq1_rhs(p).max(ineq2_rhs(p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n_d: u128,
    /// Omega, base q.
    pub omega: f64,
    pub ineq1_rhs: f64,
    pub ineq2_rhs: f64,
    pub ineq2_rhs_alt: f64,
    /// C solving q^x / x^(N_d) = q^Omega.
    pub c_threshold: f64,
    pub threshold: f64,
    /// Argument given to W_{-1}.
    pub lambert_arg: f64,
    pub cases: Vec<(CaseVerdict, CaseVerdict)>,
}

/// `C = lemma_threshold(q, N_d, q^Omega)` and `threshold = max(C, Omega)`, with case
/// verdicts for each requested degree.
pub fn irreducibility_threshold(p: &BoundParams, degs: &[u64]) -> Result<BoundReport> {
    p.validate()?;
    let omega = omega_phi(p);
    let sol = lemma_threshold_ln(p.ln_q(), p.n_d(), omega * p.ln_q())?;
    let cases = degs
        .iter()
        .map(|&d| Ok((ineq1_holds(d, p)?, ineq2_holds(d, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        n_d: n_d(p.d),
        omega,
        ineq1_rhs: ineq1_rhs(p),
        ineq2_rhs: ineq2_rhs(p),
        ineq2_rhs_alt: ineq2_rhs_alt(p),
        c_threshold: sol.x_star,
        threshold: sol.x_star.max(omega),
        lambert_arg: sol.w_arg,
        cases,
    })
}
