use serde::Serialize;

use crate::codes::ConjCode;
use crate::error::{Error, Result};
use crate::series::zeta;

const ZETA_TOL: f64 = 1e-12;

/// `Σ_l max{1, 2^{l−(A+1)}} p^l` in closed form, for `p < 1/2`.
fn census_series(payload_len: u32, p: f64) -> f64 {
    let top = p.powi(payload_len as i32 + 2);
    (1.0 - top) / (1.0 - p) + 2.0 * top / (1.0 - 2.0 * p)
}

/// Upper bound on `M_f(p) = sup_w Σ_{s ∈ L_w} p^{|s|}` for the code
/// `b(k) w(k) 2` with a payload of fixed length `A`, from the census
/// `a_l ≤ max{1, 2^{l−(A+1)}}`.
pub fn analytic_m(code: &ConjCode, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!("M needs p in (0, 1/2), got {p}")));
    }
    Ok(census_series(code.payload_len(), p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NBound {
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
}

/// Upper bound on `N_{f,μ}(c₂)` for the product zeta measure:
/// `Σ_{l≥0} max{1,2^{l−(A+1)}} c₂^{−l} 2^{−α(l−1)}` over
/// `Σ_{l≥A+1} 2^{l−(A+1)} 2^{−αl}`.
pub fn analytic_n(alpha: f64, payload_len: u32, c2: f64) -> Result<NBound> {
    if alpha <= 1.0 {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    let floor = 2f64.powf(1.0 - alpha);
    if !(c2 > floor && c2 < 1.0) {
        return Err(Error::Domain(format!("c2 must lie in ({floor}, 1), got {c2}")));
    }
    let decay = 2f64.powf(-alpha);
    let numerator = census_series(payload_len, decay / c2) / decay;
    let denominator = decay.powi(payload_len as i32 + 1) / (1.0 - floor);
    Ok(NBound { numerator, denominator, value: numerator / denominator })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryCheck {
    pub alpha: f64,
    pub payload_len: u32,
    pub zeta: f64,
    /// `2^{A+1}`; admissible iff `ζ(α)` exceeds it.
    pub threshold: f64,
    pub admissible: bool,
    /// `[max{2^{−α}, ζ^{−1/(A+1)}}, 1/2)`.
    pub c_range: Option<(f64, f64)>,
    /// `(max{c, 2^{1−α}}, 1)` at the chosen `c`.
    pub c2_range: Option<(f64, f64)>,
    /// Lower end of the `c` range.
    pub c: Option<f64>,
    /// Midpoint of the `c₂` range.
    pub c2: Option<f64>,
    pub m: Option<f64>,
    pub n: Option<NBound>,
    /// `K̃ = N(c₂) M(c)`.
    pub k_tilde: Option<f64>,
}

pub fn corollary_parameter_check(alpha: f64, payload_len: u32) -> Result<CorollaryCheck> {
    let z = zeta(alpha, ZETA_TOL)?.value;
    let threshold = 2f64.powi(payload_len as i32 + 1);
    let mut out = CorollaryCheck {
        alpha,
        payload_len,
        zeta: z,
        threshold,
        admissible: z > threshold,
        c_range: None,
        c2_range: None,
        c: None,
        c2: None,
        m: None,
        n: None,
        k_tilde: None,
    };
    if !out.admissible {
        return Ok(out);
    }
    let c = 2f64.powf(-alpha).max(z.powf(-1.0 / (payload_len as f64 + 1.0)));
    let c2_lo = c.max(2f64.powf(1.0 - alpha));
    let c2 = 0.5 * (c2_lo + 1.0);
    let m = analytic_m(&ConjCode::new(payload_len), c)?;
    let n = analytic_n(alpha, payload_len, c2)?;
    out.c_range = Some((c, 0.5));
    out.c2_range = Some((c2_lo, 1.0));
    out.c = Some(c);
    out.c2 = Some(c2);
    out.m = Some(m);
    out.n = Some(n);
    out.k_tilde = Some(n.value * m);
    Ok(out)
}
