use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};

use super::{Bound, PepMethod, PepResult};
use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_semi_infinite};
use crate::specfun::{erfcx, meijer_g_2212, meijer_g_3213, q_function, SeriesControl};

const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-10;

fn check_a(a: f64) -> Result<()> {
    if !(a >= 0.0) || a.is_infinite() {
        return Err(Error::arg(format!("PEP parameter a must be finite and >= 0, got {a}")));
    }
    Ok(())
}

/// Conditional PEP of the energy detector given the two effective channel
/// energies `xi = |h_j|^2` and `zeta = |h_k|^2`.
pub fn conditional_pep_gssk(
    xi: f64,
    zeta: f64,
    rho_prime: f64,
    power: f64,
    noise_var: f64,
    n_active: usize,
) -> Result<f64> {
    if !(xi >= 0.0 && zeta >= 0.0) {
        return Err(Error::arg("channel energies must be nonnegative"));
    }
    if !(noise_var > 0.0) {
        return Err(Error::arg("noise variance must be positive"));
    }
    let s = rho_prime * power;
    let spread = (noise_var * (2.0 * s * n_active as f64 + noise_var)).sqrt();
    Ok(q_function(0.5 * s * (xi - zeta).abs() / spread))
}

/// `a = rho' P n_t / (2 sigma sqrt(2 rho' P n_t + sigma^2))`, the single
/// parameter the averaged GSSK PEP depends on.
pub fn gssk_a_parameter(rho_prime: f64, power: f64, noise_var: f64, n_active: usize) -> Result<f64> {
    if !(noise_var > 0.0) {
        return Err(Error::arg("noise variance must be positive"));
    }
    let s = rho_prime * power * n_active as f64;
    Ok(s / (2.0 * noise_var.sqrt() * (2.0 * s + noise_var).sqrt()))
}

/// Averaged PEP `int int Q(a|x - y|) e^{-x-y} dx dy` by nested adaptive quadrature.
pub fn pep_gssk_quadrature(a: f64) -> Result<PepResult> {
    check_a(a)?;
    if a == 0.0 {
        return Ok(PepResult::plain(0.5, PepMethod::Quadrature));
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |x: f64| -> f64 {
        let below = integrate(|y| q_function(a * (x - y)) * (-y).exp(), 0.0, x, INNER_TOL);
        let above = integrate_semi_infinite(|y| q_function(a * (y - x)) * (-y).exp(), x, INNER_TOL);
        match (below, above) {
            (Ok(b), Ok(c)) => b + c,
            (Err(e), _) | (_, Err(e)) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let value = integrate_semi_infinite(|x| (-x).exp() * inner(x), 0.0, OUTER_TOL)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(PepResult::plain(value, PepMethod::Quadrature))
}

/// The same PEP through the Laplace reduction `int_0^inf Q(a u) e^{-u} du`,
/// evaluated by one-dimensional quadrature.
pub fn pep_gssk_laplace(a: f64) -> Result<PepResult> {
    check_a(a)?;
    if a == 0.0 {
        return Ok(PepResult::plain(0.5, PepMethod::Oracle1d));
    }
    let value = integrate_semi_infinite(|u| q_function(a * u) * (-u).exp(), 0.0, 1e-13)?;
    Ok(PepResult::plain(value, PepMethod::Oracle1d))
}

/// Integration-by-parts form of the Laplace reduction:
/// `1/2 - exp(1/(2a^2)) Q(1/a)`.
pub fn pep_gssk_laplace_closed(a: f64) -> f64 {
    0.5 - 0.5 * erfcx(1.0 / (SQRT_2 * a))
}

/// Meijer-G series form of the averaged PEP:
/// `1/2 [1 - a/(sqrt(2) pi) (G21(2a^2) + 1/4 sum_k G32_k(a^2/2) / k!)]`.
pub fn pep_gssk_closed_form(a: f64, ctrl: SeriesControl) -> Result<PepResult> {
    check_a(a)?;
    if ctrl.max_terms == 0 || !(ctrl.abs_tol > 0.0) {
        return Err(Error::arg("series control needs max_terms >= 1 and abs_tol > 0"));
    }
    if a == 0.0 {
        return Ok(PepResult::plain(0.5, PepMethod::ClosedForm));
    }
    let c = a / (SQRT_2 * PI);
    let lead = meijer_g_2212(2.0 * a * a)?;
    let z = 0.5 * a * a;
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    let mut last = f64::NAN;
    let mut terms = 0;
    let mut ln_fact = 0.0;
    for k in 0..ctrl.max_terms {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let t = 0.125 * c * meijer_g_3213(z, k)? / ln_fact.exp();
        sum += t;
        prev = last;
        last = t;
        terms = k + 1;
        if t.abs() < ctrl.abs_tol {
            break;
        }
    }
    let tail = if last.abs() < ctrl.abs_tol || terms < 2 {
        last.abs()
    } else {
        let ratio = (last / prev).abs();
        if !ratio.is_finite() || ratio >= 1.0 {
            return Err(Error::SeriesNotConverged {
                terms,
                residual: last.abs(),
            });
        }
        last.abs() * ratio / (1.0 - ratio)
    };
    let value = 0.5 - 0.5 * c * lead - sum;
    if !value.is_finite() {
        return Err(Error::Numerical(format!("closed-form PEP is not finite at a = {a}")));
    }
    Ok(PepResult {
        value,
        method: PepMethod::ClosedForm,
        terms_used: terms,
        tail_estimate: tail,
    })
}

/// Union bound `(1/M) sum_j sum_{k != j} M(j,k) * pep`, reported raw and
/// clamped to `[0, 1/2]`.
pub fn union_bound_gssk(codebook: &Codebook, pep: f64) -> Bound {
    let raw = pep * codebook.total_pair_weight() as f64 / codebook.len() as f64;
    Bound::clamp_to(raw, 0.5)
}
