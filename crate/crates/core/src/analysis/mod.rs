//! Closed-form and numerical performance expressions: GSSK pairwise error
//! probabilities and union bounds, NOMA error bounds, overall BER composition
//! and achievable rates.

mod curves;
mod gssk;
mod noma;
mod rates;

pub use curves::{format_value, CurveRow, CurveTable, CSV_HEADER};
pub use gssk::{
    conditional_pep_gssk, gssk_a_parameter, pep_gssk_closed_form, pep_gssk_laplace,
    pep_gssk_laplace_closed, pep_gssk_quadrature, union_bound_gssk,
};
pub use noma::{
    ber_bound_noma_user, ber_overall, pep_noma_first_user, pep_noma_mth_user, OverallBer,
    SicResidue,
};
pub use rates::{rate_gssk, rate_noma_user, sum_rate_ngssk, SumRate};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PepMethod {
    Conditional,
    Quadrature,
    ClosedForm,
    Oracle1d,
}

impl fmt::Display for PepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PepMethod::Conditional => "conditional",
            PepMethod::Quadrature => "quadrature",
            PepMethod::ClosedForm => "closed_form",
            PepMethod::Oracle1d => "oracle_1d",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PepResult {
    pub value: f64,
    pub method: PepMethod,
    /// Series terms summed (closed form only; 0 otherwise).
    pub terms_used: usize,
    /// Estimated magnitude of the neglected series tail.
    pub tail_estimate: f64,
}

impl PepResult {
    fn plain(value: f64, method: PepMethod) -> Self {
        PepResult {
            value,
            method,
            terms_used: 0,
            tail_estimate: 0.0,
        }
    }
}

/// A probability bound reported both as computed and clamped to a valid range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub raw: f64,
    pub clamped: f64,
}

impl Bound {
    pub fn clamp_to(raw: f64, max: f64) -> Self {
        Bound {
            raw,
            clamped: raw.clamp(0.0, max),
        }
    }
}
