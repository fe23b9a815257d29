//! Picard iteration, explicit rates of asymptotic regularity, and
//! certificates checking recorded traces against those rates.

mod certify;
mod picard;
mod rates;

pub use certify::{
    certify_asymptotic_regularity, certify_best_approx_rate, certify_comp_proj_rate, certify_values, BestApproxParams,
    CompProjParams, RateCertificate, Verdict, AUX_SLACK, RESIDUAL_SLACK,
};
pub use picard::{picard, IterationTrace, Picard};
pub use rates::{rate_avg_proj, rate_comp_proj, rate_k_b, rate_phi_b, MAX_RATE_EXPONENT};
