use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{ceil_natural, decimal, floor_natural, one, rational};

/// Largest `k_b(ε)` for which `2^k` is materialized.
pub const MAX_RATE_EXPONENT: u64 = 1 << 20;

fn positive(name: &str, x: f64) -> Result<BigRational> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(alloc::format!("{name} = {x} must be positive and finite")));
    }
    decimal(x)
}

/// `k_b(ε) = ⌈2b/ε⌉`.
pub fn rate_k_b(b: f64, eps: f64) -> Result<BigUint> {
    let (b, eps) = (positive("b", b)?, positive("eps", eps)?);
    Ok(ceil_natural(&(rational(2) * b / eps)))
}

/// `Φ_b(ε) = k·⌈2b(1 + 2^k)/ε⌉ + 1` with `k = k_b(ε)`.
pub fn rate_phi_b(b: f64, eps: f64) -> Result<BigUint> {
    let k = rate_k_b(b, eps)?;
    let exponent = k
        .to_u64()
        .filter(|&e| e <= MAX_RATE_EXPONENT)
        .ok_or_else(|| Error::Overflow(alloc::format!("2^{k} exceeds the supported exponent {MAX_RATE_EXPONENT}")))?;
    let (b, eps) = (decimal(b)?, decimal(eps)?);
    let power = BigRational::from_integer((BigUint::from(1u32) << exponent).into());
    let inner = ceil_natural(&(rational(2) * b * (one() + power) / eps));
    Ok(k * inner + 1u32)
}

/// `⌊64M²b / (ε⁴λ(1-λ))⌋ + 2`.
pub fn rate_avg_proj(m: f64, b: f64, eps: f64, lambda: f64) -> Result<BigUint> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(alloc::format!("lambda {lambda} must lie strictly inside (0, 1)")));
    }
    let (m, b, eps, lambda) = (positive("M", m)?, positive("b", b)?, positive("eps", eps)?, decimal(lambda)?);
    let weight = lambda.clone() * (one() - lambda);
    let e2 = eps.clone() * eps;
    let q = rational(64) * m.clone() * m * b / (e2.clone() * e2 * weight);
    Ok(floor_natural(&q) + 2u32)
}

/// `⌊4M²b / ε²⌋ + 2`.
pub fn rate_comp_proj(m: f64, b: f64, eps: f64) -> Result<BigUint> {
    let (m, b, eps) = (positive("M", m)?, positive("b", b)?, positive("eps", eps)?);
    let q = rational(4) * m.clone() * m * b / (eps.clone() * eps);
    Ok(floor_natural(&q) + 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn k_b_values() {
        assert_eq!(rate_k_b(1.0, 1.0).unwrap(), n(2));
        assert_eq!(rate_k_b(1.0, 0.5).unwrap(), n(4));
        assert_eq!(rate_k_b(0.3, 0.3).unwrap(), n(2));
        assert_eq!(rate_k_b(0.1, 0.1).unwrap(), n(2));
    }

    #[test]
    fn phi_b_values() {
        // k=2: 2*ceil(2*(1+4)/1)+1
        assert_eq!(rate_phi_b(1.0, 1.0).unwrap(), n(21));
        // k=4: 4*ceil(2*17/0.5)+1
        assert_eq!(rate_phi_b(1.0, 0.5).unwrap(), n(273));
        // k=1: 1*ceil(1*3/1)+1
        assert_eq!(rate_phi_b(0.5, 1.0).unwrap(), n(4));
    }

    #[test]
    fn phi_b_exceeds_u64_without_overflow() {
        // k = 700, so 2^700 dominates
        let phi = rate_phi_b(3.5, 0.01).unwrap();
        assert!(phi.bits() > 700);
        assert!(phi.to_u64().is_none());
    }

    #[test]
    fn phi_b_reports_overflow_for_huge_exponents() {
        assert!(matches!(rate_phi_b(1e6, 1e-3), Err(Error::Overflow(_))));
    }

    #[test]
    fn avg_proj_values() {
        assert_eq!(rate_avg_proj(1.0, 1.0, 1.0, 0.5).unwrap(), n(258));
        assert_eq!(rate_avg_proj(1.0, 1.0, 0.5, 0.5).unwrap(), n(4098));
        assert_eq!(rate_avg_proj(1.0, 1.0, 1.0, 0.25).unwrap(), n(343));
        assert!(rate_avg_proj(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(rate_avg_proj(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn comp_proj_values() {
        assert_eq!(rate_comp_proj(1.0, 1.0, 1.0).unwrap(), n(6));
        assert_eq!(rate_comp_proj(2.0, 1.0, 1.0).unwrap(), n(18));
        assert_eq!(rate_comp_proj(1.0, 1.0, 0.1).unwrap(), n(402));
    }

    #[test]
    fn nonpositive_inputs_are_rejected() {
        assert!(rate_k_b(0.0, 1.0).is_err());
        assert!(rate_k_b(1.0, -1.0).is_err());
        assert!(rate_phi_b(f64::INFINITY, 1.0).is_err());
        assert!(rate_comp_proj(1.0, 0.0, 1.0).is_err());
    }
}
