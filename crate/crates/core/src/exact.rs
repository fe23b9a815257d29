//! Exact rational arithmetic for the rate formulas.
//!
//! Inputs are read as the shortest decimal that round-trips to the given
//! `f64` (what `Display` prints), so `0.1` means one tenth rather than the
//! nearest binary fraction. Floors and ceilings are then taken exactly.

use alloc::string::ToString;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

pub(crate) fn decimal(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::domain(alloc::format!("{x} is not a finite number")));
    }
    let text = x.to_string();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = alloc::format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits
        .parse()
        .map_err(|_| Error::domain(alloc::format!("cannot read {text} as a decimal")))?;
    if negative {
        numer = -numer;
    }
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(numer, denom))
}

pub(crate) fn ceil_natural(q: &BigRational) -> BigUint {
    let c = q.ceil().to_integer();
    c.to_biguint().unwrap_or_else(BigUint::zero)
}

pub(crate) fn floor_natural(q: &BigRational) -> BigUint {
    let f = q.floor().to_integer();
    f.to_biguint().unwrap_or_else(BigUint::zero)
}

pub(crate) fn rational(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn one() -> BigRational {
    BigRational::one()
}
