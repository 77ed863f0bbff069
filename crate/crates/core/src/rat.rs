//! Exact rational scalars. All norms, limsups and quotient norms are computed
//! in `BigRational`; nothing in the crate touches floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

/// Canonical textual form: `p` for integers, `p/q` otherwise.
pub fn rat_to_string(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when `q` is a positive integer, returning it.
pub fn as_positive_integer(q: &Rat) -> Option<BigInt> {
    if q.is_integer() && q.is_positive() {
        Some(q.numer().clone())
    } else {
        None
    }
}
