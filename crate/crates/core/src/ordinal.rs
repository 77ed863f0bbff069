//! Ordinals below ω^ω in Cantor normal form: a strictly decreasing list of
//! (exponent, coefficient) terms with positive coefficients. Comparison is
//! lexicographic on that list.

use std::fmt;

use crate::error::{Error, Result};

/// Expansion guard: catalog recursion depth grows with the exponents and
/// coefficients, so absurdly large ordinals are rejected up front.
pub const MAX_EXPONENT: u32 = 6;
pub const MAX_COEFF: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdinalCnf {
    /// (exponent, coefficient), exponents strictly decreasing, coefficients ≥ 1.
    terms: Vec<(u32, u64)>,
}

impl OrdinalCnf {
    pub fn zero() -> OrdinalCnf {
        OrdinalCnf { terms: vec![] }
    }

    pub fn finite(n: u64) -> OrdinalCnf {
        if n == 0 {
            OrdinalCnf::zero()
        } else {
            OrdinalCnf {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> OrdinalCnf {
        OrdinalCnf {
            terms: vec![(1, 1)],
        }
    }

    /// Build from (exponent, coefficient) terms, validating CNF order.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<OrdinalCnf> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::ValidationError(
                    "ordinal terms must have strictly decreasing exponents".into(),
                ));
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(Error::ValidationError(
                "ordinal coefficients must be >= 1".into(),
            ));
        }
        Ok(OrdinalCnf { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            None => false,
            Some((exp, _)) => *exp > 0,
        }
    }

    /// For a successor ordinal, the predecessor.
    pub fn predecessor(&self) -> Option<OrdinalCnf> {
        let (exp, coeff) = *self.terms.last()?;
        if exp != 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        if coeff == 1 {
            terms.pop();
        } else {
            terms.last_mut().unwrap().1 -= 1;
        }
        Some(OrdinalCnf { terms })
    }

    pub fn successor(&self) -> OrdinalCnf {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        OrdinalCnf { terms }
    }

    /// The frozen fundamental sequence at a limit ordinal
    /// α = β + ω^(k+1): υ_n = β + ω^k·(n+1).
    pub fn fundamental(&self, n: u64) -> Option<OrdinalCnf> {
        let (exp, coeff) = *self.terms.last()?;
        if exp == 0 {
            return None;
        }
        // β: α with the last term's coefficient decremented.
        let mut beta = self.terms.clone();
        if coeff == 1 {
            beta.pop();
        } else {
            beta.last_mut().unwrap().1 -= 1;
        }
        // β + ω^(exp-1)·(n+1); exponent exp-1 is strictly below β's tail.
        let mut terms = beta;
        terms.push((exp - 1, n + 1));
        Some(OrdinalCnf { terms })
    }

    pub fn check_expandable(&self) -> Result<()> {
        for (exp, coeff) in &self.terms {
            if *exp > MAX_EXPONENT || *coeff > MAX_COEFF {
                return Err(Error::OrdinalOutOfRange(self.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for OrdinalCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (exp, coeff) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_validation() {
        assert!(OrdinalCnf::from_terms(vec![(2, 1), (1, 3), (0, 4)]).is_ok());
        assert!(OrdinalCnf::from_terms(vec![(1, 1), (1, 1)]).is_err());
        assert!(OrdinalCnf::from_terms(vec![(0, 1), (1, 1)]).is_err());
        assert!(OrdinalCnf::from_terms(vec![(1, 0)]).is_err());
    }

    #[test]
    fn limit_and_successor_structure() {
        let omega = OrdinalCnf::omega();
        assert!(omega.is_limit());
        assert!(!OrdinalCnf::finite(3).is_limit());
        assert_eq!(
            OrdinalCnf::finite(3).predecessor(),
            Some(OrdinalCnf::finite(2))
        );
        assert_eq!(omega.predecessor(), None);
        assert_eq!(OrdinalCnf::finite(2).successor(), OrdinalCnf::finite(3));
        let omega_plus_1 = omega.successor();
        assert_eq!(omega_plus_1.predecessor(), Some(omega.clone()));
    }

    #[test]
    fn fundamental_sequence_is_frozen() {
        // υ_n(ω) = n+1
        let omega = OrdinalCnf::omega();
        assert_eq!(omega.fundamental(0), Some(OrdinalCnf::finite(1)));
        assert_eq!(omega.fundamental(4), Some(OrdinalCnf::finite(5)));
        // υ_n(ω·2) = ω + (n+1)
        let omega2 = OrdinalCnf::from_terms(vec![(1, 2)]).unwrap();
        assert_eq!(
            omega2.fundamental(1),
            Some(OrdinalCnf::from_terms(vec![(1, 1), (0, 2)]).unwrap())
        );
        // υ_n(ω²) = ω·(n+1)
        let omega_sq = OrdinalCnf::from_terms(vec![(2, 1)]).unwrap();
        assert_eq!(
            omega_sq.fundamental(2),
            Some(OrdinalCnf::from_terms(vec![(1, 3)]).unwrap())
        );
    }

    #[test]
    fn ordering_is_lexicographic() {
        let w = OrdinalCnf::omega();
        let w1 = w.successor();
        let w2 = OrdinalCnf::from_terms(vec![(2, 1)]).unwrap();
        assert!(OrdinalCnf::zero() < OrdinalCnf::finite(5));
        assert!(OrdinalCnf::finite(5) < w);
        assert!(w < w1);
        assert!(w1 < w2);
    }

    #[test]
    fn display_matches_literal_syntax() {
        assert_eq!(OrdinalCnf::zero().to_string(), "0");
        assert_eq!(OrdinalCnf::omega().to_string(), "w");
        let a = OrdinalCnf::from_terms(vec![(2, 3), (1, 1), (0, 1)]).unwrap();
        assert_eq!(a.to_string(), "w^2*3+w+1");
    }
}
