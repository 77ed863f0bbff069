//! Index domains and their points.
//!
//! A domain is a finite tree: the naturals, a product `ℕ × D` carrying the
//! canonical block partition `K_n = {n} × D`, or the rationals. Every set
//! expression, ideal expression and simple sequence is typed by exactly one
//! domain, and cross-domain operations are rejected.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::rat::{rat_to_string, Rat};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Domain {
    Nat,
    /// `ℕ × inner`, partitioned into columns by the first coordinate.
    Prod(Box<Domain>),
    Rat,
}

impl Domain {
    pub fn prod(inner: Domain) -> Domain {
        Domain::Prod(Box::new(inner))
    }

    /// ℕ × ℕ, the domain of Fubini products of ideals on ℕ.
    pub fn nat_pairs() -> Domain {
        Domain::prod(Domain::Nat)
    }

    pub fn inner(&self) -> Option<&Domain> {
        match self {
            Domain::Prod(d) => Some(d),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Domain::Nat | Domain::Rat => 1,
            Domain::Prod(d) => 1 + d.depth(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Nat => write!(f, "N"),
            Domain::Rat => write!(f, "Q"),
            Domain::Prod(d) => write!(f, "(N*{d})"),
        }
    }
}

/// A point of some domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Nat(u64),
    Pair(u64, Box<Point>),
    Rat(Rat),
}

impl Point {
    pub fn pair(n: u64, p: Point) -> Point {
        Point::Pair(n, Box::new(p))
    }

    pub fn rational(q: BigRational) -> Point {
        Point::Rat(q)
    }

    pub fn domain(&self) -> Domain {
        match self {
            Point::Nat(_) => Domain::Nat,
            Point::Pair(_, p) => Domain::prod(p.domain()),
            Point::Rat(_) => Domain::Rat,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Point::Nat(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Nat(n) => write!(f, "{n}"),
            Point::Pair(n, p) => write!(f, "({n},{p})"),
            Point::Rat(q) => write!(f, "{}", rat_to_string(q)),
        }
    }
}

/// The fixed total enumeration of a domain: identity on ℕ, Cantor-pairing
/// order on products, and the diagonal enumeration of reduced fractions on ℚ.
/// Yields every point exactly once.
pub struct DomainEnum {
    domain: Domain,
    next_raw: u64,
    // Memoized prefix of the inner enumeration, for products.
    inner_cache: Option<(Box<DomainEnum>, Vec<Point>)>,
}

impl DomainEnum {
    pub fn new(domain: Domain) -> DomainEnum {
        let inner_cache = domain
            .inner()
            .map(|d| (Box::new(DomainEnum::new(d.clone())), Vec::new()));
        DomainEnum {
            domain,
            next_raw: 0,
            inner_cache,
        }
    }

    fn inner_point(&mut self, idx: u64) -> Point {
        let (it, cache) = self.inner_cache.as_mut().expect("product domain");
        while (cache.len() as u64) <= idx {
            cache.push(it.next().expect("domains are infinite"));
        }
        cache[idx as usize].clone()
    }
}

impl Iterator for DomainEnum {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        loop {
            let k = self.next_raw;
            self.next_raw += 1;
            match &self.domain {
                Domain::Nat => return Some(Point::Nat(k)),
                Domain::Prod(_) => {
                    let (a, b) = crate::pairing::unpair(k);
                    let p = self.inner_point(b);
                    return Some(Point::pair(a, p));
                }
                Domain::Rat => {
                    if k == 0 {
                        return Some(Point::Rat(Rat::from_integer(0.into())));
                    }
                    let (i, j) = crate::pairing::unpair(k - 1);
                    // i enumerates nonzero integers 1, -1, 2, -2, ...
                    let num: i64 = if i % 2 == 0 {
                        (i / 2) as i64 + 1
                    } else {
                        -((i / 2) as i64 + 1)
                    };
                    let den = j + 1;
                    let q = Rat::new(num.into(), (den as i64).into());
                    // Skip representations that reduce: each rational must
                    // appear exactly once.
                    if q.numer().abs() == num.abs().into() {
                        return Some(Point::Rat(q));
                    }
                }
            }
        }
    }
}

/// First `n` points of the fixed enumeration of `domain`.
pub fn enumerate_domain(domain: &Domain, n: usize) -> Vec<Point> {
    DomainEnum::new(domain.clone()).take(n).collect()
}
