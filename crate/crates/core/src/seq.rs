//! Exact-rational simple functions: finitely many rational coefficients on
//! pairwise disjoint symbolic regions, zero elsewhere. These are the dense
//! subspace through which all of c₀,ᵢ is exercised.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::rat::{rat_zero, Rat};
use crate::set_expr::SetExpr;
use crate::set_ops;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleSeq {
    domain: Domain,
    /// (coefficient ≠ 0, region); regions pairwise disjoint and nonempty,
    /// sorted by region for a canonical form.
    terms: Vec<(Rat, SetExpr)>,
}

impl SimpleSeq {
    pub fn new(domain: Domain, terms: Vec<(Rat, SetExpr)>) -> Result<SimpleSeq> {
        for (c, r) in &terms {
            if r.domain() != &domain {
                return Err(Error::domain_mismatch(&domain, r.domain()));
            }
            if c.is_zero() {
                return Err(Error::ValidationError("zero coefficient".into()));
            }
            if r.is_empty() {
                return Err(Error::ValidationError("empty region".into()));
            }
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                let meet = set_ops::intersect(&terms[i].1, &terms[j].1)?;
                if !meet.is_empty() {
                    return Err(Error::ValidationError(format!(
                        "regions overlap: {} and {}",
                        terms[i].1, terms[j].1
                    )));
                }
            }
        }
        let mut terms = terms;
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(SimpleSeq { domain, terms })
    }

    /// Internal constructor for terms already known disjoint.
    pub(crate) fn from_disjoint(domain: Domain, mut terms: Vec<(Rat, SetExpr)>) -> SimpleSeq {
        terms.retain(|(c, r)| !c.is_zero() && !r.is_empty());
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        SimpleSeq { domain, terms }
    }

    pub fn zero(domain: Domain) -> SimpleSeq {
        SimpleSeq {
            domain,
            terms: vec![],
        }
    }

    /// The indicator χ_A.
    pub fn char_fn(a: &SetExpr) -> SimpleSeq {
        if a.is_empty() {
            SimpleSeq::zero(a.domain().clone())
        } else {
            SimpleSeq {
                domain: a.domain().clone(),
                terms: vec![(Rat::from_integer(1.into()), a.clone())],
            }
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn terms(&self) -> &[(Rat, SetExpr)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of the regions.
    pub fn support(&self) -> SetExpr {
        SetExpr::union_of(
            self.terms.iter().map(|(_, r)| r.clone()).collect(),
            &self.domain,
        )
        .expect("same domain")
    }

    /// max |coefficient|, 0 for the zero sequence; exact.
    pub fn sup_norm(&self) -> Rat {
        self.terms
            .iter()
            .map(|(c, _)| c.abs())
            .max()
            .unwrap_or_else(rat_zero)
    }

    /// A(ε, x) = {n : |x_n| ≥ ε}, ε > 0; exact, as a set expression.
    pub fn level_set(&self, eps: &Rat) -> Result<SetExpr> {
        if !eps.is_positive() {
            return Err(Error::NonpositiveEpsilon);
        }
        let regions = self
            .terms
            .iter()
            .filter(|(c, _)| &c.abs() >= eps)
            .map(|(_, r)| r.clone())
            .collect();
        SetExpr::union_of(regions, &self.domain)
    }

    pub fn value_at(&self, p: &Point) -> Result<Rat> {
        for (c, r) in &self.terms {
            if r.contains(p)? {
                return Ok(c.clone());
            }
        }
        Ok(rat_zero())
    }

    /// Distinct absolute values of the nonzero coefficients, descending.
    pub fn abs_levels(&self) -> Vec<Rat> {
        let mut levels: Vec<Rat> = self.terms.iter().map(|(c, _)| c.abs()).collect();
        levels.sort();
        levels.dedup();
        levels.reverse();
        levels
    }

    /// Distinct values taken by the sequence on its support, descending.
    pub fn values_desc(&self) -> Vec<Rat> {
        let mut vals: Vec<Rat> = self.terms.iter().map(|(c, _)| c.clone()).collect();
        vals.sort();
        vals.dedup();
        vals.reverse();
        vals
    }

    pub fn scale(&self, c: &Rat) -> SimpleSeq {
        if c.is_zero() {
            return SimpleSeq::zero(self.domain.clone());
        }
        SimpleSeq {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(k, r)| (k * c, r.clone())).collect(),
        }
    }

    pub fn abs(&self) -> SimpleSeq {
        SimpleSeq {
            domain: self.domain.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, r)| (k.abs(), r.clone()))
                .collect(),
        }
    }

    pub fn negate(&self) -> SimpleSeq {
        self.scale(&Rat::from_integer((-1).into()))
    }

    /// Restrict to a set: x · χ_A.
    pub fn restrict(&self, a: &SetExpr) -> Result<SimpleSeq> {
        let mut terms = Vec::new();
        for (c, r) in &self.terms {
            let piece = set_ops::intersect(r, a)?;
            if !piece.is_empty() {
                terms.push((c.clone(), piece));
            }
        }
        Ok(SimpleSeq::from_disjoint(self.domain.clone(), terms))
    }
}

impl fmt::Display for SimpleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_seq(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Add,
    /// Pointwise minimum.
    Meet,
    /// Pointwise maximum.
    JoinLat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp<'a> {
    Scale(&'a Rat),
    Abs,
}

/// One cell of the common refinement of two simple sequences: the region and
/// the two coefficients on it (either may be zero where only one sequence is
/// supported).
pub fn refine(x: &SimpleSeq, y: &SimpleSeq) -> Result<Vec<(Rat, Rat, SetExpr)>> {
    if x.domain() != y.domain() {
        return Err(Error::domain_mismatch(x.domain(), y.domain()));
    }
    let mut cells = Vec::new();
    for (cx, rx) in x.terms() {
        for (cy, ry) in y.terms() {
            let cell = set_ops::intersect(rx, ry)?;
            if !cell.is_empty() {
                cells.push((cx.clone(), cy.clone(), cell));
            }
        }
    }
    let supp_y = y.support();
    for (cx, rx) in x.terms() {
        let rest = set_ops::difference(rx, &supp_y)
            .ok_or_else(|| Error::RefinementNotClosed(format!("{rx} minus {supp_y}")))?;
        if !rest.is_empty() {
            cells.push((cx.clone(), rat_zero(), rest));
        }
    }
    let supp_x = x.support();
    for (cy, ry) in y.terms() {
        let rest = set_ops::difference(ry, &supp_x)
            .ok_or_else(|| Error::RefinementNotClosed(format!("{ry} minus {supp_x}")))?;
        if !rest.is_empty() {
            cells.push((rat_zero(), cy.clone(), rest));
        }
    }
    Ok(cells)
}

/// Pointwise combination on the common refinement. Cells where only one
/// sequence is supported are materialized only when the operation gives
/// them a nonzero value, so meets of nonnegative sequences never need a
/// set difference.
pub fn combine(op: LatticeOp, x: &SimpleSeq, y: &SimpleSeq) -> Result<SimpleSeq> {
    if x.domain() != y.domain() {
        return Err(Error::domain_mismatch(x.domain(), y.domain()));
    }
    let apply = |cx: &Rat, cy: &Rat| -> Rat {
        match op {
            LatticeOp::Add => cx + cy,
            LatticeOp::Meet => cx.clone().min(cy.clone()),
            LatticeOp::JoinLat => cx.clone().max(cy.clone()),
        }
    };
    let zero = rat_zero();
    let mut terms = Vec::new();
    for (cx, rx) in x.terms() {
        for (cy, ry) in y.terms() {
            let cell = set_ops::intersect(rx, ry)?;
            if !cell.is_empty() {
                let c = apply(cx, cy);
                if !c.is_zero() {
                    terms.push((c, cell));
                }
            }
        }
    }
    let supp_y = y.support();
    for (cx, rx) in x.terms() {
        let c = apply(cx, &zero);
        if c.is_zero() {
            continue;
        }
        let rest = set_ops::difference(rx, &supp_y)
            .ok_or_else(|| Error::RefinementNotClosed(format!("{rx} minus {supp_y}")))?;
        if !rest.is_empty() {
            terms.push((c, rest));
        }
    }
    let supp_x = x.support();
    for (cy, ry) in y.terms() {
        let c = apply(&zero, cy);
        if c.is_zero() {
            continue;
        }
        let rest = set_ops::difference(ry, &supp_x)
            .ok_or_else(|| Error::RefinementNotClosed(format!("{ry} minus {supp_x}")))?;
        if !rest.is_empty() {
            terms.push((c, rest));
        }
    }
    Ok(SimpleSeq::from_disjoint(x.domain().clone(), terms))
}

pub fn map_scalar(op: ScalarOp<'_>, x: &SimpleSeq) -> SimpleSeq {
    match op {
        ScalarOp::Scale(c) => x.scale(c),
        ScalarOp::Abs => x.abs(),
    }
}

/// Simple functions with vector coefficients in ℚ^d, carrying the max-norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecSimpleSeq {
    domain: Domain,
    dim: usize,
    terms: Vec<(Vec<Rat>, SetExpr)>,
}

impl VecSimpleSeq {
    pub fn zero(domain: Domain, dim: usize) -> VecSimpleSeq {
        VecSimpleSeq {
            domain,
            dim,
            terms: vec![],
        }
    }

    pub fn new(
        domain: Domain,
        dim: usize,
        terms: Vec<(Vec<Rat>, SetExpr)>,
    ) -> Result<VecSimpleSeq> {
        for (v, r) in &terms {
            if v.len() != dim {
                return Err(Error::ValidationError(
                    "coefficient dimension mismatch".into(),
                ));
            }
            if r.domain() != &domain {
                return Err(Error::domain_mismatch(&domain, r.domain()));
            }
            if v.iter().all(|c| c.is_zero()) || r.is_empty() {
                return Err(Error::ValidationError("degenerate vector term".into()));
            }
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                if !set_ops::intersect(&terms[i].1, &terms[j].1)?.is_empty() {
                    return Err(Error::ValidationError("vector regions overlap".into()));
                }
            }
        }
        let mut terms = terms;
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(VecSimpleSeq { domain, dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<Rat>, SetExpr)] {
        &self.terms
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// sup over points of the max-norm of the value.
    pub fn sup_norm(&self) -> Rat {
        self.terms
            .iter()
            .map(|(v, _)| v.iter().map(|c| c.abs()).max().unwrap_or_else(rat_zero))
            .max()
            .unwrap_or_else(rat_zero)
    }

    /// x + c·y with scalar regions refined in.
    pub fn add_scaled(&self, x: &SimpleSeq, y: &[Rat]) -> Result<VecSimpleSeq> {
        if y.len() != self.dim {
            return Err(Error::ValidationError("vector dimension mismatch".into()));
        }
        if x.domain() != &self.domain {
            return Err(Error::domain_mismatch(&self.domain, x.domain()));
        }
        let mut terms: Vec<(Vec<Rat>, SetExpr)> = Vec::new();
        // Refine the two region systems.
        for (v, rv) in &self.terms {
            for (c, rx) in x.terms() {
                let cell = set_ops::intersect(rv, rx)?;
                if !cell.is_empty() {
                    let sum: Vec<Rat> = v.iter().zip(y).map(|(a, b)| a + b * c).collect();
                    terms.push((sum, cell));
                }
            }
        }
        let supp_x = x.support();
        for (v, rv) in &self.terms {
            let rest = set_ops::difference(rv, &supp_x)
                .ok_or_else(|| Error::RefinementNotClosed(format!("{rv} minus {supp_x}")))?;
            if !rest.is_empty() {
                terms.push((v.clone(), rest));
            }
        }
        let supp_v = SetExpr::union_of(
            self.terms.iter().map(|(_, r)| r.clone()).collect(),
            &self.domain,
        )?;
        for (c, rx) in x.terms() {
            let rest = set_ops::difference(rx, &supp_v)
                .ok_or_else(|| Error::RefinementNotClosed(format!("{rx} minus {supp_v}")))?;
            if !rest.is_empty() {
                terms.push((y.iter().map(|b| b * c).collect(), rest));
            }
        }
        terms.retain(|(v, _)| !v.iter().all(|c| c.is_zero()));
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(VecSimpleSeq {
            domain: self.domain.clone(),
            dim: self.dim,
            terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn chi(a: SetExpr) -> SimpleSeq {
        SimpleSeq::char_fn(&a)
    }

    #[test]
    fn char_fn_and_norm() {
        let zero = chi(SetExpr::empty(&Domain::Nat));
        assert!(zero.is_zero());
        assert_eq!(zero.sup_norm(), rat_zero());
        assert_eq!(chi(SetExpr::fin_set(vec![5])).sup_norm(), rat_int(1));
        let x = SimpleSeq::new(
            Domain::Nat,
            vec![
                (rat_int(3), SetExpr::fin_set(vec![1])),
                (rat_int(-5), SetExpr::fin_set(vec![2])),
            ],
        )
        .unwrap();
        assert_eq!(x.sup_norm(), rat_int(5));
    }

    #[test]
    fn overlapping_regions_are_rejected() {
        let r = SimpleSeq::new(
            Domain::Nat,
            vec![
                (rat_int(1), SetExpr::ap(0, 2).unwrap()),
                (rat_int(2), SetExpr::ap(0, 4).unwrap()),
            ],
        );
        assert!(matches!(r, Err(Error::ValidationError(_))));
    }

    #[test]
    fn level_sets() {
        let x = SimpleSeq::new(
            Domain::Nat,
            vec![
                (rat_int(1), SetExpr::ap(0, 2).unwrap()),
                (rat(1, 2), SetExpr::ap(1, 2).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(x.level_set(&rat(3, 4)).unwrap(), SetExpr::ap(0, 2).unwrap());
        // Cross-check by brute force at N = 200.
        let ls = x.level_set(&rat(3, 4)).unwrap();
        for p in crate::domain::enumerate_domain(&Domain::Nat, 200) {
            let v = x.value_at(&p).unwrap().abs();
            assert_eq!(ls.contains(&p).unwrap(), v >= rat(3, 4));
        }
        // Monotone in ε.
        let big = x.level_set(&rat(1, 4)).unwrap();
        for p in crate::domain::enumerate_domain(&Domain::Nat, 200) {
            if ls.contains(&p).unwrap() {
                assert!(big.contains(&p).unwrap());
            }
        }
        assert!(x.level_set(&rat_zero()).is_err());
        let zero = SimpleSeq::zero(Domain::Nat);
        assert!(zero.level_set(&rat_int(1)).unwrap().is_empty());
    }

    #[test]
    fn combine_add_with_zero() {
        let x = chi(SetExpr::ap(0, 2).unwrap());
        let z = SimpleSeq::zero(Domain::Nat);
        assert_eq!(combine(LatticeOp::Add, &x, &z).unwrap(), x);
    }

    #[test]
    fn combine_meet_by_crt() {
        let x = chi(SetExpr::ap(0, 2).unwrap());
        let y = chi(SetExpr::ap(0, 3).unwrap());
        let m = combine(LatticeOp::Meet, &x, &y).unwrap();
        assert_eq!(m, chi(SetExpr::ap(0, 6).unwrap()));
    }

    #[test]
    fn combine_matches_pointwise_evaluation() {
        let x = SimpleSeq::new(
            Domain::Nat,
            vec![
                (rat_int(2), SetExpr::ap(0, 2).unwrap()),
                (rat_int(-1), SetExpr::fin_set(vec![1, 3])),
            ],
        )
        .unwrap();
        let y = SimpleSeq::new(
            Domain::Nat,
            vec![
                (rat(1, 2), SetExpr::ap(0, 3).unwrap()),
                (rat_int(4), SetExpr::fin_set(vec![1])),
            ],
        )
        .unwrap();
        for op in [LatticeOp::Add, LatticeOp::Meet, LatticeOp::JoinLat] {
            let z = combine(op, &x, &y).unwrap();
            for p in crate::domain::enumerate_domain(&Domain::Nat, 300) {
                let vx = x.value_at(&p).unwrap();
                let vy = y.value_at(&p).unwrap();
                let expect = match op {
                    LatticeOp::Add => vx + vy,
                    LatticeOp::Meet => vx.min(vy),
                    LatticeOp::JoinLat => vx.max(vy),
                };
                assert_eq!(z.value_at(&p).unwrap(), expect, "op {op:?} at {p}");
            }
        }
    }

    #[test]
    fn map_scalar_abs() {
        let x =
            SimpleSeq::new(Domain::Nat, vec![(rat_int(-3), SetExpr::fin_set(vec![0]))]).unwrap();
        assert_eq!(
            map_scalar(ScalarOp::Abs, &x),
            SimpleSeq::new(Domain::Nat, vec![(rat_int(3), SetExpr::fin_set(vec![0]))]).unwrap()
        );
    }

    #[test]
    fn vector_seq_norm_and_add() {
        let v = VecSimpleSeq::zero(Domain::Nat, 2);
        let x = chi(SetExpr::ap(0, 2).unwrap());
        let v = v.add_scaled(&x, &[rat_int(1), rat_int(1)]).unwrap();
        let v = v.add_scaled(&x, &[rat_int(1), rat_int(-1)]).unwrap();
        // On evens the value is (2, 0).
        assert_eq!(v.sup_norm(), rat_int(2));
        let y = chi(SetExpr::ap(1, 2).unwrap());
        let v2 = v.add_scaled(&y, &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(v2.sup_norm(), rat_int(2));
    }
}
