//! Representable operators on sequence spaces: a sign pattern on the target
//! domain composed with an index map, (T x)(n) = sign(n) · x(h(n)). These
//! realize the composition operators T_h and the extension-by-zero
//! embeddings; on indicators, T χ_A = sign · χ_{h⁻¹(A)} exactly.

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::ideal::IdealExpr;
use crate::index_map::IndexMap;
use crate::rat::Rat;
use crate::seq::SimpleSeq;
use crate::set_expr::SetExpr;
use crate::set_ops;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexOp {
    /// Where the operator keeps the sign; the positive part of the target.
    positive: SetExpr,
    /// Where it flips the sign; disjoint from `positive`, and together they
    /// exhaust the target domain.
    negative: SetExpr,
    /// Target domain → source domain.
    map: IndexMap,
}

impl IndexOp {
    /// The plain composition operator x ↦ x ∘ h.
    pub fn composition(map: IndexMap) -> IndexOp {
        let target = map.source();
        let positive = SetExpr::full(&target).unwrap_or_else(|| {
            // Over ℚ the grammar has no full set; an empty negative part
            // encodes "positive everywhere" (see `sign_at`).
            SetExpr::empty(&target)
        });
        IndexOp {
            positive,
            negative: SetExpr::empty(&target),
            map,
        }
    }

    /// A signed composition operator. The sign partition must be exhaustive
    /// and disjoint: `negative` flips, everything else keeps.
    pub fn signed(map: IndexMap, negative: SetExpr) -> Result<IndexOp> {
        let target = map.source();
        if negative.domain() != &target {
            return Err(Error::domain_mismatch(&target, negative.domain()));
        }
        let positive = match set_ops::complement(&negative) {
            Some(c) => c,
            None if negative.is_empty() => SetExpr::empty(&target),
            None => return Err(Error::NotClosed(format!("sign complement of {negative}"))),
        };
        Ok(IndexOp {
            positive,
            negative,
            map,
        })
    }

    pub fn map(&self) -> &IndexMap {
        &self.map
    }

    /// Domain of the sequences the operator consumes: the codomain of h.
    pub fn source(&self) -> Domain {
        self.map.target()
    }

    /// Domain of the sequences the operator produces: the domain of h.
    pub fn target(&self) -> Domain {
        self.map.source()
    }

    pub fn negative_part(&self) -> &SetExpr {
        &self.negative
    }

    pub fn has_negative_part(&self) -> bool {
        !self.negative.is_empty()
    }

    pub fn sign_at(&self, p: &Point) -> Result<i8> {
        if self.negative.contains(p)? {
            Ok(-1)
        } else {
            Ok(1)
        }
    }

    /// Apply to a simple sequence: preimage every region, then refine
    /// against the sign partition.
    pub fn apply(&self, x: &SimpleSeq) -> Result<SimpleSeq> {
        let src = self.source();
        if x.domain() != &src {
            return Err(Error::domain_mismatch(&src, x.domain()));
        }
        let target = self.target();
        let mut terms: Vec<(Rat, SetExpr)> = Vec::new();
        for (c, r) in x.terms() {
            let pre = self.map.preimage(r)?;
            if pre.is_empty() {
                continue;
            }
            if self.negative.is_empty() {
                terms.push((c.clone(), pre));
                continue;
            }
            let plus = set_ops::difference(&pre, &self.negative)
                .ok_or_else(|| Error::NotClosed(format!("sign split of {pre}")))?;
            let minus = set_ops::intersect(&pre, &self.negative)?;
            if !plus.is_empty() {
                terms.push((c.clone(), plus));
            }
            if !minus.is_empty() {
                terms.push((-c, minus));
            }
        }
        Ok(SimpleSeq::from_disjoint(target, terms))
    }

    /// Pointwise evaluation (T x)(p) = sign(p) · x(h(p)).
    pub fn eval_at(&self, x: &SimpleSeq, p: &Point) -> Result<Rat> {
        let image = self.map.apply_point(p)?;
        let v = x.value_at(&image)?;
        Ok(if self.sign_at(p)? < 0 { -v } else { v })
    }
}

/// The extension-by-zero embedding of c₀,ᵢ↾A into c₀,ᵢ: x ↦ χ_A · x.
/// Norm-preserving on sequences supported inside A; images vanish off A.
pub struct RestrictionEmbed {
    pub ideal: IdealExpr,
    pub carrier: SetExpr,
}

impl RestrictionEmbed {
    pub fn new(ideal: IdealExpr, carrier: SetExpr) -> Result<RestrictionEmbed> {
        if ideal.domain() != carrier.domain() {
            return Err(Error::domain_mismatch(ideal.domain(), carrier.domain()));
        }
        Ok(RestrictionEmbed { ideal, carrier })
    }

    pub fn apply(&self, x: &SimpleSeq) -> Result<SimpleSeq> {
        x.restrict(&self.carrier)
    }
}
