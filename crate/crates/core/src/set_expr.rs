//! The closed symbolic grammar for subsets of a countable index domain.
//!
//! The grammar is positive: finite unions of basic shapes, with cofiniteness
//! available only at the leaf level (`CoFin`). Every constructor admits a
//! total containment test and a total finiteness certificate, which is what
//! keeps ideal membership decidable downstream.

use std::fmt;

use num_traits::Signed;

use crate::domain::{enumerate_domain, Domain, Point};
use crate::error::{Error, Result};
use crate::rat::{as_positive_integer, Rat};

/// One summand of an ordered sum: a rational set confined to the open
/// interval (lo, hi).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdPart {
    pub lo: Rat,
    pub hi: Rat,
    pub part: SetExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Body {
    // --- over Nat ---
    /// Sorted, duplicate-free finite set. `FinSet([])` is the canonical
    /// empty set of the Nat domain.
    FinSet(Vec<u64>),
    /// Complement of a sorted finite set.
    CoFin(Vec<u64>),
    /// {offset + stride·n : n ∈ ℕ}, stride ≥ 1.
    Ap {
        offset: u64,
        stride: u64,
    },
    // --- over Prod(Nat, D) ---
    FinPoints(Vec<(u64, Point)>),
    /// rows × inner = {(n, t) : n ∈ rows, t ∈ inner}.
    Cols(Box<SetExpr>, Box<SetExpr>),
    /// Finitely many columns with explicit traces.
    Patch(Vec<(u64, SetExpr)>),
    /// {(n, slope·n + intercept) : n ∈ rows}; inner domain must be Nat.
    Graph {
        slope: u64,
        intercept: u64,
        rows: Box<SetExpr>,
    },
    // --- over Rat ---
    FinRat(Vec<Rat>),
    /// {limit − scale/(n+1) : n ∈ ℕ}, scale > 0; strictly increasing to limit.
    AscSeq {
        limit: Rat,
        scale: Rat,
    },
    /// {limit + scale/(n+1) : n ∈ ℕ}, scale > 0; strictly decreasing to limit.
    DescSeq {
        limit: Rat,
        scale: Rat,
    },
    /// Finite ordered sum of rational sets in pairwise disjoint open intervals.
    OrdSum(Vec<OrdPart>),
    // --- any domain ---
    /// Flat, nonempty, deduplicated list of at least two parts.
    Union(Vec<SetExpr>),
}

/// A symbolic subset of a countable domain, in normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetExpr {
    domain: Domain,
    body: Body,
}

impl SetExpr {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub(crate) fn raw(domain: Domain, body: Body) -> SetExpr {
        SetExpr { domain, body }
    }

    /// The canonical empty set of a domain.
    pub fn empty(domain: &Domain) -> SetExpr {
        let body = match domain {
            Domain::Nat => Body::FinSet(vec![]),
            Domain::Prod(_) => Body::FinPoints(vec![]),
            Domain::Rat => Body::FinRat(vec![]),
        };
        SetExpr::raw(domain.clone(), body)
    }

    /// The whole domain, when the grammar can express it. Over ℚ it cannot:
    /// every rational-set constructor yields a scattered set.
    pub fn full(domain: &Domain) -> Option<SetExpr> {
        match domain {
            Domain::Nat => Some(SetExpr::raw(Domain::Nat, Body::CoFin(vec![]))),
            Domain::Prod(inner) => {
                let rows = SetExpr::full(&Domain::Nat)?;
                let t = SetExpr::full(inner)?;
                Some(SetExpr::raw(
                    domain.clone(),
                    Body::Cols(Box::new(rows), Box::new(t)),
                ))
            }
            Domain::Rat => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(
            &self.body,
            Body::FinSet(v) if v.is_empty()
        ) || matches!(&self.body, Body::FinPoints(v) if v.is_empty())
            || matches!(&self.body, Body::FinRat(v) if v.is_empty())
    }

    pub fn fin_set(mut elems: Vec<u64>) -> SetExpr {
        elems.sort_unstable();
        elems.dedup();
        SetExpr::raw(Domain::Nat, Body::FinSet(elems))
    }

    pub fn cofin(mut excluded: Vec<u64>) -> SetExpr {
        excluded.sort_unstable();
        excluded.dedup();
        SetExpr::raw(Domain::Nat, Body::CoFin(excluded))
    }

    pub fn ap(offset: u64, stride: u64) -> Result<SetExpr> {
        if stride == 0 {
            return Err(Error::ValidationError("ap stride must be >= 1".into()));
        }
        Ok(SetExpr::raw(Domain::Nat, Body::Ap { offset, stride }))
    }

    pub fn fin_points(mut pts: Vec<(u64, Point)>, inner: &Domain) -> Result<SetExpr> {
        for (_, p) in &pts {
            if &p.domain() != inner {
                return Err(Error::domain_mismatch(inner, &p.domain()));
            }
        }
        pts.sort();
        pts.dedup();
        Ok(SetExpr::raw(
            Domain::prod(inner.clone()),
            Body::FinPoints(pts),
        ))
    }

    pub fn cols(rows: SetExpr, inner: SetExpr) -> Result<SetExpr> {
        if rows.domain != Domain::Nat {
            return Err(Error::domain_mismatch(&Domain::Nat, &rows.domain));
        }
        let domain = Domain::prod(inner.domain.clone());
        if rows.is_empty() || inner.is_empty() {
            return Ok(SetExpr::empty(&domain));
        }
        Ok(SetExpr::raw(
            domain,
            Body::Cols(Box::new(rows), Box::new(inner)),
        ))
    }

    pub fn patch(entries: Vec<(u64, SetExpr)>, inner: &Domain) -> Result<SetExpr> {
        let mut merged: Vec<(u64, SetExpr)> = Vec::new();
        for (n, t) in entries {
            if &t.domain != inner {
                return Err(Error::domain_mismatch(inner, &t.domain));
            }
            if t.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|(m, _)| *m == n) {
                Some((_, existing)) => {
                    *existing = crate::set_ops::union(existing, &t)?;
                }
                None => merged.push((n, t)),
            }
        }
        merged.sort_by_key(|(n, _)| *n);
        let domain = Domain::prod(inner.clone());
        if merged.is_empty() {
            return Ok(SetExpr::empty(&domain));
        }
        Ok(SetExpr::raw(domain, Body::Patch(merged)))
    }

    pub fn graph(slope: u64, intercept: u64, rows: SetExpr) -> Result<SetExpr> {
        if rows.domain != Domain::Nat {
            return Err(Error::domain_mismatch(&Domain::Nat, &rows.domain));
        }
        let domain = Domain::prod(Domain::Nat);
        if rows.is_empty() {
            return Ok(SetExpr::empty(&domain));
        }
        // A constant graph is a rectangle.
        if slope == 0 {
            return SetExpr::cols(rows, SetExpr::fin_set(vec![intercept]));
        }
        Ok(SetExpr::raw(
            domain,
            Body::Graph {
                slope,
                intercept,
                rows: Box::new(rows),
            },
        ))
    }

    pub fn fin_rat(mut elems: Vec<Rat>) -> SetExpr {
        elems.sort();
        elems.dedup();
        SetExpr::raw(Domain::Rat, Body::FinRat(elems))
    }

    pub fn asc_seq(limit: Rat, scale: Rat) -> Result<SetExpr> {
        if !scale.is_positive() {
            return Err(Error::ValidationError("asc scale must be > 0".into()));
        }
        Ok(SetExpr::raw(Domain::Rat, Body::AscSeq { limit, scale }))
    }

    pub fn desc_seq(limit: Rat, scale: Rat) -> Result<SetExpr> {
        if !scale.is_positive() {
            return Err(Error::ValidationError("desc scale must be > 0".into()));
        }
        Ok(SetExpr::raw(Domain::Rat, Body::DescSeq { limit, scale }))
    }

    pub fn ord_sum(mut parts: Vec<OrdPart>) -> Result<SetExpr> {
        parts.retain(|p| !p.part.is_empty());
        if parts.is_empty() {
            return Ok(SetExpr::empty(&Domain::Rat));
        }
        parts.sort_by(|a, b| a.lo.cmp(&b.lo));
        for p in &parts {
            if p.lo >= p.hi {
                return Err(Error::ValidationError(
                    "ordsum interval must be nonempty".into(),
                ));
            }
            if p.part.domain != Domain::Rat {
                return Err(Error::domain_mismatch(&Domain::Rat, &p.part.domain));
            }
            let (lo, lo_open, hi, hi_open) = p
                .part
                .rat_bounds()
                .ok_or_else(|| Error::ValidationError("ordsum part has no bounds".into()))?;
            let lo_ok = lo > p.lo || (lo == p.lo && lo_open);
            let hi_ok = hi < p.hi || (hi == p.hi && hi_open);
            if !lo_ok || !hi_ok {
                return Err(Error::ValidationError(
                    "ordsum part escapes its interval".into(),
                ));
            }
        }
        for w in parts.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(Error::ValidationError(
                    "ordsum intervals must be disjoint".into(),
                ));
            }
        }
        Ok(SetExpr::raw(Domain::Rat, Body::OrdSum(parts)))
    }

    /// Flattening, empty-dropping, deduplicating union. Parts may overlap;
    /// containment is the disjunction.
    pub fn union_of(parts: Vec<SetExpr>, domain: &Domain) -> Result<SetExpr> {
        crate::set_ops::union_normalized(parts, domain)
    }

    /// Union constructor for surface syntax: parts must be pairwise disjoint,
    /// which keeps simple-function semantics unambiguous.
    pub fn union_strict(parts: Vec<SetExpr>, domain: &Domain) -> Result<SetExpr> {
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                let meet = crate::set_ops::intersect(&parts[i], &parts[j])?;
                if !meet.is_empty() {
                    return Err(Error::ValidationError(format!(
                        "union parts overlap: {} and {}",
                        parts[i], parts[j]
                    )));
                }
            }
        }
        crate::set_ops::union_normalized(parts, domain)
    }

    /// The flat list of non-union constituents.
    pub fn parts(&self) -> Vec<&SetExpr> {
        match &self.body {
            Body::Union(ps) => ps.iter().collect(),
            _ => vec![self],
        }
    }

    /// Total containment test, by structural recursion.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        let pd = p.domain();
        if pd != self.domain {
            return Err(Error::domain_mismatch(&self.domain, &pd));
        }
        Ok(self.contains_unchecked(p))
    }

    fn contains_unchecked(&self, p: &Point) -> bool {
        match (&self.body, p) {
            (Body::FinSet(v), Point::Nat(n)) => v.binary_search(n).is_ok(),
            (Body::CoFin(v), Point::Nat(n)) => v.binary_search(n).is_err(),
            (Body::Ap { offset, stride }, Point::Nat(n)) => {
                *n >= *offset && (*n - *offset) % *stride == 0
            }
            (Body::FinPoints(v), Point::Pair(n, t)) => {
                v.iter().any(|(m, q)| m == n && q == t.as_ref())
            }
            (Body::Cols(rows, inner), Point::Pair(n, t)) => {
                rows.contains_unchecked(&Point::Nat(*n)) && inner.contains_unchecked(t)
            }
            (Body::Patch(entries), Point::Pair(n, t)) => entries
                .iter()
                .find(|(m, _)| m == n)
                .map(|(_, tr)| tr.contains_unchecked(t))
                .unwrap_or(false),
            (
                Body::Graph {
                    slope,
                    intercept,
                    rows,
                },
                Point::Pair(n, t),
            ) => {
                let expected = (*slope as u128) * (*n as u128) + (*intercept as u128);
                rows.contains_unchecked(&Point::Nat(*n))
                    && t.as_nat().map(|m| m as u128 == expected).unwrap_or(false)
            }
            (Body::FinRat(v), Point::Rat(q)) => v.binary_search(q).is_ok(),
            (Body::AscSeq { limit, scale }, Point::Rat(q)) => {
                let gap = limit - q;
                gap.is_positive() && as_positive_integer(&(scale / &gap)).is_some()
            }
            (Body::DescSeq { limit, scale }, Point::Rat(q)) => {
                let gap = q - limit;
                gap.is_positive() && as_positive_integer(&(scale / &gap)).is_some()
            }
            (Body::OrdSum(parts), Point::Rat(q)) => parts
                .iter()
                .any(|op| &op.lo < q && q < &op.hi && op.part.contains_unchecked(p)),
            (Body::Union(parts), _) => parts.iter().any(|e| e.contains_unchecked(p)),
            _ => unreachable!("domain-checked"),
        }
    }

    /// Total finiteness certificate.
    pub fn is_finite(&self) -> bool {
        match &self.body {
            Body::FinSet(_) | Body::FinPoints(_) | Body::FinRat(_) => true,
            Body::CoFin(_) | Body::Ap { .. } | Body::AscSeq { .. } | Body::DescSeq { .. } => false,
            Body::Cols(rows, inner) => rows.is_finite() && inner.is_finite(),
            Body::Patch(entries) => entries.iter().all(|(_, t)| t.is_finite()),
            Body::Graph { rows, .. } => rows.is_finite(),
            Body::OrdSum(parts) => parts.iter().all(|p| p.part.is_finite()),
            Body::Union(parts) => parts.iter().all(|p| p.is_finite()),
        }
    }

    /// All members of a finite set, or `None` when the set is infinite.
    pub fn enumerate_members(&self) -> Option<Vec<Point>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<Point> = Vec::new();
        match &self.body {
            Body::FinSet(v) => out.extend(v.iter().map(|n| Point::Nat(*n))),
            Body::FinPoints(v) => out.extend(v.iter().map(|(n, p)| Point::pair(*n, p.clone()))),
            Body::FinRat(v) => out.extend(v.iter().map(|q| Point::Rat(q.clone()))),
            Body::Cols(rows, inner) => {
                let rs = rows.enumerate_members()?;
                let ts = inner.enumerate_members()?;
                for r in &rs {
                    let n = r.as_nat().expect("rows over Nat");
                    for t in &ts {
                        out.push(Point::pair(n, t.clone()));
                    }
                }
            }
            Body::Patch(entries) => {
                for (n, t) in entries {
                    for p in t.enumerate_members()? {
                        out.push(Point::pair(*n, p));
                    }
                }
            }
            Body::Graph {
                slope,
                intercept,
                rows,
            } => {
                for r in rows.enumerate_members()? {
                    let n = r.as_nat().expect("rows over Nat");
                    let m = (*slope as u128) * (n as u128) + (*intercept as u128);
                    let m = u64::try_from(m).ok()?;
                    out.push(Point::pair(n, Point::Nat(m)));
                }
            }
            Body::OrdSum(parts) => {
                for p in parts {
                    out.extend(p.part.enumerate_members()?);
                }
            }
            Body::Union(parts) => {
                for p in parts {
                    out.extend(p.enumerate_members()?);
                }
            }
            Body::CoFin(_) | Body::Ap { .. } | Body::AscSeq { .. } | Body::DescSeq { .. } => {
                unreachable!("infinite")
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }

    /// All members among the first `n` points of the domain enumeration.
    /// This brute-force evaluator is the independent oracle used by the
    /// dual-evaluator test suites.
    pub fn enumerate_prefix(&self, n: usize) -> Vec<Point> {
        enumerate_domain(&self.domain, n)
            .into_iter()
            .filter(|p| self.contains_unchecked(p))
            .collect()
    }

    /// Least element and strict supremum data for rational sets:
    /// (inf, inf_attained... encoded as (lo, lo_strict, hi, hi_strict)).
    /// `lo_strict` means every member is strictly above `lo`.
    pub(crate) fn rat_bounds(&self) -> Option<(Rat, bool, Rat, bool)> {
        match &self.body {
            Body::FinRat(v) => {
                let lo = v.first()?.clone();
                let hi = v.last()?.clone();
                Some((lo, false, hi, false))
            }
            Body::AscSeq { limit, scale } => {
                // members in [limit - scale, limit)
                Some((limit - scale, false, limit.clone(), true))
            }
            Body::DescSeq { limit, scale } => Some((limit.clone(), true, limit + scale, false)),
            Body::OrdSum(parts) => {
                let first = parts.first()?;
                let last = parts.last()?;
                let (lo, lo_s, _, _) = first.part.rat_bounds()?;
                let (_, _, hi, hi_s) = last.part.rat_bounds()?;
                Some((lo, lo_s, hi, hi_s))
            }
            Body::Union(parts) => {
                let mut bounds = parts.iter().map(|p| p.rat_bounds());
                let (mut lo, mut lo_s, mut hi, mut hi_s) = bounds.next()??;
                for b in bounds {
                    let (l, ls, h, hs) = b?;
                    if l < lo || (l == lo && !ls) {
                        lo = l;
                        lo_s = ls;
                    }
                    if h > hi || (h == hi && !hs) {
                        hi = h;
                        hi_s = hs;
                    }
                }
                Some((lo, lo_s, hi, hi_s))
            }
            _ => None,
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_set(self))
    }
}
