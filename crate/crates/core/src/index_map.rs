//! Index maps between domains, with symbolic preimages.
//!
//! Every map is total on its source domain. Preimages are computed
//! constructor by constructor; a (map, constructor) pair without a rule
//! answers `NotClosed`.

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::pairing::{pair, unpair};
use crate::set_expr::{Body, SetExpr};
use crate::set_ops;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexMap {
    Identity(Domain),
    /// Permutation of a finite subset of ℕ, the identity elsewhere.
    /// Stored as (x, σ(x)) pairs over the support.
    FinPerm(Vec<(u64, u64)>),
    /// ℕ×ℕ → ℕ via the Cantor pairing.
    PairEncode,
    /// ℕ → ℕ×ℕ via the inverse Cantor pairing.
    PairDecode,
    /// D → ℕ×D, p ↦ (block, p).
    BlockEmbed {
        block: u64,
        inner: Domain,
    },
    /// ℚ → ℚ, q ↦ −q.
    NegateRat,
    /// Right-to-left composition: Compose([f, g]) applies g first, then f.
    Compose(Vec<IndexMap>),
}

impl IndexMap {
    pub fn fin_perm(pairs: Vec<(u64, u64)>) -> Result<IndexMap> {
        let mut keys: Vec<u64> = pairs.iter().map(|(x, _)| *x).collect();
        let mut vals: Vec<u64> = pairs.iter().map(|(_, y)| *y).collect();
        keys.sort_unstable();
        vals.sort_unstable();
        keys.dedup();
        if keys.len() != pairs.len() || keys != vals {
            return Err(Error::ValidationError(
                "finite permutation table must be a bijection of its support".into(),
            ));
        }
        let mut pairs = pairs;
        pairs.sort_by_key(|(x, _)| *x);
        pairs.retain(|(x, y)| x != y);
        Ok(IndexMap::FinPerm(pairs))
    }

    pub fn compose(maps: Vec<IndexMap>) -> Result<IndexMap> {
        if maps.is_empty() {
            return Err(Error::ValidationError("empty composition".into()));
        }
        for w in maps.windows(2) {
            if w[0].source() != w[1].target() {
                return Err(Error::domain_mismatch(&w[0].source(), &w[1].target()));
            }
        }
        Ok(IndexMap::Compose(maps))
    }

    pub fn source(&self) -> Domain {
        match self {
            IndexMap::Identity(d) => d.clone(),
            IndexMap::FinPerm(_) => Domain::Nat,
            IndexMap::PairEncode => Domain::nat_pairs(),
            IndexMap::PairDecode => Domain::Nat,
            IndexMap::BlockEmbed { inner, .. } => inner.clone(),
            IndexMap::NegateRat => Domain::Rat,
            IndexMap::Compose(maps) => maps.last().expect("nonempty").source(),
        }
    }

    pub fn target(&self) -> Domain {
        match self {
            IndexMap::Identity(d) => d.clone(),
            IndexMap::FinPerm(_) => Domain::Nat,
            IndexMap::PairEncode => Domain::Nat,
            IndexMap::PairDecode => Domain::nat_pairs(),
            IndexMap::BlockEmbed { inner, .. } => Domain::prod(inner.clone()),
            IndexMap::NegateRat => Domain::Rat,
            IndexMap::Compose(maps) => maps.first().expect("nonempty").target(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        match self {
            IndexMap::Identity(_)
            | IndexMap::FinPerm(_)
            | IndexMap::PairEncode
            | IndexMap::PairDecode
            | IndexMap::NegateRat => true,
            IndexMap::BlockEmbed { .. } => false,
            IndexMap::Compose(maps) => maps.iter().all(|m| m.is_bijective()),
        }
    }

    /// Apply the map to a point of its source domain.
    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        let src = self.source();
        if p.domain() != src {
            return Err(Error::domain_mismatch(&src, &p.domain()));
        }
        Ok(match self {
            IndexMap::Identity(_) => p.clone(),
            IndexMap::FinPerm(pairs) => {
                let n = p.as_nat().expect("nat point");
                let m = pairs
                    .iter()
                    .find(|(x, _)| *x == n)
                    .map(|(_, y)| *y)
                    .unwrap_or(n);
                Point::Nat(m)
            }
            IndexMap::PairEncode => match p {
                Point::Pair(n, t) => {
                    let m = t.as_nat().expect("inner nat");
                    Point::Nat(pair(*n, m)?)
                }
                _ => unreachable!("domain-checked"),
            },
            IndexMap::PairDecode => {
                let k = p.as_nat().expect("nat point");
                let (n, m) = unpair(k);
                Point::pair(n, Point::Nat(m))
            }
            IndexMap::BlockEmbed { block, .. } => Point::pair(*block, p.clone()),
            IndexMap::NegateRat => match p {
                Point::Rat(q) => Point::Rat(-q),
                _ => unreachable!("domain-checked"),
            },
            IndexMap::Compose(maps) => {
                let mut cur = p.clone();
                for m in maps.iter().rev() {
                    cur = m.apply_point(&cur)?;
                }
                cur
            }
        })
    }

    /// h⁻¹[A]: contains(preimage(h, A), p) = contains(A, h(p)).
    pub fn preimage(&self, a: &SetExpr) -> Result<SetExpr> {
        let tgt = self.target();
        if a.domain() != &tgt {
            return Err(Error::domain_mismatch(&tgt, a.domain()));
        }
        match self {
            IndexMap::Identity(_) => Ok(a.clone()),
            IndexMap::FinPerm(pairs) => fin_perm_preimage(pairs, a),
            IndexMap::PairEncode => pair_encode_preimage(a),
            IndexMap::PairDecode => pair_decode_preimage(a),
            IndexMap::BlockEmbed { block, .. } => set_ops::column_trace(a, *block),
            IndexMap::NegateRat => set_ops::reverse_rationals(a),
            IndexMap::Compose(maps) => {
                let mut cur = a.clone();
                for m in maps {
                    cur = m.preimage(&cur)?;
                }
                Ok(cur)
            }
        }
    }
}

/// σ⁻¹[A] for a finite permutation: adjust A on the support, keep it
/// elsewhere.
fn fin_perm_preimage(pairs: &[(u64, u64)], a: &SetExpr) -> Result<SetExpr> {
    let support: Vec<u64> = pairs.iter().map(|(x, _)| *x).collect();
    if support.is_empty() {
        return Ok(a.clone());
    }
    let support_set = SetExpr::fin_set(support.clone());
    let untouched = set_ops::difference(a, &support_set)
        .ok_or_else(|| Error::NotClosed("finite permutation preimage".into()))?;
    let mut moved = Vec::new();
    for x in support {
        let sigma_x = pairs
            .iter()
            .find(|(k, _)| *k == x)
            .map(|(_, v)| *v)
            .unwrap_or(x);
        if a.contains(&Point::Nat(sigma_x))? {
            moved.push(x);
        }
    }
    set_ops::union(&untouched, &SetExpr::fin_set(moved))
}

/// {(n,m) : π(n,m) ∈ A} ⊆ ℕ×ℕ.
fn pair_encode_preimage(a: &SetExpr) -> Result<SetExpr> {
    let prod = Domain::nat_pairs();
    match a.body() {
        Body::FinSet(codes) => {
            let pts = codes
                .iter()
                .map(|k| {
                    let (n, m) = unpair(*k);
                    (n, Point::Nat(m))
                })
                .collect();
            SetExpr::fin_points(pts, &Domain::Nat)
        }
        Body::CoFin(codes) => {
            let pts: Vec<Point> = codes
                .iter()
                .map(|k| {
                    let (n, m) = unpair(*k);
                    Point::pair(n, Point::Nat(m))
                })
                .collect();
            let holes = set_ops::finite_points_expr(&prod, pts);
            set_ops::complement(&holes)
                .ok_or_else(|| Error::NotClosed("cofinite pairing preimage".into()))
        }
        Body::Union(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(pair_encode_preimage(p)?);
            }
            SetExpr::union_of(out, &prod)
        }
        // Arithmetic progressions have no quadratic-free description in the
        // product grammar.
        _ => Err(Error::NotClosed(format!("pairing preimage of {a}"))),
    }
}

/// {k : π⁻¹(k) ∈ A} ⊆ ℕ, i.e. the codes of A.
fn pair_decode_preimage(a: &SetExpr) -> Result<SetExpr> {
    if let Some(pts) = a.enumerate_members() {
        let mut codes = Vec::with_capacity(pts.len());
        for p in pts {
            match p {
                Point::Pair(n, t) => codes.push(pair(n, t.as_nat().expect("inner nat"))?),
                _ => unreachable!(),
            }
        }
        return Ok(SetExpr::fin_set(codes));
    }
    if let Some(comp) = set_ops::complement(a) {
        if let Some(pts) = comp.enumerate_members() {
            let mut codes = Vec::with_capacity(pts.len());
            for p in pts {
                match p {
                    Point::Pair(n, t) => codes.push(pair(n, t.as_nat().expect("inner nat"))?),
                    _ => unreachable!(),
                }
            }
            return Ok(SetExpr::cofin(codes));
        }
    }
    if let Body::Union(parts) = a.body() {
        let mut out = Vec::new();
        for p in parts {
            out.push(pair_decode_preimage(p)?);
        }
        return SetExpr::union_of(out, &Domain::Nat);
    }
    Err(Error::NotClosed(format!("unpairing preimage of {a}")))
}
