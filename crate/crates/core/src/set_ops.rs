//! Total set algebra on the closed grammar.
//!
//! `union` and `intersect` are total on the shipped constructors; a
//! `NotClosed` escaping from them is a defect. `complement` and `difference`
//! are internal helpers and may decline (they return `Option`): the grammar
//! is positive, so complements only exist where the shape of the operands
//! allows them.

use num_traits::One;

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::rat::{as_positive_integer, Rat};
use crate::set_expr::{Body, OrdPart, SetExpr};

/// Build the canonical finite-set expression of a domain from a point list.
pub fn finite_points_expr(domain: &Domain, pts: Vec<Point>) -> SetExpr {
    match domain {
        Domain::Nat => SetExpr::fin_set(pts.iter().filter_map(|p| p.as_nat()).collect()),
        Domain::Rat => SetExpr::fin_rat(
            pts.iter()
                .filter_map(|p| match p {
                    Point::Rat(q) => Some(q.clone()),
                    _ => None,
                })
                .collect(),
        ),
        Domain::Prod(inner) => {
            let pairs = pts
                .into_iter()
                .filter_map(|p| match p {
                    Point::Pair(n, t) => Some((n, *t)),
                    _ => None,
                })
                .collect();
            SetExpr::fin_points(pairs, inner).expect("points match inner domain")
        }
    }
}

fn check_same_domain(a: &SetExpr, b: &SetExpr) -> Result<()> {
    if a.domain() != b.domain() {
        return Err(Error::domain_mismatch(a.domain(), b.domain()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Union
// ---------------------------------------------------------------------------

/// Union of two sets of the same domain; containment in the result is the
/// disjunction of the operands' containment.
pub fn union(a: &SetExpr, b: &SetExpr) -> Result<SetExpr> {
    check_same_domain(a, b)?;
    union_normalized(vec![a.clone(), b.clone()], a.domain())
}

/// Flatten, drop empties, merge finite parts, absorb redundant parts, dedup.
pub fn union_normalized(parts: Vec<SetExpr>, domain: &Domain) -> Result<SetExpr> {
    let mut flat: Vec<SetExpr> = Vec::new();
    let mut stack = parts;
    stack.reverse();
    while let Some(p) = stack.pop() {
        if p.domain() != domain {
            return Err(Error::domain_mismatch(domain, p.domain()));
        }
        match p.body() {
            Body::Union(inner) => stack.extend(inner.iter().rev().cloned()),
            _ if p.is_empty() => {}
            _ => flat.push(p),
        }
    }

    // Merge finite leaves of the same kind into one.
    match domain {
        Domain::Nat => {
            // Any cofinite part absorbs everything: CoFin(F) ∪ X = CoFin(F ∖ X).
            let cofins: Vec<Vec<u64>> = flat
                .iter()
                .filter_map(|p| match p.body() {
                    Body::CoFin(f) => Some(f.clone()),
                    _ => None,
                })
                .collect();
            if !cofins.is_empty() {
                let mut excluded: Vec<u64> = cofins[0].clone();
                excluded.retain(|x| cofins.iter().all(|f| f.binary_search(x).is_ok()));
                let others: Vec<&SetExpr> = flat
                    .iter()
                    .filter(|p| !matches!(p.body(), Body::CoFin(_)))
                    .collect();
                let mut kept = Vec::new();
                for x in excluded {
                    let mut covered = false;
                    for o in &others {
                        if o.contains(&Point::Nat(x))? {
                            covered = true;
                            break;
                        }
                    }
                    if !covered {
                        kept.push(x);
                    }
                }
                return Ok(SetExpr::cofin(kept));
            }
            let mut fins: Vec<u64> = Vec::new();
            let mut rest: Vec<SetExpr> = Vec::new();
            for p in flat {
                match p.body() {
                    Body::FinSet(v) => fins.extend(v.iter().copied()),
                    _ => rest.push(p),
                }
            }
            // Drop AP parts subsumed by another AP.
            let mut keep = vec![true; rest.len()];
            for i in 0..rest.len() {
                for j in 0..rest.len() {
                    if i == j || !keep[j] || !keep[i] {
                        continue;
                    }
                    if let (
                        Body::Ap {
                            offset: a1,
                            stride: b1,
                        },
                        Body::Ap {
                            offset: a2,
                            stride: b2,
                        },
                    ) = (rest[i].body(), rest[j].body())
                    {
                        let subsumed = b1 % b2 == 0
                            && a1 >= a2
                            && (a1 - a2) % b2 == 0
                            && (i != j)
                            && (b1 != b2 || a1 != a2 || i > j);
                        if subsumed {
                            keep[i] = false;
                        }
                    }
                }
            }
            let mut rest: Vec<SetExpr> = rest
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(p, _)| p)
                .collect();
            let mut points = Vec::new();
            'outer: for x in fins {
                for r in &rest {
                    if r.contains(&Point::Nat(x))? {
                        continue 'outer;
                    }
                }
                points.push(x);
            }
            let fin = SetExpr::fin_set(points);
            if !fin.is_empty() {
                rest.push(fin);
            }
            finish_union(rest, domain)
        }
        Domain::Prod(inner) => {
            let mut pts: Vec<(u64, Point)> = Vec::new();
            let mut patches: Vec<(u64, SetExpr)> = Vec::new();
            let mut rest: Vec<SetExpr> = Vec::new();
            for p in flat {
                match p.body() {
                    Body::FinPoints(v) => pts.extend(v.iter().cloned()),
                    Body::Patch(entries) => patches.extend(entries.iter().cloned()),
                    _ => rest.push(p),
                }
            }
            if !patches.is_empty() {
                rest.push(SetExpr::patch(patches, inner)?);
            }
            let mut kept = Vec::new();
            'next: for (n, t) in pts {
                let point = Point::pair(n, t.clone());
                for r in &rest {
                    if r.contains(&point)? {
                        continue 'next;
                    }
                }
                kept.push((n, t));
            }
            let fin = SetExpr::fin_points(kept, inner)?;
            if !fin.is_empty() {
                rest.push(fin);
            }
            finish_union(rest, domain)
        }
        Domain::Rat => {
            let mut qs: Vec<Rat> = Vec::new();
            let mut rest: Vec<SetExpr> = Vec::new();
            for p in flat {
                match p.body() {
                    Body::FinRat(v) => qs.extend(v.iter().cloned()),
                    _ => rest.push(p),
                }
            }
            let mut kept = Vec::new();
            'next: for q in qs {
                let point = Point::Rat(q.clone());
                for r in &rest {
                    if r.contains(&point)? {
                        continue 'next;
                    }
                }
                kept.push(q);
            }
            let fin = SetExpr::fin_rat(kept);
            if !fin.is_empty() {
                rest.push(fin);
            }
            finish_union(rest, domain)
        }
    }
}

fn finish_union(mut parts: Vec<SetExpr>, domain: &Domain) -> Result<SetExpr> {
    parts.sort();
    parts.dedup();
    match parts.len() {
        0 => Ok(SetExpr::empty(domain)),
        1 => Ok(parts.pop().unwrap()),
        _ => Ok(SetExpr::raw(domain.clone(), Body::Union(parts))),
    }
}

// ---------------------------------------------------------------------------
// Intersection
// ---------------------------------------------------------------------------

/// Intersection; total on the shipped grammar.
pub fn intersect(a: &SetExpr, b: &SetExpr) -> Result<SetExpr> {
    check_same_domain(a, b)?;
    let domain = a.domain().clone();
    if a.is_empty() || b.is_empty() {
        return Ok(SetExpr::empty(&domain));
    }
    // Unions distribute.
    if matches!(a.body(), Body::Union(_)) || matches!(b.body(), Body::Union(_)) {
        let mut pieces = Vec::new();
        for pa in a.parts() {
            for pb in b.parts() {
                pieces.push(intersect(pa, pb)?);
            }
        }
        return union_normalized(pieces, &domain);
    }
    // A finite operand reduces to point filtering.
    if let Some(pts) = a.enumerate_members() {
        let mut kept = Vec::new();
        for p in pts {
            if b.contains(&p)? {
                kept.push(p);
            }
        }
        return Ok(finite_points_expr(&domain, kept));
    }
    if let Some(pts) = b.enumerate_members() {
        let mut kept = Vec::new();
        for p in pts {
            if a.contains(&p)? {
                kept.push(p);
            }
        }
        return Ok(finite_points_expr(&domain, kept));
    }
    match (a.body(), b.body()) {
        // --- Nat × Nat ---
        (Body::CoFin(f1), Body::CoFin(f2)) => {
            let mut merged: Vec<u64> = f1.iter().chain(f2.iter()).copied().collect();
            merged.sort_unstable();
            merged.dedup();
            Ok(SetExpr::cofin(merged))
        }
        (Body::CoFin(f), Body::Ap { .. }) => {
            let holes: Vec<u64> = f
                .iter()
                .copied()
                .filter(|x| b.contains(&Point::Nat(*x)).unwrap_or(false))
                .collect();
            ap_minus_points(b, &holes)
        }
        (Body::Ap { .. }, Body::CoFin(f)) => {
            let holes: Vec<u64> = f
                .iter()
                .copied()
                .filter(|x| a.contains(&Point::Nat(*x)).unwrap_or(false))
                .collect();
            ap_minus_points(a, &holes)
        }
        (
            Body::Ap {
                offset: a1,
                stride: b1,
            },
            Body::Ap {
                offset: a2,
                stride: b2,
            },
        ) => ap_intersect(*a1, *b1, *a2, *b2),
        // --- Prod × Prod ---
        (Body::Cols(s1, t1), Body::Cols(s2, t2)) => {
            SetExpr::cols(intersect(s1, s2)?, intersect(t1, t2)?)
        }
        (Body::Cols(s, t), Body::Patch(entries)) | (Body::Patch(entries), Body::Cols(s, t)) => {
            let mut out = Vec::new();
            for (n, tr) in entries {
                if s.contains(&Point::Nat(*n))? {
                    out.push((*n, intersect(tr, t)?));
                }
            }
            SetExpr::patch(out, t.domain())
        }
        (
            Body::Cols(s, t),
            Body::Graph {
                slope,
                intercept,
                rows,
            },
        )
        | (
            Body::Graph {
                slope,
                intercept,
                rows,
            },
            Body::Cols(s, t),
        ) => {
            let hits = affine_preimage(*slope, *intercept, t)?;
            let rows = intersect(&intersect(rows, s)?, &hits)?;
            SetExpr::graph(*slope, *intercept, rows)
        }
        (Body::Patch(e1), Body::Patch(e2)) => {
            let mut out = Vec::new();
            for (n, t1) in e1 {
                if let Some((_, t2)) = e2.iter().find(|(m, _)| m == n) {
                    out.push((*n, intersect(t1, t2)?));
                }
            }
            SetExpr::patch(out, e1[0].1.domain())
        }
        (
            Body::Patch(entries),
            Body::Graph {
                slope,
                intercept,
                rows,
            },
        )
        | (
            Body::Graph {
                slope,
                intercept,
                rows,
            },
            Body::Patch(entries),
        ) => {
            let mut pts = Vec::new();
            for (n, tr) in entries {
                if rows.contains(&Point::Nat(*n))? {
                    let m = (*slope as u128) * (*n as u128) + (*intercept as u128);
                    let m = u64::try_from(m).map_err(|_| Error::Overflow("graph value"))?;
                    if tr.contains(&Point::Nat(m))? {
                        pts.push((*n, Point::Nat(m)));
                    }
                }
            }
            SetExpr::fin_points(pts, &Domain::Nat)
        }
        (
            Body::Graph {
                slope: a1,
                intercept: c1,
                rows: r1,
            },
            Body::Graph {
                slope: a2,
                intercept: c2,
                rows: r2,
            },
        ) => {
            if a1 == a2 && c1 == c2 {
                return SetExpr::graph(*a1, *c1, intersect(r1, r2)?);
            }
            // a1·n + c1 = a2·n + c2 has at most one natural solution.
            let (hi_a, hi_c, lo_a, lo_c) = if a1 > a2 {
                (*a1, *c1, *a2, *c2)
            } else {
                (*a2, *c2, *a1, *c1)
            };
            let domain = a.domain().clone();
            if hi_a == lo_a {
                return Ok(SetExpr::empty(&domain));
            }
            if lo_c < hi_c || (lo_c - hi_c) % (hi_a - lo_a) != 0 {
                return Ok(SetExpr::empty(&domain));
            }
            let n = (lo_c - hi_c) / (hi_a - lo_a);
            if r1.contains(&Point::Nat(n))? && r2.contains(&Point::Nat(n))? {
                let m = (*a1 as u128) * (n as u128) + (*c1 as u128);
                let m = u64::try_from(m).map_err(|_| Error::Overflow("graph value"))?;
                SetExpr::fin_points(vec![(n, Point::Nat(m))], &Domain::Nat)
            } else {
                Ok(SetExpr::empty(&domain))
            }
        }
        // --- Rat × Rat ---
        (Body::OrdSum(parts), _) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(OrdPart {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    part: intersect(&p.part, b)?,
                });
            }
            SetExpr::ord_sum(out)
        }
        (_, Body::OrdSum(parts)) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(OrdPart {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    part: intersect(a, &p.part)?,
                });
            }
            SetExpr::ord_sum(out)
        }
        (
            Body::AscSeq {
                limit: q1,
                scale: r1,
            },
            Body::AscSeq {
                limit: q2,
                scale: r2,
            },
        ) => asc_asc_intersect(q1, r1, q2, r2),
        (
            Body::AscSeq {
                limit: qa,
                scale: ra,
            },
            Body::DescSeq {
                limit: qd,
                scale: rd,
            },
        )
        | (
            Body::DescSeq {
                limit: qd,
                scale: rd,
            },
            Body::AscSeq {
                limit: qa,
                scale: ra,
            },
        ) => asc_desc_intersect(qa, ra, qd, rd),
        (Body::DescSeq { .. }, Body::DescSeq { .. }) => {
            let na = reverse_rationals(a)?;
            let nb = reverse_rationals(b)?;
            reverse_rationals(&intersect(&na, &nb)?)
        }
        _ => Err(Error::NotClosed(format!("intersect({a}, {b})"))),
    }
}

/// AP(a1,b1) ∩ AP(a2,b2) by CRT, clipped to x ≥ max(a1,a2).
fn ap_intersect(a1: u64, b1: u64, a2: u64, b2: u64) -> Result<SetExpr> {
    let g = gcd_u64(b1, b2);
    if (a1 % g) != (a2 % g) {
        return Ok(SetExpr::empty(&Domain::Nat));
    }
    let l = (b1 / g) as u128 * b2 as u128;
    let l = u64::try_from(l).map_err(|_| Error::Overflow("ap lcm"))?;
    // Find the least x with x ≡ a1 (mod b1), x ≡ a2 (mod b2), x ≥ max(a1,a2).
    // Solve via extended gcd on the congruence b1·t ≡ a2 - a1 (mod b2).
    let diff = (a2 as i128) - (a1 as i128);
    let (_, inv, _) = ext_gcd(b1 as i128 / g as i128, b2 as i128 / g as i128);
    let m2 = (b2 / g) as i128;
    let t = ((diff / g as i128) % m2 * (inv % m2)) % m2;
    let t = ((t % m2) + m2) % m2;
    let mut x = (a1 as i128) + (b1 as i128) * t;
    let li = l as i128;
    x = ((x % li) + li) % li;
    let floor = a1.max(a2) as i128;
    if x < floor {
        let k = (floor - x + li - 1) / li;
        x += k * li;
    }
    let x = u64::try_from(x).map_err(|_| Error::Overflow("ap start"))?;
    SetExpr::ap(x, l)
}

/// AP minus finitely many of its own points, as FinSet ∪ tail AP.
fn ap_minus_points(ap: &SetExpr, holes: &[u64]) -> Result<SetExpr> {
    let (offset, stride) = match ap.body() {
        Body::Ap { offset, stride } => (*offset, *stride),
        _ => unreachable!(),
    };
    if holes.is_empty() {
        return Ok(ap.clone());
    }
    let max_hole = *holes.iter().max().unwrap();
    let mut head = Vec::new();
    let mut x = offset;
    while x <= max_hole {
        if !holes.contains(&x) {
            head.push(x);
        }
        match x.checked_add(stride) {
            Some(next) => x = next,
            None => return Err(Error::Overflow("ap enumeration")),
        }
    }
    let tail = SetExpr::ap(x, stride)?;
    union_normalized(vec![SetExpr::fin_set(head), tail], &Domain::Nat)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Common members of two ascending sequences.
fn asc_asc_intersect(q1: &Rat, r1: &Rat, q2: &Rat, r2: &Rat) -> Result<SetExpr> {
    if q1 == q2 {
        // limit - r1/i = limit - r2/j  ⟺  j/i = r2/r1; with r1/r2 = p/q in
        // lowest terms the common members form the sequence with scale r1/p.
        let ratio = r1 / r2;
        let p = ratio.numer().clone();
        let scale = r1 / Rat::from_integer(p);
        return SetExpr::asc_seq(q1.clone(), scale);
    }
    // Different limits leave finitely many coincidences.
    let (qlo, rlo, qhi, rhi) = if q1 < q2 {
        (q1, r1, q2, r2)
    } else {
        (q2, r2, q1, r1)
    };
    let d = qhi - qlo; // > 0: rhi/j - rlo/i = d
    let mut out = Vec::new();
    let mut j = Rat::one();
    while (rhi / &j) > d {
        let gap = rhi / &j - &d; // = rlo / i
        if let Some(_i) = as_positive_integer(&(rlo / &gap)) {
            out.push(qhi - rhi / &j);
        }
        j += Rat::one();
    }
    Ok(SetExpr::fin_rat(out))
}

/// Common members of an ascending and a descending sequence.
fn asc_desc_intersect(qa: &Rat, ra: &Rat, qd: &Rat, rd: &Rat) -> Result<SetExpr> {
    if qa <= qd {
        return Ok(SetExpr::empty(&Domain::Rat));
    }
    let d = qa - qd; // r_a/i + r_d/j = d with i, j ≥ 1
    let mut out = Vec::new();
    let mut i = Rat::one();
    loop {
        let ra_i = ra / &i;
        if ra_i < d {
            let rest = &d - &ra_i; // = r_d / j
            if as_positive_integer(&(rd / &rest)).is_some() {
                out.push(qa - ra_i.clone());
            }
        }
        // All solutions satisfy r_d/j < d, so r_a/i = d - r_d/j stays above
        // d - r_d/j_min; stop once r_a/i drops below that bound.
        let j_min = (rd / &d).floor() + Rat::one();
        let e = &d - rd / j_min;
        if ra_i < e {
            break;
        }
        i += Rat::one();
    }
    Ok(SetExpr::fin_rat(out))
}

// ---------------------------------------------------------------------------
// Complement / difference / subset
// ---------------------------------------------------------------------------

/// Complement within the domain, when the positive grammar can express it.
/// Total over ℕ; partial over products; never available over ℚ.
pub fn complement(a: &SetExpr) -> Option<SetExpr> {
    let domain = a.domain().clone();
    match a.body() {
        Body::FinSet(v) => Some(SetExpr::cofin(v.clone())),
        Body::CoFin(v) => Some(SetExpr::fin_set(v.clone())),
        Body::Ap { offset, stride } => {
            let mut parts: Vec<SetExpr> = vec![SetExpr::fin_set((0..*offset).collect())];
            for r in 0..*stride {
                if r == offset % stride {
                    continue;
                }
                let start = offset + ((r + stride - offset % stride) % stride);
                parts.push(SetExpr::ap(start, *stride).ok()?);
            }
            union_normalized(parts, &Domain::Nat).ok()
        }
        Body::FinPoints(_) | Body::Patch(_) => {
            let rows = mentioned_rows(a);
            let inner = domain.inner()?.clone();
            let full_inner = SetExpr::full(&inner)?;
            let mut parts = vec![SetExpr::cols(SetExpr::cofin(rows.clone()), full_inner).ok()?];
            for n in rows {
                let trace = column_trace(a, n).ok()?;
                let ct = complement(&trace)?;
                parts.push(SetExpr::patch(vec![(n, ct)], &inner).ok()?);
            }
            union_normalized(parts, &domain).ok()
        }
        Body::Cols(s, t) => {
            let inner = t.domain().clone();
            let cs = complement(s)?;
            let full_inner = SetExpr::full(&inner)?;
            let mut parts = vec![SetExpr::cols(cs, full_inner).ok()?];
            let ct = complement(t)?;
            if !ct.is_empty() {
                parts.push(SetExpr::cols((**s).clone(), ct).ok()?);
            }
            union_normalized(parts, &domain).ok()
        }
        Body::Graph { rows, .. } => {
            if rows.is_finite() {
                let pts = a.enumerate_members()?;
                complement(&finite_points_expr(&domain, pts))
            } else {
                None
            }
        }
        Body::Union(parts) => {
            let mut acc = complement(&parts[0])?;
            for p in &parts[1..] {
                acc = intersect(&acc, &complement(p)?).ok()?;
            }
            Some(acc)
        }
        Body::FinRat(_) | Body::AscSeq { .. } | Body::DescSeq { .. } | Body::OrdSum(_) => None,
    }
}

fn mentioned_rows(a: &SetExpr) -> Vec<u64> {
    let mut rows: Vec<u64> = match a.body() {
        Body::FinPoints(v) => v.iter().map(|(n, _)| *n).collect(),
        Body::Patch(entries) => entries.iter().map(|(n, _)| *n).collect(),
        _ => vec![],
    };
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// a ∖ b, when expressible in the grammar.
pub fn difference(a: &SetExpr, b: &SetExpr) -> Option<SetExpr> {
    if a.domain() != b.domain() {
        return None;
    }
    if b.is_empty() || a.is_empty() {
        return Some(a.clone());
    }
    let overlap = intersect(a, b).ok()?;
    if overlap.is_empty() {
        return Some(a.clone());
    }
    // a ∩ b normalizing to a itself certifies a ⊆ b.
    if &overlap == a {
        return Some(SetExpr::empty(a.domain()));
    }
    if let Some(pts) = a.enumerate_members() {
        let mut kept = Vec::new();
        for p in pts {
            if !b.contains(&p).ok()? {
                kept.push(p);
            }
        }
        return Some(finite_points_expr(a.domain(), kept));
    }
    if let Some(cb) = complement(b) {
        return intersect(a, &cb).ok();
    }
    if let Some(pts) = overlap.enumerate_members() {
        return remove_finite_points(a, &pts);
    }
    if let Body::Union(parts) = a.body() {
        let mut out = Vec::new();
        for p in parts {
            out.push(difference(p, b)?);
        }
        return union_normalized(out, a.domain()).ok();
    }
    if let Body::Union(parts) = b.body() {
        let mut acc = a.clone();
        for p in parts {
            acc = difference(&acc, p)?;
        }
        return Some(acc);
    }
    if let Body::Graph {
        slope,
        intercept,
        rows,
    } = a.body()
    {
        let bad = graph_rows_hitting(*slope, *intercept, b)?;
        let rows = difference(rows, &bad)?;
        return SetExpr::graph(*slope, *intercept, rows).ok();
    }
    // Column shapes minus column shapes: split along the row regions and
    // recurse into the traces.
    match (a.body(), b.body()) {
        (Body::Cols(s, t), Body::Cols(s2, t2)) => {
            let off = difference(s, s2)?;
            let on = intersect(s, s2).ok()?;
            let trace_rest = difference(t, t2)?;
            let mut parts = vec![SetExpr::cols(off, (**t).clone()).ok()?];
            parts.push(SetExpr::cols(on, trace_rest).ok()?);
            union_normalized(parts, a.domain()).ok()
        }
        (Body::Cols(s, t), Body::Patch(entries)) => {
            let rows: Vec<u64> = entries.iter().map(|(n, _)| *n).collect();
            let off = difference(s, &SetExpr::fin_set(rows))?;
            let mut parts = vec![SetExpr::cols(off, (**t).clone()).ok()?];
            for (n, tn) in entries {
                if s.contains(&Point::Nat(*n)).ok()? {
                    let rest = difference(t, tn)?;
                    parts.push(SetExpr::patch(vec![(*n, rest)], t.domain()).ok()?);
                }
            }
            union_normalized(parts, a.domain()).ok()
        }
        (Body::Patch(entries), _) => {
            let mut out = Vec::new();
            for (n, tn) in entries {
                let bt = column_trace(b, *n).ok()?;
                let rest = difference(tn, &bt)?;
                out.push((*n, rest));
            }
            SetExpr::patch(out, a.domain().inner()?).ok()
        }
        _ => None,
    }
}

/// Rows n for which the graph point (n, g(n)) lies in `b`.
fn graph_rows_hitting(slope: u64, intercept: u64, b: &SetExpr) -> Option<SetExpr> {
    match b.body() {
        Body::FinPoints(v) => {
            let rows = v
                .iter()
                .filter(|(n, p)| {
                    p.as_nat()
                        .map(|m| m as u128 == slope as u128 * *n as u128 + intercept as u128)
                        .unwrap_or(false)
                })
                .map(|(n, _)| *n)
                .collect();
            Some(SetExpr::fin_set(rows))
        }
        Body::Cols(s, t) => {
            let hits = affine_preimage(slope, intercept, t).ok()?;
            intersect(s, &hits).ok()
        }
        Body::Patch(entries) => {
            let mut rows = Vec::new();
            for (n, tr) in entries {
                let m = slope as u128 * *n as u128 + intercept as u128;
                let m = u64::try_from(m).ok()?;
                if tr.contains(&Point::Nat(m)).ok()? {
                    rows.push(*n);
                }
            }
            Some(SetExpr::fin_set(rows))
        }
        Body::Graph {
            slope: s2,
            intercept: c2,
            rows: r2,
        } => {
            if slope == *s2 && intercept == *c2 {
                return Some((**r2).clone());
            }
            let inter = intersect(
                &SetExpr::graph(slope, intercept, SetExpr::cofin(vec![])).ok()?,
                b,
            )
            .ok()?;
            let rows = inter
                .enumerate_members()?
                .into_iter()
                .filter_map(|p| match p {
                    Point::Pair(n, _) => Some(n),
                    _ => None,
                })
                .collect();
            Some(SetExpr::fin_set(rows))
        }
        Body::Union(parts) => {
            let mut acc = SetExpr::empty(&Domain::Nat);
            for p in parts {
                acc = union(&acc, &graph_rows_hitting(slope, intercept, p)?).ok()?;
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Remove finitely many explicit points, when the shape allows it.
fn remove_finite_points(a: &SetExpr, pts: &[Point]) -> Option<SetExpr> {
    if pts.is_empty() {
        return Some(a.clone());
    }
    let domain = a.domain().clone();
    match a.body() {
        Body::FinSet(_) | Body::FinPoints(_) | Body::FinRat(_) => {
            let kept = a
                .enumerate_members()?
                .into_iter()
                .filter(|p| !pts.contains(p))
                .collect();
            Some(finite_points_expr(&domain, kept))
        }
        Body::CoFin(f) => {
            let mut f = f.clone();
            f.extend(pts.iter().filter_map(|p| p.as_nat()));
            Some(SetExpr::cofin(f))
        }
        Body::Ap { .. } => {
            let holes: Vec<u64> = pts.iter().filter_map(|p| p.as_nat()).collect();
            ap_minus_points(a, &holes).ok()
        }
        Body::Cols(s, t) => {
            let mut by_row: std::collections::BTreeMap<u64, Vec<Point>> = Default::default();
            for p in pts {
                if let Point::Pair(n, q) = p {
                    by_row.entry(*n).or_default().push((**q).clone());
                }
            }
            let rows: Vec<u64> = by_row.keys().copied().collect();
            let s_rest = difference(s, &SetExpr::fin_set(rows.clone()))?;
            let mut parts = vec![SetExpr::cols(s_rest, (**t).clone()).ok()?];
            for (n, qs) in by_row {
                if !s.contains(&Point::Nat(n)).ok()? {
                    continue;
                }
                let qpts: Vec<Point> = qs;
                let tminus = remove_finite_points(t, &qpts)?;
                parts.push(SetExpr::patch(vec![(n, tminus)], t.domain()).ok()?);
            }
            union_normalized(parts, &domain).ok()
        }
        Body::Patch(entries) => {
            let mut out = Vec::new();
            for (n, tr) in entries {
                let qs: Vec<Point> = pts
                    .iter()
                    .filter_map(|p| match p {
                        Point::Pair(m, q) if m == n => Some((**q).clone()),
                        _ => None,
                    })
                    .collect();
                out.push((*n, remove_finite_points(tr, &qs)?));
            }
            SetExpr::patch(out, domain.inner()?).ok()
        }
        Body::Graph {
            slope,
            intercept,
            rows,
        } => {
            let bad: Vec<u64> = pts
                .iter()
                .filter_map(|p| match p {
                    Point::Pair(n, q) => {
                        let expected = *slope as u128 * *n as u128 + *intercept as u128;
                        if q.as_nat().map(|m| m as u128 == expected).unwrap_or(false) {
                            Some(*n)
                        } else {
                            None
                        }
                    }
                    _ => None,
                })
                .collect();
            let rows = difference(rows, &SetExpr::fin_set(bad))?;
            SetExpr::graph(*slope, *intercept, rows).ok()
        }
        Body::Union(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(remove_finite_points(p, pts)?);
            }
            union_normalized(out, &domain).ok()
        }
        Body::AscSeq { .. } | Body::DescSeq { .. } => {
            // Dropping interior points of an affine sequence leaves the
            // affine family.
            let on_seq = pts.iter().any(|p| a.contains(p).unwrap_or(false));
            if on_seq {
                None
            } else {
                Some(a.clone())
            }
        }
        Body::OrdSum(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(OrdPart {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    part: remove_finite_points(&p.part, pts)?,
                });
            }
            SetExpr::ord_sum(out).ok()
        }
    }
}

/// Decide a ⊆ b when an exact route exists.
pub fn subset(a: &SetExpr, b: &SetExpr) -> Option<bool> {
    if a.is_empty() {
        return Some(true);
    }
    if let Some(pts) = a.enumerate_members() {
        for p in pts {
            if !b.contains(&p).ok()? {
                return Some(false);
            }
        }
        return Some(true);
    }
    if let Some(cb) = complement(b) {
        return Some(intersect(a, &cb).ok()?.is_empty());
    }
    if let Body::Union(parts) = a.body() {
        let mut all = true;
        for p in parts {
            match subset(p, b) {
                Some(true) => {}
                Some(false) => return Some(false),
                None => all = false,
            }
        }
        if all {
            return Some(true);
        }
    }
    // A definite non-member refutes inclusion.
    for p in a.enumerate_prefix(256) {
        if !b.contains(&p).ok()? {
            return Some(false);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Columns
// ---------------------------------------------------------------------------

/// The trace A ∩ K_n viewed inside the inner domain.
pub fn column_trace(a: &SetExpr, n: u64) -> Result<SetExpr> {
    let inner = a
        .domain()
        .inner()
        .ok_or_else(|| Error::domain_mismatch(&Domain::prod(Domain::Nat), a.domain()))?
        .clone();
    match a.body() {
        Body::FinPoints(v) => {
            let pts: Vec<Point> = v
                .iter()
                .filter(|(m, _)| *m == n)
                .map(|(_, p)| p.clone())
                .collect();
            Ok(finite_points_expr(&inner, pts))
        }
        Body::Cols(s, t) => {
            if s.contains(&Point::Nat(n))? {
                Ok((**t).clone())
            } else {
                Ok(SetExpr::empty(&inner))
            }
        }
        Body::Patch(entries) => Ok(entries
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| SetExpr::empty(&inner))),
        Body::Graph {
            slope,
            intercept,
            rows,
        } => {
            if rows.contains(&Point::Nat(n))? {
                let m = (*slope as u128) * (n as u128) + (*intercept as u128);
                let m = u64::try_from(m).map_err(|_| Error::Overflow("graph value"))?;
                Ok(SetExpr::fin_set(vec![m]))
            } else {
                Ok(SetExpr::empty(&inner))
            }
        }
        Body::Union(parts) => {
            let mut traces = Vec::new();
            for p in parts {
                traces.push(column_trace(p, n)?);
            }
            union_normalized(traces, &inner)
        }
        _ => Err(Error::domain_mismatch(&Domain::prod(inner), a.domain())),
    }
}

/// Column-trace descriptor, uniform over a region of columns: the trace is
/// `base`, plus one extra point per column when `plus_point` is set (the
/// graph case; the extra point varies with the column but is always a
/// nonempty finite addition, which no ideal-membership question can see).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDesc {
    pub base: SetExpr,
    pub plus_point: bool,
}

impl TraceDesc {
    pub fn is_empty(&self) -> bool {
        self.base.is_empty() && !self.plus_point
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite()
    }
}

/// One cell of a column summary: every column of `region` has, for each of
/// the summarized expressions, the trace described by the corresponding
/// `TraceDesc`.
#[derive(Debug, Clone)]
pub struct SummaryCell {
    pub region: SetExpr,
    pub traces: Vec<TraceDesc>,
}

/// Joint column summary of several product-domain expressions: finitely many
/// (region, per-expression trace) cells whose regions partition ℕ.
pub fn multi_column_summary(exprs: &[&SetExpr]) -> Result<Vec<SummaryCell>> {
    let domain = exprs
        .first()
        .map(|e| e.domain().clone())
        .ok_or_else(|| Error::ValidationError("empty summary request".into()))?;
    let inner = domain
        .inner()
        .ok_or_else(|| Error::domain_mismatch(&Domain::prod(Domain::Nat), &domain))?
        .clone();
    // Atoms: (owner index, row region, contribution).
    enum Contrib {
        Base(SetExpr),
        Point,
    }
    let mut atoms: Vec<(usize, SetExpr, Contrib)> = Vec::new();
    for (i, e) in exprs.iter().enumerate() {
        if e.domain() != &domain {
            return Err(Error::domain_mismatch(&domain, e.domain()));
        }
        for part in e.parts() {
            match part.body() {
                Body::FinPoints(_) | Body::Patch(_) => {
                    for n in mentioned_rows(part) {
                        let tr = column_trace(part, n)?;
                        atoms.push((i, SetExpr::fin_set(vec![n]), Contrib::Base(tr)));
                    }
                }
                Body::Cols(s, t) => {
                    atoms.push((i, (**s).clone(), Contrib::Base((**t).clone())));
                }
                Body::Graph { rows, .. } => {
                    atoms.push((i, (**rows).clone(), Contrib::Point));
                }
                _ if part.is_empty() => {}
                _ => {
                    return Err(Error::domain_mismatch(
                        &Domain::prod(inner.clone()),
                        part.domain(),
                    ))
                }
            }
        }
    }
    // Refine ℕ against every atom region.
    let mut cells: Vec<(SetExpr, Vec<usize>)> = vec![(SetExpr::cofin(vec![]), vec![])];
    for (idx, (_, region, _)) in atoms.iter().enumerate() {
        let mut next = Vec::new();
        for (cell, hits) in cells {
            let inside = intersect(&cell, region)?;
            let outside = difference(&cell, region)
                .ok_or_else(|| Error::NotClosed("nat difference".into()))?;
            if !inside.is_empty() {
                let mut h = hits.clone();
                h.push(idx);
                next.push((inside, h));
            }
            if !outside.is_empty() {
                next.push((outside, hits));
            }
        }
        cells = next;
    }
    let mut out = Vec::new();
    for (region, hits) in cells {
        let mut traces: Vec<TraceDesc> = exprs
            .iter()
            .map(|_| TraceDesc {
                base: SetExpr::empty(&inner),
                plus_point: false,
            })
            .collect();
        for idx in hits {
            let (owner, _, contrib) = &atoms[idx];
            match contrib {
                Contrib::Base(t) => {
                    traces[*owner].base = union(&traces[*owner].base, t)?;
                }
                Contrib::Point => traces[*owner].plus_point = true,
            }
        }
        out.push(SummaryCell { region, traces });
    }
    Ok(out)
}

/// Summary of a single expression.
pub fn column_summary(a: &SetExpr) -> Result<Vec<(SetExpr, TraceDesc)>> {
    Ok(multi_column_summary(&[a])?
        .into_iter()
        .map(|c| (c.region, c.traces.into_iter().next().unwrap()))
        .collect())
}

/// Rows whose trace is nonempty, as a Nat expression.
pub fn row_support(a: &SetExpr) -> Result<SetExpr> {
    let mut regions = Vec::new();
    for (region, desc) in column_summary(a)? {
        if !desc.is_empty() {
            regions.push(region);
        }
    }
    union_normalized(regions, &Domain::Nat)
}

/// {n : slope·n + intercept ∈ t} for a Nat-domain t.
pub fn affine_preimage(slope: u64, intercept: u64, t: &SetExpr) -> Result<SetExpr> {
    if t.domain() != &Domain::Nat {
        return Err(Error::domain_mismatch(&Domain::Nat, t.domain()));
    }
    if slope == 0 {
        return Ok(if t.contains(&Point::Nat(intercept))? {
            SetExpr::cofin(vec![])
        } else {
            SetExpr::empty(&Domain::Nat)
        });
    }
    match t.body() {
        Body::FinSet(v) => {
            let rows = v
                .iter()
                .filter(|m| **m >= intercept && (**m - intercept).is_multiple_of(slope))
                .map(|m| (m - intercept) / slope)
                .collect();
            Ok(SetExpr::fin_set(rows))
        }
        Body::CoFin(f) => {
            let bad: Vec<u64> = f
                .iter()
                .filter(|m| **m >= intercept && (**m - intercept).is_multiple_of(slope))
                .map(|m| (m - intercept) / slope)
                .collect();
            Ok(SetExpr::cofin(bad))
        }
        Body::Ap { offset, stride } => {
            // slope·n + intercept ≡ offset (mod stride), slope·n + intercept ≥ offset
            let g = gcd_u64(slope, *stride);
            let diff = (*offset as i128) - (intercept as i128);
            if diff.rem_euclid(g as i128) != 0 {
                return Ok(SetExpr::empty(&Domain::Nat));
            }
            let m = (*stride / g) as i128;
            let (_, inv, _) = ext_gcd((slope / g) as i128, m);
            let mut n0 = ((diff / g as i128) % m * (inv % m)) % m;
            n0 = ((n0 % m) + m) % m;
            // Raise n0 until slope·n0 + intercept ≥ offset.
            let step = m as u128;
            let mut n = n0 as u128;
            while (slope as u128) * n + (intercept as u128) < *offset as u128 {
                n += step;
            }
            let n = u64::try_from(n).map_err(|_| Error::Overflow("affine preimage"))?;
            let stride_out = u64::try_from(step).map_err(|_| Error::Overflow("affine preimage"))?;
            SetExpr::ap(n, stride_out)
        }
        Body::Union(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(affine_preimage(slope, intercept, p)?);
            }
            union_normalized(out, &Domain::Nat)
        }
        _ => Err(Error::NotClosed("affine preimage".into())),
    }
}

// ---------------------------------------------------------------------------
// Rational reversal
// ---------------------------------------------------------------------------

/// Pointwise negation of a rational set; realizes the order reversal of ℚ.
pub fn reverse_rationals(a: &SetExpr) -> Result<SetExpr> {
    if a.domain() != &Domain::Rat {
        return Err(Error::domain_mismatch(&Domain::Rat, a.domain()));
    }
    match a.body() {
        Body::FinRat(v) => Ok(SetExpr::fin_rat(v.iter().map(|q| -q).collect())),
        Body::AscSeq { limit, scale } => SetExpr::desc_seq(-limit, scale.clone()),
        Body::DescSeq { limit, scale } => SetExpr::asc_seq(-limit, scale.clone()),
        Body::OrdSum(parts) => {
            let mut out = Vec::new();
            for p in parts.iter().rev() {
                out.push(OrdPart {
                    lo: -&p.hi,
                    hi: -&p.lo,
                    part: reverse_rationals(&p.part)?,
                });
            }
            SetExpr::ord_sum(out)
        }
        Body::Union(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.push(reverse_rationals(p)?);
            }
            union_normalized(out, &Domain::Rat)
        }
        _ => unreachable!("rat domain"),
    }
}

/// Structural well-order certificate for rational sets: finite sets and
/// ascending sequences are well-ordered; a descending sequence never is;
/// ordered sums and finite unions preserve the property.
pub fn is_well_ordered(a: &SetExpr) -> Result<bool> {
    if a.domain() != &Domain::Rat {
        return Err(Error::domain_mismatch(&Domain::Rat, a.domain()));
    }
    Ok(match a.body() {
        Body::FinRat(_) => true,
        Body::AscSeq { .. } => true,
        Body::DescSeq { .. } => false,
        Body::OrdSum(parts) => {
            let mut ok = true;
            for p in parts {
                ok &= is_well_ordered(&p.part)?;
            }
            ok
        }
        Body::Union(parts) => {
            let mut ok = true;
            for p in parts {
                ok &= is_well_ordered(p)?;
            }
            ok
        }
        _ => unreachable!("rat domain"),
    })
}
