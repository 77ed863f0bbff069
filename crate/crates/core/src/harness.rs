//! Seeded verification harnesses for operators and Katětov reductions.
//!
//! Trials are deterministic in the seed: a fixed corpus prefix first, then
//! pseudo-random extensions from a splitmix generator. Counterexamples are
//! shrunk by term deletion, then by region shrinking, and re-verify from the
//! seed alone.

use num_traits::Zero;

use crate::c0::in_c0i;
use crate::corpus::refinement_pool;
use crate::domain::{enumerate_domain, Domain, Point};
use crate::error::{Error, Result};
use crate::ideal::IdealExpr;
use crate::index_map::IndexMap;
use crate::op::{IndexOp, RestrictionEmbed};
use crate::rat::{rat, rat_int, Rat};
use crate::seq::{combine, LatticeOp, SimpleSeq};
use crate::set_expr::SetExpr;
use crate::set_ops;

/// splitmix64; frozen so that reports are reproducible across releases.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

/// Outcome of one checked law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    /// Failures of laws that cannot hold for the operator under test (a
    /// signed operator is no lattice morphism) are flagged, not errors.
    pub expected_failure: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub passed: bool,
    pub trials: u64,
    pub seed: u64,
    pub laws: Vec<LawResult>,
    pub flags: Vec<String>,
}

impl Report {
    fn finish(trials: u64, seed: u64, laws: Vec<LawResult>, flags: Vec<String>) -> Report {
        let passed = laws.iter().all(|l| l.passed || l.expected_failure);
        Report {
            passed,
            trials,
            seed,
            laws,
            flags,
        }
    }

    pub fn counterexample(&self) -> Option<&str> {
        self.laws
            .iter()
            .find(|l| !l.passed && !l.expected_failure)
            .and_then(|l| l.counterexample.as_deref())
    }
}

const COEFF_POOL: [(i64, i64); 8] = [
    (1, 1),
    (-1, 1),
    (1, 2),
    (-1, 2),
    (2, 1),
    (3, 2),
    (-3, 1),
    (1, 3),
];

/// Deterministic simple-sequence generator over a domain corpus: up to three
/// pairwise disjoint corpus regions with small rational coefficients.
pub fn gen_seq(rng: &mut Rng, domain: &Domain, corpus: &[SetExpr]) -> SimpleSeq {
    let candidates: Vec<&SetExpr> = corpus.iter().filter(|e| !e.is_empty()).collect();
    if candidates.is_empty() {
        return SimpleSeq::zero(domain.clone());
    }
    let want = 1 + rng.below(3) as usize;
    let mut terms: Vec<(Rat, SetExpr)> = Vec::new();
    let mut attempts = 0;
    while terms.len() < want && attempts < 24 {
        attempts += 1;
        let region = (*rng.pick(&candidates)).clone();
        let disjoint = terms.iter().all(|(_, r)| {
            set_ops::intersect(r, &region)
                .map(|m| m.is_empty())
                .unwrap_or(false)
        });
        if !disjoint {
            continue;
        }
        let (n, d) = *rng.pick(&COEFF_POOL);
        terms.push((rat(n, d), region));
    }
    SimpleSeq::from_disjoint(domain.clone(), terms)
}

/// Exact extensional equality of two simple sequences: their difference
/// refines to the zero sequence.
pub fn seq_eq(a: &SimpleSeq, b: &SimpleSeq) -> Result<bool> {
    Ok(combine(LatticeOp::Add, a, &b.negate())?.is_zero())
}

fn shrink_seq(x: &SimpleSeq, still_fails: &mut dyn FnMut(&SimpleSeq) -> bool) -> SimpleSeq {
    let mut best = x.clone();
    // Term deletion.
    loop {
        let mut improved = false;
        for i in 0..best.terms().len() {
            let mut terms = best.terms().to_vec();
            terms.remove(i);
            let candidate = SimpleSeq::from_disjoint(best.domain().clone(), terms);
            if still_fails(&candidate) {
                best = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    // Region shrinking: cut each region down to its first few points.
    for i in 0..best.terms().len() {
        let (c, r) = best.terms()[i].clone();
        for keep in [1usize, 2, 4] {
            let pts = r.enumerate_prefix(keep * 8);
            if pts.is_empty() {
                continue;
            }
            let small =
                set_ops::finite_points_expr(best.domain(), pts.into_iter().take(keep).collect());
            let mut terms = best.terms().to_vec();
            terms[i] = (c.clone(), small);
            let candidate = SimpleSeq::from_disjoint(best.domain().clone(), terms);
            if still_fails(&candidate) {
                best = candidate;
                break;
            }
        }
    }
    best
}

/// Laws of an into Banach lattice isometry for a representable operator:
/// norm preservation, additivity, meet preservation, and membership
/// transport from c₀ of `source_ideal` into c₀ of `target_ideal`.
pub fn check_isometry_lattice(
    op: &IndexOp,
    source_ideal: &IdealExpr,
    target_ideal: &IdealExpr,
    trials: u64,
    seed: u64,
) -> Result<Report> {
    let source = op.source();
    // Keep only regions the map can pull back symbolically; pairing maps,
    // for instance, have no rule for progressions of codes.
    let corpus: Vec<SetExpr> = refinement_pool(&source)
        .into_iter()
        .filter(|r| op.map().preimage(r).is_ok())
        .collect();
    let mut rng = Rng::new(seed);
    let mut flags = Vec::new();
    flags.push(format!("generator pool size: {}", corpus.len()));
    if op.has_negative_part() {
        flags.push("signed operator: lattice-morphism law expected to fail".into());
    }
    if !op.map().is_bijective() {
        flags.push("index map not bijective: norm preservation not guaranteed".into());
    }
    let bijective = op.map().is_bijective();

    let mut norm = LawResult {
        law: "sup_norm(Tx) = sup_norm(x)".into(),
        passed: true,
        expected_failure: !bijective,
        counterexample: None,
    };
    let mut additive = LawResult {
        law: "T(x+y) = Tx + Ty".into(),
        passed: true,
        expected_failure: false,
        counterexample: None,
    };
    let mut meet = LawResult {
        law: "T(x ∧ y) = Tx ∧ Ty".into(),
        passed: true,
        expected_failure: op.has_negative_part(),
        counterexample: None,
    };
    let mut transport = LawResult {
        law: "x ∈ c₀(I) ⇒ Tx ∈ c₀(J)".into(),
        passed: true,
        expected_failure: false,
        counterexample: None,
    };

    // Deterministic prefix: indicator pairs straight off the pool, then
    // pseudo-random extensions.
    let fixed: Vec<SimpleSeq> = corpus.iter().map(SimpleSeq::char_fn).collect();
    for trial in 0..trials {
        let (x, y) = if !fixed.is_empty() && (trial as usize) < fixed.len() * 2 {
            let i = trial as usize;
            let x = fixed[i / 2 % fixed.len()].clone();
            let y = fixed[(i / 2 + 1 + i % 2) % fixed.len()].clone();
            (x, y)
        } else {
            (gen_seq(&mut rng, &source, &corpus), gen_seq(&mut rng, &source, &corpus))
        };
        let tx = op.apply(&x)?;
        let ty = op.apply(&y)?;

        if norm.passed && tx.sup_norm() != x.sup_norm() {
            norm.passed = false;
            let shrunk = shrink_seq(&x, &mut |c| {
                op.apply(c)
                    .map(|tc| tc.sup_norm() != c.sup_norm())
                    .unwrap_or(false)
            });
            norm.counterexample = Some(format!("x = {shrunk}"));
        }
        if additive.passed {
            let lhs = op.apply(&combine(LatticeOp::Add, &x, &y)?)?;
            let rhs = combine(LatticeOp::Add, &tx, &ty)?;
            if !seq_eq(&lhs, &rhs)? {
                additive.passed = false;
                additive.counterexample = Some(format!("x = {x}, y = {y}"));
            }
        }
        if meet.passed {
            let lhs = op.apply(&combine(LatticeOp::Meet, &x, &y)?)?;
            let rhs = combine(LatticeOp::Meet, &tx, &ty)?;
            if !seq_eq(&lhs, &rhs)? {
                meet.passed = false;
                let witness = find_meet_counterexample(op, &x, &y)?;
                meet.counterexample = Some(witness);
            }
        }
        if transport.passed {
            let in_src = in_c0i(source_ideal, &x)?;
            if in_src.holds && !in_c0i(target_ideal, &tx)?.holds {
                transport.passed = false;
                let shrunk = shrink_seq(&x, &mut |c| {
                    in_c0i(source_ideal, c).map(|v| v.holds).unwrap_or(false)
                        && op
                            .apply(c)
                            .and_then(|tc| in_c0i(target_ideal, &tc))
                            .map(|v| !v.holds)
                            .unwrap_or(false)
                });
                transport.counterexample = Some(format!("x = {shrunk}"));
            }
        }
    }
    Ok(Report::finish(
        trials,
        seed,
        vec![norm, additive, meet, transport],
        flags,
    ))
}

/// Locate a concrete index where the meet law breaks.
fn find_meet_counterexample(op: &IndexOp, x: &SimpleSeq, y: &SimpleSeq) -> Result<String> {
    let lhs = op.apply(&combine(LatticeOp::Meet, x, y)?)?;
    let tx = op.apply(x)?;
    let ty = op.apply(y)?;
    let rhs = combine(LatticeOp::Meet, &tx, &ty)?;
    for p in enumerate_domain(&op.target(), 1000) {
        if lhs.value_at(&p)? != rhs.value_at(&p)? {
            return Ok(format!("x = {x}, y = {y}, index {p}"));
        }
    }
    Ok(format!("x = {x}, y = {y}"))
}

/// Verify a Katětov reduction on a corpus: every corpus member of `upper`
/// must pull back into `lower`. Also records bijectivity, which (for these
/// representable maps) is equivalent to the image being an ideal.
pub fn check_katetov(
    map: &IndexMap,
    upper: &IdealExpr,
    lower: &IdealExpr,
    corpus: &[SetExpr],
) -> Result<Report> {
    if &map.target() != upper.domain() {
        return Err(Error::domain_mismatch(upper.domain(), &map.target()));
    }
    if &map.source() != lower.domain() {
        return Err(Error::domain_mismatch(lower.domain(), &map.source()));
    }
    let mut law = LawResult {
        law: "A ∈ I ⇒ h⁻¹(A) ∈ J".into(),
        passed: true,
        expected_failure: false,
        counterexample: None,
    };
    let mut trials = 0;
    for a in corpus {
        if a.domain() != upper.domain() {
            continue;
        }
        let in_upper = match crate::member::member(upper, a) {
            Ok(v) => v.holds,
            Err(Error::DomainMismatch { .. }) => false,
            Err(e) => return Err(e),
        };
        if !in_upper {
            continue;
        }
        trials += 1;
        let pre = match map.preimage(a) {
            Ok(p) => p,
            Err(Error::NotClosed(_)) => continue,
            Err(e) => return Err(e),
        };
        let in_lower = match crate::member::member(lower, &pre) {
            Ok(v) => v.holds,
            // Escaping a restriction carrier refutes membership.
            Err(Error::DomainMismatch { .. }) => false,
            Err(e) => return Err(e),
        };
        if !in_lower {
            law.passed = false;
            law.counterexample = Some(format!("A = {a}, preimage = {pre}"));
            break;
        }
    }
    let bijective = map.is_bijective();
    let flags = vec![
        format!("bijective: {bijective}"),
        format!("image-is-ideal: {bijective}"),
    ];
    Ok(Report::finish(trials, 0, vec![law], flags))
}

/// An operator whose compatibility with the two covering conditions is
/// examined: a representable operator or an extension-by-zero embedding.
pub enum TestedOp {
    Index(IndexOp),
    Restriction(RestrictionEmbed),
}

impl TestedOp {
    fn apply(&self, x: &SimpleSeq) -> Result<SimpleSeq> {
        match self {
            TestedOp::Index(t) => t.apply(x),
            TestedOp::Restriction(e) => e.apply(x),
        }
    }

    fn target(&self) -> Domain {
        match self {
            TestedOp::Index(t) => t.target(),
            TestedOp::Restriction(e) => e.carrier.domain().clone(),
        }
    }

    fn source_domain(&self) -> Domain {
        match self {
            TestedOp::Index(t) => t.source(),
            TestedOp::Restriction(e) => e.carrier.domain().clone(),
        }
    }
}

/// The two covering conditions:
/// (1) every sampled target index is hit with value 1 by the image of some
///     indicator of an ideal member;
/// (2) whenever a sampled finite family has empty intersection, the meet of
///     the transported indicators vanishes, pointwise on a 1000-point prefix
///     and structurally.
pub fn check_ht_conditions(
    op: &TestedOp,
    ideal: &IdealExpr,
    sample: &[Point],
    families: &[Vec<SetExpr>],
) -> Result<Report> {
    let mut cond1 = LawResult {
        law: "every index is covered: T χ_A(n) = 1 for some A ∈ I".into(),
        passed: true,
        expected_failure: false,
        counterexample: None,
    };
    for n in sample {
        let witness: Option<SetExpr> = match op {
            TestedOp::Index(t) => {
                if t.sign_at(n)? > 0 {
                    let image = t.map().apply_point(n)?;
                    Some(set_ops::finite_points_expr(&t.source(), vec![image]))
                } else {
                    None
                }
            }
            TestedOp::Restriction(e) => {
                if e.carrier.contains(n)? {
                    Some(set_ops::finite_points_expr(
                        e.carrier.domain(),
                        vec![n.clone()],
                    ))
                } else {
                    // Every image vanishes off the carrier.
                    None
                }
            }
        };
        let covered = match witness {
            Some(a) => {
                // Finite sets belong to every shipped ideal.
                debug_assert!(crate::member::member(ideal, &a)
                    .map(|v| v.holds)
                    .unwrap_or(true));
                op.apply(&SimpleSeq::char_fn(&a))?.value_at(n)? == rat_int(1)
            }
            None => false,
        };
        if !covered {
            cond1.passed = false;
            cond1.counterexample = Some(format!("index {n}"));
            break;
        }
    }

    let mut cond2 = LawResult {
        law: "families with empty intersection have vanishing meets".into(),
        passed: true,
        expected_failure: false,
        counterexample: None,
    };
    let mut checked_families = 0;
    for family in families {
        if family.is_empty() {
            continue;
        }
        let mut meet_set = family[0].clone();
        for a in &family[1..] {
            meet_set = set_ops::intersect(&meet_set, a)?;
        }
        if !meet_set.is_empty() {
            continue; // condition only quantifies over empty intersections
        }
        checked_families += 1;
        let mut meet_seq = op.apply(&SimpleSeq::char_fn(&family[0]))?;
        for a in &family[1..] {
            let ta = op.apply(&SimpleSeq::char_fn(a))?;
            meet_seq = combine(LatticeOp::Meet, &meet_seq, &ta)?;
        }
        let structurally_zero = meet_seq.is_zero();
        let prefix_zero = enumerate_domain(&op.target(), 1000)
            .iter()
            .all(|p| meet_seq.value_at(p).map(|v| v.is_zero()).unwrap_or(false));
        if !(structurally_zero && prefix_zero) {
            cond2.passed = false;
            cond2.counterexample = Some(format!("family of {} sets", family.len()));
            break;
        }
    }

    let flags = vec![
        format!("sampled indices: {}", sample.len()),
        format!("families with empty intersection: {checked_families}"),
        format!("source domain: {}", op.source_domain()),
    ];
    Ok(Report::finish(
        sample.len() as u64 + checked_families,
        0,
        vec![cond1, cond2],
        flags,
    ))
}
