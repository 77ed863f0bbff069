//! Laws of the sequence spaces: linearity and domination of c₀,ᵢ
//! membership, the lattice ideal property, monotonicity and translation of
//! the I-limsup, the factor-2 bracketing, c₀-disjointness and tallness.

use idealcalc_core::c0::{c0_disjoint, ideal_limsup, in_c0i, quotient_norm, Limsup};
use idealcalc_core::classify::is_tall;
use idealcalc_core::corpus::{refinement_pool, standard_corpus};
use idealcalc_core::domain::{enumerate_domain, Domain};
use idealcalc_core::error::Error;
use idealcalc_core::harness::{gen_seq, Rng};
use idealcalc_core::ideal::IdealExpr;
use idealcalc_core::member::member;
use idealcalc_core::rat::{rat, rat_int, rat_zero, Rat};
use idealcalc_core::seq::{combine, LatticeOp, SimpleSeq};
use idealcalc_core::set_expr::SetExpr;
use num_traits::Signed;

fn fin(domain: &Domain) -> IdealExpr {
    IdealExpr::fin(domain.clone())
}

fn sum_fin() -> IdealExpr {
    IdealExpr::omega_sum(IdealExpr::fin(Domain::Nat))
}

fn seq_pool(domain: &Domain, count: usize, seed: u64) -> Vec<SimpleSeq> {
    let corpus = refinement_pool(domain);
    let mut rng = Rng::new(seed);
    (0..count)
        .map(|_| gen_seq(&mut rng, domain, &corpus))
        .collect()
}

fn ideals_for(domain: &Domain) -> Vec<IdealExpr> {
    let mut out = vec![fin(domain), IdealExpr::pow(domain.clone())];
    if let Domain::Prod(inner) = domain {
        out.push(IdealExpr::omega_sum(IdealExpr::fin((**inner).clone())));
        out.push(IdealExpr::perp(IdealExpr::omega_sum(IdealExpr::fin(
            (**inner).clone(),
        ))));
        out.push(
            IdealExpr::fubini(
                IdealExpr::fin(Domain::Nat),
                IdealExpr::fin((**inner).clone()),
            )
            .unwrap(),
        );
    }
    if domain == &Domain::Rat {
        out.push(IdealExpr::wo());
        out.push(IdealExpr::wo_rev());
    }
    out
}

#[test]
fn linearity_of_membership() {
    for domain in [Domain::Nat, Domain::nat_pairs()] {
        let pool = seq_pool(&domain, 24, 11);
        for ideal in ideals_for(&domain) {
            for x in &pool {
                for y in &pool {
                    let (vx, vy) = (in_c0i(&ideal, x).unwrap(), in_c0i(&ideal, y).unwrap());
                    if vx.holds && vy.holds {
                        let sum = combine(LatticeOp::Add, x, y).unwrap();
                        assert!(in_c0i(&ideal, &sum).unwrap().holds, "{ideal}: {x} + {y}");
                    }
                    if vx.holds {
                        let scaled = x.scale(&rat(-7, 3));
                        assert!(in_c0i(&ideal, &scaled).unwrap().holds);
                    }
                }
            }
        }
    }
}

#[test]
fn domination_and_lattice_ideal_property() {
    let domain = Domain::nat_pairs();
    let pool = seq_pool(&domain, 30, 23);
    for ideal in ideals_for(&domain) {
        for x in &pool {
            let vx = in_c0i(&ideal, x).unwrap().holds;
            // A dominated sequence: same regions, shrunk coefficients.
            let dominated = x.scale(&rat(1, 3));
            if vx {
                assert!(in_c0i(&ideal, &dominated).unwrap().holds);
                assert!(in_c0i(&ideal, &x.abs()).unwrap().holds);
            }
            // Meet with anything stays inside (the lattice ideal property).
            for y in pool.iter().take(8) {
                if vx {
                    let meet = combine(LatticeOp::Meet, &x.abs(), &y.abs()).unwrap();
                    assert!(
                        in_c0i(&ideal, &meet).unwrap().holds,
                        "{ideal}: |{x}| ∧ |{y}|"
                    );
                }
            }
        }
    }
}

fn limsup_le(a: &Limsup, b: &Limsup) -> bool {
    match (a, b) {
        (Limsup::MinusInfinity, _) => true,
        (_, Limsup::MinusInfinity) => false,
        (Limsup::Finite(x), Limsup::Finite(y)) => x <= y,
    }
}

#[test]
fn limsup_monotone_and_translation() {
    for domain in [Domain::Nat, Domain::nat_pairs()] {
        let pool = seq_pool(&domain, 20, 37);
        let proper: Vec<IdealExpr> = ideals_for(&domain)
            .into_iter()
            .filter(|i| !idealcalc_core::member::contains_all(i).unwrap())
            .collect();
        let full = SetExpr::full(&domain).unwrap();
        for ideal in &proper {
            for x in &pool {
                // Monotonicity: x ≤ x + |y|.
                for y in pool.iter().take(6) {
                    let larger = combine(LatticeOp::Add, x, &y.abs()).unwrap();
                    let lx = ideal_limsup(ideal, x).unwrap();
                    let ly = ideal_limsup(ideal, &larger).unwrap();
                    assert!(limsup_le(&lx, &ly), "{ideal}: {x} vs {larger}");
                }
                // Translation by c on the whole domain.
                let c = rat(5, 2);
                let shifted =
                    combine(LatticeOp::Add, x, &SimpleSeq::char_fn(&full).scale(&c)).unwrap();
                let base = ideal_limsup(ideal, x).unwrap();
                let moved = ideal_limsup(ideal, &shifted).unwrap();
                match (base, moved) {
                    (Limsup::Finite(b), Limsup::Finite(m)) => {
                        assert_eq!(m, b + &c, "{ideal}: translation of {x}")
                    }
                    other => panic!("proper ideals give finite limsups, got {other:?}"),
                }
            }
        }
    }
}

#[test]
fn factor_two_bracketing() {
    let deltas = [rat(1, 4), rat(1, 2), rat_int(1)];
    for domain in [Domain::Nat, Domain::nat_pairs()] {
        let pool = seq_pool(&domain, 24, 51);
        for ideal in ideals_for(&domain) {
            for x in &pool {
                let ax = x.abs();
                for delta in &deltas {
                    let level = ax.level_set(delta).unwrap();
                    let in_ideal = member(&ideal, &level).unwrap().holds;
                    let ls = ideal_limsup(&ideal, &ax).unwrap();
                    if in_ideal {
                        assert!(
                            limsup_le(&ls, &Limsup::Finite(delta.clone())),
                            "claim (1) broke: {ideal}, {x}, δ={delta}"
                        );
                    }
                    if limsup_le(&ls, &Limsup::Finite(delta.clone())) {
                        let two_delta = delta * Rat::from_integer(2.into());
                        let level2 = ax.level_set(&two_delta).unwrap();
                        assert!(
                            member(&ideal, &level2).unwrap().holds,
                            "claim (2) broke: {ideal}, {x}, δ={delta}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_norm_agrees_with_membership() {
    for domain in [Domain::Nat, Domain::nat_pairs()] {
        let pool = seq_pool(&domain, 30, 77);
        for ideal in ideals_for(&domain) {
            for x in &pool {
                let qn = quotient_norm(&ideal, x).unwrap();
                let inside = in_c0i(&ideal, x).unwrap().holds;
                assert_eq!(qn == rat_zero(), inside, "{ideal}, {x}");
                assert!(qn <= x.sup_norm());
            }
        }
    }
}

#[test]
fn c0_disjointness_of_orthogonal_pairs() {
    // Pairs (I, J) with I ⊆ J^⊥, verified on the corpus first.
    let pairs = vec![
        (IdealExpr::perp(sum_fin()), sum_fin(), Domain::nat_pairs()),
        (fin(&Domain::Nat), IdealExpr::pow(Domain::Nat), Domain::Nat),
        (IdealExpr::wo(), IdealExpr::wo_rev(), Domain::Rat),
    ];
    for (left, right, domain) in pairs {
        let perp_right = IdealExpr::perp(right.clone());
        for a in standard_corpus(&domain) {
            let in_left = match member(&left, &a) {
                Ok(v) => v.holds,
                Err(_) => continue,
            };
            if in_left {
                match member(&perp_right, &a) {
                    Ok(v) => assert!(v.holds, "I ⊄ J^⊥ at {a}"),
                    Err(Error::Undecidable(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
        // Disjointness of the spaces on generated pairs.
        let pool = seq_pool(&domain, 20, 91);
        for x in &pool {
            if !in_c0i(&left, x).map(|v| v.holds).unwrap_or(false) {
                continue;
            }
            for y in &pool {
                if !in_c0i(&right, y).map(|v| v.holds).unwrap_or(false) {
                    continue;
                }
                assert!(c0_disjoint(x, y).unwrap(), "x = {x}, y = {y}");
            }
        }
    }
}

#[test]
fn c0_disjointness_witness_direction() {
    // For x outside c₀ of I^⊥, some C = level ∩ B (B ∈ I) is infinite and
    // χ_C breaks c₀-disjointness with x.
    let ideal = sum_fin();
    let perp = IdealExpr::perp(ideal.clone());
    let domain = Domain::nat_pairs();
    let corpus = standard_corpus(&domain);
    let pool = seq_pool(&domain, 40, 13);
    let mut exercised = 0;
    for x in &pool {
        if in_c0i(&perp, x).map(|v| v.holds).unwrap_or(true) {
            continue;
        }
        let ax = x.abs();
        for level in ax.abs_levels() {
            let level_set = ax.level_set(&level).unwrap();
            if member(&perp, &level_set).unwrap().holds {
                continue;
            }
            for b in &corpus {
                if !member(&ideal, b).map(|v| v.holds).unwrap_or(false) {
                    continue;
                }
                let c = idealcalc_core::set_ops::intersect(&level_set, b).unwrap();
                if c.is_finite() {
                    continue;
                }
                let witness = SimpleSeq::char_fn(&c);
                assert!(!c0_disjoint(x, &witness).unwrap(), "x = {x}, C = {c}");
                exercised += 1;
            }
        }
    }
    assert!(
        exercised > 10,
        "witness direction exercised only {exercised} times"
    );
}

#[test]
fn tallness_matches_collapse_of_the_orthogonal() {
    use idealcalc_core::ordinal::OrdinalCnf;
    let catalog: Vec<IdealExpr> = vec![
        IdealExpr::catalog_p(OrdinalCnf::zero()).unwrap(),
        IdealExpr::catalog_q(OrdinalCnf::zero()).unwrap(),
        IdealExpr::catalog_p(OrdinalCnf::finite(1)).unwrap(),
        IdealExpr::catalog_q(OrdinalCnf::finite(1)).unwrap(),
    ];
    for ideal in catalog {
        let tall = is_tall(&ideal).unwrap().holds;
        // Tall ⟺ c₀ of the orthogonal collapses to c₀ (= c₀,Fin).
        let perp = idealcalc_core::ideal::perp_normalize(&IdealExpr::perp(ideal.clone()));
        let mut pool = seq_pool(ideal.domain(), 20, 29);
        // Indicators of the set corpus widen the reach of the comparison.
        pool.extend(
            standard_corpus(ideal.domain())
                .iter()
                .step_by(3)
                .map(SimpleSeq::char_fn),
        );
        let collapse =
            pool.iter().all(
                |x| match (in_c0i(&perp, x), in_c0i(&fin(ideal.domain()), x)) {
                    (Ok(a), Ok(b)) => a.holds == b.holds,
                    _ => true,
                },
            );
        assert_eq!(tall, collapse, "at {ideal}");
    }
}

#[test]
fn sup_norm_matches_prefix_maximum() {
    let domain = Domain::nat_pairs();
    let pool = seq_pool(&domain, 40, 99);
    for x in &pool {
        let norm = x.sup_norm();
        let mut best = rat_zero();
        let mut attained = false;
        for p in enumerate_domain(&domain, 1000) {
            let v = x.value_at(&p).unwrap().abs();
            if v > best {
                best = v;
            }
            if best == norm {
                attained = true;
                break;
            }
        }
        assert!(best <= norm);
        // When the maximal region meets the prefix, the norm is attained.
        if !attained {
            let heavy: Vec<&SetExpr> = x
                .terms()
                .iter()
                .filter(|(c, _)| c.abs() == norm)
                .map(|(_, r)| r)
                .collect();
            for r in heavy {
                assert!(
                    r.enumerate_prefix(1000).is_empty(),
                    "norm region met the prefix but the norm was not attained: {x}"
                );
            }
        }
    }
}
