use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use idealcalc_core::c0::{ideal_limsup, in_c0i};
use idealcalc_core::corpus::{refinement_pool, standard_corpus};
use idealcalc_core::domain::Domain;
use idealcalc_core::harness::{gen_seq, Rng};
use idealcalc_core::ideal::IdealExpr;
use idealcalc_core::member::member;
use idealcalc_core::set_ops;

fn bench_set_algebra(c: &mut Criterion) {
    let corpus = standard_corpus(&Domain::nat_pairs());
    c.bench_function("intersect/nat_pairs_corpus_pair", |b| {
        let a = &corpus[corpus.len() / 3];
        let x = &corpus[2 * corpus.len() / 3];
        b.iter(|| set_ops::intersect(black_box(a), black_box(x)).unwrap())
    });
    c.bench_function("column_summary/nat_pairs", |b| {
        let a = &corpus[2 * corpus.len() / 3];
        b.iter(|| set_ops::column_summary(black_box(a)).unwrap())
    });
}

fn bench_membership(c: &mut Criterion) {
    let corpus = standard_corpus(&Domain::nat_pairs());
    let fubini =
        IdealExpr::fubini(IdealExpr::fin(Domain::Nat), IdealExpr::fin(Domain::Nat)).unwrap();
    c.bench_function("member/fubini_over_corpus", |b| {
        b.iter(|| {
            for a in corpus.iter().step_by(7) {
                let _ = black_box(member(&fubini, a));
            }
        })
    });
    let perp = IdealExpr::perp(IdealExpr::omega_sum(IdealExpr::fin(Domain::Nat)));
    c.bench_function("member/omegasum_perp_over_corpus", |b| {
        b.iter(|| {
            for a in corpus.iter().step_by(7) {
                let _ = black_box(member(&perp, a));
            }
        })
    });
}

fn bench_sequences(c: &mut Criterion) {
    let domain = Domain::nat_pairs();
    let pool = refinement_pool(&domain);
    let mut rng = Rng::new(7);
    let seqs: Vec<_> = (0..16).map(|_| gen_seq(&mut rng, &domain, &pool)).collect();
    let sum_fin = IdealExpr::omega_sum(IdealExpr::fin(Domain::Nat));
    c.bench_function("in_c0i/omegasum_fin", |b| {
        b.iter(|| {
            for x in &seqs {
                let _ = black_box(in_c0i(&sum_fin, x));
            }
        })
    });
    c.bench_function("ideal_limsup/omegasum_fin", |b| {
        b.iter(|| {
            for x in &seqs {
                let _ = black_box(ideal_limsup(&sum_fin, &x.abs()));
            }
        })
    });
}

criterion_group!(
    benches,
    bench_set_algebra,
    bench_membership,
    bench_sequences
);
criterion_main!(benches);
