//! The standard generated set corpus: all basic shapes with small
//! parameters, unions of up to three parts, nested to the depth of the
//! domain. Deterministic, so corpus-based verdicts are reproducible.

use crate::domain::{enumerate_domain, Domain};
use crate::error::Result;
use crate::rat::{rat, rat_int};
use crate::set_expr::{OrdPart, SetExpr};

fn nat_basics() -> Vec<SetExpr> {
    let mut out = vec![
        SetExpr::empty(&Domain::Nat),
        SetExpr::fin_set(vec![0]),
        SetExpr::fin_set(vec![5]),
        SetExpr::fin_set(vec![0, 1, 2, 3]),
        SetExpr::fin_set(vec![1, 3, 5, 7]),
        SetExpr::fin_set((0..8).collect()),
        SetExpr::cofin(vec![]),
        SetExpr::cofin(vec![0]),
        SetExpr::cofin(vec![1, 2]),
        SetExpr::cofin((0..5).collect()),
    ];
    for (a, b) in [
        (0, 1),
        (0, 2),
        (1, 2),
        (0, 3),
        (2, 3),
        (0, 4),
        (3, 4),
        (1, 6),
        (5, 7),
        (0, 8),
    ] {
        out.push(SetExpr::ap(a, b).expect("stride >= 1"));
    }
    out
}

fn rat_basics() -> Vec<SetExpr> {
    let mut out = vec![
        SetExpr::empty(&Domain::Rat),
        SetExpr::fin_rat(vec![rat_int(0)]),
        SetExpr::fin_rat(vec![rat(1, 2), rat(-3, 1)]),
        SetExpr::fin_rat(vec![rat_int(0), rat_int(1), rat_int(2)]),
    ];
    for (q, r) in [
        (rat_int(0), rat_int(1)),
        (rat_int(1), rat_int(1)),
        (rat_int(1), rat(1, 2)),
        (rat(-1, 1), rat_int(2)),
    ] {
        out.push(SetExpr::asc_seq(q, r).expect("scale > 0"));
    }
    for (q, r) in [
        (rat_int(0), rat_int(1)),
        (rat_int(0), rat_int(2)),
        (rat(1, 2), rat(1, 3)),
    ] {
        out.push(SetExpr::desc_seq(q, r).expect("scale > 0"));
    }
    out.push(
        SetExpr::ord_sum(vec![
            OrdPart {
                lo: rat_int(0),
                hi: rat_int(1),
                part: SetExpr::asc_seq(rat_int(1), rat(1, 2)).unwrap(),
            },
            OrdPart {
                lo: rat_int(1),
                hi: rat_int(3),
                part: SetExpr::fin_rat(vec![rat_int(2)]),
            },
        ])
        .unwrap(),
    );
    out.push(
        SetExpr::ord_sum(vec![
            OrdPart {
                lo: rat_int(0),
                hi: rat_int(1),
                part: SetExpr::desc_seq(rat(1, 4), rat(1, 2)).unwrap(),
            },
            OrdPart {
                lo: rat_int(1),
                hi: rat_int(2),
                part: SetExpr::asc_seq(rat_int(2), rat(1, 2)).unwrap(),
            },
        ])
        .unwrap(),
    );
    out
}

/// A spread-out sample of `k` elements, always keeping the ends.
fn sample<T: Clone>(items: &[T], k: usize) -> Vec<T> {
    if items.len() <= k {
        return items.to_vec();
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let idx = i * (items.len() - 1) / (k - 1);
        out.push(items[idx].clone());
    }
    out
}

fn prod_basics(inner: &Domain) -> Result<Vec<SetExpr>> {
    let domain = Domain::prod(inner.clone());
    let inner_corpus = standard_corpus(inner);
    let inner_sample: Vec<SetExpr> = sample(&inner_corpus, 6)
        .into_iter()
        .filter(|e| !e.is_empty())
        .collect();
    let inner_points = enumerate_domain(inner, 3);

    let mut out = vec![SetExpr::empty(&domain)];
    out.push(SetExpr::fin_points(
        vec![(0, inner_points[0].clone())],
        inner,
    )?);
    out.push(SetExpr::fin_points(
        vec![(0, inner_points[1].clone()), (2, inner_points[2].clone())],
        inner,
    )?);

    let rows = [
        SetExpr::fin_set(vec![0]),
        SetExpr::fin_set(vec![0, 1]),
        SetExpr::fin_set(vec![3]),
        SetExpr::cofin(vec![]),
        SetExpr::cofin(vec![0]),
        SetExpr::ap(0, 2).expect("stride"),
    ];
    for s in &rows {
        // Full columns are the key witnesses separating block sums from
        // their orthogonals; keep them regardless of how sampling falls.
        if let Some(full) = SetExpr::full(inner) {
            out.push(SetExpr::cols(s.clone(), full)?);
        }
        for t in &inner_sample {
            out.push(SetExpr::cols(s.clone(), t.clone())?);
        }
    }
    for t in &inner_sample {
        out.push(SetExpr::patch(vec![(1, t.clone())], inner)?);
    }
    if !inner_sample.is_empty() {
        out.push(SetExpr::patch(
            vec![
                (0, inner_sample[0].clone()),
                (2, inner_sample[inner_sample.len() - 1].clone()),
            ],
            inner,
        )?);
    }
    if inner == &Domain::Nat {
        for (a, b, rows) in [
            (1u64, 0u64, SetExpr::cofin(vec![])),
            (2, 0, SetExpr::cofin(vec![])),
            (1, 1, SetExpr::ap(0, 2).expect("stride")),
            (0, 3, SetExpr::cofin(vec![])),
            (3, 2, SetExpr::fin_set(vec![0, 1, 2, 3])),
        ] {
            out.push(SetExpr::graph(a, b, rows)?);
        }
    }
    Ok(out)
}

/// Alternating bounded/full column patterns. Nested through the domain
/// depth these separate every block-sum ideal from its orthogonal, which is
/// what distinguishes the deep catalog entries from Fin.
fn witness_sets(domain: &Domain) -> Vec<SetExpr> {
    match domain {
        Domain::Nat => vec![SetExpr::fin_set(vec![0, 1]), SetExpr::cofin(vec![])],
        Domain::Rat => vec![
            SetExpr::fin_rat(vec![rat_int(0), rat_int(1)]),
            SetExpr::asc_seq(rat_int(0), rat_int(1)).expect("scale"),
            SetExpr::desc_seq(rat_int(0), rat_int(1)).expect("scale"),
        ],
        Domain::Prod(inner) => {
            let mut out = Vec::new();
            for w in witness_sets(inner) {
                out.push(SetExpr::cols(SetExpr::fin_set(vec![0]), w.clone()).expect("cols"));
                out.push(SetExpr::cols(SetExpr::cofin(vec![]), w).expect("cols"));
            }
            if inner.as_ref() == &Domain::Nat {
                out.push(SetExpr::graph(1, 0, SetExpr::cofin(vec![])).expect("graph"));
            }
            out
        }
    }
}

/// The standard corpus of a domain. Begins with the basic shapes and closes
/// with a deterministic selection of two- and three-part unions.
pub fn standard_corpus(domain: &Domain) -> Vec<SetExpr> {
    let mut basics = match domain {
        Domain::Nat => nat_basics(),
        Domain::Rat => rat_basics(),
        Domain::Prod(inner) => prod_basics(inner).expect("corpus construction"),
    };
    basics.extend(witness_sets(domain));
    let seeds = sample(
        &basics
            .iter()
            .filter(|e| !e.is_empty())
            .cloned()
            .collect::<Vec<_>>(),
        8,
    );
    let mut out = basics;
    // Only pairwise disjoint unions: the surface syntax (and hence the
    // round-trip law) demands it.
    for i in 0..seeds.len() {
        for j in (i + 1)..seeds.len() {
            if let Ok(u) = SetExpr::union_strict(vec![seeds[i].clone(), seeds[j].clone()], domain) {
                out.push(u);
            }
        }
    }
    for w in seeds.windows(3) {
        if let Ok(u) = SetExpr::union_strict(w.to_vec(), domain) {
            out.push(u);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Regions safe for cross-sequence refinement: any two pool members of the
/// same domain admit a grammar-expressible difference. Over ℕ the whole
/// algebra qualifies; over ℚ the infinite members are chosen pairwise
/// disjoint; over products, graphs with infinite rows are left out.
pub fn refinement_pool(domain: &Domain) -> Vec<SetExpr> {
    match domain {
        Domain::Nat => standard_corpus(&Domain::Nat),
        Domain::Rat => {
            let basics = vec![
                SetExpr::fin_rat(vec![rat_int(5), rat_int(6)]),
                SetExpr::fin_rat(vec![rat_int(0)]),
                SetExpr::fin_rat(vec![rat(7, 2), rat(-7, 2)]),
                SetExpr::asc_seq(rat_int(0), rat_int(1)).expect("scale"),
                SetExpr::asc_seq(rat(1, 3), rat(1, 5)).expect("scale"),
                SetExpr::desc_seq(rat_int(2), rat(1, 7)).expect("scale"),
                SetExpr::desc_seq(rat_int(-3), rat(1, 2)).expect("scale"),
            ];
            let mut out = basics.clone();
            for i in 0..basics.len() {
                for j in (i + 1)..basics.len() {
                    if let Ok(u) = SetExpr::union_strict(
                        vec![basics[i].clone(), basics[j].clone()],
                        &Domain::Rat,
                    ) {
                        out.push(u);
                    }
                }
            }
            out
        }
        Domain::Prod(inner) => {
            let inner_pool: Vec<SetExpr> = sample(&refinement_pool(inner), 5)
                .into_iter()
                .filter(|e| !e.is_empty())
                .collect();
            let inner_points = enumerate_domain(inner, 3);
            let rows = [
                SetExpr::fin_set(vec![0]),
                SetExpr::fin_set(vec![1, 2]),
                SetExpr::cofin(vec![]),
                SetExpr::cofin(vec![0, 1]),
                SetExpr::ap(0, 2).expect("stride"),
                SetExpr::ap(1, 2).expect("stride"),
            ];
            let mut out = vec![
                SetExpr::fin_points(vec![(0, inner_points[0].clone())], inner).expect("points"),
                SetExpr::fin_points(
                    vec![(1, inner_points[1].clone()), (3, inner_points[2].clone())],
                    inner,
                )
                .expect("points"),
            ];
            for s in &rows {
                for t in &inner_pool {
                    out.push(SetExpr::cols(s.clone(), t.clone()).expect("cols"));
                }
            }
            for t in inner_pool.iter().take(2) {
                out.push(SetExpr::patch(vec![(2, t.clone())], inner).expect("patch"));
            }
            if inner.as_ref() == &Domain::Nat {
                out.push(SetExpr::graph(1, 0, SetExpr::fin_set((0..6).collect())).expect("graph"));
            }
            out
        }
    }
}
