//! Extensional and structural classification of ideal expressions:
//! equivalence over a set corpus, tallness, Fréchetness, and the documented
//! metadata flags of the catalog ideals.

use crate::corpus::standard_corpus;
use crate::error::{Error, Result};
use crate::ideal::{
    catalog_expand, perp_normalize, CatalogSide, IdealExpr, Node, Verdict, Witness,
};
use crate::member::member;
use crate::set_expr::SetExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    Distinguished(SetExpr),
    Unknown,
}

/// Replace catalog leaves by their one-step expansions, recursively, so
/// that structurally different spellings of the same catalog ideal compare
/// equal.
fn expand_catalogs(ideal: &IdealExpr) -> Result<IdealExpr> {
    Ok(match ideal.node() {
        Node::CatalogP(a) => expand_catalogs(&catalog_expand(CatalogSide::P, a)?)?,
        Node::CatalogQ(a) => expand_catalogs(&catalog_expand(CatalogSide::Q, a)?)?,
        Node::Restrict(i, s) => IdealExpr::restrict(expand_catalogs(i)?, s.clone())?,
        Node::Join(l, r) => IdealExpr::join(expand_catalogs(l)?, expand_catalogs(r)?)?,
        Node::OmegaSum(b) => IdealExpr::omega_sum(expand_catalogs(b)?),
        Node::DirectSumList(blocks, tail) => {
            let blocks = blocks
                .iter()
                .map(expand_catalogs)
                .collect::<Result<Vec<_>>>()?;
            IdealExpr::direct_sum(blocks, expand_catalogs(tail)?)?
        }
        Node::Fubini(l, r) => IdealExpr::fubini(expand_catalogs(l)?, expand_catalogs(r)?)?,
        Node::Perp(i) => IdealExpr::perp(expand_catalogs(i)?),
        _ => ideal.clone(),
    })
}

fn canonical(ideal: &IdealExpr) -> Result<IdealExpr> {
    Ok(perp_normalize(&expand_catalogs(&perp_normalize(ideal))?))
}

/// The one shipped non-structural identity: fin × fin = fin^ω ⊔ (fin^ω)^⊥.
fn known_identity(a: &IdealExpr, b: &IdealExpr) -> bool {
    fn is_fin_fubini(i: &IdealExpr) -> bool {
        match i.node() {
            Node::Fubini(l, r) => matches!(l.node(), Node::Fin) && matches!(r.node(), Node::Fin),
            _ => false,
        }
    }
    fn is_fin_sum(i: &IdealExpr) -> bool {
        match i.node() {
            Node::OmegaSum(b) => matches!(b.node(), Node::Fin),
            _ => false,
        }
    }
    fn is_fin_sum_perp(i: &IdealExpr) -> bool {
        match i.node() {
            Node::Perp(inner) => is_fin_sum(inner),
            _ => false,
        }
    }
    fn is_fin_join(i: &IdealExpr) -> bool {
        match i.node() {
            Node::Join(l, r) => {
                (is_fin_sum(l) && is_fin_sum_perp(r)) || (is_fin_sum_perp(l) && is_fin_sum(r))
            }
            _ => false,
        }
    }
    (is_fin_fubini(a) && is_fin_join(b)) || (is_fin_fubini(b) && is_fin_join(a))
}

/// Extensional comparison over a corpus, upgraded to `Equal` only by a
/// structural certificate: identical canonical forms or a shipped identity.
pub fn equivalent(a: &IdealExpr, b: &IdealExpr, corpus: &[SetExpr]) -> Result<Equivalence> {
    if a.domain() != b.domain() {
        return Err(Error::domain_mismatch(a.domain(), b.domain()));
    }
    let ca = canonical(a)?;
    let cb = canonical(b)?;
    if ca == cb {
        return Ok(Equivalence::Equal);
    }
    for set in corpus {
        if set.domain() != a.domain() {
            continue;
        }
        let va = member(a, set);
        let vb = member(b, set);
        match (va, vb) {
            (Ok(x), Ok(y)) => {
                if x.holds != y.holds {
                    return Ok(Equivalence::Distinguished(set.clone()));
                }
            }
            // Restriction-carrier rejections differ from memberships but
            // distinguish nothing; skip such probes.
            (Err(Error::DomainMismatch { .. }), _) | (_, Err(Error::DomainMismatch { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if known_identity(&ca, &cb) {
        return Ok(Equivalence::Equal);
    }
    Ok(Equivalence::Unknown)
}

pub fn equivalent_default(a: &IdealExpr, b: &IdealExpr) -> Result<Equivalence> {
    let corpus = standard_corpus(a.domain());
    equivalent(a, b, &corpus)
}

/// Tall ⟺ the orthogonal collapses to Fin (every infinite set meets some
/// infinite member of the ideal).
pub fn is_tall(ideal: &IdealExpr) -> Result<Verdict> {
    let perp = perp_normalize(&IdealExpr::perp(ideal.clone()));
    match equivalent_default(&perp, &IdealExpr::fin(ideal.domain().clone()))? {
        Equivalence::Equal => Ok(Verdict::yes()),
        Equivalence::Distinguished(w) => Ok(Verdict::with(false, Witness::FailedCell(w))),
        Equivalence::Unknown => Err(Error::Undecidable("tallness".into())),
    }
}

/// Fréchet ⟺ I = I^⊥⊥.
pub fn is_frechet(ideal: &IdealExpr) -> Result<Verdict> {
    let double = perp_normalize(&IdealExpr::perp(IdealExpr::perp(ideal.clone())));
    match equivalent_default(&double, ideal)? {
        Equivalence::Equal => Ok(Verdict::yes()),
        Equivalence::Distinguished(w) => Ok(Verdict::with(false, Witness::FailedCell(w))),
        Equivalence::Unknown => Err(Error::Undecidable("Fréchetness".into())),
    }
}

/// Documented classification flags, with a short justification per flag.
/// Stored, never computed: only the catalog ideals carry metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealMeta {
    pub name: String,
    pub meager: (bool, &'static str),
    pub borel: (bool, &'static str),
    pub frechet: (bool, &'static str),
    pub tall: (bool, &'static str),
    pub contains_fin: (bool, &'static str),
}

pub fn metadata(ideal: &IdealExpr) -> Result<IdealMeta> {
    let normalized = perp_normalize(ideal);
    let contains_fin = (
        true,
        "every ideal here contains the finite sets by standing assumption",
    );
    let meta = match normalized.node() {
        Node::Fin => IdealMeta {
            name: "FIN".into(),
            meager: (true, "an F_sigma proper ideal is meager"),
            borel: (true, "countable union of closed sets in the Cantor space"),
            frechet: (true, "FIN^perp = P(N) and P(N)^perp = FIN"),
            tall: (false, "the orthogonal of FIN is all of P(N), not FIN"),
            contains_fin,
        },
        Node::Pow => IdealMeta {
            name: "POW".into(),
            meager: (false, "P(N) is the whole Cantor space"),
            borel: (true, "the whole space is clopen"),
            frechet: (true, "P(N)^perp = FIN and FIN^perp = P(N)"),
            tall: (true, "every infinite set is itself a member"),
            contains_fin,
        },
        Node::Wo | Node::WoRev => IdealMeta {
            name: if matches!(normalized.node(), Node::Wo) {
                "WO"
            } else {
                "WOREV"
            }
            .into(),
            meager: (
                true,
                "a coanalytic proper ideal with the Baire property is meager",
            ),
            borel: (
                false,
                "well-ordered subsets of Q form a complete coanalytic set",
            ),
            frechet: (true, "negation swaps WO and WOREV, and WO^perp = WOREV"),
            tall: (
                false,
                "the orthogonal contains an infinite descending sequence, so it exceeds FIN",
            ),
            contains_fin,
        },
        Node::CatalogP(alpha) => {
            let tall = if alpha.is_zero() {
                (true, "P_0 = P(N)")
            } else {
                (false, "the orthogonal Q_a strictly exceeds FIN")
            };
            IdealMeta {
                name: format!("P[{alpha}]"),
                meager: (
                    !alpha.is_zero(),
                    "Borel proper ideals are meager; P_0 is the whole space",
                ),
                borel: (true, "the P/Q hierarchy consists of Borel sets"),
                frechet: (true, "P_a^perp-perp = Q_a^perp = P_a in the hierarchy"),
                tall,
                contains_fin,
            }
        }
        Node::CatalogQ(alpha) => IdealMeta {
            name: format!("Q[{alpha}]"),
            meager: (true, "Borel proper ideals are meager"),
            borel: (true, "the P/Q hierarchy consists of Borel sets"),
            frechet: (true, "Q_a^perp-perp = P_a^perp = Q_a in the hierarchy"),
            tall: (false, "the orthogonal P_a strictly exceeds FIN"),
            contains_fin,
        },
        _ => return Err(Error::NoMetadata),
    };
    Ok(meta)
}
