//! Ideal expressions over countable index domains.
//!
//! Every expression denotes an ideal containing all finite sets, closed
//! downward and under finite unions. Membership of grammar sets is decided
//! structurally in [`crate::member`]; the rewriting (orthogonal
//! normalization) and the recursive P/Q catalog live here.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::ordinal::OrdinalCnf;
use crate::set_expr::SetExpr;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// Finite subsets of the domain.
    Fin,
    /// All subsets of the domain.
    Pow,
    /// I restricted to a set: membership queries must stay inside the set.
    Restrict(Box<IdealExpr>, SetExpr),
    /// I ⊔ J = {A ∪ B : A ∈ I, B ∈ J}.
    Join(Box<IdealExpr>, Box<IdealExpr>),
    /// I^ω: block-wise membership on the column partition of ℕ × D.
    OmegaSum(Box<IdealExpr>),
    /// Direct sum with an explicit prefix of block ideals and a uniform tail.
    DirectSumList(Vec<IdealExpr>, Box<IdealExpr>),
    /// Fubini product I × J on ℕ × D: columns with traces outside J must
    /// form an I-set.
    Fubini(Box<IdealExpr>, Box<IdealExpr>),
    /// Orthogonal: sets meeting every member of the operand finitely.
    Perp(Box<IdealExpr>),
    /// Well-ordered subsets of ℚ.
    Wo,
    /// Subsets of ℚ well-ordered in the reversed order.
    WoRev,
    CatalogP(OrdinalCnf),
    CatalogQ(OrdinalCnf),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdealExpr {
    domain: Domain,
    node: Node,
}

/// A membership decision together with optional checkable evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn yes() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn no() -> Verdict {
        Verdict {
            holds: false,
            witness: None,
        }
    }

    pub fn with(holds: bool, witness: Witness) -> Verdict {
        Verdict {
            holds,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Join decomposition: the queried set is covered by a left part in I
    /// and a right part in J.
    JoinSplit { in_left: SetExpr, in_right: SetExpr },
    /// Fubini: the set of columns whose trace escapes the inner ideal.
    ExceptionalColumns(SetExpr),
    /// Orthogonal of a block sum: all of the set lives in columns ≤ bound,
    /// with the listed per-column traces (each in the block orthogonal).
    PerpBound {
        bound: u64,
        traces: Vec<(u64, SetExpr)>,
    },
    /// A cell that neither side of a join accepts.
    FailedCell(SetExpr),
    /// A column whose trace violates the block rule.
    FailedColumn { column: u64, trace: SetExpr },
}

impl IdealExpr {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn fin(domain: Domain) -> IdealExpr {
        IdealExpr {
            domain,
            node: Node::Fin,
        }
    }

    pub fn pow(domain: Domain) -> IdealExpr {
        IdealExpr {
            domain,
            node: Node::Pow,
        }
    }

    pub fn restrict(ideal: IdealExpr, within: SetExpr) -> Result<IdealExpr> {
        if ideal.domain() != within.domain() {
            return Err(Error::domain_mismatch(ideal.domain(), within.domain()));
        }
        let domain = ideal.domain.clone();
        Ok(IdealExpr {
            domain,
            node: Node::Restrict(Box::new(ideal), within),
        })
    }

    pub fn join(left: IdealExpr, right: IdealExpr) -> Result<IdealExpr> {
        if left.domain() != right.domain() {
            return Err(Error::domain_mismatch(left.domain(), right.domain()));
        }
        let domain = left.domain.clone();
        Ok(IdealExpr {
            domain,
            node: Node::Join(Box::new(left), Box::new(right)),
        })
    }

    pub fn omega_sum(block: IdealExpr) -> IdealExpr {
        let domain = Domain::prod(block.domain.clone());
        IdealExpr {
            domain,
            node: Node::OmegaSum(Box::new(block)),
        }
    }

    pub fn direct_sum(blocks: Vec<IdealExpr>, tail: IdealExpr) -> Result<IdealExpr> {
        for b in &blocks {
            if b.domain() != tail.domain() {
                return Err(Error::domain_mismatch(tail.domain(), b.domain()));
            }
        }
        let domain = Domain::prod(tail.domain.clone());
        Ok(IdealExpr {
            domain,
            node: Node::DirectSumList(blocks, Box::new(tail)),
        })
    }

    pub fn fubini(rows: IdealExpr, per_column: IdealExpr) -> Result<IdealExpr> {
        if rows.domain() != &Domain::Nat {
            return Err(Error::domain_mismatch(&Domain::Nat, rows.domain()));
        }
        let domain = Domain::prod(per_column.domain.clone());
        Ok(IdealExpr {
            domain,
            node: Node::Fubini(Box::new(rows), Box::new(per_column)),
        })
    }

    pub fn perp(ideal: IdealExpr) -> IdealExpr {
        let domain = ideal.domain.clone();
        IdealExpr {
            domain,
            node: Node::Perp(Box::new(ideal)),
        }
    }

    pub fn wo() -> IdealExpr {
        IdealExpr {
            domain: Domain::Rat,
            node: Node::Wo,
        }
    }

    pub fn wo_rev() -> IdealExpr {
        IdealExpr {
            domain: Domain::Rat,
            node: Node::WoRev,
        }
    }

    pub fn catalog_p(alpha: OrdinalCnf) -> Result<IdealExpr> {
        alpha.check_expandable()?;
        let domain = catalog_domain(&alpha)?;
        Ok(IdealExpr {
            domain,
            node: Node::CatalogP(alpha),
        })
    }

    pub fn catalog_q(alpha: OrdinalCnf) -> Result<IdealExpr> {
        alpha.check_expandable()?;
        let domain = catalog_domain(&alpha)?;
        Ok(IdealExpr {
            domain,
            node: Node::CatalogQ(alpha),
        })
    }

    /// True for the domain-generic nodes that can be re-typed freely.
    pub fn is_domain_generic(&self) -> bool {
        matches!(self.node, Node::Fin | Node::Pow)
    }

    /// Re-type a domain-generic expression (Fin/Pow leaves, and the sum and
    /// product shapes built from them) onto another domain.
    pub fn retarget(&self, domain: &Domain) -> Result<IdealExpr> {
        if &self.domain == domain {
            return Ok(self.clone());
        }
        match &self.node {
            Node::Fin => Ok(IdealExpr::fin(domain.clone())),
            Node::Pow => Ok(IdealExpr::pow(domain.clone())),
            Node::Perp(i) => Ok(IdealExpr::perp(i.retarget(domain)?)),
            Node::Join(l, r) => IdealExpr::join(l.retarget(domain)?, r.retarget(domain)?),
            Node::OmegaSum(b) => match domain.inner() {
                Some(inner) => Ok(IdealExpr::omega_sum(b.retarget(inner)?)),
                None => Err(Error::domain_mismatch(&self.domain, domain)),
            },
            Node::Fubini(rows, j) => match domain.inner() {
                Some(inner) => IdealExpr::fubini((**rows).clone(), j.retarget(inner)?),
                None => Err(Error::domain_mismatch(&self.domain, domain)),
            },
            _ => Err(Error::domain_mismatch(&self.domain, domain)),
        }
    }
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_ideal(self))
    }
}

/// Domain of the α-th catalog entry: nesting products along the successor
/// steps; a limit ordinal takes the domain of its first fundamental block.
pub fn catalog_domain(alpha: &OrdinalCnf) -> Result<Domain> {
    if alpha.is_zero() {
        return Ok(Domain::Nat);
    }
    if let Some(beta) = alpha.predecessor() {
        return Ok(Domain::prod(catalog_domain(&beta)?));
    }
    let first = alpha
        .fundamental(0)
        .ok_or_else(|| Error::OrdinalOutOfRange(alpha.to_string()))?;
    Ok(Domain::prod(catalog_domain(&first)?))
}

/// Which side of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogSide {
    P,
    Q,
}

/// One unfolding step of the catalog recursion, memoized.
///
/// P₀ = P(ℕ), Q₀ = Fin, P_{α+1} = (Q_α)^ω, Q_α = (P_α)^⊥. A limit ordinal
/// names a direct sum over its fundamental sequence, whose blocks would
/// need unboundedly deep product domains; no single domain hosts them, so
/// the realization keeps the frozen fundamental sequence's first block and
/// sums it ω times. Duality, Fréchetness and non-tallness are preserved.
pub fn catalog_expand(side: CatalogSide, alpha: &OrdinalCnf) -> Result<IdealExpr> {
    static CACHE: OnceLock<Mutex<HashMap<(CatalogSide, OrdinalCnf), IdealExpr>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(side, alpha.clone())) {
        return Ok(hit.clone());
    }
    alpha.check_expandable()?;
    // The base entries appear inline, so P₁ expands to Fin^ω directly.
    let q_entry = |beta: OrdinalCnf| -> Result<IdealExpr> {
        if beta.is_zero() {
            Ok(IdealExpr::fin(Domain::Nat))
        } else {
            IdealExpr::catalog_q(beta)
        }
    };
    let expanded = match side {
        CatalogSide::P => {
            if alpha.is_zero() {
                IdealExpr::pow(Domain::Nat)
            } else if let Some(beta) = alpha.predecessor() {
                IdealExpr::omega_sum(q_entry(beta)?)
            } else {
                let first = alpha
                    .fundamental(0)
                    .ok_or_else(|| Error::OrdinalOutOfRange(alpha.to_string()))?;
                IdealExpr::omega_sum(q_entry(first)?)
            }
        }
        CatalogSide::Q => {
            if alpha.is_zero() {
                IdealExpr::fin(Domain::Nat)
            } else {
                IdealExpr::perp(catalog_expand(CatalogSide::P, alpha)?)
            }
        }
    };
    cache
        .lock()
        .unwrap()
        .insert((side, alpha.clone()), expanded.clone());
    Ok(expanded)
}

/// Both catalog entries at α: (P_α, Q_α) as symbolic expressions.
pub fn catalog(alpha: &OrdinalCnf) -> Result<(IdealExpr, IdealExpr)> {
    Ok((
        IdealExpr::catalog_p(alpha.clone())?,
        IdealExpr::catalog_q(alpha.clone())?,
    ))
}

/// Fixpoint rewriting of orthogonal nodes over the Fréchet base catalog:
/// Fin ↔ Pow, WO ↔ WORev, P_α ↔ Q_α, and double orthogonals over catalog
/// members collapse. Unmatched Perp nodes are left in place.
pub fn perp_normalize(ideal: &IdealExpr) -> IdealExpr {
    let rewritten = rewrite_once(ideal);
    if &rewritten == ideal {
        rewritten
    } else {
        perp_normalize(&rewritten)
    }
}

fn in_frechet_catalog(node: &Node) -> bool {
    matches!(
        node,
        Node::Fin | Node::Pow | Node::Wo | Node::WoRev | Node::CatalogP(_) | Node::CatalogQ(_)
    )
}

fn rewrite_once(ideal: &IdealExpr) -> IdealExpr {
    let domain = ideal.domain.clone();
    let node = match &ideal.node {
        Node::Fin | Node::Pow | Node::Wo | Node::WoRev | Node::CatalogP(_) | Node::CatalogQ(_) => {
            ideal.node.clone()
        }
        Node::Restrict(i, a) => Node::Restrict(Box::new(rewrite_once(i)), a.clone()),
        Node::Join(l, r) => Node::Join(Box::new(rewrite_once(l)), Box::new(rewrite_once(r))),
        Node::OmegaSum(b) => Node::OmegaSum(Box::new(rewrite_once(b))),
        Node::DirectSumList(blocks, tail) => Node::DirectSumList(
            blocks.iter().map(rewrite_once).collect(),
            Box::new(rewrite_once(tail)),
        ),
        Node::Fubini(l, r) => Node::Fubini(Box::new(rewrite_once(l)), Box::new(rewrite_once(r))),
        Node::Perp(inner) => {
            let inner = rewrite_once(inner);
            match &inner.node {
                Node::Fin => Node::Pow,
                Node::Pow => Node::Fin,
                Node::Wo => Node::WoRev,
                Node::WoRev => Node::Wo,
                Node::CatalogP(a) => Node::CatalogQ(a.clone()),
                Node::CatalogQ(a) => Node::CatalogP(a.clone()),
                Node::Perp(x) if in_frechet_catalog(&x.node) => x.node.clone(),
                _ => Node::Perp(Box::new(inner)),
            }
        }
    };
    IdealExpr { domain, node }
}
