//! Executable forms of the structure theorems: the block decomposition of
//! c₀,⊕ᵢ as an ℓ∞-sum, its c₀-sum counterpart for orthogonals of block
//! sums, the Fubini quotient map, and the injective tensor embedding.

use num_traits::{Signed, Zero};

use crate::c0::{in_c0i, quotient_norm};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::ideal::{IdealExpr, Node, Verdict, Witness};
use crate::member::{member, restrict_to_columns};
use crate::seq::{SimpleSeq, VecSimpleSeq};
use crate::set_expr::SetExpr;
use crate::set_ops::{self, SummaryCell};

/// One cell of a block decomposition: on every column of `region` the block
/// sequence has the same norm; when no graph term is involved the block is
/// literally the same simple function on every column.
#[derive(Debug, Clone)]
pub struct BlockCell {
    pub region: SetExpr,
    /// The common block when it is uniform across the region.
    pub uniform: Option<SimpleSeq>,
    /// Norm of the block at each column of the region.
    pub norm: crate::rat::Rat,
}

/// The decomposition of a product-domain simple function into its column
/// blocks, grouped by the finitely many uniform regions.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    x: SimpleSeq,
    pub cells: Vec<BlockCell>,
    /// Membership verdict of x in the block-sum ideal (when requested).
    pub membership: Option<Verdict>,
}

fn summary_cells(x: &SimpleSeq) -> Result<Vec<SummaryCell>> {
    let regions: Vec<&SetExpr> = x.terms().iter().map(|(_, r)| r).collect();
    if regions.is_empty() {
        return Ok(vec![]);
    }
    set_ops::multi_column_summary(&regions)
}

impl BlockDecomposition {
    pub fn sequence(&self) -> &SimpleSeq {
        &self.x
    }

    /// The exact block at one column.
    pub fn block_at(&self, n: u64) -> Result<SimpleSeq> {
        let inner = self
            .x
            .domain()
            .inner()
            .ok_or_else(|| Error::domain_mismatch(&Domain::prod(Domain::Nat), self.x.domain()))?
            .clone();
        let mut terms = Vec::new();
        for (c, r) in self.x.terms() {
            let trace = set_ops::column_trace(r, n)?;
            if !trace.is_empty() {
                terms.push((c.clone(), trace));
            }
        }
        Ok(SimpleSeq::from_disjoint(inner, terms))
    }

    /// sup over blocks of the block norm; exact.
    pub fn sup_of_block_norms(&self) -> crate::rat::Rat {
        self.cells
            .iter()
            .map(|c| c.norm.clone())
            .max()
            .unwrap_or_else(crate::rat::rat_zero)
    }

    /// Reassemble the original sequence from the per-region pieces;
    /// extensionally equal to the input.
    pub fn reassemble(&self) -> Result<SimpleSeq> {
        let mut terms = Vec::new();
        for cell in &self.cells {
            for (c, r) in self.x.terms() {
                let piece = restrict_to_columns(r, &cell.region)?;
                if !piece.is_empty() {
                    terms.push((c.clone(), piece));
                }
            }
        }
        Ok(SimpleSeq::from_disjoint(self.x.domain().clone(), terms))
    }
}

/// The ℓ∞-sum picture of a block-sum ideal: decompose x into its column
/// blocks. The membership of x in the sum ideal is decided and recorded.
pub fn directsum_iso(x: &SimpleSeq, sum_ideal: &IdealExpr) -> Result<BlockDecomposition> {
    if sum_ideal.domain() != x.domain() {
        return Err(Error::domain_mismatch(sum_ideal.domain(), x.domain()));
    }
    if !matches!(
        sum_ideal.node(),
        Node::OmegaSum(_) | Node::DirectSumList(..)
    ) {
        return Err(Error::Undecidable(
            "direct-sum decomposition needs a block-sum ideal".into(),
        ));
    }
    let membership = in_c0i(sum_ideal, x)?;
    let mut cells = Vec::new();
    for cell in summary_cells(x)? {
        let norm = cell
            .traces
            .iter()
            .zip(x.terms())
            .filter(|(t, _)| !t.is_empty())
            .map(|(_, (c, _))| c.abs())
            .max()
            .unwrap_or_else(crate::rat::rat_zero);
        let uniform = if cell.traces.iter().all(|t| !t.plus_point) {
            let inner = x.domain().inner().expect("product domain").clone();
            let terms: Vec<(crate::rat::Rat, SetExpr)> = cell
                .traces
                .iter()
                .zip(x.terms())
                .filter(|(t, _)| !t.base.is_empty())
                .map(|(t, (c, _))| (c.clone(), t.base.clone()))
                .collect();
            Some(SimpleSeq::from_disjoint(inner, terms))
        } else {
            None
        };
        cells.push(BlockCell {
            region: cell.region,
            uniform,
            norm,
        });
    }
    Ok(BlockDecomposition {
        x: x.clone(),
        cells,
        membership: Some(membership),
    })
}

/// The c₀-sum picture of the orthogonal of a block sum: the decomposition
/// together with the vanishing bound — beyond column `bound` every block is
/// exactly zero. Requires x ∈ c₀ of the orthogonal ideal.
pub struct VanishingDecomposition {
    pub blocks: Vec<(u64, SimpleSeq)>,
    pub bound: u64,
    inner: Domain,
    domain: Domain,
}

impl VanishingDecomposition {
    /// Blocks beyond the bound are zero; reassembling the listed blocks
    /// recovers the original sequence exactly.
    pub fn reassemble(&self) -> Result<SimpleSeq> {
        let mut terms = Vec::new();
        for (n, block) in &self.blocks {
            for (c, r) in block.terms() {
                terms.push((
                    c.clone(),
                    SetExpr::patch(vec![(*n, r.clone())], &self.inner)?,
                ));
            }
        }
        Ok(SimpleSeq::from_disjoint(self.domain.clone(), terms))
    }
}

pub fn omegaperp_iso(x: &SimpleSeq, sum_ideal: &IdealExpr) -> Result<VanishingDecomposition> {
    if !matches!(
        sum_ideal.node(),
        Node::OmegaSum(_) | Node::DirectSumList(..)
    ) {
        return Err(Error::Undecidable("needs a block-sum ideal".into()));
    }
    let perp = IdealExpr::perp(sum_ideal.clone());
    let verdict = in_c0i(&perp, x)?;
    if !verdict.holds {
        return Err(Error::MembershipRequired);
    }
    let inner = x
        .domain()
        .inner()
        .ok_or_else(|| Error::domain_mismatch(&Domain::prod(Domain::Nat), x.domain()))?
        .clone();
    if x.is_zero() {
        return Ok(VanishingDecomposition {
            blocks: vec![],
            bound: 0,
            inner,
            domain: x.domain().clone(),
        });
    }
    // The support is the largest level set; its orthogonality witness
    // carries the column bound.
    let support_verdict = member(&perp, &x.support())?;
    let bound = match support_verdict.witness {
        Some(Witness::PerpBound { bound, .. }) => bound,
        _ => return Err(Error::WitnessUnavailable),
    };
    let decomposition = directsum_iso_blocks(x, bound)?;
    Ok(VanishingDecomposition {
        blocks: decomposition,
        bound,
        inner,
        domain: x.domain().clone(),
    })
}

fn directsum_iso_blocks(x: &SimpleSeq, bound: u64) -> Result<Vec<(u64, SimpleSeq)>> {
    let inner = x.domain().inner().expect("product domain").clone();
    let mut blocks = Vec::new();
    for n in 0..=bound {
        let mut terms = Vec::new();
        for (c, r) in x.terms() {
            let trace = set_ops::column_trace(r, n)?;
            if !trace.is_empty() {
                terms.push((c.clone(), trace));
            }
        }
        blocks.push((n, SimpleSeq::from_disjoint(inner.clone(), terms)));
    }
    Ok(blocks)
}

/// The Fubini quotient map: send x to the sequence of per-column distances
/// to c₀,ⱼ. The kernel flag notes whether that image vanishes, which holds
/// exactly when x lies in c₀ of the ω-sum of J.
pub fn fubini_quotient(
    x: &SimpleSeq,
    rows: &IdealExpr,
    per_column: &IdealExpr,
) -> Result<(SimpleSeq, bool)> {
    let fubini = IdealExpr::fubini(rows.clone(), per_column.clone())?;
    if fubini.domain() != x.domain() {
        return Err(Error::domain_mismatch(fubini.domain(), x.domain()));
    }
    if !in_c0i(&fubini, x)?.holds {
        return Err(Error::MembershipRequired);
    }
    let inner = x.domain().inner().expect("product domain").clone();
    let mut terms = Vec::new();
    for cell in summary_cells(x)? {
        // Finite per-column extras never move a quotient norm: they only
        // enlarge level sets by finite sets.
        let col_terms: Vec<(crate::rat::Rat, SetExpr)> = cell
            .traces
            .iter()
            .zip(x.terms())
            .filter(|(t, _)| !t.base.is_empty())
            .map(|(t, (c, _))| (c.clone(), t.base.clone()))
            .collect();
        let col = SimpleSeq::from_disjoint(inner.clone(), col_terms);
        let qn = quotient_norm(per_column, &col)?;
        if !qn.is_zero() {
            terms.push((qn, cell.region));
        }
    }
    let q = SimpleSeq::from_disjoint(Domain::Nat, terms);
    let kernel = q.is_zero();
    Ok((q, kernel))
}

/// The injective tensor norm of Σⱼ xʲ ⊗ yⱼ with yⱼ ∈ ℚ^d under the
/// max-norm: the dual ball is the ℓ₁ ball, whose extreme points are the
/// ±coordinate functionals, so d suprema suffice.
pub fn tensor_injective_norm(u: &[(SimpleSeq, Vec<crate::rat::Rat>)]) -> Result<crate::rat::Rat> {
    let (domain, dim) = tensor_shape(u)?;
    let mut best = crate::rat::rat_zero();
    for i in 0..dim {
        let mut acc = SimpleSeq::zero(domain.clone());
        for (xj, yj) in u {
            acc = crate::seq::combine(crate::seq::LatticeOp::Add, &acc, &xj.scale(&yj[i]))?;
        }
        best = best.max(acc.sup_norm());
    }
    Ok(best)
}

/// The embedded vector sequence (Σⱼ xʲ_n yⱼ)_n.
pub fn tensor_embed(u: &[(SimpleSeq, Vec<crate::rat::Rat>)]) -> Result<VecSimpleSeq> {
    let (domain, dim) = tensor_shape(u)?;
    let mut acc = VecSimpleSeq::zero(domain, dim);
    for (xj, yj) in u {
        acc = acc.add_scaled(xj, yj)?;
    }
    Ok(acc)
}

fn tensor_shape(u: &[(SimpleSeq, Vec<crate::rat::Rat>)]) -> Result<(Domain, usize)> {
    let first = u
        .first()
        .ok_or_else(|| Error::ValidationError("empty tensor expression".into()))?;
    let domain = first.0.domain().clone();
    let dim = first.1.len();
    if dim == 0 {
        return Err(Error::ValidationError(
            "tensor factors need dimension >= 1".into(),
        ));
    }
    for (x, y) in u {
        if x.domain() != &domain {
            return Err(Error::domain_mismatch(&domain, x.domain()));
        }
        if y.len() != dim {
            return Err(Error::ValidationError(
                "tensor factor dimension mismatch".into(),
            ));
        }
    }
    Ok((domain, dim))
}
