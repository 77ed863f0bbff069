//! Membership of simple functions in c₀,ᵢ, the I-limsup, quotient norms,
//! join decompositions and c₀-disjointness.

use std::fmt;

use num_traits::Signed;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::ideal::{IdealExpr, Verdict, Witness};
use crate::member::{contains_all, member};
use crate::rat::{rat_zero, Rat};
use crate::seq::{combine, LatticeOp, SimpleSeq};
use crate::set_expr::SetExpr;
use crate::set_ops;

/// x ∈ c₀,ᵢ ⟺ every level set A(ε, x) lies in I. For a simple function it
/// suffices to check the finitely many coefficient levels: the level set is
/// constant between consecutive distinct |coefficient| values.
pub fn in_c0i(ideal: &IdealExpr, x: &SimpleSeq) -> Result<Verdict> {
    if ideal.domain() != x.domain() {
        return Err(Error::domain_mismatch(ideal.domain(), x.domain()));
    }
    for level in x.abs_levels() {
        let set = x.level_set(&level)?;
        if !member(ideal, &set)?.holds {
            return Ok(Verdict::with(false, Witness::FailedCell(set)));
        }
    }
    Ok(Verdict::yes())
}

/// I-limsup of a signed simple sequence: sup{b : {k : x_k > b} ∉ I}, or −∞
/// when that set is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limsup {
    MinusInfinity,
    Finite(Rat),
}

impl Limsup {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Limsup::Finite(q) => Some(q),
            Limsup::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Limsup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limsup::MinusInfinity => write!(f, "-inf"),
            Limsup::Finite(q) => write!(f, "{}", crate::rat::rat_to_string(q)),
        }
    }
}

/// Whether the sequence takes the value 0 somewhere (the complement of the
/// support is nonempty).
fn has_zero_region(x: &SimpleSeq) -> Result<bool> {
    let support = x.support();
    match x.domain() {
        // Every rational-set expression misses some rational.
        Domain::Rat => Ok(true),
        _ => {
            let full = SetExpr::full(x.domain()).expect("full exists off ℚ");
            match set_ops::subset(&full, &support) {
                Some(covers) => Ok(!covers),
                None => Err(Error::Undecidable("support covers the domain?".into())),
            }
        }
    }
}

/// The level sets {k : x_k ≥ v} are nested downward as v grows, so the
/// failures of membership are upward closed along descending values: the
/// limsup is the value at the first failure.
pub fn ideal_limsup(ideal: &IdealExpr, x: &SimpleSeq) -> Result<Limsup> {
    if ideal.domain() != x.domain() {
        return Err(Error::domain_mismatch(ideal.domain(), x.domain()));
    }
    if contains_all(ideal)? {
        return Ok(Limsup::MinusInfinity);
    }
    let mut values = x.values_desc();
    if has_zero_region(x)? {
        let zero = rat_zero();
        if !values.contains(&zero) {
            values.push(zero);
            values.sort();
            values.dedup();
            values.reverse();
        }
    }
    for v in values {
        let geq_v = if v.is_positive() {
            let regions = x
                .terms()
                .iter()
                .filter(|(c, _)| c >= &v)
                .map(|(_, r)| r.clone())
                .collect();
            SetExpr::union_of(regions, x.domain())?
        } else {
            // {x ≥ v} is the complement of the strictly-below regions.
            let below: Vec<SetExpr> = x
                .terms()
                .iter()
                .filter(|(c, _)| c < &v)
                .map(|(_, r)| r.clone())
                .collect();
            if below.is_empty() {
                // The whole domain; the ideal is proper, so this fails.
                return Ok(Limsup::Finite(v));
            }
            let below = SetExpr::union_of(below, x.domain())?;
            match set_ops::complement(&below) {
                Some(c) => c,
                None => {
                    return Err(Error::Undecidable(
                        "level-set complement not expressible".into(),
                    ))
                }
            }
        };
        if !member(ideal, &geq_v)?.holds {
            return Ok(Limsup::Finite(v));
        }
    }
    Ok(Limsup::MinusInfinity)
}

/// ‖x + c₀,ᵢ‖ = I-limsup |x|; the distance from x to c₀,ᵢ. Zero when the
/// ideal is improper (then c₀,ᵢ is everything).
pub fn quotient_norm(ideal: &IdealExpr, x: &SimpleSeq) -> Result<Rat> {
    match ideal_limsup(ideal, &x.abs())? {
        Limsup::Finite(q) => Ok(q),
        Limsup::MinusInfinity => Ok(rat_zero()),
    }
}

/// Split x ∈ c₀,ᵢ⊔ⱼ as y + z with y ∈ c₀,ᵢ and z ∈ c₀,ⱼ, via the join
/// witness for the support.
pub fn decompose_join(
    left: &IdealExpr,
    right: &IdealExpr,
    x: &SimpleSeq,
) -> Result<(SimpleSeq, SimpleSeq)> {
    if x.is_zero() {
        return Ok((
            SimpleSeq::zero(x.domain().clone()),
            SimpleSeq::zero(x.domain().clone()),
        ));
    }
    let join = IdealExpr::join(left.clone(), right.clone())?;
    if !in_c0i(&join, x)?.holds {
        return Err(Error::MembershipRequired);
    }
    // The support is the largest level set, so it carries the join witness.
    let verdict = member(&join, &x.support())?;
    match verdict.witness {
        Some(Witness::JoinSplit { in_left, in_right }) => {
            let y = x.restrict(&in_left)?;
            let z = x.restrict(&in_right)?;
            Ok((y, z))
        }
        _ => Err(Error::WitnessUnavailable),
    }
}

/// x ⊥_{c₀} y ⟺ |x| ∧ |y| ∈ c₀.
pub fn c0_disjoint(x: &SimpleSeq, y: &SimpleSeq) -> Result<bool> {
    let meet = combine(LatticeOp::Meet, &x.abs(), &y.abs())?;
    let fin = IdealExpr::fin(x.domain().clone());
    Ok(in_c0i(&fin, &meet)?.holds)
}
