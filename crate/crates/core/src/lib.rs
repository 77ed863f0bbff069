//! Symbolic calculus of ideals on countable index sets, the sequence spaces
//! c₀,ᵢ they induce, and executable forms of the isometries between them.
//!
//! Everything is exact: set expressions are decided structurally, scalars are
//! arbitrary-precision rationals, and all values are immutable and safe to
//! share across threads.

pub mod c0;
pub mod classify;
pub mod corpus;
pub mod domain;
pub mod dsl;
pub mod error;
pub mod harness;
pub mod ideal;
pub mod index_map;
pub mod iso;
pub mod member;
pub mod op;
pub mod ordinal;
pub mod pairing;
pub mod rat;
pub mod seq;
pub mod set_expr;
pub mod set_ops;

pub use c0::{c0_disjoint, decompose_join, ideal_limsup, in_c0i, quotient_norm, Limsup};
pub use classify::{equivalent, equivalent_default, is_frechet, is_tall, metadata, Equivalence};
pub use domain::{Domain, Point};
pub use error::{Error, Result};
pub use ideal::{catalog, perp_normalize, IdealExpr, Verdict, Witness};
pub use index_map::IndexMap;
pub use member::{contains_all, member};
pub use op::{IndexOp, RestrictionEmbed};
pub use ordinal::OrdinalCnf;
pub use rat::Rat;
pub use seq::{combine, map_scalar, LatticeOp, ScalarOp, SimpleSeq, VecSimpleSeq};
pub use set_expr::SetExpr;
