//! Decision machinery for the intuitionistic modal logic IK4.
//!
//! The crate is organised bottom-up:
//!
//! - [`formula`]: syntax, the symbol-length measure, subformula closures and
//!   the label poset.
//! - [`semantics`]: finite birelational frames and models, the four frame
//!   conditions, four satisfaction variants, and the model file format.
//! - [`enumeration`]: exhaustive frame/valuation generation and bounded
//!   countermodel search.
//! - [`ltree`]: labelled trees over a finite poset, embeddings, strict and
//!   nice normal forms, and dreary families.
//! - [`oracle`]: world oracles answering the existence queries of the
//!   saturation procedure from a finite model.
//! - [`clip`]: the clip-saturation procedure and the finite model it yields.
//! - [`hilbert`]: axiom schemata, an intuitionistic propositional prover and a
//!   checker for Hilbert-style proofs.

pub mod bitset;
pub mod clip;
pub mod enumeration;
pub mod formula;
pub mod hilbert;
pub mod ltree;
pub mod oracle;
pub mod semantics;

pub use bitset::BitSet;
pub use formula::{parse, Formula};
