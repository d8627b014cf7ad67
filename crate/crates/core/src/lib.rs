//! Proof terms, reduction and realizability for intuitionistic set theory with
//! inaccessibles (the non-well-founded variant included).

pub mod axioms;
pub mod corpus;
pub mod frontend;
pub mod metatheory;
pub mod nameless;
pub mod proof;
pub mod realize;
pub mod reduce;
pub mod syntax;
pub mod typing;

pub use axioms::{AxKind, AxiomId};
pub use frontend::{parse_file, parse_formula, parse_proof, parse_term, print_formula, print_proof, print_term};
pub use proof::{erase, Erased, PVar, Proof};
pub use syntax::{Formula, Schema, Term, Var};
pub use typing::{check, infer, Checker, Context, Mode, TypeError};
