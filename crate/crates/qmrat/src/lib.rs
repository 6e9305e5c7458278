//! Rationality of two-dimensional quasi-monomial actions.

pub mod action;
pub mod decider;
pub mod fixedfield;
pub mod glz;
pub mod ratfunc;
pub mod symbols;

use num_rational::BigRational;

pub use ratfunc::{rf_equal, substitute, Relation, RatFuncError, Scalar};

pub type TowerSpec = ratfunc::TowerSpec<BigRational>;
pub type MultiPoly = ratfunc::MultiPoly<BigRational>;
pub type RatFunc = ratfunc::RatFunc<BigRational>;
pub type Substitution = ratfunc::Substitution<BigRational>;
