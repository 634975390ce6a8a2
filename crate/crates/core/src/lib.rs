//! Exact symbolic analysis of polynomially nonlinear ODE/PDE systems.
//!
//! The library decomposes a differential system into simple systems
//! (algebraic and differential Thomas decomposition), truncates the
//! associated differential ideal at a chosen jet order, splits the
//! resulting variety into irreducible components and partitions every
//! component into regularity components whose points are classified as
//! regular, regular singular, (purely) irregular singular, algebraic
//! singular or of unknown type.
//!
//! All arithmetic is exact over the rationals; there is no floating
//! point anywhere in the kernel.

pub mod arith;
pub mod diffring;
pub mod ideal;
pub mod jet;
pub mod regularity;
pub mod series;
pub mod testkit;
pub mod thomas_alg;
pub mod thomas_diff;

pub use arith::{Context, DiffPolynomial, Leader, MultiIndex, Ranking, VariableId};
