//! Exact multivariate polynomial arithmetic over the rationals together
//! with the leader / initial / separant machinery and factorization.

mod divide;
mod factor;
mod poly;
mod ranking;
mod sqfree;
mod subres;
mod variable;

pub use divide::{
    content_wrt, exact_divide, gcd as poly_gcd, primitive_part_wrt, pseudo_divide,
    pseudo_quotient,
};
pub use factor::{kronecker_factor, FactorError, DEFAULT_FACTOR_BOUND};
pub use poly::{cmp_monomial_degrevlex, DiffPolynomial, Monomial, Rat};
pub use ranking::{rank_compare, Ranking, RankingStyle};
pub use sqfree::{squarefree_factor, squarefree_part};
pub use subres::{gcd_wrt, resultant, subresultant_sequence};
pub use variable::{Context, MultiIndex, VariableId};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("variable {0} is not a divisor variable of the given polynomial")]
    NotADivisorVariable(String),
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(String),
    #[error("factorization bound exceeded (total degree {degree} > bound {bound})")]
    FactorizationBound { degree: u32, bound: u32 },
    #[error("polynomial is constant in the jet variables")]
    ConstantInJets,
}

/// Leader of a polynomial: the ranking-greatest variable occurring in it,
/// or the constant token `1` for elements of the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Leader {
    Constant,
    Var(VariableId),
}

impl Leader {
    pub fn var(&self) -> Option<&VariableId> {
        match self {
            Leader::Constant => None,
            Leader::Var(v) => Some(v),
        }
    }
}

/// Leader, initial and separant of `p` with respect to the ranking `r`.
///
/// For a constant polynomial the leader is the token `1`, the initial is
/// the polynomial itself and the separant is zero.
pub fn leader_parts(
    p: &DiffPolynomial,
    r: &Ranking,
) -> (Leader, DiffPolynomial, DiffPolynomial) {
    match p.leader(r) {
        None => (Leader::Constant, p.clone(), DiffPolynomial::zero()),
        Some(v) => {
            let initial = p.initial(&v);
            let separant = p.differentiate(&v);
            (Leader::Var(v), initial, separant)
        }
    }
}
