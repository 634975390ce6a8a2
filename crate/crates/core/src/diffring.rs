//! The differential layer over the polynomial arithmetic: derivations,
//! total derivatives and ranking comparisons on jet variables.

use std::cmp::Ordering;

use crate::arith::{DiffPolynomial, Ranking, VariableId};

/// Derivation with respect to the i-th independent variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Derivation(pub usize);

/// Total (formal) derivative of `p` with respect to `x^i`:
/// `D_i p = d p / d x^i + sum over jet variables w of (d p / d w) * (w raised in i)`.
///
/// The leader of the derivative is the derivative of the leader, and its
/// initial equals the separant of `p`.  `p` must not contain auxiliary
/// variables.
pub fn total_derivative(p: &DiffPolynomial, i: usize) -> DiffPolynomial {
    debug_assert!(!p.contains_aux(), "total derivative of an auxiliary polynomial");
    let mut out = p.differentiate(&VariableId::Indep(i));
    for v in p.variables() {
        if let VariableId::Jet { dep, idx } = &v {
            let raised = VariableId::Jet { dep: *dep, idx: idx.raised(i) };
            out = &out + &(&p.differentiate(&v) * &DiffPolynomial::var(raised));
        }
    }
    out
}

/// Iterated total derivative `delta^mu p`.
pub fn total_derivative_multi(p: &DiffPolynomial, mu: &[u32]) -> DiffPolynomial {
    let mut out = p.clone();
    for (i, e) in mu.iter().enumerate() {
        for _ in 0..*e {
            out = total_derivative(&out, i);
        }
    }
    out
}

/// Strict total order on variables under the ranking; see `arith::Ranking`.
pub fn rank_compare(v: &VariableId, w: &VariableId, r: &Ranking) -> Ordering {
    r.compare(v, w)
}
