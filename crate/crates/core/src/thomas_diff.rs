//! Differential Thomas decomposition: Janet division, passivity completion
//! and the splitting of a differential system into simple differential
//! systems, together with the multiplicative prolongation set generating
//! the truncated differential ideal.
//!
//! The worklist engine is shared with the algebraic decomposition; the
//! differential mode differs in two ways: polynomials in the independent
//! variables alone are units of the coefficient field, and head reduction
//! uses Janet-multiplicative prolongations of the equations as reducers.
//! When a system's queue drains, every non-multiplicative prolongation is
//! reduced; nonzero remainders re-enter the queue as integrability
//! conditions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::arith::{DiffPolynomial, MultiIndex, Ranking, VariableId};
use crate::diffring::{total_derivative, total_derivative_multi};
use crate::thomas_alg::{
    finish_system, head_reduce, run_engine, sort_simple_systems, Constraint,
    EngineMode, SimpleAlgebraicSystem, ThomasError, WorkSystem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffThomasError {
    #[error(transparent)]
    Thomas(#[from] ThomasError),
    #[error("order {requested} too small: the system contains order {needed}")]
    OrderTooSmall { requested: u32, needed: u32 },
}

/// Differential system: equations and inequations in jet variables, with
/// counts of independent and dependent variables.
#[derive(Debug, Clone)]
pub struct DifferentialSystem {
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    pub ranking: Ranking,
    pub n: usize,
    pub m: usize,
}

impl DifferentialSystem {
    pub fn new(
        equations: Vec<DiffPolynomial>,
        inequations: Vec<DiffPolynomial>,
        ranking: Ranking,
        n: usize,
        m: usize,
    ) -> Self {
        debug_assert!(equations.iter().chain(&inequations).all(|p| !p.contains_aux()));
        DifferentialSystem { equations, inequations, ranking, n, m }
    }

    pub fn max_order(&self) -> u32 {
        self.equations.iter().chain(&self.inequations).map(|p| p.order()).max().unwrap_or(0)
    }
}

/// Simple differential system: algebraically simple, passive for the Janet
/// division, and no inequation leader is a derivative of an equation
/// leader.  Carries the Janet multiplicative variables per equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDifferentialSystem {
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    pub ranking: Ranking,
    pub n: usize,
    pub m: usize,
    /// Multiplicative independent variables of each equation, aligned with
    /// `equations`.
    pub multiplicative: Vec<BTreeSet<usize>>,
}

impl SimpleDifferentialSystem {
    pub fn max_order(&self) -> u32 {
        self.equations.iter().chain(&self.inequations).map(|p| p.order()).max().unwrap_or(0)
    }

    pub fn leaders(&self) -> Vec<VariableId> {
        self.equations.iter().filter_map(|p| p.leader(&self.ranking)).collect()
    }

    /// The set of multiplicative prolongations `delta^mu p_i` with
    /// `|mu| + ord(p_i) <= ell`; it generates the order-`ell` truncation of
    /// the associated differential ideal before saturation.
    pub fn prolongation_basis(&self, ell: u32) -> Result<Vec<DiffPolynomial>, DiffThomasError> {
        let needed = self.max_order();
        if ell < needed {
            return Err(DiffThomasError::OrderTooSmall { requested: ell, needed });
        }
        let mut out = Vec::new();
        for (p, mult) in self.equations.iter().zip(&self.multiplicative) {
            let budget = ell - p.order();
            let free: Vec<usize> = mult.iter().copied().collect();
            let mut mu = vec![0u32; self.n];
            enumerate_prolongations(p, &free, 0, budget, &mut mu, &mut out);
        }
        out.sort();
        Ok(out)
    }
}

fn enumerate_prolongations(
    p: &DiffPolynomial,
    free: &[usize],
    pos: usize,
    budget: u32,
    mu: &mut Vec<u32>,
    out: &mut Vec<DiffPolynomial>,
) {
    if pos == free.len() {
        out.push(total_derivative_multi(p, mu));
        return;
    }
    for k in 0..=budget {
        mu[free[pos]] = k;
        enumerate_prolongations(p, free, pos + 1, budget - k, mu, out);
    }
    mu[free[pos]] = 0;
}

// ---------------------------------------------------------------------------
// Janet division
// ---------------------------------------------------------------------------

/// Classical Janet partition of the derivations for a set of jet leaders.
/// Convention: indices are compared from the highest derivation downwards
/// (`delta_n` before `delta_1`); within one dependent variable, `delta_k`
/// is multiplicative for `mu` when `mu_k` is maximal among the leaders
/// agreeing with `mu` above position `k`.  Every derivative of a leader is
/// then reachable through the multiplicative cone of at most one leader.
pub fn janet_multiplicative(leaders: &[VariableId], n: usize) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new(); leaders.len()];
    // Group by dependent variable.
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, v) in leaders.iter().enumerate() {
        match v {
            VariableId::Jet { dep, .. } => groups.entry(*dep).or_default().push(i),
            _ => panic!("Janet division expects jet leaders"),
        }
    }
    let idx = |i: usize| -> &MultiIndex {
        match &leaders[i] {
            VariableId::Jet { idx, .. } => idx,
            _ => unreachable!(),
        }
    };
    for (_, members) in groups {
        for &i in &members {
            let mu = idx(i);
            for k in (0..n).rev() {
                // Members agreeing with mu strictly above position k.
                let agreeing: Vec<&MultiIndex> = members
                    .iter()
                    .map(|&j| idx(j))
                    .filter(|nu| (k + 1..n).all(|l| nu.0[l] == mu.0[l]))
                    .collect();
                let maximal = agreeing.iter().map(|nu| nu.0[k]).max().unwrap_or(0);
                if mu.0[k] == maximal {
                    out[i].insert(k);
                }
            }
        }
    }
    out
}

/// Finds a Janet-divisor equation for the jet variable `w`: an equation
/// whose leader divides `w` with the quotient supported on its
/// multiplicative variables.  Returns the prolongation to apply.
fn janet_reducer(
    w: &VariableId,
    eqs: &BTreeMap<VariableId, DiffPolynomial>,
    n: usize,
) -> Option<(DiffPolynomial, MultiIndex)> {
    let (dep_w, idx_w) = match w {
        VariableId::Jet { dep, idx } => (*dep, idx),
        _ => return None,
    };
    let leaders: Vec<VariableId> = eqs.keys().cloned().collect();
    let mult = janet_multiplicative_checked(&leaders, n);
    for (i, v) in leaders.iter().enumerate() {
        if let VariableId::Jet { dep, idx } = v {
            if *dep != dep_w {
                continue;
            }
            if let Some(diff) = idx_w.checked_sub(idx) {
                if diff.support().all(|k| mult[i].contains(&k)) {
                    return Some((eqs[v].clone(), diff));
                }
            }
        }
    }
    None
}

/// Janet assignment tolerating non-jet leaders (they get no cone).
fn janet_multiplicative_checked(leaders: &[VariableId], n: usize) -> Vec<BTreeSet<usize>> {
    let jets: Vec<(usize, VariableId)> = leaders
        .iter()
        .cloned()
        .enumerate()
        .filter(|(_, v)| v.is_jet())
        .collect();
    let jet_vars: Vec<VariableId> = jets.iter().map(|(_, v)| v.clone()).collect();
    let assigned = if jet_vars.is_empty() { vec![] } else { janet_multiplicative(&jet_vars, n) };
    let mut out = vec![BTreeSet::new(); leaders.len()];
    for ((orig, _), sets) in jets.iter().zip(assigned) {
        out[*orig] = sets;
    }
    out
}

// ---------------------------------------------------------------------------
// differential engine mode
// ---------------------------------------------------------------------------

pub(crate) struct DifferentialMode<'a> {
    pub ranking: &'a Ranking,
    pub n: usize,
}

impl DifferentialMode<'_> {
    /// Reduces non-multiplicative prolongations of every equation; nonzero
    /// remainders are integrability conditions.
    fn completion_constraints(&self, sys: &WorkSystem) -> Vec<Constraint> {
        let leaders: Vec<VariableId> = sys.eqs.keys().cloned().collect();
        if leaders.is_empty() {
            return Vec::new();
        }
        let mult = janet_multiplicative_checked(&leaders, self.n);
        let mut out = Vec::new();
        for (i, v) in leaders.iter().enumerate() {
            if !v.is_jet() {
                continue;
            }
            for k in 0..self.n {
                if mult[i].contains(&k) {
                    continue;
                }
                let prolonged = total_derivative(&sys.eqs[v], k);
                let reduced = head_reduce(self, prolonged, &sys.eqs);
                if !reduced.is_zero() {
                    out.push(Constraint::eq(reduced));
                    if !out.is_empty() {
                        // One condition at a time keeps branching small.
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Re-queues any equation or inequation whose head became reducible
    /// after later insertions (autoreduction, heads only).
    fn requeue_reducible(&self, sys: &mut WorkSystem) -> Vec<Constraint> {
        let eqs = sys.eqs.clone();
        let mut out = Vec::new();
        for (v, p) in &eqs {
            let without: BTreeMap<VariableId, DiffPolynomial> = eqs
                .iter()
                .filter(|(w, _)| *w != v)
                .map(|(w, q)| (w.clone(), q.clone()))
                .collect();
            if self.head_reducer(v, p.degree_in(v), &without).is_some() {
                sys.eqs.remove(v);
                out.push(Constraint::eq(p.clone()));
                return out;
            }
        }
        let ineqs = sys.ineqs.clone();
        for (v, q) in &ineqs {
            if self.head_reducer(v, q.degree_in(v), &sys.eqs).is_some() {
                sys.ineqs.remove(v);
                out.push(Constraint::ineq(q.clone()));
                return out;
            }
        }
        out
    }
}

impl EngineMode for DifferentialMode<'_> {
    fn ranking(&self) -> &Ranking {
        self.ranking
    }

    /// Polynomials in the independent variables alone are units of the
    /// coefficient field K = C(x).
    fn constant_like(&self, p: &DiffPolynomial) -> bool {
        p.variables().iter().all(|v| v.is_indep())
    }

    fn head_reducer(
        &self,
        head: &VariableId,
        head_deg: u32,
        eqs: &BTreeMap<VariableId, DiffPolynomial>,
    ) -> Option<DiffPolynomial> {
        let (t, diff) = janet_reducer(head, eqs, self.n)?;
        if diff.order() == 0 {
            if head_deg >= t.degree_in(head) {
                Some(t)
            } else {
                None
            }
        } else {
            // Proper prolongations are linear in their leader.
            Some(total_derivative_multi(&t, &diff.0))
        }
    }

    fn on_queue_empty(&self, sys: &mut WorkSystem) -> Vec<Constraint> {
        let requeued = self.requeue_reducible(sys);
        if !requeued.is_empty() {
            return requeued;
        }
        self.completion_constraints(sys)
    }
}

// ---------------------------------------------------------------------------
// public API
// ---------------------------------------------------------------------------

const DEFAULT_BUDGET: usize = 150_000;

/// Differential Thomas decomposition: the solution sets of the returned
/// simple differential systems partition `Sol(s)` in the differential
/// sense.  Inconsistent systems yield the empty list.
pub fn diff_thomas_decompose(
    s: &DifferentialSystem,
) -> Result<Vec<SimpleDifferentialSystem>, DiffThomasError> {
    let mode = DifferentialMode { ranking: &s.ranking, n: s.n };
    let mut constraints: Vec<Constraint> =
        s.equations.iter().cloned().map(Constraint::eq).collect();
    constraints.extend(s.inequations.iter().cloned().map(Constraint::ineq));
    let finished = run_engine(&mode, constraints, DEFAULT_BUDGET)?;
    let mut simple: Vec<SimpleAlgebraicSystem> =
        finished.iter().map(|w| finish_system(w, &s.ranking)).collect();
    sort_simple_systems(&mut simple);
    Ok(simple
        .into_iter()
        .map(|alg| {
            let leaders: Vec<VariableId> =
                alg.equations.iter().filter_map(|p| p.leader(&s.ranking)).collect();
            let multiplicative = janet_multiplicative_checked(&leaders, s.n);
            SimpleDifferentialSystem {
                equations: alg.equations,
                inequations: alg.inequations,
                ranking: s.ranking.clone(),
                n: s.n,
                m: s.m,
                multiplicative,
            }
        })
        .collect())
}

/// Validation report for simple differential systems: algebraic simplicity
/// on the jet variables, passivity of the equations, and the condition
/// that no inequation leader is a derivative of an equation leader.
pub fn is_simple_differential(
    s: &SimpleDifferentialSystem,
) -> Result<crate::thomas_alg::SimplicityReport, DiffThomasError> {
    let mut report = crate::thomas_alg::SimplicityReport::default();
    // Passivity: non-multiplicative prolongations head-reduce to zero.
    let mode = DifferentialMode { ranking: &s.ranking, n: s.n };
    let eqs: BTreeMap<VariableId, DiffPolynomial> = s
        .equations
        .iter()
        .filter_map(|p| p.leader(&s.ranking).map(|v| (v, p.clone())))
        .collect();
    for (p, mult) in s.equations.iter().zip(&s.multiplicative) {
        for k in 0..s.n {
            if mult.contains(&k) {
                continue;
            }
            let reduced = head_reduce(&mode, total_derivative(p, k), &eqs);
            if !reduced.is_zero() {
                report
                    .violations
                    .push(format!("non-multiplicative prolongation does not reduce to zero: {p}"));
            }
        }
    }
    // No inequation leader is a derivative of an equation leader.
    for q in &s.inequations {
        if let Some(VariableId::Jet { dep, idx }) = q.leader(&s.ranking) {
            for t in eqs.keys() {
                if let VariableId::Jet { dep: dt, idx: it } = t {
                    if dep == *dt && it.divides(&idx) {
                        report.violations.push(format!(
                            "inequation leader is a derivative of an equation leader: {q}"
                        ));
                    }
                }
            }
        }
    }
    // Algebraic simplicity of the jet-variable system, with polynomials in
    // the independent variables counting as units of the coefficient field.
    let alg = crate::thomas_alg::AlgebraicSystem::new(
        s.equations.clone(),
        s.inequations.clone(),
        s.ranking.clone(),
    );
    let alg_report = crate::thomas_alg::is_simple_over(&alg, true)?;
    report.violations.extend(alg_report.violations);
    Ok(report)
}
