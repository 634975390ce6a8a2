//! Algebraic Thomas decomposition: splits an arbitrary system of polynomial
//! equations and inequations into simple systems with pairwise disjoint
//! solution sets.  The same worklist engine also drives the differential
//! decomposition (see `thomas_diff`), which swaps in Janet reduction and a
//! passivity completion step.
//!
//! Case distinctions arise from three sources: vanishing of initials,
//! squarefree splits of a constraint against its separant, and gcd splits
//! between two constraints sharing a leader.  All gcd reasoning runs
//! through a parametric Euclidean remainder sequence whose fork conditions
//! become constraints of the branch, so branches partition the solution
//! set by construction.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{
    leader_parts, pseudo_divide, pseudo_quotient, DiffPolynomial, Leader, Ranking, Rat,
    VariableId,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThomasError {
    #[error("decomposition exceeded its step budget ({0} steps)")]
    Budget(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Eq,
    Ineq,
}

/// Unprocessed constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub poly: DiffPolynomial,
    pub kind: Kind,
}

impl Constraint {
    pub fn eq(poly: DiffPolynomial) -> Self {
        Constraint { poly, kind: Kind::Eq }
    }
    pub fn ineq(poly: DiffPolynomial) -> Self {
        Constraint { poly, kind: Kind::Ineq }
    }
}

/// Input system: polynomial equations and inequations under a ranking.
#[derive(Debug, Clone)]
pub struct AlgebraicSystem {
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    pub ranking: Ranking,
}

impl AlgebraicSystem {
    pub fn new(
        equations: Vec<DiffPolynomial>,
        inequations: Vec<DiffPolynomial>,
        ranking: Ranking,
    ) -> Self {
        AlgebraicSystem { equations, inequations, ranking }
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> =
            self.equations.iter().cloned().map(Constraint::eq).collect();
        out.extend(self.inequations.iter().cloned().map(Constraint::ineq));
        out
    }
}

/// Validated triangular output system.  Equations and inequations have
/// pairwise distinct leaders; initials and separants are certified
/// nonvanishing on the solution set by the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleAlgebraicSystem {
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    pub ranking: Ranking,
    /// Leader map certificate: (leader, kind) per constraint, ascending.
    pub leaders: Vec<(VariableId, Kind)>,
}

impl SimpleAlgebraicSystem {
    pub fn equation_with_leader(&self, v: &VariableId) -> Option<&DiffPolynomial> {
        self.equations.iter().find(|p| p.leader(&self.ranking).as_ref() == Some(v))
    }

    pub fn to_system(&self) -> AlgebraicSystem {
        AlgebraicSystem::new(self.equations.clone(), self.inequations.clone(), self.ranking.clone())
    }

    /// Exact membership of a rational point.
    pub fn member(&self, pt: &BTreeMap<VariableId, Rat>) -> bool {
        self.equations.iter().all(|p| p.evaluate(pt).map(|v| v.is_zero()).unwrap_or(false))
            && self
                .inequations
                .iter()
                .all(|p| p.evaluate(pt).map(|v| !v.is_zero()).unwrap_or(false))
    }
}

// ---------------------------------------------------------------------------
// the worklist engine
// ---------------------------------------------------------------------------

/// Hooks that distinguish the algebraic from the differential flavor.
pub(crate) trait EngineMode {
    fn ranking(&self) -> &Ranking;

    /// True when the polynomial is a unit of the coefficient domain:
    /// rational constants algebraically, x-only polynomials differentially.
    fn constant_like(&self, p: &DiffPolynomial) -> bool;

    /// Head reducer for the current leader, if any: returns the reducing
    /// polynomial (a prolongation in the differential case).
    fn head_reducer(
        &self,
        head: &VariableId,
        head_deg: u32,
        eqs: &BTreeMap<VariableId, DiffPolynomial>,
    ) -> Option<DiffPolynomial>;

    /// Called when the queue drains; may return fresh constraints
    /// (integrability conditions, re-queued members).  An empty answer
    /// means the system is finished.
    fn on_queue_empty(&self, sys: &mut WorkSystem) -> Vec<Constraint>;
}

pub(crate) struct AlgebraicMode<'a> {
    pub ranking: &'a Ranking,
}

impl EngineMode for AlgebraicMode<'_> {
    fn ranking(&self) -> &Ranking {
        self.ranking
    }

    fn constant_like(&self, p: &DiffPolynomial) -> bool {
        p.is_constant()
    }

    fn head_reducer(
        &self,
        head: &VariableId,
        head_deg: u32,
        eqs: &BTreeMap<VariableId, DiffPolynomial>,
    ) -> Option<DiffPolynomial> {
        eqs.get(head).filter(|t| head_deg >= t.degree_in(head)).cloned()
    }

    fn on_queue_empty(&self, _sys: &mut WorkSystem) -> Vec<Constraint> {
        Vec::new()
    }
}

/// Replaces a constraint polynomial by its squarefree part: dividing by
/// the gcd of the polynomial with all of its partial derivatives drops one
/// copy of every repeated factor and nothing else, so the zero set is
/// unchanged for equations and inequations alike.  Guarded to small
/// polynomials: the multivariate gcd grows too costly on wide
/// extended-ring rows, and those carry no repeated factors anyway.
fn squarefree_reduce(p: &DiffPolynomial) -> DiffPolynomial {
    let p = p.primitive_scaled();
    if p.variables().len() > 6 || p.total_degree() > 10 || p.num_terms() > 40 {
        return p;
    }
    let mut g = p.clone();
    for v in p.variables() {
        if g.is_constant() {
            return p;
        }
        g = crate::arith::poly_gcd(&g, &p.differentiate(&v));
    }
    if g.is_constant() {
        return p;
    }
    crate::arith::exact_divide(&p, &g).expect("gcd divides").primitive_scaled()
}

/// Candidate system during decomposition.
#[derive(Debug, Clone)]
pub(crate) struct WorkSystem {
    pub eqs: BTreeMap<VariableId, DiffPolynomial>,
    pub ineqs: BTreeMap<VariableId, DiffPolynomial>,
    pub queue: Vec<Constraint>,
}

impl WorkSystem {
    fn new(queue: Vec<Constraint>) -> Self {
        WorkSystem { eqs: BTreeMap::new(), ineqs: BTreeMap::new(), queue }
    }

    /// Normalizes and enqueues a constraint, skipping exact duplicates of
    /// queued or inserted constraints.
    fn push(&mut self, r: &Ranking, c: Constraint) {
        let poly = squarefree_reduce(&c.poly).canonical(r);
        let c = Constraint { poly, kind: c.kind };
        if self.queue.contains(&c) {
            return;
        }
        let inserted = match c.kind {
            Kind::Eq => self.eqs.values().any(|p| *p == c.poly),
            Kind::Ineq => self.ineqs.values().any(|p| *p == c.poly),
        };
        if !inserted {
            self.queue.push(c);
        }
    }

    /// Index of the next constraint: lowest leader first, ties by lower
    /// degree; constants drain immediately.  Settling the lower part of
    /// the triangular set first keeps the case tree small, since every
    /// higher constraint then reduces against an established lower part.
    fn pick(&self, r: &Ranking) -> Option<usize> {
        let mut best: Option<(usize, Option<VariableId>, u32)> = None;
        for (i, c) in self.queue.iter().enumerate() {
            let ld = c.poly.leader(r);
            let deg = ld.as_ref().map(|v| c.poly.degree_in(v)).unwrap_or(0);
            let better = match &best {
                None => true,
                Some((_, bl, bd)) => match (&ld, bl) {
                    (None, None) => false,
                    (None, Some(_)) => true,
                    (Some(_), None) => false,
                    (Some(a), Some(b)) => match r.compare(a, b) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => deg < *bd,
                    },
                },
            };
            if better {
                best = Some((i, ld, deg));
            }
        }
        best.map(|(i, _, _)| i)
    }
}

/// Runs the worklist (LIFO) to exhaustion.
pub(crate) fn run_engine(
    mode: &dyn EngineMode,
    initial: Vec<Constraint>,
    budget: usize,
) -> Result<Vec<WorkSystem>, ThomasError> {
    let mut worklist = vec![WorkSystem::new(initial)];
    let mut finished = Vec::new();
    let mut steps = 0usize;
    while let Some(mut sys) = worklist.pop() {
        steps += 1;
        if steps > budget {
            return Err(ThomasError::Budget(budget));
        }
        match sys.pick(mode.ranking()) {
            None => {
                let extra = mode.on_queue_empty(&mut sys);
                if extra.is_empty() {
                    finished.push(sys);
                } else {
                    for c in extra {
                        sys.push(mode.ranking(), c);
                    }
                    worklist.push(sys);
                }
            }
            Some(i) => {
                let c = sys.queue.remove(i);
                process(mode, sys, c, &mut worklist);
            }
        }
    }
    Ok(finished)
}

/// Head normal form with respect to the triangular part.
pub(crate) fn head_reduce(
    mode: &dyn EngineMode,
    mut p: DiffPolynomial,
    eqs: &BTreeMap<VariableId, DiffPolynomial>,
) -> DiffPolynomial {
    loop {
        if mode.constant_like(&p) {
            return p;
        }
        let v = p.leader(mode.ranking()).expect("nonconstant");
        let deg = p.degree_in(&v);
        match mode.head_reducer(&v, deg, eqs) {
            Some(t) => {
                let (_, r, _) = pseudo_divide(&p, &t, &v).expect("reducer contains head");
                p = r.primitive_scaled();
            }
            None => return p,
        }
    }
}

/// Processes one constraint against a system, pushing every resulting
/// branch onto the worklist (none for dead branches).
fn process(mode: &dyn EngineMode, mut sys: WorkSystem, c: Constraint, out: &mut Vec<WorkSystem>) {
    let p = head_reduce(mode, c.poly, &sys.eqs);
    if mode.constant_like(&p) {
        let nonzero = !p.is_zero();
        match (c.kind, nonzero) {
            (Kind::Eq, true) | (Kind::Ineq, false) => {} // contradiction: branch dies
            _ => out.push(sys),                          // trivially satisfied
        }
        return;
    }
    let p = p.canonical(mode.ranking());
    let v = p.leader(mode.ranking()).expect("nonconstant");

    // Content split: with p = cont * pp (content in the lower variables),
    // an equation falls apart into the cases cont = 0 and pp = 0, while an
    // inequation forces both factors nonzero.
    let cont = crate::arith::content_wrt(&p, &v);
    let p = if mode.constant_like(&cont) {
        p
    } else {
        let pp = crate::arith::exact_divide(&p, &cont).expect("content divides");
        match c.kind {
            Kind::Eq => {
                let mut vanish = sys.clone();
                vanish.push(mode.ranking(), Constraint::eq(cont.clone()));
                out.push(vanish);
                sys.push(mode.ranking(), Constraint::ineq(cont));
            }
            Kind::Ineq => {
                sys.push(mode.ranking(), Constraint::ineq(cont));
            }
        }
        pp.canonical(mode.ranking())
    };
    let d = p.degree_in(&v);

    // Vanishing initial fork.
    let ini = p.initial(&v);
    if !mode.constant_like(&ini) {
        let mut vanish = sys.clone();
        vanish.push(mode.ranking(), Constraint::eq(ini.clone()));
        let tail = &p - &(&ini * &DiffPolynomial::var(v.clone()).pow(d));
        vanish.push(mode.ranking(), Constraint { poly: tail, kind: c.kind });
        out.push(vanish);
        sys.push(mode.ranking(), Constraint::ineq(ini));
    }

    // Squarefree fork against the separant.
    if d >= 2 {
        let separant = p.differentiate(&v);
        for case in parametric_gcd(mode, &p, &separant, &v) {
            let mut child = sys.clone();
            for cond in case.conditions {
                child.push(mode.ranking(), cond);
            }
            if case.gcd.degree_in(&v) == 0 {
                insert_stage(mode, child, p.clone(), c.kind, &v, out);
            } else {
                let reduced = pseudo_quotient(&p, &case.gcd, &v).canonical(mode.ranking());
                child.push(mode.ranking(), Constraint { poly: reduced, kind: c.kind });
                out.push(child);
            }
        }
    } else {
        insert_stage(mode, sys, p, c.kind, &v, out);
    }
}

/// Final insertion of a processed constraint, resolving leader collisions.
fn insert_stage(
    mode: &dyn EngineMode,
    sys: WorkSystem,
    p: DiffPolynomial,
    kind: Kind,
    v: &VariableId,
    out: &mut Vec<WorkSystem>,
) {
    match kind {
        Kind::Eq => {
            if let Some(t) = sys.eqs.get(v).cloned() {
                // Two equations with one leader: only their common roots
                // survive; the gcd becomes the new equation.
                for case in parametric_gcd(mode, &t, &p, v) {
                    if case.gcd.degree_in(v) == 0 {
                        continue; // no common root: branch dies
                    }
                    let mut child = sys.clone();
                    child.eqs.remove(v);
                    for cond in case.conditions {
                        child.push(mode.ranking(), cond);
                    }
                    child.push(mode.ranking(), Constraint::eq(case.gcd.clone()));
                    out.push(child);
                }
            } else if let Some(q) = sys.ineqs.get(v).cloned() {
                // Equation meets inequation: split off the common roots.
                for case in parametric_gcd(mode, &p, &q, v) {
                    if case.gcd.degree_in(v) == 0 {
                        // Coprime: the inequation holds at every root.
                        let mut child = sys.clone();
                        child.ineqs.remove(v);
                        for cond in case.conditions {
                            child.push(mode.ranking(), cond);
                        }
                        child.eqs.insert(v.clone(), p.clone());
                        out.push(child);
                    } else {
                        let reduced = pseudo_quotient(&p, &case.gcd, v);
                        if reduced.degree_in(v) == 0 {
                            continue; // every root excluded: branch dies
                        }
                        let mut child = sys.clone();
                        for cond in case.conditions {
                            child.push(mode.ranking(), cond);
                        }
                        child.push(mode.ranking(), Constraint::eq(reduced));
                        out.push(child);
                    }
                }
            } else {
                let mut sys = sys;
                sys.eqs.insert(v.clone(), p);
                out.push(sys);
            }
        }
        Kind::Ineq => {
            if let Some(t) = sys.eqs.get(v).cloned() {
                for case in parametric_gcd(mode, &t, &p, v) {
                    if case.gcd.degree_in(v) == 0 {
                        // The inequation is implied at the equation's roots.
                        let mut child = sys.clone();
                        for cond in case.conditions {
                            child.push(mode.ranking(), cond);
                        }
                        out.push(child);
                    } else {
                        let reduced = pseudo_quotient(&t, &case.gcd, v);
                        if reduced.degree_in(v) == 0 {
                            continue; // all roots excluded: branch dies
                        }
                        let mut child = sys.clone();
                        child.eqs.remove(v);
                        for cond in case.conditions {
                            child.push(mode.ranking(), cond);
                        }
                        child.push(mode.ranking(), Constraint::eq(reduced));
                        child.push(mode.ranking(), Constraint::ineq(p.clone()));
                        out.push(child);
                    }
                }
            } else if let Some(q) = sys.ineqs.get(v).cloned() {
                // Merge into a single inequation; the squarefree stage of
                // the merged constraint restores condition (iii).
                let mut sys = sys;
                sys.ineqs.remove(v);
                sys.push(mode.ranking(), Constraint::ineq(&q * &p));
                out.push(sys);
            } else {
                let mut sys = sys;
                sys.ineqs.insert(v.clone(), p);
                out.push(sys);
            }
        }
    }
}

/// One leaf of the parametric Euclidean case tree: under `conditions`
/// (constraints in lower-ranked variables) the pointwise gcd of the two
/// input polynomials is `gcd`.
struct GcdCase {
    conditions: Vec<Constraint>,
    gcd: DiffPolynomial,
}

/// Parametric gcd of `f` and `g` with respect to `v`: explores the
/// Euclidean remainder sequence, forking on every nonconstant initial.
/// Leaf conditions are mutually exclusive and jointly exhaustive.
fn parametric_gcd(
    mode: &dyn EngineMode,
    f: &DiffPolynomial,
    g: &DiffPolynomial,
    v: &VariableId,
) -> Vec<GcdCase> {
    let mut leaves = Vec::new();
    let (a, b) = if f.degree_in(v) >= g.degree_in(v) {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    gcd_rec(mode, a, b, v, Vec::new(), &mut leaves, 0);
    leaves
}

fn gcd_rec(
    mode: &dyn EngineMode,
    a: DiffPolynomial,
    b: DiffPolynomial,
    v: &VariableId,
    conds: Vec<Constraint>,
    leaves: &mut Vec<GcdCase>,
    depth: usize,
) {
    assert!(depth < 512, "parametric gcd recursion runaway");
    if b.is_zero() {
        leaves.push(GcdCase { conditions: conds, gcd: a });
        return;
    }
    if b.degree_in(v) == 0 {
        if mode.constant_like(&b) {
            leaves.push(GcdCase { conditions: conds, gcd: DiffPolynomial::one() });
            return;
        }
        // Fork on the lower-variable polynomial b itself.
        let mut nonzero = conds.clone();
        nonzero.push(Constraint::ineq(b.clone()));
        leaves.push(GcdCase { conditions: nonzero, gcd: DiffPolynomial::one() });
        let mut zero = conds;
        zero.push(Constraint::eq(b));
        leaves.push(GcdCase { conditions: zero, gcd: a });
        return;
    }
    let (a, b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    let db = b.degree_in(v);
    let ini = b.initial(v);
    if mode.constant_like(&ini) {
        let (_, r, _) = pseudo_divide(&a, &b, v).expect("divisor variable");
        gcd_rec(mode, b, r.primitive_scaled(), v, conds, leaves, depth + 1);
        return;
    }
    // Fork: the initial of b vanishes or not.
    let mut nonzero = conds.clone();
    nonzero.push(Constraint::ineq(ini.clone()));
    let (_, r, _) = pseudo_divide(&a, &b, v).expect("divisor variable");
    gcd_rec(mode, b.clone(), r.primitive_scaled(), v, nonzero, leaves, depth + 1);

    let mut zero = conds;
    zero.push(Constraint::eq(ini.clone()));
    let tail = &b - &(&ini * &DiffPolynomial::var(v.clone()).pow(db));
    gcd_rec(mode, a, tail.primitive_scaled(), v, zero, leaves, depth + 1);
}

// ---------------------------------------------------------------------------
// public decomposition API
// ---------------------------------------------------------------------------

const DEFAULT_BUDGET: usize = 150_000;

pub(crate) fn finish_system(sys: &WorkSystem, ranking: &Ranking) -> SimpleAlgebraicSystem {
    let mut pairs: Vec<(VariableId, Kind, DiffPolynomial)> = Vec::new();
    for (v, p) in &sys.eqs {
        pairs.push((v.clone(), Kind::Eq, p.canonical(ranking)));
    }
    for (v, p) in &sys.ineqs {
        pairs.push((v.clone(), Kind::Ineq, p.canonical(ranking)));
    }
    pairs.sort_by(|a, b| ranking.compare(&a.0, &b.0));
    let leaders = pairs.iter().map(|(v, k, _)| (v.clone(), *k)).collect();
    let equations =
        pairs.iter().filter(|(_, k, _)| *k == Kind::Eq).map(|(_, _, p)| p.clone()).collect();
    let inequations =
        pairs.iter().filter(|(_, k, _)| *k == Kind::Ineq).map(|(_, _, p)| p.clone()).collect();
    SimpleAlgebraicSystem { equations, inequations, ranking: ranking.clone(), leaders }
}

pub(crate) fn sort_simple_systems(systems: &mut [SimpleAlgebraicSystem]) {
    systems.sort_by(|a, b| {
        a.equations
            .len()
            .cmp(&b.equations.len())
            .then_with(|| a.equations.cmp(&b.equations))
            .then_with(|| a.inequations.cmp(&b.inequations))
    });
}

/// Algebraic Thomas decomposition of `s`: the solution sets of the returned
/// simple systems are pairwise disjoint and their union is `Sol(s)`.
/// An inconsistent system yields an empty list.
pub fn thomas_decompose(s: &AlgebraicSystem) -> Result<Vec<SimpleAlgebraicSystem>, ThomasError> {
    let mode = AlgebraicMode { ranking: &s.ranking };
    let finished = run_engine(&mode, s.constraints(), DEFAULT_BUDGET)?;
    let mut out: Vec<SimpleAlgebraicSystem> =
        finished.iter().map(|w| finish_system(w, &s.ranking)).collect();
    sort_simple_systems(&mut out);
    Ok(out)
}

/// Decides whether adding the extra constraint to `sys` empties its
/// solution set.
pub fn empty_with(sys: &AlgebraicSystem, extra: Constraint) -> Result<bool, ThomasError> {
    let mut s = sys.clone();
    match extra.kind {
        Kind::Eq => s.equations.push(extra.poly),
        Kind::Ineq => s.inequations.push(extra.poly),
    }
    Ok(thomas_decompose(&s)?.is_empty())
}

// ---------------------------------------------------------------------------
// simplicity check
// ---------------------------------------------------------------------------

/// Report of simplicity violations; empty means the system is simple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimplicityReport {
    pub violations: Vec<String>,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three simple-system conditions: triangularity (pairwise
/// distinct leaders), nonvanishing initials and squarefreeness, the latter
/// two as resultant conditions certified to exclude every point of the
/// solution set (verified exactly by recursive decomposition; the
/// conditions themselves live in the lower-ranked variables).
pub fn is_simple(s: &AlgebraicSystem) -> Result<SimplicityReport, ThomasError> {
    is_simple_over(s, false)
}

/// Simplicity check with a switch for the differential reading, where
/// polynomials in the independent variables alone are units of the
/// coefficient field and never witness a violation.
pub fn is_simple_over(
    s: &AlgebraicSystem,
    indep_are_units: bool,
) -> Result<SimplicityReport, ThomasError> {
    let unit = |p: &DiffPolynomial| -> bool {
        if indep_are_units {
            !p.is_zero() && p.variables().iter().all(|v| v.is_indep())
        } else {
            p.is_constant() && !p.is_zero()
        }
    };
    let mut report = SimplicityReport::default();
    let r = &s.ranking;
    let mut seen: Vec<VariableId> = Vec::new();
    let mut all: Vec<(DiffPolynomial, Kind)> = Vec::new();
    for p in &s.equations {
        all.push((p.clone(), Kind::Eq));
    }
    for p in &s.inequations {
        all.push((p.clone(), Kind::Ineq));
    }
    for (p, kind) in &all {
        match leader_parts(p, r).0 {
            Leader::Constant => {
                report.violations.push(format!("constant constraint {p}"));
            }
            Leader::Var(v) => {
                if indep_are_units && v.is_indep() {
                    report.violations.push(format!("independent-variable constraint {p}"));
                    continue;
                }
                if seen.contains(&v) {
                    report.violations.push(format!("duplicate leader {v:?}"));
                }
                seen.push(v.clone());
                let ini = p.initial(&v);
                if !ini.is_constant() && !unit(&ini) && !empty_with(s, Constraint::eq(ini.clone()))? {
                    report
                        .violations
                        .push(format!("initial of {kind:?} with leader {v:?} vanishes somewhere"));
                }
                if p.degree_in(&v) >= 2 {
                    let disc = crate::arith::resultant(p, &p.differentiate(&v), &v);
                    if disc.is_zero() {
                        report
                            .violations
                            .push(format!("constraint with leader {v:?} has a square factor"));
                    } else if !disc.is_constant()
                        && !unit(&disc)
                        && !empty_with(s, Constraint::eq(disc))?
                    {
                        report.violations.push(format!(
                            "constraint with leader {v:?} is not squarefree on the fibre"
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// rational sampling
// ---------------------------------------------------------------------------

/// Outcome of sampling: rational points plus a count of branches skipped
/// because they would require irrational coordinates.
#[derive(Debug, Clone, Default)]
pub struct SampleOutcome {
    pub points: Vec<BTreeMap<VariableId, Rat>>,
    pub skipped_irrational: usize,
}

/// Rational roots of a polynomial univariate in `v`, by the rational root
/// theorem on the primitive integer form; also used by the series solver
/// and the point sampler.
pub fn rational_roots_of(p: &DiffPolynomial, v: &VariableId) -> Vec<Rat> {
    rational_roots(p, v)
}

fn rational_roots(p: &DiffPolynomial, v: &VariableId) -> Vec<Rat> {
    use num_bigint::BigInt;
    let d = p.degree_in(v);
    let prim = p.primitive_scaled();
    let mut coeffs: Vec<BigInt> = Vec::new();
    for k in 0..=d {
        let c = prim.coeff_of_power(v, k);
        coeffs.push(c.as_constant().map(|r| r.numer().clone()).unwrap_or_default());
    }
    let mut roots = Vec::new();
    let mut low = 0usize;
    while low <= d as usize && coeffs[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rat::zero());
    }
    if low > d as usize {
        return roots;
    }
    let a0 = coeffs[low].clone();
    let an = coeffs[d as usize].clone();
    for ps in divisors(&a0) {
        for qs in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rat::new(&ps * BigInt::from(sign), qs.clone());
                let mut acc = Rat::zero();
                for k in (0..=d).rev() {
                    acc = acc * cand.clone() + Rat::from_integer(coeffs[k as usize].clone());
                }
                if acc.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::Signed;
    let n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return vec![BigInt::from(1)];
    }
    let mut d = BigInt::from(1);
    // Divisor scan capped to keep sampling cheap on large constants.
    let limit = BigInt::from(10_000);
    while &d * &d <= n && d <= limit {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Samples up to `count` exact rational points of a simple system,
/// proceeding leader by leader: equation leaders take rational roots of
/// the specialized equation, other coordinates run through a fixed
/// candidate stream.  Branch prefixes that only admit irrational
/// coordinates are skipped and counted.
pub fn sample_solutions(s: &SimpleAlgebraicSystem, count: usize) -> SampleOutcome {
    let mut vars: Vec<VariableId> = Vec::new();
    for p in s.equations.iter().chain(&s.inequations) {
        for v in p.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    sample_solutions_over(s, &vars, count)
}

/// Sampling over an explicit variable list; variables free of constraints
/// run through the candidate stream as well.
pub fn sample_solutions_over(
    s: &SimpleAlgebraicSystem,
    vars: &[VariableId],
    count: usize,
) -> SampleOutcome {
    let r = &s.ranking;
    let mut vars: Vec<VariableId> = vars.to_vec();
    for p in s.equations.iter().chain(&s.inequations) {
        for v in p.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.sort_by(|a, b| r.compare(a, b));
    let mut outcome = SampleOutcome::default();
    // Small rationals first; fractions cover curves like circles that have
    // no nonzero integer points.
    let fractions: &[(i64, i64)] = &[
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 2),
        (3, 1),
        (-3, 1),
        (1, 3),
        (-1, 3),
        (2, 3),
        (-2, 3),
        (3, 2),
        (-3, 2),
        (4, 1),
        (-4, 1),
        (3, 4),
        (-3, 4),
        (4, 3),
        (-4, 3),
        (5, 1),
        (-5, 1),
        (4, 5),
        (-4, 5),
        (3, 5),
        (-3, 5),
        (5, 2),
        (-5, 2),
    ];
    let candidates: Vec<Rat> =
        fractions.iter().map(|(n, d)| Rat::new((*n).into(), (*d).into())).collect();
    let mut pt = BTreeMap::new();
    sample_extend(s, &vars, 0, &mut pt, &candidates, &mut outcome, count);
    outcome
}

fn sample_extend(
    s: &SimpleAlgebraicSystem,
    vars: &[VariableId],
    idx: usize,
    pt: &mut BTreeMap<VariableId, Rat>,
    candidates: &[Rat],
    outcome: &mut SampleOutcome,
    count: usize,
) {
    if outcome.points.len() >= count {
        return;
    }
    if idx == vars.len() {
        if s.member(pt) {
            outcome.points.push(pt.clone());
        }
        return;
    }
    let v = &vars[idx];
    let eq = s.equations.iter().find(|p| p.leader(&s.ranking).as_ref() == Some(v));
    let ineq = s.inequations.iter().find(|p| p.leader(&s.ranking).as_ref() == Some(v));
    let excluded = |pt: &BTreeMap<VariableId, Rat>, v: &VariableId, val: &Rat| -> bool {
        if let Some(q) = ineq {
            let mut trial = pt.clone();
            trial.insert(v.clone(), val.clone());
            q.substitute(&trial).as_constant().map(|c| c.is_zero()).unwrap_or(false)
        } else {
            false
        }
    };
    match eq {
        Some(p) => {
            let spec = p.substitute(pt);
            if spec.degree_in(v) == 0 {
                return;
            }
            let roots = rational_roots(&spec, v);
            if roots.is_empty() {
                outcome.skipped_irrational += 1;
            }
            for root in roots {
                if excluded(pt, v, &root) {
                    continue;
                }
                pt.insert(v.clone(), root);
                sample_extend(s, vars, idx + 1, pt, candidates, outcome, count);
                pt.remove(v);
                if outcome.points.len() >= count {
                    return;
                }
            }
        }
        None => {
            for cand in candidates {
                if excluded(pt, v, cand) {
                    continue;
                }
                pt.insert(v.clone(), cand.clone());
                sample_extend(s, vars, idx + 1, pt, candidates, outcome, count);
                pt.remove(v);
                if outcome.points.len() >= count {
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VariableId {
        VariableId::Indep(0)
    }
    fn y() -> VariableId {
        VariableId::Indep(1)
    }
    fn u() -> VariableId {
        VariableId::jet(0, vec![0, 0])
    }
    fn ux() -> VariableId {
        VariableId::jet(0, vec![1, 0])
    }
    fn uy() -> VariableId {
        VariableId::jet(0, vec![0, 1])
    }
    fn pv(v: VariableId) -> DiffPolynomial {
        DiffPolynomial::var(v)
    }

    fn p1() -> DiffPolynomial {
        &(&pv(u()) * &pv(ux())) - &(&(&pv(y()) * &pv(u())) + &pv(y()).pow(2))
    }
    fn p2() -> DiffPolynomial {
        &(&pv(y()) * &pv(uy())) - &pv(u())
    }

    #[test]
    fn product_equation_splits_into_two_cases() {
        // {x*z = 0} with z ranked above x: {z = 0, x != 0} and {x = 0}
        let z = u();
        let s = AlgebraicSystem::new(vec![&pv(x()) * &pv(z.clone())], vec![], Ranking::orderly());
        let out = thomas_decompose(&s).unwrap();
        assert_eq!(out.len(), 2);
        let with_ineq = out.iter().find(|b| !b.inequations.is_empty()).unwrap();
        assert_eq!(with_ineq.equations, vec![pv(z).canonical(&s.ranking)]);
        assert_eq!(with_ineq.inequations, vec![pv(x()).canonical(&s.ranking)]);
        let plain = out.iter().find(|b| b.inequations.is_empty()).unwrap();
        assert_eq!(plain.equations, vec![pv(x()).canonical(&s.ranking)]);
    }

    #[test]
    fn already_simple_system_passes_through() {
        let s = AlgebraicSystem::new(vec![pv(ux())], vec![], Ranking::orderly());
        let out = thomas_decompose(&s).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].equations, vec![pv(ux()).canonical(&s.ranking)]);
        assert!(out[0].inequations.is_empty());
    }

    #[test]
    fn inconsistent_system_gives_empty_list() {
        let s = AlgebraicSystem::new(
            vec![pv(u()), &pv(u()) - &DiffPolynomial::one()],
            vec![],
            Ranking::orderly(),
        );
        assert!(thomas_decompose(&s).unwrap().is_empty());
    }

    #[test]
    fn example_system_is_simple_as_algebraic_system() {
        // {p1 = 0, p2 = 0, u != 0} under the orderly ranking
        let s = AlgebraicSystem::new(vec![p1(), p2()], vec![pv(u())], Ranking::orderly());
        let rep = is_simple(&s).unwrap();
        assert!(rep.is_simple(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn squarefree_violation_detected() {
        let s = AlgebraicSystem::new(vec![pv(ux()).pow(2)], vec![], Ranking::orderly());
        let rep = is_simple(&s).unwrap();
        assert!(!rep.is_simple());
    }

    #[test]
    fn single_linear_equation_is_simple() {
        let c34 = DiffPolynomial::constant(Rat::new(3.into(), 4.into()));
        let s = AlgebraicSystem::new(vec![&pv(ux()) - &c34], vec![], Ranking::orderly());
        assert!(is_simple(&s).unwrap().is_simple());
    }

    #[test]
    fn decomposition_covers_and_is_disjoint() {
        // (u^2 - x^2)(u - y) = 0 over three variables
        let f = &(&pv(u()).pow(2) - &pv(x()).pow(2)) * &(&pv(u()) - &pv(y()));
        let s = AlgebraicSystem::new(vec![f.clone()], vec![], Ranking::orderly());
        let out = thomas_decompose(&s).unwrap();
        assert!(!out.is_empty());
        let vals: Vec<i64> = vec![-2, -1, 0, 1, 2];
        let mut checked = 0;
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    let mut pt = BTreeMap::new();
                    pt.insert(x(), Rat::from_integer((*a).into()));
                    pt.insert(y(), Rat::from_integer((*b).into()));
                    pt.insert(u(), Rat::from_integer((*c).into()));
                    let on_input = f.evaluate(&pt).unwrap().is_zero();
                    let hits = out.iter().filter(|b| b.member(&pt)).count();
                    if on_input {
                        assert_eq!(hits, 1, "point {pt:?} must lie in exactly one branch");
                        checked += 1;
                    } else {
                        assert_eq!(hits, 0);
                    }
                }
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn sampling_respects_all_constraints() {
        let up = VariableId::jet(0, vec![1, 0]);
        let sphere = &(&(&pv(up.clone()).pow(2) + &pv(u()).pow(2)) + &pv(x()).pow(2))
            - &DiffPolynomial::one();
        let s = AlgebraicSystem::new(vec![pv(up), sphere], vec![pv(x())], Ranking::orderly());
        let out = thomas_decompose(&s).unwrap();
        let mut found = 0;
        for b in &out {
            let sample = sample_solutions(b, 4);
            for pt in &sample.points {
                assert!(b.member(pt));
                found += 1;
            }
        }
        assert!(found > 0, "the circle has rational points like (1, 0)");
    }
}
