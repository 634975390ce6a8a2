//! Regularity decomposition: truncation of the differential ideal at a
//! fixed jet order, minimal prime splitting over Q, the extended algebraic
//! system combining Jacobian and Vessiot rows with the generators, its
//! Thomas decomposition under the block order d > c > b > a > u > x,
//! projection, counting, classification of every component and detection
//! of the generic branch, plus optional conservative merging of
//! equivalent components.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{
    kronecker_factor, ArithError, DiffPolynomial, Ranking, VariableId, DEFAULT_FACTOR_BOUND,
};
use crate::ideal::{IdealError, PolyIdeal};
use crate::jet::{jacobian_rows, multi_indices_up_to, top_order_count, vessiot_rows};
use crate::thomas_alg::{
    empty_with, thomas_decompose, AlgebraicSystem, Constraint, Kind, SimpleAlgebraicSystem,
    ThomasError,
};
use crate::thomas_diff::{DiffThomasError, DifferentialSystem, SimpleDifferentialSystem};

#[derive(Debug, Error)]
pub enum RegError {
    #[error("order {requested} too small: the system contains order {needed}")]
    OrderTooSmall { requested: u32, needed: u32 },
    #[error(transparent)]
    Thomas(#[from] ThomasError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("generic branch detection failed: {0}")]
    GenericBranch(String),
    #[error("semicontinuity violated: {0}")]
    Semicontinuity(String),
}

impl From<DiffThomasError> for RegError {
    fn from(e: DiffThomasError) -> Self {
        match e {
            DiffThomasError::Thomas(t) => RegError::Thomas(t),
            DiffThomasError::OrderTooSmall { requested, needed } => {
                RegError::OrderTooSmall { requested, needed }
            }
        }
    }
}

/// Classification of the points of one regularity component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regular,
    RegularSingular,
    IrregularSingular { purely: bool },
    AlgebraicSingular,
    UnknownType,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Regular => "regular",
            Classification::RegularSingular => "regular_singular",
            Classification::IrregularSingular { purely: true } => "irregular_singular_purely",
            Classification::IrregularSingular { purely: false } => "irregular_singular",
            Classification::AlgebraicSingular => "algebraic_singular",
            Classification::UnknownType => "unknown_type",
        }
    }
}

/// Irreducible component of the truncated ideal.
#[derive(Debug, Clone)]
pub struct PrimeComponent {
    pub ideal: PolyIdeal,
    pub dimension: usize,
    pub codimension: usize,
    pub n: usize,
    pub m: usize,
    pub ell: u32,
    /// Irreducibility is certified over Q only; conjugate complex
    /// components stay merged.
    pub over_q_caveat: bool,
    /// Set when the factor bound stopped a split, so the component may
    /// still be reducible.
    pub decomposition_incomplete: bool,
}

/// One regularity component: a projected simple system in the jet
/// variables together with its counts, dimensions and classification.
#[derive(Debug, Clone)]
pub struct RegularityComponent {
    /// Presentation of the component.  For merged components this is the
    /// verified set-exact presentation; `strictly_simple` records whether
    /// re-decomposition returned it as a single simple system.
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
    /// The simple systems making up the component (one when unmerged).
    pub constituents: Vec<SimpleAlgebraicSystem>,
    /// Vessiot rows of the branch: the a/b-leader equations.
    pub vessiot_rows: Vec<DiffPolynomial>,
    pub n_a: usize,
    pub n_b: usize,
    pub n_cd: usize,
    pub vessiot_dim: usize,
    pub symbol_dim: usize,
    pub complement_dim: usize,
    pub classification: Classification,
    pub generic: bool,
    pub strictly_simple: bool,
}

/// Decomposition of one prime component.
#[derive(Debug, Clone)]
pub struct PrimeReport {
    pub prime: PrimeComponent,
    pub components: Vec<RegularityComponent>,
}

/// Decomposition of one simple differential system.
#[derive(Debug, Clone)]
pub struct SystemReport {
    pub system: SimpleDifferentialSystem,
    pub primes: Vec<PrimeReport>,
}

/// Full report of Algorithm 2 with provenance metadata.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub order: u32,
    pub merged: bool,
    pub factor_bound: u32,
    pub systems: Vec<SystemReport>,
}

#[derive(Debug, Clone, Copy)]
pub struct RegOptions {
    pub merge: bool,
    pub factor_bound: u32,
    pub include_lower_vessiot: bool,
}

impl Default for RegOptions {
    fn default() -> Self {
        RegOptions { merge: false, factor_bound: DEFAULT_FACTOR_BOUND, include_lower_vessiot: false }
    }
}

// ---------------------------------------------------------------------------
// truncated ideal and prime splitting
// ---------------------------------------------------------------------------

/// Ambient variable set of the order-`ell` jet ring.
pub fn jet_ambient(n: usize, m: usize, ell: u32) -> Vec<VariableId> {
    let mut vars: Vec<VariableId> = (0..n).map(VariableId::Indep).collect();
    for dep in 0..m {
        for mu in multi_indices_up_to(n, ell) {
            vars.push(VariableId::Jet { dep, idx: mu });
        }
    }
    vars
}

/// The order-`ell` truncation of the differential ideal of `s`: the ideal
/// generated by the multiplicative prolongations up to order `ell`,
/// saturated by the product of their initials.
pub fn truncated_ideal(s: &SimpleDifferentialSystem, ell: u32) -> Result<PolyIdeal, RegError> {
    let basis = s.prolongation_basis(ell)?;
    let ambient = jet_ambient(s.n, s.m, ell);
    let mut ideal = PolyIdeal::new(basis.clone(), ambient, s.ranking.clone());
    let mut saturants = BTreeSet::new();
    for b in &basis {
        if let Some(v) = b.leader(&s.ranking) {
            let ini = b.initial(&v).canonical(&s.ranking);
            if !ini.is_constant() {
                saturants.insert(ini);
            }
        }
    }
    for q in saturants {
        ideal = ideal.saturate(&q);
    }
    Ok(ideal)
}

/// Splits a radical ideal into its minimal prime components over Q by
/// factoring basis elements.  Components that could not be split because
/// of the factor bound are returned with the incomplete flag.
pub fn minimal_primes(
    ideal: &PolyIdeal,
    n: usize,
    m: usize,
    ell: u32,
    factor_bound: u32,
) -> Result<Vec<PrimeComponent>, RegError> {
    let mut queue = vec![(ideal.clone(), false)];
    let mut finished: Vec<(PolyIdeal, bool)> = Vec::new();
    while let Some((cand, mut incomplete)) = queue.pop() {
        if cand.is_unit_ideal() {
            continue;
        }
        let mut split = None;
        for g in cand.groebner() {
            match kronecker_factor(g, factor_bound) {
                Ok(factors) => {
                    if factors.len() > 1 || factors.iter().any(|(_, mult)| *mult > 1) {
                        if factors.len() > 1 {
                            split = Some(factors);
                            break;
                        }
                        // single factor with multiplicity: replace by the
                        // squarefree part
                        split = Some(factors);
                        break;
                    }
                }
                Err(ArithError::FactorizationBound { .. }) => {
                    incomplete = true;
                }
                Err(e) => return Err(e.into()),
            }
        }
        match split {
            Some(factors) => {
                for (f, _) in &factors {
                    let mut gens = cand.generators().to_vec();
                    gens.push(f.clone());
                    queue.push((
                        PolyIdeal::new(gens, cand.ambient().to_vec(), cand.ranking().clone()),
                        incomplete,
                    ));
                }
            }
            None => finished.push((cand, incomplete)),
        }
    }
    // Drop duplicates and non-minimal components (those containing another).
    let mut keep = vec![true; finished.len()];
    for i in 0..finished.len() {
        for j in 0..finished.len() {
            if i == j || !keep[i] || !keep[j] {
                continue;
            }
            if finished[j].0.is_subset_of(&finished[i].0)
                && !(finished[i].0.is_subset_of(&finished[j].0) && j > i)
            {
                // j's variety contains i's: i is not a maximal variety
                if !finished[i].0.is_subset_of(&finished[j].0) {
                    keep[i] = false;
                } else if j < i {
                    // equal ideals: keep the first
                    keep[i] = false;
                }
            }
        }
    }
    let mut out = Vec::new();
    for ((ideal, incomplete), keep) in finished.into_iter().zip(keep) {
        if !keep {
            continue;
        }
        let dimension = ideal.krull_dimension()?;
        let codimension = ideal.ambient().len() - dimension;
        out.push(PrimeComponent {
            ideal,
            dimension,
            codimension,
            n,
            m,
            ell,
            over_q_caveat: true,
            decomposition_incomplete: incomplete,
        });
    }
    out.sort_by(|a, b| {
        a.ideal
            .generators()
            .len()
            .cmp(&b.ideal.generators().len())
            .then_with(|| a.ideal.groebner().cmp(b.ideal.groebner()))
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// the extended system and Algorithm 1
// ---------------------------------------------------------------------------

/// Builds the extended algebraic system `J(p) = 0, V(p) = 0, p = 0` over
/// the ring extended by the auxiliary blocks.
pub fn extended_system(p: &PrimeComponent, include_lower: bool) -> Result<AlgebraicSystem, RegError> {
    let gens: Vec<DiffPolynomial> = p.ideal.groebner().to_vec();
    let vess = vessiot_rows(&gens, p.n, p.ell, include_lower)?;
    let jac = jacobian_rows(&gens, p.n, p.ell);
    let mut equations: Vec<DiffPolynomial> = Vec::new();
    equations.extend(jac.into_iter().map(|r| r.poly));
    equations.extend(vess.into_iter().map(|r| r.poly));
    equations.extend(gens);
    Ok(AlgebraicSystem::new(equations, Vec::new(), p.ideal.ranking().clone()))
}

fn aux_block(v: &VariableId) -> Option<char> {
    match v {
        VariableId::AuxA(_) => Some('a'),
        VariableId::AuxB { .. } => Some('b'),
        VariableId::AuxC { .. } => Some('c'),
        VariableId::AuxD(_) => Some('d'),
        _ => None,
    }
}

/// Counts of aux-leader equations and the projected jet-variable system.
struct BranchAnalysis {
    projected: SimpleAlgebraicSystem,
    vessiot_rows: Vec<DiffPolynomial>,
    n_a: usize,
    n_b: usize,
    n_cd: usize,
}

fn analyse_branch(branch: &SimpleAlgebraicSystem) -> BranchAnalysis {
    let r = &branch.ranking;
    let mut n_a = 0;
    let mut n_b = 0;
    let mut n_cd = 0;
    let mut vessiot = Vec::new();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for p in &branch.equations {
        match p.leader(r).as_ref().and_then(aux_block) {
            Some('a') => {
                n_a += 1;
                vessiot.push(p.clone());
            }
            Some('b') => {
                n_b += 1;
                vessiot.push(p.clone());
            }
            Some('c') | Some('d') => n_cd += 1,
            _ => eqs.push(p.clone()),
        }
    }
    for q in &branch.inequations {
        // The comprehensive property guarantees no aux-leader inequations.
        debug_assert!(q.leader(r).as_ref().and_then(aux_block).is_none());
        if q.leader(r).as_ref().and_then(aux_block).is_none() {
            ineqs.push(q.clone());
        }
    }
    let leaders = eqs
        .iter()
        .map(|p| (p.leader(r).unwrap(), Kind::Eq))
        .chain(ineqs.iter().map(|q| (q.leader(r).unwrap(), Kind::Ineq)))
        .collect();
    BranchAnalysis {
        projected: SimpleAlgebraicSystem {
            equations: eqs,
            inequations: ineqs,
            ranking: r.clone(),
            leaders,
        },
        vessiot_rows: vessiot,
        n_a,
        n_b,
        n_cd,
    }
}

/// Classification by the counts of one branch against the generic branch.
pub fn classify(
    n_a: usize,
    n_b: usize,
    n_cd: usize,
    codim: usize,
    generic: bool,
    v_gen: usize,
    n: usize,
    m: usize,
    ell: u32,
) -> Result<Classification, RegError> {
    if n_cd < codim {
        return Ok(Classification::AlgebraicSingular);
    }
    let v = top_order_count(n, m, ell) + n - n_b - n_a;
    if v > v_gen {
        return Ok(Classification::IrregularSingular { purely: n_a == 0 });
    }
    if v < v_gen {
        return Err(RegError::Semicontinuity(format!(
            "component has Vessiot dimension {v} below the generic {v_gen}"
        )));
    }
    if n_a > 0 {
        return Ok(Classification::RegularSingular);
    }
    if generic || n == 1 {
        return Ok(Classification::Regular);
    }
    Ok(Classification::UnknownType)
}

/// Saturated closure ideal of a projected branch: the equations saturated
/// by the product of their initials.
fn branch_closure_ideal(
    sys: &SimpleAlgebraicSystem,
    ambient: &[VariableId],
) -> PolyIdeal {
    let mut ideal = PolyIdeal::new(sys.equations.clone(), ambient.to_vec(), sys.ranking.clone());
    let mut saturants = BTreeSet::new();
    for p in &sys.equations {
        if let Some(v) = p.leader(&sys.ranking) {
            let ini = p.initial(&v).canonical(&sys.ranking);
            if !ini.is_constant() {
                saturants.insert(ini);
            }
        }
    }
    for q in saturants {
        ideal = ideal.saturate(&q);
    }
    ideal
}

/// Algorithm 1 for one prime component: Thomas decomposition of the
/// extended system, projection, counting, generic-branch detection and
/// classification.
pub fn regularity_decompose(
    prime: &PrimeComponent,
    options: &RegOptions,
) -> Result<Vec<RegularityComponent>, RegError> {
    let extended = extended_system(prime, options.include_lower_vessiot)?;
    let branches = thomas_decompose(&extended)?;
    let mut analyses: Vec<BranchAnalysis> = branches.iter().map(analyse_branch).collect();

    // Generic branch: its projected equations, saturated by their
    // initials, generate the prime's ideal.
    let ambient = prime.ideal.ambient().to_vec();
    let mut generic_idx: Vec<usize> = Vec::new();
    for (i, a) in analyses.iter().enumerate() {
        if a.n_cd < prime.codimension {
            continue;
        }
        let closure = branch_closure_ideal(&a.projected, &ambient);
        if closure.equal(&prime.ideal) {
            generic_idx.push(i);
        }
    }
    if generic_idx.len() != 1 {
        return Err(RegError::GenericBranch(format!(
            "{} candidates among {} branches",
            generic_idx.len(),
            analyses.len()
        )));
    }
    let generic = generic_idx[0];
    let v_gen = top_order_count(prime.n, prime.m, prime.ell) + prime.n
        - analyses[generic].n_b
        - analyses[generic].n_a;

    let mut out = Vec::new();
    for (i, a) in analyses.drain(..).enumerate() {
        let classification = classify(
            a.n_a,
            a.n_b,
            a.n_cd,
            prime.codimension,
            i == generic,
            v_gen,
            prime.n,
            prime.m,
            prime.ell,
        )?;
        let v = top_order_count(prime.n, prime.m, prime.ell) + prime.n - a.n_b - a.n_a;
        let symbol = top_order_count(prime.n, prime.m, prime.ell) - a.n_b;
        out.push(RegularityComponent {
            equations: a.projected.equations.clone(),
            inequations: a.projected.inequations.clone(),
            constituents: vec![a.projected],
            vessiot_rows: a.vessiot_rows,
            n_a: a.n_a,
            n_b: a.n_b,
            n_cd: a.n_cd,
            vessiot_dim: v,
            symbol_dim: symbol,
            complement_dim: prime.n - a.n_a,
            classification,
            generic: i == generic,
            strictly_simple: true,
        });
    }
    if options.merge {
        out = merge_components(out, prime)?;
    }
    sort_components(&mut out);
    Ok(out)
}

fn sort_components(components: &mut [RegularityComponent]) {
    components.sort_by(|a, b| {
        a.equations
            .len()
            .cmp(&b.equations.len())
            .then_with(|| a.equations.cmp(&b.equations))
            .then_with(|| a.inequations.cmp(&b.inequations))
    });
}

// ---------------------------------------------------------------------------
// solution-set inclusion checks and merging
// ---------------------------------------------------------------------------

/// Conjunction of the constraints of a (not necessarily simple) system.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub equations: Vec<DiffPolynomial>,
    pub inequations: Vec<DiffPolynomial>,
}

impl ConstraintSet {
    pub fn from_simple(s: &SimpleAlgebraicSystem) -> Self {
        ConstraintSet { equations: s.equations.clone(), inequations: s.inequations.clone() }
    }

    fn to_system(&self, ranking: &Ranking) -> AlgebraicSystem {
        AlgebraicSystem::new(self.equations.clone(), self.inequations.clone(), ranking.clone())
    }
}

/// Exact test `Sol(a) ⊆ Sol(b)`: no point of `a` may violate any
/// constraint of `b`.
pub fn sol_subset(
    a: &ConstraintSet,
    b: &ConstraintSet,
    ranking: &Ranking,
) -> Result<bool, ThomasError> {
    let sys_a = a.to_system(ranking);
    for f in &b.equations {
        if !empty_with(&sys_a, Constraint::ineq(f.clone()))? {
            return Ok(false);
        }
    }
    for q in &b.inequations {
        if !empty_with(&sys_a, Constraint::eq(q.clone()))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of solution sets of two constraint conjunctions.
pub fn sol_equal(
    a: &ConstraintSet,
    b: &ConstraintSet,
    ranking: &Ranking,
) -> Result<bool, ThomasError> {
    Ok(sol_subset(a, b, ranking)? && sol_subset(b, a, ranking)?)
}

/// Normal forms of the Vessiot rows modulo an equation ideal, canonically
/// scaled, as a comparable set.
fn normalized_rows(
    rows: &[DiffPolynomial],
    eqs: &[DiffPolynomial],
    ambient: &[VariableId],
    ranking: &Ranking,
) -> BTreeSet<DiffPolynomial> {
    let mut vars = ambient.to_vec();
    for r in rows {
        for v in r.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let ideal = PolyIdeal::new(eqs.to_vec(), vars, ranking.clone());
    rows.iter().map(|r| ideal.normal_form(r).canonical(ranking)).collect()
}

/// Index of the unique generic component: the one whose projected
/// equations, saturated by the product of their initials, generate the
/// prime's ideal.  Exactly one candidate must exist.
pub fn generic_branch(
    components: &[RegularityComponent],
    prime: &PrimeComponent,
) -> Result<usize, RegError> {
    let ambient = prime.ideal.ambient().to_vec();
    let mut hits = Vec::new();
    for (i, c) in components.iter().enumerate() {
        if c.n_cd < prime.codimension {
            continue;
        }
        let sys = SimpleAlgebraicSystem {
            equations: c.equations.clone(),
            inequations: c.inequations.clone(),
            ranking: prime.ideal.ranking().clone(),
            leaders: Vec::new(),
        };
        if branch_closure_ideal(&sys, &ambient).equal(&prime.ideal) {
            hits.push(i);
        }
    }
    if hits.len() != 1 {
        return Err(RegError::GenericBranch(format!(
            "{} candidates among {} components",
            hits.len(),
            components.len()
        )));
    }
    Ok(hits[0])
}

/// Conservative pairwise merging: two components merge only when they have
/// the same classification and counts, their Vessiot rows agree modulo the
/// union's equations, and the set union is exactly representable by one
/// constraint system (verified by decomposition-based inclusion checks).
pub fn merge_components(
    mut components: Vec<RegularityComponent>,
    prime: &PrimeComponent,
) -> Result<Vec<RegularityComponent>, RegError> {
    let ranking = prime.ideal.ranking().clone();
    let ambient = prime.ideal.ambient().to_vec();
    'restart: loop {
        // Pairs involving the generic component are attempted first, so the
        // dense branch absorbs its boundary pieces before unrelated pieces
        // conflate with each other.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..components.len() {
            for j in (i + 1)..components.len() {
                pairs.push((i, j));
            }
        }
        pairs.sort_by_key(|(i, j)| !(components[*i].generic || components[*j].generic));
        for (i, j) in pairs {
            {
                if components[i].classification != components[j].classification
                    || components[i].n_a != components[j].n_a
                    || components[i].n_b != components[j].n_b
                    || components[i].classification == Classification::AlgebraicSingular
                {
                    continue;
                }
                if let Some(merged) = try_merge(&components[i], &components[j], prime, &ambient, &ranking)? {
                    let keep_j = components.remove(j);
                    let keep_i = components.remove(i);
                    let mut constituents = keep_i.constituents.clone();
                    constituents.extend(keep_j.constituents.clone());
                    components.push(RegularityComponent {
                        equations: merged.0.equations,
                        inequations: merged.0.inequations,
                        constituents,
                        vessiot_rows: keep_i.vessiot_rows.clone(),
                        n_a: keep_i.n_a,
                        n_b: keep_i.n_b,
                        n_cd: keep_i.n_cd.min(keep_j.n_cd),
                        vessiot_dim: keep_i.vessiot_dim,
                        symbol_dim: keep_i.symbol_dim,
                        complement_dim: keep_i.complement_dim,
                        classification: keep_i.classification,
                        generic: keep_i.generic || keep_j.generic,
                        strictly_simple: merged.1,
                    });
                    continue 'restart;
                }
            }
        }
        break;
    }
    Ok(components)
}

/// Attempts to merge two components; returns the verified presentation and
/// whether it re-decomposes into a single simple system.
fn try_merge(
    a: &RegularityComponent,
    b: &RegularityComponent,
    prime: &PrimeComponent,
    ambient: &[VariableId],
    ranking: &Ranking,
) -> Result<Option<(ConstraintSet, bool)>, RegError> {
    // Condition (b): identical Vessiot rows modulo the union's equations.
    let union_eqs: Vec<DiffPolynomial> = {
        let ia = branch_closure_set(a, ambient, ranking);
        let ib = branch_closure_set(b, ambient, ranking);
        ia.intersect(&ib).generators().to_vec()
    };
    let rows_a = normalized_rows(&a.vessiot_rows, &union_eqs, ambient, ranking);
    let rows_b = normalized_rows(&b.vessiot_rows, &union_eqs, ambient, ranking);
    if rows_a != rows_b {
        return Ok(None);
    }
    let ca: Vec<ConstraintSet> =
        a.constituents.iter().map(ConstraintSet::from_simple).collect();
    let cb: Vec<ConstraintSet> =
        b.constituents.iter().map(ConstraintSet::from_simple).collect();
    // Candidate equations: either side's equations when contained in the
    // other's closure ideal, else the intersection ideal's basis.
    let ia = branch_closure_set(a, ambient, ranking);
    let ib = branch_closure_set(b, ambient, ranking);
    let mut candidates: Vec<Vec<DiffPolynomial>> = Vec::new();
    if a.equations.iter().all(|f| ib.contains(f)) {
        candidates.push(a.equations.clone());
    }
    if b.equations.iter().all(|f| ia.contains(f)) {
        candidates.push(b.equations.clone());
    }
    candidates.push(union_eqs.clone());

    // Inequation pool: irreducible factors of both sides' inequations that
    // vanish nowhere on either component.
    let mut pool: BTreeSet<DiffPolynomial> = BTreeSet::new();
    for q in a.inequations.iter().chain(&b.inequations) {
        for (f, _) in kronecker_factor(q, DEFAULT_FACTOR_BOUND).unwrap_or_default() {
            pool.insert(f.canonical(ranking));
        }
    }
    let mut kept: Vec<DiffPolynomial> = Vec::new();
    'pool: for f in pool {
        for side in ca.iter().chain(&cb) {
            let sys = side.to_system(ranking);
            if !empty_with(&sys, Constraint::eq(f.clone()))? {
                continue 'pool;
            }
        }
        kept.push(f);
    }

    for eqs in candidates {
        let cand = ConstraintSet { equations: eqs, inequations: kept.clone() };
        // Sol(cand) must contain both sides...
        let mut ok = true;
        for side in ca.iter().chain(&cb) {
            if !sol_subset(side, &cand, ranking)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        // ...and nothing else.  The union sides may consist of several
        // constituents; fold them into nested checks.
        if !union_subset_check(&cand, &ca, &cb, ranking)? {
            continue;
        }
        let redecomposed = thomas_decompose(&cand.to_system(ranking))?;
        let strictly_simple = redecomposed.len() == 1;
        let _ = prime;
        return Ok(Some((cand, strictly_simple)));
    }
    Ok(None)
}

/// `Sol(cand) ⊆ ∪ Sol(parts)` for the union of both components'
/// constituents, checked by peeling one constituent at a time.
fn union_subset_check(
    cand: &ConstraintSet,
    ca: &[ConstraintSet],
    cb: &[ConstraintSet],
    ranking: &Ranking,
) -> Result<bool, ThomasError> {
    let parts: Vec<&ConstraintSet> = ca.iter().chain(cb).collect();
    // Pieces of cand not covered by the first k parts must be covered by
    // the rest; with small counts a recursive peel is exact and cheap.
    fn peel(
        current: Vec<AlgebraicSystem>,
        parts: &[&ConstraintSet],
        ranking: &Ranking,
    ) -> Result<bool, ThomasError> {
        if parts.is_empty() {
            for sys in &current {
                if !thomas_decompose(sys)?.is_empty() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let part = parts[0];
        let mut next = Vec::new();
        for sys in &current {
            for f in &part.equations {
                let mut s = sys.clone();
                s.inequations.push(f.clone());
                next.push(s);
            }
            for q in &part.inequations {
                let mut s = sys.clone();
                s.equations.push(q.clone());
                next.push(s);
            }
            if part.equations.is_empty() && part.inequations.is_empty() {
                return Ok(true);
            }
        }
        peel(next, &parts[1..], ranking)
    }
    let start = vec![cand.to_system(ranking)];
    peel(start, &parts, ranking)
}

fn branch_closure_set(
    c: &RegularityComponent,
    ambient: &[VariableId],
    ranking: &Ranking,
) -> PolyIdeal {
    let sys = SimpleAlgebraicSystem {
        equations: c.equations.clone(),
        inequations: c.inequations.clone(),
        ranking: ranking.clone(),
        leaders: Vec::new(),
    };
    branch_closure_ideal(&sys, ambient)
}

// ---------------------------------------------------------------------------
// Algorithm 2
// ---------------------------------------------------------------------------

/// Full regularity decomposition of a differential system at order `ell`:
/// differential Thomas decomposition, order check, and Algorithm 1 on
/// every prime component of every simple system.
pub fn regdecomp_full(
    s: &DifferentialSystem,
    ell: u32,
    options: &RegOptions,
) -> Result<RegularityReport, RegError> {
    let simple_systems = crate::thomas_diff::diff_thomas_decompose(s)?;
    for sys in &simple_systems {
        let needed = sys.max_order();
        if needed > ell {
            return Err(RegError::OrderTooSmall { requested: ell, needed });
        }
    }
    // Simple systems and their prime components are independent; process
    // them in parallel and reassemble in order, so the report is identical
    // for any thread count.
    let reports: Vec<SystemReport> = simple_systems
        .into_par_iter()
        .map(|sys| {
            let ideal = truncated_ideal(&sys, ell)?;
            let primes = minimal_primes(&ideal, sys.n, sys.m, ell, options.factor_bound)?;
            let prime_reports: Vec<PrimeReport> = primes
                .into_par_iter()
                .map(|prime| {
                    let components = regularity_decompose(&prime, options)?;
                    Ok(PrimeReport { prime, components })
                })
                .collect::<Result<_, RegError>>()?;
            Ok(SystemReport { system: sys, primes: prime_reports })
        })
        .collect::<Result<_, RegError>>()?;
    Ok(RegularityReport {
        order: ell,
        merged: options.merge,
        factor_bound: options.factor_bound,
        systems: reports,
    })
}
