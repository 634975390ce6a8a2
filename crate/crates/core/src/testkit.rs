//! Regression corpus and validation helpers: the worked example systems,
//! a deterministic random-system generator, and cross-cutting invariant
//! checks (cover/disjointness, kernel oracles, series residuals) shared by
//! the integration and acceptance suites.

use std::collections::BTreeMap;

use crate::arith::{DiffPolynomial, Rat, Ranking, VariableId};
use crate::jet::{evaluate_kernel, jacobian_rows, vessiot_rows, JetPoint};
use crate::regularity::{Classification, PrimeReport, RegularityReport};
use crate::series::series_solve;
use crate::thomas_alg::sample_solutions_over;
use crate::thomas_diff::{DifferentialSystem, SimpleDifferentialSystem};
use num_traits::Zero;

pub struct Rng(pub u64);

impl Rng {
    /// Seed from the `DIFFREG_SEED` environment variable when set, else
    /// the given default; keeps the randomized suites reproducible while
    /// allowing seed sweeps.
    pub fn from_env(default: u64) -> Rng {
        match std::env::var("DIFFREG_SEED") {
            Ok(s) => Rng(s.parse().unwrap_or(default)),
            Err(_) => Rng(default),
        }
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

pub fn pv(v: VariableId) -> DiffPolynomial {
    DiffPolynomial::var(v)
}

pub fn q(k: i64) -> Rat {
    Rat::from_integer(k.into())
}

// ---------------------------------------------------------------------------
// the regression corpus
// ---------------------------------------------------------------------------

pub fn pde_example() -> DifferentialSystem {
    let y = VariableId::Indep(1);
    let u = VariableId::jet(0, vec![0, 0]);
    let ux = VariableId::jet(0, vec![1, 0]);
    let uy = VariableId::jet(0, vec![0, 1]);
    let p1 = &(&pv(u.clone()) * &pv(ux))
        - &(&(&pv(y.clone()) * &pv(u.clone())) + &pv(y.clone()).pow(2));
    let p2 = &(&pv(y) * &pv(uy)) - &pv(u);
    DifferentialSystem::new(vec![p1, p2], vec![], Ranking::orderly(), 2, 1)
}

pub fn sphere_plane() -> DifferentialSystem {
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let c = DiffPolynomial::constant(Rat::new((-3).into(), 4.into()));
    let plane = &pv(up.clone()) - &c;
    let sphere = &(&(&pv(up).pow(2) + &pv(u).pow(2)) + &pv(x).pow(2)) - &DiffPolynomial::one();
    DifferentialSystem::new(vec![&plane * &sphere], vec![], Ranking::orderly(), 1, 1)
}

pub fn gather() -> DifferentialSystem {
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let p = &(&pv(up.clone()).pow(3) + &(&pv(u) * &pv(up))) - &pv(x);
    DifferentialSystem::new(vec![p], vec![], Ranking::orderly(), 1, 1)
}

pub fn cone() -> DifferentialSystem {
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let p = &pv(up).pow(2) - &(&pv(u).pow(2) + &pv(x).pow(2));
    DifferentialSystem::new(vec![p], vec![], Ranking::orderly(), 1, 1)
}

pub fn ritt() -> DifferentialSystem {
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let p = &pv(up).pow(2) - &pv(u).pow(3).scale(&q(4));
    DifferentialSystem::new(vec![p], vec![], Ranking::orderly(), 1, 1)
}

pub fn corpus() -> Vec<(&'static str, DifferentialSystem, u32)> {
    vec![
        ("pde_example", pde_example(), 1),
        ("sphere_plane", sphere_plane(), 1),
        ("gather", gather(), 1),
        ("cone", cone(), 1),
        ("ritt", ritt(), 1),
    ]
}

/// Deterministic small random differential systems: n, m <= 2, first-order
/// jets, total degree <= 3, one or two equations with few terms.
pub fn random_system(rng: &mut Rng) -> DifferentialSystem {
    let n = 1 + (rng.next() % 2) as usize;
    let m = 1 + (rng.next() % 2) as usize;
    let mut jet_vars: Vec<VariableId> = Vec::new();
    for dep in 0..m {
        jet_vars.push(VariableId::jet(dep, vec![0; n]));
        for i in 0..n {
            let mut idx = vec![0; n];
            idx[i] = 1;
            jet_vars.push(VariableId::jet(dep, idx));
        }
    }
    let mut all_vars: Vec<VariableId> = (0..n).map(VariableId::Indep).collect();
    all_vars.extend(jet_vars);
    let n_eqs = 1 + (rng.next() % m as u64) as usize;
    let mut equations = Vec::new();
    for _ in 0..n_eqs {
        let mut p = DiffPolynomial::zero();
        let terms = rng.int(2, 3);
        for _ in 0..terms {
            let c = rng.int(-3, 3);
            if c == 0 {
                continue;
            }
            let mut mono = DiffPolynomial::from_int(c);
            for _ in 0..rng.int(1, 2) {
                let v = all_vars[(rng.next() % all_vars.len() as u64) as usize].clone();
                mono = &mono * &DiffPolynomial::var(v);
            }
            p = &p + &mono;
        }
        if !p.is_zero() && !p.is_constant() && p.order() >= 1 {
            equations.push(p);
        }
    }
    if equations.is_empty() {
        // fall back to a simple linear equation so the system stays usable
        equations.push(&pv(VariableId::jet(0, {
            let mut idx = vec![0; n];
            idx[0] = 1;
            idx
        })) - &pv(VariableId::jet(0, vec![0; n])));
    }
    DifferentialSystem::new(equations, vec![], Ranking::orderly(), n, m)
}

// ---------------------------------------------------------------------------
// invariant checks
// ---------------------------------------------------------------------------

/// Sampled points of a regularity component (over all constituents),
/// completed over the full jet ambient: coordinates absent from the
/// constraints are free, so pinning them preserves membership.
pub fn component_points(
    c: &crate::regularity::RegularityComponent,
    count: usize,
    n: usize,
    m: usize,
    ell: u32,
) -> Vec<JetPoint> {
    let ambient = crate::regularity::jet_ambient(n, m, ell);
    let mut out = Vec::new();
    for constituent in &c.constituents {
        let sample = sample_solutions_over(constituent, &ambient, count);
        for pt in sample.points {
            if constituent.member(&pt) {
                out.push(pt);
            }
        }
        if out.len() >= count {
            break;
        }
    }
    out.truncate(count);
    out
}

/// Per-prime invariants: one generic component, semicontinuity, kernel
/// dimensions matching the counted dimensions, Jacobian rank against the
/// codimension, and the disjointness of sampled points.
pub fn check_prime_invariants(prime: &PrimeReport, n: usize, m: usize, ell: u32) {
    let comps = &prime.components;
    assert_eq!(
        comps.iter().filter(|c| c.generic).count(),
        1,
        "exactly one generic component per prime"
    );
    let generic = comps.iter().find(|c| c.generic).unwrap();
    assert!(
        generic.classification == Classification::Regular,
        "the generic component is regular"
    );
    for c in comps {
        assert!(
            c.vessiot_dim >= generic.vessiot_dim,
            "semicontinuity: no component below the generic Vessiot dimension"
        );
    }
    // kernel oracle at sampled points
    let r = prime.prime.ideal.ranking().clone();
    let gens = prime.prime.ideal.groebner().to_vec();
    let vess = vessiot_rows(&gens, n, ell, false).unwrap();
    let jac = jacobian_rows(&gens, n, ell);
    for c in comps {
        let pts = component_points(c, 3, n, m, ell);
        for pt in &pts {
            let dims = evaluate_kernel(&vess, &jac, pt, n, m, ell, &r).unwrap();
            if c.classification == Classification::AlgebraicSingular {
                assert!(
                    dims.cd_rank < prime.prime.codimension,
                    "algebraic singularities have deficient Jacobian rank"
                );
            } else {
                assert_eq!(
                    dims.cd_rank, prime.prime.codimension,
                    "smooth points have Jacobian rank equal to the codimension"
                );
                assert_eq!(dims.vessiot_dim, c.vessiot_dim, "Vessiot dimension oracle");
                assert_eq!(dims.symbol_dim, c.symbol_dim, "symbol dimension oracle");
            }
        }
        // sampled points land in exactly one component
        for pt in &pts {
            let hits = comps
                .iter()
                .filter(|other| {
                    other.constituents.iter().any(|s| s.member(pt))
                })
                .count();
            assert_eq!(hits, 1, "sampled point must lie in exactly one component");
        }
    }
}

/// Exact disjoint-cover check by grid sampling of the input system.
pub fn check_thomas_cover(
    input_eqs: &[DiffPolynomial],
    input_ineqs: &[DiffPolynomial],
    branches: &[crate::thomas_alg::SimpleAlgebraicSystem],
    points: &[BTreeMap<VariableId, Rat>],
) {
    for pt in points {
        let on_input = input_eqs
            .iter()
            .all(|p| p.evaluate(pt).map(|v| v.is_zero()).unwrap_or(false))
            && input_ineqs
                .iter()
                .all(|p| p.evaluate(pt).map(|v| !v.is_zero()).unwrap_or(false));
        let hits = branches.iter().filter(|b| b.member(pt)).count();
        if on_input {
            assert_eq!(hits, 1, "input point {pt:?} must lie in exactly one branch");
        } else {
            assert_eq!(hits, 0, "outside point {pt:?} must lie in no branch");
        }
    }
}

/// Random rational points in the box [-5, 5]^vars.
pub fn box_points(
    rng: &mut Rng,
    vars: &[VariableId],
    count: usize,
) -> Vec<BTreeMap<VariableId, Rat>> {
    (0..count)
        .map(|_| {
            vars.iter()
                .map(|v| (v.clone(), q(rng.int(-5, 5))))
                .collect()
        })
        .collect()
}

/// Series residual check: build a seed from a sampled point of the generic
/// component and verify residual vanishing through the guaranteed order.
pub fn check_series_residuals(
    sys: &SimpleDifferentialSystem,
    report: &RegularityReport,
    target: &DifferentialSystem,
) -> usize {
    let h = sys.max_order();
    let truncation = h + 2;
    let mut checked = 0;
    for sysrep in &report.systems {
        if sysrep.system.equations != sys.equations {
            continue;
        }
        for prime in &sysrep.primes {
            let generic = prime.components.iter().find(|c| c.generic).unwrap();
            for pt in component_points(generic, 3, sys.n, sys.m, target.max_order().max(1)) {
                let x0: Vec<Rat> = (0..sys.n)
                    .map(|i| pt.get(&VariableId::Indep(i)).cloned().unwrap_or_else(Rat::zero))
                    .collect();
                let seed: BTreeMap<VariableId, Rat> = pt
                    .iter()
                    .filter(|(v, _)| v.order() <= h && v.is_jet())
                    .map(|(v, c)| (v.clone(), c.clone()))
                    .collect();
                let Ok(series) = series_solve(sys, &x0, &seed, truncation) else {
                    continue; // seed inadmissible (an initial or separant vanished)
                };
                for p in &target.equations {
                    assert!(
                        series.residual_vanishes(p, truncation - h),
                        "series residual must vanish through order {}",
                        truncation - h
                    );
                }
                checked += 1;
            }
        }
    }
    checked
}
