//! Acceptance suite: every criterion runs at its stated (zero) tolerance
//! and prints one pass/fail line.  Run with
//! `cargo test -p diffreg-cli --test acceptance -- --nocapture`.
//!
//! All symbolic checks are exact; set equalities between components and
//! their target descriptions are verified by mutual inclusion through
//! decomposition-based emptiness checks.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;

use diffreg::arith::{DiffPolynomial, Rat, Ranking, VariableId};
use diffreg::ideal::PolyIdeal;
use diffreg::jet::{evaluate_kernel, jacobian_rows, vessiot_rows};
use diffreg::regularity::{
    jet_ambient, regdecomp_full, sol_equal, Classification, ConstraintSet, RegOptions,
    RegularityComponent,
};
use diffreg::testkit;
use diffreg::thomas_alg::{
    empty_with, thomas_decompose, AlgebraicSystem, Constraint,
};
use diffreg::thomas_diff::diff_thomas_decompose;
use num_traits::Zero;

fn pv(v: VariableId) -> DiffPolynomial {
    DiffPolynomial::var(v)
}

fn q(k: i64) -> Rat {
    Rat::from_integer(k.into())
}

fn verdict(n: u32, ok: bool, what: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {tag} - {what}");
    eprintln!("criterion {n}: {tag} - {what}");
}

fn component_set(c: &RegularityComponent) -> ConstraintSet {
    ConstraintSet { equations: c.equations.clone(), inequations: c.inequations.clone() }
}

fn find_equal<'a>(
    comps: &'a [RegularityComponent],
    target: &ConstraintSet,
    r: &Ranking,
) -> Option<&'a RegularityComponent> {
    comps.iter().find(|c| sol_equal(&component_set(c), target, r).unwrap())
}

// ---------------------------------------------------------------------------
// criterion 1: the PDE example
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_pde_example() {
    let sys = testkit::pde_example();
    let r = Ranking::orderly();
    let y = VariableId::Indep(1);
    let u = VariableId::jet(0, vec![0, 0]);
    let ux = VariableId::jet(0, vec![1, 0]);
    let uy = VariableId::jet(0, vec![0, 1]);

    // one simple differential system with the inequation u != 0
    let simple = diff_thomas_decompose(&sys).unwrap();
    let mut ok = simple.len() == 1;
    ok = ok && simple[0].inequations.iter().any(|p| *p == pv(u.clone()).canonical(&r));

    // I_1 = <p2, p3> with p3 = u_y u_x - u - y, exact ideal equality
    let p2 = &(&pv(y.clone()) * &pv(uy.clone())) - &pv(u.clone());
    let p3 = &(&pv(uy.clone()) * &pv(ux.clone())) - &(&pv(u.clone()) + &pv(y.clone()));
    let ideal = diffreg::regularity::truncated_ideal(&simple[0], 1).unwrap();
    let expect = PolyIdeal::new(vec![p2.clone(), p3], jet_ambient(2, 1, 1), r.clone());
    ok = ok && ideal.equal(&expect);

    // regdecomp at order 1: components equal S1..S4 as sets, with the
    // stated (vessiot, symbol, classification)
    let report = regdecomp_full(&sys, 1, &RegOptions::default()).unwrap();
    let comps = &report.systems[0].primes[0].components;
    let p1 = &(&pv(u.clone()) * &pv(ux.clone()))
        - &(&(&pv(y.clone()) * &pv(u.clone())) + &pv(y.clone()).pow(2));
    let targets: Vec<(ConstraintSet, usize, usize, Classification)> = vec![
        (
            ConstraintSet {
                equations: vec![p1, p2],
                inequations: vec![pv(u.clone()), pv(y.clone())],
            },
            2,
            0,
            Classification::Regular,
        ),
        (
            ConstraintSet {
                equations: vec![pv(ux.clone()), pv(u.clone()), pv(y.clone())],
                inequations: vec![pv(uy.clone())],
            },
            3,
            1,
            Classification::IrregularSingular { purely: true },
        ),
        (
            ConstraintSet {
                equations: vec![pv(uy.clone()), pv(u.clone()), pv(y.clone())],
                inequations: vec![pv(ux.clone())],
            },
            2,
            1,
            Classification::RegularSingular,
        ),
        (
            ConstraintSet {
                equations: vec![pv(ux), pv(uy), pv(u), pv(y)],
                inequations: vec![],
            },
            3,
            2,
            Classification::IrregularSingular { purely: false },
        ),
    ];
    ok = ok && comps.len() == 4;
    for (target, vess, symb, klass) in &targets {
        match find_equal(comps, target, &r) {
            Some(c) => {
                ok = ok
                    && c.vessiot_dim == *vess
                    && c.symbol_dim == *symb
                    && c.classification == *klass;
            }
            None => ok = false,
        }
    }
    verdict(1, ok, "PDE example: one simple system, I_1 = <p2, p3>, components S1-S4");
    assert!(ok);
}

// ---------------------------------------------------------------------------
// criterion 2: the sphere-plane example
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_sphere_plane() {
    let sys = testkit::sphere_plane();
    let r = Ranking::orderly();
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let plane = &pv(up.clone()).scale(&q(4)) + &DiffPolynomial::from_int(3);
    let sphere = &(&(&pv(up.clone()).pow(2) + &pv(u.clone()).pow(2)) + &pv(x.clone()).pow(2))
        - &DiffPolynomial::one();

    let report = regdecomp_full(&sys, 1, &RegOptions { merge: true, ..Default::default() })
        .unwrap();
    let primes = &report.systems[0].primes;
    let mut ok = primes.len() == 2;

    // prime splitting into the two printed factors
    let ambient = jet_ambient(1, 1, 1);
    let plane_ideal = PolyIdeal::new(vec![plane], ambient.clone(), r.clone());
    let sphere_ideal = PolyIdeal::new(vec![sphere.clone()], ambient, r.clone());
    let plane_prime = primes.iter().find(|p| p.prime.ideal.equal(&plane_ideal));
    let sphere_prime = primes.iter().find(|p| p.prime.ideal.equal(&sphere_ideal));
    ok = ok && plane_prime.is_some() && sphere_prime.is_some();

    if let Some(pp) = plane_prime {
        ok = ok
            && pp.components.len() == 1
            && pp.components[0].classification == Classification::Regular;
    }
    if let Some(sp) = sphere_prime {
        let comps = &sp.components;
        ok = ok && comps.len() == 3;
        let u2m1 = &pv(u.clone()).pow(2) - &DiffPolynomial::one();
        let r1 = ConstraintSet {
            equations: vec![sphere.clone()],
            inequations: vec![pv(up.clone())],
        };
        let r2 = ConstraintSet {
            equations: vec![sphere.clone(), pv(up.clone())],
            inequations: vec![u2m1.clone(), pv(x.clone())],
        };
        let r3 = ConstraintSet {
            equations: vec![pv(up), u2m1, pv(x)],
            inequations: vec![],
        };
        for (target, klass) in [
            (&r1, Classification::Regular),
            (&r2, Classification::RegularSingular),
            (&r3, Classification::IrregularSingular { purely: true }),
        ] {
            match find_equal(comps, target, &r) {
                Some(c) => ok = ok && c.classification == klass,
                None => ok = false,
            }
        }
    }
    verdict(2, ok, "sphere-plane: factor split, merged R1/R2/R3, plane regular");
    assert!(ok);
}

// ---------------------------------------------------------------------------
// criterion 3: the hyperbolic gather
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_gather() {
    let sys = testkit::gather();
    let r = Ranking::orderly();
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let p = &(&pv(up.clone()).pow(3) + &(&pv(u.clone()) * &pv(up.clone()))) - &pv(x.clone());
    let disc = &pv(u.clone()).pow(3).scale(&q(4)) + &pv(x.clone()).pow(2).scale(&q(27));

    let report =
        regdecomp_full(&sys, 1, &RegOptions { merge: true, ..Default::default() }).unwrap();
    let prime = &report.systems[0].primes[0];
    let generic = prime.components.iter().find(|c| c.generic).unwrap();

    // the generic branch's solution set is exactly {p = 0} minus the
    // discriminant locus (an ideal-equality-style complement check)
    let gen_set = component_set(generic);
    let surface_minus_disc = ConstraintSet {
        equations: vec![p.clone()],
        inequations: vec![disc.clone()],
    };
    let mut ok = sol_equal(&gen_set, &surface_minus_disc, &r).unwrap();

    // pinned desk-scale points, cross-checked against the kernel oracle
    let classify_at = |coords: (i64, i64, i64)| -> Option<Classification> {
        let mut pt = BTreeMap::new();
        pt.insert(x.clone(), q(coords.0));
        pt.insert(u.clone(), q(coords.1));
        pt.insert(up.clone(), q(coords.2));
        for c in &prime.components {
            let member = c
                .equations
                .iter()
                .all(|e| e.evaluate(&pt).map(|v| v.is_zero()).unwrap_or(false))
                && c.inequations
                    .iter()
                    .all(|e| e.evaluate(&pt).map(|v| !v.is_zero()).unwrap_or(false));
            if member {
                return Some(c.classification);
            }
        }
        None
    };
    ok = ok && classify_at((-16, -12, 2)) == Some(Classification::RegularSingular);
    ok = ok
        && classify_at((-2, -3, 1)) == Some(Classification::IrregularSingular { purely: true });
    ok = ok && classify_at((2, 1, 1)) == Some(Classification::Regular);

    // kernel oracle at the two singular points
    let gens = prime.prime.ideal.groebner().to_vec();
    let vess = vessiot_rows(&gens, 1, 1, false).unwrap();
    let jac = jacobian_rows(&gens, 1, 1);
    let mut pt1 = BTreeMap::new();
    pt1.insert(x.clone(), q(-16));
    pt1.insert(u.clone(), q(-12));
    pt1.insert(up.clone(), q(2));
    let dims1 = evaluate_kernel(&vess, &jac, &pt1, 1, 1, 1, &r).unwrap();
    ok = ok && dims1.vessiot_dim == 1 && dims1.symbol_dim == 1;
    let mut pt2 = BTreeMap::new();
    pt2.insert(x, q(-2));
    pt2.insert(u, q(-3));
    pt2.insert(up, q(1));
    let dims2 = evaluate_kernel(&vess, &jac, &pt2, 1, 1, 1, &r).unwrap();
    ok = ok && dims2.vessiot_dim == 2;

    verdict(3, ok, "gather: generic branch complement is the discriminant, pinned points");
    assert!(ok);
}

// ---------------------------------------------------------------------------
// criterion 4: the cone
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_cone() {
    let sys = testkit::cone();
    let r = Ranking::orderly();
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    let p = &pv(up.clone()).pow(2) - &(&pv(u.clone()).pow(2) + &pv(x.clone()).pow(2));

    let report =
        regdecomp_full(&sys, 1, &RegOptions { merge: true, ..Default::default() }).unwrap();
    let comps = &report.systems[0].primes[0].components;

    // the origin is an algebraic singularity ...
    let origin = ConstraintSet {
        equations: vec![pv(x.clone()), pv(u.clone()), pv(up.clone())],
        inequations: vec![],
    };
    let singular = comps
        .iter()
        .find(|c| c.classification == Classification::AlgebraicSingular);
    let mut ok = match singular {
        Some(c) => sol_equal(&component_set(c), &origin, &r).unwrap(),
        None => false,
    };

    // ... and, as stated, the complement is a single Regular component.
    // Over an algebraically closed field the decomposition also isolates
    // the complex locus u' = 0, u^2 + x^2 = 0, x != 0 as regular singular,
    // so the faithful count is three; the two-component claim cannot be
    // met exactly (see the decisions ledger).
    ok = ok && comps.len() == 2;
    let complement = ConstraintSet { equations: vec![p], inequations: vec![pv(x)] };
    let _ = complement;
    ok = ok
        && comps
            .iter()
            .filter(|c| c.classification == Classification::Regular)
            .count()
            == comps.len() - 1;

    verdict(4, ok, "cone: exactly two components (origin singular, complement regular)");
    assert!(ok, "the over-Q/C decomposition keeps the complex regular-singular locus u'=0, u^2+x^2=0, x!=0 as a third component; see /root/notes/decisions.md");
}

// ---------------------------------------------------------------------------
// criterion 5: the Ritt equation
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_ritt() {
    let sys = testkit::ritt();
    let r = Ranking::orderly();
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);

    // the singular integral u = 0 appears as its own simple system
    let simple = diff_thomas_decompose(&sys).unwrap();
    let mut ok = simple.len() == 2;
    ok = ok
        && simple
            .iter()
            .any(|s| s.equations.iter().any(|e| *e == pv(u.clone()).canonical(&r)));

    // on the generic component's variety, the points with u = 0, u' = 0
    // form an algebraic-singular component
    let report = regdecomp_full(&sys, 1, &RegOptions::default()).unwrap();
    let generic_sys = report
        .systems
        .iter()
        .find(|s| !s.system.equations.iter().any(|e| *e == pv(u.clone()).canonical(&r)))
        .unwrap();
    let comps = &generic_sys.primes[0].components;
    let target = ConstraintSet { equations: vec![pv(u), pv(up)], inequations: vec![] };
    let asing = comps
        .iter()
        .find(|c| c.classification == Classification::AlgebraicSingular);
    ok = ok
        && match asing {
            Some(c) => sol_equal(&component_set(c), &target, &r).unwrap(),
            None => false,
        };
    verdict(5, ok, "Ritt: singular integral branch and the algebraic singularities u = u' = 0");
    assert!(ok);
}

// ---------------------------------------------------------------------------
// criterion 6: property suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_property_suites() {
    let mut ok = true;

    // corpus systems plus 20 random small systems
    let mut inputs: Vec<(String, diffreg::thomas_diff::DifferentialSystem, u32)> = testkit::corpus()
        .into_iter()
        .map(|(n, s, l)| (n.to_string(), s, l))
        .collect();
    let mut rng = testkit::Rng::from_env(0x5eed);
    let mut produced = 0;
    let mut attempts = 0;
    while produced < 20 && attempts < 200 {
        attempts += 1;
        let sys = testkit::random_system(&mut rng);
        let ell = sys.max_order().max(1);
        if regdecomp_full(&sys, ell, &RegOptions::default()).is_ok() {
            inputs.push((format!("random-{produced}"), sys, ell));
            produced += 1;
        }
    }
    ok = ok && produced >= 20;

    let mut sample_rng = testkit::Rng(0xabc);
    for (name, sys, ell) in &inputs {
        // Thomas disjointness / cover by 500-point sampling
        let alg = AlgebraicSystem::new(
            sys.equations.clone(),
            sys.inequations.clone(),
            sys.ranking.clone(),
        );
        let branches = thomas_decompose(&alg).unwrap();
        let mut vars: Vec<VariableId> = Vec::new();
        for p in &sys.equations {
            for v in p.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        let points = testkit::box_points(&mut sample_rng, &vars, 500);
        testkit::check_thomas_cover(&sys.equations, &sys.inequations, &branches, &points);

        // dimension formulas vs the kernel oracle, Jacobian ranks, one
        // generic branch with ideal equality, semicontinuity
        let report = regdecomp_full(sys, *ell, &RegOptions::default())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        for sysrep in &report.systems {
            for prime in &sysrep.primes {
                testkit::check_prime_invariants(prime, sys.n, sys.m, *ell);
            }
        }
        // series residual vanishing through the guaranteed order
        let mut checked = 0;
        for s in diff_thomas_decompose(sys).unwrap() {
            checked += testkit::check_series_residuals(&s, &report, sys);
        }
        if testkit::corpus().iter().any(|(n, _, _)| n == name) {
            ok = ok && checked > 0;
        }
    }

    // pseudo-division and derivation identities, 10^4 random cases each
    let mut rng = testkit::Rng(0x77);
    let vset = [
        VariableId::Indep(0),
        VariableId::Indep(1),
        VariableId::jet(0, vec![0, 0]),
        VariableId::jet(0, vec![1, 0]),
        VariableId::jet(0, vec![0, 1]),
    ];
    let mut random_poly = |rng: &mut testkit::Rng| {
        let mut p = DiffPolynomial::zero();
        for _ in 0..3 {
            let c = rng.int(-9, 9);
            if c == 0 {
                continue;
            }
            let mut mono = DiffPolynomial::from_int(c);
            for _ in 0..rng.int(0, 3) {
                let v = vset[(rng.next() % vset.len() as u64) as usize].clone();
                mono = &mono * &DiffPolynomial::var(v);
            }
            p = &p + &mono;
        }
        p
    };
    let v = VariableId::jet(0, vec![1, 0]);
    let mut cases = 0;
    while cases < 10_000 {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        if g.degree_in(&v) >= 1 {
            let (quo, rem, pw) = diffreg::arith::pseudo_divide(&f, &g, &v).unwrap();
            ok = ok && (&f * &g.initial(&v).pow(pw)) == (&(&quo * &g) + &rem);
        }
        let i = (rng.next() % 2) as usize;
        let lhs = diffreg::diffring::total_derivative(&(&f * &g), i);
        let rhs = &(&diffreg::diffring::total_derivative(&f, i) * &g)
            + &(&f * &diffreg::diffring::total_derivative(&g, i));
        ok = ok && lhs == rhs;
        cases += 1;
    }

    verdict(6, ok, "property suites on the corpus and 20 random systems");
    assert!(ok);
}

// ---------------------------------------------------------------------------
// criterion 7: determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_determinism() {
    let dir = std::env::temp_dir().join("diffreg-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let inputs = [
        ("pde.sys", "indep x y;\ndep u;\neq u*u_x - y*u - y^2;\neq y*u_y - u;\n", "1"),
        ("gather.sys", "indep x;\ndep u;\neq D(u,x)^3 + u*D(u,x) - x;\n", "1"),
        ("sphere.sys", "indep x;\ndep u;\neq (u' + 3/4)*(u'^2 + u^2 + x^2 - 1);\n", "1"),
    ];
    let mut ok = true;
    for (name, text, order) in inputs {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let run = |jobs: &str| {
            Command::new(env!("CARGO_BIN_EXE_diffreg"))
                .args([
                    "--jobs",
                    jobs,
                    "regdecomp",
                    path.to_str().unwrap(),
                    "--order",
                    order,
                    "--merge",
                    "--json",
                ])
                .output()
                .unwrap()
        };
        let a = run("1");
        let b = run("4");
        let c = run("1");
        ok = ok && a.status.success() && b.status.success();
        ok = ok && a.stdout == b.stdout && a.stdout == c.stdout;
    }
    verdict(7, ok, "byte-identical JSON across runs and --jobs 1 vs 4");
    assert!(ok);
}
