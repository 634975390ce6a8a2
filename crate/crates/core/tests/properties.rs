//! Randomized identity checks for the arithmetic and differential layers:
//! pseudo-division, resultants against shared roots, squarefree
//! reconstruction, factor irreducibility, ranking axioms and derivation
//! identities.  All randomness is a fixed-seed splitmix stream, so runs
//! are reproducible.

use std::collections::BTreeMap;

use diffreg::arith::{
    kronecker_factor, leader_parts, poly_gcd, pseudo_divide, resultant, squarefree_factor,
    DiffPolynomial, Leader, Rat, Ranking, VariableId, DEFAULT_FACTOR_BOUND,
};
use diffreg::diffring::total_derivative;
use num_traits::Zero;

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

fn vars() -> Vec<VariableId> {
    vec![
        VariableId::Indep(0),
        VariableId::Indep(1),
        VariableId::jet(0, vec![0, 0]),
        VariableId::jet(0, vec![1, 0]),
        VariableId::jet(0, vec![0, 1]),
    ]
}

fn random_poly(rng: &mut Rng, terms: usize, max_deg: u32) -> DiffPolynomial {
    let vs = vars();
    let mut p = DiffPolynomial::zero();
    for _ in 0..terms {
        let c = rng.int(-9, 9);
        if c == 0 {
            continue;
        }
        let mut mono = DiffPolynomial::from_int(c);
        let factors = rng.int(0, max_deg as i64);
        for _ in 0..factors {
            let v = vs[(rng.next() % vs.len() as u64) as usize].clone();
            mono = &mono * &DiffPolynomial::var(v);
        }
        p = &p + &mono;
    }
    p
}

#[test]
fn pseudo_division_identity_holds_exactly() {
    let mut rng = Rng(11);
    let v = VariableId::jet(0, vec![1, 0]);
    let mut checked = 0;
    while checked < 10_000 {
        let f = random_poly(&mut rng, 4, 4);
        let g = random_poly(&mut rng, 3, 4);
        if g.degree_in(&v) == 0 {
            continue;
        }
        let (q, r, pw) = pseudo_divide(&f, &g, &v).unwrap();
        let lhs = &f * &g.initial(&v).pow(pw);
        let rhs = &(&q * &g) + &r;
        assert_eq!(lhs, rhs);
        assert!(r.degree_in(&v) < g.degree_in(&v));
        assert!(pw <= f.degree_in(&v).saturating_sub(g.degree_in(&v)) + 1);
        checked += 1;
    }
}

#[test]
fn resultant_vanishes_exactly_at_shared_roots() {
    let mut rng = Rng(23);
    let v = VariableId::jet(0, vec![1, 0]);
    let mut checked = 0;
    while checked < 200 {
        // two univariate-in-v specializations built from linear factors
        let a = rng.int(-4, 4);
        let b = rng.int(-4, 4);
        let c = rng.int(-4, 4);
        let lin = |k: i64| -> DiffPolynomial {
            &DiffPolynomial::var(v.clone()) - &DiffPolynomial::from_int(k)
        };
        let f = &lin(a) * &lin(b);
        let g = &lin(c) * &DiffPolynomial::from_int(rng.int(1, 3));
        let res = resultant(&f, &g, &v);
        let shares_root = c == a || c == b;
        let res_val = res.as_constant().unwrap();
        assert_eq!(res_val.is_zero(), shares_root, "f = {f}, g = {g}");
        checked += 1;
    }
}

#[test]
fn squarefree_reconstruction_is_exact() {
    let mut rng = Rng(37);
    let v = VariableId::jet(0, vec![1, 0]);
    let r = Ranking::orderly();
    for _ in 0..50 {
        let base1 = &DiffPolynomial::var(v.clone()) - &random_poly(&mut rng, 2, 1);
        let base2 = &DiffPolynomial::var(v.clone()).pow(2) + &random_poly(&mut rng, 2, 1);
        let e1 = rng.int(1, 3) as u32;
        let e2 = rng.int(1, 2) as u32;
        let p = &base1.pow(e1) * &base2.pow(e2);
        if p.degree_in(&v) == 0 {
            continue;
        }
        let factors = squarefree_factor(&p, &v);
        let mut prod = DiffPolynomial::one();
        for (f, m) in &factors {
            prod = &prod * &f.pow(*m);
            // each factor is squarefree in v
            if f.degree_in(&v) >= 1 {
                let g = poly_gcd(f, &f.differentiate(&v));
                assert!(g.is_constant(), "factor {f} not squarefree");
            }
        }
        // product reconstructs the primitive part of the input
        let pp = diffreg::arith::primitive_part_wrt(&p, &v);
        assert_eq!(prod.canonical(&r), pp.canonical(&r));
    }
}

#[test]
fn kronecker_factors_multiply_back_and_stay_irreducible() {
    let mut rng = Rng(41);
    let r = Ranking::orderly();
    for _ in 0..25 {
        let p = random_poly(&mut rng, 4, 3);
        if p.is_constant() || p.total_degree() > DEFAULT_FACTOR_BOUND {
            continue;
        }
        let factors = kronecker_factor(&p, DEFAULT_FACTOR_BOUND).unwrap();
        let mut prod = DiffPolynomial::one();
        for (f, m) in &factors {
            prod = &prod * &f.pow(*m);
            // attempting to split a factor once more keeps it whole
            let again = kronecker_factor(f, DEFAULT_FACTOR_BOUND).unwrap();
            assert_eq!(again.len(), 1, "factor {f} split again");
            assert_eq!(again[0].1, 1);
        }
        assert_eq!(prod.canonical(&r), p.canonical(&r));
    }
}

#[test]
fn ranking_axioms_hold_on_random_triples() {
    let mut rng = Rng(53);
    let r = Ranking::orderly();
    for _ in 0..10_000 {
        let mk = |rng: &mut Rng| {
            let dep = (rng.next() % 2) as usize;
            let idx = vec![rng.int(0, 3) as u32, rng.int(0, 3) as u32];
            VariableId::Jet { dep, idx: diffreg::arith::MultiIndex(idx) }
        };
        let v = mk(&mut rng);
        let w = mk(&mut rng);
        let i = (rng.next() % 2) as usize;
        let raise = |x: &VariableId| match x {
            VariableId::Jet { dep, idx } => VariableId::Jet { dep: *dep, idx: idx.raised(i) },
            _ => unreachable!(),
        };
        // u < delta_i u
        assert_eq!(r.compare(&v, &raise(&v)), std::cmp::Ordering::Less);
        // v < w implies delta_i v < delta_i w
        if r.compare(&v, &w) == std::cmp::Ordering::Less {
            assert_eq!(r.compare(&raise(&v), &raise(&w)), std::cmp::Ordering::Less);
        }
    }
}

#[test]
fn derivation_identities_hold_exactly() {
    let mut rng = Rng(61);
    let r = Ranking::orderly();
    let mut checked = 0;
    while checked < 10_000 {
        let p = random_poly(&mut rng, 3, 2);
        let q = random_poly(&mut rng, 3, 2);
        let i = (rng.next() % 2) as usize;
        let j = 1 - i;
        // product rule
        let lhs = total_derivative(&(&p * &q), i);
        let rhs = &(&total_derivative(&p, i) * &q) + &(&p * &total_derivative(&q, i));
        assert_eq!(lhs, rhs);
        // commuting derivations
        let dij = total_derivative(&total_derivative(&p, i), j);
        let dji = total_derivative(&total_derivative(&p, j), i);
        assert_eq!(dij, dji);
        // initial of the derivative equals the separant
        if let (Leader::Var(v), _, sep) = leader_parts(&p, &r) {
            if v.is_jet() && !sep.is_zero() {
                let d = total_derivative(&p, i);
                let (_, init_d, _) = leader_parts(&d, &r);
                assert_eq!(init_d, sep);
            }
        }
        checked += 1;
    }
}

#[test]
fn evaluation_example_is_exact() {
    // the constructed point satisfies u*u_x - y*u - y^2 = 0
    let y = VariableId::Indep(1);
    let u = VariableId::jet(0, vec![0, 0]);
    let ux = VariableId::jet(0, vec![1, 0]);
    let p = &(&DiffPolynomial::var(u.clone()) * &DiffPolynomial::var(ux.clone()))
        - &(&(&DiffPolynomial::var(y.clone()) * &DiffPolynomial::var(u.clone()))
            + &DiffPolynomial::var(y.clone()).pow(2));
    let mut pt = BTreeMap::new();
    pt.insert(VariableId::Indep(0), Rat::from_integer(0.into()));
    pt.insert(y, Rat::from_integer(1.into()));
    pt.insert(u, Rat::from_integer(1.into()));
    pt.insert(ux, Rat::from_integer(2.into()));
    pt.insert(VariableId::jet(0, vec![0, 1]), Rat::from_integer(1.into()));
    assert!(p.evaluate(&pt).unwrap().is_zero());
}

#[test]
fn saturation_is_monotone_and_idempotent_randomized() {
    let mut rng = Rng(71);
    for _ in 0..10 {
        let gens: Vec<DiffPolynomial> =
            (0..2).map(|_| random_poly(&mut rng, 3, 2)).filter(|p| !p.is_zero()).collect();
        let q = random_poly(&mut rng, 2, 1);
        if q.is_zero() || q.is_constant() {
            continue;
        }
        let ideal = diffreg::ideal::PolyIdeal::new(gens, vec![], Ranking::orderly());
        let s1 = ideal.saturate(&q);
        assert!(ideal.is_subset_of(&s1), "saturation must contain the ideal");
        let s2 = s1.saturate(&q);
        assert!(s1.equal(&s2), "saturation must be idempotent");
    }
}

#[test]
fn hypersurface_dimension_randomized() {
    let mut rng = Rng(83);
    let ambient = vars();
    let mut checked = 0;
    while checked < 8 {
        let p = random_poly(&mut rng, 3, 2);
        if p.is_constant() {
            continue;
        }
        // keep only irreducible generators for the hypersurface statement
        let factors = kronecker_factor(&p, DEFAULT_FACTOR_BOUND).unwrap();
        if factors.len() != 1 || factors[0].1 != 1 {
            continue;
        }
        let ideal =
            diffreg::ideal::PolyIdeal::new(vec![p], ambient.clone(), Ranking::orderly());
        assert_eq!(ideal.krull_dimension().unwrap(), ambient.len() - 1);
        checked += 1;
    }
}
