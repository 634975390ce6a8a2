//! Factorization over the rationals.  Multivariate polynomials are reduced
//! to the univariate case by Kronecker substitution; the univariate image
//! is factored over the integers and factors of the original polynomial
//! are recovered by subset recombination with exact trial division.
//! Irreducibility is over Q, never over C: conjugate complex components
//! stay merged.

mod univariate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::divide::{exact_divide, gcd};
use super::poly::{DiffPolynomial, Monomial, Rat};
use super::variable::VariableId;
use super::ArithError;

pub use super::ArithError as FactorError;
use univariate::{factor_z, ZPoly};

/// Default total-degree bound for `kronecker_factor`.
pub const DEFAULT_FACTOR_BOUND: u32 = 12;

/// Hard cap on the degree of the Kronecker image; beyond it the input is
/// returned unfactored (callers surface this as a warning flag).
const IMAGE_DEGREE_CAP: u64 = 4000;

/// Factors `p` into irreducible-over-Q factors with multiplicities.  The
/// product of `factor^multiplicity` equals `p` up to a rational unit.
pub fn kronecker_factor(
    p: &DiffPolynomial,
    bound: u32,
) -> Result<Vec<(DiffPolynomial, u32)>, ArithError> {
    if p.is_zero() || p.is_constant() {
        return Ok(vec![]);
    }
    if p.total_degree() > bound {
        return Err(ArithError::FactorizationBound { degree: p.total_degree(), bound });
    }
    let p = p.primitive_scaled();
    let mut out: BTreeMap<DiffPolynomial, u32> = BTreeMap::new();
    factor_rec(&p, &mut out);
    Ok(out.into_iter().collect())
}

fn insert(out: &mut BTreeMap<DiffPolynomial, u32>, f: DiffPolynomial, mult: u32) {
    *out.entry(canonical_sign(&f)).or_insert(0) += mult;
}

fn canonical_sign(f: &DiffPolynomial) -> DiffPolynomial {
    // Structural normalization: positive coefficient on the structurally
    // greatest monomial, primitive.
    let f = f.primitive_scaled();
    let lead = f.terms().map(|(m, _)| m.clone()).max();
    match lead {
        Some(m) => {
            let c = f.terms().find(|(mm, _)| **mm == m).map(|(_, c)| c.clone()).unwrap();
            if c.is_negative() {
                f.map_coeffs(|x| -x)
            } else {
                f
            }
        }
        None => f,
    }
}

fn factor_rec(p: &DiffPolynomial, out: &mut BTreeMap<DiffPolynomial, u32>) {
    if p.is_constant() {
        return;
    }
    // Peel repeated factors first.
    for v in p.variables() {
        if p.degree_in(&v) == 0 {
            continue;
        }
        let g = gcd(p, &p.differentiate(&v));
        if !g.is_constant() {
            let q = exact_divide(p, &g).expect("gcd divides");
            factor_rec(&g, out);
            factor_rec(&q, out);
            return;
        }
    }
    // p is squarefree; split off per-variable content.
    let vars: Vec<VariableId> = p.variables().into_iter().collect();
    if vars.len() == 1 {
        factor_via_kronecker(p, &vars, out);
        return;
    }
    for v in &vars {
        let cont = super::divide::content_wrt(p, v);
        if !cont.is_constant() {
            let q = exact_divide(p, &cont).expect("content divides");
            factor_rec(&cont, out);
            factor_rec(&q, out);
            return;
        }
    }
    factor_via_kronecker(p, &vars, out);
}

/// Mixed-radix bases for the Kronecker substitution `v_i -> t^(B_i)`.
fn kronecker_bases(p: &DiffPolynomial, vars: &[VariableId]) -> (Vec<u64>, u64) {
    let mut bases = Vec::with_capacity(vars.len());
    let mut stride = 1u64;
    let mut max_exp = 0u64;
    for v in vars {
        bases.push(stride);
        let d = p.degree_in(v) as u64;
        max_exp += d * stride;
        stride *= d + 1;
    }
    (bases, max_exp)
}

fn factor_via_kronecker(
    p: &DiffPolynomial,
    vars: &[VariableId],
    out: &mut BTreeMap<DiffPolynomial, u32>,
) {
    let p = &p.primitive_scaled();
    let (bases, image_degree) = kronecker_bases(p, vars);
    if image_degree > IMAGE_DEGREE_CAP {
        insert(out, p.clone(), 1);
        return;
    }
    // Build the univariate image.
    let mut coeffs = vec![BigInt::from(0); image_degree as usize + 1];
    for (m, c) in p.terms() {
        let mut e = 0u64;
        for (i, v) in vars.iter().enumerate() {
            e += m.exponent(v) as u64 * bases[i];
        }
        debug_assert!(c.denom().is_one(), "primitive integer polynomial");
        coeffs[e as usize] += c.numer();
    }
    let image = ZPoly::new(coeffs);
    // Factor the image; flatten multiplicities into a multiset.
    let mut image_factors: Vec<ZPoly> = Vec::new();
    for (g, mult) in factor_z(&image) {
        for _ in 0..mult {
            image_factors.push(g.clone());
        }
    }
    if image_factors.len() <= 1 {
        insert(out, p.clone(), 1);
        return;
    }
    // Subset recombination: any true factor of p maps onto a sub-multiset
    // product of image factors.
    let mut rest = p.clone();
    let mut remaining = image_factors;
    let mut size = 1usize;
    'outer: while size <= remaining.len() && !rest.is_constant() {
        if size == remaining.len() {
            break;
        }
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, size) {
            let mut prod = ZPoly::one();
            for &i in &combo {
                prod = prod.mul(&remaining[i]);
            }
            if let Some(cand) = inverse_kronecker(&prod, vars, &bases) {
                let cand = cand.primitive_scaled();
                if cand.is_constant() {
                    continue;
                }
                if let Some(q) = exact_divide(&rest, &cand) {
                    insert(out, cand, 1);
                    rest = q.primitive_scaled();
                    let set: std::collections::BTreeSet<usize> = combo.into_iter().collect();
                    remaining = remaining
                        .into_iter()
                        .enumerate()
                        .filter(|(i, _)| !set.contains(i))
                        .map(|(_, x)| x)
                        .collect();
                    size = 1;
                    continue 'outer;
                }
            }
        }
        size += 1;
    }
    if !rest.is_constant() {
        insert(out, rest, 1);
    }
}

fn inverse_kronecker(g: &ZPoly, vars: &[VariableId], bases: &[u64]) -> Option<DiffPolynomial> {
    let mut terms = Vec::new();
    for (e, c) in g.c.iter().enumerate() {
        if c == &BigInt::from(0) {
            continue;
        }
        let mut rem = e as u64;
        let mut pairs = Vec::new();
        for i in (0..vars.len()).rev() {
            let digit = rem / bases[i];
            rem %= bases[i];
            if digit > u32::MAX as u64 {
                return None;
            }
            if digit > 0 {
                pairs.push((vars[i].clone(), digit as u32));
            }
        }
        terms.push((Rat::from_integer(c.clone()), Monomial::from_pairs(pairs)));
    }
    Some(DiffPolynomial::from_terms(terms))
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        if cur.len() == k {
            out.push(cur);
            continue;
        }
        for i in (start..items.len()).rev() {
            let mut next = cur.clone();
            next.push(items[i]);
            stack.push((i + 1, next));
        }
    }
    out
}
