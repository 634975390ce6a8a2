use super::divide::{exact_divide, gcd, primitive_part_wrt};
use super::poly::DiffPolynomial;
use super::variable::VariableId;

/// Squarefree factorization of `p` with respect to `v` (Yun-style over the
/// rationals).  The product of `factor^multiplicity` over the result equals
/// `p` up to content in the remaining variables; each factor is squarefree
/// in `v`.  Requires `deg_v(p) >= 1`.
pub fn squarefree_factor(p: &DiffPolynomial, v: &VariableId) -> Vec<(DiffPolynomial, u32)> {
    assert!(p.degree_in(v) >= 1, "polynomial must contain the variable");
    let p = primitive_part_wrt(p, v);
    let dp = p.differentiate(v);
    let mut a = gcd(&p, &dp);
    if a.is_constant() {
        return vec![(p, 1)];
    }
    let mut b = exact_divide(&p, &a).expect("gcd divides");
    let mut out = Vec::new();
    let mut mult = 1u32;
    loop {
        let c = gcd(&a, &b);
        let factor = exact_divide(&b, &c).expect("gcd divides");
        if factor.degree_in(v) >= 1 {
            out.push((primitive_part_wrt(&factor, v), mult));
        }
        if a.is_constant() {
            break;
        }
        a = exact_divide(&a, &c).expect("gcd divides");
        b = c;
        mult += 1;
        if b.is_constant() {
            break;
        }
    }
    out
}

/// Squarefree part of `p` with respect to `v`: the product of the distinct
/// factors.
pub fn squarefree_part(p: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    if p.degree_in(v) == 0 {
        return p.clone();
    }
    let mut out = DiffPolynomial::one();
    for (f, _) in squarefree_factor(p, v) {
        out = &out * &f;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::Rat;
    use crate::arith::Ranking;
    use num_bigint::BigInt;

    fn x() -> VariableId {
        VariableId::Indep(0)
    }
    fn u() -> VariableId {
        VariableId::jet(0, vec![0])
    }
    fn up() -> VariableId {
        VariableId::jet(0, vec![1])
    }
    fn pv(v: VariableId) -> DiffPolynomial {
        DiffPolynomial::var(v)
    }

    #[test]
    fn perfect_square() {
        // (u' - 1)^2 -> [(u' - 1, 2)]
        let f = (&pv(up()) - &DiffPolynomial::one()).pow(2);
        let fs = squarefree_factor(&f, &up());
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 2);
        let r = Ranking::orderly();
        assert_eq!(fs[0].0.canonical(&r), (&pv(up()) - &DiffPolynomial::one()).canonical(&r));
    }

    #[test]
    fn ritt_example_is_squarefree() {
        // (u')^2 - 4u^3 is already squarefree in u'
        let f = &pv(up()).pow(2) - &pv(u()).pow(3).scale(&Rat::from_integer(4.into()));
        let fs = squarefree_factor(&f, &up());
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
    }

    #[test]
    fn sphere_plane_product() {
        // (u' + 3/4)((u')^2 + u^2 + x^2 - 1): two squarefree factors of mult 1
        let plane = &pv(up()) + &DiffPolynomial::constant(Rat::new(BigInt::from(3), BigInt::from(4)));
        let sphere = &(&(&pv(up()).pow(2) + &pv(u()).pow(2)) + &pv(x()).pow(2)) - &DiffPolynomial::one();
        let f = &plane * &sphere;
        let fs = squarefree_factor(&f, &up());
        // The two factors are coprime, so Yun returns their product at
        // multiplicity one.
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
        assert_eq!(fs[0].0.degree_in(&up()), 3);
    }

    #[test]
    fn reconstruction_exact() {
        let a = &pv(up()) - &pv(x());
        let b = &pv(up()) + &pv(u());
        let f = &(&a.pow(3) * &b) * &pv(x()); // content x is dropped
        let fs = squarefree_factor(&f, &up());
        let mut prod = DiffPolynomial::one();
        for (fac, mult) in &fs {
            prod = &prod * &fac.pow(*mult);
        }
        let r = Ranking::orderly();
        let expect = (&a.pow(3) * &b).canonical(&r);
        assert_eq!(prod.canonical(&r), expect);
    }
}
