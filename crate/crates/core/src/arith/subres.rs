use super::divide::{exact_divide, prem, primitive_part_wrt};
use super::poly::DiffPolynomial;
use super::variable::VariableId;

/// Subresultant pseudo-remainder sequence of `f` and `g` with respect to
/// `v` (Collins/Brown-Traub scaling, so coefficient growth stays linear).
/// The sequence starts with `f, g` and ends with the last nonzero
/// pseudo-remainder.  Requires `deg_v(f) >= deg_v(g) >= 0`.
pub fn subresultant_sequence(
    f: &DiffPolynomial,
    g: &DiffPolynomial,
    v: &VariableId,
) -> Vec<DiffPolynomial> {
    let mut seq = vec![f.clone(), g.clone()];
    if f.is_zero() || g.is_zero() {
        return seq;
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut gg = DiffPolynomial::one();
    let mut h = DiffPolynomial::one();
    loop {
        if b.degree_in(v) == 0 {
            break;
        }
        let delta = a.degree_in(v) as i64 - b.degree_in(v) as i64;
        let r = prem(&a, &b, v);
        // prem may skip the initial multiplication when division steps are
        // exact; rescale to the classical lc(b)^(delta+1) convention.
        let (_, _, pw) = super::divide::pseudo_divide(&a, &b, v).expect("divisor variable");
        let want = (delta + 1).max(0) as u32;
        let r = if pw < want {
            &r * &b.initial(v).pow(want - pw)
        } else {
            r
        };
        if r.is_zero() {
            break;
        }
        let divisor = &gg * &h.pow(delta.max(0) as u32);
        let next = exact_divide(&r, &divisor).unwrap_or(r);
        seq.push(next.clone());
        gg = b.initial(v);
        h = if delta >= 1 {
            let num = gg.pow(delta as u32);
            exact_divide(&num, &h.pow((delta - 1) as u32)).unwrap_or(num)
        } else {
            h
        };
        a = b;
        b = next;
    }
    seq
}

/// Resultant of `f` and `g` with respect to `v`, up to sign and a nonzero
/// rational unit.  Zero when the generic gcd is nontrivial.
pub fn resultant(f: &DiffPolynomial, g: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    if f.degree_in(v) == 0 {
        return f.pow(g.degree_in(v));
    }
    if g.degree_in(v) == 0 {
        return g.pow(f.degree_in(v));
    }
    let (a, b) = if f.degree_in(v) >= g.degree_in(v) {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    let seq = subresultant_sequence(&a, &b, v);
    let last = seq.last().expect("nonempty");
    if last.degree_in(v) > 0 {
        DiffPolynomial::zero()
    } else {
        last.clone()
    }
}

/// Greatest common divisor with respect to `v` in the generic case,
/// together with the case conditions (the initials of the remainder
/// sequence) under which it is valid.
pub fn gcd_wrt(
    f: &DiffPolynomial,
    g: &DiffPolynomial,
    v: &VariableId,
) -> (DiffPolynomial, Vec<DiffPolynomial>) {
    let (a, b) = if f.degree_in(v) >= g.degree_in(v) {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    let seq = subresultant_sequence(&a, &b, v);
    let conditions: Vec<DiffPolynomial> = seq
        .iter()
        .filter(|p| p.degree_in(v) > 0)
        .map(|p| p.initial(v))
        .filter(|c| !c.is_constant())
        .collect();
    let last = seq.last().expect("nonempty");
    let gcd = if last.degree_in(v) == 0 {
        DiffPolynomial::one()
    } else {
        primitive_part_wrt(last, v)
    };
    (gcd, conditions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::Rat;

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
    fn trivial_gcd_of_linear_pair() {
        // gcd(u'^2 - 1, u' - 1) = u' - 1
        let f = &pv(up()).pow(2) - &DiffPolynomial::one();
        let g = &pv(up()) - &DiffPolynomial::one();
        let (d, _) = gcd_wrt(&f, &g, &up());
        let r = crate::arith::Ranking::orderly();
        assert_eq!(d.canonical(&r), g.canonical(&r));
    }

    #[test]
    fn gather_discriminant() {
        // res(u'^3 + u u' - x, 3u'^2 + u) = -(4u^3 + 27x^2) up to a unit
        let f = &(&pv(up()).pow(3) + &(&pv(u()) * &pv(up()))) - &pv(x());
        let g = &pv(up()).pow(2).scale(&Rat::from_integer(3.into())) + &pv(u());
        let res = resultant(&f, &g, &up());
        let disc = &pv(u()).pow(3).scale(&Rat::from_integer(4.into()))
            + &pv(x()).pow(2).scale(&Rat::from_integer(27.into()));
        let r = crate::arith::Ranking::orderly();
        assert_eq!(res.canonical(&r), disc.canonical(&r));
    }

    #[test]
    fn resultant_of_two_linear() {
        // res(u' - a, u' - b) = b - a up to sign; use x and u for a, b
        let f = &pv(up()) - &pv(x());
        let g = &pv(up()) - &pv(u());
        let res = resultant(&f, &g, &up());
        let r = crate::arith::Ranking::orderly();
        let diff = &pv(u()) - &pv(x());
        assert_eq!(res.canonical(&r), diff.canonical(&r));
    }
}
