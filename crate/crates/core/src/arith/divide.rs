use super::poly::{DiffPolynomial, Monomial, Rat};
use super::variable::VariableId;
use super::ArithError;
use num_traits::One;

/// Pseudo-division of `f` by `g` with respect to `v`:
/// `init(g)^power * f = quotient*g + remainder` with
/// `deg_v(remainder) < deg_v(g)`.  The initial of `g` is only multiplied in
/// when a division step requires it, so `power` stays at most
/// `deg_v(f) - deg_v(g) + 1` and is zero whenever the division is exact.
pub fn pseudo_divide(
    f: &DiffPolynomial,
    g: &DiffPolynomial,
    v: &VariableId,
) -> Result<(DiffPolynomial, DiffPolynomial, u32), ArithError> {
    let dg = g.degree_in(v);
    if dg == 0 {
        return Err(ArithError::NotADivisorVariable(format!("{v:?}")));
    }
    let init = g.initial(v);
    let mut quot = DiffPolynomial::zero();
    let mut rem = f.clone();
    let mut power = 0u32;
    while !rem.is_zero() {
        let dr = rem.degree_in(v);
        if dr < dg {
            break;
        }
        let lead = rem.coeff_of_power(v, dr);
        // Try an exact step first: lead / init as polynomials.
        let step = match exact_divide(&lead, &init) {
            Some(q) => q,
            None => {
                // Multiply the running identity through by init(g); the
                // cancelling quotient term is then the old leading
                // coefficient itself.
                quot = &quot * &init;
                rem = &rem * &init;
                power += 1;
                lead
            }
        };
        let shift = Monomial::var(v.clone()).pow_mon(dr - dg);
        let term = step.mul_monomial(&shift, &Rat::one());
        quot = &quot + &term;
        rem = &rem - &(&term * g);
        debug_assert!(rem.degree_in(v) < dr || rem.is_zero());
    }
    Ok((quot, rem, power))
}

/// Pseudo-remainder.
pub fn prem(f: &DiffPolynomial, g: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    pseudo_divide(f, g, v).expect("divisor variable").1
}

/// Pseudo-quotient.
pub fn pseudo_quotient(f: &DiffPolynomial, g: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    pseudo_divide(f, g, v).expect("divisor variable").0
}

impl Monomial {
    fn pow_mon(&self, e: u32) -> Monomial {
        let mut pairs = Vec::new();
        for (v, k) in self.pairs() {
            pairs.push((v.clone(), k * e));
        }
        Monomial::from_pairs(pairs)
    }
}

/// Exact multivariate division: returns `f / g` when `g` divides `f`
/// exactly over the rationals, `None` otherwise.
pub fn exact_divide(f: &DiffPolynomial, g: &DiffPolynomial) -> Option<DiffPolynomial> {
    if g.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(DiffPolynomial::zero());
    }
    if let Some(c) = g.as_constant() {
        return Some(f.map_coeffs(|x| x / &c));
    }
    // Divide with respect to some variable of g; recurse on coefficients.
    let v = g.variables().into_iter().next_back().expect("nonconstant");
    let dg = g.degree_in(&v);
    let init = g.initial(&v);
    let mut rem = f.clone();
    let mut quot = DiffPolynomial::zero();
    while !rem.is_zero() {
        let dr = rem.degree_in(&v);
        if dr < dg {
            return None;
        }
        let lead = rem.coeff_of_power(&v, dr);
        let step = exact_divide(&lead, &init)?;
        let shift = Monomial::var(v.clone()).pow_mon(dr - dg);
        let term = step.mul_monomial(&shift, &Rat::one());
        quot = &quot + &term;
        rem = &rem - &(&term * g);
    }
    Some(quot)
}

/// Multivariate gcd over the rationals via a primitive remainder sequence.
/// The result is primitive with integer coefficients; constants collapse
/// to 1 (nonzero rationals are units).
pub fn gcd(f: &DiffPolynomial, g: &DiffPolynomial) -> DiffPolynomial {
    let f = f.primitive_scaled();
    let g = g.primitive_scaled();
    gcd_primitive(&f, &g)
}

fn gcd_primitive(f: &DiffPolynomial, g: &DiffPolynomial) -> DiffPolynomial {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    if f.is_constant() || g.is_constant() {
        return DiffPolynomial::one();
    }
    // Main variable: the structurally greatest variable of either operand.
    let v = f
        .variables()
        .into_iter()
        .chain(g.variables())
        .max()
        .expect("nonconstant operands");
    let df = f.degree_in(&v);
    let dg = g.degree_in(&v);
    if df == 0 || dg == 0 {
        // v occurs in only one of them: gcd divides the contents.
        let (with_v, without) = if df == 0 { (g, f) } else { (f, g) };
        let cont = content_wrt(with_v, &v);
        return gcd_primitive(&cont, without);
    }
    let (mut a, mut b) = if df >= dg { (f.clone(), g.clone()) } else { (g.clone(), f.clone()) };
    let ca = content_wrt(&a, &v);
    let cb = content_wrt(&b, &v);
    let content_gcd = gcd_primitive(&ca, &cb);
    a = exact_divide(&a, &ca).expect("content divides");
    b = exact_divide(&b, &cb).expect("content divides");
    loop {
        let r = prem(&a, &b, &v);
        if r.is_zero() {
            let pp = primitive_part_wrt(&b, &v);
            return (&content_gcd * &pp).primitive_scaled();
        }
        if r.degree_in(&v) == 0 {
            return content_gcd;
        }
        a = b;
        b = primitive_part_wrt(&r, &v);
    }
}

/// Content of `p` with respect to `v`: gcd of the coefficients of the
/// powers of `v`.
pub fn content_wrt(p: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    let d = p.degree_in(v);
    let mut acc = DiffPolynomial::zero();
    for k in 0..=d {
        let c = p.coeff_of_power(v, k);
        if !c.is_zero() {
            acc = gcd_primitive(&acc.primitive_scaled(), &c.primitive_scaled());
            if acc.is_constant() && !acc.is_zero() {
                return DiffPolynomial::one();
            }
        }
    }
    acc
}

pub fn primitive_part_wrt(p: &DiffPolynomial, v: &VariableId) -> DiffPolynomial {
    let c = content_wrt(p, v);
    if c.is_constant() {
        return p.primitive_scaled();
    }
    exact_divide(p, &c).expect("content divides").primitive_scaled()
}
