use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ranking::Ranking;
use super::variable::{Context, VariableId};
use super::ArithError;

pub type Rat = num_rational::BigRational;

/// Power product with positive exponents, kept sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(VariableId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VariableId, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(VariableId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            if let Some(last) = out.last_mut() {
                if last.0 == v {
                    last.1 += e;
                    continue;
                }
            }
            out.push((v, e));
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VariableId, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &VariableId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = self.0.clone();
        pairs.extend(other.0.iter().cloned());
        Monomial::from_pairs(pairs)
    }

    /// Removes `v^k` from the monomial; `k` must not exceed the exponent.
    fn without(&self, v: &VariableId, k: u32) -> Monomial {
        let mut pairs = self.0.clone();
        for p in pairs.iter_mut() {
            if &p.0 == v {
                p.1 -= k;
            }
        }
        Monomial::from_pairs(pairs)
    }
}

/// Sparse exact polynomial over the rationals in independent, jet and
/// auxiliary variables.  Monomials are pairwise distinct and stored in a
/// canonical internal order, so equality is structural; zero coefficients
/// are never kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        DiffPolynomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPolynomial { terms }
    }

    pub fn from_int(c: i64) -> Self {
        DiffPolynomial::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(v: VariableId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rat::one());
        DiffPolynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, Monomial)>) -> Self {
        let mut p = DiffPolynomial::zero();
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    fn add_term(&mut self, c: Rat, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The rational value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Set of variables occurring with positive exponent.
    pub fn variables(&self) -> BTreeSet<VariableId> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.pairs() {
                s.insert(v.clone());
            }
        }
        s
    }

    pub fn contains_var(&self, v: &VariableId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn contains_aux(&self) -> bool {
        self.terms.keys().any(|m| m.pairs().iter().any(|(v, _)| v.is_aux()))
    }

    /// Maximal jet order of any jet variable occurring; 0 if none occurs.
    pub fn order(&self) -> u32 {
        self.variables().iter().map(|v| v.order()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &VariableId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: &VariableId, k: u32) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == k {
                p.add_term(c.clone(), m.without(v, k));
            }
        }
        p
    }

    /// Leading coefficient of the polynomial viewed univariately in `v`.
    pub fn initial(&self, v: &VariableId) -> DiffPolynomial {
        self.coeff_of_power(v, self.degree_in(v))
    }

    /// Ranking-greatest variable occurring in the polynomial.
    pub fn leader(&self, r: &Ranking) -> Option<VariableId> {
        let vars = self.variables();
        r.max(vars.iter())
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            p.add_term(f(c), m.clone());
        }
        p
    }

    pub fn scale(&self, c: &Rat) -> DiffPolynomial {
        if c.is_zero() {
            return DiffPolynomial::zero();
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for (mm, cc) in &self.terms {
            p.add_term(cc * c, mm.mul(m));
        }
        p
    }

    pub fn pow(&self, e: u32) -> DiffPolynomial {
        let mut acc = DiffPolynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in the single variable `v`.
    pub fn differentiate(&self, v: &VariableId) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                p.add_term(c * Rat::from_integer(BigInt::from(e)), m.without(v, 1));
            }
        }
        p
    }

    /// Exact evaluation; every variable of the polynomial must be assigned.
    pub fn evaluate(&self, pt: &BTreeMap<VariableId, Rat>) -> Result<Rat, ArithError> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, e) in m.pairs() {
                let x = pt
                    .get(v)
                    .ok_or_else(|| ArithError::UnassignedVariable(format!("{v:?}")))?;
                for _ in 0..*e {
                    val *= x;
                }
            }
            acc += val;
        }
        Ok(acc)
    }

    /// Substitutes values for a subset of the variables.
    pub fn substitute(&self, assignment: &BTreeMap<VariableId, Rat>) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match assignment.get(v) {
                    Some(x) => {
                        for _ in 0..*e {
                            val *= x;
                        }
                    }
                    None => rest.push((v.clone(), *e)),
                }
            }
            p.add_term(val, Monomial::from_pairs(rest));
        }
        p
    }

    /// Substitutes a polynomial for a single variable.
    pub fn substitute_poly(&self, v: &VariableId, value: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let base = DiffPolynomial::from_terms([(c.clone(), m.without(v, e))]);
            out = &out + &(&base * &value.pow(e));
        }
        out
    }

    /// Content as a positive rational: gcd of numerators over lcm of
    /// denominators of the coefficients.
    pub fn rational_content(&self) -> Rat {
        use num_integer::Integer;
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rat::zero()
        } else {
            Rat::new(num, den)
        }
    }

    /// Primitive integer-coefficient associate (positive content divided out).
    /// The sign is left untouched.
    pub fn primitive_scaled(&self) -> DiffPolynomial {
        let c = self.rational_content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.map_coeffs(|x| x / &c)
    }

    /// Canonical normalization: primitive integer coefficients with a
    /// positive coefficient on the ranking-greatest monomial.  Used for
    /// structural equality tests and deterministic output.
    pub fn canonical(&self, r: &Ranking) -> DiffPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.primitive_scaled();
        let lead = p.max_monomial(r).expect("nonzero");
        if p.terms[&lead].is_negative() {
            p.map_coeffs(|x| -x)
        } else {
            p
        }
    }

    /// Ranking-greatest monomial in the graded reverse lexicographic sense.
    pub fn max_monomial(&self, r: &Ranking) -> Option<Monomial> {
        let mut best: Option<&Monomial> = None;
        for m in self.terms.keys() {
            match best {
                None => best = Some(m),
                Some(b) => {
                    if cmp_monomial_degrevlex(m, b, r) == std::cmp::Ordering::Greater {
                        best = Some(m);
                    }
                }
            }
        }
        best.cloned()
    }

    /// Renders the polynomial with context names, terms in descending
    /// (deg-revlex by ranking) monomial order.
    pub fn render(&self, ctx: &Context, r: &Ranking) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut monomials: Vec<&Monomial> = self.terms.keys().collect();
        monomials.sort_by(|a, b| cmp_monomial_degrevlex(b, a, r));
        let mut out = String::new();
        for (i, m) in monomials.iter().enumerate() {
            let c = &self.terms[*m];
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !abs.is_one() || m.is_one();
            if show_coeff {
                out.push_str(&format_rat(&abs));
                if !m.is_one() {
                    out.push('*');
                }
            }
            let factors: Vec<String> = m
                .pairs()
                .iter()
                .map(|(v, e)| {
                    let name = ctx.var_name(v);
                    if *e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn format_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Graded reverse lexicographic comparison of monomials with the variable
/// order induced by the ranking.
pub fn cmp_monomial_degrevlex(a: &Monomial, b: &Monomial, r: &Ranking) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da = a.total_degree();
    let db = b.total_degree();
    if da != db {
        return da.cmp(&db);
    }
    // Collect the union of variables, ascending by ranking; the first
    // difference at the smallest variable decides reversely.
    let mut vars: Vec<&VariableId> = a.pairs().iter().chain(b.pairs().iter()).map(|(v, _)| v).collect();
    vars.sort_by(|x, y| r.compare(x, y));
    vars.dedup();
    for v in vars {
        let ea = a.exponent(v);
        let eb = b.exponent(v);
        if ea != eb {
            return if ea > eb { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        out
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Context-free debug rendering.
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}·{:?}", format_rat(c), m.pairs()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
