//! Commutative-algebra services on polynomial ideals in the truncated jet
//! ring: Gröbner bases, saturation, quotients, membership, equality and
//! Krull dimension.  Internal Gröbner computations use the degree reverse
//! lexicographic order induced by the ranking; elimination orders are built
//! by stacking variable blocks.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{DiffPolynomial, Monomial, Ranking, Rat, VariableId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("unit ideal")]
    UnitIdeal,
}

/// Ideal in a polynomial ring over Q, carrying its ambient variable set and
/// a lazily computed reduced Gröbner basis.
#[derive(Debug)]
pub struct PolyIdeal {
    generators: Vec<DiffPolynomial>,
    /// Ambient variables, descending by the ranking.
    ambient: Vec<VariableId>,
    ranking: Ranking,
    gb: OnceLock<Vec<DiffPolynomial>>,
}

impl Clone for PolyIdeal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        PolyIdeal {
            generators: self.generators.clone(),
            ambient: self.ambient.clone(),
            ranking: self.ranking.clone(),
            gb,
        }
    }
}

impl PolyIdeal {
    /// Builds an ideal; the ambient set is extended to cover every variable
    /// appearing in a generator.
    pub fn new(
        generators: Vec<DiffPolynomial>,
        ambient: Vec<VariableId>,
        ranking: Ranking,
    ) -> Self {
        let mut vars: BTreeSet<VariableId> = ambient.into_iter().collect();
        for g in &generators {
            vars.extend(g.variables());
        }
        let mut ambient: Vec<VariableId> = vars.into_iter().collect();
        ambient.sort_by(|a, b| ranking.compare(b, a));
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        PolyIdeal { generators, ambient, ranking, gb: OnceLock::new() }
    }

    pub fn generators(&self) -> &[DiffPolynomial] {
        &self.generators
    }

    pub fn ambient(&self) -> &[VariableId] {
        &self.ambient
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.groebner().is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.groebner().iter().any(|p| p.is_constant() && !p.is_zero())
    }

    /// Reduced Gröbner basis with respect to the deg-revlex order on the
    /// ambient variables, computed once and cached.
    pub fn groebner(&self) -> &[DiffPolynomial] {
        self.gb.get_or_init(|| {
            let ring = Ring::single_block(&self.ambient);
            let gens: Vec<GPoly> = self.generators.iter().map(|p| ring.to_dense(p)).collect();
            let basis = buchberger(&ring, gens);
            basis
                .into_iter()
                .map(|g| ring.from_dense(&g).canonical(&self.ranking))
                .collect()
        })
    }

    /// Normal form of `p` with respect to the cached basis.
    pub fn normal_form(&self, p: &DiffPolynomial) -> DiffPolynomial {
        let mut vars = self.ambient.clone();
        for v in p.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort_by(|a, b| self.ranking.compare(b, a));
        let ring = Ring::single_block(&vars);
        let basis: Vec<GPoly> = self.groebner().iter().map(|g| ring.to_dense(g)).collect();
        let nf = reduce_full(&ring, &ring.to_dense(p), &basis);
        ring.from_dense(&nf)
    }

    pub fn contains(&self, p: &DiffPolynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn equal(&self, other: &PolyIdeal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    pub fn is_subset_of(&self, other: &PolyIdeal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    fn with_same_ambient(&self, generators: Vec<DiffPolynomial>) -> PolyIdeal {
        PolyIdeal::new(generators, self.ambient.clone(), self.ranking.clone())
    }

    /// Saturation `I : q^inf` via a slack-variable elimination.
    pub fn saturate(&self, q: &DiffPolynomial) -> PolyIdeal {
        assert!(!q.is_zero(), "saturation by zero");
        if q.is_constant() {
            return self.clone();
        }
        let mut ambient = self.ambient.clone();
        for v in q.variables() {
            if !ambient.contains(&v) {
                ambient.push(v);
            }
        }
        ambient.sort_by(|a, b| self.ranking.compare(b, a));
        let t = fresh_slack(&ambient);
        let one_minus_tq = &DiffPolynomial::one() - &(&DiffPolynomial::var(t.clone()) * q);
        let mut gens = self.generators.clone();
        gens.push(one_minus_tq);
        let eliminated = eliminate(&gens, &[t], &ambient, &self.ranking);
        PolyIdeal::new(eliminated, ambient, self.ranking.clone())
    }

    /// Ideal quotient `I : q` through `(I ∩ <q>) / q`.
    pub fn quotient(&self, q: &DiffPolynomial) -> PolyIdeal {
        assert!(!q.is_zero(), "quotient by zero");
        if q.is_constant() {
            return self.clone();
        }
        let inter = self.intersect(&self.with_same_ambient(vec![q.clone()]));
        let gens = inter
            .generators
            .iter()
            .map(|f| crate::arith::exact_divide(f, q).expect("intersection divisible by q"))
            .collect();
        self.with_same_ambient(gens)
    }

    /// Ideal intersection via the slack-variable trick.
    pub fn intersect(&self, other: &PolyIdeal) -> PolyIdeal {
        let mut ambient = self.ambient.clone();
        for v in &other.ambient {
            if !ambient.contains(v) {
                ambient.push(v.clone());
            }
        }
        ambient.sort_by(|a, b| self.ranking.compare(b, a));
        let t = fresh_slack(&ambient);
        let tpoly = DiffPolynomial::var(t.clone());
        let one_minus_t = &DiffPolynomial::one() - &tpoly;
        let mut gens: Vec<DiffPolynomial> = self.generators.iter().map(|f| &tpoly * f).collect();
        gens.extend(other.generators.iter().map(|f| &one_minus_t * f));
        let eliminated = eliminate(&gens, &[t], &ambient, &self.ranking);
        PolyIdeal::new(eliminated, ambient, self.ranking.clone())
    }

    /// Krull dimension of the quotient ring, via maximal variable sets
    /// independent modulo the leading-term ideal.
    pub fn krull_dimension(&self) -> Result<usize, IdealError> {
        if self.is_unit_ideal() {
            return Err(IdealError::UnitIdeal);
        }
        let ring = Ring::single_block(&self.ambient);
        let supports: Vec<u64> = self
            .groebner()
            .iter()
            .map(|g| {
                let d = ring.to_dense(g);
                let lead = &d.terms[0].1;
                let mut mask = 0u64;
                for (i, e) in lead.iter().enumerate() {
                    if *e > 0 {
                        mask |= 1 << i;
                    }
                }
                mask
            })
            .collect();
        let nvars = self.ambient.len();
        assert!(nvars <= 63, "dimension computation limited to 63 variables");
        let full: u64 = (1u64 << nvars) - 1;
        let mut best = 0usize;
        dfs_independent(full, &supports, &mut best);
        Ok(best)
    }

    pub fn codimension(&self) -> Result<usize, IdealError> {
        Ok(self.ambient.len() - self.krull_dimension()?)
    }
}

/// Depth-first search for a maximum variable set that contains no leading
/// support completely.
fn dfs_independent(cand: u64, supports: &[u64], best: &mut usize) {
    let count = cand.count_ones() as usize;
    if count <= *best {
        return;
    }
    match supports.iter().find(|s| (*s & !cand) == 0 && **s != 0) {
        None => *best = (*best).max(count),
        Some(s) => {
            let mut bits = *s;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                dfs_independent(cand & !b, supports, best);
                bits &= !b;
            }
        }
    }
}

fn fresh_slack(ambient: &[VariableId]) -> VariableId {
    let mut k = 0usize;
    loop {
        let t = VariableId::Slack(k);
        if !ambient.contains(&t) {
            return t;
        }
        k += 1;
    }
}

/// Gröbner-based elimination of the `elim` variables: computes a basis with
/// the eliminated block on top and keeps the elements free of it.
fn eliminate(
    gens: &[DiffPolynomial],
    elim: &[VariableId],
    ambient: &[VariableId],
    ranking: &Ranking,
) -> Vec<DiffPolynomial> {
    let mut vars: Vec<VariableId> = elim.to_vec();
    vars.extend(ambient.iter().cloned());
    let ring = Ring::new(vars, vec![elim.len(), ambient.len()]);
    let dense: Vec<GPoly> = gens.iter().map(|p| ring.to_dense(p)).collect();
    let basis = buchberger(&ring, dense);
    basis
        .into_iter()
        .map(|g| ring.from_dense(&g))
        .filter(|p| elim.iter().all(|t| !p.contains_var(t)))
        .map(|p| p.canonical(ranking))
        .collect()
}

// ---------------------------------------------------------------------------
// dense Gröbner engine
// ---------------------------------------------------------------------------

type Exp = Vec<u32>;

/// Polynomial ring with a fixed variable list (descending) and a block
/// order: blocks are compared left to right, inside a block by total degree
/// then reverse lexicographically.
pub(crate) struct Ring {
    vars: Vec<VariableId>,
    blocks: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct GPoly {
    /// Terms sorted descending by the ring order.
    terms: Vec<(Rat, Exp)>,
}

impl Ring {
    pub(crate) fn new(vars: Vec<VariableId>, block_sizes: Vec<usize>) -> Self {
        let mut blocks = Vec::new();
        let mut start = 0;
        for s in block_sizes {
            blocks.push((start, start + s));
            start += s;
        }
        assert_eq!(start, vars.len());
        Ring { vars, blocks }
    }

    pub(crate) fn single_block(vars: &[VariableId]) -> Self {
        Ring::new(vars.to_vec(), vec![vars.len()])
    }

    fn cmp_exp(&self, a: &Exp, b: &Exp) -> Ordering {
        for (s, e) in &self.blocks {
            let da: u32 = a[*s..*e].iter().sum();
            let db: u32 = b[*s..*e].iter().sum();
            if da != db {
                return da.cmp(&db);
            }
            for i in (*s..*e).rev() {
                if a[i] != b[i] {
                    return if a[i] > b[i] { Ordering::Less } else { Ordering::Greater };
                }
            }
        }
        Ordering::Equal
    }

    pub(crate) fn to_dense(&self, p: &DiffPolynomial) -> GPoly {
        let mut terms: Vec<(Rat, Exp)> = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut e = vec![0u32; self.vars.len()];
            for (v, k) in m.pairs() {
                let idx = self
                    .vars
                    .iter()
                    .position(|w| w == v)
                    .expect("variable inside ambient set");
                e[idx] = *k;
            }
            terms.push((c.clone(), e));
        }
        terms.sort_by(|x, y| self.cmp_exp(&y.1, &x.1));
        GPoly { terms }
    }

    pub(crate) fn from_dense(&self, p: &GPoly) -> DiffPolynomial {
        DiffPolynomial::from_terms(p.terms.iter().map(|(c, e)| {
            let pairs: Vec<(VariableId, u32)> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| (self.vars[i].clone(), *k))
                .collect();
            (c.clone(), Monomial::from_pairs(pairs))
        }))
    }

    /// `p + c * x^shift * q`, merging the sorted term lists.
    fn add_scaled(&self, p: &GPoly, q: &GPoly, c: &Rat, shift: &Exp) -> GPoly {
        let mut out: Vec<(Rat, Exp)> = Vec::with_capacity(p.terms.len() + q.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < p.terms.len() || j < q.terms.len() {
            if i >= p.terms.len() {
                let shifted: Exp = q.terms[j].1.iter().zip(shift).map(|(a, b)| a + b).collect();
                out.push((c * &q.terms[j].0, shifted));
                j += 1;
                continue;
            }
            if j >= q.terms.len() {
                out.push(p.terms[i].clone());
                i += 1;
                continue;
            }
            let shifted: Exp = q.terms[j].1.iter().zip(shift).map(|(a, b)| a + b).collect();
            match self.cmp_exp(&p.terms[i].1, &shifted) {
                Ordering::Greater => {
                    out.push(p.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((c * &q.terms[j].0, shifted));
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = &p.terms[i].0 + &(c * &q.terms[j].0);
                    if !coeff.is_zero() {
                        out.push((coeff, p.terms[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GPoly { terms: out }
    }
}

impl GPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lt(&self) -> (&Rat, &Exp) {
        let (c, e) = &self.terms[0];
        (c, e)
    }

    /// Scales to integer primitive form with positive leading coefficient.
    fn normalize(&mut self) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.terms.is_empty() {
            return;
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (c, _) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut scale = Rat::new(den, num);
        if (self.terms[0].0.is_negative() && !scale.is_negative())
            || (!self.terms[0].0.is_negative() && scale.is_negative())
        {
            scale = -scale;
        }
        for (c, _) in self.terms.iter_mut() {
            *c = &*c * &scale;
        }
    }
}

fn divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Full reduction of `p` modulo `basis` (head and tail).
pub(crate) fn reduce_full(ring: &Ring, p: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut work = p.clone();
    let mut out_terms: Vec<(Rat, Exp)> = Vec::new();
    'term: while !work.is_zero() {
        let (c, e) = {
            let (c, e) = work.lt();
            (c.clone(), e.clone())
        };
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (gc, ge) = g.lt();
            if divides(ge, &e) {
                let shift: Exp = e.iter().zip(ge).map(|(a, b)| a - b).collect();
                let factor = -&c / gc;
                work = ring.add_scaled(&work, g, &factor, &shift);
                continue 'term;
            }
        }
        out_terms.push((c, e));
        work.terms.remove(0);
    }
    GPoly { terms: out_terms }
}

fn s_poly(ring: &Ring, f: &GPoly, g: &GPoly) -> GPoly {
    let (fc, fe) = f.lt();
    let (gc, ge) = g.lt();
    let lcm: Exp = fe.iter().zip(ge).map(|(a, b)| *a.max(b)).collect();
    let shift_f: Exp = lcm.iter().zip(fe).map(|(a, b)| a - b).collect();
    let shift_g: Exp = lcm.iter().zip(ge).map(|(a, b)| a - b).collect();
    let zero = GPoly { terms: vec![] };
    let one = Rat::one();
    let pf = ring.add_scaled(&zero, f, &(&one / fc), &shift_f);
    ring.add_scaled(&pf, g, &(-&one / gc), &shift_g)
}

/// Buchberger's algorithm with the coprimality criterion and normal pair
/// selection; returns the reduced basis, leading terms ascending.
pub(crate) fn buchberger(ring: &Ring, gens: Vec<GPoly>) -> Vec<GPoly> {
    let mut basis: Vec<GPoly> = Vec::new();
    for mut g in gens {
        if g.is_zero() {
            continue;
        }
        g.normalize();
        basis.push(g);
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let lcm_deg = |f: &GPoly, g: &GPoly| -> u32 {
        f.lt().1.iter().zip(g.lt().1).map(|(a, b)| *a.max(b)).sum()
    };
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.insert((lcm_deg(&basis[i], &basis[j]), j, i));
        }
    }
    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        let (fe, ge) = (basis[i].lt().1.clone(), basis[j].lt().1.clone());
        // Coprime leading terms: the S-polynomial reduces to zero.
        if fe.iter().zip(&ge).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = s_poly(ring, &basis[i], &basis[j]);
        let mut r = reduce_full(ring, &s, &basis);
        if r.is_zero() {
            continue;
        }
        r.normalize();
        let k = basis.len();
        for idx in 0..k {
            pairs.insert((lcm_deg(&basis[idx], &r), idx, k));
        }
        basis.push(r);
    }
    // Reduce the basis: drop head-redundant members, then tail-reduce.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && keep[i]
                && divides(basis[j].lt().1, basis[i].lt().1)
                && (basis[j].lt().1 != basis[i].lt().1 || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let kept: Vec<GPoly> =
        basis.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(g, _)| g).collect();
    let mut reduced = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<GPoly> =
            kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let mut r = reduce_full(ring, &kept[i], &others);
        if !r.is_zero() {
            r.normalize();
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| ring.cmp_exp(a.lt().1, b.lt().1));
    reduced
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
    fn z() -> VariableId {
        VariableId::Indep(2)
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
    fn ideal(gens: Vec<DiffPolynomial>) -> PolyIdeal {
        PolyIdeal::new(gens, vec![], Ranking::orderly())
    }

    fn p1() -> DiffPolynomial {
        &(&pv(u()) * &pv(ux())) - &(&(&pv(y()) * &pv(u())) + &pv(y()).pow(2))
    }
    fn p2() -> DiffPolynomial {
        &(&pv(y()) * &pv(uy())) - &pv(u())
    }
    fn p3() -> DiffPolynomial {
        &(&pv(uy()) * &pv(ux())) - &(&pv(u()) + &pv(y()))
    }

    #[test]
    fn groebner_of_linear_pair() {
        let i = ideal(vec![&pv(x()) + &pv(y()), &pv(x()) - &pv(y())]);
        let gb = i.groebner();
        assert_eq!(gb.len(), 2);
        assert!(i.contains(&pv(x())));
        assert!(i.contains(&pv(y())));
    }

    #[test]
    fn membership_of_monomial_ideal() {
        let i = ideal(vec![&pv(u()) * &pv(y()), &pv(u()) * &pv(z())]);
        assert!(!i.contains(&(&pv(y()) * &pv(z()))));
        assert!(i.contains(&(&pv(u()) * &pv(y()))));
    }

    #[test]
    fn example_linear_combination() {
        // p1 = y*p3 - u_x*p2 lies in <p2, p3>
        let i = ideal(vec![p2(), p3()]);
        assert!(i.contains(&p1()));
    }

    #[test]
    fn buchberger_criterion_on_basis() {
        let i = ideal(vec![p1(), p2()]);
        let gb = i.groebner().to_vec();
        let ring = Ring::single_block(i.ambient());
        let basis: Vec<GPoly> = gb.iter().map(|g| ring.to_dense(g)).collect();
        for a in &basis {
            for b in &basis {
                let s = s_poly(&ring, a, b);
                assert!(reduce_full(&ring, &s, &basis).is_zero());
            }
        }
    }

    #[test]
    fn saturation_of_monomials() {
        let i = ideal(vec![&pv(u()) * &pv(y()), &pv(u()) * &pv(z())]);
        let s = i.saturate(&pv(u()));
        assert!(s.contains(&pv(y())));
        assert!(s.contains(&pv(z())));
        assert!(!s.contains(&pv(u())));
    }

    #[test]
    fn saturation_by_unit_is_identity() {
        let i = ideal(vec![p1(), p2()]);
        let s = i.saturate(&DiffPolynomial::one());
        assert!(s.equal(&i));
    }

    #[test]
    fn example_saturation_yields_p2_p3() {
        let i = ideal(vec![p1(), p2()]);
        let s = i.saturate(&(&pv(y()) * &pv(u())));
        let expect = ideal(vec![p2(), p3()]);
        assert!(s.equal(&expect));
        let s2 = s.saturate(&(&pv(y()) * &pv(u())));
        assert!(s2.equal(&s));
        assert!(i.is_subset_of(&s));
    }

    #[test]
    fn quotient_of_power() {
        let i = ideal(vec![pv(x()).pow(2)]);
        let q = i.quotient(&pv(x()));
        assert!(q.contains(&pv(x())));
        assert!(q.equal(&ideal(vec![pv(x())])));
    }

    #[test]
    fn closure_quotient_is_stable() {
        let i = ideal(vec![p2(), p3()]);
        let q = i.quotient(&(&pv(u()) * &pv(y())));
        assert!(q.equal(&i));
    }

    #[test]
    fn krull_dimensions() {
        let amb = vec![x(), y(), u(), ux(), uy()];
        let i = PolyIdeal::new(vec![p2(), p3()], amb.clone(), Ranking::orderly());
        assert_eq!(i.krull_dimension().unwrap(), 3);
        let z0 = PolyIdeal::new(vec![], amb.clone(), Ranking::orderly());
        assert_eq!(z0.krull_dimension().unwrap(), 5);
        let up = VariableId::jet(0, vec![1]);
        let sphere = &(&(&pv(up).pow(2) + &pv(VariableId::jet(0, vec![0])).pow(2))
            + &pv(x()).pow(2))
            - &DiffPolynomial::one();
        let h = ideal(vec![sphere]);
        assert_eq!(h.krull_dimension().unwrap(), 2);
        let u1 = ideal(vec![DiffPolynomial::one()]);
        assert!(matches!(u1.krull_dimension(), Err(IdealError::UnitIdeal)));
    }
}
