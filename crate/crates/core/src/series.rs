//! Formal power-series solutions of simple differential systems at an
//! admissible expansion point.  Coefficients up to the system order come
//! from the seed (validated against all equations, inequations, initials
//! and separants); higher coefficients of principal derivatives are solved
//! from the quasi-linear derived equations, everything else stays free.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{DiffPolynomial, MultiIndex, Rat, VariableId};
use crate::diffring::total_derivative_multi;
use crate::jet::multi_indices_of_order;
use crate::thomas_diff::{DiffThomasError, SimpleDifferentialSystem};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("seed violates the constraint {0}")]
    SeedViolation(String),
    #[error("coefficient of {variable} requires an irrational root of {polynomial}")]
    IrrationalCoefficient { variable: String, polynomial: String },
    #[error(transparent)]
    DiffThomas(#[from] DiffThomasError),
}

/// Truncated formal power series solution: exact derivative values
/// `c^alpha_mu` at the expansion point, up to order `truncation`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    pub coefficients: Vec<BTreeMap<MultiIndex, Rat>>,
    pub expansion_point: Vec<Rat>,
    pub truncation: u32,
    pub n: usize,
    pub m: usize,
}

impl TruncatedSeries {
    /// The Taylor polynomial of dependent variable `dep` in the shifted
    /// base variables, with coefficients `c_mu / mu!`.
    pub fn taylor_polynomial(&self, dep: usize) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (mu, c) in &self.coefficients[dep] {
            let mut term = DiffPolynomial::constant(c / &Rat::from_integer(factorial(mu)));
            for (i, e) in mu.0.iter().enumerate() {
                let shifted = &DiffPolynomial::var(VariableId::Indep(i))
                    - &DiffPolynomial::constant(self.expansion_point[i].clone());
                term = &term * &shifted.pow(*e);
            }
            out = &out + &term;
        }
        out
    }

    /// Substitutes the truncated series into a differential polynomial and
    /// drops all terms of total degree above `keep`; the result is a
    /// polynomial in the base variables.
    pub fn substitute(&self, p: &DiffPolynomial, keep: u32) -> DiffPolynomial {
        let taylor: Vec<DiffPolynomial> =
            (0..self.m).map(|dep| self.taylor_polynomial(dep)).collect();
        let mut out = p.clone();
        for v in p.variables() {
            if let VariableId::Jet { dep, idx } = &v {
                let mut derivative = taylor[*dep].clone();
                for (i, e) in idx.0.iter().enumerate() {
                    for _ in 0..*e {
                        derivative = derivative.differentiate(&VariableId::Indep(i));
                    }
                }
                out = out.substitute_poly(&v, &derivative);
            }
        }
        truncate_total_degree_shifted(&out, &self.expansion_point, keep)
    }

    /// True when the residual of `p` vanishes through total order `keep`
    /// in the shifted variables.
    pub fn residual_vanishes(&self, p: &DiffPolynomial, keep: u32) -> bool {
        self.substitute(p, keep).is_zero()
    }
}

fn factorial(mu: &MultiIndex) -> BigInt {
    let mut acc = BigInt::from(1);
    for e in &mu.0 {
        for k in 2..=*e {
            acc *= k;
        }
    }
    acc
}

/// Expands around the expansion point and drops every term of total degree
/// above `keep` in the shifted variables `x - x0`.
fn truncate_total_degree_shifted(
    p: &DiffPolynomial,
    x0: &[Rat],
    keep: u32,
) -> DiffPolynomial {
    // Shift x -> x + x0, truncate by plain total degree, shift back.
    let mut shifted = p.clone();
    for (i, c) in x0.iter().enumerate() {
        let v = VariableId::Indep(i);
        let replacement = &DiffPolynomial::var(v.clone()) + &DiffPolynomial::constant(c.clone());
        shifted = shifted.substitute_poly(&v, &replacement);
    }
    let truncated = DiffPolynomial::from_terms(
        shifted
            .terms()
            .filter(|(m, _)| m.total_degree() <= keep)
            .map(|(m, c)| (c.clone(), m.clone())),
    );
    let mut back = truncated;
    for (i, c) in x0.iter().enumerate() {
        let v = VariableId::Indep(i);
        let replacement = &DiffPolynomial::var(v.clone()) - &DiffPolynomial::constant(c.clone());
        back = back.substitute_poly(&v, &replacement);
    }
    back
}

fn rational_roots_sorted(p: &DiffPolynomial, v: &VariableId) -> Vec<Rat> {
    // Reuse the sampler's rational-root search through a tiny facade.
    let mut roots = crate::thomas_alg::rational_roots_of(p, v);
    roots.sort();
    roots
}

/// Constructs a truncated power-series solution of the simple differential
/// system `s` at `x0`.  The seed assigns jet coordinates up to the system
/// order (unassigned ones default to zero); it must satisfy every
/// equation, inequation, initial and separant.  Principal coefficients
/// above the system order are solved from the quasi-linear derived
/// equations; parametric ones are taken from the seed or default to zero.
pub fn series_solve(
    s: &SimpleDifferentialSystem,
    x0: &[Rat],
    seed: &BTreeMap<VariableId, Rat>,
    truncation: u32,
) -> Result<TruncatedSeries, SeriesError> {
    assert_eq!(x0.len(), s.n, "expansion point dimension");
    let h = s.max_order();
    let ranking = &s.ranking;
    let basis = s.prolongation_basis(h)?;
    let mut pt: BTreeMap<VariableId, Rat> = BTreeMap::new();
    for (i, c) in x0.iter().enumerate() {
        pt.insert(VariableId::Indep(i), c.clone());
    }

    // Jet coordinates up to the system order, ascending by the ranking.
    let mut low_jets: Vec<VariableId> = Vec::new();
    for k in 0..=h {
        for dep in 0..s.m {
            for mu in multi_indices_of_order(s.n, k) {
                low_jets.push(VariableId::Jet { dep, idx: mu });
            }
        }
    }
    low_jets.sort_by(|a, b| ranking.compare(a, b));
    for w in &low_jets {
        let constraining = basis.iter().find(|p| p.leader(ranking).as_ref() == Some(w));
        match constraining {
            Some(p) => {
                let spec = p.substitute(&pt);
                if spec.degree_in(w) == 0 {
                    return Err(SeriesError::SeedViolation(format!(
                        "degenerate equation for {w:?} at the expansion point"
                    )));
                }
                let roots = rational_roots_sorted(&spec, w);
                let value = match seed.get(w) {
                    Some(v) => {
                        if !roots.contains(v) {
                            // The seed may still be an exact irrational-free
                            // root missed by the divisor scan; verify directly.
                            let mut trial = pt.clone();
                            trial.insert(w.clone(), v.clone());
                            if !p.evaluate(&trial).map(|r| r.is_zero()).unwrap_or(false) {
                                return Err(SeriesError::SeedViolation(format!(
                                    "equation with leader {w:?}"
                                )));
                            }
                        }
                        v.clone()
                    }
                    None => match roots.first() {
                        Some(r) => r.clone(),
                        None => {
                            return Err(SeriesError::IrrationalCoefficient {
                                variable: format!("{w:?}"),
                                polynomial: format!("{spec}"),
                            })
                        }
                    },
                };
                pt.insert(w.clone(), value);
            }
            None => {
                let value = seed.get(w).cloned().unwrap_or_else(Rat::zero);
                pt.insert(w.clone(), value);
            }
        }
    }

    // Validate equations, inequations, initials and separants at the seed.
    for p in &basis {
        if !p.evaluate(&pt).map(|r| r.is_zero()).unwrap_or(false) {
            return Err(SeriesError::SeedViolation(format!("equation {p}")));
        }
    }
    for q in &s.inequations {
        if q.evaluate(&pt).map(|r| r.is_zero()).unwrap_or(true) {
            return Err(SeriesError::SeedViolation(format!("inequation {q}")));
        }
    }
    for p in &s.equations {
        let v = p.leader(ranking).expect("nonconstant equation");
        for witness in [p.initial(&v), p.differentiate(&v)] {
            if witness.evaluate(&pt).map(|r| r.is_zero()).unwrap_or(true) {
                return Err(SeriesError::SeedViolation(format!(
                    "initial or separant of the equation with leader {v:?}"
                )));
            }
        }
    }

    // Higher-order coefficients.
    let leaders: Vec<(VariableId, usize)> = s
        .equations
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.leader(ranking).map(|v| (v, i)))
        .collect();
    for k in (h + 1)..=truncation {
        let mut level: Vec<VariableId> = Vec::new();
        for dep in 0..s.m {
            for mu in multi_indices_of_order(s.n, k) {
                level.push(VariableId::Jet { dep, idx: mu });
            }
        }
        level.sort_by(|a, b| ranking.compare(a, b));
        for w in level {
            let VariableId::Jet { dep, idx } = &w else { unreachable!() };
            // Principal: w is a derivative of some equation leader.
            let mut derived: Option<DiffPolynomial> = None;
            for (ld, i) in &leaders {
                if let VariableId::Jet { dep: ld_dep, idx: ld_idx } = ld {
                    if ld_dep == dep {
                        if let Some(diff) = idx.checked_sub(ld_idx) {
                            if diff.order() > 0 {
                                derived =
                                    Some(total_derivative_multi(&s.equations[*i], &diff.0));
                                break;
                            }
                        }
                    }
                }
            }
            match derived {
                Some(dp) => {
                    // Quasi-linear in w: a*w + b = 0 with a the separant.
                    let a = dp.coeff_of_power(&w, 1).evaluate(&pt).map_err(|_| {
                        SeriesError::SeedViolation(format!("incomplete point for {w:?}"))
                    })?;
                    let b = dp.coeff_of_power(&w, 0).evaluate(&pt).map_err(|_| {
                        SeriesError::SeedViolation(format!("incomplete point for {w:?}"))
                    })?;
                    debug_assert!(!a.is_zero(), "separant vanished unexpectedly");
                    pt.insert(w.clone(), -b / a);
                }
                None => {
                    let value = seed.get(&w).cloned().unwrap_or_else(Rat::zero);
                    pt.insert(w.clone(), value);
                }
            }
        }
    }

    let mut coefficients = vec![BTreeMap::new(); s.m];
    for (v, value) in &pt {
        if let VariableId::Jet { dep, idx } = v {
            coefficients[*dep].insert(idx.clone(), value.clone());
        }
    }
    Ok(TruncatedSeries {
        coefficients,
        expansion_point: x0.to_vec(),
        truncation,
        n: s.n,
        m: s.m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Ranking;
    use crate::thomas_diff::{diff_thomas_decompose, DifferentialSystem};

    fn pv(v: VariableId) -> DiffPolynomial {
        DiffPolynomial::var(v)
    }
    fn q(k: i64) -> Rat {
        Rat::from_integer(k.into())
    }

    #[test]
    fn exponential_series() {
        // u' = u at x0 = 0 with u(0) = 1: all derivative values are 1
        let up = VariableId::jet(0, vec![1]);
        let u = VariableId::jet(0, vec![0]);
        let sys = DifferentialSystem::new(
            vec![&pv(up) - &pv(u.clone())],
            vec![],
            Ranking::orderly(),
            1,
            1,
        );
        let simple = diff_thomas_decompose(&sys).unwrap().remove(0);
        let mut seed = BTreeMap::new();
        seed.insert(u, q(1));
        let series = series_solve(&simple, &[q(0)], &seed, 4).unwrap();
        for k in 0..=4u32 {
            assert_eq!(series.coefficients[0][&MultiIndex(vec![k])], q(1));
        }
        // residual vanishes through the guaranteed order
        let p = &pv(VariableId::jet(0, vec![1])) - &pv(VariableId::jet(0, vec![0]));
        assert!(series.residual_vanishes(&p, 3));
    }

    #[test]
    fn example_pde_series() {
        // the PDE pair at x0 = (1,1) with u(x0) = 1: p2 forces u_y = 1,
        // p3 (via p1) forces u_x = 2
        let y = VariableId::Indep(1);
        let u = VariableId::jet(0, vec![0, 0]);
        let ux = VariableId::jet(0, vec![1, 0]);
        let uy = VariableId::jet(0, vec![0, 1]);
        let p1 = &(&pv(u.clone()) * &pv(ux.clone()))
            - &(&(&pv(y.clone()) * &pv(u.clone())) + &pv(y.clone()).pow(2));
        let p2 = &(&pv(y.clone()) * &pv(uy.clone())) - &pv(u.clone());
        let sys =
            DifferentialSystem::new(vec![p1.clone(), p2.clone()], vec![], Ranking::orderly(), 2, 1);
        let simple = diff_thomas_decompose(&sys).unwrap().remove(0);
        let mut seed = BTreeMap::new();
        seed.insert(u.clone(), q(1));
        let series = series_solve(&simple, &[q(1), q(1)], &seed, 5).unwrap();
        assert_eq!(series.coefficients[0][&MultiIndex(vec![0, 0])], q(1));
        assert_eq!(series.coefficients[0][&MultiIndex(vec![0, 1])], q(1));
        assert_eq!(series.coefficients[0][&MultiIndex(vec![1, 0])], q(2));
        // residuals of both input equations vanish through K - 1
        assert!(series.residual_vanishes(&p1, 4));
        assert!(series.residual_vanishes(&p2, 4));
    }

    #[test]
    fn seed_violating_inequation_errors() {
        let y = VariableId::Indep(1);
        let u = VariableId::jet(0, vec![0, 0]);
        let ux = VariableId::jet(0, vec![1, 0]);
        let uy = VariableId::jet(0, vec![0, 1]);
        let p1 = &(&pv(u.clone()) * &pv(ux))
            - &(&(&pv(y.clone()) * &pv(u.clone())) + &pv(y.clone()).pow(2));
        let p2 = &(&pv(y) * &pv(uy)) - &pv(u.clone());
        let sys = DifferentialSystem::new(vec![p1, p2], vec![], Ranking::orderly(), 2, 1);
        let simple = diff_thomas_decompose(&sys).unwrap().remove(0);
        let mut seed = BTreeMap::new();
        seed.insert(u, q(0));
        let err = series_solve(&simple, &[q(1), q(1)], &seed, 3);
        assert!(matches!(err, Err(SeriesError::SeedViolation(_))), "{err:?}");
    }
}
