//! Jet-space bookkeeping and the geometric linear systems: contact fields,
//! Vessiot and Jacobian rows over the auxiliary blocks, exact kernel
//! dimensions at rational points, and the principal symbol.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{ArithError, DiffPolynomial, MultiIndex, Rat, Ranking, VariableId};

/// Rational coordinate assignment to the independent variables and all jet
/// variables up to a given order.
pub type JetPoint = BTreeMap<VariableId, Rat>;

/// Builds the complete jet point of order `ell` from named coordinates;
/// callers are expected to have validated completeness.
pub fn jet_point_complete(pt: &JetPoint, n: usize, m: usize, ell: u32) -> bool {
    for i in 0..n {
        if !pt.contains_key(&VariableId::Indep(i)) {
            return false;
        }
    }
    for dep in 0..m {
        for mu in multi_indices_up_to(n, ell) {
            if !pt.contains_key(&VariableId::Jet { dep, idx: mu }) {
                return false;
            }
        }
    }
    true
}

/// All multi-indices with `|mu| <= ell`, ascending by the orderly ranking.
pub fn multi_indices_up_to(n: usize, ell: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for k in 0..=ell {
        out.extend(multi_indices_of_order(n, k));
    }
    out
}

/// All multi-indices with `|mu| = k`, deterministic order.
pub fn multi_indices_of_order(n: usize, k: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut mu = vec![0u32; n];
    fn rec(pos: usize, left: u32, mu: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos + 1 == mu.len() {
            mu[pos] = left;
            out.push(MultiIndex(mu.clone()));
            return;
        }
        for k in (0..=left).rev() {
            mu[pos] = k;
            rec(pos + 1, left - k, mu, out);
        }
        mu[pos] = 0;
    }
    if n == 0 {
        return out;
    }
    rec(0, k, &mut mu, &mut out);
    out
}

/// Dimension of the order-`ell` jet space: `n + m * C(n + ell, ell)`.
pub fn jet_dim(n: usize, m: usize, ell: u32) -> usize {
    n + m * binomial(n as u64 + ell as u64, ell as u64) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of jet coordinates of exact order `ell`: `m * C(ell + n - 1, ell)`.
pub fn top_order_count(n: usize, m: usize, ell: u32) -> usize {
    m * binomial(ell as u64 + n as u64 - 1, ell as u64) as usize
}

/// Contact vector field `C_i^{(ell)}` applied to a polynomial:
/// `d/dx_i + sum over |mu| < ell of u^alpha_(mu+1_i) d/du^alpha_mu`.
pub fn contact_transversal(p: &DiffPolynomial, i: usize, ell: u32) -> DiffPolynomial {
    let mut out = p.differentiate(&VariableId::Indep(i));
    for v in p.variables() {
        if let VariableId::Jet { dep, idx } = &v {
            if idx.order() < ell {
                let raised = VariableId::Jet { dep: *dep, idx: idx.raised(i) };
                out = &out + &(&p.differentiate(&v) * &DiffPolynomial::var(raised));
            }
        }
    }
    out
}

/// Homogeneous linear row over one or both auxiliary blocks, stored as the
/// defining polynomial of the extended ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub poly: DiffPolynomial,
}

impl LinearRow {
    /// Coefficient polynomial of the auxiliary variable.
    pub fn coefficient(&self, aux: &VariableId) -> DiffPolynomial {
        self.poly.coeff_of_power(aux, 1)
    }

    pub fn evaluate_coefficients(&self, cols: &[VariableId], pt: &JetPoint) -> Option<Vec<Rat>> {
        cols.iter().map(|v| self.coefficient(v).evaluate(pt).ok()).collect()
    }
}

/// Vessiot rows `V(p) = 0` for the given generators at order `ell`:
/// one row per generator of order exactly `ell`.  Generators of lower
/// order contribute rows that vanish modulo the ideal and are dropped by
/// default (`include_lower` re-adds them for debugging).
pub fn vessiot_rows(
    gens: &[DiffPolynomial],
    n: usize,
    ell: u32,
    include_lower: bool,
) -> Result<Vec<LinearRow>, ArithError> {
    let mut out = Vec::new();
    for p in gens {
        if p.order() > ell {
            return Err(ArithError::ConstantInJets);
        }
        if p.order() < ell && !include_lower {
            continue;
        }
        let mut row = DiffPolynomial::zero();
        for i in 0..n {
            let a = DiffPolynomial::var(VariableId::AuxA(i));
            row = &row + &(&a * &contact_transversal(p, i, ell));
        }
        for v in p.variables() {
            if let VariableId::Jet { dep, idx } = &v {
                if idx.order() == ell {
                    let b = DiffPolynomial::var(VariableId::AuxB { dep: *dep, idx: idx.clone() });
                    row = &row + &(&b * &p.differentiate(&v));
                }
            }
        }
        if !row.is_zero() {
            out.push(LinearRow { poly: row });
        }
    }
    Ok(out)
}

/// Jacobian rows `J(p) = 0`: one row per generator, with the `c`-block
/// carrying all partials with respect to jet variables up to order `ell`
/// and the `d`-block the partials with respect to the base variables.
pub fn jacobian_rows(gens: &[DiffPolynomial], _n: usize, _ell: u32) -> Vec<LinearRow> {
    let mut out = Vec::new();
    for p in gens {
        let mut row = DiffPolynomial::zero();
        for v in p.variables() {
            match &v {
                VariableId::Jet { dep, idx } => {
                    let c = DiffPolynomial::var(VariableId::AuxC { dep: *dep, idx: idx.clone() });
                    row = &row + &(&c * &p.differentiate(&v));
                }
                VariableId::Indep(i) => {
                    let d = DiffPolynomial::var(VariableId::AuxD(*i));
                    row = &row + &(&d * &p.differentiate(&v));
                }
                _ => {}
            }
        }
        out.push(LinearRow { poly: row });
    }
    out
}

/// Exact kernel dimensions of the evaluated linear system at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelDims {
    /// Rank of the combined (a, b) block and the Vessiot space dimension.
    pub ab_rank: usize,
    pub vessiot_dim: usize,
    /// Rank of the b block with a = 0 and the symbol space dimension.
    pub b_rank: usize,
    pub symbol_dim: usize,
    /// Rank of the (c, d) block and the tangent space dimension.
    pub cd_rank: usize,
    pub tangent_dim: usize,
}

/// Column lists of the auxiliary blocks, descending by the ranking so the
/// echelon shape matches the Thomas ordering.
pub fn aux_columns(
    n: usize,
    m: usize,
    ell: u32,
    r: &Ranking,
) -> (Vec<VariableId>, Vec<VariableId>, Vec<VariableId>, Vec<VariableId>) {
    let mut a: Vec<VariableId> = (0..n).map(VariableId::AuxA).collect();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for dep in 0..m {
        for mu in multi_indices_of_order(n, ell) {
            b.push(VariableId::AuxB { dep, idx: mu });
        }
        for mu in multi_indices_up_to(n, ell) {
            c.push(VariableId::AuxC { dep, idx: mu });
        }
    }
    let mut d: Vec<VariableId> = (0..n).map(VariableId::AuxD).collect();
    a.sort_by(|v, w| r.compare(w, v));
    b.sort_by(|v, w| r.compare(w, v));
    c.sort_by(|v, w| r.compare(w, v));
    d.sort_by(|v, w| r.compare(w, v));
    (a, b, c, d)
}

/// Exact rank of a rational matrix by Gaussian elimination.
pub fn rank_rational(mut rows: Vec<Vec<Rat>>) -> usize {
    let mut rank = 0;
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows.len()).find(|&i| !rows[i][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].clone();
        for i in 0..rows.len() {
            if i != row && !rows[i][col].is_zero() {
                let factor = &rows[i][col] / &inv;
                for j in col..cols {
                    let delta = &factor * &rows[row][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rank
}

/// Evaluates the Vessiot and Jacobian rows at a rational point and returns
/// the exact block ranks and kernel dimensions.
pub fn evaluate_kernel(
    vessiot: &[LinearRow],
    jacobian: &[LinearRow],
    pt: &JetPoint,
    n: usize,
    m: usize,
    ell: u32,
    r: &Ranking,
) -> Result<KernelDims, ArithError> {
    let (a_cols, b_cols, c_cols, d_cols) = aux_columns(n, m, ell, r);
    let mut ab_cols = a_cols.clone();
    ab_cols.extend(b_cols.iter().cloned());
    let mut cd_cols = c_cols;
    cd_cols.extend(d_cols);

    let eval_block = |rows: &[LinearRow], cols: &[VariableId]| -> Result<Vec<Vec<Rat>>, ArithError> {
        rows.iter()
            .map(|row| cols.iter().map(|v| row.coefficient(v).evaluate(pt)).collect())
            .collect()
    };

    let ab = eval_block(vessiot, &ab_cols)?;
    let b = eval_block(vessiot, &b_cols)?;
    let cd = eval_block(jacobian, &cd_cols)?;
    let ab_rank = rank_rational(ab);
    let b_rank = rank_rational(b);
    let cd_rank = rank_rational(cd);
    let nb = b_cols.len();
    Ok(KernelDims {
        ab_rank,
        vessiot_dim: n + nb - ab_rank,
        b_rank,
        symbol_dim: nb - b_rank,
        cd_rank,
        tangent_dim: cd_cols_len(n, m, ell) - cd_rank,
    })
}

fn cd_cols_len(n: usize, m: usize, ell: u32) -> usize {
    m * binomial(n as u64 + ell as u64, ell as u64) as usize + n
}

/// Exact kernel basis of the evaluated rows over the given columns:
/// one basis vector per free column, deterministic.
pub fn kernel_basis(
    rows: &[LinearRow],
    cols: &[VariableId],
    pt: &JetPoint,
) -> Result<Vec<Vec<Rat>>, ArithError> {
    let mut mat: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| cols.iter().map(|v| row.coefficient(v).evaluate(pt)).collect())
        .collect::<Result<_, _>>()?;
    let ncols = cols.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let pivot = (row..mat.len()).find(|&i| !mat[i][col].is_zero());
        let Some(p) = pivot else { continue };
        mat.swap(row, p);
        let inv = mat[row][col].clone();
        for j in 0..ncols {
            mat[row][j] = &mat[row][j] / &inv;
        }
        for i in 0..mat.len() {
            if i != row && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for j in 0..ncols {
                    let delta = &factor * &mat[row][j];
                    mat[i][j] = &mat[i][j] - &delta;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == mat.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::from_integer(1.into());
        for col in 0..ncols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = -mat[r][free].clone();
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Principal symbol of `p` at a point: the vector with components
/// `sum over |mu| = k of (dp/du^alpha_mu)(pt) xi^mu` where `k` is the top
/// jet order of `p`.  Components are lists of (multi-index, coefficient).
pub fn principal_symbol(
    p: &DiffPolynomial,
    pt: &JetPoint,
    m: usize,
) -> Result<Vec<Vec<(MultiIndex, Rat)>>, ArithError> {
    let jet_vars: Vec<VariableId> =
        p.variables().into_iter().filter(|v| v.is_jet()).collect();
    if jet_vars.is_empty() {
        return Err(ArithError::ConstantInJets);
    }
    let k = jet_vars.iter().map(|v| v.order()).max().unwrap();
    let mut out = vec![Vec::new(); m];
    for v in jet_vars {
        let VariableId::Jet { dep, idx } = &v else { unreachable!() };
        if idx.order() == k {
            let coeff = p.differentiate(&v).evaluate(pt)?;
            if !coeff.is_zero() {
                out[*dep].push((idx.clone(), coeff));
            }
        }
    }
    for comp in out.iter_mut() {
        comp.sort_by(|a, b| a.0.cmp(&b.0));
    }
    Ok(out)
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
    fn u2() -> VariableId {
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
    fn q(k: i64) -> Rat {
        Rat::from_integer(k.into())
    }

    fn p1() -> DiffPolynomial {
        &(&pv(u2()) * &pv(ux())) - &(&(&pv(y()) * &pv(u2())) + &pv(y()).pow(2))
    }
    fn p2() -> DiffPolynomial {
        &(&pv(y()) * &pv(uy())) - &pv(u2())
    }
    fn p3() -> DiffPolynomial {
        &(&pv(uy()) * &pv(ux())) - &(&pv(u2()) + &pv(y()))
    }

    #[test]
    fn jet_dims() {
        assert_eq!(jet_dim(2, 1, 1), 5);
        assert_eq!(jet_dim(1, 1, 1), 3);
        assert_eq!(jet_dim(2, 1, 2), 8);
    }

    #[test]
    fn vessiot_row_of_p1_matches_printed_matrix() {
        // row (b10, b01, a1, a2) = (u, 0, u_x(u_x - y), -2y - u + u_y(u_x - y))
        let rows = vessiot_rows(&[p1()], 2, 1, false).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        let b10 = VariableId::AuxB { dep: 0, idx: MultiIndex(vec![1, 0]) };
        let b01 = VariableId::AuxB { dep: 0, idx: MultiIndex(vec![0, 1]) };
        assert_eq!(row.coefficient(&b10), pv(u2()));
        assert!(row.coefficient(&b01).is_zero());
        let a1 = row.coefficient(&VariableId::AuxA(0));
        let expect_a1 = &pv(ux()) * &(&pv(ux()) - &pv(y()));
        assert_eq!(a1, expect_a1);
        let a2 = row.coefficient(&VariableId::AuxA(1));
        let expect_a2 = &(&pv(uy()) * &(&pv(ux()) - &pv(y())))
            - &(&pv(u2()) + &pv(y()).scale(&q(2)));
        assert_eq!(a2, expect_a2);
    }

    #[test]
    fn gather_vessiot_row() {
        // single row (3u'^2 + u) b + (u'^2 - 1) a
        let up = VariableId::jet(0, vec![1]);
        let u = VariableId::jet(0, vec![0]);
        let xx = VariableId::Indep(0);
        let p = &(&pv(up.clone()).pow(3) + &(&pv(u.clone()) * &pv(up.clone()))) - &pv(xx);
        let rows = vessiot_rows(&[p], 1, 1, false).unwrap();
        assert_eq!(rows.len(), 1);
        let b = VariableId::AuxB { dep: 0, idx: MultiIndex(vec![1]) };
        let a = VariableId::AuxA(0);
        let sep = &pv(up.clone()).pow(2).scale(&q(3)) + &pv(u);
        assert_eq!(rows[0].coefficient(&b), sep);
        let want_a = &pv(up).pow(2) - &DiffPolynomial::one();
        assert_eq!(rows[0].coefficient(&a), want_a);
    }

    #[test]
    fn lower_order_generators_are_dropped() {
        let rows = vessiot_rows(&[pv(u2())], 2, 1, false).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn jacobian_row_of_p2() {
        // row y c01 - c00 + u_y d2
        let rows = jacobian_rows(&[p2()], 2, 1);
        assert_eq!(rows.len(), 1);
        let c00 = VariableId::AuxC { dep: 0, idx: MultiIndex(vec![0, 0]) };
        let c01 = VariableId::AuxC { dep: 0, idx: MultiIndex(vec![0, 1]) };
        let d2 = VariableId::AuxD(1);
        assert_eq!(rows[0].coefficient(&c01), pv(y()));
        assert_eq!(rows[0].coefficient(&c00), DiffPolynomial::from_int(-1));
        assert_eq!(rows[0].coefficient(&d2), pv(uy()));
    }

    #[test]
    fn example_point_kernel_dimensions() {
        // point (x=0, y=1, u=1, u_x=2, u_y=1): Vessiot dim 2, symbol dim 0
        let gens = vec![p1(), p2(), p3()];
        let r = Ranking::orderly();
        let vess = vessiot_rows(&gens, 2, 1, false).unwrap();
        let jac = jacobian_rows(&gens, 2, 1);
        let mut pt = JetPoint::new();
        pt.insert(x(), q(0));
        pt.insert(y(), q(1));
        pt.insert(u2(), q(1));
        pt.insert(ux(), q(2));
        pt.insert(uy(), q(1));
        let dims = evaluate_kernel(&vess, &jac, &pt, 2, 1, 1, &r).unwrap();
        assert_eq!(dims.vessiot_dim, 2);
        assert_eq!(dims.symbol_dim, 0);
        // smooth point of a three-dimensional variety in J_1: rank 2
        assert_eq!(dims.cd_rank, 2);
    }

    #[test]
    fn gather_point_kernels() {
        let up = VariableId::jet(0, vec![1]);
        let u = VariableId::jet(0, vec![0]);
        let xx = VariableId::Indep(0);
        let p = &(&pv(up.clone()).pow(3) + &(&pv(u.clone()) * &pv(up.clone()))) - &pv(xx.clone());
        let r = Ranking::orderly();
        let vess = vessiot_rows(&[p.clone()], 1, 1, false).unwrap();
        let jac = jacobian_rows(&[p.clone()], 1, 1);
        // (x=-2, u=-3, u'=1): both Vessiot coefficients vanish: dim 2
        let mut pt = JetPoint::new();
        pt.insert(xx.clone(), q(-2));
        pt.insert(u.clone(), q(-3));
        pt.insert(up.clone(), q(1));
        assert!(p.evaluate(&pt).unwrap().is_zero());
        let dims = evaluate_kernel(&vess, &jac, &pt, 1, 1, 1, &r).unwrap();
        assert_eq!(dims.vessiot_dim, 2);
        // (x=-16, u=-12, u'=2): Vessiot dim 1, symbol dim 1
        let mut pt2 = JetPoint::new();
        pt2.insert(xx, q(-16));
        pt2.insert(u, q(-12));
        pt2.insert(up, q(2));
        assert!(p.evaluate(&pt2).unwrap().is_zero());
        let dims2 = evaluate_kernel(&vess, &jac, &pt2, 1, 1, 1, &r).unwrap();
        assert_eq!(dims2.vessiot_dim, 1);
        assert_eq!(dims2.symbol_dim, 1);
    }

    #[test]
    fn principal_symbol_examples() {
        // u_xx + u_yy -> xi1^2 + xi2^2
        let uxx = VariableId::jet(0, vec![2, 0]);
        let uyy = VariableId::jet(0, vec![0, 2]);
        let p = &pv(uxx) + &pv(uyy);
        let pt = JetPoint::new();
        let sym = principal_symbol(&p, &pt, 1).unwrap();
        assert_eq!(
            sym[0],
            vec![
                (MultiIndex(vec![0, 2]), q(1)),
                (MultiIndex(vec![2, 0]), q(1)),
            ]
        );
        // p3 at the example point -> xi1 + 2 xi2
        let mut pt = JetPoint::new();
        pt.insert(x(), q(0));
        pt.insert(y(), q(1));
        pt.insert(u2(), q(1));
        pt.insert(ux(), q(2));
        pt.insert(uy(), q(1));
        let sym3 = principal_symbol(&p3(), &pt, 1).unwrap();
        assert_eq!(
            sym3[0],
            vec![
                (MultiIndex(vec![0, 1]), q(2)),
                (MultiIndex(vec![1, 0]), q(1)),
            ]
        );
        // order-zero polynomial: the basis vector itself
        let symu = principal_symbol(&pv(u2()), &pt, 1).unwrap();
        assert_eq!(symu[0], vec![(MultiIndex(vec![0, 0]), q(1))]);
        // constant in jets errors
        assert!(principal_symbol(&pv(x()), &pt, 1).is_err());
    }
}
