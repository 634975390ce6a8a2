use std::cmp::Ordering;

use super::variable::{MultiIndex, VariableId};

/// How jet variables are compared among themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankingStyle {
    /// Compare total derivative order first; ties broken by the reverse
    /// lexicographic order on the multi-index, then by the dependent
    /// variable (earlier-declared higher).  Restricted to the jet
    /// variables this is an orderly Riquier ranking.
    Orderly,
    /// Compare multi-indices lexicographically reading the last derivation
    /// first; ties broken by the dependent variable.  An elimination-style
    /// Riquier ranking.
    LexByDerivative,
    /// Explicit ascending variable list; variables not listed fall back to
    /// the orderly comparison and sort below all listed ones.
    Custom(Vec<VariableId>),
}

/// Total order on all variables of the extended ring.  Auxiliary blocks sit
/// above the jet block in the order d > c > b > a > u > x; the variables
/// `b^alpha_mu` and `c^alpha_mu` are ordered among themselves exactly like
/// the jet variables `u^alpha_mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub style: RankingStyle,
}

impl Default for Ranking {
    fn default() -> Self {
        Ranking { style: RankingStyle::Orderly }
    }
}

fn block(v: &VariableId) -> u8 {
    match v {
        VariableId::Indep(_) => 0,
        VariableId::Jet { .. } => 1,
        VariableId::AuxA(_) => 2,
        VariableId::AuxB { .. } => 3,
        VariableId::AuxC { .. } => 4,
        VariableId::AuxD(_) => 5,
        VariableId::Slack(_) => 6,
    }
}

/// Reverse lexicographic comparison: at the largest index where the
/// multi-indices differ, the smaller entry wins.
fn cmp_revlex(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    for i in (0..a.len().max(b.len())).rev() {
        let ai = a.0.get(i).copied().unwrap_or(0);
        let bi = b.0.get(i).copied().unwrap_or(0);
        if ai != bi {
            return if ai < bi { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

fn cmp_lex_by_derivative(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    for i in (0..a.len().max(b.len())).rev() {
        let ai = a.0.get(i).copied().unwrap_or(0);
        let bi = b.0.get(i).copied().unwrap_or(0);
        if ai != bi {
            return ai.cmp(&bi);
        }
    }
    Ordering::Equal
}

impl Ranking {
    pub fn orderly() -> Self {
        Ranking::default()
    }

    /// Compares two jet coordinates `(dep, idx)`.
    fn cmp_jet(&self, da: usize, ia: &MultiIndex, db: usize, ib: &MultiIndex) -> Ordering {
        match &self.style {
            RankingStyle::Orderly => ia
                .order()
                .cmp(&ib.order())
                .then_with(|| cmp_revlex(ia, ib))
                // Earlier-declared dependent variables rank higher.
                .then_with(|| db.cmp(&da)),
            RankingStyle::LexByDerivative => {
                cmp_lex_by_derivative(ia, ib).then_with(|| db.cmp(&da))
            }
            RankingStyle::Custom(list) => {
                let va = VariableId::Jet { dep: da, idx: ia.clone() };
                let vb = VariableId::Jet { dep: db, idx: ib.clone() };
                match (position(list, &va), position(list, &vb)) {
                    (Some(pa), Some(pb)) => pa.cmp(&pb),
                    (Some(_), None) => Ordering::Greater,
                    (None, Some(_)) => Ordering::Less,
                    (None, None) => Ranking::orderly().cmp_jet(da, ia, db, ib),
                }
            }
        }
    }

    /// Strict total order on variables.
    pub fn compare(&self, v: &VariableId, w: &VariableId) -> Ordering {
        let (bv, bw) = (block(v), block(w));
        if bv != bw {
            return bv.cmp(&bw);
        }
        match (v, w) {
            (VariableId::Indep(i), VariableId::Indep(j)) => i.cmp(j),
            (VariableId::AuxA(i), VariableId::AuxA(j)) => i.cmp(j),
            (VariableId::AuxD(i), VariableId::AuxD(j)) => i.cmp(j),
            (VariableId::Slack(i), VariableId::Slack(j)) => i.cmp(j),
            (VariableId::Jet { dep: da, idx: ia }, VariableId::Jet { dep: db, idx: ib })
            | (VariableId::AuxB { dep: da, idx: ia }, VariableId::AuxB { dep: db, idx: ib })
            | (VariableId::AuxC { dep: da, idx: ia }, VariableId::AuxC { dep: db, idx: ib }) => {
                self.cmp_jet(*da, ia, *db, ib)
            }
            _ => unreachable!("same block"),
        }
    }

    pub fn max<'a>(&self, vars: impl Iterator<Item = &'a VariableId>) -> Option<VariableId> {
        let mut best: Option<&VariableId> = None;
        for v in vars {
            match best {
                None => best = Some(v),
                Some(b) if self.compare(v, b) == Ordering::Greater => best = Some(v),
                _ => {}
            }
        }
        best.cloned()
    }
}

fn position(list: &[VariableId], v: &VariableId) -> Option<usize> {
    list.iter().position(|w| w == v)
}

/// Spec-level comparison entry point; see also `diffring::rank_compare`.
pub fn rank_compare(v: &VariableId, w: &VariableId, r: &Ranking) -> Ordering {
    r.compare(v, w)
}
