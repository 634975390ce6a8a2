use std::fmt;

/// Dense multi-index with one entry per independent variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Raises the i-th entry by one.
    pub fn raised(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// Componentwise difference `self - other`, if non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.0.len() != other.0.len() {
            return None;
        }
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(v))
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Support: indices with a positive entry.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

/// Identifier of a variable of the extended polynomial ring: independent
/// variables, jet variables and the four auxiliary blocks used by the
/// regularity decomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    /// Independent variable `x^i`.
    Indep(usize),
    /// Jet variable `u^alpha_mu`.
    Jet { dep: usize, idx: MultiIndex },
    /// Transversal Vessiot coefficient `a^i`.
    AuxA(usize),
    /// Vertical Vessiot coefficient `b^alpha_mu`, `|mu|` = analysed order.
    AuxB { dep: usize, idx: MultiIndex },
    /// Jacobian coefficient `c^alpha_mu`, `|mu|` up to the analysed order.
    AuxC { dep: usize, idx: MultiIndex },
    /// Jacobian coefficient `d^i` paired with `x^i`.
    AuxD(usize),
    /// Internal elimination variable used by saturation and intersection;
    /// ranked above every other block and never part of a system.
    Slack(usize),
}

impl VariableId {
    pub fn jet(dep: usize, idx: Vec<u32>) -> Self {
        VariableId::Jet { dep, idx: MultiIndex(idx) }
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, VariableId::Jet { .. })
    }

    pub fn is_indep(&self) -> bool {
        matches!(self, VariableId::Indep(_))
    }

    pub fn is_aux(&self) -> bool {
        matches!(
            self,
            VariableId::AuxA(_) | VariableId::AuxB { .. } | VariableId::AuxC { .. } | VariableId::AuxD(_)
        )
    }

    /// Jet order of the variable; independent and auxiliary variables count as order 0.
    pub fn order(&self) -> u32 {
        match self {
            VariableId::Jet { idx, .. } => idx.order(),
            _ => 0,
        }
    }
}

/// Names and counts of the independent and dependent variables of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub indep: Vec<String>,
    pub dep: Vec<String>,
}

impl Context {
    pub fn new(indep: Vec<String>, dep: Vec<String>) -> Self {
        Context { indep, dep }
    }

    pub fn n(&self) -> usize {
        self.indep.len()
    }

    pub fn m(&self) -> usize {
        self.dep.len()
    }

    fn jet_name(&self, dep: usize, idx: &MultiIndex) -> String {
        let base = &self.dep[dep];
        if idx.order() == 0 {
            return base.clone();
        }
        // One independent variable: prime notation up to order three.
        if self.n() == 1 && idx.0[0] <= 3 {
            return format!("{}{}", base, "'".repeat(idx.0[0] as usize));
        }
        let mut s = format!("{base}_");
        for (i, e) in idx.0.iter().enumerate() {
            for _ in 0..*e {
                s.push_str(&self.indep[i]);
            }
        }
        s
    }

    pub fn var_name(&self, v: &VariableId) -> String {
        match v {
            VariableId::Indep(i) => self.indep[*i].clone(),
            VariableId::Jet { dep, idx } => self.jet_name(*dep, idx),
            VariableId::AuxA(i) => format!("a{}", i + 1),
            VariableId::AuxB { dep, idx } => format!("b{}[{}]", suffix(self.m(), *dep), join(idx)),
            VariableId::AuxC { dep, idx } => format!("c{}[{}]", suffix(self.m(), *dep), join(idx)),
            VariableId::AuxD(i) => format!("d{}", i + 1),
            VariableId::Slack(i) => format!("_t{}", i + 1),
        }
    }
}

fn suffix(m: usize, dep: usize) -> String {
    if m == 1 {
        String::new()
    } else {
        format!("{}", dep + 1)
    }
}

fn join(idx: &MultiIndex) -> String {
    idx.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(self))
    }
}
