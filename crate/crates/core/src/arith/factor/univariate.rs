//! Univariate factorization over the integers: squarefree splitting,
//! Cantor-Zassenhaus modulo a small prime, quadratic Hensel lifting and
//! subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer polynomial, little-endian coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn zero() -> Self {
        ZPoly { c: vec![] }
    }

    pub fn one() -> Self {
        ZPoly { c: vec![BigInt::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] += x;
        }
        ZPoly::new(c)
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] -= x;
        }
        ZPoly::new(c)
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        if self.c.len() <= 1 {
            return ZPoly::zero();
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, x) in self.c.iter().enumerate().skip(1) {
            c.push(x * BigInt::from(i));
        }
        ZPoly::new(c)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly::new(self.c.iter().map(|x| x / &g).collect())
    }

    /// Exact division over the rationals with an integrality check.
    pub fn exact_div(&self, d: &ZPoly) -> Option<ZPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        // Division over Q via num_rational, then integrality check.
        use num_rational::BigRational as Q;
        let mut rem: Vec<Q> = self.c.iter().map(|x| Q::from_integer(x.clone())).collect();
        let dd: Vec<Q> = d.c.iter().map(|x| Q::from_integer(x.clone())).collect();
        let n = self.degree();
        let m = d.degree();
        let mut q = vec![Q::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let top = rem[k + m].clone();
            if top.is_zero() {
                continue;
            }
            let coeff = top / dd[m].clone();
            for (i, dc) in dd.iter().enumerate() {
                let delta = coeff.clone() * dc;
                rem[k + i] -= delta;
            }
            q[k] = coeff;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(q.len());
        for x in q {
            if !x.denom().is_one() {
                return None;
            }
            out.push(x.numer().clone());
        }
        Some(ZPoly::new(out))
    }

    pub fn max_coeff_abs(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

/// Integer gcd of two univariate polynomials (primitive, positive lc).
pub fn zpoly_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let mut f = a.primitive();
    let mut g = b.primitive();
    if f.degree() < g.degree() {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        // Pseudo-remainder.
        let delta = f.degree() - g.degree();
        let mut r = f.scale(&g.lc().pow(delta as u32 + 1));
        // r mod g by long division (exact over Z by the scaling)
        r = zdiv_rem(&r, &g);
        if r.is_zero() {
            return g.primitive();
        }
        if r.degree() == 0 {
            return ZPoly::one();
        }
        f = g;
        g = r.primitive();
        if f.degree() < g.degree() {
            std::mem::swap(&mut f, &mut g);
        }
    }
}

fn zdiv_rem(f: &ZPoly, g: &ZPoly) -> ZPoly {
    let mut rem = f.clone();
    let glc = g.lc();
    while !rem.is_zero() && rem.degree() >= g.degree() {
        let k = rem.degree() - g.degree();
        let top = rem.lc();
        let (q, r) = top.div_rem(&glc);
        if !r.is_zero() {
            // Scale up; caller guarantees eventual exactness for prs usage.
            rem = rem.scale(&glc);
            continue;
        }
        let mut sub = vec![BigInt::zero(); k];
        sub.extend(g.c.iter().map(|x| x * &q));
        rem = rem.sub(&ZPoly::new(sub));
    }
    rem
}

// ---------------------------------------------------------------------------
// arithmetic modulo a word-size prime
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct PPoly {
    c: Vec<u64>,
    p: u64,
}

impl PPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PPoly { c, p }
    }

    fn zero(p: u64) -> Self {
        PPoly { c: vec![], p }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    fn from_zpoly(f: &ZPoly, p: u64) -> Self {
        let pp = BigInt::from(p);
        let c = f
            .c
            .iter()
            .map(|x| {
                let r = x.mod_floor(&pp);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        PPoly::new(c, p)
    }

    fn monic(&self) -> PPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inv(self.lc(), self.p);
        PPoly::new(self.c.iter().map(|x| mulmod(*x, inv, self.p)).collect(), self.p)
    }

    fn sub(&self, o: &PPoly) -> PPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u64; n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] = *x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] = (c[i] + self.p - *x) % self.p;
        }
        PPoly::new(c, self.p)
    }

    fn mul(&self, o: &PPoly) -> PPoly {
        if self.is_zero() || o.is_zero() {
            return PPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(*a, *b, self.p)) % self.p;
            }
        }
        PPoly::new(c, self.p)
    }

    /// Division with remainder by a nonzero polynomial.
    fn div_rem(&self, g: &PPoly) -> (PPoly, PPoly) {
        let p = self.p;
        let mut rem = self.c.clone();
        let dg = g.degree();
        if self.is_zero() || self.degree() < dg {
            return (PPoly::zero(p), self.clone());
        }
        let inv = mod_inv(g.lc(), p);
        let mut q = vec![0u64; self.degree() - dg + 1];
        for k in (0..q.len()).rev() {
            let top = rem[k + dg] % p;
            if top == 0 {
                continue;
            }
            let coeff = mulmod(top, inv, p);
            q[k] = coeff;
            for (i, gc) in g.c.iter().enumerate() {
                let sub = mulmod(coeff, *gc, p);
                rem[k + i] = (rem[k + i] + p - sub) % p;
            }
        }
        (PPoly::new(q, p), PPoly::new(rem, p))
    }

    fn rem(&self, g: &PPoly) -> PPoly {
        self.div_rem(g).1
    }

    fn gcd(&self, o: &PPoly) -> PPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// self^e mod g with a big-integer exponent.
    fn powmod(&self, e: &BigInt, g: &PPoly) -> PPoly {
        let mut base = self.rem(g);
        let mut acc = PPoly::new(vec![1], self.p);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(g);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(g);
            }
        }
        acc
    }

    fn derivative(&self) -> PPoly {
        if self.c.len() <= 1 {
            return PPoly::zero(self.p);
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, x) in self.c.iter().enumerate().skip(1) {
            c.push(mulmod(*x, (i as u64) % self.p, self.p));
        }
        PPoly::new(c, self.p)
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    powmod_u(a, p - 2, p)
}

/// Deterministic splitmix64 stream for equal-degree splitting.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

/// Cantor-Zassenhaus factorization of a monic squarefree polynomial mod p.
fn cz_factor(f: &PPoly) -> Vec<PPoly> {
    let p = f.p;
    let mut out = Vec::new();
    // Distinct-degree splitting.
    let mut rest = f.monic();
    let mut h = PPoly::new(vec![0, 1], p); // x
    let mut d = 0usize;
    let mut stages: Vec<(PPoly, usize)> = Vec::new();
    while rest.degree() >= 1 {
        d += 1;
        if 2 * d > rest.degree() {
            stages.push((rest.clone(), rest.degree()));
            break;
        }
        h = h.powmod(&BigInt::from(p), &rest);
        let hx = h.sub(&PPoly::new(vec![0, 1], p));
        let g = hx.gcd(&rest);
        if g.degree() >= 1 {
            stages.push((g.clone(), d));
            rest = rest.div_rem(&g).0.monic();
            h = h.rem(&rest);
        }
    }
    // Equal-degree splitting.
    for (prod, d) in stages {
        equal_degree(&prod, d, &mut out);
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.c.cmp(&b.c)));
    out
}

fn equal_degree(f: &PPoly, d: usize, out: &mut Vec<PPoly>) {
    if f.degree() == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let mut rng = SplitMix(0x5eed ^ (p << 8) ^ d as u64 ^ ((f.degree() as u64) << 32));
    let exp = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        let deg = f.degree() - 1;
        let mut c = vec![0u64; deg + 1];
        for x in c.iter_mut() {
            *x = rng.next() % p;
        }
        let r = PPoly::new(c, p);
        if r.is_zero() {
            continue;
        }
        let s = r.powmod(&exp, f);
        let s1 = s.sub(&PPoly::new(vec![1], p));
        let g = s1.gcd(f);
        if g.degree() >= 1 && g.degree() < f.degree() {
            equal_degree(&g, d, out);
            equal_degree(&f.div_rem(&g).0.monic(), d, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

fn mpoly_reduce(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::new(f.c.iter().map(|x| x.mod_floor(m)).collect())
}

fn mpoly_centered(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::new(
        f.c
            .iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn mpoly_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    mpoly_reduce(&a.mul(b), m)
}

/// Division with remainder modulo m by a monic divisor.
fn mpoly_divrem_monic(f: &ZPoly, g: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(g.lc().is_one());
    let mut rem = mpoly_reduce(f, m).c;
    let dg = g.degree();
    if rem.len() <= dg {
        return (ZPoly::zero(), ZPoly::new(rem));
    }
    let mut q = vec![BigInt::zero(); rem.len() - dg];
    for k in (0..q.len()).rev() {
        let top = rem[k + dg].mod_floor(m);
        if top.is_zero() {
            continue;
        }
        q[k] = top.clone();
        for (i, gc) in g.c.iter().enumerate() {
            let v = (&rem[k + i] - &top * gc).mod_floor(m);
            rem[k + i] = v;
        }
    }
    (ZPoly::new(q), ZPoly::new(rem))
}

fn ppoly_to_zpoly(f: &PPoly) -> ZPoly {
    ZPoly::new(f.c.iter().map(|x| BigInt::from(*x)).collect())
}

/// Extended Euclid mod p: s*a + t*b = 1 for coprime a, b.
fn bezout_modp(a: &PPoly, b: &PPoly) -> (PPoly, PPoly) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PPoly::new(vec![1], p), PPoly::zero(p));
    let (mut t0, mut t1) = (PPoly::zero(p), PPoly::new(vec![1], p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    debug_assert_eq!(r0.degree(), 0);
    let inv = mod_inv(r0.lc(), p);
    let scale = |f: &PPoly| PPoly::new(f.c.iter().map(|x| mulmod(*x, inv, p)).collect(), p);
    (scale(&s0), scale(&t0))
}

/// Quadratic Hensel lifting of the monic pair factorization f = g*h
/// from mod p to mod p^k (all polynomials monic).
fn hensel_pair(
    f: &ZPoly,
    g0: &PPoly,
    h0: &PPoly,
    p: u64,
    target: &BigInt,
) -> (ZPoly, ZPoly) {
    let (s0, t0) = bezout_modp(g0, h0);
    let mut m = BigInt::from(p);
    let mut g = ppoly_to_zpoly(g0);
    let mut h = ppoly_to_zpoly(h0);
    let mut s = ppoly_to_zpoly(&s0);
    let mut t = ppoly_to_zpoly(&t0);
    while &m < target {
        let m2 = &m * &m;
        // e = f - g h
        let e = mpoly_reduce(&f.sub(&g.mul(&h)), &m2);
        // (q, r) = (s e) / h  with h monic
        let (q, r) = mpoly_divrem_monic(&mpoly_mul(&s, &e, &m2), &h, &m2);
        let g_new = mpoly_reduce(&g.add(&mpoly_mul(&t, &e, &m2)).add(&mpoly_mul(&q, &g, &m2)), &m2);
        let h_new = mpoly_reduce(&h.add(&r), &m2);
        // refresh the Bezout pair
        let b = mpoly_reduce(
            &mpoly_mul(&s, &g_new, &m2).add(&mpoly_mul(&t, &h_new, &m2)).sub(&ZPoly::one()),
            &m2,
        );
        let (c, d) = mpoly_divrem_monic(&mpoly_mul(&s, &b, &m2), &h_new, &m2);
        s = mpoly_reduce(&s.sub(&d), &m2);
        t = mpoly_reduce(&t.sub(&mpoly_mul(&t, &b, &m2)).sub(&mpoly_mul(&c, &g_new, &m2)), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (mpoly_reduce(&g, &m), mpoly_reduce(&h, &m))
}

/// Lifts the full list of monic mod-p factors of monic f to mod p^k >= target.
fn hensel_tree(f: &ZPoly, facs: &[PPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if facs.len() == 1 {
        // The single factor is f itself modulo the target.
        return vec![mpoly_reduce(f, target)];
    }
    let mid = facs.len() / 2;
    let (left, right) = facs.split_at(mid);
    let mut gp = PPoly::new(vec![1], p);
    for x in left {
        gp = gp.mul(x);
    }
    let mut hp = PPoly::new(vec![1], p);
    for x in right {
        hp = hp.mul(x);
    }
    let (g, h) = hensel_pair(f, &gp, &hp, p, target);
    let mut out = hensel_tree(&g, left, p, target);
    out.extend(hensel_tree(&h, right, p, target));
    out
}

// ---------------------------------------------------------------------------
// Zassenhaus driver
// ---------------------------------------------------------------------------

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
];

/// Factors a monic squarefree integer polynomial into monic irreducibles.
fn factor_monic_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    debug_assert!(f.lc().is_one());
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    // Find a prime where the image stays squarefree.
    let mut chosen = None;
    for &p in PRIMES {
        let fp = PPoly::from_zpoly(f, p);
        if fp.degree() != f.degree() {
            continue;
        }
        let g = fp.gcd(&fp.derivative());
        if g.degree() == 0 {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("squarefree polynomial has a good small prime");
    let fp = PPoly::from_zpoly(f, p).monic();
    let modular = cz_factor(&fp);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Landau-Mignotte style coefficient bound (generous).
    let n = f.degree() as u32;
    let bound: BigInt = (BigInt::one() << (n + 2)) * f.max_coeff_abs() * BigInt::from(n + 1);
    let target = &bound * 2 + 1;
    let lifted = hensel_tree(f, &modular, p, &target);
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = &modulus * &modulus;
    }

    // Subset recombination with trial division.
    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, size) {
            let mut prod = ZPoly::one();
            for &i in &combo {
                prod = mpoly_mul(&prod, &remaining[i], &modulus);
            }
            let cand = mpoly_centered(&prod, &modulus).primitive();
            if cand.degree() == 0 {
                continue;
            }
            if let Some(q) = rest.exact_div(&cand) {
                out.push(cand);
                rest = q;
                let combo_set: std::collections::BTreeSet<usize> = combo.into_iter().collect();
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !combo_set.contains(i))
                    .map(|(_, x)| x)
                    .collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.degree() >= 1 {
        out.push(rest);
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.c.cmp(&b.c)));
    out
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

/// Factors a squarefree primitive integer polynomial into primitive
/// irreducibles with positive leading coefficients.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    if f.degree() <= 1 {
        return vec![f.primitive()];
    }
    let lc = f.lc();
    if lc.is_one() {
        return factor_monic_squarefree(f);
    }
    // Monic transform: fm(y) = lc^(n-1) * f(y / lc).
    let n = f.degree();
    let mut c = Vec::with_capacity(n + 1);
    for (i, a) in f.c.iter().enumerate() {
        // coefficient of y^i is a_i * lc^(n-1-i)
        c.push(a * lc.pow((n - 1 - i.min(n - 1)) as u32));
    }
    // Fix the top coefficient: a_n * lc^(n-1-n) is a_n / lc = 1 after scaling.
    c[n] = BigInt::one();
    let fm = ZPoly::new(c);
    let factors = factor_monic_squarefree(&fm);
    factors
        .into_iter()
        .map(|g| {
            // Map back: h(x) = primitive(g(lc * x)).
            let mut c = Vec::with_capacity(g.c.len());
            for (i, a) in g.c.iter().enumerate() {
                c.push(a * lc.pow(i as u32));
            }
            ZPoly::new(c).primitive()
        })
        .collect()
}

/// Full factorization of a nonzero integer polynomial: returns the list of
/// primitive irreducible factors with multiplicities (content dropped).
pub fn factor_z(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    let f = f.primitive();
    if f.degree() == 0 {
        return vec![];
    }
    // Squarefree decomposition (Yun).
    let mut out: Vec<(ZPoly, u32)> = Vec::new();
    let df = f.derivative();
    let mut a = zpoly_gcd(&f, &df);
    if a.degree() == 0 {
        for g in factor_squarefree(&f) {
            out.push((g, 1));
        }
        return out;
    }
    let mut b = f.exact_div(&a).expect("gcd divides");
    let mut mult = 1u32;
    loop {
        let c = zpoly_gcd(&a, &b);
        let factor = b.exact_div(&c).expect("gcd divides");
        if factor.degree() >= 1 {
            for g in factor_squarefree(&factor.primitive()) {
                out.push((g, mult));
            }
        }
        if a.degree() == 0 {
            break;
        }
        a = a.exact_div(&c).expect("gcd divides");
        b = c;
        mult += 1;
        if b.degree() == 0 {
            break;
        }
    }
    out
}
