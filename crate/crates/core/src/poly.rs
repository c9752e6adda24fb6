//! Sparse multivariate polynomials over GF(2^e) with terms kept in descending
//! graded-lexicographic order.

use crate::gf2x::{Coef, Gf2e};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Maximum number of variables a packed monomial can hold.
pub const MAX_VARS: usize = 4;
const FIELD_MASK: u64 = 0xFFFF;
const LOW_BITS: u64 = 0x0001_0001_0001_0001;
const HIGH_BITS: u64 = 0x8000_8000_8000_8000;

/// Exponent vector packed into 16-bit fields, variable 0 in the top field, so the
/// raw word order is lexicographic with `t1 > t2 > ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(u64);

#[inline]
fn shift(i: usize) -> u32 {
    48 - 16 * i as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial(1u64 << shift(i))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut w = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= FIELD_MASK as u32, "exponent {e} too large");
            w |= (e as u64) << shift(i);
        }
        Monomial(w)
    }

    /// Product of the variables whose bits are set in `mask`.
    pub fn square_free(mask: u32) -> Self {
        let mut w = 0u64;
        for i in 0..MAX_VARS {
            if mask >> i & 1 == 1 {
                w |= 1u64 << shift(i);
            }
        }
        Monomial(w)
    }

    #[inline]
    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> shift(i)) & FIELD_MASK) as u32
    }

    pub fn with_exp(self, i: usize, e: u32) -> Self {
        assert!(e <= FIELD_MASK as u32);
        let s = shift(i);
        Monomial((self.0 & !(FIELD_MASK << s)) | ((e as u64) << s))
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let mut w = 0u64;
        for i in 0..MAX_VARS {
            let e = self.exp(i) + o.exp(i);
            if e > FIELD_MASK as u32 {
                return None;
            }
            w |= (e as u64) << shift(i);
        }
        Some(Monomial(w))
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        // Fast path: no field can carry when both top bits are clear and the sum fits.
        let s = self.0.wrapping_add(o.0);
        if (self.0 | o.0) & HIGH_BITS == 0 && s & HIGH_BITS == 0 {
            return Monomial(s);
        }
        self.checked_mul(o).expect("monomial exponent overflow")
    }

    pub fn divides(self, o: Self) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// Quotient `self / d`; requires `d | self`.
    pub fn div(self, d: Self) -> Self {
        debug_assert!(d.divides(self));
        Monomial(self.0 - d.0)
    }

    pub fn gcd(self, o: Self) -> Self {
        let mut w = 0u64;
        for i in 0..MAX_VARS {
            w |= (self.exp(i).min(o.exp(i)) as u64) << shift(i);
        }
        Monomial(w)
    }

    /// Bit `i` set iff the exponent of variable `i` is odd.
    #[inline]
    pub fn odd_mask(self) -> u32 {
        let mut m = 0;
        for i in 0..MAX_VARS {
            m |= ((self.0 >> shift(i)) as u32 & 1) << i;
        }
        m
    }

    /// Halves all exponents after dropping their parity bits.
    #[inline]
    pub fn halve(self) -> Self {
        Monomial((self.0 & !LOW_BITS) >> 1)
    }

    #[inline]
    pub fn double(self) -> Self {
        assert!(self.0 & HIGH_BITS == 0, "monomial exponent overflow");
        Monomial(self.0 << 1)
    }

    /// Set of variables with positive exponent.
    pub fn support(self) -> u32 {
        (0..MAX_VARS).filter(|&i| self.exp(i) > 0).fold(0, |m, i| m | 1 << i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; terms sorted by descending monomial, coefficients nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Coef)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { terms: vec![(Monomial::ONE, 1)] }
    }

    pub fn constant(c: Coef) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly { terms: vec![(Monomial::ONE, c)] }
        }
    }

    pub fn term(m: Monomial, c: Coef) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from terms in any order, combining repeats.
    pub fn from_terms(mut terms: Vec<(Monomial, Coef)>) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 ^= c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { terms: out }
    }

    /// Trusted constructor: terms already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted(terms: Vec<(Monomial, Coef)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Monomial::ONE, 1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn lead(&self) -> Option<(Monomial, Coef)> {
        self.terms.first().copied()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn var_support(&self) -> u32 {
        self.terms.iter().fold(0, |m, t| m | t.0.support())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1 ^ b[j].1;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn scale(&self, c: Coef, f: &Gf2e) -> Self {
        if c == 0 {
            return Self::zero();
        }
        if c == 1 {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|&(m, x)| (m, f.mul(x, c))).collect() }
    }

    /// Multiplication by a single term keeps the order, so no re-sorting.
    pub fn mul_term(&self, m: Monomial, c: Coef, f: &Gf2e) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|&(t, x)| (t.mul(m), f.mul(x, c))).collect() }
    }

    pub fn mul(&self, o: &Self, f: &Gf2e) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, o.terms[0].1, f);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, self.terms[0].1, f);
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for &(m1, c1) in &small.terms {
            for &(m2, c2) in &big.terms {
                prods.push((m1.mul(m2), f.mul(c1, c2)));
            }
        }
        Self::from_terms(prods)
    }

    /// Squaring is additive in characteristic 2: square each term.
    pub fn square(&self, f: &Gf2e) -> Self {
        Poly { terms: self.terms.iter().map(|&(m, c)| (m.double(), f.square(c))).collect() }
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self, f: &Gf2e) -> Option<Self> {
        if self.terms.iter().any(|t| t.0.odd_mask() != 0) {
            return None;
        }
        Some(Poly { terms: self.terms.iter().map(|&(m, c)| (m.halve(), f.sqrt(c))).collect() })
    }

    pub fn pow(&self, mut k: u64, f: &Gf2e) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Splits by exponent parity: returns pairs `(mask, root part)` where the
    /// polynomial equals the sum over masks of `root^2 * x^mask`.
    pub fn parity_split(&self, f: &Gf2e) -> BTreeMap<u32, Poly> {
        let mut parts: BTreeMap<u32, Vec<(Monomial, Coef)>> = BTreeMap::new();
        for &(m, c) in &self.terms {
            parts.entry(m.odd_mask()).or_default().push((m.halve(), f.sqrt(c)));
        }
        parts.into_iter().map(|(k, v)| (k, Poly::from_sorted(v))).collect()
    }

    /// Makes the leading coefficient 1, returning the normalized polynomial and the
    /// original leading coefficient.
    pub fn monic(&self, f: &Gf2e) -> (Self, Coef) {
        match self.lead() {
            None => (Self::zero(), 0),
            Some((_, 1)) => (self.clone(), 1),
            Some((_, c)) => (self.scale(f.inv(c).unwrap(), f), c),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self, f: &Gf2e) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = d.terms[0];
            let inv = f.inv(dc).unwrap();
            let mut out = Vec::with_capacity(self.len());
            for &(m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.push((m.div(dm), f.mul(c, inv)));
            }
            return Some(Poly { terms: out });
        }
        let (ld, lc) = d.terms[0];
        let lcinv = f.inv(lc).unwrap();
        let mut rem: BTreeMap<Monomial, Coef> = self.terms.iter().copied().collect();
        let mut q = Vec::new();
        while let Some((&m, &c)) = rem.last_key_value() {
            if !ld.divides(m) {
                return None;
            }
            let qm = m.div(ld);
            let qc = f.mul(c, lcinv);
            q.push((qm, qc));
            for &(dm, dc) in &d.terms {
                let key = dm.mul(qm);
                let v = f.mul(dc, qc);
                let e = rem.entry(key).or_insert(0);
                *e ^= v;
                if *e == 0 {
                    rem.remove(&key);
                }
            }
        }
        Some(Poly { terms: q })
    }

    /// Coefficients with respect to variable `v`, indexed by the exponent of `v`.
    fn split_var(&self, v: usize) -> Vec<Poly> {
        let deg = self.terms.iter().map(|t| t.0.exp(v)).max().unwrap_or(0) as usize;
        let mut parts: Vec<Vec<(Monomial, Coef)>> = vec![Vec::new(); deg + 1];
        for &(m, c) in &self.terms {
            parts[m.exp(v) as usize].push((m.with_exp(v, 0), c));
        }
        // Removing one variable can reorder terms of different degree.
        parts.into_iter().map(Poly::from_terms).collect()
    }

    fn join_var(v: usize, parts: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            for &(m, c) in &p.terms {
                terms.push((m.with_exp(v, m.exp(v) + k as u32), c));
            }
        }
        Poly::from_terms(terms)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self, f: &Gf2e) -> Self {
        if self.is_zero() {
            return o.monic(f).0;
        }
        if o.is_zero() {
            return self.monic(f).0;
        }
        if self.is_constant() || o.is_constant() {
            return Self::one();
        }
        if self.len() == 1 || o.len() == 1 {
            let (single, other) = if self.len() == 1 { (self, o) } else { (o, self) };
            let g = other.terms.iter().fold(single.terms[0].0, |g, t| g.gcd(t.0));
            return Self::term(g, 1);
        }
        if self == o {
            return self.monic(f).0;
        }
        let (sa, sb) = (self.var_support(), o.var_support());
        let only = (sa & !sb) | (sb & !sa);
        if only != 0 {
            // A variable present in just one argument divides out through its content.
            let v = only.trailing_zeros() as usize;
            return if sa >> v & 1 == 1 {
                self.content_in(v, f).gcd(o, f)
            } else {
                self.gcd(&o.content_in(v, f), f)
            };
        }
        let v = (sa & sb).trailing_zeros() as usize;
        let ca = self.content_in(v, f);
        let cb = o.content_in(v, f);
        let g0 = ca.gcd(&cb, f);
        let mut p = divide_all(&self.split_var(v), &ca, f);
        let mut q = divide_all(&o.split_var(v), &cb, f);
        if p.len() < q.len() {
            std::mem::swap(&mut p, &mut q);
        }
        let g = loop {
            let r = prem(&p, &q, f);
            if r.is_empty() {
                break q;
            }
            if r.len() == 1 {
                break vec![Self::one()];
            }
            p = q;
            q = primitive_part(&r, f);
        };
        Self::join_var(v, &g).mul(&g0, f).monic(f).0
    }

    /// Gcd of the coefficients with respect to `v`.
    fn content_in(&self, v: usize, f: &Gf2e) -> Self {
        content(&self.split_var(v), f)
    }
}

fn content(parts: &[Poly], f: &Gf2e) -> Poly {
    let mut g = Poly::zero();
    for p in parts.iter().filter(|p| !p.is_zero()) {
        g = g.gcd(p, f);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_all(parts: &[Poly], c: &Poly, f: &Gf2e) -> Vec<Poly> {
    if c.is_one() {
        return parts.to_vec();
    }
    parts.iter().map(|p| p.exact_div(c, f).expect("content divides")).collect()
}

fn primitive_part(parts: &[Poly], f: &Gf2e) -> Vec<Poly> {
    let c = content(parts, f);
    divide_all(parts, &c, f)
}

fn trim(r: &mut Vec<Poly>) {
    while r.last().is_some_and(|p| p.is_zero()) {
        r.pop();
    }
}

/// Sparse pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(p: &[Poly], q: &[Poly], f: &Gf2e) -> Vec<Poly> {
    let dq = q.len() - 1;
    let lq = &q[dq];
    let mut r = p.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= dq {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        if !lq.is_one() {
            for x in r.iter_mut() {
                *x = x.mul(lq, f);
            }
        }
        for j in 0..=dq {
            let k = j + dr - dq;
            r[k] = r[k].add(&q[j].mul(&lr, f));
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(e: u32) -> Gf2e {
        Gf2e::new(e, None).unwrap()
    }

    fn p(terms: &[(&[u32], Coef)]) -> Poly {
        Poly::from_terms(terms.iter().map(|(e, c)| (Monomial::from_exps(e), *c)).collect())
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::from_exps(&[2, 0]);
        let b = Monomial::from_exps(&[1, 1]);
        let c = Monomial::from_exps(&[0, 3]);
        assert!(c > a && a > b);
        assert_eq!(a.mul(b), Monomial::from_exps(&[3, 1]));
        assert_eq!(Monomial::from_exps(&[3, 2]).odd_mask(), 0b01);
        assert_eq!(Monomial::from_exps(&[3, 2]).halve(), Monomial::from_exps(&[1, 1]));
    }

    #[test]
    fn exact_division_and_gcd_univariate() {
        let f = gf(1);
        // (t+1)^3 and (t+1)(t^2+t+1)
        let a = p(&[(&[1], 1), (&[0], 1)]).pow(3, &f);
        let b = p(&[(&[1], 1), (&[0], 1)]).mul(&p(&[(&[2], 1), (&[1], 1), (&[0], 1)]), &f);
        let g = a.gcd(&b, &f);
        assert_eq!(g, p(&[(&[1], 1), (&[0], 1)]));
        assert_eq!(a.exact_div(&g, &f).unwrap(), p(&[(&[2], 1), (&[0], 1)]));
        assert!(a.exact_div(&p(&[(&[1], 1)]), &f).is_none());
    }

    #[test]
    fn gcd_bivariate() {
        let f = gf(2);
        let x = p(&[(&[1, 0], 1)]);
        let y = p(&[(&[0, 1], 1)]);
        let one = Poly::one();
        let common = x.mul(&y, &f).add(&one).add(&x.scale(2, &f)); // xy + g x + 1
        let a = common.mul(&x.add(&y), &f).mul(&y.add(&one), &f);
        let b = common.mul(&x.mul(&x, &f).add(&y.scale(3, &f)), &f);
        let g = a.gcd(&b, &f);
        assert_eq!(g, common.monic(&f).0);
        assert!(a.exact_div(&g, &f).is_some());
    }

    #[test]
    fn gcd_with_variable_only_in_one_argument() {
        let f = gf(1);
        let x = p(&[(&[1, 0], 1)]);
        let y = p(&[(&[0, 1], 1)]);
        let one = Poly::one();
        let a = x.add(&one).mul(&y, &f).add(&x.add(&one)); // (x+1)(y+1)
        let b = x.add(&one).mul(&x, &f).add(&x.add(&one)); // (x+1)^2
        assert_eq!(a.gcd(&b, &f), x.add(&one));
    }

    #[test]
    fn parity_split_reconstitutes() {
        let f = gf(3);
        let a = p(&[(&[3, 1], 5), (&[2, 2], 3), (&[1, 0], 1), (&[0, 0], 7)]);
        let parts = a.parity_split(&f);
        let mut back = Poly::zero();
        for (mask, root) in parts {
            back = back.add(&root.square(&f).mul_term(Monomial::square_free(mask), 1, &f));
        }
        assert_eq!(back, a);
    }
}
