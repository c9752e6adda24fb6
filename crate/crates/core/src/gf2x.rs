//! Bit-packed polynomials over GF(2) and the small binary fields GF(2^e) built on them.

use std::fmt;

/// Coefficient of a multivariate polynomial: an element of GF(2^e), `e <= 16`,
/// written in the polynomial basis of the stored modulus.
pub type Coef = u16;

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: u32 = 16;

/// Carry-less 64x64 -> 128 bit product, returned as `(lo, hi)`.
pub fn clmul(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        bb &= bb - 1;
    }
    (lo, hi)
}

/// Polynomial over GF(2). Bit `i` of the limb vector is the coefficient of `x^i`;
/// there are no trailing zero limbs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    limbs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(w: u64) -> Self {
        let mut p = Gf2Poly { limbs: vec![w] };
        p.normalize();
        p
    }

    pub fn from_limbs(limbs: Vec<u64>) -> Self {
        let mut p = Gf2Poly { limbs };
        p.normalize();
        p
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut limbs = vec![0u64; n / 64 + 1];
        limbs[n / 64] = 1u64 << (n % 64);
        Gf2Poly { limbs }
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// The polynomial as a single word, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut limbs = long.limbs.clone();
        for (l, s) in limbs.iter_mut().zip(&short.limbs) {
            *l ^= s;
        }
        Self::from_limbs(limbs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.limbs.iter().enumerate() {
                let (lo, hi) = clmul(a, b);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        Self::from_limbs(out)
    }

    fn shl(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (w, b) = (n / 64, n % 64);
        let mut limbs = vec![0u64; self.limbs.len() + w + 1];
        for (i, &x) in self.limbs.iter().enumerate() {
            limbs[i + w] ^= x << b;
            if b != 0 {
                limbs[i + w + 1] ^= x >> (64 - b);
            }
        }
        Self::from_limbs(limbs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let s = dr - dd;
            r = r.add(&d.shl(s));
            q = q.add(&Self::monomial(s));
        }
        (q, r)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        let x = Self::monomial(1);
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = xp.mulmod(&xp, self);
            if !self.gcd(&xp.add(&x)).is_one() {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=deg).rev().filter(|&i| self.bit(i)) {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Conway polynomials over GF(2), bit-encoded, for degrees 1..=16.
const CONWAY: [u64; 17] = [
    0, 0b11, 0b111, 0b1011, 0b10011, 0b100101, 0b1011011, 0b10000011, 0b100011101, 0b1000010001,
    1135, 2053, 4331, 8219, 16553, 32821, 65581,
];

/// Stored defining polynomial of GF(2^e).
pub fn conway_polynomial(e: u32) -> Option<u64> {
    CONWAY.get(e as usize).copied().filter(|&m| m != 0)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Gf2eError {
    #[error("extension degree {0} outside 1..={MAX_EXT_DEGREE}")]
    Degree(u32),
    #[error("modulus has degree {found}, expected {expected}")]
    ModulusDegree { expected: u32, found: usize },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    Reducible(u64),
}

/// The finite field GF(2^e) = GF(2)[g]/(m(g)).
#[derive(Clone)]
pub struct Gf2e {
    e: u32,
    modulus: u64,
    // exp[k] = g^k, log[exp[k]] = k; only filled when g generates the unit group.
    exp: Vec<Coef>,
    log: Vec<u32>,
}

impl fmt::Debug for Gf2e {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:?}", self.e, Gf2Poly::from_u64(self.modulus))
    }
}

impl PartialEq for Gf2e {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for Gf2e {}

impl Gf2e {
    pub fn new(e: u32, modulus: Option<u64>) -> Result<Self, Gf2eError> {
        if e == 0 || e > MAX_EXT_DEGREE {
            return Err(Gf2eError::Degree(e));
        }
        let m = modulus.unwrap_or_else(|| conway_polynomial(e).unwrap());
        let mp = Gf2Poly::from_u64(m);
        let deg = mp.degree().unwrap_or(0);
        if deg != e as usize {
            return Err(Gf2eError::ModulusDegree { expected: e, found: deg });
        }
        if !mp.is_irreducible() {
            return Err(Gf2eError::Reducible(m));
        }
        let mut f = Gf2e { e, modulus: m, exp: Vec::new(), log: Vec::new() };
        f.build_tables();
        Ok(f)
    }

    fn build_tables(&mut self) {
        let q = 1usize << self.e;
        let g: Coef = if self.e == 1 { 1 } else { 2 };
        let mut exp = Vec::with_capacity(q - 1);
        let mut x: Coef = 1;
        loop {
            exp.push(x);
            x = self.mul_slow(x, g);
            if x == 1 {
                break;
            }
        }
        if exp.len() == q - 1 {
            let mut log = vec![u32::MAX; q];
            for (k, &v) in exp.iter().enumerate() {
                log[v as usize] = k as u32;
            }
            self.exp = exp;
            self.log = log;
        }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        1usize << self.e
    }

    /// Whether the class of `g` generates the multiplicative group.
    pub fn is_primitive(&self) -> bool {
        !self.exp.is_empty()
    }

    fn mul_slow(&self, a: Coef, b: Coef) -> Coef {
        let (mut p, _) = clmul(a as u64, b as u64);
        let e = self.e;
        for i in (e..2 * e).rev() {
            if (p >> i) & 1 == 1 {
                p ^= self.modulus << (i - e);
            }
        }
        p as Coef
    }

    #[inline]
    pub fn mul(&self, a: Coef, b: Coef) -> Coef {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return 1;
        }
        if self.exp.is_empty() {
            return self.mul_slow(a, b);
        }
        let n = self.exp.len() as u32;
        let mut k = self.log[a as usize] + self.log[b as usize];
        if k >= n {
            k -= n;
        }
        self.exp[k as usize]
    }

    pub fn pow(&self, a: Coef, mut k: u64) -> Coef {
        let mut base = a;
        let mut acc: Coef = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Coef) -> Option<Coef> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, (self.size() - 2) as u64))
    }

    #[inline]
    pub fn square(&self, a: Coef) -> Coef {
        self.mul(a, a)
    }

    /// The unique square root, `a^(2^(e-1))`.
    pub fn sqrt(&self, a: Coef) -> Coef {
        let mut r = a;
        for _ in 1..self.e {
            r = self.square(r);
        }
        r
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self, a: Coef) -> Coef {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.e {
            t ^= x;
            x = self.square(x);
        }
        t
    }

    /// Discrete logarithm to base `g`, when `g` is primitive.
    pub fn log(&self, a: Coef) -> Option<u32> {
        if a == 0 || self.log.is_empty() {
            return None;
        }
        Some(self.log[a as usize])
    }

    /// `g^k` where `g` is the class of the indeterminate.
    pub fn gen_pow(&self, k: i64) -> Coef {
        let g: Coef = if self.e == 1 { 1 } else { 2 };
        let n = (self.size() - 1) as i64;
        self.pow(g, k.rem_euclid(n) as u64)
    }

    /// All field elements in bit order.
    pub fn elements(&self) -> impl Iterator<Item = Coef> {
        0..self.size() as Coef
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clmul_matches_bitwise_product() {
        let (lo, hi) = clmul(0b1011, 0b111);
        // (x^3+x+1)(x^2+x+1) = x^5+x^4+1
        assert_eq!((lo, hi), (0b110001, 0));
        let (lo, hi) = clmul(1 << 63, 1 << 1);
        assert_eq!((lo, hi), (0, 1));
    }

    #[test]
    fn poly_division_roundtrip() {
        let a = Gf2Poly::from_limbs(vec![0xdead_beef_1234_5678, 0x9abc]);
        let d = Gf2Poly::from_u64(0b1_0001_1011);
        let (q, r) = a.divrem(&d);
        assert!(r.degree().unwrap_or(0) < 8);
        assert_eq!(q.mul(&d).add(&r), a);
    }

    #[test]
    fn stored_moduli_are_irreducible_and_primitive() {
        for e in 1..=MAX_EXT_DEGREE {
            let f = Gf2e::new(e, None).unwrap();
            assert!(f.is_primitive(), "e = {e}");
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(matches!(Gf2e::new(2, Some(0b101)), Err(Gf2eError::Reducible(_))));
        assert!(Gf2e::new(3, Some(0b111)).is_err());
    }

    #[test]
    fn small_field_laws() {
        let f = Gf2e::new(4, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.square(f.sqrt(a)), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.gen_pow(f.log(a).unwrap() as i64), a);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
        let ones = f.elements().filter(|&a| f.trace(a) == 1).count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn non_primitive_modulus_still_works() {
        // x^4+x^3+x^2+x+1 is irreducible but x has order 5.
        let f = Gf2e::new(4, Some(0b11111)).unwrap();
        assert!(!f.is_primitive());
        for a in f.elements().filter(|&a| a != 0) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}
