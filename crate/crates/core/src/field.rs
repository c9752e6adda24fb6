//! The field k = GF(2^e)(t1, ..., td), its subfield of squares and the
//! decomposition of elements over the 2-basis {t1, ..., td}.

use crate::gf2x::{Coef, Gf2e, Gf2eError};
use crate::poly::{Monomial, Poly, MAX_VARS};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// A subset of {1, ..., d} as a bit mask; bit `i` stands for the variable `t_{i+1}`.
pub type SubsetIndex = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Coefficients(#[from] Gf2eError),
    #[error("number of variables {0} outside 1..={MAX_VARS}")]
    VarCount(usize),
    #[error("invalid variable names: {0}")]
    Names(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at position {pos}")]
    DivisionByZeroAt { pos: usize },
}

/// Parameters of k: coefficient field GF(2^e) and the variable names.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    gf: Gf2e,
    names: Vec<String>,
}

const DEFAULT_NAMES: [&str; MAX_VARS] = ["t", "u", "v", "z"];

impl FieldSpec {
    pub fn new(
        e: u32,
        d: usize,
        names: Option<Vec<String>>,
        modulus: Option<u64>,
    ) -> Result<Arc<Self>, FieldError> {
        if d == 0 || d > MAX_VARS {
            return Err(FieldError::VarCount(d));
        }
        let names = names.unwrap_or_else(|| DEFAULT_NAMES[..d].iter().map(|s| s.to_string()).collect());
        if names.len() != d {
            return Err(FieldError::Names(format!("expected {d} names, got {}", names.len())));
        }
        for (i, n) in names.iter().enumerate() {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                && n.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !ok || n == "g" || names[..i].contains(n) {
                return Err(FieldError::Names(n.clone()));
            }
        }
        Ok(Arc::new(FieldSpec { gf: Gf2e::new(e, modulus)?, names }))
    }

    /// F_2(t).
    pub fn f2t() -> Arc<Self> {
        Self::new(1, 1, None, None).unwrap()
    }

    /// F_2(t, u).
    pub fn f2tu() -> Arc<Self> {
        Self::new(1, 2, None, None).unwrap()
    }

    pub fn gf(&self) -> &Gf2e {
        &self.gf
    }

    pub fn e(&self) -> u32 {
        self.gf.e()
    }

    pub fn d(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of subsets of the 2-basis, 2^d.
    pub fn basis_size(&self) -> usize {
        1 << self.d()
    }

    /// All subsets in (cardinality, lex) order.
    pub fn subsets(&self) -> Vec<SubsetIndex> {
        subsets_ordered(self.d())
    }

    pub fn format_constant(&self, c: Coef) -> String {
        if c == 1 {
            return "1".into();
        }
        match self.gf.log(c) {
            Some(1) => "g".into(),
            Some(k) => format!("g^{k}"),
            None => {
                let parts: Vec<String> = (0..16)
                    .rev()
                    .filter(|i| c >> i & 1 == 1)
                    .map(|i| match i {
                        0 => "1".to_string(),
                        1 => "g".to_string(),
                        _ => format!("g^{i}"),
                    })
                    .collect();
                format!("({})", parts.join("+"))
            }
        }
    }

    pub fn format_monomial(&self, m: Monomial) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(name.clone()),
                k => parts.push(format!("{name}^{k}")),
            }
        }
        parts.join("*")
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = p
            .terms()
            .iter()
            .map(|&(m, c)| {
                let ms = self.format_monomial(m);
                let cs = self.format_constant(c);
                match (ms.is_empty(), cs == "1") {
                    (true, _) => cs,
                    (false, true) => ms,
                    (false, false) => format!("{cs}*{ms}"),
                }
            })
            .collect();
        terms.join("+")
    }
}

pub fn popcount(s: SubsetIndex) -> u32 {
    s.count_ones()
}

/// (cardinality, lex on sorted element lists) order of subsets.
pub fn subset_cmp(a: SubsetIndex, b: SubsetIndex) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let diff = a ^ b;
        if diff == 0 {
            Ordering::Equal
        } else if a >> diff.trailing_zeros() & 1 == 1 {
            // The smallest differing element belongs to a, so a's list is smaller.
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

pub fn subsets_ordered(d: usize) -> Vec<SubsetIndex> {
    let mut v: Vec<SubsetIndex> = (0..1u32 << d).collect();
    v.sort_by(|&a, &b| subset_cmp(a, b));
    v
}

/// Elements of a subset in increasing order.
pub fn subset_elements(s: SubsetIndex) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s >> i & 1 == 1)
}

/// A reduced fraction of polynomials; the denominator is monic in graded-lex order.
#[derive(Clone)]
pub struct FieldElem {
    spec: Arc<FieldSpec>,
    num: Poly,
    den: Poly,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec);
        self.num == other.num && self.den == other.den
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Coefficients s_xi with a = sum s_xi^2 x^xi, indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareDecomp {
    parts: Vec<FieldElem>,
}

impl SquareDecomp {
    pub fn get(&self, xi: SubsetIndex) -> &FieldElem {
        &self.parts[xi as usize]
    }

    pub fn parts(&self) -> &[FieldElem] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<FieldElem> {
        self.parts
    }

    /// Nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (SubsetIndex, &FieldElem)> {
        self.parts.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i as SubsetIndex, s))
    }

    pub fn recompose(&self) -> FieldElem {
        let spec = self.parts[0].spec.clone();
        let mut acc = FieldElem::zero(&spec);
        for (xi, s) in self.support() {
            acc = &acc + &(&s.square() * &FieldElem::basis_monomial(&spec, xi));
        }
        acc
    }
}

impl FieldElem {
    fn raw(spec: &Arc<FieldSpec>, num: Poly, den: Poly) -> Self {
        FieldElem { spec: spec.clone(), num, den }
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self::raw(spec, Poly::zero(), Poly::one())
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::raw(spec, Poly::one(), Poly::one())
    }

    pub fn constant(spec: &Arc<FieldSpec>, c: Coef) -> Self {
        assert!((c as usize) < spec.gf.size(), "constant outside GF(2^e)");
        Self::raw(spec, Poly::constant(c), Poly::one())
    }

    /// The variable t_{i+1}.
    pub fn var(spec: &Arc<FieldSpec>, i: usize) -> Self {
        assert!(i < spec.d());
        Self::raw(spec, Poly::term(Monomial::var(i), 1), Poly::one())
    }

    pub fn monomial(spec: &Arc<FieldSpec>, m: Monomial, c: Coef) -> Self {
        Self::raw(spec, Poly::term(m, c), Poly::one())
    }

    /// x^xi for the 2-basis.
    pub fn basis_monomial(spec: &Arc<FieldSpec>, xi: SubsetIndex) -> Self {
        Self::monomial(spec, Monomial::square_free(xi), 1)
    }

    pub fn from_poly(spec: &Arc<FieldSpec>, num: Poly) -> Self {
        Self::raw(spec, num, Poly::one())
    }

    pub fn from_fraction(spec: &Arc<FieldSpec>, num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(spec, num, den))
    }

    fn reduced(spec: &Arc<FieldSpec>, num: Poly, den: Poly) -> Self {
        let f = &spec.gf;
        if num.is_zero() {
            return Self::zero(spec);
        }
        if den.is_constant() {
            let c = den.lead().unwrap().1;
            return Self::raw(spec, num.scale(f.inv(c).unwrap(), f), Poly::one());
        }
        let g = num.gcd(&den, f);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g, f).unwrap(), den.exact_div(&g, f).unwrap())
        };
        let (den, lc) = den.monic(f);
        let num = num.scale(f.inv(lc).unwrap(), f);
        Self::raw(spec, num, den)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Total degree of numerator plus denominator; a size measure for bounded searches.
    pub fn height(&self) -> u32 {
        self.num.total_degree() + self.den.total_degree()
    }

    /// Number of stored terms.
    pub fn weight(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.spec.gf;
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::raw(&self.spec, self.num.add(&o.num), Poly::one());
            }
            return Self::reduced(&self.spec, self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return Self::raw(&self.spec, self.num.mul(&o.den, f).add(&o.num), o.den.clone());
        }
        if o.den.is_one() {
            return Self::raw(&self.spec, o.num.mul(&self.den, f).add(&self.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den, f);
        if g.is_one() {
            let num = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f));
            if num.is_zero() {
                return Self::zero(&self.spec);
            }
            return Self::raw(&self.spec, num, self.den.mul(&o.den, f));
        }
        let b1 = self.den.exact_div(&g, f).unwrap();
        let d1 = o.den.exact_div(&g, f).unwrap();
        let t = self.num.mul(&d1, f).add(&o.num.mul(&b1, f));
        if t.is_zero() {
            return Self::zero(&self.spec);
        }
        let den = self.den.mul(&d1, f);
        let h = t.gcd(&g, f);
        if h.is_one() {
            Self::raw(&self.spec, t, den)
        } else {
            Self::raw(&self.spec, t.exact_div(&h, f).unwrap(), den.exact_div(&h, f).unwrap())
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.spec.gf;
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.spec);
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::raw(&self.spec, self.num.mul(&o.num, f), Poly::one());
        }
        let g1 = self.num.gcd(&o.den, f);
        let g2 = o.num.gcd(&self.den, f);
        let div = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.exact_div(g, f).unwrap() };
        let num = div(&self.num, &g1).mul(&div(&o.num, &g2), f);
        let den = div(&self.den, &g2).mul(&div(&o.den, &g1), f);
        if den.is_constant() {
            return Self::reduced(&self.spec, num, den);
        }
        Self::raw(&self.spec, num, den)
    }

    pub fn scale(&self, c: Coef) -> Self {
        if c == 0 {
            return Self::zero(&self.spec);
        }
        Self::raw(&self.spec, self.num.scale(c, &self.spec.gf), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let f = &self.spec.gf;
        let (num_monic, lc) = self.num.monic(f);
        let new_num = self.den.scale(f.inv(lc).unwrap(), f);
        Ok(Self::raw(&self.spec, new_num, num_monic))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self, FieldError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut k = k as u64;
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    /// Frobenius; the square of a reduced fraction stays reduced.
    pub fn square(&self) -> Self {
        let f = &self.spec.gf;
        Self::raw(&self.spec, self.num.square(f), self.den.square(f))
    }

    /// a^(2^n).
    pub fn frobenius_pow(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |a, _| a.square())
    }

    pub fn sqrt(&self) -> Option<Self> {
        let f = &self.spec.gf;
        let n = self.num.sqrt(f)?;
        let d = self.den.sqrt(f)?;
        Some(Self::raw(&self.spec, n, d))
    }

    pub fn is_square(&self) -> bool {
        self.num.terms().iter().all(|t| t.0.odd_mask() == 0)
            && self.den.terms().iter().all(|t| t.0.odd_mask() == 0)
    }

    /// a = P/Q = PQ/Q^2; the parity split of PQ gives the roots over Q.
    pub fn square_decomp(&self) -> SquareDecomp {
        let f = &self.spec.gf;
        let n = self.spec.basis_size();
        let mut parts = vec![Self::zero(&self.spec); n];
        if self.den.is_one() {
            for (mask, root) in self.num.parity_split(f) {
                parts[mask as usize] = Self::raw(&self.spec, root, Poly::one());
            }
        } else {
            let pq = self.num.mul(&self.den, f);
            for (mask, root) in pq.parity_split(f) {
                parts[mask as usize] = Self::reduced(&self.spec, root, self.den.clone());
            }
        }
        SquareDecomp { parts }
    }

    /// Normal form of the class in k/S: drop the square part.
    pub fn mod_squares(&self) -> Self {
        if self.den.is_one() {
            let terms: Vec<_> = self.num.terms().iter().copied().filter(|t| t.0.odd_mask() != 0).collect();
            return Self::raw(&self.spec, Poly::from_sorted(terms), Poly::one());
        }
        let s0 = self.square_decomp().parts.swap_remove(0);
        self.add(&s0.square())
    }

    pub fn parse(text: &str, spec: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        Parser::new(text, spec).parse()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.spec.format_poly(&self.num);
        if self.den.is_one() {
            write!(f, "({n})")
        } else {
            write!(f, "({n})/({})", self.spec.format_poly(&self.den))
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                $body(self, o)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                $body(&self, &o)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                $body(&self, o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &FieldElem, b: &FieldElem| a.add(b));
forward_binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| a.add(b));
forward_binop!(Mul, mul, |a: &FieldElem, b: &FieldElem| a.mul(b));
forward_binop!(Div, div, |a: &FieldElem, b: &FieldElem| a.checked_div(b).expect("division by zero"));

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.clone()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: &'a Arc<FieldSpec>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, spec: &'a Arc<FieldSpec>) -> Self {
        Parser { src: text.as_bytes(), pos: 0, spec }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FieldError> {
        Err(FieldError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<FieldElem, FieldError> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let v = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<FieldElem, FieldError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            let _ = c;
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElem, FieldError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = acc.mul(&r);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let r = self.unary()?;
                    acc = acc.checked_div(&r).map_err(|_| FieldError::DivisionByZeroAt { pos: at })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem, FieldError> {
        match self.peek() {
            Some(b'-') | Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElem, FieldError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let k = self.integer()?;
        let k = i64::try_from(k).or_else(|_| self.err("exponent too large"))?;
        base.pow(if neg { -k } else { k }).map_err(|_| FieldError::DivisionByZeroAt { pos: at })
    }

    fn integer(&mut self) -> Result<u128, FieldError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u128>().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn atom(&mut self) -> Result<FieldElem, FieldError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                // Integers are read modulo 2; only the last digit matters.
                let n = self.integer_digits_parity();
                Ok(if n { FieldElem::one(self.spec) } else { FieldElem::zero(self.spec) })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "g" {
                    return Ok(FieldElem::constant(self.spec, self.spec.gf.gen_pow(1)));
                }
                match self.spec.names.iter().position(|n| n == name) {
                    Some(i) => Ok(FieldElem::var(self.spec, i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer_digits_parity(&mut self) -> bool {
        let mut last = b'0';
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            last = self.src[self.pos];
            self.pos += 1;
        }
        (last - b'0') % 2 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, spec: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, spec).unwrap()
    }

    #[test]
    fn parse_examples() {
        let k = FieldSpec::f2t();
        let a = el("t^3+1", &k);
        assert_eq!(a.to_string(), "(t^3+1)");
        assert!(el("(t+1)/(t+1)", &k).is_one());
        assert!(matches!(FieldElem::parse("1/0", &k), Err(FieldError::DivisionByZeroAt { pos: 2 })));
        assert!(matches!(FieldElem::parse("t+*", &k), Err(FieldError::Syntax { pos: 2, .. })));
        assert!(matches!(FieldElem::parse("q", &k), Err(FieldError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        assert!((&t + &t).is_zero());
        assert!((&t * &t.inv().unwrap()).is_one());
        assert_eq!(el("t+1", &k).pow(2).unwrap(), el("t^2+1", &k));
        assert_eq!(el("1/t + 1/(t+1)", &k), el("1/(t^2+t)", &k));
    }

    #[test]
    fn sqrt_examples() {
        let k = FieldSpec::f2t();
        assert_eq!(el("t^2+t^4", &k).sqrt().unwrap(), el("t+t^2", &k));
        assert!(el("t", &k).sqrt().is_none());
        let k4 = FieldSpec::new(4, 1, None, None).unwrap();
        let f = k4.gf();
        for c in 1..16u16 {
            let r = FieldElem::constant(&k4, c).sqrt().unwrap();
            assert_eq!(r, FieldElem::constant(&k4, f.pow(c, 8)));
        }
    }

    #[test]
    fn square_decomp_examples() {
        let k = FieldSpec::f2t();
        let d = el("t^3+1", &k).square_decomp();
        assert_eq!(d.get(0), &el("1", &k));
        assert_eq!(d.get(1), &el("t", &k));
        let d = el("1/t", &k).square_decomp();
        assert!(d.get(0).is_zero());
        assert_eq!(d.get(1), &el("1/t", &k));
        let k2 = FieldSpec::f2tu();
        let d = el("t*u+1", &k2).square_decomp();
        assert_eq!(d.get(0), &el("1", &k2));
        assert_eq!(d.get(0b11), &el("1", &k2));
        assert!(d.get(0b01).is_zero() && d.get(0b10).is_zero());
    }

    #[test]
    fn mod_squares_examples() {
        let k = FieldSpec::f2t();
        assert!(el("t^2", &k).mod_squares().is_zero());
        assert_eq!(el("t^3+1", &k).mod_squares(), el("t^3", &k));
        assert_eq!(el("t", &k).mod_squares(), el("t", &k));
        let a = el("(t^3+t)/(t^2+t+1)", &k);
        assert_eq!(a.mod_squares(), (&a + &a.square_decomp().get(0).square()));
    }

    #[test]
    fn printing_with_constants() {
        let k = FieldSpec::new(3, 2, None, None).unwrap();
        let a = el("g^3*t*u + g*u^2 + g^0", &k);
        assert_eq!(a.to_string(), "(g^3*t*u+g*u^2+1)");
        assert_eq!(el(&a.to_string(), &k), a);
        let b = el("1/(g*t+1)", &k);
        assert_eq!(b.to_string(), "(g^6)/(t+g^6)");
        assert_eq!(el(&b.to_string(), &k), b);
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets_ordered(3), vec![0, 1, 2, 4, 3, 5, 6, 7]);
        // {1,4} precedes {2,3} lexicographically
        assert_eq!(subset_cmp(0b1001, 0b0110), Ordering::Less);
    }
}
