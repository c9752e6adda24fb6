//! Truncated 2-typical Witt vectors over k.
//!
//! The universal sum, product, negation and Frobenius polynomials are derived
//! over the integers from the ghost components and then reduced mod 2 for
//! evaluation in characteristic 2.

use crate::field::{FieldElem, FieldSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Highest supported truncation level.
pub const MAX_LEVEL: usize = 4;

/// Variables a_0..a_4, b_0..b_4, c_0..c_4 (and one spare slot).
pub const NVARS: usize = 16;
pub type Exps = [u16; NVARS];

pub fn var_a(i: usize) -> usize {
    i
}

pub fn var_b(i: usize) -> usize {
    5 + i
}

pub fn var_c(i: usize) -> usize {
    10 + i
}

fn var_name(v: usize) -> String {
    let fam = ["a", "b", "c", "e"][v / 5];
    format!("{fam}{}", v % 5)
}

fn format_monomial(e: &Exps) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { var_name(v) } else { format!("{}^{k}", var_name(v)) })
        .collect();
    parts.join("*")
}

fn degree(e: &Exps) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

/// Printing order: ascending degree, then descending exponent vector.
fn print_order(x: &Exps, y: &Exps) -> std::cmp::Ordering {
    degree(x).cmp(&degree(y)).then_with(|| y.cmp(x))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("truncation level {0} exceeds the cap {MAX_LEVEL}")]
    CapExceeded(usize),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("restriction of a level-0 vector")]
    RestrictLevelZero,
    #[error("Frobenius of a level-0 vector")]
    FrobeniusLevelZero,
}

/// Polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Exps, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Self::zero();
        if c != 0 {
            p.terms.insert([0; NVARS], BigInt::from(c));
        }
        p
    }

    pub fn var(v: usize) -> Self {
        let mut e = [0; NVARS];
        e[v] = 1;
        let mut p = Self::zero();
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigInt)> {
        self.terms.iter()
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

    fn add_term(&mut self, e: Exps, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        IntPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Exps, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        IntPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Division by an integer that must divide every coefficient.
    pub fn exact_div(&self, k: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !(c % k).is_zero() {
                return None;
            }
            terms.insert(*e, c / k);
        }
        Some(IntPoly { terms })
    }

    pub fn to_mod2(&self) -> Gf2MPoly {
        let mut v: Vec<Exps> = self.terms.iter().filter(|(_, c)| c.bit(0)).map(|(e, _)| *e).collect();
        v.sort();
        Gf2MPoly { terms: v }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|x, y| print_order(x.0, y.0));
        for (i, (e, c)) in ts.iter().enumerate() {
            let m = format_monomial(e);
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => "-",
                (_, false) => "+",
            };
            let body = match (m.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => m,
                (false, false) => format!("{mag}*{m}"),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial over F_2, as a sorted set of exponent vectors.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Gf2MPoly {
    terms: Vec<Exps>,
}

impl Gf2MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Gf2MPoly { terms: vec![[0; NVARS]] }
    }

    pub fn var(v: usize) -> Self {
        let mut e = [0; NVARS];
        e[v] = 1;
        Gf2MPoly { terms: vec![e] }
    }

    pub fn terms(&self) -> &[Exps] {
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

    fn from_toggles(set: HashMap<Exps, bool>) -> Self {
        let mut terms: Vec<Exps> = set.into_iter().filter(|(_, b)| *b).map(|(e, _)| e).collect();
        terms.sort();
        Gf2MPoly { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.terms[i].cmp(&o.terms[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(o.terms[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Gf2MPoly { terms: out }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Exps, bool> = HashMap::new();
        for e1 in &self.terms {
            for e2 in &o.terms {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                let slot = acc.entry(e).or_insert(false);
                *slot = !*slot;
            }
        }
        Self::from_toggles(acc)
    }

    /// Termwise squaring (the Frobenius).
    pub fn square(&self) -> Self {
        let mut terms: Vec<Exps> = self.terms.iter().map(|e| e.map(|k| 2 * k)).collect();
        terms.sort();
        Gf2MPoly { terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Every exponent even.
    pub fn is_square(&self) -> bool {
        self.terms.iter().all(|e| e.iter().all(|k| k % 2 == 0))
    }

    /// Simultaneous substitution of variables; `None` keeps the variable.
    pub fn substitute(&self, subs: &[Option<Gf2MPoly>]) -> Self {
        let mut cache: HashMap<(usize, u16), Gf2MPoly> = HashMap::new();
        let mut out = Gf2MPoly::zero();
        for e in &self.terms {
            let mut term = Gf2MPoly::one();
            let mut kept = [0u16; NVARS];
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match subs.get(v).and_then(|s| s.as_ref()) {
                    Some(p) => {
                        let pk = cache.entry((v, k)).or_insert_with(|| p.pow(k as u32)).clone();
                        term = term.mul(&pk);
                    }
                    None => kept[v] = k,
                }
            }
            term = term.mul(&Gf2MPoly { terms: vec![kept] });
            out = out.add(&term);
        }
        out
    }

    /// Evaluation at field elements; unset variables must not occur.
    pub fn eval(&self, vals: &[Option<&FieldElem>], spec: &Arc<FieldSpec>) -> FieldElem {
        let mut powers: HashMap<(usize, u16), FieldElem> = HashMap::new();
        let mut acc = FieldElem::zero(spec);
        'terms: for e in &self.terms {
            let mut t = FieldElem::one(spec);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let x = vals[v].expect("variable without a value");
                if x.is_zero() {
                    continue 'terms;
                }
                let p = powers.entry((v, k)).or_insert_with(|| x.pow(k as i64).unwrap());
                t = &t * &*p;
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl fmt::Display for Gf2MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<&Exps> = self.terms.iter().collect();
        ts.sort_by(|x, y| print_order(x, y));
        let parts: Vec<String> =
            ts.iter().map(|e| if degree(e) == 0 { "1".to_string() } else { format_monomial(e) }).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for Gf2MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Σ_{i≤m} 2^i x_i^{2^{m-i}} for the given component polynomials.
pub fn ghost(comps: &[IntPoly], m: usize) -> IntPoly {
    let mut acc = IntPoly::zero();
    for (i, c) in comps.iter().enumerate().take(m + 1) {
        acc = acc.add(&c.pow(1 << (m - i)).scale(&(BigInt::one() << i)));
    }
    acc
}

fn a_vars(m: usize) -> Vec<IntPoly> {
    (0..=m).map(|i| IntPoly::var(var_a(i))).collect()
}

fn b_vars(m: usize) -> Vec<IntPoly> {
    (0..=m).map(|i| IntPoly::var(var_b(i))).collect()
}

/// Universal polynomials for the m-th component.
#[derive(Debug)]
pub struct Component {
    pub sum: IntPoly,
    pub prod: IntPoly,
    pub neg: IntPoly,
    /// Needs a_{m+1}; absent for m = MAX_LEVEL.
    pub frob: Option<IntPoly>,
    pub sum2: Gf2MPoly,
    pub prod2: Gf2MPoly,
    pub neg2: Gf2MPoly,
    pub frob2: Option<Gf2MPoly>,
}

static COMPONENTS: [OnceLock<Component>; MAX_LEVEL + 1] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Solves ghost_m(X) = target for X_m given X_0..X_{m-1}.
fn solve_component(prev: &[&IntPoly], target: IntPoly, m: usize) -> IntPoly {
    let mut rest = target;
    for (i, p) in prev.iter().enumerate() {
        rest = rest.sub(&p.pow(1 << (m - i)).scale(&(BigInt::one() << i)));
    }
    rest.exact_div(&(BigInt::one() << m)).expect("ghost solve is not integral")
}

pub fn component(m: usize) -> Result<&'static Component, WittError> {
    if m > MAX_LEVEL {
        return Err(WittError::CapExceeded(m));
    }
    Ok(COMPONENTS[m].get_or_init(|| {
        let prev: Vec<&Component> = (0..m).map(|i| component(i).unwrap()).collect();
        let (a, b) = (a_vars(m + 1), b_vars(m));
        let pick = |f: fn(&Component) -> &IntPoly| prev.iter().map(|c| f(c)).collect::<Vec<_>>();
        let sum = solve_component(&pick(|c| &c.sum), ghost(&a, m).add(&ghost(&b, m)), m);
        let prod = solve_component(&pick(|c| &c.prod), ghost(&a, m).mul(&ghost(&b, m)), m);
        let neg = solve_component(&pick(|c| &c.neg), ghost(&a, m).neg(), m);
        let frob = (m < MAX_LEVEL).then(|| {
            let fp: Vec<&IntPoly> = prev.iter().map(|c| c.frob.as_ref().unwrap()).collect();
            solve_component(&fp, ghost(&a, m + 1), m)
        });
        Component {
            sum2: sum.to_mod2(),
            prod2: prod.to_mod2(),
            neg2: neg.to_mod2(),
            frob2: frob.as_ref().map(|f| f.to_mod2()),
            sum,
            prod,
            neg,
            frob,
        }
    }))
}

/// The universal polynomials S_0..S_n and P_0..P_n.
pub fn derive_witt_polys(n: usize) -> Result<(Vec<IntPoly>, Vec<IntPoly>), WittError> {
    if n > MAX_LEVEL {
        return Err(WittError::CapExceeded(n));
    }
    let cs: Vec<&Component> = (0..=n).map(component).collect::<Result<_, _>>()?;
    Ok((cs.iter().map(|c| c.sum.clone()).collect(), cs.iter().map(|c| c.prod.clone()).collect()))
}

/// Checks the ghost relations symbolically for component m.
pub fn ghost_identities_hold(m: usize) -> Result<bool, WittError> {
    let cs: Vec<&Component> = (0..=m).map(component).collect::<Result<_, _>>()?;
    let (a, b) = (a_vars(m + 1), b_vars(m));
    let get = |f: fn(&Component) -> &IntPoly| cs.iter().map(|c| f(c).clone()).collect::<Vec<_>>();
    let mut ok = ghost(&get(|c| &c.sum), m) == ghost(&a, m).add(&ghost(&b, m))
        && ghost(&get(|c| &c.prod), m) == ghost(&a, m).mul(&ghost(&b, m))
        && ghost(&get(|c| &c.neg), m) == ghost(&a, m).neg();
    if m < MAX_LEVEL {
        let fr: Vec<IntPoly> = cs.iter().map(|c| c.frob.clone().unwrap()).collect();
        ok &= ghost(&fr, m) == ghost(&a, m + 1);
    }
    Ok(ok)
}

fn substitute_family(p: &Gf2MPoly, fam: fn(usize) -> usize, comps: &[Gf2MPoly], n: usize) -> Gf2MPoly {
    let mut subs: Vec<Option<Gf2MPoly>> = vec![None; NVARS];
    for i in 0..=n.min(MAX_LEVEL) {
        subs[fam(i)] = Some(comps.get(i).cloned().unwrap_or_default());
    }
    p.substitute(&subs)
}

/// Mod-2 symbolic checks behind the normal form of W(k)/2:
/// 2x = (0, a_0^2, ..., a_{n-1}^2), so 2W is the set of vectors (0, c_1^2, ..., c_n^2);
/// adding a vector whose first nonzero entry sits at index m leaves the
/// components below m alone and adds at index m; and F is componentwise squaring.
/// Together these make the sequential reduction in [`WittVec::to_mod2`] a
/// canonical representative of x + 2W.
pub fn verify_mod2_normal_form(n: usize) -> Result<(), String> {
    if n > 3 {
        return Err(format!("level {n} outside the verified range"));
    }
    let cs: Vec<&Component> = (0..=n).map(|m| component(m).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let a: Vec<Gf2MPoly> = (0..=n).map(|i| Gf2MPoly::var(var_a(i))).collect();
    let b: Vec<Gf2MPoly> = (0..=n).map(|i| Gf2MPoly::var(var_b(i))).collect();

    // 2 = (1,0,...) + (1,0,...)
    let one: Vec<Gf2MPoly> = (0..=n).map(|i| if i == 0 { Gf2MPoly::one() } else { Gf2MPoly::zero() }).collect();
    let two: Vec<Gf2MPoly> = cs
        .iter()
        .enumerate()
        .map(|(m, comp)| substitute_family(&substitute_family(&comp.sum2, var_a, &one, m), var_b, &one, m))
        .collect();
    for (m, comp) in cs.iter().enumerate() {
        let v = substitute_family(&comp.prod2, var_a, &two, m);
        let v = substitute_family(&v, var_b, &a, m);
        let expected = if m == 0 { Gf2MPoly::zero() } else { a[m - 1].square() };
        if v != expected {
            return Err(format!("2x component {m}: got {v}, expected {expected}"));
        }
    }

    // x + y with y_0 = ... = y_{j-1} = 0
    for j in 1..=n {
        let y: Vec<Gf2MPoly> = (0..=n).map(|i| if i < j { Gf2MPoly::zero() } else { b[i].clone() }).collect();
        for (m, comp) in cs.iter().enumerate().take(j + 1) {
            let v = substitute_family(&comp.sum2, var_b, &y, m);
            let expected = if m < j { a[m].clone() } else { a[m].add(&b[m]) };
            if v != expected {
                return Err(format!("shift by index {j}, component {m}: got {v}"));
            }
        }
    }

    for (m, comp) in cs.iter().enumerate() {
        if let Some(f2) = &comp.frob2 {
            if *f2 != a[m].square() {
                return Err(format!("F component {m} mod 2 is {f2}"));
            }
        }
    }
    Ok(())
}

/// The change in component m when (0, c_1^2, ..., c_n^2) is added, modulo
/// squares. Nonzero values show that reducing each component mod S
/// separately is not invariant on cosets of 2W.
pub fn componentwise_obstruction(n: usize, m: usize) -> Result<Gf2MPoly, WittError> {
    let comp = component(m)?;
    let shift: Vec<Gf2MPoly> =
        (0..=n).map(|i| if i == 0 { Gf2MPoly::zero() } else { Gf2MPoly::var(var_c(i)).square() }).collect();
    let v = substitute_family(&comp.sum2, var_b, &shift, m).add(&Gf2MPoly::var(var_a(m)));
    Ok(Gf2MPoly { terms: v.terms.into_iter().filter(|e| e.iter().any(|k| k % 2 == 1)).collect() })
}

/// A Witt vector (a_0, ..., a_n) of level n over k.
#[derive(Clone, PartialEq, Eq)]
pub struct WittVec {
    comps: Vec<FieldElem>,
}

impl WittVec {
    pub fn new(comps: Vec<FieldElem>) -> Result<Self, WittError> {
        assert!(!comps.is_empty());
        if comps.len() > MAX_LEVEL + 1 {
            return Err(WittError::CapExceeded(comps.len() - 1));
        }
        Ok(WittVec { comps })
    }

    pub fn zero(spec: &Arc<FieldSpec>, n: usize) -> Self {
        WittVec { comps: vec![FieldElem::zero(spec); n + 1] }
    }

    pub fn one(spec: &Arc<FieldSpec>, n: usize) -> Self {
        Self::teichmuller(&FieldElem::one(spec), n)
    }

    /// τ_n(a) = (a, 0, ..., 0).
    pub fn teichmuller(a: &FieldElem, n: usize) -> Self {
        let mut comps = vec![FieldElem::zero(a.spec()); n + 1];
        comps[0] = a.clone();
        WittVec { comps }
    }

    /// The integer m as a Witt vector.
    pub fn integer(spec: &Arc<FieldSpec>, n: usize, m: u32) -> Self {
        let one = Self::one(spec, n);
        (0..m).fold(Self::zero(spec, n), |acc, _| acc.add(&one).unwrap())
    }

    pub fn level(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comps(&self) -> &[FieldElem] {
        &self.comps
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.comps[0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn binary(&self, o: &Self, pick: fn(&Component) -> &Gf2MPoly) -> Result<Self, WittError> {
        if self.level() != o.level() {
            return Err(WittError::LevelMismatch(self.level(), o.level()));
        }
        let n = self.level();
        let mut vals: Vec<Option<&FieldElem>> = vec![None; NVARS];
        for i in 0..=n {
            vals[var_a(i)] = Some(&self.comps[i]);
            vals[var_b(i)] = Some(&o.comps[i]);
        }
        let spec = self.spec();
        let comps = (0..=n).map(|m| pick(component(m).unwrap()).eval(&vals, spec)).collect();
        Ok(WittVec { comps })
    }

    pub fn add(&self, o: &Self) -> Result<Self, WittError> {
        self.binary(o, |c| &c.sum2)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, WittError> {
        self.binary(o, |c| &c.prod2)
    }

    pub fn neg(&self) -> Self {
        let mut vals: Vec<Option<&FieldElem>> = vec![None; NVARS];
        for (i, c) in self.comps.iter().enumerate() {
            vals[var_a(i)] = Some(c);
        }
        let spec = self.spec();
        let comps = (0..=self.level()).map(|m| component(m).unwrap().neg2.eval(&vals, spec)).collect();
        WittVec { comps }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, WittError> {
        self.add(&o.neg())
    }

    /// V raises the level: (0, a_0, ..., a_n).
    pub fn v(&self) -> Result<Self, WittError> {
        if self.level() >= MAX_LEVEL {
            return Err(WittError::CapExceeded(self.level() + 1));
        }
        let mut comps = vec![FieldElem::zero(self.spec())];
        comps.extend(self.comps.iter().cloned());
        Ok(WittVec { comps })
    }

    /// R drops the last component.
    pub fn r(&self) -> Result<Self, WittError> {
        if self.level() == 0 {
            return Err(WittError::RestrictLevelZero);
        }
        Ok(WittVec { comps: self.comps[..self.level()].to_vec() })
    }

    /// F lowers the level, through the universal Frobenius polynomials.
    pub fn f(&self) -> Result<Self, WittError> {
        if self.level() == 0 {
            return Err(WittError::FrobeniusLevelZero);
        }
        let mut vals: Vec<Option<&FieldElem>> = vec![None; NVARS];
        for (i, c) in self.comps.iter().enumerate() {
            vals[var_a(i)] = Some(c);
        }
        let spec = self.spec();
        let comps =
            (0..self.level()).map(|m| component(m).unwrap().frob2.as_ref().unwrap().eval(&vals, spec)).collect();
        Ok(WittVec { comps })
    }

    /// Reduced representative of x + 2W: for i = 1..n in turn, add
    /// V^i τ(s^2) where s^2 is the square part of the current i-th component.
    pub fn to_mod2(&self) -> WittMod2 {
        let n = self.level();
        let mut x = self.clone();
        for i in 1..=n {
            let s0 = x.comps[i].square_decomp().into_parts().swap_remove(0);
            if s0.is_zero() {
                continue;
            }
            if i == n {
                x.comps[i] = x.comps[i].mod_squares();
                continue;
            }
            let mut e = WittVec::zero(self.spec(), n);
            e.comps[i] = s0.square();
            x = x.add(&e).expect("same level");
            debug_assert!(x.comps[i].square_decomp().get(0).is_zero());
        }
        WittMod2 { comps: x.comps }
    }

    pub fn mod2_equal(&self, o: &Self) -> bool {
        self.to_mod2() == o.to_mod2()
    }
}

impl fmt::Display for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// (a_0, [a_1], ..., [a_n]) in W(k)/2, the classes taken in k/S.
#[derive(Clone, PartialEq, Eq)]
pub struct WittMod2 {
    comps: Vec<FieldElem>,
}

impl WittMod2 {
    pub fn zero(spec: &Arc<FieldSpec>, n: usize) -> Self {
        WittVec::zero(spec, n).to_mod2()
    }

    pub fn level(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comps(&self) -> &[FieldElem] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// The normal form itself is a valid representative.
    pub fn representative(&self) -> WittVec {
        WittVec { comps: self.comps.clone() }
    }

    pub fn add(&self, o: &Self) -> Result<Self, WittError> {
        Ok(self.representative().add(&o.representative())?.to_mod2())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, WittError> {
        Ok(self.representative().mul(&o.representative())?.to_mod2())
    }
}

impl fmt::Display for WittMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.to_string() } else { format!("[{c}]") })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for WittMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_polys() {
        let (s, p) = derive_witt_polys(1).unwrap();
        assert_eq!(s[0].to_string(), "a0+b0");
        assert_eq!(p[0].to_string(), "a0*b0");
        assert_eq!(s[1].to_string(), "a1+b1-a0*b0");
        assert_eq!(s[1].to_mod2().to_string(), "a1+b1+a0*b0");
    }

    #[test]
    fn ghost_and_mod2_checks() {
        for m in 0..=3 {
            assert!(ghost_identities_hold(m).unwrap(), "m = {m}");
        }
        for n in 0..=3 {
            verify_mod2_normal_form(n).unwrap();
        }
    }

    #[test]
    fn componentwise_reduction_is_not_invariant() {
        assert!(componentwise_obstruction(1, 1).unwrap().is_zero());
        assert_eq!(componentwise_obstruction(2, 2).unwrap().to_string(), "a1*c1^2");
    }

    #[test]
    fn small_vectors() {
        let k = FieldSpec::f2t();
        let p = |s: &str| FieldElem::parse(s, &k).unwrap();
        let one = WittVec::one(&k, 1);
        assert_eq!(one.add(&one).unwrap().comps(), &[p("0"), p("1")]);
        let x = WittVec::new(vec![p("t"), p("t^3+1")]).unwrap();
        assert_eq!(x.to_mod2().comps(), &[p("t"), p("t^3")]);
        let two = WittVec::integer(&k, 1, 2);
        assert_eq!(two.mul(&x).unwrap().comps(), &[p("0"), p("t^2")]);
        assert_eq!(x.f().unwrap().comps(), &[p("t^2")]);
        assert_eq!(WittVec::teichmuller(&p("t"), 0).v().unwrap().comps(), &[p("0"), p("t")]);
    }
}
