//! The pullback model of π_0 TRR^{n+1}(k;2)^{φZ/2}.
//!
//! An element of level n ≥ 1 is a pair (x, y) of tensors; level 0 is k ⊗_S k
//! itself, stored as the pair (x, w x) so that every operator has one formula:
//!
//! * R(x, y) = (φ⁻¹π x, φ⁻¹π y)
//! * F(x, y) = (x, x)
//! * V(x, y) = (x + y, 0)
//! * σ(x, y) = (y, x)
//!
//! Elements may carry a formal presentation over generator symbols; the
//! restriction to W(k)/2 is evaluated on it.

use crate::field::{FieldElem, FieldSpec, SubsetIndex};
use crate::tensor::{phi_power, TensorElem};
use crate::witt::{WittError, WittMod2, WittVec, MAX_LEVEL};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrrError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("restriction R is undefined at level 0")]
    RAtLevelZero,
    #[error("Frobenius F is undefined at level 0")]
    FAtLevelZero,
    #[error("level {0} exceeds the cap")]
    LevelCap(u32),
    #[error("no formal presentation; restriction to Witt vectors is not evaluated on bare pairs")]
    MissingFormal,
    #[error("malformed generator symbol: {0}")]
    BadSymbol(String),
    #[error("pullback invariant violated: {0}")]
    Invariant(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Witt(#[from] WittError),
}

/// x is fixed and so is each (φ⁻¹π)^j(x), 1 ≤ j ≤ n.
pub fn phi_power_subgroup_test(x: &TensorElem, n: u32) -> bool {
    let mut cur = x.clone();
    for j in 0..=n {
        if !cur.is_fixed() {
            return false;
        }
        if j < n {
            cur = cur.phi_inv_pi();
        }
    }
    true
}

pub fn phi_inv_pi_iter(x: &TensorElem, n: u32) -> TensorElem {
    (0..n).fold(x.clone(), |c, _| c.phi_inv_pi())
}

/// A pair of tensors; at level 0 the second entry is w of the first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pair {
    pub x: TensorElem,
    pub y: TensorElem,
}

impl Pair {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Pair { x: TensorElem::zero(spec), y: TensorElem::zero(spec) }
    }

    pub fn level0(x: TensorElem) -> Self {
        let y = x.w();
        Pair { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Pair { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Pair { x: &self.x * &o.x, y: &self.y * &o.y }
    }

    pub fn r(&self) -> Self {
        Pair { x: self.x.phi_inv_pi(), y: self.y.phi_inv_pi() }
    }

    pub fn f(&self) -> Self {
        Pair { x: self.x.clone(), y: self.x.clone() }
    }

    pub fn v(&self) -> Self {
        Pair { x: &self.x + &self.y, y: TensorElem::zero(self.x.spec()) }
    }

    pub fn sigma(&self) -> Self {
        Pair { x: self.y.clone(), y: self.x.clone() }
    }

    /// Membership in the level-n model.
    pub fn check(&self, level: u32) -> Result<(), TrrError> {
        if level == 0 {
            if self.y != self.x.w() {
                return Err(TrrError::Invariant("level 0 pair is not (x, w x)".into()));
            }
            return Ok(());
        }
        for (name, z) in [("x", &self.x), ("y", &self.y)] {
            if !phi_power_subgroup_test(z, level - 1) {
                return Err(TrrError::Invariant(format!("{name} fails the φ^{} subgroup test", level - 1)));
            }
        }
        if phi_inv_pi_iter(&self.x, level) != phi_inv_pi_iter(&self.y, level).w() {
            return Err(TrrError::Invariant("pullback condition fails".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!([self.x.to_json(), self.y.to_json()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenTag {
    Tau,
    VTau,
    SVTau,
}

/// τ_n(a⊗b), V^{n-i}τ_i(a⊗b) or σV^{n-i}τ_i(a⊗b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSymbol {
    pub tag: GenTag,
    pub level: u32,
    pub index: u32,
    pub a: FieldElem,
    pub b: FieldElem,
}

impl GenSymbol {
    pub fn tau(n: u32, a: &FieldElem, b: &FieldElem) -> Self {
        GenSymbol { tag: GenTag::Tau, level: n, index: n, a: a.clone(), b: b.clone() }
    }

    pub fn vtau(n: u32, i: u32, a: &FieldElem, b: &FieldElem) -> Self {
        GenSymbol { tag: GenTag::VTau, level: n, index: i, a: a.clone(), b: b.clone() }
    }

    pub fn svtau(n: u32, i: u32, a: &FieldElem, b: &FieldElem) -> Self {
        GenSymbol { tag: GenTag::SVTau, level: n, index: i, a: a.clone(), b: b.clone() }
    }

    pub fn validate(&self) -> Result<(), TrrError> {
        if self.level as usize > MAX_LEVEL {
            return Err(TrrError::LevelCap(self.level));
        }
        match self.tag {
            GenTag::Tau if self.index != self.level => Err(TrrError::BadSymbol("τ must carry i = n".into())),
            GenTag::VTau | GenTag::SVTau if self.index >= self.level => {
                Err(TrrError::BadSymbol(format!("index {} not below level {}", self.index, self.level)))
            }
            _ => Ok(()),
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.a.spec()
    }

    pub fn value(&self) -> Pair {
        let (a, b) = (&self.a, &self.b);
        match self.tag {
            GenTag::Tau => Pair { x: phi_power(self.level, a, b), y: phi_power(self.level, b, a) },
            GenTag::VTau | GenTag::SVTau => {
                let z = &phi_power(self.index, a, b) + &phi_power(self.index, b, a);
                let zero = TensorElem::zero(self.spec());
                if self.tag == GenTag::VTau {
                    Pair { x: z, y: zero }
                } else {
                    Pair { x: zero, y: z }
                }
            }
        }
    }

    /// τ_n(ab) or V^{n-i}τ_i(ab) as a Witt vector of level n.
    pub fn res(&self) -> WittVec {
        let ab = &self.a * &self.b;
        let mut v = WittVec::zero(self.spec(), self.level as usize);
        let pos = match self.tag {
            GenTag::Tau => 0,
            _ => (self.level - self.index) as usize,
        };
        let mut comps = v.comps().to_vec();
        comps[pos] = ab;
        v = WittVec::new(comps).expect("level within cap");
        v
    }

    fn with_tag(&self, tag: GenTag) -> Self {
        GenSymbol { tag, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let tag = match self.tag {
            GenTag::Tau => "TAU",
            GenTag::VTau => "VTAU",
            GenTag::SVTau => "SVTAU",
        };
        json!({"tag": tag, "n": self.level, "i": self.index, "a": self.a.to_string(), "b": self.b.to_string()})
    }

    pub fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, TrrError> {
        let bad = |m: &str| TrrError::Json(m.to_string());
        let tag = match v["tag"].as_str() {
            Some("TAU") => GenTag::Tau,
            Some("VTAU") => GenTag::VTau,
            Some("SVTAU") => GenTag::SVTau,
            _ => return Err(bad("unknown tag")),
        };
        let num = |k: &str| v[k].as_u64().map(|x| x as u32).ok_or_else(|| bad(k));
        let elem = |k: &str| {
            let s = v[k].as_str().ok_or_else(|| bad(k))?;
            FieldElem::parse(s, spec).map_err(|e| TrrError::Json(e.to_string()))
        };
        let g = GenSymbol { tag, level: num("n")?, index: num("i")?, a: elem("a")?, b: elem("b")? };
        g.validate()?;
        Ok(g)
    }
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, i) = (self.level, self.index);
        match self.tag {
            GenTag::Tau => write!(f, "tau_{n}({} (x) {})", self.a, self.b),
            GenTag::VTau => write!(f, "V^{} tau_{i}({} (x) {})", n - i, self.a, self.b),
            GenTag::SVTau => write!(f, "sigma V^{} tau_{i}({} (x) {})", n - i, self.a, self.b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    R,
    F,
    V,
    Sigma,
}

impl OpKind {
    fn name(self) -> &'static str {
        match self {
            OpKind::R => "R",
            OpKind::F => "F",
            OpKind::V => "V",
            OpKind::Sigma => "sigma",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Gen(GenSymbol),
    /// An operator applied to an expression with no further rewriting rule.
    Op(OpKind, Box<FormalExpr>),
}

impl Atom {
    pub fn level(&self) -> u32 {
        match self {
            Atom::Gen(g) => g.level,
            Atom::Op(k, e) => match k {
                OpKind::V => e.level + 1,
                OpKind::R | OpKind::F => e.level - 1,
                OpKind::Sigma => e.level,
            },
        }
    }

    fn eval(&self) -> Pair {
        match self {
            Atom::Gen(g) => g.value(),
            Atom::Op(k, e) => {
                let p = e.eval();
                match k {
                    OpKind::R => p.r(),
                    OpKind::F => p.f(),
                    OpKind::V => p.v(),
                    OpKind::Sigma => p.sigma(),
                }
            }
        }
    }

    fn res(&self) -> Result<WittVec, TrrError> {
        match self {
            Atom::Gen(g) => Ok(g.res()),
            Atom::Op(k, e) => {
                let r = e.res_vec()?;
                Ok(match k {
                    OpKind::R => r.r()?,
                    OpKind::F => r.f()?,
                    OpKind::V => r.v()?,
                    OpKind::Sigma => r,
                })
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Atom::Gen(g) => g.to_json(),
            Atom::Op(k, e) => json!({"op": k.name(), "arg": e.to_json()}),
        }
    }

    fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, TrrError> {
        if let Some(op) = v.get("op") {
            let k = match op.as_str() {
                Some("R") => OpKind::R,
                Some("F") => OpKind::F,
                Some("V") => OpKind::V,
                Some("sigma") => OpKind::Sigma,
                _ => return Err(TrrError::Json("unknown operator".into())),
            };
            return Ok(Atom::Op(k, Box::new(FormalExpr::from_json(&v["arg"], spec)?)));
        }
        Ok(Atom::Gen(GenSymbol::from_json(v, spec)?))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(g) => write!(f, "{g}"),
            Atom::Op(k, e) => write!(f, "{}({e})", k.name()),
        }
    }
}

/// A formal sum of formal products of atoms, all of one level.
/// The empty product is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalExpr {
    level: u32,
    spec: Arc<FieldSpec>,
    terms: Vec<Vec<Atom>>,
}

impl FormalExpr {
    pub fn zero(spec: &Arc<FieldSpec>, level: u32) -> Self {
        FormalExpr { level, spec: spec.clone(), terms: Vec::new() }
    }

    pub fn one(spec: &Arc<FieldSpec>, level: u32) -> Self {
        FormalExpr { level, spec: spec.clone(), terms: vec![Vec::new()] }
    }

    pub fn atom(a: Atom) -> Self {
        let spec = match &a {
            Atom::Gen(g) => g.spec().clone(),
            Atom::Op(_, e) => e.spec.clone(),
        };
        FormalExpr { level: a.level(), spec, terms: vec![vec![a]] }
    }

    pub fn gen(g: GenSymbol) -> Self {
        Self::atom(Atom::Gen(g))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn terms(&self) -> &[Vec<Atom>] {
        &self.terms
    }

    pub fn is_empty_sum(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self, TrrError> {
        if self.level != o.level {
            return Err(TrrError::LevelMismatch(self.level, o.level));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(FormalExpr { level: self.level, spec: self.spec.clone(), terms })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, TrrError> {
        if self.level != o.level {
            return Err(TrrError::LevelMismatch(self.level, o.level));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for p in &self.terms {
            for q in &o.terms {
                let mut t = p.clone();
                t.extend(q.iter().cloned());
                terms.push(t);
            }
        }
        Ok(FormalExpr { level: self.level, spec: self.spec.clone(), terms })
    }

    fn unit_pair(&self) -> Pair {
        let spec = &self.spec;
        Pair { x: TensorElem::one(spec), y: TensorElem::one(spec) }
    }

    pub fn eval(&self) -> Pair {
        let mut acc = Pair::zero(&self.spec);
        for p in &self.terms {
            let mut v = self.unit_pair();
            for a in p {
                v = v.mul(&a.eval());
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Witt vector representative of the restriction.
    pub fn res_vec(&self) -> Result<WittVec, TrrError> {
        let n = self.level as usize;
        let mut acc = WittVec::zero(&self.spec, n);
        for p in &self.terms {
            let mut v = WittVec::one(&self.spec, n);
            for a in p {
                v = v.mul(&a.res()?)?;
            }
            acc = acc.add(&v)?;
        }
        Ok(acc)
    }

    fn from_products(level: u32, spec: &Arc<FieldSpec>, terms: Vec<Vec<Atom>>) -> Self {
        FormalExpr { level, spec: spec.clone(), terms }
    }

    /// Applies a ring endomorphism-like operator (R, F or σ) factorwise.
    fn apply_hom(&self, k: OpKind, new_level: u32) -> Self {
        let mut out = Self::zero(&self.spec, new_level);
        for p in &self.terms {
            let mut prod = Self::one(&self.spec, new_level);
            for a in p {
                let img = atom_image(a, k, new_level);
                prod = prod.mul(&img).expect("same level");
            }
            out.terms.extend(prod.terms);
        }
        out
    }

    pub fn apply_r(&self) -> Result<Self, TrrError> {
        if self.level == 0 {
            return Err(TrrError::RAtLevelZero);
        }
        Ok(self.apply_hom(OpKind::R, self.level - 1))
    }

    pub fn apply_f(&self) -> Result<Self, TrrError> {
        if self.level == 0 {
            return Err(TrrError::FAtLevelZero);
        }
        Ok(self.apply_hom(OpKind::F, self.level - 1))
    }

    pub fn apply_sigma(&self) -> Self {
        self.apply_hom(OpKind::Sigma, self.level)
    }

    /// V is additive; on a single generator it has a closed rule.
    pub fn apply_v(&self) -> Result<Self, TrrError> {
        let nl = self.level + 1;
        if nl as usize > MAX_LEVEL {
            return Err(TrrError::LevelCap(nl));
        }
        let mut out = Self::zero(&self.spec, nl);
        for p in &self.terms {
            match p.as_slice() {
                [Atom::Gen(g)] => {
                    let img = match g.tag {
                        GenTag::Tau => GenSymbol::vtau(nl, g.level, &g.a, &g.b),
                        _ => GenSymbol::vtau(nl, g.index, &g.a, &g.b),
                    };
                    out.terms.push(vec![Atom::Gen(img)]);
                }
                _ => {
                    let inner = Self::from_products(self.level, &self.spec, vec![p.clone()]);
                    out.terms.push(vec![Atom::Op(OpKind::V, Box::new(inner))]);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "terms": self.terms.iter().map(|p| p.iter().map(|a| a.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, TrrError> {
        let level = v["level"].as_u64().ok_or_else(|| TrrError::Json("level".into()))? as u32;
        let arr = v["terms"].as_array().ok_or_else(|| TrrError::Json("terms".into()))?;
        let mut terms = Vec::new();
        for p in arr {
            let atoms = p.as_array().ok_or_else(|| TrrError::Json("product".into()))?;
            let prod: Vec<Atom> = atoms.iter().map(|a| Atom::from_json(a, spec)).collect::<Result<_, _>>()?;
            if prod.iter().any(|a| a.level() != level) {
                return Err(TrrError::Json("incoherent levels".into()));
            }
            terms.push(prod);
        }
        Ok(FormalExpr { level, spec: spec.clone(), terms })
    }
}

/// Image of one atom under R, F or σ.
fn atom_image(a: &Atom, k: OpKind, new_level: u32) -> FormalExpr {
    let spec = match a {
        Atom::Gen(g) => g.spec().clone(),
        Atom::Op(_, e) => e.spec.clone(),
    };
    let gen = |g: GenSymbol| FormalExpr::gen(g);
    let generic = || FormalExpr::atom(Atom::Op(k, Box::new(FormalExpr::atom(a.clone()))));
    match (a, k) {
        (Atom::Gen(g), OpKind::Sigma) => match g.tag {
            GenTag::Tau => gen(GenSymbol::tau(g.level, &g.b, &g.a)),
            GenTag::VTau => gen(g.with_tag(GenTag::SVTau)),
            GenTag::SVTau => gen(g.with_tag(GenTag::VTau)),
        },
        (Atom::Gen(g), OpKind::R) => match g.tag {
            GenTag::Tau => gen(GenSymbol::tau(new_level, &g.a, &g.b)),
            _ if g.index == 0 => FormalExpr::zero(&spec, new_level),
            _ => gen(GenSymbol { level: new_level, index: g.index - 1, ..g.clone() }),
        },
        (Atom::Gen(g), OpKind::F) => match g.tag {
            // F τ_n(a⊗b) = τ_{n-1}(b a^2 ⊗ b)
            GenTag::Tau => gen(GenSymbol::tau(new_level, &(&g.b * &g.a.square()), &g.b)),
            GenTag::SVTau => FormalExpr::zero(&spec, new_level),
            GenTag::VTau if g.index + 1 == g.level => gen(GenSymbol::tau(new_level, &g.a, &g.b))
                .add(&gen(GenSymbol::tau(new_level, &g.b, &g.a)))
                .unwrap(),
            GenTag::VTau => gen(GenSymbol::vtau(new_level, g.index, &g.a, &g.b))
                .add(&gen(GenSymbol::svtau(new_level, g.index, &g.a, &g.b)))
                .unwrap(),
        },
        (Atom::Op(OpKind::Sigma, e), OpKind::Sigma) => (**e).clone(),
        // RV = VR, Rσ = σR, RF = FR
        (Atom::Op(OpKind::V, e), OpKind::R) => {
            if e.level == 0 {
                FormalExpr::zero(&spec, new_level)
            } else {
                e.apply_r().unwrap().apply_v().unwrap()
            }
        }
        (Atom::Op(OpKind::Sigma, e), OpKind::R) => e.apply_r().unwrap().apply_sigma(),
        (Atom::Op(OpKind::F, e), OpKind::R) => e.apply_r().unwrap().apply_f().unwrap(),
        // FV = 1 + σ
        (Atom::Op(OpKind::V, e), OpKind::F) => (**e).add(&e.apply_sigma()).unwrap(),
        _ => generic(),
    }
}

impl fmt::Display for FormalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|p| {
                if p.is_empty() {
                    "1".to_string()
                } else {
                    p.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" * ")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of the level-n model together with an optional presentation.
#[derive(Clone, Debug)]
pub struct TRRElem {
    level: u32,
    pair: Pair,
    formal: Option<FormalExpr>,
}

impl PartialEq for TRRElem {
    /// Equality is decided by the pair only.
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.pair == o.pair
    }
}

impl TRRElem {
    pub fn zero(spec: &Arc<FieldSpec>, level: u32) -> Self {
        TRRElem { level, pair: Pair::zero(spec), formal: Some(FormalExpr::zero(spec, level)) }
    }

    pub fn one(spec: &Arc<FieldSpec>, level: u32) -> Self {
        let one = FieldElem::one(spec);
        Self::from_formal(FormalExpr::gen(GenSymbol::tau(level, &one, &one)))
    }

    /// Builds a generator and checks the model invariants.
    pub fn generator(g: GenSymbol) -> Result<Self, TrrError> {
        g.validate()?;
        let pair = g.value();
        pair.check(g.level)?;
        Ok(TRRElem { level: g.level, pair, formal: Some(FormalExpr::gen(g)) })
    }

    pub fn from_formal(e: FormalExpr) -> Self {
        TRRElem { level: e.level, pair: e.eval(), formal: Some(e) }
    }

    pub fn from_pair(level: u32, pair: Pair) -> Result<Self, TrrError> {
        pair.check(level)?;
        Ok(TRRElem { level, pair, formal: None })
    }

    pub fn from_tensor(x: TensorElem) -> Self {
        TRRElem { level: 0, pair: Pair::level0(x), formal: None }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn formal(&self) -> Option<&FormalExpr> {
        self.formal.as_ref()
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.pair.x.spec()
    }

    pub fn is_zero(&self) -> bool {
        self.pair.is_zero()
    }

    pub fn check(&self) -> Result<(), TrrError> {
        self.pair.check(self.level)
    }

    pub fn forget_formal(&self) -> Self {
        TRRElem { formal: None, ..self.clone() }
    }

    fn same_level(&self, o: &Self) -> Result<(), TrrError> {
        if self.level != o.level {
            return Err(TrrError::LevelMismatch(self.level, o.level));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, TrrError> {
        self.same_level(o)?;
        let formal = match (&self.formal, &o.formal) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        Ok(TRRElem { level: self.level, pair: self.pair.add(&o.pair), formal })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, TrrError> {
        self.same_level(o)?;
        let formal = match (&self.formal, &o.formal) {
            (Some(a), Some(b)) => Some(a.mul(b)?),
            _ => None,
        };
        Ok(TRRElem { level: self.level, pair: self.pair.mul(&o.pair), formal })
    }

    pub fn map_r(&self) -> Result<Self, TrrError> {
        if self.level == 0 {
            return Err(TrrError::RAtLevelZero);
        }
        let formal = self.formal.as_ref().map(|e| e.apply_r()).transpose()?;
        Ok(TRRElem { level: self.level - 1, pair: self.pair.r(), formal })
    }

    pub fn map_f(&self) -> Result<Self, TrrError> {
        if self.level == 0 {
            return Err(TrrError::FAtLevelZero);
        }
        let formal = self.formal.as_ref().map(|e| e.apply_f()).transpose()?;
        Ok(TRRElem { level: self.level - 1, pair: self.pair.f(), formal })
    }

    pub fn map_v(&self) -> Result<Self, TrrError> {
        let formal = self.formal.as_ref().map(|e| e.apply_v()).transpose()?;
        if self.level as usize >= MAX_LEVEL {
            return Err(TrrError::LevelCap(self.level + 1));
        }
        Ok(TRRElem { level: self.level + 1, pair: self.pair.v(), formal })
    }

    pub fn map_sigma(&self) -> Self {
        TRRElem { level: self.level, pair: self.pair.sigma(), formal: self.formal.as_ref().map(|e| e.apply_sigma()) }
    }

    /// Restriction to W(k)/2 through the formal presentation; at level 0 it is μ.
    pub fn res_to_witt(&self) -> Result<WittMod2, TrrError> {
        if self.level == 0 {
            return Ok(WittVec::new(vec![self.pair.x.mu()])?.to_mod2());
        }
        let e = self.formal.as_ref().ok_or(TrrError::MissingFormal)?;
        Ok(e.res_vec()?.to_mod2())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "pair": self.pair.to_json(),
            "formal": self.formal.as_ref().map(|e| e.to_json()),
        })
    }
}

impl fmt::Display for TRRElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: ({}, {})", self.level, self.pair.x, self.pair.y)?;
        if let Some(e) = &self.formal {
            write!(f, " = {e}")?;
        }
        Ok(())
    }
}

/// N^n(x) = (μ(x)^{2^n} ⊗ 1, μ(x)^{2^n - 2} · x · w(x)).
pub fn norm_pair(n: u32, x: &TensorElem) -> Pair {
    let spec = x.spec();
    let m = x.mu();
    let first = TensorElem::elementary(&m.frobenius_pow(n), &FieldElem::one(spec));
    let second = (x * &x.w()).left_scalar(&m.pow((1i64 << n) - 2).unwrap());
    Pair { x: first, y: second }
}

/// The norm with a formal presentation: τ_n(ab ⊗ 1) on each elementary
/// summand c_ξ ⊗ x^ξ, plus the cross terms σV(z_ξ w(z_η)) at n = 1.
pub fn norm_n(n: u32, x: &TensorElem) -> Result<TRRElem, TrrError> {
    if n == 0 || n as usize > MAX_LEVEL {
        return Err(TrrError::LevelCap(n));
    }
    let spec = x.spec();
    let pair = norm_pair(n, x);
    let summands: Vec<(SubsetIndex, FieldElem)> = x.support().map(|(xi, c)| (xi, c.clone())).collect();
    let one = FieldElem::one(spec);
    let formal = if summands.len() <= 1 || n == 1 {
        let mut e = FormalExpr::zero(spec, n);
        for (xi, c) in &summands {
            let prod = c * &FieldElem::basis_monomial(spec, *xi);
            e = e.add(&FormalExpr::gen(GenSymbol::tau(n, &prod, &one)))?;
        }
        for (i, (xi, c)) in summands.iter().enumerate() {
            for (eta, d) in &summands[i + 1..] {
                // (c ⊗ x^ξ)(x^η ⊗ d) = c x^η ⊗ x^ξ d
                let a = c * &FieldElem::basis_monomial(spec, *eta);
                let b = d * &FieldElem::basis_monomial(spec, *xi);
                e = e.add(&FormalExpr::gen(GenSymbol::svtau(1, 0, &a, &b)))?;
            }
        }
        Some(e)
    } else {
        None
    };
    if let Some(e) = &formal {
        debug_assert_eq!(e.eval(), pair);
    }
    Ok(TRRElem { level: n, pair, formal })
}

/// A generator of the fundamental ideal, tagged by family.
#[derive(Clone, Debug)]
pub struct JGenerator {
    pub family: u8,
    pub index: Option<u32>,
    pub elem: TRRElem,
}

/// Families of additive and module generators of J at level n:
/// 1: τ_n(a⊗b) + τ_n(ab⊗1); 2: V^{n-i}τ_i(a⊗b) + σV^{n-i}τ_i(a⊗b);
/// 3: V^{n-i}τ_i(a⊗b) + V^{n-i}τ_i(ab⊗1); 4: τ_n(1⊗c) + τ_n(c⊗1).
pub fn j_generator_enum(n: u32, params: &[(FieldElem, FieldElem)]) -> Result<Vec<JGenerator>, TrrError> {
    let mut out = Vec::new();
    for (a, b) in params {
        let spec = a.spec();
        let one = FieldElem::one(spec);
        let ab = a * b;
        let g = |s: GenSymbol| FormalExpr::gen(s);
        let mut push = |family: u8, index: Option<u32>, e: FormalExpr| {
            out.push(JGenerator { family, index, elem: TRRElem::from_formal(e) });
        };
        push(1, None, g(GenSymbol::tau(n, a, b)).add(&g(GenSymbol::tau(n, &ab, &one)))?);
        for i in 0..n {
            push(2, Some(i), g(GenSymbol::vtau(n, i, a, b)).add(&g(GenSymbol::svtau(n, i, a, b)))?);
            push(3, Some(i), g(GenSymbol::vtau(n, i, a, b)).add(&g(GenSymbol::vtau(n, i, &ab, &one)))?);
        }
        push(4, None, g(GenSymbol::tau(n, &one, a)).add(&g(GenSymbol::tau(n, a, &one)))?);
    }
    for j in &out {
        let r = j.elem.res_to_witt()?;
        assert!(r.is_zero(), "family {} generator has nonzero restriction {r}", j.family);
    }
    Ok(out)
}

/// Elements of π_* in one degree: summands (n, m) with n + m = degree and
/// n ≠ m, plus the pullback part in even degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct PiStarElem {
    pub degree: u32,
    pub summands: BTreeMap<(u32, u32), TensorElem>,
    pub pullback: Option<TRRElem>,
}

impl PiStarElem {
    pub fn new(
        degree: u32,
        summands: BTreeMap<(u32, u32), TensorElem>,
        pullback: Option<TRRElem>,
    ) -> Result<Self, TrrError> {
        for &(n, m) in summands.keys() {
            if n + m != degree || n == m {
                return Err(TrrError::BadSymbol(format!("summand ({n},{m}) in degree {degree}")));
            }
        }
        if pullback.is_some() && degree % 2 == 1 {
            return Err(TrrError::BadSymbol("pullback part in odd degree".into()));
        }
        Ok(PiStarElem { degree, summands, pullback })
    }

    fn cleaned(mut self) -> Self {
        self.summands.retain(|_, x| !x.is_zero());
        self
    }

    pub fn sigma(&self) -> Self {
        let summands = self.summands.iter().map(|(&(n, m), x)| ((m, n), x.clone())).collect();
        PiStarElem { degree: self.degree, summands, pullback: self.pullback.as_ref().map(|p| p.map_sigma()) }
            .cleaned()
    }

    pub fn r(&self) -> Result<Self, TrrError> {
        let pullback = self.pullback.as_ref().map(|p| p.map_r()).transpose()?;
        Ok(PiStarElem { degree: self.degree, summands: BTreeMap::new(), pullback })
    }

    pub fn f(&self) -> Result<Self, TrrError> {
        let mut summands: BTreeMap<(u32, u32), TensorElem> = BTreeMap::new();
        for (&(n, m), x) in &self.summands {
            if n < m {
                for key in [(n, m), (m, n)] {
                    let cur = summands.remove(&key);
                    summands.insert(key, cur.map_or_else(|| x.clone(), |c| &c + x));
                }
            }
        }
        let pullback = self.pullback.as_ref().map(|p| p.map_f()).transpose()?;
        Ok(PiStarElem { degree: self.degree, summands, pullback }.cleaned())
    }
}

/// Structure of the homotopy groups of TCR(k;2)^{φZ/2} in degrees 2l and 2l - 1.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TcrDescription {
    pub l: u32,
    pub even_degree: u32,
    pub odd_degree: Option<u32>,
    pub even_group: String,
    pub odd_group: Option<String>,
}

pub fn tcr_groups_desc(l: u32) -> TcrDescription {
    TcrDescription {
        l,
        even_degree: 2 * l,
        odd_degree: (l > 0).then(|| 2 * l - 1),
        even_group: "kernel of pi - phi on the fixed points of k (x)_S k (symmetric Witt group)".into(),
        odd_group: (l > 0).then(|| "cokernel of pi - phi into the fixed quotient (quadratic Witt group)".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, k: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, k).unwrap()
    }

    #[test]
    fn generator_values() {
        let k = FieldSpec::f2t();
        let (t, one) = (el("t", &k), el("1", &k));
        let tau = TRRElem::generator(GenSymbol::tau(1, &t, &one)).unwrap();
        assert_eq!(tau.pair().x, TensorElem::elementary(&el("t^2", &k), &one));
        assert_eq!(tau.pair().y, TensorElem::elementary(&t, &t));
        let v = TRRElem::generator(GenSymbol::vtau(1, 0, &t, &one)).unwrap();
        assert_eq!(v.pair().x, TensorElem::delta(&t));
        assert!(v.pair().y.is_zero());
        assert_eq!(tau.map_r().unwrap().pair().x, TensorElem::elementary(&t, &one));
    }

    #[test]
    fn subgroup_test_examples() {
        let k = FieldSpec::f2t();
        let (t, one) = (el("t", &k), el("1", &k));
        assert!(!phi_power_subgroup_test(&TensorElem::elementary(&el("t^2", &k), &one), 1));
        assert!(phi_power_subgroup_test(&phi_power(2, &el("t+1", &k), &t), 1));
        let s = &TensorElem::elementary(&t, &one) + &TensorElem::elementary(&one, &t);
        assert!(phi_power_subgroup_test(&s, 3));
    }

    #[test]
    fn norm_examples() {
        let k = FieldSpec::f2tu();
        let (a, b) = (el("t+u", &k), el("u", &k));
        let n1 = norm_n(1, &TensorElem::elementary(&a, &b)).unwrap();
        let tau = TRRElem::generator(GenSymbol::tau(1, &(&a * &b), &el("1", &k))).unwrap();
        assert_eq!(n1, tau);
        let x = TensorElem::elementary(&a, &b);
        let y = TensorElem::elementary(&el("t", &k), &el("t*u+1", &k));
        let lhs = norm_pair(1, &(&x + &y));
        let cross = Pair::level0(&x * &y.w()).v().sigma();
        assert_eq!(lhs, norm_pair(1, &x).add(&norm_pair(1, &y)).add(&cross));
        assert_eq!(norm_n(1, &(&x + &y)).unwrap().formal().unwrap().eval(), lhs);
        assert!(norm_pair(1, &TensorElem::zero(&k)).is_zero());
    }

    #[test]
    fn res_examples() {
        let k = FieldSpec::f2tu();
        let (t, u, one) = (el("t", &k), el("u", &k), el("1", &k));
        let tau = TRRElem::generator(GenSymbol::tau(1, &t, &one)).unwrap();
        assert_eq!(tau.res_to_witt().unwrap().comps(), &[t.clone(), el("0", &k)]);
        let v = TRRElem::generator(GenSymbol::vtau(1, 0, &t, &u)).unwrap();
        assert_eq!(v.res_to_witt().unwrap().comps(), &[el("0", &k), el("t*u", &k)]);
        assert!(v.add(&v.map_sigma()).unwrap().res_to_witt().unwrap().is_zero());
        assert_eq!(v.forget_formal().res_to_witt(), Err(TrrError::MissingFormal));
    }

    #[test]
    fn j_generators_have_zero_res() {
        let k = FieldSpec::f2tu();
        let params = vec![(el("t", &k), el("t", &k)), (el("t", &k), el("u", &k))];
        for n in 0..=2 {
            let gens = j_generator_enum(n, &params).unwrap();
            for g in gens {
                g.elem.check().unwrap();
            }
        }
        let f2 = j_generator_enum(1, &params[..1]).unwrap();
        assert!(f2.iter().find(|g| g.family == 2).unwrap().elem.is_zero());
    }

    #[test]
    fn pi_star_maps() {
        let k = FieldSpec::f2t();
        let x = TensorElem::unit(&k, 1);
        let e = PiStarElem::new(2, [((0, 2), x.clone())].into(), None).unwrap();
        assert_eq!(e.sigma().summands, [((2, 0), x.clone())].into());
        assert!(e.r().unwrap().summands.is_empty());
        assert_eq!(e.f().unwrap().summands, [((0, 2), x.clone()), ((2, 0), x)].into());
    }
}
