//! The graded object J^*/J^{*+1} with d = 1 + σ.
//!
//! Membership in J^q at levels n ≥ 1 is witnessed by certificates: sums of
//! products `cofactor · g_1 ⋯ g_q` whose factors are checked to lie in J.
//! Level 0 membership is decided exactly through Δ-coordinates.

use crate::derham::{DiffForm, FormError};
use crate::field::{popcount, subset_elements, FieldElem, FieldSpec, SubsetIndex};
use crate::linalg::{solve_f2_system, BitMatrix};
use crate::poly::Monomial;
use crate::random::{self, ElemParams, Rng8};
use crate::tensor::TensorElem;
use crate::trr::{FormalExpr, GenSymbol, Pair, TRRElem, TrrError};
use crate::witt::{WittVec, MAX_LEVEL};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error(transparent)]
    Trr(#[from] TrrError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("term {0} has {1} ideal factors, {2} required")]
    TooFewFactors(usize, usize, u32),
    #[error("factor {1} of term {0} is not in J")]
    FactorNotInJ(usize, usize),
    #[error("level mismatch in term {0}")]
    Level(usize),
    #[error("certificate does not evaluate to the element")]
    Mismatch,
    #[error("no rewriting rule applies: {0}")]
    NoRule(String),
    #[error("missing certificate")]
    MissingCertificate,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("incoherent degrees: {0}")]
    Degree(String),
    #[error("malformed certificate JSON: {0}")]
    Json(String),
}

/// A factor lying in J.
#[derive(Clone, Debug, PartialEq)]
pub enum JFactor {
    /// z + σz; always σ-fixed with zero restriction.
    Trace(FormalExpr),
    /// Anything with zero restriction; checked on validation.
    General(FormalExpr),
}

impl JFactor {
    /// V^{n-i}τ_i(a⊗b) + σV^{n-i}τ_i(a⊗b); for i = n this is τ_n(a⊗b) + τ_n(b⊗a).
    pub fn fixed(n: u32, i: u32, a: &FieldElem, b: &FieldElem) -> Self {
        let g = if i == n { GenSymbol::tau(n, a, b) } else { GenSymbol::vtau(n, i, a, b) };
        JFactor::Trace(FormalExpr::gen(g))
    }

    /// dλτ_n(a) = τ_n(a⊗1) + τ_n(1⊗a).
    pub fn d_tau(n: u32, a: &FieldElem) -> Self {
        Self::fixed(n, n, a, &FieldElem::one(a.spec()))
    }

    pub fn level(&self) -> u32 {
        match self {
            JFactor::Trace(z) | JFactor::General(z) => z.level(),
        }
    }

    pub fn formal(&self) -> FormalExpr {
        match self {
            JFactor::Trace(z) => z.add(&z.apply_sigma()).expect("same level"),
            JFactor::General(g) => g.clone(),
        }
    }

    pub fn value(&self) -> Pair {
        match self {
            JFactor::Trace(z) => {
                let p = z.eval();
                p.add(&p.sigma())
            }
            JFactor::General(g) => g.eval(),
        }
    }

    fn in_j(&self) -> Result<bool, ComplexError> {
        match self {
            JFactor::Trace(_) => Ok(true),
            JFactor::General(g) => Ok(TRRElem::from_formal(g.clone()).res_to_witt()?.is_zero()),
        }
    }

    fn is_fixed(&self) -> bool {
        match self {
            JFactor::Trace(_) => true,
            JFactor::General(g) => {
                let p = g.eval();
                p.sigma() == p
            }
        }
    }

    fn r(&self) -> Result<Self, ComplexError> {
        Ok(match self {
            JFactor::Trace(z) => JFactor::Trace(z.apply_r()?),
            JFactor::General(g) => JFactor::General(g.apply_r()?),
        })
    }

    fn f(&self) -> Result<Self, ComplexError> {
        Ok(match self {
            JFactor::Trace(z) => JFactor::General(z.apply_f()?.add(&z.apply_sigma().apply_f()?)?),
            JFactor::General(g) => JFactor::General(g.apply_f()?),
        })
    }

    fn sigma(&self) -> Self {
        match self {
            JFactor::Trace(_) => self.clone(),
            JFactor::General(g) => JFactor::General(g.apply_sigma()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            JFactor::Trace(z) => json!({"kind": "trace", "expr": z.to_json()}),
            JFactor::General(g) => json!({"kind": "general", "expr": g.to_json()}),
        }
    }

    fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, ComplexError> {
        let e = FormalExpr::from_json(&v["expr"], spec)?;
        match v["kind"].as_str() {
            Some("trace") => Ok(JFactor::Trace(e)),
            Some("general") => Ok(JFactor::General(e)),
            _ => Err(ComplexError::Json("factor kind".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertTerm {
    pub cofactor: FormalExpr,
    pub factors: Vec<JFactor>,
}

impl CertTerm {
    fn eval(&self) -> Pair {
        self.factors.iter().fold(self.cofactor.eval(), |acc, g| acc.mul(&g.value()))
    }

    fn formal(&self) -> FormalExpr {
        self.factors.iter().fold(self.cofactor.clone(), |acc, g| acc.mul(&g.formal()).expect("same level"))
    }
}

/// Witness that an element lies in J^q at a fixed level.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    spec: Arc<FieldSpec>,
    level: u32,
    q: u32,
    terms: Vec<CertTerm>,
}

impl Certificate {
    pub fn zero(spec: &Arc<FieldSpec>, level: u32, q: u32) -> Self {
        Certificate { spec: spec.clone(), level, q, terms: Vec::new() }
    }

    pub fn single(cofactor: FormalExpr, factors: Vec<JFactor>) -> Self {
        let spec = cofactor_spec(&cofactor, &factors);
        Certificate { spec, level: cofactor.level(), q: factors.len() as u32, terms: vec![CertTerm { cofactor, factors }] }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &[CertTerm] {
        &self.terms
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn eval(&self) -> Pair {
        self.terms.iter().fold(Pair::zero(&self.spec), |acc, t| acc.add(&t.eval()))
    }

    pub fn formal(&self) -> FormalExpr {
        self.terms
            .iter()
            .fold(FormalExpr::zero(&self.spec, self.level), |acc, t| acc.add(&t.formal()).expect("same level"))
    }

    pub fn element(&self) -> TRRElem {
        TRRElem::from_formal(self.formal())
    }

    /// Checks factor counts, factor membership in J and the evaluation.
    pub fn validate(&self, target: &Pair) -> Result<(), ComplexError> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.factors.len() < self.q as usize {
                return Err(ComplexError::TooFewFactors(i, t.factors.len(), self.q));
            }
            if t.cofactor.level() != self.level || t.factors.iter().any(|g| g.level() != self.level) {
                return Err(ComplexError::Level(i));
            }
            for (j, g) in t.factors.iter().enumerate() {
                if !g.in_j()? {
                    return Err(ComplexError::FactorNotInJ(i, j));
                }
            }
        }
        if &self.eval() != target {
            return Err(ComplexError::Mismatch);
        }
        Ok(())
    }

    pub fn with_q(mut self, q: u32) -> Self {
        self.q = q;
        self
    }

    pub fn add(&self, o: &Self) -> Result<Self, ComplexError> {
        if self.level != o.level {
            return Err(TrrError::LevelMismatch(self.level, o.level).into());
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(Certificate { spec: self.spec.clone(), level: self.level, q: self.q.min(o.q), terms })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ComplexError> {
        if self.level != o.level {
            return Err(TrrError::LevelMismatch(self.level, o.level).into());
        }
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(CertTerm { cofactor: a.cofactor.mul(&b.cofactor)?, factors });
            }
        }
        Ok(Certificate { spec: self.spec.clone(), level: self.level, q: self.q + o.q, terms })
    }

    pub fn mul_cofactor(&self, y: &FormalExpr) -> Result<Self, ComplexError> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(CertTerm { cofactor: t.cofactor.mul(y)?, factors: t.factors.clone() }))
            .collect::<Result<_, TrrError>>()?;
        Ok(Certificate { terms, ..self.clone() })
    }

    /// (1+σ)(z g_1⋯g_q) = (z+σz) g_1⋯g_q for σ-fixed g_i.
    pub fn d_push(&self) -> Result<Self, ComplexError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(j) = t.factors.iter().position(|g| !g.is_fixed()) {
                return Err(ComplexError::NoRule(format!("factor {j} is not σ-fixed")));
            }
            let mut factors = vec![JFactor::Trace(t.cofactor.clone())];
            factors.extend(t.factors.iter().cloned());
            terms.push(CertTerm { cofactor: FormalExpr::one(&self.spec, self.level), factors });
        }
        Ok(Certificate { terms, q: self.q + 1, ..self.clone() })
    }

    /// V(z g_1⋯g_q) = (Vz + σVz) · g_1'⋯g_{q-1}' · (x_q, 0) with g_i = z_i + σz_i
    /// and g_i' = Vz_i + σVz_i.
    pub fn v_push(&self) -> Result<Self, ComplexError> {
        let nl = self.level + 1;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let vz = t.cofactor.apply_v()?;
            if t.factors.is_empty() {
                terms.push(CertTerm { cofactor: vz, factors: Vec::new() });
                continue;
            }
            let mut zs = Vec::with_capacity(t.factors.len());
            for g in &t.factors {
                match g {
                    JFactor::Trace(z) => zs.push(z.apply_v()?),
                    JFactor::General(_) => return Err(ComplexError::NoRule("V of a general factor".into())),
                }
            }
            let last = zs.pop().expect("nonempty");
            let mut factors = vec![JFactor::Trace(vz)];
            factors.extend(zs.into_iter().map(JFactor::Trace));
            terms.push(CertTerm { cofactor: last, factors });
        }
        Ok(Certificate { spec: self.spec.clone(), level: nl, q: self.q, terms })
    }

    pub fn apply_r(&self) -> Result<Self, ComplexError> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(CertTerm {
                cofactor: t.cofactor.apply_r()?,
                factors: t.factors.iter().map(|g| g.r()).collect::<Result<_, _>>()?,
            });
        }
        Ok(Certificate { spec: self.spec.clone(), level: self.level - 1, q: self.q, terms })
    }

    pub fn apply_f(&self) -> Result<Self, ComplexError> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(CertTerm {
                cofactor: t.cofactor.apply_f()?,
                factors: t.factors.iter().map(|g| g.f()).collect::<Result<_, _>>()?,
            });
        }
        Ok(Certificate { spec: self.spec.clone(), level: self.level - 1, q: self.q, terms })
    }

    pub fn apply_sigma(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| CertTerm { cofactor: t.cofactor.apply_sigma(), factors: t.factors.iter().map(|g| g.sigma()).collect() })
            .collect();
        Certificate { terms, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "q": self.q,
            "terms": self.terms.iter().map(|t| json!({
                "cofactor": t.cofactor.to_json(),
                "factors": t.factors.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, ComplexError> {
        let bad = |m: &str| ComplexError::Json(m.into());
        let level = v["level"].as_u64().ok_or_else(|| bad("level"))? as u32;
        let q = v["q"].as_u64().ok_or_else(|| bad("q"))? as u32;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let cofactor = FormalExpr::from_json(&t["cofactor"], spec)?;
            let factors = t["factors"]
                .as_array()
                .ok_or_else(|| bad("factors"))?
                .iter()
                .map(|g| JFactor::from_json(g, spec))
                .collect::<Result<_, _>>()?;
            terms.push(CertTerm { cofactor, factors });
        }
        Ok(Certificate { spec: spec.clone(), level, q, terms })
    }
}

fn cofactor_spec(c: &FormalExpr, _f: &[JFactor]) -> Arc<FieldSpec> {
    c.eval().x.spec().clone()
}

/// A class in J^q/J^{q+1} at level n.
#[derive(Clone, Debug)]
pub struct GradedClass {
    pub level: u32,
    pub q: u32,
    pub rep: TRRElem,
    pub cert: Option<Certificate>,
}

impl GradedClass {
    /// Level 0 membership is checked exactly; higher levels need a certificate.
    pub fn new(rep: TRRElem, q: u32, cert: Option<Certificate>) -> Result<Self, ComplexError> {
        if let Some(c) = &cert {
            if c.q < q || c.level != rep.level() {
                return Err(ComplexError::Precondition("certificate power or level too small".into()));
            }
            c.validate(rep.pair())?;
        } else if rep.level() == 0 {
            if !rep.pair().x.in_j1_power(q) {
                return Err(ComplexError::Precondition(format!("not in J^{q}")));
            }
        } else if !rep.is_zero() {
            return Err(ComplexError::MissingCertificate);
        }
        Ok(GradedClass { level: rep.level(), q, rep, cert })
    }

    pub fn from_cert(cert: Certificate) -> Self {
        GradedClass { level: cert.level, q: cert.q, rep: cert.element(), cert: Some(cert) }
    }

    /// d = 1 + σ with the certificate pushed one power up.
    pub fn d(&self) -> Result<Self, ComplexError> {
        let rep = self.rep.add(&self.rep.map_sigma())?;
        let cert = self.cert.as_ref().map(|c| c.d_push()).transpose()?;
        Self::new(rep, self.q + 1, cert)
    }

    pub fn v(&self) -> Result<Self, ComplexError> {
        let rep = self.rep.map_v()?;
        let cert = self.cert.as_ref().map(|c| c.v_push()).transpose()?;
        Self::new(rep, self.q, cert)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ComplexError> {
        let rep = self.rep.mul(&o.rep)?;
        let cert = match (&self.cert, &o.cert) {
            (Some(a), Some(b)) => Some(a.mul(b)?),
            _ => None,
        };
        Self::new(rep, self.q + o.q, cert)
    }
}

#[derive(Clone, Debug)]
pub enum CertOutcome {
    Certified(Certificate),
    /// Decided negatively; only possible at level 0.
    NotMember,
    Unresolved { bound: u32 },
}

/// Certificate for x ∈ J^q: exact at level 0, bounded span search above.
pub fn certify_power(x: &TRRElem, q: u32, bound: u32) -> CertOutcome {
    let spec = x.spec().clone();
    let n = x.level();
    if x.is_zero() {
        return CertOutcome::Certified(Certificate::zero(&spec, n, q));
    }
    if n == 0 {
        let z = &x.pair().x;
        if !z.in_j1_power(q) {
            return CertOutcome::NotMember;
        }
        let one = FieldElem::one(&spec);
        let mut terms = Vec::new();
        for (nu, c) in z.delta_basis_coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let factors = subset_elements(nu as SubsetIndex)
                .map(|i| JFactor::d_tau(0, &FieldElem::var(&spec, i)))
                .collect();
            terms.push(CertTerm { cofactor: FormalExpr::gen(GenSymbol::tau(0, c, &one)), factors });
        }
        return CertOutcome::Certified(Certificate { spec, level: 0, q, terms });
    }
    span_search(x, q, bound)
}

fn monomials_up_to(spec: &Arc<FieldSpec>, bound: u32) -> Vec<FieldElem> {
    let d = spec.d();
    let mut out = Vec::new();
    let mut exps = vec![0u32; d];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<FieldElem>, spec: &Arc<FieldSpec>) {
        if i == exps.len() {
            out.push(FieldElem::monomial(spec, Monomial::from_exps(exps), 1));
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, exps, out, spec);
        }
        exps[i] = 0;
    }
    rec(0, bound, &mut exps, &mut out, spec);
    out
}

const SPAN_LIMIT: usize = 6000;

/// Searches for x as an F_2-combination of cofactor·g_1⋯g_q with monomial parameters of degree ≤ bound.
fn span_search(x: &TRRElem, q: u32, bound: u32) -> CertOutcome {
    let spec = x.spec().clone();
    let n = x.level();
    let one = FieldElem::one(&spec);
    let mons = monomials_up_to(&spec, bound);
    let mut cofactors = vec![FormalExpr::one(&spec, n)];
    for m in &mons {
        if m.is_one() {
            continue;
        }
        cofactors.push(FormalExpr::gen(GenSymbol::tau(n, m, &one)));
        cofactors.push(FormalExpr::gen(GenSymbol::tau(n, &one, m)));
        for i in 0..n {
            cofactors.push(FormalExpr::gen(GenSymbol::vtau(n, i, m, &one)));
            cofactors.push(FormalExpr::gen(GenSymbol::svtau(n, i, m, &one)));
        }
    }
    let mut gens = Vec::new();
    for m in mons.iter().filter(|m| !m.is_one()) {
        for i in 0..=n {
            gens.push(JFactor::fixed(n, i, m, &one));
        }
    }
    // multisets of q factors
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..q {
        let mut next = Vec::new();
        for c in &combos {
            let start = c.last().copied().unwrap_or(0);
            for j in start..gens.len() {
                let mut cc = c.clone();
                cc.push(j);
                next.push(cc);
            }
        }
        combos = next;
        if combos.len() * cofactors.len() > SPAN_LIMIT {
            return CertOutcome::Unresolved { bound };
        }
    }
    let mut cands = Vec::new();
    for c in &combos {
        for z in &cofactors {
            cands.push(CertTerm { cofactor: z.clone(), factors: c.iter().map(|&j| gens[j].clone()).collect() });
        }
    }
    let target = x.pair();
    let Some(tbits) = pair_bits(target) else { return CertOutcome::Unresolved { bound } };
    let mut keys: HashMap<(u8, u32, Monomial, u32), usize> = HashMap::new();
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(cands.len());
    let mut index = |k| {
        let len = keys.len();
        *keys.entry(k).or_insert(len)
    };
    let target_rows: Vec<usize> = tbits.into_iter().map(&mut index).collect();
    for t in &cands {
        let Some(bits) = pair_bits(&t.eval()) else { return CertOutcome::Unresolved { bound } };
        cols.push(bits.into_iter().map(&mut index).collect());
    }
    let mut a = BitMatrix::zeros(keys.len(), cands.len());
    for (j, rows) in cols.iter().enumerate() {
        for &r in rows {
            a.flip(r, j);
        }
    }
    let mut b = vec![FieldElem::zero(&spec); keys.len()];
    for r in target_rows {
        b[r] = &b[r] + &one;
    }
    match solve_f2_system(&a, &b, &spec) {
        Some(sol) => {
            let terms = cands.into_iter().zip(sol).filter(|(_, s)| !s.is_zero()).map(|(t, _)| t).collect();
            let cert = Certificate { spec, level: n, q, terms };
            if cert.validate(target).is_ok() {
                CertOutcome::Certified(cert)
            } else {
                CertOutcome::Unresolved { bound }
            }
        }
        None => CertOutcome::Unresolved { bound },
    }
}

/// Bits of a pair with polynomial coordinates: (component, ξ, monomial, constant bit).
fn pair_bits(p: &Pair) -> Option<Vec<(u8, u32, Monomial, u32)>> {
    let mut out = Vec::new();
    for (c, t) in [(0u8, &p.x), (1u8, &p.y)] {
        for (xi, v) in t.support() {
            if !v.is_polynomial() {
                return None;
            }
            for &(m, coef) in v.num().terms() {
                for bit in 0..16 {
                    if coef >> bit & 1 == 1 {
                        out.push((c, xi, m, bit));
                    }
                }
            }
        }
    }
    Some(out)
}

/// Decides x ≡ y in J^q/J^{q+1}, up to the search bound at levels n ≥ 1.
#[derive(Clone, Debug)]
pub enum GradedEq {
    Equal(Certificate),
    Different,
    Indistinguishable { bound: u32 },
}

pub fn graded_equal(x: &GradedClass, y: &GradedClass, bound: u32) -> Result<GradedEq, ComplexError> {
    if x.q != y.q {
        return Err(ComplexError::Degree(format!("{} vs {}", x.q, y.q)));
    }
    let diff = x.rep.add(&y.rep)?;
    Ok(match certify_power(&diff, x.q + 1, bound) {
        CertOutcome::Certified(c) => GradedEq::Equal(c),
        CertOutcome::NotMember => GradedEq::Different,
        CertOutcome::Unresolved { bound } => GradedEq::Indistinguishable { bound },
    })
}

/// λ: W_{<2^n>}(k) → level n, Σ V^i τ_{n-i}(a_i) ↦ Σ V^i τ_{n-i}(a_i ⊗ 1).
pub fn lambda_witt(w: &WittVec) -> FormalExpr {
    let spec = w.spec();
    let n = w.level() as u32;
    let one = FieldElem::one(spec);
    let mut e = FormalExpr::zero(spec, n);
    for (i, a) in w.comps().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let g = if i == 0 { GenSymbol::tau(n, a, &one) } else { GenSymbol::vtau(n, n - i as u32, a, &one) };
        e = e.add(&FormalExpr::gen(g)).expect("same level");
    }
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrwKind {
    V,
    DV,
}

#[derive(Clone, Debug)]
pub struct DrwTerm {
    pub kind: DrwKind,
    pub a: u32,
    pub eta: DiffForm,
}

/// A formal sum of V^a(η) and dV^a(η) at level n.
#[derive(Clone, Debug)]
pub struct DRWSymbol {
    level: u32,
    degree: u32,
    terms: Vec<DrwTerm>,
}

impl DRWSymbol {
    pub fn new(level: u32, terms: Vec<DrwTerm>) -> Result<Self, ComplexError> {
        if level as usize > MAX_LEVEL {
            return Err(TrrError::LevelCap(level).into());
        }
        let mut degree = None;
        for t in &terms {
            if t.a > level {
                return Err(ComplexError::Degree(format!("V^{} at level {level}", t.a)));
            }
            let deg = t.eta.degree() + u32::from(t.kind == DrwKind::DV);
            match degree {
                None => degree = Some(deg),
                Some(q) if q != deg => return Err(ComplexError::Degree(format!("{q} vs {deg}"))),
                _ => {}
            }
        }
        Ok(DRWSymbol { level, degree: degree.unwrap_or(0), terms })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// u_m on Ω^q: λ(dx)^ξ ↦ λτ_m(λ) · ∏_{i∈ξ} dλτ_m(x_i).
pub fn u_form(m: u32, eta: &DiffForm) -> Certificate {
    let spec = eta.spec();
    let one = FieldElem::one(spec);
    let terms = eta
        .support()
        .map(|(xi, lam)| CertTerm {
            cofactor: FormalExpr::gen(GenSymbol::tau(m, lam, &one)),
            factors: subset_elements(xi).map(|i| JFactor::d_tau(m, &FieldElem::var(spec, i))).collect(),
        })
        .collect();
    Certificate { spec: spec.clone(), level: m, q: eta.degree(), terms }
}

pub fn u_eval(s: &DRWSymbol) -> Result<GradedClass, ComplexError> {
    let spec = match s.terms.first() {
        Some(t) => t.eta.spec().clone(),
        None => return Err(ComplexError::Degree("empty symbol".into())),
    };
    let mut acc = Certificate::zero(&spec, s.level, s.degree);
    for t in &s.terms {
        let mut c = u_form(s.level - t.a, &t.eta);
        for _ in 0..t.a {
            c = c.v_push()?;
        }
        if t.kind == DrwKind::DV {
            c = c.d_push()?;
        }
        acc = acc.add(&c)?;
    }
    Ok(GradedClass::from_cert(acc.with_q(s.degree)))
}

/// (Σ Δ(λ_ξ)Δ(x)^ξ + Σ Δ(μ_ν)Δ(x)^ν, Σ Δ(μ_ν)Δ(x)^ν): the image of V^n(η) + dV^n(η').
pub fn drw_pattern(eta: &DiffForm, eta2: &DiffForm) -> Pair {
    let spec = eta.spec();
    let sum = |f: &DiffForm| {
        f.support().fold(TensorElem::zero(spec), |acc, (xi, c)| &acc + &(&TensorElem::delta(c) * &TensorElem::delta_pow(spec, xi)))
    };
    let b = sum(eta2);
    Pair { x: &sum(eta) + &b, y: b }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trunc0Report {
    pub d: usize,
    pub q: u32,
    pub dimension: usize,
    pub expected: usize,
    pub basis: Vec<String>,
    pub independent: bool,
    pub u_matches_basis: bool,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// (dx)^ξ ↦ Δ(x)^ξ on a basis of Ω^q, checked against exact Δ-coordinates.
pub fn trunc0_report(spec: &Arc<FieldSpec>, q: u32) -> Trunc0Report {
    let d = spec.d();
    let basis: Vec<SubsetIndex> = crate::field::subsets_ordered(d).into_iter().filter(|&s| popcount(s) == q).collect();
    let one = FieldElem::one(spec);
    let mut rows = Vec::new();
    let mut u_ok = true;
    for &xi in &basis {
        let img = u_form(0, &DiffForm::term(&one, xi)).eval().x;
        u_ok &= img == TensorElem::delta_pow(spec, xi);
        let coords = img.delta_basis_coords();
        rows.push(basis.iter().map(|&nu| coords[nu as usize].clone()).collect::<Vec<_>>());
        // nothing below degree q
        u_ok &= img.j1_degree() == Some(q);
    }
    let rank = crate::linalg::rank_k(&rows);
    Trunc0Report {
        d,
        q,
        dimension: rank,
        expected: binomial(d, q as usize),
        basis: basis.iter().map(|&xi| format!("D{}", crate::tensor::format_subset(spec, xi))).collect(),
        independent: rank == basis.len(),
        u_matches_basis: u_ok,
    }
}

/// One summand s² x^β (dx)^β ∧ d(x^γ) ∧ (dx)^ρ of a Frobenius-image decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobTerm {
    pub s: FieldElem,
    pub beta: SubsetIndex,
    pub gamma: Option<SubsetIndex>,
    pub rest: SubsetIndex,
}

impl FrobTerm {
    pub fn form(&self) -> Result<DiffForm, FormError> {
        let spec = self.s.spec();
        let lead = &self.s.square() * &FieldElem::basis_monomial(spec, self.beta);
        let mut f = DiffForm::term(&lead, self.beta);
        if let Some(g) = self.gamma {
            f = f.wedge(&DiffForm::function(&FieldElem::basis_monomial(spec, g)).d())?;
        }
        f.wedge(&DiffForm::term(&FieldElem::one(spec), self.rest))
    }
}

#[derive(Clone, Debug)]
pub struct Key1Witness {
    pub terms: Vec<FrobTerm>,
    pub relations_checked: usize,
}

impl Key1Witness {
    pub fn form(&self, spec: &Arc<FieldSpec>, p: u32) -> Result<DiffForm, FormError> {
        self.terms.iter().try_fold(DiffForm::zero(spec, p)?, |acc, t| acc.add(&t.form()?))
    }
}

#[derive(Clone, Debug)]
pub enum Key1Outcome {
    Divisible(Key1Witness),
    NotApplicable { j1_degree: Option<u32> },
}

/// Σ_ν Δ(μ_ν)Δ(x)^ν with |ν| = q - 1.
pub fn key1_sum(spec: &Arc<FieldSpec>, mu: &BTreeMap<SubsetIndex, FieldElem>) -> TensorElem {
    mu.iter()
        .fold(TensorElem::zero(spec), |acc, (&nu, m)| &acc + &(&TensorElem::delta(m) * &TensorElem::delta_pow(spec, nu)))
}

/// Tests the hypothesis Σ Δ(μ_ν)Δ(x)^ν ∈ J^{q+1}; when it holds, checks the
/// coefficient relations and writes Σ μ_ν (dx)^ν as a sum of Frobenius images.
pub fn key1_check(
    spec: &Arc<FieldSpec>,
    mu: &BTreeMap<SubsetIndex, FieldElem>,
    q: u32,
) -> Result<Key1Outcome, ComplexError> {
    if q == 0 || q as usize > spec.d() + 1 {
        return Err(ComplexError::Degree(format!("q = {q}")));
    }
    let p = q - 1;
    for &nu in mu.keys() {
        if popcount(nu) != p || nu as usize >= spec.basis_size() {
            return Err(ComplexError::Degree(format!("key {nu} has the wrong size")));
        }
    }
    let x = key1_sum(spec, mu);
    if !x.in_j1_power(q + 1) {
        return Ok(Key1Outcome::NotApplicable { j1_degree: x.j1_degree() });
    }
    let zero = FieldElem::zero(spec);
    let n = spec.basis_size() as SubsetIndex;
    let decomp: BTreeMap<SubsetIndex, Vec<FieldElem>> =
        mu.iter().map(|(&nu, m)| (nu, m.square_decomp().into_parts())).collect();
    let s = |nu: SubsetIndex, delta: SubsetIndex| decomp.get(&nu).map_or(&zero, |v| &v[delta as usize]);

    // Σ_{j∈ξ∖α} s_{ξ∖j, α⊔j} = 0 for |ξ| = q
    let mut checked = 0;
    for xi in (0..n).filter(|&x| popcount(x) == q) {
        for alpha in 0..n {
            let mut acc = FieldElem::zero(spec);
            for j in subset_elements(xi & !alpha) {
                acc = &acc + s(xi & !(1 << j), alpha | 1 << j);
            }
            if !acc.is_zero() {
                return Err(ComplexError::Precondition(format!("coefficient relation fails at ξ={xi}, α={alpha}")));
            }
            checked += 1;
        }
    }

    let mut groups = BTreeSet::new();
    for (&nu, parts) in &decomp {
        for (delta, c) in parts.iter().enumerate() {
            if !c.is_zero() {
                let delta = delta as SubsetIndex;
                groups.insert((nu & delta, nu | delta));
            }
        }
    }
    let mut terms = Vec::new();
    for (beta, lam) in groups {
        if beta == lam {
            let c = s(beta, beta);
            if !c.is_zero() {
                terms.push(FrobTerm { s: c.clone(), beta, gamma: None, rest: 0 });
            }
            continue;
        }
        let j0 = (lam & !beta).trailing_zeros();
        let jb = 1 << j0;
        for nu in (0..n).filter(|&v| popcount(v) == p && v & beta == beta && v & !lam == 0 && v & jb != 0) {
            let delta = (lam & !nu) | beta;
            let c = s(nu, delta);
            if c.is_zero() {
                continue;
            }
            terms.push(FrobTerm { s: c.clone(), beta, gamma: Some((lam & !nu) | jb), rest: (nu & !beta) & !jb });
        }
    }
    let witness = Key1Witness { terms, relations_checked: checked };
    let omega = mu.iter().try_fold(DiffForm::zero(spec, p)?, |acc, (&nu, m)| acc.add(&DiffForm::term(m, nu)))?;
    if witness.form(spec, p)? != omega {
        return Err(ComplexError::Precondition("Frobenius decomposition does not reproduce the form".into()));
    }
    Ok(Key1Outcome::Divisible(witness))
}

/// If (z, 0) ∈ J^{q+1} at level n (certified), then z ∈ J_{<1>}^{q+2}.
pub fn key2_check(z: &TensorElem, n: u32, q: u32, cert: Option<&Certificate>) -> Result<bool, ComplexError> {
    let c = cert.ok_or(ComplexError::MissingCertificate)?;
    if c.level != n || c.q < q + 1 {
        return Err(ComplexError::Precondition("certificate level or power".into()));
    }
    let target = Pair { x: z.clone(), y: TensorElem::zero(z.spec()) };
    c.validate(&target).map_err(|e| ComplexError::Precondition(format!("invalid certificate: {e}")))?;
    Ok(z.in_j1_power(q + 2))
}

/// μ-coefficients of a random form in the image of Frobenius: sums of
/// s²(dx)^ρ, s² x^β(dx)^β ∧ (dx)^ρ and exact forms.
pub fn random_frobenius_image(spec: &Arc<FieldSpec>, p: u32, r: &mut Rng8) -> BTreeMap<SubsetIndex, FieldElem> {
    let d = spec.d() as u32;
    let params = ElemParams { max_terms: 2, max_degree: 2, fraction_rate: 0.0 };
    let mut omega = DiffForm::zero(spec, p).unwrap();
    for _ in 0..r.gen_range(1..=3) {
        let term = match r.gen_range(0..3) {
            0 => {
                let rho = random::subset_of_size(spec, p, r).unwrap();
                DiffForm::term(&random::elem(spec, params, r).square(), rho)
            }
            1 => {
                let rho = random::subset_of_size(spec, p, r).unwrap();
                let beta = rho & r.gen_range(0..(1u32 << d));
                let c = &random::elem(spec, params, r).square() * &FieldElem::basis_monomial(spec, beta);
                DiffForm::term(&c, rho)
            }
            _ => {
                if p == 0 {
                    continue;
                }
                let rho = random::subset_of_size(spec, p - 1, r).unwrap();
                DiffForm::term(&random::elem(spec, params, r), rho).d()
            }
        };
        omega = omega.add(&term).unwrap();
    }
    (0..spec.basis_size() as SubsetIndex)
        .filter(|&nu| popcount(nu) == p)
        .map(|nu| (nu, omega.coeff(nu).clone()))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Breaks the hypothesis by adding x_j (dx)^ν for some j ∉ ν.
pub fn perturb_out_of_kernel(
    spec: &Arc<FieldSpec>,
    p: u32,
    mu: &mut BTreeMap<SubsetIndex, FieldElem>,
    r: &mut Rng8,
) -> bool {
    let d = spec.d();
    let nus: Vec<SubsetIndex> = (0..spec.basis_size() as SubsetIndex).filter(|&v| popcount(v) == p && popcount(v) < d as u32).collect();
    if nus.is_empty() {
        return false;
    }
    let nu = nus[r.gen_range(0..nus.len())];
    let free: Vec<usize> = (0..d).filter(|&j| nu >> j & 1 == 0).collect();
    let j = free[r.gen_range(0..free.len())];
    let add = FieldElem::var(spec, j);
    let e = mu.entry(nu).or_insert_with(|| FieldElem::zero(spec));
    *e = &*e + &add;
    if e.is_zero() {
        mu.remove(&nu);
    }
    true
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomCount {
    pub checked: u64,
    pub passed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub trial: u64,
    pub seed: u64,
    pub level: u32,
    pub q: u32,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub seed: u64,
    pub d: usize,
    pub n_max: u32,
    pub q_max: u32,
    pub trials: u64,
    pub axioms: BTreeMap<String, AxiomCount>,
    pub failures: Vec<AxiomFailure>,
    #[serde(skip)]
    pub certificates: BTreeMap<String, Certificate>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["certificates"] = self.certificates.iter().map(|(k, c)| (k.clone(), c.to_json())).collect::<serde_json::Map<_, _>>().into();
        v
    }
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub axiom: &'static str,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub cert: Option<Certificate>,
}

struct Trial<'a> {
    spec: &'a Arc<FieldSpec>,
    rng: Rng8,
    out: Vec<CheckRecord>,
}

impl Trial<'_> {
    fn elem(&mut self) -> FieldElem {
        random::term_elem(self.spec, 2, &mut self.rng)
    }

    fn param_b(&mut self) -> FieldElem {
        if self.rng.gen_bool(0.5) {
            FieldElem::one(self.spec)
        } else {
            self.elem()
        }
    }

    fn generator(&mut self, n: u32) -> FormalExpr {
        let (a, b) = (self.elem(), self.param_b());
        let g = match (n, self.rng.gen_range(0..3)) {
            (0, _) | (_, 0) => GenSymbol::tau(n, &a, &b),
            (_, 1) => GenSymbol::vtau(n, self.rng.gen_range(0..n), &a, &b),
            _ => GenSymbol::svtau(n, self.rng.gen_range(0..n), &a, &b),
        };
        FormalExpr::gen(g)
    }

    fn class(&mut self, n: u32, q: u32) -> Certificate {
        let z = self.generator(n);
        let factors = (0..q)
            .map(|_| {
                let i = self.rng.gen_range(0..=n);
                let (a, b) = (self.elem(), self.param_b());
                JFactor::fixed(n, i, &a, &b)
            })
            .collect();
        Certificate::single(z, factors)
    }

    fn eq(&mut self, axiom: &'static str, lhs: &Pair, rhs: &Pair) {
        let pass = lhs == rhs;
        self.out.push(CheckRecord {
            axiom,
            pass,
            lhs: if pass { String::new() } else { format!("{:?}", lhs) },
            rhs: if pass { String::new() } else { format!("{:?}", rhs) },
            cert: None,
        });
    }

    fn certified(&mut self, axiom: &'static str, cert: Result<Certificate, ComplexError>, target: &Pair, q: u32) {
        let res = cert.and_then(|c| {
            if c.q < q {
                return Err(ComplexError::TooFewFactors(0, c.q as usize, q));
            }
            c.validate(target).map(|_| c)
        });
        match res {
            Ok(c) => self.out.push(CheckRecord { axiom, pass: true, lhs: String::new(), rhs: String::new(), cert: Some(c) }),
            Err(e) => self.out.push(CheckRecord {
                axiom,
                pass: false,
                lhs: format!("{:?}", target),
                rhs: e.to_string(),
                cert: None,
            }),
        }
    }

    fn witt(&mut self, n: u32) -> WittVec {
        let comps = (0..=n).map(|_| if self.rng.gen_bool(0.6) { self.elem() } else { FieldElem::zero(self.spec) }).collect();
        WittVec::new(comps).expect("level within cap")
    }
}

/// Runs one randomized trial at level n and degrees (q, q2).
pub fn axiom_trial(spec: &Arc<FieldSpec>, n: u32, q: u32, q2: u32, seed: u64) -> Vec<CheckRecord> {
    let mut t = Trial { spec, rng: random::rng(seed), out: Vec::new() };
    let cx = t.class(n, q);
    let cy = t.class(n, q2);
    let (x, y) = (cx.eval(), cy.eval());
    let dx = x.add(&x.sigma());
    let dy = y.add(&y.sigma());

    t.eq("graded_commutative", &x.mul(&y), &y.mul(&x));
    t.eq("dd_zero", &dx.add(&dx.sigma()), &Pair::zero(spec));
    t.certified("d_raises_power", cx.d_push(), &dx, q + 1);

    let xy = x.mul(&y);
    let lhs = xy.add(&xy.sigma()).add(&dx.mul(&y)).add(&x.mul(&dy));
    t.eq("leibniz", &lhs, &dx.mul(&dy));
    t.certified("leibniz_remainder", cx.d_push().and_then(|a| a.mul(&cy.d_push()?)), &lhs, q + q2 + 2);

    if (n as usize) < MAX_LEVEL {
        let vx = x.v();
        t.eq("fv", &vx.f(), &dx);
        t.certified("fv_vanishes", cx.d_push(), &vx.f(), q + 1);
        t.eq("fdv", &vx.add(&vx.sigma()).f(), &dx);
        t.eq("f_sigma_v", &vx.sigma().f(), &Pair::zero(spec));
        t.certified("v_preserves_power", cx.v_push(), &vx, q);
        // RV = VR
        if n >= 1 {
            t.eq("rv_vr", &vx.r(), &x.r().v());
        }
        let w = t.witt(n);
        let lw = lambda_witt(&w);
        let vlw = lw.apply_v().map(|e| e.eval());
        let lvw = w.v().map(|v| lambda_witt(&v).eval());
        match (vlw, lvw) {
            (Ok(a), Ok(b)) => t.eq("lambda_v", &a, &b),
            _ => t.eq("lambda_v", &x, &Pair::zero(spec)),
        }
    }
    if n >= 1 {
        // V(x') y = V(x' F(y)) with x' one level down
        let cxp = t.class(n - 1, q);
        let xp = cxp.eval();
        t.eq("v_linearity", &xp.v().mul(&y), &xp.mul(&y.f()).v());
        let cert = cy.formal().apply_f().map_err(ComplexError::from).and_then(|fy| cxp.mul_cofactor(&fy)?.v_push());
        t.certified("v_linearity_power", cert, &xp.v().mul(&y), q);

        t.eq("r_sigma", &x.sigma().r(), &x.r().sigma());
        t.certified("r_preserves_power", cx.apply_r(), &x.r(), q);
        t.certified("f_preserves_power", cx.apply_f(), &x.f(), q);
        if n >= 2 {
            t.eq("rf_fr", &x.f().r(), &x.r().f());
        }

        let a = t.elem();
        let one = FieldElem::one(spec);
        let tau_n = FormalExpr::gen(GenSymbol::tau(n, &a, &one)).eval();
        let tau_m = FormalExpr::gen(GenSymbol::tau(n - 1, &a, &one)).eval();
        t.eq("fdlambda_tau", &tau_n.add(&tau_n.sigma()).f(), &tau_m.mul(&tau_m.add(&tau_m.sigma())));

        let w = t.witt(n);
        let lw = lambda_witt(&w);
        let res = w.f().map_err(TrrError::from).map_err(ComplexError::from).and_then(|fw| {
            let diff = lw.apply_f()?.add(&lambda_witt(&fw))?;
            Ok(Certificate::single(FormalExpr::one(spec, n - 1), vec![JFactor::General(diff)]))
        });
        let target = res.as_ref().map(|c| c.eval()).unwrap_or_else(|_| Pair::zero(spec));
        t.certified("lambda_f", res, &target, 1);
    }
    t.out
}

/// Randomized checks of the Witt complex structure on J^*/J^{*+1}.
pub fn axiom_suite(spec: &Arc<FieldSpec>, n_max: u32, q_max: u32, trials: u64, seed: u64) -> AxiomReport {
    let q_max = q_max.min(spec.d() as u32);
    let n_max = n_max.min(MAX_LEVEL as u32 - 1);
    let results: Vec<(u64, u64, u32, u32, Vec<CheckRecord>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = random::trial_seed(seed, i);
            let mut r = random::rng(s);
            let n = r.gen_range(0..=n_max);
            let q = r.gen_range(0..=q_max);
            let q2 = r.gen_range(0..=q_max);
            (i, s, n, q, axiom_trial(spec, n, q, q2, s ^ 1))
        })
        .collect();
    let mut axioms: BTreeMap<String, AxiomCount> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut certificates = BTreeMap::new();
    for (i, s, n, q, recs) in results {
        for rec in recs {
            let c = axioms.entry(rec.axiom.to_string()).or_default();
            c.checked += 1;
            if rec.pass {
                c.passed += 1;
                if let Some(cert) = rec.cert {
                    if !cert.terms.is_empty() {
                        certificates.entry(rec.axiom.to_string()).or_insert(cert);
                    }
                }
            } else {
                failures.push(AxiomFailure { axiom: rec.axiom.into(), trial: i, seed: s, level: n, q, lhs: rec.lhs, rhs: rec.rhs });
            }
        }
    }
    AxiomReport { seed, d: spec.d(), n_max, q_max, trials, axioms, failures, certificates }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, k: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, k).unwrap()
    }

    #[test]
    fn d_of_tau_and_dd() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        let c = Certificate::single(FormalExpr::gen(GenSymbol::tau(1, &t, &el("1", &k))), vec![]);
        let x = GradedClass::from_cert(c);
        let dx = x.d().unwrap();
        assert_eq!(dx.q, 1);
        let tau = x.rep.pair();
        assert_eq!(dx.rep.pair(), &tau.add(&tau.sigma()));
        assert!(dx.d().unwrap().rep.is_zero());
    }

    #[test]
    fn v_push_and_d_push_validate() {
        let k = FieldSpec::f2tu();
        let (t, u, one) = (el("t", &k), el("u", &k), el("1", &k));
        let z = FormalExpr::gen(GenSymbol::tau(1, &t, &u));
        let c = Certificate::single(z, vec![JFactor::fixed(1, 0, &t, &one), JFactor::d_tau(1, &u)]);
        c.validate(&c.eval()).unwrap();
        let v = c.v_push().unwrap();
        v.validate(&c.eval().v()).unwrap();
        let d = c.d_push().unwrap();
        assert_eq!(d.q(), 3);
        d.validate(&c.eval().add(&c.eval().sigma())).unwrap();
        let back = Certificate::from_json(&d.to_json(), &k).unwrap();
        back.validate(&d.eval()).unwrap();
    }

    #[test]
    fn zero_certificate() {
        let k = FieldSpec::f2t();
        let zero = TRRElem::zero(&k, 2);
        match certify_power(&zero, 5, 1) {
            CertOutcome::Certified(c) => assert!(c.terms().is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn level0_certificates_are_exact() {
        let k = FieldSpec::f2tu();
        let x = TRRElem::from_tensor(&TensorElem::delta(&el("t", &k)) * &TensorElem::delta(&el("u", &k)));
        match certify_power(&x, 2, 0) {
            CertOutcome::Certified(c) => c.validate(x.pair()).unwrap(),
            other => panic!("{other:?}"),
        }
        assert!(matches!(certify_power(&x, 3, 0), CertOutcome::NotMember));
    }

    #[test]
    fn span_search_finds_simple_product() {
        let k = FieldSpec::f2t();
        let (t, one) = (el("t", &k), el("1", &k));
        let c = Certificate::single(FormalExpr::gen(GenSymbol::tau(1, &t, &one)), vec![JFactor::d_tau(1, &t)]);
        let x = c.element().forget_formal();
        match certify_power(&x, 1, 1) {
            CertOutcome::Certified(c) => c.validate(x.pair()).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn u_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        let eta = DiffForm::term(&t, 1);
        let img = u_form(0, &eta).eval();
        assert_eq!(img.x, &TensorElem::elementary(&t, &el("1", &k)) * &TensorElem::delta(&t));
        let s = DRWSymbol::new(1, vec![DrwTerm { kind: DrwKind::V, a: 1, eta: eta.clone() }]).unwrap();
        let c = u_eval(&s).unwrap();
        let dt = TensorElem::delta(&t);
        assert_eq!(c.rep.pair(), &Pair { x: &dt * &dt, y: TensorElem::zero(&k) });
        assert_eq!(c.rep.pair(), &drw_pattern(&eta, &DiffForm::zero(&k, 1).unwrap()));
        let zero = DRWSymbol::new(1, vec![DrwTerm { kind: DrwKind::DV, a: 1, eta: DiffForm::zero(&k, 0).unwrap() }]).unwrap();
        assert!(u_eval(&zero).unwrap().rep.is_zero());
    }

    #[test]
    fn trunc0_dimensions() {
        let k = FieldSpec::f2tu();
        let r = trunc0_report(&k, 1);
        assert_eq!((r.dimension, r.expected), (2, 2));
        assert!(r.independent && r.u_matches_basis);
        assert_eq!(trunc0_report(&FieldSpec::f2t(), 2).dimension, 0);
        assert_eq!(trunc0_report(&k, 0).dimension, 1);
    }

    #[test]
    fn key1_examples() {
        let k = FieldSpec::f2t();
        let mu: BTreeMap<_, _> = [(0, el("t^2", &k))].into();
        match key1_check(&k, &mu, 1).unwrap() {
            Key1Outcome::Divisible(w) => assert_eq!(w.terms.len(), 1),
            other => panic!("{other:?}"),
        }
        let mu: BTreeMap<_, _> = [(0, el("t", &k))].into();
        assert!(matches!(key1_check(&k, &mu, 1).unwrap(), Key1Outcome::NotApplicable { j1_degree: Some(1) }));
        assert!(matches!(key1_check(&k, &BTreeMap::new(), 1).unwrap(), Key1Outcome::Divisible(_)));
    }

    #[test]
    fn key1_on_frobenius_images() {
        let k = FieldSpec::f2tu();
        let mut r = random::rng(3);
        for p in 0..=2 {
            for _ in 0..20 {
                let mu = random_frobenius_image(&k, p, &mut r);
                assert!(matches!(key1_check(&k, &mu, p + 1).unwrap(), Key1Outcome::Divisible(_)), "{mu:?}");
            }
        }
    }

    #[test]
    fn key2_examples() {
        let k = FieldSpec::f2tu();
        let (t, u, one) = (el("t", &k), el("u", &k), el("1", &k));
        let fam3 = FormalExpr::gen(GenSymbol::vtau(1, 0, &t, &u)).add(&FormalExpr::gen(GenSymbol::vtau(1, 0, &(&t * &u), &one))).unwrap();
        let c = Certificate::single(FormalExpr::one(&k, 1), vec![JFactor::General(fam3), JFactor::d_tau(1, &t)]);
        let z = c.eval().x;
        assert!(c.eval().y.is_zero());
        assert!(key2_check(&z, 1, 1, Some(&c)).unwrap());
        assert!(key2_check(&TensorElem::zero(&k), 1, 0, Some(&Certificate::zero(&k, 1, 1))).unwrap());
        assert_eq!(key2_check(&z, 1, 1, None), Err(ComplexError::MissingCertificate));
    }

    #[test]
    fn small_axiom_suite() {
        let k = FieldSpec::f2tu();
        let rep = axiom_suite(&k, 2, 2, 40, 7);
        assert!(rep.ok(), "{:?}", rep.failures.first());
    }
}
