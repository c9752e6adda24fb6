//! Symmetric bilinear forms, the symmetric Witt group as ker(π − φ), the
//! quadratic side as its cokernel, and the trace of a symmetric matrix.

use crate::field::{FieldElem, FieldSpec, SubsetIndex};
use crate::linalg::{inverse_k, mat_mul_k, transpose};
use crate::poly::Monomial;
use crate::tensor::{QuotClass, TensorElem};
use serde_json::Value;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("zero diagonal entry")]
    ZeroInput,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("no provenance recorded")]
    MissingProvenance,
    #[error("congruence witness does not produce the claimed block form")]
    BadWitness,
    #[error("malformed matrix: {0}")]
    Parse(String),
}

/// A symmetric matrix over k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    rows: Vec<Vec<FieldElem>>,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<FieldElem>>) -> Result<Self, FormsError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(FormsError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(FormsError::NotSymmetric);
                }
            }
        }
        Ok(SymMatrix { rows })
    }

    pub fn diagonal(entries: &[FieldElem]) -> Self {
        let spec = entries[0].spec();
        let n = entries.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { FieldElem::zero(spec) }).collect())
            .collect();
        SymMatrix { rows }
    }

    pub fn identity(spec: &Arc<FieldSpec>, n: usize) -> Self {
        Self::diagonal(&vec![FieldElem::one(spec); n])
    }

    /// [[0, 1], [1, c]].
    pub fn hyperbolic(c: &FieldElem) -> Self {
        let spec = c.spec();
        let (z, o) = (FieldElem::zero(spec), FieldElem::one(spec));
        SymMatrix { rows: vec![vec![z, o.clone()], vec![o, c.clone()]] }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.rows[i][j]
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.rows[0][0].spec()
    }

    pub fn inverse(&self) -> Result<Vec<Vec<FieldElem>>, FormsError> {
        inverse_k(&self.rows, self.spec()).map_err(|_| FormsError::Singular)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn block_sum(&self, o: &Self) -> Self {
        let spec = self.spec();
        let (n, m) = (self.size(), o.size());
        let mut rows = vec![vec![FieldElem::zero(spec); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = self.rows[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                rows[n + i][n + j] = o.rows[i][j].clone();
            }
        }
        SymMatrix { rows }
    }

    /// g M gᵀ.
    pub fn congruent(&self, g: &[Vec<FieldElem>]) -> Self {
        let spec = self.spec();
        let gm = mat_mul_k(g, &self.rows, spec);
        SymMatrix { rows: mat_mul_k(&gm, &transpose(g), spec) }
    }

    pub fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, FormsError> {
        let arr = v.as_array().ok_or_else(|| FormsError::Parse("expected an array of rows".into()))?;
        let mut rows = Vec::new();
        for r in arr {
            let cells = r.as_array().ok_or_else(|| FormsError::Parse("row is not an array".into()))?;
            let row = cells
                .iter()
                .map(|c| {
                    let s = c.as_str().ok_or_else(|| FormsError::Parse("entry is not a string".into()))?;
                    FieldElem::parse(s, spec).map_err(|e| FormsError::Parse(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(FormsError::Parse("empty matrix".into()));
        }
        Self::new(rows)
    }
}

/// A kernel representative of π − φ, optionally with the diagonal symbols it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct WittClassS {
    pub rep: TensorElem,
    pub provenance: Option<Vec<FieldElem>>,
}

impl WittClassS {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        WittClassS { rep: TensorElem::zero(spec), provenance: Some(Vec::new()) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let provenance = match (&self.provenance, &o.provenance) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        WittClassS { rep: &self.rep + &o.rep, provenance }
    }

    pub fn in_kernel(&self) -> bool {
        self.rep.tcr_kernel_test().unwrap_or(false)
    }
}

/// ⟨a⟩ ↦ a⁻¹ ⊗ a.
pub fn diag_class(a: &FieldElem) -> Result<WittClassS, FormsError> {
    let inv = a.inv().map_err(|_| FormsError::ZeroInput)?;
    let rep = TensorElem::elementary(&inv, a);
    assert!(rep.tcr_kernel_test().unwrap_or(false), "a⁻¹⊗a must lie in the kernel");
    Ok(WittClassS { rep, provenance: Some(vec![a.clone()]) })
}

/// ⟨a⟩ + ⟨b⟩ = ⟨a+b⟩ + ⟨ab(a+b)⟩.
pub fn witt_relation_check(a: &FieldElem, b: &FieldElem) -> Result<bool, FormsError> {
    let s = a + b;
    let p = &(a * b) * &s;
    if a.is_zero() || b.is_zero() || s.is_zero() {
        return Err(FormsError::Degenerate("a, b and a+b must be nonzero".into()));
    }
    let lhs = diag_class(a)?.add(&diag_class(b)?);
    let rhs = diag_class(&s)?.add(&diag_class(&p)?);
    Ok(lhs.rep == rhs.rep)
}

/// Rank modulo 2, from the number of diagonal symbols.
pub fn fundamental_ideal_rank(x: &WittClassS) -> Result<u8, FormsError> {
    x.provenance.as_ref().map(|p| (p.len() % 2) as u8).ok_or(FormsError::MissingProvenance)
}

/// Σ_i (x⁻¹)_ii ⊗ x_ii + (x⁻¹)_ii x_ii ⊗ 1, plus n ⊗ 1.
pub fn trace_symmetric(m: &SymMatrix) -> Result<TensorElem, FormsError> {
    let spec = m.spec();
    let inv = m.inverse()?;
    let one = FieldElem::one(spec);
    let mut acc = TensorElem::zero(spec);
    for (i, row) in inv.iter().enumerate() {
        let (a, b) = (&row[i], m.get(i, i));
        acc = &acc + &TensorElem::elementary(a, b);
        acc = &acc + &TensorElem::elementary(&(a * b), &one);
    }
    if m.size() % 2 == 1 {
        acc = &acc + &TensorElem::one(spec);
    }
    Ok(acc)
}

/// Checks that g M gᵀ = [[0,1],[1,c]] ⊕ N and compares tr(M) with tr(N).
pub fn hyperbolic_vanishing(m: &SymMatrix, g: &[Vec<FieldElem>]) -> Result<bool, FormsError> {
    let n = m.congruent(g);
    let size = n.size();
    if size < 2 || !n.get(0, 0).is_zero() || !n.get(0, 1).is_one() {
        return Err(FormsError::BadWitness);
    }
    for i in 0..2 {
        for j in 2..size {
            if !n.get(i, j).is_zero() {
                return Err(FormsError::BadWitness);
            }
        }
    }
    let rest = if size > 2 {
        let rows = (2..size).map(|i| n.rows[i][2..].to_vec()).collect();
        trace_symmetric(&SymMatrix::new(rows)?)?
    } else {
        TensorElem::zero(m.spec())
    };
    Ok(trace_symmetric(m)? == rest)
}

#[derive(Clone, Debug)]
pub enum QuadOutcome {
    /// x ≡ (π − φ)(y).
    InImage { preimage: TensorElem },
    /// Reduced modulo the image of the searched span; no claim about nonvanishing.
    Unresolved { bound: u32, normal: QuotClass },
}

type BitKey = (SubsetIndex, Monomial, u32);

fn tensor_bits(t: &TensorElem) -> Option<Vec<BitKey>> {
    let mut out = Vec::new();
    for (xi, c) in t.support() {
        if !c.is_polynomial() {
            return None;
        }
        for &(m, coef) in c.num().terms() {
            for bit in 0..16 {
                if coef >> bit & 1 == 1 {
                    out.push((xi, m, bit));
                }
            }
        }
    }
    Some(out)
}

fn fixed_candidates(spec: &Arc<FieldSpec>, bound: u32) -> Vec<TensorElem> {
    let d = spec.d();
    let mut mons = Vec::new();
    let mut exps = vec![0u32; d];
    loop {
        if exps.iter().sum::<u32>() <= bound {
            mons.push(Monomial::from_exps(&exps));
        }
        let mut i = 0;
        loop {
            if i == d {
                break;
            }
            exps[i] += 1;
            if exps[i] <= bound {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    let consts: Vec<u16> = (0..spec.e()).map(|b| 1u16 << b).collect();
    let elems: Vec<FieldElem> =
        mons.iter().flat_map(|&m| consts.iter().map(move |&c| (m, c))).map(|(m, c)| FieldElem::monomial(spec, m, c)).collect();
    let mut out = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        out.push(TensorElem::elementary(a, a));
        for b in &elems[i + 1..] {
            out.push(&TensorElem::elementary(a, b) + &TensorElem::elementary(b, a));
        }
    }
    out
}

/// Reduces the class of x in the cokernel of π − φ against a degree-bounded
/// span of fixed elements.
pub fn quad_class_reduce(x: &TensorElem, bound: u32) -> QuadOutcome {
    let spec = x.spec().clone();
    let target = x.pi_quotient();
    let unresolved = |normal: QuotClass| QuadOutcome::Unresolved { bound, normal };
    let Some(tbits) = tensor_bits(target.representative()) else { return unresolved(target) };
    let cands = fixed_candidates(&spec, bound);
    let mut keys: HashMap<BitKey, usize> = HashMap::new();
    let mut key_list: Vec<BitKey> = Vec::new();
    let mut idx = |k: BitKey| {
        *keys.entry(k).or_insert_with(|| {
            key_list.push(k);
            key_list.len() - 1
        })
    };
    let tset: Vec<usize> = tbits.into_iter().map(&mut idx).collect();
    let mut rows: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (j, y) in cands.iter().enumerate() {
        let img = &y.pi_quotient().representative().clone() + y.phi_bar().representative();
        let Some(bits) = tensor_bits(&img) else { continue };
        rows.push((bits.into_iter().map(&mut idx).collect(), vec![j]));
    }
    let width = keys.len();
    let to_vec = |s: &[usize]| {
        let mut v = vec![false; width];
        for &i in s {
            v[i] ^= true;
        }
        v
    };
    // Gaussian elimination with combination tracking
    let mut basis: Vec<(usize, Vec<bool>, Vec<bool>)> = Vec::new();
    for (bits, comb) in &rows {
        let mut v = to_vec(bits);
        let mut c = vec![false; cands.len()];
        for &j in comb {
            c[j] = true;
        }
        for (p, bv, bc) in &basis {
            if v[*p] {
                xor(&mut v, bv);
                xor(&mut c, bc);
            }
        }
        if let Some(p) = v.iter().position(|&b| b) {
            for (_, bv, bc) in basis.iter_mut() {
                if bv[p] {
                    xor(bv, &v);
                    xor(bc, &c);
                }
            }
            basis.push((p, v, c));
        }
    }
    let mut v = to_vec(&tset);
    let mut c = vec![false; cands.len()];
    for (p, bv, bc) in &basis {
        if v[*p] {
            xor(&mut v, bv);
            xor(&mut c, bc);
        }
    }
    if v.iter().all(|&b| !b) {
        let preimage = cands.iter().zip(&c).filter(|(_, &on)| on).fold(TensorElem::zero(&spec), |acc, (y, _)| &acc + y);
        return QuadOutcome::InImage { preimage };
    }
    let mut coeffs = vec![FieldElem::zero(&spec); spec.basis_size()];
    for (i, &on) in v.iter().enumerate() {
        if on {
            let (xi, m, bit) = key_list[i];
            coeffs[xi as usize] = &coeffs[xi as usize] + &FieldElem::monomial(&spec, m, 1 << bit);
        }
    }
    unresolved(TensorElem::from_coeffs(&spec, coeffs).pi_quotient())
}

fn xor(a: &mut [bool], b: &[bool]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, k: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, k).unwrap()
    }

    #[test]
    fn diag_examples() {
        let k = FieldSpec::f2tu();
        let (t, u) = (el("t", &k), el("u", &k));
        assert_eq!(diag_class(&t).unwrap().rep, TensorElem::elementary(&t.inv().unwrap(), &t));
        let ac2 = &t * &u.square();
        assert_eq!(diag_class(&ac2).unwrap().rep, diag_class(&t).unwrap().rep);
        assert_eq!(diag_class(&el("1", &k)).unwrap().rep, TensorElem::one(&k));
        assert_eq!(diag_class(&el("0", &k)), Err(FormsError::ZeroInput));
    }

    #[test]
    fn relation_and_rank() {
        let k = FieldSpec::f2t();
        let (t, one) = (el("t", &k), el("1", &k));
        assert!(witt_relation_check(&t, &one).unwrap());
        assert!(witt_relation_check(&t, &el("t+1", &k)).unwrap());
        assert!(witt_relation_check(&t, &t).is_err());
        let kk = FieldSpec::f2tu();
        let a = diag_class(&el("t", &kk)).unwrap();
        assert_eq!(fundamental_ideal_rank(&a).unwrap(), 1);
        assert_eq!(fundamental_ideal_rank(&a.add(&diag_class(&el("u", &kk)).unwrap())).unwrap(), 0);
        assert_eq!(fundamental_ideal_rank(&WittClassS::zero(&kk)).unwrap(), 0);
    }

    #[test]
    fn trace_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        assert_eq!(trace_symmetric(&SymMatrix::diagonal(&[t.clone()])).unwrap(), TensorElem::elementary(&t.inv().unwrap(), &t));
        assert!(trace_symmetric(&SymMatrix::hyperbolic(&el("0", &k))).unwrap().is_zero());
        assert!(trace_symmetric(&SymMatrix::identity(&k, 2)).unwrap().is_zero());
        let m = SymMatrix::new(vec![vec![t.clone(), el("1", &k)], vec![el("1", &k), el("t+1", &k)]]).unwrap();
        assert!(trace_symmetric(&m).unwrap().tcr_kernel_test().unwrap());
    }

    #[test]
    fn hyperbolic_with_witness() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        let h = SymMatrix::hyperbolic(&t);
        let g = vec![vec![el("1", &k), el("t", &k)], vec![el("0", &k), el("1", &k)]];
        let ginv = inverse_k(&g, &k).unwrap();
        let m = h.congruent(&ginv);
        assert!(hyperbolic_vanishing(&m, &g).unwrap());
    }

    #[test]
    fn quad_reduce_examples() {
        let k = FieldSpec::f2t();
        let y = TensorElem::elementary(&el("t", &k), &el("t", &k));
        let img = &y.pi_quotient().representative().clone() + y.phi_bar().representative();
        assert!(matches!(quad_class_reduce(&img, 1), QuadOutcome::InImage { .. }));
        let w = &TensorElem::elementary(&el("t", &k), &el("1", &k)) + &TensorElem::elementary(&el("1", &k), &el("t", &k));
        assert!(matches!(quad_class_reduce(&w, 0), QuadOutcome::InImage { .. }));
        let _ = quad_class_reduce(&y, 1);
    }
}
