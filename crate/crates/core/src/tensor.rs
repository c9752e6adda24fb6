//! The ring k ⊗_S k with the swap involution w.
//!
//! Elements are stored by their left coordinates: x = Σ_ξ c_ξ (1 ⊗ x^ξ).
//! The S-basis cell (α, β) stands for x^α ⊗ x^β.

use crate::field::{popcount, subset_cmp, FieldElem, FieldSpec, SubsetIndex};
use crate::linalg::BitMatrix;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("element is not fixed by the involution")]
    NotFixed,
    #[error("malformed tensor JSON: {0}")]
    Json(String),
}

#[derive(Clone)]
pub struct TensorElem {
    spec: Arc<FieldSpec>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for TensorElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for TensorElem {}

/// Coefficients u_{αβ} ∈ S of x^α ⊗ x^β, row-major in (α, β).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBasisMatrix {
    n: usize,
    cells: Vec<FieldElem>,
}

impl SBasisMatrix {
    pub fn get(&self, alpha: SubsetIndex, beta: SubsetIndex) -> &FieldElem {
        &self.cells[alpha as usize * self.n + beta as usize]
    }

    pub fn set(&mut self, alpha: SubsetIndex, beta: SubsetIndex, u: FieldElem) {
        assert!(u.is_square(), "S-basis coefficient must be a square");
        self.cells[alpha as usize * self.n + beta as usize] = u;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let cells = (0..n * n).map(|i| self.cells[(i % n) * n + i / n].clone()).collect();
        SBasisMatrix { n, cells }
    }
}

/// A class in (k ⊗_S k)/Im(1+w), held by its normal-form representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotClass {
    rep: TensorElem,
}

impl QuotClass {
    pub fn representative(&self) -> &TensorElem {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// Square roots of the S-basis cells, row-major in (α, β).
struct CellRoots {
    n: usize,
    r: Vec<FieldElem>,
}

impl CellRoots {
    fn at(&self, a: usize, b: usize) -> &FieldElem {
        &self.r[a * self.n + b]
    }
}

impl TensorElem {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        TensorElem { spec: spec.clone(), coeffs: vec![FieldElem::zero(spec); spec.basis_size()] }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::unit(spec, 0)
    }

    /// 1 ⊗ x^ξ.
    pub fn unit(spec: &Arc<FieldSpec>, xi: SubsetIndex) -> Self {
        let mut z = Self::zero(spec);
        z.coeffs[xi as usize] = FieldElem::one(spec);
        z
    }

    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), spec.basis_size());
        TensorElem { spec: spec.clone(), coeffs }
    }

    /// a ⊗ b.
    pub fn elementary(a: &FieldElem, b: &FieldElem) -> Self {
        let spec = a.spec();
        if a.is_zero() || b.is_zero() {
            return Self::zero(spec);
        }
        let coeffs = b.square_decomp().into_parts().into_iter().map(|s| a * &s.square()).collect();
        TensorElem { spec: spec.clone(), coeffs }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeff(&self, xi: SubsetIndex) -> &FieldElem {
        &self.coeffs[xi as usize]
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn support(&self) -> impl Iterator<Item = (SubsetIndex, &FieldElem)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as SubsetIndex, c))
    }

    /// Sum of total degrees of the coefficients; a size measure.
    pub fn height(&self) -> u32 {
        self.coeffs.iter().map(|c| c.height()).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        TensorElem { spec: self.spec.clone(), coeffs }
    }

    /// Left multiplication by a ∈ k.
    pub fn left_scalar(&self, a: &FieldElem) -> Self {
        let coeffs = self.coeffs.iter().map(|c| a * c).collect();
        TensorElem { spec: self.spec.clone(), coeffs }
    }

    /// (1⊗x^ξ)(1⊗x^η) = (∏_{i∈ξ∩η} t_i²) (1⊗x^{ξΔη}).
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.spec);
        for (xi, a) in self.support() {
            for (eta, b) in o.support() {
                let both = xi & eta;
                let mut c = a * b;
                if both != 0 {
                    c = &c * &FieldElem::basis_monomial(&self.spec, both).square();
                }
                let k = (xi ^ eta) as usize;
                out.coeffs[k] = &out.coeffs[k] + &c;
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.spec), |acc, _| acc.mul(self))
    }

    fn cell_roots(&self) -> CellRoots {
        let n = self.spec.basis_size();
        let mut r = vec![FieldElem::zero(&self.spec); n * n];
        for (beta, c) in self.support() {
            for (alpha, s) in c.square_decomp().into_parts().into_iter().enumerate() {
                r[alpha * n + beta as usize] = s;
            }
        }
        CellRoots { n, r }
    }

    fn from_cell_roots(spec: &Arc<FieldSpec>, roots: &CellRoots) -> Self {
        let n = roots.n;
        let mut out = Self::zero(spec);
        for beta in 0..n {
            let mut c = FieldElem::zero(spec);
            for alpha in 0..n {
                let s = roots.at(alpha, beta);
                if !s.is_zero() {
                    c = &c + &(&s.square() * &FieldElem::basis_monomial(spec, alpha as SubsetIndex));
                }
            }
            out.coeffs[beta] = c;
        }
        out
    }

    pub fn to_s_basis(&self) -> SBasisMatrix {
        let roots = self.cell_roots();
        SBasisMatrix { n: roots.n, cells: roots.r.iter().map(|s| s.square()).collect() }
    }

    pub fn from_s_basis(spec: &Arc<FieldSpec>, m: &SBasisMatrix) -> Self {
        let r = m.cells.iter().map(|u| u.sqrt().expect("S-basis coefficient is not a square")).collect();
        Self::from_cell_roots(spec, &CellRoots { n: m.n, r })
    }

    /// The swap a⊗b ↦ b⊗a, by transposing S-basis cells.
    pub fn w(&self) -> Self {
        let roots = self.cell_roots();
        let n = roots.n;
        let r = (0..n * n).map(|i| roots.r[(i % n) * n + i / n].clone()).collect();
        Self::from_cell_roots(&self.spec, &CellRoots { n, r })
    }

    pub fn mu(&self) -> FieldElem {
        self.support()
            .fold(FieldElem::zero(&self.spec), |acc, (xi, c)| &acc + &(c * &FieldElem::basis_monomial(&self.spec, xi)))
    }

    pub fn is_fixed(&self) -> bool {
        let r = self.cell_roots();
        (0..r.n).all(|a| (0..a).all(|b| r.at(a, b) == r.at(b, a)))
    }

    pub fn in_image_1pw(&self) -> bool {
        let r = self.cell_roots();
        (0..r.n).all(|a| r.at(a, a).is_zero() && (0..a).all(|b| r.at(a, b) == r.at(b, a)))
    }

    /// Normal form modulo Im(1+w): each cell (α, β) with α < β is folded
    /// into (β, α).
    pub fn pi_quotient(&self) -> QuotClass {
        let roots = self.cell_roots();
        let n = roots.n;
        let mut r = roots.r.clone();
        for a in 0..n {
            for b in 0..n {
                if subset_cmp(a as SubsetIndex, b as SubsetIndex) == Ordering::Less {
                    let moved = std::mem::replace(&mut r[a * n + b], FieldElem::zero(&self.spec));
                    r[b * n + a] = &r[b * n + a] + &moved;
                }
            }
        }
        QuotClass { rep: Self::from_cell_roots(&self.spec, &CellRoots { n, r }) }
    }

    /// The class of Σ_β c_β² x^β (1⊗x^β); diagonal, hence already normal.
    pub fn phi_bar(&self) -> QuotClass {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(beta, c)| &c.square() * &FieldElem::basis_monomial(&self.spec, beta as SubsetIndex))
            .collect();
        QuotClass { rep: TensorElem { spec: self.spec.clone(), coeffs } }
    }

    /// The preimage under φ̄ of the diagonal part of π(x).
    pub fn phi_inv_pi(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(beta, c)| {
                if c.is_zero() {
                    c.clone()
                } else {
                    c.square_decomp().get(beta as SubsetIndex).clone()
                }
            })
            .collect();
        TensorElem { spec: self.spec.clone(), coeffs }
    }

    /// Kernel of π − φ on fixed elements.
    pub fn tcr_kernel_test(&self) -> Result<bool, TensorError> {
        if !self.is_fixed() {
            return Err(TensorError::NotFixed);
        }
        Ok(self.pi_quotient() == self.phi_bar())
    }

    /// Δ(a) = 1⊗a + a⊗1.
    pub fn delta(a: &FieldElem) -> Self {
        let spec = a.spec();
        let mut coeffs: Vec<FieldElem> = a.square_decomp().into_parts().into_iter().map(|s| s.square()).collect();
        coeffs[0] = &coeffs[0] + a;
        TensorElem { spec: spec.clone(), coeffs }
    }

    /// Δ(x)^ν = ∏_{i∈ν} Δ(x_i).
    pub fn delta_pow(spec: &Arc<FieldSpec>, nu: SubsetIndex) -> Self {
        let mut coeffs = vec![FieldElem::zero(spec); spec.basis_size()];
        // Δ(x)^ν = Σ_{ξ⊆ν} x^{ν∖ξ} (1⊗x^ξ)
        let mut xi = nu;
        loop {
            coeffs[xi as usize] = FieldElem::basis_monomial(spec, nu & !xi);
            if xi == 0 {
                break;
            }
            xi = (xi - 1) & nu;
        }
        TensorElem { spec: spec.clone(), coeffs }
    }

    /// Coordinates c'_ν with x = Σ_ν c'_ν Δ(x)^ν.
    pub fn delta_basis_coords(&self) -> Vec<FieldElem> {
        triangular(&self.spec, &self.coeffs)
    }

    pub fn from_delta_coords(spec: &Arc<FieldSpec>, coords: &[FieldElem]) -> Self {
        TensorElem { spec: spec.clone(), coeffs: triangular(spec, coords) }
    }

    /// min |ν| over the Δ-support; None for zero.
    pub fn j1_degree(&self) -> Option<u32> {
        self.delta_basis_coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(nu, _)| popcount(nu as SubsetIndex))
            .min()
    }

    pub fn in_j1_power(&self, q: u32) -> bool {
        self.j1_degree().is_none_or(|j| j >= q)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.support().map(|(xi, c)| json!([xi, c.to_string()])).collect())
    }

    pub fn from_json(v: &Value, spec: &Arc<FieldSpec>) -> Result<Self, TensorError> {
        let bad = |m: &str| TensorError::Json(m.to_string());
        let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
        let mut out = Self::zero(spec);
        for item in arr {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected [mask, element]"))?;
            let mask = pair[0].as_u64().filter(|&m| (m as usize) < spec.basis_size()).ok_or_else(|| bad("bad mask"))?;
            let text = pair[1].as_str().ok_or_else(|| bad("element must be a string"))?;
            let c = FieldElem::parse(text, spec).map_err(|e| TensorError::Json(e.to_string()))?;
            out.coeffs[mask as usize] = &out.coeffs[mask as usize] + &c;
        }
        Ok(out)
    }
}

fn triangular(spec: &Arc<FieldSpec>, c: &[FieldElem]) -> Vec<FieldElem> {
    let n = c.len();
    (0..n)
        .map(|nu| {
            let mut acc = FieldElem::zero(spec);
            for (xi, cx) in c.iter().enumerate() {
                if xi & nu == nu && !cx.is_zero() {
                    acc = &acc + &(cx * &FieldElem::basis_monomial(spec, (xi & !nu) as SubsetIndex));
                }
            }
            acc
        })
        .collect()
}

/// n-th power of φ on an elementary tensor: b^(2^n - 1) a^(2^n) ⊗ b.
pub fn phi_power(n: u32, a: &FieldElem, b: &FieldElem) -> TensorElem {
    let b_pow = b.pow((1i64 << n) - 1).expect("nonnegative exponent");
    TensorElem::elementary(&(&b_pow * &a.frobenius_pow(n)), b)
}

/// φ(a⊗b) = b a² ⊗ b.
pub fn phi_elementary(a: &FieldElem, b: &FieldElem) -> TensorElem {
    phi_power(1, a, b)
}

pub fn format_subset(spec: &FieldSpec, xi: SubsetIndex) -> String {
    if xi == 0 {
        "1".into()
    } else {
        crate::field::subset_elements(xi).map(|i| spec.names()[i].clone()).collect::<Vec<_>>().join("*")
    }
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<SubsetIndex> = self.support().map(|(xi, _)| xi).collect();
        if order.is_empty() {
            return write!(f, "0");
        }
        order.sort_by(|&a, &b| subset_cmp(a, b));
        let parts: Vec<String> =
            order.iter().map(|&xi| format!("{} (1 (x) {})", self.coeff(xi), format_subset(&self.spec, xi))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&TensorElem> for &TensorElem {
    type Output = TensorElem;
    fn add(self, o: &TensorElem) -> TensorElem {
        TensorElem::add(self, o)
    }
}

impl Mul<&TensorElem> for &TensorElem {
    type Output = TensorElem;
    fn mul(self, o: &TensorElem) -> TensorElem {
        TensorElem::mul(self, o)
    }
}

/// S-dimensions from the chain complex built on 1 + w.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BredonReport {
    pub d: usize,
    pub n: u32,
    pub cells: usize,
    pub rank_1pw: usize,
    pub fixed_dim: usize,
    pub image_dim: usize,
    pub quotient_dim: usize,
    /// Homology dimension in degrees 0..=2n+1.
    pub homology: Vec<usize>,
}

pub fn bredon_homology(d: usize, n: u32) -> BredonReport {
    let m = 1usize << d;
    let cells = m * m;
    let mut mat = BitMatrix::zeros(cells, cells);
    for a in 0..m {
        for b in 0..m {
            let src = a * m + b;
            mat.flip(src, src);
            mat.flip(b * m + a, src);
        }
    }
    let rank = mat.rank();
    let fixed = cells - rank;
    let quotient = fixed - rank;
    let top = 2 * n as usize;
    let homology = (0..=top + 1)
        .map(|i| {
            if n == 0 {
                if i == 0 { fixed } else { 0 }
            } else if i == top {
                fixed
            } else if i >= n as usize && i < top {
                quotient
            } else {
                0
            }
        })
        .collect();
    BredonReport { d, n, cells, rank_1pw: rank, fixed_dim: fixed, image_dim: rank, quotient_dim: quotient, homology }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, k: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, k).unwrap()
    }

    #[test]
    fn basic_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        let one = FieldElem::one(&k);
        let x = TensorElem::unit(&k, 1);
        assert_eq!(x.mul(&x), TensorElem::one(&k).left_scalar(&el("t^2", &k)));
        assert_eq!(TensorElem::elementary(&t, &one).w(), x);
        let d = TensorElem::delta(&t);
        assert_eq!(d.w(), d);
        assert!(d.mu().is_zero());
        assert!(TensorElem::delta(&el("t^2", &k)).is_zero());
        assert_eq!(TensorElem::delta(&el("t^3", &k)), d.left_scalar(&el("t^2", &k)));
        assert_eq!(phi_power(2, &t, &t), TensorElem::elementary(&el("t^7", &k), &t));
    }

    #[test]
    fn s_basis_examples() {
        let k = FieldSpec::f2t();
        let m = TensorElem::elementary(&el("t^3", &k), &el("t", &k)).to_s_basis();
        assert_eq!(m.get(1, 1), &el("t^2", &k));
        assert!(m.get(0, 0).is_zero() && m.get(0, 1).is_zero() && m.get(1, 0).is_zero());
    }

    #[test]
    fn quotient_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        let tt = TensorElem::elementary(&t, &t);
        assert!(TensorElem::delta(&t).pi_quotient().is_zero());
        assert!(tt.is_fixed());
        assert!(!tt.in_image_1pw());
        assert_eq!(tt.phi_inv_pi(), TensorElem::unit(&k, 1));
        assert_eq!(TensorElem::unit(&k, 1).phi_bar(), tt.pi_quotient());
        let expected = tt.add(&TensorElem::one(&k).left_scalar(&el("t^2", &k)));
        assert_eq!(TensorElem::delta(&t).phi_bar().representative(), &expected);
    }

    #[test]
    fn kernel_examples() {
        let k = FieldSpec::f2t();
        let t = el("t", &k);
        assert!(TensorElem::elementary(&t.inv().unwrap(), &t).tcr_kernel_test().unwrap());
        assert!(TensorElem::one(&k).tcr_kernel_test().unwrap());
        assert!(!TensorElem::elementary(&t, &t).tcr_kernel_test().unwrap());
        assert_eq!(TensorElem::elementary(&t, &FieldElem::one(&k)).tcr_kernel_test(), Err(TensorError::NotFixed));
    }

    #[test]
    fn delta_coords() {
        let k = FieldSpec::f2t();
        let c = TensorElem::unit(&k, 1).delta_basis_coords();
        assert_eq!(c, vec![el("t", &k), el("1", &k)]);
        let k2 = FieldSpec::f2tu();
        let p = TensorElem::delta(&el("t", &k2)).mul(&TensorElem::delta(&el("u", &k2)));
        assert_eq!(p, TensorElem::delta_pow(&k2, 0b11));
        assert_eq!(p.j1_degree(), Some(2));
        assert_eq!(TensorElem::one(&k).j1_degree(), Some(0));
        assert_eq!(TensorElem::zero(&k).j1_degree(), None);
    }

    #[test]
    fn bredon_small() {
        let r = bredon_homology(1, 1);
        assert_eq!((r.fixed_dim, r.image_dim, r.quotient_dim), (3, 1, 2));
        assert_eq!(r.homology, vec![0, 2, 3, 0]);
        let r = bredon_homology(2, 2);
        assert_eq!((r.fixed_dim, r.image_dim, r.quotient_dim), (10, 6, 4));
        assert_eq!(bredon_homology(1, 0).homology, vec![3, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let k = FieldSpec::f2tu();
        let x = TensorElem::delta(&el("t*u+t/u", &k));
        assert_eq!(TensorElem::from_json(&x.to_json(), &k).unwrap(), x);
    }
}
