//! Differential forms Ω*_k on the basis dx_1, ..., dx_d.
//!
//! A q-form Σ λ_ξ (dx)^ξ is split into cells (ξ, α) by writing
//! λ_ξ = Σ_α s_{ξ,α}^2 x^α. The differential is S-linear with a 0/1 matrix
//! on cells, so exactness questions reduce to elimination over GF(2).

use crate::field::{popcount, subset_cmp, subset_elements, FieldElem, FieldSpec, SubsetIndex};
use crate::linalg::{solve_f2_system, BitMatrix};
use crate::tensor::format_subset;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("form degree {0} exceeds the number of variables {1}")]
    DegreeOverflow(u32, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("subset {0:#b} does not have the form degree")]
    BadSubset(SubsetIndex),
}

#[derive(Clone)]
pub struct DiffForm {
    spec: Arc<FieldSpec>,
    q: u32,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for DiffForm {
    fn eq(&self, o: &Self) -> bool {
        self.q == o.q && self.coeffs == o.coeffs
    }
}
impl Eq for DiffForm {}

/// Outcome of the bounded reduction modulo exact forms and Im(1 - C^-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsClass {
    Reduced(DiffForm),
    Unresolved { partial: DiffForm, bound: usize },
}

impl DiffForm {
    pub fn zero(spec: &Arc<FieldSpec>, q: u32) -> Result<Self, FormError> {
        if q as usize > spec.d() {
            return Err(FormError::DegreeOverflow(q, spec.d()));
        }
        Ok(DiffForm { spec: spec.clone(), q, coeffs: vec![FieldElem::zero(spec); spec.basis_size()] })
    }

    /// λ (dx)^ξ.
    pub fn term(lambda: &FieldElem, xi: SubsetIndex) -> Self {
        let spec = lambda.spec();
        let mut f = Self::zero(spec, popcount(xi)).unwrap();
        f.coeffs[xi as usize] = lambda.clone();
        f
    }

    pub fn function(a: &FieldElem) -> Self {
        Self::term(a, 0)
    }

    pub fn from_terms(spec: &Arc<FieldSpec>, q: u32, terms: &[(SubsetIndex, FieldElem)]) -> Result<Self, FormError> {
        let mut f = Self::zero(spec, q)?;
        for (xi, c) in terms {
            if popcount(*xi) != q || *xi as usize >= spec.basis_size() {
                return Err(FormError::BadSubset(*xi));
            }
            f.coeffs[*xi as usize] = &f.coeffs[*xi as usize] + c;
        }
        Ok(f)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.q
    }

    pub fn coeff(&self, xi: SubsetIndex) -> &FieldElem {
        &self.coeffs[xi as usize]
    }

    pub fn support(&self) -> impl Iterator<Item = (SubsetIndex, &FieldElem)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as SubsetIndex, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn height(&self) -> u32 {
        self.coeffs.iter().map(|c| c.height()).sum()
    }

    pub fn add(&self, o: &Self) -> Result<Self, FormError> {
        if self.q != o.q {
            return Err(FormError::DegreeMismatch(self.q, o.q));
        }
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(DiffForm { spec: self.spec.clone(), q: self.q, coeffs })
    }

    pub fn scale(&self, a: &FieldElem) -> Self {
        DiffForm { spec: self.spec.clone(), q: self.q, coeffs: self.coeffs.iter().map(|c| a * c).collect() }
    }

    /// Signs are trivial in characteristic 2.
    pub fn wedge(&self, o: &Self) -> Result<Self, FormError> {
        let q = self.q + o.q;
        let mut out = Self::zero(&self.spec, q)?;
        for (xi, a) in self.support() {
            for (eta, b) in o.support() {
                if xi & eta == 0 {
                    let k = (xi | eta) as usize;
                    out.coeffs[k] = &out.coeffs[k] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// d(λ (dx)^ξ) = Σ_α s_α^2 d(x^α) ∧ (dx)^ξ.
    pub fn d(&self) -> Self {
        let spec = &self.spec;
        let q = (self.q + 1).min(spec.d() as u32);
        let mut out = DiffForm { spec: spec.clone(), q, coeffs: vec![FieldElem::zero(spec); spec.basis_size()] };
        if self.q as usize == spec.d() {
            return out;
        }
        out.q = self.q + 1;
        for (xi, lam) in self.support() {
            for (alpha, s) in lam.square_decomp().support() {
                let sq = s.square();
                for j in subset_elements(alpha & !xi) {
                    let rest = alpha & !(1 << j);
                    let k = (xi | 1 << j) as usize;
                    out.coeffs[k] = &out.coeffs[k] + &(&sq * &FieldElem::basis_monomial(spec, rest));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// da / a.
    pub fn dlog(a: &FieldElem) -> Result<Self, crate::field::FieldError> {
        let inv = a.inv()?;
        Ok(Self::function(a).d().scale(&inv))
    }

    /// C^-1(λ (dx)^ξ) = λ^2 x^ξ (dx)^ξ, as a representative of its class.
    pub fn inverse_cartier(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(xi, c)| {
                if c.is_zero() {
                    c.clone()
                } else {
                    &c.square() * &FieldElem::basis_monomial(&self.spec, xi as SubsetIndex)
                }
            })
            .collect();
        DiffForm { spec: self.spec.clone(), q: self.q, coeffs }
    }

    fn cell_roots(&self) -> Vec<FieldElem> {
        let n = self.spec.basis_size();
        let mut r = vec![FieldElem::zero(&self.spec); n * n];
        for (xi, c) in self.support() {
            for (alpha, s) in c.square_decomp().into_parts().into_iter().enumerate() {
                r[xi as usize * n + alpha] = s;
            }
        }
        r
    }

    fn from_cell_roots(spec: &Arc<FieldSpec>, q: u32, r: &[FieldElem]) -> Self {
        let n = spec.basis_size();
        let mut out = Self::zero(spec, q).unwrap();
        for xi in 0..n {
            let mut c = FieldElem::zero(spec);
            for alpha in 0..n {
                let s = &r[xi * n + alpha];
                if !s.is_zero() {
                    c = &c + &(&s.square() * &FieldElem::basis_monomial(spec, alpha as SubsetIndex));
                }
            }
            out.coeffs[xi] = c;
        }
        out
    }

    /// θ with dθ = self, if one exists.
    pub fn solve_exact(&self) -> Option<Self> {
        let spec = &self.spec;
        if self.q == 0 {
            return self.is_zero().then(|| self.clone());
        }
        let m = d_matrix(spec.d(), self.q);
        let x = solve_f2_system(&m, &self.cell_roots(), spec)?;
        Some(Self::from_cell_roots(spec, self.q - 1, &x))
    }

    pub fn is_exact(&self) -> bool {
        self.exact_normal_form().is_zero()
    }

    /// Canonical representative modulo dΩ^{q-1}; diagonal cells are never pivots.
    pub fn exact_normal_form(&self) -> Self {
        if self.q == 0 {
            return self.clone();
        }
        let spec = &self.spec;
        let n = spec.basis_size();
        let (rows, order) = exact_span_rref(spec.d(), self.q);
        let mut r = self.cell_roots();
        for (row, pivot) in &rows {
            let cell = order[*pivot];
            if r[cell].is_zero() {
                continue;
            }
            let f = r[cell].clone();
            for pos in 0..n * n {
                if row.get(0, pos) {
                    let c = order[pos];
                    r[c] = &r[c] + &f;
                }
            }
        }
        Self::from_cell_roots(spec, self.q, &r)
    }

    /// π(ω) = C^-1(ω) modulo exact forms.
    pub fn nu_member(&self) -> bool {
        self.add(&self.inverse_cartier()).unwrap().is_exact()
    }

    /// Splits a closed form as C^-1(η) + dθ: the diagonal cells give η and
    /// the remainder is solved for θ. Returns None when the form is not closed.
    pub fn cartier_decomposition(&self) -> Option<(Self, Self)> {
        if !self.is_closed() {
            return None;
        }
        let spec = &self.spec;
        let n = spec.basis_size();
        let roots = self.cell_roots();
        let mut eta = Self::zero(spec, self.q).unwrap();
        let mut rest = roots.clone();
        for xi in 0..n {
            let r = &roots[xi * n + xi];
            if !r.is_zero() {
                eta.coeffs[xi] = r.clone();
                rest[xi * n + xi] = FieldElem::zero(spec);
            }
        }
        let rest = Self::from_cell_roots(spec, self.q, &rest);
        let theta = rest.solve_exact()?;
        debug_assert_eq!(eta.inverse_cartier().add(&theta.d()).unwrap(), *self);
        Some((eta, theta))
    }

    /// Reduction modulo dΩ^{q-1} + (1 - C^-1)Ω^q by rewriting diagonal cells
    /// r^2 x^ξ (dx)^ξ to r (dx)^ξ while the height drops, at most `bound` times.
    pub fn eps_class(&self, bound: usize) -> EpsClass {
        let spec = self.spec.clone();
        let n = spec.basis_size();
        let mut cur = self.exact_normal_form();
        for _ in 0..bound {
            let roots = cur.cell_roots();
            let mut step = None;
            for xi in 0..n {
                let r = &roots[xi * n + xi];
                if r.is_zero() {
                    continue;
                }
                let before = (&r.square() * &FieldElem::basis_monomial(&spec, xi as SubsetIndex)).height();
                if r.height() < before {
                    step = Some((xi, r.clone()));
                    break;
                }
            }
            let Some((xi, r)) = step else {
                return EpsClass::Reduced(normalize_dlog_constants(&cur));
            };
            let mut nr = roots;
            nr[xi * n + xi] = FieldElem::zero(&spec);
            let without = Self::from_cell_roots(&spec, cur.q, &nr);
            cur = without.add(&Self::term(&r, xi as SubsetIndex)).unwrap().exact_normal_form();
        }
        EpsClass::Unresolved { partial: cur, bound }
    }
}

/// c x^{-ξ} (dx)^ξ with c constant is replaced by Tr(c) x^{-ξ} (dx)^ξ.
fn normalize_dlog_constants(f: &DiffForm) -> DiffForm {
    let spec = &f.spec;
    let n = spec.basis_size();
    let mut roots = f.cell_roots();
    for xi in 0..n {
        let r = &roots[xi * n + xi];
        if r.is_zero() {
            continue;
        }
        let scaled = r * &FieldElem::basis_monomial(spec, xi as SubsetIndex);
        if scaled.is_polynomial() && scaled.num().is_constant() {
            let c = scaled.num().lead().unwrap().1;
            let tr = spec.gf().trace(c);
            let x_inv = FieldElem::basis_monomial(spec, xi as SubsetIndex).inv().unwrap();
            roots[xi * n + xi] = FieldElem::constant(spec, tr).mul(&x_inv);
        }
    }
    DiffForm::from_cell_roots(spec, f.q, &roots)
}

/// Matrix of d from (q-1)-cells (ζ, η) to q-cells (ξ, α), both indexed
/// subset * 2^d + subset.
fn d_matrix(d: usize, q: u32) -> BitMatrix {
    let n = 1usize << d;
    let mut m = BitMatrix::zeros(n * n, n * n);
    for xi in 0..n as SubsetIndex {
        if popcount(xi) != q {
            continue;
        }
        for alpha in 0..n as SubsetIndex {
            for j in subset_elements(xi & !alpha) {
                let zeta = xi & !(1 << j);
                let eta = alpha | 1 << j;
                m.flip(xi as usize * n + alpha as usize, zeta as usize * n + eta as usize);
            }
        }
    }
    m
}

/// Reduced basis of the image of d, as rows over permuted cell positions;
/// `order[pos]` is the cell at position `pos`, diagonal cells placed last.
fn exact_span_rref(d: usize, q: u32) -> (Vec<(BitMatrix, usize)>, Vec<usize>) {
    let n = 1usize << d;
    let mut order: Vec<usize> = (0..n * n).collect();
    order.sort_by_key(|&c| ((c / n) == (c % n), c));
    let mut pos_of = vec![0; n * n];
    for (p, &c) in order.iter().enumerate() {
        pos_of[c] = p;
    }
    let m = d_matrix(d, q);
    let mut gens = BitMatrix::zeros(n * n, n * n);
    for col in 0..n * n {
        for row in 0..n * n {
            if m.get(row, col) {
                gens.set(col, pos_of[row], true);
            }
        }
    }
    let pivots = gens.reduce(|_, _| {}, |_, _| {});
    let rows = pivots
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut r = BitMatrix::zeros(1, n * n);
            for c in 0..n * n {
                if gens.get(i, c) {
                    r.set(0, c, true);
                }
            }
            (r, p)
        })
        .collect();
    (rows, order)
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut xs: Vec<SubsetIndex> = self.support().map(|(x, _)| x).collect();
        if xs.is_empty() {
            return write!(f, "0");
        }
        xs.sort_by(|&a, &b| subset_cmp(a, b));
        let parts: Vec<String> = xs
            .iter()
            .map(|&xi| {
                if xi == 0 {
                    self.coeff(xi).to_string()
                } else {
                    let dx: Vec<String> =
                        subset_elements(xi).map(|i| format!("d{}", self.spec.names()[i])).collect();
                    format!("{} {}", self.coeff(xi), dx.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Text label of (dx)^ξ, e.g. "dt^du".
pub fn format_dx(spec: &FieldSpec, xi: SubsetIndex) -> String {
    if xi == 0 {
        return "1".into();
    }
    format_subset(spec, xi).split('*').map(|v| format!("d{v}")).collect::<Vec<_>>().join("^")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, k: &Arc<FieldSpec>) -> FieldElem {
        FieldElem::parse(s, k).unwrap()
    }

    #[test]
    fn differential_examples() {
        let k = FieldSpec::f2t();
        assert_eq!(DiffForm::function(&el("t^3", &k)).d(), DiffForm::term(&el("t^2", &k), 1));
        assert!(DiffForm::function(&el("t^2", &k)).d().is_zero());
        let dt = DiffForm::term(&el("1", &k), 1);
        assert_eq!(dt.wedge(&dt), Err(FormError::DegreeOverflow(2, 1)));
        let k2 = FieldSpec::f2tu();
        let dt = DiffForm::term(&el("1", &k2), 1);
        assert!(dt.wedge(&dt).unwrap().is_zero());
    }

    #[test]
    fn exactness() {
        let k = FieldSpec::f2t();
        let dt = DiffForm::term(&el("1", &k), 1);
        assert!(dt.is_exact());
        assert!(!DiffForm::term(&el("t", &k), 1).is_exact());
        assert!(!DiffForm::term(&el("1/t", &k), 1).is_exact());
        let w = DiffForm::term(&el("t^4+1/t^2", &k), 1);
        let theta = w.solve_exact().unwrap();
        assert_eq!(theta.d(), w);
    }

    #[test]
    fn nu_examples() {
        let k = FieldSpec::f2t();
        assert!(DiffForm::term(&el("1/t", &k), 1).nu_member());
        assert!(!DiffForm::term(&el("1", &k), 1).nu_member());
        assert!(DiffForm::zero(&k, 1).unwrap().nu_member());
        assert!(DiffForm::function(&el("1", &k)).nu_member());
        assert!(!DiffForm::function(&el("t", &k)).nu_member());
    }

    #[test]
    fn cartier_decomposition_of_closed_form() {
        let k = FieldSpec::f2tu();
        let eta = DiffForm::from_terms(&k, 1, &[(1, el("u+1/t", &k)), (2, el("t^3", &k))]).unwrap();
        let theta = DiffForm::function(&el("t^3*u+u^5/(t+1)", &k));
        let w = eta.inverse_cartier().add(&theta.d()).unwrap();
        assert!(w.is_closed());
        let (e2, t2) = w.cartier_decomposition().unwrap();
        assert_eq!(e2, eta);
        assert_eq!(e2.inverse_cartier().add(&t2.d()).unwrap(), w);
        let c = DiffForm::term(&el("t*u", &k), 0b01).add(&DiffForm::term(&el("u^2", &k), 0b10)).unwrap();
        assert!(!c.is_closed());
        assert!(c.cartier_decomposition().is_none());
    }

    #[test]
    fn eps_reduction() {
        let k = FieldSpec::f2t();
        // t^2 ≡ t modulo (1 - C^-1) in degree 0
        let a = DiffForm::function(&el("t^4", &k));
        let b = DiffForm::function(&el("t", &k));
        assert_eq!(a.eps_class(10), EpsClass::Reduced(b.clone()));
        assert_eq!(b.eps_class(10), EpsClass::Reduced(b.clone()));
        assert_eq!(DiffForm::function(&el("t^4+t^2", &k)).eps_class(10), EpsClass::Reduced(DiffForm::zero(&k, 0).unwrap()));
        assert!(matches!(DiffForm::function(&el("t^8", &k)).eps_class(1), EpsClass::Unresolved { .. }));
    }
}
