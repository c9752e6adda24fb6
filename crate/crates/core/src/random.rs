//! Seeded generators of sparse random elements.

use crate::field::{FieldElem, FieldSpec};
use crate::gf2x::Coef;
use crate::poly::{Monomial, Poly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::sync::Arc;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for trial `i` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug)]
pub struct ElemParams {
    pub max_terms: usize,
    pub max_degree: u32,
    /// Probability of dividing by a random monic denominator.
    pub fraction_rate: f64,
}

impl Default for ElemParams {
    fn default() -> Self {
        ElemParams { max_terms: 2, max_degree: 3, fraction_rate: 0.0 }
    }
}

fn nonzero_const(spec: &FieldSpec, r: &mut impl Rng) -> Coef {
    let order = 1u32 << spec.e();
    r.gen_range(1..order) as Coef
}

pub fn monomial(spec: &FieldSpec, max_degree: u32, r: &mut impl Rng) -> Monomial {
    let d = spec.d();
    let total = r.gen_range(0..=max_degree);
    let mut exps = vec![0u32; d];
    for _ in 0..total {
        exps[r.gen_range(0..d)] += 1;
    }
    Monomial::from_exps(&exps)
}

fn poly(spec: &FieldSpec, terms: usize, max_degree: u32, r: &mut impl Rng) -> Poly {
    let t = (0..terms).map(|_| (monomial(spec, max_degree, r), nonzero_const(spec, r))).collect();
    Poly::from_terms(t)
}

/// A random element; may be zero.
pub fn elem(spec: &Arc<FieldSpec>, p: ElemParams, r: &mut impl Rng) -> FieldElem {
    let n = r.gen_range(0..=p.max_terms);
    let num = poly(spec, n, p.max_degree, r);
    if p.fraction_rate > 0.0 && r.gen_bool(p.fraction_rate) {
        let mut den = poly(spec, 1, p.max_degree.max(1), r);
        den = den.add(&Poly::term(monomial(spec, 1, r), 1));
        if !den.is_zero() {
            if let Ok(x) = FieldElem::from_fraction(spec, num.clone(), den) {
                return x;
            }
        }
    }
    FieldElem::from_poly(spec, num)
}

pub fn nonzero_elem(spec: &Arc<FieldSpec>, p: ElemParams, r: &mut impl Rng) -> FieldElem {
    loop {
        let x = elem(spec, p, r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A nonzero constant times one monomial.
pub fn term_elem(spec: &Arc<FieldSpec>, max_degree: u32, r: &mut impl Rng) -> FieldElem {
    FieldElem::from_poly(spec, Poly::term(monomial(spec, max_degree, r), nonzero_const(spec, r)))
}

pub fn subset(spec: &FieldSpec, r: &mut impl Rng) -> u32 {
    r.gen_range(0..spec.basis_size() as u32)
}

pub fn subset_of_size(spec: &FieldSpec, q: u32, r: &mut impl Rng) -> Option<u32> {
    let all: Vec<u32> = (0..spec.basis_size() as u32).filter(|s| s.count_ones() == q).collect();
    if all.is_empty() {
        None
    } else {
        Some(all[r.gen_range(0..all.len())])
    }
}
