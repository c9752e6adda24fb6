use drw2::complex::{axiom_trial, certify_power, CertOutcome};
use drw2::derham::DiffForm;
use drw2::field::{FieldElem, FieldSpec};
use drw2::random::{self, ElemParams, Rng8};
use drw2::tensor::TensorElem;
use drw2::trr::{norm_n, GenSymbol, TRRElem};
use drw2::witt::WittVec;
use proptest::prelude::*;
use rand::Rng;
use std::sync::Arc;

fn spec(d: usize) -> Arc<FieldSpec> {
    FieldSpec::new(1, d, None, None).unwrap()
}

fn elem(k: &Arc<FieldSpec>, r: &mut Rng8) -> FieldElem {
    random::elem(k, ElemParams { max_terms: 3, max_degree: 3, fraction_rate: 0.3 }, r)
}

fn tensor(k: &Arc<FieldSpec>, r: &mut Rng8) -> TensorElem {
    let mut x = TensorElem::zero(k);
    for _ in 0..r.gen_range(1..=2) {
        x = &x + &TensorElem::elementary(&elem(k, r), &elem(k, r));
    }
    x
}

fn form(k: &Arc<FieldSpec>, q: u32, r: &mut Rng8) -> DiffForm {
    let mut f = DiffForm::zero(k, q).unwrap();
    for _ in 0..2 {
        if let Some(xi) = random::subset_of_size(k, q, r) {
            f = f.add(&DiffForm::term(&elem(k, r), xi)).unwrap();
        }
    }
    f
}

fn witt(k: &Arc<FieldSpec>, n: usize, r: &mut Rng8) -> WittVec {
    WittVec::new((0..=n).map(|_| random::elem(k, ElemParams::default(), r)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_is_a_field(seed: u64, d in 1usize..=3) {
        let k = spec(d);
        let mut r = random::rng(seed);
        let (a, b, c) = (elem(&k, &mut r), elem(&k, &mut r), elem(&k, &mut r));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a + &b).square(), &a.square() + &b.square());
        prop_assert_eq!(a.square_decomp().recompose(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        let s = FieldElem::parse(&a.to_string(), &k).unwrap();
        prop_assert_eq!(s, a);
    }

    #[test]
    fn tensor_square_structure(seed: u64, d in 1usize..=2) {
        let k = spec(d);
        let mut r = random::rng(seed);
        let (x, y) = (tensor(&k, &mut r), tensor(&k, &mut r));
        prop_assert_eq!(x.w().w(), x.clone());
        prop_assert_eq!((&x * &y).w(), &x.w() * &y.w());
        prop_assert_eq!((&x * &y).mu(), &x.mu() * &y.mu());
        prop_assert_eq!(x.w().mu(), x.mu());
        prop_assert!((&x + &x.w()).in_image_1pw());
        prop_assert!((&x * &x.w()).is_fixed());
        prop_assert_eq!((&x + &y).phi_bar(), (x.phi_bar().representative() + y.phi_bar().representative()).pi_quotient());
        prop_assert_eq!(x.phi_bar().representative().mu(), x.mu().square());
        prop_assert_eq!(TensorElem::from_s_basis(&k, &x.to_s_basis()), x.clone());
        prop_assert_eq!(TensorElem::from_delta_coords(&k, &x.delta_basis_coords()), x.clone());
        let (a, b) = (elem(&k, &mut r), elem(&k, &mut r));
        prop_assert_eq!(TensorElem::delta(&(&a + &b)), &TensorElem::delta(&a) + &TensorElem::delta(&b));
        prop_assert!(TensorElem::delta(&a.square()).is_zero());
    }

    #[test]
    fn witt_ring_and_operators(seed: u64, n in 0usize..=3) {
        let k = spec(2);
        let mut r = random::rng(seed);
        let (x, y, z) = (witt(&k, n, &mut r), witt(&k, n, &mut r), witt(&k, n, &mut r));
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert!(x.add(&x.neg()).unwrap().is_zero());
        prop_assert!(x.add(&x).unwrap().mod2_equal(&WittVec::zero(&k, n)));
        prop_assert_eq!(x.v().unwrap().f().unwrap(), x.add(&x).unwrap());
        if n > 0 {
            prop_assert_eq!(x.add(&y).unwrap().r().unwrap(), x.r().unwrap().add(&y.r().unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().f().unwrap(), x.f().unwrap().mul(&y.f().unwrap()).unwrap());
        }
        let m = x.to_mod2();
        prop_assert_eq!(m.representative().to_mod2(), m);
    }

    #[test]
    fn de_rham_complex(seed: u64, d in 1usize..=3) {
        let k = spec(d);
        let mut r = random::rng(seed);
        let q = r.gen_range(0..d as u32);
        let (w, eta) = (form(&k, q, &mut r), form(&k, 1, &mut r));
        prop_assert!(w.d().d().is_zero());
        if q + 2 <= d as u32 {
            let lhs = w.wedge(&eta).unwrap().d();
            let rhs = w.d().wedge(&eta).unwrap().add(&w.wedge(&eta.d()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let w2 = form(&k, q, &mut r);
        prop_assert_eq!(w.add(&w2).unwrap().inverse_cartier(), w.inverse_cartier().add(&w2.inverse_cartier()).unwrap());
        prop_assert!(w.d().is_exact());
    }

    #[test]
    fn inverse_cartier_fixes_dlog(seed: u64, d in 1usize..=3) {
        let k = spec(d);
        let mut r = random::rng(seed);
        let a = random::nonzero_elem(&k, ElemParams { max_terms: 3, max_degree: 3, fraction_rate: 0.3 }, &mut r);
        let w = DiffForm::dlog(&a).unwrap();
        prop_assert_eq!(w.inverse_cartier().exact_normal_form(), w.exact_normal_form());
        prop_assert!(w.nu_member());
        // ν⁰ = {a : a² = a} = F_2
        let f = DiffForm::function(&a);
        prop_assert_eq!(f.nu_member(), a.is_one());
    }

    #[test]
    fn trr_generators_and_norm(seed: u64, n in 0u32..=3) {
        let k = spec(2);
        let mut r = random::rng(seed);
        let (a, b) = (random::term_elem(&k, 2, &mut r), random::term_elem(&k, 2, &mut r));
        let one = FieldElem::one(&k);
        let tau = TRRElem::generator(GenSymbol::tau(n, &a, &b)).unwrap();
        prop_assert!(tau.check().is_ok());
        prop_assert_eq!(tau.map_sigma(), TRRElem::generator(GenSymbol::tau(n, &b, &a)).unwrap());
        let na = TRRElem::generator(GenSymbol::tau(n, &a, &one)).unwrap();
        let nb = TRRElem::generator(GenSymbol::tau(n, &b, &one)).unwrap();
        prop_assert_eq!(na.mul(&nb.map_sigma()).unwrap(), tau.clone());
        if n > 0 {
            let nx = norm_n(n, &TensorElem::elementary(&a, &b)).unwrap();
            prop_assert_eq!(nx, TRRElem::generator(GenSymbol::tau(n, &(&a * &b), &one)).unwrap());
            let i = r.gen_range(0..n);
            let v = TRRElem::generator(GenSymbol::vtau(n, i, &a, &b)).unwrap();
            prop_assert!(v.add(&v.map_sigma()).unwrap().res_to_witt().unwrap().is_zero());
        }
    }

    #[test]
    fn axiom_trials_hold(seed: u64, d in 1usize..=2, n in 0u32..=3) {
        let k = spec(d);
        let mut r = random::rng(seed);
        let q = r.gen_range(0..=d as u32);
        let q2 = r.gen_range(0..=d as u32 - q);
        for rec in axiom_trial(&k, n, q, q2, seed) {
            prop_assert!(rec.pass, "{}: {} vs {}", rec.axiom, rec.lhs, rec.rhs);
        }
    }

    #[test]
    fn level0_power_membership_is_decided(seed: u64) {
        let k = spec(2);
        let mut r = random::rng(seed);
        let a = elem(&k, &mut r);
        let x = TRRElem::from_tensor(TensorElem::delta(&a));
        match certify_power(&x, 1, 2) {
            CertOutcome::Certified(c) => prop_assert!(c.validate(x.pair()).is_ok()),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
