//! Acceptance run: one PASS/FAIL line per criterion.

use drw2::cli::{key2_probe, random_gl, random_sym_matrix};
use drw2::complex::{axiom_suite, key1_check, perturb_out_of_kernel, random_frobenius_image, trunc0_report, Certificate, Key1Outcome};
use drw2::field::{FieldElem, FieldSpec};
use drw2::forms::{diag_class, hyperbolic_vanishing, trace_symmetric, witt_relation_check, SymMatrix};
use drw2::random::{self, ElemParams, Rng8};
use drw2::tensor::{bredon_homology, TensorElem};
use drw2::trr::{j_generator_enum, FormalExpr, GenSymbol, GenTag, TRRElem};
use drw2::witt::{self, var_a, var_b, Gf2MPoly, WittVec};
use rand::Rng;
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(d: usize) -> Arc<FieldSpec> {
    FieldSpec::new(1, d, None, None).unwrap()
}

fn witt_polynomials() -> Outcome {
    for m in 0..=3 {
        ensure(witt::ghost_identities_hold(m).unwrap(), || format!("ghost identities fail at m = {m}"))?;
    }
    let (a0, a1, b0, b1) = (Gf2MPoly::var(var_a(0)), Gf2MPoly::var(var_a(1)), Gf2MPoly::var(var_b(0)), Gf2MPoly::var(var_b(1)));
    let c = witt::component(1).unwrap();
    let s1 = a1.add(&b1).add(&a0.mul(&b0));
    let p1 = a0.square().mul(&b1).add(&b0.square().mul(&a1));
    ensure(c.sum2 == s1, || format!("S1 = {}", c.sum2))?;
    ensure(c.prod2 == p1, || format!("P1 = {}", c.prod2))?;
    ensure(witt::component(0).unwrap().sum2 == a0.add(&b0), || "S0".into())?;
    for n in 0..=3 {
        witt::verify_mod2_normal_form(n).map_err(|e| format!("normal form n = {n}: {e}"))?;
    }
    // 2x = VF x in characteristic 2, checked on random vectors
    let k = spec(2);
    let mut r = random::rng(11);
    for _ in 0..200 {
        let n = r.gen_range(0..=3);
        let comps: Vec<FieldElem> = (0..=n).map(|_| random::elem(&k, ElemParams::default(), &mut r)).collect();
        let x = WittVec::new(comps.clone()).unwrap();
        let two = x.add(&x).unwrap();
        let mut want = vec![FieldElem::zero(&k)];
        want.extend(comps[..n].iter().map(|c| c.square()));
        ensure(two.comps() == want.as_slice(), || format!("2·{x} = {two}"))?;
        ensure(two.to_mod2().is_zero(), || format!("2·{x} not zero mod 2"))?;
    }
    Ok("ghost identities m ≤ 3, n = 1 reductions, 2·x pattern".into())
}

fn random_fixed(k: &Arc<FieldSpec>, r: &mut Rng8) -> TensorElem {
    let y = random_tensor(k, r);
    let z = random_tensor(k, r).phi_bar().representative().clone();
    &(&y + &y.w()) + &z
}

fn random_tensor(k: &Arc<FieldSpec>, r: &mut Rng8) -> TensorElem {
    let p = ElemParams { max_terms: 2, max_degree: 3, fraction_rate: 0.2 };
    let mut x = TensorElem::zero(k);
    for _ in 0..r.gen_range(1..=3) {
        x = &x + &TensorElem::elementary(&random::elem(k, p, r), &random::elem(k, p, r));
    }
    x
}

fn frobenius_lift() -> Outcome {
    let mut count = 0;
    for d in [1, 2] {
        let k = spec(d);
        let mut r = random::rng(20 + d as u64);
        for _ in 0..2000 {
            let x = random_tensor(&k, &mut r);
            let y = random_tensor(&k, &mut r);
            let lhs = (&x + &y).phi_bar();
            let rhs = (x.phi_bar().representative() + y.phi_bar().representative()).pi_quotient();
            ensure(lhs == rhs, || format!("φ̄ not additive on {x}, {y}"))?;
            let m = x.phi_bar().representative().mu();
            ensure(m == x.mu().square(), || format!("μ(φ̄({x})) = {m}"))?;
            let f = random_fixed(&k, &mut r);
            ensure(f.is_fixed(), || format!("{f} not fixed"))?;
            ensure(f.phi_inv_pi().phi_bar() == f.pi_quotient(), || format!("φ̄ ∘ φ⁻¹π ≠ π on {f}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn bredon() -> Outcome {
    let r1 = bredon_homology(1, 1);
    ensure((r1.fixed_dim, r1.image_dim, r1.quotient_dim) == (3, 1, 2), || format!("d = 1: {r1:?}"))?;
    let r2 = bredon_homology(2, 1);
    ensure((r2.fixed_dim, r2.image_dim, r2.quotient_dim) == (10, 6, 4), || format!("d = 2: {r2:?}"))?;
    for d in 1..=2 {
        for n in 1..=3u32 {
            let rep = bredon_homology(d, n);
            for (i, &h) in rep.homology.iter().enumerate() {
                ensure((n as usize..=2 * n as usize).contains(&i) || h == 0, || format!("d={d} n={n}: H{i} = {h}"))?;
            }
        }
    }
    Ok(format!("d=1 H = {:?}", r1.homology))
}

fn axioms() -> Outcome {
    let mut min = u64::MAX;
    for d in [1, 2] {
        let k = spec(d);
        let rep = axiom_suite(&k, 3, d as u32, 16000, 40 + d as u64);
        if let Some(f) = rep.failures.first() {
            return Err(format!("{} failed at d={d}, seed {}: {} vs {}", f.axiom, f.seed, f.lhs, f.rhs));
        }
        for (name, c) in &rep.axioms {
            ensure(c.passed == c.checked, || format!("{name}: {}/{}", c.passed, c.checked))?;
            min = min.min(c.checked);
        }
        for (name, c) in &rep.certificates {
            let back = Certificate::from_json(&c.to_json(), &k).map_err(|e| format!("{name}: {e}"))?;
            back.validate(&c.eval()).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    ensure(min >= 5000, || format!("only {min} instances for some axiom"))?;
    Ok(format!("≥ {min} instances per axiom"))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn trunc0() -> Outcome {
    for d in 1..=3 {
        let k = spec(d);
        for q in 0..=d as u32 {
            let r = trunc0_report(&k, q);
            ensure(r.dimension == binom(d, q as usize) && r.expected == r.dimension, || format!("d={d} q={q}: {r:?}"))?;
            ensure(r.independent && r.u_matches_basis, || format!("d={d} q={q}: {r:?}"))?;
        }
    }
    Ok("d ≤ 3, all q".into())
}

fn random_gen(k: &Arc<FieldSpec>, n: u32, r: &mut Rng8) -> GenSymbol {
    let a = random::term_elem(k, 2, r);
    let b = if r.gen_bool(0.3) { FieldElem::one(k) } else { random::term_elem(k, 2, r) };
    if n == 0 {
        return GenSymbol::tau(0, &a, &b);
    }
    match r.gen_range(0..3) {
        0 => GenSymbol::tau(n, &a, &b),
        1 => GenSymbol::vtau(n, r.gen_range(0..n), &a, &b),
        _ => GenSymbol::svtau(n, r.gen_range(0..n), &a, &b),
    }
}

fn random_word(k: &Arc<FieldSpec>, n: u32, r: &mut Rng8) -> TRRElem {
    let mut e = TRRElem::zero(k, n);
    for _ in 0..r.gen_range(1..=3) {
        let mut p = TRRElem::generator(random_gen(k, n, r)).unwrap();
        if r.gen_bool(0.4) {
            p = p.mul(&TRRElem::generator(random_gen(k, n, r)).unwrap()).unwrap();
        }
        e = e.add(&p).unwrap();
    }
    e
}

fn consistent(e: &TRRElem) -> Result<(), String> {
    e.check().map_err(|err| format!("{e}: {err}"))?;
    match e.formal() {
        Some(f) => ensure(&f.eval() == e.pair(), || format!("formal part disagrees with {e}")),
        None => Err(format!("{e} lost its presentation")),
    }
}

fn operator_relations() -> Outcome {
    let k = spec(2);
    let mut r = random::rng(60);
    for n in 0..=3u32 {
        for _ in 0..1000 {
            let e = random_word(&k, n, &mut r);
            consistent(&e)?;
            ensure(e.map_sigma().map_sigma() == e, || format!("σσ ≠ id on {e}"))?;
            let v = e.map_v().map_err(|x| x.to_string())?;
            consistent(&v)?;
            let fv = v.map_f().unwrap();
            ensure(fv == e.add(&e.map_sigma()).unwrap(), || format!("FV ≠ 1+σ on {e}"))?;
            ensure(v.map_sigma().map_f().unwrap().is_zero(), || format!("FσV ≠ 0 on {e}"))?;
            if n == 0 {
                ensure(v.map_r().unwrap().is_zero(), || format!("RV ≠ 0 on {e}"))?;
                continue;
            }
            let re = e.map_r().unwrap();
            consistent(&re)?;
            ensure(e.map_sigma().map_r().unwrap() == re.map_sigma(), || format!("Rσ ≠ σR on {e}"))?;
            ensure(v.map_r().unwrap() == re.map_v().unwrap(), || format!("RV ≠ VR on {e}"))?;
            consistent(&e.map_f().unwrap())?;
            if n >= 2 {
                ensure(e.map_r().unwrap().map_f().unwrap() == e.map_f().unwrap().map_r().unwrap(), || format!("RF ≠ FR on {e}"))?;
            }
            let g = random_gen(&k, n, &mut r);
            if g.tag == GenTag::Tau {
                let lower = TRRElem::generator(GenSymbol::tau(n - 1, &g.a, &g.b)).unwrap();
                ensure(TRRElem::generator(g.clone()).unwrap().map_r().unwrap() == lower, || format!("Rτ on {g}"))?;
            }
        }
    }
    Ok("1000 words per level n ≤ 3".into())
}

/// Expected restriction of a generator, written out from the table.
fn res_table(g: &GenSymbol) -> WittVec {
    let k = g.a.spec();
    let mut comps = vec![FieldElem::zero(k); g.level as usize + 1];
    let pos = if g.tag == GenTag::Tau { 0 } else { (g.level - g.index) as usize };
    comps[pos] = &g.a * &g.b;
    WittVec::new(comps).unwrap()
}

fn restriction() -> Outcome {
    let k = spec(2);
    let mut r = random::rng(70);
    let mut gens = 0;
    for n in 0..=3u32 {
        for _ in 0..100 {
            let g = random_gen(&k, n, &mut r);
            let e = TRRElem::generator(g.clone()).unwrap();
            let got = e.res_to_witt().map_err(|x| x.to_string())?;
            ensure(got == res_table(&g).to_mod2(), || format!("res {g} = {got}"))?;
            ensure(e.map_sigma().res_to_witt().unwrap() == got, || format!("res σ{g} ≠ res {g}"))?;
            gens += 1;
        }
        let params: Vec<(FieldElem, FieldElem)> =
            (0..3).map(|_| (random::term_elem(&k, 2, &mut r), random::term_elem(&k, 2, &mut r))).collect();
        for j in j_generator_enum(n, &params).map_err(|x| x.to_string())? {
            ensure(j.elem.res_to_witt().unwrap().is_zero(), || format!("family {} has res ≠ 0", j.family))?;
        }
    }
    for i in 0..500 {
        let n = 1 + i % 3;
        let x = random_word(&k, n, &mut r);
        let y = random_word(&k, n, &mut r);
        let lhs = x.mul(&y).unwrap().res_to_witt().unwrap();
        let rhs = x.res_to_witt().unwrap().mul(&y.res_to_witt().unwrap()).unwrap();
        ensure(lhs == rhs, || format!("res({x} · {y}) = {lhs}, product {rhs}"))?;
    }
    let t = FieldElem::var(&k, 0);
    let one = FieldElem::one(&k);
    let tau = TRRElem::from_formal(FormalExpr::gen(GenSymbol::tau(1, &t, &one)));
    ensure(tau.res_to_witt().unwrap().comps() == [t.clone(), FieldElem::zero(&k)], || "τ₁(t⊗1)".into())?;
    Ok(format!("{gens} generators, 500 products"))
}

fn kato_tcr() -> Outcome {
    let k = spec(2);
    let mut r = random::rng(80);
    let p = ElemParams { max_terms: 2, max_degree: 3, fraction_rate: 0.2 };
    for _ in 0..200 {
        let a = random::nonzero_elem(&k, p, &mut r);
        let c = diag_class(&a).unwrap();
        ensure(c.rep.tcr_kernel_test() == Ok(true), || format!("<{a}>"))?;
    }
    for _ in 0..200 {
        let m = random_sym_matrix(&k, r.gen_range(1..=3), &mut r);
        let tr = trace_symmetric(&m).unwrap();
        ensure(tr.tcr_kernel_test() == Ok(true), || format!("trace of {m:?}"))?;
    }
    let mut pairs = 0;
    while pairs < 200 {
        let a = random::nonzero_elem(&k, p, &mut r);
        let b = random::nonzero_elem(&k, p, &mut r);
        if (&a + &b).is_zero() {
            continue;
        }
        ensure(witt_relation_check(&a, &b) == Ok(true), || format!("relation at {a}, {b}"))?;
        pairs += 1;
    }
    for _ in 0..100 {
        let n = r.gen_range(1..=3);
        let m = random_sym_matrix(&k, n, &mut r);
        let g = random_gl(&k, n, &mut r);
        ensure(trace_symmetric(&m.congruent(&g)).unwrap() == trace_symmetric(&m).unwrap(), || format!("congruence {m:?}"))?;
        let c = random::elem(&k, p, &mut r);
        let g2 = random_gl(&k, 2, &mut r);
        let ginv = drw2::linalg::inverse_k(&g2, &k).unwrap();
        let h = SymMatrix::hyperbolic(&c).congruent(&ginv);
        ensure(hyperbolic_vanishing(&h, &g2) == Ok(true), || format!("hyperbolic {c}"))?;
    }
    Ok("200 + 200 kernel, 200 relations, 100 congruences".into())
}

fn injectivity() -> Outcome {
    let (mut kernel, mut non, mut unresolved) = (0, 0, 0);
    for d in [1usize, 2, 3] {
        let k = spec(d);
        let mut r = random::rng(90 + d as u64);
        let quota = if d == 3 { 34 } else { 33 };
        let mut made = 0;
        while made < quota {
            let p = r.gen_range(0..d as u32);
            let mu = random_frobenius_image(&k, p, &mut r);
            match key1_check(&k, &mu, p + 1).map_err(|e| e.to_string())? {
                Key1Outcome::Divisible(w) => {
                    ensure(w.form(&k, p).is_ok(), || "witness form".into())?;
                    kernel += 1;
                }
                Key1Outcome::NotApplicable { .. } => unresolved += 1,
            }
            let mut bad = mu.clone();
            if !perturb_out_of_kernel(&k, p, &mut bad, &mut r) {
                continue;
            }
            match key1_check(&k, &bad, p + 1) {
                Ok(Key1Outcome::NotApplicable { .. }) => non += 1,
                other => return Err(format!("non-instance {bad:?} accepted: {other:?}")),
            }
            made += 1;
        }
    }
    let k2 = key2_probe(&spec(2), 95, 100);
    ensure(unresolved == 0, || format!("{unresolved} kernel instances rejected"))?;
    ensure(non >= 100, || format!("only {non} non-instances"))?;
    ensure(k2 == 100, || format!("key2 {k2}/100"))?;
    Ok(format!("key1 {kernel} kernel / {non} non-instances, key2 {k2}, 0 unresolved"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("witt polynomial oracle", witt_polynomials),
        ("frobenius lift", frobenius_lift),
        ("bredon homology", bredon),
        ("witt complex axioms", axioms),
        ("trunc0 isomorphism", trunc0),
        ("operator relations", operator_relations),
        ("restriction and ideal", restriction),
        ("kato / tcr kernel", kato_tcr),
        ("injectivity probes", injectivity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS {}: {name} ({msg}; {secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name} ({msg}; {secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
