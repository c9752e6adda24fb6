use drw2::complex::{key1_check, random_frobenius_image, trunc0_report, Key1Outcome};
use drw2::field::{FieldElem, FieldSpec};
use drw2::random;
use std::collections::BTreeMap;

fn main() {
    let k = FieldSpec::new(1, 3, None, None).unwrap();
    for q in 0..=3 {
        let r = trunc0_report(&k, q);
        println!("q = {q}: dim {} basis {:?}", r.dimension, r.basis);
    }

    let k = FieldSpec::f2tu();
    let mut r = random::rng(5);
    let mu = random_frobenius_image(&k, 1, &mut r);
    match key1_check(&k, &mu, 2).unwrap() {
        Key1Outcome::Divisible(w) => println!("{} Frobenius terms: {}", w.terms.len(), w.form(&k, 1).unwrap()),
        Key1Outcome::NotApplicable { j1_degree } => println!("not in J^3: degree {j1_degree:?}"),
    }

    let mut bad = BTreeMap::new();
    bad.insert(0, FieldElem::var(&k, 0));
    println!("{:?}", key1_check(&k, &bad, 1).unwrap());
}
