use drw2::complex::axiom_suite;
use drw2::field::FieldSpec;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let k = FieldSpec::f2tu();
    let rep = axiom_suite(&k, 2, 2, 500, seed);
    for (name, c) in &rep.axioms {
        println!("{name:22} {:5}/{:5}", c.passed, c.checked);
    }
    println!("{} certificates emitted, ok = {}", rep.certificates.len(), rep.ok());
}
