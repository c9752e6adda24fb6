use drw2::field::{FieldElem, FieldSpec};
use drw2::forms::{diag_class, quad_class_reduce, trace_symmetric, witt_relation_check, QuadOutcome, SymMatrix};
use drw2::tensor::TensorElem;

fn main() {
    let k = FieldSpec::f2t();
    let p = |s: &str| FieldElem::parse(s, &k).unwrap();

    let c = diag_class(&p("t")).unwrap();
    println!("<t> -> {} (kernel: {})", c.rep, c.in_kernel());
    println!("<t> + <1> = <t+1> + <t(t+1)>: {}", witt_relation_check(&p("t"), &p("1")).unwrap());

    let m = SymMatrix::new(vec![vec![p("t"), p("1")], vec![p("1"), p("t^2+1")]]).unwrap();
    let tr = trace_symmetric(&m).unwrap();
    println!("tr = {tr} (kernel: {})", tr.tcr_kernel_test().unwrap());
    println!("tr(hyperbolic) = {}", trace_symmetric(&SymMatrix::hyperbolic(&p("t"))).unwrap());

    let x = TensorElem::elementary(&p("t"), &p("t"));
    match quad_class_reduce(&x, 3) {
        QuadOutcome::InImage { preimage } => println!("t (x) t is pi - phi of {preimage}"),
        QuadOutcome::Unresolved { bound, normal } => println!("unresolved at bound {bound}: {}", normal.representative()),
    }
}
