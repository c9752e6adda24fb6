use drw2::derham::DiffForm;
use drw2::field::{FieldElem, FieldSpec};

fn main() {
    let k = FieldSpec::f2tu();
    let a = FieldElem::parse("t^3*u+u^2", &k).unwrap();
    let f = DiffForm::function(&a);
    let df = f.d();
    println!("d({a}) = {df}");
    println!("dd = 0: {}", df.d().is_zero());

    let dt = DiffForm::function(&FieldElem::var(&k, 0)).d();
    let w = dt.scale(&FieldElem::var(&k, 1));
    println!("w = {w}, dw = {}", w.d());
    println!("C^-1(w) = {}", w.inverse_cartier());
    println!("dlog(t*u) = {}", DiffForm::dlog(&FieldElem::parse("t*u", &k).unwrap()).unwrap());
    let tdt = dt.scale(&FieldElem::var(&k, 0));
    println!("t dt exact? {}  t^2 dt exact? {}", tdt.is_exact(), tdt.scale(&FieldElem::var(&k, 0)).is_exact());
}
