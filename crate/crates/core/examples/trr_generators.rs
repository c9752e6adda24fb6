use drw2::field::{FieldElem, FieldSpec};
use drw2::tensor::TensorElem;
use drw2::trr::{j_generator_enum, norm_n, GenSymbol, TRRElem};

fn main() {
    let k = FieldSpec::f2tu();
    let t = FieldElem::var(&k, 0);
    let u = FieldElem::var(&k, 1);
    let one = FieldElem::one(&k);

    let tau = TRRElem::generator(GenSymbol::tau(1, &t, &one)).unwrap();
    let v = TRRElem::generator(GenSymbol::vtau(1, 0, &t, &u)).unwrap();
    println!("{tau}");
    println!("{v}");
    println!("R(tau) = {}", tau.map_r().unwrap());
    println!("F(tau) = {}", tau.map_f().unwrap());
    println!("sigma(V) = {}", v.map_sigma());
    println!("res(tau) = {}, res(V) = {}", tau.res_to_witt().unwrap(), v.res_to_witt().unwrap());

    let x = TensorElem::elementary(&t, &u);
    println!("N^1(t (x) u) = {}", norm_n(1, &x).unwrap());

    for g in j_generator_enum(1, &[(t.clone(), u.clone())]).unwrap() {
        println!("family {}: {} (res {})", g.family, g.elem, g.elem.res_to_witt().unwrap());
    }
}
