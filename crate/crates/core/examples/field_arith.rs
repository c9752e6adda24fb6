use drw2::field::{FieldElem, FieldSpec};

fn main() {
    let k = FieldSpec::new(2, 2, Some(vec!["t".into(), "u".into()]), None).unwrap();
    let a = FieldElem::parse("(g*t^3+u)/(t+1)", &k).unwrap();
    let b = FieldElem::parse("t*u+g^2", &k).unwrap();
    println!("a = {a}");
    println!("b = {b}");
    println!("a*b = {}", &a * &b);
    println!("1/a = {}", a.inv().unwrap());

    // a = sum over the 2-basis of squares times monomials
    let parts = a.square_decomp();
    for (xi, s) in parts.into_parts().iter().enumerate() {
        if !s.is_zero() {
            println!("  ({s})^2 * {}", FieldElem::basis_monomial(&k, xi as u32));
        }
    }
}
