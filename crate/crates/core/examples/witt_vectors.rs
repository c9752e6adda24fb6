use drw2::field::{FieldElem, FieldSpec};
use drw2::witt::{component, WittVec};

fn main() {
    for m in 0..=2 {
        let c = component(m).unwrap();
        println!("S{m} = {}", c.sum2);
        println!("P{m} = {}", c.prod2);
    }

    let k = FieldSpec::f2t();
    let t = FieldElem::var(&k, 0);
    let one = FieldElem::one(&k);
    let x = WittVec::new(vec![t.clone(), &t.pow(3).unwrap() + &one]).unwrap();
    let y = WittVec::teichmuller(&(&t + &one), 1);
    println!("x = {x}, y = {y}");
    println!("x + y = {}", x.add(&y).unwrap());
    println!("x * y = {}", x.mul(&y).unwrap());
    println!("x + x = {}", x.add(&x).unwrap());
    println!("F(x) = {}, V(R x) = {}", x.f().unwrap(), x.r().unwrap().v().unwrap());
    println!("x mod 2 = {}", x.to_mod2());
}
