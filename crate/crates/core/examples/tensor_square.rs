use drw2::field::{FieldElem, FieldSpec};
use drw2::tensor::{bredon_homology, phi_elementary, TensorElem};

fn main() {
    let k = FieldSpec::f2t();
    let t = FieldElem::var(&k, 0);
    let one = FieldElem::one(&k);

    let x = TensorElem::elementary(&one, &t);
    println!("x = {x}");
    println!("x*x = {}", &x * &x);
    println!("w(x) = {}", x.w());
    println!("mu(x) = {}", x.mu());
    println!("phi(1 (x) t) = {}", phi_elementary(&one, &t));
    println!("phi_bar(x) = {}", x.phi_bar().representative());

    let tt = TensorElem::elementary(&t, &t);
    println!("phi^-1 pi(t (x) t) = {}", tt.phi_inv_pi());
    println!("Delta-coordinates of x: {:?}", x.delta_basis_coords().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let inv = TensorElem::elementary(&t.inv().unwrap(), &t);
    println!("t^-1 (x) t in ker(pi - phi): {}", inv.tcr_kernel_test().unwrap());
    println!("t (x) t in ker(pi - phi): {}", tt.tcr_kernel_test().unwrap());

    for d in 1..=2 {
        let r = bredon_homology(d, 1);
        println!("d = {d}: fixed {}, Im(1+w) {}, quotient {}, H = {:?}", r.fixed_dim, r.image_dim, r.quotient_dim, r.homology);
    }
}
