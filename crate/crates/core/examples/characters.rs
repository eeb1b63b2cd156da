//! Symplectic characters, the τ functions built from them and the partition
//! function, including a homogeneous point reached by extrapolation.
//!
//! Run with `cargo run --release --example characters`.

use loopcurrent::chartoda::{closed_x, richardson, sympchar, sympchar_jt, tau, weyl_dim, z_formula, PartitionShape};
use loopcurrent::numfield::{ComplexApprox, CycloNum};
use loopcurrent::point::{sample_point, Point};

fn main() -> loopcurrent::Result<()> {
    let x: Vec<CycloNum> = ["2", "3/2+ω", "-1/3ω"].iter().map(|s| s.parse().unwrap()).collect();
    let lam = PartitionShape::new(vec![2, 1])?;
    println!("χ_(2,1) bialternant  = {}", sympchar(&lam, &x)?);
    println!("χ_(2,1) Jacobi–Trudi = {}", sympchar_jt(&lam, &x)?);
    for n in 1..=4 {
        let st = PartitionShape::staircase(n);
        println!("dim of staircase {:?} for Sp({}) = {}", st.parts(), 2 * n, weyl_dim(&st, n)?);
    }

    let p = sample_point(3, 4, &[])?;
    println!("\nτ_4(z) = {}", tau(&p.z)?);
    println!("Z_4 = {}", z_formula(&p)?);

    // all columns equal: the bialternant is 0/0, so extrapolate from nearby points
    let z0 = ComplexApprox::new(1.3, 0.4);
    let h = Point::new(ComplexApprox::new(2.0, -0.5), ComplexApprox::new(-0.7, 1.1), vec![z0; 5]);
    for k in [1, 3, 5] {
        let (v, corr) = richardson(&h, 1e-4, |q| closed_x(k, q))?;
        println!("homogeneous X^({k}) ≈ {v}  (last correction {corr:.1e})");
    }
    println!("direct division-free value X^(1) = {}", closed_x(1, &h)?);
    Ok(())
}
