//! Exact arithmetic in Q(ω) and the weight functions built on it.
//!
//! Run with `cargo run --example field_arithmetic`.

use loopcurrent::numfield::{bracket, c_const, kfunc, ComplexApprox, CycloNum, Scalar};

fn main() -> loopcurrent::Result<()> {
    let q = CycloNum::omega();
    println!("q = {q}, q² = {}, q³ = {}", q.clone() * &q, q.powi(3));
    println!("loop weight −(q + 1/q) = {}", -(q.clone() + q.inv().unwrap()));

    let x: CycloNum = "3/2 - 1/3ω".parse()?;
    let y: CycloNum = "2 + ω".parse()?;
    println!("x = {x}, y = {y}");
    println!("x·y = {}, x/y = {}", x.clone() * &y, x.clone() / &y);
    println!("norm(x) = {}, conj(x) = {}", x.norm(), x.conj());

    println!("[x] = x − 1/x = {}", bracket(&x)?);
    println!("k(x, y) = [q/(xy)][qy/x] = {}", kfunc(&x, &y)?);
    for l in 1..=4 {
        println!("c_{l} = {}", c_const::<CycloNum>(l));
    }

    // the float backend embeds ω as e^{2πi/3}
    let xf = ComplexApprox::from(&x);
    let kf = kfunc(&xf, &ComplexApprox::from(&y))?;
    println!("float k(x, y) = {kf}, exact embedded = {}", ComplexApprox::from(&kfunc(&x, &y)?));
    Ok(())
}
