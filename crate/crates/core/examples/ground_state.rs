//! Ground state, dual state and the exchange relations they satisfy.
//!
//! Run with `cargo run --release --example ground_state`.

use loopcurrent::chartoda::z_formula;
use loopcurrent::groundstate::{dual_state, ground_state, inner_product, qkz_relations};
use loopcurrent::point::sample_point;

fn main() -> loopcurrent::Result<()> {
    let p = sample_point(11, 3, &[])?;
    let psi = ground_state(&p)?;
    println!("components of Ψ at L = 3, normalized to sum Z:");
    for (i, c) in psi.components.iter().enumerate() {
        println!("  ψ[{i}] = {c}");
    }
    let z = z_formula(&p)?;
    println!("Σψ = Z: {}", psi.total() == z);

    let dual = dual_state(&p)?;
    println!("⟨Ψ*|Ψ⟩ = Z²: {}", inner_product(&dual, &psi)? == z.clone() * &z);

    for rel in qkz_relations(&p)? {
        println!("  {:<28} {}", rel.name, if rel.holds { "holds" } else { "FAILS" });
    }
    println!("\nJSON export:\n{}", serde_json::to_string(&ground_state(&p.to_complex())?).unwrap());
    Ok(())
}
