//! Link patterns of a strip with open boundary strands, insertion maps and
//! the loops formed by gluing two patterns.
//!
//! Run with `cargo run --example link_patterns`.

use loopcurrent::linkpat::{glue, Insertion, LinkPattern};

fn main() -> loopcurrent::Result<()> {
    for l in 0..=5 {
        println!("L = {l}: {} patterns", LinkPattern::count(l));
    }

    println!("\nL = 3:");
    for a in LinkPattern::all(3) {
        let ins = a.phi_insert(Insertion::Bulk(2))?;
        println!("  {a}  index {}  mirror {}  φ_2 → {ins}", a.index(), a.reflect());
    }

    println!("\ncapping sites 1, 2 of every L = 4 pattern:");
    for a in LinkPattern::all(4) {
        let (rest, closed) = a.cap_off(1)?;
        println!("  {a} → {rest}{}", if closed { "  (closed loop)" } else { "" });
    }

    let a: LinkPattern = "()((".parse()?;
    let b: LinkPattern = "(())".parse()?;
    let c = glue(&a, &b)?;
    println!("\ngluing {a} under {b}: {} closed loops, {} boundary paths", c.loops, c.paths.len());
    Ok(())
}
