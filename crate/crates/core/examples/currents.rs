//! The currents X^(k) and Y by both routes: ground-state expectation values
//! and the closed formula.
//!
//! Run with `cargo run --release --example currents`.

use loopcurrent::chartoda::{closed_x, closed_y};
use loopcurrent::observables::OracleContext;
use loopcurrent::point::sample_point_and_w;
use loopcurrent::Scalar;

fn main() -> loopcurrent::Result<()> {
    for l in 2..=3 {
        let (p, w) = sample_point_and_w(99, l)?;
        let ctx = OracleContext::new(&p)?;
        println!("L = {l}");
        for k in 1..=l {
            let (a, b) = (ctx.x(k)?, closed_x(k, &p)?);
            println!("  X^({k}): oracle = closed: {}   ({})", a == b, b.to_complex());
        }
        let ys = ctx.y_all(&w)?;
        println!("  Y at every marker position equal: {}", ys.windows(2).all(|v| v[0] == v[1]));
        println!("  Y oracle = closed: {}", ys[0] == closed_y(&w, &p)?);
        println!("  Y(w = z_1) = X^(1): {}", closed_y(&p.z[0], &p)? == closed_x(1, &p)?);
    }
    Ok(())
}
