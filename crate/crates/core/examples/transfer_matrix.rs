//! The inhomogeneous double-row transfer matrix: two constructions, a
//! commuting family, and unit column sums.
//!
//! Run with `cargo run --release --example transfer_matrix`.

use loopcurrent::groundstate::admissible_spectral;
use loopcurrent::linalg::sum;
use loopcurrent::point::sample_point_and_w;
use loopcurrent::yangbaxter::{transfer_matrix, transfer_matrix_enum};

fn main() -> loopcurrent::Result<()> {
    let (p, w) = sample_point_and_w(2024, 3)?;
    println!("ζ1 = {}, ζ2 = {}, w = {w}", p.zeta1, p.zeta2);
    let t = transfer_matrix(&w, &p)?;
    println!("T is {}×{}", t.rows, t.cols);
    println!("sequential sweep = full enumeration: {}", t == transfer_matrix_enum(&w, &p)?);

    let w2 = admissible_spectral(&p, 7, 1)?.remove(0);
    let t2 = transfer_matrix(&w2, &p)?;
    println!("T(w) T(w') = T(w') T(w): {}", t.mul(&t2) == t2.mul(&t));

    let columns: Vec<_> = (0..t.cols).map(|j| sum(&t.transpose().row(j).to_vec())).collect();
    println!("column sums: {}", columns.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
    Ok(())
}
