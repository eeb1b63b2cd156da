//! Parameter points `(ζ1, ζ2; z_1, …, z_L)` and seeded generic sampling.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numfield::{is_root_of_unity, sample_generic, ComplexApprox, CycloNum, Predicate, Scalar};

/// Boundary parameters and column rapidities of a strip of width `z.len()`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Point<S> {
    pub zeta1: S,
    pub zeta2: S,
    pub z: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(zeta1: S, zeta2: S, z: Vec<S>) -> Self {
        Point { zeta1, zeta2, z }
    }

    pub fn size(&self) -> usize {
        self.z.len()
    }

    /// Left-right mirror: boundaries swapped and columns reversed.
    pub fn mirrored(&self) -> Self {
        let mut z = self.z.clone();
        z.reverse();
        Point::new(self.zeta2.clone(), self.zeta1.clone(), z)
    }

    /// Boundaries swapped, columns kept.
    pub fn swapped_boundaries(&self) -> Self {
        Point::new(self.zeta2.clone(), self.zeta1.clone(), self.z.clone())
    }

    /// Replaces `z_i` (1-based).
    pub fn with_z(&self, i: usize, v: S) -> Self {
        let mut p = self.clone();
        p.z[i - 1] = v;
        p
    }

    /// Exchanges `z_i` and `z_j` (1-based).
    pub fn swap_z(&self, i: usize, j: usize) -> Self {
        let mut p = self.clone();
        p.z.swap(i - 1, j - 1);
        p
    }

    /// Drops the listed columns (1-based).
    pub fn without(&self, cols: &[usize]) -> Self {
        let z = self.z.iter().enumerate().filter(|(i, _)| !cols.contains(&(i + 1))).map(|(_, x)| x.clone()).collect();
        Point::new(self.zeta1.clone(), self.zeta2.clone(), z)
    }

    /// `z_i ↦ 1/z_i` for every column.
    pub fn inverted_columns(&self) -> Self {
        let z = self.z.iter().map(|x| x.inv().expect("nonzero rapidity")).collect();
        Point::new(self.zeta1.clone(), self.zeta2.clone(), z)
    }

    /// All parameters in the order ζ1, ζ2, z_1, …
    pub fn values(&self) -> Vec<S> {
        let mut v = vec![self.zeta1.clone(), self.zeta2.clone()];
        v.extend(self.z.iter().cloned());
        v
    }

    pub fn from_values(v: &[S]) -> Self {
        Point::new(v[0].clone(), v[1].clone(), v[2..].to_vec())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Point<T> {
        Point::new(f(&self.zeta1), f(&self.zeta2), self.z.iter().map(f).collect())
    }
}

impl Point<CycloNum> {
    pub fn to_complex(&self) -> Point<ComplexApprox> {
        self.map(|v| ComplexApprox::from(v))
    }
}

/// No value and no product or ratio of two values is a root of unity. This
/// keeps every weight denominator and Weyl denominator away from zero.
pub fn multiplicatively_generic(v: &[CycloNum]) -> bool {
    for (i, a) in v.iter().enumerate() {
        if is_root_of_unity(a) {
            return false;
        }
        for b in &v[..i] {
            let prod = a.clone() * b;
            let ratio = a.clone() / b;
            if is_root_of_unity(&prod) || is_root_of_unity(&ratio) {
                return false;
            }
        }
    }
    true
}

pub fn genericity_predicate<'a>() -> Predicate<'a> {
    Predicate::new("no product or ratio of parameters is a root of unity", multiplicatively_generic)
}

/// Seeded generic point of width `size`; `extra` predicates see the values in
/// the order of [`Point::values`].
pub fn sample_point(seed: u64, size: usize, extra: &[Predicate<'_>]) -> Result<Point<CycloNum>> {
    let base = [genericity_predicate(), nonzero_partition_function()];
    let combined: Vec<Predicate<'_>> = base
        .iter()
        .chain(extra)
        .map(|p| Predicate::new(p.name.clone(), move |v: &[CycloNum]| (p.holds)(v)))
        .collect();
    Ok(Point::from_values(&sample_generic(seed, size + 2, &combined)?))
}

fn nonzero_partition_function<'a>() -> Predicate<'a> {
    Predicate::new("partition function nonzero", |v: &[CycloNum]| {
        crate::chartoda::z_formula(&Point::from_values(v)).map(|z| !z.is_zero()).unwrap_or(false)
    })
}

/// A point together with one extra generic value `w` (returned last).
pub fn sample_point_and_w(seed: u64, size: usize) -> Result<(Point<CycloNum>, CycloNum)> {
    let preds = [
        genericity_predicate(),
        Predicate::new("partition function nonzero", |v: &[CycloNum]| {
            crate::chartoda::z_formula(&Point::from_values(&v[..v.len() - 1])).map(|z| !z.is_zero()).unwrap_or(false)
        }),
    ];
    let mut v = sample_generic(seed, size + 3, &preds)?;
    let w = v.pop().unwrap();
    Ok((Point::from_values(&v), w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_helpers() {
        let p = Point::new(
            CycloNum::from_int(2),
            CycloNum::from_int(3),
            vec![CycloNum::from_int(5), CycloNum::from_int(7), CycloNum::from_int(11)],
        );
        let m = p.mirrored();
        assert_eq!(m.zeta1, CycloNum::from_int(3));
        assert_eq!(m.z[0], CycloNum::from_int(11));
        assert_eq!(m.mirrored(), p);
        assert_eq!(p.without(&[2]).z, vec![CycloNum::from_int(5), CycloNum::from_int(11)]);
        assert_eq!(p.swap_z(1, 3).z[0], CycloNum::from_int(11));
        assert_eq!(Point::from_values(&p.values()), p);
    }

    #[test]
    fn sampled_points_are_generic() {
        for seed in 0..5 {
            let p = sample_point(seed, 3, &[]).unwrap();
            assert!(multiplicatively_generic(&p.values()));
        }
        assert!(!multiplicatively_generic(&[CycloNum::from_int(2), CycloNum::from_ints(0, 2)]));
    }
}
