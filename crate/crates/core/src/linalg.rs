//! Dense matrices over a [`Scalar`], determinants and kernels by fraction-free elimination.

use std::fmt;

use serde::Serialize;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::numfield::{CycloNum, Rational, Scalar};

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    /// Builds a matrix column by column.
    pub fn from_columns(rows: usize, columns: Vec<Vec<S>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product, skipping zero entries of the left factor.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let t = a.clone() * b;
                        out[(i, j)] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a.clone() * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, v: &[S]) -> Vec<S> {
        self.transpose().apply(v)
    }

    /// Bilinear form `uᵀ M v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> S {
        let mv = self.apply(v);
        dot(u, &mv)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entrywise comparison with [`Scalar::close_to`].
    pub fn close_to(&self, o: &Self, rel_tol: f64) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols) && self.data.iter().zip(&o.data).all(|(a, b)| a.close_to(b, rel_tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Determinant by Bareiss elimination.
    pub fn determinant(&self) -> S {
        S::determinant_of(self)
    }

    /// Bareiss elimination with divisions in `S`.
    pub fn determinant_generic(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut m = self.clone();
        let mut prev = S::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = choose_pivot(&m, k, n - 1, k) else {
                return S::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[(i, j)].clone() * &m[(k, k)] - m[(i, k)].clone() * &m[(k, j)];
                    m[(i, j)] = t / &prev;
                }
                m[(i, k)] = S::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Solution of `self · x = b`, `None` if singular.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        S::solve_in(self, b)
    }

    /// Pivoted Gaussian elimination with divisions in `S`.
    pub fn solve_generic(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, self.cols, "solve with a non-square matrix");
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut m = Matrix::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        for k in 0..n {
            let p = choose_pivot(&m, k, n - 1, k)?;
            if p != k {
                m.swap_rows(p, k);
            }
            let inv = m[(k, k)].inv()?;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone() * &inv;
                for j in k + 1..=n {
                    let t = f.clone() * &m[(k, j)];
                    m[(i, j)] -= &t;
                }
                m[(i, k)] = S::zero();
            }
        }
        let mut x = vec![S::zero(); n];
        for i in (0..n).rev() {
            let mut acc = m[(i, n)].clone();
            for j in i + 1..n {
                acc -= &(m[(i, j)].clone() * &x[j]);
            }
            x[i] = acc / &m[(i, i)];
        }
        Some(x)
    }

    /// Basis of the right kernel from the reduced row echelon form, one vector
    /// per free column with a unit entry there. Float entries below a relative
    /// threshold are flushed to zero after every elimination step.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.clone();
        if !S::EXACT {
            m.flush_small();
        }
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = choose_pivot(&m, r, rows - 1, c) else { continue };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..cols {
                m[(r, j)] *= &inv;
            }
            for i in 0..rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..cols {
                    let t = f.clone() * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
                m[(i, c)] = S::zero();
                if !S::EXACT {
                    // earlier pivot rows keep their unit pivot
                    m.flush_absolute(i, FLUSH_TOL);
                    if i > r {
                        m.normalize_row(i);
                    } else {
                        m.flush_row(i);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); cols];
                v[f] = S::one();
                for (ri, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(ri, f)].clone();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn normalize_row(&mut self, i: usize) {
        let big = self.row(i).iter().map(|x| x.to_complex().norm()).fold(0.0, f64::max);
        if big > 0.0 {
            let s = S::from_rational(&crate::numfield::Rational::from_float(1.0 / big).unwrap());
            for j in 0..self.cols {
                self[(i, j)] *= &s;
            }
        }
        self.flush_row(i);
    }

    fn flush_absolute(&mut self, i: usize, tol: f64) {
        for j in 0..self.cols {
            if self[(i, j)].to_complex().norm() <= tol {
                self[(i, j)] = S::zero();
            }
        }
    }

    fn flush_row(&mut self, i: usize) {
        let scale = self.row(i).iter().map(|x| x.to_complex().norm()).fold(0.0, f64::max);
        for j in 0..self.cols {
            if self[(i, j)].to_complex().norm() <= FLUSH_TOL * scale.max(1e-300) {
                self[(i, j)] = S::zero();
            }
        }
    }

    fn flush_small(&mut self) {
        for i in 0..self.rows {
            self.normalize_row(i);
        }
    }
}

/// Pivot among rows `from..=to` in column `c`: cheapest exact entry, or largest float entry.
/// Entries of unit-normalized rows below this are treated as zero.
const FLUSH_TOL: f64 = 1e-11;

// ------------------------------------------------------- Eisenstein integers

/// `a + bω` with integer coordinates.
#[derive(Clone, PartialEq, Debug)]
struct Eisenstein {
    a: BigInt,
    b: BigInt,
}

impl Eisenstein {
    fn zero() -> Self {
        Eisenstein { a: BigInt::zero(), b: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn mul(&self, o: &Self) -> Self {
        let bd = &self.b * &o.b;
        Eisenstein { a: &self.a * &o.a - &bd, b: &self.a * &o.b + &self.b * &o.a - bd }
    }

    fn sub(&self, o: &Self) -> Self {
        Eisenstein { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    /// Quotient known to lie in the ring.
    fn div_exact(&self, o: &Self) -> Self {
        let n = &o.a * &o.a - &o.a * &o.b + &o.b * &o.b;
        let conj = Eisenstein { a: &o.a - &o.b, b: -o.b.clone() };
        let p = self.mul(&conj);
        debug_assert!((&p.a % &n).is_zero() && (&p.b % &n).is_zero(), "inexact division in Z[ω]");
        Eisenstein { a: p.a / &n, b: p.b / n }
    }

    fn bits(&self) -> u64 {
        self.a.bits().max(self.b.bits())
    }

    fn scaled(&self, den: &BigInt) -> CycloNum {
        CycloNum::new(Rational::new(self.a.clone(), den.clone()), Rational::new(self.b.clone(), den.clone()))
    }
}

/// Clears the denominators of a row; returns the integer row and the common denominator.
fn integer_row(row: &[CycloNum]) -> (Vec<Eisenstein>, BigInt) {
    let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.a.denom()).lcm(x.b.denom()));
    let lift = |r: &Rational| r.numer() * (&den / r.denom());
    (row.iter().map(|x| Eisenstein { a: lift(&x.a), b: lift(&x.b) }).collect(), den)
}

/// Fraction-free elimination over `Z[ω]` after clearing row denominators.
/// Returns the determinant and, with a right-hand side, the solution.
pub(crate) fn eisenstein_eliminate(m: &Matrix<CycloNum>, rhs: Option<&[CycloNum]>) -> (CycloNum, Option<Vec<CycloNum>>) {
    assert_eq!(m.rows, m.cols, "elimination of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return (CycloNum::one(), rhs.map(|_| Vec::new()));
    }
    let width = n + usize::from(rhs.is_some());
    let mut den = BigInt::one();
    let mut a: Vec<Vec<Eisenstein>> = (0..n)
        .map(|i| {
            let mut row: Vec<CycloNum> = m.row(i).to_vec();
            if let Some(b) = rhs {
                row.push(b[i].clone());
            }
            let (r, d) = integer_row(&row);
            den *= d;
            r
        })
        .collect();
    let mut prev = Eisenstein { a: BigInt::one(), b: BigInt::zero() };
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].bits()) else {
            return (CycloNum::zero(), None);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..width {
                row[j] = row[j].mul(&pivot[k]).sub(&row[k].mul(&pivot[j])).div_exact(&prev);
            }
            row[k] = Eisenstein::zero();
        }
        prev = a[k][k].clone();
    }
    // `prev` is the determinant of the integer matrix up to the swap sign
    let mut det = prev.clone();
    if negate {
        det = Eisenstein { a: -det.a, b: -det.b };
    }
    let value = det.scaled(&den);
    let Some(_) = rhs else { return (value, None) };
    // back substitution for y = prev · x, which stays in the ring
    let mut y = vec![Eisenstein::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].mul(&prev);
        for j in i + 1..n {
            acc = acc.sub(&a[i][j].mul(&y[j]));
        }
        y[i] = acc.div_exact(&a[i][i]);
    }
    let scale = CycloNum::new(Rational::from_integer(prev.a.clone()), Rational::from_integer(prev.b.clone()));
    let inv = scale.inv().expect("nonzero pivot");
    let x = y.iter().map(|v| v.scaled(&BigInt::one()) * &inv).collect();
    (value, Some(x))
}

fn choose_pivot<S: Scalar>(m: &Matrix<S>, from: usize, to: usize, c: usize) -> Option<usize> {
    let to = to.min(m.rows - 1);
    (from..=to)
        .filter(|&i| !m[(i, c)].is_zero())
        .min_by(|&a, &b| m[(a, c)].pivot_score().total_cmp(&m[(b, c)].pivot_score()))
}

pub fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    assert_eq!(u.len(), v.len());
    let mut acc = S::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a.clone() * b);
        }
    }
    acc
}

pub fn sum<S: Scalar>(v: &[S]) -> S {
    let mut acc = S::zero();
    for x in v {
        acc += x;
    }
    acc
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
