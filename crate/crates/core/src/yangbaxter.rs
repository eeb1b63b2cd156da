//! Local R and K weights, the double-row transfer matrix and its marked variants.
//!
//! Geometry of one double row of width `L` (sites numbered 1..L from the left):
//! the lower row carries `R(z_i, w)` at column `i`, the upper row `R(1/w, z_i)`,
//! the left wall `K_l(w, ζ1)` and the right wall `K_r(w, ζ2)`. In the strand
//! picture the auxiliary line runs left to right through the lower row, turns
//! at the right wall and runs back through the upper row.
//!
//! A plaquette is either *straight* (the auxiliary strand passes it on one
//! side, column strands continue) or a *turn* (a Temperley–Lieb cup-cap).
//! A wall either *stays* (the auxiliary strand U-turns) or *reflects* (both
//! halves attach to the boundary).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::linkpat::{Boundary, Diagram, End, Line, LinkPattern, MarkedEdge, Node, ABOVE, BELOW, EAST, WEST};
use crate::numfield::{bracket, kfunc_q, Scalar};
use crate::point::Point;

/// Deformation parameter `q`; the loop weight is `−(q + 1/q)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Deformation<S> {
    pub q: S,
}

impl<S: Scalar> Deformation<S> {
    /// `q = e^{2πi/3}`, loop weight 1.
    pub fn critical() -> Self {
        Deformation { q: S::omega() }
    }

    pub fn new(q: S) -> Self {
        Deformation { q }
    }

    pub fn loop_weight(&self) -> S {
        -(self.q.clone() + self.q.inv().expect("q nonzero"))
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RWeights<S> {
    /// straight plaquette
    pub w1: S,
    /// turn plaquette
    pub w2: S,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KWeights<S> {
    pub stay: S,
    pub reflect: S,
    pub side: Boundary,
}

/// `R(z,w) = [qz/w]/[qw/z] · 1 + [z/w]/[qw/z] · e`.
pub fn r_weights<S: Scalar>(z: &S, w: &S) -> Result<RWeights<S>> {
    r_weights_q(&Deformation::critical(), z, w)
}

pub fn r_weights_q<S: Scalar>(d: &Deformation<S>, z: &S, w: &S) -> Result<RWeights<S>> {
    let q = &d.q;
    let u = z.checked_div(w, "rapidity w")?;
    let den = bracket(&(q.clone() * w / z))?;
    let w1 = bracket(&(q.clone() * &u))?.checked_div(&den, "[qw/z]")?;
    let w2 = bracket(&u)?.checked_div(&den, "[qw/z]")?;
    Ok(RWeights { w1, w2 })
}

pub fn k_weights<S: Scalar>(side: Boundary, w: &S, zeta: &S) -> Result<KWeights<S>> {
    k_weights_q(&Deformation::critical(), side, w, zeta)
}

/// Right: stay `k(w,ζ)/k(1/w,ζ)`, reflect `−[q][w²]/k(1/w,ζ)`.
/// Left: stay `k(q/w,ζ)/k(w/q,ζ)`, reflect `−[q][q²/w²]/k(w/q,ζ)`.
pub fn k_weights_q<S: Scalar>(d: &Deformation<S>, side: Boundary, w: &S, zeta: &S) -> Result<KWeights<S>> {
    let q = &d.q;
    let winv = w.inv().ok_or_else(|| Error::Domain("w = 0".into()))?;
    let bq = bracket(q)?;
    let (num, refl_arg, den, what) = match side {
        Boundary::Right => (kfunc_q(q, w, zeta)?, w.clone() * w, kfunc_q(q, &winv, zeta)?, "k(1/w,ζ2)"),
        Boundary::Left => {
            let wq = w.clone() / q;
            let qw = q.clone() * &winv;
            (kfunc_q(q, &qw, zeta)?, qw.clone() * &qw, kfunc_q(q, &wq, zeta)?, "k(w/q,ζ1)")
        }
    };
    let stay = num.checked_div(&den, what)?;
    let reflect = -(bq * bracket(&refl_arg)?).checked_div(&den, what)?;
    Ok(KWeights { stay, reflect, side })
}

// ------------------------------------------------------- boundary contraction

/// Residuals of the three connectivity weights that appear when a small link
/// to the left wall is pushed through a double row (`z_1 = qζ`). All three
/// vanish at `q = ω`; they use `q³ = 1` and the wall normalization.
pub fn left_contraction_residuals<S: Scalar>(q: &S, zeta: &S, w: &S) -> Result<[S; 3]> {
    let b = |x: S| bracket(&x);
    let qi = q.inv().ok_or_else(|| Error::Domain("q = 0".into()))?;
    let wi = w.inv().ok_or_else(|| Error::Domain("w = 0".into()))?;
    let zw = zeta.clone() * w;
    let zwi = zw.inv().ok_or_else(|| Error::Domain("ζ = 0".into()))?;
    let q2 = q.clone() * q;
    let den = b(q2.clone() * &zw)?;
    // lower plaquette ratios with z_1 = qζ
    let top_turn = b(qi.clone() * &zwi)?.checked_div(&den, "[q²ζw]")?;
    let top_stay = b(zwi.clone())?.checked_div(&den, "[q²ζw]")?;
    let side_den = b(w.clone() / zeta)?;
    let a = b(q2.clone() * zeta * &wi)?.checked_div(&side_den, "[qw/qζ]")?;
    let c = b(q.clone() * zeta * &wi)?.checked_div(&side_den, "[qw/qζ]")?;
    let kden = kfunc_q(q, &(w.clone() * &qi), zeta)?;
    let stay = kfunc_q(q, &(q.clone() * &wi), zeta)?.checked_div(&kden, "k(w/q,ζ)")?;
    let refl = (b(qi.clone())? * b(q2.clone() * &wi * &wi)?).checked_div(&kden, "k(w/q,ζ)")?;
    let g1 = top_stay.clone() * (a.clone() + &c) * (stay.clone() + &refl) + top_turn.clone() * &a * &stay;
    let qz = q.clone() * zeta;
    let kden2 = kfunc_q(q, &(w.clone() * &qi), &qz)?;
    let g2 = top_turn.clone() * &c * (stay + &refl) - kfunc_q(q, &(q.clone() * &wi), &qz)?.checked_div(&kden2, "k(w/q,qζ)")?;
    let g3 = top_turn * &a * &refl - (b(qi)? * b(q2 * &wi * &wi)?).checked_div(&kden2, "k(w/q,qζ)")?;
    Ok([g1, g2, g3])
}

/// Residual of the three-term cancellation behind the bulk recursion of the
/// transfer matrix; vanishes for every `q` with loop weight `−(q + 1/q)`.
pub fn bulk_triple_residual<S: Scalar>(q: &S, u: &S) -> Result<S> {
    let b = |x: S| bracket(&x);
    let qi = q.inv().ok_or_else(|| Error::Domain("q = 0".into()))?;
    let ui = u.inv().ok_or_else(|| Error::Domain("u = 0".into()))?;
    let d1 = b(q.clone() * q * u)?;
    let d2 = b(q.clone() * u)?;
    let a = b(q.clone() * &qi * &ui)?.checked_div(&d1, "[q²u]")?;
    let a2 = b(qi.clone() * &ui)?.checked_div(&d1, "[q²u]")?;
    let c = b(q.clone() * &ui)?.checked_div(&d2, "[qu]")?;
    let c2 = b(ui.clone())?.checked_div(&d2, "[qu]")?;
    Ok(a.clone() * &c + a2 * &c2 - (q.clone() + &qi) * &a * &c2)
}

// ------------------------------------------------------- simple operators

/// Temperley–Lieb generator `e_i` on sites `i, i+1` (1-based), as an action on
/// partner lists. Returns the new partners and whether a loop closed.
fn act_e(p: &[End], i: usize) -> (Vec<End>, bool) {
    let (x, y) = (i - 1, i);
    if p[x] == End::Site(y) {
        return (p.to_vec(), true);
    }
    let mut q = p.to_vec();
    let (a, b) = (p[x], p[y]);
    if let End::Site(s) = a {
        q[s] = b;
    }
    if let End::Site(s) = b {
        q[s] = a;
    }
    q[x] = End::Site(y);
    q[y] = End::Site(x);
    (q, false)
}

/// Boundary generator: the strand at the end site attaches to its wall and
/// the old partner is sent to the same wall.
fn act_f(p: &[End], side: Boundary) -> Vec<End> {
    let x = match side {
        Boundary::Left => 0,
        Boundary::Right => p.len() - 1,
    };
    let mut q = p.to_vec();
    if let End::Site(s) = p[x] {
        q[s] = End::Boundary(side);
    }
    q[x] = End::Boundary(side);
    q
}

pub fn tl_generator<S: Scalar>(size: usize, i: usize, d: &Deformation<S>) -> Matrix<S> {
    let tau = d.loop_weight();
    let mut m = Matrix::zeros(1 << size, 1 << size);
    for b in LinkPattern::all(size) {
        let (p, closed) = act_e(&b.partners(), i);
        let out = LinkPattern::from_partners(&p);
        m[(out.index(), b.index())] += &if closed { tau.clone() } else { S::one() };
    }
    m
}

pub fn boundary_generator<S: Scalar>(size: usize, side: Boundary) -> Matrix<S> {
    let mut m = Matrix::zeros(1 << size, 1 << size);
    for b in LinkPattern::all(size) {
        let out = LinkPattern::from_partners(&act_f(&b.partners(), side));
        m[(out.index(), b.index())] += &S::one();
    }
    m
}

/// `R_i(z, w) = w1 · 1 + w2 · e_i` acting on sites `i, i+1`.
pub fn r_operator<S: Scalar>(size: usize, i: usize, z: &S, w: &S) -> Result<Matrix<S>> {
    let d = Deformation::critical();
    let r = r_weights_q(&d, z, w)?;
    Ok(Matrix::identity(1 << size).scale(&r.w1).add(&tl_generator(size, i, &d).scale(&r.w2)))
}

/// `K(w, ζ) = stay · 1 + reflect · f` at the given wall.
pub fn k_operator<S: Scalar>(size: usize, side: Boundary, w: &S, zeta: &S) -> Result<Matrix<S>> {
    let k = k_weights(side, w, zeta)?;
    Ok(Matrix::identity(1 << size).scale(&k.stay).add(&boundary_generator(size, side).scale(&k.reflect)))
}

/// The R operator that carries `Ψ(…, z_i, z_{i+1}, …)` to `Ψ(…, z_{i+1}, z_i, …)`:
/// its weights are `r_weights(z_{i+1}, z_i)`.
pub fn exchange_operator<S: Scalar>(p: &Point<S>, i: usize) -> Result<Matrix<S>> {
    r_operator(p.size(), i, &p.z[i], &p.z[i - 1])
}

/// Permutation matrix of [`LinkPattern::reflect`].
pub fn reflection<S: Scalar>(size: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(1 << size, 1 << size);
    for a in LinkPattern::all(size) {
        m[(a.reflect().index(), a.index())] = S::one();
    }
    m
}

/// Insertion map as a `2^L × 2^{L'}` 0/1 matrix.
pub fn insertion_matrix<S: Scalar>(size: usize, at: crate::linkpat::Insertion) -> Result<Matrix<S>> {
    use crate::linkpat::Insertion;
    let small = match at {
        Insertion::Bulk(_) => size - 2,
        _ => size - 1,
    };
    let mut m = Matrix::zeros(1 << size, 1 << small);
    for a in LinkPattern::all(small) {
        m[(a.phi_insert(at)?.index(), a.index())] = S::one();
    }
    Ok(m)
}

// ------------------------------------------------------- row configurations

/// One of the `2^{2L+2}` configurations of a double row.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RowConfig {
    /// bit `i` set: column `i+1` of the lower row is a turn
    pub lower: u32,
    /// bit `i` set: column `i+1` of the upper row is a turn
    pub upper: u32,
    pub left_stays: bool,
    pub right_stays: bool,
}

impl RowConfig {
    pub fn count(size: usize) -> usize {
        1 << (2 * size + 2)
    }

    pub fn from_index(size: usize, idx: usize) -> Self {
        let mask = (1u32 << size) - 1;
        RowConfig {
            lower: idx as u32 & mask,
            upper: (idx >> size) as u32 & mask,
            left_stays: (idx >> (2 * size)) & 1 == 0,
            right_stays: (idx >> (2 * size + 1)) & 1 == 0,
        }
    }

    pub fn all(size: usize) -> impl Iterator<Item = RowConfig> {
        (0..Self::count(size)).map(move |i| Self::from_index(size, i))
    }

    /// Draws the double row into `d`. Input sites are `Line::Bottom`, output `Line::Top`.
    pub fn draw(&self, d: &mut Diagram) {
        let l = d.size();
        for i in 0..l {
            let (b, m, t) = (Node::new(Line::Bottom, i), Node::new(Line::Middle, i), Node::new(Line::Top, i));
            let (hw, he) = (Node::new(Line::AuxLower, i), Node::new(Line::AuxLower, i + 1));
            let (gw, ge) = (Node::new(Line::AuxUpper, i), Node::new(Line::AuxUpper, i + 1));
            if (self.lower >> i) & 1 == 0 {
                d.connect(hw, EAST, m, BELOW);
                d.connect(b, ABOVE, he, WEST);
            } else {
                d.connect(b, ABOVE, hw, EAST);
                d.connect(m, BELOW, he, WEST);
            }
            if (self.upper >> i) & 1 == 0 {
                d.connect(m, ABOVE, gw, EAST);
                d.connect(t, BELOW, ge, WEST);
            } else {
                d.connect(m, ABOVE, ge, WEST);
                d.connect(gw, EAST, t, BELOW);
            }
        }
        let (h0, g0) = (Node::new(Line::AuxLower, 0), Node::new(Line::AuxUpper, 0));
        let (hl, gl) = (Node::new(Line::AuxLower, l), Node::new(Line::AuxUpper, l));
        if self.left_stays {
            d.connect(h0, WEST, g0, WEST);
        } else {
            d.attach(h0, WEST, Boundary::Left);
            d.attach(g0, WEST, Boundary::Left);
        }
        if self.right_stays {
            d.connect(hl, EAST, gl, EAST);
        } else {
            d.attach(hl, EAST, Boundary::Right);
            d.attach(gl, EAST, Boundary::Right);
        }
    }
}

/// All local weights of one double row at spectral parameter `w`.
#[derive(Clone, Debug)]
pub struct RowWeights<S> {
    pub lower: Vec<RWeights<S>>,
    pub upper: Vec<RWeights<S>>,
    pub left: KWeights<S>,
    pub right: KWeights<S>,
    pub loop_weight: S,
}

impl<S: Scalar> RowWeights<S> {
    pub fn new(d: &Deformation<S>, w: &S, p: &Point<S>) -> Result<Self> {
        let winv = w.inv().ok_or_else(|| Error::Domain("w = 0".into()))?;
        let lower = p.z.iter().map(|z| r_weights_q(d, z, w)).collect::<Result<Vec<_>>>()?;
        let upper = p.z.iter().map(|z| r_weights_q(d, &winv, z)).collect::<Result<Vec<_>>>()?;
        Ok(RowWeights {
            lower,
            upper,
            left: k_weights_q(d, Boundary::Left, w, &p.zeta1)?,
            right: k_weights_q(d, Boundary::Right, w, &p.zeta2)?,
            loop_weight: d.loop_weight(),
        })
    }

    pub fn config_weight(&self, c: &RowConfig) -> S {
        let pick = |r: &RWeights<S>, turn: bool| if turn { r.w2.clone() } else { r.w1.clone() };
        let mut wt = if c.left_stays { self.left.stay.clone() } else { self.left.reflect.clone() };
        wt *= if c.right_stays { &self.right.stay } else { &self.right.reflect };
        for i in 0..self.lower.len() {
            wt *= &pick(&self.lower[i], (c.lower >> i) & 1 == 1);
            wt *= &pick(&self.upper[i], (c.upper >> i) & 1 == 1);
        }
        wt
    }

    fn all_config_weights(&self, size: usize) -> Vec<S> {
        (0..RowConfig::count(size)).into_par_iter().map(|i| self.config_weight(&RowConfig::from_index(size, i))).collect()
    }
}

fn loop_power<S: Scalar>(tau: &S, n: usize) -> S {
    tau.powi(n as i64)
}

// ------------------------------------------------------- transfer matrices

/// Double-row transfer matrix at `q = ω`, built by the sequential sweep.
pub fn transfer_matrix<S: Scalar>(w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    transfer_matrix_q(&Deformation::critical(), w, p)
}

/// Sequential sweep: the auxiliary strand is threaded through the row as an
/// extra position in front of the sites, so every plaquette acts as either the
/// identity or a Temperley–Lieb generator on an extended pattern.
pub fn transfer_matrix_q<S: Scalar>(d: &Deformation<S>, w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    let weights = RowWeights::new(d, w, p)?;
    let l = p.size();
    let columns: Vec<Vec<S>> = (0..1usize << l)
        .into_par_iter()
        .map(|b| sweep_column(&weights, &LinkPattern::from_index(l, b)))
        .collect();
    Ok(Matrix::from_columns(1 << l, columns))
}

// extended-state partner codes; positions 0..=L, anchor at L+1
const TO_LEFT: u8 = 250;
const TO_RIGHT: u8 = 251;

type Ext = Vec<u8>;

fn ext_join(s: &mut Ext, x: usize, y: usize) -> bool {
    let (px, py) = (s[x], s[y]);
    let closed = px as usize == y;
    if !closed {
        if px < TO_LEFT {
            s[px as usize] = py;
        }
        if py < TO_LEFT {
            s[py as usize] = px;
        }
    }
    s[x] = y as u8;
    s[y] = x as u8;
    closed
}

fn ext_attach(s: &mut Ext, x: usize, code: u8) {
    let px = s[x];
    if px < TO_LEFT {
        s[px as usize] = code;
    }
    s[x] = code;
}

fn sweep_column<S: Scalar>(wts: &RowWeights<S>, beta: &LinkPattern) -> Vec<S> {
    let l = beta.size();
    let anchor = l + 1;
    let mut start: Ext = vec![0; l + 2];
    start[0] = anchor as u8;
    start[anchor] = 0;
    for (i, e) in beta.partners().into_iter().enumerate() {
        start[i + 1] = match e {
            End::Site(j) => (j + 1) as u8,
            End::Boundary(Boundary::Left) => TO_LEFT,
            End::Boundary(Boundary::Right) => TO_RIGHT,
        };
    }
    let tau = &wts.loop_weight;
    let mut states: HashMap<Ext, S> = HashMap::from([(start, S::one())]);

    // one plaquette step: straight keeps the state, turn joins positions (x, x+1)
    let step = |states: HashMap<Ext, S>, x: usize, r: &RWeights<S>| {
        let mut next: HashMap<Ext, S> = HashMap::with_capacity(2 * states.len());
        for (s, v) in states {
            if !r.w2.is_zero() {
                let mut t = s.clone();
                let closed = ext_join(&mut t, x, x + 1);
                let mut val = v.clone() * &r.w2;
                if closed {
                    val *= tau;
                }
                add_into(&mut next, t, val);
            }
            if !r.w1.is_zero() {
                add_into(&mut next, s, v * &r.w1);
            }
        }
        next
    };

    for i in 0..l {
        states = step(states, i, &wts.lower[i]);
    }
    // right wall at position L
    let mut next = HashMap::with_capacity(2 * states.len());
    for (s, v) in states {
        let mut t = s.clone();
        ext_attach(&mut t, l, TO_RIGHT);
        add_into(&mut next, t, v.clone() * &wts.right.reflect);
        add_into(&mut next, s, v * &wts.right.stay);
    }
    states = next;
    for i in (0..l).rev() {
        states = step(states, i, &wts.upper[i]);
    }
    // left wall closes position 0 against the anchor
    let mut col = vec![S::zero(); 1 << l];
    for (s, v) in states {
        for stays in [true, false] {
            let mut t = s.clone();
            let (px, pa) = (t[0], t[anchor]);
            let mut val = v.clone() * if stays { &wts.left.stay } else { &wts.left.reflect };
            if px as usize == anchor {
                if stays {
                    val *= tau;
                }
            } else if stays {
                if px < TO_LEFT {
                    t[px as usize] = pa;
                }
                if pa < TO_LEFT {
                    t[pa as usize] = px;
                }
            } else {
                if px < TO_LEFT {
                    t[px as usize] = TO_LEFT;
                }
                if pa < TO_LEFT {
                    t[pa as usize] = TO_LEFT;
                }
            }
            let ends: Vec<End> = (1..=l)
                .map(|i| match t[i] {
                    TO_LEFT => End::Boundary(Boundary::Left),
                    TO_RIGHT => End::Boundary(Boundary::Right),
                    j => End::Site(j as usize - 1),
                })
                .collect();
            col[LinkPattern::from_partners(&ends).index()] += &val;
        }
    }
    col
}

fn add_into<S: Scalar>(m: &mut HashMap<Ext, S>, k: Ext, v: S) {
    if v.is_zero() {
        return;
    }
    match m.get_mut(&k) {
        Some(x) => *x += &v,
        None => {
            m.insert(k, v);
        }
    }
}

/// Same operator by brute force over all row configurations.
pub fn transfer_matrix_enum<S: Scalar>(w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    transfer_matrix_enum_q(&Deformation::critical(), w, p)
}

pub fn transfer_matrix_enum_q<S: Scalar>(d: &Deformation<S>, w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    let weights = RowWeights::new(d, w, p)?;
    let l = p.size();
    let cw = weights.all_config_weights(l);
    let columns = (0..1usize << l)
        .into_par_iter()
        .map(|b| {
            let beta = LinkPattern::from_index(l, b);
            let mut col = vec![S::zero(); 1 << l];
            for (ci, wt) in cw.iter().enumerate() {
                if wt.is_zero() {
                    continue;
                }
                let mut dg = Diagram::new(l);
                dg.add_below(Line::Bottom, &beta);
                RowConfig::from_index(l, ci).draw(&mut dg);
                let (out, loops) = dg.output(Line::Top, ABOVE);
                col[out.index()] += &(wt.clone() * loop_power(&weights.loop_weight, loops));
            }
            col
        })
        .collect();
    Ok(Matrix::from_columns(1 << l, columns))
}

/// The double row acting downward: an upward pattern `α` sits on the output
/// line and the upward pattern read below the input line is returned. Entry
/// `(α', α)` sums the weights of configurations sending `α` to `α'`.
pub fn flipped_transfer_matrix_enum<S: Scalar>(w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    let d = Deformation::critical();
    let weights = RowWeights::new(&d, w, p)?;
    let l = p.size();
    let cw = weights.all_config_weights(l);
    let columns = (0..1usize << l)
        .into_par_iter()
        .map(|a| {
            let alpha = LinkPattern::from_index(l, a);
            let mut col = vec![S::zero(); 1 << l];
            for (ci, wt) in cw.iter().enumerate() {
                let mut dg = Diagram::new(l);
                dg.add_above(Line::Top, &alpha);
                RowConfig::from_index(l, ci).draw(&mut dg);
                let (out, loops) = dg.output(Line::Bottom, BELOW);
                col[out.index()] += &(wt.clone() * loop_power(&weights.loop_weight, loops));
            }
            col
        })
        .collect();
    Ok(Matrix::from_columns(1 << l, columns))
}

// ------------------------------------------------------- marked operators

/// Bilinear forms `⟨α| F̂ |β⟩` for several marker placements at once:
/// entry `(α, β)` of each matrix sums configuration weight times the signed
/// crossings of the marked edge, `α` glued above the output line and `β`
/// below the input line. Loops weigh 1.
pub fn marked_transfer_matrices<S: Scalar>(edges: &[MarkedEdge], w: &S, p: &Point<S>) -> Result<Vec<Matrix<S>>> {
    let weights = RowWeights::new(&Deformation::critical(), w, p)?;
    let l = p.size();
    let n = 1usize << l;
    let cw = weights.all_config_weights(l);
    let probe = Diagram::new(l);
    let ids: Vec<usize> = edges.iter().map(|e| probe.node_index(e.node())).collect();
    // columns indexed by β, each holding one vector per edge
    let columns: Vec<Vec<Vec<S>>> = (0..n)
        .into_par_iter()
        .map(|b| {
            let beta = LinkPattern::from_index(l, b);
            let mut cols = vec![vec![S::zero(); n]; edges.len()];
            let mut counts = vec![0i32; probe.node_total()];
            for (ci, wt) in cw.iter().enumerate() {
                if wt.is_zero() {
                    continue;
                }
                let mut base = Diagram::new(l);
                base.add_below(Line::Bottom, &beta);
                RowConfig::from_index(l, ci).draw(&mut base);
                for alpha in LinkPattern::all(l) {
                    let mut dg = base.clone();
                    dg.add_above(Line::Top, &alpha);
                    counts.iter_mut().for_each(|c| *c = 0);
                    dg.accumulate_crossings(&mut counts);
                    for (e, &id) in ids.iter().enumerate() {
                        if counts[id] != 0 {
                            cols[e][alpha.index()] += &wt.mul_int(counts[id] as i64);
                        }
                    }
                }
            }
            cols
        })
        .collect();
    Ok((0..edges.len())
        .map(|e| Matrix::from_columns(n, columns.iter().map(|c| c[e].clone()).collect()))
        .collect())
}

pub fn marked_transfer_matrix<S: Scalar>(e: &MarkedEdge, w: &S, p: &Point<S>) -> Result<Matrix<S>> {
    Ok(marked_transfer_matrices(std::slice::from_ref(e), w, p)?.remove(0))
}

/// Single entry `⟨α| F̂ |β⟩`.
pub fn marked_transfer<S: Scalar>(e: &MarkedEdge, w: &S, p: &Point<S>, alpha: &LinkPattern, beta: &LinkPattern) -> Result<S> {
    let weights = RowWeights::new(&Deformation::critical(), w, p)?;
    let l = p.size();
    let mut acc = S::zero();
    for c in RowConfig::all(l) {
        let mut dg = Diagram::new(l);
        dg.add_below(Line::Bottom, beta);
        c.draw(&mut dg);
        dg.add_above(Line::Top, alpha);
        let n = dg.crossings_at(e.node());
        if n != 0 {
            acc += &weights.config_weight(&c).mul_int(n as i64);
        }
    }
    Ok(acc)
}

/// Marker pair alone: signed crossings at column `k` when `α` is glued on `β`.
pub fn kappa_x(k: usize, alpha: &LinkPattern, beta: &LinkPattern) -> i32 {
    let mut d = Diagram::new(alpha.size());
    d.add_below(Line::Bottom, beta);
    d.add_above(Line::Bottom, alpha);
    d.crossings_at(Node::new(Line::Bottom, k - 1))
}

pub fn kappa_matrix<S: Scalar>(size: usize, k: usize) -> Matrix<S> {
    Matrix::from_fn(1 << size, 1 << size, |a, b| {
        S::from_int(kappa_x(k, &LinkPattern::from_index(size, a), &LinkPattern::from_index(size, b)) as i64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{kfunc, CycloNum, ComplexApprox};
    use crate::point::{sample_point, sample_point_and_w};

    fn c(a: i64, b: i64) -> CycloNum {
        CycloNum::from_ints(a, b)
    }

    #[test]
    fn weight_examples() {
        let z = CycloNum::from_fracs((3, 2), (1, 3));
        let r = r_weights(&z, &z).unwrap();
        assert_eq!((r.w1, r.w2), (CycloNum::one(), CycloNum::zero()));
        let k = k_weights(Boundary::Right, &CycloNum::one(), &z).unwrap();
        assert_eq!((k.stay, k.reflect), (CycloNum::one(), CycloNum::zero()));
        let k = k_weights(Boundary::Left, &CycloNum::omega(), &z).unwrap();
        assert_eq!((k.stay, k.reflect), (CycloNum::one(), CycloNum::zero()));
    }

    #[test]
    fn pole_is_reported() {
        // [qw/z] = 0 when z = qw
        let w = c(2, 0);
        let z = CycloNum::omega() * &w;
        assert!(matches!(r_weights(&z, &w), Err(Error::Pole(_))));
    }

    #[test]
    fn isotropic_ratio() {
        // u² = −1/q makes [qu] = [u]
        let q = ComplexApprox::omega();
        let u = (-(q.inv().unwrap())).sqrt();
        let w = ComplexApprox::new(1.3, 0.2);
        let r = r_weights(&(u * w), &w).unwrap();
        assert!(r.w1.close_to(&r.w2, 1e-12));
    }

    #[test]
    fn walls_are_stochastic_at_critical_point() {
        let (p, w) = sample_point_and_w(3, 1).unwrap();
        for side in [Boundary::Left, Boundary::Right] {
            let k = k_weights(side, &w, &p.zeta1).unwrap();
            assert_eq!(k.stay + k.reflect, CycloNum::one());
        }
        let r = r_weights(&p.z[0], &w).unwrap();
        assert_eq!(r.w1 + r.w2, CycloNum::one());
    }

    #[test]
    fn kfunc_in_walls() {
        let (p, w) = sample_point_and_w(5, 1).unwrap();
        let k = k_weights(Boundary::Right, &w, &p.zeta2).unwrap();
        let den = kfunc(&w.inv().unwrap(), &p.zeta2).unwrap();
        assert_eq!(k.stay * &den, kfunc(&w, &p.zeta2).unwrap());
    }

    #[test]
    fn config_count() {
        assert_eq!(RowConfig::all(3).count(), 256);
        let mut seen: Vec<RowConfig> = RowConfig::all(2).collect();
        seen.dedup();
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn sweep_matches_enumeration_small() {
        for l in 1..=3 {
            let (p, w) = sample_point_and_w(10 + l as u64, l).unwrap();
            assert_eq!(transfer_matrix(&w, &p).unwrap(), transfer_matrix_enum(&w, &p).unwrap(), "L={l}");
        }
    }

    #[test]
    fn columns_sum_to_one() {
        let (p, w) = sample_point_and_w(2, 1).unwrap();
        let t = transfer_matrix_enum(&w, &p).unwrap();
        let ones = vec![CycloNum::one(); 2];
        assert_eq!(t.apply_left(&ones), ones);
    }

    #[test]
    fn generic_q_sweep_matches_enumeration() {
        let p = sample_point(4, 3, &[]).unwrap().to_complex();
        let d = Deformation::new(ComplexApprox::new(0.7, 0.4));
        let w = ComplexApprox::new(1.1, -0.3);
        let a = transfer_matrix_q(&d, &w, &p).unwrap();
        let b = transfer_matrix_enum_q(&d, &w, &p).unwrap();
        assert!(a.close_to(&b, 1e-12));
    }

    #[test]
    fn kappa_examples() {
        let p = |s: &str| s.parse::<LinkPattern>().unwrap();
        assert_eq!(kappa_x(1, &p("()"), &p("()")), 0);
        assert_eq!(kappa_x(1, &p(")("), &p("()")), -kappa_x(2, &p(")("), &p("()")));
        assert_eq!(kappa_x(1, &p(")("), &p("()")).abs(), 1);
    }

    #[test]
    fn single_entry_matches_matrix() {
        let (p, w) = sample_point_and_w(8, 2).unwrap();
        let e = MarkedEdge::horizontal(2);
        let m = marked_transfer_matrix(&e, &w, &p).unwrap();
        for a in LinkPattern::all(2) {
            for b in LinkPattern::all(2) {
                assert_eq!(marked_transfer(&e, &w, &p, &a, &b).unwrap(), m[(a.index(), b.index())]);
            }
        }
        // no left-right path can exist for L=1, α=β="(": all entries of that kind vanish
        let (p1, w1) = sample_point_and_w(9, 1).unwrap();
        let open: LinkPattern = "(".parse().unwrap();
        let v = marked_transfer(&MarkedEdge::column(1), &w1, &p1, &open, &open).unwrap();
        let m1 = marked_transfer_matrix(&MarkedEdge::column(1), &w1, &p1).unwrap();
        assert_eq!(v, m1[(open.index(), open.index())]);
    }
}
