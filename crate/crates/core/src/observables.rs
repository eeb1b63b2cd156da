//! Current expectation values computed from the ground state, and suites of
//! identities tying them to the transfer matrix and the closed forms.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartoda::{closed_x, closed_y, closed_y_with, log_deriv_tau, tau, u_log_deriv, z_formula, DummySlot};
use crate::error::{Error, Result};
use crate::groundstate::{
    admissible_spectral, dual_state, ground_state, inner_product, psi_recursion_check, qkz_relations, specialize,
    vectors_agree, DualStateVector, Specialization, StateVector,
};
use crate::linalg::Matrix;
use crate::linkpat::{Boundary, Insertion, Line, LinkPattern, MarkedEdge};
use crate::numfield::{c_const, kfunc, sample_complex, sample_generic, ComplexApprox, CycloNum, Scalar, DEFAULT_REL_TOL};
use crate::point::{genericity_predicate, sample_point, sample_point_and_w, Point};
use crate::yangbaxter::{
    bulk_triple_residual, exchange_operator, flipped_transfer_matrix_enum, insertion_matrix, k_operator,
    kappa_matrix, left_contraction_residuals, marked_transfer_matrices, marked_transfer_matrix, r_operator,
    reflection, transfer_matrix, transfer_matrix_enum,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Observable {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Oracle,
    Closed,
}

/// One computed current value with everything needed to reproduce it.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CurrentResult<S> {
    pub kind: Observable,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<S>,
    #[serde(rename = "L")]
    pub size: usize,
    pub route: Route,
    pub params: Point<S>,
    pub value: S,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

// ------------------------------------------------------- oracle

/// Ground state, dual state and their pairing at one point.
#[derive(Clone, Debug)]
pub struct OracleContext<S> {
    pub psi: StateVector<S>,
    pub dual: DualStateVector<S>,
    norm: S,
}

impl<S: Scalar> OracleContext<S> {
    pub fn new(p: &Point<S>) -> Result<Self> {
        let psi = ground_state(p)?;
        let dual = dual_state(p)?;
        let norm = dual.total() * psi.total();
        if norm.is_zero() {
            return Err(Error::Pole("⟨Ψ*|Ψ⟩ = 0".into()));
        }
        Ok(OracleContext { psi, dual, norm })
    }

    pub fn point(&self) -> &Point<S> {
        &self.psi.point
    }

    /// `⟨Ψ*| M |Ψ⟩ / ⟨Ψ*|Ψ⟩` for a bilinear matrix with entries `(α, β)`.
    pub fn expectation(&self, m: &Matrix<S>) -> Result<S> {
        m.bilinear(&self.dual.components, &self.psi.components).checked_div(&self.norm, "⟨Ψ*|Ψ⟩")
    }

    /// `X^{(k)}` from the marker pair alone.
    pub fn x(&self, k: usize) -> Result<S> {
        let l = self.point().size();
        if k < 1 || k > l {
            return Err(Error::Size(format!("k = {k} outside 1..={l}")));
        }
        self.expectation(&kappa_matrix(l, k))
    }

    /// `Y` with the horizontal marker at position `k ∈ 1..=L+1`.
    pub fn y(&self, w: &S, k: usize) -> Result<S> {
        let l = self.point().size();
        if k < 1 || k > l + 1 {
            return Err(Error::Size(format!("k = {k} outside 1..={}", l + 1)));
        }
        self.expectation(&marked_transfer_matrix(&MarkedEdge::horizontal(k), w, self.point())?)
    }

    /// `Y` at every horizontal position from one enumeration.
    pub fn y_all(&self, w: &S) -> Result<Vec<S>> {
        let edges: Vec<MarkedEdge> = (1..=self.point().size() + 1).map(MarkedEdge::horizontal).collect();
        marked_transfer_matrices(&edges, w, self.point())?.iter().map(|m| self.expectation(m)).collect()
    }
}

pub fn oracle_x<S: Scalar>(k: usize, p: &Point<S>) -> Result<S> {
    OracleContext::new(p)?.x(k)
}

pub fn oracle_y<S: Scalar>(w: &S, k: usize, p: &Point<S>) -> Result<S> {
    OracleContext::new(p)?.y(w, k)
}

/// Marked double-row operators used by the local marker identities.
#[derive(Clone, Debug)]
pub struct MarkedOperators<S> {
    /// `Ŷ^{(k)}`, `k = 1..=L+1`, at index `k − 1`.
    pub y: Vec<Matrix<S>>,
    /// `X̂^{(k)}` on the bottom line.
    pub x_bot: Vec<Matrix<S>>,
    /// `X̂^{(k)}` on the middle line.
    pub x_mid: Vec<Matrix<S>>,
}

pub fn marked_operators<S: Scalar>(w: &S, p: &Point<S>) -> Result<MarkedOperators<S>> {
    let l = p.size();
    let mut edges: Vec<MarkedEdge> = (1..=l + 1).map(MarkedEdge::horizontal).collect();
    edges.extend((1..=l).map(|k| MarkedEdge::column_on(k, Line::Bottom)));
    edges.extend((1..=l).map(|k| MarkedEdge::column_on(k, Line::Middle)));
    let mut all = marked_transfer_matrices(&edges, w, p)?;
    let x_mid = all.split_off(2 * l + 1);
    let x_bot = all.split_off(l + 1);
    Ok(MarkedOperators { y: all, x_bot, x_mid })
}

// ------------------------------------------------------- reports

/// Groups of identities that can be run separately.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Suite {
    Oracle,
    Transfer,
    Qkz,
    Recursions,
    AppendixA,
    AppendixB,
    /// Boundary contraction weights at deformation parameters away from `ω`.
    AppendixBGenericQ,
    Backend,
    Structural,
}

impl Suite {
    /// Suites run by `all`. The generic-q boundary contraction check is kept
    /// out because those weights only cancel at `q = ω`.
    pub const DEFAULT: [Suite; 8] = [
        Suite::Oracle,
        Suite::Transfer,
        Suite::Qkz,
        Suite::Recursions,
        Suite::AppendixA,
        Suite::AppendixB,
        Suite::Backend,
        Suite::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Transfer => "transfer",
            Suite::Qkz => "qkz",
            Suite::Recursions => "recursions",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::AppendixBGenericQ => "appendixB-generic-q",
            Suite::Backend => "backend",
            Suite::Structural => "structural",
        }
    }

    /// Suites whose checks do not depend on the strip width.
    pub fn width_independent(self) -> bool {
        matches!(self, Suite::AppendixB | Suite::AppendixBGenericQ)
    }

    /// Default number of seeded points per size.
    pub fn default_points(self) -> usize {
        match self {
            Suite::AppendixB | Suite::AppendixBGenericQ => 10,
            _ => 3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Suite::AppendixBGenericQ]
            .into_iter()
            .chain(Suite::DEFAULT)
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse { input: s.into(), reason: "unknown suite".into() })
    }
}

impl Serialize for Suite {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.serialize_str(self.name())
    }
}

/// Outcome of one identity at one point.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub point: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Suites not run, with the reason.
    pub skipped: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.skipped.extend(other.skipped);
    }

    pub fn of_suite(&self, s: Suite) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.suite == s)
    }
}

/// Seeded parameters for one suite run at one size.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuiteConfig {
    pub size: usize,
    pub seed: u64,
    pub points: usize,
}

fn sub_seed(seed: u64, tag: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag.rotate_left(32) ^ (index as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn describe<S: Scalar>(p: &Point<S>) -> String {
    let z: Vec<String> = p.z.iter().map(|x| x.to_string()).collect();
    format!("ζ1={}, ζ2={}, z=[{}]", p.zeta1, p.zeta2, z.join(", "))
}

/// Collects checks for one point; computation errors become failed checks.
struct Recorder {
    suite: Suite,
    size: usize,
    point: String,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite, size: usize, point: String) -> Self {
        Recorder { suite, size, point, checks: Vec::new() }
    }

    fn record(&mut self, name: impl Into<String>, outcome: Result<bool>) {
        let (passed, detail) = match outcome {
            Ok(b) => (b, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check { suite: self.suite, name: name.into(), size: self.size, point: self.point.clone(), passed, detail });
    }

    fn equal<S: Scalar>(&mut self, name: impl Into<String>, lhs: Result<S>, rhs: Result<S>) {
        let outcome = lhs.and_then(|a| rhs.map(|b| a.close_to(&b, DEFAULT_REL_TOL)));
        self.record(name, outcome);
    }

    fn matrices<S: Scalar>(&mut self, name: impl Into<String>, lhs: Result<Matrix<S>>, rhs: Result<Matrix<S>>) {
        let outcome = lhs.and_then(|a| rhs.map(|b| a.close_to(&b, DEFAULT_REL_TOL)));
        self.record(name, outcome);
    }

    fn fail(&mut self, name: impl Into<String>, e: Error) {
        self.record(name, Err(e));
    }
}

fn run_points(cfg: SuiteConfig, tag: u64, body: impl Fn(u64) -> Vec<Check> + Sync) -> Vec<Check> {
    (0..cfg.points).into_par_iter().map(|i| body(sub_seed(cfg.seed, tag, i))).collect::<Vec<_>>().concat()
}

fn point_and_w(cfg: SuiteConfig, seed: u64, suite: Suite) -> std::result::Result<(Point<CycloNum>, CycloNum), Vec<Check>> {
    sample_point_and_w(seed, cfg.size).map_err(|e| {
        let mut r = Recorder::new(suite, cfg.size, format!("seed {seed}"));
        r.fail("sampling", e);
        r.checks
    })
}

fn inv<S: Scalar>(x: &S) -> Result<S> {
    x.inv().ok_or_else(|| Error::Domain("zero parameter".into()))
}

// ------------------------------------------------------- oracle vs closed

/// Oracle against closed form at `cfg.points` seeded points of width `cfg.size`.
pub fn oracle_suite(cfg: SuiteConfig, observables: &[Observable]) -> Report {
    let checks = run_points(cfg, 1, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::Oracle) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let mut r = Recorder::new(Suite::Oracle, cfg.size, describe(&p));
        let ctx = match OracleContext::new(&p) {
            Ok(c) => c,
            Err(e) => {
                r.fail("ground state", e);
                return r.checks;
            }
        };
        if observables.contains(&Observable::X) {
            for k in 1..=cfg.size {
                r.equal(format!("X oracle = closed, k={k}"), ctx.x(k), closed_x(k, &p));
            }
        }
        if observables.contains(&Observable::Y) {
            r.equal("Y oracle = closed", ctx.y(&w, 1), closed_y(&w, &p));
            if let Some(k) = pick_index(seed, 11, cfg.size, &[]) {
                r.equal(format!("Y oracle at w=z_k = X oracle, k={k}"), ctx.y(&p.z[k - 1], 1), ctx.x(k));
            }
            if (2..=3).contains(&cfg.size) {
                let q = CycloNum::omega();
                let zl = q.clone() * &p.zeta1;
                let sp = p.with_z(1, zl.clone());
                let mut red = sp.without(&[1]);
                red.zeta1 = zl;
                r.equal("Y oracle left boundary recursion z1=qζ1", oracle_y(&w, 1, &sp), oracle_y(&w, 1, &red));
                let zr = p.zeta2.clone() / &q;
                let sp = p.with_z(cfg.size, zr.clone());
                let mut red = sp.without(&[cfg.size]);
                red.zeta2 = zr;
                r.equal("Y oracle right boundary recursion z_L=ζ2/q", oracle_y(&w, 1, &sp), oracle_y(&w, 1, &red));
            }
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- transfer matrix

pub fn transfer_suite(cfg: SuiteConfig) -> Report {
    let l = cfg.size;
    let checks = run_points(cfg, 2, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::Transfer) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let mut r = Recorder::new(Suite::Transfer, l, describe(&p));
        let q = CycloNum::omega();
        let n = LinkPattern::count(l);
        let w2 = match admissible_spectral::<CycloNum>(&p, seed ^ 0xabcd, 1) {
            Ok(v) => v[0].clone(),
            Err(e) => {
                r.fail("second spectral parameter", e);
                return r.checks;
            }
        };
        let t = transfer_matrix(&w, &p);
        r.matrices("sweep = enumeration", t.clone(), transfer_matrix_enum(&w, &p));
        let t2 = transfer_matrix(&w2, &p);
        r.matrices(
            "commuting family",
            t.as_ref().map_err(Clone::clone).and_then(|a| t2.clone().map(|b| a.mul(&b))),
            t.as_ref().map_err(Clone::clone).and_then(|a| t2.clone().map(|b| b.mul(a))),
        );
        if l >= 2 {
            let (z1, z2) = (&p.z[0], &p.z[1]);
            r.matrices(
                "unitarity R",
                r_operator(l, 1, z1, z2).and_then(|a| r_operator(l, 1, z2, z1).map(|b| a.mul(&b))),
                Ok(Matrix::identity(n)),
            );
        }
        r.matrices(
            "unitarity K right",
            k_operator(l, Boundary::Right, &w, &p.zeta2)
                .and_then(|a| k_operator(l, Boundary::Right, &inv(&w)?, &p.zeta2).map(|b| a.mul(&b))),
            Ok(Matrix::identity(n)),
        );
        r.matrices(
            "unitarity K left",
            k_operator(l, Boundary::Left, &(q.clone() / &w), &p.zeta1)
                .and_then(|a| k_operator(l, Boundary::Left, &(q.clone() * &w), &p.zeta1).map(|b| a.mul(&b))),
            Ok(Matrix::identity(n)),
        );
        let refl = reflection::<CycloNum>(l);
        r.matrices(
            "transpose",
            flipped_transfer_matrix_enum(&w, &p),
            transfer_matrix(&(q.clone() / &w), &p.mirrored()).map(|m| refl.mul(&m).mul(&refl)),
        );
        r.record(
            "eigenvalue one",
            ground_state(&p).and_then(|psi| Ok(vectors_agree(&transfer_matrix(&w, &p)?.apply(&psi.components), &psi.components))),
        );
        for i in 1..l {
            let x = exchange_operator(&p, i);
            let swapped = p.swap_z(i, i + 1);
            r.matrices(
                format!("interlacing exchange i={i}"),
                x.clone().and_then(|x| Ok(x.mul(t.as_ref().map_err(Clone::clone)?))),
                x.and_then(|x| Ok(transfer_matrix(&w, &swapped)?.mul(&x))),
            );
        }
        if l >= 1 {
            let kl = k_operator(l, Boundary::Left, &(q.clone() * &p.z[0]), &p.zeta1);
            let left = inv(&p.z[0]).map(|v| p.with_z(1, v));
            r.matrices(
                "interlacing left",
                kl.clone().and_then(|k| Ok(k.mul(t.as_ref().map_err(Clone::clone)?))),
                kl.and_then(|k| Ok(transfer_matrix(&w, &left?)?.mul(&k))),
            );
            let kr = k_operator(l, Boundary::Right, &p.z[l - 1], &p.zeta2);
            let right = inv(&p.z[l - 1]).map(|v| p.with_z(l, v));
            r.matrices(
                "interlacing right",
                kr.clone().and_then(|k| Ok(k.mul(t.as_ref().map_err(Clone::clone)?))),
                kr.and_then(|k| Ok(transfer_matrix(&w, &right?)?.mul(&k))),
            );
        }
        let mut specs: Vec<(String, Specialization)> =
            (1..l).map(|i| (format!("bulk i={i}"), Specialization::Bulk(i))).collect();
        if l >= 1 {
            specs.push(("left boundary".into(), Specialization::Left));
            specs.push(("right boundary".into(), Specialization::Right));
        }
        for (label, s) in specs {
            let outcome = specialize(&p, s).and_then(|(sp, reduced, _, at)| {
                let phi = insertion_matrix::<CycloNum>(l, at)?;
                let lhs = transfer_matrix(&w, &sp)?.mul(&phi);
                let rhs = phi.mul(&transfer_matrix_enum(&w, &reduced)?);
                Ok(lhs == rhs)
            });
            r.record(format!("transfer recursion, {label}"), outcome);
            r.record(format!("ground state recursion, {label}"), psi_recursion_check(s, &p));
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- qKZ

pub fn qkz_suite(cfg: SuiteConfig) -> Report {
    let checks = run_points(cfg, 3, |seed| {
        let p = match sample_point(seed, cfg.size, &[]) {
            Ok(p) => p,
            Err(e) => {
                let mut r = Recorder::new(Suite::Qkz, cfg.size, format!("seed {seed}"));
                r.fail("sampling", e);
                return r.checks;
            }
        };
        let mut r = Recorder::new(Suite::Qkz, cfg.size, describe(&p));
        match qkz_relations(&p) {
            Ok(rels) => rels.into_iter().for_each(|rel| r.record(rel.name, Ok(rel.holds))),
            Err(e) => r.fail("qKZ relations", e),
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- closed-form recursions

fn pm_powers(x: &CycloNum) -> [(CycloNum, &'static str); 2] {
    [(x.clone(), "+"), (x.inv().expect("nonzero"), "-")]
}

/// Position of column `k` after the listed columns are removed.
fn shifted(k: usize, removed: &[usize]) -> usize {
    k - removed.iter().filter(|&&r| r < k).count()
}

pub fn recursion_suite(cfg: SuiteConfig) -> Report {
    let l = cfg.size;
    let checks = run_points(cfg, 4, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::Recursions) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let mut r = Recorder::new(Suite::Recursions, l, describe(&p));
        recursion_checks(&mut r, &p, &w, seed);
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

/// A 1-based column index in `1..=n` outside `exclude`, derived from `seed`.
/// Each point checks every family at one such choice, so the cost per point
/// stays flat in `L` while the indices vary across points.
fn pick_index(seed: u64, salt: u64, n: usize, exclude: &[usize]) -> Option<usize> {
    let free: Vec<usize> = (1..=n).filter(|i| !exclude.contains(i)).collect();
    if free.is_empty() {
        return None;
    }
    Some(free[(sub_seed(seed, salt, 0) % free.len() as u64) as usize])
}

fn recursion_checks(r: &mut Recorder, p: &Point<CycloNum>, w: &CycloNum, seed: u64) {
    let l = p.size();
    let q = CycloNum::omega();
    let c = c_const::<CycloNum>(l);
    let y = |w: &CycloNum, p: &Point<CycloNum>| closed_y(w, p);
    let pick = |salt: u64, exclude: &[usize]| pick_index(seed, salt, l, exclude);

    // τ specialization
    if let Some(i) = pick(1, &[]) {
        if let Some(j) = pick(2, &[i]) {
            let zj = p.z[j - 1].clone();
            let sp = p.with_z(i, q.clone() * &zj);
            let rest = sp.without(&[i, j]);
            let mut rhs = tau(&rest.z);
            for zl in &rest.z {
                rhs = rhs.and_then(|v| Ok(v * kfunc(&zj, zl)?));
            }
            let sign = if l % 2 == 1 { -CycloNum::one() } else { CycloNum::one() };
            r.equal(format!("τ specialization i={i} j={j}"), tau(&sp.z), rhs.map(|v| v * sign));
        }
    }

    // Y bulk and boundary recursions
    if let Some(i) = pick(3, &[]) {
        if let Some(j) = pick(4, &[i]) {
            for (a, sa) in pm_powers(&q) {
                for (b, sb) in pm_powers(&p.z[j - 1]) {
                    let sp = p.with_z(i, a.clone() * &b);
                    r.equal(format!("Y bulk z{i}=q^{sa}1 z{j}^{sb}1"), y(w, &sp), y(w, &sp.without(&[i, j])));
                }
            }
        }
        for (v, s) in pm_powers(&(q.clone() * &p.zeta1)) {
            let sp = p.with_z(i, v.clone());
            let mut red = sp.without(&[i]);
            red.zeta1 = v;
            r.equal(format!("Y left boundary z{i}=(qζ1)^{s}1"), y(w, &sp), y(w, &red));
        }
        for (v, s) in pm_powers(&(p.zeta2.clone() / &q)) {
            let sp = p.with_z(i, v.clone());
            let mut red = sp.without(&[i]);
            red.zeta2 = v;
            r.equal(format!("Y right boundary z{i}=(ζ2/q)^{s}1"), y(w, &sp), y(w, &red));
        }
    }

    if let Some(k) = pick(5, &[]) {
        let zk = p.z[k - 1].clone();
        // X bulk recursion
        if let Some(i) = pick(6, &[k]) {
            if let Some(j) = pick(7, &[i, k]) {
                for (a, sa) in pm_powers(&q) {
                    for (b, sb) in pm_powers(&p.z[j - 1]) {
                        let sp = p.with_z(i, a.clone() * &b);
                        let red = sp.without(&[i, j]);
                        r.equal(
                            format!("X bulk k={k} z{i}=q^{sa}1 z{j}^{sb}1"),
                            closed_x(k, &sp),
                            closed_x(shifted(k, &[i, j]), &red),
                        );
                    }
                }
            }
        }
        if let Some(i) = pick(8, &[k]) {
            // X boundary recursions: the removed column becomes the new boundary parameter
            for (v, s) in pm_powers(&(q.clone() / &p.zeta1)) {
                let sp = p.with_z(i, v.clone());
                let mut red = sp.without(&[i]);
                red.zeta1 = v;
                r.equal(format!("X left boundary k={k} z{i}=(q/ζ1)^{s}1"), closed_x(k, &sp), closed_x(shifted(k, &[i]), &red));
            }
            for (v, s) in pm_powers(&(q.clone() * &p.zeta2)) {
                let sp = p.with_z(i, v.clone());
                let mut red = sp.without(&[i]);
                red.zeta2 = v;
                r.equal(format!("X right boundary k={k} z{i}=(qζ2)^{s}1"), closed_x(k, &sp), closed_x(shifted(k, &[i]), &red));
            }
            // X at the Y points
            let zk_inv = zk.inv().expect("nonzero");
            let cases = [
                ("z_k/q", zk.clone() / &q, zk.clone(), false),
                ("q/z_k", q.clone() / &zk, zk.clone(), false),
                ("q z_k", q.clone() * &zk, zk_inv.clone(), true),
                ("1/(q z_k)", (q.clone() * &zk).inv().unwrap(), zk_inv, true),
            ];
            for (label, v, arg, negate) in cases {
                let sp = p.with_z(i, v);
                let rhs = y(&arg, &sp.without(&[i, k])).map(|x| if negate { -x } else { x });
                r.equal(format!("X to Y k={k} z{i}={label}"), closed_x(k, &sp), rhs);
            }
            // chain: X|_{z_i = z_k/q} = c ∂ u(…, v/q, z_k)|_{v = z_k} = Y_{L−2}(z_k)
            let sp = p.with_z(i, zk.clone() / &q);
            let red = sp.without(&[i, k]);
            let mut ext = red.z.clone();
            ext.push(zk.clone() / &q);
            ext.push(zk.clone());
            let slot = ext.len() - 1;
            let mid = u_log_deriv(&p.zeta1, &p.zeta2, &ext, slot).map(|v| c.clone() * v);
            r.equal(format!("X to Y chain k={k} i={i}, first step"), closed_x(k, &sp), mid.clone());
            r.equal(format!("X to Y chain k={k} i={i}, second step"), mid, y(&zk, &red));
        }
        // Y at the X points
        let swapped = p.swapped_boundaries();
        let x = closed_x(k, p);
        let xs = closed_x(k, &swapped);
        r.equal(format!("Y(z_k) = X, k={k}"), y(&zk, p), x.clone());
        r.equal(format!("Y(1/z_k) = −X, k={k}"), y(&zk.inv().unwrap(), p), x.clone().map(|v| -v));
        r.equal(format!("Y(q z_k) = −X swapped, k={k}"), y(&(q.clone() * &zk), p), xs.clone().map(|v| -v));
        r.equal(format!("Y(q/z_k) = X swapped, k={k}"), y(&(q.clone() / &zk), p), xs);
        // chain: Y|_{w=z_k} = c ∂ u(…, q/v, w)|_{v=w=z_k} = c ∂ u(ẑ_k, w)|_{w=z_k} = X
        let first = closed_y_with(&zk, p, DummySlot::QOverW);
        let mut moved = p.without(&[k]).z;
        moved.push(zk.clone());
        let second = u_log_deriv(&p.zeta1, &p.zeta2, &moved, moved.len() - 1).map(|v| c.clone() * v);
        r.equal(format!("Y to X chain k={k}, first step"), first, second.clone());
        r.equal(format!("Y to X chain k={k}, second step"), second, x.clone());
        r.equal(format!("antisymmetry k={k}"), closed_x(k, &p.with_z(k, zk.inv().unwrap())), x.map(|v| -v));
    }

    // Y reflection symmetry and its chain
    let qw = q.clone() / w;
    r.equal("Y(w) = Y(q/w)", y(w, p), y(&qw, p));
    r.equal("dummy slot w/q = q/w", y(w, p), closed_y_with(w, p, DummySlot::QOverW));
    let mut ext = p.z.clone();
    ext.push(w.clone());
    ext.push(qw.clone());
    let n = ext.len();
    let at_qw = u_log_deriv(&p.zeta1, &p.zeta2, &ext, n - 1).map(|v| c.clone() * v);
    let at_w = u_log_deriv(&p.zeta1, &p.zeta2, &ext, n - 2).map(|v| c.clone() * v);
    r.equal("Y symmetry chain, q/w slot", y(&qw, p), at_qw.clone());
    r.equal("Y symmetry chain, slot exchange", at_qw, at_w.clone());
    r.equal("Y symmetry chain, w slot", at_w, y(w, p));

    // u recursions, differentiated in a surviving column
    if l >= 3 {
        let base = p.without(&[l - 1, l]);
        let mut z = base.z.clone();
        let v = p.z[l - 2].clone();
        z.push(v.clone());
        z.push(q.clone() * &v);
        let s = pick_index(seed, 9, l - 2, &[]).unwrap() - 1;
        r.equal(
            format!("u bulk recursion slot {}", s + 1),
            u_log_deriv(&p.zeta1, &p.zeta2, &z, s),
            u_log_deriv(&p.zeta1, &p.zeta2, &base.z, s),
        );
    }
    if l >= 2 {
        let s = pick_index(seed, 10, l - 1, &[]).unwrap();
        let mut z = p.z.clone();
        let z1 = q.clone() * &p.zeta1;
        z[0] = z1.clone();
        r.equal(
            format!("u left recursion slot {}", s + 1),
            u_log_deriv(&p.zeta1, &p.zeta2, &z, s),
            u_log_deriv(&z1, &p.zeta2, &z[1..], s - 1).map(|v| -v),
        );
        let s = s - 1;
        let mut z = p.z.clone();
        let z2 = p.zeta2.clone() / &q;
        z[l - 1] = z2.clone();
        r.equal(
            format!("u right recursion slot {}", s + 1),
            u_log_deriv(&p.zeta1, &p.zeta2, &z, s),
            u_log_deriv(&p.zeta1, &z2, &z[..l - 1], s).map(|v| -v),
        );
    }
}

// ------------------------------------------------------- marker identities

pub fn appendix_a_suite(cfg: SuiteConfig) -> Report {
    let l = cfg.size;
    let checks = run_points(cfg, 5, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::AppendixA) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let mut r = Recorder::new(Suite::AppendixA, l, describe(&p));
        let q = CycloNum::omega();
        match marked_operators(&w, &p) {
            Ok(ops) => {
                for k in 1..=l {
                    let sum = ops.x_bot[k - 1].sub(&ops.y[k]).sub(&ops.x_mid[k - 1]).add(&ops.y[k - 1]);
                    r.record(format!("additivity k={k}"), Ok(sum.is_zero()));
                }
            }
            Err(e) => r.fail("marked operators", e),
        }
        for i in 1..=l {
            let zi = p.z[i - 1].clone();
            match marked_operators(&zi, &p) {
                Ok(ops) => {
                    r.record(format!("Ŷ^(i+1) at w=z_i is bottom X̂^(i), i={i}"), Ok(ops.y[i] == ops.x_bot[i - 1]));
                    r.record(format!("Ŷ^(i) at w=z_i is middle X̂^(i), i={i}"), Ok(ops.y[i - 1] == ops.x_mid[i - 1]));
                }
                Err(e) => r.fail(format!("marked operators at w=z_{i}"), e),
            }
        }
        for i in 1..l {
            let outcome = (|| -> Result<bool> {
                let sp = p.with_z(i, w.clone() / &q).with_z(i + 1, w.clone());
                let reduced = sp.without(&[i, i + 1]);
                let big = marked_transfer_matrix(&MarkedEdge::column_on(i + 1, Line::Bottom), &w, &sp)?;
                let small = marked_transfer_matrix(&MarkedEdge::horizontal(i), &w, &reduced)?;
                for a in LinkPattern::all(l) {
                    let (capped, _loop) = a.cap_off(i)?;
                    for b in LinkPattern::all(l - 2) {
                        let lhs = &big[(a.index(), b.phi_insert(Insertion::Bulk(i))?.index())];
                        if *lhs != small[(capped.index(), b.index())] {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            })();
            r.record(format!("bottom X̂^(i+1) at z_i=w/q, z_(i+1)=w reduces to Ŷ, i={i}"), outcome);
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

fn contraction_checks<S: Scalar>(r: &mut Recorder, q: &S, zeta: &S, w: &S, u: &S) {
    let zero = S::zero();
    match left_contraction_residuals(q, zeta, w) {
        Ok(res) => {
            for (n, g) in res.iter().enumerate() {
                r.record(format!("boundary contraction weight {}", n + 1), Ok(g.close_to(&zero, DEFAULT_REL_TOL)));
            }
        }
        Err(e) => r.fail("boundary contraction weights", e),
    }
    r.record("bulk three-term cancellation", bulk_triple_residual(q, u).map(|g| g.close_to(&zero, DEFAULT_REL_TOL)));
}

/// Boundary contraction weights and the bulk cancellation at `q = ω`, exactly.
pub fn appendix_b_suite(cfg: SuiteConfig) -> Report {
    let checks = run_points(cfg, 6, |seed| {
        let mut r = Recorder::new(Suite::AppendixB, 0, format!("seed {seed}"));
        match sample_generic(seed, 3, &[genericity_predicate()]) {
            Ok(v) => {
                r.point = format!("ζ={}, w={}, u={}", v[0], v[1], v[2]);
                contraction_checks(&mut r, &CycloNum::omega(), &v[0], &v[1], &v[2]);
            }
            Err(e) => r.fail("sampling", e),
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

/// The same weights at `cfg.points` generic complex deformation parameters.
pub fn appendix_b_generic_q_suite(cfg: SuiteConfig) -> Report {
    let checks = run_points(cfg, 7, |seed| {
        let v = sample_complex(seed, 4);
        let mut r = Recorder::new(Suite::AppendixBGenericQ, 0, format!("q={}, ζ={}, w={}, u={}", v[0], v[1], v[2], v[3]));
        contraction_checks(&mut r, &v[0], &v[1], &v[2], &v[3]);
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- backends

/// Relative tolerance between float and exact evaluations.
pub const BACKEND_TOL: f64 = 1e-10;
/// Relative tolerance between a logarithmic derivative and its central difference.
pub const FD_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-5;

fn agree(exact: &CycloNum, approx: &ComplexApprox, tol: f64) -> bool {
    ComplexApprox::from(exact).close_to(approx, tol)
}

fn agree_all(exact: &[CycloNum], approx: &[ComplexApprox], tol: f64) -> bool {
    exact.len() == approx.len() && exact.iter().zip(approx).all(|(a, b)| agree(a, b, tol))
}

pub fn backend_suite(cfg: SuiteConfig) -> Report {
    let l = cfg.size;
    let checks = run_points(cfg, 8, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::Backend) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let (pf, wf) = (p.to_complex(), ComplexApprox::from(&w));
        let mut r = Recorder::new(Suite::Backend, l, describe(&p));
        let cmp = |a: Result<CycloNum>, b: Result<ComplexApprox>| a.and_then(|a| b.map(|b| agree(&a, &b, BACKEND_TOL)));
        r.record(
            "transfer matrix",
            transfer_matrix(&w, &p).and_then(|a| {
                transfer_matrix(&wf, &pf).map(|b| a.map(|x| ComplexApprox::from(x)).close_to(&b, BACKEND_TOL))
            }),
        );
        r.record(
            "ground state",
            ground_state(&p).and_then(|a| ground_state(&pf).map(|b| agree_all(&a.components, &b.components, BACKEND_TOL))),
        );
        r.record("partition function", cmp(z_formula(&p), z_formula(&pf)));
        r.record("τ", cmp(tau(&p.z), tau(&pf.z)));
        for k in 1..=l {
            r.record(format!("closed X k={k}"), cmp(closed_x(k, &p), closed_x(k, &pf)));
            r.record(format!("oracle X k={k}"), cmp(oracle_x(k, &p), oracle_x(k, &pf)));
        }
        r.record("closed Y", cmp(closed_y(&w, &p), closed_y(&wf, &pf)));
        for s in 0..l {
            let outcome = (|| -> Result<bool> {
                let exact = ComplexApprox::from(&log_deriv_tau(s, &p.z)?);
                let shifted = |h: f64| -> Result<ComplexApprox> {
                    let mut z = pf.z.clone();
                    z[s] = z[s] * ComplexApprox::new(1.0 + h, 0.0);
                    tau(&z)
                };
                let fd = (shifted(FD_STEP)? - shifted(-FD_STEP)?) / (ComplexApprox::new(2.0 * FD_STEP, 0.0) * tau(&pf.z)?);
                Ok(exact.close_to(&fd, FD_TOL))
            })();
            r.record(format!("log-derivative of τ vs central difference, slot {}", s + 1), outcome);
        }
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- structure

pub fn structural_suite(cfg: SuiteConfig) -> Report {
    let l = cfg.size;
    let checks = run_points(cfg, 9, |seed| {
        let (p, w) = match point_and_w(cfg, seed, Suite::Structural) {
            Ok(v) => v,
            Err(c) => return c,
        };
        let mut r = Recorder::new(Suite::Structural, l, describe(&p));
        let ctx = match OracleContext::new(&p) {
            Ok(c) => c,
            Err(e) => {
                r.fail("ground state", e);
                return r.checks;
            }
        };
        match ctx.y_all(&w) {
            Ok(ys) => r.record("Y independent of marker position", Ok(ys.windows(2).all(|v| v[0] == v[1]))),
            Err(e) => r.fail("Y independent of marker position", e),
        }
        let w2 = admissible_spectral::<CycloNum>(&p, seed ^ 0x77, 1).map(|v| v[0].clone());
        for k in 1..=l {
            let via = |w: &CycloNum| -> Result<CycloNum> {
                ctx.expectation(&marked_transfer_matrix(&MarkedEdge::column_on(k, Line::Bottom), w, &p)?)
            };
            r.equal(format!("X from the double row at w equals marker-pair value, k={k}"), via(&w), ctx.x(k));
            r.equal(format!("X from the double row at a second w, k={k}"), w2.clone().and_then(|w2| via(&w2)), ctx.x(k));
            r.equal(format!("mirror covariance k={k}"), ctx.x(k), oracle_x(l + 1 - k, &p.mirrored()));
        }
        let z = z_formula(&p);
        r.equal("⟨Ψ*|Ψ⟩ = Z²", inner_product(&ctx.dual, &ctx.psi), z.clone().map(|z| z.clone() * z));
        r.equal("Z* = Z", z_formula(&p.mirrored()), z.clone());
        r.equal("dual component sum = Z", Ok(ctx.dual.total()), z);
        r.checks
    });
    Report { checks, skipped: Vec::new() }
}

// ------------------------------------------------------- dispatch

/// Largest width each suite runs at by default.
pub fn suite_size_cap(s: Suite) -> usize {
    match s {
        Suite::Oracle | Suite::Qkz | Suite::Structural | Suite::Backend => 5,
        Suite::Transfer | Suite::AppendixA => 4,
        Suite::Recursions => 8,
        Suite::AppendixB | Suite::AppendixBGenericQ => usize::MAX,
    }
}

/// Runs `s` unless `cfg.size` exceeds its cap, in which case the report only
/// records the skip.
pub fn run_suite(s: Suite, cfg: SuiteConfig) -> Report {
    if cfg.size > suite_size_cap(s) {
        return Report { checks: Vec::new(), skipped: vec![format!("{s}: L = {} above cap {}", cfg.size, suite_size_cap(s))] };
    }
    run_suite_uncapped(s, cfg)
}

pub fn run_suite_uncapped(s: Suite, cfg: SuiteConfig) -> Report {
    match s {
        Suite::Oracle => oracle_suite(cfg, &[Observable::X, Observable::Y]),
        Suite::Transfer => transfer_suite(cfg),
        Suite::Qkz => qkz_suite(cfg),
        Suite::Recursions => recursion_suite(cfg),
        Suite::AppendixA => appendix_a_suite(cfg),
        Suite::AppendixB => appendix_b_suite(cfg),
        Suite::AppendixBGenericQ => appendix_b_generic_q_suite(cfg),
        Suite::Backend => backend_suite(cfg),
        Suite::Structural => structural_suite(cfg),
    }
}

/// Every default suite at width `size` with its default number of points.
pub fn relation_suite(size: usize, seed: u64) -> Report {
    let mut report = Report::default();
    for s in Suite::DEFAULT {
        report.extend(run_suite(s, SuiteConfig { size, seed, points: s.default_points() }));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(size: usize, points: usize) -> SuiteConfig {
        SuiteConfig { size, seed: 7, points }
    }

    fn assert_all_pass(r: &Report) {
        let bad: Vec<String> = r.failures().map(|c| format!("{} [{}] {:?}", c.name, c.point, c.detail)).collect();
        assert!(bad.is_empty(), "{} failures:\n{}", bad.len(), bad.join("\n"));
        assert!(!r.checks.is_empty());
    }

    #[test]
    fn oracle_matches_closed_form_small() {
        assert_all_pass(&oracle_suite(cfg(2, 2), &[Observable::X, Observable::Y]));
    }

    #[test]
    fn transfer_identities_small() {
        assert_all_pass(&transfer_suite(cfg(2, 1)));
        assert_all_pass(&transfer_suite(cfg(3, 1)));
    }

    #[test]
    fn recursions_small() {
        assert_all_pass(&recursion_suite(cfg(3, 1)));
    }

    #[test]
    fn marker_identities_small() {
        assert_all_pass(&appendix_a_suite(cfg(2, 1)));
    }

    #[test]
    fn contraction_weights_at_omega() {
        assert_all_pass(&appendix_b_suite(cfg(0, 3)));
    }

    #[test]
    fn structure_small() {
        assert_all_pass(&structural_suite(cfg(2, 1)));
        assert_all_pass(&backend_suite(cfg(2, 1)));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::DEFAULT.into_iter().chain([Suite::AppendixBGenericQ]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn current_result_json_shape() {
        let p = sample_point(1, 2, &[]).unwrap();
        let res = CurrentResult {
            kind: Observable::X,
            k: Some(1),
            w: None,
            size: 2,
            route: Route::Closed,
            value: closed_x(1, &p).unwrap(),
            params: p,
            note: None,
        };
        let v = serde_json::to_value(&res).unwrap();
        assert_eq!(v["kind"], "X");
        assert_eq!(v["route"], "closed");
        assert_eq!(v["L"], 2);
        assert!(v["value"]["a"].is_string());
        assert!(v.get("w").is_none());
    }
}
