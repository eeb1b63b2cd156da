//! Eigenvalue-1 state of the double-row transfer matrix, its dual, and the
//! exchange and reflection relations they satisfy.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::chartoda::z_formula;
use crate::error::{Error, Result};
use crate::linalg::{sum, Matrix};
use crate::linkpat::{glue, Boundary, Insertion, LinkPattern};
use crate::numfield::{embed, is_root_of_unity, kfunc, sample_generic, CycloNum, Predicate, Scalar};
use crate::point::Point;
use crate::yangbaxter::{exchange_operator, k_operator, r_operator, transfer_matrix, Deformation, RowWeights};

/// Relative tolerance for float eigenvector checks.
pub const FLOAT_STATE_TOL: f64 = 1e-9;

/// Components `ψ_α` indexed by [`LinkPattern::index`], with the point they belong to.
#[derive(Clone, PartialEq, Debug)]
pub struct StateVector<S> {
    pub point: Point<S>,
    pub components: Vec<S>,
}

/// The dual state has the same shape; only its construction differs.
pub type DualStateVector<S> = StateVector<S>;

impl<S: Scalar> StateVector<S> {
    pub fn size(&self) -> usize {
        self.point.size()
    }

    pub fn component(&self, alpha: &LinkPattern) -> &S {
        &self.components[alpha.index()]
    }

    pub fn total(&self) -> S {
        sum(&self.components)
    }
}

struct Components<'a, S>(&'a [S], usize);

impl<S: Scalar + Serialize> Serialize for Components<'_, S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (i, v) in self.0.iter().enumerate() {
            m.serialize_entry(&LinkPattern::from_index(self.1, i).to_string(), v)?;
        }
        m.end()
    }
}

impl<S: Scalar + Serialize> Serialize for StateVector<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = s.serialize_struct("StateVector", 3)?;
        st.serialize_field("L", &self.size())?;
        st.serialize_field("params", &self.point)?;
        st.serialize_field("components", &Components(&self.components, self.size()))?;
        st.end()
    }
}

/// Whether two vectors agree: exactly, or within `FLOAT_STATE_TOL` of the larger norm.
pub fn vectors_agree<S: Scalar>(a: &[S], b: &[S]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if S::EXACT {
        return a == b;
    }
    let norm = |v: &[S]| v.iter().map(|x| x.to_complex().norm()).fold(0.0, f64::max);
    let scale = norm(a).max(norm(b)).max(1e-300);
    a.iter().zip(b).all(|(x, y)| (x.to_complex() - y.to_complex()).norm() <= FLOAT_STATE_TOL * scale)
}

const PROBE_SEED: u64 = 0x5eed_0001;

/// Two spectral parameters at which every local weight of `p` is finite.
pub fn probe_values<S: Scalar>(p: &Point<S>) -> Result<(S, S)> {
    let v = admissible_spectral(p, PROBE_SEED, 2)?;
    Ok((v[0].clone(), v[1].clone()))
}

/// `count` distinct seeded spectral parameters, none a root of unity, at which
/// every local weight of `p` is finite (and of moderate size in float backends).
pub fn admissible_spectral<S: Scalar>(p: &Point<S>, seed: u64, count: usize) -> Result<Vec<S>> {
    let d = Deformation::<S>::critical();
    let admissible = |w: &CycloNum| -> bool {
        if is_root_of_unity(w) || is_root_of_unity(&(w.clone() * w)) {
            return false;
        }
        match RowWeights::new(&d, &embed::<S>(w), p) {
            Err(_) => false,
            Ok(_) if S::EXACT => true,
            Ok(rw) => {
                let mut all = vec![rw.left.stay, rw.left.reflect, rw.right.stay, rw.right.reflect];
                for r in rw.lower.iter().chain(&rw.upper) {
                    all.push(r.w1.clone());
                    all.push(r.w2.clone());
                }
                all.iter().all(|x| x.to_complex().norm() < 1e6)
            }
        }
    };
    let preds = [
        Predicate::new("spectral parameter avoids weight poles", |v: &[CycloNum]| v.iter().all(admissible)),
        Predicate::new("spectral parameters distinct", |v: &[CycloNum]| {
            (0..v.len()).all(|i| (0..i).all(|j| v[i] != v[j]))
        }),
    ];
    Ok(sample_generic(seed, count, &preds)?.iter().map(embed).collect())
}

/// Kernel of `T(w₀) − 1`, checked at a second probe and scaled so that
/// `Σ_α ψ_α = Z_L`.
pub fn ground_state<S: Scalar>(p: &Point<S>) -> Result<StateVector<S>> {
    let z = z_formula(p)?;
    if p.size() == 0 {
        return Ok(StateVector { point: p.clone(), components: vec![z] });
    }
    let (w0, w1) = probe_values(p)?;
    let n = LinkPattern::count(p.size());
    let t0 = transfer_matrix(&w0, p)?;
    let mut ker = t0.sub(&Matrix::identity(n)).kernel();
    if ker.len() != 1 {
        return Err(Error::Degenerate { dim: ker.len() });
    }
    let raw = ker.remove(0);
    let total = sum(&raw);
    if total.is_zero() {
        return Err(Error::Eigen("eigenvector components sum to zero".into()));
    }
    let scale = z / total;
    let psi: Vec<S> = raw.into_iter().map(|x| x * &scale).collect();
    if !vectors_agree(&transfer_matrix(&w1, p)?.apply(&psi), &psi) {
        return Err(Error::Eigen("eigenvector fails at the second probe".into()));
    }
    Ok(StateVector { point: p.clone(), components: psi })
}

/// `ψ*_α(ζ1, ζ2; z) = ψ_{reflect α}(ζ2, ζ1; z_L, …, z_1)`.
pub fn dual_state<S: Scalar>(p: &Point<S>) -> Result<DualStateVector<S>> {
    let mirrored = ground_state(&p.mirrored())?;
    let components = LinkPattern::all(p.size()).map(|a| mirrored.component(&a.reflect()).clone()).collect();
    Ok(StateVector { point: p.clone(), components })
}

/// `⟨Ψ*|Ψ⟩ = Σ ψ*_α ψ_β τ^{loops(α, β)}`.
pub fn inner_product<S: Scalar>(dual: &DualStateVector<S>, psi: &StateVector<S>) -> Result<S> {
    let tau = Deformation::<S>::critical().loop_weight();
    let mut acc = S::zero();
    for a in LinkPattern::all(psi.size()) {
        for b in LinkPattern::all(psi.size()) {
            let loops = glue(&a, &b)?.loops;
            acc += &(dual.component(&a).clone() * psi.component(&b) * tau.powi(loops as i64));
        }
    }
    Ok(acc)
}

/// One qKZ-type relation and whether it held.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
}

/// The exchange and reflection relations of `Ψ` and `Ψ*` at `p`.
pub fn qkz_relations<S: Scalar>(p: &Point<S>) -> Result<Vec<Relation>> {
    let l = p.size();
    let q = S::omega();
    let inv = |x: &S| x.inv().ok_or_else(|| Error::Domain("zero rapidity".into()));
    let psi = ground_state(p)?;
    let dual = dual_state(p)?;
    let mut out = Vec::new();
    for i in 1..l {
        let swapped = p.swap_z(i, i + 1);
        let lhs = exchange_operator(p, i)?.apply(&psi.components);
        out.push(Relation { name: format!("exchange i={i}"), holds: vectors_agree(&lhs, &ground_state(&swapped)?.components) });
        let lhs = r_operator(l, i, &p.z[i - 1], &p.z[i])?.apply(&dual.components);
        out.push(Relation { name: format!("dual exchange i={i}"), holds: vectors_agree(&lhs, &dual_state(&swapped)?.components) });
    }
    if l >= 1 {
        let (z1, zl) = (&p.z[0], &p.z[l - 1]);
        let left = p.with_z(1, inv(z1)?);
        let right = p.with_z(l, inv(zl)?);
        let lhs = k_operator(l, Boundary::Left, &(q.clone() * z1), &p.zeta1)?.apply(&psi.components);
        out.push(Relation { name: "left reflection".into(), holds: vectors_agree(&lhs, &ground_state(&left)?.components) });
        let lhs = k_operator(l, Boundary::Right, zl, &p.zeta2)?.apply(&psi.components);
        out.push(Relation { name: "right reflection".into(), holds: vectors_agree(&lhs, &ground_state(&right)?.components) });
        let lhs = k_operator(l, Boundary::Left, &(q / z1), &p.zeta1)?.apply(&dual.components);
        out.push(Relation { name: "dual left reflection".into(), holds: vectors_agree(&lhs, &dual_state(&left)?.components) });
        let lhs = k_operator(l, Boundary::Right, &inv(zl)?, &p.zeta2)?.apply(&dual.components);
        out.push(Relation { name: "dual right reflection".into(), holds: vectors_agree(&lhs, &dual_state(&right)?.components) });
    }
    Ok(out)
}

/// Where a small link is created by the specialization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Specialization {
    /// `z_{i+1} = q z_i`, `1 ≤ i < L`.
    Bulk(usize),
    /// `z_1 = q ζ1`.
    Left,
    /// `z_L = ζ2 / q`.
    Right,
}

/// The specialized point, the reduced point, the proportionality factor, and
/// where the small link is inserted.
pub fn specialize<S: Scalar>(p: &Point<S>, s: Specialization) -> Result<(Point<S>, Point<S>, S, Insertion)> {
    let l = p.size();
    let q = S::omega();
    let sq = |x: S| x.clone() * &x;
    match s {
        Specialization::Bulk(i) => {
            if i < 1 || i >= l {
                return Err(Error::Size(format!("bulk specialization at {i} for L = {l}")));
            }
            let zi = p.z[i - 1].clone();
            let sp = p.with_z(i + 1, q * &zi);
            let reduced = sp.without(&[i, i + 1]);
            let mut f = sq(kfunc(&zi, &p.zeta1)?) * sq(kfunc(&zi, &p.zeta2)?);
            for zj in &reduced.z {
                f *= &sq(sq(kfunc(&zi, zj)?));
            }
            Ok((sp, reduced, f, Insertion::Bulk(i)))
        }
        Specialization::Left => {
            let z1 = q.clone() * &p.zeta1;
            let sp = p.with_z(1, z1.clone());
            let mut reduced = sp.without(&[1]);
            reduced.zeta1 = z1;
            let mut f = -kfunc(&p.zeta1, &p.zeta2)?;
            for zj in &reduced.z {
                f *= &sq(kfunc(&p.zeta1, zj)?);
            }
            Ok((sp, reduced, f, Insertion::Left))
        }
        Specialization::Right => {
            let zl = p.zeta2.checked_div(&q, "q")?;
            let sp = p.with_z(l, zl.clone());
            let mut reduced = sp.without(&[l]);
            reduced.zeta2 = zl;
            let z2inv = p.zeta2.inv().ok_or_else(|| Error::Domain("ζ2 = 0".into()))?;
            let mut f = -kfunc(&z2inv, &p.zeta1)?;
            for zj in &reduced.z {
                f *= &sq(kfunc(&z2inv, zj)?);
            }
            Ok((sp, reduced, f, Insertion::Right))
        }
    }
}

/// At the specialization, `ψ_{φ∘α} = f · ψ'_α` for every reduced pattern and
/// all other components vanish.
pub fn psi_recursion_check<S: Scalar>(s: Specialization, p: &Point<S>) -> Result<bool> {
    let (sp, reduced, f, at) = specialize(p, s)?;
    let big = ground_state(&sp)?;
    let small = ground_state(&reduced)?;
    let mut expected = vec![S::zero(); big.components.len()];
    for a in LinkPattern::all(reduced.size()) {
        expected[a.phi_insert(at)?.index()] = f.clone() * small.component(&a);
    }
    Ok(vectors_agree(&big.components, &expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::ComplexApprox;
    use crate::point::sample_point;
    use crate::yangbaxter::flipped_transfer_matrix_enum;

    #[test]
    fn eigenvector_small_sizes() {
        for l in 1..=3 {
            let p = sample_point(40 + l as u64, l, &[]).unwrap();
            let psi = ground_state(&p).unwrap();
            assert_eq!(psi.total(), z_formula(&p).unwrap());
            let (w0, _) = probe_values(&p).unwrap();
            assert_eq!(transfer_matrix(&w0, &p).unwrap().apply(&psi.components), psi.components);
        }
    }

    #[test]
    fn dual_is_left_eigenvector_of_flip() {
        let p = sample_point(51, 2, &[]).unwrap();
        let dual = dual_state(&p).unwrap();
        let w = CycloNum::from_fracs((7, 3), (-1, 2));
        let flipped = flipped_transfer_matrix_enum(&w, &p).unwrap();
        assert_eq!(flipped.apply(&dual.components), dual.components);
        assert_eq!(dual.total(), z_formula(&p).unwrap());
    }

    #[test]
    fn norm_is_partition_function_squared() {
        let p = sample_point(52, 3, &[]).unwrap();
        let (psi, dual) = (ground_state(&p).unwrap(), dual_state(&p).unwrap());
        let z = z_formula(&p).unwrap();
        assert_eq!(inner_product(&dual, &psi).unwrap(), z.clone() * z);
    }

    #[test]
    fn qkz_small() {
        for l in 1..=3 {
            let p = sample_point(60 + l as u64, l, &[]).unwrap();
            for r in qkz_relations(&p).unwrap() {
                assert!(r.holds, "L={l}: {}", r.name);
            }
        }
    }

    #[test]
    fn qkz_float() {
        let p = sample_point(70, 3, &[]).unwrap().to_complex();
        for r in qkz_relations::<ComplexApprox>(&p).unwrap() {
            assert!(r.holds, "{}", r.name);
        }
    }

    #[test]
    fn recursions_small() {
        let p = sample_point(80, 4, &[]).unwrap();
        assert!(psi_recursion_check(Specialization::Bulk(2), &p).unwrap());
        let p = sample_point(81, 3, &[]).unwrap();
        assert!(psi_recursion_check(Specialization::Left, &p).unwrap());
        assert!(psi_recursion_check(Specialization::Right, &p).unwrap());
        assert!(psi_recursion_check(Specialization::Bulk(1), &p).unwrap());
    }

    #[test]
    fn json_export_is_keyed_by_pattern() {
        let p = sample_point(90, 2, &[]).unwrap();
        let v = serde_json::to_value(ground_state(&p).unwrap()).unwrap();
        assert_eq!(v["L"], 2);
        assert_eq!(v["components"].as_object().unwrap().len(), 4);
    }
}
