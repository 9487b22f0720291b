//! π-structures on cobordism fans.
//!
//! A cobordism fan lives in `N⁺ = N ⊕ Z`; the projection `π : N⁺ → N` drops
//! the last coordinate and `ν = (0,…,0,1)` spans its kernel. Everything in
//! this module is phrased in terms of the primitive projections: a ray ρ is
//! written `ρ = c·(v, w)` with `v ∈ N` primitive, `c` a positive integer and
//! `w` rational.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice;
use crate::matrix;
use crate::{IntVec, RatVec};

/// Per-ray projection data: `ρ = c·(v, w)` with `v` primitive in `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPiData {
    /// Primitive generator of the ray spanned by π(ρ).
    pub v: IntVec,
    /// Height of the normalized ray: `ρ = c·(v, w)`.
    pub w: BigRational,
    /// Positive integer scale with `π(ρ) = c·v`.
    pub c: BigInt,
}

/// The unique normalized dependence relation of a π-dependent cone:
/// `Σ rᵢvᵢ = 0`, `max|rᵢ| = 1`, `Σ rᵢwᵢ > 0`.
#[derive(Clone, Debug)]
pub struct DependenceData {
    /// One exact rational coefficient per ray of the cone, in cone order.
    pub r: Vec<BigRational>,
    /// Projection data per ray, in cone order.
    pub ray_pi: Vec<RayPiData>,
    /// Positions with rᵢ = 1.
    pub i_one: Vec<usize>,
    /// Positions with rᵢ = −1.
    pub i_minus_one: Vec<usize>,
    /// Positions with rᵢ > 0.
    pub i_pos: Vec<usize>,
    /// Positions with rᵢ < 0.
    pub i_neg: Vec<usize>,
}

impl DependenceData {
    /// Dimension of the circuit contained in the cone (= #{i : rᵢ ≠ 0}).
    pub fn circuit_dim(&self) -> usize {
        self.i_pos.len() + self.i_neg.len()
    }
}

/// π-profile of a cone, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiProfile {
    /// π-multiplicity.
    pub mult: BigInt,
    /// 1 for π-dependent cones with i₁+i₋₁ ≥ 2, else 0.
    pub b: u8,
    /// i₊ + i₋ (dimension of the circuit) when b = 1, else 0.
    pub k: u32,
    /// i₁ + i₋₁ when b = 1, else 0.
    pub r: u32,
}

impl PiProfile {
    pub fn independent(mult: BigInt) -> Self {
        PiProfile { mult, b: 0, k: 0, r: 0 }
    }
}

/// Fan-level profile: the lexicographic maximum `g` of the maximal-cone
/// profiles together with the number `s` of maximal cones attaining it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanProfile {
    pub g: PiProfile,
    pub s: usize,
}

/// Projection to `N`: drops the last coordinate.
pub fn project(v: &IntVec) -> IntVec {
    v[..v.len() - 1].to_vec()
}

/// The vertical direction ν = (0,…,0,1) of `N⁺`.
pub fn nu(ambient_rank: usize) -> IntVec {
    let mut v = vec![BigInt::zero(); ambient_rank];
    v[ambient_rank - 1] = BigInt::one();
    v
}

pub(crate) fn ray_pi_data(ray: &IntVec) -> Result<RayPiData> {
    let p = project(ray);
    if lattice::is_zero_vec(&p) {
        return Err(Error::VerticalRay(format!("{ray:?}")));
    }
    let (v, c) = lattice::primitive(&p)?;
    let w = BigRational::new(ray[ray.len() - 1].clone(), c.clone());
    Ok(RayPiData { v, w, c })
}

/// Projection data `(v, w, c)` for every ray of the cone, in cone order.
pub fn pi_data(fan: &Fan, cone: &Cone) -> Result<Vec<RayPiData>> {
    fan.cone_rays(cone).iter().map(ray_pi_data).collect()
}

pub(crate) fn is_pi_independent_rays(rays: &[IntVec]) -> bool {
    let projections: Vec<IntVec> = rays.iter().map(project).collect();
    matrix::rank(&projections) == rays.len()
}

/// True iff π is injective on the cone, i.e. the projected generators are
/// linearly independent (equivalently ν ∉ span of the cone).
pub fn is_pi_independent(fan: &Fan, cone: &Cone) -> bool {
    is_pi_independent_rays(&fan.cone_rays(cone))
}

pub(crate) fn dependence_relation_rays(rays: &[IntVec]) -> Result<DependenceData> {
    let ray_pi: Vec<RayPiData> = rays.iter().map(ray_pi_data).collect::<Result<_>>()?;
    let vs: Vec<IntVec> = ray_pi.iter().map(|d| d.v.clone()).collect();
    let kernel = lattice::rational_kernel(&vs);
    if kernel.is_empty() {
        return Err(Error::PiIndependent);
    }
    if kernel.len() > 1 {
        return Err(Error::InternalInvariant(format!(
            "simplicial cone with {}-dimensional projected kernel",
            kernel.len()
        )));
    }
    let mut r = kernel.into_iter().next().expect("one relation");
    let max_abs = r
        .iter()
        .map(|x| x.abs())
        .max()
        .expect("nonempty relation");
    debug_assert!(max_abs.is_positive());
    for x in r.iter_mut() {
        *x /= max_abs.clone();
    }
    let height: BigRational = r.iter().zip(&ray_pi).map(|(ri, d)| ri * &d.w).sum();
    if height.is_zero() {
        return Err(Error::InternalInvariant(
            "dependence relation with zero height on a simplicial cone".into(),
        ));
    }
    if height.is_negative() {
        for x in r.iter_mut() {
            *x = -x.clone();
        }
    }
    let one = BigRational::one();
    let data = DependenceData {
        i_one: r.iter().enumerate().filter(|(_, x)| **x == one).map(|(i, _)| i).collect(),
        i_minus_one: r.iter().enumerate().filter(|(_, x)| **x == -one.clone()).map(|(i, _)| i).collect(),
        i_pos: r.iter().enumerate().filter(|(_, x)| x.is_positive()).map(|(i, _)| i).collect(),
        i_neg: r.iter().enumerate().filter(|(_, x)| x.is_negative()).map(|(i, _)| i).collect(),
        r,
        ray_pi,
    };
    debug_assert!(!data.i_one.is_empty() || !data.i_minus_one.is_empty());
    Ok(data)
}

/// The unique normalized dependence relation of a π-dependent cone.
pub fn dependence_relation(fan: &Fan, cone: &Cone) -> Result<DependenceData> {
    dependence_relation_rays(&fan.cone_rays(cone))
}

/// The unique circuit contained in a π-dependent cone: the face spanned by
/// the rays with rᵢ ≠ 0.
pub fn circuit_of(fan: &Fan, cone: &Cone) -> Result<Cone> {
    let rel = dependence_relation(fan, cone)?;
    let ids: Vec<usize> = cone
        .ray_ids()
        .iter()
        .enumerate()
        .filter(|(i, _)| !rel.r[*i].is_zero())
        .map(|(_, &id)| id)
        .collect();
    Ok(Cone::new(ids))
}

/// True iff the cone is π-dependent with all relation coefficients nonzero
/// (equivalently: every proper face is π-independent).
pub fn is_circuit(fan: &Fan, cone: &Cone) -> bool {
    match dependence_relation(fan, cone) {
        Ok(rel) => rel.circuit_dim() == cone.dim(),
        Err(_) => false,
    }
}

pub(crate) fn pi_multiplicity_rays(rays: &[IntVec]) -> Result<BigInt> {
    if rays.is_empty() {
        return Ok(BigInt::one());
    }
    match dependence_relation_rays(rays) {
        Err(Error::PiIndependent) => pi_independent_index(rays),
        Err(e) => Err(e),
        Ok(rel) => pi_multiplicity_from_rel(rays, &rel),
    }
}

/// Lattice index of the projected generators of a π-independent ray list.
fn pi_independent_index(rays: &[IntVec]) -> Result<BigInt> {
    let vs: Vec<IntVec> = rays
        .iter()
        .map(|r| ray_pi_data(r).map(|d| d.v))
        .collect::<Result<_>>()?;
    lattice::lattice_index(&vs)
}

/// π-multiplicity of a π-dependent ray list whose dependence relation is
/// already known: the maximum over the faces ηᵢ, i ∈ I₊ ∪ I₋.
fn pi_multiplicity_from_rel(rays: &[IntVec], rel: &DependenceData) -> Result<BigInt> {
    let mut best: Option<BigInt> = None;
    for &i in rel.i_pos.iter().chain(&rel.i_neg) {
        let face: Vec<IntVec> = rays
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        let m = pi_multiplicity_rays(&face)?;
        if best.as_ref().map_or(true, |b| m > *b) {
            best = Some(m);
        }
    }
    best.ok_or_else(|| Error::InternalInvariant("circuit with empty index sets".into()))
}

/// π-multiplicity of a cone: the multiplicity of the projected cone when π
/// is injective, and the maximum over the faces ηᵢ, i ∈ I₊ ∪ I₋, otherwise.
pub fn pi_multiplicity(fan: &Fan, cone: &Cone) -> Result<BigInt> {
    pi_multiplicity_rays(&fan.cone_rays(cone))
}

pub(crate) fn pi_profile_rays(rays: &[IntVec]) -> Result<PiProfile> {
    Ok(pi_profile_and_relation(rays)?.0)
}

/// π-profile together with the dependence relation it was computed from
/// (`None` for π-independent ray lists), so callers that need both pay for
/// one relation computation.
pub(crate) fn pi_profile_and_relation(
    rays: &[IntVec],
) -> Result<(PiProfile, Option<DependenceData>)> {
    if rays.is_empty() {
        return Ok((PiProfile::independent(BigInt::one()), None));
    }
    match dependence_relation_rays(rays) {
        Err(Error::PiIndependent) => {
            Ok((PiProfile::independent(pi_independent_index(rays)?), None))
        }
        Err(e) => Err(e),
        Ok(rel) => {
            let mult = pi_multiplicity_from_rel(rays, &rel)?;
            let units = rel.i_one.len() + rel.i_minus_one.len();
            let profile = if units >= 2 {
                PiProfile {
                    mult,
                    b: 1,
                    k: rel.circuit_dim() as u32,
                    r: units as u32,
                }
            } else {
                PiProfile::independent(mult)
            };
            Ok((profile, Some(rel)))
        }
    }
}

/// π-profile of a cone, the lexicographic measure driving desingularization.
pub fn pi_profile(fan: &Fan, cone: &Cone) -> Result<PiProfile> {
    pi_profile_rays(&fan.cone_rays(cone))
}

/// Fan-level profile over the maximal cones.
pub fn fan_profile(fan: &Fan) -> Result<FanProfile> {
    Ok(fan_profile_argmax(fan)?.0)
}

/// [`fan_profile`] together with the index (into `maximal_cones`) of the
/// first maximal cone attaining the maximal profile.
pub(crate) fn fan_profile_argmax(fan: &Fan) -> Result<(FanProfile, usize)> {
    let mut best: Option<(PiProfile, usize, usize)> = None;
    for (idx, cone) in fan.maximal_cones().iter().enumerate() {
        let p = pi_profile(fan, cone)?;
        match &mut best {
            None => best = Some((p, 1, idx)),
            Some((g, s, arg)) => {
                if p > *g {
                    *g = p;
                    *s = 1;
                    *arg = idx;
                } else if p == *g {
                    *s += 1;
                }
            }
        }
    }
    let (g, s, arg) = best.ok_or_else(|| Error::Invalid("fan has no maximal cones".into()))?;
    Ok((FanProfile { g, s }, arg))
}

/// True iff every maximal cone is π-nonsingular (fan profile multiplicity 1).
pub fn is_pi_nonsingular(fan: &Fan) -> Result<bool> {
    Ok(fan_profile(fan)?.g.mult.is_one())
}

/// Codefiniteness of a π-independent face τ with respect to a cone η of the
/// fan: τ's generators all sit on one weak side ({rᵢ ≥ 0} or {rᵢ ≤ 0}) of
/// η's dependence relation. Vacuously true when η is π-independent.
pub fn is_codefinite(fan: &Fan, tau: &Cone, eta: &Cone) -> Result<bool> {
    if !fan.is_face(eta) || !eta.contains_cone(tau) {
        return Err(Error::NotAFace);
    }
    if is_pi_independent(fan, eta) {
        return Ok(true);
    }
    if !is_pi_independent(fan, tau) {
        return Err(Error::Invalid("codefiniteness is defined for pi-independent faces".into()));
    }
    let rel = dependence_relation(fan, eta)?;
    let tau_positions: Vec<usize> = eta
        .ray_ids()
        .iter()
        .enumerate()
        .filter(|(_, id)| tau.contains_ray(**id))
        .map(|(i, _)| i)
        .collect();
    let all_nonneg = tau_positions.iter().all(|&i| !rel.r[i].is_negative());
    let all_nonpos = tau_positions.iter().all(|&i| !rel.r[i].is_positive());
    Ok(all_nonneg || all_nonpos)
}

/// Whether `q ∈ σ + span(γ)` for a simplicial cone σ and a face γ of σ:
/// exact coordinate test (coefficients of rays outside γ must be ≥ 0).
fn in_cone_mod_face(fan: &Fan, sigma: &Cone, gamma: &Cone, q: &IntVec) -> bool {
    let rays = fan.cone_rays(sigma);
    match fan::coords_in_rays(&rays, q) {
        None => false,
        Some(coords) => sigma
            .ray_ids()
            .iter()
            .zip(&coords)
            .all(|(id, c)| gamma.contains_ray(*id) || !c.is_negative()),
    }
}

/// Upper and lower boundaries of a cobordism fan, as maximal π-independent
/// faces: γ lies in the upper boundary iff −ν ∉ σ + span(γ) for every
/// maximal cone σ ⊇ γ (nothing of the fan sits above γ), and in the lower
/// boundary with +ν in place of −ν.
pub fn boundaries(fan: &Fan) -> Result<(Vec<Cone>, Vec<Cone>)> {
    if !fan.is_cobordism() {
        return Err(Error::Invalid("boundaries are defined for cobordism fans".into()));
    }
    let up_dir = nu(fan.ambient_rank());
    let down_dir: IntVec = up_dir.iter().map(|x| -x.clone()).collect();
    let mut lower: Vec<Cone> = Vec::new();
    let mut upper: Vec<Cone> = Vec::new();
    for gamma in fan.all_faces() {
        if !is_pi_independent(fan, &gamma) {
            continue;
        }
        let maximal_over: Vec<&Cone> =
            fan.maximal_cones().iter().filter(|m| m.contains_cone(&gamma)).collect();
        if maximal_over.iter().all(|m| !in_cone_mod_face(fan, m, &gamma, &down_dir)) {
            upper.push(gamma.clone());
        }
        if maximal_over.iter().all(|m| !in_cone_mod_face(fan, m, &gamma, &up_dir)) {
            lower.push(gamma);
        }
    }
    let keep_maximal = |cones: Vec<Cone>| -> Vec<Cone> {
        cones
            .iter()
            .filter(|c| !cones.iter().any(|d| *d != **c && d.contains_cone(c)))
            .cloned()
            .collect()
    };
    Ok((keep_maximal(lower), keep_maximal(upper)))
}

/// Sign of a circuit subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// The signed subdivision center of a circuit: a primitive lattice point
/// ρ± ∈ relint(σ) with π(ρ±) ∈ Q₊·v±, where v± = Σ_{I±} vᵢ; also returns
/// (v± primitive part handled by caller via `e`).
pub(crate) fn signed_center_rays(rays: &[IntVec], sign: Sign) -> Result<(IntVec, IntVec, BigInt)> {
    let rel = match dependence_relation_rays(rays) {
        Ok(rel) => rel,
        Err(Error::PiIndependent) => return Err(Error::NotACircuit),
        Err(e) => return Err(e),
    };
    if rel.circuit_dim() != rays.len() {
        return Err(Error::NotACircuit);
    }
    let chosen: &[usize] = match sign {
        Sign::Pos => &rel.i_pos,
        Sign::Neg => &rel.i_neg,
    };
    let n = rays[0].len() - 1;
    let mut v_sum = vec![BigInt::zero(); n];
    for &i in chosen {
        v_sum = lattice::add(&v_sum, &rel.ray_pi[i].v);
    }
    let (_, e) = lattice::primitive(&v_sum)?;
    // Fiber F = σ ∩ π⁻¹(Q≥0·v±): parametrized by q(λ)ᵢ = [i ∈ I±] + λrᵢ with
    // λ ranging over a closed interval; its endpoints give the two extremal
    // rays of F, and F's interior lies in relint(σ).
    let lambda_extreme: BigRational = match sign {
        Sign::Pos => {
            let m = rel.i_pos.iter().map(|&i| rel.r[i].clone()).max().expect("nonempty");
            -m.recip()
        }
        Sign::Neg => {
            let m = rel.i_neg.iter().map(|&i| rel.r[i].abs()).max().expect("nonempty");
            m.recip()
        }
    };
    let point = |lambda: &BigRational| -> IntVec {
        let mut acc: RatVec = vec![BigRational::zero(); n + 1];
        for (i, ray) in rays.iter().enumerate() {
            let indicator = if chosen.contains(&i) { BigRational::one() } else { BigRational::zero() };
            let q = indicator + lambda * &rel.r[i];
            let s = q / matrix::to_rat(&rel.ray_pi[i].c);
            for (a, x) in acc.iter_mut().zip(ray) {
                *a += &s * matrix::to_rat(x);
            }
        }
        matrix::clear_denominators(&acc)
    };
    let a = lattice::primitive(&point(&BigRational::zero()))?.0;
    let b = lattice::primitive(&point(&lambda_extreme))?.0;
    let rho = minimal_fiber_interior_point(&a, &b)?;
    Ok((rho, v_sum, e))
}

/// Smallest lattice point of relint⟨a, b⟩ for two rays that project to
/// positive multiples α·u, β·u of one primitive direction u: the point over
/// k·u with k ≥ 1 minimal (automatically primitive), heights strictly
/// between the boundary slopes. Any relint point is a valid subdivision
/// center; the minimal one keeps ray entries, and with them the
/// multiplicities of later cones, small. Returns `a` when the two rays
/// coincide (a one-dimensional fiber has no other interior directions).
fn minimal_fiber_interior_point(a: &IntVec, b: &IntVec) -> Result<IntVec> {
    let (u, alpha) = lattice::primitive(&project(a))?;
    let (u_b, beta) = lattice::primitive(&project(b))?;
    debug_assert_eq!(u, u_b, "fiber endpoints project to one ray");
    let h_a = a[a.len() - 1].clone();
    let h_b = b[b.len() - 1].clone();
    let slope_a = BigRational::new(h_a, alpha);
    let slope_b = BigRational::new(h_b, beta);
    if slope_a == slope_b {
        return Ok(a.clone());
    }
    let (lo, hi) = if slope_a < slope_b {
        (slope_a, slope_b)
    } else {
        (slope_b, slope_a)
    };
    // an open interval of length > 1 contains an integer, so k is reached
    let mut k = BigInt::one();
    let k_limit = (hi.clone() - lo.clone()).recip().ceil().to_integer() + BigInt::from(2);
    while k <= k_limit {
        let k_rat = BigRational::from_integer(k.clone());
        let lo_k = &lo * &k_rat;
        let hi_k = &hi * &k_rat;
        let mut h = hi_k.floor().to_integer();
        if BigRational::from_integer(h.clone()) == hi_k {
            h -= 1;
        }
        if BigRational::from_integer(h.clone()) > lo_k {
            let mut x: IntVec = u.iter().map(|c| c * &k).collect();
            x.push(h);
            return Ok(x);
        }
        k += 1;
    }
    Err(Error::InternalInvariant(
        "fiber interior contains no lattice point below the guaranteed bound".into(),
    ))
}

/// Signed star subdivision of a circuit σ: subdivides the fan at a canonical
/// primitive point ρ± of relint(σ) lying over the ray Q₊·v±,
/// v± = Σ_{i∈I±} vᵢ. Returns the subdivided fan, ρ±, and the scale e with
/// v± = e·primitive(v±).
pub fn pos_neg_star_subdivide(fan: &Fan, sigma: &Cone, sign: Sign) -> Result<(Fan, IntVec, BigInt)> {
    if !fan.is_face(sigma) {
        return Err(Error::NotAFace);
    }
    let (rho, _v, e) = signed_center_rays(&fan.cone_rays(sigma), sign)?;
    let sub = fan::star_subdivide(fan, &rho)?;
    Ok((sub, rho, e))
}

/// All circuits of the fan (deduplicated faces whose relation has full
/// support), in canonical order.
pub fn circuits(fan: &Fan) -> Result<Vec<Cone>> {
    let mut out = BTreeSet::new();
    for face in fan.all_faces() {
        if is_circuit(fan, &face) {
            out.insert(face);
        }
    }
    Ok(out.into_iter().collect())
}
