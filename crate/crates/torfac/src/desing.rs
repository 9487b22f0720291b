//! π-desingularization of cobordism fans.
//!
//! The driver [`pi_desingularize`] repeatedly subdivides a cobordism fan
//! until every cone is π-nonsingular, strictly decreasing the fan profile on
//! every outer iteration. Each iteration runs three steps: select a witness
//! cone of maximal profile and a target face τ ([`step1_select`], with the
//! circuit case handled by [`prop_fondamentale_step`]), repair
//! codefiniteness of τ in all cones containing it ([`make_codefinite`]), and
//! star-subdivide at a lift of an interior parallelepiped point of π(τ).

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::cobordism::{
    self, dependence_relation_rays, is_pi_independent_rays, pi_multiplicity_rays,
    pi_profile_rays, signed_center_rays, DependenceData, FanProfile, PiProfile, Sign,
};
use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice;
use crate::matrix;
use crate::IntVec;

/// Default bound on outer iterations. High-multiplicity inputs can
/// legitimately require more (the iteration count grows steeply with the
/// input's π-multiplicity); [`pi_desingularize_with_cap`] accepts a larger
/// bound for them.
pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// Bound on repair subdivisions inside one [`make_codefinite`] call.
const CODEFINITE_CAP: usize = 10_000;

/// Kind of a single recorded subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Signed circuit subdivision whose children all have strictly smaller
    /// profile (ends the outer iteration).
    PropFondamentaleA,
    /// Signed circuit subdivision with exactly one child of equal profile.
    PropFondamentaleB,
    /// Codefiniteness-repair subdivision (step 2).
    PropFinale,
    /// Subdivision at the lift of a parallelepiped point of π(τ) (step 3).
    ParSubdivision,
}

impl StepKind {
    /// Stable identifier used in serialized traces.
    pub fn wire_name(self) -> &'static str {
        match self {
            StepKind::PropFondamentaleA => "prop-fondamentale-A",
            StepKind::PropFondamentaleB => "prop-fondamentale-B",
            StepKind::PropFinale => "prop-finale",
            StepKind::ParSubdivision => "par-subdivision",
        }
    }

    pub fn from_wire_name(name: &str) -> Option<StepKind> {
        match name {
            "prop-fondamentale-A" => Some(StepKind::PropFondamentaleA),
            "prop-fondamentale-B" => Some(StepKind::PropFondamentaleB),
            "prop-finale" => Some(StepKind::PropFinale),
            "par-subdivision" => Some(StepKind::ParSubdivision),
            _ => None,
        }
    }
}

/// One subdivision performed by the desingularization.
#[derive(Clone, Debug)]
pub struct DesingTraceEntry {
    pub step_kind: StepKind,
    /// Primitive generator of the new ray.
    pub center_ray: IntVec,
    /// Fan profile immediately after this subdivision.
    pub fan_profile_after: FanProfile,
    /// 1-based outer iteration this subdivision belongs to.
    pub outer_iteration: usize,
}

/// Ordered record of all subdivisions of one desingularization run.
#[derive(Clone, Debug, Default)]
pub struct DesingTrace {
    pub entries: Vec<DesingTraceEntry>,
}

/// Outcome classification of a signed circuit subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropCase {
    /// Every child of the circuit has strictly smaller π-profile.
    A,
    /// Exactly one child retains the circuit's π-profile.
    B,
}

/// Result of [`prop_fondamentale_step`].
#[derive(Clone, Debug)]
pub struct PropOutcome {
    /// The fan after the signed subdivision.
    pub fan: Fan,
    pub case: PropCase,
    /// Rays of the unique equal-profile child κ′ (case B only).
    pub kappa: Option<Vec<IntVec>>,
    /// Rays of κ′'s old codimension-1 face γ′ (case B only).
    pub gamma: Option<Vec<IntVec>>,
    /// Primitive generator of the subdivision ray.
    pub center: IntVec,
    /// Scale e with Σ_{I±} vᵢ = e · primitive.
    pub scale: BigInt,
    /// The sign that produced the classification.
    pub sign: Sign,
}

/// Which path step 1 takes after picking the witness cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionBranch {
    /// The witness cone has a circuit of dimension > 2; the caller performs
    /// [`prop_fondamentale_step`] before the face data can be computed.
    PropFondamentale,
    /// γ, τ, v, ρ are all selected directly.
    Direct,
}

/// Everything step 1 selects on the current fan.
#[derive(Clone, Debug)]
pub struct Selection {
    /// First maximal cone (canonical order) attaining the maximal profile.
    pub eta: Cone,
    /// The circuit contained in `eta`, when `eta` is π-dependent.
    pub circuit: Option<Cone>,
    pub branch: SelectionBranch,
    /// Codimension-1 face of maximal π-multiplicity (γ = η when η is
    /// π-independent). `None` in the [`SelectionBranch::PropFondamentale`]
    /// branch.
    pub gamma: Option<Cone>,
    /// Minimal-dimension π-singular face of γ.
    pub tau: Option<Cone>,
    /// Chosen open-parallelepiped point of π(τ).
    pub v: Option<IntVec>,
    /// Primitive generator of the ray through the lift of `v` in span(τ).
    pub rho: Option<IntVec>,
}

fn ensure_cobordism(fan: &Fan) -> Result<()> {
    if !fan.is_cobordism() {
        return Err(Error::Invalid(
            "π-desingularization operates on cobordism fans".into(),
        ));
    }
    Ok(())
}

/// The sign to try first, from the proof's case table: a lone unit
/// coefficient dictates its own side; otherwise avoid the side whose
/// exceptional configuration (single unit = single sign) is present.
fn preferred_sign(rel: &DependenceData) -> Sign {
    let i1 = rel.i_one.len();
    let im1 = rel.i_minus_one.len();
    let ip = rel.i_pos.len();
    let im = rel.i_neg.len();
    if i1 + im1 == 1 {
        if i1 == 1 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    } else if im1 == 1 && im == 1 {
        Sign::Neg
    } else if i1 == 1 && ip == 1 {
        Sign::Pos
    } else if i1 >= 1 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Children profiles of the circuit against its own profile: `None` when the
/// subdivision at `rho` yields neither all-smaller (A) nor
/// exactly-one-equal (B).
fn classify_children(
    rays: &[IntVec],
    rho: &IntVec,
) -> Result<Option<(PropCase, Option<usize>)>> {
    let p = pi_profile_rays(rays)?;
    let mut at_p: Vec<usize> = Vec::new();
    for alpha in 0..rays.len() {
        let mut child: Vec<IntVec> = rays
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != alpha)
            .map(|(_, r)| r.clone())
            .collect();
        child.push(rho.clone());
        let cp = pi_profile_rays(&child)?;
        if cp > p {
            return Ok(None);
        }
        if cp == p {
            at_p.push(alpha);
        }
    }
    match at_p.len() {
        0 => Ok(Some((PropCase::A, None))),
        1 => Ok(Some((PropCase::B, Some(at_p[0])))),
        _ => Ok(None),
    }
}

fn try_sign(fan: &Fan, rays: &[IntVec], sign: Sign) -> Result<Option<PropOutcome>> {
    let (rho, _v_sum, scale) = signed_center_rays(rays, sign)?;
    let Some((case, alpha0)) = classify_children(rays, &rho)? else {
        return Ok(None);
    };
    let (kappa, gamma) = match alpha0 {
        None => (None, None),
        Some(alpha0) => {
            let gamma_rays: Vec<IntVec> = rays
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != alpha0)
                .map(|(_, r)| r.clone())
                .collect();
            let mut kappa_rays = gamma_rays.clone();
            kappa_rays.push(rho.clone());
            if cfg!(debug_assertions) {
                let m = pi_multiplicity_rays(rays)?;
                assert!(is_pi_independent_rays(&gamma_rays));
                assert_eq!(pi_multiplicity_rays(&gamma_rays)?, m);
                assert_eq!(pi_multiplicity_rays(&kappa_rays)?, m);
            }
            (Some(kappa_rays), Some(gamma_rays))
        }
    };
    let subdivided = fan::star_subdivide(fan, &rho)?;
    Ok(Some(PropOutcome {
        fan: subdivided,
        case,
        kappa,
        gamma,
        center: rho,
        scale,
        sign,
    }))
}

/// Subdivides the fan at a signed center of the circuit σ (dimension > 2)
/// and classifies the outcome: case A (all children of σ have strictly
/// smaller π-profile) or case B (exactly one child κ′ keeps the profile, and
/// its old codimension-1 face γ′ is π-independent of the same
/// π-multiplicity). Tries the sign suggested by the coefficient counts
/// first, then the other sign; the classification itself is empirical.
pub fn prop_fondamentale_step(fan: &Fan, sigma: &Cone) -> Result<PropOutcome> {
    if !fan.is_face(sigma) {
        return Err(Error::NotAFace);
    }
    let rays = fan.cone_rays(sigma);
    let rel = match dependence_relation_rays(&rays) {
        Ok(rel) => rel,
        Err(Error::PiIndependent) => return Err(Error::NotACircuit),
        Err(e) => return Err(e),
    };
    if rel.circuit_dim() != rays.len() {
        return Err(Error::NotACircuit);
    }
    if rays.len() < 3 {
        return Err(Error::DimensionTooSmall);
    }
    let first = preferred_sign(&rel);
    if let Some(outcome) = try_sign(fan, &rays, first)? {
        return Ok(outcome);
    }
    if let Some(outcome) = try_sign(fan, &rays, first.flip())? {
        return Ok(outcome);
    }
    Err(Error::InternalInvariant(
        "signed circuit subdivision yielded neither case A nor case B for either sign".into(),
    ))
}

/// Minimal-dimension π-singular face of the π-independent cone `gamma`,
/// canonical tie-break (lexicographic on ray id lists, which follows the
/// ray-vector order).
fn minimal_singular_face(fan: &Fan, gamma: &Cone) -> Result<Cone> {
    let ids = gamma.ray_ids();
    let mut best: Option<Cone> = None;
    for mask in 1u32..(1u32 << ids.len()) {
        let subset: Vec<usize> = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &id)| id)
            .collect();
        let face = Cone::new(subset);
        let rays = fan.cone_rays(&face);
        if pi_multiplicity_rays(&rays)?.is_one() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                (face.dim(), face.ray_ids()) < (b.dim(), b.ray_ids())
            }
        };
        if better {
            best = Some(face);
        }
    }
    best.ok_or_else(|| {
        Error::InternalInvariant("selected face has no π-singular face".into())
    })
}

/// An open-parallelepiped point v of π(τ) and the primitive generator of
/// the ray through its unique lift in span(τ). Any choice of v is valid;
/// taking one of minimal coordinate sum (then minimal largest coordinate,
/// then lexicographically first) keeps the induced multiplicities of the
/// subdivided cones small, so the outer loop converges in few iterations.
fn par_point_and_lift(fan: &Fan, tau: &Cone) -> Result<(IntVec, IntVec)> {
    par_point_and_lift_rays(&fan.cone_rays(tau))
}

fn par_point_and_lift_rays(rays: &[IntVec]) -> Result<(IntVec, IntVec)> {
    let data = rays
        .iter()
        .map(cobordism::ray_pi_data)
        .collect::<Result<Vec<_>>>()?;
    let vs: Vec<IntVec> = data.iter().map(|d| d.v.clone()).collect();
    let points = lattice::enumerate_parallelepiped(&vs)?;
    let mut best: Option<(BigRational, BigRational, IntVec, Vec<BigRational>)> = None;
    for p in points {
        let coeffs = matrix::solve_columns(&vs, &p).ok_or_else(|| {
            Error::InternalInvariant("parallelepiped point outside the span of its face".into())
        })?;
        let sum: BigRational = coeffs.iter().cloned().sum();
        let max = coeffs.iter().cloned().max().expect("nonempty coordinates");
        let better = match &best {
            None => true,
            Some((bs, bm, bp, _)) => (&sum, &max, &p) < (bs, bm, bp),
        };
        if better {
            best = Some((sum, max, p, coeffs));
        }
    }
    let (_, _, v, coeffs) = best.ok_or_else(|| {
        Error::InternalInvariant(
            "minimal π-singular face has an empty open parallelepiped".into(),
        )
    })?;
    let n = rays[0].len();
    let mut x = vec![BigRational::zero(); n];
    for ((a, d), ray) in coeffs.iter().zip(&data).zip(rays) {
        let s = a / matrix::to_rat(&d.c);
        for (acc, coord) in x.iter_mut().zip(ray) {
            *acc += &s * matrix::to_rat(coord);
        }
    }
    let rho = lattice::primitive(&matrix::clear_denominators(&x))?.0;
    Ok((v, rho))
}

fn select_tau_v_rho(fan: &Fan, gamma: &Cone) -> Result<(Cone, IntVec, IntVec)> {
    let tau = minimal_singular_face(fan, gamma)?;
    let (v, rho) = par_point_and_lift(fan, &tau)?;
    Ok((tau, v, rho))
}

/// Among the π-independent codimension-1 faces of η (drop a ray with
/// nonzero relation coefficient), the one of maximal π-multiplicity;
/// canonical tie-break.
fn canonical_max_mult_face(fan: &Fan, eta: &Cone, rel: &DependenceData) -> Result<Cone> {
    let ids = eta.ray_ids();
    let mut best: Option<(BigInt, Cone)> = None;
    for (pos, &id) in ids.iter().enumerate() {
        if rel.r[pos].is_zero() {
            continue;
        }
        let face = eta.without_ray(id);
        let mult = pi_multiplicity_rays(&fan.cone_rays(&face))?;
        let better = match &best {
            None => true,
            Some((bm, bf)) => mult > *bm || (mult == *bm && face.ray_ids() < bf.ray_ids()),
        };
        if better {
            best = Some((mult, face));
        }
    }
    best.map(|(_, f)| f).ok_or_else(|| {
        Error::InternalInvariant("π-dependent cone with empty relation support".into())
    })
}

/// Step 1 of an outer iteration: pick the first maximal cone η attaining the
/// maximal profile and either hand the circuit to the caller (dimension > 2)
/// or select γ, τ, v, ρ directly.
pub fn step1_select(fan: &Fan) -> Result<Selection> {
    ensure_cobordism(fan)?;
    let (fp, argmax) = cobordism::fan_profile_argmax(fan)?;
    if fp.g.mult.is_one() {
        return Err(Error::AlreadyNonsingular);
    }
    let eta = fan.maximal_cones()[argmax].clone();
    match cobordism::dependence_relation(fan, &eta) {
        Err(Error::PiIndependent) => {
            let (tau, v, rho) = select_tau_v_rho(fan, &eta)?;
            Ok(Selection {
                eta: eta.clone(),
                circuit: None,
                branch: SelectionBranch::Direct,
                gamma: Some(eta),
                tau: Some(tau),
                v: Some(v),
                rho: Some(rho),
            })
        }
        Err(e) => Err(e),
        Ok(rel) => {
            let circuit_ids: Vec<usize> = eta
                .ray_ids()
                .iter()
                .enumerate()
                .filter(|(i, _)| !rel.r[*i].is_zero())
                .map(|(_, &id)| id)
                .collect();
            let sigma = Cone::new(circuit_ids);
            if sigma.dim() > 2 {
                Ok(Selection {
                    eta,
                    circuit: Some(sigma),
                    branch: SelectionBranch::PropFondamentale,
                    gamma: None,
                    tau: None,
                    v: None,
                    rho: None,
                })
            } else {
                let gamma = canonical_max_mult_face(fan, &eta, &rel)?;
                let (tau, v, rho) = select_tau_v_rho(fan, &gamma)?;
                Ok(Selection {
                    eta,
                    circuit: Some(sigma),
                    branch: SelectionBranch::Direct,
                    gamma: Some(gamma),
                    tau: Some(tau),
                    v: Some(v),
                    rho: Some(rho),
                })
            }
        }
    }
}

fn push_entry(
    trace: &mut DesingTrace,
    kind: StepKind,
    center: IntVec,
    profile_after: FanProfile,
    outer: usize,
) {
    trace.entries.push(DesingTraceEntry {
        step_kind: kind,
        center_ray: center,
        fan_profile_after: profile_after,
        outer_iteration: outer,
    });
}

/// One alive maximal cone of the driver state: sorted ray ids plus its cached
/// π-profile and dependence relation (`None` when π-independent).
struct StateCone {
    ids: Vec<usize>,
    profile: PiProfile,
    rel: Option<DependenceData>,
}

/// Mutable fan state of the desingularization driver. Every subdivision
/// center is interior to a known face, so a star subdivision touches exactly
/// the cones whose ray-id sets contain that face; keeping per-cone profiles
/// cached and the global profile as a multiset makes each step proportional
/// to the star of the face rather than to the whole fan, which grows into
/// the thousands of cones on larger inputs. Split cones leave `None` holes,
/// so ids and iteration order stay stable and deterministic.
struct State {
    rank: usize,
    /// Append-only primitive ray table; a ray's id is its index.
    rays: Vec<IntVec>,
    cones: Vec<Option<StateCone>>,
    /// Multiset of the alive cones' profiles.
    counts: BTreeMap<PiProfile, usize>,
}

impl State {
    fn from_fan(fan: &Fan) -> Result<State> {
        let mut st = State {
            rank: fan.ambient_rank(),
            rays: fan.rays().to_vec(),
            cones: Vec::with_capacity(fan.maximal_cones().len()),
            counts: BTreeMap::new(),
        };
        for cone in fan.maximal_cones() {
            let rays = fan.cone_rays(cone);
            let (profile, rel) = cobordism::pi_profile_and_relation(&rays)?;
            *st.counts.entry(profile.clone()).or_insert(0) += 1;
            st.cones.push(Some(StateCone {
                ids: cone.ray_ids().to_vec(),
                profile,
                rel,
            }));
        }
        Ok(st)
    }

    fn to_fan(&self, is_cobordism: bool) -> Result<Fan> {
        let cone_vectors: Vec<Vec<IntVec>> = self
            .cones
            .iter()
            .flatten()
            .map(|c| self.rays_of(&c.ids))
            .collect();
        Fan::assemble(self.rank, cone_vectors, is_cobordism)
    }

    fn rays_of(&self, ids: &[usize]) -> Vec<IntVec> {
        ids.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Global fan profile: maximal per-cone profile and the number of alive
    /// cones attaining it.
    fn profile(&self) -> Result<FanProfile> {
        let (g, s) = self
            .counts
            .iter()
            .next_back()
            .ok_or_else(|| Error::Invalid("fan has no maximal cones".into()))?;
        Ok(FanProfile { g: g.clone(), s: *s })
    }

    /// Id of the first (creation order) alive cone attaining profile `g`.
    fn first_attaining(&self, g: &PiProfile) -> Option<usize> {
        self.cones
            .iter()
            .position(|c| c.as_ref().is_some_and(|c| c.profile == *g))
    }

    fn alive(&self, id: usize) -> &StateCone {
        self.cones[id].as_ref().expect("cone id points at an alive cone")
    }

    /// Whether some alive cone contains every ray of `ids`.
    fn has_face(&self, ids: &[usize]) -> bool {
        self.cones
            .iter()
            .flatten()
            .any(|c| ids.iter().all(|id| c.ids.binary_search(id).is_ok()))
    }

    /// Star subdivision at `rho`, a primitive point interior to the face
    /// with ray ids `face`: every alive cone containing the face is replaced
    /// by its `|face|` children (drop one face ray, adjoin `rho`).
    fn subdivide(&mut self, face: &[usize], rho: IntVec) -> Result<()> {
        if self.rays.contains(&rho) {
            return Err(Error::InternalInvariant(
                "subdivision center coincides with an existing ray".into(),
            ));
        }
        let new_id = self.rays.len();
        self.rays.push(rho);
        let affected: Vec<usize> = (0..self.cones.len())
            .filter(|&i| {
                self.cones[i]
                    .as_ref()
                    .is_some_and(|c| face.iter().all(|id| c.ids.binary_search(id).is_ok()))
            })
            .collect();
        if affected.is_empty() {
            return Err(Error::OutsideSupport);
        }
        for i in affected {
            let parent = self.cones[i].take().expect("affected cone is alive");
            self.drop_count(&parent.profile);
            for &skip in face {
                let mut ids: Vec<usize> =
                    parent.ids.iter().copied().filter(|&id| id != skip).collect();
                ids.push(new_id);
                ids.sort_unstable();
                let rays = self.rays_of(&ids);
                let (profile, rel) = cobordism::pi_profile_and_relation(&rays)?;
                *self.counts.entry(profile.clone()).or_insert(0) += 1;
                self.cones.push(Some(StateCone { ids, profile, rel }));
            }
        }
        Ok(())
    }

    fn drop_count(&mut self, profile: &PiProfile) {
        let n = self
            .counts
            .get_mut(profile)
            .expect("every alive cone's profile is counted");
        if *n > 1 {
            *n -= 1;
        } else {
            self.counts.remove(profile);
        }
    }
}

/// Signed circuit subdivision against the state: pick the sign whose
/// subdivision classifies as case A or B, commit it, and return the case,
/// the center, and (case B) the id of the circuit ray absent from γ′.
fn state_prop_commit(
    st: &mut State,
    circuit_ids: &[usize],
) -> Result<(PropCase, IntVec, Option<usize>)> {
    let rays = st.rays_of(circuit_ids);
    let rel = match dependence_relation_rays(&rays) {
        Ok(rel) => rel,
        Err(Error::PiIndependent) => return Err(Error::NotACircuit),
        Err(e) => return Err(e),
    };
    if rel.circuit_dim() != rays.len() {
        return Err(Error::NotACircuit);
    }
    if rays.len() < 3 {
        return Err(Error::DimensionTooSmall);
    }
    let first = preferred_sign(&rel);
    for sign in [first, first.flip()] {
        let (rho, _v_sum, _scale) = signed_center_rays(&rays, sign)?;
        let Some((case, alpha0)) = classify_children(&rays, &rho)? else {
            continue;
        };
        if cfg!(debug_assertions) {
            if let Some(alpha0) = alpha0 {
                let gamma_rays: Vec<IntVec> = rays
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != alpha0)
                    .map(|(_, r)| r.clone())
                    .collect();
                let mut kappa_rays = gamma_rays.clone();
                kappa_rays.push(rho.clone());
                let m = pi_multiplicity_rays(&rays)?;
                assert!(is_pi_independent_rays(&gamma_rays));
                assert_eq!(pi_multiplicity_rays(&gamma_rays)?, m);
                assert_eq!(pi_multiplicity_rays(&kappa_rays)?, m);
            }
        }
        let alpha0_id = alpha0.map(|pos| circuit_ids[pos]);
        st.subdivide(circuit_ids, rho.clone())?;
        return Ok((case, rho, alpha0_id));
    }
    Err(Error::InternalInvariant(
        "signed circuit subdivision yielded neither case A nor case B for either sign".into(),
    ))
}

/// Minimal-dimension π-singular face of the π-independent cone with ray ids
/// `ids`, canonical tie-break (lexicographic on the id lists).
fn state_minimal_singular_ids(st: &State, ids: &[usize]) -> Result<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for mask in 1u32..(1u32 << ids.len()) {
        let subset: Vec<usize> = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &id)| id)
            .collect();
        if pi_multiplicity_rays(&st.rays_of(&subset))?.is_one() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (subset.len(), &subset) < (b.len(), b),
        };
        if better {
            best = Some(subset);
        }
    }
    best.ok_or_else(|| Error::InternalInvariant("selected face has no π-singular face".into()))
}

/// Among the codimension-1 faces of η dropping a ray with nonzero relation
/// coefficient, the one of maximal π-multiplicity (canonical tie-break).
fn state_max_mult_facet(
    st: &State,
    ids: &[usize],
    rel: &DependenceData,
) -> Result<Vec<usize>> {
    let mut best: Option<(BigInt, Vec<usize>)> = None;
    for (pos, &id) in ids.iter().enumerate() {
        if rel.r[pos].is_zero() {
            continue;
        }
        let face: Vec<usize> = ids.iter().copied().filter(|&x| x != id).collect();
        let mult = pi_multiplicity_rays(&st.rays_of(&face))?;
        let better = match &best {
            None => true,
            Some((bm, bf)) => mult > *bm || (mult == *bm && &face < bf),
        };
        if better {
            best = Some((mult, face));
        }
    }
    best.map(|(_, f)| f).ok_or_else(|| {
        Error::InternalInvariant("π-dependent cone with empty relation support".into())
    })
}

/// τ (minimal π-singular face of γ) and the primitive lift ρ of the chosen
/// open-parallelepiped point of π(τ).
fn state_select_tau_rho(st: &State, gamma_ids: &[usize]) -> Result<(Vec<usize>, IntVec)> {
    let tau_ids = state_minimal_singular_ids(st, gamma_ids)?;
    let (_v, rho) = par_point_and_lift_rays(&st.rays_of(&tau_ids))?;
    Ok((tau_ids, rho))
}

/// Repairs codefiniteness of the face `tau_ids` in place: while some alive
/// cone containing τ has relation coefficients of mixed sign on τ's rays,
/// subdivide that cone's circuit. τ itself must survive every repair.
fn state_make_codefinite(
    st: &mut State,
    tau_ids: &[usize],
    trace: &mut DesingTrace,
    outer: usize,
) -> Result<()> {
    'repair: for _ in 0..CODEFINITE_CAP {
        if !st.has_face(tau_ids) {
            return Err(Error::InternalInvariant(
                "codefiniteness repair subdivided the face it must preserve".into(),
            ));
        }
        for i in 0..st.cones.len() {
            let Some(cone) = &st.cones[i] else { continue };
            if !tau_ids.iter().all(|id| cone.ids.binary_search(id).is_ok()) {
                continue;
            }
            let Some(rel) = &cone.rel else { continue };
            let tau_coeffs: Vec<&BigRational> = cone
                .ids
                .iter()
                .enumerate()
                .filter(|(_, id)| tau_ids.binary_search(id).is_ok())
                .map(|(pos, _)| &rel.r[pos])
                .collect();
            let all_nonneg = tau_coeffs.iter().all(|c| !c.is_negative());
            let all_nonpos = tau_coeffs.iter().all(|c| !c.is_positive());
            if all_nonneg || all_nonpos {
                continue;
            }
            let circuit_ids: Vec<usize> = cone
                .ids
                .iter()
                .enumerate()
                .filter(|(pos, _)| !rel.r[*pos].is_zero())
                .map(|(_, &id)| id)
                .collect();
            debug_assert!(
                circuit_ids.len() > 2,
                "dimension ≤ 2 circuits are always codefinite"
            );
            let (_case, rho, _alpha0) = state_prop_commit(st, &circuit_ids)?;
            push_entry(trace, StepKind::PropFinale, rho, st.profile()?, outer);
            continue 'repair;
        }
        return Ok(());
    }
    Err(Error::InternalInvariant(
        "codefiniteness repair did not converge".into(),
    ))
}

/// Subdivides (only at circuit centers, never touching τ itself) until τ is
/// codefinite with respect to every maximal cone containing it. The
/// postcondition is re-verified, not assumed.
pub fn make_codefinite(fan: &Fan, tau: &Cone) -> Result<Fan> {
    ensure_cobordism(fan)?;
    if !fan.is_face(tau) {
        return Err(Error::NotAFace);
    }
    if !cobordism::is_pi_independent(fan, tau) {
        return Err(Error::Invalid(
            "codefiniteness repair requires a π-independent face".into(),
        ));
    }
    let mut st = State::from_fan(fan)?;
    let mut trace = DesingTrace::default();
    state_make_codefinite(&mut st, tau.ray_ids(), &mut trace, 0)?;
    if trace.entries.is_empty() {
        return Ok(fan.clone());
    }
    st.to_fan(fan.is_cobordism())
}

fn state_outer_iteration(st: &mut State, trace: &mut DesingTrace, outer: usize) -> Result<()> {
    let g = st.profile()?.g;
    let eta_id = st
        .first_attaining(&g)
        .expect("some alive cone attains the maximal profile");
    let eta_ids = st.alive(eta_id).ids.clone();
    let eta_rel = st.alive(eta_id).rel.clone();
    let (tau_ids, rho) = match &eta_rel {
        // π-independent witness: γ = η.
        None => state_select_tau_rho(st, &eta_ids)?,
        Some(rel) => {
            let circuit_ids: Vec<usize> = eta_ids
                .iter()
                .enumerate()
                .filter(|(pos, _)| !rel.r[*pos].is_zero())
                .map(|(_, &id)| id)
                .collect();
            if circuit_ids.len() > 2 {
                let (case, center, alpha0_id) = state_prop_commit(st, &circuit_ids)?;
                let kind = match case {
                    PropCase::A => StepKind::PropFondamentaleA,
                    PropCase::B => StepKind::PropFondamentaleB,
                };
                push_entry(trace, kind, center, st.profile()?, outer);
                match case {
                    // Case A already decreased the profile; the iteration
                    // ends.
                    PropCase::A => return Ok(()),
                    PropCase::B => {
                        let alpha0 =
                            alpha0_id.expect("case B identifies the dropped circuit ray");
                        // γ is the unique codim-1 face of η with γ ∩ σ = γ′;
                        // it survives inside η's child that drops α₀.
                        let gamma_ids: Vec<usize> = eta_ids
                            .iter()
                            .copied()
                            .filter(|&id| id != alpha0)
                            .collect();
                        debug_assert!(st.has_face(&gamma_ids));
                        state_select_tau_rho(st, &gamma_ids)?
                    }
                }
            } else {
                let gamma_ids = state_max_mult_facet(st, &eta_ids, rel)?;
                state_select_tau_rho(st, &gamma_ids)?
            }
        }
    };
    state_make_codefinite(st, &tau_ids, trace, outer)?;
    st.subdivide(&tau_ids, rho.clone())?;
    push_entry(trace, StepKind::ParSubdivision, rho, st.profile()?, outer);
    Ok(())
}

/// Runs the three-step loop until the fan is π-nonsingular, with the default
/// iteration cap.
pub fn pi_desingularize(fan: &Fan) -> Result<(Fan, DesingTrace)> {
    pi_desingularize_with_cap(fan, DEFAULT_ITERATION_CAP)
}

/// [`pi_desingularize`] with an explicit bound on outer iterations.
pub fn pi_desingularize_with_cap(fan: &Fan, cap: usize) -> Result<(Fan, DesingTrace)> {
    ensure_cobordism(fan)?;
    let mut st = State::from_fan(fan)?;
    let mut trace = DesingTrace::default();
    let mut previous = st.profile()?;
    let mut outer = 0usize;
    while !previous.g.mult.is_one() {
        if outer == cap {
            return Err(Error::IterationCapExceeded(cap));
        }
        outer += 1;
        state_outer_iteration(&mut st, &mut trace, outer)?;
        let profile = st.profile()?;
        if profile >= previous {
            return Err(Error::InternalInvariant(format!(
                "fan profile did not strictly decrease in outer iteration {outer}"
            )));
        }
        previous = profile;
    }
    if trace.entries.is_empty() {
        return Ok((fan.clone(), trace));
    }
    let out = st.to_fan(fan.is_cobordism())?;
    Ok((out, trace))
}
