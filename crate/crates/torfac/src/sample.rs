//! Deterministic sample generators for the property-test suites and the CLI
//! self-test: seeded cobordism fans, smooth fans and centers, π-dependent
//! cones, codefinite-face triples, and independent lattice systems.
//!
//! Every generator takes an explicit RNG so callers control the seed; the
//! same seed always reproduces the same object. Generators use rejection
//! sampling against the real validators and panic if a draw cannot be
//! completed, which for the parameter ranges used in the test suites does
//! not happen.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cobordism::{self, project};
use crate::fan::{self, make_fan, Cone, Fan, ValidateLevel};
use crate::lattice;
use crate::matrix;
use crate::IntVec;

/// Number of rejection-sampling attempts before a generator gives up.
const ATTEMPTS: usize = 100_000;

/// Convenience constructor for the RNG used throughout the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn exhausted(what: &str) -> ! {
    panic!("sampler could not produce {what} in {ATTEMPTS} attempts");
}

/// Uniform vector with entries in `[-max_entry, max_entry]`.
pub fn random_vector(rng: &mut impl Rng, rank: usize, max_entry: i64) -> IntVec {
    (0..rank)
        .map(|_| BigInt::from(rng.gen_range(-max_entry..=max_entry)))
        .collect()
}

/// A linearly independent system of `k ≤ rank` vectors, both drawn
/// uniformly (`k` from `1..=max k`, entries from the box).
pub fn random_independent_system(
    rng: &mut impl Rng,
    max_rank: usize,
    max_entry: i64,
) -> Vec<IntVec> {
    let rank = rng.gen_range(1..=max_rank);
    let k = rng.gen_range(1..=rank);
    for _ in 0..ATTEMPTS {
        let vectors: Vec<IntVec> = (0..k).map(|_| random_vector(rng, rank, max_entry)).collect();
        if matrix::rank(&vectors) == k {
            return vectors;
        }
    }
    exhausted("an independent system")
}

/// A single-cone cobordism fan: `dim` independent rays in `N⁺` of the given
/// rank forming a valid (strictly π-convex, no vertical rays) cone.
pub fn random_cobordism_cone(
    rng: &mut impl Rng,
    rank: usize,
    dim: usize,
    max_entry: i64,
) -> Fan {
    for _ in 0..ATTEMPTS {
        let rays: Vec<IntVec> = (0..dim).map(|_| random_vector(rng, rank, max_entry)).collect();
        if matrix::rank(&rays) != dim {
            continue;
        }
        let cone: Vec<usize> = (0..dim).collect();
        if let Ok(fan) = make_fan(rank, &rays, &[cone], true, ValidateLevel::Full) {
            return fan;
        }
    }
    exhausted("a cobordism cone")
}

/// A cobordism fan over `N` of rank `n_rank`, built by star-subdividing a
/// random full-dimensional cobordism cone until it has up to `max_cones`
/// maximal cones. Every ray of the result — seed rays and subdivision
/// centers alike — has entries bounded by `max_entry`.
pub fn random_cobordism_fan(
    rng: &mut impl Rng,
    n_rank: usize,
    max_entry: i64,
    max_cones: usize,
) -> Fan {
    let rank = n_rank + 1;
    let mut fan = random_cobordism_cone(rng, rank, rank, max_entry);
    let target = rng.gen_range(1..=max_cones);
    for _ in 0..100 * max_cones {
        if fan.maximal_cones().len() >= target {
            break;
        }
        let Some(candidate) = random_interior_subdivision(rng, &fan, max_entry) else {
            continue;
        };
        if candidate.maximal_cones().len() <= max_cones {
            fan = candidate;
        }
    }
    fan
}

/// Like [`random_cobordism_fan`], but with the fan's maximal π-multiplicity
/// bounded by `max_mult`. The desingularization's iteration count grows
/// steeply with the input multiplicity (a single high-multiplicity seed can
/// legitimately demand tens of thousands of subdivisions), so suites that
/// resolve many fans draw from this bounded family to keep their runtime
/// predictable. The seed cone is rejected on its multiplicity before any fan
/// is assembled; refinement centers are sums of rays of an existing cone,
/// re-drawn whenever the sum leaves the entry box, and the final profile is
/// re-checked rather than assumed.
pub fn random_mild_cobordism_fan(
    rng: &mut impl Rng,
    n_rank: usize,
    max_entry: i64,
    max_cones: usize,
    max_mult: i64,
) -> Fan {
    let rank = n_rank + 1;
    let bound = BigInt::from(max_mult);
    let entry_bound = BigInt::from(max_entry);
    'draw: for _ in 0..ATTEMPTS {
        let rays: Vec<IntVec> =
            (0..rank).map(|_| random_vector(rng, rank, max_entry)).collect();
        if matrix::rank(&rays) != rank {
            continue;
        }
        match cobordism::pi_multiplicity_rays(&rays) {
            Ok(m) if m <= bound => {}
            _ => continue,
        }
        let cone: Vec<usize> = (0..rank).collect();
        let Ok(mut fan) = make_fan(rank, &rays, &[cone], true, ValidateLevel::Full) else {
            continue;
        };
        let target = rng.gen_range(1..=max_cones);
        'grow: for _ in 0..20 * max_cones {
            if fan.maximal_cones().len() >= target {
                break;
            }
            let max = fan.maximal_cones();
            let sigma = &max[rng.gen_range(0..max.len())];
            let sigma_rays = fan.cone_rays(sigma);
            let size = rng.gen_range(2..=sigma_rays.len());
            let mut picked: Vec<usize> = (0..sigma_rays.len()).collect();
            picked.shuffle(rng);
            picked.truncate(size);
            let mut v = vec![BigInt::zero(); rank];
            for &i in &picked {
                for (slot, x) in v.iter_mut().zip(&sigma_rays[i]) {
                    *slot += x;
                }
            }
            let Ok((p, _)) = lattice::primitive(&v) else {
                continue 'grow;
            };
            if p.iter().any(|x| x.abs() > entry_bound) || fan.rays().contains(&p) {
                continue 'grow;
            }
            let Ok(candidate) = fan::star_subdivide(&fan, &p) else {
                continue 'grow;
            };
            if candidate.maximal_cones().len() <= max_cones {
                fan = candidate;
            }
        }
        match cobordism::fan_profile(&fan) {
            Ok(fp) if fp.g.mult <= bound => return fan,
            _ => continue 'draw,
        }
    }
    exhausted("a mild cobordism fan")
}

/// Star-subdivides at a random box point inside the support that is not an
/// existing ray (subdividing on a ray would be a no-op), keeping every ray
/// entry within `max_entry`.
fn random_interior_subdivision(rng: &mut impl Rng, fan: &Fan, max_entry: i64) -> Option<Fan> {
    let v = random_vector(rng, fan.ambient_rank(), max_entry);
    if lattice::is_zero_vec(&project(&v)) {
        return None;
    }
    let (p, _) = lattice::primitive(&v).ok()?;
    if fan.rays().contains(&p) {
        return None;
    }
    if !support_contains(fan, &p) {
        return None;
    }
    fan::star_subdivide(fan, &p).ok()
}

/// A smooth fan in `N`: a unimodular image of the positive orthant refined
/// by up to `subdivisions` smooth star subdivisions (each at the sum of the
/// rays of a face).
pub fn random_smooth_fan(rng: &mut impl Rng, rank: usize, subdivisions: usize) -> Fan {
    // random unimodular basis via shear operations
    let mut rays: Vec<IntVec> = (0..rank)
        .map(|i| {
            let mut e = vec![BigInt::zero(); rank];
            e[i] = BigInt::one();
            e
        })
        .collect();
    for _ in 0..2 * rank {
        let i = rng.gen_range(0..rank);
        let j = rng.gen_range(0..rank);
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        if i == j || c.is_zero() {
            continue;
        }
        let source = rays[j].clone();
        for (slot, x) in rays[i].iter_mut().zip(&source) {
            *slot += &c * x;
        }
    }
    let cone: Vec<usize> = (0..rank).collect();
    let mut fan = make_fan(rank, &rays, &[cone], false, ValidateLevel::Full)
        .expect("a unimodular basis spans a valid cone");
    for _ in 0..rng.gen_range(0..=subdivisions) {
        let max = fan.maximal_cones();
        let sigma = &max[rng.gen_range(0..max.len())];
        if sigma.dim() < 2 {
            continue;
        }
        let rays = fan.cone_rays(sigma);
        let size = rng.gen_range(2..=rays.len());
        let mut picked: Vec<usize> = (0..rays.len()).collect();
        picked.shuffle(rng);
        picked.truncate(size);
        let mut v = vec![BigInt::zero(); fan.ambient_rank()];
        for &i in &picked {
            for (slot, x) in v.iter_mut().zip(&rays[i]) {
                *slot += x;
            }
        }
        // the sum of part of a lattice basis is primitive, and subdividing
        // there keeps the fan smooth
        fan = fan::star_subdivide(&fan, &v).expect("smooth star subdivision");
    }
    fan
}

/// A random cone of the fan with at least `min_dim` rays, if any.
pub fn random_center(rng: &mut impl Rng, fan: &Fan, min_dim: usize) -> Option<Cone> {
    let candidates: Vec<Cone> = fan
        .all_faces()
        .into_iter()
        .filter(|c| c.dim() >= min_dim)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    Some(candidates[rng.gen_range(0..candidates.len())].clone())
}

/// A single-cone cobordism fan whose cone is π-dependent, of the given
/// dimension in `N⁺` of the given rank. The last ray is constructed over a
/// random nonnegative combination of the other projections, which forces
/// the dependence.
pub fn random_pi_dependent_cone(
    rng: &mut impl Rng,
    rank: usize,
    dim: usize,
    max_entry: i64,
) -> Fan {
    assert!(dim >= 2 && dim <= rank, "need 2 ≤ dim ≤ rank");
    for _ in 0..ATTEMPTS {
        let mut rays: Vec<IntVec> =
            (0..dim - 1).map(|_| random_vector(rng, rank, max_entry)).collect();
        let mut projected_sum = vec![BigInt::zero(); rank - 1];
        for ray in &rays {
            let c = BigInt::from(rng.gen_range(0i64..=2));
            for (slot, x) in projected_sum.iter_mut().zip(project(ray)) {
                *slot += &c * &x;
            }
        }
        let mut last = projected_sum;
        last.push(BigInt::from(rng.gen_range(-2i64..=2)));
        rays.push(last);
        if matrix::rank(&rays) != dim {
            continue;
        }
        let cone: Vec<usize> = (0..dim).collect();
        let Ok(fan) = make_fan(rank, &rays, &[cone], true, ValidateLevel::Full) else {
            continue;
        };
        if !cobordism::is_pi_independent(&fan, &fan.maximal_cones()[0]) {
            return fan;
        }
    }
    exhausted("a pi-dependent cone")
}

/// A full-dimensional single-cone cobordism fan; such cones are always
/// π-dependent (a one-signed relation would put ±ν inside the cone).
pub fn random_full_dim_pi_dependent_cone(
    rng: &mut impl Rng,
    rank: usize,
    max_entry: i64,
) -> Fan {
    let fan = random_cobordism_cone(rng, rank, rank, max_entry);
    debug_assert!(!cobordism::is_pi_independent(
        &fan,
        &fan.maximal_cones()[0]
    ));
    fan
}

/// A sampled hypothesis of the codefinite-subdivision bound: a π-dependent
/// cone η, a codefinite π-independent face τ with π-singular projection, a
/// point `v ∈ par(π(τ))`, and the primitive generator of the ray through
/// the lift of `v` into the relative interior of τ.
pub struct CodefiniteTriple {
    pub eta: Fan,
    pub tau: Cone,
    pub par_point: IntVec,
    pub lift: IntVec,
}

pub fn random_codefinite_triple(rng: &mut impl Rng, max_entry: i64) -> CodefiniteTriple {
    for _ in 0..ATTEMPTS {
        let rank = rng.gen_range(3..=5);
        let dim = rng.gen_range(2..=rank);
        let eta = random_pi_dependent_cone(rng, rank, dim, max_entry);
        let top = eta.maximal_cones()[0].clone();
        let mut candidates: Vec<(Cone, Vec<IntVec>)> = Vec::new();
        for tau in eta.all_faces() {
            if tau.is_empty() || tau == top || !cobordism::is_pi_independent(&eta, &tau) {
                continue;
            }
            if !is_codefinite_or_false(&eta, &tau, &top) {
                continue;
            }
            let Ok(pd) = cobordism::pi_data(&eta, &tau) else {
                continue;
            };
            let projections: Vec<IntVec> = pd.iter().map(|d| d.v.clone()).collect();
            let Ok(points) = lattice::enumerate_parallelepiped(&projections) else {
                continue;
            };
            if !points.is_empty() {
                candidates.push((tau, points));
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let (tau, points) = candidates[rng.gen_range(0..candidates.len())].clone();
        let par_point = points[rng.gen_range(0..points.len())].clone();
        let lift = lift_into_face(&eta, &tau, &par_point);
        return CodefiniteTriple { eta, tau, par_point, lift };
    }
    exhausted("a codefinite triple")
}

fn is_codefinite_or_false(fan: &Fan, tau: &Cone, eta: &Cone) -> bool {
    matches!(cobordism::is_codefinite(fan, tau, eta), Ok(true))
}

/// The primitive generator of the ray through the unique point of τ lying
/// over `v`: with `π(wᵢ) = cᵢvᵢ` and `v = Σ aᵢvᵢ`, the lift is
/// `Σ (aᵢ/cᵢ) wᵢ`.
fn lift_into_face(fan: &Fan, tau: &Cone, v: &IntVec) -> IntVec {
    let pd = cobordism::pi_data(fan, tau).expect("pi data of a face");
    let projections: Vec<IntVec> = pd.iter().map(|d| d.v.clone()).collect();
    let coeffs = matrix::solve_columns(&projections, v)
        .expect("par point lies in the projected span");
    let rays = fan.cone_rays(tau);
    let rank = fan.ambient_rank();
    let mut lift = vec![BigRational::zero(); rank];
    for ((a, d), w) in coeffs.iter().zip(&pd).zip(&rays) {
        let scale = a / BigRational::from_integer(d.c.clone());
        for (slot, x) in lift.iter_mut().zip(w) {
            *slot += &scale * &BigRational::from_integer(x.clone());
        }
    }
    let integral = matrix::clear_denominators(&lift);
    lattice::primitive(&integral).expect("lift is nonzero").0
}

/// Deterministic sample of lattice points of the fan's support: random
/// nonnegative integer combinations of each maximal cone's rays.
pub fn support_points(rng: &mut impl Rng, fan: &Fan, per_cone: usize) -> Vec<IntVec> {
    let mut points = Vec::new();
    for sigma in fan.maximal_cones() {
        let rays = fan.cone_rays(sigma);
        for _ in 0..per_cone {
            let mut p = vec![BigInt::zero(); fan.ambient_rank()];
            for ray in &rays {
                let c = BigInt::from(rng.gen_range(0i64..=3));
                for (slot, x) in p.iter_mut().zip(ray) {
                    *slot += &c * x;
                }
            }
            points.push(p);
        }
    }
    points
}

/// Whether some maximal cone of the fan contains the point.
pub fn support_contains(fan: &Fan, point: &IntVec) -> bool {
    fan.maximal_cones()
        .iter()
        .any(|c| fan::cone_contains_point(&fan.cone_rays(c), point))
}

/// Smooth fan plus a face of dimension ≥ 2, for blowup round-trips.
pub fn random_blowup_instance(rng: &mut impl Rng, rank: usize) -> (Fan, Cone) {
    for _ in 0..ATTEMPTS {
        let fan = random_smooth_fan(rng, rank, 2);
        if let Some(center) = random_center(rng, &fan, 2) {
            return (fan, center);
        }
    }
    exhausted("a blowup instance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;

    #[test]
    fn generators_are_reproducible() {
        let fan_a = random_cobordism_fan(&mut rng(7), 2, 4, 10);
        let fan_b = random_cobordism_fan(&mut rng(7), 2, 4, 10);
        assert_eq!(fan_a.rays(), fan_b.rays());
        assert_eq!(fan_a.maximal_cones(), fan_b.maximal_cones());
        let fan_c = random_cobordism_fan(&mut rng(8), 2, 4, 10);
        assert!(fan_a.rays() != fan_c.rays() || fan_a.maximal_cones() != fan_c.maximal_cones());
    }

    #[test]
    fn cobordism_fans_validate() -> Result<()> {
        let mut r = rng(42);
        for _ in 0..20 {
            let n_rank = r.gen_range(2..=3);
            let fan = random_cobordism_fan(&mut r, n_rank, 4, 10);
            fan.validate(ValidateLevel::Full)?;
            assert!(fan.is_cobordism());
            assert!(fan.maximal_cones().len() <= 10);
        }
        Ok(())
    }

    #[test]
    fn mild_cobordism_fans_respect_their_bounds() {
        let mut r = rng(31);
        for i in 0..12 {
            let n_rank = 2 + i % 2;
            let fan = random_mild_cobordism_fan(&mut r, n_rank, 4, 10, 6);
            fan.validate(ValidateLevel::Full).unwrap();
            assert!(fan.maximal_cones().len() <= 10);
            assert!(fan
                .rays()
                .iter()
                .all(|ray| ray.iter().all(|x| x.abs() <= BigInt::from(4))));
            let profile = cobordism::fan_profile(&fan).unwrap();
            assert!(profile.g.mult <= BigInt::from(6));
        }
    }

    #[test]
    fn smooth_fans_are_smooth() {
        let mut r = rng(5);
        for _ in 0..20 {
            let rank = r.gen_range(2..=3);
            let fan = random_smooth_fan(&mut r, rank, 3);
            assert!(fan
                .maximal_cones()
                .iter()
                .all(|c| fan::is_smooth(&fan, c)));
            fan.validate(ValidateLevel::Full).unwrap();
        }
    }

    #[test]
    fn pi_dependent_cones_are_pi_dependent() {
        let mut r = rng(11);
        for _ in 0..20 {
            let rank = r.gen_range(2..=5);
            let dim = r.gen_range(2..=rank);
            let fan = random_pi_dependent_cone(&mut r, rank, dim, 4);
            assert_eq!(fan.maximal_cones().len(), 1);
            assert!(!cobordism::is_pi_independent(&fan, &fan.maximal_cones()[0]));
            // the unique relation exists
            cobordism::dependence_relation(&fan, &fan.maximal_cones()[0]).unwrap();
        }
    }

    #[test]
    fn independent_systems_are_independent() {
        let mut r = rng(3);
        for _ in 0..50 {
            let sys = random_independent_system(&mut r, 4, 5);
            assert_eq!(matrix::rank(&sys), sys.len());
        }
    }

    #[test]
    fn codefinite_triples_satisfy_their_contract() {
        let mut r = rng(23);
        for _ in 0..10 {
            let t = random_codefinite_triple(&mut r, 3);
            let top = &t.eta.maximal_cones()[0];
            assert!(cobordism::is_codefinite(&t.eta, &t.tau, top).unwrap());
            assert!(cobordism::is_pi_independent(&t.eta, &t.tau));
            // the lift projects onto the ray through nobody else: it lies in
            // the relative interior of τ, so its cone coordinates are all
            // positive
            let rays = t.eta.cone_rays(&t.tau);
            let coords = matrix::solve_columns(&rays, &t.lift).unwrap();
            assert!(coords.iter().all(|c| c > &BigRational::zero()));
            // and its projection is parallel to the par point
            let proj = project(&t.lift);
            let (prim, _) = lattice::primitive(&proj).unwrap();
            let (par_prim, _) = lattice::primitive(&t.par_point).unwrap();
            assert_eq!(prim, par_prim);
        }
    }

    #[test]
    fn blowup_instances_have_smooth_centers() {
        let mut r = rng(9);
        let (fan, center) = random_blowup_instance(&mut r, 3);
        assert!(center.dim() >= 2);
        assert!(fan::multiplicity(&fan, &center).is_one());
    }
}
