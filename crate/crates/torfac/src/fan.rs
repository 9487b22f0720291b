//! Simplicial rational fans: cones, faces, stars, star subdivisions,
//! multiplicities, and smooth resolution.
//!
//! A [`Fan`] stores only its maximal cones; faces are materialized on
//! demand. Construction always canonicalizes: rays are primitivized,
//! deduplicated and sorted, unused rays are dropped, duplicate and subsumed
//! maximal cones are removed, and cone lists are sorted. Two fans are equal
//! exactly when their canonical forms coincide, which also makes serialized
//! output byte-stable.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice;
use crate::matrix;
use crate::{IntVec, RatVec};

/// A simplicial cone of a [`Fan`], stored as sorted indices into the fan's
/// ray table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ray_ids: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_ids: Vec<usize>) -> Self {
        ray_ids.sort_unstable();
        ray_ids.dedup();
        Cone { ray_ids }
    }

    pub fn ray_ids(&self) -> &[usize] {
        &self.ray_ids
    }

    /// Dimension of the cone (= number of rays, by simpliciality).
    pub fn dim(&self) -> usize {
        self.ray_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ray_ids.is_empty()
    }

    pub fn contains_ray(&self, id: usize) -> bool {
        self.ray_ids.binary_search(&id).is_ok()
    }

    /// True when every ray of `other` is a ray of `self`.
    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.ray_ids.iter().all(|id| self.contains_ray(*id))
    }

    /// The face obtained by dropping one ray.
    pub fn without_ray(&self, id: usize) -> Cone {
        Cone::new(self.ray_ids.iter().copied().filter(|&r| r != id).collect())
    }
}

/// How much validation [`make_fan`] / [`Fan::validate`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidateLevel {
    /// Simpliciality, primitivity, and (for cobordism fans) ray checks.
    Light,
    /// Light checks plus the pairwise face-to-face condition, decided by
    /// exact rational feasibility. Superlinear; meant for untrusted input.
    Full,
}

/// A simplicial rational fan, optionally flagged as a cobordism fan (ambient
/// lattice `N⁺ = N ⊕ Z`, last coordinate the vertical direction ν).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<IntVec>,
    maximal_cones: Vec<Cone>,
    is_cobordism: bool,
}

/// Builds a fan from a ray table and maximal cones given as index lists.
///
/// Rays are normalized to primitive form; duplicate and subsumed maximal
/// cones are removed. With [`ValidateLevel::Full`] the pairwise
/// face-to-face condition is also checked.
pub fn make_fan(
    ambient_rank: usize,
    rays: &[IntVec],
    maximal_cones: &[Vec<usize>],
    is_cobordism: bool,
    level: ValidateLevel,
) -> Result<Fan> {
    for r in rays {
        if r.len() != ambient_rank {
            return Err(Error::Invalid(format!(
                "ray {r:?} does not have ambient rank {ambient_rank}"
            )));
        }
    }
    let mut cone_vectors = Vec::with_capacity(maximal_cones.len());
    for cone in maximal_cones {
        let mut vs = Vec::with_capacity(cone.len());
        for &i in cone {
            let ray = rays.get(i).ok_or_else(|| {
                Error::Invalid(format!("cone ray index {i} out of range ({} rays)", rays.len()))
            })?;
            vs.push(ray.clone());
        }
        cone_vectors.push(vs);
    }
    let fan = Fan::assemble(ambient_rank, cone_vectors, is_cobordism)?;
    if level == ValidateLevel::Full {
        fan.check_face_to_face()?;
    }
    Ok(fan)
}

impl Fan {
    /// Canonicalizing constructor from per-cone ray vector lists. Runs the
    /// light validation.
    pub(crate) fn assemble(
        ambient_rank: usize,
        cone_vectors: Vec<Vec<IntVec>>,
        is_cobordism: bool,
    ) -> Result<Fan> {
        // primitivize and collect the ray table
        let mut table: BTreeSet<IntVec> = BTreeSet::new();
        let mut prim_cones: Vec<Vec<IntVec>> = Vec::with_capacity(cone_vectors.len());
        for cone in cone_vectors {
            let mut prim: Vec<IntVec> = Vec::with_capacity(cone.len());
            for v in &cone {
                let (p, _) = lattice::primitive(v)?;
                if !prim.contains(&p) {
                    prim.push(p);
                }
            }
            for p in &prim {
                table.insert(p.clone());
            }
            prim_cones.push(prim);
        }
        let rays: Vec<IntVec> = table.into_iter().collect();
        let mut cones: Vec<Cone> = prim_cones
            .iter()
            .map(|vs| {
                Cone::new(
                    vs.iter()
                        .map(|v| rays.binary_search(v).expect("ray interned above"))
                        .collect(),
                )
            })
            .collect();
        cones.sort();
        cones.dedup();
        // absorb cones whose ray set is contained in another cone's
        let absorbed: Vec<Cone> = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d != *c && d.contains_cone(c)))
            .cloned()
            .collect();
        // drop rays that no surviving cone uses, remapping indices
        let used: BTreeSet<usize> = absorbed.iter().flat_map(|c| c.ray_ids.iter().copied()).collect();
        let (rays, cones) = if used.len() == rays.len() {
            (rays, absorbed)
        } else {
            let keep: Vec<usize> = used.into_iter().collect();
            let new_rays: Vec<IntVec> = keep.iter().map(|&i| rays[i].clone()).collect();
            let remap = |old: usize| keep.binary_search(&old).expect("used ray");
            let new_cones = absorbed
                .into_iter()
                .map(|c| Cone::new(c.ray_ids.iter().map(|&i| remap(i)).collect()))
                .collect();
            (new_rays, new_cones)
        };
        let fan = Fan { ambient_rank, rays, maximal_cones: cones, is_cobordism };
        fan.validate(ValidateLevel::Light)?;
        Ok(fan)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn ray(&self, id: usize) -> &IntVec {
        &self.rays[id]
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    pub fn is_cobordism(&self) -> bool {
        self.is_cobordism
    }

    /// Ray vectors of a cone, in ray-table order.
    pub fn cone_rays(&self, cone: &Cone) -> Vec<IntVec> {
        cone.ray_ids.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Re-validates the fan invariants at the requested level.
    pub fn validate(&self, level: ValidateLevel) -> Result<()> {
        for cone in &self.maximal_cones {
            let rays = self.cone_rays(cone);
            if matrix::rank(&rays) != rays.len() {
                return Err(Error::NonSimplicialCone(format!("rays {rays:?}")));
            }
            if cone.dim() > self.ambient_rank {
                return Err(Error::NonSimplicialCone(format!(
                    "cone of dimension {} in rank {}",
                    cone.dim(),
                    self.ambient_rank
                )));
            }
        }
        if self.is_cobordism {
            if self.ambient_rank == 0 {
                return Err(Error::Invalid("cobordism fan needs positive rank".into()));
            }
            for ray in &self.rays {
                if ray[..self.ambient_rank - 1].iter().all(|x| x.is_zero()) {
                    return Err(Error::VerticalRay(format!("{ray:?}")));
                }
            }
            let mut nu = vec![BigInt::zero(); self.ambient_rank];
            nu[self.ambient_rank - 1] = BigInt::one();
            let neg_nu: IntVec = nu.iter().map(|x| -x.clone()).collect();
            for cone in &self.maximal_cones {
                let rays = self.cone_rays(cone);
                if cone_contains_point(&rays, &nu) || cone_contains_point(&rays, &neg_nu) {
                    return Err(Error::NotPiStrictlyConvex(format!("cone {rays:?}")));
                }
            }
        }
        if level == ValidateLevel::Full {
            self.check_face_to_face()?;
        }
        Ok(())
    }

    /// All nonempty faces of all maximal cones (the zero cone is omitted).
    pub fn all_faces(&self) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        for cone in &self.maximal_cones {
            let ids = &cone.ray_ids;
            let k = ids.len();
            for mask in 1u64..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| ids[i]).collect();
                out.insert(Cone::new(sub));
            }
        }
        out
    }

    /// True when the given rays span a face of some cone of the fan.
    pub fn is_face(&self, cone: &Cone) -> bool {
        if cone.ray_ids.iter().any(|&i| i >= self.rays.len()) {
            return false;
        }
        self.maximal_cones.iter().any(|m| m.contains_cone(cone))
    }

    /// Looks up the face spanned by the given ray vectors.
    pub fn cone_by_rays(&self, rays: &[IntVec]) -> Result<Cone> {
        let mut ids = Vec::with_capacity(rays.len());
        for v in rays {
            let (p, _) = lattice::primitive(v)?;
            let id = self.rays.binary_search(&p).map_err(|_| Error::NotAFace)?;
            ids.push(id);
        }
        let cone = Cone::new(ids);
        if self.is_face(&cone) {
            Ok(cone)
        } else {
            Err(Error::NotAFace)
        }
    }

    fn check_face_to_face(&self) -> Result<()> {
        for (i, a) in self.maximal_cones.iter().enumerate() {
            for b in self.maximal_cones.iter().skip(i + 1) {
                let common: Vec<IntVec> = a
                    .ray_ids
                    .iter()
                    .filter(|id| b.contains_ray(**id))
                    .map(|&id| self.rays[id].clone())
                    .collect();
                let inter = cone_intersection_rays(
                    &self.cone_rays(a),
                    &self.cone_rays(b),
                    self.ambient_rank,
                );
                let inter_set: BTreeSet<IntVec> = inter.into_iter().collect();
                let common_set: BTreeSet<IntVec> = common.into_iter().collect();
                if inter_set != common_set {
                    return Err(Error::NotFaceToFace(format!(
                        "cones {:?} and {:?} meet in {:?}, common rays {:?}",
                        self.cone_rays(a),
                        self.cone_rays(b),
                        inter_set,
                        common_set
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Exact membership test `p ∈ cone(rays)` for a simplicial ray list.
pub fn cone_contains_point(rays: &[IntVec], p: &IntVec) -> bool {
    match matrix::solve_columns(rays, p) {
        None => false,
        Some(coords) => coords.iter().all(|c| !c.is_negative()),
    }
}

/// Coordinates of `p` in the (independent) ray basis, if `p` lies in the
/// linear span.
pub(crate) fn coords_in_rays(rays: &[IntVec], p: &IntVec) -> Option<RatVec> {
    matrix::solve_columns(rays, p)
}

/// Multiplicity of the sublattice spanned by the cone's rays inside its
/// saturation; 1 for the empty cone; the cone is smooth iff this is 1.
pub fn multiplicity(fan: &Fan, cone: &Cone) -> BigInt {
    multiplicity_of_rays(&fan.cone_rays(cone))
}

pub(crate) fn multiplicity_of_rays(rays: &[IntVec]) -> BigInt {
    if rays.is_empty() {
        return BigInt::one();
    }
    lattice::lattice_index(rays).expect("cone rays are independent")
}

pub fn is_smooth(fan: &Fan, cone: &Cone) -> bool {
    multiplicity(fan, cone).is_one()
}

/// All cones of the fan containing σ (faces of maximal cones included).
pub fn open_star(fan: &Fan, sigma: &Cone) -> Result<Vec<Cone>> {
    if !fan.is_face(sigma) {
        return Err(Error::NotAFace);
    }
    let mut out = BTreeSet::new();
    for max in fan.maximal_cones() {
        if !max.contains_cone(sigma) {
            continue;
        }
        let extra: Vec<usize> =
            max.ray_ids().iter().copied().filter(|id| !sigma.contains_ray(*id)).collect();
        let k = extra.len();
        for mask in 0u64..(1 << k) {
            let mut ids = sigma.ray_ids().to_vec();
            ids.extend((0..k).filter(|&i| mask & (1 << i) != 0).map(|i| extra[i]));
            out.insert(Cone::new(ids));
        }
    }
    Ok(out.into_iter().collect())
}

/// The closed star of σ: the sub-fan of all faces of cones containing σ.
pub fn closed_star(fan: &Fan, sigma: &Cone) -> Result<Fan> {
    if !fan.is_face(sigma) {
        return Err(Error::NotAFace);
    }
    let cones: Vec<Vec<IntVec>> = fan
        .maximal_cones()
        .iter()
        .filter(|m| m.contains_cone(sigma))
        .map(|m| fan.cone_rays(m))
        .collect();
    Fan::assemble(fan.ambient_rank(), cones, fan.is_cobordism())
}

/// Star subdivision of the fan at a primitive lattice point of its support.
///
/// Every cone containing ρ is replaced by the cones ⟨ρ, γ⟩ over the faces γ
/// not containing ρ; all other cones survive verbatim. Subdividing at an
/// existing ray is the identity.
pub fn star_subdivide(fan: &Fan, rho: &IntVec) -> Result<Fan> {
    let (rho, _) = lattice::primitive(rho)?;
    let mut found = false;
    let mut cones: Vec<Vec<IntVec>> = Vec::new();
    for max in fan.maximal_cones() {
        let rays = fan.cone_rays(max);
        let coords = match coords_in_rays(&rays, &rho) {
            Some(c) if c.iter().all(|x| !x.is_negative()) => c,
            _ => {
                cones.push(rays);
                continue;
            }
        };
        found = true;
        // children drop one ray from the support of ρ in this cone
        for (j, cj) in coords.iter().enumerate() {
            if cj.is_positive() {
                let mut child: Vec<IntVec> =
                    rays.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, r)| r.clone()).collect();
                child.push(rho.clone());
                cones.push(child);
            }
        }
    }
    if !found {
        return Err(Error::OutsideSupport);
    }
    Fan::assemble(fan.ambient_rank(), cones, fan.is_cobordism())
}

/// Resolves all cone multiplicities by star subdivisions: repeatedly picks a
/// singular face of minimal dimension (lexicographic tie-break on its ray
/// vectors) and subdivides at the lexicographically least interior
/// parallelepiped point. Multiplicities strictly decrease along each
/// subdivision, so this terminates; the cap is a safety net.
pub fn smooth_resolve(fan: &Fan) -> Result<Fan> {
    const CAP: usize = 100_000;
    let mut fan = fan.clone();
    for _ in 0..CAP {
        let mut worst: Option<(usize, Vec<IntVec>)> = None;
        for face in fan.all_faces() {
            let rays = fan.cone_rays(&face);
            if multiplicity_of_rays(&rays).is_one() {
                continue;
            }
            let key = (rays.len(), rays);
            if worst.as_ref().map_or(true, |w| key < *w) {
                worst = Some(key);
            }
        }
        let Some((_, rays)) = worst else {
            return Ok(fan);
        };
        let par = lattice::enumerate_parallelepiped(&rays)?;
        let v = par.first().ok_or_else(|| {
            Error::InternalInvariant("singular face of minimal dimension has empty open parallelepiped".into())
        })?;
        fan = star_subdivide(&fan, v)?;
    }
    Err(Error::IterationCapExceeded(CAP))
}

/// Extreme rays of the intersection of two simplicial cones, as primitive
/// vectors. Exact: combines both H-representations and enumerates candidate
/// rays on (d−1)-subsets of the inequalities.
fn cone_intersection_rays(a: &[IntVec], b: &[IntVec], n: usize) -> Vec<IntVec> {
    let mut equalities: Vec<IntVec> = Vec::new();
    equalities.extend(matrix::integer_kernel(a, n));
    equalities.extend(matrix::integer_kernel(b, n));
    let mut inequalities: Vec<RatVec> = Vec::new();
    for (rays, _other) in [(a, b), (b, a)] {
        for i in 0..rays.len() {
            // functional that is δ_ij on the rays (any extension off the span
            // works because the span equalities are imposed separately)
            let mut unit = vec![BigInt::zero(); rays.len()];
            unit[i] = BigInt::one();
            let phi = solve_functional(rays, &unit, n);
            inequalities.push(phi);
        }
    }
    let eq_rank = matrix::rank(&equalities);
    let d = n - eq_rank;
    if d == 0 {
        return Vec::new();
    }
    let mut found: BTreeSet<IntVec> = BTreeSet::new();
    let m = inequalities.len();
    let subset_size = d - 1;
    matrix::for_each_combination(m, subset_size, |subset| {
        // solve: equalities = 0, selected inequalities = 0
        let mut rows: Vec<RatVec> = equalities.iter().map(|e| matrix::rat_vec(e)).collect();
        for &s in subset {
            rows.push(inequalities[s].clone());
        }
        let pivots = matrix::rref(&mut rows);
        if pivots.len() == n - 1 {
            // one-dimensional solution space: build its generator
            let free: usize = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
            let mut w: RatVec = vec![BigRational::zero(); n];
            w[free] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                w[p] = -rows[r][free].clone();
            }
            // clear denominators, primitivize
            let mut denom = BigInt::one();
            for q in &w {
                denom = num::Integer::lcm(&denom, q.denom());
            }
            let wi: IntVec = w.iter().map(|q| (q * matrix::to_rat(&denom)).to_integer()).collect();
            if let Ok((p, _)) = lattice::primitive(&wi) {
                for cand in [p.clone(), p.iter().map(|x| -x.clone()).collect::<IntVec>()] {
                    let ok_eq = equalities.iter().all(|e| lattice::dot(e, &cand).is_zero());
                    let ok_ineq = inequalities
                        .iter()
                        .all(|phi| !lattice::dot_rat(phi, &cand).is_negative());
                    if ok_eq && ok_ineq {
                        found.insert(cand);
                    }
                }
            }
        }
        true
    });
    found.into_iter().collect()
}

/// Any rational functional φ with `⟨φ, rays[i]⟩ = unit[i]` for all i.
fn solve_functional(rays: &[IntVec], unit: &[BigInt], n: usize) -> RatVec {
    // rref on [rays | unit] over the unknown φ ∈ Q^n
    let mut rows: Vec<RatVec> = rays
        .iter()
        .zip(unit)
        .map(|(r, u)| {
            let mut row = matrix::rat_vec(r);
            row.push(matrix::to_rat(u));
            row
        })
        .collect();
    let pivots = matrix::rref(&mut rows);
    let mut phi = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        debug_assert!(c < n, "inconsistent functional system");
        phi[c] = rows[r][n].clone();
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::big;

    fn v(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| big(x)).collect()
    }

    fn fan2(rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        let rays: Vec<IntVec> = rays.iter().map(|r| v(r)).collect();
        let cones: Vec<Vec<usize>> = cones.iter().map(|c| c.to_vec()).collect();
        make_fan(rays[0].len(), &rays, &cones, false, ValidateLevel::Full).unwrap()
    }

    #[test]
    fn make_fan_normalizes_rays_and_cones() {
        let fan = make_fan(
            2,
            &[v(&[2, 0]), v(&[0, 3]), v(&[0, 3])],
            &[vec![0, 1], vec![1, 2], vec![1]],
            false,
            ValidateLevel::Full,
        )
        .unwrap();
        assert_eq!(fan.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(fan.maximal_cones().len(), 1);
        assert_eq!(fan.maximal_cones()[0].ray_ids(), &[0, 1]);
    }

    #[test]
    fn cobordism_validation_rejects_vertical_rays() {
        let err = make_fan(
            3,
            &[v(&[1, 0, 0]), v(&[0, 0, 1])],
            &[vec![0, 1]],
            true,
            ValidateLevel::Light,
        )
        .unwrap_err();
        assert!(matches!(err, Error::VerticalRay(_)));

        // E1 is a valid cobordism cone
        let fan = make_fan(
            3,
            &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 1])],
            &[vec![0, 1, 2]],
            true,
            ValidateLevel::Full,
        );
        assert!(fan.is_ok());

        // a cone containing ±ν is not π-strictly convex
        let err = make_fan(
            2,
            &[v(&[1, 1]), v(&[-1, 1])],
            &[vec![0, 1]],
            true,
            ValidateLevel::Light,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotPiStrictlyConvex(_)));
    }

    #[test]
    fn multiplicity_examples() {
        let a2 = fan2(&[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert!(is_smooth(&a2, &a2.maximal_cones()[0]));

        let singular = fan2(&[&[1, 0], &[1, 2]], &[&[0, 1]]);
        assert_eq!(multiplicity(&singular, &singular.maximal_cones()[0]), big(2));

        let conifold = fan2(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]], &[&[0, 1, 2]]);
        assert_eq!(multiplicity(&conifold, &conifold.maximal_cones()[0]), big(2));
    }

    #[test]
    fn stars_of_the_blowup_fan() {
        let bl = fan2(&[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[1, 2]]);
        let diag = bl.cone_by_rays(&[v(&[1, 1])]).unwrap();
        let star = open_star(&bl, &diag).unwrap();
        assert_eq!(star.len(), 3);
        let closed = closed_star(&bl, &diag).unwrap();
        assert_eq!(closed, bl);

        let e1 = bl.cone_by_rays(&[v(&[1, 0])]).unwrap();
        let star = open_star(&bl, &e1).unwrap();
        assert_eq!(star.len(), 2);
        let closed = closed_star(&bl, &e1).unwrap();
        assert_eq!(closed.maximal_cones().len(), 1);

        assert!(bl.cone_by_rays(&[v(&[1, 0]), v(&[0, 1])]).is_err());
    }

    #[test]
    fn star_subdivision_of_the_plane() {
        let a2 = fan2(&[&[1, 0], &[0, 1]], &[&[0, 1]]);
        let bl = star_subdivide(&a2, &v(&[1, 1])).unwrap();
        assert_eq!(bl.rays(), &[v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(bl.maximal_cones().len(), 2);
        // subdividing at an existing ray is the identity
        assert_eq!(star_subdivide(&bl, &v(&[1, 1])).unwrap(), bl);
        // outside the support
        assert!(matches!(star_subdivide(&a2, &v(&[-1, 0])), Err(Error::OutsideSupport)));
    }

    #[test]
    fn star_subdivision_of_e1_interior_point() {
        let e1 = make_fan(
            3,
            &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 1])],
            &[vec![0, 1, 2]],
            true,
            ValidateLevel::Full,
        )
        .unwrap();
        let sub = star_subdivide(&e1, &v(&[2, 2, 1])).unwrap();
        assert_eq!(sub.maximal_cones().len(), 3);
        assert!(sub.rays().contains(&v(&[2, 2, 1])));
        for cone in sub.maximal_cones() {
            assert_eq!(cone.dim(), 3);
            assert!(cone.ray_ids().iter().any(|&i| sub.ray(i) == &v(&[2, 2, 1])));
        }
        sub.validate(ValidateLevel::Full).unwrap();
    }

    #[test]
    fn smooth_resolve_splits_singular_cones() {
        let singular = fan2(&[&[1, 0], &[1, 2]], &[&[0, 1]]);
        let resolved = smooth_resolve(&singular).unwrap();
        assert_eq!(resolved.rays(), &[v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]);
        assert_eq!(resolved.maximal_cones().len(), 2);
        for cone in resolved.maximal_cones() {
            assert!(is_smooth(&resolved, cone));
        }

        let conifold = fan2(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]], &[&[0, 1, 2]]);
        let resolved = smooth_resolve(&conifold).unwrap();
        for cone in resolved.maximal_cones() {
            assert!(is_smooth(&resolved, cone));
        }
        resolved.validate(ValidateLevel::Full).unwrap();

        let a2 = fan2(&[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert_eq!(smooth_resolve(&a2).unwrap(), a2);
    }

    #[test]
    fn face_to_face_violations_are_detected() {
        // ⟨e1, e1+2e2⟩ and ⟨e1+e2, e2⟩ overlap without sharing a face
        let bad = make_fan(
            2,
            &[v(&[1, 0]), v(&[1, 2]), v(&[1, 1]), v(&[0, 1])],
            &[vec![0, 1], vec![2, 3]],
            false,
            ValidateLevel::Full,
        );
        assert!(matches!(bad, Err(Error::NotFaceToFace(_))));
    }
}
