//! Structural properties of fans: validation levels, face closure, star
//! subdivision, and smooth resolution, on seeded random instances.

use num::{BigInt, One};
use torfac::fan::{
    cone_contains_point, is_smooth, make_fan, multiplicity, smooth_resolve, star_subdivide, Cone,
    ValidateLevel,
};
use torfac::sample::{self, support_contains, support_points};
use torfac::{Error, IntVec};

fn v(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn overlapping_cones_fail_only_full_validation() {
    // the two cones overlap in a two-dimensional wedge that is not a face
    let rays = [v(&[1, 0]), v(&[1, 1]), v(&[1, 2]), v(&[2, 1])];
    let cones = [vec![0, 1], vec![2, 3]];
    let light = make_fan(2, &rays, &cones, false, ValidateLevel::Light).unwrap();
    assert!(matches!(
        light.validate(ValidateLevel::Full),
        Err(Error::NotFaceToFace(_))
    ));
    assert!(matches!(
        make_fan(2, &rays, &cones, false, ValidateLevel::Full),
        Err(Error::NotFaceToFace(_))
    ));
}

#[test]
fn face_ray_intersections_are_faces() {
    let mut rng = sample::rng(101);
    for _ in 0..10 {
        let fan = sample::random_smooth_fan(&mut rng, 3, 3);
        let faces: Vec<Cone> = fan.all_faces().into_iter().collect();
        for a in &faces {
            for b in &faces {
                let shared: Vec<usize> = a
                    .ray_ids()
                    .iter()
                    .filter(|id| b.contains_ray(**id))
                    .copied()
                    .collect();
                assert!(fan.is_face(&Cone::new(shared)));
            }
        }
    }
}

#[test]
fn cone_by_rays_round_trips() {
    let mut rng = sample::rng(55);
    let fan = sample::random_smooth_fan(&mut rng, 3, 4);
    for face in fan.all_faces() {
        if face.is_empty() {
            continue;
        }
        let rays = fan.cone_rays(&face);
        assert_eq!(fan.cone_by_rays(&rays).unwrap(), face);
    }
}

#[test]
fn star_subdivision_preserves_support_and_refines() {
    let mut rng = sample::rng(7);
    for _ in 0..10 {
        let fan = sample::random_cobordism_fan(&mut rng, 2, 4, 6);
        // subdivide at the sum of a random maximal cone's rays
        let max = fan.maximal_cones();
        let sigma = &max[0];
        let rays = fan.cone_rays(sigma);
        let mut center = vec![BigInt::from(0); fan.ambient_rank()];
        for ray in &rays {
            for (slot, x) in center.iter_mut().zip(ray) {
                *slot += x;
            }
        }
        let sub = star_subdivide(&fan, &center).unwrap();
        sub.validate(ValidateLevel::Full).unwrap();

        // support is unchanged in both directions
        for p in support_points(&mut rng, &fan, 20) {
            assert!(support_contains(&sub, &p));
        }
        for p in support_points(&mut rng, &sub, 20) {
            assert!(support_contains(&fan, &p));
        }
        // every new maximal cone sits inside an old one
        for new_cone in sub.maximal_cones() {
            let new_rays = sub.cone_rays(new_cone);
            assert!(max.iter().any(|old| {
                let old_rays = fan.cone_rays(old);
                new_rays.iter().all(|r| cone_contains_point(&old_rays, r))
            }));
        }
        // interior subdivision of a d-cone replaces it by d children
        assert_eq!(
            sub.maximal_cones().len(),
            fan.maximal_cones().len() - 1 + sigma.dim()
        );
    }
}

#[test]
fn subdividing_at_an_existing_ray_is_a_no_op() {
    let fan = make_fan(
        2,
        &[v(&[1, 0]), v(&[0, 1])],
        &[vec![0, 1]],
        false,
        ValidateLevel::Full,
    )
    .unwrap();
    assert_eq!(star_subdivide(&fan, &v(&[1, 0])).unwrap(), fan);
    // outside the support is rejected
    assert!(matches!(
        star_subdivide(&fan, &v(&[-1, -1])),
        Err(Error::OutsideSupport)
    ));
}

#[test]
fn smooth_resolution_reaches_multiplicity_one() {
    let mut rng = sample::rng(19);
    for _ in 0..10 {
        // a random simplicial cone in N, usually singular
        let sys = sample::random_independent_system(&mut rng, 3, 4);
        let rank = sys[0].len();
        let cone: Vec<usize> = (0..sys.len()).collect();
        let Ok(fan) = make_fan(rank, &sys, &[cone], false, ValidateLevel::Full) else {
            continue;
        };
        let resolved = smooth_resolve(&fan).unwrap();
        resolved.validate(ValidateLevel::Full).unwrap();
        for cone in resolved.maximal_cones() {
            assert!(is_smooth(&resolved, cone));
            assert!(multiplicity(&resolved, cone).is_one());
        }
        for p in support_points(&mut rng, &fan, 30) {
            assert!(support_contains(&resolved, &p));
        }
        for p in support_points(&mut rng, &resolved, 30) {
            assert!(support_contains(&fan, &p));
        }
    }
}

#[test]
fn multiplicity_is_invariant_under_unimodular_maps() {
    let mut rng = sample::rng(91);
    for _ in 0..20 {
        let sys = sample::random_independent_system(&mut rng, 3, 4);
        let rank = sys[0].len();
        let cone: Vec<usize> = (0..sys.len()).collect();
        let Ok(fan) = make_fan(rank, &sys, &[cone], false, ValidateLevel::Full) else {
            continue;
        };
        // shear: add twice the first coordinate to the last
        let sheared: Vec<IntVec> = sys
            .iter()
            .map(|r| {
                let mut s = r.clone();
                let first = s[0].clone();
                let last = s.len() - 1;
                s[last] += BigInt::from(2) * first;
                s
            })
            .collect();
        let Ok(fan2) = make_fan(rank, &sheared, &[(0..sys.len()).collect()], false, ValidateLevel::Full)
        else {
            continue;
        };
        assert_eq!(
            multiplicity(&fan, &fan.maximal_cones()[0]),
            multiplicity(&fan2, &fan2.maximal_cones()[0])
        );
    }
}
