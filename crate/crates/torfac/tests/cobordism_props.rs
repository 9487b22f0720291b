//! Properties of the π-combinatorics on seeded random cones: the dependence
//! relation, face independence, π-multiplicity identities, boundary
//! extraction, and codefinite subdivisions.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Signed, Zero};
use torfac::cobordism::{
    boundaries, circuits, dependence_relation, fan_profile, is_circuit, is_pi_independent, nu,
    pi_multiplicity, pi_profile,
};
use torfac::fan::{make_fan, Cone, ValidateLevel};
use torfac::sample;
use torfac::IntVec;

fn ray_sets(fan: &torfac::fan::Fan, cones: &[Cone]) -> BTreeSet<Vec<IntVec>> {
    cones.iter().map(|c| fan.cone_rays(c)).collect()
}

#[test]
fn face_independence_matches_nonzero_coefficients() {
    // Lemma (i): the facet opposite ray i is π-independent iff rᵢ ≠ 0
    let mut rng = sample::rng(1001);
    for _ in 0..120 {
        let rank = 3 + (rand_usize(&mut rng) % 3); // 3..=5
        let dim = 2 + (rand_usize(&mut rng) % (rank - 1));
        let fan = sample::random_pi_dependent_cone(&mut rng, rank, dim, 4);
        let eta = fan.maximal_cones()[0].clone();
        let rel = dependence_relation(&fan, &eta).unwrap();
        for (i, id) in eta.ray_ids().iter().enumerate() {
            let facet = eta.without_ray(*id);
            assert_eq!(
                is_pi_independent(&fan, &facet),
                !rel.r[i].is_zero(),
                "facet {i} of {:?}",
                fan.cone_rays(&eta)
            );
        }
    }
}

fn rand_usize(rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    rng.gen_range(0..usize::MAX)
}

#[test]
fn multiplicity_ratios_follow_the_relation() {
    // Lemma (ii): |r_j|·π-mult(η_i) = |r_i|·π-mult(η_j) for π-independent
    // facets η_i, η_j
    let mut rng = sample::rng(2002);
    for _ in 0..120 {
        let rank = 3 + (rand_usize(&mut rng) % 3);
        let dim = 2 + (rand_usize(&mut rng) % (rank - 1));
        let fan = sample::random_pi_dependent_cone(&mut rng, rank, dim, 4);
        let eta = fan.maximal_cones()[0].clone();
        let rel = dependence_relation(&fan, &eta).unwrap();
        let ids = eta.ray_ids().to_vec();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                if rel.r[i].is_zero() || rel.r[j].is_zero() {
                    continue;
                }
                let mult_i = pi_multiplicity(&fan, &eta.without_ray(ids[i])).unwrap();
                let mult_j = pi_multiplicity(&fan, &eta.without_ray(ids[j])).unwrap();
                let lhs = rel.r[j].abs() * BigRational::from_integer(mult_i);
                let rhs = rel.r[i].abs() * BigRational::from_integer(mult_j);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn relation_is_normalized_and_oriented() {
    let mut rng = sample::rng(31);
    for _ in 0..80 {
        let rank = 3 + (rand_usize(&mut rng) % 3);
        let dim = 2 + (rand_usize(&mut rng) % (rank - 1));
        let fan = sample::random_pi_dependent_cone(&mut rng, rank, dim, 4);
        let eta = &fan.maximal_cones()[0];
        let rel = dependence_relation(&fan, eta).unwrap();
        // max |r_i| = 1
        let max = rel.r.iter().map(|x| x.abs()).max().unwrap();
        assert_eq!(max, BigRational::from_integer(BigInt::from(1)));
        // Σ r_i v_i = 0 on the primitive projections, positive height Σ r_i w_i
        let rank_n = fan.ambient_rank() - 1;
        let mut sum = vec![BigRational::zero(); rank_n];
        let mut height = BigRational::zero();
        for (r, data) in rel.r.iter().zip(&rel.ray_pi) {
            for (slot, x) in sum.iter_mut().zip(&data.v) {
                *slot += r * BigRational::from_integer(x.clone());
            }
            height += r * &data.w;
        }
        assert!(sum.iter().all(|x| x.is_zero()));
        assert!(height.is_positive());
        // index sets match the signs
        for (i, r) in rel.r.iter().enumerate() {
            assert_eq!(rel.i_pos.contains(&i), r.is_positive());
            assert_eq!(rel.i_neg.contains(&i), r.is_negative());
        }
    }
}

#[test]
fn single_cone_boundaries_match_the_relation_signs() {
    // for one full-dimensional cone, the upper facets drop a ray with
    // positive coefficient and the lower facets one with negative
    let mut rng = sample::rng(77);
    for _ in 0..60 {
        let rank = 3 + (rand_usize(&mut rng) % 2);
        let fan = sample::random_full_dim_pi_dependent_cone(&mut rng, rank, 4);
        let eta = fan.maximal_cones()[0].clone();
        let rel = dependence_relation(&fan, &eta).unwrap();
        let (lower, upper) = boundaries(&fan).unwrap();
        let expect = |positive: bool| -> Vec<Cone> {
            eta.ray_ids()
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    if positive {
                        rel.r[*i].is_positive()
                    } else {
                        rel.r[*i].is_negative()
                    }
                })
                .map(|(_, id)| eta.without_ray(*id))
                .collect()
        };
        assert_eq!(ray_sets(&fan, &lower), ray_sets(&fan, &expect(false)));
        assert_eq!(ray_sets(&fan, &upper), ray_sets(&fan, &expect(true)));
    }
}

#[test]
fn boundaries_match_the_dual_basis_sign_rule() {
    // independent oracle: express ν in the ray basis of a full-dimensional
    // cone; the facet opposite ray j is upper iff the coefficient is
    // positive, lower iff negative
    let mut rng = sample::rng(88);
    for _ in 0..60 {
        let rank = 3 + (rand_usize(&mut rng) % 2);
        let fan = sample::random_full_dim_pi_dependent_cone(&mut rng, rank, 4);
        let eta = fan.maximal_cones()[0].clone();
        let rays = fan.cone_rays(&eta);
        let t = solve_in_basis(&rays, &nu(rank));
        let (lower, upper) = boundaries(&fan).unwrap();
        let upper_sets = ray_sets(&fan, &upper);
        let lower_sets = ray_sets(&fan, &lower);
        for (j, id) in eta.ray_ids().iter().enumerate() {
            let facet = fan.cone_rays(&eta.without_ray(*id));
            assert_eq!(upper_sets.contains(&facet), t[j].is_positive());
            assert_eq!(lower_sets.contains(&facet), t[j].is_negative());
        }
    }
}

/// Cramer-style solve of Σ xⱼ basisⱼ = target for a square basis, written
/// out here so the test does not share code with the library.
fn solve_in_basis(basis: &[IntVec], target: &IntVec) -> Vec<BigRational> {
    let n = basis.len();
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from_integer(b[i].clone()))
                .collect();
            row.push(BigRational::from_integer(target[i].clone()));
            row
        })
        .collect();
    // Gaussian elimination with exact arithmetic
    for c in 0..n {
        let pivot = (c..n).find(|&r| !rows[r][c].is_zero()).expect("basis is invertible");
        rows.swap(c, pivot);
        let p = rows[c][c].clone();
        for x in rows[c].iter_mut() {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != c && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for j in 0..=n {
                    let sub = &f * &rows[c][j];
                    rows[r][j] -= sub;
                }
            }
        }
    }
    (0..n).map(|i| rows[i][n].clone()).collect()
}

#[test]
fn profiles_are_invariant_under_height_shears() {
    // automorphisms of (N⁺, ν) are a unimodular map on N plus a shear of
    // the height by an N-functional; they preserve every π-invariant
    let mut rng = sample::rng(404);
    for _ in 0..40 {
        let rank = 3 + (rand_usize(&mut rng) % 2);
        let dim = 2 + (rand_usize(&mut rng) % (rank - 1));
        let fan = sample::random_pi_dependent_cone(&mut rng, rank, dim, 3);
        let eta = fan.maximal_cones()[0].clone();
        let rays = fan.cone_rays(&eta);
        let n = rank - 1;
        // (x_N, h) ↦ (x₁ + 2x₂, x₂, …, x_n, h + x₁ − x₂)
        let mapped: Vec<IntVec> = rays
            .iter()
            .map(|r| {
                let mut m = r.clone();
                let second = m[1].clone();
                m[0] += BigInt::from(2) * second;
                let shear = &m[0] - &m[1];
                m[n] += shear;
                m
            })
            .collect();
        let fan2 = make_fan(
            rank,
            &mapped,
            &[(0..rays.len()).collect()],
            true,
            ValidateLevel::Full,
        )
        .expect("the shear preserves cobordism validity");
        let eta2 = fan2.maximal_cones()[0].clone();
        assert_eq!(
            pi_profile(&fan, &eta).unwrap(),
            pi_profile(&fan2, &eta2).unwrap()
        );
        assert_eq!(fan_profile(&fan).unwrap(), fan_profile(&fan2).unwrap());
    }
}

#[test]
fn circuits_are_minimal_pi_dependent_faces() {
    let mut rng = sample::rng(313);
    for _ in 0..40 {
        let fan = sample::random_cobordism_fan(&mut rng, 2, 4, 8);
        let found = circuits(&fan).unwrap();
        for circuit in &found {
            assert!(is_circuit(&fan, circuit));
            // every proper facet is π-independent
            for id in circuit.ray_ids() {
                assert!(is_pi_independent(&fan, &circuit.without_ray(*id)));
            }
        }
        // every π-dependent maximal cone contains exactly one listed circuit
        for sigma in fan.maximal_cones() {
            if is_pi_independent(&fan, sigma) {
                continue;
            }
            let inside: Vec<&Cone> =
                found.iter().filter(|c| sigma.contains_cone(c)).collect();
            assert_eq!(inside.len(), 1, "cone {:?}", fan.cone_rays(sigma));
        }
    }
}
