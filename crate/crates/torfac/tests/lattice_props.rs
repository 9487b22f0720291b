//! Properties of the exact lattice helpers, checked against small
//! self-contained oracles (explicit determinant formulas, literal point
//! enumeration).

use num::{BigInt, One, Signed, Zero};
use proptest::prelude::*;
use torfac::lattice::{content, enumerate_parallelepiped, lattice_index, primitive};
use torfac::{Error, IntVec};

fn v(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn det2(m: &[IntVec]) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn det3(m: &[IntVec]) -> BigInt {
    // cyclic cofactor expansion along the first row
    let mut total = BigInt::zero();
    for j in 0..3 {
        let minor = &m[1][(j + 1) % 3] * &m[2][(j + 2) % 3]
            - &m[1][(j + 2) % 3] * &m[2][(j + 1) % 3];
        total += &m[0][j] * minor;
    }
    total
}

proptest! {
    #[test]
    fn content_and_primitive_factor_the_vector(xs in prop::collection::vec(-50i64..=50, 1..6)) {
        let vec = v(&xs);
        if vec.iter().all(|x| x.is_zero()) {
            prop_assert!(matches!(primitive(&vec), Err(Error::ZeroVector)));
        } else {
            let (prim, c) = primitive(&vec).unwrap();
            prop_assert_eq!(c.clone(), content(&vec));
            prop_assert!(c.is_positive());
            prop_assert!(content(&prim).is_one());
            let scaled: IntVec = prim.iter().map(|x| x * &c).collect();
            prop_assert_eq!(scaled, vec);
        }
    }

    #[test]
    fn index_of_a_square_system_is_the_determinant(entries in prop::collection::vec(-6i64..=6, 4)) {
        let m = vec![v(&entries[..2]), v(&entries[2..])];
        let d = det2(&m);
        if d.is_zero() {
            prop_assert!(matches!(lattice_index(&m), Err(Error::DependentInput)));
        } else {
            prop_assert_eq!(lattice_index(&m).unwrap(), d.abs());
        }
    }

    #[test]
    fn index_of_a_3x3_system_is_the_determinant(entries in prop::collection::vec(-4i64..=4, 9)) {
        let m = vec![v(&entries[..3]), v(&entries[3..6]), v(&entries[6..])];
        let d = det3(&m);
        if d.is_zero() {
            prop_assert!(matches!(lattice_index(&m), Err(Error::DependentInput)));
        } else {
            prop_assert_eq!(lattice_index(&m).unwrap(), d.abs());
        }
    }

    #[test]
    fn index_of_one_vector_is_its_content(xs in prop::collection::vec(-20i64..=20, 1..5)) {
        let vec = v(&xs);
        if vec.iter().all(|x| x.is_zero()) {
            prop_assert!(lattice_index(&[vec]).is_err());
        } else {
            prop_assert_eq!(lattice_index(&[vec.clone()]).unwrap(), content(&vec));
        }
    }

    #[test]
    fn index_is_invariant_under_elementary_operations(
        entries in prop::collection::vec(-5i64..=5, 6),
        c in -3i64..=3,
    ) {
        let m = vec![v(&entries[..3]), v(&entries[3..])];
        let Ok(index) = lattice_index(&m) else { return Ok(()) };
        // swapping rows and adding a multiple of one row to the other are
        // basis changes of the spanned lattice
        let swapped = vec![m[1].clone(), m[0].clone()];
        prop_assert_eq!(lattice_index(&swapped).unwrap(), index.clone());
        let sheared = vec![
            m[0].iter().zip(&m[1]).map(|(a, b)| a + BigInt::from(c) * b).collect::<IntVec>(),
            m[1].clone(),
        ];
        prop_assert_eq!(lattice_index(&sheared).unwrap(), index);
    }

    #[test]
    fn parallelepiped_points_are_permutation_invariant(entries in prop::collection::vec(-4i64..=4, 6)) {
        let m = vec![v(&entries[..2]), v(&entries[2..4]), v(&entries[4..])];
        let (Ok(a), Ok(b)) = (
            enumerate_parallelepiped(&m),
            enumerate_parallelepiped(&[m[2].clone(), m[0].clone(), m[1].clone()]),
        ) else {
            return Ok(());
        };
        prop_assert_eq!(a, b);
    }
}

#[test]
fn unimodular_parallelepipeds_are_empty() {
    assert_eq!(
        enumerate_parallelepiped(&[v(&[1, 0]), v(&[0, 1])]).unwrap(),
        Vec::<IntVec>::new()
    );
    assert_eq!(lattice_index(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), BigInt::one());
}

#[test]
fn small_openly_scanned_examples() {
    // index 2: one interior point
    assert_eq!(
        enumerate_parallelepiped(&[v(&[2, 1]), v(&[0, 1])]).unwrap(),
        vec![v(&[1, 1])]
    );
    // doubling both basis vectors: index 4, interior point (1, 1) only
    assert_eq!(
        enumerate_parallelepiped(&[v(&[2, 0]), v(&[0, 2])]).unwrap(),
        vec![v(&[1, 1])]
    );
    assert_eq!(
        lattice_index(&[v(&[2, 0]), v(&[0, 2])]).unwrap(),
        BigInt::from(4)
    );
    // a non-full-rank system in ambient rank 3
    assert_eq!(
        enumerate_parallelepiped(&[v(&[2, 0, 0]), v(&[0, 2, 0])]).unwrap(),
        vec![v(&[1, 1, 0])]
    );
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(matches!(
        lattice_index(&[v(&[1, 2]), v(&[2, 4])]),
        Err(Error::DependentInput)
    ));
    assert!(enumerate_parallelepiped(&[v(&[0, 0])]).is_err());
}
