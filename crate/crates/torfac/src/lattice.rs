//! Primitive vectors, lattice indices, rational kernels, and exact
//! enumeration of parallelepiped lattice points.
//!
//! All arithmetic is exact; no floating point is used anywhere.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix;
use crate::{IntVec, RatVec};

/// Default ambient-rank cap for parallelepiped enumeration.
pub const PAR_RANK_CAP: usize = 8;

/// Safety cap on the number of parallelepiped points enumerated.
const PAR_POINT_CAP: u64 = 1 << 20;

/// Gcd of the coordinates (zero for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Splits `v = scale · p` with `p` primitive (coordinate gcd 1) and
/// `scale > 0`. The sign of `v` stays on `p`.
pub fn primitive(v: &IntVec) -> Result<(IntVec, BigInt)> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

/// Exact dot product.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact dot product of a rational and an integer vector.
pub fn dot_rat(a: &[BigRational], b: &[BigInt]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from_integer(y.clone()))
        .sum()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Index of the subgroup `Zv₁ ⊕ … ⊕ Zv_k` inside the saturated lattice
/// `N ∩ span(v₁..v_k)`, computed as the gcd of all maximal minors.
pub fn lattice_index(vectors: &[IntVec]) -> Result<BigInt> {
    let g = matrix::gcd_maximal_minors(vectors);
    if g.is_zero() {
        return Err(Error::DependentInput);
    }
    Ok(g)
}

/// Basis of the rational kernel of the linear map `e_i ↦ v_i`, i.e. all
/// rational relations `Σ xᵢvᵢ = 0`. Deterministic: reduced-echelon order,
/// one basis vector per free column with that coefficient set to 1.
pub fn rational_kernel(vectors: &[IntVec]) -> Vec<RatVec> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    let n = vectors[0].len();
    // rows of the n×k matrix whose columns are the input vectors
    let mut rows: Vec<RatVec> = (0..n)
        .map(|i| vectors.iter().map(|v| matrix::to_rat(&v[i])).collect())
        .collect();
    let pivots = matrix::rref(&mut rows);
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); k];
            x[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -rows[r][f].clone();
            }
            x
        })
        .collect()
}

/// Lattice points of the open parallelepiped
/// `{ Σ aᵢvᵢ : 0 < aᵢ < 1 }`, sorted lexicographically.
pub fn enumerate_parallelepiped(vectors: &[IntVec]) -> Result<Vec<IntVec>> {
    parallelepiped_points(vectors, true)
}

/// Lattice points of the half-open parallelepiped (`0 ≤ aᵢ < 1`); there are
/// exactly `lattice_index(vectors)` of them.
#[cfg(test)]
pub(crate) fn half_open_parallelepiped(vectors: &[IntVec]) -> Result<Vec<IntVec>> {
    parallelepiped_points(vectors, false)
}

/// Fundamental-domain enumeration: express the input in a basis of the
/// saturation of its span, triangularize the coordinate matrix by
/// unimodular column operations, and walk coset representatives of the
/// quotient group, reducing each one into the (half-)open box.
fn parallelepiped_points(vectors: &[IntVec], open: bool) -> Result<Vec<IntVec>> {
    let k = vectors.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Invalid("vectors of unequal length".into()));
    }
    if n > PAR_RANK_CAP {
        return Err(Error::CapExceeded(format!(
            "ambient rank {n} exceeds parallelepiped cap {PAR_RANK_CAP}"
        )));
    }
    if matrix::rank(vectors) != k {
        return Err(Error::DependentInput);
    }
    // basis of the saturation S = span ∩ Z^n
    let basis = matrix::saturation_basis(vectors, n);
    debug_assert_eq!(basis.len(), k);
    // c[i] = integer coordinates of vectors[i] in that basis
    let coords: Vec<IntVec> = vectors
        .iter()
        .map(|v| {
            let x = matrix::solve_columns(&basis, v)
                .expect("input vector lies in the saturation of its own span");
            x.iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    // d = coords^T: the par of the input, seen in the basis, is the par of
    // d's columns; its lattice points y satisfy y = d·a with a in the box.
    let d: Vec<IntVec> = (0..k)
        .map(|i| (0..k).map(|j| coords[j][i].clone()).collect())
        .collect();
    let index = matrix::det(&d).abs();
    let index_u64 = index
        .to_u64()
        .filter(|&x| x <= PAR_POINT_CAP)
        .ok_or_else(|| Error::CapExceeded(format!("parallelepiped has {index} points")))?;
    let tri = matrix::column_triangular(&d);
    let radices: Vec<u64> = (0..k)
        .map(|i| {
            let r = &tri[i][i];
            debug_assert!(r.is_positive());
            r.to_u64().expect("radix bounded by the point cap")
        })
        .collect();
    debug_assert_eq!(radices.iter().product::<u64>(), index_u64);

    let mut out = Vec::new();
    let mut t = vec![0u64; k];
    loop {
        let tv: IntVec = t.iter().map(|&x| BigInt::from(x)).collect();
        // unique rational a with d·a = t (columns of d are the rows of coords)
        let a = matrix::solve_columns(&coords, &tv).expect("d is nonsingular");
        let frac: Vec<BigRational> = a.iter().map(|q| q - q.floor()).collect();
        if !open || frac.iter().all(|q| !q.is_zero()) {
            // y = d·frac is integral: y = t − d·floor(a)
            let y: IntVec = (0..k)
                .map(|i| {
                    let fi = dot_rat(&frac, &(0..k).map(|j| d[i][j].clone()).collect::<Vec<_>>());
                    debug_assert!(fi.is_integer());
                    fi.to_integer()
                })
                .collect();
            // back to ambient coordinates: x = Σ yⱼ · basisⱼ
            let mut x = vec![BigInt::zero(); n];
            for (yj, bj) in y.iter().zip(&basis) {
                for (xi, bi) in x.iter_mut().zip(bj) {
                    *xi += yj * bi;
                }
            }
            out.push(x);
        }
        // odometer
        let mut pos = k;
        loop {
            if pos == 0 {
                out.sort();
                out.dedup();
                if !open {
                    debug_assert_eq!(out.len() as u64, index_u64);
                }
                return Ok(out);
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < radices[pos].max(1) {
                break;
            }
            t[pos] = 0;
        }
    }
}
