//! Internal exact linear algebra over `BigInt` / `BigRational`.
//!
//! These helpers are deliberately not public API: they are small,
//! deterministic routines sized for desk-scale fans (ranks well below 10),
//! not a general matrix library.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::{IntVec, RatVec};

#[cfg(test)]
pub(crate) fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub(crate) fn to_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub(crate) fn rat_vec(v: &IntVec) -> RatVec {
    v.iter().map(to_rat).collect()
}

/// Exact determinant of a square matrix by fraction-free Bareiss elimination.
pub(crate) fn det(m: &[IntVec]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut a: Vec<IntVec> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    &sign * &a[n - 1][n - 1]
}

/// Visits every k-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Gcd of all maximal (k×k) minors of the k×n matrix whose rows are `vectors`.
///
/// Returns zero when the rows are linearly dependent (all minors vanish).
/// Stops early once the gcd reaches 1.
pub(crate) fn gcd_maximal_minors(vectors: &[IntVec]) -> BigInt {
    let k = vectors.len();
    if k == 0 {
        return BigInt::one();
    }
    let n = vectors[0].len();
    if k > n {
        return BigInt::zero();
    }
    let mut g = BigInt::zero();
    for_each_combination(n, k, |cols| {
        let sub: Vec<IntVec> = vectors
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&det(&sub));
        !g.is_one()
    });
    g
}

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row, in order. Rows below the last pivot end up zero.
pub(crate) fn rref(rows: &mut Vec<RatVec>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= inv.clone();
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the set of integer vectors.
pub(crate) fn rank(vectors: &[IntVec]) -> usize {
    let mut rows: Vec<RatVec> = vectors.iter().map(rat_vec).collect();
    rref(&mut rows).len()
}

/// Solves `sum_j x_j * cols[j] = b` exactly. Returns `None` when `b` is not
/// in the span. Free variables (if the columns are dependent) are set to 0,
/// so for independent columns this is the unique solution.
pub(crate) fn solve_columns(cols: &[IntVec], b: &IntVec) -> Option<RatVec> {
    let k = cols.len();
    let n = b.len();
    let mut rows: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut row: RatVec = cols.iter().map(|c| to_rat(&c[i])).collect();
            row.push(to_rat(&b[i]));
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None; // inconsistent
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][k].clone();
    }
    Some(x)
}

/// Basis of the right integer kernel `{x in Z^n : M x = 0}` of the k×n
/// matrix `m`, computed by unimodular column reduction. The result is a
/// basis of a saturated sublattice (direct summand) of `Z^n`.
pub(crate) fn integer_kernel(m: &[IntVec], n: usize) -> Vec<IntVec> {
    let k = m.len();
    let mut a: Vec<IntVec> = m.to_vec();
    // v starts as the identity; we track column operations on it.
    let mut v: Vec<IntVec> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // v is stored row-major; column operations act on index j of every row.
    let mut col = 0usize;
    for r in 0..k {
        if col == n {
            break;
        }
        loop {
            // pick the column (>= col) with smallest nonzero |a[r][j]|
            let mut best: Option<usize> = None;
            for j in col..n {
                if !a[r][j].is_zero()
                    && best.map_or(true, |b| a[r][j].abs() < a[r][b].abs())
                {
                    best = Some(j);
                }
            }
            let Some(j0) = best else { break };
            if j0 != col {
                for row in a.iter_mut() {
                    row.swap(col, j0);
                }
                for row in v.iter_mut() {
                    row.swap(col, j0);
                }
            }
            let mut done = true;
            for j in col + 1..n {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = &a[r][j] / &a[r][col];
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let sub = &q * &row[col];
                        row[j] -= sub;
                    }
                    for row in v.iter_mut() {
                        let sub = &q * &row[col];
                        row[j] -= sub;
                    }
                }
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[r][col].is_zero() {
            if a[r][col].is_negative() {
                for row in a.iter_mut() {
                    row[col] = -row[col].clone();
                }
                for row in v.iter_mut() {
                    row[col] = -row[col].clone();
                }
            }
            col += 1;
        }
    }
    // columns col..n of v span the kernel
    (col..n)
        .map(|j| v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Basis of the saturation of the row lattice of `rows` inside `Z^n`
/// (double annihilator). For full-rank row sets this is a basis of `Z^n`.
pub(crate) fn saturation_basis(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let ker = integer_kernel(rows, n);
    integer_kernel(&ker, n)
}

/// Lower-triangular column form of a nonsingular square integer matrix with
/// positive diagonal, obtained by unimodular column operations. The column
/// lattice is preserved, so the diagonal gives mixed radix coset
/// representatives of `Z^k / (column lattice)`.
pub(crate) fn column_triangular(c: &[IntVec]) -> Vec<IntVec> {
    let k = c.len();
    let mut a: Vec<IntVec> = c.to_vec();
    for r in 0..k {
        loop {
            let mut best: Option<usize> = None;
            for j in r..k {
                if !a[r][j].is_zero()
                    && best.map_or(true, |b| a[r][j].abs() < a[r][b].abs())
                {
                    best = Some(j);
                }
            }
            let j0 = best.expect("column_triangular: singular matrix");
            if j0 != r {
                for row in a.iter_mut() {
                    row.swap(r, j0);
                }
            }
            let mut done = true;
            for j in r + 1..k {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = &a[r][j] / &a[r][r];
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let sub = &q * &row[r];
                        row[j] -= sub;
                    }
                }
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][r].is_negative() {
            for row in a.iter_mut() {
                row[r] = -row[r].clone();
            }
        }
    }
    a
}

/// For `k` vectors in `Z^n` that form part of a `Z`-basis (index 1 in their
/// saturation, i.e. a smooth cone's rays), returns a unimodular `U` (row
/// major, acting as `x -> U x`) with `U * [v_1 .. v_k] = [I_k; 0]`.
pub(crate) fn unimodular_extension(rays: &[IntVec], n: usize) -> Option<Vec<IntVec>> {
    let k = rays.len();
    // a = n×k matrix with columns the rays
    let mut a: Vec<IntVec> = (0..n)
        .map(|i| rays.iter().map(|r| r[i].clone()).collect())
        .collect();
    let mut u: Vec<IntVec> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for j in 0..k {
        loop {
            let mut best: Option<usize> = None;
            for r in j..n {
                if !a[r][j].is_zero()
                    && best.map_or(true, |b| a[r][j].abs() < a[b][j].abs())
                {
                    best = Some(r);
                }
            }
            let r0 = best?;
            if r0 != j {
                a.swap(j, r0);
                u.swap(j, r0);
            }
            let mut done = true;
            for r in j + 1..n {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = &a[r][j] / &a[j][j];
                if !q.is_zero() {
                    for c in 0..k {
                        let sub = &q * &a[j][c];
                        a[r][c] -= sub;
                    }
                    for c in 0..n {
                        let sub = &q * &u[j][c];
                        u[r][c] -= sub;
                    }
                }
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[j][j].is_negative() {
            for c in 0..k {
                a[j][c] = -a[j][c].clone();
            }
            for c in 0..n {
                u[j][c] = -u[j][c].clone();
            }
        }
        if !a[j][j].is_one() {
            return None; // rays are not part of a Z-basis
        }
        // clear entries above the unit pivot
        for r in 0..j {
            if !a[r][j].is_zero() {
                let q = a[r][j].clone();
                for c in 0..k {
                    let sub = &q * &a[j][c];
                    a[r][c] -= sub;
                }
                for c in 0..n {
                    let sub = &q * &u[j][c];
                    u[r][c] -= sub;
                }
            }
        }
    }
    Some(u)
}

pub(crate) fn mat_vec(rows: &[IntVec], x: &IntVec) -> IntVec {
    rows.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Scales a rational vector by the lcm of its denominators, returning the
/// resulting integer vector (the direction is preserved).
pub(crate) fn clear_denominators(v: &RatVec) -> IntVec {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| {
            let scaled = x * to_rat(&lcm);
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn det_matches_cofactor_values() {
        assert_eq!(det(&[v(&[1, 0], ), v(&[1, 2])]), big(2));
        assert_eq!(det(&[v(&[1, 1, 0]), v(&[1, 0, 1]), v(&[0, 1, 1])]), big(-2));
        assert_eq!(det(&[v(&[2, 4]), v(&[1, 2])]), big(0));
    }

    #[test]
    fn combinations_visit_all_subsets_in_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // kernel of (2 4) in Z^2 is spanned by (2,-1), not (4,-2)
        let ker = integer_kernel(&[v(&[2, 4])], 2);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        assert!(k == &v(&[2, -1]) || k == &v(&[-2, 1]), "got {k:?}");
    }

    #[test]
    fn saturation_of_full_rank_rows_is_everything() {
        let b = saturation_basis(&[v(&[1, 0]), v(&[1, 2])], 2);
        assert_eq!(b.len(), 2);
        // index of Z^2 in the lattice spanned by b must be 1
        let d = det(&b);
        assert!(d.abs().is_one(), "saturation basis not unimodular: {d}");
    }

    #[test]
    fn unimodular_extension_inverts_smooth_rays() {
        let rays = [v(&[2, 1]), v(&[1, 1])];
        let u = unimodular_extension(&rays, 2).expect("smooth");
        assert_eq!(mat_vec(&u, &rays[0]), v(&[1, 0]));
        assert_eq!(mat_vec(&u, &rays[1]), v(&[0, 1]));
        // non-smooth rays have no extension
        assert!(unimodular_extension(&[v(&[1, 0]), v(&[1, 2])], 2).is_none());
    }

    #[test]
    fn solve_columns_finds_exact_coordinates() {
        let cols = [v(&[1, 0, 0]), v(&[1, 2, 1])];
        let x = solve_columns(&cols, &v(&[3, 2, 1])).expect("in span");
        assert_eq!(x[0], to_rat(&big(2)));
        assert_eq!(x[1], to_rat(&big(1)));
        assert!(solve_columns(&cols, &v(&[0, 0, 1])).is_none());
    }
}
