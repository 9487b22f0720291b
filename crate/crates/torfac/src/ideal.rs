//! Monomial-ideal computations on smooth toric charts: weight ideals of a
//! one-parameter subgroup, their products, the Newton subdivision realized by
//! the normalized blowup, its exceptional rays, and the splitting criterion
//! for a toroidal torus action.
//!
//! A chart is a smooth cone σ = ⟨ρ₁,…,ρ_k⟩ in `N ≅ Zⁿ`. Completing the rays
//! to a lattice basis gives chart coordinates whose first `k` exponents are
//! polynomial and whose last `n−k` are invertible; exponent vectors are
//! always stored in these adapted coordinates.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{Fan, ValidateLevel};
use crate::lattice;
use crate::matrix;
use crate::IntVec;

/// A finitely generated monomial ideal on a smooth chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    /// Rank of the chart lattice (length of every exponent vector).
    pub chart_rank: usize,
    /// The first `poly_count` coordinates are polynomial (exponents ≥ 0),
    /// the rest are invertible.
    pub poly_count: usize,
    /// Divisibility-minimal generators, sorted lexicographically.
    pub generators: Vec<IntVec>,
}

impl MonomialIdeal {
    /// Validating constructor; minimalizes and sorts the generators.
    pub fn new(chart_rank: usize, poly_count: usize, generators: Vec<IntVec>) -> Result<Self> {
        if poly_count > chart_rank {
            return Err(Error::Invalid(
                "poly_count cannot exceed the chart rank".into(),
            ));
        }
        for g in &generators {
            if g.len() != chart_rank {
                return Err(Error::Invalid(format!(
                    "generator {g:?} does not have chart rank {chart_rank}"
                )));
            }
            if g[..poly_count].iter().any(|x| x.is_negative()) {
                return Err(Error::Invalid(format!(
                    "generator {g:?} has a negative polynomial exponent"
                )));
            }
        }
        Ok(MonomialIdeal {
            chart_rank,
            poly_count,
            generators: minimalize(generators, poly_count),
        })
    }

    /// The unit ideal (generated by the monomial 1).
    pub fn unit(chart_rank: usize, poly_count: usize) -> Self {
        MonomialIdeal {
            chart_rank,
            poly_count,
            generators: vec![vec![BigInt::zero(); chart_rank]],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Keeps the generators not dominated on the polynomial coordinates by
/// another generator (units absorb the invertible coordinates), sorted
/// lexicographically.
fn minimalize(mut points: Vec<IntVec>, poly_count: usize) -> Vec<IntVec> {
    let poly_sum = |p: &IntVec| -> BigInt { p[..poly_count].iter().sum() };
    points.sort_by(|a, b| (poly_sum(a), a).cmp(&(poly_sum(b), b)));
    let dominates = |a: &IntVec, b: &IntVec| -> bool {
        a[..poly_count].iter().zip(&b[..poly_count]).all(|(x, y)| x <= y)
    };
    let mut kept: Vec<IntVec> = Vec::new();
    for p in points {
        if !kept.iter().any(|k| dominates(k, &p)) {
            kept.push(p);
        }
    }
    kept.sort();
    kept
}

/// The adapted chart data of a smooth cone: a unimodular matrix sending the
/// rays to the first standard basis vectors.
struct Chart {
    /// Row-major unimodular matrix with `to_chart · ρᵢ = eᵢ`.
    to_chart: Vec<IntVec>,
    rank: usize,
    cone_dim: usize,
}

fn chart_of(sigma_rays: &[IntVec]) -> Result<Chart> {
    if sigma_rays.is_empty() {
        return Err(Error::Invalid("the chart cone needs at least one ray".into()));
    }
    let rank = sigma_rays[0].len();
    let to_chart = matrix::unimodular_extension(sigma_rays, rank)
        .ok_or_else(|| Error::Invalid("the chart cone must be smooth".into()))?;
    Ok(Chart { to_chart, rank, cone_dim: sigma_rays.len() })
}

/// Bézout coefficients: `Σ cᵢ·vᵢ = gcd(v)` with the gcd nonnegative.
fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        let e = g.extended_gcd(v);
        for c in &mut coeffs {
            *c = &*c * &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    (g, coeffs)
}

/// Generators of the weight-α ideal `{m ∈ σ̌ ∩ M : ⟨m, a⟩ = α}` on the chart
/// of the smooth cone σ, for a one-parameter subgroup `a ∉ σ ∪ (−σ)`.
pub fn weight_ideal_generators(
    sigma_rays: &[IntVec],
    a: &IntVec,
    alpha: &BigInt,
) -> Result<MonomialIdeal> {
    let chart = chart_of(sigma_rays)?;
    if a.len() != chart.rank {
        return Err(Error::Invalid("weight vector has the wrong rank".into()));
    }
    let (_, content) = lattice::primitive(a)?;
    if !content.is_one() {
        return Err(Error::Invalid("the one-parameter subgroup must be primitive".into()));
    }
    let k = chart.cone_dim;
    let a_chart = matrix::mat_vec(&chart.to_chart, a);
    let (head, tail) = a_chart.split_at(k);
    if tail.iter().all(|x| x.is_zero())
        && (head.iter().all(|x| !x.is_negative()) || head.iter().all(|x| !x.is_positive()))
    {
        return Err(Error::AInsideCone);
    }

    // Polynomial parts satisfy ⟨q, head⟩ ≡ α modulo the subgroup the
    // invertible coordinates generate.
    let modulus = tail.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let max_entry = a_chart.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    let bound_big = std::cmp::max(alpha.abs(), max_entry) * BigInt::from(chart.rank);
    let bound: i64 = (&bound_big).try_into().map_err(|_| {
        Error::CapExceeded(format!("weight enumeration bound {bound_big} is too large"))
    })?;

    let admissible = |q: &IntVec| -> Option<BigInt> {
        let value = lattice::dot(q, head);
        let residue = alpha - &value;
        if modulus.is_zero() {
            residue.is_zero().then(BigInt::zero)
        } else {
            residue.is_multiple_of(&modulus).then(|| residue / &modulus)
        }
    };

    // enumerate [0, bound]^k with an odometer
    let mut q: Vec<i64> = vec![0; k];
    let mut found: Vec<IntVec> = Vec::new();
    loop {
        let q_big: IntVec = q.iter().map(|&x| BigInt::from(x)).collect();
        if let Some(scale) = admissible(&q_big) {
            found.push(monomial_with_tail(&q_big, tail, &scale, &modulus, chart.rank));
        }
        let mut pos = 0;
        loop {
            if pos == k {
                let ideal = MonomialIdeal {
                    chart_rank: chart.rank,
                    poly_count: k,
                    generators: minimalize(found, k),
                };
                if ideal.generators.is_empty() {
                    return Err(Error::InternalInvariant(
                        "weight ideal came out empty under the certified bound".into(),
                    ));
                }
                return Ok(ideal);
            }
            if q[pos] < bound {
                q[pos] += 1;
                break;
            }
            q[pos] = 0;
            pos += 1;
        }
    }
}

/// Completes a polynomial part to a full exponent vector, choosing the
/// invertible exponents canonically via Bézout coefficients of the tail
/// weights (scaled to absorb the residue `scale · gcd(tail)`).
fn monomial_with_tail(
    q: &IntVec,
    tail_weights: &[BigInt],
    scale: &BigInt,
    modulus: &BigInt,
    chart_rank: usize,
) -> IntVec {
    let mut m = q.clone();
    m.resize(chart_rank, BigInt::zero());
    if !modulus.is_zero() && !scale.is_zero() {
        let (_, coeffs) = bezout(tail_weights);
        for (slot, c) in m[q.len()..].iter_mut().zip(coeffs) {
            *slot = c * scale;
        }
    }
    m
}

/// The product ideal: Minkowski sums of one generator per factor,
/// minimalized.
pub fn product_ideal(ideals: &[MonomialIdeal]) -> Result<MonomialIdeal> {
    let Some(first) = ideals.first() else {
        return Err(Error::Invalid("cannot take an empty product of ideals".into()));
    };
    for ideal in ideals {
        if ideal.chart_rank != first.chart_rank || ideal.poly_count != first.poly_count {
            return Err(Error::ChartMismatch);
        }
    }
    if ideals.iter().any(MonomialIdeal::is_zero) {
        return Ok(MonomialIdeal {
            chart_rank: first.chart_rank,
            poly_count: first.poly_count,
            generators: Vec::new(),
        });
    }
    let mut sums: Vec<IntVec> = vec![vec![BigInt::zero(); first.chart_rank]];
    for ideal in ideals {
        let mut next = Vec::with_capacity(sums.len() * ideal.generators.len());
        for s in &sums {
            for g in &ideal.generators {
                next.push(lattice::add(s, g));
            }
        }
        sums = next;
    }
    Ok(MonomialIdeal {
        chart_rank: first.chart_rank,
        poly_count: first.poly_count,
        generators: minimalize(sums, first.poly_count),
    })
}

/// One maximal linearity domain of the Newton subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonCell {
    /// Primitive rays in `N`, sorted; the cell need not be simplicial.
    pub rays: Vec<IntVec>,
    /// The generator whose functional is minimal on this cell.
    pub active_generator: IntVec,
}

/// The normalized-blowup subdivision of a chart cone along a monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSubdivision {
    /// Rays of the subdivided chart cone.
    pub base_rays: Vec<IntVec>,
    /// Maximal cells, sorted by ray lists; their supports tile the base cone.
    pub cells: Vec<NewtonCell>,
    /// Primitive subdivision rays on which every generator is positive
    /// (the support of the exceptional toroidal divisor).
    pub exceptional_rays: Vec<IntVec>,
}

/// Null space of the matrix with the given rows (`{x : ⟨row, x⟩ = 0 ∀rows}`),
/// as a rational basis. `rational_kernel` computes relations among its
/// inputs, so feed it the columns.
fn row_null_space(rows: &[IntVec]) -> Vec<crate::RatVec> {
    let width = rows[0].len();
    let cols: Vec<IntVec> = (0..width)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    lattice::rational_kernel(&cols)
}

/// Extreme rays of `{x ∈ Q^k : ⟨c, x⟩ ≥ 0 ∀c}` for finitely many integer
/// constraints containing the orthant constraints (so the cone is pointed):
/// each ray is cut out by k−1 independent active constraints.
fn pointed_cone_rays(constraints: &[IntVec], k: usize) -> Vec<IntVec> {
    let mut rays: BTreeSet<IntVec> = BTreeSet::new();
    if k == 1 {
        for cand in [vec![BigInt::one()], vec![-BigInt::one()]] {
            if constraints.iter().all(|c| !lattice::dot(c, &cand).is_negative()) {
                rays.insert(cand);
            }
        }
        return rays.into_iter().collect();
    }
    matrix::for_each_combination(constraints.len(), k - 1, |subset| {
        let chosen: Vec<IntVec> = subset.iter().map(|&i| constraints[i].clone()).collect();
        let kernel = row_null_space(&chosen);
        if kernel.len() == 1 {
            let dir = matrix::clear_denominators(&kernel[0]);
            for cand in [dir.clone(), dir.iter().map(|x| -x).collect()] {
                if constraints.iter().all(|c| !lattice::dot(c, &cand).is_negative()) {
                    if let Ok((prim, _)) = lattice::primitive(&cand) {
                        rays.insert(prim);
                    }
                }
            }
        }
        true
    });
    rays.into_iter().collect()
}

/// Computes the Newton subdivision of the smooth cone σ induced by the
/// ideal: the maximal domains where a single generator minimizes
/// `x ↦ min_m ⟨m, x⟩`, with the exceptional rays of the normalized blowup.
pub fn newton_subdivision(
    sigma_rays: &[IntVec],
    ideal: &MonomialIdeal,
) -> Result<NewtonSubdivision> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let chart = chart_of(sigma_rays)?;
    let k = chart.cone_dim;
    if ideal.chart_rank != chart.rank || ideal.poly_count != k {
        return Err(Error::ChartMismatch);
    }
    let generators = minimalize(ideal.generators.clone(), k);
    let functionals: Vec<IntVec> = generators.iter().map(|g| g[..k].to_vec()).collect();

    let lambda_to_n = |d: &IntVec| -> Result<IntVec> {
        let mut out = vec![BigInt::zero(); chart.rank];
        for (coeff, ray) in d.iter().zip(sigma_rays) {
            for (slot, x) in out.iter_mut().zip(ray) {
                *slot += coeff * x;
            }
        }
        Ok(lattice::primitive(&out)?.0)
    };

    let mut cells: Vec<NewtonCell> = Vec::new();
    let mut all_dirs: BTreeSet<IntVec> = BTreeSet::new();
    for (gi, g) in functionals.iter().enumerate() {
        let mut constraints: Vec<IntVec> = (0..k)
            .map(|i| {
                let mut e = vec![BigInt::zero(); k];
                e[i] = BigInt::one();
                e
            })
            .collect();
        for other in &functionals {
            if other != g {
                constraints.push(other.iter().zip(g).map(|(x, y)| x - y).collect());
            }
        }
        let dirs = pointed_cone_rays(&constraints, k);
        if matrix::rank(&dirs) < k {
            continue; // this generator is never uniquely minimal
        }
        all_dirs.extend(dirs.iter().cloned());
        let mut rays: Vec<IntVec> = dirs
            .iter()
            .map(|d| lambda_to_n(d))
            .collect::<Result<_>>()?;
        rays.sort();
        cells.push(NewtonCell { rays, active_generator: generators[gi].clone() });
    }
    cells.sort_by(|a, b| a.rays.cmp(&b.rays));

    let mut exceptional_rays: Vec<IntVec> = Vec::new();
    for d in &all_dirs {
        let valuation = functionals.iter().map(|f| lattice::dot(f, d)).min();
        if valuation.map_or(false, |v| v.is_positive()) {
            exceptional_rays.push(lambda_to_n(d)?);
        }
    }
    exceptional_rays.sort();
    exceptional_rays.dedup();

    Ok(NewtonSubdivision {
        base_rays: sigma_rays.to_vec(),
        cells,
        exceptional_rays,
    })
}

/// The valuation `min_m ⟨m, u⟩` of the ideal along a lattice point u of the
/// chart cone (exact; u must lie in the cone).
pub fn ray_valuation(sigma_rays: &[IntVec], ideal: &MonomialIdeal, u: &IntVec) -> Result<BigInt> {
    let chart = chart_of(sigma_rays)?;
    if ideal.chart_rank != chart.rank || ideal.poly_count != chart.cone_dim {
        return Err(Error::ChartMismatch);
    }
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let coords = matrix::mat_vec(&chart.to_chart, u);
    let (head, tail) = coords.split_at(chart.cone_dim);
    if head.iter().any(|x| x.is_negative()) || tail.iter().any(|x| !x.is_zero()) {
        return Err(Error::OutsideSupport);
    }
    Ok(ideal
        .generators
        .iter()
        .map(|g| lattice::dot(&g[..chart.cone_dim], head))
        .min()
        .expect("nonzero ideal"))
}

/// Facets of a pointed cone given by extreme rays (the cone may sit in a
/// higher-dimensional space): every facet is returned as the sublist of rays
/// lying on its supporting hyperplane.
fn cone_facets(rays: &[IntVec]) -> Vec<Vec<IntVec>> {
    let dim = matrix::rank(rays);
    if dim < 2 {
        return Vec::new();
    }
    // reduce to coordinates in which the cone is full-dimensional
    let mut basis: Vec<IntVec> = Vec::new();
    for r in rays {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if matrix::rank(&trial) > basis.len() {
            basis = trial;
        }
    }
    let reduced: Vec<IntVec> = rays
        .iter()
        .map(|r| {
            let coords = matrix::solve_columns(&basis, r).expect("ray lies in the span");
            matrix::clear_denominators(&coords)
        })
        .collect();
    let mut facets: BTreeSet<Vec<IntVec>> = BTreeSet::new();
    matrix::for_each_combination(rays.len(), dim - 1, |subset| {
        let chosen: Vec<IntVec> = subset.iter().map(|&i| reduced[i].clone()).collect();
        let kernel = row_null_space(&chosen);
        if kernel.len() == 1 {
            let normal = matrix::clear_denominators(&kernel[0]);
            let values: Vec<BigInt> = reduced.iter().map(|r| lattice::dot(&normal, r)).collect();
            let side = if values.iter().all(|v| !v.is_negative()) {
                Some(())
            } else if values.iter().all(|v| !v.is_positive()) {
                Some(())
            } else {
                None
            };
            if side.is_some() && values.iter().any(|v| !v.is_zero()) {
                let members: Vec<IntVec> = rays
                    .iter()
                    .zip(&values)
                    .filter(|(_, v)| v.is_zero())
                    .map(|(r, _)| r.clone())
                    .collect();
                if members.len() >= dim - 1 {
                    facets.insert(members);
                }
            }
        }
        true
    });
    facets.into_iter().collect()
}

/// Pulling triangulation at the lexicographically smallest ray; recursing
/// with a global ray order keeps shared walls compatible across cells.
fn pull_triangulate(rays: &[IntVec], out: &mut Vec<Vec<IntVec>>) {
    if matrix::rank(rays) == rays.len() {
        out.push(rays.to_vec());
        return;
    }
    let pivot = rays.iter().min().expect("cone has rays").clone();
    for facet in cone_facets(rays) {
        if facet.contains(&pivot) {
            continue;
        }
        let mut pieces = Vec::new();
        pull_triangulate(&facet, &mut pieces);
        for mut piece in pieces {
            piece.push(pivot.clone());
            out.push(piece);
        }
    }
}

/// Refines the (possibly non-simplicial) cells of a Newton subdivision into
/// a simplicial fan by pulling star subdivisions at existing rays.
pub fn simplicial_refinement(subdivision: &NewtonSubdivision) -> Result<Fan> {
    if subdivision.cells.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    let rank = subdivision.base_rays[0].len();
    let mut simplices: Vec<Vec<IntVec>> = Vec::new();
    for cell in &subdivision.cells {
        pull_triangulate(&cell.rays, &mut simplices);
    }
    let fan = Fan::assemble(rank, simplices, false)?;
    fan.validate(ValidateLevel::Full)?;
    Ok(fan)
}

/// Result of the splitting test for one (maximal cone, non-divisor ray)
/// pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalCheck {
    pub cone_rays: Vec<IntVec>,
    pub ray: IntVec,
    /// The cone splits off the ray: σ = σ′ ⊕ ⟨e⟩ with N = N′ ⊕ Ze.
    pub split_ok: bool,
    /// Some splitting complement N′ also contains the weight vector.
    pub weight_in_complement: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalActionReport {
    pub checks: Vec<ToroidalCheck>,
    pub all_pass: bool,
}

/// Checks, for every maximal cone σ and every ray e of σ outside the
/// divisor, that σ splits off e compatibly with the lattice and that the
/// one-parameter subgroup lies in the complement — the chart-by-chart
/// criterion for the torus action to respect the toroidal structure.
pub fn check_toroidal_action(
    fan: &Fan,
    a: &IntVec,
    divisor_rays: &[IntVec],
) -> Result<ToroidalActionReport> {
    let n = fan.ambient_rank();
    if a.len() != n {
        return Err(Error::Invalid("weight vector has the wrong rank".into()));
    }
    let mut divisor: BTreeSet<IntVec> = BTreeSet::new();
    for d in divisor_rays {
        divisor.insert(lattice::primitive(d)?.0);
    }
    let mut checks = Vec::new();
    for sigma in fan.maximal_cones() {
        let rays = fan.cone_rays(sigma);
        for (idx, e) in rays.iter().enumerate() {
            if divisor.contains(e) {
                continue;
            }
            let others: Vec<IntVec> = rays
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, r)| r.clone())
                .collect();
            // saturated lattice of functionals vanishing on the other rays
            let w_basis = matrix::integer_kernel(&others, n);
            let on_e: Vec<BigInt> = w_basis.iter().map(|phi| lattice::dot(phi, e)).collect();
            let (g, coeffs) = bezout(&on_e);
            let split_ok = g.is_one();
            let mut weight_in_complement = false;
            if split_ok {
                let on_a: Vec<BigInt> = w_basis.iter().map(|phi| lattice::dot(phi, a)).collect();
                // φ₀ evaluates to 1 on e; shifting by functionals vanishing
                // on e changes φ₀(a) by multiples of their gcd on a
                let phi0_a = lattice::dot(&coeffs, &on_a);
                let shifts = matrix::integer_kernel(&[on_e], w_basis.len());
                let step = shifts
                    .iter()
                    .fold(BigInt::zero(), |g, c| g.gcd(&lattice::dot(c, &on_a)));
                weight_in_complement = if step.is_zero() {
                    phi0_a.is_zero()
                } else {
                    phi0_a.is_multiple_of(&step)
                };
            }
            checks.push(ToroidalCheck {
                cone_rays: rays.clone(),
                ray: e.clone(),
                split_ok,
                weight_in_complement,
                pass: split_ok && weight_in_complement,
            });
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ToroidalActionReport { checks, all_pass })
}
