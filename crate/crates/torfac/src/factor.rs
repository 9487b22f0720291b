//! Factorization of a π-nonsingular cobordism fan into elementary
//! blowup/blowdown steps, plus constructors for the two standard demo
//! cobordisms (the cobordism of a single smooth blowup, and the cobordism of
//! a weighted one-parameter action on affine space).
//!
//! The walk maintains one global fan `L` in `N`, starting at the projected
//! lower boundary of the cobordism. Crossing a circuit σ replaces the
//! projected lower boundary of `Star̄(σ)` inside `L` by the projected upper
//! boundary; the two sides of each step are related by a common star
//! subdivision at `v = Σ_{I₊} vⱼ = Σ_{I₋} vⱼ`.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::cobordism;
use crate::desing;
use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan, ValidateLevel};
use crate::lattice;
use crate::IntVec;

/// Optional per-circuit weights dictating the processing order, keyed by the
/// circuit's sorted ray vectors.
pub type OrderCertificate = BTreeMap<Vec<IntVec>, BigRational>;

/// One elementary wall crossing. The two quotient fans are *global*: they
/// are snapshots of the full lower fan before and after the crossing, so
/// consecutive steps chain exactly.
#[derive(Clone, Debug)]
pub struct FactorizationStep {
    /// Rays of the crossed circuit, in `N⁺`.
    pub circuit_rays: Vec<IntVec>,
    /// The common subdivision point `Σ_{I₊} vⱼ = Σ_{I₋} vⱼ`, in `N`.
    pub v: IntVec,
    /// Global quotient fan before the crossing.
    pub lower_fan: Fan,
    /// Global quotient fan after the crossing.
    pub upper_fan: Fan,
    /// The common star subdivision of both sides at `v`.
    pub middle_fan: Fan,
    /// Cone of `lower_fan` spanned by `{vⱼ : j ∈ I₊}`.
    pub lower_center: Cone,
    /// Cone of `upper_fan` spanned by `{vⱼ : j ∈ I₋}`.
    pub upper_center: Cone,
    /// The lower side is a no-op (`v` is already a ray of `lower_fan`).
    pub lower_degenerate: bool,
    /// The upper side is a no-op (`v` is already a ray of `upper_fan`).
    pub upper_degenerate: bool,
}

/// Per-step record of the center smoothness verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenterSmoothness {
    pub lower: bool,
    pub upper: bool,
}

/// Verification summary attached to a factorization run.
#[derive(Clone, Debug)]
pub struct FactorizationReport {
    /// Whether the driver had to π-desingularize the input first.
    pub desing_performed: bool,
    /// Number of subdivisions the desingularization performed.
    pub desing_subdivisions: usize,
    /// Projected lower boundary of the walked cobordism (head of the chain).
    pub initial_lower_fan: Fan,
    /// Projected upper boundary of the walked cobordism (tail of the chain).
    pub final_upper_fan: Fan,
    /// Smoothness of both centers, one entry per step.
    pub center_smoothness: Vec<CenterSmoothness>,
    /// Every step's upper fan equals the next step's lower fan, the head
    /// matches `initial_lower_fan` and the tail `final_upper_fan`.
    pub chain_consistent: bool,
    /// Steps that modify at least one side.
    pub non_degenerate_steps: usize,
    /// One human-readable line per step.
    pub summary: Vec<String>,
}

fn ensure_cobordism(fan: &Fan) -> Result<()> {
    if !fan.is_cobordism() {
        return Err(Error::Invalid("this operation requires a cobordism fan".into()));
    }
    Ok(())
}

/// Projects boundary faces of a cobordism fan to `N` and assembles them as a
/// validated face-to-face fan.
fn project_faces_to_fan(cobfan: &Fan, faces: &[Cone]) -> Result<Fan> {
    let n = cobfan.ambient_rank() - 1;
    let cones: Vec<Vec<IntVec>> = faces
        .iter()
        .map(|c| cobfan.cone_rays(c).iter().map(cobordism::project).collect())
        .collect();
    let projected = Fan::assemble(n, cones, false)
        .map_err(|e| Error::ProjectionNotAFan(e.to_string()))?;
    projected
        .validate(ValidateLevel::Full)
        .map_err(|e| Error::ProjectionNotAFan(e.to_string()))?;
    Ok(projected)
}

/// The projected lower and upper boundary fans `(π(∂₋), π(∂₊))` of a
/// cobordism fan.
pub fn boundary_fans(cobfan: &Fan) -> Result<(Fan, Fan)> {
    ensure_cobordism(cobfan)?;
    let (lower, upper) = cobordism::boundaries(cobfan)?;
    Ok((
        project_faces_to_fan(cobfan, &lower)?,
        project_faces_to_fan(cobfan, &upper)?,
    ))
}

/// Boundary data of one circuit's closed star.
struct StarBoundary {
    lower: Fan,
    upper: Fan,
    lower_ray_set: BTreeSet<IntVec>,
    upper_ray_set: BTreeSet<IntVec>,
}

fn star_boundary(cobfan: &Fan, sigma: &Cone) -> Result<StarBoundary> {
    let star = fan::closed_star(cobfan, sigma)?;
    let (lower_faces, upper_faces) = cobordism::boundaries(&star)?;
    let ray_set = |faces: &[Cone]| -> BTreeSet<IntVec> {
        faces
            .iter()
            .flat_map(|c| star.cone_rays(c))
            .collect()
    };
    Ok(StarBoundary {
        lower_ray_set: ray_set(&lower_faces),
        upper_ray_set: ray_set(&upper_faces),
        lower: project_faces_to_fan(&star, &lower_faces)?,
        upper: project_faces_to_fan(&star, &upper_faces)?,
    })
}

/// All circuits of the fan with their precedence edges: σ ≺₁ σ′ whenever the
/// upper boundary of `Star̄(σ)` and the lower boundary of `Star̄(σ′)` share a
/// ray (equivalently, a cone of dimension ≥ 1).
fn circuit_digraph(cobfan: &Fan) -> Result<(Vec<Cone>, Vec<(usize, usize)>)> {
    let circuits = cobordism::circuits(cobfan)?;
    let mut bounds = Vec::with_capacity(circuits.len());
    for sigma in &circuits {
        bounds.push(star_boundary(cobfan, sigma)?);
    }
    let mut edges = Vec::new();
    for (i, bi) in bounds.iter().enumerate() {
        for (j, bj) in bounds.iter().enumerate() {
            if i != j && bi.upper_ray_set.intersection(&bj.lower_ray_set).next().is_some() {
                edges.push((i, j));
            }
        }
    }
    Ok((circuits, edges))
}

/// Orders the circuits so that every precedence edge σ ≺₁ σ′ puts σ first.
/// Ties are broken canonically (lexicographic on sorted ray vectors). An
/// optional weight certificate must respect every edge strictly and then
/// dictates the order instead.
pub fn circuit_order(cobfan: &Fan) -> Result<Vec<Cone>> {
    circuit_order_with(cobfan, None)
}

pub fn circuit_order_with(
    cobfan: &Fan,
    certificate: Option<&OrderCertificate>,
) -> Result<Vec<Cone>> {
    ensure_cobordism(cobfan)?;
    let (circuits, edges) = circuit_digraph(cobfan)?;
    let keys: Vec<Vec<IntVec>> = circuits.iter().map(|c| cobfan.cone_rays(c)).collect();

    if let Some(cert) = certificate {
        let mut weights = Vec::with_capacity(circuits.len());
        for key in &keys {
            let w = cert.get(key).ok_or_else(|| {
                Error::BadCertificate(format!(
                    "no weight for circuit with rays {key:?}"
                ))
            })?;
            weights.push(w.clone());
        }
        for &(i, j) in &edges {
            if weights[i] >= weights[j] {
                return Err(Error::BadCertificate(format!(
                    "certificate violates precedence: weight {} !< {} on an edge",
                    weights[i], weights[j]
                )));
            }
        }
        let mut order: Vec<usize> = (0..circuits.len()).collect();
        order.sort_by(|&a, &b| (&weights[a], &keys[a]).cmp(&(&weights[b], &keys[b])));
        return Ok(order.into_iter().map(|i| circuits[i].clone()).collect());
    }

    // Kahn's algorithm with canonical tie-break.
    let n = circuits.len();
    let mut indegree = vec![0usize; n];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in &edges {
        adjacency[i].push(j);
        indegree[j] += 1;
    }
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let next = remaining
            .iter()
            .copied()
            .filter(|&i| indegree[i] == 0)
            .min_by(|&a, &b| keys[a].cmp(&keys[b]));
        let Some(next) = next else {
            return Err(Error::NotFiltrable(format!(
                "circuit precedence has a cycle among {} circuits",
                remaining.len()
            )));
        };
        remaining.remove(&next);
        for &j in &adjacency[next] {
            indegree[j] -= 1;
        }
        order.push(circuits[next].clone());
    }
    Ok(order)
}

/// Core of one wall crossing against the current global lower fan `L`.
fn step_core(
    cobfan: &Fan,
    lower: &Fan,
    sigma: &Cone,
) -> Result<(FactorizationStep, Fan)> {
    let bound = star_boundary(cobfan, sigma)?;

    // Minimality: the star's projected lower boundary must sit inside L.
    let mut lower_max_keys: BTreeSet<Vec<IntVec>> = BTreeSet::new();
    for c in lower.maximal_cones() {
        lower_max_keys.insert(lower.cone_rays(c));
    }
    for c in bound.lower.maximal_cones() {
        if !lower_max_keys.contains(&bound.lower.cone_rays(c)) {
            return Err(Error::NotMinimal);
        }
    }

    let rel = cobordism::dependence_relation(cobfan, sigma)?;
    if rel.circuit_dim() != sigma.dim() {
        return Err(Error::NotACircuit);
    }
    if rel.r.iter().any(|x| !x.is_zero() && !x.abs().is_one()) {
        return Err(Error::NotPiNonsingular);
    }
    let sum_over = |idx: &[usize]| -> IntVec {
        let n = cobfan.ambient_rank() - 1;
        idx.iter().fold(vec![BigInt::zero(); n], |acc, &i| {
            lattice::add(&acc, &rel.ray_pi[i].v)
        })
    };
    let v = sum_over(&rel.i_pos);
    let v_minus = sum_over(&rel.i_neg);
    if v != v_minus {
        return Err(Error::InternalInvariant(
            "the two signed ray sums of a unimodular circuit disagree".into(),
        ));
    }
    let (_, content) = lattice::primitive(&v)?;
    if !content.is_one() {
        return Err(Error::InternalInvariant(
            "circuit sum is imprimitive on a π-nonsingular fan".into(),
        ));
    }

    // Surgery: replace the star's lower boundary by its upper boundary.
    let mut next_cones: Vec<Vec<IntVec>> = Vec::new();
    let removed: BTreeSet<Vec<IntVec>> = bound
        .lower
        .maximal_cones()
        .iter()
        .map(|c| bound.lower.cone_rays(c))
        .collect();
    for c in lower.maximal_cones() {
        let rays = lower.cone_rays(c);
        if !removed.contains(&rays) {
            next_cones.push(rays);
        }
    }
    for c in bound.upper.maximal_cones() {
        next_cones.push(bound.upper.cone_rays(c));
    }
    let upper = Fan::assemble(lower.ambient_rank(), next_cones, false)?;
    upper.validate(ValidateLevel::Full).map_err(|e| {
        Error::InternalInvariant(format!("boundary surgery broke the fan: {e}"))
    })?;

    let middle = fan::star_subdivide(lower, &v)?;
    let middle_from_upper = fan::star_subdivide(&upper, &v)?;
    if middle != middle_from_upper {
        return Err(Error::InternalInvariant(
            "star subdivisions of the two sides at v disagree".into(),
        ));
    }

    let center_rays = |idx: &[usize]| -> Vec<IntVec> {
        idx.iter().map(|&i| rel.ray_pi[i].v.clone()).collect()
    };
    let lower_center = lower.cone_by_rays(&center_rays(&rel.i_pos)).map_err(|_| {
        Error::InternalInvariant("lower center is not a face of the lower fan".into())
    })?;
    let upper_center = upper.cone_by_rays(&center_rays(&rel.i_neg)).map_err(|_| {
        Error::InternalInvariant("upper center is not a face of the upper fan".into())
    })?;

    let step = FactorizationStep {
        circuit_rays: cobfan.cone_rays(sigma),
        v,
        lower_fan: lower.clone(),
        middle_fan: middle,
        lower_center,
        upper_center,
        lower_degenerate: rel.i_pos.len() == 1,
        upper_degenerate: rel.i_neg.len() == 1,
        upper_fan: upper.clone(),
    };
    Ok((step, upper))
}

/// The sub-fan left after removing the open star of σ (all cones containing
/// σ); used to continue processing the remaining circuits.
fn open_star_removal(cobfan: &Fan, sigma: &Cone) -> Result<Fan> {
    let mut cones: Vec<Vec<IntVec>> = Vec::new();
    for delta in cobfan.maximal_cones() {
        if !delta.contains_cone(sigma) {
            cones.push(cobfan.cone_rays(delta));
        } else {
            for &rid in sigma.ray_ids() {
                let face = delta.without_ray(rid);
                if !face.is_empty() {
                    cones.push(cobfan.cone_rays(&face));
                }
            }
        }
    }
    Fan::assemble(cobfan.ambient_rank(), cones, cobfan.is_cobordism())
}

/// One wall crossing of a ≺₁-minimal circuit of a π-nonsingular cobordism
/// fan; also returns the cobordism minus the crossed circuit's open star.
pub fn elementary_step(cobfan: &Fan, sigma: &Cone) -> Result<(FactorizationStep, Fan)> {
    ensure_cobordism(cobfan)?;
    if !cobordism::is_pi_nonsingular(cobfan)? {
        return Err(Error::NotPiNonsingular);
    }
    if !cobordism::is_circuit(cobfan, sigma) {
        return Err(Error::NotACircuit);
    }
    let (circuits, edges) = circuit_digraph(cobfan)?;
    let this = circuits
        .iter()
        .position(|c| c == sigma)
        .expect("σ is a circuit of the fan");
    if edges.iter().any(|&(_, j)| j == this) {
        return Err(Error::NotMinimal);
    }
    let lower = boundary_fans(cobfan)?.0;
    let (step, _) = step_core(cobfan, &lower, sigma)?;
    let remaining = open_star_removal(cobfan, sigma)?;
    Ok((step, remaining))
}

fn center_display(fan: &Fan, cone: &Cone) -> String {
    let rays: Vec<String> = fan
        .cone_rays(cone)
        .iter()
        .map(|r| {
            let coords: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("({})", coords.join(","))
        })
        .collect();
    rays.join(",")
}

/// Factorizes a cobordism fan into ordered elementary steps, desingularizing
/// first when needed. The report records the verification results.
pub fn factorize(cobfan: &Fan) -> Result<(Vec<FactorizationStep>, FactorizationReport)> {
    factorize_with(cobfan, None, desing::DEFAULT_ITERATION_CAP)
}

pub fn factorize_with(
    cobfan: &Fan,
    certificate: Option<&OrderCertificate>,
    iteration_cap: usize,
) -> Result<(Vec<FactorizationStep>, FactorizationReport)> {
    ensure_cobordism(cobfan)?;
    let (walked, trace) = desing::pi_desingularize_with_cap(cobfan, iteration_cap)?;
    let (initial_lower, final_upper) = boundary_fans(&walked)?;
    let order = circuit_order_with(&walked, certificate)?;

    let mut steps: Vec<FactorizationStep> = Vec::with_capacity(order.len());
    let mut lower = initial_lower.clone();
    for sigma in &order {
        let (step, next) = step_core(&walked, &lower, sigma)?;
        steps.push(step);
        lower = next;
    }
    if lower != final_upper {
        return Err(Error::InternalInvariant(
            "the chain does not end at the projected upper boundary".into(),
        ));
    }

    let mut center_smoothness = Vec::with_capacity(steps.len());
    let mut summary = Vec::with_capacity(steps.len());
    let mut chain_consistent = steps
        .first()
        .map_or(true, |s| s.lower_fan == initial_lower)
        && steps.last().map_or(true, |s| s.upper_fan == final_upper);
    for (i, step) in steps.iter().enumerate() {
        if let Some(next) = steps.get(i + 1) {
            chain_consistent &= step.upper_fan == next.lower_fan;
        }
        let lower_smooth = fan::multiplicity(&step.lower_fan, &step.lower_center).is_one();
        let upper_smooth = fan::multiplicity(&step.upper_fan, &step.upper_center).is_one();
        if !lower_smooth || !upper_smooth {
            return Err(Error::InternalInvariant(format!(
                "non-smooth center in step {}",
                i + 1
            )));
        }
        center_smoothness.push(CenterSmoothness { lower: lower_smooth, upper: upper_smooth });
        let lo_note = if step.lower_degenerate {
            " [no-op: v is already a ray of the lower fan]"
        } else {
            ""
        };
        let up_note = if step.upper_degenerate {
            " [no-op: v is already a ray of the upper fan]"
        } else {
            ""
        };
        summary.push(format!(
            "step {}: blowdown along V({}){} / blowup along V({}){}",
            i + 1,
            center_display(&step.lower_fan, &step.lower_center),
            lo_note,
            center_display(&step.upper_fan, &step.upper_center),
            up_note,
        ));
    }
    let non_degenerate_steps = steps
        .iter()
        .filter(|s| !s.lower_degenerate || !s.upper_degenerate)
        .count();
    let report = FactorizationReport {
        desing_performed: !trace.entries.is_empty(),
        desing_subdivisions: trace.entries.len(),
        initial_lower_fan: initial_lower,
        final_upper_fan: final_upper,
        center_smoothness,
        chain_consistent,
        non_degenerate_steps,
        summary,
    };
    Ok((steps, report))
}

/// The cobordism fan of a single blowup: prism over Σ in `N⁺`,
/// star-subdivided at `ρ = (Σ rays of c, 1)`, with every cone containing ±ν
/// removed. Its projected upper boundary is Σ and its projected lower
/// boundary is the star subdivision of Σ at the sum of `c`'s rays.
pub fn cobordism_of_blowup(sigma_fan: &Fan, center: &Cone) -> Result<Fan> {
    if sigma_fan.is_cobordism() {
        return Err(Error::Invalid(
            "the blowup construction starts from a fan in N, not a cobordism".into(),
        ));
    }
    if !sigma_fan.is_face(center) {
        return Err(Error::NotAFace);
    }
    if center.is_empty() {
        return Err(Error::Invalid("the blowup center must have dimension at least 1".into()));
    }
    if !fan::multiplicity(sigma_fan, center).is_one() {
        return Err(Error::NotSmoothCenter);
    }
    let n = sigma_fan.ambient_rank();
    let lift = |v: &IntVec| -> IntVec {
        let mut out = v.clone();
        out.push(BigInt::zero());
        out
    };
    let mut nu = vec![BigInt::zero(); n + 1];
    nu[n] = BigInt::one();
    let mut prism_cones: Vec<Vec<IntVec>> = Vec::new();
    for cone in sigma_fan.maximal_cones() {
        let lifted: Vec<IntVec> = sigma_fan.cone_rays(cone).iter().map(&lift).collect();
        let mut with_nu = lifted.clone();
        with_nu.push(nu.clone());
        prism_cones.push(lifted);
        prism_cones.push(with_nu);
    }
    let prism = Fan::assemble(n + 1, prism_cones, false)?;

    let mut rho = sigma_fan
        .cone_rays(center)
        .iter()
        .fold(vec![BigInt::zero(); n], |acc, r| lattice::add(&acc, r));
    rho.push(BigInt::one());
    let subdivided = fan::star_subdivide(&prism, &rho)?;

    let minus_nu: IntVec = nu.iter().map(|x| -x.clone()).collect();
    let kept: Vec<Vec<IntVec>> = subdivided
        .maximal_cones()
        .iter()
        .map(|c| subdivided.cone_rays(c))
        .filter(|rays| !rays.contains(&nu) && !rays.contains(&minus_nu))
        .collect();
    let result = Fan::assemble(n + 1, kept, true)?;
    result.validate(ValidateLevel::Full)?;
    Ok(result)
}

/// Combinatorial report of the weighted one-parameter action
/// `t·(x₁,…,x_{n+1}) = (t^{a₁}x₁,…)` on affine space.
#[derive(Clone, Debug)]
pub struct WeightActionReport {
    pub weights: Vec<BigInt>,
    /// Number of (leading) negative weights.
    pub alpha_split: usize,
    /// The standard orthant rewritten so the action direction is ν.
    pub cobordism_fan: Fan,
    pub lower_quotient_fan: Fan,
    pub upper_quotient_fan: Fan,
    /// Weights |a₁|,…,|a_α| of the generic fiber on the minus side, when the
    /// split makes it a weighted projective space (2 ≤ α ≤ n).
    pub fiber_weights_minus: Option<Vec<BigInt>>,
    /// Weights a_{α+1},…,a_{n+1} on the plus side (additionally α ≤ n−1).
    pub fiber_weights_plus: Option<Vec<BigInt>>,
}

/// Builds the single-cone cobordism of a weighted one-parameter action with
/// the given coprime weights (negative weights listed first).
pub fn from_weights(weights: &[BigInt]) -> Result<WeightActionReport> {
    if weights.len() < 2 {
        return Err(Error::BadWeights("need at least two weights".into()));
    }
    if weights.iter().any(|a| a.is_zero()) {
        return Err(Error::BadWeights("weights must be nonzero".into()));
    }
    let gcd = weights.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if !gcd.is_one() {
        return Err(Error::BadWeights(format!("weights have common factor {gcd}")));
    }
    let alpha = weights.iter().take_while(|a| a.is_negative()).count();
    if alpha == 0 {
        return Err(Error::BadWeights(
            "need at least one negative weight, listed first".into(),
        ));
    }
    if weights[alpha..].iter().any(|a| a.is_negative()) {
        return Err(Error::BadWeights(
            "negative weights must precede the positive ones".into(),
        ));
    }
    if alpha == weights.len() {
        return Err(Error::BadWeights("need at least one positive weight".into()));
    }

    let n_plus_one = weights.len();
    let u = crate::matrix::unimodular_extension(&[weights.to_vec()], n_plus_one)
        .expect("coprime weights extend to a basis");
    // u · a = e₁; compose with the swap of coordinates 1 and n+1 so the
    // action direction becomes ν.
    let mut u = u;
    u.swap(0, n_plus_one - 1);
    // cone rays = images of the orthant rays = columns of the row-major u
    let rays: Vec<IntVec> = (0..n_plus_one)
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect();
    let cone: Vec<usize> = (0..n_plus_one).collect();
    let cobordism_fan = fan::make_fan(n_plus_one, &rays, &[cone], true, ValidateLevel::Full)?;
    let (lower_quotient_fan, upper_quotient_fan) = boundary_fans(&cobordism_fan)?;

    let n = n_plus_one - 1;
    let (fiber_weights_minus, fiber_weights_plus) = if alpha >= 2 {
        let minus = Some(weights[..alpha].iter().map(|a| a.abs()).collect());
        let plus = if alpha <= n - 1 {
            Some(weights[alpha..].to_vec())
        } else {
            None
        };
        (minus, plus)
    } else {
        (None, None)
    };

    Ok(WeightActionReport {
        weights: weights.to_vec(),
        alpha_split: alpha,
        cobordism_fan,
        lower_quotient_fan,
        upper_quotient_fan,
        fiber_weights_minus,
        fiber_weights_plus,
    })
}

/// The dependence data of the unique circuit of a single-cone cobordism,
/// exposed for tests of the weight construction.
#[cfg(test)]
pub(crate) fn single_cone_relation(fan: &Fan) -> Result<cobordism::DependenceData> {
    let cone = fan.maximal_cones()[0].clone();
    cobordism::dependence_relation(fan, &cone)
}
