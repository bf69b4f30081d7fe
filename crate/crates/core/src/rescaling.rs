//! The rigidity harness: Schwarz containments for balanced domains, the
//! norm-equality premise of Vigué's Schwarz lemma, orbit convergence toward
//! peak points, truncated prisms, and the rescaling pipeline whose limit is
//! a linear map.
//!
//! The pipeline conjugates a candidate self-map `F` by transvections along a
//! radial sequence `a_k = (1 - 1/k) p` toward a Shilov point `p`:
//!
//! ```text
//! G_k = g_{b_k}^{-1} ∘ F ∘ g_{a_k},   b_k = F(a_k).
//! ```
//!
//! For proper maps the `G_k` approach a linear biholomorphism; the harness
//! fits the best linear map on a fixed interior grid, records the
//! nonlinearity residual per step, and checks that the fitted limit is
//! spectral-norm nonexpansive in both directions.

use rand::Rng;

use crate::automorphism::{DomainMap, Transvection};
use crate::boundary::{classify_boundary_point, is_shilov};
use crate::domain::{Domain, Location};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sample;
use crate::triple::{CMat, CVec, Cx, COND_LIMIT, DEFAULT_TOL};

fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// Tolerance at which the pipeline declares its linear fit converged.
pub const CONVERGENCE_TOL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Schwarz lemma for convex balanced domains
// ---------------------------------------------------------------------------

/// Outcome of [`schwarz_balanced_check`].
#[derive(Clone, Debug)]
pub struct SchwarzReport {
    /// Largest `‖F'(0) x‖` over the boundary directions.
    pub max_derivative_norm: f64,
    /// Per level `r`: largest `‖F(r x)‖` over the directions.
    pub level_maxima: Vec<(f64, f64)>,
    /// Human-readable description of each violation (empty when passing).
    pub violations: Vec<String>,
}

impl SchwarzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify `F'(0)(D1) ⊆ D2` and `F(r D1) ⊆ r D2` on sampled directions.
///
/// `directions` must have spectral norm 1 in `d1`; `levels` are the radii
/// checked. Requires `F(0) = 0` to 1e-10.
pub fn schwarz_balanced_check(
    d1: &Domain,
    d2: &Domain,
    f: &dyn DomainMap,
    directions: &[CVec],
    levels: &[f64],
    tol: f64,
) -> Result<SchwarzReport> {
    let zero = d1.system().zero();
    let f0 = f.eval(&zero)?;
    if f0.norm() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Schwarz check requires F(0) = 0, got |F(0)| = {:.3e}",
            f0.norm()
        )));
    }
    let jac = f.jacobian(&zero)?;
    let mut violations = Vec::new();
    let mut max_deriv = 0.0f64;
    for x in directions {
        let image_norm = d2.spectral_norm(&(&jac * x));
        max_deriv = max_deriv.max(image_norm);
        if image_norm > 1.0 + tol {
            violations.push(format!(
                "derivative image outside the target ball: ‖F'(0)x‖ = {image_norm}"
            ));
        }
    }
    let mut level_maxima = Vec::with_capacity(levels.len());
    for &r in levels {
        let mut level_max = 0.0f64;
        for x in directions {
            let fx = f.eval(&(x * cx(r)))?;
            let norm = d2.spectral_norm(&fx);
            level_max = level_max.max(norm);
            if norm > r + tol {
                violations.push(format!(
                    "radial containment broken at r = {r}: ‖F(rx)‖ = {norm}"
                ));
            }
        }
        level_maxima.push((r, level_max));
    }
    Ok(SchwarzReport {
        max_derivative_norm: max_deriv,
        level_maxima,
        violations,
    })
}

// ---------------------------------------------------------------------------
// norm-equality premise of Vigué's Schwarz lemma
// ---------------------------------------------------------------------------

/// Outcome of [`vigue_schwarz_scenario`].
#[derive(Clone, Debug)]
pub struct VigueReport {
    /// Largest `| ‖F(z)‖ - ‖z‖ |` over the samples.
    pub max_deviation: f64,
    /// Whether the norm-equality premise held on every sample.
    pub premise_holds: bool,
    /// `CERTIFIED-AUTOMORPHISM-PREMISE` or `PREMISE-FAILED`.
    pub certificate: String,
}

/// Check the norm-equality certificate `‖F(z)‖ = ‖z‖` on an open set of
/// samples. When the premise holds, Vigué's Schwarz lemma for irreducible
/// domains upgrades `F` to an automorphism; the harness certifies the
/// premise only and never asserts the conclusion from finite data.
pub fn vigue_schwarz_scenario(
    dom: &Domain,
    f: &dyn DomainMap,
    samples: &[CVec],
) -> Result<VigueReport> {
    if !dom.kind().is_irreducible() {
        return Err(Error::InvalidArgument(
            "the norm-equality scenario requires an irreducible domain".into(),
        ));
    }
    let zero = dom.system().zero();
    let f0 = f.eval(&zero)?;
    if f0.norm() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "the norm-equality scenario requires F(0) = 0, got |F(0)| = {:.3e}",
            f0.norm()
        )));
    }
    let mut max_dev = 0.0f64;
    for z in samples {
        let fz = f.eval(z)?;
        max_dev = max_dev.max((dom.spectral_norm(&fz) - dom.spectral_norm(z)).abs());
    }
    let premise_holds = max_dev <= 1e-7;
    Ok(VigueReport {
        max_deviation: max_dev,
        premise_holds,
        certificate: if premise_holds {
            "CERTIFIED-AUTOMORPHISM-PREMISE".into()
        } else {
            "PREMISE-FAILED".into()
        },
    })
}

// ---------------------------------------------------------------------------
// Orbit convergence toward a peak point
// ---------------------------------------------------------------------------

/// Per-step sup distances of an automorphism orbit run.
#[derive(Clone, Debug)]
pub struct OrbitRun {
    /// `(k, s_k)` with `s_k = max over the grid of |φ_k(z) - p|`.
    pub sup_distances: Vec<(usize, f64)>,
    /// Whether `s_k` is nonincreasing over the second half of the run.
    pub eventually_decreasing: bool,
}

impl OrbitRun {
    pub fn last_sup(&self) -> f64 {
        self.sup_distances.last().map(|&(_, s)| s).unwrap_or(f64::NAN)
    }

    pub fn sup_at(&self, k: usize) -> Option<f64> {
        self.sup_distances
            .iter()
            .find(|&&(kk, _)| kk == k)
            .map(|&(_, s)| s)
    }
}

/// Build a deterministic evaluation grid in the closed ball of spectral
/// radius `radius`: the origin, the `±` radial points toward `p`, and seeded
/// random fill.
pub fn compact_grid<R: Rng>(
    dom: &Domain,
    p: &CVec,
    radius: f64,
    count: usize,
    rng: &mut R,
) -> Vec<CVec> {
    let mut grid = Vec::with_capacity(count + 4);
    grid.push(dom.system().zero());
    let pnorm = dom.spectral_norm(p);
    if pnorm > 0.0 {
        let unit = p * cx(1.0 / pnorm);
        grid.push(&unit * cx(radius));
        grid.push(&unit * cx(-radius));
        grid.push(&unit * Cx::new(0.0, radius));
    }
    while grid.len() < count {
        let t = rng.gen_range(0.0..radius);
        grid.push(sample::point_with_norm(dom, rng, t));
    }
    grid
}

/// Run `φ_k = map(a0 -> a_k)` along `a_k = (1 - 1/k) p` and record the sup
/// distance to the constant map `p` on the grid.
pub fn orbit_convergence_run(
    dom: &Domain,
    p: &CVec,
    a0: &CVec,
    k_max: usize,
    grid: &[CVec],
) -> Result<OrbitRun> {
    let shilov = is_shilov(dom, p, DEFAULT_TOL)?;
    if !shilov.is_shilov {
        return Err(Error::InvalidArgument(
            "orbit convergence requires a Shilov target (peak point)".into(),
        ));
    }
    if dom.contains(a0, DEFAULT_TOL) != Location::Interior {
        return Err(Error::InvalidArgument("a0 must be interior".into()));
    }
    let g0inv = Transvection::new(dom, a0)?.inverse();
    let mut sup_distances = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let ak = p * cx(1.0 - 1.0 / k as f64);
        let gk = Transvection::new(dom, &ak)?;
        let mut sup = 0.0f64;
        for z in grid {
            let w = gk.apply(&g0inv.apply(z)?)?;
            sup = sup.max((w - p).norm());
        }
        sup_distances.push((k, sup));
    }
    let half = sup_distances.len() / 2;
    let eventually_decreasing = sup_distances[half..]
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + 1e-12);
    Ok(OrbitRun {
        sup_distances,
        eventually_decreasing,
    })
}

// ---------------------------------------------------------------------------
// The rescaling pipeline
// ---------------------------------------------------------------------------

/// Verdict of a rescaling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunVerdict {
    /// The conjugated maps converged to a nonsingular linear map that is
    /// nonexpansive in both directions.
    LinearLimit,
    /// The run completed but no linear limit was certified.
    Failed,
    /// Some `F(a_k)` left the target domain.
    NotSelfMap,
}

/// One step of the rescaling record.
#[derive(Clone, Debug)]
pub struct RescalingStep {
    pub k: usize,
    /// The radial base point `a_k = (1 - 1/k) p`.
    pub a_k: CVec,
    /// Its image `b_k = F(a_k)`.
    pub b_k: CVec,
    /// Sup distance of `g_{a_k}` to the constant map `p` on the fit grid.
    pub phi_sup_dist: f64,
    /// Nonlinearity residual: `max |G_k(z) - L_k z|` over the fit grid.
    pub rho: f64,
    /// `‖L_k - L_{k-1}‖` (Frobenius); 0.0 at the first step.
    pub l_step: f64,
    /// The fitted linear map at this step.
    pub l: CMat,
    /// The exact derivative `G_k'(0)` by the chain rule.
    pub jac0: CMat,
}

/// Full record of a rescaling run.
#[derive(Clone, Debug)]
pub struct RescalingRun {
    pub steps: Vec<RescalingStep>,
    pub final_l: Option<CMat>,
    /// First step index at which `rho` and the L-increment both fell below
    /// [`CONVERGENCE_TOL`].
    pub converged_at: Option<usize>,
    /// Largest `| ‖Lx‖ - ‖x‖ |` over unit directions (final L).
    pub isometry_defect: f64,
    pub verdict: RunVerdict,
}

impl RescalingRun {
    pub fn final_rho(&self) -> f64 {
        self.steps.last().map(|s| s.rho).unwrap_or(f64::NAN)
    }
}

/// Seeded interior fit grid of `count` points of spectral norm below
/// `radius`.
pub fn fit_grid<R: Rng>(dom: &Domain, count: usize, radius: f64, rng: &mut R) -> Vec<CVec> {
    let mut grid = Vec::with_capacity(count);
    while grid.len() < count {
        let t = rng.gen_range(0.1 * radius..radius);
        grid.push(sample::point_with_norm(dom, rng, t));
    }
    grid
}

/// Run the rescaling pipeline for a candidate self-map `F: D1 -> D2` with
/// `F(0) = 0` toward the Shilov point `p` of `D1`.
pub fn rescaling_pipeline<R: Rng>(
    d1: &Domain,
    d2: &Domain,
    f: &dyn DomainMap,
    p: &CVec,
    k_max: usize,
    grid: &[CVec],
    rng: &mut R,
) -> Result<RescalingRun> {
    let shilov = is_shilov(d1, p, DEFAULT_TOL)?;
    if !shilov.is_shilov {
        return Err(Error::InvalidArgument(
            "the rescaling pipeline requires a Shilov target in ∂D1".into(),
        ));
    }
    // G_k(0) = 0 holds by construction (g_{b_k} is anchored at b_k = F(a_k)),
    // so F itself need not fix the origin; it only has to be a self-map.
    let zero = d1.system().zero();
    let f0 = f.eval(&zero)?;
    if d2.contains(&f0, DEFAULT_TOL) != Location::Interior {
        return Err(Error::InvalidArgument(
            "the rescaling pipeline requires F(0) interior to D2".into(),
        ));
    }
    let n1 = d1.dimension();
    if grid.len() < 4 * n1 * n1 {
        return Err(Error::InvalidArgument(format!(
            "fit grid needs at least 4 n² = {} points, got {}",
            4 * n1 * n1,
            grid.len()
        )));
    }
    // normal-equation Gram of the fixed grid, inverted once
    let mut gram = CMat::zeros(n1, n1);
    for z in grid {
        gram += z * z.adjoint();
    }
    let gram_inv = linalg::guarded_inverse(&gram, COND_LIMIT)?;

    let mut steps: Vec<RescalingStep> = Vec::with_capacity(k_max);
    let mut converged_at = None;
    let mut prev_l: Option<CMat> = None;
    for k in 1..=k_max {
        let ak = p * cx(1.0 - 1.0 / k as f64);
        let bk = f.eval(&ak)?;
        if d2.contains(&bk, DEFAULT_TOL) != Location::Interior {
            return Ok(RescalingRun {
                steps,
                final_l: None,
                converged_at: None,
                isometry_defect: f64::NAN,
                verdict: RunVerdict::NotSelfMap,
            });
        }
        let g1 = Transvection::new(d1, &ak)?;
        let g2_inv = Transvection::new(d2, &bk)?.inverse();
        // chain rule at the origin: G_k'(0) = g2inv'(b_k) F'(a_k) g1'(0)
        let jac0 = g2_inv.derivative(&bk)? * f.jacobian(&ak)? * g1.derivative(&zero)?;

        let mut cross = CMat::zeros(d2.dimension(), n1);
        let mut images = Vec::with_capacity(grid.len());
        let mut phi_sup = 0.0f64;
        for z in grid {
            let phi_z = g1.apply(z)?;
            phi_sup = phi_sup.max((&phi_z - p).norm());
            let gz = g2_inv.apply(&f.eval(&phi_z)?)?;
            cross += &gz * z.adjoint();
            images.push(gz);
        }
        let l = cross * &gram_inv;
        let mut rho = 0.0f64;
        for (z, gz) in grid.iter().zip(&images) {
            rho = rho.max((gz - &l * z).norm());
        }
        let l_step = prev_l
            .as_ref()
            .map(|pl| (&l - pl).norm())
            .unwrap_or(0.0);
        if converged_at.is_none() && k > 1 && rho <= CONVERGENCE_TOL && l_step <= CONVERGENCE_TOL {
            converged_at = Some(k);
        }
        prev_l = Some(l.clone());
        steps.push(RescalingStep {
            k,
            a_k: ak,
            b_k: bk,
            phi_sup_dist: phi_sup,
            rho,
            l_step,
            l,
            jac0,
        });
    }

    let final_l = steps.last().map(|s| s.l.clone());
    let (verdict, isometry_defect) = match &final_l {
        None => (RunVerdict::Failed, f64::NAN),
        Some(l) => {
            let mut defect = 0.0f64;
            let mut nonexpansive = true;
            for _ in 0..64 {
                let x = sample::boundary_point(d1, rng);
                let lx_norm = d2.spectral_norm(&(l * &x));
                defect = defect.max((lx_norm - 1.0).abs());
                if lx_norm > 1.0 + 1e-6 {
                    nonexpansive = false;
                }
            }
            let inverse_ok = match linalg::guarded_inverse(l, COND_LIMIT) {
                Ok(linv) => {
                    let mut ok = true;
                    for _ in 0..64 {
                        let y = sample::boundary_point(d2, rng);
                        if d1.spectral_norm(&(&linv * &y)) > 1.0 + 1e-6 {
                            ok = false;
                            break;
                        }
                    }
                    ok
                }
                Err(_) => false,
            };
            let rho_ok = steps.last().map(|s| s.rho <= CONVERGENCE_TOL).unwrap_or(false);
            if rho_ok && nonexpansive && inverse_ok {
                (RunVerdict::LinearLimit, defect)
            } else {
                (RunVerdict::Failed, defect)
            }
        }
    };
    Ok(RescalingRun {
        steps,
        final_l,
        converged_at,
        isometry_defect,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Truncated prisms
// ---------------------------------------------------------------------------

/// Outcome of [`truncated_prism_check`].
#[derive(Clone, Debug)]
pub struct PrismReport {
    pub circle_invariance_ok: bool,
    pub boundary_trace_ok: bool,
    pub radial_closure_ok: bool,
    pub absorption_ok: bool,
    /// The compact-ball index `s` used in the absorption check.
    pub absorption_s: usize,
    pub details: Vec<String>,
}

impl PrismReport {
    pub fn passed(&self) -> bool {
        self.circle_invariance_ok
            && self.boundary_trace_ok
            && self.radial_closure_ok
            && self.absorption_ok
    }
}

/// Verify the defining properties of the truncated prism
/// `V = { t e^{iθ} w : w ∈ W, θ ∈ grid, t ∈ levels }`:
/// circle invariance, the boundary trace at `t = 1`, radial closure, and the
/// disc-absorption property `Δ_z ⊂ (1 - 1/s) D̄ ∪ V` for interior prism
/// points.
pub fn truncated_prism_check(
    dom: &Domain,
    w_patch: &[CVec],
    v_levels: &[f64],
    theta_grid: usize,
    tol: f64,
) -> Result<PrismReport> {
    if w_patch.is_empty() {
        return Err(Error::InvalidArgument("empty prism base".into()));
    }
    if v_levels.iter().any(|&t| !(0.0 < t && t <= 1.0)) {
        return Err(Error::InvalidArgument(
            "prism levels must lie in (0, 1]".into(),
        ));
    }
    let t_min = v_levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut details = Vec::new();

    // base points must lie in the dense stratum
    for w in w_patch {
        let cls = classify_boundary_point(dom, w, tol)?;
        if cls.stratum_rank != 1 {
            return Err(Error::InvalidArgument(format!(
                "prism base point has stratum rank {}, expected 1",
                cls.stratum_rank
            )));
        }
    }

    // (a) circle invariance: the spectral norm (hence membership) is
    // invariant under the S¹ action
    let mut circle_ok = true;
    for w in w_patch {
        let base = dom.spectral_norm(w);
        for k in 0..theta_grid {
            let theta = std::f64::consts::TAU * k as f64 / theta_grid as f64;
            let rotated = w * Cx::from_polar(1.0, theta);
            if (dom.spectral_norm(&rotated) - base).abs() > 1e-10 {
                circle_ok = false;
                details.push(format!("rotation changed the spectral norm at θ = {theta}"));
            }
        }
    }

    // (b) boundary trace: the t = 1 shell classifies as boundary
    let mut trace_ok = true;
    for w in w_patch {
        for k in 0..theta_grid {
            let theta = std::f64::consts::TAU * k as f64 / theta_grid as f64;
            let z = w * Cx::from_polar(1.0, theta);
            if dom.contains(&z, tol.max(1e-9) * 10.0) != Location::Boundary
                || classify_boundary_point(dom, &z, tol).is_err()
            {
                trace_ok = false;
                details.push(format!("t = 1 sample not a classified boundary point (θ = {theta})"));
            }
        }
    }

    // (c) radial closure: interior levels stay interior, the top level is
    // the boundary trace
    let mut radial_ok = true;
    for w in w_patch {
        for &t in v_levels {
            let z = w * cx(t);
            let want = if t < 1.0 {
                Location::Interior
            } else {
                Location::Boundary
            };
            if dom.contains(&z, tol.max(1e-9) * 10.0) != want {
                radial_ok = false;
                details.push(format!("radial level t = {t} misclassified"));
            }
        }
    }

    // disc absorption: for interior prism points z, the analytic disc Δ_z is
    // covered by the compact ball (1 - 1/s) D̄ together with the prism
    let s = if t_min < 1.0 {
        (1.0 / (1.0 - t_min)).ceil() as usize + 1
    } else {
        2
    };
    let compact_radius = 1.0 - 1.0 / s as f64;
    let mut absorption_ok = true;
    for w in w_patch {
        for &t in v_levels.iter().filter(|&&t| t < 1.0) {
            let z = w * cx(t);
            let znorm = dom.spectral_norm(&z);
            if znorm <= 0.0 {
                continue;
            }
            for ri in 1..=8 {
                let r = 0.999 * ri as f64 / (8.0 * znorm);
                for k in 0..theta_grid {
                    let theta = std::f64::consts::TAU * k as f64 / theta_grid as f64;
                    let pt = &z * Cx::from_polar(r, theta);
                    let norm = dom.spectral_norm(&pt);
                    let in_compact = norm <= compact_radius + 1e-9;
                    let in_prism = norm >= t_min - 1e-9 && norm <= 1.0 + 1e-9;
                    if !in_compact && !in_prism {
                        absorption_ok = false;
                        details.push(format!(
                            "disc sample at norm {norm} escapes (1 - 1/{s}) D̄ ∪ V"
                        ));
                    }
                }
            }
        }
    }

    Ok(PrismReport {
        circle_invariance_ok: circle_ok,
        boundary_trace_ok: trace_ok,
        radial_closure_ok: radial_ok,
        absorption_ok,
        absorption_s: s,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{map_a_to_b, LinearMap, MapChain, Step};
    use crate::triple::Kind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rvec(parts: &[f64]) -> CVec {
        CVec::from_iterator(parts.len(), parts.iter().map(|&r| cx(r)))
    }

    fn unit_directions(dom: &Domain, count: usize, seed: u64) -> Vec<CVec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| sample::point_with_norm(dom, &mut rng, 1.0))
            .collect()
    }

    /// Componentwise square on the bidisc; only the harness checks need a
    /// nonlinear non-chain map.
    struct ComponentSquare;

    impl DomainMap for ComponentSquare {
        fn eval(&self, z: &CVec) -> Result<CVec> {
            Ok(z.map(|c| c * c))
        }

        fn jacobian(&self, z: &CVec) -> Result<CMat> {
            let n = z.len();
            let mut m = CMat::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = cx(2.0) * z[i];
            }
            Ok(m)
        }
    }

    #[test]
    fn schwarz_coordinate_swap_passes_with_equality() {
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        let swap = CMat::from_row_slice(2, 2, &[cx(0.0), cx(1.0), cx(1.0), cx(0.0)]);
        let dirs = unit_directions(&bidisc, 40, 1);
        let rep = schwarz_balanced_check(
            &bidisc,
            &bidisc,
            &LinearMap(swap),
            &dirs,
            &[0.25, 0.5, 0.75, 0.9],
            1e-8,
        )
        .unwrap();
        assert!(rep.passed());
        assert!((rep.max_derivative_norm - 1.0).abs() < 1e-9);
        for (r, m) in &rep.level_maxima {
            assert!((m - r).abs() < 1e-9);
        }
    }

    #[test]
    fn schwarz_transvection_round_trip_is_identity() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let a = rvec(&[0.4, 0.2]);
        let g = Transvection::new(&ball, &a).unwrap();
        let chain = MapChain {
            steps: vec![Step::Forward(g.clone()), Step::Inverse(g)],
        };
        let dirs = unit_directions(&ball, 30, 2);
        let rep =
            schwarz_balanced_check(&ball, &ball, &chain, &dirs, &[0.25, 0.5, 0.75, 0.9], 1e-8)
                .unwrap();
        assert!(rep.passed());
        for (r, m) in &rep.level_maxima {
            assert!((m - r).abs() < 1e-8);
        }
    }

    #[test]
    fn schwarz_component_square_contracts() {
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        let dirs = unit_directions(&bidisc, 30, 3);
        let rep = schwarz_balanced_check(
            &bidisc,
            &bidisc,
            &ComponentSquare,
            &dirs,
            &[0.25, 0.5, 0.75, 0.9],
            1e-8,
        )
        .unwrap();
        assert!(rep.passed());
        let at_half = rep
            .level_maxima
            .iter()
            .find(|(r, _)| (r - 0.5).abs() < 1e-12)
            .unwrap()
            .1;
        assert!(at_half <= 0.25 + 1e-12);
    }

    #[test]
    fn schwarz_monotonicity_across_levels() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let c = rvec(&[0.3, 0.1]);
        let g = Transvection::new(&ball, &c).unwrap();
        let chain = MapChain {
            steps: vec![Step::Forward(g.clone()), Step::Inverse(g)],
        };
        let dirs = unit_directions(&ball, 25, 4);
        let rep =
            schwarz_balanced_check(&ball, &ball, &chain, &dirs, &[0.25, 0.5, 0.75, 0.9], 1e-8)
                .unwrap();
        for w in rep.level_maxima.windows(2) {
            assert!(w[0].1 <= w[1].1 + 1e-10);
        }
    }

    #[test]
    fn schwarz_requires_origin_fixed() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let a = rvec(&[0.4, 0.0]);
        let g = Transvection::new(&ball, &a).unwrap();
        let chain = MapChain {
            steps: vec![Step::Forward(g)],
        };
        let dirs = unit_directions(&ball, 4, 5);
        assert!(schwarz_balanced_check(&ball, &ball, &chain, &dirs, &[0.5], 1e-8).is_err());
    }

    #[test]
    fn vigue_premise_examples() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let samples: Vec<CVec> = (0..50)
            .map(|_| sample::interior_point(&ball, &mut rng, 0.9))
            .collect();

        // identity: premise holds exactly
        let id = MapChain::identity();
        let rep = vigue_schwarz_scenario(&ball, &id, &samples).unwrap();
        assert!(rep.premise_holds);
        assert_eq!(rep.certificate, "CERTIFIED-AUTOMORPHISM-PREMISE");

        // transvection round trip followed by a unitary: spectral isometry
        let a = rvec(&[0.3, 0.2]);
        let g = Transvection::new(&ball, &a).unwrap();
        let t = 0.7_f64;
        let unitary = CMat::from_row_slice(
            2,
            2,
            &[cx(t.cos()), cx(-t.sin()), cx(t.sin()), cx(t.cos())],
        );
        let chain = MapChain {
            steps: vec![Step::Forward(g.clone()), Step::Inverse(g), Step::Linear(unitary)],
        };
        let rep = vigue_schwarz_scenario(&ball, &chain, &samples).unwrap();
        assert!(rep.premise_holds, "max deviation {}", rep.max_deviation);

        // contraction: premise fails at every non-zero sample
        let half = LinearMap(CMat::identity(2, 2) * cx(0.5));
        let rep = vigue_schwarz_scenario(&ball, &half, &samples).unwrap();
        assert!(!rep.premise_holds);
        assert_eq!(rep.certificate, "PREMISE-FAILED");

        // reducible domains are rejected
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        assert!(vigue_schwarz_scenario(&bidisc, &MapChain::identity(), &samples).is_err());
    }

    #[test]
    fn orbit_convergence_on_the_disc() {
        let disc = Domain::new(Kind::TypeI { p: 1, q: 1 }).unwrap();
        let p = rvec(&[1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = compact_grid(&disc, &p, 0.5, 24, &mut rng);
        let run = orbit_convergence_run(&disc, &p, &disc.system().zero(), 220, &grid).unwrap();
        assert!(run.eventually_decreasing);
        // analytic rate: sup over |z| <= 1/2 of |g_a(z) - 1| = 3/(k+1)
        let s = run.sup_at(200).unwrap();
        assert!((s - 3.0 / 201.0).abs() < 1e-3, "s_200 = {s}");
        // s_k * k stays bounded (empirical O(1/k) rate)
        for &(k, sk) in run.sup_distances.iter().filter(|&&(k, _)| k >= 50) {
            assert!(sk * k as f64 <= 4.0);
        }
    }

    #[test]
    fn orbit_convergence_rejects_non_shilov_targets() {
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = rvec(&[1.0, 0.3]);
        let grid = compact_grid(&bidisc, &p, 0.5, 8, &mut rng);
        assert!(
            orbit_convergence_run(&bidisc, &p, &bidisc.system().zero(), 10, &grid).is_err()
        );
    }

    #[test]
    fn pipeline_identity_map() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let p = rvec(&[1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let grid = fit_grid(&ball, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(
            &ball,
            &ball,
            &MapChain::identity(),
            &p,
            60,
            &grid,
            &mut rng,
        )
        .unwrap();
        assert_eq!(run.verdict, RunVerdict::LinearLimit);
        assert!(run.final_rho() < 1e-10);
        let l = run.final_l.unwrap();
        assert!((l - CMat::identity(2, 2)).norm() < 1e-8);
        assert!(run.converged_at.is_some());
    }

    #[test]
    fn pipeline_transvection_reaches_linear_unitary_limit() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let p = rvec(&[1.0, 0.0]);
        let c = rvec(&[0.3, 0.2]);
        let g = Transvection::new(&ball, &c).unwrap();
        let f = MapChain {
            steps: vec![Step::Forward(g)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let grid = fit_grid(&ball, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(&ball, &ball, &f, &p, 120, &grid, &mut rng).unwrap();
        assert_eq!(run.verdict, RunVerdict::LinearLimit);
        assert!(run.final_rho() < 1e-8, "rho = {}", run.final_rho());
        assert!(run.isometry_defect < 1e-6);
        // the fitted limit of an automorphism conjugation is unitary here
        let l = run.final_l.unwrap();
        assert!((l.adjoint() * &l - CMat::identity(2, 2)).norm() < 1e-6);
    }

    #[test]
    fn pipeline_record_invariants() {
        // a_k interior with increasing norm, b_k = F(a_k) to 1e-10, and the
        // fitted map agrees with the chain-rule derivative at 0 in the tail
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let p = rvec(&[1.0, 0.0]);
        let c = rvec(&[0.25, 0.15]);
        let g = Transvection::new(&ball, &c).unwrap();
        let f = MapChain {
            steps: vec![Step::Forward(g)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let grid = fit_grid(&ball, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(&ball, &ball, &f, &p, 80, &grid, &mut rng).unwrap();
        let mut prev_norm = -1.0f64;
        for step in &run.steps {
            let norm = ball.spectral_norm(&step.a_k);
            assert!(norm < 1.0 && norm >= prev_norm);
            prev_norm = norm;
            let fa = f.eval(&step.a_k).unwrap();
            assert!((&fa - &step.b_k).norm() <= 1e-10);
        }
        let last = run.steps.last().unwrap();
        assert!((&last.l - &last.jac0).norm() < 1e-7);
    }

    #[test]
    fn pipeline_bidisc_componentwise_moebius() {
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        let p = rvec(&[1.0, 1.0]);
        let c = rvec(&[0.2, -0.4]);
        let g = Transvection::new(&bidisc, &c).unwrap();
        let f = MapChain {
            steps: vec![Step::Forward(g)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = fit_grid(&bidisc, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(&bidisc, &bidisc, &f, &p, 120, &grid, &mut rng).unwrap();
        assert_eq!(run.verdict, RunVerdict::LinearLimit);
        let l = run.final_l.unwrap();
        // diagonal unimodular limit
        assert!(l[(0, 1)].norm() < 1e-7 && l[(1, 0)].norm() < 1e-7);
        assert!((l[(0, 0)].norm() - 1.0).abs() < 1e-7);
        assert!((l[(1, 1)].norm() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn pipeline_detects_non_automorphic_contraction() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let p = rvec(&[1.0, 0.0]);
        let f = LinearMap(CMat::identity(2, 2) * cx(0.5));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let grid = fit_grid(&ball, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(&ball, &ball, &f, &p, 120, &grid, &mut rng).unwrap();
        assert_eq!(run.verdict, RunVerdict::Failed);
    }

    #[test]
    fn pipeline_detects_maps_leaving_the_target() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let p = rvec(&[1.0, 0.0]);
        let f = LinearMap(CMat::identity(2, 2) * cx(1.5));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let grid = fit_grid(&ball, 24, 0.5, &mut rng);
        let run = rescaling_pipeline(&ball, &ball, &f, &p, 60, &grid, &mut rng).unwrap();
        assert_eq!(run.verdict, RunVerdict::NotSelfMap);
    }

    #[test]
    fn pipeline_map_chain_composed_with_map_a_to_b() {
        // F = g_c on type I(2,2) via map_a_to_b(0 -> c)
        let dom = Domain::new(Kind::TypeI { p: 2, q: 2 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let p = sample::shilov_point(&dom, &mut rng);
        let c = sample::interior_point(&dom, &mut rng, 0.5);
        let f = map_a_to_b(&dom, &dom.system().zero(), &c).unwrap();
        let grid = fit_grid(&dom, 70, 0.5, &mut rng);
        let run = rescaling_pipeline(&dom, &dom, &f, &p, 120, &grid, &mut rng).unwrap();
        assert!(run.final_rho() < 1e-8);
        assert!(run.isometry_defect < 1e-6);
    }

    #[test]
    fn truncated_prism_checks() {
        let bidisc = Domain::new(Kind::polydisc(2)).unwrap();
        let w = rvec(&[1.0, 0.2]);
        let rep = truncated_prism_check(&bidisc, &[w], &[0.85, 0.9, 0.95, 1.0], 16, DEFAULT_TOL)
            .unwrap();
        assert!(rep.passed(), "details: {:?}", rep.details);

        let ball = Domain::new(Kind::ball(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let w = sample::boundary_point(&ball, &mut rng);
        let rep =
            truncated_prism_check(&ball, &[w], &[0.8, 0.9, 1.0], 16, DEFAULT_TOL).unwrap();
        assert!(rep.passed(), "details: {:?}", rep.details);
    }

    #[test]
    fn truncated_prism_rejects_bad_levels() {
        let ball = Domain::new(Kind::ball(2)).unwrap();
        let w = rvec(&[1.0, 0.0]);
        assert!(truncated_prism_check(&ball, std::slice::from_ref(&w), &[0.0, 1.0], 8, DEFAULT_TOL).is_err());
        assert!(truncated_prism_check(&ball, &[w], &[0.5, 1.2], 8, DEFAULT_TOL).is_err());
    }
}
