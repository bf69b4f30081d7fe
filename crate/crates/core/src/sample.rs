//! Seeded random sampling of points, boundary points, and tripotents.
//!
//! Every sampler takes the RNG explicitly so that a single seed pins down an
//! entire run (tests, harness sweeps, CLI reports).

use rand::Rng;

use crate::domain::Domain;
use crate::triple::{CVec, Cx, DEFAULT_TOL};

/// Standard complex Gaussian vector in the chart of `dom`.
pub fn gaussian_vector<R: Rng>(dom: &Domain, rng: &mut R) -> CVec {
    let n = dom.dimension();
    CVec::from_fn(n, |_, _| {
        // Box-Muller
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let u3: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u4: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Cx::new(
            (-2.0 * u1.ln()).sqrt() * u2.cos(),
            (-2.0 * u3.ln()).sqrt() * u4.cos(),
        )
    })
}

/// Random point rescaled to the exact target spectral norm.
pub fn point_with_norm<R: Rng>(dom: &Domain, rng: &mut R, target: f64) -> CVec {
    loop {
        let x = gaussian_vector(dom, rng);
        let norm = dom.spectral_norm(&x);
        if norm > 1e-12 {
            return x * Cx::new(target / norm, 0.0);
        }
    }
}

/// Random interior point with spectral norm uniform in `(0, max_norm)`.
pub fn interior_point<R: Rng>(dom: &Domain, rng: &mut R, max_norm: f64) -> CVec {
    let t: f64 = rng.gen_range(0.0..max_norm);
    point_with_norm(dom, rng, t)
}

/// Random boundary point (spectral norm 1). Generic draws land in the dense
/// rank-1 stratum almost surely.
pub fn boundary_point<R: Rng>(dom: &Domain, rng: &mut R) -> CVec {
    point_with_norm(dom, rng, 1.0)
}

/// Random nonzero tripotent: a random subset of the spectral frame of a
/// generic point.
pub fn tripotent<R: Rng>(dom: &Domain, rng: &mut R) -> CVec {
    loop {
        let x = gaussian_vector(dom, rng);
        let Ok(dec) = dom.spectral_decomposition(&x, DEFAULT_TOL) else {
            continue;
        };
        if dec.terms() == 0 {
            continue;
        }
        let mut e = CVec::zeros(dom.dimension());
        let mut picked = false;
        for f in &dec.frame {
            if rng.gen_bool(0.5) {
                e += f;
                picked = true;
            }
        }
        if !picked {
            e += &dec.frame[0];
        }
        if dom.system().is_tripotent(&e, 1e-7) {
            return e;
        }
    }
}

/// Two orthogonal nonzero tripotents (disjoint subsets of one frame).
/// Returns `None` when the sampled frame has a single term.
pub fn orthogonal_tripotent_pair<R: Rng>(dom: &Domain, rng: &mut R) -> Option<(CVec, CVec)> {
    let x = gaussian_vector(dom, rng);
    let dec = dom.spectral_decomposition(&x, DEFAULT_TOL).ok()?;
    if dec.terms() < 2 {
        return None;
    }
    let split = rng.gen_range(1..dec.terms());
    let mut e1 = CVec::zeros(dom.dimension());
    let mut e2 = CVec::zeros(dom.dimension());
    for (i, f) in dec.frame.iter().enumerate() {
        if i < split {
            e1 += f;
        } else {
            e2 += f;
        }
    }
    Some((e1, e2))
}

/// Random maximal tripotent: the full-frame sum of a generic point, i.e. a
/// Shilov boundary point.
pub fn shilov_point<R: Rng>(dom: &Domain, rng: &mut R) -> CVec {
    loop {
        let x = gaussian_vector(dom, rng);
        let Ok(dec) = dom.spectral_decomposition(&x, DEFAULT_TOL) else {
            continue;
        };
        if dec.terms() == 0 {
            continue;
        }
        let mut e = CVec::zeros(dom.dimension());
        for f in &dec.frame {
            e += f;
        }
        if !dom.system().is_tripotent(&e, 1e-7) {
            continue;
        }
        if matches!(dom.is_maximal(&e, 1e-7), Ok(true)) {
            return e;
        }
    }
}

/// Random boundary point of the dense stratum: top spectral term clamped to
/// one, the rest kept strictly interior. Resamples until the tripotent part
/// has rank 1.
pub fn stratum_one_boundary_point<R: Rng>(dom: &Domain, rng: &mut R) -> CVec {
    loop {
        let x = gaussian_vector(dom, rng);
        let Ok(dec) = dom.spectral_decomposition(&x, DEFAULT_TOL) else {
            continue;
        };
        if dec.terms() == 0 {
            continue;
        }
        if dec.terms() > 1 && dec.lambdas[1] / dec.lambdas[0] > 0.95 {
            continue; // keep the lower coefficients clear of the boundary
        }
        let mut w = dec.frame[0].clone();
        for (lam, f) in dec.lambdas.iter().zip(&dec.frame).skip(1) {
            w += f * Cx::new(lam / dec.lambdas[0], 0.0);
        }
        if matches!(dom.tripotent_rank(&dec.frame[0]), Ok(1)) {
            return w;
        }
    }
}
