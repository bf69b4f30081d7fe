//! Serializable report types for the CLI: versioned JSON plus CSV rows for
//! the grid-style outputs.
//!
//! Complex scalars serialize as `[re, im]`, vectors as arrays of those, and
//! matrices row-major. No timestamps or host data appear anywhere, so a
//! fixed config and seed produce byte-identical reports.

use serde::Serialize;

use crate::boundary::{BoundaryClassification, ScanResult, ShilovEvidence};
use crate::domain::SpectralDecomposition;
use crate::rescaling::{RescalingRun, RunVerdict};
use crate::triple::{CMat, CVec};

/// Schema version stamped on every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

pub fn complex_json(c: &crate::triple::Cx) -> [f64; 2] {
    [c.re, c.im]
}

pub fn vector_json(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

pub fn matrix_json(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub schema: u32,
    pub domain: String,
    pub point: Vec<[f64; 2]>,
    pub lambdas: Vec<f64>,
    pub frame: Vec<Vec<[f64; 2]>>,
    pub residuals: DecomposeResiduals,
    pub within_tolerance: bool,
}

#[derive(Serialize)]
pub struct DecomposeResiduals {
    pub reconstruction: f64,
    pub tripotency: f64,
    pub orthogonality: f64,
}

impl DecomposeReport {
    pub fn new(
        domain: String,
        point: &CVec,
        dec: &SpectralDecomposition,
        residuals: (f64, f64, f64),
        tol: f64,
    ) -> Self {
        let scale = dec.lambda_max().max(1.0);
        let within = residuals.0 <= tol * scale * 10.0
            && residuals.1 <= tol * scale * 10.0
            && residuals.2 <= tol * scale * 10.0;
        DecomposeReport {
            schema: SCHEMA_VERSION,
            domain,
            point: vector_json(point),
            lambdas: dec.lambdas.clone(),
            frame: dec.frame.iter().map(vector_json).collect(),
            residuals: DecomposeResiduals {
                reconstruction: residuals.0,
                tripotency: residuals.1,
                orthogonality: residuals.2,
            },
            within_tolerance: within,
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub schema: u32,
    pub domain: String,
    pub point: Vec<[f64; 2]>,
    pub stratum: usize,
    pub e: Vec<[f64; 2]>,
    pub v: Vec<[f64; 2]>,
    pub interior_norm: f64,
    pub shilov: bool,
    pub evidence: ShilovEvidenceJson,
}

#[derive(Serialize)]
pub struct ShilovEvidenceJson {
    pub maximal: bool,
    pub v_norm: f64,
    pub euclid_norm: f64,
    pub max_euclid_radius: f64,
    pub at_max_distance: bool,
}

impl ClassifyReport {
    pub fn new(
        domain: String,
        point: &CVec,
        cls: &BoundaryClassification,
        ev: &ShilovEvidence,
    ) -> Self {
        ClassifyReport {
            schema: SCHEMA_VERSION,
            domain,
            point: vector_json(point),
            stratum: cls.stratum_rank,
            e: vector_json(&cls.e),
            v: vector_json(&cls.v),
            interior_norm: cls.interior_norm,
            shilov: ev.is_shilov,
            evidence: ShilovEvidenceJson {
                maximal: ev.maximal,
                v_norm: ev.v_norm,
                euclid_norm: ev.euclid_norm,
                max_euclid_radius: ev.max_euclid_radius,
                at_max_distance: ev.at_max_distance,
            },
        }
    }
}

#[derive(Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub domain: String,
    pub w: Vec<[f64; 2]>,
    pub p: Vec<[f64; 2]>,
    pub grid_size: usize,
    pub min_abs: f64,
    pub argmin_theta: f64,
}

impl ScanReport {
    pub fn new(domain: String, w: &CVec, p: &CVec, scan: &ScanResult) -> Self {
        ScanReport {
            schema: SCHEMA_VERSION,
            domain,
            w: vector_json(w),
            p: vector_json(p),
            grid_size: scan.rows.len(),
            min_abs: scan.min_abs,
            argmin_theta: scan.argmin_theta,
        }
    }
}

/// CSV rows `theta,abs_det_bergman` for a circle scan.
pub fn scan_csv(scan: &ScanResult) -> String {
    let mut out = String::from("theta,abs_det_bergman\n");
    for (theta, v) in &scan.rows {
        out.push_str(&format!("{theta},{v}\n"));
    }
    out
}

#[derive(Serialize)]
pub struct RigidityReport {
    pub schema: u32,
    pub domain1: String,
    pub domain2: String,
    pub map: String,
    pub p: Vec<[f64; 2]>,
    pub k_max: usize,
    pub seed: u64,
    pub rows: Vec<RigidityRow>,
    pub final_l: Option<Vec<Vec<[f64; 2]>>>,
    pub converged_at: Option<usize>,
    pub isometry_defect: f64,
    pub verdict: String,
}

#[derive(Serialize)]
pub struct RigidityRow {
    pub k: usize,
    pub a_k: Vec<[f64; 2]>,
    pub b_k: Vec<[f64; 2]>,
    pub phi_sup_dist: f64,
    pub rho: f64,
    pub l_step: f64,
}

pub fn verdict_string(v: RunVerdict) -> String {
    match v {
        RunVerdict::LinearLimit => "LINEAR_LIMIT".into(),
        RunVerdict::Failed => "FAILED".into(),
        RunVerdict::NotSelfMap => "NOT_SELF_MAP".into(),
    }
}

impl RigidityReport {
    pub fn new(
        domain1: String,
        domain2: String,
        map: String,
        p: &CVec,
        k_max: usize,
        seed: u64,
        run: &RescalingRun,
    ) -> Self {
        RigidityReport {
            schema: SCHEMA_VERSION,
            domain1,
            domain2,
            map,
            p: vector_json(p),
            k_max,
            seed,
            rows: run
                .steps
                .iter()
                .map(|s| RigidityRow {
                    k: s.k,
                    a_k: vector_json(&s.a_k),
                    b_k: vector_json(&s.b_k),
                    phi_sup_dist: s.phi_sup_dist,
                    rho: s.rho,
                    l_step: s.l_step,
                })
                .collect(),
            final_l: run.final_l.as_ref().map(matrix_json),
            converged_at: run.converged_at,
            isometry_defect: run.isometry_defect,
            verdict: verdict_string(run.verdict),
        }
    }
}

/// CSV rows `k,phi_sup_dist,rho,l_step` for plotting the pipeline.
pub fn rigidity_csv(run: &RescalingRun) -> String {
    let mut out = String::from("k,phi_sup_dist,rho,l_step\n");
    for s in &run.steps {
        out.push_str(&format!("{},{},{},{}\n", s.k, s.phi_sup_dist, s.rho, s.l_step));
    }
    out
}
