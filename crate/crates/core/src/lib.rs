//! Numerical toolkit for the classical bounded symmetric domains in their
//! Harish-Chandra realizations, built on the Hermitian Jordan triple systems
//! that describe them.

pub mod error;
pub mod kernel;
pub mod automorphism;
pub mod boundary;
pub mod domain;
pub mod linalg;
pub mod report;
pub mod rescaling;
pub mod sample;
pub mod triple;

pub use triple::{CMat, CVec, Cx, Kind, TripleSystem, DEFAULT_TOL};
pub use domain::{Domain, Location, PierceDecomposition, SpectralDecomposition};
pub use automorphism::{map_a_to_b, DomainMap, LinearMap, MapChain, Step, Transvection};
pub use kernel::KernelSpec;
pub use rescaling::{
    compact_grid, fit_grid, orbit_convergence_run, rescaling_pipeline, schwarz_balanced_check,
    truncated_prism_check, vigue_schwarz_scenario, OrbitRun, PrismReport, RescalingRun,
    RescalingStep, RunVerdict, SchwarzReport, VigueReport,
};
pub use boundary::{
    arc_component_basis, classify_boundary_point, disc_in_boundary_check, find_good_circle,
    is_shilov, peak_function, peak_verify, scan_bergman_det, BoundaryClassification, DiscReport,
    PeakFunction, ScanResult, ShilovEvidence,
};

pub use error::{Error, Result};
