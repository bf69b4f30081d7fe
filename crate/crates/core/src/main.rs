//! Command-line front door: build a domain from a one-line spec, run the
//! decomposition / classification / scan / rigidity operations, and emit
//! JSON and CSV reports.
//!
//! Exit codes: 0 when every check passed, 1 when a mathematical check
//! failed, 2 on usage or parse errors.

use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symdom::automorphism::{MapChain, Step, Transvection};
use symdom::boundary;
use symdom::domain::{Domain, Location};
use symdom::report::{self, ClassifyReport, DecomposeReport, RigidityReport, ScanReport};
use symdom::rescaling::{self, RunVerdict};
use symdom::triple::{CMat, CVec, Cx, Kind};

#[derive(Parser)]
#[command(
    name = "symdom",
    version,
    about = "Classical bounded symmetric domains: spectral decompositions, boundary strata, automorphisms, rigidity runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Domain spec: ball:n, I:p,q, II:m, III:m, IV:m, prod(spec;spec;...)
    #[arg(long)]
    domain: String,
    /// Tolerance for residual checks
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// RNG seed for all randomized sampling
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral decomposition of a point with invariant residuals
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Point: comma-separated complex entries (a+bi), or diag(...)
        #[arg(long)]
        point: String,
    },
    /// Boundary classification and Shilov evidence
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        point: String,
    },
    /// Scan |det B(e^{i theta} w, p)| over a circle grid
    Scan {
        #[command(flatten)]
        common: Common,
        /// Circle direction w
        #[arg(long)]
        w: String,
        /// Boundary reference point p
        #[arg(long)]
        p: String,
        /// Number of grid angles
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Write CSV rows (theta, |det B|) here; stdout when omitted
        #[arg(long)]
        csv: Option<String>,
    },
    /// Rescaling pipeline run toward a Shilov point
    Rigidity {
        #[command(flatten)]
        common: Common,
        /// Target domain spec; defaults to --domain
        #[arg(long)]
        domain2: Option<String>,
        /// Map chain: steps separated by '|'; each step is id, scale:r,
        /// transvection:<point>, invtransvection:<point>, or linear:<entries>
        #[arg(long, default_value = "id")]
        map: String,
        /// Shilov target point p
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 400)]
        kmax: usize,
        /// Fit-grid size; defaults to max(4 n^2, 24)
        #[arg(long)]
        grid_points: Option<usize>,
        /// Write per-k CSV rows here
        #[arg(long)]
        csv: Option<String>,
    },
}

/// Errors split by exit code: usage problems (2) vs. failed mathematics (1).
enum CliError {
    Usage(String),
    Math(String),
}

impl From<symdom::Error> for CliError {
    fn from(e: symdom::Error) -> Self {
        CliError::Math(e.to_string())
    }
}

fn parse_complex(tok: &str) -> Result<Cx, CliError> {
    let cleaned: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
    let normalized = match cleaned.as_str() {
        "i" => "1i".to_string(),
        "-i" => "-1i".to_string(),
        other => other.to_string(),
    };
    Cx::from_str(&normalized)
        .map_err(|_| CliError::Usage(format!("cannot parse complex number '{tok}'")))
}

fn parse_point(kind: &Kind, s: &str) -> Result<CVec, CliError> {
    let s = s.trim();
    let n = kind.dimension();
    if let Some(inner) = s.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let entries = inner
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>, _>>()?;
        return diag_point(kind, &entries);
    }
    let entries = s
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != n {
        return Err(CliError::Usage(format!(
            "point has {} entries; domain {kind} needs {n}",
            entries.len()
        )));
    }
    Ok(CVec::from_column_slice(&entries))
}

fn diag_point(kind: &Kind, entries: &[Cx]) -> Result<CVec, CliError> {
    match kind {
        Kind::TypeI { p, q } if p == q => {
            if entries.len() != *p {
                return Err(CliError::Usage(format!(
                    "diag(...) needs {p} entries for {kind}"
                )));
            }
            let mut v = CVec::zeros(p * q);
            for (i, &d) in entries.iter().enumerate() {
                v[i * q + i] = d;
            }
            Ok(v)
        }
        Kind::TypeIII { m } => {
            if entries.len() != *m {
                return Err(CliError::Usage(format!(
                    "diag(...) needs {m} entries for {kind}"
                )));
            }
            let mut v = CVec::zeros(kind.dimension());
            let mut idx = 0;
            for (i, &entry) in entries.iter().enumerate() {
                for j in i..*m {
                    if i == j {
                        v[idx] = entry;
                    }
                    idx += 1;
                }
            }
            Ok(v)
        }
        _ => Err(CliError::Usage(format!(
            "diag(...) points apply to square type I and type III domains, not {kind}"
        ))),
    }
}

fn parse_chain<'d>(dom: &'d Domain, spec: &str) -> Result<MapChain<'d>, CliError> {
    let mut chain = MapChain::identity();
    for raw in spec.split('|') {
        let step = raw.trim();
        if step.is_empty() || step == "id" {
            continue;
        }
        if let Some(r) = step.strip_prefix("scale:") {
            let factor: f64 = r
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad scale factor '{r}'")))?;
            let n = dom.dimension();
            chain.push(Step::Linear(CMat::identity(n, n) * Cx::new(factor, 0.0)));
        } else if let Some(pt) = step
            .strip_prefix("invtransvection:")
            .or_else(|| step.strip_prefix("tinv:"))
        {
            let a = parse_point(dom.kind(), pt)?;
            let g = Transvection::new(dom, &a).map_err(CliError::from)?;
            chain.push(Step::Inverse(g));
        } else if let Some(pt) = step
            .strip_prefix("transvection:")
            .or_else(|| step.strip_prefix("t:"))
        {
            let a = parse_point(dom.kind(), pt)?;
            let g = Transvection::new(dom, &a).map_err(CliError::from)?;
            chain.push(Step::Forward(g));
        } else if let Some(entries) = step.strip_prefix("linear:") {
            let vals = entries
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            let n = dom.dimension();
            if vals.len() != n * n {
                return Err(CliError::Usage(format!(
                    "linear step needs {} entries, got {}",
                    n * n,
                    vals.len()
                )));
            }
            chain.push(Step::Linear(CMat::from_row_slice(n, n, &vals)));
        } else {
            return Err(CliError::Usage(format!("unknown chain step '{step}'")));
        }
    }
    Ok(chain)
}

fn emit(out: &Option<String>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, payload).map_err(|e| CliError::Math(format!("cannot write {path}: {e}")))
        }
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Decompose { common, point } => {
            let kind =
                Kind::from_str(&common.domain).map_err(|e| CliError::Usage(e.to_string()))?;
            let dom = Domain::new(kind.clone())?;
            let x = parse_point(&kind, &point)?;
            let dec = dom.spectral_decomposition(&x, common.tol)?;
            let residuals = dec.residuals(dom.system(), &x);
            let rep = DecomposeReport::new(kind.to_string(), &x, &dec, residuals, common.tol);
            let ok = rep.within_tolerance;
            emit(&common.out, &serde_json::to_string_pretty(&rep).unwrap())?;
            Ok(ok)
        }
        Command::Classify { common, point } => {
            let kind =
                Kind::from_str(&common.domain).map_err(|e| CliError::Usage(e.to_string()))?;
            let dom = Domain::new(kind.clone())?;
            let x = parse_point(&kind, &point)?;
            match dom.contains(&x, common.tol.max(1e-9) * 10.0) {
                Location::Boundary => {}
                loc => {
                    return Err(CliError::Math(format!(
                        "point is {loc:?}; classification applies to boundary points"
                    )))
                }
            }
            let cls = boundary::classify_boundary_point(&dom, &x, common.tol)?;
            let ev = boundary::is_shilov(&dom, &x, common.tol)?;
            let rep = ClassifyReport::new(kind.to_string(), &x, &cls, &ev);
            emit(&common.out, &serde_json::to_string_pretty(&rep).unwrap())?;
            Ok(true)
        }
        Command::Scan {
            common,
            w,
            p,
            grid,
            csv,
        } => {
            let kind =
                Kind::from_str(&common.domain).map_err(|e| CliError::Usage(e.to_string()))?;
            let dom = Domain::new(kind.clone())?;
            let wv = parse_point(&kind, &w)?;
            let pv = parse_point(&kind, &p)?;
            let scan = boundary::scan_bergman_det(&dom, &wv, &pv, grid)?;
            let csv_text = report::scan_csv(&scan);
            match &csv {
                Some(path) => fs::write(path, &csv_text)
                    .map_err(|e| CliError::Math(format!("cannot write {path}: {e}")))?,
                None => print!("{csv_text}"),
            }
            let rep = ScanReport::new(kind.to_string(), &wv, &pv, &scan);
            emit(&common.out, &serde_json::to_string_pretty(&rep).unwrap())?;
            Ok(true)
        }
        Command::Rigidity {
            common,
            domain2,
            map,
            p,
            kmax,
            grid_points,
            csv,
        } => {
            let kind1 =
                Kind::from_str(&common.domain).map_err(|e| CliError::Usage(e.to_string()))?;
            let kind2 = match &domain2 {
                Some(s) => Kind::from_str(s).map_err(|e| CliError::Usage(e.to_string()))?,
                None => kind1.clone(),
            };
            let d1 = Domain::new(kind1.clone())?;
            let d2 = Domain::new(kind2.clone())?;
            if d1.dimension() != d2.dimension() {
                return Err(CliError::Usage(
                    "rigidity runs need equidimensional domains".into(),
                ));
            }
            let pv = parse_point(&kind1, &p)?;
            let chain = parse_chain(&d2, &map)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let n = d1.dimension();
            let count = grid_points.unwrap_or((4 * n * n).max(24));
            let grid = rescaling::fit_grid(&d1, count, 0.5, &mut rng);
            let run = rescaling::rescaling_pipeline(&d1, &d2, &chain, &pv, kmax, &grid, &mut rng)?;
            if let Some(path) = &csv {
                fs::write(path, report::rigidity_csv(&run))
                    .map_err(|e| CliError::Math(format!("cannot write {path}: {e}")))?;
            }
            let rep = RigidityReport::new(
                kind1.to_string(),
                kind2.to_string(),
                map.clone(),
                &pv,
                kmax,
                common.seed,
                &run,
            );
            emit(&common.out, &serde_json::to_string_pretty(&rep).unwrap())?;
            Ok(run.verdict == RunVerdict::LinearLimit)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
