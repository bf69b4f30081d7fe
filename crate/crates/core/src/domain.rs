//! Classical domains as spectral-norm unit balls: spectral decomposition,
//! membership, Pierce decomposition, and tripotent rank.
//!
//! Two independent decomposition routes are provided. The per-kind route uses
//! the singular value decomposition in the matrix chart (types I-III), the
//! closed two-term form (type IV), or componentwise decomposition (products).
//! The generic route uses only odd powers and the polynomial relation they
//! satisfy; it exists to cross-check the per-kind route and to serve abstract
//! inputs.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::triple::{CMat, CVec, Cx, Kind, TripleSystem, COND_LIMIT};

/// Relative gap under which spectral coefficients coalesce into one tripotent.
pub const MERGE_TOL: f64 = 1e-7;

/// Relative size under which a spectral coefficient is treated as zero.
pub const DROP_TOL: f64 = 1e-12;

fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// Spin-factor spectral data: the phase `φ = arg(q)/2`, the real part norm
/// `na`, and the orthogonalized imaginary part `(unit, nb)` of `e^{-iφ} x`.
/// The coefficients are `λ± = (na ± nb)/√2`.
///
/// Computing through `(na, nb)` instead of `sqrt(|x|⁴ - |q|²)` avoids the
/// catastrophic cancellation that the direct formula suffers near merged
/// spectra (the Shilov ray of the spin factor).
struct SpinSplit {
    phi: f64,
    a_unit: CVec,
    na: f64,
    b_unit: Option<CVec>,
    nb: f64,
}

fn spin_split(x: &CVec) -> Option<SpinSplit> {
    if x.norm() == 0.0 {
        return None;
    }
    let q: Cx = x.iter().map(|a| a * a).sum();
    let phi = 0.5 * q.arg();
    let y = x * Cx::from_polar(1.0, -phi);
    let a = y.map(|c| cx(c.re));
    let b_raw = y.map(|c| cx(c.im));
    let na = a.norm();
    let b = if na > 0.0 {
        let overlap: Cx = a.iter().zip(b_raw.iter()).map(|(p, r)| p * r).sum();
        &b_raw - &a * (overlap / cx(na * na))
    } else {
        b_raw
    };
    let nb = b.norm();
    // the removed phase makes b(y,y) = |q| >= 0, hence |a| >= |b|
    let (a_unit, na, b_opt, nb) = if na >= nb {
        let bu = if nb > 0.0 { Some(&b * cx(1.0 / nb)) } else { None };
        (&a * cx(1.0 / na), na, bu, nb)
    } else {
        // only reachable through rounding when na ~ nb; swap the roles
        let au = &b * cx(1.0 / nb);
        let bu = if na > 0.0 { Some(&a * cx(1.0 / na)) } else { None };
        (au, nb, bu, na)
    };
    Some(SpinSplit {
        phi,
        a_unit,
        na,
        b_unit: b_opt,
        nb,
    })
}

/// Membership of a point relative to the closed domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Spectral decomposition `x = Σ λ_i e_i` with strictly decreasing positive
/// coefficients and pairwise orthogonal tripotents.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub lambdas: Vec<f64>,
    pub frame: Vec<CVec>,
}

impl SpectralDecomposition {
    pub fn terms(&self) -> usize {
        self.lambdas.len()
    }

    /// Largest coefficient (0 for the empty decomposition).
    pub fn lambda_max(&self) -> f64 {
        self.lambdas.first().copied().unwrap_or(0.0)
    }

    /// `Σ λ_i e_i`.
    pub fn reconstruct(&self, dim: usize) -> CVec {
        let mut out = CVec::zeros(dim);
        for (lam, e) in self.lambdas.iter().zip(&self.frame) {
            out += e * cx(*lam);
        }
        out
    }

    /// Residuals of the defining invariants: reconstruction error, worst
    /// tripotency defect, worst pairwise orthogonality defect.
    pub fn residuals(&self, sys: &TripleSystem, x: &CVec) -> (f64, f64, f64) {
        let rec = (self.reconstruct(sys.dimension()) - x).norm();
        let mut trip = 0.0f64;
        for e in &self.frame {
            if let Ok(e3) = sys.odd_power(e, 1) {
                trip = trip.max(sys.trace_norm(&(e3 - e)));
            }
        }
        let mut orth = 0.0f64;
        for i in 0..self.frame.len() {
            for j in (i + 1)..self.frame.len() {
                if let Ok(d) = sys.op_d(&self.frame[i], &self.frame[j]) {
                    orth = orth.max(linalg::op_norm(&d));
                }
            }
        }
        (rec, trip, orth)
    }
}

/// Eigenspace bases of `D(e,e)` for the eigenvalues 0, 1, 2, orthonormal with
/// respect to the trace form.
#[derive(Clone, Debug)]
pub struct PierceDecomposition {
    pub bases: [Vec<CVec>; 3],
}

impl PierceDecomposition {
    pub fn dim(&self, j: usize) -> usize {
        self.bases[j].len()
    }

    /// Trace-form-orthogonal projection of `v` onto the eigenspace `V_j`.
    pub fn project(&self, sys: &TripleSystem, v: &CVec, j: usize) -> Result<CVec> {
        let mut out = CVec::zeros(v.len());
        for b in &self.bases[j] {
            let coeff = sys.trace_form(v, b)?;
            out += b * coeff;
        }
        Ok(out)
    }
}

/// A classical bounded symmetric domain: the open unit ball of the spectral
/// norm of its triple system.
#[derive(Clone, Debug)]
pub struct Domain {
    system: TripleSystem,
    rank: usize,
}

impl Domain {
    pub fn new(kind: Kind) -> Result<Self> {
        let rank = kind.rank();
        let system = TripleSystem::new(kind)?;
        Ok(Domain { system, rank })
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    pub fn kind(&self) -> &Kind {
        self.system.kind()
    }

    pub fn dimension(&self) -> usize {
        self.system.dimension()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Spectral norm `λ_1(x)`; 0 for the zero vector.
    pub fn spectral_norm(&self, x: &CVec) -> f64 {
        match self.kind() {
            Kind::TypeI { .. } | Kind::TypeII { .. } | Kind::TypeIII { .. } => {
                match self.system.chart_matrix(x) {
                    Ok(m) => {
                        if m.norm() == 0.0 {
                            0.0
                        } else {
                            m.singular_values().max()
                        }
                    }
                    Err(_) => f64::NAN,
                }
            }
            Kind::TypeIV { .. } => match spin_split(x) {
                None => 0.0,
                Some(s) => (s.na + s.nb) / 2.0_f64.sqrt(),
            },
            Kind::Product(_) => {
                let mut best = 0.0f64;
                for (sys, (off, d)) in self.system.factors().iter().zip(self.system.factor_offsets()) {
                    let dom = Domain {
                        system: sys.clone(),
                        rank: sys.kind().rank(),
                    };
                    let xs = CVec::from(x.rows(off, d).clone_owned());
                    best = best.max(dom.spectral_norm(&xs));
                }
                best
            }
        }
    }

    /// Interior / boundary / exterior test at tolerance `tol`.
    pub fn contains(&self, x: &CVec, tol: f64) -> Location {
        let norm = self.spectral_norm(x);
        if norm < 1.0 - tol {
            Location::Interior
        } else if norm <= 1.0 + tol {
            Location::Boundary
        } else {
            Location::Exterior
        }
    }

    /// Per-kind spectral decomposition. The zero vector yields the empty
    /// decomposition.
    pub fn spectral_decomposition(&self, x: &CVec, tol: f64) -> Result<SpectralDecomposition> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        let dec = match self.kind() {
            Kind::TypeI { .. } | Kind::TypeII { .. } | Kind::TypeIII { .. } => {
                self.decompose_svd(x)?
            }
            Kind::TypeIV { .. } => self.decompose_spin(x)?,
            Kind::Product(_) => self.decompose_product(x, tol)?,
        };
        self.validate_decomposition(&dec, x, tol)?;
        Ok(dec)
    }

    fn decompose_svd(&self, x: &CVec) -> Result<SpectralDecomposition> {
        let m = self.system.chart_matrix(x)?;
        if m.norm() == 0.0 {
            return Ok(SpectralDecomposition {
                lambdas: vec![],
                frame: vec![],
            });
        }
        let svd = m
            .clone()
            .try_svd(true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        let sv = svd.singular_values;
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
        let sigma_max = sv[order[0]];

        let mut lambdas = Vec::new();
        let mut frame = Vec::new();
        let mut cluster: Vec<usize> = Vec::new();
        let flush = |cluster: &mut Vec<usize>,
                         lambdas: &mut Vec<f64>,
                         frame: &mut Vec<CVec>|
         -> Result<()> {
            if cluster.is_empty() {
                return Ok(());
            }
            let lam = cluster.iter().map(|&i| sv[i]).sum::<f64>() / cluster.len() as f64;
            if lam > DROP_TOL * sigma_max {
                let mut e = CMat::zeros(m.nrows(), m.ncols());
                for &i in cluster.iter() {
                    let ui = u.column(i).clone_owned();
                    let vi = vt.row(i).adjoint();
                    e += ui * vi.adjoint();
                }
                lambdas.push(lam);
                frame.push(self.system.chart_coords(&e)?);
            }
            cluster.clear();
            Ok(())
        };
        for &i in &order {
            if let Some(&last) = cluster.last() {
                if (sv[last] - sv[i]).abs() > MERGE_TOL * sigma_max {
                    flush(&mut cluster, &mut lambdas, &mut frame)?;
                }
            }
            cluster.push(i);
        }
        flush(&mut cluster, &mut lambdas, &mut frame)?;
        Ok(SpectralDecomposition { lambdas, frame })
    }

    fn decompose_spin(&self, x: &CVec) -> Result<SpectralDecomposition> {
        let Some(split) = spin_split(x) else {
            return Ok(SpectralDecomposition {
                lambdas: vec![],
                frame: vec![],
            });
        };
        let sqrt2 = 2.0_f64.sqrt();
        let lam1 = (split.na + split.nb) / sqrt2;
        let lam2 = (split.na - split.nb) / sqrt2;
        let phase = Cx::from_polar(1.0, split.phi);

        if lam1 - lam2 <= MERGE_TOL * lam1 {
            // merged: x is a positive multiple of a maximal tripotent
            let lam = 0.5 * (lam1 + lam2);
            let e = x * cx(1.0 / lam);
            return Ok(SpectralDecomposition {
                lambdas: vec![lam],
                frame: vec![e],
            });
        }
        let v = split
            .b_unit
            .as_ref()
            .expect("nb = 0 implies lam1 = lam2, handled by the merge branch");
        let iv = v * Cx::new(0.0, 1.0);
        let f1 = (&split.a_unit + &iv) * (phase / cx(sqrt2));
        let f2 = (&split.a_unit - &iv) * (phase / cx(sqrt2));
        let mut lambdas = vec![lam1];
        let mut frame = vec![f1];
        if lam2 > DROP_TOL * lam1 {
            lambdas.push(lam2);
            frame.push(f2);
        }
        Ok(SpectralDecomposition { lambdas, frame })
    }

    fn decompose_product(&self, x: &CVec, tol: f64) -> Result<SpectralDecomposition> {
        let mut parts: Vec<(f64, CVec)> = Vec::new();
        for (sys, (off, d)) in self.system.factors().iter().zip(self.system.factor_offsets()) {
            let dom = Domain {
                system: sys.clone(),
                rank: sys.kind().rank(),
            };
            let xs = CVec::from(x.rows(off, d).clone_owned());
            let dec = dom.spectral_decomposition_unchecked(&xs, tol)?;
            for (lam, e) in dec.lambdas.into_iter().zip(dec.frame) {
                let mut lifted = CVec::zeros(self.dimension());
                lifted.rows_mut(off, d).copy_from(&e);
                parts.push((lam, lifted));
            }
        }
        if parts.is_empty() {
            return Ok(SpectralDecomposition {
                lambdas: vec![],
                frame: vec![],
            });
        }
        parts.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let lam_max = parts[0].0;
        let mut lambdas: Vec<f64> = Vec::new();
        let mut frame: Vec<CVec> = Vec::new();
        for (lam, e) in parts {
            match lambdas.last() {
                Some(&prev) if (prev - lam).abs() <= MERGE_TOL * lam_max => {
                    let k = lambdas.len() - 1;
                    let members = frame[k].clone() + &e;
                    frame[k] = members;
                    // merged coefficient: running mean keeps the residual second order
                    lambdas[k] = 0.5 * (prev + lam);
                }
                _ => {
                    lambdas.push(lam);
                    frame.push(e);
                }
            }
        }
        Ok(SpectralDecomposition { lambdas, frame })
    }

    fn spectral_decomposition_unchecked(&self, x: &CVec, tol: f64) -> Result<SpectralDecomposition> {
        match self.kind() {
            Kind::TypeI { .. } | Kind::TypeII { .. } | Kind::TypeIII { .. } => self.decompose_svd(x),
            Kind::TypeIV { .. } => self.decompose_spin(x),
            Kind::Product(_) => self.decompose_product(x, tol),
        }
    }

    fn validate_decomposition(
        &self,
        dec: &SpectralDecomposition,
        x: &CVec,
        tol: f64,
    ) -> Result<()> {
        let scale = dec.lambda_max().max(1.0);
        for w in dec.lambdas.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::Degeneracy(format!(
                    "spectral coefficients not strictly decreasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let (rec, trip, orth) = dec.residuals(&self.system, x);
        let check_tol = (tol * 100.0).max(1e-8) * scale;
        if rec > check_tol {
            return Err(Error::Degeneracy(format!(
                "spectral reconstruction residual {rec:.3e} exceeds {check_tol:.3e}"
            )));
        }
        if trip > check_tol {
            return Err(Error::Degeneracy(format!(
                "spectral frame tripotency residual {trip:.3e} exceeds {check_tol:.3e}"
            )));
        }
        if orth > check_tol {
            return Err(Error::Degeneracy(format!(
                "merged frames are not orthogonal: residual {orth:.3e} exceeds {check_tol:.3e}"
            )));
        }
        Ok(())
    }

    /// Generic decomposition through odd powers only: the real span of the
    /// odd powers fixes the number of terms `s`, the monic degree-`s`
    /// polynomial relation among them has the `λ_i²` as roots, and a
    /// Vandermonde solve recovers the frame. Reports an error instead of
    /// guessing whenever validation fails.
    pub fn spectral_decomposition_generic(
        &self,
        x: &CVec,
        tol: f64,
    ) -> Result<SpectralDecomposition> {
        let n = self.dimension();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if x.norm() == 0.0 {
            return Ok(SpectralDecomposition {
                lambdas: vec![],
                frame: vec![],
            });
        }
        let r = self.rank;
        let mut powers: Vec<CVec> = Vec::with_capacity(r + 1);
        for p in 0..=r {
            powers.push(self.system.odd_power(x, p)?);
        }
        // dimension of the real span of the odd powers
        let mut gram = DMatrix::<f64>::zeros(r + 1, r + 1);
        for i in 0..=r {
            for j in 0..=r {
                gram[(i, j)] = powers[i].dotc(&powers[j]).re;
            }
        }
        let eig = gram.symmetric_eigen();
        let gmax = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let s = eig
            .eigenvalues
            .iter()
            .filter(|&&v| v > 1e-20_f64.max(1e-13 * gmax))
            .count();
        if s == 0 || s > r {
            return Err(Error::NumericalFailure(format!(
                "odd-power span dimension {s} outside 1..={r}"
            )));
        }
        // least-squares for the monic polynomial relation sum_j c_j x^(2j+1) = -x^(2s+1)
        let mut a = DMatrix::<f64>::zeros(2 * n, s);
        let mut b = nalgebra::DVector::<f64>::zeros(2 * n);
        for j in 0..s {
            for i in 0..n {
                a[(i, j)] = powers[j][i].re;
                a[(n + i, j)] = powers[j][i].im;
            }
        }
        for i in 0..n {
            b[i] = -powers[s][i].re;
            b[n + i] = -powers[s][i].im;
        }
        let coeffs = (a.transpose() * &a)
            .lu()
            .solve(&(a.transpose() * b))
            .ok_or_else(|| Error::NumericalFailure("polynomial relation solve failed".into()))?;
        // companion matrix of t^s + c_{s-1} t^{s-1} + ... + c_0
        let mut comp = DMatrix::<f64>::zeros(s, s);
        for i in 1..s {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..s {
            comp[(i, s - 1)] = -coeffs[i];
        }
        let roots = comp.complex_eigenvalues();
        let mut lam2: Vec<f64> = Vec::with_capacity(s);
        for root in roots.iter() {
            if root.im.abs() > 1e-6 * (1.0 + root.re.abs()) || root.re <= 0.0 {
                return Err(Error::NumericalFailure(format!(
                    "odd-power polynomial root {root} is not positive real; decomposition unknown"
                )));
            }
            lam2.push(root.re);
        }
        lam2.sort_by(|p, q| q.partial_cmp(p).unwrap());
        // Vandermonde solve for f_i = lambda_i e_i
        let mut vand = CMat::zeros(s, s);
        for p in 0..s {
            for i in 0..s {
                vand[(p, i)] = cx(lam2[i].powi(p as i32));
            }
        }
        let vinv = linalg::guarded_inverse(&vand, COND_LIMIT)?;
        let mut frame = Vec::with_capacity(s);
        let mut lambdas = Vec::with_capacity(s);
        for i in 0..s {
            let mut f = CVec::zeros(n);
            for p in 0..s {
                f += &powers[p] * vinv[(i, p)];
            }
            let lam = lam2[i].sqrt();
            lambdas.push(lam);
            frame.push(f * cx(1.0 / lam));
        }
        let dec = SpectralDecomposition { lambdas, frame };
        self.validate_decomposition(&dec, x, tol.max(1e-7))?;
        Ok(dec)
    }

    /// Pierce decomposition with respect to the tripotent `e`: eigenspaces of
    /// `D(e,e)` for the eigenvalues 0, 1, 2.
    pub fn pierce(&self, e: &CVec, tol: f64) -> Result<PierceDecomposition> {
        if !self.system.is_tripotent(e, tol) {
            return Err(Error::InvalidArgument(
                "pierce decomposition requires a tripotent".into(),
            ));
        }
        let d = self.system.op_d(e, e)?;
        // conjugate into a trace-form-orthonormal basis, where D(e,e) is Hermitian
        let h = self.system.gram_sqrt() * &d * self.system.gram_sqrt_inv();
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        // eigenvalues farther than 10 tol from {0, 1, 2} signal a breakdown
        let cluster_tol = 10.0 * tol.max(1e-13);
        let mut bases: [Vec<CVec>; 3] = [vec![], vec![], vec![]];
        for (i, &v) in vals.iter().enumerate() {
            let j = v.round();
            if !(0.0..=2.0).contains(&j) || (v - j).abs() > cluster_tol {
                return Err(Error::NumericalFailure(format!(
                    "Pierce eigenvalue {v} is not close to {{0, 1, 2}}"
                )));
            }
            let w = self.system.gram_sqrt_inv() * vecs.column(i).clone_owned();
            bases[j as usize].push(CVec::from(w));
        }
        Ok(PierceDecomposition { bases })
    }

    /// Rank of a nonzero tripotent: the number of primitive tripotents in an
    /// orthogonal decomposition, computed per kind through the chart.
    pub fn tripotent_rank(&self, e: &CVec) -> Result<usize> {
        if !self.system.is_tripotent(e, 1e-6) {
            return Err(Error::InvalidArgument(
                "tripotent rank requires a tripotent".into(),
            ));
        }
        self.tripotent_rank_unchecked(e)
    }

    fn tripotent_rank_unchecked(&self, e: &CVec) -> Result<usize> {
        if e.norm() == 0.0 {
            return Ok(0);
        }
        match self.kind() {
            Kind::TypeI { .. } | Kind::TypeIII { .. } => {
                let m = self.system.chart_matrix(e)?;
                Ok(m.singular_values().iter().filter(|&&s| s > 0.5).count())
            }
            Kind::TypeII { .. } => {
                let m = self.system.chart_matrix(e)?;
                Ok(m.singular_values().iter().filter(|&&s| s > 0.5).count() / 2)
            }
            Kind::TypeIV { m } => {
                if *m == 1 {
                    return Ok(1);
                }
                let q: Cx = e.iter().map(|a| a * a).sum();
                let nx2 = e.norm_squared();
                Ok(if q.norm() >= 0.5 * nx2 { 2 } else { 1 })
            }
            Kind::Product(_) => {
                let mut total = 0;
                for (sys, (off, d)) in self.system.factors().iter().zip(self.system.factor_offsets())
                {
                    let dom = Domain {
                        system: sys.clone(),
                        rank: sys.kind().rank(),
                    };
                    let es = CVec::from(e.rows(off, d).clone_owned());
                    total += dom.tripotent_rank_unchecked(&es)?;
                }
                Ok(total)
            }
        }
    }

    /// A tripotent is maximal iff its Pierce space `V_0` vanishes.
    pub fn is_maximal(&self, e: &CVec, tol: f64) -> Result<bool> {
        Ok(self.pierce(e, tol)?.dim(0) == 0)
    }

    /// A tripotent with `V_2 = C e` is primitive (and conversely for the
    /// classical kinds).
    pub fn is_primitive(&self, e: &CVec, tol: f64) -> Result<bool> {
        Ok(self.pierce(e, tol)?.dim(2) == 1)
    }
}
