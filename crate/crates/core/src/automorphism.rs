//! Explicit automorphisms: transvections `g_a` and symbolic map chains.
//!
//! The transvection moving the origin to `a` is
//!
//! ```text
//! g_a(z) = a + B(a,a)^{1/2} z^{-a},
//! ```
//!
//! where `z^{-a}` is the quasi-inverse. In the `Q`-normalization used by this
//! crate (`{e,e,e} = 2e` at tripotents), the quasi-inverse is the resolvent
//! `(id + D(z,a)/2)^{-1} z`; on the disc this reproduces the Möbius map
//! `(z + a)/(1 + conj(a) z)` exactly. The derivative is
//! `g_a'(z) = B(a,a)^{1/2} ∘ B(z,-a)^{-1}` and the inverse is `g_{-a}`.
//!
//! `B(a,a)` is self-adjoint for the trace form, not for the standard
//! Hermitian structure, so its unique positive square root is taken after
//! conjugating into a trace-form-orthonormal basis.

use crate::domain::{Domain, Location};
use crate::error::{Error, Result};
use crate::linalg;
use crate::triple::{CMat, CVec, Cx, COND_LIMIT, DEFAULT_TOL};

fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// A holomorphic self-map suitable for the harness checks: pointwise
/// evaluation plus the complex Jacobian.
pub trait DomainMap {
    fn eval(&self, z: &CVec) -> Result<CVec>;
    fn jacobian(&self, z: &CVec) -> Result<CMat>;
}

/// The transvection `g_a` with its cached positive square root of `B(a,a)`.
#[derive(Clone, Debug)]
pub struct Transvection<'d> {
    domain: &'d Domain,
    a: CVec,
    sqrt_b: CMat,
}

impl<'d> Transvection<'d> {
    pub fn new(domain: &'d Domain, a: &CVec) -> Result<Self> {
        let norm = domain.spectral_norm(a);
        if norm >= 1.0 || norm.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "transvection base point must be interior; spectral norm {norm}"
            )));
        }
        let sys = domain.system();
        let b = sys.bergman(a, a)?;
        // conjugate into the trace-form-orthonormal basis where B(a,a) is Hermitian
        let h = sys.gram_sqrt() * &b * sys.gram_sqrt_inv();
        let s = linalg::hermitian_sqrt(&h, 1e-10)?;
        let sqrt_b = sys.gram_sqrt_inv() * s * sys.gram_sqrt();
        Ok(Transvection {
            domain,
            a: a.clone(),
            sqrt_b,
        })
    }

    pub fn domain(&self) -> &'d Domain {
        self.domain
    }

    pub fn base_point(&self) -> &CVec {
        &self.a
    }

    pub fn sqrt_b(&self) -> &CMat {
        &self.sqrt_b
    }

    /// `g_a(z)`; defined on the closed domain and a neighbourhood of it, with
    /// a condition-number guard on the resolvent solve.
    pub fn apply(&self, z: &CVec) -> Result<CVec> {
        let sys = self.domain.system();
        let n = sys.dimension();
        let resolvent = CMat::identity(n, n) + sys.op_d(z, &self.a)? * cx(0.5);
        let qz = linalg::guarded_solve(&resolvent, z, COND_LIMIT).map_err(|_| {
            Error::NumericalFailure(
                "transvection evaluated outside its extension domain (singular resolvent)".into(),
            )
        })?;
        Ok(&self.a + &self.sqrt_b * qz)
    }

    /// `g_a'(z) = B(a,a)^{1/2} ∘ B(z,-a)^{-1}`.
    pub fn derivative(&self, z: &CVec) -> Result<CMat> {
        let sys = self.domain.system();
        let b = sys.bergman(z, &(-&self.a))?;
        let binv = linalg::guarded_inverse(&b, COND_LIMIT)?;
        Ok(&self.sqrt_b * binv)
    }

    /// `g_a^{-1} = g_{-a}`; `B(-a,-a) = B(a,a)`, so the cached square root is
    /// shared.
    pub fn inverse(&self) -> Transvection<'d> {
        Transvection {
            domain: self.domain,
            a: -&self.a,
            sqrt_b: self.sqrt_b.clone(),
        }
    }

    /// Quasi-inverse route `a + B(a,a)^{1/2} B(z,-a)^{-1}(z + Q(z)a)`;
    /// algebraically identical to [`Self::apply`], kept as an independent
    /// cross-check of the resolvent formula.
    pub fn apply_via_bergman(&self, z: &CVec) -> Result<CVec> {
        let sys = self.domain.system();
        let b = sys.bergman(z, &(-&self.a))?;
        let qz_a = sys.op_q(z)?.apply(&self.a);
        let rhs = z + qz_a;
        let w = linalg::guarded_solve(&b, &rhs, COND_LIMIT)?;
        Ok(&self.a + &self.sqrt_b * w)
    }
}

/// One step of a symbolic composition.
#[derive(Clone, Debug)]
pub enum Step<'d> {
    /// Apply `g_a`.
    Forward(Transvection<'d>),
    /// Apply `g_a^{-1} = g_{-a}` (kept symbolic so inverses stay exact).
    Inverse(Transvection<'d>),
    /// Apply an explicit linear operator.
    Linear(CMat),
}

impl<'d> Step<'d> {
    fn eval(&self, z: &CVec) -> Result<CVec> {
        match self {
            Step::Forward(g) => g.apply(z),
            Step::Inverse(g) => g.inverse().apply(z),
            Step::Linear(m) => Ok(m * z),
        }
    }

    fn jacobian(&self, z: &CVec) -> Result<CMat> {
        match self {
            Step::Forward(g) => g.derivative(z),
            Step::Inverse(g) => g.inverse().derivative(z),
            Step::Linear(m) => Ok(m.clone()),
        }
    }
}

/// A composition of steps, applied in storage order (index 0 first).
#[derive(Clone, Debug, Default)]
pub struct MapChain<'d> {
    pub steps: Vec<Step<'d>>,
}

impl<'d> MapChain<'d> {
    pub fn identity() -> Self {
        MapChain { steps: vec![] }
    }

    pub fn push(&mut self, step: Step<'d>) {
        self.steps.push(step);
    }

    pub fn then(mut self, step: Step<'d>) -> Self {
        self.steps.push(step);
        self
    }
}

impl DomainMap for MapChain<'_> {
    fn eval(&self, z: &CVec) -> Result<CVec> {
        let mut w = z.clone();
        for step in &self.steps {
            w = step.eval(&w)?;
        }
        Ok(w)
    }

    /// Chain rule along the orbit of `z`.
    fn jacobian(&self, z: &CVec) -> Result<CMat> {
        let n = z.len();
        let mut w = z.clone();
        let mut jac = CMat::identity(n, n);
        for step in &self.steps {
            jac = step.jacobian(&w)? * jac;
            w = step.eval(&w)?;
        }
        Ok(jac)
    }
}

/// An explicit linear map as a [`DomainMap`].
#[derive(Clone, Debug)]
pub struct LinearMap(pub CMat);

impl DomainMap for LinearMap {
    fn eval(&self, z: &CVec) -> Result<CVec> {
        Ok(&self.0 * z)
    }

    fn jacobian(&self, _z: &CVec) -> Result<CMat> {
        Ok(self.0.clone())
    }
}

/// Serialized form of a transvection: domain kind plus base-point
/// coordinates. The cached square root of `B(a,a)` is recomputed on load, so
/// round trips agree to solver tolerance rather than bit-exactly.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TransvectionSpec {
    pub kind: String,
    pub a: Vec<[f64; 2]>,
}

impl Transvection<'_> {
    pub fn spec(&self) -> TransvectionSpec {
        TransvectionSpec {
            kind: self.domain.kind().to_string(),
            a: self.a.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TransvectionSpec {
    /// Rebuild the transvection on `domain`, which must carry the same kind.
    pub fn realize<'d>(&self, domain: &'d Domain) -> Result<Transvection<'d>> {
        if domain.kind().to_string() != self.kind {
            return Err(Error::InvalidArgument(format!(
                "transvection was serialized for {}, domain is {}",
                self.kind,
                domain.kind()
            )));
        }
        let a = CVec::from_iterator(self.a.len(), self.a.iter().map(|&[re, im]| Cx::new(re, im)));
        Transvection::new(domain, &a)
    }
}

/// The chain `g_b ∘ g_{-a}`, mapping `a` to `b`.
pub fn map_a_to_b<'d>(domain: &'d Domain, a: &CVec, b: &CVec) -> Result<MapChain<'d>> {
    for (name, pt) in [("a", a), ("b", b)] {
        if domain.contains(pt, DEFAULT_TOL) != Location::Interior {
            return Err(Error::InvalidArgument(format!(
                "map_a_to_b requires interior points; {name} is not interior"
            )));
        }
    }
    let ga = Transvection::new(domain, a)?;
    let gb = Transvection::new(domain, b)?;
    Ok(MapChain {
        steps: vec![Step::Inverse(ga), Step::Forward(gb)],
    })
}
