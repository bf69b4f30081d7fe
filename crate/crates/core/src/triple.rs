//! Positive Hermitian Jordan triple systems for the classical factors.
//!
//! The triple product `{x,y,z}` is symmetric bilinear in `x, z` and
//! conjugate-linear in `y`, normalized so that tripotents satisfy
//! `{e,e,e} = 2e` (equivalently `e^(3) = e` under the odd powers built from
//! `Q(x)y = {x,y,x}/2`). With this normalization the bounded symmetric domain
//! of each system is exactly the open unit ball of its spectral norm.
//!
//! Coordinate charts:
//! - type I(p,q): the p×q matrix, flattened row-major;
//! - type II(m): the strict upper triangle (row-major) of an antisymmetric
//!   m×m matrix;
//! - type III(m): the upper triangle including the diagonal (row-major) of a
//!   symmetric m×m matrix;
//! - type IV(m): the ambient vector of C^m itself;
//! - products: factor charts concatenated in order.
//!
//! Conjugate-linear operators (the `Q(x)` family) are stored as the complex
//! matrix `N` of their linear part, acting as `v -> N * conj(v)` where `conj`
//! is coordinatewise conjugation in the chart. Compositions follow
//! `Q(x)Q(y) v = N(x) conj(N(y)) v`, which is how the Bergman operator turns
//! back into an honest complex-linear matrix.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, conj_mat, conj_vec};

pub type Cx = Complex64;
pub type CVec = DVector<Cx>;
pub type CMat = DMatrix<Cx>;

/// Default relative tolerance for all residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Condition-number guard for resolvent and Bergman-operator solves.
pub const COND_LIMIT: f64 = 1e12;

fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// Cartan kind of a classical triple system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Rectangular matrices `M_{p,q}(C)`; the operator-norm unit ball.
    TypeI { p: usize, q: usize },
    /// Antisymmetric `m×m` matrices.
    TypeII { m: usize },
    /// Symmetric `m×m` matrices.
    TypeIII { m: usize },
    /// The spin factor on `C^m` (Lie ball).
    TypeIV { m: usize },
    /// Direct sum of factors; the triple product has no cross terms.
    Product(Vec<Kind>),
}

impl Kind {
    /// The Euclidean ball `B^n` realized as type I(1, n).
    pub fn ball(n: usize) -> Kind {
        Kind::TypeI { p: 1, q: n }
    }

    /// The polydisc realized as a product of discs.
    pub fn polydisc(n: usize) -> Kind {
        Kind::Product(vec![Kind::TypeI { p: 1, q: 1 }; n])
    }

    /// Ambient complex dimension of the chart.
    pub fn dimension(&self) -> usize {
        match self {
            Kind::TypeI { p, q } => p * q,
            Kind::TypeII { m } => m * (m - 1) / 2,
            Kind::TypeIII { m } => m * (m + 1) / 2,
            Kind::TypeIV { m } => *m,
            Kind::Product(fs) => fs.iter().map(|f| f.dimension()).sum(),
        }
    }

    /// Rank of the associated domain.
    pub fn rank(&self) -> usize {
        match self {
            Kind::TypeI { p, q } => (*p).min(*q),
            Kind::TypeII { m } => m / 2,
            Kind::TypeIII { m } => *m,
            Kind::TypeIV { m } => {
                if *m >= 2 {
                    2
                } else {
                    1
                }
            }
            Kind::Product(fs) => fs.iter().map(|f| f.rank()).sum(),
        }
    }

    /// `true` when the kind is a single classical factor.
    pub fn is_irreducible(&self) -> bool {
        !matches!(self, Kind::Product(_))
    }

    /// Maximal Euclidean distance from 0 attained on the closed domain
    /// (measured via [`TripleSystem::euclid_norm`]); attained exactly on the
    /// Shilov boundary.
    pub fn max_euclid_radius(&self) -> f64 {
        match self {
            Kind::TypeI { p, q } => ((*p).min(*q) as f64).sqrt(),
            Kind::TypeII { m } => (2.0 * (m / 2) as f64).sqrt(),
            Kind::TypeIII { m } => (*m as f64).sqrt(),
            Kind::TypeIV { .. } => 2.0_f64.sqrt(),
            Kind::Product(fs) => fs
                .iter()
                .map(|f| f.max_euclid_radius().powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            Kind::TypeI { p, q } => {
                if *p == 0 || *q == 0 {
                    return bad(format!("type I requires p, q >= 1, got ({p}, {q})"));
                }
            }
            Kind::TypeII { m } => {
                if *m < 2 {
                    return bad(format!("type II requires m >= 2, got {m}"));
                }
            }
            Kind::TypeIII { m } | Kind::TypeIV { m } => {
                if *m == 0 {
                    return bad(format!("matrix size must be >= 1, got {m}"));
                }
            }
            Kind::Product(fs) => {
                if fs.is_empty() {
                    return bad("empty product".into());
                }
                for f in fs {
                    f.validate()?;
                    if let Kind::Product(_) = f {
                        return bad("nested products are flattened at parse time".into());
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::TypeI { p, q } => write!(f, "I:{p},{q}"),
            Kind::TypeII { m } => write!(f, "II:{m}"),
            Kind::TypeIII { m } => write!(f, "III:{m}"),
            Kind::TypeIV { m } => write!(f, "IV:{m}"),
            Kind::Product(fs) => {
                write!(f, "prod(")?;
                for (i, k) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    /// Grammar: `ball:n`, `I:p,q`, `II:m`, `III:m`, `IV:m`,
    /// `prod(spec;spec;...)`, plus `disc` and `bidisc` shorthands.
    fn from_str(s: &str) -> Result<Kind> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse domain spec '{s}'"));
        let parse_usize = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        if s.eq_ignore_ascii_case("disc") {
            return Ok(Kind::TypeI { p: 1, q: 1 });
        }
        if s.eq_ignore_ascii_case("bidisc") {
            return Ok(Kind::polydisc(2));
        }
        if let Some(rest) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            // split on top-level ';' only (factors may themselves be products)
            let mut factors = Vec::new();
            let mut depth = 0usize;
            let mut start = 0usize;
            for (i, ch) in rest.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ';' if depth == 0 => {
                        factors.push(Kind::from_str(&rest[start..i])?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            factors.push(Kind::from_str(&rest[start..])?);
            // flatten nested products
            let mut flat = Vec::new();
            for f in factors {
                match f {
                    Kind::Product(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            let kind = Kind::Product(flat);
            kind.validate()?;
            return Ok(kind);
        }
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        let kind = match head.trim() {
            "ball" => Kind::ball(parse_usize(tail)?),
            "polydisc" => Kind::polydisc(parse_usize(tail)?),
            "I" | "i" => {
                let (p, q) = tail.split_once(',').ok_or_else(bad)?;
                Kind::TypeI {
                    p: parse_usize(p)?,
                    q: parse_usize(q)?,
                }
            }
            "II" | "ii" => Kind::TypeII { m: parse_usize(tail)? },
            "III" | "iii" => Kind::TypeIII { m: parse_usize(tail)? },
            "IV" | "iv" => Kind::TypeIV { m: parse_usize(tail)? },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// A conjugate-linear operator stored through its complex-linear part:
/// the operator acts as `v -> linear * conj(v)`.
#[derive(Clone, Debug)]
pub struct ConjLinear {
    pub linear: CMat,
}

impl ConjLinear {
    pub fn apply(&self, v: &CVec) -> CVec {
        &self.linear * conj_vec(v)
    }

    /// Complex-linear matrix of the composition `self ∘ other`.
    pub fn compose(&self, other: &ConjLinear) -> CMat {
        &self.linear * conj_mat(&other.linear)
    }
}

/// A positive Hermitian Jordan triple system on `C^n` with cached trace-form
/// data.
///
/// `gram` holds the trace form as `tf(x, y) = yᴴ G x`; `gram_sqrt` and
/// `gram_sqrt_inv` hold its positive square root and inverse, used to change
/// into a trace-form-orthonormal basis where trace-form-self-adjoint
/// operators become Hermitian in the ordinary sense.
#[derive(Clone, Debug)]
pub struct TripleSystem {
    kind: Kind,
    dim: usize,
    gram: CMat,
    gram_sqrt: CMat,
    gram_sqrt_inv: CMat,
    factor_systems: Vec<TripleSystem>,
}

impl TripleSystem {
    pub fn new(kind: Kind) -> Result<Self> {
        kind.validate()?;
        let dim = kind.dimension();
        let factor_systems = match &kind {
            Kind::Product(fs) => fs
                .iter()
                .cloned()
                .map(TripleSystem::new)
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        let mut sys = TripleSystem {
            kind,
            dim,
            gram: CMat::identity(dim, dim),
            gram_sqrt: CMat::identity(dim, dim),
            gram_sqrt_inv: CMat::identity(dim, dim),
            factor_systems,
        };
        // Trace-form Gram matrix G[i][j] = Tr D(e_j, e_i).
        let mut gram = CMat::zeros(dim, dim);
        for j in 0..dim {
            let ej = sys.basis_vector(j);
            for i in 0..dim {
                let ei = sys.basis_vector(i);
                let mut tr = Cx::new(0.0, 0.0);
                for k in 0..dim {
                    let ek = sys.basis_vector(k);
                    tr += sys.triple(&ej, &ei, &ek)?[k];
                }
                gram[(i, j)] = tr;
            }
        }
        let sqrt = linalg::hermitian_sqrt(&gram, 1e-12)?;
        let sqrt_inv = linalg::guarded_inverse(&sqrt, COND_LIMIT)?;
        sys.gram = gram;
        sys.gram_sqrt = sqrt;
        sys.gram_sqrt_inv = sqrt_inv;
        Ok(sys)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Trace-form Gram matrix (`tf(x,y) = yᴴ G x`).
    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// Positive square root of the Gram matrix.
    pub fn gram_sqrt(&self) -> &CMat {
        &self.gram_sqrt
    }

    pub fn gram_sqrt_inv(&self) -> &CMat {
        &self.gram_sqrt_inv
    }

    pub fn zero(&self) -> CVec {
        CVec::zeros(self.dim)
    }

    pub fn basis_vector(&self, j: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[j] = cx(1.0);
        v
    }

    fn check_dim(&self, v: &CVec) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    // ---- charts ------------------------------------------------------

    /// Matrix of a type I/II/III coordinate vector in its chart.
    pub fn chart_matrix(&self, x: &CVec) -> Result<CMat> {
        self.check_dim(x)?;
        match &self.kind {
            Kind::TypeI { p, q } => {
                let mut m = CMat::zeros(*p, *q);
                for i in 0..*p {
                    for j in 0..*q {
                        m[(i, j)] = x[i * q + j];
                    }
                }
                Ok(m)
            }
            Kind::TypeII { m } => {
                let mut a = CMat::zeros(*m, *m);
                let mut idx = 0;
                for i in 0..*m {
                    for j in (i + 1)..*m {
                        a[(i, j)] = x[idx];
                        a[(j, i)] = -x[idx];
                        idx += 1;
                    }
                }
                Ok(a)
            }
            Kind::TypeIII { m } => {
                let mut a = CMat::zeros(*m, *m);
                let mut idx = 0;
                for i in 0..*m {
                    for j in i..*m {
                        a[(i, j)] = x[idx];
                        a[(j, i)] = x[idx];
                        idx += 1;
                    }
                }
                Ok(a)
            }
            _ => Err(Error::InvalidArgument(
                "chart_matrix applies to matrix kinds I/II/III".into(),
            )),
        }
    }

    /// Inverse of [`chart_matrix`]. Type II inputs are antisymmetrized and
    /// type III inputs symmetrized before reading the triangle, so small
    /// numerical asymmetries are projected away.
    pub fn chart_coords(&self, a: &CMat) -> Result<CVec> {
        match &self.kind {
            Kind::TypeI { p, q } => {
                let mut x = CVec::zeros(self.dim);
                for i in 0..*p {
                    for j in 0..*q {
                        x[i * q + j] = a[(i, j)];
                    }
                }
                Ok(x)
            }
            Kind::TypeII { m } => {
                let proj = (a - a.transpose()) * cx(0.5);
                let mut x = CVec::zeros(self.dim);
                let mut idx = 0;
                for i in 0..*m {
                    for j in (i + 1)..*m {
                        x[idx] = proj[(i, j)];
                        idx += 1;
                    }
                }
                Ok(x)
            }
            Kind::TypeIII { m } => {
                let proj = (a + a.transpose()) * cx(0.5);
                let mut x = CVec::zeros(self.dim);
                let mut idx = 0;
                for i in 0..*m {
                    for j in i..*m {
                        x[idx] = proj[(i, j)];
                        idx += 1;
                    }
                }
                Ok(x)
            }
            _ => Err(Error::InvalidArgument(
                "chart_coords applies to matrix kinds I/II/III".into(),
            )),
        }
    }

    /// Offsets of the factor charts inside a product coordinate vector.
    pub fn factor_offsets(&self) -> Vec<(usize, usize)> {
        match &self.kind {
            Kind::Product(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                let mut off = 0;
                for f in fs {
                    let d = f.dimension();
                    out.push((off, d));
                    off += d;
                }
                out
            }
            _ => vec![(0, self.dim)],
        }
    }

    /// Factor systems of a product; a one-element slice (the system itself)
    /// otherwise.
    pub fn factors(&self) -> &[TripleSystem] {
        if self.factor_systems.is_empty() {
            std::slice::from_ref(self)
        } else {
            &self.factor_systems
        }
    }

    // ---- the triple product ------------------------------------------

    /// The Jordan triple product `{x, y, z}`.
    pub fn triple(&self, x: &CVec, y: &CVec, z: &CVec) -> Result<CVec> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        self.check_dim(z)?;
        match &self.kind {
            Kind::TypeI { .. } | Kind::TypeII { .. } | Kind::TypeIII { .. } => {
                let xm = self.chart_matrix(x)?;
                let ym = self.chart_matrix(y)?;
                let zm = self.chart_matrix(z)?;
                let ys = ym.adjoint();
                let res = &xm * &ys * &zm + &zm * &ys * &xm;
                self.chart_coords(&res)
            }
            Kind::TypeIV { .. } => {
                // {x,y,z} = <x,y> z + <z,y> x - (x·z) conj(y), with <.,.> the
                // Hermitian pairing and x·z the bilinear dot product.
                let herm_xy = y.dotc(x); // sum x_i conj(y_i)
                let herm_zy = y.dotc(z);
                let bilin_xz: Cx = x.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
                Ok(z * herm_xy + x * herm_zy - conj_vec(y) * bilin_xz)
            }
            Kind::Product(_) => {
                let mut out = CVec::zeros(self.dim);
                for (sys, (off, d)) in self.factors().iter().zip(self.factor_offsets()) {
                    let xs = CVec::from(x.rows(off, d).clone_owned());
                    let ys = CVec::from(y.rows(off, d).clone_owned());
                    let zs = CVec::from(z.rows(off, d).clone_owned());
                    let r = sys.triple(&xs, &ys, &zs)?;
                    out.rows_mut(off, d).copy_from(&r);
                }
                Ok(out)
            }
        }
    }

    /// Matrix of the linear operator `D(x,y): z -> {x,y,z}`.
    pub fn op_d(&self, x: &CVec, y: &CVec) -> Result<CMat> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut m = CMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.triple(x, y, &self.basis_vector(j))?;
            m.set_column(j, &col);
        }
        Ok(m)
    }

    /// The conjugate-linear operator `Q(x): y -> {x,y,x}/2`.
    pub fn op_q(&self, x: &CVec) -> Result<ConjLinear> {
        self.check_dim(x)?;
        let mut m = CMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            // Basis vectors are real, so the conjugate-linearity in slot 2
            // does not twist the columns.
            let col = self.triple(x, &self.basis_vector(j), x)? * cx(0.5);
            m.set_column(j, &col);
        }
        Ok(ConjLinear { linear: m })
    }

    /// Bergman operator `B(x,y) = id - D(x,y) + Q(x)Q(y)` as a complex-linear
    /// matrix.
    pub fn bergman(&self, x: &CVec, y: &CVec) -> Result<CMat> {
        let d = self.op_d(x, y)?;
        let qx = self.op_q(x)?;
        let qy = self.op_q(y)?;
        Ok(CMat::identity(self.dim, self.dim) - d + qx.compose(&qy))
    }

    /// Trace form `tf(x,y) = Tr D(x,y)`, evaluated through the cached Gram
    /// matrix. Linear in `x`, conjugate-linear in `y`.
    pub fn trace_form(&self, x: &CVec, y: &CVec) -> Result<Cx> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let gx = &self.gram * x;
        Ok(y.dotc(&gx))
    }

    /// Norm induced by the trace form.
    pub fn trace_norm(&self, x: &CVec) -> f64 {
        let gx = &self.gram * x;
        x.dotc(&gx).re.max(0.0).sqrt()
    }

    /// Odd power `x^(2p+1)`; `x^(1) = x`, `x^(2p+1) = Q(x) x^(2p-1)`.
    pub fn odd_power(&self, x: &CVec, p: usize) -> Result<CVec> {
        self.check_dim(x)?;
        let q = self.op_q(x)?;
        let mut v = x.clone();
        for _ in 0..p {
            v = q.apply(&v);
        }
        Ok(v)
    }

    /// `true` when `‖e^(3) - e‖` (trace-form norm) is within `tol` of zero,
    /// relative to the scale of `e`.
    pub fn is_tripotent(&self, e: &CVec, tol: f64) -> bool {
        match self.odd_power(e, 1) {
            Ok(e3) => {
                let scale = 1.0_f64.max(self.trace_norm(e));
                self.trace_norm(&(e3 - e)) <= tol * scale
            }
            Err(_) => false,
        }
    }

    /// Orthogonality of tripotents: `D(e1, e2) = 0` in operator norm.
    pub fn are_orthogonal(&self, e1: &CVec, e2: &CVec, tol: f64) -> bool {
        match self.op_d(e1, e2) {
            Ok(d) => {
                let scale = 1.0_f64.max(self.trace_norm(e1) * self.trace_norm(e2));
                linalg::op_norm(&d) <= tol * scale
            }
            Err(_) => false,
        }
    }

    /// Euclidean norm in the natural metric of the chart: Frobenius norm of
    /// the chart matrix for types I-III, the standard norm for type IV, and
    /// the square-sum combination over product factors. This is the metric in
    /// which the Shilov boundary sits at maximal distance from the origin.
    pub fn euclid_norm(&self, x: &CVec) -> f64 {
        match &self.kind {
            Kind::TypeI { .. } | Kind::TypeII { .. } | Kind::TypeIII { .. } => {
                self.chart_matrix(x).map(|m| m.norm()).unwrap_or(0.0)
            }
            Kind::TypeIV { .. } => x.norm(),
            Kind::Product(_) => {
                let mut sq = 0.0;
                for (sys, (off, d)) in self.factors().iter().zip(self.factor_offsets()) {
                    let xs = CVec::from(x.rows(off, d).clone_owned());
                    sq += sys.euclid_norm(&xs).powi(2);
                }
                sq.sqrt()
            }
        }
    }

    /// See [`Kind::max_euclid_radius`].
    pub fn max_euclid_radius(&self) -> f64 {
        self.kind.max_euclid_radius()
    }
}
