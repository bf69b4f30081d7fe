//! Closed-form Bergman kernels and the finite-difference recovery of the
//! triple product from them.
//!
//! For the kernels treated here, `log K(z, w)` is holomorphic in `z` and
//! antiholomorphic in `w`, so `H(s, t) := log K(s, conj(t))` is jointly
//! holomorphic on `C^{2n}`. Mixed Wirtinger derivatives of `log K(z, z)` at 0
//! become ordinary partial derivatives of `H`, which central differences
//! approximate directly. Fourth derivatives paired against the metric (its
//! own second derivatives) recover the triple product; Richardson
//! extrapolation removes the leading O(h²) error.
//!
//! Additive normalization constants of the kernels are dropped throughout:
//! only derivatives of `log K` enter the recovery.

use crate::error::{Error, Result};
use crate::linalg::guarded_solve;
use crate::triple::{CMat, CVec, Cx, Kind, TripleSystem, COND_LIMIT};

fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

/// Domains with a closed-form Bergman kernel used by the harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSpec {
    /// `log K = -(n+1) log(1 - <z,w>)` up to a constant.
    Ball(usize),
    /// Sum of per-factor disc terms `-2 log(1 - z_i conj(w_i))`.
    Polydisc(usize),
    /// `log K = -(p+q) log det(I - z w*)` up to a constant.
    TypeI(usize, usize),
}

impl KernelSpec {
    pub fn dimension(&self) -> usize {
        match self {
            KernelSpec::Ball(n) | KernelSpec::Polydisc(n) => *n,
            KernelSpec::TypeI(p, q) => p * q,
        }
    }

    /// The triple system whose closed-form product the kernel must recover.
    pub fn system(&self) -> Result<TripleSystem> {
        let kind = match self {
            KernelSpec::Ball(n) => Kind::ball(*n),
            KernelSpec::Polydisc(n) => Kind::polydisc(*n),
            KernelSpec::TypeI(p, q) => Kind::TypeI { p: *p, q: *q },
        };
        TripleSystem::new(kind)
    }

    /// `log K(z, w)` with the normalization constant dropped. Fails when the
    /// evaluation leaves the principal branch (the kernel argument crossing
    /// the negative real axis), which cannot happen for interior points.
    pub fn kernel_log(&self, z: &CVec, w: &CVec) -> Result<Cx> {
        let wc = w.map(|c| c.conj());
        self.polarized_log(z, &wc)
    }

    /// The jointly holomorphic polarization `H(s, t) = log K(s, conj(t))`.
    pub fn polarized_log(&self, s: &CVec, t: &CVec) -> Result<Cx> {
        let n = self.dimension();
        if s.len() != n || t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.len().max(t.len()),
            });
        }
        let principal_log = |u: Cx, what: &str| -> Result<Cx> {
            if u.re <= 0.0 && u.im.abs() < 1e-14 {
                return Err(Error::Degeneracy(format!(
                    "kernel log of {what} left the principal branch at {u}"
                )));
            }
            Ok(u.ln())
        };
        match self {
            KernelSpec::Ball(n) => {
                let pairing: Cx = s.iter().zip(t.iter()).map(|(a, b)| a * b).sum();
                let l = principal_log(cx(1.0) - pairing, "1 - <z,w>")?;
                Ok(-cx(*n as f64 + 1.0) * l)
            }
            KernelSpec::Polydisc(_) => {
                let mut total = Cx::new(0.0, 0.0);
                for (a, b) in s.iter().zip(t.iter()) {
                    total -= cx(2.0) * principal_log(cx(1.0) - a * b, "1 - z w̄")?;
                }
                Ok(total)
            }
            KernelSpec::TypeI(p, q) => {
                let sm = mat_from_row_major(s, *p, *q);
                let tm = mat_from_row_major(t, *p, *q);
                let m = CMat::identity(*p, *p) - &sm * tm.transpose();
                let det = m.lu().determinant();
                let l = principal_log(det, "det(I - z w*)")?;
                Ok(-cx((*p + *q) as f64) * l)
            }
        }
    }

    /// Second-derivative metric `h[a][l] = ∂²H/∂s_a ∂t_l |_0` by central
    /// differences at step `h`.
    pub fn metric_fd(&self, h: f64) -> Result<CMat> {
        let n = self.dimension();
        let mut m = CMat::zeros(n, n);
        for a in 0..n {
            for l in 0..n {
                m[(a, l)] = self.mixed_partial(&[Slot::S(a), Slot::T(l)], h)?;
            }
        }
        Ok(m)
    }

    /// Fourth-derivative tensor `T[i][j][k][l] = ∂⁴H/∂s_i ∂t_j ∂s_k ∂t_l |_0`.
    pub fn fourth_tensor_fd(&self, h: f64) -> Result<Vec<Cx>> {
        let n = self.dimension();
        let mut t = vec![Cx::new(0.0, 0.0); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        t[((i * n + j) * n + k) * n + l] =
                            self.mixed_partial(&[Slot::S(i), Slot::T(j), Slot::S(k), Slot::T(l)], h)?;
                    }
                }
            }
        }
        Ok(t)
    }

    fn mixed_partial(&self, slots: &[Slot], h: f64) -> Result<Cx> {
        let n = self.dimension();
        let mut total = Cx::new(0.0, 0.0);
        let combos = 1usize << slots.len();
        for mask in 0..combos {
            let mut s = CVec::zeros(n);
            let mut t = CVec::zeros(n);
            let mut sign = 1.0;
            for (b, slot) in slots.iter().enumerate() {
                let eps = if mask & (1 << b) != 0 { 1.0 } else { -1.0 };
                sign *= eps;
                match slot {
                    Slot::S(i) => s[*i] += cx(eps * h),
                    Slot::T(j) => t[*j] += cx(eps * h),
                }
            }
            total += cx(sign) * self.polarized_log(&s, &t)?;
        }
        Ok(total / cx((2.0 * h).powi(slots.len() as i32)))
    }

    /// Recover the triple product tensor from the kernel: for each `(i,j,k)`
    /// the vector `{e_i, e_j, e_k}` solving the metric pairing
    /// `h({e_i,e_j,e_k}, e_l) = T[i][j][k][l]`. Richardson-extrapolated from
    /// steps `h` and `h/2`.
    pub fn triple_from_kernel(&self, step: f64) -> Result<Vec<CVec>> {
        if !(1e-3..=1e-1).contains(&step) {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step {step} outside [1e-3, 1e-1]; smaller steps are noise-dominated"
            )));
        }
        let n = self.dimension();
        let richardson_scalar =
            |coarse: Cx, fine: Cx| (cx(4.0) * fine - coarse) / cx(3.0);

        let metric_c = self.metric_fd(step)?;
        let metric_f = self.metric_fd(step / 2.0)?;
        let mut metric = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                metric[(i, j)] = richardson_scalar(metric_c[(i, j)], metric_f[(i, j)]);
            }
        }
        let tensor_c = self.fourth_tensor_fd(step)?;
        let tensor_f = self.fourth_tensor_fd(step / 2.0)?;

        // h({e_i,e_j,e_k}, e_l) = sum_a u_a metric[a][l]  =>  metricᵀ u = T_{ijk.}
        let mt = metric.transpose();
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut rhs = CVec::zeros(n);
                    for l in 0..n {
                        let idx = ((i * n + j) * n + k) * n + l;
                        rhs[l] = richardson_scalar(tensor_c[idx], tensor_f[idx]);
                    }
                    out.push(guarded_solve(&mt, &rhs, COND_LIMIT)?);
                }
            }
        }
        Ok(out)
    }

    /// Maximum entrywise deviation between the kernel-recovered triple tensor
    /// and the closed-form triple product of the associated system.
    pub fn compare_with_closed_form(&self, step: f64) -> Result<f64> {
        let sys = self.system()?;
        let n = self.dimension();
        let recovered = self.triple_from_kernel(step)?;
        let mut worst = 0.0f64;
        for i in 0..n {
            let ei = sys.basis_vector(i);
            for j in 0..n {
                let ej = sys.basis_vector(j);
                for k in 0..n {
                    let ek = sys.basis_vector(k);
                    let want = sys.triple(&ei, &ej, &ek)?;
                    let got = &recovered[(i * n + j) * n + k];
                    for l in 0..n {
                        worst = worst.max((got[l] - want[l]).norm());
                    }
                }
            }
        }
        Ok(worst)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    S(usize),
    T(usize),
}

fn mat_from_row_major(v: &CVec, p: usize, q: usize) -> CMat {
    let mut m = CMat::zeros(p, q);
    for i in 0..p {
        for j in 0..q {
            m[(i, j)] = v[i * q + j];
        }
    }
    m
}
