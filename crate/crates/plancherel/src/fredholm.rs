//! The integrable kernel `Kₙ` on the unit circle: Nyström discretization by
//! the periodic trapezoid rule, Fredholm determinants `det(I−√t Kₙ)`,
//! resolvent traces, spectra, and the determinant identities linking them to
//! the Toeplitz route.
//!
//! The kernel is analytic on the circle, so equispaced trapezoid quadrature
//! converges geometrically; every reported determinant or trace passes an
//! imaginary-part gate and a node-doubling agreement gate first.

use crate::detform::{self, DetformError};
use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

type C64 = Complex<f64>;

/// Imag-part and node-doubling gates are mixed absolute/relative at this
/// level.
pub const GATE_TOL: f64 = 1e-10;
/// Eigenvalues within this distance of ±1 are counted as touching the ends
/// of the spectrum.
pub const SPECTRUM_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum FredholmError {
    #[error("kernel parameters invalid: lambda {lambda}, t {t}")]
    InvalidSpec { lambda: f64, t: f64 },
    #[error("node count {0} must be even and at least 16")]
    BadNodeCount(usize),
    #[error("determinant imaginary part {imag:.3e} exceeds gate {gate:.3e}")]
    ImaginaryPart { imag: f64, gate: f64 },
    #[error("node doubling changed the result by {delta:.3e} (gate {gate:.3e})")]
    NotConverged { delta: f64, gate: f64 },
    #[error("det(I−√t Kₙ) = {0:.3e} is not positive")]
    NonPositiveDeterminant(f64),
    #[error("linear solve against I−√t Kₙ failed")]
    SolveFailed,
    #[error(transparent)]
    Detform(#[from] DetformError),
}

/// Parameters of the operator `√t Kₙ` with kernel
/// `Kₙ(z,w) = (z^{−n}wⁿ − φ(z)/φ(w)) / (2πi(z−w))`,
/// `φ(z) = e^{√λ(z−1/z)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    n: usize,
    lambda: f64,
    t: f64,
}

impl KernelSpec {
    /// Validates `λ ≥ 0` and `0 < t ≤ 1`.
    pub fn new(n: usize, lambda: f64, t: f64) -> Result<Self, FredholmError> {
        if lambda.is_finite() && lambda >= 0.0 && t.is_finite() && t > 0.0 && t <= 1.0 {
            Ok(KernelSpec { n, lambda, t })
        } else {
            Err(FredholmError::InvalidSpec { lambda, t })
        }
    }

    /// Determinants are entire in √t, so finite-difference probes may step
    /// slightly past t = 1; only this module may do so.
    fn unchecked(n: usize, lambda: f64, t: f64) -> Self {
        KernelSpec { n, lambda, t }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Default node count `max(64, 4⌈n + 2√λ⌉)`, rounded up to even: four
/// points per oscillation of `z^{±n}` and `φ^{±1}`.
pub fn default_nodes(n: usize, lambda: f64) -> usize {
    let scale = (n as f64 + 2.0 * lambda.max(0.0).sqrt()).ceil() as usize;
    let m = (4 * scale).max(64);
    m + m % 2
}

/// Kernel value at points `z`, `w` on the unit circle; within `1e-8` of the
/// diagonal the analytic limit `−(n/z + √λ(1+z^{−2}))/(2πi)` is used.
pub fn kernel_eval(spec: &KernelSpec, z: C64, w: C64) -> C64 {
    let n = spec.n as i32;
    let sqrt_lambda = spec.lambda.sqrt();
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let d = z - w;
    if d.norm() < 1e-8 {
        let zinv = z.inv();
        return -(C64::new(n as f64, 0.0) * zinv
            + C64::new(sqrt_lambda, 0.0) * (C64::new(1.0, 0.0) + zinv * zinv))
            / two_pi_i;
    }
    let ratio = z.powi(-n) * w.powi(n);
    let phi_ratio = (C64::new(sqrt_lambda, 0.0) * (z - z.inv() - w + w.inv())).exp();
    (ratio - phi_ratio) / (two_pi_i * d)
}

/// Trapezoid discretization of the contour operator: `m` equispaced nodes
/// `z_j` and entries `A_{jk} = Kₙ(z_j, z_k) · (2π/m) · i z_k`, which is the
/// contour weight `dw = iw dθ` at `z_k`.  The matrix is Hermitian up to
/// roundoff.
pub struct NystromMatrix {
    pub spec: KernelSpec,
    pub m: usize,
    pub nodes: Vec<C64>,
    pub matrix: DMatrix<C64>,
}

impl NystromMatrix {
    pub fn build(spec: &KernelSpec, m: usize) -> Result<Self, FredholmError> {
        Self::build_scaled(spec, m, 1.0)
    }

    /// Builds with every kernel entry multiplied by `kernel_scale`; scale 1
    /// is the operator itself, anything else is a deliberate perturbation
    /// for sensitivity checks.
    pub fn build_scaled(
        spec: &KernelSpec,
        m: usize,
        kernel_scale: f64,
    ) -> Result<Self, FredholmError> {
        if m < 16 || m % 2 != 0 {
            return Err(FredholmError::BadNodeCount(m));
        }
        let nodes: Vec<C64> = (0..m)
            .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        let step = 2.0 * std::f64::consts::PI / m as f64;
        let data: Vec<C64> = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (col, row) = (idx / m, idx % m);
                let weight = C64::new(0.0, step) * nodes[col];
                kernel_eval(spec, nodes[row], nodes[col]) * weight * kernel_scale
            })
            .collect();
        Ok(NystromMatrix {
            spec: *spec,
            m,
            nodes,
            matrix: DMatrix::from_vec(m, m, data),
        })
    }

    /// `I − √t A`.
    fn resolvent_base(&self) -> DMatrix<C64> {
        let mut out = -self.matrix.clone() * C64::new(self.spec.t.sqrt(), 0.0);
        for j in 0..self.m {
            out[(j, j)] += C64::new(1.0, 0.0);
        }
        out
    }
}

fn real_part_gated(value: C64) -> Result<f64, FredholmError> {
    let gate = GATE_TOL * (1.0 + value.re.abs());
    if value.im.abs() > gate {
        return Err(FredholmError::ImaginaryPart {
            imag: value.im.abs(),
            gate,
        });
    }
    Ok(value.re)
}

fn det_at(spec: &KernelSpec, m: usize, kernel_scale: f64) -> Result<f64, FredholmError> {
    let nystrom = NystromMatrix::build_scaled(spec, m, kernel_scale)?;
    real_part_gated(nystrom.resolvent_base().lu().determinant())
}

fn fredholm_det_scaled(
    spec: &KernelSpec,
    m: usize,
    kernel_scale: f64,
) -> Result<f64, FredholmError> {
    let coarse = det_at(spec, m, kernel_scale)?;
    let fine = det_at(spec, 2 * m, kernel_scale)?;
    let gate = GATE_TOL * (1.0 + fine.abs());
    let delta = (coarse - fine).abs();
    if delta > gate {
        return Err(FredholmError::NotConverged { delta, gate });
    }
    if fine <= 0.0 {
        return Err(FredholmError::NonPositiveDeterminant(fine));
    }
    Ok(fine)
}

/// `det(I − √t Kₙ)` by Nyström at `m` and `2m` nodes; returns the fine
/// value after the imaginary-part, node-doubling, and positivity gates.
pub fn fredholm_det(spec: &KernelSpec, m: usize) -> Result<f64, FredholmError> {
    fredholm_det_scaled(spec, m, 1.0)
}

/// `φ⁽¹⁾ₙ(λ) = 2^{−n} det(I − Kₙ)`; `m` defaults to [`default_nodes`].
pub fn phi1_fredholm(n: usize, lambda: f64, m: Option<usize>) -> Result<f64, FredholmError> {
    phi1_fredholm_scaled(n, lambda, m, 1.0)
}

/// The determinant route with the kernel deliberately multiplied by
/// `kernel_scale`; scale 1 recovers `φ⁽¹⁾ₙ` itself.
pub fn phi1_fredholm_scaled(
    n: usize,
    lambda: f64,
    m: Option<usize>,
    kernel_scale: f64,
) -> Result<f64, FredholmError> {
    let spec = KernelSpec::new(n, lambda, 1.0)?;
    let m = m.unwrap_or_else(|| default_nodes(n, lambda));
    let det = fredholm_det_scaled(&spec, m, kernel_scale)?;
    Ok(det * 0.5f64.powi(n as i32))
}

fn trace_at(spec: &KernelSpec, m: usize) -> Result<f64, FredholmError> {
    let nystrom = NystromMatrix::build(spec, m)?;
    let solved = nystrom
        .resolvent_base()
        .lu()
        .solve(&nystrom.matrix)
        .ok_or(FredholmError::SolveFailed)?;
    real_part_gated(solved.diagonal().sum())
}

/// `tr((I − √t Kₙ)^{−1} Kₙ)` of the discretized operator, gated like the
/// determinant.
pub fn resolvent_trace(spec: &KernelSpec, m: usize) -> Result<f64, FredholmError> {
    let coarse = trace_at(spec, m)?;
    let fine = trace_at(spec, 2 * m)?;
    let gate = GATE_TOL * (1.0 + fine.abs());
    let delta = (coarse - fine).abs();
    if delta > gate {
        return Err(FredholmError::NotConverged { delta, gate });
    }
    Ok(fine)
}

/// `φ⁽²⁾_{n+1}(λ)` through the analytic `t`-derivative at `t = 1`:
/// `φ⁽¹⁾ₙ(λ) · [1 + n/4 + ½ tr((I−Kₙ)^{−1}Kₙ)]`.
pub fn phi2_fredholm(n_plus_1: usize, lambda: f64, m: Option<usize>) -> Result<f64, FredholmError> {
    if n_plus_1 == 0 {
        return Err(FredholmError::BadNodeCount(0));
    }
    let n = n_plus_1 - 1;
    let m = m.unwrap_or_else(|| default_nodes(n, lambda));
    let spec = KernelSpec::new(n, lambda, 1.0)?;
    let trace = resolvent_trace(&spec, m)?;
    let phi1 = phi1_fredholm(n, lambda, Some(m))?;
    Ok(phi1 * (1.0 + n as f64 / 4.0 + 0.5 * trace))
}

/// The same quantity through a central finite difference of
/// `g(t) = (1+√t)^{−n} det(I−√t Kₙ)` at `t = 1` with one Richardson step:
/// `φ⁽²⁾_{n+1} = g(1) − g'(1)`.
pub fn phi2_fredholm_fd(
    n_plus_1: usize,
    lambda: f64,
    m: Option<usize>,
) -> Result<f64, FredholmError> {
    if n_plus_1 == 0 {
        return Err(FredholmError::BadNodeCount(0));
    }
    let n = n_plus_1 - 1;
    let m = m.unwrap_or_else(|| default_nodes(n, lambda));
    let g = |t: f64| -> Result<f64, FredholmError> {
        let spec = KernelSpec::unchecked(n, lambda, t);
        let det = fredholm_det(&spec, m)?;
        Ok((1.0 + t.sqrt()).powi(-(n as i32)) * det)
    };
    let h = 1e-4;
    let slope = |hh: f64| -> Result<f64, FredholmError> {
        Ok((g(1.0 + hh)? - g(1.0 - hh)?) / (2.0 * hh))
    };
    let d_h = slope(h)?;
    let d_half = slope(h / 2.0)?;
    let derivative = (4.0 * d_half - d_h) / 3.0;
    Ok(g(1.0)? - derivative)
}

/// Residual of the determinant-ratio identity
/// `(1+√t) · det(I−√t K_k) / det(I−√t K_{k+1}) = κ²ₖ` against the
/// orthogonal-polynomial value of `κ²ₖ`.  The reference scalar is the
/// `t = 1` one, so pass `t = 1` unless probing; at `λ = 0` the ratio is 1
/// for every `t`.
pub fn det_ratio_identity(
    k: usize,
    lambda: f64,
    t: f64,
    m: Option<usize>,
) -> Result<f64, FredholmError> {
    let m = m.unwrap_or_else(|| default_nodes(k + 1, lambda));
    let num = fredholm_det(&KernelSpec::new(k, lambda, t)?, m)?;
    let den = fredholm_det(&KernelSpec::new(k + 1, lambda, t)?, m)?;
    let ratio = (1.0 + t.sqrt()) * num / den;
    let kappa2 = detform::ortho_poly(k, lambda)?.kappa2;
    Ok((ratio - kappa2).abs())
}

/// Values `(1+√t)^{−p} det(I−√t Kₚ)` for each `p`, which approach 1 as
/// `p` grows past `2√λ`.
pub fn szego_limit_check(
    lambda: f64,
    t: f64,
    p_list: &[usize],
    m: Option<usize>,
) -> Result<Vec<f64>, FredholmError> {
    p_list
        .iter()
        .map(|&p| {
            let m = m.unwrap_or_else(|| default_nodes(p, lambda));
            let det = fredholm_det(&KernelSpec::new(p, lambda, t)?, m)?;
            Ok((1.0 + t.sqrt()).powi(-(p as i32)) * det)
        })
        .collect()
}

/// Eigenvalues of the symmetrized discretization of `Kₙ`, with counts of
/// how many touch `−1` and `+1` within [`SPECTRUM_TOL`].
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub n: usize,
    pub lambda: f64,
    pub m: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub near_minus_one: usize,
    pub near_plus_one: usize,
}

/// Spectrum of `Kₙ` at `t = 1`.  The trapezoid discretization with contour
/// weights is Hermitian up to roundoff; it is symmetrized exactly and fed
/// to a Hermitian eigensolver.
pub fn spectrum(n: usize, lambda: f64, m: Option<usize>) -> Result<SpectrumReport, FredholmError> {
    let spec = KernelSpec::new(n, lambda, 1.0)?;
    let m = m.unwrap_or_else(|| default_nodes(n, lambda));
    let nystrom = NystromMatrix::build(&spec, m)?;
    let symmetrized = (&nystrom.matrix + nystrom.matrix.adjoint()) * C64::new(0.5, 0.0);
    let mut eigenvalues: Vec<f64> = symmetrized
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    let near_minus_one = eigenvalues
        .iter()
        .filter(|&&e| (e + 1.0).abs() <= SPECTRUM_TOL)
        .count();
    let near_plus_one = eigenvalues
        .iter()
        .filter(|&&e| (e - 1.0).abs() <= SPECTRUM_TOL)
        .count();
    Ok(SpectrumReport {
        n,
        lambda,
        m,
        eigenvalues,
        near_minus_one,
        near_plus_one,
    })
}

/// Residual of the quadratic-form telescoping identity
/// `Σ_{k<n} Σ_s λˢ/(s!)² κ²ₖ (Σ_p ηᵏₚ a_{p+1}(s))² =
///  Σ_s λˢ/(s!)² (T⁻¹_{n−1} bₙ(s), bₙ(s))`,
/// both sides built from the Toeplitz-side primitives.
pub fn lemma4_identity(n: usize, lambda: f64) -> Result<f64, FredholmError> {
    if n == 0 {
        return Err(FredholmError::BadNodeCount(0));
    }
    let polys: Vec<_> = (0..n)
        .map(|k| detform::ortho_poly(k, lambda))
        .collect::<Result<_, _>>()?;
    let system = detform::ToeplitzSystem::new(n, lambda)?;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut weight = 1.0;
    let mut s = 0u32;
    loop {
        let b = DVector::from_fn(n, |i, _| {
            detform::a_coeff((i + 1) as u32, s, lambda).expect("lambda already validated")
        });
        let quad = b.dot(&system.solve(&b));
        rhs += weight * quad;
        for poly in &polys {
            let inner: f64 = poly
                .eta
                .iter()
                .enumerate()
                .map(|(p, &e)| e * b[p])
                .sum();
            lhs += weight * poly.kappa2 * inner * inner;
        }
        if s >= 2 && weight * b.norm_squared() <= 1e-18 * (1.0 + rhs.abs()) {
            break;
        }
        s += 1;
        weight *= lambda / (s as f64 * s as f64);
        if s > 400 {
            break;
        }
    }
    Ok((lhs - rhs).abs())
}
