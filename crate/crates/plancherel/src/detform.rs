//! Poissonized row-length generating functions through series and classical
//! determinants: the Toeplitz form for the first row, the Hankel and
//! Toeplitz/quadratic-form routes for the second row, orthogonal polynomials
//! on the unit circle, and the bordered Toeplitz inverse identity.
//!
//! All base series here are entire in λ and are summed by term recursion
//! with a ratio-test tail certificate; determinants of the positive definite
//! Toeplitz and Hankel moment matrices go through Cholesky factorizations.

use crate::combinat::{self, CombinatError};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Default relative tolerance for the entire-series evaluations.
pub const SERIES_REL_TOL: f64 = 1e-15;
/// Default stop threshold for the s-sum of the second-row determinant form,
/// relative to the accumulated sum.
pub const S_SUM_TOL: f64 = 1e-18;
/// Largest Toeplitz system size accepted.
pub const TOEPLITZ_MAX_N: usize = 1024;

#[derive(Debug, Error, PartialEq)]
pub enum DetformError {
    #[error("lambda must be finite and nonnegative, got {0}")]
    InvalidLambda(f64),
    #[error("Toeplitz size {0} exceeds the cap of {TOEPLITZ_MAX_N}")]
    SizeCap(usize),
    #[error("Toeplitz matrix is not numerically positive definite (size {0}, lambda {1})")]
    NotPositiveDefinite(usize, f64),
    #[error("row index {0} is not supported (only rows 1 and 2 are)")]
    UnsupportedRow(u8),
    #[error(
        "the discrete measure for s = {0} carries fewer than {1} representable \
         support points; the Hankel determinant underflows"
    )]
    MeasureExhausted(u32, usize),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
}

fn check_lambda(lambda: f64) -> Result<(), DetformError> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(DetformError::InvalidLambda(lambda))
    }
}

/// Sums `Σ t_m` for positive terms given the first term and the ratio
/// `t_{m+1}/t_m` as a function of `m`, which must eventually decrease below
/// one.  Returns the sum and a certified bound on the omitted tail.
fn sum_positive_series(
    first_index: u64,
    first_term: f64,
    ratio: impl Fn(u64) -> f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut total = 0.0;
    let mut t = first_term;
    let mut m = first_index;
    loop {
        total += t;
        let r = ratio(m);
        t *= r;
        m += 1;
        // Ratios here are eventually monotone decreasing, so once below 1/2
        // the remaining tail is dominated by a geometric series.
        if r <= 0.5 && t <= rel_tol * total.max(f64::MIN_POSITIVE) {
            return (total, 2.0 * t);
        }
        if m > first_index + 100_000 {
            return (total, f64::INFINITY);
        }
    }
}

/// Fourier coefficient `c_m` of the weight `e^{2√λ cos θ}`:
/// `c_m = Σ_{p ≥ |m|} λ^{p−|m|/2} / (p! (p−|m|)!)`, summed to relative
/// tolerance `rel_tol` with a certified tail.
pub fn toeplitz_entry_tol(m: i64, lambda: f64, rel_tol: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    let j = m.unsigned_abs();
    if lambda == 0.0 {
        return Ok(if j == 0 { 1.0 } else { 0.0 });
    }
    let mut first = lambda.powf(j as f64 / 2.0);
    for i in 1..=j {
        first /= i as f64;
    }
    let (total, _) = sum_positive_series(j, first, |p| {
        lambda / (((p + 1) * (p + 1 - j)) as f64)
    }, rel_tol);
    Ok(total)
}

/// `c_m` at the default series tolerance.
pub fn toeplitz_entry(m: i64, lambda: f64) -> Result<f64, DetformError> {
    toeplitz_entry_tol(m, lambda, SERIES_REL_TOL)
}

/// The symmetric positive definite Toeplitz moment matrix
/// `T_{n−1} = (c_{j−k})_{0 ≤ j,k < n}` of the weight `e^{2√λ cos θ}`,
/// with its Cholesky factorization cached.
pub struct ToeplitzSystem {
    lambda: f64,
    size: usize,
    c: Vec<f64>,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl ToeplitzSystem {
    /// Builds the `size × size` system (that is, `T_{size−1}`).
    pub fn new(size: usize, lambda: f64) -> Result<Self, DetformError> {
        Self::new_with_tol(size, lambda, SERIES_REL_TOL)
    }

    /// [`ToeplitzSystem::new`] with an explicit entry-series tolerance.
    pub fn new_with_tol(size: usize, lambda: f64, rel_tol: f64) -> Result<Self, DetformError> {
        check_lambda(lambda)?;
        if size == 0 || size > TOEPLITZ_MAX_N {
            return Err(DetformError::SizeCap(size));
        }
        let mut c = Vec::with_capacity(size);
        for m in 0..size {
            c.push(toeplitz_entry_tol(m as i64, lambda, rel_tol)?);
        }
        let matrix = DMatrix::from_fn(size, size, |j, k| c[j.abs_diff(k)]);
        let chol = nalgebra::Cholesky::new(matrix)
            .ok_or(DetformError::NotPositiveDefinite(size, lambda))?;
        Ok(ToeplitzSystem {
            lambda,
            size,
            c,
            chol,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `c_m`, available for `|m| < size`.
    pub fn entry(&self, m: i64) -> f64 {
        self.c[m.unsigned_abs() as usize]
    }

    /// The dense matrix itself.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |j, k| self.c[j.abs_diff(k)])
    }

    pub fn determinant(&self) -> f64 {
        self.chol.determinant()
    }

    /// Solves `T x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// Dense inverse, for identity-check oracles.
    pub fn inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }
}

/// `φ⁽¹⁾ₙ(λ) = e^{−λ} det(T_{n−1})`, with `det(T_{−1}) := 1`.
pub fn phi1_toeplitz(n: usize, lambda: f64) -> Result<f64, DetformError> {
    phi1_toeplitz_tol(n, lambda, SERIES_REL_TOL)
}

/// [`phi1_toeplitz`] with an explicit entry-series tolerance.
pub fn phi1_toeplitz_tol(n: usize, lambda: f64, rel_tol: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    if n == 0 {
        return Ok((-lambda).exp());
    }
    let system = ToeplitzSystem::new_with_tol(n, lambda, rel_tol)?;
    Ok((-lambda).exp() * system.determinant())
}

/// A truncated Poissonization with its certified tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiSeries {
    pub value: f64,
    /// Upper bound on the omitted `N > NMax` mass (using `q ≤ 1`).
    pub tail_bound: f64,
}

/// `φ⁽ᵏ⁾ₙ(λ) ≈ Σ_{N ≤ NMax} e^{−λ} λᴺ/N! · q⁽ᵏ⁾ₙ,ₙ` from the exact
/// rational finite-N distribution functions, plus a tail bound.
pub fn phi_series(k: u8, n: u32, lambda: f64, n_max: u32) -> Result<PhiSeries, DetformError> {
    use num::ToPrimitive;
    check_lambda(lambda)?;
    let mut value = 0.0;
    let mut w = (-lambda).exp();
    for big_n in 0..=n_max {
        if big_n > 0 {
            w *= lambda / big_n as f64;
        }
        let q = combinat::exact_row_cdf(k, n, big_n)?
            .to_f64()
            .expect("rational q fits in f64");
        value += w * q;
    }
    let next = w * lambda / (n_max + 1) as f64;
    let tail_bound = if lambda < (n_max + 2) as f64 {
        next / (1.0 - lambda / (n_max + 2) as f64)
    } else {
        1.0
    };
    Ok(PhiSeries { value, tail_bound })
}

/// One coefficient series with its ratio-test tail bound.
fn a_coeff_with_tail(j: u32, s: u32, lambda: f64, rel_tol: f64) -> (f64, f64) {
    if lambda == 0.0 {
        // Only a₀(0) keeps its m=0 term at λ=0.
        let v = if j == 0 && s == 0 { 1.0 } else { 0.0 };
        return (v, 0.0);
    }
    let (lam, sf) = (lambda, s as f64);
    if j == 0 {
        if s == 0 {
            return sum_positive_series(0, 1.0, |m| lam / ((m + 1) as f64).powi(2), rel_tol);
        }
        let first = lam / (1.0 + sf).powi(2);
        return sum_positive_series(1, first, |m| {
            let mf = m as f64;
            lam * (mf + sf).powi(2) / ((mf + 1.0 + sf).powi(2) * mf * mf)
        }, rel_tol);
    }
    let mut first = lam.powf(j as f64 / 2.0) / (j as f64 + sf);
    for i in 1..j {
        first /= i as f64;
    }
    let jf = j as f64;
    sum_positive_series(j as u64, first, |m| {
        let mf = m as f64;
        lam * (mf + sf) / ((mf + 1.0 + sf) * mf * (mf + 1.0 - jf))
    }, rel_tol)
}

/// The coefficient `a_j(s)`:
/// `a₀(0) = Σ_{m≥0} λᵐ/(m!)²`,
/// `a₀(s) = Σ_{m≥1} λᵐ/((m+s)²((m−1)!)²)` for `s ≥ 1`, and
/// `a_j(s) = Σ_{m≥j} λ^{m−j/2}/((m+s)(m−1)!(m−j)!)` for `j ≥ 1`.
pub fn a_coeff_tol(j: u32, s: u32, lambda: f64, rel_tol: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    Ok(a_coeff_with_tail(j, s, lambda, rel_tol).0)
}

/// `a_j(s)` at the default series tolerance.
pub fn a_coeff(j: u32, s: u32, lambda: f64) -> Result<f64, DetformError> {
    a_coeff_tol(j, s, lambda, SERIES_REL_TOL)
}

/// Memoized table of `a_j(s)` for `j ≤ j_max`, `s ≤ s_max`, with the worst
/// certified truncation tail over all entries.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub lambda: f64,
    pub j_max: u32,
    pub s_max: u32,
    values: Vec<f64>,
    pub max_tail: f64,
}

impl CoefficientTable {
    pub fn build(lambda: f64, j_max: u32, s_max: u32) -> Result<Self, DetformError> {
        check_lambda(lambda)?;
        let mut values = Vec::with_capacity(((j_max + 1) * (s_max + 1)) as usize);
        let mut max_tail: f64 = 0.0;
        for j in 0..=j_max {
            for s in 0..=s_max {
                let (v, tail) = a_coeff_with_tail(j, s, lambda, SERIES_REL_TOL);
                values.push(v);
                max_tail = max_tail.max(tail);
            }
        }
        Ok(CoefficientTable {
            lambda,
            j_max,
            s_max,
            values,
            max_tail,
        })
    }

    pub fn get(&self, j: u32, s: u32) -> f64 {
        assert!(j <= self.j_max && s <= self.s_max);
        self.values[(j * (self.s_max + 1) + s) as usize]
    }
}

/// `φ⁽²⁾_{n+1}(λ)` through the quadratic-form route:
/// `[Σ_s λˢ/(s!)² (a₀(s) − (T⁻¹_{n−1} bₙ(s), bₙ(s)))] · φ⁽¹⁾ₙ(λ)` with
/// `bₙ(s) = (a₁(s), …, aₙ(s))`, the quadratic form dropped for `n = 0`.
pub fn phi2_intermediate_tol(
    n_plus_1: usize,
    lambda: f64,
    s_sum_tol: f64,
) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    if n_plus_1 == 0 {
        return Err(DetformError::SizeCap(0));
    }
    let n = n_plus_1 - 1;
    let system = if n >= 1 {
        Some(ToeplitzSystem::new(n, lambda)?)
    } else {
        None
    };
    let mut total = 0.0;
    // λˢ/(s!)² recursively.
    let mut weight = 1.0;
    let mut s = 0u32;
    loop {
        let a0 = a_coeff(0, s, lambda)?;
        let term = match &system {
            None => weight * a0,
            Some(sys) => {
                let b = DVector::from_fn(n, |i, _| {
                    a_coeff((i + 1) as u32, s, lambda).expect("lambda already validated")
                });
                let x = sys.solve(&b);
                weight * (a0 - b.dot(&x))
            }
        };
        total += term;
        // a₀ dominates the bracket (the quadratic form is positive and
        // smaller), so the weighted a₀ term is a sound stop criterion.
        if weight * a0 <= s_sum_tol * total.max(f64::MIN_POSITIVE) && s >= 2 {
            break;
        }
        s += 1;
        weight *= lambda / (s as f64 * s as f64);
        if s > 500 {
            break;
        }
    }
    Ok(total * phi1_toeplitz(n, lambda)?)
}

/// The quadratic-form route at the default s-sum tolerance.
pub fn phi2_intermediate(n_plus_1: usize, lambda: f64) -> Result<f64, DetformError> {
    phi2_intermediate_tol(n_plus_1, lambda, S_SUM_TOL)
}

/// Monic orthogonal polynomial data on the unit circle for the weight
/// `e^{2√λ cos θ}`.
#[derive(Clone, Debug)]
pub struct OrthoPolySet {
    pub lambda: f64,
    pub degree: usize,
    /// Coefficients `η⁰..ηᵏ` of the monic `πₖ(z) = Σ ηₚ zᵖ`, `ηₖ = 1`.
    pub eta: Vec<f64>,
    /// `κₖ² = det(T_{k−1})/det(T_k) = 1/‖πₖ‖²`.
    pub kappa2: f64,
}

/// Computes the degree-`k` monic orthogonal polynomial by the Toeplitz
/// normal equations `Σ_{q<k} η_q c_{p−q} = −c_{p−k}` for `p < k`, and its
/// squared leading orthonormal coefficient `κₖ²` as a determinant ratio.
pub fn ortho_poly(k: usize, lambda: f64) -> Result<OrthoPolySet, DetformError> {
    check_lambda(lambda)?;
    if k == 0 {
        let c0 = toeplitz_entry(0, lambda)?;
        return Ok(OrthoPolySet {
            lambda,
            degree: 0,
            eta: vec![1.0],
            kappa2: 1.0 / c0,
        });
    }
    let system = ToeplitzSystem::new(k + 1, lambda)?;
    let sub = ToeplitzSystem::new(k, lambda)?;
    let rhs = DVector::from_fn(k, |p, _| -system.entry(p as i64 - k as i64));
    let head = sub.solve(&rhs);
    let mut eta: Vec<f64> = head.iter().copied().collect();
    eta.push(1.0);
    let kappa2 = sub.determinant() / system.determinant();
    Ok(OrthoPolySet {
        lambda,
        degree: k,
        eta,
        kappa2,
    })
}

/// Max-absolute residual over the bordered-inverse identities for `Tₙ`:
/// border entries `(Tₙ⁻¹)_{pn} = (Tₙ⁻¹)_{np} = κₙ² ηⁿₚ`, the corner
/// `(Tₙ⁻¹)_{nn} = κₙ²`, and the interior rank-one update
/// `(Tₙ⁻¹)_{pq} − (T_{n−1}⁻¹)_{pq} = κₙ² ηⁿₚ ηⁿ_q`.
pub fn toeplitz_inverse_identity(n: usize, lambda: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    if n == 0 {
        return Err(DetformError::SizeCap(0));
    }
    let system = ToeplitzSystem::new(n + 1, lambda)?;
    let inv = system.inverse();
    let poly = ortho_poly(n, lambda)?;
    let mut worst: f64 = 0.0;
    for p in 0..=n {
        let claimed = poly.kappa2 * poly.eta[p];
        worst = worst.max((inv[(n, p)] - claimed).abs());
        worst = worst.max((inv[(p, n)] - claimed).abs());
    }
    worst = worst.max((inv[(n, n)] - poly.kappa2).abs());
    let sub_inv = ToeplitzSystem::new(n, lambda)?.inverse();
    for p in 0..n {
        for q in 0..n {
            let claimed = sub_inv[(p, q)] + poly.kappa2 * poly.eta[p] * poly.eta[q];
            worst = worst.max((inv[(p, q)] - claimed).abs());
        }
    }
    Ok(worst)
}

/// Logarithm of the Hankel determinant `H(s)` below, evaluated as the norm
/// product `Π_{j<n} h_j` of the monic orthogonal polynomials of `ν_s` via
/// the discrete Stieltjes recurrence.  An LU determinant of the raw moment
/// matrix loses relative accuracy once `H` falls far below the moment
/// scale (already `~1e-6` relative error at `n = 8`, `λ = 1/4`), while the
/// recurrence works in all-positive quantities of magnitude `≤ 1`.
fn hankel_log_det(s: u32, n: usize, lambda: f64) -> Result<f64, DetformError> {
    let sf = s as f64;
    let (mut m, mut w) = if s == 0 {
        (0u64, 1.0)
    } else {
        (1u64, lambda / (1.0 + sf).powi(2))
    };
    let mut xs: Vec<f64> = Vec::new();
    let mut ws: Vec<f64> = Vec::new();
    while w > 0.0 && m <= 200_000 {
        xs.push(m as f64);
        ws.push(w);
        let ratio = if s == 0 {
            lambda / ((m + 1) as f64).powi(2)
        } else {
            let mf = m as f64;
            lambda * (mf + sf).powi(2) / ((mf + 1.0 + sf).powi(2) * mf * mf)
        };
        w *= ratio;
        m += 1;
    }
    if xs.len() < n {
        return Err(DetformError::MeasureExhausted(s, n));
    }
    let h0: f64 = ws.iter().sum();
    let mut log_det = n as f64 * h0.ln();
    // `r_j(x) = √w(x) · p_j(x) / ‖p_j‖` keeps every stored value in
    // `[−1, 1]`; `β_j` returns as the squared norm of the recurrence step.
    let mut r: Vec<f64> = ws.iter().map(|wi| (wi / h0).sqrt()).collect();
    let mut r_prev = vec![0.0f64; xs.len()];
    let mut sqrt_beta = 0.0f64;
    for j in 1..n {
        let alpha: f64 = xs.iter().zip(&r).map(|(x, ri)| x * ri * ri).sum();
        let mut beta = 0.0f64;
        let mut next = vec![0.0f64; xs.len()];
        for i in 0..xs.len() {
            let t = (xs[i] - alpha) * r[i] - sqrt_beta * r_prev[i];
            next[i] = t;
            beta += t * t;
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(DetformError::MeasureExhausted(s, n));
        }
        log_det += (n - j) as f64 * beta.ln();
        sqrt_beta = beta.sqrt();
        for t in &mut next {
            *t /= sqrt_beta;
        }
        r_prev = std::mem::replace(&mut r, next);
    }
    Ok(log_det)
}

/// Determinant of the `n × n` Hankel moment matrix `(M_{j+k})_{0 ≤ j,k < n}`
/// of the discrete measure `ν_s` on the nonnegative integers whose mass at
/// `m` is `λᵐ/(m!)²` for `s = 0` and `λᵐ/((m+s)²((m−1)!)²)` for `s ≥ 1`.
pub fn hankel_h(s: u32, n: usize, lambda: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    if n == 0 {
        return Ok(1.0);
    }
    if n > TOEPLITZ_MAX_N {
        return Err(DetformError::SizeCap(n));
    }
    Ok(hankel_log_det(s, n, lambda)?.exp())
}

/// `φ⁽²⁾ₙ(λ) = e^{−λ} λ^{−n(n−1)/2} Σ_{s≥0} λˢ/(s!)² H(s)` over the Hankel
/// determinants of the `ν_s` measures.  The `s = 0` term alone gives
/// `φ⁽¹⁾ₙ`, so the sum dominates it termwise.
pub fn phi2_hankel(n: usize, lambda: f64) -> Result<f64, DetformError> {
    phi2_hankel_tol(n, lambda, S_SUM_TOL)
}

/// [`phi2_hankel`] with an explicit s-sum stopping tolerance.  The terms
/// and the `λ^{−n(n−1)/2}` prefactor combine in log space (streaming
/// log-sum-exp), since determinant and prefactor separately leave the f64
/// range long before their balanced product does.
pub fn phi2_hankel_tol(n: usize, lambda: f64, s_sum_tol: f64) -> Result<f64, DetformError> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    if n > TOEPLITZ_MAX_N {
        return Err(DetformError::SizeCap(n));
    }
    if n == 0 {
        return Ok((-lambda).exp() * a_coeff(0, 0, lambda)?);
    }
    let log_lambda = lambda.ln();
    let mut best = f64::NEG_INFINITY;
    let mut acc = 0.0f64;
    let mut log_sfac2 = 0.0f64;
    let mut s = 0u32;
    loop {
        let log_term = s as f64 * log_lambda - log_sfac2 + hankel_log_det(s, n, lambda)?;
        let rel = if log_term > best {
            acc = acc * (best - log_term).exp() + 1.0;
            best = log_term;
            1.0 / acc
        } else {
            let e = (log_term - best).exp();
            acc += e;
            e / acc
        };
        if s >= 2 && rel <= s_sum_tol {
            break;
        }
        s += 1;
        log_sfac2 += 2.0 * (s as f64).ln();
        if s > 500 {
            break;
        }
    }
    let exponent = -lambda - (n * (n - 1) / 2) as f64 * log_lambda + best + acc.ln();
    Ok(exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn factorial_f64(n: u32) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn toeplitz_entries_match_bessel() {
        // Frozen modified-Bessel values I_m(2√λ).
        let cases = [
            (0i64, 1.0, 2.2795853023360672674),
            (1, 1.0, 1.5906368546373290634),
            (5, 1.0, 0.0098256793231317023208),
            (0, 4.0, 11.301921952136330496),
            (3, 0.25, 0.022168424924331902476),
            (2, 0.25, 0.13574766976703828118),
        ];
        for (m, lam, want) in cases {
            let got = toeplitz_entry(m, lam).unwrap();
            println!("c_{m}({lam}) = {got:.17e}, rel err {:.2e}", (got - want).abs() / want);
            assert_relative_eq!(got, want, max_relative = 1e-14);
            assert_eq!(got, toeplitz_entry(-m, lam).unwrap());
        }
    }

    #[test]
    fn toeplitz_entry_degenerate_lambda() {
        assert_eq!(toeplitz_entry(0, 0.0).unwrap(), 1.0);
        assert_eq!(toeplitz_entry(3, 0.0).unwrap(), 0.0);
        // Leading behavior c_m ~ λ^{m/2}/m! as λ → 0.
        for m in 1u32..6 {
            let lam: f64 = 1e-14;
            let c = toeplitz_entry(m as i64, lam).unwrap();
            let lead = lam.powf(m as f64 / 2.0) / factorial_f64(m);
            assert_relative_eq!(c, lead, max_relative = 1e-10);
        }
        assert!(toeplitz_entry(0, -1.0).is_err());
        assert!(toeplitz_entry(0, f64::NAN).is_err());
    }

    #[test]
    fn toeplitz_system_positive_definite() {
        for n in 1..=12usize {
            for lam in [0.25, 1.0, 4.0] {
                let sys = ToeplitzSystem::new(n, lam).unwrap();
                assert!(sys.determinant() > 0.0);
                let m = sys.matrix();
                assert_eq!(m[(0, 0)], sys.entry(0));
                assert_eq!(m, m.transpose());
            }
        }
        assert!(ToeplitzSystem::new(0, 1.0).is_err());
        assert!(ToeplitzSystem::new(TOEPLITZ_MAX_N + 1, 1.0).is_err());
    }

    #[test]
    fn phi1_base_cases() {
        for lam in [0.25, 1.0, 4.0] {
            assert_relative_eq!(phi1_toeplitz(0, lam).unwrap(), (-lam).exp(), max_relative = 1e-15);
        }
        let want = (-1.0f64).exp() * 2.2795853023360672674;
        assert_relative_eq!(phi1_toeplitz(1, 1.0).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn phi1_matches_exact_series() {
        for (n, lam) in [(1usize, 1.0), (3, 2.0), (6, 2.0), (4, 0.25)] {
            let det = phi1_toeplitz(n, lam).unwrap();
            let series = phi_series(1, n as u32, lam, 40).unwrap();
            let err = (det - series.value).abs();
            println!("phi1 n={n} lam={lam}: det {det:.15e} series {:.15e} err {err:.2e}", series.value);
            assert!(err < 1e-10 + series.tail_bound);
        }
    }

    #[test]
    fn phi_series_base_cases() {
        assert_eq!(phi_series(1, 3, 0.0, 10).unwrap().value, 1.0);
        assert_eq!(phi_series(2, 0, 0.0, 10).unwrap().value, 1.0);
        // Second row ≤ 0 forces a single row: q⁽²⁾₀,ₙ = 1/N!, so the
        // Poissonization is e^{−λ} Σ λᴺ/(N!)².
        let got = phi_series(2, 0, 1.0, 40).unwrap().value;
        let want = (-1.0f64).exp() * 2.2795853023360672674;
        assert_relative_eq!(got, want, max_relative = 1e-13);
        let tail = phi_series(1, 3, 1.0, 30).unwrap().tail_bound;
        assert!(tail < 1e-25, "tail {tail:.2e}");
    }

    #[test]
    fn a_coeff_values() {
        assert_relative_eq!(
            a_coeff(0, 0, 1.0).unwrap(),
            2.2795853023360672674,
            max_relative = 1e-14
        );
        // a₁(0) against a direct truncated sum of λ^{m−1/2}/(m!(m−1)!).
        for lam in [0.5f64, 1.0, 4.0] {
            let mut direct = 0.0;
            let mut mfac = 1.0f64;
            let mut m1fac = 1.0f64;
            for m in 1u32..40 {
                mfac *= m as f64;
                if m > 1 {
                    m1fac *= (m - 1) as f64;
                }
                direct += lam.powf(m as f64 - 0.5) / (mfac * m1fac);
            }
            assert_relative_eq!(a_coeff(1, 0, lam).unwrap(), direct, max_relative = 1e-13);
        }
        for j in 1..6 {
            assert!(a_coeff(j, 2, 1e-13).unwrap() < 1e-6);
        }
    }

    #[test]
    fn a_coeff_j0_matches_toeplitz_entries() {
        for j in 0..=8i64 {
            for lam in [0.5, 1.0, 4.0] {
                let a = a_coeff(j as u32, 0, lam).unwrap();
                let c = toeplitz_entry(j, lam).unwrap();
                assert_relative_eq!(a, c, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn coefficient_table_consistent() {
        let table = CoefficientTable::build(2.0, 6, 10).unwrap();
        for j in 0..=6 {
            for s in 0..=10 {
                assert_eq!(table.get(j, s), a_coeff(j, s, 2.0).unwrap());
            }
        }
        assert!(table.max_tail < 1e-13);
    }

    #[test]
    fn phi2_base_value() {
        let got = phi2_intermediate(1, 1.0).unwrap();
        println!("phi2_1(1) = {got:.15}");
        assert_relative_eq!(got, 0.995766763794787, max_relative = 1e-12);
    }

    #[test]
    fn phi2_matches_exact_series() {
        for n_plus_1 in 1..=4usize {
            for lam in [0.25, 1.0, 4.0] {
                let det = phi2_intermediate(n_plus_1, lam).unwrap();
                let series = phi_series(2, n_plus_1 as u32, lam, 45).unwrap();
                let err = (det - series.value).abs();
                println!("phi2 n+1={n_plus_1} lam={lam}: err {err:.2e}");
                assert!(err < 1e-10 + series.tail_bound, "err {err:.2e}");
            }
        }
    }

    #[test]
    fn phi2_approaches_one_for_large_n() {
        let v = phi2_intermediate(18, 2.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "phi2_18(2) = {v}");
    }

    #[test]
    fn phi_monotone_and_dominated() {
        for lam in [0.5, 2.0] {
            let mut prev1 = 0.0;
            let mut prev2 = 0.0;
            for n in 1..=10usize {
                let p1 = phi1_toeplitz(n, lam).unwrap();
                let p2 = phi2_intermediate(n, lam).unwrap();
                assert!(p1 > 0.0 && p1 <= 1.0 + 1e-12);
                assert!(p2 > 0.0 && p2 <= 1.0 + 1e-12);
                assert!(p1 >= prev1 - 1e-12, "phi1 not monotone at n={n}");
                assert!(p2 >= prev2 - 1e-12, "phi2 not monotone at n={n}");
                assert!(p2 >= p1 - 1e-10, "phi2 < phi1 at n={n}");
                prev1 = p1;
                prev2 = p2;
            }
        }
    }

    #[test]
    fn ortho_poly_base_and_limit() {
        let p0 = ortho_poly(0, 1.0).unwrap();
        assert_eq!(p0.eta, vec![1.0]);
        assert_relative_eq!(p0.kappa2, 1.0 / 2.2795853023360672674, max_relative = 1e-14);
        // Nearly uniform weight: monic polynomials collapse to zᵏ.
        for k in 1..=5usize {
            let p = ortho_poly(k, 1e-12).unwrap();
            assert!((p.kappa2 - 1.0).abs() < 1e-5);
            for (i, &e) in p.eta.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((e - want).abs() < 1e-5, "k={k} i={i} e={e}");
            }
        }
    }

    #[test]
    fn ortho_poly_normalized_under_quadrature() {
        // (κₖ²/2π) ∫ |πₖ(e^{iθ})|² e^{2√λ cos θ} dθ = 1; trapezoid on the
        // circle converges spectrally.
        let lam: f64 = 2.0;
        let nodes = 256;
        for k in 0..=10usize {
            let p = ortho_poly(k, lam).unwrap();
            let mut integral = 0.0;
            for i in 0..nodes {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
                let (mut re, mut im) = (0.0, 0.0);
                for (pw, &e) in p.eta.iter().enumerate() {
                    re += e * (pw as f64 * theta).cos();
                    im += e * (pw as f64 * theta).sin();
                }
                integral += (re * re + im * im) * (2.0 * lam.sqrt() * theta.cos()).exp();
            }
            integral /= nodes as f64;
            assert_relative_eq!(p.kappa2 * integral, 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn kappa2_is_det_ratio() {
        for k in 1..=8usize {
            for lam in [1.0, 4.0] {
                let p = ortho_poly(k, lam).unwrap();
                let num = ToeplitzSystem::new(k, lam).unwrap().determinant();
                let den = ToeplitzSystem::new(k + 1, lam).unwrap().determinant();
                assert_relative_eq!(p.kappa2, num / den, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn toeplitz_inverse_identities_hold() {
        assert!(toeplitz_inverse_identity(1, 1.0).unwrap() < 1e-12);
        for n in 1..=10usize {
            for lam in [0.5, 1.0, 4.0] {
                let r = toeplitz_inverse_identity(n, lam).unwrap();
                println!("lem-inverse n={n} lam={lam}: residual {r:.2e}");
                assert!(r < 1e-10, "n={n} lam={lam} residual {r:.2e}");
            }
        }
    }

    #[test]
    fn hankel_first_row_relation() {
        // e^{−λ} λ^{−n(n−1)/2} H(0) = φ⁽¹⁾ₙ.
        for n in 1..=5usize {
            for lam in [1.0f64, 2.0] {
                let lhs = (-lam).exp()
                    * lam.powi(-((n * (n - 1) / 2) as i32))
                    * hankel_h(0, n, lam).unwrap();
                let rhs = phi1_toeplitz(n, lam).unwrap();
                let err = (lhs - rhs).abs();
                println!("hankel phi1 n={n} lam={lam}: err {err:.2e}");
                assert!(err < 1e-9);
            }
        }
    }

    #[test]
    fn hankel_one_by_one_is_zeroth_moment() {
        for lam in [0.5, 1.0, 3.0] {
            for s in [1u32, 2, 5] {
                assert_relative_eq!(
                    hankel_h(s, 1, lam).unwrap(),
                    a_coeff(0, s, lam).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn hankel_second_row_relation() {
        // e^{−λ} λ^{−n(n−1)/2} Σ_s λˢ/(s!)² H(s) = φ⁽²⁾ₙ.
        for n in 1..=4usize {
            for lam in [1.0f64, 2.0] {
                let mut total = 0.0;
                let mut weight = 1.0;
                for s in 0..30u32 {
                    if s > 0 {
                        weight *= lam / (s as f64 * s as f64);
                    }
                    total += weight * hankel_h(s, n, lam).unwrap();
                }
                let lhs = (-lam).exp() * lam.powi(-((n * (n - 1) / 2) as i32)) * total;
                let series = phi_series(2, n as u32, lam, 45).unwrap();
                let err = (lhs - series.value).abs();
                println!("hankel phi2 n={n} lam={lam}: err {err:.2e}");
                assert!(err < 1e-8 + series.tail_bound);
            }
        }
    }

    #[test]
    fn phi2_hankel_agrees_with_intermediate() {
        for n in 1..=8usize {
            for lam in [0.25f64, 0.5, 1.0, 4.0] {
                let h = phi2_hankel(n, lam).unwrap();
                let q = phi2_intermediate(n, lam).unwrap();
                println!("phi2 n={n} lam={lam}: hankel {h:.12e} quad {q:.12e}");
                assert_relative_eq!(h, q, max_relative = 1e-9);
            }
        }
        assert_relative_eq!(
            phi2_hankel(0, 1.0).unwrap(),
            (-1.0f64).exp() * a_coeff(0, 0, 1.0).unwrap(),
            max_relative = 1e-12
        );
        assert_eq!(phi2_hankel(3, 0.0).unwrap(), 1.0);
    }
}
