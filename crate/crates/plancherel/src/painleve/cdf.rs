//! The Tracy-Widom family `F(x;t) = exp(−∫ₓ^∞ (s−x)u(s;t)² ds)`, the
//! second-row distribution `F⁽²⁾ = F − ∂ₜF|ₜ₌₁`, and raw moments.
//!
//! Deep in the right tail (`x ≥ 8`) the exponent is evaluated in closed
//! form from the Airy approximation `u ≈ −√t·Ai`; everywhere else it comes
//! from the running integrals of a recorded Painlevé II solve, read off
//! either exactly at grid points or by cubic Hermite interpolation whose
//! endpoint derivatives are known exactly from the integrands.

use super::ode::{solve_pii, PiiSolution, StepControl, RECORD_SPACING};
use super::{airy_ai, airy_ai_prime, PainleveError};

/// Largest tail mass allowed at either end of a moment grid.
const TAIL_GATE: f64 = 1e-8;

/// `(∫ₓ^∞ Ai(s)² ds, ∫ₓ^∞ s·Ai(s)² ds)` in closed form:
/// `Ai′(x)² − x·Ai(x)²` and `(x·Ai′(x)² − x²·Ai(x)² − Ai(x)Ai′(x))/3`.
pub fn airy_tail_integrals(x: f64) -> (f64, f64) {
    let ai = airy_ai(x);
    let aip = airy_ai_prime(x);
    let j1 = aip * aip - x * ai * ai;
    let j2 = (x * aip * aip - x * x * ai * ai - ai * aip) / 3.0;
    (j1, j2)
}

fn hermite(xl: f64, xr: f64, fl: f64, fr: f64, dl: f64, dr: f64, x: f64) -> f64 {
    let hh = xr - xl;
    let s = (x - xl) / hh;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * fl
        + (s3 - 2.0 * s2 + s) * hh * dl
        + (-2.0 * s3 + 3.0 * s2) * fr
        + (s3 - s2) * hh * dr
}

/// The four accumulated integrals at `x`, exact at recorded points and
/// Hermite-interpolated (with exact endpoint derivatives) in between.
fn integrals_at(sol: &PiiSolution, x: f64) -> Result<[f64; 4], PainleveError> {
    let g = sol.grid();
    let pos = g.partition_point(|&gx| gx >= x - 1e-9);
    if pos == 0 {
        return Err(PainleveError::BadGrid);
    }
    let j = pos - 1;
    if (g[j] - x).abs() < 1e-9 {
        return Ok([sol.i1[j], sol.i2[j], sol.i3[j], sol.i4[j]]);
    }
    if j + 1 >= g.len() {
        return Err(PainleveError::BadGrid);
    }
    let (xr, xl) = (g[j], g[j + 1]);
    let (ur, ul) = (sol.u()[j], sol.u()[j + 1]);
    let (vr, vl) = (sol.v()[j], sol.v()[j + 1]);
    let values = [&sol.i1, &sol.i2, &sol.i3, &sol.i4];
    let d_r = [-ur * ur, -xr * ur * ur, -ur * vr, -xr * ur * vr];
    let d_l = [-ul * ul, -xl * ul * ul, -ul * vl, -xl * ul * vl];
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = hermite(xl, xr, values[k][j + 1], values[k][j], d_l[k], d_r[k], x);
    }
    Ok(out)
}

/// Runs the single Painlevé II solve a grid needs, down to the first
/// recorded point at or below its minimum; `None` when every grid point
/// lies in the closed-form Airy regime.
fn solve_for_grid(
    t: f64,
    grid: &[f64],
    control: &StepControl,
) -> Result<Option<PiiSolution>, PainleveError> {
    let xmin = grid
        .iter()
        .copied()
        .filter(|&x| x < 8.0)
        .fold(f64::INFINITY, f64::min);
    if !xmin.is_finite() {
        return Ok(None);
    }
    let k = ((8.0 - xmin) / RECORD_SPACING - 1e-9).ceil().max(1.0);
    Ok(Some(solve_pii(t, 8.0, 8.0 - k * RECORD_SPACING, control)?))
}

fn check_grid(t: f64, grid: &[f64]) -> Result<(), PainleveError> {
    if !t.is_finite() || t <= 0.0 || t > 1.0 {
        return Err(PainleveError::InvalidT(t));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(PainleveError::BadGrid);
    }
    Ok(())
}

fn tw_point(t: f64, x: f64, sol: Option<&PiiSolution>) -> Result<f64, PainleveError> {
    if x >= 8.0 {
        let (j1, j2) = airy_tail_integrals(x);
        return Ok((-t * (j2 - x * j1)).exp());
    }
    let sol = sol.ok_or(PainleveError::BadGrid)?;
    let ints = integrals_at(sol, x)?;
    Ok((-((ints[1] + sol.tail2) - x * (ints[0] + sol.tail1))).exp())
}

/// `F(x;t)` on an arbitrary finite grid.
pub fn tw_cdf_with_control(
    t: f64,
    grid: &[f64],
    control: &StepControl,
) -> Result<Vec<f64>, PainleveError> {
    check_grid(t, grid)?;
    let sol = solve_for_grid(t, grid, control)?;
    grid.iter()
        .map(|&x| tw_point(t, x, sol.as_ref()))
        .collect()
}

/// `F(x;t)` with the default step control; `t = 1` is the Tracy-Widom
/// distribution of the scaled longest row.
pub fn tw_cdf(t: f64, grid: &[f64]) -> Result<Vec<f64>, PainleveError> {
    tw_cdf_with_control(t, grid, &StepControl::default())
}

/// `F`, its `t`-derivative, and `F⁽²⁾` on a shared grid at `t = 1`.
#[derive(Clone, Debug)]
pub struct CdfTable {
    pub grid: Vec<f64>,
    pub f1: Vec<f64>,
    pub d_f_dt: Vec<f64>,
    pub f2: Vec<f64>,
}

/// Builds the `t = 1` table in one solve: with `G = I₄ − x·I₃` built from
/// the mixed integrals `∫ u·∂ₜu`, the derivative is `∂ₜF = −2F·G` and the
/// second-row distribution is `F⁽²⁾ = F·(1 + 2G)`.
pub fn f2_cdf(grid: &[f64]) -> Result<CdfTable, PainleveError> {
    check_grid(1.0, grid)?;
    let control = StepControl::default();
    let sol = solve_for_grid(1.0, grid, &control)?;
    let mut f1 = Vec::with_capacity(grid.len());
    let mut d_f_dt = Vec::with_capacity(grid.len());
    let mut f2 = Vec::with_capacity(grid.len());
    for &x in grid {
        let (f, g) = if x >= 8.0 {
            let (j1, j2) = airy_tail_integrals(x);
            ((-(j2 - x * j1)).exp(), (j2 - x * j1) / 2.0)
        } else {
            let sol = sol.as_ref().ok_or(PainleveError::BadGrid)?;
            let ints = integrals_at(sol, x)?;
            let f = (-((ints[1] + sol.tail2) - x * (ints[0] + sol.tail1))).exp();
            (f, (ints[3] + sol.tail4) - x * (ints[2] + sol.tail3))
        };
        f1.push(f);
        d_f_dt.push(-2.0 * f * g);
        f2.push(f * (1.0 + 2.0 * g));
    }
    Ok(CdfTable {
        grid: grid.to_vec(),
        f1,
        d_f_dt,
        f2,
    })
}

/// One-sided Richardson estimate of `∂ₜF|ₜ₌₁` from `t ∈ {1, 1−h, 1−h/2}`,
/// an independent check on the variational route.
pub fn dfdt_finite_difference(grid: &[f64], h: f64) -> Result<Vec<f64>, PainleveError> {
    if !h.is_finite() || h <= 0.0 || h > 0.25 {
        return Err(PainleveError::BadOffset(h));
    }
    let f_full = tw_cdf(1.0, grid)?;
    let f_h = tw_cdf(1.0 - h, grid)?;
    let f_half = tw_cdf(1.0 - h / 2.0, grid)?;
    Ok((0..grid.len())
        .map(|i| {
            let d_h = (f_full[i] - f_h[i]) / h;
            let d_half = (f_full[i] - f_half[i]) / (h / 2.0);
            2.0 * d_half - d_h
        })
        .collect())
}

/// Raw moment `E[Xᵐ]` of the distribution tabulated as `(grid, f)`:
/// `bᵐF(b) − aᵐF(a) − m∫ xᵐ⁻¹F dx` with composite Simpson quadrature (a
/// trapezoid closes an odd final interval).  Both tail masses must be
/// below 10⁻⁸; `m = 0` returns the captured mass `F(b) − F(a)`.
pub fn distribution_moments(grid: &[f64], f: &[f64], order: u32) -> Result<f64, PainleveError> {
    if grid.len() != f.len() || grid.len() < 2 {
        return Err(PainleveError::BadGrid);
    }
    if grid.iter().chain(f.iter()).any(|x| !x.is_finite()) {
        return Err(PainleveError::BadGrid);
    }
    let h = grid[1] - grid[0];
    if h <= 0.0 || grid.windows(2).any(|w| (w[1] - w[0] - h).abs() > 1e-9) {
        return Err(PainleveError::BadGrid);
    }
    let (f_a, f_b) = (f[0], *f.last().unwrap());
    if f_a > TAIL_GATE || 1.0 - f_b > TAIL_GATE {
        return Err(PainleveError::UnresolvedTail(f_a, 1.0 - f_b));
    }
    if order == 0 {
        return Ok(f_b - f_a);
    }
    let m = order as i32;
    let (a, b) = (grid[0], *grid.last().unwrap());
    let integrand: Vec<f64> = grid
        .iter()
        .zip(f)
        .map(|(&x, &fx)| x.powi(m - 1) * fx)
        .collect();
    let n = grid.len() - 1;
    let mut integral = 0.0;
    let mut j = 0;
    while j + 2 <= n {
        integral += h / 3.0 * (integrand[j] + 4.0 * integrand[j + 1] + integrand[j + 2]);
        j += 2;
    }
    if j < n {
        integral += h / 2.0 * (integrand[n - 1] + integrand[n]);
    }
    Ok(b.powi(m) * f_b - a.powi(m) * f_a - f64::from(order) * integral)
}
