//! Integration of Painlevé II `u″ = 2u³ + xu` on the branch fixed by
//! `u(x;t) ~ −√t·Ai(x)`, `x → +∞`, together with the variational equation
//! `v″ = (6u² + x)v` for `v = ∂u/∂t` and the four running integrals the
//! distribution functions are built from.
//!
//! The stepper is the Dormand–Prince 5(4) embedded Runge–Kutta pair with
//! proportional step control.  Error control on the solution components is
//! effectively pure-relative: near the right endpoint `u` is of order
//! `Ai(8) ≈ 5·10⁻⁸`, and any absolute tolerance floor above ~10⁻¹⁶ lets
//! the controller accept steps whose relative error in `u` is O(1), after
//! which the integration leaves the decaying branch and diverges mid-range.
//! The integral accumulators start at exactly zero, so they keep a small
//! absolute floor instead.

use super::{airy_ai, airy_ai_prime, PainleveError};

/// Spacing of the recorded solution grid; also the step-size cap.
pub(crate) const RECORD_SPACING: f64 = 1.0 / 256.0;
/// Matching tolerance when a step lands on a record target.
const SNAP: f64 = 1e-12;

/// Adaptive step-size parameters for [`solve_pii`].
#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    /// Relative tolerance for the embedded error estimate.
    pub rtol: f64,
    /// Absolute floor for the solution components `u, u′, v, v′`.
    pub atol_state: f64,
    /// Absolute floor for the integral accumulators.
    pub atol_accum: f64,
    /// Largest step size the controller may take.
    pub max_step: f64,
    /// Hard cap on accepted plus rejected steps.
    pub max_steps: u64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-13,
            atol_state: 1e-290,
            atol_accum: 1e-18,
            max_step: RECORD_SPACING,
            max_steps: 4_000_000,
        }
    }
}

/// The solution branch recorded on a descending grid of spacing 1/256.
///
/// `i1..i4` accumulate `∫ₓ^{x₀} u²`, `∫ₓ^{x₀} s·u²`, `∫ₓ^{x₀} u·v` and
/// `∫ₓ^{x₀} s·u·v`; `tail1..tail4` are the corresponding `[x₀, ∞)` pieces
/// evaluated in closed form from the Airy boundary data.
#[derive(Clone, Debug)]
pub struct PiiSolution {
    t: f64,
    grid: Vec<f64>,
    u: Vec<f64>,
    u_prime: Vec<f64>,
    v: Vec<f64>,
    v_prime: Vec<f64>,
    pub(crate) i1: Vec<f64>,
    pub(crate) i2: Vec<f64>,
    pub(crate) i3: Vec<f64>,
    pub(crate) i4: Vec<f64>,
    pub(crate) tail1: f64,
    pub(crate) tail2: f64,
    pub(crate) tail3: f64,
    pub(crate) tail4: f64,
}

impl PiiSolution {
    /// The deformation parameter the branch was solved at.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Recorded abscissas, strictly descending from `x_start` to `x_end`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// `u` on [`Self::grid`].
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `u′` on [`Self::grid`].
    pub fn u_prime(&self) -> &[f64] {
        &self.u_prime
    }

    /// `∂u/∂t` on [`Self::grid`].
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// `∂u′/∂t` on [`Self::grid`].
    pub fn v_prime(&self) -> &[f64] {
        &self.v_prime
    }
}

/// State layout: `[u, u′, v, v′, i1, i2, i3, i4]`.  The integrals run from
/// `x` up to `x₀`, so their derivatives in `x` carry a minus sign.
fn rhs(x: f64, y: &[f64; 8]) -> [f64; 8] {
    let (u, up, v, vp) = (y[0], y[1], y[2], y[3]);
    [
        up,
        2.0 * u * u * u + x * u,
        vp,
        (6.0 * u * u + x) * v,
        -u * u,
        -x * u * u,
        -u * v,
        -x * u * v,
    ]
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince trial step from `(x, y)` with signed size `h`.
/// Returns the fifth-order solution and the scaled error norm.
fn dp_step(x: f64, y: &[f64; 8], h: f64, control: &StepControl) -> ([f64; 8], f64) {
    let mut k = [[0.0f64; 8]; 7];
    k[0] = rhs(x, y);
    let stages: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for (s, a) in stages.iter().enumerate() {
        let mut ys = *y;
        for (j, &aj) in a.iter().enumerate() {
            for i in 0..8 {
                ys[i] += h * aj * k[j][i];
            }
        }
        k[s + 1] = rhs(x + C[s] * h, &ys);
    }
    let mut y5 = *y;
    for j in 0..6 {
        for i in 0..8 {
            y5[i] += h * B5[j] * k[j][i];
        }
    }
    k[6] = rhs(x + h, &y5);
    let mut err_sq = 0.0;
    for i in 0..8 {
        let mut e = 0.0;
        for j in 0..7 {
            e += (B5[j] - B4[j]) * k[j][i];
        }
        e *= h;
        let atol = if i < 4 {
            control.atol_state
        } else {
            control.atol_accum
        };
        let sc = atol + control.rtol * y[i].abs().max(y5[i].abs());
        err_sq += (e / sc) * (e / sc);
    }
    (y5, (err_sq / 8.0).sqrt())
}

/// Integrates the `u(x;t) ~ −√t·Ai(x)` branch from `x_start` down to
/// `x_end`, recording every 1/256.
///
/// `x_start` must sit inside the Airy regime (`≥ 8`) so the boundary data
/// `u = −√t·Ai`, `v = −Ai/(2√t)` is accurate to the solver tolerance.  At
/// `t = 1` the branch is a separatrix and the recovered solution leaves it
/// near `x ≈ −10` no matter how tight the tolerances are, so the range is
/// capped there; for `t < 1` the branch is bounded and oscillatory and the
/// cap is `−40`.
pub fn solve_pii(
    t: f64,
    x_start: f64,
    x_end: f64,
    control: &StepControl,
) -> Result<PiiSolution, PainleveError> {
    if !t.is_finite() || t <= 0.0 || t > 1.0 {
        return Err(PainleveError::InvalidT(t));
    }
    let range = |reason| PainleveError::BadRange {
        x_start,
        x_end,
        reason,
    };
    if !x_start.is_finite() || x_start < 8.0 {
        return Err(range("start must lie in the Airy regime (x ≥ 8)"));
    }
    if !x_end.is_finite() || x_end >= x_start {
        return Err(range("end must lie below start"));
    }
    let floor = if t >= 1.0 - 1e-12 { -10.0 } else { -40.0 };
    if x_end < floor - 1e-9 {
        return Err(range(
            "end lies below the supported range for this branch",
        ));
    }

    let sqrt_t = t.sqrt();
    let ai = airy_ai(x_start);
    let aip = airy_ai_prime(x_start);
    let j1 = aip * aip - x_start * ai * ai;
    let j2 = (x_start * aip * aip - x_start * x_start * ai * ai - ai * aip) / 3.0;
    let mut sol = PiiSolution {
        t,
        grid: Vec::new(),
        u: Vec::new(),
        u_prime: Vec::new(),
        v: Vec::new(),
        v_prime: Vec::new(),
        i1: Vec::new(),
        i2: Vec::new(),
        i3: Vec::new(),
        i4: Vec::new(),
        tail1: t * j1,
        tail2: t * j2,
        tail3: j1 / 2.0,
        tail4: j2 / 2.0,
    };

    let mut x = x_start;
    let mut y = [
        -sqrt_t * ai,
        -sqrt_t * aip,
        -ai / (2.0 * sqrt_t),
        -aip / (2.0 * sqrt_t),
        0.0,
        0.0,
        0.0,
        0.0,
    ];
    let record = |sol: &mut PiiSolution, x: f64, y: &[f64; 8]| {
        sol.grid.push(x);
        sol.u.push(y[0]);
        sol.u_prime.push(y[1]);
        sol.v.push(y[2]);
        sol.v_prime.push(y[3]);
        sol.i1.push(y[4]);
        sol.i2.push(y[5]);
        sol.i3.push(y[6]);
        sol.i4.push(y[7]);
    };
    record(&mut sol, x, &y);

    let mut target_index: u64 = 1;
    let next_target = |idx: u64| (x_start - idx as f64 * RECORD_SPACING).max(x_end);
    let mut target = next_target(target_index);
    let mut h = -control.max_step.min(RECORD_SPACING);
    let mut steps: u64 = 0;
    loop {
        steps += 1;
        if steps > control.max_steps || h.abs() < SNAP {
            return Err(PainleveError::StepCollapse { x });
        }
        if x + h < target {
            h = target - x;
        }
        let (y5, err) = dp_step(x, &y, h, control);
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            x += h;
            y = y5;
            if !y.iter().all(|c| c.is_finite()) || y[0].abs() > 1e8 {
                return Err(PainleveError::StepCollapse { x });
            }
            if (x - target).abs() < SNAP {
                x = target;
                record(&mut sol, x, &y);
                if (x - x_end).abs() < SNAP {
                    return Ok(sol);
                }
                target_index += 1;
                target = next_target(target_index);
            }
        }
        h = (h * factor).max(-control.max_step);
    }
}

/// Maximum residuals of `u″ − (2u³ + xu)` and `v″ − (6u² + x)v` over the
/// uniformly spaced prefix of the recorded grid, measured with the
/// five-point central second-difference and normalized per point by
/// `1 + |right-hand side|`: the variational solution `v` rides the growing
/// mode of the linearization and reaches ~10⁸ by `x = −8`, so only a
/// relative residual is meaningful there.  Returns NaNs when fewer than
/// five uniform points exist.
pub fn ode_residual_max(sol: &PiiSolution) -> (f64, f64) {
    let g = sol.grid();
    if g.len() < 5 {
        return (f64::NAN, f64::NAN);
    }
    let spacing = g[0] - g[1];
    let mut uniform = 2;
    while uniform < g.len() && (g[uniform - 1] - g[uniform] - spacing).abs() < 1e-9 {
        uniform += 1;
    }
    if uniform < 5 {
        return (f64::NAN, f64::NAN);
    }
    let second = |f: &[f64], j: usize| {
        (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2])
            / (12.0 * spacing * spacing)
    };
    let mut res_u = 0.0f64;
    let mut res_v = 0.0f64;
    for j in 2..uniform - 2 {
        let (x, u, v) = (g[j], sol.u[j], sol.v[j]);
        let rhs_u = 2.0 * u * u * u + x * u;
        let rhs_v = (6.0 * u * u + x) * v;
        res_u = res_u.max((second(&sol.u, j) - rhs_u).abs() / (1.0 + rhs_u.abs()));
        res_v = res_v.max((second(&sol.v, j) - rhs_v).abs() / (1.0 + rhs_v.abs()));
    }
    (res_u, res_v)
}
