//! The Airy function `Ai` and its derivative on the real line.
//!
//! For `|x| ≤ 8` the Maclaurin series is summed in double-double
//! arithmetic: the series terms grow to ~10⁶ before the final value cancels
//! down to ~10⁻¹ or less, which costs up to 8 digits, so plain f64
//! summation cannot reach the accuracy the Painlevé boundary data needs.
//! Beyond ±8 the Poincaré asymptotic expansions (with the standard `u_k`,
//! `v_k` coefficient recurrences) are truncated at their smallest term,
//! which leaves errors near 10⁻¹⁵ at the switchover.

use super::dd::Dd;

const SWITCHOVER: f64 = 8.0;

/// `Ai(0) = 3^{−2/3}/Γ(2/3)` to double-double precision.
const AI_ZERO: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
/// `−Ai′(0) = 3^{−1/3}/Γ(1/3)` to double-double precision.
const AI_PRIME_ZERO: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const INV_TWO_SQRT_PI: f64 = 0.28209479177387814;
const INV_SQRT_PI: f64 = 0.5641895835477563;
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

/// Maclaurin evaluation of `(Ai(x), Ai′(x))`, valid on `|x| ≤ 8`.
fn series(x: f64) -> (f64, f64) {
    let xd = Dd::from(x);
    let x2 = xd * xd;
    let x3 = x2 * xd;
    // f = Σ x^{3k}·(1/3·2)(1/6·5)⋯ and g = Σ x^{3k+1}·(1/4·3)⋯ solve
    // w'' = xw with (f, f')(0) = (1, 0) and (g, g')(0) = (0, 1).
    let mut f = Dd::from(1.0);
    let mut tf = Dd::from(1.0);
    let mut g = xd;
    let mut tg = xd;
    let mut fp = Dd::from(0.0);
    let mut tfp = Dd::from(0.0);
    let mut gp = Dd::from(1.0);
    let mut tgp = Dd::from(1.0);
    for k in 1..200u32 {
        let kf = k as f64;
        tf = tf * x3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        f = f + tf;
        tg = tg * x3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        g = g + tg;
        tfp = if k == 1 {
            x2 / 2.0
        } else {
            tfp * x3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0))
        };
        fp = fp + tfp;
        tgp = tgp * x3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        gp = gp + tgp;
        if tf.abs() < 1e-50 && tg.abs() < 1e-50 && tfp.abs() < 1e-50 && tgp.abs() < 1e-50 {
            break;
        }
    }
    let ai = AI_ZERO * f - AI_PRIME_ZERO * g;
    let aip = AI_ZERO * fp - AI_PRIME_ZERO * gp;
    (ai.to_f64(), aip.to_f64())
}

/// Asymptotic evaluation for `x > 8`:
/// `Ai ~ e^{−ζ}/(2√π x^{1/4}) Σ (−1)^k u_k ζ^{−k}`,
/// `Ai′ ~ −x^{1/4} e^{−ζ}/(2√π) Σ (−1)^k v_k ζ^{−k}`, `ζ = ⅔x^{3/2}`.
fn asym_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut u = 1.0f64;
    let mut v = 1.0f64;
    let mut sign = 1.0;
    let mut zpow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..40u32 {
        let term = u / zpow;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        su += sign * term;
        sv += sign * v / zpow;
        if term.abs() < 1e-18 {
            break;
        }
        let next = (k + 1) as f64;
        u *= (6.0 * next - 5.0) * (6.0 * next - 1.0) / (72.0 * next);
        v = u * (6.0 * next + 1.0) / (1.0 - 6.0 * next);
        sign = -sign;
        zpow *= zeta;
    }
    let envelope = (-zeta).exp() * INV_TWO_SQRT_PI;
    (envelope / x.powf(0.25) * su, -envelope * x.powf(0.25) * sv)
}

/// Asymptotic evaluation for `x < −8`, oscillatory side: with `a = −x`,
/// `ζ = ⅔a^{3/2}`, and sums split over even/odd `k` with signs
/// `(−1)^{⌊k/2⌋}`,
/// `Ai  =  [sin(ζ+π/4)·S₁ᵘ − cos(ζ+π/4)·S₂ᵘ] / (√π a^{1/4})`,
/// `Ai′ = −[cos(ζ+π/4)·S₁ᵛ + sin(ζ+π/4)·S₂ᵛ] · a^{1/4}/√π`.
fn asym_neg(x: f64) -> (f64, f64) {
    let a = -x;
    let zeta = 2.0 / 3.0 * a.powf(1.5);
    let mut s1u = 0.0;
    let mut s2u = 0.0;
    let mut s1v = 0.0;
    let mut s2v = 0.0;
    let mut u = 1.0f64;
    let mut v = 1.0f64;
    let mut zpow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..40u32 {
        let term = u / zpow;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            s1u += sign * term;
            s1v += sign * v / zpow;
        } else {
            s2u += sign * term;
            s2v += sign * v / zpow;
        }
        if term.abs() < 1e-18 {
            break;
        }
        let next = (k + 1) as f64;
        u *= (6.0 * next - 5.0) * (6.0 * next - 1.0) / (72.0 * next);
        v = u * (6.0 * next + 1.0) / (1.0 - 6.0 * next);
        zpow *= zeta;
    }
    let (sin_p, cos_p) = (zeta + FRAC_PI_4).sin_cos();
    let ai = (sin_p * s1u - cos_p * s2u) * INV_SQRT_PI / a.powf(0.25);
    let aip = -(cos_p * s1v + sin_p * s2v) * INV_SQRT_PI * a.powf(0.25);
    (ai, aip)
}

fn ai_pair(x: f64) -> (f64, f64) {
    if x.abs() <= SWITCHOVER {
        series(x)
    } else if x > 0.0 {
        asym_pos(x)
    } else {
        asym_neg(x)
    }
}

/// `Ai(x)`.
pub fn airy_ai(x: f64) -> f64 {
    ai_pair(x).0
}

/// `Ai′(x)`.
pub fn airy_ai_prime(x: f64) -> f64 {
    ai_pair(x).1
}
