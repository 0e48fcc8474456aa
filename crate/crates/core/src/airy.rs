//! Complex Airy function of the first kind and the rotated-ray integral
//! used by the wall correctors.
//!
//! Values span hundreds of orders of magnitude across the parameter sweeps,
//! so everything is computed in a scaled representation
//! `value = mantissa * exp(log_scale)`.
//!
//! Evaluation: Maclaurin series for `|z| <= 6`, the standard asymptotic
//! expansion for `|z| > 6` in `|arg z| <= 2 pi / 3`, and the connection
//! formula `Ai(z) = -e^{-2 pi i/3} Ai(z e^{-2 pi i/3})
//! - e^{+2 pi i/3} Ai(z e^{+2 pi i/3})` to rotate the remaining sector onto
//! the previous two.

use std::f64::consts::PI;

use crate::{CoreError, Result, C64};

/// A complex value stored as `m * exp(log)` with `m` of moderate modulus.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub m: C64,
    pub log: f64,
}

impl Scaled {
    pub fn zero() -> Self {
        Scaled {
            m: C64::new(0.0, 0.0),
            log: 0.0,
        }
    }

    pub fn from_c64(v: C64) -> Self {
        Scaled { m: v, log: 0.0 }.normalize()
    }

    /// Collapse to a plain complex number; may overflow to inf for large
    /// scales, which is the caller's responsibility to avoid.
    pub fn to_c64(self) -> C64 {
        self.m * self.log.exp()
    }

    pub fn normalize(self) -> Self {
        let a = self.m.norm();
        if a == 0.0 || !a.is_finite() {
            return self;
        }
        let l = a.ln();
        Scaled {
            m: self.m / a,
            log: self.log + l,
        }
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled {
            m: self.m * other.m,
            log: self.log + other.log,
        }
        .normalize()
    }

    pub fn mul_c64(self, other: C64) -> Scaled {
        Scaled {
            m: self.m * other,
            log: self.log,
        }
        .normalize()
    }

    pub fn add(self, other: Scaled) -> Scaled {
        if other.m.norm() == 0.0 {
            return self;
        }
        if self.m.norm() == 0.0 {
            return other;
        }
        let l = self.log.max(other.log);
        let m = self.m * (self.log - l).exp() + other.m * (other.log - l).exp();
        Scaled { m, log: l }.normalize()
    }

    /// Modulus ratio `|self| / |other|` as a plain f64.
    pub fn abs_ratio(self, other: Scaled) -> f64 {
        (self.m.norm() / other.m.norm()) * (self.log - other.log).exp()
    }

    pub fn log_abs(self) -> f64 {
        self.m.norm().ln() + self.log
    }
}

const SERIES_RADIUS: f64 = 6.0;

/// Ai(0) and -Ai'(0).
const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = 0.258_819_403_792_806_8;

/// Airy function of the first kind for complex argument, scaled.
pub fn airy_ai(z: C64) -> Result<Scaled> {
    if z.norm() <= SERIES_RADIUS {
        return Ok(Scaled::from_c64(ai_series(z)?.0));
    }
    let arg = z.arg();
    if arg.abs() <= 2.0 * PI / 3.0 {
        return ai_asymptotic(z);
    }
    // Connection formula onto the two rotated arguments.
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let a_plus = airy_ai(z * rot)?;
    let a_minus = airy_ai(z / rot)?;
    Ok(a_plus
        .mul_c64(-rot)
        .add(a_minus.mul_c64(-rot.conj())))
}

/// Derivative of the Airy function, scaled.
pub fn airy_ai_prime(z: C64) -> Result<Scaled> {
    if z.norm() <= SERIES_RADIUS {
        return Ok(Scaled::from_c64(ai_series(z)?.1));
    }
    let arg = z.arg();
    if arg.abs() <= 2.0 * PI / 3.0 {
        return aip_asymptotic(z);
    }
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let a_plus = airy_ai_prime(z * rot)?;
    let a_minus = airy_ai_prime(z / rot)?;
    // d/dz of the connection formula picks up the rotation factors squared.
    Ok(a_plus
        .mul_c64(-rot * rot)
        .add(a_minus.mul_c64(-(rot * rot).conj())))
}

/// Maclaurin series; returns (Ai, Ai').
fn ai_series(z: C64) -> Result<(C64, C64)> {
    if z.norm() == 0.0 {
        return Ok((C64::new(AI0, 0.0), C64::new(-AIP0, 0.0)));
    }
    // f = sum 3^m (1/3)_m z^{3m}/(3m)!, g = sum 3^m (2/3)_m z^{3m+1}/(3m+1)!
    let z3 = z * z * z;
    let mut f_term = C64::new(1.0, 0.0);
    let mut g_term = z;
    let mut f = f_term;
    let mut g = g_term;
    // derivative series: f' = sum of d/dz terms; accumulate directly
    let mut fp = C64::new(0.0, 0.0);
    let mut gp = C64::new(1.0, 0.0);
    let mut fp_term;
    let mut gp_term;
    for m in 1..200 {
        let mf = m as f64;
        f_term *= z3 / ((3.0 * mf - 1.0) * (3.0 * mf));
        g_term *= z3 / ((3.0 * mf) * (3.0 * mf + 1.0));
        f += f_term;
        g += g_term;
        fp_term = f_term * (3.0 * mf) / z;
        gp_term = g_term * (3.0 * mf + 1.0) / z;
        fp += fp_term;
        gp += gp_term;
        let scale = f.norm() + g.norm();
        if f_term.norm() < 1e-18 * scale && g_term.norm() < 1e-18 * scale {
            let ai = f * AI0 - g * AIP0;
            let aip = fp * AI0 - gp * AIP0;
            return Ok((ai, aip));
        }
    }
    Err(CoreError::AiryEvalFailure { z })
}

/// Asymptotic expansion valid in `|arg z| <= 2 pi/3`, truncated at the
/// smallest term.
fn ai_asymptotic(z: C64) -> Result<Scaled> {
    let (sum, xi, z_quarter) = asymptotic_sum(z, false)?;
    let pref = 1.0 / (2.0 * PI.sqrt());
    let m = sum * pref / z_quarter * C64::from_polar(1.0, -xi.im);
    Ok(Scaled { m, log: -xi.re }.normalize())
}

fn aip_asymptotic(z: C64) -> Result<Scaled> {
    let (sum, xi, z_quarter) = asymptotic_sum(z, true)?;
    let pref = -1.0 / (2.0 * PI.sqrt());
    let m = sum * pref * z_quarter * C64::from_polar(1.0, -xi.im);
    Ok(Scaled { m, log: -xi.re }.normalize())
}

/// Shared sum for Ai (u_k) and Ai' (v_k); returns (sum, xi, z^{1/4}).
fn asymptotic_sum(z: C64, derivative: bool) -> Result<(C64, C64, C64)> {
    let sqrt_z = z.sqrt();
    let xi = z * sqrt_z * (2.0 / 3.0);
    let z_quarter = sqrt_z.sqrt();
    let inv_xi = C64::new(1.0, 0.0) / xi;
    let mut coeff = 1.0f64;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        // u_k = u_{k-1} (6k-5)(6k-1)/(72k); v_k = u_k (6k+1)/(1-6k)
        coeff *= (6.0 * kf - 5.0) * (6.0 * kf - 1.0) / (72.0 * kf);
        let c = if derivative {
            coeff * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf)
        } else {
            coeff
        };
        term *= -inv_xi;
        let contrib = term * c;
        let mag = contrib.norm();
        if mag > last {
            // divergent tail reached; accept the partial sum
            break;
        }
        sum += contrib;
        last = mag;
        if mag < 1e-17 * sum.norm() {
            break;
        }
    }
    Ok((sum, xi, z_quarter))
}

/// `A0(z) = e^{i pi/6} int_0^inf Ai(e^{i pi/6} (z + s)) ds`, scaled.
///
/// The ray direction keeps the integrand decaying superexponentially; panels
/// are graded by the local oscillation scale `|w|^{1/2}` and refined
/// adaptively until the estimate stabilizes.
pub fn a0_integral(z: C64) -> Result<Scaled> {
    let rot = C64::from_polar(1.0, PI / 6.0);
    let f = |s: f64| -> Result<Scaled> { airy_ai(rot * (z + s)) };

    // March panels until the tail is negligible relative to the running sum.
    let mut acc = Scaled::zero();
    let mut s = 0.0f64;
    let s_max = 2.0 * z.norm() + 40.0;
    while s < s_max {
        let w_mag = (z + s).norm();
        let panel = (2.0 / (1.0 + w_mag.sqrt())).clamp(0.05, 1.0);
        let panel_val = gauss20_scaled(&f, s, s + panel)?;
        acc = acc.add(panel_val);
        s += panel;
        // Termination: integrand magnitude fell far below the accumulated
        // integral scale.
        let probe = f(s)?;
        if probe.log_abs() < acc.log_abs() - 36.0 && s > 4.0 {
            break;
        }
    }
    Ok(acc.mul_c64(rot))
}

/// 20-point Gauss-Legendre on [a, b] with scaled accumulation, bisecting
/// once if the two-half estimate disagrees.
fn gauss20_scaled(f: &dyn Fn(f64) -> Result<Scaled>, a: f64, b: f64) -> Result<Scaled> {
    fn raw(f: &dyn Fn(f64) -> Result<Scaled>, a: f64, b: f64) -> Result<Scaled> {
        let (nodes, weights) = gauss20();
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Scaled::zero();
        for (x, w) in nodes.iter().zip(weights) {
            let v = f(mid + half * x)?;
            acc = acc.add(Scaled {
                m: v.m * (w * half),
                log: v.log,
            });
        }
        Ok(acc)
    }
    let coarse = raw(f, a, b)?;
    let mid = 0.5 * (a + b);
    let fine = raw(f, a, mid)?.add(raw(f, mid, b)?);
    let diff = coarse.add(Scaled {
        m: -fine.m,
        log: fine.log,
    });
    if fine.m.norm() > 0.0 && diff.log_abs() > fine.log_abs() - 28.0 {
        // one more level of bisection
        let q1 = 0.5 * (a + mid);
        let q2 = 0.5 * (mid + b);
        let r = raw(f, a, q1)?
            .add(raw(f, q1, mid)?)
            .add(raw(f, mid, q2)?)
            .add(raw(f, q2, b)?);
        return Ok(r);
    }
    Ok(fine)
}

/// 20-point Gauss-Legendre nodes/weights on [-1, 1].
fn gauss20() -> ([f64; 20], [f64; 20]) {
    // Computed once by Newton iteration on Legendre polynomials.
    use std::sync::OnceLock;
    static CACHE: OnceLock<([f64; 20], [f64; 20])> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let n = 20usize;
        let mut xs = [0.0; 20];
        let mut ws = [0.0; 20];
        for i in 0..n {
            // initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre P_n and P_n' by recurrence
                let (mut p0, mut p1) = (1.0f64, x);
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            xs[i] = -x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn known_values_real_axis() {
        // reference values computed with mpmath
        assert!(close(
            airy_ai(C64::new(0.0, 0.0)).unwrap().to_c64(),
            C64::new(0.35502805388781723926, 0.0),
            1e-14
        ));
        assert!(close(
            airy_ai(C64::new(1.5, 0.0)).unwrap().to_c64(),
            C64::new(0.071749497008105409674, 0.0),
            1e-13
        ));
        assert!(close(
            airy_ai(C64::new(-2.0, 0.0)).unwrap().to_c64(),
            C64::new(0.22740742820168557599, 0.0),
            1e-13
        ));
        assert!(close(
            airy_ai(C64::new(6.5, 0.0)).unwrap().to_c64(),
            C64::new(2.7958823432049135855e-6, 0.0),
            1e-10
        ));
        assert!(close(
            airy_ai_prime(C64::new(0.0, 0.0)).unwrap().to_c64(),
            C64::new(-0.25881940379280679841, 0.0),
            1e-14
        ));
        assert!(close(
            airy_ai_prime(C64::new(1.5, 0.0)).unwrap().to_c64(),
            C64::new(-0.097382012842301319218, 0.0),
            1e-13
        ));
        assert!(close(
            airy_ai_prime(C64::new(-2.0, 0.0)).unwrap().to_c64(),
            C64::new(0.61825902074169104141, 0.0),
            1e-13
        ));
    }

    #[test]
    fn known_values_complex() {
        let cases = [
            (C64::new(2.0, 1.0), C64::new(0.0016977668572654568228, -0.040718017053223981234)),
            (C64::new(-1.0, -2.0), C64::new(1.6950640897970378714, 1.4241845593465408428)),
            (C64::new(0.5, -3.0), C64::new(-1.2828446381603001434, -0.29758725327478542176)),
            (C64::new(-5.0, 1.0), C64::new(1.6998161280439564852, 0.54118970278972420707)),
            (C64::new(4.0, 4.0), C64::new(-0.0034335882756079153608, -0.0047859792047167221711)),
            (C64::new(-6.0, -3.0), C64::new(-104.85871050849593643, -274.84559485495893646)),
            (C64::new(9.0, 2.0), C64::new(3.3450075429290767971e-9, 7.3897581525234642419e-10)),
            (C64::new(-8.0, 0.5), C64::new(-0.10887597956894036516, 0.64163344087705907771)),
        ];
        for (z, want) in cases {
            let got = airy_ai(z).unwrap().to_c64();
            assert!(
                close(got, want, 1e-9),
                "Ai({z}) = {got}, want {want}"
            );
        }
        let prime_cases = [
            (C64::new(2.0, 1.0), C64::new(-0.01511027928322695793, 0.062458954713600138155)),
            (C64::new(-5.0, 1.0), C64::new(0.94523896326924246212, -3.8158433243585242116)),
        ];
        for (z, want) in prime_cases {
            let got = airy_ai_prime(z).unwrap().to_c64();
            assert!(close(got, want, 1e-9), "Ai'({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn scaled_no_overflow_in_growth_sector() {
        // |z| ~ 140 in the exponentially large sector: the plain value
        // overflows f64 but the scaled form stays finite and sane.
        let z = C64::from_polar(140.0, -5.0 * PI / 6.0);
        let v = airy_ai(z).unwrap();
        assert!(v.m.norm().is_finite() && v.m.norm() > 0.0);
        assert!(v.log > 500.0, "expected huge growth, log = {}", v.log);
        // consistency with the ODE: Ai''(z) = z Ai(z) via second differences
        let h = 1e-3;
        let f = |dz: f64| airy_ai(z + dz).unwrap();
        let (fm, f0, fp) = (f(-h), f(0.0), f(h));
        let l = f0.log;
        let second = (fm.m * (fm.log - l).exp() - f0.m * 2.0 + fp.m * (fp.log - l).exp())
            / (h * h);
        let rhs = z * f0.m;
        assert!(
            (second - rhs).norm() <= 1e-3 * rhs.norm(),
            "ODE residual {} vs {}",
            second,
            rhs
        );
    }

    #[test]
    fn a0_at_origin_is_one_third() {
        let v = a0_integral(C64::new(0.0, 0.0)).unwrap().to_c64();
        assert!(
            close(v, C64::new(1.0 / 3.0, 0.0), 1e-10),
            "A0(0) = {v}"
        );
    }

    #[test]
    fn a0_reference_values() {
        // reference values computed with mpmath quadrature along the ray
        let cases = [
            (C64::new(1.0, 0.5), C64::new(0.068239141496320438684, -0.17333782856875931247)),
            (C64::new(-2.0, 0.3), C64::new(1.3663663937667596158, 0.26172612710332928339)),
            (C64::new(3.0, -0.2), C64::new(-0.0059000179396837500446, -0.0046408979042957956819)),
            (C64::new(-6.0, 0.05), C64::new(20.938347194875944299, 68.706641754567333706)),
        ];
        for (z, want) in cases {
            let got = a0_integral(z).unwrap().to_c64();
            assert!(close(got, want, 1e-8), "A0({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn a0_derivative_identity() {
        // A0'(z) = -e^{i pi/6} Ai(z e^{i pi/6}) by central differences.
        let rot = C64::from_polar(1.0, PI / 6.0);
        for &z in &[C64::new(0.7, 0.2), C64::new(-1.3, 0.4), C64::new(2.0, -0.1)] {
            let h = 1e-5;
            let fp = a0_integral(z + h).unwrap().to_c64();
            let fm = a0_integral(z - h).unwrap().to_c64();
            let deriv = (fp - fm) / (2.0 * h);
            let want = -rot * airy_ai(rot * z).unwrap().to_c64();
            assert!(
                (deriv - want).norm() <= 1e-7 * (1.0 + want.norm()),
                "A0'({z}) = {deriv}, want {want}"
            );
        }
    }
}
