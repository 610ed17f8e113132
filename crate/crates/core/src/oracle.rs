//! Reference engines used to check the closed forms: adaptive Gauss-Kronrod
//! quadrature, the integral definition of `J_n`, and literal nested-loop
//! evaluations of the rate sums.
//!
//! Nothing here goes through the harmonic tables in [`crate::cavity`] or
//! [`crate::freespace`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::bessel::bessel_j;
use crate::cavity::CavityParams;
use crate::error::{require_finite, Error, Result};
use crate::freespace::FreeSpaceParams;

/// Largest cavity truncation accepted by [`brute_sum_gamma_cavity`].
pub const BRUTE_CAVITY_MAX_N_BAR: usize = 64;
/// Largest free-space truncation accepted by [`brute_sum_gamma_freespace`].
pub const BRUTE_FREESPACE_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Deepest bisection level any subinterval may reach.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if self.max_depth > 60 {
            return Err(Error::invalid("max_depth", "must not exceed 60"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
}

// 15-point Kronrod abscissae (positive half, descending) and weights, with the
// embedded 7-point Gauss weights for the odd-indexed nodes and the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, depth: u32) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        depth,
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the total
/// estimate falls below `max(abs_tol, rel_tol |value|)`. Fails if an interval
/// that still needs refinement already sits at `max_depth`.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    require_finite("a", a)?;
    require_finite("b", b)?;
    if a > b {
        return Err(Error::invalid("b", "upper limit must not be below lower limit"));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            err_estimate: 0.0,
        });
    }

    let first = kronrod15(&mut f, a, b, 0);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            break;
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        if worst.depth >= spec.max_depth {
            let (value, err_estimate) = totals(heap.into_iter().chain(std::iter::once(worst)));
            return Err(Error::QuadratureNotConverged {
                value,
                err_estimate,
                depth: spec.max_depth,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&mut f, worst.a, mid, worst.depth + 1);
        let right = kronrod15(&mut f, mid, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    let (value, err_estimate) = totals(heap.into_iter());
    Ok(Integral {
        value,
        err_estimate,
    })
}

/// Sums segments in left-to-right order so the result does not depend on the
/// refinement history.
fn totals(segments: impl Iterator<Item = Segment>) -> (f64, f64) {
    let mut all: Vec<Segment> = segments.collect();
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    all.iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// `J_n(x) = (1/pi) int_0^pi cos(n tau - x sin tau) d tau`.
pub fn bessel_integral_oracle(n: i64, x: f64) -> Result<f64> {
    require_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::invalid("x", "must be non-negative"));
    }
    let spec = QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_depth: 40,
    };
    let nf = n as f64;
    let r = integrate(|tau| (nf * tau - x * tau.sin()).cos(), 0.0, PI, &spec)?;
    Ok(r.value / PI)
}

/// Literal double loop for the cavity rate:
/// `sum_{m} sum_{n} gbar_n J_m J_n cos((n - m)(omega t + phi))`.
pub fn brute_sum_gamma_cavity(p: &CavityParams, n_bar: usize, t: f64) -> Result<f64> {
    brute_sum_cavity(p, n_bar, t, |n| {
        let d = n as f64 * p.omega - p.delta_c;
        p.g * p.g / p.kappa * p.kappa * p.kappa / (p.kappa * p.kappa + d * d)
    })
}

/// Literal double loop for the cavity frequency shift.
pub fn brute_sum_shift_cavity(p: &CavityParams, n_bar: usize, t: f64) -> Result<f64> {
    brute_sum_cavity(p, n_bar, t, |n| {
        let d = n as f64 * p.omega - p.delta_c;
        d * p.g * p.g / (p.kappa * p.kappa + d * d)
    })
}

fn brute_sum_cavity(
    p: &CavityParams,
    n_bar: usize,
    t: f64,
    coefficient: impl Fn(i64) -> f64,
) -> Result<f64> {
    p.validate()?;
    if n_bar > BRUTE_CAVITY_MAX_N_BAR {
        return Err(Error::invalid(
            "n_bar",
            format!("brute-force reference limited to {BRUTE_CAVITY_MAX_N_BAR}"),
        ));
    }
    let nb = n_bar as i64;
    let theta = p.omega * t + p.phi;
    let mut sum = 0.0;
    for m in -nb..=nb {
        let jm = bessel_j(m, p.chi)?;
        for n in -nb..=nb {
            let jn = bessel_j(n, p.chi)?;
            sum += coefficient(n) * jm * jn * ((n - m) as f64 * theta).cos();
        }
    }
    Ok(sum)
}

/// Literal quadruple loop for the free-space coefficient sum, returning its
/// real and imaginary parts.
pub fn brute_sum_freespace_complex(p: &FreeSpaceParams, t: f64) -> Result<(f64, f64)> {
    p.validate()?;
    if p.n0 > BRUTE_FREESPACE_MAX || p.m0 > BRUTE_FREESPACE_MAX {
        return Err(Error::invalid(
            "n0",
            format!("brute-force reference limited to n0, m0 <= {BRUTE_FREESPACE_MAX}"),
        ));
    }
    let rho2 = p.rho * p.rho;
    let chi = p.omega0_over_omega * rho2 / 8.0;
    let chi_prime = if p.drop_four_photon {
        0.0
    } else {
        p.omega0_over_omega * rho2 * rho2 / 768.0
    };
    let omega0 = p.omega * p.omega0_over_omega * (1.0 - rho2 / 4.0);
    let n0 = p.n0 as i64;
    let m0 = p.m0 as i64;
    let (mut re, mut im) = (0.0, 0.0);
    for n in -n0..=n0 {
        for n_prime in -n0..=n0 {
            for m in -m0..=m0 {
                for m_prime in -m0..=m0 {
                    let rate = p.gamma_fs
                        * (1.0
                            + 2.0 * n_prime as f64 * p.omega / omega0
                            + 4.0 * m_prime as f64 * p.omega / omega0)
                            .powi(3);
                    let weight = bessel_j(n, chi)?
                        * bessel_j(n_prime, chi)?
                        * bessel_j(m, chi_prime)?
                        * bessel_j(m_prime, chi_prime)?
                        * rate;
                    let phase = -(2.0 * p.omega * t + p.phi) * (n - n_prime) as f64
                        - (4.0 * p.omega * t + 2.0 * p.phi) * (m - m_prime) as f64;
                    re += weight * phase.cos();
                    im += weight * phase.sin();
                }
            }
        }
    }
    Ok((re, im))
}

/// Real part of [`brute_sum_freespace_complex`].
pub fn brute_sum_gamma_freespace(p: &FreeSpaceParams, t: f64) -> Result<f64> {
    Ok(brute_sum_freespace_complex(p, t)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let r = integrate(|_| 2.5, 0.0, 7.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 17.5).abs() < 1e-12);
    }

    #[test]
    fn cosine_over_full_period() {
        let spec = QuadratureSpec::default();
        let r = integrate(f64::cos, 0.0, 2.0 * PI, &spec).unwrap();
        assert!(r.value.abs() <= spec.abs_tol);
    }

    #[test]
    fn error_estimate_respects_tolerance() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| (x * x).sin() * x.exp(), 0.0, 3.0, &spec).unwrap();
        assert!(r.err_estimate <= spec.abs_tol.max(spec.rel_tol * r.value.abs()));
    }

    #[test]
    fn reports_non_convergence() {
        let spec = QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_depth: 3,
        };
        let r = integrate(|x| (200.0 * x).sin().abs(), 0.0, 10.0, &spec);
        assert!(matches!(r, Err(Error::QuadratureNotConverged { depth: 3, .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 0.0, &spec).is_err());
        let deep = QuadratureSpec {
            max_depth: 61,
            ..spec
        };
        assert!(integrate(|x| x, 0.0, 1.0, &deep).is_err());
        assert_eq!(integrate(|x| x, 2.0, 2.0, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn bessel_integral_trivial_points() {
        assert!((bessel_integral_oracle(0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(bessel_integral_oracle(5, 0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn brute_cavity_without_modulation() {
        let p = CavityParams::reference(0.0, 0.3);
        let v = brute_sum_gamma_cavity(&p, 6, 2.0).unwrap();
        assert!((v - 0.09).abs() < 1e-16);
    }

    #[test]
    fn brute_force_bounds() {
        let p = CavityParams::reference(1.0, 0.0);
        assert!(brute_sum_gamma_cavity(&p, 65, 0.0).is_err());
        let f = FreeSpaceParams::reference(9);
        assert!(brute_sum_gamma_freespace(&f, 0.0).is_err());
    }
}
