//! Free-space emitter whose transition is modulated by a weak low-frequency
//! drive through two- and four-photon processes.
//!
//! Time is measured in units of the free-space decay constant `gamma_fs`.
//! The four-index coefficient sum
//!
//! ```text
//! sum_{n,n',m,m'} J_n(chi) J_n'(chi) J_m(chi') J_m'(chi') g_{n'm'} exp(-i k theta),
//! k = (n - n') + 2 (m - m'),   theta = 2 omega t + phi
//! ```
//!
//! is grouped by the combined index `p = n + 2m`, which turns it into a
//! single harmonic series in `theta`.

use crate::bessel::{bessel_j_row, MAX_ORDER};
use crate::error::{require_finite, Error, Result};

/// Two-photon and four-photon modulation parameters derived from the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveMapping {
    /// Two-photon modulation depth, in units of `omega`.
    pub b: f64,
    /// Four-photon modulation depth, in units of `omega`.
    pub b_prime: f64,
    /// `b / (2 omega)`.
    pub chi: f64,
    /// `b' / (4 omega)`.
    pub chi_prime: f64,
    /// `1 - rho^2 / 4`, the factor applied to the bare transition frequency.
    pub omega0_shift_factor: f64,
}

/// Maps the drive index `rho = 2 Omega_Rabi / omega` and the ratio
/// `omega_0 / omega` onto the modulation parameters.
pub fn map_drive(rho: f64, omega0_over_omega: f64) -> Result<DriveMapping> {
    require_finite("rho", rho)?;
    require_finite("omega0_over_omega", omega0_over_omega)?;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::invalid(
            "rho",
            format!("weak-drive expansion needs 0 <= rho < 1, got {rho}"),
        ));
    }
    if omega0_over_omega <= 0.0 {
        return Err(Error::invalid("omega0_over_omega", "must be positive"));
    }
    let rho2 = rho * rho;
    let b = omega0_over_omega * rho2 / 4.0;
    let b_prime = omega0_over_omega * rho2 * rho2 / 192.0;
    Ok(DriveMapping {
        b,
        b_prime,
        chi: b / 2.0,
        chi_prime: b_prime / 4.0,
        omega0_shift_factor: 1.0 - rho2 / 4.0,
    })
}

/// Largest accepted `n0` or `m0`.
pub const MAX_TRUNCATION: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceParams {
    /// Drive index `2 Omega_Rabi / omega`.
    pub rho: f64,
    /// Bare transition frequency over drive frequency.
    pub omega0_over_omega: f64,
    /// Unmodulated free-space decay constant.
    pub gamma_fs: f64,
    /// Drive frequency, in units of `gamma_fs`.
    pub omega: f64,
    /// Truncation of the two-photon (`chi`) sums.
    pub n0: usize,
    /// Truncation of the four-photon (`chi'`) sums.
    pub m0: usize,
    /// Drive phase; enters as `2 omega t + phi`. The reference data use 0.
    pub phi: f64,
    /// Force `chi' = 0`, removing the four-photon modulation entirely.
    pub drop_four_photon: bool,
}

impl FreeSpaceParams {
    /// `rho = 0.2`, `omega0/omega = 2e4` (so `chi = 100`), `omega = gamma`.
    pub fn reference(n0: usize) -> Self {
        FreeSpaceParams {
            rho: 0.2,
            omega0_over_omega: 2e4,
            gamma_fs: 1.0,
            omega: 1.0,
            n0,
            m0: 0,
            phi: 0.0,
            drop_four_photon: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        map_drive(self.rho, self.omega0_over_omega)?;
        require_finite("gamma_fs", self.gamma_fs)?;
        require_finite("omega", self.omega)?;
        require_finite("phi", self.phi)?;
        if self.gamma_fs <= 0.0 {
            return Err(Error::invalid("gamma_fs", "must be positive"));
        }
        if self.omega <= 0.0 {
            return Err(Error::invalid("omega", "must be positive"));
        }
        if self.n0 > MAX_TRUNCATION {
            return Err(Error::invalid("n0", format!("must not exceed {MAX_TRUNCATION}")));
        }
        if self.m0 > MAX_TRUNCATION {
            return Err(Error::invalid("m0", format!("must not exceed {MAX_TRUNCATION}")));
        }
        Ok(())
    }

    /// Drive mapping, honoring `drop_four_photon`.
    pub fn mapping(&self) -> Result<DriveMapping> {
        let mut m = map_drive(self.rho, self.omega0_over_omega)?;
        if self.drop_four_photon {
            m.chi_prime = 0.0;
        }
        Ok(m)
    }

    /// `omega / omega_0` with the drive-shifted transition frequency.
    pub fn omega_over_shifted_omega0(&self) -> Result<f64> {
        let m = self.mapping()?;
        Ok(1.0 / (self.omega0_over_omega * m.omega0_shift_factor))
    }

    /// Channel rate `gamma (1 + 2 n' omega/omega_0 + 4 m' omega/omega_0)^3`.
    pub fn channel_rate(&self, n_prime: i64, m_prime: i64) -> Result<f64> {
        let ratio = self.omega_over_shifted_omega0()?;
        Ok(channel_rate(self.gamma_fs, ratio, n_prime, m_prime))
    }
}

pub(crate) fn channel_rate(gamma_fs: f64, ratio: f64, n_prime: i64, m_prime: i64) -> f64 {
    let f = 1.0 + 2.0 * n_prime as f64 * ratio + 4.0 * m_prime as f64 * ratio;
    gamma_fs * f * f * f
}

/// Harmonic table of the free-space coefficient sum.
///
/// `amplitude[k + k_max]` is the real weight of `exp(-i k theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSpaceSeries {
    omega: f64,
    phi: f64,
    k_max: i64,
    amplitude: Vec<f64>,
}

impl FreeSpaceSeries {
    pub fn new(p: &FreeSpaceParams) -> Result<Self> {
        p.validate()?;
        let m = p.mapping()?;
        if p.n0 as i64 > MAX_ORDER || p.m0 as i64 > MAX_ORDER {
            return Err(Error::invalid("n0", "exceeds the Bessel order bound"));
        }
        let two = bessel_j_row(p.n0, m.chi)?;
        let four = bessel_j_row(p.m0, m.chi_prime)?;
        let ratio = p.omega_over_shifted_omega0()?;

        // Combined index p = n + 2m spans -p_max ..= p_max.
        let p_max = p.n0 as i64 + 2 * p.m0 as i64;
        let width = (2 * p_max + 1) as usize;
        let mut plain = vec![0.0; width];
        let mut weighted = vec![0.0; width];
        for (n, jn) in two.iter() {
            for (mm, jm) in four.iter() {
                let slot = (n + 2 * mm + p_max) as usize;
                let w = jn * jm;
                plain[slot] += w;
                weighted[slot] += w * channel_rate(p.gamma_fs, ratio, n, mm);
            }
        }

        // amplitude_k = sum_q plain[q + k] * weighted[q].
        let k_max = 2 * p_max;
        let mut amplitude = vec![0.0; (2 * k_max + 1) as usize];
        for (pi, &a) in plain.iter().enumerate() {
            for (qi, &w) in weighted.iter().enumerate() {
                let k = pi as i64 - qi as i64;
                amplitude[(k + k_max) as usize] += a * w;
            }
        }

        Ok(FreeSpaceSeries {
            omega: p.omega,
            phi: p.phi,
            k_max,
            amplitude,
        })
    }

    fn terms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let k_max = self.k_max;
        self.amplitude
            .iter()
            .enumerate()
            .map(move |(i, &a)| (i as i64 - k_max, a))
    }

    fn theta(&self, t: f64) -> f64 {
        2.0 * self.omega * t + self.phi
    }

    /// Real and imaginary parts of the coefficient sum at time `t`.
    pub fn complex_rate(&self, t: f64) -> (f64, f64) {
        let theta = self.theta(t);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, a) in self.terms() {
            if k == 0 {
                re += a;
            } else {
                let x = k as f64 * theta;
                re += a * x.cos();
                im -= a * x.sin();
            }
        }
        (re, im)
    }

    /// Decay rate `gamma_f(t)`: the real part of the coefficient sum.
    pub fn gamma(&self, t: f64) -> f64 {
        self.complex_rate(t).0
    }

    /// Exact integral of `gamma_f` over `[0, t]`.
    pub fn big_gamma(&self, t: f64) -> f64 {
        let theta = self.theta(t);
        self.terms()
            .map(|(k, a)| {
                if k == 0 {
                    a * t
                } else {
                    let kf = k as f64;
                    a * ((kf * theta).sin() - (kf * self.phi).sin()) / (2.0 * self.omega * kf)
                }
            })
            .sum()
    }

    pub fn population(&self, t: f64) -> f64 {
        (-2.0 * self.big_gamma(t)).exp() - 0.5
    }
}

pub fn gamma_f(p: &FreeSpaceParams, t: f64) -> Result<f64> {
    Ok(FreeSpaceSeries::new(p)?.gamma(t))
}

pub fn big_gamma_f_closed(p: &FreeSpaceParams, t: f64) -> Result<f64> {
    Ok(FreeSpaceSeries::new(p)?.big_gamma(t))
}

pub fn population_f(p: &FreeSpaceParams, t: f64) -> Result<f64> {
    Ok(FreeSpaceSeries::new(p)?.population(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j;

    #[test]
    fn reference_drive_gives_chi_100() {
        let m = map_drive(0.2, 2e4).unwrap();
        assert!((m.chi - 100.0).abs() < 1e-12);
        assert!((m.chi_prime - 2e4 * 0.0016 / 768.0).abs() < 1e-15);
        assert!((m.chi_prime - 4.1667e-2).abs() < 1e-6);
        assert!((m.omega0_shift_factor - 0.99).abs() < 1e-15);
    }

    #[test]
    fn no_drive_no_modulation() {
        let m = map_drive(0.0, 2e4).unwrap();
        assert_eq!((m.b, m.b_prime, m.chi, m.chi_prime), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(m.omega0_shift_factor, 1.0);
        let tiny = map_drive(1e-9, 2e4).unwrap();
        assert!(tiny.chi < 1e-13 && tiny.chi_prime < 1e-30);
    }

    #[test]
    fn rejects_strong_drive() {
        assert!(matches!(
            map_drive(1.0, 2e4),
            Err(Error::InvalidParameter { field: "rho", .. })
        ));
        assert!(map_drive(-0.1, 2e4).is_err());
        assert!(map_drive(0.2, 0.0).is_err());
    }

    #[test]
    fn unmodulated_law() {
        let mut p = FreeSpaceParams::reference(3);
        p.rho = 0.0;
        let s = FreeSpaceSeries::new(&p).unwrap();
        assert_eq!(s.gamma(0.7), 1.0);
        assert!((s.big_gamma(2.5) - 2.5).abs() < 1e-15);
        let want = (-2.0_f64).exp() - 0.5;
        assert!((want - -0.364_664_716_763_387_3).abs() < 1e-15);
        assert!((s.population(1.0) - want).abs() < 1e-15);
        assert_eq!(s.population(0.0), 0.5);
    }

    #[test]
    fn single_term_truncation() {
        let mut p = FreeSpaceParams::reference(0);
        p.rho = 0.15;
        p.omega0_over_omega = 3e3;
        let m = p.mapping().unwrap();
        let j0 = bessel_j(0, m.chi).unwrap();
        let j0p = bessel_j(0, m.chi_prime).unwrap();
        let want = p.gamma_fs * j0 * j0 * j0p * j0p;
        for &t in &[0.0, 0.4, 3.0] {
            assert!((gamma_f(&p, t).unwrap() - want).abs() < 1e-16);
        }
    }

    #[test]
    fn dropping_four_photon_term() {
        let mut p = FreeSpaceParams::reference(0);
        p.drop_four_photon = true;
        assert_eq!(p.mapping().unwrap().chi_prime, 0.0);
        let j0 = bessel_j(0, 100.0).unwrap();
        assert!((gamma_f(&p, 1.0).unwrap() - j0 * j0).abs() < 1e-16);
    }

    #[test]
    fn integral_starts_at_zero() {
        let s = FreeSpaceSeries::new(&FreeSpaceParams::reference(5)).unwrap();
        assert_eq!(s.big_gamma(0.0), 0.0);
    }
}
