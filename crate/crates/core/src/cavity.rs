//! Broadband-cavity reservoir: time-dependent decay rate, frequency shift and
//! excited-state population of a frequency-modulated emitter.
//!
//! All quantities are in units where the cavity leak rate `kappa` sets the
//! inverse time unit. The double sums over sideband indices `m, n` are folded
//! into harmonics of the modulation phase `theta = omega t + phi`:
//!
//! ```text
//! gamma(t) = sum_{m,n} gbar_n J_m J_n cos((n - m) theta) = sum_k C_k cos(k theta)
//! C_k      = sum_n gbar_n J_n J_{n-k}
//! ```
//!
//! so that both the rate and its exact time integral cost `O(n_bar)` per
//! sample once the harmonic table is built.

use crate::bessel::{bessel_j, bessel_j_row};
use crate::error::{require_finite, Error, Result};

/// Largest truncation the automatic search will test.
pub const MAX_AUTO_N_BAR: usize = 4096;

/// Number of sample points used when comparing two truncations.
pub const CONVERGENCE_GRID_POINTS: usize = 64;

/// Default absolute tolerance on `Gamma(t)` for the automatic truncation.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-8;

/// Emitter-cavity constants, in units of `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Qubit-cavity coupling.
    pub g: f64,
    /// Cavity leak rate.
    pub kappa: f64,
    /// Detuning `omega_c - omega_0`.
    pub delta_c: f64,
    /// Modulation frequency.
    pub omega: f64,
    /// Modulation index `b / omega`.
    pub chi: f64,
    /// Absolute modulation phase (radians).
    pub phi: f64,
}

impl CavityParams {
    /// Parameter set shared by the cavity figures: `g = 0.3`, `kappa = 1`,
    /// `omega = 0.12`, on resonance.
    pub fn reference(chi: f64, phi: f64) -> Self {
        CavityParams {
            g: 0.3,
            kappa: 1.0,
            delta_c: 0.0,
            omega: 0.12,
            chi,
            phi,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("g", self.g)?;
        require_finite("kappa", self.kappa)?;
        require_finite("delta_c", self.delta_c)?;
        require_finite("omega", self.omega)?;
        require_finite("chi", self.chi)?;
        require_finite("phi", self.phi)?;
        if self.kappa <= 0.0 {
            return Err(Error::invalid("kappa", "must be positive"));
        }
        if self.omega <= 0.0 {
            return Err(Error::invalid(
                "omega",
                "must be positive (chi = b/omega is undefined for a static shift)",
            ));
        }
        if self.g < 0.0 {
            return Err(Error::invalid("g", "must be non-negative"));
        }
        if self.chi < 0.0 {
            return Err(Error::invalid("chi", "must be non-negative"));
        }
        Ok(())
    }

    /// Unmodulated near-resonance decay rate `g^2 / kappa`.
    pub fn gamma0(&self) -> f64 {
        self.g * self.g / self.kappa
    }

    fn detuning(&self, n: i64) -> f64 {
        n as f64 * self.omega - self.delta_c
    }
}

/// Lorentzian-weighted decay rate of sideband `n`.
pub fn coeff_gamma_bar(p: &CavityParams, n: i64) -> f64 {
    let d = p.detuning(n);
    let k2 = p.kappa * p.kappa;
    p.gamma0() * k2 / (k2 + d * d)
}

/// Dispersive shift contributed by sideband `n`.
pub fn coeff_delta_bar(p: &CavityParams, n: i64) -> f64 {
    let d = p.detuning(n);
    d * p.g * p.g / (p.kappa * p.kappa + d * d)
}

/// Symmetric cutoff `n_bar` applied to both sideband indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub n_bar: usize,
    /// Chosen by [`choose_truncation`] rather than fixed by the caller.
    pub auto: bool,
    /// Largest change in `Gamma(t)` seen on the final doubling (auto only).
    pub achieved_tol: Option<f64>,
}

impl Truncation {
    pub fn fixed(n_bar: usize) -> Self {
        Truncation {
            n_bar,
            auto: false,
            achieved_tol: None,
        }
    }
}

/// How a truncation is picked for a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationChoice {
    Auto { tol: f64 },
    Fixed(usize),
}

impl Default for TruncationChoice {
    fn default() -> Self {
        TruncationChoice::Auto {
            tol: DEFAULT_TRUNCATION_TOL,
        }
    }
}

impl TruncationChoice {
    pub fn resolve(&self, p: &CavityParams, t_max: f64) -> Result<Truncation> {
        match *self {
            TruncationChoice::Auto { tol } => choose_truncation(p, tol, t_max),
            TruncationChoice::Fixed(n_bar) => Ok(Truncation::fixed(n_bar)),
        }
    }
}

/// Harmonic tables for one parameter set and truncation.
///
/// `rate[k + 2 n_bar]` and `shift[k + 2 n_bar]` hold the cosine amplitudes of
/// harmonic `k` of `gamma` and `Omega`, for `k` in `-2 n_bar ..= 2 n_bar`.
#[derive(Debug, Clone, PartialEq)]
pub struct CavitySeries {
    omega: f64,
    phi: f64,
    n_bar: usize,
    rate: Vec<f64>,
    shift: Vec<f64>,
    no_coherence: f64,
}

impl CavitySeries {
    pub fn new(p: &CavityParams, n_bar: usize) -> Result<Self> {
        Self::with_coefficients(
            p,
            n_bar,
            |n| coeff_gamma_bar(p, n),
            |n| coeff_delta_bar(p, n),
        )
    }

    /// Series with caller-supplied sideband coefficients in place of the
    /// Lorentzian ones; used to probe identities such as the flat reservoir.
    pub fn with_coefficients(
        p: &CavityParams,
        n_bar: usize,
        gamma_bar: impl Fn(i64) -> f64,
        delta_bar: impl Fn(i64) -> f64,
    ) -> Result<Self> {
        p.validate()?;
        if n_bar > crate::bessel::MAX_ORDER as usize {
            return Err(Error::invalid("n_bar", "exceeds the Bessel order bound"));
        }
        let row = bessel_j_row(n_bar, p.chi)?;
        let j = row.as_slice();
        let nb = n_bar as i64;
        let gbar: Vec<f64> = (-nb..=nb).map(&gamma_bar).collect();
        let dbar: Vec<f64> = (-nb..=nb).map(&delta_bar).collect();

        let width = 2 * n_bar + 1;
        let harmonics = 2 * width - 1;
        let mut rate = vec![0.0; harmonics];
        let mut shift = vec![0.0; harmonics];
        // k = n - m; m outer, n inner, both ascending.
        for (mi, &jm) in j.iter().enumerate() {
            for ni in 0..width {
                let w = jm * j[ni];
                let slot = ni + width - 1 - mi;
                rate[slot] += gbar[ni] * w;
                shift[slot] += dbar[ni] * w;
            }
        }
        let no_coherence = (0..width).map(|i| gbar[i] * j[i] * j[i]).sum();

        Ok(CavitySeries {
            omega: p.omega,
            phi: p.phi,
            n_bar,
            rate,
            shift,
            no_coherence,
        })
    }

    pub fn n_bar(&self) -> usize {
        self.n_bar
    }

    fn harmonic_range(&self) -> impl Iterator<Item = (i64, usize)> {
        let top = 2 * self.n_bar as i64;
        (-top..=top).enumerate().map(|(i, k)| (k, i))
    }

    fn cosine_sum(&self, amplitudes: &[f64], t: f64) -> f64 {
        let theta = self.omega * t + self.phi;
        self.harmonic_range()
            .map(|(k, i)| {
                if k == 0 {
                    amplitudes[i]
                } else {
                    amplitudes[i] * (k as f64 * theta).cos()
                }
            })
            .sum()
    }

    /// Decay rate `gamma(t)`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.cosine_sum(&self.rate, t)
    }

    /// Frequency shift `Omega(t)`.
    pub fn shift(&self, t: f64) -> f64 {
        self.cosine_sum(&self.shift, t)
    }

    /// Exact integral of `gamma` over `[0, t]`.
    pub fn big_gamma(&self, t: f64) -> f64 {
        let theta = self.omega * t + self.phi;
        self.harmonic_range()
            .map(|(k, i)| {
                if k == 0 {
                    self.rate[i] * t
                } else {
                    let kf = k as f64;
                    self.rate[i] * ((kf * theta).sin() - (kf * self.phi).sin()) / (kf * self.omega)
                }
            })
            .sum()
    }

    /// Inversion `<S_z(t)>` of an initially excited emitter.
    pub fn population(&self, t: f64) -> f64 {
        (-2.0 * self.big_gamma(t)).exp() - 0.5
    }

    /// Diagonal (`m = n`) part of the rate, with all sideband cross terms removed.
    pub fn no_coherence_rate(&self) -> f64 {
        self.no_coherence
    }

    /// Cosine amplitude of harmonic `k` in `gamma`.
    pub fn rate_harmonic(&self, k: i64) -> f64 {
        let top = 2 * self.n_bar as i64;
        if k.abs() > top {
            0.0
        } else {
            self.rate[(k + top) as usize]
        }
    }
}

pub fn gamma_t(p: &CavityParams, trunc: &Truncation, t: f64) -> Result<f64> {
    Ok(CavitySeries::new(p, trunc.n_bar)?.gamma(t))
}

pub fn omega_t(p: &CavityParams, trunc: &Truncation, t: f64) -> Result<f64> {
    Ok(CavitySeries::new(p, trunc.n_bar)?.shift(t))
}

/// `Gamma(t) = int_0^t gamma`, evaluated term by term in closed form.
pub fn big_gamma_closed(p: &CavityParams, trunc: &Truncation, t: f64) -> Result<f64> {
    Ok(CavitySeries::new(p, trunc.n_bar)?.big_gamma(t))
}

pub fn population(p: &CavityParams, trunc: &Truncation, t: f64) -> Result<f64> {
    Ok(CavitySeries::new(p, trunc.n_bar)?.population(t))
}

/// Time-independent rate with the sideband coherences dropped:
/// `sum_n gbar_n J_n(chi)^2`.
pub fn gamma_no_coherence(p: &CavityParams, trunc: &Truncation) -> Result<f64> {
    Ok(CavitySeries::new(p, trunc.n_bar)?.no_coherence_rate())
}

fn require_resonance(p: &CavityParams) -> Result<()> {
    p.validate()?;
    if p.delta_c != 0.0 {
        return Err(Error::invalid(
            "delta_c",
            "the single-sideband closed forms hold only at resonance (delta_c = 0)",
        ));
    }
    Ok(())
}

/// Closed-form `gamma(t)` for `n_bar = 1` at resonance.
pub fn gamma_n1_analytic(p: &CavityParams, t: f64) -> Result<f64> {
    require_resonance(p)?;
    let j0 = bessel_j(0, p.chi)?;
    let j1 = bessel_j(1, p.chi)?;
    let jm1 = bessel_j(-1, p.chi)?;
    let k2 = p.kappa * p.kappa;
    let theta = p.omega * t + p.phi;
    let sidebands = j1 * j1 + jm1 * jm1 + 2.0 * jm1 * j1 * (2.0 * theta).cos();
    Ok(p.gamma0() * (j0 * j0 + k2 * sidebands / (k2 + p.omega * p.omega)))
}

/// Closed-form `Omega(t)` for `n_bar = 1` at resonance.
pub fn omega_n1_analytic(p: &CavityParams, t: f64) -> Result<f64> {
    require_resonance(p)?;
    let j0 = bessel_j(0, p.chi)?;
    let j1 = bessel_j(1, p.chi)?;
    let jm1 = bessel_j(-1, p.chi)?;
    let scale = p.g * p.g * p.omega / (p.kappa * p.kappa + p.omega * p.omega);
    Ok(scale * j0 * (j1 - jm1) * (p.omega * t + p.phi).cos())
}

/// Evenly spaced sample times on `[0, t_max]`.
pub(crate) fn comparison_grid(t_max: f64) -> impl Iterator<Item = f64> {
    let step = t_max / (CONVERGENCE_GRID_POINTS - 1) as f64;
    (0..CONVERGENCE_GRID_POINTS).map(move |i| i as f64 * step)
}

pub(crate) fn max_grid_delta(a: &CavitySeries, b: &CavitySeries, t_max: f64) -> f64 {
    comparison_grid(t_max)
        .map(|t| (a.big_gamma(t) - b.big_gamma(t)).abs())
        .fold(0.0, f64::max)
}

/// Smallest `n_bar` from the schedule `ceil(chi) + 8, then doubling`, whose
/// `Gamma(t)` on `[0, t_max]` moves by at most `tol` when `n_bar` is doubled.
pub fn choose_truncation(p: &CavityParams, tol: f64, t_max: f64) -> Result<Truncation> {
    p.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid("tol", "must be positive and finite"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::invalid("t_max", "must be positive and finite"));
    }
    let mut n_bar = p.chi.ceil() as usize + 8;
    if n_bar > MAX_AUTO_N_BAR {
        return Err(Error::NotConverged {
            last_n_bar: n_bar,
            delta: f64::INFINITY,
            tol,
        });
    }
    let mut current = CavitySeries::new(p, n_bar)?;
    let mut last_delta = f64::INFINITY;
    while n_bar <= MAX_AUTO_N_BAR {
        let doubled = CavitySeries::new(p, 2 * n_bar)?;
        let delta = max_grid_delta(&current, &doubled, t_max);
        if delta <= tol {
            return Ok(Truncation {
                n_bar,
                auto: true,
                achieved_tol: Some(delta),
            });
        }
        last_delta = delta;
        n_bar *= 2;
        current = doubled;
    }
    Err(Error::NotConverged {
        last_n_bar: n_bar / 2,
        delta: last_delta,
        tol,
    })
}
