//! Figure-backing datasets: time traces, modulation-depth sweeps and
//! truncation-convergence tables.
//!
//! Samples are independent work units and are evaluated with rayon. Every
//! sample is a pure function of its inputs and results are collected in grid
//! order, so output does not depend on the thread count.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::cavity::{max_grid_delta, CavityParams, CavitySeries, Truncation, TruncationChoice};
use crate::error::{require_finite, Error, Result};
use crate::freespace::{FreeSpaceParams, FreeSpaceSeries};

/// Sampled time series on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTrace {
    pub t: Vec<f64>,
    pub gamma: Vec<f64>,
    pub omega_shift: Vec<f64>,
    pub big_gamma: Vec<f64>,
    pub sz: Vec<f64>,
    pub truncation: Truncation,
    /// Set when any sampled decay rate is negative.
    pub negative_rate: bool,
}

impl RateTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn final_sz(&self) -> f64 {
        *self.sz.last().expect("a trace always holds t = 0")
    }
}

/// Uniform grid `0, dt, 2 dt, ...` up to and including `t_max` (within
/// rounding).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    require_finite("t_max", t_max)?;
    require_finite("dt", dt)?;
    if t_max <= 0.0 {
        return Err(Error::invalid("t_max", "must be positive"));
    }
    if dt <= 0.0 {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let steps = (t_max / dt * (1.0 + 1e-12)).floor();
    if steps > 1e8 {
        return Err(Error::invalid("dt", "grid would exceed 1e8 samples"));
    }
    Ok((0..=steps as usize).map(|i| i as f64 * dt).collect())
}

struct Sample {
    gamma: f64,
    shift: f64,
    big_gamma: f64,
}

fn assemble(t: Vec<f64>, samples: Vec<Sample>, truncation: Truncation) -> RateTrace {
    let gamma: Vec<f64> = samples.iter().map(|s| s.gamma).collect();
    let omega_shift = samples.iter().map(|s| s.shift).collect();
    let big_gamma: Vec<f64> = samples.iter().map(|s| s.big_gamma).collect();
    let sz = big_gamma.iter().map(|g| (-2.0 * g).exp() - 0.5).collect();
    let negative_rate = gamma.iter().any(|&g| g < 0.0);
    RateTrace {
        t,
        gamma,
        omega_shift,
        big_gamma,
        sz,
        truncation,
        negative_rate,
    }
}

/// Cavity trace with the truncation chosen over `[0, t_max]`.
pub fn trace_cavity(
    p: &CavityParams,
    t_max: f64,
    dt: f64,
    choice: TruncationChoice,
) -> Result<RateTrace> {
    let t = time_grid(t_max, dt)?;
    let truncation = choice.resolve(p, t_max)?;
    let series = CavitySeries::new(p, truncation.n_bar)?;
    Ok(trace_from_series(&series, t, truncation))
}

pub fn trace_from_series(series: &CavitySeries, t: Vec<f64>, truncation: Truncation) -> RateTrace {
    let samples = t
        .par_iter()
        .map(|&t| Sample {
            gamma: series.gamma(t),
            shift: series.shift(t),
            big_gamma: series.big_gamma(t),
        })
        .collect();
    assemble(t, samples, truncation)
}

/// Free-space trace; the shift column is zero because the principal-value
/// shift is not evaluated.
pub fn trace_freespace(p: &FreeSpaceParams, t_max: f64, dt: f64) -> Result<RateTrace> {
    let t = time_grid(t_max, dt)?;
    let series = FreeSpaceSeries::new(p)?;
    let samples = t
        .par_iter()
        .map(|&t| Sample {
            gamma: series.gamma(t),
            shift: 0.0,
            big_gamma: series.big_gamma(t),
        })
        .collect();
    Ok(assemble(t, samples, Truncation::fixed(p.n0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// `<S_z>` at the evaluation time.
    Population,
    /// `Omega` at the evaluation time.
    Shift,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Population => "population",
            Observable::Shift => "shift",
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "population" => Ok(Observable::Population),
            "shift" => Ok(Observable::Shift),
            other => Err(Error::invalid(
                "observable",
                format!("expected `population` or `shift`, got `{other}`"),
            )),
        }
    }
}

/// One curve of a sweep: the observable for a fixed phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepVariant {
    pub label: String,
    pub phi: f64,
    /// NaN where the point could not be evaluated.
    pub values: Vec<f64>,
    pub n_bar: Vec<Option<usize>>,
    /// Failure reason for each invalid point.
    pub reasons: Vec<Option<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: String,
    pub axis_values: Vec<f64>,
    pub observable: Observable,
    pub at_time: f64,
    pub base: CavityParams,
    pub variants: Vec<SweepVariant>,
}

/// Both phases used by the sweep figures.
pub const STANDARD_PHASES: [(&str, f64); 2] = [("phi_0", 0.0), ("phi_pi_2", FRAC_PI_2)];

/// Evaluates `observable` at `at_time` for each modulation depth and phase.
///
/// A point whose truncation fails to converge becomes NaN with a reason; it
/// does not abort the sweep.
pub fn sweep_chi(
    base: &CavityParams,
    chi_values: &[f64],
    at_time: f64,
    observable: Observable,
    phases: &[(&str, f64)],
    choice: TruncationChoice,
) -> Result<SweepResult> {
    require_finite("at_time", at_time)?;
    if at_time < 0.0 {
        return Err(Error::invalid("at_time", "must be non-negative"));
    }
    if chi_values.is_empty() {
        return Err(Error::invalid("chi", "sweep needs at least one value"));
    }
    if chi_values.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::invalid("chi", "sweep values must be finite and non-negative"));
    }
    if chi_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("chi", "sweep values must be strictly increasing"));
    }
    base.validate()?;
    // The truncation search needs a positive horizon.
    let horizon = if at_time > 0.0 { at_time } else { 1.0 };

    let variants = phases
        .iter()
        .map(|&(label, phi)| {
            let points: Vec<Result<(f64, usize)>> = chi_values
                .par_iter()
                .map(|&chi| {
                    let p = CavityParams { chi, phi, ..*base };
                    let truncation = choice.resolve(&p, horizon)?;
                    let series = CavitySeries::new(&p, truncation.n_bar)?;
                    let value = match observable {
                        Observable::Population => series.population(at_time),
                        Observable::Shift => series.shift(at_time),
                    };
                    Ok((value, truncation.n_bar))
                })
                .collect();
            let mut variant = SweepVariant {
                label: label.to_string(),
                phi,
                values: Vec::with_capacity(points.len()),
                n_bar: Vec::with_capacity(points.len()),
                reasons: Vec::with_capacity(points.len()),
            };
            for point in points {
                match point {
                    Ok((value, n_bar)) => {
                        variant.values.push(value);
                        variant.n_bar.push(Some(n_bar));
                        variant.reasons.push(None);
                    }
                    Err(e) => {
                        variant.values.push(f64::NAN);
                        variant.n_bar.push(None);
                        variant.reasons.push(Some(e.to_string()));
                    }
                }
            }
            variant
        })
        .collect();

    Ok(SweepResult {
        axis_name: "chi".to_string(),
        axis_values: chi_values.to_vec(),
        observable,
        at_time,
        base: *base,
        variants,
    })
}

/// `steps` evenly spaced values from `from` to `to`, both included.
pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    require_finite("from", from)?;
    require_finite("to", to)?;
    if steps < 2 {
        return Err(Error::invalid("steps", "must be at least 2"));
    }
    if !(from < to) {
        return Err(Error::invalid("to", "must exceed `from`"));
    }
    let span = to - from;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { to } else { from + span * i as f64 / last })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_bar: usize,
    pub big_gamma_at_t_max: f64,
    /// Largest change of `Gamma` on the comparison grid against the next
    /// row, or against `2 n_bar` for the final row.
    pub max_grid_delta: f64,
}

/// `Gamma(t_max)` for each truncation and how much it still moves.
pub fn convergence_report(
    p: &CavityParams,
    t_max: f64,
    n_bar_list: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    p.validate()?;
    require_finite("t_max", t_max)?;
    if t_max <= 0.0 {
        return Err(Error::invalid("t_max", "must be positive"));
    }
    if n_bar_list.is_empty() {
        return Err(Error::invalid("nbar_list", "must not be empty"));
    }
    if n_bar_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("nbar_list", "must be strictly ascending"));
    }
    let series: Vec<CavitySeries> = n_bar_list
        .par_iter()
        .map(|&n| CavitySeries::new(p, n))
        .collect::<Result<_>>()?;
    let tail = CavitySeries::new(p, 2 * n_bar_list[n_bar_list.len() - 1])?;
    Ok(series
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let next = series.get(i + 1).unwrap_or(&tail);
            ConvergenceRow {
                n_bar: s.n_bar(),
                big_gamma_at_t_max: s.big_gamma(t_max),
                max_grid_delta: max_grid_delta(s, next, t_max),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoint() {
        let g = time_grid(40.0, 0.01).unwrap();
        assert_eq!(g.len(), 4001);
        assert_eq!(g[0], 0.0);
        assert!((g[4000] - 40.0).abs() < 1e-12);
        assert!(time_grid(1.0, 0.0).is_err());
        assert!(time_grid(-1.0, 0.1).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 60.0, 240).unwrap();
        assert_eq!(v.len(), 240);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[239], 60.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(linspace(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn unmodulated_trace_is_exponential() {
        let p = CavityParams::reference(0.0, 0.0);
        let tr = trace_cavity(&p, 40.0, 0.01, TruncationChoice::default()).unwrap();
        assert_eq!(tr.sz[0], 0.5);
        for (t, sz) in tr.t.iter().zip(&tr.sz) {
            assert!((sz - ((-0.18 * t).exp() - 0.5)).abs() < 1e-12);
        }
        assert!(!tr.negative_rate);
    }

    #[test]
    fn shift_sweep_is_zero_without_modulation() {
        let p = CavityParams::reference(0.0, 0.0);
        let r = sweep_chi(&p, &[0.0, 1.0], 4.0, Observable::Shift, &STANDARD_PHASES,
            TruncationChoice::default()).unwrap();
        for v in &r.variants {
            assert_eq!(v.values[0], 0.0);
        }
    }

    #[test]
    fn sweep_marks_failed_points() {
        let p = CavityParams::reference(0.0, 0.0);
        // The starting truncation for chi = 5000 is already beyond the search limit.
        let r = sweep_chi(&p, &[0.0, 5000.0], 5.0, Observable::Population,
            &STANDARD_PHASES[..1], TruncationChoice::default()).unwrap();
        let v = &r.variants[0];
        assert_eq!(v.values.len(), 2);
        assert!(v.values[1].is_nan());
        assert!(v.reasons[1].is_some());
        assert_eq!(v.n_bar[1], None);
    }

    #[test]
    fn sweep_rejects_unsorted_axis() {
        let p = CavityParams::reference(0.0, 0.0);
        assert!(sweep_chi(&p, &[2.0, 1.0], 5.0, Observable::Shift, &STANDARD_PHASES,
            TruncationChoice::default()).is_err());
    }

    #[test]
    fn convergence_rows_identical_without_modulation() {
        let p = CavityParams::reference(0.0, 0.0);
        let rows = convergence_report(&p, 30.0, &[1, 2, 4, 8]).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert_eq!(r.big_gamma_at_t_max, rows[0].big_gamma_at_t_max);
            assert_eq!(r.max_grid_delta, 0.0);
        }
        assert!(convergence_report(&p, 30.0, &[4, 2]).is_err());
        assert!(convergence_report(&p, 30.0, &[]).is_err());
    }

    #[test]
    fn freespace_trace_without_drive() {
        let mut p = FreeSpaceParams::reference(2);
        p.rho = 0.0;
        let tr = trace_freespace(&p, 2.0, 0.5).unwrap();
        for (t, sz) in tr.t.iter().zip(&tr.sz) {
            assert!((sz - ((-2.0 * t).exp() - 0.5)).abs() < 1e-15);
        }
    }
}
