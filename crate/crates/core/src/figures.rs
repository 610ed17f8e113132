//! Presets that regenerate each figure's full multi-curve dataset.

use std::f64::consts::FRAC_PI_2;

use crate::cavity::{CavityParams, CavitySeries, TruncationChoice};
use crate::error::{Error, Result};
use crate::freespace::{FreeSpaceParams, FreeSpaceSeries};
use crate::output::{Column, Table};
use crate::report::{cavity_meta, freespace_meta, sweep_table, truncation_meta};
use crate::scan::{linspace, sweep_chi, time_grid, trace_cavity, trace_freespace, Observable, STANDARD_PHASES};

pub const CAVITY_T_MAX: f64 = 40.0;
pub const CAVITY_DT: f64 = 0.01;
pub const SWEEP_CHI_MAX: f64 = 60.0;
pub const SWEEP_POINTS: usize = 240;
pub const FREESPACE_T_MAX: f64 = 20.0;
pub const FREESPACE_DT: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Population traces: chi = 50 at both phases, without coherences, and chi = 0.
    Fig2,
    /// Decay-rate traces for chi = 50 at both phases.
    Fig2g,
    /// Population at `kappa t = 30` against chi.
    Fig3,
    /// Frequency shift at `kappa t = 10` against chi.
    Fig4,
    /// Free-space population with `n0 = 1`.
    Fig5a,
    /// Free-space population with `n0 = 50`.
    Fig5b,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig2,
        Figure::Fig2g,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5a,
        Figure::Fig5b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig2g => "fig2g",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5a => "fig5a",
            Figure::Fig5b => "fig5b",
        }
    }

    pub fn build(self) -> Result<Table> {
        match self {
            Figure::Fig2 => fig2(),
            Figure::Fig2g => fig2g(),
            Figure::Fig3 => chi_sweep(Observable::Population, 30.0),
            Figure::Fig4 => chi_sweep(Observable::Shift, 10.0),
            Figure::Fig5a => fig5(1),
            Figure::Fig5b => fig5(50),
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid("name", format!("unknown figure `{s}`")))
    }
}

fn fig2() -> Result<Table> {
    let choice = TruncationChoice::default();
    let zero = CavityParams::reference(50.0, 0.0);
    let half = CavityParams::reference(50.0, FRAC_PI_2);
    let off = CavityParams::reference(0.0, 0.0);
    let a = trace_cavity(&zero, CAVITY_T_MAX, CAVITY_DT, choice)?;
    let b = trace_cavity(&half, CAVITY_T_MAX, CAVITY_DT, choice)?;
    let c = trace_cavity(&off, CAVITY_T_MAX, CAVITY_DT, choice)?;
    // The no-coherence curve uses the same truncation as the phi = 0 trace.
    let rate = CavitySeries::new(&zero, a.truncation.n_bar)?.no_coherence_rate();
    let no_coherence = a.t.iter().map(|t| (-2.0 * rate * t).exp() - 0.5).collect();

    let mut table = Table::new();
    cavity_meta(&mut table, &zero);
    table.meta("no_coherence_rate", rate);
    truncation_meta(&mut table, "chi50_phi0_", &a.truncation);
    truncation_meta(&mut table, "chi50_phi_pi_2_", &b.truncation);
    truncation_meta(&mut table, "chi0_", &c.truncation);
    table
        .push("t", Column::Float(a.t.clone()))
        .push("sz_chi50_phi0", Column::Float(a.sz))
        .push("sz_chi50_phi_pi_2", Column::Float(b.sz))
        .push("sz_chi50_no_coherence", Column::Float(no_coherence))
        .push("sz_chi0", Column::Float(c.sz));
    Ok(table)
}

fn fig2g() -> Result<Table> {
    let choice = TruncationChoice::default();
    let zero = CavityParams::reference(50.0, 0.0);
    let half = CavityParams::reference(50.0, FRAC_PI_2);
    let a = trace_cavity(&zero, CAVITY_T_MAX, CAVITY_DT, choice)?;
    let b = trace_cavity(&half, CAVITY_T_MAX, CAVITY_DT, choice)?;
    let mut table = Table::new();
    cavity_meta(&mut table, &zero);
    truncation_meta(&mut table, "phi0_", &a.truncation);
    truncation_meta(&mut table, "phi_pi_2_", &b.truncation);
    table
        .meta("negative_rate", a.negative_rate || b.negative_rate)
        .push("t", Column::Float(a.t.clone()))
        .push("gamma_phi0", Column::Float(a.gamma))
        .push("gamma_phi_pi_2", Column::Float(b.gamma));
    Ok(table)
}

fn chi_sweep(observable: Observable, at_time: f64) -> Result<Table> {
    let chi = linspace(0.0, SWEEP_CHI_MAX, SWEEP_POINTS)?;
    let base = CavityParams::reference(0.0, 0.0);
    let result = sweep_chi(&base, &chi, at_time, observable, &STANDARD_PHASES, TruncationChoice::default())?;
    Ok(sweep_table(&result))
}

fn fig5(n0: usize) -> Result<Table> {
    let p = FreeSpaceParams::reference(n0);
    let modulated = trace_freespace(&p, FREESPACE_T_MAX, FREESPACE_DT)?;
    let t = time_grid(FREESPACE_T_MAX, FREESPACE_DT)?;
    let reference = FreeSpaceSeries::new(&FreeSpaceParams { rho: 0.0, ..p })?;
    let unmodulated = t.iter().map(|&t| reference.population(t)).collect();
    let mut table = Table::new();
    freespace_meta(&mut table, &p);
    table
        .push("t", Column::Float(t))
        .push(format!("sz_n0_{n0}"), Column::Float(modulated.sz))
        .push("sz_unmodulated", Column::Float(unmodulated));
    Ok(table)
}
