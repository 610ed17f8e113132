//! Conversions from computed results to output tables.

use crate::cavity::{CavityParams, Truncation};
use crate::freespace::FreeSpaceParams;
use crate::output::{Column, Table};
use crate::scan::{ConvergenceRow, RateTrace, SweepResult};

pub fn cavity_meta(table: &mut Table, p: &CavityParams) {
    table
        .meta("model", "cavity")
        .meta("g", p.g)
        .meta("kappa", p.kappa)
        .meta("delta_c", p.delta_c)
        .meta("omega", p.omega)
        .meta("chi", p.chi)
        .meta("phi", p.phi);
}

pub fn freespace_meta(table: &mut Table, p: &FreeSpaceParams) {
    table
        .meta("model", "freespace")
        .meta("rho", p.rho)
        .meta("omega0_over_omega", p.omega0_over_omega)
        .meta("gamma_fs", p.gamma_fs)
        .meta("omega", p.omega)
        .meta("n0", p.n0)
        .meta("m0", p.m0)
        .meta("phi", p.phi)
        .meta("drop_four_photon", p.drop_four_photon);
    if let Ok(m) = p.mapping() {
        table.meta("chi", m.chi).meta("chi_prime", m.chi_prime);
    }
}

pub fn truncation_meta(table: &mut Table, prefix: &str, t: &Truncation) {
    table
        .meta(format!("{prefix}n_bar"), t.n_bar)
        .meta(format!("{prefix}auto"), t.auto);
    if let Some(tol) = t.achieved_tol {
        table.meta(format!("{prefix}achieved_tol"), tol);
    }
}

fn trace_columns(table: &mut Table, trace: &RateTrace) {
    table
        .push("t", Column::Float(trace.t.clone()))
        .push("gamma", Column::Float(trace.gamma.clone()))
        .push("omega_shift", Column::Float(trace.omega_shift.clone()))
        .push("big_gamma", Column::Float(trace.big_gamma.clone()))
        .push("sz", Column::Float(trace.sz.clone()));
    table.meta("negative_rate", trace.negative_rate);
}

pub fn cavity_trace_table(p: &CavityParams, trace: &RateTrace) -> Table {
    let mut table = Table::new();
    cavity_meta(&mut table, p);
    truncation_meta(&mut table, "", &trace.truncation);
    trace_columns(&mut table, trace);
    table
}

pub fn freespace_trace_table(p: &FreeSpaceParams, trace: &RateTrace) -> Table {
    let mut table = Table::new();
    freespace_meta(&mut table, p);
    trace_columns(&mut table, trace);
    table
}

pub fn sweep_table(result: &SweepResult) -> Table {
    let mut table = Table::new();
    cavity_meta(&mut table, &result.base);
    table
        .meta("axis", &result.axis_name)
        .meta("observable", result.observable.name())
        .meta("at_time", result.at_time);
    table.push(result.axis_name.clone(), Column::Float(result.axis_values.clone()));
    for v in &result.variants {
        table.push(
            format!("{}_{}", result.observable.name(), v.label),
            Column::Float(v.values.clone()),
        );
    }
    for v in &result.variants {
        let n_bar = v.n_bar.iter().map(|n| n.map_or(-1, |n| n as i64)).collect();
        table.push(format!("n_bar_{}", v.label), Column::Int(n_bar));
    }
    let reasons = (0..result.axis_values.len())
        .map(|i| {
            result
                .variants
                .iter()
                .filter_map(|v| v.reasons[i].as_ref().map(|r| format!("{}: {r}", v.label)))
                .collect::<Vec<_>>()
                .join("; ")
        })
        .collect();
    table.push("reason", Column::Text(reasons));
    table
}

pub fn convergence_table(p: &CavityParams, t_max: f64, rows: &[ConvergenceRow]) -> Table {
    let mut table = Table::new();
    cavity_meta(&mut table, p);
    table.meta("t_max", t_max);
    table
        .push("n_bar", Column::Int(rows.iter().map(|r| r.n_bar as i64).collect()))
        .push(
            "big_gamma_t_max",
            Column::Float(rows.iter().map(|r| r.big_gamma_at_t_max).collect()),
        )
        .push(
            "max_grid_delta",
            Column::Float(rows.iter().map(|r| r.max_grid_delta).collect()),
        );
    table
}
