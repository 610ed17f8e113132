//! Population of the emitter at chi = 50 for both modulation phases, with and
//! without the sideband coherences, against the unmodulated decay.
//!
//! Run with `cargo run --release --example population_traces`.

use std::f64::consts::FRAC_PI_2;

use qmod::cavity::{CavityParams, CavitySeries, TruncationChoice};
use qmod::scan::trace_cavity;

fn main() -> qmod::Result<()> {
    let choice = TruncationChoice::default();
    let cases = [
        ("chi = 50, phi = 0", CavityParams::reference(50.0, 0.0)),
        ("chi = 50, phi = pi/2", CavityParams::reference(50.0, FRAC_PI_2)),
        ("chi = 0", CavityParams::reference(0.0, 0.0)),
    ];

    let mut traces = Vec::new();
    for (label, p) in &cases {
        let trace = trace_cavity(p, 40.0, 0.01, choice)?;
        println!(
            "{label:<22} n_bar = {:>3}  gamma < 0 somewhere: {}",
            trace.truncation.n_bar, trace.negative_rate
        );
        traces.push(trace);
    }

    let first = &traces[0];
    let rate = CavitySeries::new(&cases[0].1, first.truncation.n_bar)?.no_coherence_rate();
    println!("rate without coherences: {rate:.10}");

    println!();
    println!("{:>6} {:>22} {:>22} {:>22} {:>22}", "kappa t", "phi = 0", "phi = pi/2", "no coherence", "chi = 0");
    for i in (0..first.len()).step_by(500) {
        let t = first.t[i];
        println!(
            "{t:>6.1} {:>22.17} {:>22.17} {:>22.17} {:>22.17}",
            traces[0].sz[i],
            traces[1].sz[i],
            (-2.0 * rate * t).exp() - 0.5,
            traces[2].sz[i],
        );
    }
    Ok(())
}
