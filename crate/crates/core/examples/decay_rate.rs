//! Time-dependent decay rate and frequency shift of the modulated emitter,
//! with the single-sideband closed forms for comparison.

use std::f64::consts::FRAC_PI_2;

use qmod::cavity::{gamma_n1_analytic, omega_n1_analytic, CavityParams, CavitySeries, TruncationChoice};

fn main() -> qmod::Result<()> {
    let t_max = 40.0;
    for phi in [0.0, FRAC_PI_2] {
        let p = CavityParams::reference(50.0, phi);
        let truncation = TruncationChoice::default().resolve(&p, t_max)?;
        let series = CavitySeries::new(&p, truncation.n_bar)?;
        println!(
            "phi = {phi:.4}: n_bar = {} (change on doubling {:.1e}), gamma0 = {}, rate without coherences = {:.8}",
            truncation.n_bar,
            truncation.achieved_tol.unwrap_or(0.0),
            p.gamma0(),
            series.no_coherence_rate()
        );
        println!("{:>6} {:>14} {:>14} {:>14}", "kappa t", "gamma", "Omega", "Gamma");
        for i in 0..=8 {
            let t = 5.0 * i as f64;
            println!(
                "{t:>6.1} {:>14.8} {:>14.8} {:>14.8}",
                series.gamma(t),
                series.shift(t),
                series.big_gamma(t)
            );
        }
        println!();
    }

    // With a single sideband on each side the sums collapse to closed forms.
    let p = CavityParams::reference(2.0, 0.3);
    let one = CavitySeries::new(&p, 1)?;
    for t in [0.0, 7.5, 21.0] {
        println!(
            "n_bar = 1, t = {t:>4}: gamma {:.15} vs {:.15}, Omega {:+.15} vs {:+.15}",
            one.gamma(t),
            gamma_n1_analytic(&p, t)?,
            one.shift(t),
            omega_n1_analytic(&p, t)?
        );
    }
    Ok(())
}
