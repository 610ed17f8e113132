//! Free-space emitter driven by a weak low-frequency field: drive mapping,
//! the decay rate and the population for a few truncations.

use qmod::freespace::{map_drive, FreeSpaceParams, FreeSpaceSeries};
use qmod::oracle::brute_sum_gamma_freespace;

fn main() -> qmod::Result<()> {
    let m = map_drive(0.2, 2e4)?;
    println!(
        "rho = 0.2, omega0/omega = 2e4: b = {}, b' = {:.6}, chi = {}, chi' = {:.7}, omega0 factor = {}",
        m.b, m.b_prime, m.chi, m.chi_prime, m.omega0_shift_factor
    );

    let small = FreeSpaceParams { m0: 2, ..FreeSpaceParams::reference(3) };
    let series = FreeSpaceSeries::new(&small)?;
    for t in [0.0, 0.4, 3.0] {
        println!(
            "n0 = 3, m0 = 2, t = {t}: gamma_f = {:.15e}, quadruple loop = {:.15e}",
            series.gamma(t),
            brute_sum_gamma_freespace(&small, t)?
        );
    }

    println!("\n{:>5} {:>14} {:>14} {:>14}", "gamma t", "n0 = 1", "n0 = 50", "unmodulated");
    let one = FreeSpaceSeries::new(&FreeSpaceParams::reference(1))?;
    let fifty = FreeSpaceSeries::new(&FreeSpaceParams::reference(50))?;
    for i in 0..=10 {
        let t = 2.0 * i as f64;
        println!(
            "{t:>5.1} {:>14.8} {:>14.8} {:>14.8}",
            one.population(t),
            fifty.population(t),
            (-2.0 * t).exp() - 0.5
        );
    }
    Ok(())
}
