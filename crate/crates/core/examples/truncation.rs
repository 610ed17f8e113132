//! How many sidebands the double sum needs: the automatic choice and a
//! convergence table over explicit truncations.

use qmod::cavity::{choose_truncation, CavityParams};
use qmod::scan::convergence_report;

fn main() -> qmod::Result<()> {
    for chi in [0.0, 10.0, 50.0, 200.0] {
        let p = CavityParams::reference(chi, 0.0);
        let t = choose_truncation(&p, 1e-8, 40.0)?;
        println!("chi = {chi:>5}: n_bar = {:>4}, change on doubling {:.2e}", t.n_bar, t.achieved_tol.unwrap());
    }

    let p = CavityParams::reference(50.0, 0.0);
    println!("\n{:>6} {:>22} {:>14}", "n_bar", "Gamma(40)", "max change");
    for row in convergence_report(&p, 40.0, &[4, 8, 16, 32, 48, 64, 96, 128])? {
        println!("{:>6} {:>22.15} {:>14.3e}", row.n_bar, row.big_gamma_at_t_max, row.max_grid_delta);
    }

    match choose_truncation(&CavityParams::reference(5000.0, 0.0), 1e-8, 40.0) {
        Ok(t) => println!("\nchi = 5000 converged at n_bar = {}", t.n_bar),
        Err(e) => println!("\nchi = 5000: {e}"),
    }
    Ok(())
}
