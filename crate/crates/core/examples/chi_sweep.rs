//! Population at kappa t = 30 and frequency shift at kappa t = 10 as the
//! modulation depth chi runs over [0, 60], for both phases.

use qmod::cavity::{CavityParams, TruncationChoice};
use qmod::report::sweep_table;
use qmod::scan::{linspace, sweep_chi, Observable, STANDARD_PHASES};

fn main() -> qmod::Result<()> {
    let base = CavityParams::reference(0.0, 0.0);
    let chi = linspace(0.0, 60.0, 61)?;
    let choice = TruncationChoice::default();

    let population = sweep_chi(&base, &chi, 30.0, Observable::Population, &STANDARD_PHASES, choice)?;
    let shift = sweep_chi(&base, &chi, 10.0, Observable::Shift, &STANDARD_PHASES, choice)?;

    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "chi", "sz phi=0", "sz pi/2", "Omega phi=0", "Omega pi/2");
    for i in (0..chi.len()).step_by(5) {
        println!(
            "{:>5} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            chi[i],
            population.variants[0].values[i],
            population.variants[1].values[i],
            shift.variants[0].values[i],
            shift.variants[1].values[i],
        );
    }

    // The same data as the CLI would write it.
    let path = std::env::temp_dir().join("qmod_population_sweep.csv");
    sweep_table(&population)
        .write_csv(std::fs::File::create(&path).expect("temp file"))
        .expect("write csv");
    println!("\nwrote {}", path.display());
    Ok(())
}
