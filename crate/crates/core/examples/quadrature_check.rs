//! Closed-form time integral of the decay rate against adaptive
//! Gauss-Kronrod quadrature of the rate itself.

use qmod::cavity::{CavityParams, CavitySeries, TruncationChoice};
use qmod::oracle::{integrate, QuadratureSpec};

fn main() -> qmod::Result<()> {
    let spec = QuadratureSpec::default();
    let p = CavityParams {
        delta_c: 0.1,
        ..CavityParams::reference(35.0, 0.7)
    };
    let n_bar = TruncationChoice::default().resolve(&p, 40.0)?.n_bar;
    let series = CavitySeries::new(&p, n_bar)?;
    println!("delta_c = 0.1, chi = 35, phi = 0.7, n_bar = {n_bar}");
    println!("{:>5} {:>22} {:>22} {:>10} {:>10}", "t", "closed form", "quadrature", "rel diff", "err est");
    for t in [1.0, 5.0, 10.0, 20.0, 40.0] {
        let closed = series.big_gamma(t);
        let quad = integrate(|s| series.gamma(s), 0.0, t, &spec)?;
        println!(
            "{t:>5} {closed:>22.15} {:>22.15} {:>10.1e} {:>10.1e}",
            quad.value,
            (closed - quad.value).abs() / quad.value.abs(),
            quad.err_estimate
        );
    }
    Ok(())
}
