//! Integer-order Bessel functions: single values, whole rows, the large
//! argument envelope and a cross-check against the integral definition.

use qmod::bessel::{bessel_asymptotic, bessel_j, bessel_j_row};
use qmod::oracle::bessel_integral_oracle;

fn main() -> qmod::Result<()> {
    for (n, x) in [(0, 2.404_825_557_695_773), (1, 100.0), (150, 150.0), (-3, 2.5), (40, 10.0)] {
        let value = bessel_j(n, x)?;
        let oracle = bessel_integral_oracle(n, x)?;
        println!("J_{n}({x}) = {value:+.17e}   integral {oracle:+.17e}   diff {:.1e}", (value - oracle).abs());
    }

    // One downward sweep gives every order up to n_max.
    let x = 50.0;
    let row = bessel_j_row(90, x)?;
    let norm: f64 = row.iter().map(|(_, j)| j * j).sum();
    println!("\nsum of J_n(50)^2 for |n| <= 90 deviates from 1 by {:.1e}", (norm - 1.0).abs());

    println!("\n{:>6} {:>22} {:>22}", "x", "J_0(x)", "envelope");
    for x in [10.0, 40.0, 160.0, 640.0] {
        println!("{x:>6} {:>22.15} {:>22.15}", bessel_j(0, x)?, bessel_asymptotic(0, x)?);
    }
    Ok(())
}
