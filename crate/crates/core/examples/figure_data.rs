//! Regenerates every figure dataset into a directory, as CSV or JSON.
//!
//! `cargo run --release --example figure_data -- out/ json`

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use qmod::figures::Figure;
use qmod::output::Format;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    let format: Format = args.next().as_deref().unwrap_or("csv").parse()?;
    std::fs::create_dir_all(&dir)?;
    for figure in Figure::ALL {
        let table = figure.build()?;
        let path = dir.join(format!("{}.{}", figure.name(), format.extension()));
        table.write(format, BufWriter::new(File::create(&path)?))?;
        println!("{:<6} {:>5} rows  {}", figure.name(), table.rows(), path.display());
    }
    Ok(())
}
