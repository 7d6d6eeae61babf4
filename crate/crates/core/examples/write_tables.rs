//! Builds a reduced Table-1 grid through the CLI layer and writes it as CSV and JSON.
//!
//! `cargo run --release --example write_tables -- [out_dir]`

use fbmax::cli::{run, Command, OutputFormat, RunManifest};

fn main() -> fbmax::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, Into::into);
    let mut manifest = RunManifest::new(Command::Table1);
    manifest.n_exponents = vec![8, 9, 10];
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        manifest.format = format;
        let ext = if format == OutputFormat::Csv { "csv" } else { "json" };
        let path = dir.join(format!("table1.{ext}"));
        manifest.output_path = Some(path.clone());
        let table = run(&manifest)?;
        println!("wrote {} rows to {}", table.rows.len(), path.display());
    }
    Ok(())
}
