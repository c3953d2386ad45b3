//! The built-in figure presets and their serialized output.
//!
//! Lists every preset, runs one, and writes its records in both formats
//! to the system temp directory.

use cel::sweep_io::{preset, write_csv, write_json, Engine, PRESET_NAMES};

fn main() -> cel::Result<()> {
    println!("{:<7} {:>12} {:>7} {:>9} {:>8}", "preset", "axis", "curves", "samples", "t max");
    for name in PRESET_NAMES {
        let spec = preset(name)?;
        println!(
            "{:<7} {:>12} {:>7} {:>9} {:>8.2}",
            spec.label,
            spec.axis.label(),
            spec.values.len(),
            spec.t_grid.len(),
            spec.t_grid.last().unwrap()
        );
    }

    let spec = preset("fig1")?;
    let records = spec.run(&Engine::ClosedForm)?;
    println!();
    println!("fig1 produced {} records; first three:", records.len());
    for r in &records[..3] {
        println!(
            "  A={} t={:.4} dc_minus_sq={:.6} nbar={:.6}",
            r.gain, r.t, r.dc_minus_sq, r.nbar
        );
    }

    let dir = std::env::temp_dir();
    let csv_path = dir.join("fig1.csv");
    let json_path = dir.join("fig1.json");
    write_csv(std::fs::File::create(&csv_path).expect("temp file"), &records)?;
    write_json(std::fs::File::create(&json_path).expect("temp file"), &records)?;
    println!();
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}
