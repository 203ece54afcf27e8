// Driving scenarios from code the way the `crosskerr` binary does: a
// config overlaid with overrides, then a sweep written as CSV.

use crosskerr::cli::{sweep, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let base = ScenarioConfig::from_json(r#"{"protocol": "reciprocation", "mode": "gaussian", "alpha": 2}"#)?;
    let scenario = base.with_axis("delta-width", 3.0)?.resolve()?;
    let report = scenario.run()?;
    println!("Δ = 3: fidelity {:.7}", report.get("fidelity").unwrap());

    let table = sweep(&base, "delta-width", &[0.0, 0.5, 1.0, 2.0, 3.0, 5.0])?;
    let mut rows = csv::Reader::from_reader(table.as_bytes());
    let col = rows.headers()?.iter().position(|h| h == "fidelity").expect("fidelity column");
    for row in rows.records() {
        let row = row?;
        println!("Δ = {:<4} fidelity {}", &row[0], &row[col]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
