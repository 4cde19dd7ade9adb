//! Renders the bundled plan to an SVG map.

use medsite::io::{parse_sites_csv, read_plan_json};
use medsite::plot::render_plan_svg;

fn main() -> medsite::Result<()> {
    let csv_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dalian_synthetic.csv");
    let plan_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dalian_plan_snapshot.json");
    let inst = parse_sites_csv(&std::fs::read_to_string(csv_path)?)?;
    let plan = read_plan_json(&std::fs::read_to_string(plan_path)?)?;

    let svg = render_plan_svg(&inst, &plan)?;
    let out = std::env::temp_dir().join("medsite_plan.svg");
    std::fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(())
}
