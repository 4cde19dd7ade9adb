//! Runs the three-layer siting pipeline on the bundled inventory and prints
//! the plan layer by layer.

use medsite::domain::default_params;
use medsite::evaluate::cost_audit;
use medsite::io::parse_sites_csv;
use medsite::pipeline::{run_pipeline, PipelineConfig};

fn main() -> medsite::Result<()> {
    let csv_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dalian_synthetic.csv");
    let inst = parse_sites_csv(&std::fs::read_to_string(csv_path)?)?;
    let params = default_params();
    let cfg = PipelineConfig { seed: 42, ..Default::default() };

    let plan = run_pipeline(&inst, &params, &cfg)?;
    for layer in 1u8..=3 {
        let centers = plan.centers.iter().filter(|c| c.layer == layer).count();
        let assigned = plan.assignments.iter().filter(|a| a.layer == layer).count();
        println!("layer {layer}: {centers} centers, {assigned} assigned sites");
    }

    let audit = cost_audit(&inst, &params, &plan)?;
    println!(
        "total {:.2} CNY (fixed {:.0}, disposal {:.1} - {:.1} subsidy, transfer {:.1} - {:.1} subsidy)",
        audit.total_cny,
        audit.fixed_cny,
        audit.disposal_cny,
        audit.disposal_subsidy_cny,
        audit.transfer_cny,
        audit.transfer_subsidy_cny
    );
    Ok(())
}
