//! Validates the bundled plan, audits its cost and compares daily operations
//! against the no-consolidation baseline.

use medsite::domain::default_params;
use medsite::evaluate::{
    baseline_metrics, cost_audit, operational_metrics, validate_plan, OpsCoefficients,
};
use medsite::io::{parse_sites_csv, read_plan_json};

fn main() -> medsite::Result<()> {
    let csv_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dalian_synthetic.csv");
    let plan_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dalian_plan_snapshot.json");
    let inst = parse_sites_csv(&std::fs::read_to_string(csv_path)?)?;
    let plan = read_plan_json(&std::fs::read_to_string(plan_path)?)?;
    let params = default_params();

    let violations = validate_plan(&inst, &params, &plan);
    println!("violations: {}", violations.len());

    let audit = cost_audit(&inst, &params, &plan)?;
    println!("audited total: {:.2} CNY", audit.total_cny);

    let coeffs = OpsCoefficients::default();
    let ops = operational_metrics(&inst, &plan, &coeffs, &params)?;
    let base = baseline_metrics(&inst, &coeffs, &params);
    println!(
        "working time : {:.1} min/day vs baseline {:.1} ({:.1}% less)",
        ops.working_time_min, base.working_time_min, ops.reduction_time_pct
    );
    println!(
        "maintenance  : {:.1} CNY/day vs baseline {:.1} ({:.1}% less)",
        ops.maintenance_cny, base.maintenance_cny, ops.reduction_cost_pct
    );
    Ok(())
}
