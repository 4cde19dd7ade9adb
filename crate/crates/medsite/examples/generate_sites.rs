//! Generates a synthetic site inventory and prints it as CSV.

use medsite::gen::{generate_instance, GenSpec};
use medsite::io::export_sites_csv;

fn main() -> medsite::Result<()> {
    let mut spec = GenSpec::dalian_like(7);
    spec.n_large = 4;
    spec.n_common = 12;
    let inst = generate_instance(&spec)?;

    eprintln!(
        "generated {} sites ({} large, {} common), {:.1} kg/day total waste",
        inst.len(),
        inst.large_ids().len(),
        inst.common_ids().len(),
        inst.total_waste_kg()
    );
    print!("{}", export_sites_csv(&inst));
    Ok(())
}
