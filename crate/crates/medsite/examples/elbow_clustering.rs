//! Shows the seeded K-means sweep: the WCSS table, the elbow-selected K and
//! the snapped (member-site) centers.

use medsite::cluster::{choose_k_elbow, kmeans, snap_to_sites, wcss_table};
use medsite::gen::{generate_instance, GenSpec};

fn main() -> medsite::Result<()> {
    let mut spec = GenSpec::dalian_like(5);
    spec.n_large = 0;
    spec.n_common = 40;
    let inst = generate_instance(&spec)?;
    let (points, _) = inst.geometry()?;
    let ids = inst.common_ids();

    let seed = 0;
    let k_max = 10;
    let table = wcss_table(&points, k_max, seed)?;
    println!("k   WCSS (m^2)");
    for (i, w) in table.iter().enumerate() {
        println!("{:<3} {w:.0}", i + 1);
    }

    let k = choose_k_elbow(&points, k_max, seed)?;
    let clustering = kmeans(&points, k, seed)?;
    let centers = snap_to_sites(&clustering, &points, &ids)?;
    println!("elbow K = {k}, snapped centers: {centers:?}");
    Ok(())
}
