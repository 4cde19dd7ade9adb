//! Compares the exact branch-and-bound siting solver against the greedy
//! coverage heuristic on a small capacitated subproblem.

use medsite::domain::default_params;
use medsite::gen::{generate_instance, GenSpec};
use medsite::solver::{solve_siting_exact, solve_siting_greedy, SitingProblem};

fn main() -> medsite::Result<()> {
    let mut spec = GenSpec::dalian_like(11);
    spec.n_large = 6;
    spec.n_common = 10;
    let inst = generate_instance(&spec)?;
    let (_, dm) = inst.geometry()?;

    // widen the coverage radius so every assignment is admissible and the
    // solvers differ only in which centers they choose to open
    let mut params = default_params();
    params.l_m = 50_000.0;

    let prob = SitingProblem::new(
        inst.large_ids(),
        inst.common_ids(),
        &inst,
        &dm,
        params,
        true,
        false,
    )?;

    let exact = solve_siting_exact(&prob, true)?;
    let greedy = solve_siting_greedy(&prob)?;
    println!(
        "exact : {} centers, objective {:.2} CNY (optimal: {})",
        exact.open_centers.len(),
        exact.objective_cny,
        exact.optimal
    );
    println!(
        "greedy: {} centers, objective {:.2} CNY",
        greedy.open_centers.len(),
        greedy.objective_cny
    );
    let gap = (greedy.objective_cny - exact.objective_cny) / exact.objective_cny * 100.0;
    println!("greedy gap: {gap:.2}%");
    Ok(())
}
