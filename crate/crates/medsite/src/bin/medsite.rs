//! Thin command-line front end over the medsite library.
//!
//! Exit codes: 0 success, 1 infeasible model, 2 invalid input,
//! 3 validation violations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use medsite::domain::default_params;
use medsite::evaluate::{baseline_metrics, cost_audit, operational_metrics, validate_plan, OpsCoefficients};
use medsite::gen::{generate_instance, GenSpec};
use medsite::io::{
    export_sites_csv, parse_coeffs_json, parse_params_json, parse_sites_csv, read_plan_json,
    write_plan_json,
};
use medsite::pipeline::{run_pipeline, Layer2Mode, PipelineConfig};
use medsite::plot::render_plan_svg;
use medsite::Error;

#[derive(Parser)]
#[command(name = "medsite", version, about = "Temporary storage & disposal center siting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layer2Arg {
    Exact,
    Kmeans,
    Hybrid,
}

impl From<Layer2Arg> for Layer2Mode {
    fn from(a: Layer2Arg) -> Self {
        match a {
            Layer2Arg::Exact => Layer2Mode::Exact,
            Layer2Arg::Kmeans => Layer2Mode::Kmeans,
            Layer2Arg::Hybrid => Layer2Mode::Hybrid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic site inventory CSV
    Gen {
        #[arg(long, default_value_t = 21)]
        large: usize,
        #[arg(long, default_value_t = 91)]
        common: usize,
        /// lat_min lat_max lon_min lon_max
        #[arg(long, num_args = 4, value_names = ["LAT_MIN", "LAT_MAX", "LON_MIN", "LON_MAX"])]
        bbox: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the three-layer siting pipeline and write the plan JSON
    Solve {
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "hybrid")]
        layer2: Layer2Arg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed K for the layer-3 sweep (elbow selection when omitted)
        #[arg(long)]
        k: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a plan against its instance; violations go to stderr
    Validate {
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Print the operations report and baseline comparison
    Eval {
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Render the plan as SVG
    Plot {
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load_params(path: &Option<PathBuf>) -> medsite::Result<medsite::domain::ModelParams> {
    match path {
        Some(p) => parse_params_json(&std::fs::read_to_string(p)?),
        None => Ok(default_params()),
    }
}

fn read_file(path: &Path) -> medsite::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> medsite::Result<u8> {
    match cli.command {
        Command::Gen { large, common, bbox, seed, output } => {
            let mut spec = GenSpec::dalian_like(seed);
            spec.n_large = large;
            spec.n_common = common;
            if let Some(b) = bbox {
                spec.bbox = (b[0], b[1], b[2], b[3]);
            }
            let inst = generate_instance(&spec)?;
            std::fs::write(&output, export_sites_csv(&inst))?;
            println!("wrote {} sites to {}", inst.len(), output.display());
            Ok(0)
        }
        Command::Solve { sites, params, layer2, seed, k, output } => {
            let inst = parse_sites_csv(&read_file(&sites)?)?;
            let params = load_params(&params)?;
            let cfg = PipelineConfig {
                layer2_mode: layer2.into(),
                kmeans_k: k,
                seed,
                ..Default::default()
            };
            let plan = run_pipeline(&inst, &params, &cfg)?;
            let audit = cost_audit(&inst, &params, &plan)?;
            let ops = operational_metrics(&inst, &plan, &OpsCoefficients::default(), &params)?;
            std::fs::write(&output, write_plan_json(&plan, &audit, &ops))?;
            println!(
                "plan: {} centers, {} assignments, total cost {:.2} CNY -> {}",
                plan.centers.len(),
                plan.assignments.len(),
                audit.total_cny,
                output.display()
            );
            Ok(0)
        }
        Command::Validate { sites, plan, params } => {
            let inst = parse_sites_csv(&read_file(&sites)?)?;
            let plan = read_plan_json(&read_file(&plan)?)?;
            let params = load_params(&params)?;
            let violations = validate_plan(&inst, &params, &plan);
            if violations.is_empty() {
                println!("plan is valid");
                Ok(0)
            } else {
                for v in &violations {
                    eprintln!("{} site {}: {}", v.code, v.site_id, v.detail);
                }
                Ok(3)
            }
        }
        Command::Eval { sites, plan, coeffs, params } => {
            let inst = parse_sites_csv(&read_file(&sites)?)?;
            let plan = read_plan_json(&read_file(&plan)?)?;
            let params = load_params(&params)?;
            let coeffs = match coeffs {
                Some(p) => parse_coeffs_json(&read_file(&p)?)?,
                None => OpsCoefficients::default(),
            };
            let ops = operational_metrics(&inst, &plan, &coeffs, &params)?;
            let base = baseline_metrics(&inst, &coeffs, &params);
            println!("operating sites:   {:>10} (baseline {})", ops.operating_sites, base.operating_sites);
            println!("total waste:       {:>10.1} kg/day", ops.total_waste_kg);
            println!("transferred:       {:>10.1} kg/day", ops.transferred_kg);
            println!(
                "working time:      {:>10.1} min/day (baseline {:.1}, -{:.1}%)",
                ops.working_time_min, base.working_time_min, ops.reduction_time_pct
            );
            println!(
                "maintenance cost:  {:>10.1} CNY/day (baseline {:.1}, -{:.1}%)",
                ops.maintenance_cny, base.maintenance_cny, ops.reduction_cost_pct
            );
            println!("(working-time/maintenance figures use the configurable operations model)");
            Ok(0)
        }
        Command::Plot { sites, plan, output } => {
            let inst = parse_sites_csv(&read_file(&sites)?)?;
            let plan = read_plan_json(&read_file(&plan)?)?;
            std::fs::write(&output, render_plan_svg(&inst, &plan)?)?;
            println!("wrote {}", output.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Infeasible { .. } | Error::SizeLimit { .. } => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
