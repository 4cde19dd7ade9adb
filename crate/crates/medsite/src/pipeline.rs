//! Three-layer hierarchical siting.
//!
//! Layer 1 sets up every large collection site as a center and attaches the
//! covered commons at minimum marginal cost. Layer 2 runs a siting solve over
//! the uncovered commons (candidates and assignees coincide, capacity on,
//! self-service allowed). Layer 3 sweeps whatever is still unhandled with
//! seeded K-means, snapping each cluster center to its nearest member site;
//! those attachments may exceed the threshold L and are flagged when they do.

use std::collections::BTreeSet;

use crate::cluster::{choose_k_elbow, kmeans, snap_to_sites};
use crate::coverage::partition_coverage;
use crate::domain::{validate_instance, Instance, ModelParams, SiteId};
use crate::error::{Error, Result};
use crate::solver::{
    assign_to_centers, objective_value, solve_siting_exact_limited, solve_siting_greedy,
    SitingProblem, SitingSolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer2Mode {
    /// Exact solve; errors out above the size limit.
    Exact,
    /// Skip layer 2 entirely; all uncovered sites go to the K-means sweep.
    Kmeans,
    /// Exact when small enough, greedy otherwise.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub layer2_mode: Layer2Mode,
    pub exact_size_limit: usize,
    /// When set, layer 2 must handle every uncovered site itself; when off,
    /// leftovers flow to the K-means sweep.
    pub layer2_full_assignment: bool,
    /// Fixed K for the sweep; elbow selection when absent.
    pub kmeans_k: Option<usize>,
    pub k_max: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            layer2_mode: Layer2Mode::Hybrid,
            exact_size_limit: 20,
            layer2_full_assignment: false,
            kmeans_k: None,
            k_max: 12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PlanCenter {
    pub id: SiteId,
    /// Layer that opened this center: 1, 2, or 3.
    pub layer: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PlanAssignment {
    pub site: SiteId,
    pub center: SiteId,
    pub layer: u8,
    /// Set on layer-3 attachments farther than L from their center.
    pub exceeds_l: bool,
}

/// A complete siting plan: every site of the instance is either a center or
/// assigned to exactly one center. Both lists are sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SitingPlan {
    pub centers: Vec<PlanCenter>,
    pub assignments: Vec<PlanAssignment>,
}

impl SitingPlan {
    pub fn center_ids(&self) -> BTreeSet<SiteId> {
        self.centers.iter().map(|c| c.id).collect()
    }

    pub fn is_center(&self, id: SiteId) -> bool {
        self.centers.iter().any(|c| c.id == id)
    }
}

/// Runs the full three-layer method and assembles the plan.
pub fn run_pipeline(inst: &Instance, params: &ModelParams, cfg: &PipelineConfig) -> Result<SitingPlan> {
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        let codes: Vec<String> = violations.iter().map(|v| v.code.to_string()).collect();
        return Err(Error::InvalidInput(format!("instance invalid: {}", codes.join(", "))));
    }
    params.validate()?;
    if cfg.exact_size_limit < 1 || cfg.k_max < 2 {
        return Err(Error::InvalidInput("exact_size_limit must be >= 1 and k_max >= 2".into()));
    }

    let (points, dm) = inst.geometry()?;
    let index = inst.index_by_id();
    let coverage = partition_coverage(inst, &dm, params.l_m)?;

    let mut centers: Vec<PlanCenter> = Vec::new();
    let mut assignments: Vec<PlanAssignment> = Vec::new();

    // Layer 1: every large site operates as a center (it has no one else to
    // hand its own waste to), covered commons attach at minimum marginal cost.
    let large: Vec<SiteId> = inst.large_ids();
    let covered: Vec<SiteId> = coverage.covered.iter().copied().collect();
    if !large.is_empty() {
        let prob = SitingProblem::new(
            large.clone(),
            covered,
            inst,
            &dm,
            *params,
            false,
            false,
        )?;
        let open: BTreeSet<SiteId> = large.iter().copied().collect();
        let (assignment, unassigned) = assign_to_centers(&open, &prob);
        if let Some(&site) = unassigned.iter().next() {
            // covered sites have a large site within L by construction
            return Err(Error::Contract(format!(
                "covered site {site} has no feasible layer-1 center"
            )));
        }
        for id in large {
            centers.push(PlanCenter { id, layer: 1 });
        }
        for (site, center) in assignment {
            assignments.push(PlanAssignment { site, center, layer: 1, exceeds_l: false });
        }
    }

    // Layer 2: siting among the uncovered commons, capacity enforced,
    // self-service allowed.
    let uncovered: Vec<SiteId> = coverage.uncovered.iter().copied().collect();
    let mut leftover: Vec<SiteId> = Vec::new();
    if !uncovered.is_empty() {
        let solution: SitingSolution = match cfg.layer2_mode {
            Layer2Mode::Kmeans => {
                let mut s = SitingSolution::empty();
                s.unassigned = uncovered.iter().copied().collect();
                s
            }
            Layer2Mode::Exact => {
                let prob = SitingProblem::new(
                    uncovered.clone(),
                    uncovered.clone(),
                    inst,
                    &dm,
                    *params,
                    true,
                    true,
                )?;
                solve_siting_exact_limited(&prob, cfg.layer2_full_assignment, cfg.exact_size_limit)?
            }
            Layer2Mode::Hybrid => {
                let prob = SitingProblem::new(
                    uncovered.clone(),
                    uncovered.clone(),
                    inst,
                    &dm,
                    *params,
                    true,
                    true,
                )?;
                if uncovered.len() <= cfg.exact_size_limit {
                    solve_siting_exact_limited(&prob, cfg.layer2_full_assignment, cfg.exact_size_limit)?
                } else if !cfg.layer2_full_assignment {
                    // with all costs positive and nothing mandatory the
                    // optimum opens no centers, same as the exact branch;
                    // everything flows on to the K-means sweep
                    let mut s = SitingSolution::empty();
                    s.unassigned = uncovered.iter().copied().collect();
                    s
                } else {
                    let mut sol = solve_siting_greedy(&prob)?;
                    if cfg.layer2_full_assignment && !sol.unassigned.is_empty() {
                        // force leftovers to self-serve
                        for &site in sol.unassigned.clone().iter() {
                            sol.open_centers.insert(site);
                        }
                        let (assignment, unassigned) = assign_to_centers(&sol.open_centers, &prob);
                        sol.assignment = assignment;
                        sol.unassigned = unassigned;
                        sol.objective_cny = objective_value(&prob, &sol)?;
                    }
                    sol
                }
            }
        };
        for &id in &solution.open_centers {
            centers.push(PlanCenter { id, layer: 2 });
        }
        for (&site, &center) in &solution.assignment {
            assignments.push(PlanAssignment { site, center, layer: 2, exceeds_l: false });
        }
        leftover = solution.unassigned.iter().copied().collect();
    }

    // Layer 3: K-means sweep of whatever is left.
    if !leftover.is_empty() {
        leftover.sort_unstable();
        let pts: Vec<_> = leftover.iter().map(|id| points[index[id]]).collect();
        let n = pts.len();
        let k = match cfg.kmeans_k {
            Some(k) => k.clamp(1, n),
            None if n < 3 => n,
            None => choose_k_elbow(&pts, cfg.k_max.min(n).max(2), cfg.seed)?,
        };
        let clustering = kmeans(&pts, k, cfg.seed)?;
        let snapped = snap_to_sites(&clustering, &pts, &leftover)?;
        for (cluster, &center) in snapped.iter().enumerate() {
            centers.push(PlanCenter { id: center, layer: 3 });
            for (i, &label) in clustering.labels.iter().enumerate() {
                if label != cluster || leftover[i] == center {
                    continue;
                }
                let d = dm.get(index[&leftover[i]], index[&center]);
                assignments.push(PlanAssignment {
                    site: leftover[i],
                    center,
                    layer: 3,
                    exceeds_l: d > params.l_m,
                });
            }
        }
    }

    centers.sort_by_key(|c| c.id);
    assignments.sort_by_key(|a| a.site);
    Ok(SitingPlan { centers, assignments })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::domain::{default_params, CollectionSite, OrgType, DEFAULT_CAPACITY_KG};
    use crate::evaluate::validate_plan;
    use crate::geo::GeoPoint;

    /// Builds an instance with sites offset in meters from a Dalian-like
    /// anchor point (offsets converted to degrees).
    pub(crate) fn offset_instance(specs: &[(SiteId, bool, f64, f64)]) -> Instance {
        let lat0: f64 = 38.9;
        let m_per_deg_lat = 111_194.9;
        let m_per_deg_lon = m_per_deg_lat * lat0.to_radians().cos();
        let sites = specs
            .iter()
            .map(|&(id, large, x_m, y_m)| {
                let org = if large { OrgType::PrimaryHospitalOrAbove } else { OrgType::Clinic };
                CollectionSite {
                    id,
                    name: format!("s{id}"),
                    location: GeoPoint::new(lat0 + y_m / m_per_deg_lat, 121.6 + x_m / m_per_deg_lon),
                    org_type: org,
                    beds: if large { Some(250) } else { None },
                    q_kg_day: if large { 100.0 } else { 1.5 },
                    capacity_kg: DEFAULT_CAPACITY_KG,
                }
            })
            .collect();
        Instance::new(sites)
    }

    #[test]
    fn fully_covered_instance_needs_only_layer_one() {
        let inst = offset_instance(&[
            (0, true, 0.0, 0.0),
            (1, false, 200.0, 0.0),
            (2, false, 0.0, 150.0),
        ]);
        let plan = run_pipeline(&inst, &default_params(), &PipelineConfig::default()).unwrap();
        assert!(plan.centers.iter().all(|c| c.layer == 1));
        assert_eq!(plan.center_ids(), [0].into());
        assert_eq!(plan.assignments.len(), 2);
        assert!(validate_plan(&inst, &default_params(), &plan).is_empty());
    }

    #[test]
    fn isolated_commons_self_center_under_exact_full_assignment() {
        let inst = offset_instance(&[
            (0, false, 0.0, 0.0),
            (1, false, 3000.0, 0.0),
            (2, false, 0.0, 3000.0),
        ]);
        let cfg = PipelineConfig {
            layer2_mode: Layer2Mode::Exact,
            layer2_full_assignment: true,
            ..Default::default()
        };
        let plan = run_pipeline(&inst, &default_params(), &cfg).unwrap();
        assert_eq!(plan.center_ids(), [0, 1, 2].into());
        assert!(plan.centers.iter().all(|c| c.layer == 2));
        assert!(plan.assignments.is_empty());
    }

    #[test]
    fn leftovers_flow_to_kmeans_by_default() {
        // one large site, plus a far-away pocket of commons beyond L
        let inst = offset_instance(&[
            (0, true, 0.0, 0.0),
            (1, false, 100.0, 0.0),
            (2, false, 4000.0, 0.0),
            (3, false, 4100.0, 0.0),
            (4, false, 4000.0, 100.0),
        ]);
        let plan = run_pipeline(&inst, &default_params(), &PipelineConfig::default()).unwrap();
        // default layer 2 requires no assignment, so the pocket reaches layer 3
        assert!(plan.centers.iter().any(|c| c.layer == 3));
        assert!(validate_plan(&inst, &default_params(), &plan).is_empty());
        // completeness
        for s in &inst.sites {
            let handled = plan.is_center(s.id) || plan.assignments.iter().any(|a| a.site == s.id);
            assert!(handled, "site {} unhandled", s.id);
        }
    }

    #[test]
    fn layer3_attachment_beyond_threshold_is_flagged() {
        // two leftovers 1200 m apart, forced into one cluster
        let inst = offset_instance(&[(0, false, 0.0, 0.0), (1, false, 1200.0, 0.0)]);
        let cfg = PipelineConfig {
            layer2_mode: Layer2Mode::Kmeans,
            kmeans_k: Some(1),
            ..Default::default()
        };
        let plan = run_pipeline(&inst, &default_params(), &cfg).unwrap();
        assert_eq!(plan.centers.len(), 1);
        assert_eq!(plan.assignments.len(), 1);
        assert!(plan.assignments[0].exceeds_l);
        assert!(validate_plan(&inst, &default_params(), &plan).is_empty());
    }

    #[test]
    fn exact_full_layer2_leaves_nothing_for_layer3() {
        let inst = offset_instance(&[
            (0, true, 0.0, 0.0),
            (1, false, 2000.0, 0.0),
            (2, false, 2100.0, 0.0),
            (3, false, 2000.0, 200.0),
        ]);
        let cfg = PipelineConfig {
            layer2_mode: Layer2Mode::Exact,
            layer2_full_assignment: true,
            ..Default::default()
        };
        let plan = run_pipeline(&inst, &default_params(), &cfg).unwrap();
        assert!(plan.centers.iter().all(|c| c.layer != 3));
        assert!(plan.assignments.iter().all(|a| a.layer != 3));
        assert!(validate_plan(&inst, &default_params(), &plan).is_empty());
    }

    #[test]
    fn pipeline_is_deterministic() {
        let inst = offset_instance(&[
            (0, true, 0.0, 0.0),
            (1, false, 300.0, 0.0),
            (2, false, 2000.0, 500.0),
            (3, false, 2500.0, 300.0),
            (4, false, 5000.0, 5000.0),
        ]);
        let cfg = PipelineConfig { seed: 11, ..Default::default() };
        let a = run_pipeline(&inst, &default_params(), &cfg).unwrap();
        let b = run_pipeline(&inst, &default_params(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_instance_rejected() {
        let inst = Instance::new(vec![]);
        assert!(matches!(
            run_pipeline(&inst, &default_params(), &PipelineConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }
}
