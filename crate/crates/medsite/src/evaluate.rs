//! Independent evaluation of siting plans: cost audit, operational metrics
//! against the no-consolidation baseline, plan validation, and a brute-force
//! optimality oracle for desk-scale problems.
//!
//! The audit recomputes every cost term from the instance data rather than
//! trusting solver bookkeeping. The working-time and maintenance formulas are
//! an explicit configurable model, not published constants; reports carry the
//! achieved reductions for inspection only.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::domain::{Instance, ModelParams, SiteId};
use crate::error::{Error, Result};
use crate::pipeline::SitingPlan;
use crate::solver::{SitingProblem, SitingSolution};

/// Audit of the total cost, split by objective term.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CostBreakdown {
    pub fixed_cny: f64,
    pub disposal_cny: f64,
    pub disposal_subsidy_cny: f64,
    pub transfer_cny: f64,
    pub transfer_subsidy_cny: f64,
    pub total_cny: f64,
}

/// Coefficients of the daily operations model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OpsCoefficients {
    /// Fixed disposal-session overhead per operating site, minutes/day.
    pub tau0_min: f64,
    /// Processing time per kg, minutes.
    pub tau1_min_kg: f64,
    /// Fixed daily upkeep per operating site, CNY.
    pub m0_cny: f64,
}

impl Default for OpsCoefficients {
    fn default() -> Self {
        Self { tau0_min: 8.0, tau1_min_kg: 0.1, m0_cny: 50.0 }
    }
}

/// Daily operational metrics of a plan (or of the baseline).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OpsReport {
    pub operating_sites: usize,
    pub total_waste_kg: f64,
    pub transferred_kg: f64,
    pub working_time_min: f64,
    pub maintenance_cny: f64,
    pub reduction_time_pct: f64,
    pub reduction_cost_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanViolationCode {
    UnknownSite,
    DuplicateCenter,
    MultiAssign,
    ClosedCenter,
    DistExceeded,
    CapacityExceeded,
    UnassignedSite,
    WrongTier,
}

impl std::fmt::Display for PlanViolationCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PlanViolationCode::UnknownSite => "UNKNOWN_SITE",
            PlanViolationCode::DuplicateCenter => "DUPLICATE_CENTER",
            PlanViolationCode::MultiAssign => "MULTI_ASSIGN",
            PlanViolationCode::ClosedCenter => "CLOSED_CENTER",
            PlanViolationCode::DistExceeded => "DIST_EXCEEDED",
            PlanViolationCode::CapacityExceeded => "CAPACITY_EXCEEDED",
            PlanViolationCode::UnassignedSite => "UNASSIGNED_SITE",
            PlanViolationCode::WrongTier => "WRONG_TIER",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanViolation {
    pub code: PlanViolationCode,
    pub site_id: SiteId,
    pub detail: String,
}

/// Checks every structural and model constraint of a plan; empty means valid.
pub fn validate_plan(inst: &Instance, params: &ModelParams, plan: &SitingPlan) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    let index = inst.index_by_id();
    let geometry = inst.geometry();
    let dm = match &geometry {
        Ok((_, dm)) => Some(dm),
        Err(_) => None,
    };

    let mut center_layer: HashMap<SiteId, u8> = HashMap::new();
    for c in &plan.centers {
        if !index.contains_key(&c.id) {
            out.push(PlanViolation {
                code: PlanViolationCode::UnknownSite,
                site_id: c.id,
                detail: "center id not in instance".into(),
            });
            continue;
        }
        if center_layer.insert(c.id, c.layer).is_some() {
            out.push(PlanViolation {
                code: PlanViolationCode::DuplicateCenter,
                site_id: c.id,
                detail: "center listed more than once".into(),
            });
        }
        let large = inst.site(c.id).map(|s| s.is_large()).unwrap_or(false);
        let tier_ok = match c.layer {
            1 => large,
            2 | 3 => !large,
            _ => false,
        };
        if !tier_ok {
            out.push(PlanViolation {
                code: PlanViolationCode::WrongTier,
                site_id: c.id,
                detail: format!("layer {} center has the wrong site tier", c.layer),
            });
        }
    }

    let mut assigned: HashMap<SiteId, SiteId> = HashMap::new();
    let mut inbound: HashMap<SiteId, f64> = HashMap::new();
    for a in &plan.assignments {
        if !index.contains_key(&a.site) {
            out.push(PlanViolation {
                code: PlanViolationCode::UnknownSite,
                site_id: a.site,
                detail: "assigned site not in instance".into(),
            });
            continue;
        }
        if assigned.insert(a.site, a.center).is_some() || center_layer.contains_key(&a.site) {
            out.push(PlanViolation {
                code: PlanViolationCode::MultiAssign,
                site_id: a.site,
                detail: "site assigned more than once or both center and assignee".into(),
            });
        }
        if !center_layer.contains_key(&a.center) {
            out.push(PlanViolation {
                code: PlanViolationCode::ClosedCenter,
                site_id: a.site,
                detail: format!("assigned to {} which is not a plan center", a.center),
            });
            continue;
        }
        if let Some(dm) = dm {
            let d = dm.get(index[&a.site], index[&a.center]);
            // layers 1-2 must respect L; layer-3 overshoots must be flagged
            if d > params.l_m && (a.layer != 3 || !a.exceeds_l) {
                out.push(PlanViolation {
                    code: PlanViolationCode::DistExceeded,
                    site_id: a.site,
                    detail: format!("distance {d:.1} m exceeds L = {} m (layer {})", params.l_m, a.layer),
                });
            }
        }
        *inbound.entry(a.center).or_insert(0.0) += inst.site(a.site).map(|s| s.q_kg_day).unwrap_or(0.0);
    }

    for (center, load) in &inbound {
        if center_layer.get(center) == Some(&2) {
            if let Some(s) = inst.site(*center) {
                if s.q_kg_day + load > s.capacity_kg + 1e-9 {
                    out.push(PlanViolation {
                        code: PlanViolationCode::CapacityExceeded,
                        site_id: *center,
                        detail: format!(
                            "intake {:.1} kg exceeds capacity {:.1} kg",
                            s.q_kg_day + load,
                            s.capacity_kg
                        ),
                    });
                }
            }
        }
    }

    for s in &inst.sites {
        if !center_layer.contains_key(&s.id) && !assigned.contains_key(&s.id) {
            out.push(PlanViolation {
                code: PlanViolationCode::UnassignedSite,
                site_id: s.id,
                detail: "site is neither a center nor assigned".into(),
            });
        }
    }
    out
}

/// Recomputes the plan cost term by term from the instance data.
pub fn cost_audit(inst: &Instance, params: &ModelParams, plan: &SitingPlan) -> Result<CostBreakdown> {
    let violations = validate_plan(inst, params, plan);
    if !violations.is_empty() {
        let codes: Vec<String> = violations.iter().map(|v| format!("{}({})", v.code, v.site_id)).collect();
        return Err(Error::Contract(format!("plan is invalid: {}", codes.join(", "))));
    }
    let index = inst.index_by_id();
    let (_, dm) = inst.geometry()?;

    let mut fixed = 0.0;
    let mut disposal = 0.0;
    for c in &plan.centers {
        fixed += params.f_cny;
        disposal += params.b_cny_kg * inst.site(c.id).unwrap().q_kg_day;
    }
    let mut disposal_subsidy = 0.0;
    let mut transfer = 0.0;
    let mut transfer_subsidy = 0.0;
    for a in &plan.assignments {
        let q = inst.site(a.site).unwrap().q_kg_day;
        let d_km = dm.get(index[&a.site], index[&a.center]) / 1000.0;
        disposal += params.b_cny_kg * q;
        disposal_subsidy += params.a1_cny_kg * q;
        transfer += params.t_cny_kg_km * q * d_km;
        transfer_subsidy += params.a2_cny_kg_km * q * d_km;
    }
    let total = fixed + disposal - disposal_subsidy + transfer - transfer_subsidy;
    Ok(CostBreakdown {
        fixed_cny: fixed,
        disposal_cny: disposal,
        disposal_subsidy_cny: disposal_subsidy,
        transfer_cny: transfer,
        transfer_subsidy_cny: transfer_subsidy,
        total_cny: total,
    })
}

fn metrics_from_parts(
    operating_sites: usize,
    total_waste_kg: f64,
    transferred_kg: f64,
    transfer_kg_km: f64,
    coeffs: &OpsCoefficients,
    params: &ModelParams,
) -> (f64, f64) {
    let working = operating_sites as f64 * coeffs.tau0_min + coeffs.tau1_min_kg * total_waste_kg;
    let maintenance = operating_sites as f64 * coeffs.m0_cny + params.b_cny_kg * total_waste_kg
        - params.a1_cny_kg * transferred_kg
        + (params.t_cny_kg_km - params.a2_cny_kg_km) * transfer_kg_km;
    (working, maintenance)
}

/// Daily working time and maintenance cost of a plan, with reductions
/// against the no-consolidation baseline.
pub fn operational_metrics(
    inst: &Instance,
    plan: &SitingPlan,
    coeffs: &OpsCoefficients,
    params: &ModelParams,
) -> Result<OpsReport> {
    let index = inst.index_by_id();
    let (_, dm) = inst.geometry()?;
    let total_waste = inst.total_waste_kg();
    let mut transferred = 0.0;
    let mut transfer_kg_km = 0.0;
    for a in &plan.assignments {
        let q = inst.site(a.site).map(|s| s.q_kg_day).unwrap_or(0.0);
        transferred += q;
        transfer_kg_km += q * dm.get(index[&a.site], index[&a.center]) / 1000.0;
    }
    let operating = plan.centers.len();
    let (working, maintenance) =
        metrics_from_parts(operating, total_waste, transferred, transfer_kg_km, coeffs, params);
    let base = baseline_metrics(inst, coeffs, params);
    let pct = |b: f64, p: f64| if b > 0.0 { (b - p) / b * 100.0 } else { 0.0 };
    Ok(OpsReport {
        operating_sites: operating,
        total_waste_kg: total_waste,
        transferred_kg: transferred,
        working_time_min: working,
        maintenance_cny: maintenance,
        reduction_time_pct: pct(base.working_time_min, working),
        reduction_cost_pct: pct(base.maintenance_cny, maintenance),
    })
}

/// The no-consolidation scenario: every site operates its own disposal,
/// nothing is transferred.
pub fn baseline_metrics(inst: &Instance, coeffs: &OpsCoefficients, params: &ModelParams) -> OpsReport {
    let total_waste = inst.total_waste_kg();
    let (working, maintenance) =
        metrics_from_parts(inst.len(), total_waste, 0.0, 0.0, coeffs, params);
    OpsReport {
        operating_sites: inst.len(),
        total_waste_kg: total_waste,
        transferred_kg: 0.0,
        working_time_min: working,
        maintenance_cny: maintenance,
        reduction_time_pct: 0.0,
        reduction_cost_pct: 0.0,
    }
}

const ORACLE_LIMIT: usize = 12;

/// Exhaustive test oracle: enumerates every open set, and within each the
/// assignments, recomputing all cost terms from the raw parameters. Desk
/// scale only (at most 12 candidates and 12 assignees).
pub fn brute_force_optimum(
    prob: &SitingProblem,
    require_full_assignment: bool,
) -> Result<SitingSolution> {
    if prob.candidates.len() > ORACLE_LIMIT {
        return Err(Error::SizeLimit { size: prob.candidates.len(), limit: ORACLE_LIMIT });
    }
    if prob.assignees.len() > ORACLE_LIMIT {
        return Err(Error::SizeLimit { size: prob.assignees.len(), limit: ORACLE_LIMIT });
    }
    let p = prob.params;
    let mut cands: Vec<SiteId> = prob.candidates.clone();
    cands.sort_unstable();
    cands.dedup();

    let open_cost = |c: SiteId| p.f_cny + p.b_cny_kg * prob.waste(c);
    let attach_cost = |i: SiteId, c: SiteId| {
        let q = prob.waste(i);
        (p.b_cny_kg - p.a1_cny_kg) * q
            + (p.t_cny_kg_km - p.a2_cny_kg_km) * q * prob.dist_m(i, c) / 1000.0
    };

    let mut best: Option<SitingSolution> = None;
    for mask in 0u64..(1u64 << cands.len()) {
        let open: Vec<SiteId> = cands
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        let open_set: BTreeSet<SiteId> = open.iter().copied().collect();
        let mut base_cost = 0.0;
        for &c in &open {
            base_cost += open_cost(c);
        }
        let pool: Vec<SiteId> = prob
            .assignees
            .iter()
            .copied()
            .filter(|s| !(prob.allow_self_service && open_set.contains(s)))
            .collect();

        let found = if prob.enforce_capacity {
            // full recursive enumeration over assignment vectors
            #[allow(clippy::too_many_arguments)]
            fn recurse(
                idx: usize,
                pool: &[SiteId],
                open: &[SiteId],
                prob: &SitingProblem,
                attach_cost: &dyn Fn(SiteId, SiteId) -> f64,
                require_full: bool,
                loads: &mut BTreeMap<SiteId, f64>,
                choice: &mut Vec<Option<SiteId>>,
                cost: f64,
                best: &mut Option<(f64, Vec<Option<SiteId>>)>,
            ) {
                if let Some((bc, _)) = best {
                    if cost >= *bc - 1e-12 {
                        return;
                    }
                }
                if idx == pool.len() {
                    *best = Some((cost, choice.clone()));
                    return;
                }
                let site = pool[idx];
                let q = prob.waste(site);
                for &c in open {
                    if prob.dist_m(site, c) > prob.params.l_m {
                        continue;
                    }
                    if loads[&c] + q > prob.capacity(c) + 1e-9 {
                        continue;
                    }
                    *loads.get_mut(&c).unwrap() += q;
                    choice[idx] = Some(c);
                    recurse(idx + 1, pool, open, prob, attach_cost, require_full, loads, choice, cost + attach_cost(site, c), best);
                    choice[idx] = None;
                    *loads.get_mut(&c).unwrap() -= q;
                }
                if !require_full {
                    choice[idx] = None;
                    recurse(idx + 1, pool, open, prob, attach_cost, require_full, loads, choice, cost, best);
                }
            }
            let mut loads: BTreeMap<SiteId, f64> =
                open.iter().map(|&c| (c, prob.waste(c))).collect();
            let mut choice = vec![None; pool.len()];
            let mut inner: Option<(f64, Vec<Option<SiteId>>)> = None;
            recurse(
                0,
                &pool,
                &open,
                prob,
                &attach_cost,
                require_full_assignment,
                &mut loads,
                &mut choice,
                0.0,
                &mut inner,
            );
            inner.map(|(c, choice)| {
                let mut assignment = BTreeMap::new();
                let mut unassigned = BTreeSet::new();
                for (i, ch) in choice.iter().enumerate() {
                    match ch {
                        Some(ctr) => {
                            assignment.insert(pool[i], *ctr);
                        }
                        None => {
                            unassigned.insert(pool[i]);
                        }
                    }
                }
                (c, assignment, unassigned)
            })
        } else {
            // uncapacitated: each assignee independently takes its cheapest
            // feasible open center
            let mut assignment = BTreeMap::new();
            let mut unassigned = BTreeSet::new();
            let mut cost = 0.0;
            let mut feasible = true;
            for &site in &pool {
                let mut cheapest: Option<(f64, SiteId)> = None;
                for &c in &open {
                    if prob.dist_m(site, c) > prob.params.l_m {
                        continue;
                    }
                    let ac = attach_cost(site, c);
                    if cheapest.is_none_or(|(bc, _)| ac < bc) {
                        cheapest = Some((ac, c));
                    }
                }
                match cheapest {
                    Some((ac, c)) => {
                        cost += ac;
                        assignment.insert(site, c);
                    }
                    None if require_full_assignment => {
                        feasible = false;
                        break;
                    }
                    None => {
                        unassigned.insert(site);
                    }
                }
            }
            feasible.then_some((cost, assignment, unassigned))
        };

        if let Some((assign_cost, assignment, unassigned)) = found {
            let obj = base_cost + assign_cost;
            if best.as_ref().is_none_or(|b| obj < b.objective_cny - 1e-12) {
                best = Some(SitingSolution {
                    open_centers: open_set,
                    assignment,
                    unassigned,
                    objective_cny: obj,
                    optimal: true,
                });
            }
        }
    }
    best.ok_or(Error::Infeasible {
        site: prob.assignees.first().copied().unwrap_or(0),
    })
}
