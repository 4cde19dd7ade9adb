//! 0-1 siting solvers.
//!
//! Both siting layers share one problem shape: pick a subset of candidate
//! sites to open as centers (fixed cost plus disposal of their own waste) and
//! attach assignee sites to open centers within the coverage threshold,
//! paying net disposal and transfer costs per assignment. Layer 1 opens
//! centers among large sites for the covered commons; layer 2 opens centers
//! among the uncovered commons themselves, with capacity enforced and
//! self-service allowed (an open center handles its own waste and leaves the
//! assignee pool).
//!
//! `solve_siting_exact` runs branch-and-bound over the open/close bits and is
//! complete at desk scale; `solve_siting_greedy` is the scalability fallback.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::domain::{Instance, ModelParams, SiteId};
use crate::error::{Error, Result};
use crate::geo::DistanceMatrix;

/// Candidate count above which the exact solver refuses to run.
pub const DEFAULT_EXACT_SIZE_LIMIT: usize = 20;

/// One siting subproblem over a shared instance and distance matrix.
#[derive(Clone)]
pub struct SitingProblem<'a> {
    pub candidates: Vec<SiteId>,
    pub assignees: Vec<SiteId>,
    pub inst: &'a Instance,
    pub dm: &'a DistanceMatrix,
    pub params: ModelParams,
    /// Enforce per-center intake capacity (layer 2).
    pub enforce_capacity: bool,
    /// Candidates may appear in the assignee list and serve themselves by
    /// opening (layer 2).
    pub allow_self_service: bool,
    index: HashMap<SiteId, usize>,
}

impl<'a> SitingProblem<'a> {
    pub fn new(
        candidates: Vec<SiteId>,
        assignees: Vec<SiteId>,
        inst: &'a Instance,
        dm: &'a DistanceMatrix,
        params: ModelParams,
        enforce_capacity: bool,
        allow_self_service: bool,
    ) -> Result<Self> {
        let index = inst.index_by_id();
        for id in candidates.iter().chain(assignees.iter()) {
            if !index.contains_key(id) {
                return Err(Error::InvalidInput(format!("unknown site id {id}")));
            }
        }
        if !allow_self_service {
            if let Some(id) = candidates.iter().find(|c| assignees.contains(c)) {
                return Err(Error::InvalidInput(format!(
                    "site {id} is both candidate and assignee but self-service is off"
                )));
            }
        }
        Ok(Self {
            candidates,
            assignees,
            inst,
            dm,
            params,
            enforce_capacity,
            allow_self_service,
            index,
        })
    }

    #[inline]
    pub fn dist_m(&self, a: SiteId, b: SiteId) -> f64 {
        self.dm.get(self.index[&a], self.index[&b])
    }

    #[inline]
    pub fn waste(&self, id: SiteId) -> f64 {
        self.inst.sites[self.index[&id]].q_kg_day
    }

    #[inline]
    pub fn capacity(&self, id: SiteId) -> f64 {
        self.inst.sites[self.index[&id]].capacity_kg
    }

    /// Cost of opening `c`: fixed cost plus disposal of its own waste.
    pub fn open_cost(&self, c: SiteId) -> f64 {
        self.params.f_cny + self.params.b_cny_kg * self.waste(c)
    }

    /// Added cost of attaching `assignee` to `center`: net disposal
    /// (b - a1) per kg plus net transfer (t - a2) per kg-km.
    pub fn marginal_cost(&self, assignee: SiteId, center: SiteId) -> f64 {
        let q = self.waste(assignee);
        let d_km = self.dist_m(assignee, center) / 1000.0;
        (self.params.b_cny_kg - self.params.a1_cny_kg) * q
            + (self.params.t_cny_kg_km - self.params.a2_cny_kg_km) * q * d_km
    }

    #[inline]
    pub fn within_threshold(&self, assignee: SiteId, center: SiteId) -> bool {
        self.dist_m(assignee, center) <= self.params.l_m
    }
}

/// Output of one siting solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SitingSolution {
    pub open_centers: BTreeSet<SiteId>,
    pub assignment: BTreeMap<SiteId, SiteId>,
    pub unassigned: BTreeSet<SiteId>,
    pub objective_cny: f64,
    /// True only when produced by a completed exact run.
    pub optimal: bool,
}

impl SitingSolution {
    pub fn empty() -> Self {
        Self {
            open_centers: BTreeSet::new(),
            assignment: BTreeMap::new(),
            unassigned: BTreeSet::new(),
            objective_cny: 0.0,
            optimal: false,
        }
    }
}

/// Recomputes the objective of a structurally valid solution.
pub fn objective_value(prob: &SitingProblem, sol: &SitingSolution) -> Result<f64> {
    let mut total = 0.0;
    for &c in &sol.open_centers {
        total += prob.open_cost(c);
    }
    for (&site, &center) in &sol.assignment {
        if !sol.open_centers.contains(&center) {
            return Err(Error::Contract(format!(
                "site {site} assigned to closed center {center}"
            )));
        }
        total += prob.marginal_cost(site, center);
    }
    Ok(total)
}

/// Attaches each assignee to the cheapest feasible open center.
///
/// Assignees are processed in decreasing waste (ties by ascending id) so
/// capacity contention is resolved deterministically; center ties go to the
/// lowest id. Assignees with no feasible center land in `unassigned`.
/// Self-served open candidates are neither assigned nor unassigned.
pub fn assign_to_centers(
    open_centers: &BTreeSet<SiteId>,
    prob: &SitingProblem,
) -> (BTreeMap<SiteId, SiteId>, BTreeSet<SiteId>) {
    let mut loads: BTreeMap<SiteId, f64> =
        open_centers.iter().map(|&c| (c, prob.waste(c))).collect();
    let mut order: Vec<SiteId> = prob.assignees.clone();
    order.sort_by(|a, b| {
        prob.waste(*b)
            .partial_cmp(&prob.waste(*a))
            .unwrap()
            .then(a.cmp(b))
    });

    let mut assignment = BTreeMap::new();
    let mut unassigned = BTreeSet::new();
    for site in order {
        if prob.allow_self_service && open_centers.contains(&site) {
            continue; // serves itself
        }
        let q = prob.waste(site);
        let mut best: Option<(f64, SiteId)> = None;
        for &c in open_centers.iter() {
            if !prob.within_threshold(site, c) {
                continue;
            }
            if prob.enforce_capacity && loads[&c] + q > prob.capacity(c) + 1e-9 {
                continue;
            }
            let cost = prob.marginal_cost(site, c);
            if best.is_none_or(|(bc, _)| cost < bc) {
                best = Some((cost, c));
            }
        }
        match best {
            Some((_, c)) => {
                *loads.get_mut(&c).unwrap() += q;
                assignment.insert(site, c);
            }
            None => {
                unassigned.insert(site);
            }
        }
    }
    (assignment, unassigned)
}

/// Optimal assignment of all assignees for a fixed open set, capacity
/// enforced. Depth-first over assignees in decreasing waste order with a
/// cheapest-remaining lower bound; small assignee counts only.
fn best_capacity_assignment(
    open_centers: &BTreeSet<SiteId>,
    prob: &SitingProblem,
    require_full_assignment: bool,
) -> Option<(BTreeMap<SiteId, SiteId>, BTreeSet<SiteId>, f64)> {
    let mut order: Vec<SiteId> = prob
        .assignees
        .iter()
        .copied()
        .filter(|s| !(prob.allow_self_service && open_centers.contains(s)))
        .collect();
    order.sort_by(|a, b| {
        prob.waste(*b)
            .partial_cmp(&prob.waste(*a))
            .unwrap()
            .then(a.cmp(b))
    });

    // Per-assignee feasible options by distance, cheapest first.
    let options: Vec<Vec<(f64, SiteId)>> = order
        .iter()
        .map(|&s| {
            let mut v: Vec<(f64, SiteId)> = open_centers
                .iter()
                .filter(|&&c| prob.within_threshold(s, c))
                .map(|&c| (prob.marginal_cost(s, c), c))
                .collect();
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            v
        })
        .collect();
    if require_full_assignment && options.iter().any(|v| v.is_empty()) {
        return None;
    }

    // suffix_min[i] = sum of cheapest options from assignee i on.
    let n = order.len();
    let mut suffix_min = vec![0.0; n + 1];
    for i in (0..n).rev() {
        let cheapest = if require_full_assignment {
            options[i].first().map(|o| o.0).unwrap_or(f64::INFINITY)
        } else {
            0.0 // leaving unassigned costs nothing
        };
        suffix_min[i] = suffix_min[i + 1] + cheapest;
    }

    struct Dfs<'p, 'a> {
        prob: &'p SitingProblem<'a>,
        order: &'p [SiteId],
        options: &'p [Vec<(f64, SiteId)>],
        suffix_min: &'p [f64],
        require_full: bool,
        loads: BTreeMap<SiteId, f64>,
        choice: Vec<Option<SiteId>>,
        best_cost: f64,
        best_choice: Option<Vec<Option<SiteId>>>,
    }

    impl Dfs<'_, '_> {
        fn go(&mut self, i: usize, cost: f64) {
            if cost + self.suffix_min[i] >= self.best_cost - 1e-12 && self.best_choice.is_some() {
                return;
            }
            if i == self.order.len() {
                if self.best_choice.is_none() || cost < self.best_cost {
                    self.best_cost = cost;
                    self.best_choice = Some(self.choice.clone());
                }
                return;
            }
            let site = self.order[i];
            let q = self.prob.waste(site);
            for &(c_cost, center) in &self.options[i] {
                if self.loads[&center] + q > self.prob.capacity(center) + 1e-9 {
                    continue;
                }
                *self.loads.get_mut(&center).unwrap() += q;
                self.choice[i] = Some(center);
                self.go(i + 1, cost + c_cost);
                self.choice[i] = None;
                *self.loads.get_mut(&center).unwrap() -= q;
            }
            if !self.require_full {
                self.choice[i] = None;
                self.go(i + 1, cost);
            }
        }
    }

    let mut dfs = Dfs {
        prob,
        order: &order,
        options: &options,
        suffix_min: &suffix_min,
        require_full: require_full_assignment,
        loads: open_centers.iter().map(|&c| (c, prob.waste(c))).collect(),
        choice: vec![None; n],
        best_cost: f64::INFINITY,
        best_choice: None,
    };
    dfs.go(0, 0.0);

    let choice = dfs.best_choice?;
    let mut assignment = BTreeMap::new();
    let mut unassigned = BTreeSet::new();
    for (i, ch) in choice.iter().enumerate() {
        match ch {
            Some(c) => {
                assignment.insert(order[i], *c);
            }
            None => {
                unassigned.insert(order[i]);
            }
        }
    }
    Some((assignment, unassigned, dfs.best_cost))
}

/// Best assignment of assignees for a fixed open set. Without capacity each
/// assignee independently takes its cheapest feasible center; with capacity a
/// small exact search runs. Returns `None` when full assignment is required
/// but impossible.
fn best_assignment_for_open_set(
    open_centers: &BTreeSet<SiteId>,
    prob: &SitingProblem,
    require_full_assignment: bool,
) -> Option<(BTreeMap<SiteId, SiteId>, BTreeSet<SiteId>, f64)> {
    if prob.enforce_capacity {
        return best_capacity_assignment(open_centers, prob, require_full_assignment);
    }
    let mut assignment = BTreeMap::new();
    let mut unassigned = BTreeSet::new();
    let mut cost = 0.0;
    for &site in &prob.assignees {
        if prob.allow_self_service && open_centers.contains(&site) {
            continue;
        }
        let mut best: Option<(f64, SiteId)> = None;
        for &c in open_centers.iter() {
            if !prob.within_threshold(site, c) {
                continue;
            }
            let mc = prob.marginal_cost(site, c);
            if best.is_none_or(|(bc, _)| mc < bc) {
                best = Some((mc, c));
            }
        }
        match best {
            Some((mc, c)) => {
                assignment.insert(site, c);
                cost += mc;
            }
            None if require_full_assignment => return None,
            None => {
                unassigned.insert(site);
            }
        }
    }
    Some((assignment, unassigned, cost))
}

/// Exact solve by branch-and-bound over candidate open/close bits.
///
/// Candidates are explored in ascending id; the node bound is the cost of
/// centers opened so far plus, per assignee, the cheapest marginal cost
/// reachable among still-openable candidates (capacity relaxed). With
/// `require_full_assignment`, any solution leaving an assignee unassigned is
/// infeasible.
pub fn solve_siting_exact(
    prob: &SitingProblem,
    require_full_assignment: bool,
) -> Result<SitingSolution> {
    solve_siting_exact_limited(prob, require_full_assignment, DEFAULT_EXACT_SIZE_LIMIT)
}

pub fn solve_siting_exact_limited(
    prob: &SitingProblem,
    require_full_assignment: bool,
    exact_size_limit: usize,
) -> Result<SitingSolution> {
    if prob.candidates.len() > exact_size_limit {
        return Err(Error::SizeLimit {
            size: prob.candidates.len(),
            limit: exact_size_limit,
        });
    }
    let mut cands: Vec<SiteId> = prob.candidates.clone();
    cands.sort_unstable();
    cands.dedup();

    // Distance-uncoverable assignees make the full-assignment variant
    // infeasible outright (self-service counts as coverage).
    if require_full_assignment {
        for &site in &prob.assignees {
            let coverable = cands.iter().any(|&c| {
                prob.within_threshold(site, c) || (prob.allow_self_service && c == site)
            });
            if !coverable {
                return Err(Error::Infeasible { site });
            }
        }
    }

    struct Search<'p, 'a> {
        prob: &'p SitingProblem<'a>,
        cands: &'p [SiteId],
        require_full: bool,
        opened: BTreeSet<SiteId>,
        opened_cost: f64,
        best: Option<(f64, SitingSolution)>,
    }

    impl Search<'_, '_> {
        fn lower_bound(&self, idx: usize) -> f64 {
            let remaining = &self.cands[idx..];
            let mut bound = self.opened_cost;
            for &site in &self.prob.assignees {
                if self.prob.allow_self_service && self.opened.contains(&site) {
                    continue;
                }
                let mut cheapest = if self.require_full { f64::INFINITY } else { 0.0 };
                for &c in self.opened.iter().chain(remaining.iter()) {
                    if self.prob.allow_self_service && c == site {
                        // could open itself later
                        cheapest = cheapest.min(self.prob.open_cost(site));
                        continue;
                    }
                    if self.prob.within_threshold(site, c) {
                        cheapest = cheapest.min(self.prob.marginal_cost(site, c));
                    }
                }
                if cheapest.is_infinite() {
                    return f64::INFINITY; // relaxation already infeasible
                }
                bound += cheapest;
            }
            bound
        }

        fn go(&mut self, idx: usize) {
            let bound = self.lower_bound(idx);
            if let Some((best_obj, _)) = &self.best {
                if bound > best_obj - 1e-12 {
                    return;
                }
            } else if bound.is_infinite() {
                return;
            }
            if idx == self.cands.len() {
                if let Some((assignment, unassigned, assign_cost)) =
                    best_assignment_for_open_set(&self.opened, self.prob, self.require_full)
                {
                    let obj = self.opened_cost + assign_cost;
                    if self.best.as_ref().is_none_or(|(b, _)| obj < *b) {
                        self.best = Some((
                            obj,
                            SitingSolution {
                                open_centers: self.opened.clone(),
                                assignment,
                                unassigned,
                                objective_cny: obj,
                                optimal: true,
                            },
                        ));
                    }
                }
                return;
            }
            let c = self.cands[idx];
            // open branch first: incumbents with coverage arrive early
            self.opened.insert(c);
            self.opened_cost += self.prob.open_cost(c);
            self.go(idx + 1);
            self.opened_cost -= self.prob.open_cost(c);
            self.opened.remove(&c);
            self.go(idx + 1);
        }
    }

    let mut search = Search {
        prob,
        cands: &cands,
        require_full: require_full_assignment,
        opened: BTreeSet::new(),
        opened_cost: 0.0,
        best: None,
    };
    search.go(0);

    match search.best {
        Some((_, sol)) => Ok(sol),
        None => Err(Error::Infeasible {
            site: prob.assignees.first().copied().unwrap_or(0),
        }),
    }
}

/// Greedy coverage fallback: repeatedly open the closed candidate with the
/// best cost increase per newly-handled assignee, until every assignee is
/// handled or no opening handles anyone new. No optimality claim; documented
/// complexity O(|candidates|^2 * |assignees|).
pub fn solve_siting_greedy(prob: &SitingProblem) -> Result<SitingSolution> {
    let mut open: BTreeSet<SiteId> = BTreeSet::new();
    let mut cands: Vec<SiteId> = prob.candidates.clone();
    cands.sort_unstable();
    cands.dedup();

    let solution_for = |open: &BTreeSet<SiteId>| -> Result<SitingSolution> {
        let (assignment, unassigned) = assign_to_centers(open, prob);
        let mut sol = SitingSolution {
            open_centers: open.clone(),
            assignment,
            unassigned,
            objective_cny: 0.0,
            optimal: false,
        };
        sol.objective_cny = objective_value(prob, &sol)?;
        Ok(sol)
    };

    let mut current = solution_for(&open)?;
    while !current.unassigned.is_empty() {
        let mut pick: Option<(f64, SiteId, SitingSolution)> = None;
        for &c in &cands {
            if open.contains(&c) {
                continue;
            }
            let mut trial_open = open.clone();
            trial_open.insert(c);
            let trial = solution_for(&trial_open)?;
            let newly = current.unassigned.len() as i64 - trial.unassigned.len() as i64;
            if newly <= 0 {
                continue;
            }
            let ratio = (trial.objective_cny - current.objective_cny) / newly as f64;
            if pick.as_ref().is_none_or(|(r, _, _)| ratio < *r) {
                pick = Some((ratio, c, trial));
            }
        }
        match pick {
            Some((_, c, trial)) => {
                open.insert(c);
                current = trial;
            }
            None => break, // nobody new can be handled
        }
    }
    Ok(current)
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::domain::default_params;

    fn one_center_one_assignee() -> (Instance, DistanceMatrix) {
        planar_instance(&[
            Spec(0, true, 0.0, 0.0, 100.0, cap(100.0)),
            Spec(1, false, 400.0, 0.0, 17.5, cap(17.5)),
        ])
    }

    #[test]
    fn objective_empty_solution_is_zero() {
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        assert_eq!(objective_value(&prob, &SitingSolution::empty()).unwrap(), 0.0);
    }

    #[test]
    fn objective_hand_computed_value() {
        // 3000 + 3*17.5 + 3*100 - 1*17.5 + (2 - 0.5)*17.5*0.4 = 3345.5
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let sol = SitingSolution {
            open_centers: [0].into(),
            assignment: [(1, 0)].into(),
            unassigned: BTreeSet::new(),
            objective_cny: 0.0,
            optimal: false,
        };
        let z = objective_value(&prob, &sol).unwrap();
        assert!((z - 3345.5).abs() < 1e-9, "z = {z}");
    }

    #[test]
    fn objective_center_only() {
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let sol = SitingSolution {
            open_centers: [0].into(),
            assignment: BTreeMap::new(),
            unassigned: [1].into(),
            objective_cny: 0.0,
            optimal: false,
        };
        assert!((objective_value(&prob, &sol).unwrap() - 3300.0).abs() < 1e-9);
    }

    #[test]
    fn objective_rejects_closed_center() {
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let sol = SitingSolution {
            open_centers: BTreeSet::new(),
            assignment: [(1, 0)].into(),
            unassigned: BTreeSet::new(),
            objective_cny: 0.0,
            optimal: false,
        };
        assert!(matches!(objective_value(&prob, &sol), Err(Error::Contract(_))));
    }

    #[test]
    fn assign_ties_go_to_lower_center_id() {
        let (inst, dm) = planar_instance(&[
            Spec(0, true, -200.0, 0.0, 50.0, cap(50.0)),
            Spec(1, true, 200.0, 0.0, 50.0, cap(50.0)),
            Spec(2, false, 0.0, 0.0, 17.5, cap(17.5)),
        ]);
        let prob =
            SitingProblem::new(vec![0, 1], vec![2], &inst, &dm, default_params(), false, false)
                .unwrap();
        let (assignment, unassigned) = assign_to_centers(&[0, 1].into(), &prob);
        assert!(unassigned.is_empty());
        assert_eq!(assignment[&2], 0);
    }

    #[test]
    fn assign_distance_infeasible_lands_unassigned() {
        let (inst, dm) = planar_instance(&[
            Spec(0, true, 0.0, 0.0, 50.0, cap(50.0)),
            Spec(1, false, 600.0, 0.0, 17.5, cap(17.5)),
        ]);
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let (assignment, unassigned) = assign_to_centers(&[0].into(), &prob);
        assert!(assignment.is_empty());
        assert!(unassigned.contains(&1));
    }

    #[test]
    fn assign_capacity_contention_prefers_heavier_assignee() {
        // Center own waste 500, capacity 1500: remaining 1000. Heavier q=900
        // goes first, q=800 no longer fits.
        let (inst, dm) = planar_instance(&[
            Spec(0, true, 0.0, 0.0, 500.0, 1500.0),
            Spec(1, false, 100.0, 0.0, 900.0, cap(900.0)),
            Spec(2, false, 150.0, 0.0, 800.0, cap(800.0)),
        ]);
        let prob =
            SitingProblem::new(vec![0], vec![1, 2], &inst, &dm, default_params(), true, false)
                .unwrap();
        let (assignment, unassigned) = assign_to_centers(&[0].into(), &prob);
        assert_eq!(assignment.get(&1), Some(&0));
        assert!(unassigned.contains(&2));
    }

    #[test]
    fn exact_single_candidate() {
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let sol = solve_siting_exact(&prob, true).unwrap();
        assert!(sol.optimal);
        assert_eq!(sol.open_centers, [0].into());
        assert_eq!(sol.assignment[&1], 0);
        assert!((sol.objective_cny - 3345.5).abs() < 1e-9);
    }

    #[test]
    fn exact_uncoverable_assignee_is_infeasible() {
        let (inst, dm) = planar_instance(&[
            Spec(0, true, 0.0, 0.0, 50.0, cap(50.0)),
            Spec(1, false, 900.0, 0.0, 17.5, cap(17.5)),
        ]);
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        match solve_siting_exact(&prob, true) {
            Err(Error::Infeasible { site }) => assert_eq!(site, 1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn exact_without_full_assignment_prefers_empty_plan() {
        // All costs positive, nothing mandatory: opening anything only adds cost.
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![1], &inst, &dm, default_params(), false, false).unwrap();
        let sol = solve_siting_exact(&prob, false).unwrap();
        assert!(sol.open_centers.is_empty());
        assert_eq!(sol.objective_cny, 0.0);
    }

    #[test]
    fn exact_size_limit_enforced() {
        let specs: Vec<Spec> = (0..5)
            .map(|i| Spec(i, true, i as f64 * 100.0, 0.0, 10.0, cap(10.0)))
            .collect();
        let (inst, dm) = planar_instance(&specs);
        let prob = SitingProblem::new(
            (0..5).collect(),
            vec![],
            &inst,
            &dm,
            default_params(),
            false,
            false,
        )
        .unwrap();
        assert!(matches!(
            solve_siting_exact_limited(&prob, false, 4),
            Err(Error::SizeLimit { size: 5, limit: 4 })
        ));
    }

    #[test]
    fn greedy_zero_assignees_opens_nothing() {
        let (inst, dm) = one_center_one_assignee();
        let prob =
            SitingProblem::new(vec![0], vec![], &inst, &dm, default_params(), false, false).unwrap();
        let sol = solve_siting_greedy(&prob).unwrap();
        assert!(sol.open_centers.is_empty());
        assert_eq!(sol.objective_cny, 0.0);
    }

    #[test]
    fn greedy_matches_exact_on_single_cheap_cover() {
        let (inst, dm) = planar_instance(&[
            Spec(0, true, 0.0, 0.0, 50.0, cap(50.0)),
            Spec(1, true, 5000.0, 5000.0, 50.0, cap(50.0)),
            Spec(2, false, 100.0, 0.0, 17.5, cap(17.5)),
            Spec(3, false, 0.0, 100.0, 17.5, cap(17.5)),
        ]);
        let prob = SitingProblem::new(
            vec![0, 1],
            vec![2, 3],
            &inst,
            &dm,
            default_params(),
            false,
            false,
        )
        .unwrap();
        let exact = solve_siting_exact(&prob, true).unwrap();
        let greedy = solve_siting_greedy(&prob).unwrap();
        assert_eq!(exact.open_centers, greedy.open_centers);
        assert!((exact.objective_cny - greedy.objective_cny).abs() < 1e-9);
        assert!(exact.objective_cny <= greedy.objective_cny + 1e-9);
    }

    #[test]
    fn self_service_forced_when_isolated() {
        // Two commons far apart: each must open for itself.
        let (inst, dm) = planar_instance(&[
            Spec(0, false, 0.0, 0.0, 17.5, cap(17.5)),
            Spec(1, false, 5000.0, 0.0, 17.5, cap(17.5)),
        ]);
        let prob = SitingProblem::new(
            vec![0, 1],
            vec![0, 1],
            &inst,
            &dm,
            default_params(),
            true,
            true,
        )
        .unwrap();
        let sol = solve_siting_exact(&prob, true).unwrap();
        assert_eq!(sol.open_centers, [0, 1].into());
        assert!(sol.assignment.is_empty());
        assert!(sol.unassigned.is_empty());
    }

    #[test]
    fn zero_fixed_cost_assigns_nearest() {
        // f = 0 and weightless candidates: optimum opens freely and each
        // assignee takes its nearest feasible candidate.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut specs = Vec::new();
            for i in 0..4u32 {
                specs.push(Spec(i, true, rng.gen_range(0.0..400.0), rng.gen_range(0.0..400.0), 0.0, 1500.0));
            }
            for i in 4..9u32 {
                specs.push(Spec(i, false, rng.gen_range(0.0..400.0), rng.gen_range(0.0..400.0), 17.5, 1500.0));
            }
            let (inst, dm) = planar_instance(&specs);
            let mut params = default_params();
            params.f_cny = 0.0;
            params.b_cny_kg = params.a1_cny_kg + 1e-6;
            let prob = SitingProblem::new(
                (0..4).collect(),
                (4..9).collect(),
                &inst,
                &dm,
                params,
                false,
                false,
            )
            .unwrap();
            let sol = solve_siting_exact(&prob, true).unwrap();
            for &site in &prob.assignees {
                let nearest = (0..4u32)
                    .min_by(|a, b| prob.dist_m(site, *a).partial_cmp(&prob.dist_m(site, *b)).unwrap())
                    .unwrap();
                assert_eq!(
                    prob.dist_m(site, sol.assignment[&site]),
                    prob.dist_m(site, nearest),
                    "site {site} not at nearest candidate"
                );
            }
        }
    }
}
