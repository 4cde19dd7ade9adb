//! Coverage partition of common sites with respect to large sites.
//!
//! A common site is covered when at least one large site lies within the
//! threshold L (boundary distance exactly L counts as covered); otherwise it
//! is uncovered and must be handled by the later siting layers.

use std::collections::BTreeSet;

use crate::domain::{Instance, SiteId};
use crate::error::{Error, Result};
use crate::geo::DistanceMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveragePartition {
    /// Common sites within L of at least one large site.
    pub covered: BTreeSet<SiteId>,
    /// Common sites farther than L from every large site.
    pub uncovered: BTreeSet<SiteId>,
}

/// Splits the common sites into covered/uncovered sets for threshold `l_m`.
///
/// With no large sites the universal quantifier is vacuous and every common
/// site is uncovered.
pub fn partition_coverage(
    inst: &Instance,
    dm: &DistanceMatrix,
    l_m: f64,
) -> Result<CoveragePartition> {
    if dm.n() != inst.len() {
        return Err(Error::InvalidInput(format!(
            "distance matrix is {}x{} but instance has {} sites",
            dm.n(),
            dm.n(),
            inst.len()
        )));
    }
    let index = inst.index_by_id();
    let large: Vec<usize> = inst.large_ids().iter().map(|id| index[id]).collect();
    let mut covered = BTreeSet::new();
    let mut uncovered = BTreeSet::new();
    for id in inst.common_ids() {
        let i = index[&id];
        if large.iter().any(|&j| dm.get(i, j) <= l_m) {
            covered.insert(id);
        } else {
            uncovered.insert(id);
        }
    }
    Ok(CoveragePartition { covered, uncovered })
}
