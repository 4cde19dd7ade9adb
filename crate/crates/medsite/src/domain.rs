//! Sites, instances, and model parameters.
//!
//! A site inventory distinguishes large collection sites (primary hospitals
//! and above, the prioritized center candidates) from common collection sites
//! (community hospitals, outpatient departments, clinics). Daily waste is
//! either given explicitly or estimated from the organization type.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geo::GeoPoint;

pub type SiteId = u32;

/// Default maximum intake of a collection site, kg/day.
pub const DEFAULT_CAPACITY_KG: f64 = 1500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrgType {
    PrimaryHospitalOrAbove,
    CommunityHospital,
    Outpatient,
    Clinic,
}

impl OrgType {
    /// Large sites are the prioritized center candidates.
    pub fn is_large(self) -> bool {
        matches!(self, OrgType::PrimaryHospitalOrAbove)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrgType::PrimaryHospitalOrAbove => "primary_hospital_or_above",
            OrgType::CommunityHospital => "community_hospital",
            OrgType::Outpatient => "outpatient",
            OrgType::Clinic => "clinic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "primary_hospital_or_above" | "primary" | "primary_hospital" => {
                Some(OrgType::PrimaryHospitalOrAbove)
            }
            "community_hospital" | "community" => Some(OrgType::CommunityHospital),
            "outpatient" => Some(OrgType::Outpatient),
            "clinic" => Some(OrgType::Clinic),
            _ => None,
        }
    }
}

/// One medical unit that generates waste daily.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectionSite {
    pub id: SiteId,
    pub name: String,
    pub location: GeoPoint,
    pub org_type: OrgType,
    /// Bed count, required for large sites (drives waste estimation).
    pub beds: Option<u32>,
    /// Daily waste generated, kg/day.
    pub q_kg_day: f64,
    /// Maximum intake when operating as a center, kg.
    pub capacity_kg: f64,
}

impl CollectionSite {
    pub fn is_large(&self) -> bool {
        self.org_type.is_large()
    }
}

/// A full site inventory. The large/common split is derived from org type.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub sites: Vec<CollectionSite>,
}

impl Instance {
    pub fn new(sites: Vec<CollectionSite>) -> Self {
        Self { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn large_ids(&self) -> Vec<SiteId> {
        self.sites.iter().filter(|s| s.is_large()).map(|s| s.id).collect()
    }

    pub fn common_ids(&self) -> Vec<SiteId> {
        self.sites.iter().filter(|s| !s.is_large()).map(|s| s.id).collect()
    }

    /// Map from site id to position in `sites` (the distance-matrix index).
    pub fn index_by_id(&self) -> HashMap<SiteId, usize> {
        self.sites.iter().enumerate().map(|(i, s)| (s.id, i)).collect()
    }

    pub fn site(&self, id: SiteId) -> Option<&CollectionSite> {
        self.sites.iter().find(|s| s.id == id)
    }

    pub fn total_waste_kg(&self) -> f64 {
        self.sites.iter().map(|s| s.q_kg_day).sum()
    }

    /// Projects every site about the coordinate centroid and builds the L1
    /// distance matrix, indexed by position in `sites`.
    pub fn geometry(&self) -> Result<(Vec<crate::geo::PlanarPoint>, crate::geo::DistanceMatrix)> {
        if self.is_empty() {
            return Err(Error::InvalidInput("instance has no sites".into()));
        }
        let n = self.sites.len() as f64;
        let origin = GeoPoint::new(
            self.sites.iter().map(|s| s.location.lat_deg).sum::<f64>() / n,
            self.sites.iter().map(|s| s.location.lon_deg).sum::<f64>() / n,
        );
        let pts = self
            .sites
            .iter()
            .map(|s| crate::geo::project(s.location, origin))
            .collect::<Result<Vec<_>>>()?;
        let dm = crate::geo::build_distance_matrix(&pts)?;
        Ok((pts, dm))
    }
}

/// Cost, subsidy, and coverage constants of the siting models.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    /// Fixed construction cost per opened center, CNY.
    pub f_cny: f64,
    /// Disposal cost, CNY per kg.
    pub b_cny_kg: f64,
    /// Transfer cost, CNY per kg per km.
    pub t_cny_kg_km: f64,
    /// Disposal subsidy on transferred-in waste, CNY per kg.
    pub a1_cny_kg: f64,
    /// Transfer subsidy, CNY per kg per km.
    pub a2_cny_kg_km: f64,
    /// Coverage threshold, meters.
    pub l_m: f64,
}

impl ModelParams {
    /// Checks the strict cost-versus-subsidy inequalities and sign constraints.
    pub fn validate(&self) -> Result<()> {
        if !(self.b_cny_kg > self.a1_cny_kg) {
            return Err(Error::InvalidInput(format!(
                "disposal cost b = {} must exceed subsidy a1 = {}",
                self.b_cny_kg, self.a1_cny_kg
            )));
        }
        if !(self.t_cny_kg_km > self.a2_cny_kg_km) {
            return Err(Error::InvalidInput(format!(
                "transfer cost t = {} must exceed subsidy a2 = {}",
                self.t_cny_kg_km, self.a2_cny_kg_km
            )));
        }
        let fields = [
            self.f_cny,
            self.b_cny_kg,
            self.t_cny_kg_km,
            self.a1_cny_kg,
            self.a2_cny_kg_km,
        ];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput("model parameters must be finite and non-negative".into()));
        }
        if !(self.l_m > 0.0) || !self.l_m.is_finite() {
            return Err(Error::InvalidInput("coverage threshold L must be positive".into()));
        }
        Ok(())
    }
}

/// Published parameter estimates: f = 3000 CNY, b = 3 CNY/kg, t = 2 CNY/kg/km,
/// a1 = 1 CNY/kg, a2 = 0.5 CNY/kg/km, L = 500 m.
pub fn default_params() -> ModelParams {
    ModelParams {
        f_cny: 3000.0,
        b_cny_kg: 3.0,
        t_cny_kg_km: 2.0,
        a1_cny_kg: 1.0,
        a2_cny_kg_km: 0.5,
        l_m: 500.0,
    }
}

/// Estimates daily waste (kg/day) from organization type. Large sites scale
/// with bed count (0.4 kg/day/bed); community hospitals and outpatient
/// departments use the midpoint of the reported 15-20 kg/day range.
pub fn estimate_daily_waste(org_type: OrgType, beds: Option<u32>) -> Result<f64> {
    match org_type {
        OrgType::PrimaryHospitalOrAbove => match beds {
            Some(b) if b > 0 => Ok(0.4 * b as f64),
            _ => Err(Error::InvalidInput(
                "large site needs a positive bed count to estimate waste".into(),
            )),
        },
        OrgType::CommunityHospital | OrgType::Outpatient => Ok(17.5),
        OrgType::Clinic => Ok(1.5),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationCode {
    EmptyInstance,
    DuplicateId,
    BadCoordinate,
    MissingBeds,
    NegativeWaste,
    NonPositiveCapacity,
    CapacityBelowOwnWaste,
}

impl std::fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationCode::EmptyInstance => "EMPTY_INSTANCE",
            ViolationCode::DuplicateId => "DUPLICATE_ID",
            ViolationCode::BadCoordinate => "BAD_COORDINATE",
            ViolationCode::MissingBeds => "MISSING_BEDS",
            ViolationCode::NegativeWaste => "NEGATIVE_WASTE",
            ViolationCode::NonPositiveCapacity => "NONPOSITIVE_CAPACITY",
            ViolationCode::CapacityBelowOwnWaste => "CAPACITY_BELOW_OWN_WASTE",
        };
        f.write_str(s)
    }
}

/// One instance-level rule breach; violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceViolation {
    pub code: ViolationCode,
    pub site_id: Option<SiteId>,
    pub detail: String,
}

/// Checks every instance and site invariant; empty result means well-formed.
pub fn validate_instance(inst: &Instance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    if inst.is_empty() {
        out.push(InstanceViolation {
            code: ViolationCode::EmptyInstance,
            site_id: None,
            detail: "instance has no sites".into(),
        });
        return out;
    }
    let mut seen = std::collections::HashSet::new();
    for s in &inst.sites {
        if !seen.insert(s.id) {
            out.push(InstanceViolation {
                code: ViolationCode::DuplicateId,
                site_id: Some(s.id),
                detail: format!("site id {} appears more than once", s.id),
            });
        }
        if !s.location.in_range() {
            out.push(InstanceViolation {
                code: ViolationCode::BadCoordinate,
                site_id: Some(s.id),
                detail: format!("({}, {}) out of range", s.location.lat_deg, s.location.lon_deg),
            });
        }
        if s.is_large() && !matches!(s.beds, Some(b) if b > 0) {
            out.push(InstanceViolation {
                code: ViolationCode::MissingBeds,
                site_id: Some(s.id),
                detail: "large site without a positive bed count".into(),
            });
        }
        if !(s.q_kg_day >= 0.0) || !s.q_kg_day.is_finite() {
            out.push(InstanceViolation {
                code: ViolationCode::NegativeWaste,
                site_id: Some(s.id),
                detail: format!("q = {}", s.q_kg_day),
            });
        }
        if !(s.capacity_kg > 0.0) || !s.capacity_kg.is_finite() {
            out.push(InstanceViolation {
                code: ViolationCode::NonPositiveCapacity,
                site_id: Some(s.id),
                detail: format!("capacity = {}", s.capacity_kg),
            });
        } else if s.q_kg_day > s.capacity_kg {
            out.push(InstanceViolation {
                code: ViolationCode::CapacityBelowOwnWaste,
                site_id: Some(s.id),
                detail: format!("q = {} exceeds capacity = {}", s.q_kg_day, s.capacity_kg),
            });
        }
    }
    out
}

#[cfg(test)]
pub(crate) fn test_site(id: SiteId, org_type: OrgType, lat: f64, lon: f64) -> CollectionSite {
    let beds = if org_type.is_large() { Some(250) } else { None };
    CollectionSite {
        id,
        name: format!("site-{id}"),
        location: GeoPoint::new(lat, lon),
        org_type,
        beds,
        q_kg_day: estimate_daily_waste(org_type, beds).unwrap(),
        capacity_kg: DEFAULT_CAPACITY_KG,
    }
}
