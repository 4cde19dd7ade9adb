//! Deterministic synthetic instance generation.
//!
//! Sites are placed uniformly in a bounding box from a seeded generator; bed
//! counts and common-site types follow the configured ranges and mix. The
//! default template mirrors the scale of the published case study: 21 large
//! sites and 91 commons in a city-district-sized box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    estimate_daily_waste, CollectionSite, Instance, OrgType, DEFAULT_CAPACITY_KG,
};
use crate::error::{Error, Result};
use crate::geo::GeoPoint;

/// Bounding box as (lat_min, lat_max, lon_min, lon_max).
pub type BBox = (f64, f64, f64, f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n_large: usize,
    pub n_common: usize,
    pub bbox: BBox,
    /// Inclusive bed-count range for large sites.
    pub beds_range: (u32, u32),
    /// Proportions over (community hospital, outpatient, clinic); must sum to 1.
    pub common_mix: (f64, f64, f64),
    pub seed: u64,
}

impl GenSpec {
    /// Template matching the case-study scale: 21 large + 91 common sites in
    /// a Dalian-sized box.
    pub fn dalian_like(seed: u64) -> Self {
        Self {
            n_large: 21,
            n_common: 91,
            bbox: (38.86, 38.94, 121.57, 121.68),
            beds_range: (50, 1000),
            common_mix: (0.25, 0.25, 0.5),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_large + self.n_common == 0 {
            return Err(Error::InvalidInput("generator needs at least one site".into()));
        }
        let (lat_min, lat_max, lon_min, lon_max) = self.bbox;
        let corners_ok = GeoPoint::new(lat_min, lon_min).in_range()
            && GeoPoint::new(lat_max, lon_max).in_range();
        if !corners_ok || !(lat_min < lat_max) || !(lon_min < lon_max) {
            return Err(Error::InvalidInput(format!("degenerate bbox {:?}", self.bbox)));
        }
        let (bmin, bmax) = self.beds_range;
        if bmin < 1 || bmin > bmax {
            return Err(Error::InvalidInput(format!("bad beds range {:?}", self.beds_range)));
        }
        if 0.4 * bmax as f64 > DEFAULT_CAPACITY_KG {
            return Err(Error::InvalidInput(format!(
                "beds_range max {bmax} would generate waste above the {DEFAULT_CAPACITY_KG} kg default capacity"
            )));
        }
        let (c, o, k) = self.common_mix;
        if c < 0.0 || o < 0.0 || k < 0.0 || (c + o + k - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "common_mix {:?} must be non-negative and sum to 1",
                self.common_mix
            )));
        }
        Ok(())
    }
}

/// Generates a validated instance; identical specs yield identical instances.
pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lat_min, lat_max, lon_min, lon_max) = spec.bbox;
    let draw_point = |rng: &mut ChaCha8Rng| {
        GeoPoint::new(rng.gen_range(lat_min..lat_max), rng.gen_range(lon_min..lon_max))
    };

    let mut sites = Vec::with_capacity(spec.n_large + spec.n_common);
    for i in 0..spec.n_large {
        let location = draw_point(&mut rng);
        let beds = rng.gen_range(spec.beds_range.0..=spec.beds_range.1);
        sites.push(CollectionSite {
            id: i as u32,
            name: format!("Hospital {i}"),
            location,
            org_type: OrgType::PrimaryHospitalOrAbove,
            beds: Some(beds),
            q_kg_day: estimate_daily_waste(OrgType::PrimaryHospitalOrAbove, Some(beds))?,
            capacity_kg: DEFAULT_CAPACITY_KG,
        });
    }
    let (p_community, p_outpatient, _) = spec.common_mix;
    for i in 0..spec.n_common {
        let location = draw_point(&mut rng);
        let roll: f64 = rng.gen();
        let org_type = if roll < p_community {
            OrgType::CommunityHospital
        } else if roll < p_community + p_outpatient {
            OrgType::Outpatient
        } else {
            OrgType::Clinic
        };
        let id = (spec.n_large + i) as u32;
        sites.push(CollectionSite {
            id,
            name: format!("{} {id}", match org_type {
                OrgType::CommunityHospital => "Community Hospital",
                OrgType::Outpatient => "Outpatient Dept",
                _ => "Clinic",
            }),
            location,
            org_type,
            beds: None,
            q_kg_day: estimate_daily_waste(org_type, None)?,
            capacity_kg: DEFAULT_CAPACITY_KG,
        });
    }
    Ok(Instance::new(sites))
}
