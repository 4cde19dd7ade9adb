//! File formats: site inventory CSV, canonical plan JSON, and the small
//! params/coeffs JSON documents consumed by the CLI.
//!
//! Plan JSON is written canonically (keys sorted, 6-decimal fixed floats,
//! arrays ordered by site id) so identical runs produce byte-identical
//! documents and snapshot tests can compare raw bytes.

use std::fmt::Write as _;

use crate::domain::{
    estimate_daily_waste, validate_instance, CollectionSite, Instance, ModelParams, OrgType,
    DEFAULT_CAPACITY_KG,
};
use crate::error::{Error, Result};
use crate::evaluate::{CostBreakdown, OpsCoefficients, OpsReport};
use crate::geo::GeoPoint;
use crate::pipeline::{PlanAssignment, PlanCenter, SitingPlan};

pub const SITES_CSV_HEADER: &str = "id,name,lat,lon,org_type,beds,q_kg_day,capacity_kg";

fn opt_field(s: &str) -> Option<&str> {
    let t = s.trim();
    (!t.is_empty()).then_some(t)
}

/// Parses a site inventory CSV into a validated instance. Row order is
/// preserved as index order. `beds`, `q_kg_day`, and `capacity_kg` may be
/// empty per row; waste defaults via the org-type estimate and capacity to
/// 1500 kg.
pub fn parse_sites_csv(text: &str) -> Result<Instance> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    {
        let headers = reader.headers().map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        let expected: Vec<&str> = SITES_CSV_HEADER.split(',').collect();
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{SITES_CSV_HEADER}`, got `{}`", got.join(",")),
            });
        }
    }

    let mut sites = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2; // header is line 1
        let rec = record.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let parse_err = |what: &str, v: &str| Error::Parse {
            line,
            msg: format!("bad {what}: `{v}`"),
        };

        let id: u32 = field(0).parse().map_err(|_| parse_err("id", field(0)))?;
        let name = field(1).to_string();
        let lat: f64 = field(2).parse().map_err(|_| parse_err("lat", field(2)))?;
        let lon: f64 = field(3).parse().map_err(|_| parse_err("lon", field(3)))?;
        let org_type = OrgType::parse(field(4)).ok_or_else(|| parse_err("org_type", field(4)))?;
        let beds: Option<u32> = match opt_field(field(5)) {
            Some(v) => Some(v.parse().map_err(|_| parse_err("beds", v))?),
            None => None,
        };
        let q_kg_day = match opt_field(field(6)) {
            Some(v) => v.parse().map_err(|_| parse_err("q_kg_day", v))?,
            None => estimate_daily_waste(org_type, beds).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?,
        };
        let capacity_kg = match opt_field(field(7)) {
            Some(v) => v.parse().map_err(|_| parse_err("capacity_kg", v))?,
            None => DEFAULT_CAPACITY_KG,
        };
        sites.push(CollectionSite {
            id,
            name,
            location: GeoPoint::new(lat, lon),
            org_type,
            beds,
            q_kg_day,
            capacity_kg,
        });
    }

    let inst = Instance::new(sites);
    let violations = validate_instance(&inst);
    if !violations.is_empty() {
        let list: Vec<String> = violations
            .iter()
            .map(|v| match v.site_id {
                Some(id) => format!("{}(site {id})", v.code),
                None => v.code.to_string(),
            })
            .collect();
        return Err(Error::InvalidInput(format!("instance invalid: {}", list.join(", "))));
    }
    Ok(inst)
}

/// Inverse of `parse_sites_csv`; explicit fields round-trip exactly.
pub fn export_sites_csv(inst: &Instance) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SITES_CSV_HEADER.split(',')).expect("csv header");
    for s in &inst.sites {
        let beds = s.beds.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([
            s.id.to_string(),
            s.name.clone(),
            s.location.lat_deg.to_string(),
            s.location.lon_deg.to_string(),
            s.org_type.as_str().to_string(),
            beds,
            s.q_kg_day.to_string(),
            s.capacity_kg.to_string(),
        ])
        .expect("csv record");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

fn fmt_f(v: f64) -> String {
    format!("{v:.6}")
}

/// Serializes a plan with its audit and operations report canonically:
/// sorted keys, fixed 6-decimal floats, arrays ordered by site id.
pub fn write_plan_json(plan: &SitingPlan, audit: &CostBreakdown, ops: &OpsReport) -> String {
    let mut assignments = plan.assignments.clone();
    assignments.sort_by_key(|a| a.site);
    let mut centers = plan.centers.clone();
    centers.sort_by_key(|c| c.id);

    let mut s = String::new();
    s.push_str("{\n  \"assignments\": [");
    for (i, a) in assignments.iter().enumerate() {
        let flags = if a.exceeds_l { "[\"EXCEEDS_L\"]" } else { "[]" };
        let _ = write!(
            s,
            "{}\n    {{\"center\": {}, \"flags\": {}, \"layer\": {}, \"site\": {}}}",
            if i == 0 { "" } else { "," },
            a.center,
            flags,
            a.layer,
            a.site
        );
    }
    if assignments.is_empty() {
        s.push_str("],\n");
    } else {
        s.push_str("\n  ],\n");
    }

    let _ = writeln!(
        s,
        "  \"audit\": {{\"disposal_cny\": {}, \"disposal_subsidy_cny\": {}, \"fixed_cny\": {}, \"total_cny\": {}, \"transfer_cny\": {}, \"transfer_subsidy_cny\": {}}},",
        fmt_f(audit.disposal_cny),
        fmt_f(audit.disposal_subsidy_cny),
        fmt_f(audit.fixed_cny),
        fmt_f(audit.total_cny),
        fmt_f(audit.transfer_cny),
        fmt_f(audit.transfer_subsidy_cny)
    );

    s.push_str("  \"centers\": [");
    for (i, c) in centers.iter().enumerate() {
        let _ = write!(
            s,
            "{}\n    {{\"id\": {}, \"layer\": {}}}",
            if i == 0 { "" } else { "," },
            c.id,
            c.layer
        );
    }
    if centers.is_empty() {
        s.push_str("],\n");
    } else {
        s.push_str("\n  ],\n");
    }

    let _ = write!(
        s,
        "  \"ops\": {{\"maintenance_cny\": {}, \"operating_sites\": {}, \"reduction_cost_pct\": {}, \"reduction_time_pct\": {}, \"total_waste_kg\": {}, \"transferred_kg\": {}, \"working_time_min\": {}}}\n}}\n",
        fmt_f(ops.maintenance_cny),
        ops.operating_sites,
        fmt_f(ops.reduction_cost_pct),
        fmt_f(ops.reduction_time_pct),
        fmt_f(ops.total_waste_kg),
        fmt_f(ops.transferred_kg),
        fmt_f(ops.working_time_min)
    );
    s
}

#[derive(serde::Deserialize)]
struct AssignmentDoc {
    site: u32,
    center: u32,
    layer: u8,
    #[serde(default)]
    flags: Vec<String>,
}

#[derive(serde::Deserialize)]
struct PlanDoc {
    #[serde(default)]
    centers: Vec<PlanCenter>,
    #[serde(default)]
    assignments: Vec<AssignmentDoc>,
}

/// Reads a plan document back; the audit and ops sections are ignored.
pub fn read_plan_json(text: &str) -> Result<SitingPlan> {
    let doc: PlanDoc = serde_json::from_str(text)?;
    let assignments = doc
        .assignments
        .into_iter()
        .map(|a| PlanAssignment {
            site: a.site,
            center: a.center,
            layer: a.layer,
            exceeds_l: a.flags.iter().any(|f| f == "EXCEEDS_L"),
        })
        .collect();
    Ok(SitingPlan { centers: doc.centers, assignments })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    f_cny: Option<f64>,
    b_cny_kg: Option<f64>,
    t_cny_kg_km: Option<f64>,
    a1_cny_kg: Option<f64>,
    a2_cny_kg_km: Option<f64>,
    l_m: Option<f64>,
}

/// Model parameters JSON; omitted keys keep their defaults.
pub fn parse_params_json(text: &str) -> Result<ModelParams> {
    let doc: ParamsDoc = serde_json::from_str(text)?;
    let d = crate::domain::default_params();
    let params = ModelParams {
        f_cny: doc.f_cny.unwrap_or(d.f_cny),
        b_cny_kg: doc.b_cny_kg.unwrap_or(d.b_cny_kg),
        t_cny_kg_km: doc.t_cny_kg_km.unwrap_or(d.t_cny_kg_km),
        a1_cny_kg: doc.a1_cny_kg.unwrap_or(d.a1_cny_kg),
        a2_cny_kg_km: doc.a2_cny_kg_km.unwrap_or(d.a2_cny_kg_km),
        l_m: doc.l_m.unwrap_or(d.l_m),
    };
    params.validate()?;
    Ok(params)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffsDoc {
    tau0_min: Option<f64>,
    tau1_min_kg: Option<f64>,
    m0_cny: Option<f64>,
}

/// Operations coefficients JSON; omitted keys keep their defaults.
pub fn parse_coeffs_json(text: &str) -> Result<OpsCoefficients> {
    let doc: CoeffsDoc = serde_json::from_str(text)?;
    let d = OpsCoefficients::default();
    Ok(OpsCoefficients {
        tau0_min: doc.tau0_min.unwrap_or(d.tau0_min),
        tau1_min_kg: doc.tau1_min_kg.unwrap_or(d.tau1_min_kg),
        m0_cny: doc.m0_cny.unwrap_or(d.m0_cny),
    })
}
