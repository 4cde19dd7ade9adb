//! SVG rendering of a siting plan: one marker per site, one line per
//! assignment, one color per center, plus a small legend. Output bytes are
//! deterministic for identical input.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::domain::{Instance, SiteId};
use crate::error::Result;
use crate::pipeline::SitingPlan;

const WIDTH: f64 = 1000.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 70.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders an instance and plan as a standalone SVG 1.1 document.
pub fn render_plan_svg(inst: &Instance, plan: &SitingPlan) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // legend
    s.push_str("<g font-family=\"sans-serif\" font-size=\"13\">\n");
    s.push_str("<text x=\"20\" y=\"24\">square = large site, circle = common site, ringed = center; lines are assignments (dashed beyond L)</text>\n");
    s.push_str("</g>\n");

    if !inst.is_empty() {
        let (points, _) = inst.geometry()?;
        let (mut min_x, mut max_x, mut min_y, mut max_y) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &points {
            min_x = min_x.min(p.x_m);
            max_x = max_x.max(p.x_m);
            min_y = min_y.min(p.y_m);
            max_y = max_y.max(p.y_m);
        }
        let span_x = (max_x - min_x).max(1.0);
        let span_y = (max_y - min_y).max(1.0);
        let scale = ((WIDTH - 2.0 * MARGIN) / span_x).min((HEIGHT - 2.0 * MARGIN) / span_y);
        let to_screen = |x_m: f64, y_m: f64| {
            (
                MARGIN + (x_m - min_x) * scale,
                HEIGHT - MARGIN - (y_m - min_y) * scale, // north up
            )
        };

        let index = inst.index_by_id();
        let color_of: HashMap<SiteId, &str> = plan
            .centers
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id, PALETTE[i % PALETTE.len()]))
            .collect();

        // assignment lines under the markers
        s.push_str("<g stroke-width=\"1\">\n");
        for a in &plan.assignments {
            let (Some(&si), Some(&ci)) = (index.get(&a.site), index.get(&a.center)) else {
                continue;
            };
            let (x1, y1) = to_screen(points[si].x_m, points[si].y_m);
            let (x2, y2) = to_screen(points[ci].x_m, points[ci].y_m);
            let color = color_of.get(&a.center).copied().unwrap_or("#999999");
            let dash = if a.exceeds_l { " stroke-dasharray=\"4 3\"" } else { "" };
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\"{dash}/>",
                fmt(x1),
                fmt(y1),
                fmt(x2),
                fmt(y2)
            );
        }
        s.push_str("</g>\n");

        s.push_str("<g stroke=\"black\" stroke-width=\"0.5\">\n");
        for site in &inst.sites {
            let p = points[index[&site.id]];
            let (x, y) = to_screen(p.x_m, p.y_m);
            let is_center = color_of.contains_key(&site.id);
            let fill = color_of
                .get(&site.id)
                .or_else(|| {
                    plan.assignments
                        .iter()
                        .find(|a| a.site == site.id)
                        .and_then(|a| color_of.get(&a.center))
                })
                .copied()
                .unwrap_or("#bbbbbb");
            if site.is_large() {
                let r = if is_center { 7.0 } else { 4.0 };
                let _ = writeln!(
                    s,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>",
                    fmt(x - r),
                    fmt(y - r),
                    fmt(2.0 * r),
                    fmt(2.0 * r)
                );
            } else {
                let r = if is_center { 6.0 } else { 3.5 };
                let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>", fmt(x), fmt(y));
            }
            if is_center {
                let _ = writeln!(
                    s,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"10\" fill=\"none\" stroke=\"black\"/>",
                    fmt(x),
                    fmt(y)
                );
            }
        }
        s.push_str("</g>\n");
    }

    s.push_str("</svg>\n");
    Ok(s)
}
