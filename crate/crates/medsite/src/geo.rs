//! Planar projection and L1 (Manhattan) distances.
//!
//! All downstream modules work in a local planar frame, in meters. Geographic
//! coordinates are projected equirectangularly about an origin (normally the
//! instance centroid); at city scale the distortion is far below the coverage
//! threshold granularity.

use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A WGS-84 geographic coordinate in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeoPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Self {
        Self { lat_deg, lon_deg }
    }

    pub fn in_range(&self) -> bool {
        self.lat_deg.is_finite()
            && self.lon_deg.is_finite()
            && (-90.0..=90.0).contains(&self.lat_deg)
            && (-180.0..=180.0).contains(&self.lon_deg)
    }
}

/// A point in the local planar frame, meters east/north of the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x_m: f64,
    pub y_m: f64,
}

impl PlanarPoint {
    pub fn new(x_m: f64, y_m: f64) -> Self {
        Self { x_m, y_m }
    }
}

/// Equirectangular projection of `p` about `origin`.
pub fn project(p: GeoPoint, origin: GeoPoint) -> Result<PlanarPoint> {
    if !p.in_range() || !origin.in_range() {
        return Err(Error::InvalidInput(format!(
            "coordinate out of range: ({}, {}) about ({}, {})",
            p.lat_deg, p.lon_deg, origin.lat_deg, origin.lon_deg
        )));
    }
    let y = EARTH_RADIUS_M * (p.lat_deg - origin.lat_deg).to_radians();
    let x = EARTH_RADIUS_M * (p.lon_deg - origin.lon_deg).to_radians() * origin.lat_deg.to_radians().cos();
    Ok(PlanarPoint::new(x, y))
}

/// Manhattan distance between two planar points, in meters.
pub fn l1_distance(a: PlanarPoint, b: PlanarPoint) -> f64 {
    (a.x_m - b.x_m).abs() + (a.y_m - b.y_m).abs()
}

/// Dense symmetric table of pairwise L1 distances, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Builds the full pairwise L1 distance matrix.
pub fn build_distance_matrix(points: &[PlanarPoint]) -> Result<DistanceMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidInput("distance matrix needs at least one point".into()));
    }
    let n = points.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = l1_distance(points[i], points[j]);
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    Ok(DistanceMatrix { n, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ORIGIN: GeoPoint = GeoPoint { lat_deg: 38.9, lon_deg: 121.6 };

    #[test]
    fn origin_projects_to_zero() {
        let p = project(ORIGIN, ORIGIN).unwrap();
        assert_eq!(p.x_m, 0.0);
        assert_eq!(p.y_m, 0.0);
    }

    #[test]
    fn one_millidegree_north() {
        // y = R * 0.001 * pi/180 ~= 111.19 m
        let p = project(GeoPoint::new(38.901, 121.6), ORIGIN).unwrap();
        assert!((p.y_m - 111.19).abs() < 0.01, "y = {}", p.y_m);
        assert!(p.x_m.abs() < 1e-9);
    }

    #[test]
    fn one_millidegree_east() {
        // x = 111.19 * cos(38.9 deg) ~= 86.53 m
        let p = project(GeoPoint::new(38.9, 121.601), ORIGIN).unwrap();
        assert!((p.x_m - 86.53).abs() < 0.01, "x = {}", p.x_m);
        assert!(p.y_m.abs() < 1e-9);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(project(GeoPoint::new(91.0, 0.0), ORIGIN).is_err());
        assert!(project(GeoPoint::new(0.0, 181.0), ORIGIN).is_err());
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(PlanarPoint::new(0.0, 0.0), PlanarPoint::new(0.0, 0.0)), 0.0);
        assert_eq!(l1_distance(PlanarPoint::new(0.0, 0.0), PlanarPoint::new(300.0, 400.0)), 700.0);
        assert_eq!(
            l1_distance(PlanarPoint::new(-100.0, 50.0), PlanarPoint::new(100.0, -50.0)),
            300.0
        );
    }

    #[test]
    fn matrix_examples() {
        let m = build_distance_matrix(&[PlanarPoint::new(0.0, 0.0)]).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.get(0, 0), 0.0);

        let m = build_distance_matrix(&[PlanarPoint::new(0.0, 0.0), PlanarPoint::new(300.0, 400.0)]).unwrap();
        assert_eq!(m.get(0, 1), 700.0);
        assert_eq!(m.get(1, 0), 700.0);

        assert!(build_distance_matrix(&[]).is_err());
    }

    fn planar_points(max_len: usize) -> impl Strategy<Value = Vec<PlanarPoint>> {
        prop::collection::vec((-1e4..1e4f64, -1e4..1e4f64), 1..max_len)
            .prop_map(|v| v.into_iter().map(|(x, y)| PlanarPoint::new(x, y)).collect())
    }

    proptest! {
        #[test]
        fn matrix_matches_pairwise_calls(pts in planar_points(8)) {
            let m = build_distance_matrix(&pts).unwrap();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    prop_assert_eq!(m.get(i, j), l1_distance(pts[i], pts[j]));
                }
            }
        }

        #[test]
        fn triangle_inequality(pts in planar_points(10)) {
            let m = build_distance_matrix(&pts).unwrap();
            let n = pts.len();
            for i in 0..n {
                prop_assert_eq!(m.get(i, i), 0.0);
                for j in 0..n {
                    prop_assert_eq!(m.get(i, j), m.get(j, i));
                    prop_assert!(m.get(i, j) >= 0.0);
                    for k in 0..n {
                        prop_assert!(m.get(i, j) <= m.get(i, k) + m.get(k, j) + 1e-9);
                    }
                }
            }
        }

        #[test]
        fn projection_mirror_antisymmetry(dlat in -0.01..0.01f64, dlon in -0.01..0.01f64) {
            let plus = project(GeoPoint::new(38.9 + dlat, 121.6 + dlon), ORIGIN).unwrap();
            let minus = project(GeoPoint::new(38.9 - dlat, 121.6 - dlon), ORIGIN).unwrap();
            prop_assert!((plus.x_m + minus.x_m).abs() < 1e-9);
            prop_assert!((plus.y_m + minus.y_m).abs() < 1e-9);
        }
    }
}
