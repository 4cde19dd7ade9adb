//! Seeded K-means over planar coordinates, elbow K selection, and snapping
//! of centroids to member sites.
//!
//! Clustering minimizes the usual squared-L2 objective (WCSS); snapping uses
//! L1 to stay consistent with the transport metric. Everything is driven by
//! an explicit seed so results are reproducible across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::SiteId;
use crate::error::{Error, Result};
use crate::geo::{l1_distance, PlanarPoint};

const CONVERGENCE_TOL_M: f64 = 1e-6;
const MAX_ITERATIONS: usize = 300;
const RESTARTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub k: usize,
    /// Point index -> cluster index, surjective onto 0..k.
    pub labels: Vec<usize>,
    /// Mean of the member points of each cluster.
    pub centroids: Vec<PlanarPoint>,
    /// Within-cluster sum of squared L2 distances.
    pub wcss: f64,
}

#[inline]
fn sq_dist(a: PlanarPoint, b: PlanarPoint) -> f64 {
    let dx = a.x_m - b.x_m;
    let dy = a.y_m - b.y_m;
    dx * dx + dy * dy
}

fn assign_labels(points: &[PlanarPoint], centroids: &[PlanarPoint]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            let mut best = 0usize;
            let mut best_d = sq_dist(*p, centroids[0]);
            for (c, ctr) in centroids.iter().enumerate().skip(1) {
                let d = sq_dist(*p, *ctr);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Recomputes centroids as member means; empty clusters are re-seeded to the
/// point currently farthest from its own centroid (ties to the lowest index).
fn update_centroids(
    points: &[PlanarPoint],
    labels: &[usize],
    old: &[PlanarPoint],
) -> Vec<PlanarPoint> {
    let k = old.len();
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); k];
    for (p, &l) in points.iter().zip(labels) {
        sums[l].0 += p.x_m;
        sums[l].1 += p.y_m;
        sums[l].2 += 1;
    }
    let mut centroids: Vec<PlanarPoint> = Vec::with_capacity(k);
    for (c, (sx, sy, n)) in sums.iter().enumerate() {
        if *n == 0 {
            let far = (0..points.len())
                .max_by(|&a, &b| {
                    sq_dist(points[a], old[labels[a]])
                        .partial_cmp(&sq_dist(points[b], old[labels[b]]))
                        .unwrap()
                        .then(b.cmp(&a)) // prefer the lower index on ties
                })
                .unwrap();
            centroids.push(points[far]);
        } else {
            centroids.push(PlanarPoint::new(sx / *n as f64, sy / *n as f64));
        }
        let _ = c;
    }
    centroids
}

fn lloyd(points: &[PlanarPoint], mut centroids: Vec<PlanarPoint>) -> Clustering {
    let k = centroids.len();
    let mut labels = assign_labels(points, &centroids);
    for _ in 0..MAX_ITERATIONS {
        let next = update_centroids(points, &labels, &centroids);
        let shift = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| sq_dist(*a, *b).sqrt())
            .fold(0.0f64, f64::max);
        centroids = next;
        labels = assign_labels(points, &centroids);
        if shift < CONVERGENCE_TOL_M {
            break;
        }
    }
    // Final sync so centroids are exact member means.
    centroids = update_centroids(points, &labels, &centroids);
    labels = assign_labels(points, &centroids);
    centroids = update_centroids(points, &labels, &centroids);
    let wcss = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| sq_dist(*p, centroids[l]))
        .sum();
    Clustering { k, labels, centroids, wcss }
}

/// Squared-distance-weighted seeding in the k-means++ style.
fn seed_centroids(points: &[PlanarPoint], k: usize, rng: &mut ChaCha8Rng) -> Vec<PlanarPoint> {
    let n = points.len();
    let mut chosen: Vec<usize> = vec![rng.gen_range(0..n)];
    while chosen.len() < k {
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                chosen
                    .iter()
                    .map(|&c| sq_dist(points[i], points[c]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, w) in weights.iter().enumerate() {
                if target < *w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            // all remaining points coincide with a chosen center
            (0..n).find(|i| !chosen.contains(i)).unwrap_or(0)
        };
        chosen.push(next);
    }
    chosen.into_iter().map(|i| points[i]).collect()
}

/// One seeded K-means run: k-means++-style initialization, Lloyd iterations
/// until centroids move less than 1e-6 m or 300 iterations.
pub fn kmeans(points: &[PlanarPoint], k: usize, seed: u64) -> Result<Clustering> {
    if points.is_empty() {
        return Err(Error::InvalidInput("kmeans needs at least one point".into()));
    }
    if k < 1 || k > points.len() {
        return Err(Error::InvalidInput(format!(
            "k = {k} out of range 1..={}",
            points.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = seed_centroids(points, k, &mut rng);
    Ok(lloyd(points, init))
}

fn sub_seed(seed: u64, k: usize, restart: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((k as u64) << 32)
        .wrapping_add(restart as u64)
}

fn best_clustering(points: &[PlanarPoint], k: usize, seed: u64, prev: Option<&Clustering>) -> Clustering {
    let mut best: Option<Clustering> = None;
    // Cascade: previous best centroids plus the worst-served point. The
    // initial assignment can only improve on WCSS(k-1), which keeps the
    // best-of table non-increasing in k.
    if let Some(p) = prev {
        let far = (0..points.len())
            .max_by(|&a, &b| {
                sq_dist(points[a], p.centroids[p.labels[a]])
                    .partial_cmp(&sq_dist(points[b], p.centroids[p.labels[b]]))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        let mut init = p.centroids.clone();
        init.push(points[far]);
        if init.len() == k {
            best = Some(lloyd(points, init));
        }
    }
    for r in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, k, r));
        let c = lloyd(points, seed_centroids(points, k, &mut rng));
        if best.as_ref().is_none_or(|b| c.wcss < b.wcss) {
            best = Some(c);
        }
    }
    best.unwrap()
}

/// Best-of-restarts WCSS for k = 1..=min(k_max, n); non-increasing in k.
pub fn wcss_table(points: &[PlanarPoint], k_max: usize, seed: u64) -> Result<Vec<f64>> {
    if points.len() < 3 {
        return Err(Error::InvalidInput("elbow selection needs at least 3 points".into()));
    }
    if k_max < 2 {
        return Err(Error::InvalidInput("k_max must be at least 2".into()));
    }
    let top = k_max.min(points.len());
    let mut table = Vec::with_capacity(top);
    let mut prev: Option<Clustering> = None;
    for k in 1..=top {
        let c = best_clustering(points, k, seed, prev.as_ref());
        table.push(c.wcss);
        prev = Some(c);
    }
    Ok(table)
}

/// Elbow selection: the interior k maximizing the second difference
/// WCSS(k-1) - 2 WCSS(k) + WCSS(k+1); ties go to the smaller k.
pub fn choose_k_elbow(points: &[PlanarPoint], k_max: usize, seed: u64) -> Result<usize> {
    let table = wcss_table(points, k_max, seed)?;
    let top = table.len();
    if top < 3 {
        return Ok(top);
    }
    let mut best_k = 2;
    let mut best_curv = f64::NEG_INFINITY;
    for k in 2..top {
        let curv = table[k - 2] - 2.0 * table[k - 1] + table[k];
        if curv > best_curv {
            best_curv = curv;
            best_k = k;
        }
    }
    Ok(best_k)
}

/// Replaces each centroid by the member site with minimal L1 distance to it
/// (ties to the lowest id). Returned ids are indexed by cluster.
pub fn snap_to_sites(
    clustering: &Clustering,
    points: &[PlanarPoint],
    site_ids: &[SiteId],
) -> Result<Vec<SiteId>> {
    if points.len() != clustering.labels.len() || site_ids.len() != points.len() {
        return Err(Error::InvalidInput("points/site_ids not aligned with clustering".into()));
    }
    let mut out = Vec::with_capacity(clustering.k);
    for c in 0..clustering.k {
        let mut best: Option<(f64, SiteId)> = None;
        for (i, &l) in clustering.labels.iter().enumerate() {
            if l != c {
                continue;
            }
            let d = l1_distance(points[i], clustering.centroids[c]);
            let better = match best {
                None => true,
                Some((bd, bid)) => d < bd || (d == bd && site_ids[i] < bid),
            };
            if better {
                best = Some((d, site_ids[i]));
            }
        }
        match best {
            Some((_, id)) => out.push(id),
            None => {
                return Err(Error::Contract(format!("cluster {c} has no members")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> Vec<PlanarPoint> {
        vec![
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(0.0, 1.0),
            PlanarPoint::new(10.0, 10.0),
            PlanarPoint::new(10.0, 11.0),
        ]
    }

    #[test]
    fn two_blob_optimum_for_all_seeds() {
        for seed in 0..10u64 {
            let c = kmeans(&two_blobs(), 2, seed).unwrap();
            assert_eq!(c.labels[0], c.labels[1]);
            assert_eq!(c.labels[2], c.labels[3]);
            assert_ne!(c.labels[0], c.labels[2]);
            let mut centroids = c.centroids.clone();
            centroids.sort_by(|a, b| a.x_m.partial_cmp(&b.x_m).unwrap());
            assert_eq!(centroids[0], PlanarPoint::new(0.0, 0.5));
            assert_eq!(centroids[1], PlanarPoint::new(10.0, 10.5));
            assert!((c.wcss - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k_one_is_the_mean() {
        let pts = two_blobs();
        let c = kmeans(&pts, 1, 0).unwrap();
        assert_eq!(c.centroids[0], PlanarPoint::new(5.0, 5.5));
    }

    #[test]
    fn k_equals_n_gives_zero_wcss() {
        let pts = two_blobs();
        let c = kmeans(&pts, 4, 3).unwrap();
        assert_eq!(c.wcss, 0.0);
        let mut seen: Vec<usize> = c.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn k_out_of_range_rejected() {
        assert!(kmeans(&two_blobs(), 0, 0).is_err());
        assert!(kmeans(&two_blobs(), 5, 0).is_err());
        assert!(kmeans(&[], 1, 0).is_err());
    }

    fn blobs(centers: &[(f64, f64)], per: usize) -> Vec<PlanarPoint> {
        let mut pts = Vec::new();
        for (cx, cy) in centers {
            for i in 0..per {
                let off = i as f64 * 0.3;
                pts.push(PlanarPoint::new(cx + off, cy - off));
            }
        }
        pts
    }

    #[test]
    fn elbow_finds_two_blobs() {
        let pts = blobs(&[(0.0, 0.0), (100.0, 100.0)], 5);
        assert_eq!(choose_k_elbow(&pts, 6, 1).unwrap(), 2);
    }

    #[test]
    fn elbow_finds_three_blobs() {
        // roughly equilateral blob layout so the 2->3 drop dominates
        let pts = blobs(&[(0.0, 0.0), (200.0, 0.0), (100.0, 173.2)], 5);
        assert_eq!(choose_k_elbow(&pts, 6, 1).unwrap(), 3);
    }

    #[test]
    fn elbow_on_structureless_points_stays_in_range() {
        let pts: Vec<PlanarPoint> = (0..9).map(|i| PlanarPoint::new(i as f64 * 10.0, 0.0)).collect();
        let k = choose_k_elbow(&pts, 5, 0).unwrap();
        assert!((1..=5).contains(&k));
    }

    #[test]
    fn wcss_table_non_increasing() {
        let pts = blobs(&[(0.0, 0.0), (50.0, 80.0), (200.0, 10.0)], 4);
        for seed in 0..5u64 {
            let table = wcss_table(&pts, 8, seed).unwrap();
            for w in table.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "table not monotone: {table:?}");
            }
        }
    }

    #[test]
    fn wcss_non_increasing_within_lloyd_run() {
        let pts = blobs(&[(0.0, 0.0), (30.0, 40.0)], 6);
        // run lloyd step by step from a deliberately bad init
        let mut centroids = vec![pts[0], pts[1]];
        let mut prev = f64::INFINITY;
        for _ in 0..20 {
            let labels = assign_labels(&pts, &centroids);
            let wcss: f64 = pts.iter().zip(&labels).map(|(p, &l)| sq_dist(*p, centroids[l])).sum();
            assert!(wcss <= prev + 1e-9);
            prev = wcss;
            centroids = update_centroids(&pts, &labels, &centroids);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let pts = blobs(&[(0.0, 0.0), (100.0, 0.0), (0.0, 100.0)], 5);
        let a = kmeans(&pts, 3, 42).unwrap();
        let b = kmeans(&pts, 3, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn snap_picks_nearest_member() {
        // members at y = 0, 1, 5; centroid (0, 2) -> distances 2, 1, 3
        let pts = vec![
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(0.0, 1.0),
            PlanarPoint::new(0.0, 5.0),
        ];
        let c = Clustering {
            k: 1,
            labels: vec![0, 0, 0],
            centroids: vec![PlanarPoint::new(0.0, 2.0)],
            wcss: 0.0,
        };
        assert_eq!(snap_to_sites(&c, &pts, &[10, 11, 12]).unwrap(), vec![11]);
    }

    #[test]
    fn snap_singleton_and_tie_break() {
        let pts = vec![PlanarPoint::new(-1.0, 0.0), PlanarPoint::new(1.0, 0.0)];
        let c = Clustering {
            k: 1,
            labels: vec![0, 0],
            centroids: vec![PlanarPoint::new(0.0, 0.0)],
            wcss: 2.0,
        };
        // symmetric about the centroid: lower id wins
        assert_eq!(snap_to_sites(&c, &pts, &[7, 3]).unwrap(), vec![3]);

        let single = Clustering {
            k: 1,
            labels: vec![0],
            centroids: vec![PlanarPoint::new(5.0, 5.0)],
            wcss: 0.0,
        };
        assert_eq!(snap_to_sites(&single, &[PlanarPoint::new(0.0, 0.0)], &[9]).unwrap(), vec![9]);
    }

    #[test]
    fn snapped_center_is_always_a_member() {
        let pts = blobs(&[(0.0, 0.0), (100.0, 100.0), (-50.0, 80.0)], 4);
        let ids: Vec<SiteId> = (0..pts.len() as u32).collect();
        for seed in 0..5u64 {
            let c = kmeans(&pts, 3, seed).unwrap();
            let snapped = snap_to_sites(&c, &pts, &ids).unwrap();
            for (cluster, id) in snapped.iter().enumerate() {
                assert_eq!(c.labels[*id as usize], cluster);
            }
        }
    }

    #[test]
    fn empty_cluster_in_snap_is_contract_violation() {
        let c = Clustering {
            k: 2,
            labels: vec![0],
            centroids: vec![PlanarPoint::new(0.0, 0.0), PlanarPoint::new(1.0, 1.0)],
            wcss: 0.0,
        };
        assert!(matches!(
            snap_to_sites(&c, &[PlanarPoint::new(0.0, 0.0)], &[0]),
            Err(Error::Contract(_))
        ));
    }
}
