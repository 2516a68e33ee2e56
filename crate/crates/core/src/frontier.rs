//! Frontier detection: gaps between obstacle clusters on a scan.
//!
//! Max-range beams are dropped, the remaining hits are clustered with DBSCAN, and each
//! pair of angularly adjacent clusters contributes a candidate at the midpoint of their
//! facing side points.

use serde::{Deserialize, Serialize};

use crate::geometry::{ccw_distance, cart_to_polar, polar_to_cart, wrap_angle, Point2, PolarCoord, Scan};
use crate::scalar::Real;
use crate::starshape::StarshapedRegion;

/// Candidates are kept strictly inside the region by this fraction of `Φ`.
pub const INTERIOR_FRACTION: f64 = 0.95;
/// Radius of open-space candidates as a fraction of the sensor range.
pub const OPEN_SPACE_FRACTION: f64 = 0.8;
/// Candidates keep this many robot diameters from clustered obstacle points.
pub const CLEARANCE_DIAMETERS: f64 = 1.0;
/// Gaps wider than this many radians are covered by several candidates.
pub const MAX_GAP_ARC: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct FrontierParams<T> {
    pub eps: T,
    pub min_pts: usize,
}

impl<T: Real> Default for FrontierParams<T> {
    fn default() -> Self {
        Self {
            eps: T::lit(0.3),
            min_pts: 3,
        }
    }
}

/// DBSCAN labels: `Some(cluster)` or `None` for noise.
///
/// Neighbourhoods are closed balls of radius `eps` that include the query point. Clusters
/// are numbered in discovery order (by lowest-index core point), and a border point
/// reachable from several clusters joins the one discovered first.
pub fn dbscan<T: Real>(points: &[Point2<T>], eps: T, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let eps2 = eps * eps;
    let neighbours = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| (points[j] - points[i]).norm_squared() <= eps2)
            .collect()
    };
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut next = 0;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let seeds = neighbours(i);
        if seeds.len() < min_pts {
            continue;
        }
        let cluster = next;
        next += 1;
        labels[i] = Some(cluster);
        let mut queue: Vec<usize> = seeds;
        let mut head = 0;
        while head < queue.len() {
            let j = queue[head];
            head += 1;
            if labels[j].is_none() {
                labels[j] = Some(cluster);
            }
            if visited[j] {
                continue;
            }
            visited[j] = true;
            let nj = neighbours(j);
            if nj.len() >= min_pts {
                queue.extend(nj.into_iter().filter(|&k| !visited[k] || labels[k].is_none()));
            }
        }
    }
    labels
}

/// Obstacle points grouped by DBSCAN, in polar form about the scan origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster<T> {
    pub origin: Point2<T>,
    pub members: Vec<PolarCoord<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidePointPair<T> {
    pub theta_min: T,
    pub theta_max: T,
    pub dist_at_min: T,
    pub dist_at_max: T,
}

impl<T: Real> Cluster<T> {
    /// Extreme angular members. The cluster's arc is the complement of the largest gap
    /// between consecutive member angles, so clusters straddling `±π` are handled.
    pub fn side_points(&self) -> SidePointPair<T> {
        let mut m = self.members.clone();
        m.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap_or(std::cmp::Ordering::Equal));
        let k = m.len();
        // gap after member i going counter-clockwise
        let mut best = (k - 1, ccw_distance(m[k - 1].theta, m[0].theta));
        if k == 1 {
            best.1 = T::TAU();
        }
        for i in 0..k.saturating_sub(1) {
            let g = m[i + 1].theta - m[i].theta;
            if g > best.1 {
                best = (i, g);
            }
        }
        let max = m[best.0];
        let min = m[(best.0 + 1) % k];
        SidePointPair {
            theta_min: min.theta,
            theta_max: max.theta,
            dist_at_min: min.dist,
            dist_at_max: max.dist,
        }
    }

    /// Angular extent counter-clockwise from the min to the max side point.
    pub fn arc(&self) -> T {
        let s = self.side_points();
        ccw_distance(s.theta_min, s.theta_max)
    }
}

/// Clusters the scan's non-max-range hits; noise is discarded and clusters are sorted by
/// their minimum side angle.
pub fn cluster_scan<T: Real>(scan: &Scan<T>, eps: T, min_pts: usize) -> Vec<Cluster<T>> {
    let origin = scan.origin();
    let hits: Vec<(Point2<T>, PolarCoord<T>)> = scan
        .beams()
        .iter()
        .filter(|b| !b.at_max_range)
        .map(|b| (scan.endpoint(b), PolarCoord::new(b.angle, b.range)))
        .collect();
    let points: Vec<Point2<T>> = hits.iter().map(|h| h.0).collect();
    let labels = dbscan(&points, eps, min_pts.max(1));
    let n_clusters = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut clusters: Vec<Cluster<T>> = (0..n_clusters)
        .map(|_| Cluster {
            origin,
            members: Vec::new(),
        })
        .collect();
    for (label, (_, pc)) in labels.iter().zip(&hits) {
        if let Some(c) = label {
            clusters[*c].members.push(*pc);
        }
    }
    clusters.sort_by(|a, b| {
        let (sa, sb) = (a.side_points(), b.side_points());
        sa.theta_min
            .partial_cmp(&sb.theta_min)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(sa.theta_max.partial_cmp(&sb.theta_max).unwrap_or(std::cmp::Ordering::Equal))
    });
    clusters
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierCandidate<T> {
    pub position: Point2<T>,
    pub theta_f: T,
    pub gap_width: T,
}

/// Pulls `p` toward the region centre so it sits within `INTERIOR_FRACTION · Φ`.
fn clamp_inside<T: Real>(region: &StarshapedRegion<T>, p: Point2<T>) -> Point2<T> {
    match cart_to_polar(region.p_ref, p) {
        Ok(pc) => {
            let limit = region.eval_radius(pc.theta) * T::lit(INTERIOR_FRACTION);
            if pc.dist > limit {
                polar_to_cart(region.p_ref, PolarCoord::new(pc.theta, limit))
            } else {
                p
            }
        }
        Err(_) => p,
    }
}

fn open_candidate<T: Real>(region: &StarshapedRegion<T>, theta: T, max_range: T, gap_width: T) -> FrontierCandidate<T> {
    let r = (max_range * T::lit(OPEN_SPACE_FRACTION)).min(region.eval_radius(theta) * T::lit(INTERIOR_FRACTION));
    FrontierCandidate {
        position: polar_to_cart(region.p_ref, PolarCoord::new(theta, r)),
        theta_f: wrap_angle(theta),
        gap_width,
    }
}

/// Frontier candidates between angularly adjacent clusters (cyclically, including the
/// pair across `±π`). Gaps narrower than the robot's diameter are dropped.
///
/// With no clusters at all, four cardinal candidates at `0.8 · max_range` are returned.
/// Gaps spanning more than a quarter turn get one open-space candidate per quarter-turn
/// sector, since a single chord midpoint would fall near the sensor. Every candidate is
/// then pulled toward the reference point to keep a robot diameter from obstacle points.
pub fn extract_frontiers<T: Real>(
    clusters: &[Cluster<T>],
    region: &StarshapedRegion<T>,
    robot_radius: T,
    max_range: T,
) -> Vec<FrontierCandidate<T>> {
    let mut out = Vec::new();
    let origin = clusters.first().map_or(region.p_ref, |c| c.origin);
    if clusters.is_empty() {
        for k in [0.0, 0.5, -1.0, -0.5] {
            let theta = T::PI() * T::lit(k);
            out.push(open_candidate(region, theta, max_range, max_range * T::lit(2.0)));
        }
        sort_candidates(&mut out);
        return out;
    }
    let sides: Vec<SidePointPair<T>> = clusters.iter().map(Cluster::side_points).collect();
    let k = sides.len();
    for i in 0..k {
        let a = &sides[i];
        let b = &sides[(i + 1) % k];
        if k >= 2 {
            // b starts inside a's arc: the clusters overlap in angle, no gap between them
            let a_arc = ccw_distance(a.theta_min, a.theta_max);
            if ccw_distance(a.theta_min, b.theta_min) <= a_arc {
                continue;
            }
        }
        let arc = ccw_distance(a.theta_max, b.theta_min);
        let pa = polar_to_cart(origin, PolarCoord::new(a.theta_max, a.dist_at_max));
        let pb = polar_to_cart(origin, PolarCoord::new(b.theta_min, b.dist_at_min));
        let gap_width = if arc <= T::PI() {
            pa.distance(pb)
        } else {
            a.dist_at_max + b.dist_at_min
        };
        if gap_width < robot_radius * T::lit(2.0) {
            continue;
        }
        if arc > T::lit(MAX_GAP_ARC) {
            let parts = (arc / T::lit(MAX_GAP_ARC)).ceil().to_usize().unwrap_or(1).max(1);
            let step = arc / T::from_usize_lossy(parts);
            for j in 0..parts {
                let theta = a.theta_max + step * (T::from_usize_lossy(j) + T::lit(0.5));
                out.push(open_candidate(region, theta, max_range, gap_width));
            }
        } else {
            out.push(FrontierCandidate {
                position: clamp_inside(region, pa.midpoint(pb)),
                theta_f: wrap_angle(a.theta_max + arc * T::lit(0.5)),
                gap_width,
            });
        }
    }
    let points: Vec<Point2<T>> = clusters
        .iter()
        .flat_map(|c| c.members.iter().map(move |m| polar_to_cart(c.origin, *m)))
        .collect();
    let clearance = robot_radius * T::lit(CLEARANCE_DIAMETERS * 2.0);
    let mut out: Vec<FrontierCandidate<T>> = out.into_iter().filter_map(|c| keep_clear(region, &points, c, clearance)).collect();
    sort_candidates(&mut out);
    out
}

/// Pulls a candidate toward the reference point until it is at least `clearance` away from
/// every clustered obstacle point. Candidates that would have to give up more than half
/// their radius are dropped.
fn keep_clear<T: Real>(
    region: &StarshapedRegion<T>,
    points: &[Point2<T>],
    cand: FrontierCandidate<T>,
    clearance: T,
) -> Option<FrontierCandidate<T>> {
    let nearest = |p: Point2<T>| points.iter().map(|q| q.distance(p)).fold(T::infinity(), T::min);
    let Ok(pc) = cart_to_polar(region.p_ref, cand.position) else {
        return Some(cand);
    };
    let floor = pc.dist * T::lit(0.5);
    let mut r = pc.dist;
    let mut p = cand.position;
    for _ in 0..64 {
        let d = nearest(p);
        if d >= clearance {
            return Some(FrontierCandidate { position: p, ..cand });
        }
        r = r - (clearance - d).max(T::lit(0.02));
        if r < floor {
            return None;
        }
        p = polar_to_cart(region.p_ref, PolarCoord::new(pc.theta, r));
    }
    None
}

fn sort_candidates<T: Real>(c: &mut [FrontierCandidate<T>]) {
    c.sort_by(|a, b| a.theta_f.partial_cmp(&b.theta_f).unwrap_or(std::cmp::Ordering::Equal));
}
