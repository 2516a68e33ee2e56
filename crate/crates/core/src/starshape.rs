//! Starshaped free-space regions with a piecewise polynomial radial boundary `Φ(θ)`.
//!
//! A region is described in polar coordinates about its reference point, so any fit
//! (however inaccurate) yields a set that is starshaped about that point. Fitting splits
//! the circle adaptively where the scan's radial rate of change is large, then fits each
//! segment by ordinary least squares.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cart_to_polar, wrap_angle, Point2, Scan};
use crate::scalar::Real;

/// Radii are clamped below by this value during evaluation so `Γ` stays finite.
pub const MIN_RADIUS: f64 = 1e-3;

/// Lower bound on the automatically chosen rate threshold (m/rad); stops a perfectly
/// constant scan from splitting on rounding noise.
pub const MIN_RATE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarshapeError {
    #[error("too few points to fit: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("least-squares system is rank deficient")]
    DegenerateFit,
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct RegionId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct FitConfig<T> {
    /// Polynomial order `N` of each segment.
    pub order: usize,
    /// Breakpoint threshold on `|Δd/Δθ|`; `None` uses three times the scan's median rate.
    pub rate_threshold: Option<T>,
    pub max_segment_span: T,
    pub min_points_per_segment: usize,
}

impl<T: Real> Default for FitConfig<T> {
    fn default() -> Self {
        Self::with_order(3)
    }
}

impl<T: Real> FitConfig<T> {
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            rate_threshold: None,
            max_segment_span: T::FRAC_PI_4(),
            min_points_per_segment: order + 2,
        }
    }

    pub fn validate(&self) -> Result<(), StarshapeError> {
        if self.order < 1 {
            return Err(StarshapeError::InvalidConfig("order must be at least 1"));
        }
        if let Some(t) = self.rate_threshold {
            if !(t > T::zero()) {
                return Err(StarshapeError::InvalidConfig("rate_threshold must be positive"));
            }
        }
        if !(self.max_segment_span > T::zero()) {
            return Err(StarshapeError::InvalidConfig("max_segment_span must be positive"));
        }
        if self.min_points_per_segment < self.order + 1 {
            return Err(StarshapeError::InvalidConfig("min_points_per_segment must be at least order + 1"));
        }
        Ok(())
    }
}

/// One polynomial piece `φ(θ) = Σ aᵢ uⁱ` with `u = (θ - shift) / scale`, valid on
/// `(theta_lo, theta_hi]`.
///
/// Hand-built segments use `shift = 0, scale = 1`, i.e. a polynomial in `θ` itself.
/// Fitted segments use the segment's lower bound and width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolySegment<T> {
    pub coeffs: Vec<T>,
    pub theta_lo: T,
    pub theta_hi: T,
    pub shift: T,
    pub scale: T,
}

impl<T: Real> PolySegment<T> {
    pub fn new(coeffs: Vec<T>, theta_lo: T, theta_hi: T) -> Self {
        Self {
            coeffs,
            theta_lo,
            theta_hi,
            shift: T::zero(),
            scale: T::one(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn local(&self, theta: T) -> T {
        (theta - self.shift) / self.scale
    }

    pub fn eval(&self, theta: T) -> T {
        let u = self.local(theta);
        self.coeffs.iter().rev().fold(T::zero(), |acc, &a| acc * u + a)
    }

    pub fn eval_deriv(&self, theta: T) -> T {
        let u = self.local(theta);
        let mut acc = T::zero();
        for (i, &a) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * u + a * T::from_usize_lossy(i);
        }
        acc / self.scale
    }
}

/// Segments tiling `[-π, π)`; the first segment is closed at `-π`, every other one is
/// lower-open and upper-closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PolySegment<T>>", into = "Vec<PolySegment<T>>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct PiecewiseBoundary<T> {
    segments: Vec<PolySegment<T>>,
    breakpoints: Vec<T>,
}

impl<T: Real> TryFrom<Vec<PolySegment<T>>> for PiecewiseBoundary<T> {
    type Error = StarshapeError;
    fn try_from(segments: Vec<PolySegment<T>>) -> Result<Self, Self::Error> {
        Self::new(segments)
    }
}

impl<T: Real> From<PiecewiseBoundary<T>> for Vec<PolySegment<T>> {
    fn from(b: PiecewiseBoundary<T>) -> Self {
        b.segments
    }
}

impl<T: Real> PiecewiseBoundary<T> {
    pub fn new(segments: Vec<PolySegment<T>>) -> Result<Self, StarshapeError> {
        let (first, last) = match (segments.first(), segments.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(StarshapeError::InvalidBoundary("no segments")),
        };
        if first.theta_lo != -T::PI() || last.theta_hi != T::PI() {
            return Err(StarshapeError::InvalidBoundary("segments must span [-pi, pi)"));
        }
        for s in &segments {
            if s.coeffs.is_empty() {
                return Err(StarshapeError::InvalidBoundary("segment without coefficients"));
            }
            if !(s.theta_lo < s.theta_hi) || !(s.scale > T::zero()) {
                return Err(StarshapeError::InvalidBoundary("empty segment interval"));
            }
            if s.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(StarshapeError::InvalidBoundary("non-finite coefficient"));
            }
        }
        if segments.windows(2).any(|w| w[0].theta_hi != w[1].theta_lo) {
            return Err(StarshapeError::InvalidBoundary("segments leave a gap or overlap"));
        }
        let breakpoints = segments[..segments.len() - 1].iter().map(|s| s.theta_hi).collect();
        Ok(Self { segments, breakpoints })
    }

    /// Single polynomial over the whole circle.
    pub fn single(coeffs: Vec<T>) -> Self {
        Self::new(vec![PolySegment::new(coeffs, -T::PI(), T::PI())]).expect("single segment tiles the circle")
    }

    pub fn segments(&self) -> &[PolySegment<T>] {
        &self.segments
    }

    /// Interior breakpoints `θ₁ < … < θ_{k-1}`.
    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Index of the segment owning `theta` (after wrapping).
    pub fn segment_index(&self, theta: T) -> usize {
        let t = wrap_angle(theta);
        self.breakpoints.partition_point(|&b| b < t)
    }

    pub fn segment_at(&self, theta: T) -> &PolySegment<T> {
        &self.segments[self.segment_index(theta)]
    }
}

/// A region `{p : |p - p_ref| ≤ Φ(θ(p))}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct StarshapedRegion<T> {
    pub id: RegionId,
    pub p_ref: Point2<T>,
    pub boundary: PiecewiseBoundary<T>,
}

impl<T: Real> StarshapedRegion<T> {
    pub fn new(id: RegionId, p_ref: Point2<T>, boundary: PiecewiseBoundary<T>) -> Self {
        Self { id, p_ref, boundary }
    }

    /// Disk of radius `r` about `center`.
    pub fn circle(id: RegionId, center: Point2<T>, r: T) -> Self {
        Self::new(id, center, PiecewiseBoundary::single(vec![r]))
    }

    pub fn with_id(mut self, id: RegionId) -> Self {
        self.id = id;
        self
    }

    /// `Φ(θ)`, clamped below at [`MIN_RADIUS`].
    pub fn eval_radius(&self, theta: T) -> T {
        let t = wrap_angle(theta);
        self.boundary.segment_at(t).eval(t).max(T::lit(MIN_RADIUS))
    }

    /// `dΦ/dθ` of the active segment.
    pub fn eval_radius_deriv(&self, theta: T) -> T {
        let t = wrap_angle(theta);
        self.boundary.segment_at(t).eval_deriv(t)
    }

    /// Boundary point in direction `theta`.
    pub fn boundary_point(&self, theta: T) -> Point2<T> {
        self.p_ref + Point2::from_angle(theta) * self.eval_radius(theta)
    }

    /// `Γ(p) = (Φ(θ(p)) / |p - p_ref|)^σ`; `+∞` at the reference point.
    pub fn gamma(&self, p: Point2<T>, sigma: T) -> T {
        match cart_to_polar(self.p_ref, p) {
            Ok(pc) => (self.eval_radius(pc.theta) / pc.dist).powf(sigma),
            Err(_) => T::infinity(),
        }
    }

    pub fn contains(&self, p: Point2<T>, margin: T) -> bool {
        match cart_to_polar(self.p_ref, p) {
            Ok(pc) => pc.dist <= self.eval_radius(pc.theta) - margin,
            Err(_) => true,
        }
    }

    /// Radial clearance to the boundary along the ray through `p` (negative outside).
    pub fn radial_clearance(&self, p: Point2<T>) -> T {
        match cart_to_polar(self.p_ref, p) {
            Ok(pc) => self.eval_radius(pc.theta) - pc.dist,
            Err(_) => self.eval_radius(T::zero()),
        }
    }
}

/// `(θ, d)` samples of a scan about `p_ref`, sorted by angle. Points coinciding with
/// `p_ref` are dropped.
pub fn polar_samples<T: Real>(p_ref: Point2<T>, scan: &Scan<T>) -> Vec<(T, T)> {
    let mut samples: Vec<(T, T)> = scan
        .endpoints()
        .filter_map(|q| cart_to_polar(p_ref, q).ok())
        .map(|pc| (pc.theta, pc.dist))
        .collect();
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    samples
}

/// Least-squares polynomial coefficients `a₀…a_order` for `(u, d)` samples, solved by
/// Householder QR on the Vandermonde system.
pub fn fit_polynomial<T: Real>(samples: &[(T, T)], order: usize) -> Result<Vec<T>, StarshapeError> {
    let m = samples.len();
    let n = order + 1;
    if m < n {
        return Err(StarshapeError::DegenerateFit);
    }
    // column-major m x n
    let mut a = vec![T::zero(); m * n];
    let mut b: Vec<T> = samples.iter().map(|s| s.1).collect();
    for (row, &(u, _)) in samples.iter().enumerate() {
        let mut pow = T::one();
        for col in 0..n {
            a[col * m + row] = pow;
            pow = pow * u;
        }
    }
    let mut diag = vec![T::zero(); n];
    for k in 0..n {
        let col = &mut a[k * m..(k + 1) * m];
        let norm = col[k..].iter().fold(T::zero(), |acc, &x| acc.hypot(x));
        if norm == T::zero() {
            return Err(StarshapeError::DegenerateFit);
        }
        let alpha = if col[k] > T::zero() { -norm } else { norm };
        col[k] = col[k] - alpha;
        let vnorm2: T = col[k..].iter().map(|&x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let v: Vec<T> = col[k..].to_vec();
        for j in (k + 1)..n {
            let cj = &mut a[j * m..(j + 1) * m];
            let s: T = v.iter().zip(&cj[k..]).map(|(&vi, &ci)| vi * ci).sum();
            let f = (s + s) / vnorm2;
            for (ci, &vi) in cj[k..].iter_mut().zip(&v) {
                *ci = *ci - f * vi;
            }
        }
        let s: T = v.iter().zip(&b[k..]).map(|(&vi, &bi)| vi * bi).sum();
        let f = (s + s) / vnorm2;
        for (bi, &vi) in b[k..].iter_mut().zip(&v) {
            *bi = *bi - f * vi;
        }
    }
    let rmax = diag.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
    let tol = rmax * T::epsilon().sqrt();
    if diag.iter().any(|d| d.abs() <= tol) {
        return Err(StarshapeError::DegenerateFit);
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in (k + 1)..n {
            s = s - a[j * m + k] * x[j];
        }
        x[k] = s / diag[k];
    }
    Ok(x)
}

/// Fits one segment on `(lo, hi]` from the samples it owns, falling back to a constant at
/// the samples' mean radius when the system is rank deficient.
fn fit_segment<T: Real>(samples: &[(T, T)], lo: T, hi: T, order: usize, fallback_radius: T) -> PolySegment<T> {
    let scale = hi - lo;
    let local: Vec<(T, T)> = samples.iter().map(|&(t, d)| ((t - lo) / scale, d)).collect();
    let coeffs = match fit_polynomial(&local, order) {
        Ok(c) => c,
        Err(_) => {
            let mean = if samples.is_empty() {
                fallback_radius
            } else {
                samples.iter().map(|s| s.1).sum::<T>() / T::from_usize_lossy(samples.len())
            };
            let mut c = vec![T::zero(); order + 1];
            c[0] = mean;
            c
        }
    };
    PolySegment {
        coeffs,
        theta_lo: lo,
        theta_hi: hi,
        shift: lo,
        scale,
    }
}

fn counts_per_interval<T: Real>(samples: &[(T, T)], inner: &[T]) -> Vec<usize> {
    let mut counts = vec![0usize; inner.len() + 1];
    for &(t, _) in samples {
        counts[inner.partition_point(|&b| b < t)] += 1;
    }
    counts
}

fn median<T: Real>(mut xs: Vec<T>) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) * T::lit(0.5)
    })
}

/// Interior breakpoints chosen from the radial rate of change, merged and split so every
/// segment has enough samples and none is wider than the configured span.
pub fn adaptive_breakpoints<T: Real>(samples: &[(T, T)], cfg: &FitConfig<T>) -> Vec<T> {
    let rates: Vec<(usize, T)> = samples
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].0 > w[0].0)
        .map(|(i, w)| (i + 1, ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs()))
        .collect();
    let threshold = cfg.rate_threshold.unwrap_or_else(|| {
        let med = median(rates.iter().map(|r| r.1).collect()).unwrap_or(T::zero());
        (med * T::lit(3.0)).max(T::lit(MIN_RATE_THRESHOLD))
    });
    let mut inner: Vec<T> = rates
        .iter()
        .filter(|(_, r)| *r > threshold)
        .map(|&(j, _)| (samples[j - 1].0 + samples[j].0) * T::lit(0.5))
        .filter(|&b| b > -T::PI() && b < T::PI())
        .collect();
    inner.dedup();

    merge_sparse(samples, &mut inner, cfg.min_points_per_segment);

    let mut out = Vec::with_capacity(inner.len());
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(-T::PI());
    edges.extend(inner.iter().copied());
    edges.push(T::PI());
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let width = hi - lo;
        let max_parts = (width / cfg.max_segment_span).ceil().to_usize().unwrap_or(1).max(1);
        let owned: Vec<(T, T)> = samples
            .iter()
            .filter(|&&(t, _)| (t > lo || (lo == -T::PI() && t == lo)) && t <= hi)
            .copied()
            .collect();
        for parts in (1..=max_parts).rev() {
            let step = width / T::from_usize_lossy(parts);
            let cuts: Vec<T> = (1..parts).map(|k| lo + step * T::from_usize_lossy(k)).collect();
            let counts = counts_per_interval(&owned, &cuts);
            if parts == 1 || counts.iter().all(|&c| c >= cfg.min_points_per_segment) {
                out.extend(cuts);
                break;
            }
        }
        if hi < T::PI() {
            out.push(hi);
        }
    }
    out
}

fn merge_sparse<T: Real>(samples: &[(T, T)], inner: &mut Vec<T>, min_pts: usize) {
    loop {
        if inner.is_empty() {
            return;
        }
        let counts = counts_per_interval(samples, inner);
        let Some((idx, _)) = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c < min_pts)
            .min_by_key(|&(i, &c)| (c, i))
        else {
            return;
        };
        // Interval idx sits between breakpoints idx-1 and idx.
        let remove = if idx == 0 {
            0
        } else if idx == counts.len() - 1 || counts[idx - 1] <= counts[idx + 1] {
            idx - 1
        } else {
            idx
        };
        inner.remove(remove);
    }
}

fn fit_with_breakpoints<T: Real>(
    p_ref: Point2<T>,
    samples: &[(T, T)],
    inner: &[T],
    order: usize,
) -> Result<StarshapedRegion<T>, StarshapeError> {
    let mean_all = samples.iter().map(|s| s.1).sum::<T>() / T::from_usize_lossy(samples.len().max(1));
    let mut buckets: Vec<Vec<(T, T)>> = vec![Vec::new(); inner.len() + 1];
    for &s in samples {
        buckets[inner.partition_point(|&b| b < s.0)].push(s);
    }
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(-T::PI());
    edges.extend_from_slice(inner);
    edges.push(T::PI());
    let segments = edges
        .windows(2)
        .zip(&buckets)
        .map(|(w, b)| fit_segment(b, w[0], w[1], order, mean_all))
        .collect();
    Ok(StarshapedRegion::new(RegionId::default(), p_ref, PiecewiseBoundary::new(segments)?))
}

fn checked_samples<T: Real>(p_ref: Point2<T>, scan: &Scan<T>, order: usize) -> Result<Vec<(T, T)>, StarshapeError> {
    let needed = 2 * (order + 2);
    if scan.len() < needed {
        return Err(StarshapeError::TooFewPoints { needed, got: scan.len() });
    }
    let samples = polar_samples(p_ref, scan);
    if samples.len() < needed {
        return Err(StarshapeError::TooFewPoints { needed, got: samples.len() });
    }
    Ok(samples)
}

/// Fits a starshaped region about `p_ref` to every beam of `scan` (max-range beams
/// included) using adaptive segmentation.
pub fn fit_region<T: Real>(p_ref: Point2<T>, scan: &Scan<T>, cfg: &FitConfig<T>) -> Result<StarshapedRegion<T>, StarshapeError> {
    cfg.validate()?;
    let samples = checked_samples(p_ref, scan, cfg.order)?;
    let inner = adaptive_breakpoints(&samples, cfg);
    fit_with_breakpoints(p_ref, &samples, &inner, cfg.order)
}

/// Fits with `n_segments` equal-width segments, ignoring the scan's structure.
pub fn fit_region_uniform<T: Real>(
    p_ref: Point2<T>,
    scan: &Scan<T>,
    order: usize,
    n_segments: usize,
) -> Result<StarshapedRegion<T>, StarshapeError> {
    if order < 1 || n_segments < 1 {
        return Err(StarshapeError::InvalidConfig("order and segment count must be positive"));
    }
    let samples = checked_samples(p_ref, scan, order)?;
    let step = T::TAU() / T::from_usize_lossy(n_segments);
    let inner: Vec<T> = (1..n_segments).map(|k| -T::PI() + step * T::from_usize_lossy(k)).collect();
    fit_with_breakpoints(p_ref, &samples, &inner, order)
}

/// Root-mean-square radial error of `region` against `(θ, d)` samples.
pub fn rms_error<T: Real>(region: &StarshapedRegion<T>, samples: &[(T, T)]) -> T {
    if samples.is_empty() {
        return T::zero();
    }
    let sse: T = samples
        .iter()
        .map(|&(t, d)| {
            let e = region.eval_radius(t) - d;
            e * e
        })
        .sum();
    (sse / T::from_usize_lossy(samples.len())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle_scan(r: f64, n: usize) -> Scan<f64> {
        Scan::from_ranges(Point2::new(0.0, 0.0), &vec![r; n], 5.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = StarshapedRegion::new(RegionId(0), Point2::zero(), PiecewiseBoundary::single(vec![2.0, 0.0, 0.0, 0.0]));
        assert_eq!(c.eval_radius(1.3), 2.0);
        assert_eq!(c.eval_radius_deriv(0.7), 0.0);
        let q = StarshapedRegion::new(RegionId(0), Point2::zero(), PiecewiseBoundary::single(vec![1.0, 0.0, 1.0, 0.0]));
        assert_relative_eq!(q.eval_radius(0.5), 1.25);
        assert_relative_eq!(q.eval_radius_deriv(0.5), 1.0);
    }

    #[test]
    fn breakpoint_belongs_to_closing_segment() {
        let b = PiecewiseBoundary::new(vec![
            PolySegment::new(vec![5.0, 1.0], -PI, 0.5),
            PolySegment::new(vec![7.0], 0.5, PI),
        ])
        .unwrap();
        let r = StarshapedRegion::new(RegionId(0), Point2::zero(), b);
        assert_relative_eq!(r.eval_radius(0.5), 5.5);
        assert_relative_eq!(r.eval_radius(0.5 + 1e-9), 7.0);
        // π wraps to -π, which belongs to the first segment
        assert_relative_eq!(r.eval_radius(PI), 5.0 - PI);
    }

    #[test]
    fn boundary_rejects_gaps() {
        let gap = vec![PolySegment::new(vec![1.0], -PI, 0.0), PolySegment::new(vec![1.0], 0.1, PI)];
        assert!(PiecewiseBoundary::new(gap).is_err());
        let short = vec![PolySegment::new(vec![1.0], -PI, 3.0)];
        assert!(PiecewiseBoundary::new(short).is_err());
    }

    #[test]
    fn gamma_and_contains_examples() {
        let c = StarshapedRegion::circle(RegionId(1), Point2::zero(), 2.0);
        assert_relative_eq!(c.gamma(Point2::new(1.0, 0.0), 1.0), 2.0);
        assert_relative_eq!(c.gamma(Point2::new(0.0, 2.0), 1.0), 1.0);
        assert!(c.gamma(Point2::zero(), 1.0f64).is_infinite());
        assert!(c.contains(Point2::new(1.0, 0.0), 0.0));
        assert!(!c.contains(Point2::new(3.0, 0.0), 0.0));
        assert!(!c.contains(Point2::new(0.0, 1.6), 0.5));
        assert!(c.contains(Point2::zero(), 10.0));
    }

    #[test]
    fn constant_scan_fits_flat_segments() {
        let region = fit_region(Point2::zero(), &circle_scan(3.0, 360), &FitConfig::default()).unwrap();
        for seg in region.boundary.segments() {
            assert_relative_eq!(seg.coeffs[0], 3.0, epsilon = 1e-9);
            for &a in &seg.coeffs[1..] {
                assert!(a.abs() <= 1e-6, "higher-order coefficient {a}");
            }
        }
    }

    #[test]
    fn too_few_points() {
        let scan = circle_scan(1.0, 9);
        assert!(matches!(
            fit_region(Point2::zero(), &scan, &FitConfig::default()),
            Err(StarshapeError::TooFewPoints { needed: 10, got: 9 })
        ));
    }

    #[test]
    fn rank_deficient_system_falls_back() {
        // every sample at the same angle: the Vandermonde columns are parallel
        let samples = vec![(0.3, 1.0), (0.3, 2.0), (0.3, 3.0), (0.3, 4.0), (0.3, 5.0)];
        assert_eq!(fit_polynomial(&samples, 3), Err(StarshapeError::DegenerateFit));
        let seg = fit_segment(&samples, 0.0, 1.0, 3, 9.0);
        assert_eq!(seg.coeffs, vec![3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn polynomial_fit_recovers_exact_cubic() {
        let samples: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let u = i as f64 / 19.0;
                (u, 1.0 - 2.0 * u + 0.5 * u * u + 3.0 * u * u * u)
            })
            .collect();
        let c = fit_polynomial(&samples, 3).unwrap();
        for (got, want) in c.iter().zip([1.0, -2.0, 0.5, 3.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn f32_circle_fit() {
        let scan = Scan::from_ranges(Point2::<f32>::zero(), &[2.0f32; 360], 5.0).unwrap();
        let region = fit_region(Point2::zero(), &scan, &FitConfig::default()).unwrap();
        for i in 0..100 {
            let t = -std::f32::consts::PI + i as f32 * 0.0628;
            assert!((region.eval_radius(t) - 2.0).abs() < 1e-3);
        }
    }

    #[test]
    fn invalid_config() {
        let cfg = FitConfig::<f64> { min_points_per_segment: 2, ..FitConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = FitConfig::<f64> { order: 0, ..FitConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn jump_in_range_creates_breakpoint() {
        let ranges: Vec<f64> = (0..360).map(|i| if (90..180).contains(&i) { 1.0 } else { 4.0 }).collect();
        let scan = Scan::from_ranges(Point2::zero(), &ranges, 5.0).unwrap();
        let samples = polar_samples(Point2::zero(), &scan);
        let bps = adaptive_breakpoints(&samples, &FitConfig::default());
        let step = 2.0 * PI / 360.0;
        let near = |target: f64| bps.iter().any(|b| (b - target).abs() < step);
        assert!(near(-PI + 89.5 * step));
        assert!(near(-PI + 179.5 * step));
    }

    #[test]
    fn region_json_round_trip() {
        let region = fit_region(Point2::new(1.0, -2.0), &circle_scan(2.0, 90), &FitConfig::default()).unwrap();
        let json = serde_json::to_string(&region).unwrap();
        let back: StarshapedRegion<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(region, back);
    }
}
