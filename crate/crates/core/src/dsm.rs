//! Dynamic system modulation inside starshaped regions.
//!
//! The guiding vector toward the short-term goal is decomposed in the basis
//! `{r, e}` (toward the region's reference point, along the boundary tangent) and rescaled
//! by `λ_r = 1 - 1/Γ` and `λ_e = 1 + 1/Γ`. Near the boundary (`Γ → 1`) the radial part
//! vanishes while the tangential part is amplified, so the flow cannot leave the region.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cart_to_polar, wrap_angle, Point2, Pose2, Scan, Vector2};
use crate::scalar::{clamp, Real};
use crate::starshape::StarshapedRegion;

/// Slack on `Γ ≥ 1` before a point counts as outside its region.
pub const OUTSIDE_TOLERANCE: f64 = 1e-9;
/// Basis determinants below this are treated as singular.
pub const SINGULAR_DET: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DsmError {
    #[error("point coincides with the region's reference point")]
    AtReferencePoint,
    #[error("point lies outside the region (gamma = {0})")]
    OutsideRegion(f64),
    #[error("modulation basis is singular")]
    SingularBasis,
    #[error("no regions to combine")]
    EmptyRegionList,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ControllerConfig<T> {
    /// Exponent of `Γ`.
    pub sigma: T,
    /// Blend range `ρ` for the nearest-obstacle refinement.
    pub rho: T,
    pub robot_radius: T,
    pub v_max: T,
    pub w_max: T,
    pub k_heading: T,
    pub k_speed: T,
}

impl<T: Real> Default for ControllerConfig<T> {
    fn default() -> Self {
        let robot_radius = T::lit(0.25);
        Self {
            sigma: T::one(),
            rho: robot_radius * T::lit(2.0),
            robot_radius,
            v_max: T::lit(0.5),
            w_max: T::lit(2.0),
            k_heading: T::lit(2.0),
            k_speed: T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationBasis<T> {
    /// Unit vector from the robot toward the reference point.
    pub r_dir: Vector2<T>,
    /// Unit boundary tangent, counter-clockwise about the reference point.
    pub e_dir: Vector2<T>,
    pub lambda_r: T,
    pub lambda_e: T,
    pub gamma: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlCommand<T> {
    pub v: T,
    pub w: T,
}

/// `p̃ = p_sg - p`.
pub fn raw_guidance<T: Real>(p: Point2<T>, p_sg: Point2<T>) -> Vector2<T> {
    p_sg - p
}

/// Basis and eigenvalues at `p`, with `λ_r` clamped at 0 and `λ_e` at 2 when `p` has
/// drifted outside the region.
fn basis_unchecked<T: Real>(region: &StarshapedRegion<T>, p: Point2<T>, sigma: T) -> Result<ModulationBasis<T>, DsmError> {
    let pc = cart_to_polar(region.p_ref, p).map_err(|_| DsmError::AtReferencePoint)?;
    let theta = pc.theta;
    let phi = region.eval_radius(theta);
    let dphi = region.eval_radius_deriv(theta);
    let (s, c) = theta.sin_cos();
    let tangent = Vector2::new(dphi * c - phi * s, dphi * s + phi * c);
    let r_dir = Vector2::new(-c, -s);
    let mut e_dir = tangent.normalized().ok_or(DsmError::SingularBasis)?;
    // outward normal and tangent form a right-handed pair
    if (-r_dir).cross(e_dir) < T::zero() {
        e_dir = -e_dir;
    }
    let gamma = (phi / pc.dist).powf(sigma);
    let inv = T::one() / gamma;
    Ok(ModulationBasis {
        r_dir,
        e_dir,
        lambda_r: (T::one() - inv).max(T::zero()),
        lambda_e: (T::one() + inv).min(T::lit(2.0)),
        gamma,
    })
}

/// Modulation basis at an interior point `p`.
pub fn modulation_basis<T: Real>(region: &StarshapedRegion<T>, p: Point2<T>, sigma: T) -> Result<ModulationBasis<T>, DsmError> {
    let basis = basis_unchecked(region, p, sigma)?;
    if basis.gamma < T::one() - T::lit(OUTSIDE_TOLERANCE) {
        return Err(DsmError::OutsideRegion(basis.gamma.to_f64_lossy()));
    }
    Ok(basis)
}

/// `M v = E D E⁻¹ v`: decompose `v = a·r + b·e` and rescale each component.
pub fn modulate<T: Real>(basis: &ModulationBasis<T>, v: Vector2<T>) -> Result<Vector2<T>, DsmError> {
    let det = basis.r_dir.cross(basis.e_dir);
    if det.abs() < T::lit(SINGULAR_DET) {
        return Err(DsmError::SingularBasis);
    }
    let a = v.cross(basis.e_dir) / det;
    let b = basis.r_dir.cross(v) / det;
    Ok(basis.r_dir * (basis.lambda_r * a) + basis.e_dir * (basis.lambda_e * b))
}

/// Modulated vector for one region; identity at the reference point (`Γ = ∞`) and for a
/// singular basis.
pub fn modulate_in_region<T: Real>(region: &StarshapedRegion<T>, p: Point2<T>, v: Vector2<T>, sigma: T) -> Vector2<T> {
    match basis_unchecked(region, p, sigma) {
        Ok(basis) => modulate(&basis, v).unwrap_or(v),
        Err(_) => v,
    }
}

/// Overlap weights `w_k = max(Γ_k, 1) / Σ max(Γ_j, 1)`. Infinite `Γ` values (robot on a
/// reference point) share the whole weight.
pub fn overlap_weights<T: Real>(gammas: &[T]) -> Vec<T> {
    let infinite = gammas.iter().filter(|g| g.is_infinite()).count();
    if infinite > 0 {
        let w = T::one() / T::from_usize_lossy(infinite);
        return gammas.iter().map(|g| if g.is_infinite() { w } else { T::zero() }).collect();
    }
    let clipped: Vec<T> = gammas.iter().map(|&g| g.max(T::one())).collect();
    let total: T = clipped.iter().copied().sum();
    clipped.into_iter().map(|g| g / total).collect()
}

/// Weighted sum of each region's modulated vector.
pub fn combine_overlaps<T: Real>(
    regions: &[&StarshapedRegion<T>],
    p: Point2<T>,
    v: Vector2<T>,
    sigma: T,
) -> Result<Vector2<T>, DsmError> {
    if regions.is_empty() {
        return Err(DsmError::EmptyRegionList);
    }
    let gammas: Vec<T> = regions.iter().map(|r| r.gamma(p, sigma)).collect();
    let weights = overlap_weights(&gammas);
    Ok(regions
        .iter()
        .zip(weights)
        .filter(|(_, w)| *w > T::zero())
        .fold(Vector2::zero(), |acc, (r, w)| acc + modulate_in_region(r, p, v, sigma) * w))
}

/// `α = min(ρ / (|p - p_n| - r), 1)`, taken as 1 once the clearance is non-positive.
pub fn blend_weight<T: Real>(dist_to_nearest: T, rho: T, robot_radius: T) -> T {
    let clearance = dist_to_nearest - robot_radius;
    if clearance <= T::zero() {
        return T::one();
    }
    clamp(rho / clearance, T::zero(), T::one())
}

/// Mixes the modulated vector with a repulsion from the nearest scan hit:
/// `(1 - α) v + α |v| (p - p_n)/|p - p_n|`.
pub fn blend_nearest<T: Real>(v_mod: Vector2<T>, p: Point2<T>, scan: &Scan<T>, cfg: &ControllerConfig<T>) -> Vector2<T> {
    let Some(nearest) = scan.nearest_hit(p) else {
        return v_mod;
    };
    let away = p - nearest;
    let alpha = blend_weight(away.norm(), cfg.rho, cfg.robot_radius);
    let repulse = away.normalized().map_or(Vector2::zero(), |u| u * v_mod.norm());
    v_mod * (T::one() - alpha) + repulse * alpha
}

/// Proportional heading and speed tracking with saturation.
pub fn track_unicycle<T: Real>(v_desired: Vector2<T>, pose: &Pose2<T>, cfg: &ControllerConfig<T>) -> ControlCommand<T> {
    let speed = v_desired.norm();
    if speed == T::zero() || !speed.is_finite() {
        return ControlCommand::default();
    }
    let err = wrap_angle(v_desired.angle() - pose.heading());
    ControlCommand {
        v: clamp(cfg.k_speed * speed * err.cos().max(T::zero()), T::zero(), cfg.v_max),
        w: clamp(cfg.k_heading * err, -cfg.w_max, cfg.w_max),
    }
}

/// Full guidance for one control tick: modulate over every region containing `p`
/// (or the raw vector when none does), blend with the nearest hit and track.
pub fn control_step<T: Real>(
    regions: &[&StarshapedRegion<T>],
    pose: &Pose2<T>,
    p_sg: Point2<T>,
    scan: &Scan<T>,
    cfg: &ControllerConfig<T>,
) -> (Vector2<T>, ControlCommand<T>) {
    let p = pose.position;
    let raw = raw_guidance(p, p_sg);
    let modulated = combine_overlaps(regions, p, raw, cfg.sigma).unwrap_or(raw);
    let blended = blend_nearest(modulated, p, scan, cfg);
    (blended, track_unicycle(blended, pose, cfg))
}
