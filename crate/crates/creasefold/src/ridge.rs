//! Generators for closed space ridges that admit proper folds along
//! closed convex foldlines.

use nalgebra::Vector3;
use thiserror::Error;

use crate::curve::{CurveError, FrenetFrame, SpaceCurve};
use crate::jet::{curvature_torsion, Jet};
use crate::numeric::CumulativeArc;

type J = Jet<4>;

#[derive(Debug, Error)]
pub enum RidgeError {
    #[error("curve length {length} does not exceed 2π, no closed fold can exist")]
    TooShort { length: f64 },
    #[error("curve leaves the unit sphere at s = {s} (|γ| = {radius})")]
    NotOnSphere { s: f64, radius: f64 },
    #[error("total curvature only defined for closed curves")]
    OpenCurve,
    #[error("invalid parameter: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Rescale a closed unit-sphere curve so its length matches the target
/// foldline's. Any sphere curve has curvature at least 1, so shrinking by
/// 2π/L leaves the rescaled curvature strictly above the unit circle's.
pub fn sphere_ridge(omega: &SpaceCurve, target_length: f64) -> Result<SpaceCurve, RidgeError> {
    if !omega.is_closed() {
        return Err(RidgeError::OpenCurve);
    }
    let length = omega.length();
    for (i, p) in omega.sample_positions().iter().enumerate() {
        let r = p.norm();
        if (r - 1.0).abs() > 1e-8 {
            return Err(RidgeError::NotOnSphere { s: i as f64 * omega.arc_step(), radius: r });
        }
    }
    if length <= 2.0 * std::f64::consts::PI {
        return Err(RidgeError::TooShort { length });
    }
    Ok(omega.scale(target_length / length))
}

/// Closed curve winding p times around a torus of tube radius 1 and center
/// radius a while oscillating q times through its tube, arc-length
/// parametrized with exact curvature and torsion samples.
pub fn torus_curve(a: f64, p: u32, q: u32, n: usize) -> Result<SpaceCurve, RidgeError> {
    if a <= 1.0 {
        return Err(RidgeError::BadParameters(format!("center radius a = {a} must exceed 1")));
    }
    if p == 0 || q == 0 {
        return Err(RidgeError::BadParameters("winding numbers must be positive".into()));
    }
    let lambda = q as f64 / p as f64;
    let t_end = p as f64 * 2.0 * std::f64::consts::PI;
    // |ω′|² = λ² + (a + cos λt)², a closed form worth using directly
    let speed = move |t: f64| (lambda * lambda + (a + (lambda * t).cos()).powi(2)).sqrt();
    let arcs = CumulativeArc::build(speed, 0.0, t_end, (4 * n).max(4096));
    let length = arcs.total();

    let mut positions = Vec::with_capacity(n);
    let mut frames = Vec::with_capacity(n);
    for i in 0..n {
        let t = arcs.invert(length * i as f64 / n as f64);
        let tj = J::var(t);
        let (sin_l, cos_l) = tj.scale(lambda).sin_cos();
        let (sin_t, cos_t) = tj.sin_cos();
        let radial = J::con(a) + cos_l;
        let gamma = [radial * cos_t, radial * sin_t, sin_l];
        positions.push(Vector3::new(gamma[0].value(), gamma[1].value(), gamma[2].value()));
        frames.push(frame_from_jets(&gamma));
    }
    Ok(SpaceCurve::from_frenet_samples(&positions, frames, length, true)?)
}

/// Intersection of the unit sphere with the saddle z = 3xy: four arcs
/// equivalent up to reflection, concatenated into one closed curve through
/// a single periodic fit. The seam tangents agree to machine precision;
/// the worst mismatch is logged for inspection.
pub fn sphere_paraboloid_curve(n: usize) -> Result<SpaceCurve, RidgeError> {
    if n % 8 != 0 {
        return Err(RidgeError::BadParameters(format!(
            "sample count {n} must be divisible by 8 to hit the arc symmetry points"
        )));
    }
    // arcs meet where y = x: t* with t² = (−1+√10)/9
    let t_star = ((-1.0 + 10.0_f64.sqrt()) / 9.0).sqrt();
    let speed = |t: f64| {
        let g = arc_jets(J::var(t), ArcKind::A);
        (g[0].derivative(1).powi(2) + g[1].derivative(1).powi(2) + g[2].derivative(1).powi(2))
            .sqrt()
    };
    let arcs = CumulativeArc::build(speed, -t_star, t_star, (2 * n).max(4096));
    let quarter = arcs.total();
    let length = 4.0 * quarter;

    // traversal order around the loop; backward arcs flip the t direction
    let legs = [(ArcKind::A, false), (ArcKind::B, true), (ArcKind::D, false), (ArcKind::C, true)];
    let mut positions = Vec::with_capacity(n);
    let mut frames = Vec::with_capacity(n);
    for i in 0..n {
        let s = length * i as f64 / n as f64;
        let leg = ((s / quarter) as usize).min(3);
        let local = s - leg as f64 * quarter;
        let (kind, backward) = legs[leg];
        let t = arcs.invert(if backward { quarter - local } else { local });
        let gamma = arc_jets(J::var(t), kind);
        positions.push(Vector3::new(gamma[0].value(), gamma[1].value(), gamma[2].value()));
        let mut frame = frame_from_jets(&gamma);
        if backward {
            // reversal flips T and B but leaves N, k, and τ alone
            frame.t = -frame.t;
            frame.b = -frame.b;
        }
        frames.push(frame);
    }

    let seam = worst_seam_tangent_gap(&legs, t_star);
    log::info!("sphere-saddle arcs joined; worst seam tangent gap {seam:.3e}");
    Ok(SpaceCurve::from_frenet_samples(&positions, frames, length, true)?)
}

/// Total curvature ∫ k ds of a closed curve; exceeding 2π is necessary
/// for any closed ridge (Fenchel), so generators gate on it.
pub fn total_curvature(curve: &SpaceCurve) -> Result<f64, RidgeError> {
    if !curve.is_closed() {
        return Err(RidgeError::OpenCurve);
    }
    Ok(curve.curvature().integral())
}

/// Frenet frame of a regularly parametrized curve from its jets: the
/// binormal is along γ′ × γ″, which never vanishes here since both
/// generators keep curvature strictly positive.
fn frame_from_jets(gamma: &[J; 3]) -> FrenetFrame {
    let d1 = Vector3::new(gamma[0].derivative(1), gamma[1].derivative(1), gamma[2].derivative(1));
    let d2 = Vector3::new(gamma[0].derivative(2), gamma[1].derivative(2), gamma[2].derivative(2));
    let t = d1.normalize();
    let b = d1.cross(&d2).normalize();
    let (k, tau) = curvature_torsion(gamma);
    FrenetFrame { t, n: b.cross(&t), b, k, tau }
}

#[derive(Clone, Copy)]
enum ArcKind {
    A,
    B,
    C,
    D,
}

/// One arc of the sphere-saddle intersection as jets: A is the graph arc
/// (t, y, 3ty) with y = √((1−t²)/(1+9t²)); B swaps x and y; D and C are
/// their images under the half-turn about the z axis.
fn arc_jets(t: J, kind: ArcKind) -> [J; 3] {
    let one = J::con(1.0);
    let t_sq = t * t;
    let y = (one - t_sq).div(one + t_sq.scale(9.0)).sqrt();
    let z = (t * y).scale(3.0);
    match kind {
        ArcKind::A => [t, y, z],
        ArcKind::B => [y, t, z],
        ArcKind::D => [-t, -y, z],
        ArcKind::C => [-y, -t, z],
    }
}

/// Angle gap between the incoming and outgoing unit tangents at each of
/// the four arc joins.
fn worst_seam_tangent_gap(legs: &[(ArcKind, bool); 4], t_star: f64) -> f64 {
    let tangent = |kind: ArcKind, backward: bool, at_end: bool| {
        // endpoint in traversal order: end of leg means t = t* for forward
        // legs and t = −t* for backward ones
        let t = if at_end != backward { t_star } else { -t_star };
        let g = arc_jets(J::var(t), kind);
        let mut v = Vector3::new(g[0].derivative(1), g[1].derivative(1), g[2].derivative(1));
        if backward {
            v = -v;
        }
        v.normalize()
    };
    let mut worst = 0.0_f64;
    for i in 0..4 {
        let (kind_a, back_a) = legs[i];
        let (kind_b, back_b) = legs[(i + 1) % 4];
        let out = tangent(kind_a, back_a, true);
        let inc = tangent(kind_b, back_b, false);
        worst = worst.max((out - inc).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    /// Densely sampled minimum of a curvature field.
    fn field_min(curve: &SpaceCurve, dense: usize) -> f64 {
        (0..dense)
            .map(|i| curve.curvature().value(curve.length() * i as f64 / dense as f64))
            .fold(f64::INFINITY, f64::min)
    }

    fn field_max(curve: &SpaceCurve, dense: usize) -> f64 {
        (0..dense)
            .map(|i| curve.curvature().value(curve.length() * i as f64 / dense as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn torus_curve_basics() {
        let curve = torus_curve(3.0, 9, 2, 1024).unwrap();
        // starts at (a+1, 0, 0)
        let p0 = curve.position(0.0);
        assert!((p0 - Vector3::new(4.0, 0.0, 0.0)).norm() < 1e-12);
        // length against an independently computed fixture
        assert_relative_eq!(curve.length(), 170.138756259982, max_relative = 1e-10);
        // curvature extremes against fixtures from exact per-sample values
        assert_relative_eq!(field_min(&curve, 16384), 0.252308, epsilon = 1e-5);
        assert_relative_eq!(field_max(&curve, 16384), 0.481707, epsilon = 1e-5);
        // unit speed
        let h = 1e-5;
        for &s in &[10.0, 80.0, 150.0] {
            let v = (curve.position(s + h) - curve.position(s - h)).norm() / (2.0 * h);
            assert_relative_eq!(v, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn torus_length_grows_with_center_radius() {
        let lengths: Vec<f64> =
            [2.0, 3.0, 4.0].iter().map(|&a| torus_curve(a, 9, 2, 256).unwrap().length()).collect();
        assert!(lengths[0] < lengths[1] && lengths[1] < lengths[2]);
    }

    #[test]
    fn high_oscillation_flattens_rescaled_curvature() {
        // after rescaling to length 2π, many tube oscillations push the
        // minimum curvature up toward (and past) the slow knot's
        let slow = sphere_ridge_like_rescale(torus_curve(3.0, 9, 2, 2048).unwrap());
        let fast = sphere_ridge_like_rescale(torus_curve(3.0, 9, 200, 16384).unwrap());
        let slow_min = slow.curvature().samples().iter().cloned().fold(f64::INFINITY, f64::min);
        let fast_min = fast.curvature().samples().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(fast_min > slow_min, "{fast_min} vs {slow_min}");
        assert!(fast_min > 1.0);
    }

    fn sphere_ridge_like_rescale(curve: SpaceCurve) -> SpaceCurve {
        curve.scale(TAU / curve.length())
    }

    #[test]
    fn sphere_saddle_curve_lies_on_both_surfaces() {
        let curve = sphere_paraboloid_curve(1024).unwrap();
        assert_relative_eq!(curve.length(), 8.740162239576, max_relative = 1e-9);
        // defining equations at samples and between them
        for i in 0..200 {
            let s = curve.length() * (i as f64 + 0.31) / 200.0;
            let p = curve.position(s);
            assert!((p.norm() - 1.0).abs() < 1e-10, "off sphere at s = {s}");
            assert!((p.z - 3.0 * p.x * p.y).abs() < 1e-10, "off saddle at s = {s}");
        }
    }

    #[test]
    fn sphere_saddle_curvature_fixtures() {
        let curve = sphere_paraboloid_curve(2048).unwrap();
        // at the arc midpoint (s = L/8) curvature and torsion take the
        // hand-computed values k = 1, τ = 0.9
        let i = curve.sample_count() / 8;
        assert_relative_eq!(curve.curvature().samples()[i], 1.0, epsilon = 1e-10);
        assert_relative_eq!(curve.torsion().samples()[i], 0.9, epsilon = 1e-10);
        assert_relative_eq!(field_min(&curve, 16384), 1.0, epsilon = 1e-7);
        assert_relative_eq!(field_max(&curve, 16384), 1.970060, epsilon = 1e-5);
    }

    #[test]
    fn sphere_saddle_arcs_join_smoothly() {
        // the fit itself is smooth by construction, so check the analytic
        // tangents of adjacent arcs at each of the four seams
        let t_star = ((-1.0 + 10.0_f64.sqrt()) / 9.0).sqrt();
        let legs = [
            (ArcKind::A, false),
            (ArcKind::B, true),
            (ArcKind::D, false),
            (ArcKind::C, true),
        ];
        assert!(worst_seam_tangent_gap(&legs, t_star) < 1e-8);
    }

    #[test]
    fn sphere_rescale_gates_and_scales() {
        let saddle = sphere_paraboloid_curve(1024).unwrap();
        let ridge = sphere_ridge(&saddle, TAU).unwrap();
        assert_relative_eq!(ridge.length(), TAU, max_relative = 1e-12);
        let min_k = ridge.curvature().samples().iter().cloned().fold(f64::INFINITY, f64::min);
        assert_relative_eq!(min_k, saddle.length() / TAU, max_relative = 1e-10);
        assert!(min_k > 1.0);

        // great circle: length exactly 2π, no closed fold
        let n = 256;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let great = crate::curve::arclength_reparametrize_space(&pts, true).unwrap();
        assert!(matches!(sphere_ridge(&great, TAU), Err(RidgeError::TooShort { .. })));

        // latitude circle: shorter still
        let lat: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                let r = 0.6_f64;
                Vector3::new(r * t.cos(), r * t.sin(), (1.0 - r * r).sqrt())
            })
            .collect();
        let lat = crate::curve::arclength_reparametrize_space(&lat, true).unwrap();
        assert!(matches!(sphere_ridge(&lat, TAU), Err(RidgeError::TooShort { .. })));
    }

    #[test]
    fn total_curvature_fixtures() {
        // planar unit circle in space
        let n = 512;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let circle = crate::curve::arclength_reparametrize_space(&pts, true).unwrap();
        assert_relative_eq!(total_curvature(&circle).unwrap(), TAU, epsilon = 1e-8);

        let torus = torus_curve(3.0, 9, 2, 1024).unwrap();
        assert!(total_curvature(&torus.scale(TAU / torus.length())).unwrap() > TAU);
        let saddle = sphere_paraboloid_curve(1024).unwrap();
        assert!(total_curvature(&saddle).unwrap() > TAU);

        let open: Vec<Vector3<f64>> =
            (0..64).map(|i| Vector3::new(i as f64, (i as f64).sin(), 0.0)).collect();
        let open = crate::curve::arclength_reparametrize_space(&open, false).unwrap();
        assert!(matches!(total_curvature(&open), Err(RidgeError::OpenCurve)));
    }
}
