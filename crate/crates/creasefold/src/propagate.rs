//! Transport of a fold across the sheet: ruling correspondence between
//! foldlines, closed-form descriptor transport, strip regularity, and chains
//! over several foldlines.

use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::Vector2;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, FrenetFrame, PlanarCurve, SpaceCurve};
use crate::field::{FieldError, ScalarField};
use crate::fold::{fold_along, FoldDescriptor, FoldError, RulingField};
use crate::numeric;

#[derive(Debug, Error)]
pub enum PropagateError {
    #[error("ruling misses the target foldline")]
    NoIntersection,
    #[error("ruling meets the target foldline tangentially")]
    TangentHit,
    #[error("ruling lands on the regression curve")]
    OnRegressionCurve,
    #[error("chain propagation needs closed foldlines")]
    OpenChain,
    #[error("perturbation sup-norm {change:.3e} exceeds the budget {budget:.3e}")]
    PerturbationTooLarge { change: f64, budget: f64 },
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Travel and tangent turn of a ruling between two concentric circles.
#[derive(Clone, Copy, Debug)]
pub struct CircleStep {
    pub v_bar: f64,
    pub sin_delta: f64,
    pub cos_delta: f64,
}

impl CircleStep {
    pub fn delta(&self) -> f64 {
        self.sin_delta.atan2(self.cos_delta)
    }
}

/// Where a ruling leaving a circle of radius `radius` at angle `beta` from
/// the tangent meets the concentric circle scaled by `1 + c`. Of the two
/// line hits the one nearest the source wins; a negative discriminant means
/// the ruling line stays inside the target.
pub fn circle_step(radius: f64, c: f64, beta: f64) -> Result<CircleStep, PropagateError> {
    assert!(radius > 0.0 && c > -1.0);
    let (sin_b, cos_b) = beta.sin_cos();
    let disc = sin_b * sin_b + c * c + 2.0 * c;
    if disc < 0.0 {
        return Err(PropagateError::NoIntersection);
    }
    let v_bar = radius * (sin_b - sin_b.signum() * disc.sqrt());
    let scaled = radius * (1.0 + c);
    Ok(CircleStep {
        v_bar,
        sin_delta: v_bar * cos_b / scaled,
        cos_delta: (radius - v_bar * sin_b) / scaled,
    })
}

/// Descriptor of the same surface read at the landing ridge: a rotation by
/// -δ of (k_n, τ_r) divided by the landing speed s₂′.
pub fn transport_descriptor(kn: f64, tau_r: f64, delta: f64, s2_prime: f64) -> (f64, f64) {
    let (sin_d, cos_d) = delta.sin_cos();
    (
        (cos_d * kn + sin_d * tau_r) / s2_prime,
        (-sin_d * kn + cos_d * tau_r) / s2_prime,
    )
}

/// Same transport through the regression distance: the descriptor rescales
/// by how far along the ruling the regression point sits while the ruling
/// angle turns from β₁ to β₂. Needs sin β₁ ≠ 0.
pub fn transport_via_regression(
    kn: f64,
    beta1: f64,
    beta1_prime: f64,
    kg1: f64,
    beta2: f64,
    v_bar: f64,
) -> Result<(f64, f64), PropagateError> {
    let denom = 1.0 - v_bar * (beta1_prime + kg1) / beta1.sin();
    if denom == 0.0 {
        return Err(PropagateError::OnRegressionCurve);
    }
    let stretch = beta2.sin() / beta1.sin();
    let scale = stretch * kn / denom;
    Ok((stretch * scale, -(beta2.cos() / beta1.sin()) * scale))
}

/// Landing speed ds₂/ds₁ of the ruling correspondence.
pub fn step_velocity(
    beta1: f64,
    beta2: f64,
    beta1_prime: f64,
    kg1: f64,
    v_bar: f64,
) -> Result<f64, PropagateError> {
    let sin2 = beta2.sin();
    if sin2.abs() < 1e-12 {
        return Err(PropagateError::TangentHit);
    }
    let sin1 = beta1.sin();
    Ok((sin1 / sin2) * (1.0 - v_bar * (beta1_prime + kg1) / sin1))
}

/// Fold the sheet over to the other side at the landing ridge: the normal
/// curvature flips and the relative torsion picks up a correction. All
/// primed inputs are derivatives in s₁; `kg2_prime` differentiates k₂g
/// pulled back along the correspondence.
#[allow(clippy::too_many_arguments)]
pub fn next_side_descriptor(
    k2n: f64,
    tau2r: f64,
    s2_prime: f64,
    s2_second: f64,
    kg1: f64,
    kg2: f64,
    kg2_prime: f64,
    beta1: f64,
    beta2: f64,
    kn1_prime: f64,
    tau1r_prime: f64,
) -> (f64, f64) {
    let (sin_d, cos_d) = (beta1 - beta2).sin_cos();
    let bracket = s2_second * k2n * kg2
        + s2_prime * (k2n * kg2_prime - tau2r * kg2 * (s2_prime * kg2 - kg1))
        - kg2 * (cos_d * kn1_prime + sin_d * tau1r_prime);
    let flipped = tau2r - 2.0 / (s2_prime * s2_prime * (k2n * k2n + kg2 * kg2)) * bracket;
    (-k2n, flipped)
}

/// The side flip written in the tangent turn δ and its s₁-derivatives
/// instead of the landing speeds.
#[allow(clippy::too_many_arguments)]
pub fn next_side_descriptor_compact(
    k2n: f64,
    tau2r: f64,
    delta: f64,
    delta_prime: f64,
    delta_second: f64,
    kg1: f64,
    kg1_prime: f64,
    kg2: f64,
    kn1_prime: f64,
    tau1r_prime: f64,
) -> (f64, f64) {
    let (sin_d, cos_d) = delta.sin_cos();
    let factor = (kg2 / (delta_prime + kg1)).powi(2);
    let bracket = k2n * (delta_second + kg1_prime)
        - tau2r * (delta_prime + kg1) * delta_prime
        - kg2 * (cos_d * kn1_prime + sin_d * tau1r_prime);
    (-k2n, tau2r - 2.0 / (k2n * k2n + kg2 * kg2) * factor * bracket)
}

/// Where each ruling lands on the next foldline: arc position s₂ on the
/// target (unwrapped to an increasing sequence), travel v̄, tangent turn δ,
/// and the landing speeds, all sampled on the source grid.
#[derive(Clone, Debug)]
pub struct CorrespondenceMap {
    s2: Vec<f64>,
    v_bar: ScalarField,
    delta: ScalarField,
    s2_prime: ScalarField,
    s2_second: ScalarField,
    length2: f64,
}

impl CorrespondenceMap {
    pub fn s2(&self) -> &[f64] {
        &self.s2
    }

    pub fn v_bar(&self) -> &ScalarField {
        &self.v_bar
    }

    pub fn delta(&self) -> &ScalarField {
        &self.delta
    }

    pub fn s2_prime(&self) -> &ScalarField {
        &self.s2_prime
    }

    pub fn s2_second(&self) -> &ScalarField {
        &self.s2_second
    }

    pub fn target_length(&self) -> f64 {
        self.length2
    }
}

/// Outcome of checking one strip between consecutive foldlines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RulingVerdict {
    Regular,
    CrossesRegression,
    NoIntersection,
    TangentHit,
}

/// Regularity of a strip: every ruling must reach the next foldline before
/// the regression curve. The margin is min(|d| − |v̄|) over samples where
/// travel and regression distance share a sign, +∞ when they never do, and
/// NaN when the intersection itself failed.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub verdict: RulingVerdict,
    pub margin: f64,
    pub worst_sample: usize,
    #[serde(skip)]
    pub v_bar: Vec<f64>,
    #[serde(skip)]
    pub d: Vec<f64>,
}

/// Compare ruling travel against the regression distances. Equality of |d|
/// and |v̄| already counts as singular contact.
pub fn regularity_check(v_bar: &ScalarField, d: &[f64]) -> RegularityReport {
    assert_eq!(v_bar.len(), d.len());
    let mut margin = f64::INFINITY;
    let mut worst = 0;
    for (i, (&v, &di)) in v_bar.samples().iter().zip(d).enumerate() {
        if v != 0.0 && v.signum() == di.signum() {
            let m = di.abs() - v.abs();
            if m < margin {
                margin = m;
                worst = i;
            }
        }
    }
    let verdict = if margin > 0.0 {
        RulingVerdict::Regular
    } else {
        RulingVerdict::CrossesRegression
    };
    RegularityReport {
        verdict,
        margin,
        worst_sample: worst,
        v_bar: v_bar.samples().to_vec(),
        d: d.to_vec(),
    }
}

fn rotate(angle: f64, v: Vector2<f64>) -> Vector2<f64> {
    let (s, c) = angle.sin_cos();
    Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

struct Hit {
    s2: f64,
    v: f64,
    delta: f64,
}

/// One ruling line against the whole target: scan the target's cells for
/// sign changes of the cross product, refine each, keep the hit nearest the
/// source point.
fn cast_ray(
    p: Vector2<f64>,
    e: Vector2<f64>,
    tangent1: Vector2<f64>,
    target: &PlanarCurve,
) -> Result<Hit, RulingVerdict> {
    let step = target.arc_step();
    let length = target.length();
    let cells = if target.is_closed() {
        target.sample_count()
    } else {
        target.sample_count() - 1
    };
    let miss = |s: f64| e.perp(&(target.position(s) - p));
    let slope = |s: f64| e.perp(&target.tangent(s));
    // node values this close to zero are roots sitting on the grid, which a
    // plain sign-change scan misses half the time
    let eps = 1e-10 * length;
    let polish = |start: f64| -> Option<f64> {
        let mut x = start;
        for _ in 0..4 {
            let d = slope(x);
            if d == 0.0 {
                return None;
            }
            let next = x - miss(x) / d;
            if (next - x).abs() > step {
                return None;
            }
            x = next;
        }
        (miss(x).abs() <= eps).then_some(x)
    };
    let mut best: Option<(f64, f64)> = None;
    let push = |s2: f64, best: &mut Option<(f64, f64)>| {
        let v = (target.position(s2) - p).dot(&e);
        if best.is_none_or(|(_, bv)| v.abs() < bv.abs()) {
            *best = Some((s2, v));
        }
    };
    let mut prev = miss(0.0);
    for cell in 0..cells {
        let lo = cell as f64 * step;
        let hi = lo + step;
        let cur = miss(hi);
        if prev.abs() <= eps {
            if let Some(root) = polish(lo) {
                push(root, &mut best);
            }
        } else if prev * cur < 0.0 {
            let root =
                numeric::solve_monotone(|s| (miss(s), slope(s)), lo, hi, 1e-13 * length);
            push(root, &mut best);
        }
        prev = cur;
    }
    if !target.is_closed() && prev.abs() <= eps {
        if let Some(root) = polish(length) {
            push(root, &mut best);
        }
    }
    let Some((s2, v)) = best else {
        return Err(RulingVerdict::NoIntersection);
    };
    let t2 = target.tangent(s2);
    if e.perp(&t2).abs() < 1e-6 {
        return Err(RulingVerdict::TangentHit);
    }
    Ok(Hit { s2, v, delta: tangent1.perp(&t2).atan2(tangent1.dot(&t2)) })
}

fn cast_all(
    foldline1: &PlanarCurve,
    beta1: &ScalarField,
    foldline2: &PlanarCurve,
) -> Result<Vec<Hit>, (RulingVerdict, usize)> {
    assert_eq!(beta1.len(), foldline1.sample_count());
    let positions = foldline1.sample_positions();
    let step1 = foldline1.arc_step();
    let mut hits = Vec::with_capacity(positions.len());
    for (i, &p) in positions.iter().enumerate() {
        let t1 = foldline1.tangent(i as f64 * step1);
        let e = rotate(beta1.samples()[i], t1);
        match cast_ray(p, e, t1, foldline2) {
            Ok(hit) => hits.push(hit),
            Err(verdict) => return Err((verdict, i)),
        }
    }
    Ok(hits)
}

fn assemble_map(
    foldline1: &PlanarCurve,
    beta1: &ScalarField,
    beta1_prime: &ScalarField,
    foldline2: &PlanarCurve,
    hits: &[Hit],
) -> CorrespondenceMap {
    let n = hits.len();
    let l2 = foldline2.length();
    let closed = foldline1.is_closed();
    let mut s2 = Vec::with_capacity(n);
    s2.push(hits[0].s2);
    for i in 1..n {
        let diff = if closed {
            (hits[i].s2 - hits[i - 1].s2).rem_euclid(l2)
        } else {
            hits[i].s2 - hits[i - 1].s2
        };
        s2.push(s2[i - 1] + diff);
    }
    if !s2.windows(2).all(|w| w[1] > w[0]) {
        log::warn!("ruling correspondence is not strictly increasing along the target");
    }
    let mut delta: Vec<f64> = hits.iter().map(|h| h.delta).collect();
    numeric::unwrap_angles(&mut delta);
    let v_bar = beta1.with_samples(hits.iter().map(|h| h.v).collect(), beta1.lineage());
    let delta = beta1.with_samples(delta, beta1.lineage());
    let kg1 = foldline1.geodesic_curvature();
    let mut vel = Vec::with_capacity(n);
    for i in 0..n {
        let b1 = beta1.samples()[i];
        let b2 = b1 - delta.samples()[i];
        let sin1 = b1.sin();
        let drift = (beta1_prime.samples()[i] + kg1.samples()[i]) / sin1;
        vel.push((sin1 / b2.sin()) * (1.0 - v_bar.samples()[i] * drift));
    }
    let s2_prime = beta1.with_samples(vel, beta1_prime.lineage());
    let s2_second = s2_prime.derivative(1);
    CorrespondenceMap { s2, v_bar, delta, s2_prime, s2_second, length2: l2 }
}

/// Intersect every ruling of a fold side with a target foldline. Rulings are
/// cast as whole lines and the hit nearest the source wins, so the map also
/// covers targets on the far side of the rulings.
pub fn ruling_intersect_general(
    foldline1: &PlanarCurve,
    beta1: &ScalarField,
    foldline2: &PlanarCurve,
) -> Result<CorrespondenceMap, PropagateError> {
    let beta1_prime = beta1.derivative(1);
    match cast_all(foldline1, beta1, foldline2) {
        Ok(hits) => Ok(assemble_map(foldline1, beta1, &beta1_prime, foldline2, &hits)),
        Err((RulingVerdict::TangentHit, _)) => Err(PropagateError::TangentHit),
        Err(_) => Err(PropagateError::NoIntersection),
    }
}

/// One strip of the propagated surface: the fold at its inner ridge, its
/// ruling field, where the rulings land, and the regularity verdict for the
/// crossing to the next foldline.
#[derive(Clone, Debug)]
pub struct PropagatedStrip {
    pub descriptor: FoldDescriptor,
    pub rulings: RulingField,
    pub correspondence: Option<CorrespondenceMap>,
    pub report: RegularityReport,
}

/// Strips swept out by a chain, in order. The chain stops at the first
/// non-regular strip, whose report stays on the last entry.
#[derive(Clone, Debug)]
pub struct ChainResult {
    pub strips: Vec<PropagatedStrip>,
}

impl ChainResult {
    pub fn is_regular(&self) -> bool {
        self.strips.iter().all(|s| s.report.verdict == RulingVerdict::Regular)
    }

    pub fn failure(&self) -> Option<&RegularityReport> {
        self.strips.iter().map(|s| &s.report).find(|r| r.verdict != RulingVerdict::Regular)
    }
}

/// Sweep a seed fold across `targets` in order. Every target but the last
/// carries a new fold, where the sheet folds over to the other side; the
/// last is a plain boundary the final strip runs up to.
pub fn propagate_chain(
    seed: &FoldDescriptor,
    seed_rulings: &RulingField,
    targets: &[Arc<PlanarCurve>],
) -> Result<ChainResult, PropagateError> {
    if !seed.foldline().is_closed() || targets.iter().any(|t| !t.is_closed()) {
        return Err(PropagateError::OpenChain);
    }
    let mut strips = Vec::with_capacity(targets.len());
    let mut current: Option<(FoldDescriptor, RulingField)> = None;
    for (j, target) in targets.iter().enumerate() {
        let (desc, rulings) =
            current.take().unwrap_or_else(|| (seed.clone(), seed_rulings.clone()));
        let (correspondence, report) = match cast_all(desc.foldline(), rulings.beta(), target) {
            Err((verdict, i)) => (
                None,
                RegularityReport {
                    verdict,
                    margin: f64::NAN,
                    worst_sample: i,
                    v_bar: Vec::new(),
                    d: Vec::new(),
                },
            ),
            Ok(hits) => {
                let map = assemble_map(
                    desc.foldline(),
                    rulings.beta(),
                    rulings.beta_prime(),
                    target,
                    &hits,
                );
                let report = regularity_check(map.v_bar(), rulings.regression_distances());
                (Some(map), report)
            }
        };
        let regular = report.verdict == RulingVerdict::Regular;
        if regular && j + 1 < targets.len() {
            let map = correspondence.as_ref().expect("regular strips carry a correspondence");
            current = Some(next_fold(&desc, &rulings, map, target)?);
        }
        strips.push(PropagatedStrip { descriptor: desc, rulings, correspondence, report });
        if !regular {
            break;
        }
    }
    Ok(ChainResult { strips })
}

/// Rebuild the fold at the next foldline: transport the descriptor, fold it
/// over to the other side, sweep the ridge along the rulings, and re-derive
/// the whole fold through the standard construction so properness is checked
/// again on the new ridge.
fn next_fold(
    desc: &FoldDescriptor,
    rulings: &RulingField,
    map: &CorrespondenceMap,
    foldline2: &Arc<PlanarCurve>,
) -> Result<(FoldDescriptor, RulingField), PropagateError> {
    let kn1 = desc.normal_curvature();
    let tau1 = desc.relative_torsion();
    let kg1 = desc.geodesic_curvature();
    let n = kn1.len();
    let l1 = desc.foldline().length();
    let l2 = foldline2.length();
    let h1 = desc.foldline().arc_step();
    let side2 = desc.side().other();

    let mut k2n_bar = Vec::with_capacity(n);
    let mut tau2r_bar = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = transport_descriptor(
            kn1.samples()[i],
            tau1.samples()[i],
            map.delta().samples()[i],
            map.s2_prime().samples()[i],
        );
        k2n_bar.push(a);
        tau2r_bar.push(b);
    }

    // target geodesic curvature pulled back along the correspondence
    let kg2_curve = foldline2.geodesic_curvature();
    let kg2_pull = kn1
        .with_samples(map.s2().iter().map(|&u| kg2_curve.value(u)).collect(), kg2_curve.lineage());
    let kg2_prime = kg2_pull.derivative(1);
    let kn1_prime = kn1.derivative(1);
    let tau1_prime = tau1.derivative(1);

    let mut k2n = Vec::with_capacity(n);
    let mut tau2r = Vec::with_capacity(n);
    for i in 0..n {
        let beta1 = rulings.beta().samples()[i];
        let (a, b) = next_side_descriptor(
            k2n_bar[i],
            tau2r_bar[i],
            map.s2_prime().samples()[i],
            map.s2_second().samples()[i],
            kg1.samples()[i],
            kg2_pull.samples()[i],
            kg2_prime.samples()[i],
            beta1,
            beta1 - map.delta().samples()[i],
            kn1_prime.samples()[i],
            tau1_prime.samples()[i],
        );
        k2n.push(a);
        tau2r.push(b);
    }
    let k2n_field = kn1.with_samples(k2n, map.s2_prime().lineage());
    let tau2r_field = kn1.with_samples(tau2r, map.s2_second().lineage());

    // resample at the target's own uniform grid by inverting s₂(s₁); the
    // linear part is split off so the remainder is periodic
    let lin = l2 / l1;
    let dev = ScalarField::periodic(
        map.s2().iter().enumerate().map(|(i, &u)| u - lin * (i as f64) * h1).collect(),
        l1,
    )?;
    let s2_at = |s: f64| lin * s + dev.value(s);
    let s2_0 = map.s2()[0];
    let mut s2_ext = map.s2().to_vec();
    s2_ext.push(s2_0 + l2);
    let m = foldline2.sample_count();
    let h2 = foldline2.arc_step();
    let kg2_samples = kg2_curve.samples();
    let vbar_prime = map.v_bar().sampled_derivative();

    // the new ridge is evaluated pointwise from the first strip's closed
    // forms: γ₂ = γ₁ + v̄ r with r = cosβ T + sinβ u, its tangent from
    // r′ = (β′ + k_g)(−sinβ T + cosβ u), and its Frenet normal from the
    // Darboux angle of the arriving sheet. Fitting the swept points and
    // differencing the fit instead would leak interpolation ripple into
    // the frames, which the developability audit then amplifies.
    let mut positions = Vec::with_capacity(m);
    let mut tangents = Vec::with_capacity(m);
    let mut normals = Vec::with_capacity(m);
    let mut k2 = Vec::with_capacity(m);
    let mut tau2r_at = Vec::with_capacity(m);
    for j in 0..m {
        let u = s2_0 + (j as f64 * h2 - s2_0).rem_euclid(l2);
        let cell = s2_ext.partition_point(|&x| x <= u).saturating_sub(1).min(n - 1);
        let lo = cell as f64 * h1;
        let s1 = numeric::solve_monotone(
            |s| (s2_at(s) - u, map.s2_prime().value(s)),
            lo,
            lo + h1,
            1e-13 * l1,
        );

        let fr1 = desc.ridge().frenet(s1)?;
        let (sin_a1, cos_a1) = desc.alpha().value(s1).sin_cos();
        let u1 = fr1.n * cos_a1 + fr1.b * sin_a1;
        let n1 = fr1.t.cross(&u1);
        let (sin_b1, cos_b1) = rulings.beta().value(s1).sin_cos();
        let r1 = fr1.t * cos_b1 + u1 * sin_b1;
        let turn = rulings.beta_prime().value(s1) + kg1.value(s1);
        let r1_prime = (u1 * cos_b1 - fr1.t * sin_b1) * turn;
        let vb = map.v_bar().value(s1);
        positions.push(desc.ridge().position(s1) + r1 * vb);
        let t2 = (fr1.t + r1 * vbar_prime.value(s1) + r1_prime * vb).normalize();
        tangents.push(t2);

        let kn_j = k2n_field.value(s1);
        let k2_j = kn_j.hypot(kg2_samples[j]);
        k2.push(k2_j);
        tau2r_at.push(tau2r_field.value(s1));
        // Frenet N from the sheet arriving on side S̄: its Darboux frame
        // along this ridge is (t₂, n₁ × t₂, n₁), and N = cosα u − sinα n
        // with cosα = k₂g/k₂, sinα = −k₂n,S̄/k₂ = k₂n/k₂
        let n2 = (n1.cross(&t2)) * (kg2_samples[j] / k2_j) - n1 * (kn_j / k2_j);
        normals.push((n2 - t2 * n2.dot(&t2)).normalize());
    }
    let alpha2 = ScalarField::periodic(
        (0..m).map(|j| side2.sign() * (kg2_samples[j] / k2[j]).clamp(-1.0, 1.0).acos()).collect(),
        l2,
    )?;
    // the FD estimator matches the one darboux_from_alpha applies when the
    // fold is re-derived, so τ₂r round-trips exactly
    let alpha2_prime = alpha2.sampled_derivative();
    let frames: Vec<FrenetFrame> = (0..m)
        .map(|j| FrenetFrame {
            t: tangents[j],
            n: normals[j],
            b: tangents[j].cross(&normals[j]),
            k: k2[j],
            tau: tau2r_at[j] - alpha2_prime.samples()[j],
        })
        .collect();
    let ridge2 = SpaceCurve::from_frenet_samples(&positions, frames, l2, true)?;
    Ok(fold_along(foldline2, &Arc::new(ridge2), side2)?)
}

/// Add a smooth, compactly supported bump to the relative torsion:
/// `magnitude`·w³·φ̂((s − s₀)/w) with φ̂(u) = exp(1 − 1/(1 − u²)). The peak
/// must stay below `budget`.
pub fn perturb_torsion_bump(
    seed: &FoldDescriptor,
    s0: f64,
    magnitude: f64,
    width: f64,
    budget: f64,
) -> Result<FoldDescriptor, PropagateError> {
    let tau = seed.relative_torsion();
    let span = tau.end() - tau.start();
    assert!(width > 0.0 && width < 0.5 * span);
    let peak = magnitude.abs() * width.powi(3);
    if peak >= budget {
        return Err(PropagateError::PerturbationTooLarge { change: peak, budget });
    }
    let closed = seed.foldline().is_closed();
    let samples = tau
        .positions()
        .zip(tau.samples())
        .map(|(s, &t)| {
            let mut ds = s - s0;
            if closed {
                ds = (ds + 0.5 * span).rem_euclid(span) - 0.5 * span;
            }
            let u = ds / width;
            if u.abs() < 1.0 {
                t + magnitude * width.powi(3) * (1.0 - 1.0 / (1.0 - u * u)).exp()
            } else {
                t
            }
        })
        .collect();
    Ok(seed.with_relative_torsion(tau.with_samples(samples, tau.lineage())))
}

/// Dump a strip's per-sample profile: ruling travel, regression distance,
/// and the descriptor fields at the inner ridge.
pub fn write_strip_csv(strip: &PropagatedStrip, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "s,v_bar,d,k_n,tau_r")?;
    let kn = strip.descriptor.normal_curvature();
    let tau = strip.descriptor.relative_torsion();
    let d = strip.rulings.regression_distances();
    for (i, s) in kn.positions().enumerate() {
        let v = strip.correspondence.as_ref().map_or(f64::NAN, |m| m.v_bar().samples()[i]);
        writeln!(out, "{s},{v},{},{},{}", d[i], kn.samples()[i], tau.samples()[i])?;
    }
    Ok(())
}
