//! Fold construction along one foldline onto one ridge: ruling directions,
//! ruling angles, principal curvature, and the regression distance.

use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{darboux_from_alpha, CurveError, PlanarCurve, SpaceCurve};
use crate::field::ScalarField;
use crate::numeric;

#[derive(Debug, Error)]
pub enum FoldError {
    #[error("foldline length {foldline} does not match ridge length {ridge}")]
    LengthMismatch { foldline: f64, ridge: f64 },
    #[error("foldline and ridge sample grids do not match")]
    GridMismatch,
    #[error("not a proper fold: min(k - k_g, k_g) = {margin:.3e} at s = {s}")]
    NotProper { s: f64, margin: f64 },
    #[error("k_n and τ_r vanish together, ruling direction undefined")]
    Degenerate,
    #[error("ruling tangent to the ridge (sin β = 0)")]
    RulingTangent,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Which of the two proper folds: `Plus` opens the sheet with α ∈ (0, π/2),
/// `Minus` with α ∈ (−π/2, 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// One side of a proper fold: the normal curvature and relative torsion of
/// the sheet along the ridge, plus the curves they were derived from.
#[derive(Clone, Debug)]
pub struct FoldDescriptor {
    side: Side,
    alpha: ScalarField,
    kn: ScalarField,
    tau_r: ScalarField,
    foldline: Arc<PlanarCurve>,
    ridge: Arc<SpaceCurve>,
}

impl FoldDescriptor {
    pub fn side(&self) -> Side {
        self.side
    }

    /// Angle between the sheet's tangent plane and the osculating plane.
    pub fn alpha(&self) -> &ScalarField {
        &self.alpha
    }

    pub fn normal_curvature(&self) -> &ScalarField {
        &self.kn
    }

    pub fn relative_torsion(&self) -> &ScalarField {
        &self.tau_r
    }

    pub fn geodesic_curvature(&self) -> &ScalarField {
        self.foldline.geodesic_curvature()
    }

    pub fn foldline(&self) -> &Arc<PlanarCurve> {
        &self.foldline
    }

    pub fn ridge(&self) -> &Arc<SpaceCurve> {
        &self.ridge
    }

    /// Same fold with a replacement relative-torsion field, for perturbation
    /// studies. The field must live on the descriptor's grid.
    pub fn with_relative_torsion(&self, tau_r: ScalarField) -> FoldDescriptor {
        assert_eq!(tau_r.len(), self.tau_r.len());
        FoldDescriptor { tau_r, ..self.clone() }
    }
}

/// Per-sample ruling data for one fold side.
#[derive(Clone, Debug)]
pub struct RulingField {
    directions: Vec<Vector3<f64>>,
    beta: ScalarField,
    beta_prime: ScalarField,
    d: Vec<f64>,
}

impl RulingField {
    /// Build a ruling field from raw per-sample data, for strips whose
    /// rulings come from somewhere other than a fold construction.
    pub fn from_parts(
        directions: Vec<Vector3<f64>>,
        beta: ScalarField,
        beta_prime: ScalarField,
        d: Vec<f64>,
    ) -> Result<Self, FoldError> {
        if directions.len() != beta.len() || !beta.same_grid(&beta_prime) || d.len() != beta.len()
        {
            return Err(FoldError::GridMismatch);
        }
        if directions.iter().any(|r| r.norm() < 1e-12) {
            return Err(FoldError::Degenerate);
        }
        let directions = directions.into_iter().map(|r| r.normalize()).collect();
        Ok(RulingField { directions, beta, beta_prime, d })
    }

    /// Unit ruling directions, one per ridge sample.
    pub fn directions(&self) -> &[Vector3<f64>] {
        &self.directions
    }

    /// Angle β between the ridge tangent and the ruling, unwrapped.
    pub fn beta(&self) -> &ScalarField {
        &self.beta
    }

    pub fn beta_prime(&self) -> &ScalarField {
        &self.beta_prime
    }

    /// Signed distance along each ruling to the regression point; ±∞ where
    /// neighboring rulings are parallel.
    pub fn regression_distances(&self) -> &[f64] {
        &self.d
    }
}

/// Construct the fold of `foldline` onto `ridge` for the chosen side.
///
/// Both curves must be unit-speed, equally long, and sampled on the same
/// grid. The fold exists iff k > k_g > 0 everywhere.
pub fn fold_along(
    foldline: &Arc<PlanarCurve>,
    ridge: &Arc<SpaceCurve>,
    side: Side,
) -> Result<(FoldDescriptor, RulingField), FoldError> {
    fold_along_with_margin(foldline, ridge, side, None)
}

/// [`fold_along`] with an explicit properness margin; `None` means the
/// default 1e−6·max k.
pub fn fold_along_with_margin(
    foldline: &Arc<PlanarCurve>,
    ridge: &Arc<SpaceCurve>,
    side: Side,
    margin: Option<f64>,
) -> Result<(FoldDescriptor, RulingField), FoldError> {
    let (lf, lr) = (foldline.length(), ridge.length());
    if (lf - lr).abs() > 1e-8 {
        return Err(FoldError::LengthMismatch { foldline: lf, ridge: lr });
    }
    if foldline.sample_count() != ridge.sample_count()
        || foldline.is_closed() != ridge.is_closed()
    {
        return Err(FoldError::GridMismatch);
    }

    let kg = foldline.geodesic_curvature();
    let k = ridge.curvature();
    let eps = margin
        .unwrap_or_else(|| 1e-6 * k.samples().iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let mut worst = (0, f64::INFINITY);
    for (i, (&ki, &gi)) in k.samples().iter().zip(kg.samples()).enumerate() {
        let m = (ki - gi).min(gi);
        if m < worst.1 {
            worst = (i, m);
        }
    }
    if worst.1 < eps {
        return Err(FoldError::NotProper {
            s: k.start() + worst.0 as f64 * k.step(),
            margin: worst.1,
        });
    }

    // k_g is preserved by the fold, so cos α = k_g/k fixes α up to sign
    let alpha_samples: Vec<f64> = k
        .samples()
        .iter()
        .zip(kg.samples())
        .map(|(&ki, &gi)| side.sign() * (gi / ki).clamp(-1.0, 1.0).acos())
        .collect();
    let alpha = k.with_samples(alpha_samples, k.lineage().max(kg.lineage()));
    let darboux = darboux_from_alpha(ridge, &alpha)?;

    let desc = FoldDescriptor {
        side,
        alpha,
        kn: darboux.kn,
        tau_r: darboux.tau_r,
        foldline: Arc::clone(foldline),
        ridge: Arc::clone(ridge),
    };
    let rulings = ruling_field(&desc)?;
    Ok((desc, rulings))
}

/// Assemble the per-sample ruling data for a descriptor.
pub fn ruling_field(desc: &FoldDescriptor) -> Result<RulingField, FoldError> {
    let kn = &desc.kn;
    let tau_r = &desc.tau_r;
    if kn.samples().iter().zip(tau_r.samples()).any(|(&n, &t)| n * n + t * t == 0.0) {
        return Err(FoldError::Degenerate);
    }

    let mut beta_samples: Vec<f64> =
        kn.samples().iter().zip(tau_r.samples()).map(|(&n, &t)| (-n).atan2(t)).collect();
    numeric::unwrap_angles(&mut beta_samples);
    let lineage = kn.lineage().max(tau_r.lineage());
    let beta = kn.with_samples(beta_samples, lineage);

    let kn1 = kn.derivative(1);
    let tau_r1 = tau_r.derivative(1);
    let beta_prime_samples: Vec<f64> = (0..kn.len())
        .map(|i| {
            let (n, n1) = (kn.samples()[i], kn1.samples()[i]);
            let (t, t1) = (tau_r.samples()[i], tau_r1.samples()[i]);
            (t1 * n - n1 * t) / (t * t + n * n)
        })
        .collect();
    let beta_prime = kn.with_samples(beta_prime_samples, lineage + 1);

    let mut directions = Vec::with_capacity(kn.len());
    for i in 0..kn.len() {
        let frame = desc.ridge.frame_at_sample(i);
        let (sin_a, cos_a) = desc.alpha.samples()[i].sin_cos();
        let u = frame.n * cos_a + frame.b * sin_a;
        let r = frame.t * tau_r.samples()[i] - u * kn.samples()[i];
        directions.push(r.normalize());
    }

    let kg = desc.foldline.geodesic_curvature();
    let d = (0..kn.len())
        .map(|i| beta.samples()[i].sin() / (beta_prime.samples()[i] + kg.samples()[i]))
        .collect();

    Ok(RulingField { directions, beta, beta_prime, d })
}

/// Unit ruling direction at arc length s, from the descriptor fields.
pub fn ruling_direction(desc: &FoldDescriptor, s: f64) -> Result<Vector3<f64>, FoldError> {
    let kn = desc.kn.value(s);
    let tau_r = desc.tau_r.value(s);
    if kn * kn + tau_r * tau_r == 0.0 {
        return Err(FoldError::Degenerate);
    }
    let frame = desc.ridge.frenet(s)?;
    let (sin_a, cos_a) = desc.alpha.value(s).sin_cos();
    let u = frame.n * cos_a + frame.b * sin_a;
    Ok((frame.t * tau_r - u * kn).normalize())
}

/// Angle β between ridge tangent and ruling, and its arc-length derivative:
/// cos β = τ_r/√(τ_r²+k_n²), sin β = −k_n/√(τ_r²+k_n²),
/// β′ = (τ_r′k_n − k_n′τ_r)/(τ_r²+k_n²).
pub fn ruling_angle(
    kn: f64,
    tau_r: f64,
    kn_prime: f64,
    tau_r_prime: f64,
) -> Result<(f64, f64), FoldError> {
    let norm2 = kn * kn + tau_r * tau_r;
    if norm2 == 0.0 {
        return Err(FoldError::Degenerate);
    }
    Ok(((-kn).atan2(tau_r), (tau_r_prime * kn - kn_prime * tau_r) / norm2))
}

/// Nonzero principal curvature of the fold surface at the ridge: k_n/sin²β.
pub fn principal_curvature(kn: f64, beta: f64) -> Result<f64, FoldError> {
    let sin_b = beta.sin();
    if sin_b.abs() < 1e-12 {
        return Err(FoldError::RulingTangent);
    }
    Ok(kn / (sin_b * sin_b))
}

/// Signed distance along the ruling to the regression point. Division by
/// zero is meaningful here: parallel rulings put the point at ±∞.
pub fn regression_distance(beta: f64, beta_prime: f64, kg: f64) -> f64 {
    beta.sin() / (beta_prime + kg)
}

/// Field-level side flip: negate k_n and shift τ_r by the mixed-derivative
/// correction 2(k_g′k_n − k_g k_n′)/(k_g² + k_n²). Fields are zipped by
/// sample index, so they must share a sample count.
pub fn flip_fields(
    kg: &ScalarField,
    kn: &ScalarField,
    tau_r: &ScalarField,
) -> (ScalarField, ScalarField) {
    assert_eq!(kg.len(), kn.len());
    assert_eq!(kn.len(), tau_r.len());
    let kg1 = kg.derivative(1);
    let kn1 = kn.derivative(1);
    let flipped: Vec<f64> = (0..kn.len())
        .map(|i| {
            let (g, g1) = (kg.samples()[i], kg1.samples()[i]);
            let (n, n1) = (kn.samples()[i], kn1.samples()[i]);
            tau_r.samples()[i] - 2.0 * (g1 * n - g * n1) / (g * g + n * n)
        })
        .collect();
    let lineage = tau_r.lineage().max(kg1.lineage()).max(kn1.lineage());
    (kn.map(|v| -v), tau_r.with_samples(flipped, lineage))
}

/// The descriptor of the other side of the same fold.
pub fn flip_side(desc: &FoldDescriptor) -> FoldDescriptor {
    let (kn, tau_r) = flip_fields(desc.foldline.geodesic_curvature(), &desc.kn, &desc.tau_r);
    FoldDescriptor {
        side: desc.side.other(),
        alpha: desc.alpha.map(|a| -a),
        kn,
        tau_r,
        foldline: Arc::clone(&desc.foldline),
        ridge: Arc::clone(&desc.ridge),
    }
}

/// Dump per-sample diagnostics as `s,alpha,beta,beta_prime,d,k_p` CSV.
pub fn write_fold_csv(
    desc: &FoldDescriptor,
    rulings: &RulingField,
    out: &mut impl Write,
) -> io::Result<()> {
    writeln!(out, "s,alpha,beta,beta_prime,d,k_p")?;
    for (i, s) in desc.kn.positions().enumerate() {
        let alpha = desc.alpha.samples()[i];
        let beta = rulings.beta.samples()[i];
        let bp = rulings.beta_prime.samples()[i];
        let d = rulings.d[i];
        let sin_b = beta.sin();
        let k_p = desc.kn.samples()[i] / (sin_b * sin_b);
        writeln!(out, "{s},{alpha},{beta},{bp},{d},{k_p}")?;
    }
    Ok(())
}
