//! Arc-length-parametrized planar and space curves, Frenet frames, and the
//! foldline-angle bookkeeping that ties scalar fields to a moving frame.

use std::io::{self, BufRead, Write};

use nalgebra::{Vector2, Vector3};
use thiserror::Error;

use crate::field::{FieldError, ScalarField};
use crate::numeric;

/// Curvature floor below which the Frenet frame is reported undefined.
pub const CURVATURE_FLOOR: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("speed vanishes near parameter {t}")]
    VanishingSpeed { t: f64 },
    #[error("curvature {k} at s = {s} is below the frame floor")]
    FrameUndefined { s: f64, k: f64 },
    #[error("k_g and k_n vanish together at s = {s}")]
    Degenerate { s: f64 },
    #[error("fields are on different grids")]
    GridMismatch,
    #[error("CSV line {line}: {what}")]
    Csv { line: usize, what: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Frenet data of a space curve at one arc length.
#[derive(Clone, Copy, Debug)]
pub struct FrenetFrame {
    pub t: Vector3<f64>,
    pub n: Vector3<f64>,
    pub b: Vector3<f64>,
    pub k: f64,
    pub tau: f64,
}

/// Closed or open planar curve, unit-speed, with signed geodesic curvature.
#[derive(Clone, Debug)]
pub struct PlanarCurve {
    x: ScalarField,
    y: ScalarField,
    kg: ScalarField,
    closed: bool,
}

/// Closed or open space curve, unit-speed, with curvature and torsion
/// fields and per-sample Frenet frames.
#[derive(Clone, Debug)]
pub struct SpaceCurve {
    x: ScalarField,
    y: ScalarField,
    z: ScalarField,
    k: ScalarField,
    tau: ScalarField,
    frames: Vec<FrenetFrame>,
    closed: bool,
}

impl PlanarCurve {
    /// Build from unit-speed samples and a matching geodesic curvature.
    pub fn from_unit_speed_samples(
        positions: &[Vector2<f64>],
        kg: Vec<f64>,
        length: f64,
        closed: bool,
    ) -> Result<Self, CurveError> {
        assert_eq!(positions.len(), kg.len());
        let fit = |vals: Vec<f64>| field_over_length(vals, length, closed);
        let x = fit(positions.iter().map(|p| p.x).collect())?;
        let y = fit(positions.iter().map(|p| p.y).collect())?;
        let kg = fit(kg)?;
        Ok(PlanarCurve { x, y, kg, closed })
    }

    /// Counter-clockwise circle of the given radius, centered at the origin.
    pub fn circle(radius: f64, n: usize) -> Self {
        let length = 2.0 * std::f64::consts::PI * radius;
        let positions: Vec<Vector2<f64>> = (0..n)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Vector2::new(radius * phi.cos(), radius * phi.sin())
            })
            .collect();
        Self::from_unit_speed_samples(&positions, vec![1.0 / radius; n], length, true)
            .expect("circle samples are well formed")
    }

    /// Uniform scaling about the origin; arc length scales with it and the
    /// geodesic curvature against it.
    pub fn scale(&self, factor: f64) -> Self {
        assert!(factor > 0.0);
        let length = self.length() * factor;
        let positions: Vec<Vector2<f64>> =
            self.sample_positions().iter().map(|p| p * factor).collect();
        let kg = self.kg.samples().iter().map(|v| v / factor).collect();
        Self::from_unit_speed_samples(&positions, kg, length, self.closed)
            .expect("scaling preserves well-formedness")
    }

    pub fn length(&self) -> f64 {
        self.x.end() - self.x.start()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn sample_count(&self) -> usize {
        self.x.len()
    }

    pub fn arc_step(&self) -> f64 {
        self.x.step()
    }

    pub fn position(&self, s: f64) -> Vector2<f64> {
        Vector2::new(self.x.value(s), self.y.value(s))
    }

    pub fn tangent(&self, s: f64) -> Vector2<f64> {
        Vector2::new(self.x.derivative_value(s, 1), self.y.derivative_value(s, 1)).normalize()
    }

    pub fn sample_positions(&self) -> Vec<Vector2<f64>> {
        self.x
            .samples()
            .iter()
            .zip(self.y.samples())
            .map(|(&x, &y)| Vector2::new(x, y))
            .collect()
    }

    pub fn geodesic_curvature(&self) -> &ScalarField {
        &self.kg
    }

    /// Total turning ∫ k_g ds; 2π for a closed convex counter-clockwise loop.
    pub fn total_turning(&self) -> f64 {
        self.kg.integral()
    }

    /// Parse `s,x,y` lines; the leading parameter column need not be arc
    /// length but must be uniformly spaced.
    pub fn from_csv(reader: impl BufRead, closed: bool) -> Result<Self, CurveError> {
        let rows = parse_csv(reader, 3)?;
        let positions: Vec<Vector2<f64>> =
            rows.iter().map(|r| Vector2::new(r[1], r[2])).collect();
        arclength_reparametrize_planar(&positions, closed)
    }

    /// Write `s,x,y` CSV lines at the sample grid.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "s,x,y")?;
        for (s, p) in self.x.positions().zip(self.sample_positions()) {
            writeln!(out, "{s},{},{}", p.x, p.y)?;
        }
        Ok(())
    }
}

impl SpaceCurve {
    /// Build from unit-speed samples with known curvature and torsion.
    pub fn from_unit_speed_samples(
        positions: &[Vector3<f64>],
        k: Vec<f64>,
        tau: Vec<f64>,
        length: f64,
        closed: bool,
    ) -> Result<Self, CurveError> {
        assert_eq!(positions.len(), k.len());
        assert_eq!(positions.len(), tau.len());
        let fit = |vals: Vec<f64>| field_over_length(vals, length, closed);
        let x = fit(positions.iter().map(|p| p.x).collect())?;
        let y = fit(positions.iter().map(|p| p.y).collect())?;
        let z = fit(positions.iter().map(|p| p.z).collect())?;
        let k = fit(k)?;
        let tau = fit(tau)?;
        let mut curve = SpaceCurve { x, y, z, k, tau, frames: Vec::new(), closed };
        let frames: Vec<FrenetFrame> =
            curve.k.positions().map(|s| curve.frame_from_fields(s)).collect();
        curve.frames = frames;
        curve.sharpen_node_frames(positions);
        Ok(curve)
    }

    /// Build from unit-speed samples whose Frenet frames are known in
    /// closed form. The frames are installed verbatim instead of being
    /// differenced out of the positions, so generators with exact
    /// derivatives keep node data consistent to machine precision.
    pub fn from_frenet_samples(
        positions: &[Vector3<f64>],
        frames: Vec<FrenetFrame>,
        length: f64,
        closed: bool,
    ) -> Result<Self, CurveError> {
        assert_eq!(positions.len(), frames.len());
        let k = frames.iter().map(|f| f.k).collect();
        let tau = frames.iter().map(|f| f.tau).collect();
        let mut curve = Self::from_unit_speed_samples(positions, k, tau, length, closed)?;
        curve.frames = frames;
        Ok(curve)
    }

    /// Rebuild node frames from eighth-order differences of the position
    /// samples where the stencil fits. Spline node derivatives wobble at
    /// the fit's truncation scale; differencing the raw samples keeps the
    /// frames consistent with the data to near machine precision, which
    /// downstream developability checks depend on.
    fn sharpen_node_frames(&mut self, positions: &[Vector3<f64>]) {
        const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        const D2: [f64; 5] =
            [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
        let n = positions.len();
        if n < 9 {
            return;
        }
        let h = self.arc_step();
        for i in 0..n {
            if !self.closed && (i < 4 || i + 4 >= n) {
                continue;
            }
            let mut d1 = Vector3::zeros();
            let mut d2 = positions[i] * D2[0];
            for j in 1..=4 {
                let fwd = positions[(i + j) % n];
                let bwd = positions[(i + n - j) % n];
                d1 += (fwd - bwd) * D1[j - 1];
                d2 += (fwd + bwd) * D2[j];
            }
            let t = (d1 / h).normalize();
            let acc = d2 / (h * h);
            let normal = acc - t * acc.dot(&t);
            if normal.norm() < 1e-9 {
                continue;
            }
            let normal = normal.normalize();
            self.frames[i].t = t;
            self.frames[i].n = normal;
            self.frames[i].b = t.cross(&normal);
        }
    }

    pub fn length(&self) -> f64 {
        self.x.end() - self.x.start()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn sample_count(&self) -> usize {
        self.x.len()
    }

    pub fn arc_step(&self) -> f64 {
        self.x.step()
    }

    pub fn position(&self, s: f64) -> Vector3<f64> {
        Vector3::new(self.x.value(s), self.y.value(s), self.z.value(s))
    }

    pub fn derivative(&self, s: f64, m: u32) -> Vector3<f64> {
        Vector3::new(
            self.x.derivative_value(s, m),
            self.y.derivative_value(s, m),
            self.z.derivative_value(s, m),
        )
    }

    pub fn sample_positions(&self) -> Vec<Vector3<f64>> {
        self.x
            .samples()
            .iter()
            .zip(self.y.samples().iter().zip(self.z.samples()))
            .map(|(&x, (&y, &z))| Vector3::new(x, y, z))
            .collect()
    }

    pub fn curvature(&self) -> &ScalarField {
        &self.k
    }

    pub fn torsion(&self) -> &ScalarField {
        &self.tau
    }

    /// Frenet frame at sample index i, precomputed at construction.
    pub fn frame_at_sample(&self, i: usize) -> &FrenetFrame {
        &self.frames[i]
    }

    /// Frenet data at arc length s; curvature below the floor means the
    /// normal direction is not identifiable.
    pub fn frenet(&self, s: f64) -> Result<FrenetFrame, CurveError> {
        let k = self.k.value(s);
        if k < CURVATURE_FLOOR {
            return Err(CurveError::FrameUndefined { s, k });
        }
        Ok(self.frame_from_fields(s))
    }

    fn frame_from_fields(&self, s: f64) -> FrenetFrame {
        let t = self.derivative(s, 1).normalize();
        let acc = self.derivative(s, 2);
        // remove any tangential residue before normalizing into N
        let n = (acc - t * acc.dot(&t)).normalize();
        let b = t.cross(&n);
        FrenetFrame { t, n, b, k: self.k.value(s), tau: self.tau.value(s) }
    }

    /// Uniform scaling about the origin: positions and arc length by the
    /// factor, curvature and torsion against it. Frame directions are
    /// scale-invariant and carry over unchanged.
    pub fn scale(&self, factor: f64) -> Self {
        assert!(factor > 0.0);
        let length = self.length() * factor;
        let positions: Vec<Vector3<f64>> =
            self.sample_positions().iter().map(|p| p * factor).collect();
        let frames: Vec<FrenetFrame> = self
            .frames
            .iter()
            .map(|f| FrenetFrame { t: f.t, n: f.n, b: f.b, k: f.k / factor, tau: f.tau / factor })
            .collect();
        Self::from_frenet_samples(&positions, frames, length, self.closed)
            .expect("scaling preserves well-formedness")
    }

    /// Parse `s,x,y,z` lines; see [`PlanarCurve::from_csv`].
    pub fn from_csv(reader: impl BufRead, closed: bool) -> Result<Self, CurveError> {
        let rows = parse_csv(reader, 4)?;
        let positions: Vec<Vector3<f64>> =
            rows.iter().map(|r| Vector3::new(r[1], r[2], r[3])).collect();
        arclength_reparametrize_space(&positions, closed)
    }

    /// Write `s,x,y,z` CSV lines at the sample grid.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "s,x,y,z")?;
        for (s, p) in self.x.positions().zip(self.sample_positions()) {
            writeln!(out, "{s},{},{},{}", p.x, p.y, p.z)?;
        }
        Ok(())
    }
}

/// Darboux-frame data of a folded curve: the ruled-surface frame vectors
/// and the scalar fields tied to them.
#[derive(Clone, Debug)]
pub struct DarbouxData {
    /// In-surface normal u = cos(α)N + sin(α)B per sample.
    pub u: Vec<Vector3<f64>>,
    /// Surface normal n = T × u per sample.
    pub n: Vec<Vector3<f64>>,
    pub kg: ScalarField,
    pub kn: ScalarField,
    pub tau_r: ScalarField,
    pub alpha: ScalarField,
}

/// Split curvature and torsion along a surface whose tangent plane makes
/// angle α with the osculating plane: k_g = cos(α)k, k_n = −sin(α)k,
/// τ_r = τ + α′.
pub fn darboux_from_alpha(curve: &SpaceCurve, alpha: &ScalarField) -> Result<DarbouxData, CurveError> {
    if !curve.k.same_grid(alpha) {
        return Err(CurveError::GridMismatch);
    }
    let k = &curve.k;
    let tau = &curve.tau;
    let kg =
        k.with_samples(zip_map(k, alpha, |k, a| a.cos() * k), k.lineage().max(alpha.lineage()));
    let kn =
        k.with_samples(zip_map(k, alpha, |k, a| -a.sin() * k), k.lineage().max(alpha.lineage()));
    let alpha_prime = alpha.sampled_derivative();
    let tau_r = tau.with_samples(
        zip_map(tau, &alpha_prime, |t, ap| t + ap),
        tau.lineage().max(alpha_prime.lineage()),
    );
    let mut u = Vec::with_capacity(k.len());
    let mut n = Vec::with_capacity(k.len());
    for (i, s) in alpha.positions().enumerate() {
        let frame = curve.frame_at_sample(i);
        let (sin_a, cos_a) = alpha.value(s).sin_cos();
        let ui = frame.n * cos_a + frame.b * sin_a;
        u.push(ui);
        n.push(frame.t.cross(&ui));
    }
    Ok(DarbouxData { u, n, kg, kn, tau_r, alpha: alpha.clone() })
}

/// Recover the surface angle from the split curvatures: α = atan2(−k_n, k_g),
/// unwrapped continuously along the curve.
pub fn alpha_from_descriptor(kg: &ScalarField, kn: &ScalarField) -> Result<ScalarField, CurveError> {
    if !kg.same_grid(kn) {
        return Err(CurveError::GridMismatch);
    }
    if let Some(i) = kg
        .samples()
        .iter()
        .zip(kn.samples())
        .position(|(&g, &n)| g * g + n * n == 0.0)
    {
        return Err(CurveError::Degenerate { s: kg.start() + i as f64 * kg.step() });
    }
    let mut angles = zip_map(kg, kn, |g, n| (-n).atan2(g));
    numeric::unwrap_angles(&mut angles);
    Ok(kg.with_samples(angles, kg.lineage().max(kn.lineage())))
}

fn zip_map(a: &ScalarField, b: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.samples().iter().zip(b.samples()).map(|(&x, &y)| f(x, y)).collect()
}

/// Resample a generally parametrized planar curve to unit speed. Input
/// samples are taken as uniform in the parameter; for closed curves the
/// first sample must not be repeated at the end.
pub fn arclength_reparametrize_planar(
    positions: &[Vector2<f64>],
    closed: bool,
) -> Result<PlanarCurve, CurveError> {
    let n = positions.len();
    let param = ParamFit::new(
        vec![
            positions.iter().map(|p| p.x).collect(),
            positions.iter().map(|p| p.y).collect(),
        ],
        closed,
    )?;
    let length = param.length();
    let targets = arc_targets(n, length, closed);
    let mut resampled = Vec::with_capacity(n);
    let mut kg = Vec::with_capacity(n);
    for &s in &targets {
        let t = param.param_at(s);
        let d1 = param.derivative(t, 1);
        let d2 = param.derivative(t, 2);
        let speed_sq = d1[0] * d1[0] + d1[1] * d1[1];
        resampled.push(Vector2::new(param.value(t, 0), param.value(t, 1)));
        kg.push((d1[0] * d2[1] - d1[1] * d2[0]) / speed_sq.powf(1.5));
    }
    PlanarCurve::from_unit_speed_samples(&resampled, kg, length, closed)
}

/// Resample a generally parametrized space curve to unit speed, deriving
/// curvature and torsion from the parameter-domain interpolant.
pub fn arclength_reparametrize_space(
    positions: &[Vector3<f64>],
    closed: bool,
) -> Result<SpaceCurve, CurveError> {
    let n = positions.len();
    let param = ParamFit::new(
        vec![
            positions.iter().map(|p| p.x).collect(),
            positions.iter().map(|p| p.y).collect(),
            positions.iter().map(|p| p.z).collect(),
        ],
        closed,
    )?;
    let length = param.length();
    let targets = arc_targets(n, length, closed);
    let mut resampled = Vec::with_capacity(n);
    let mut k = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    for &s in &targets {
        let t = param.param_at(s);
        let d1 = Vector3::from_row_slice(&param.derivative(t, 1));
        let d2 = Vector3::from_row_slice(&param.derivative(t, 2));
        let d3 = Vector3::from_row_slice(&param.derivative(t, 3));
        resampled.push(Vector3::new(param.value(t, 0), param.value(t, 1), param.value(t, 2)));
        let cross = d1.cross(&d2);
        let cross_sq = cross.norm_squared();
        k.push(cross_sq.sqrt() / d1.norm().powi(3));
        // torsion degenerates with the frame; report 0 where k ≈ 0
        tau.push(if cross_sq > 0.0 { cross.dot(&d3) / cross_sq } else { 0.0 });
    }
    SpaceCurve::from_unit_speed_samples(&resampled, k, tau, length, closed)
}

/// Evenly spaced arc-length targets covering [0, L) or [0, L].
fn arc_targets(n: usize, length: f64, closed: bool) -> Vec<f64> {
    let denom = if closed { n } else { n - 1 } as f64;
    (0..n).map(|i| length * i as f64 / denom).collect()
}

/// Componentwise spline fit of curve samples over a unit parameter range,
/// with arc-length bookkeeping for reparametrization.
struct ParamFit {
    components: Vec<ScalarField>,
    /// cumulative arc length at subdivided parameter nodes
    cumulative: Vec<f64>,
    t_nodes: Vec<f64>,
}

impl ParamFit {
    const REFINE: usize = 4;

    fn new(component_samples: Vec<Vec<f64>>, closed: bool) -> Result<Self, CurveError> {
        let n = component_samples[0].len();
        let components: Result<Vec<ScalarField>, FieldError> = component_samples
            .into_iter()
            .map(|vals| {
                if closed {
                    ScalarField::periodic(vals, 1.0)
                } else {
                    ScalarField::open(vals, 0.0, 1.0)
                }
            })
            .collect();
        let components = components?;
        let fit = ParamFit { components, cumulative: Vec::new(), t_nodes: Vec::new() };

        // speed must stay positive for the parametrization to be regular
        let cells = if closed { n } else { n - 1 };
        let sub = cells * Self::REFINE;
        let mut speeds = Vec::with_capacity(sub + 1);
        for i in 0..=sub {
            speeds.push(fit.speed(i as f64 / sub as f64));
        }
        let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
        if let Some(i) = speeds.iter().position(|&v| v < 1e-9 * max_speed) {
            return Err(CurveError::VanishingSpeed { t: i as f64 / sub as f64 });
        }

        let mut t_nodes = Vec::with_capacity(sub + 1);
        let mut cumulative = Vec::with_capacity(sub + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        t_nodes.push(0.0);
        for i in 0..sub {
            let a = i as f64 / sub as f64;
            let b = (i + 1) as f64 / sub as f64;
            acc += numeric::integrate(|t| fit.speed(t), a, b, 1);
            cumulative.push(acc);
            t_nodes.push(b);
        }
        Ok(ParamFit { cumulative, t_nodes, ..fit })
    }

    fn speed(&self, t: f64) -> f64 {
        self.components.iter().map(|c| c.derivative_value(t, 1).powi(2)).sum::<f64>().sqrt()
    }

    fn value(&self, t: f64, component: usize) -> f64 {
        self.components[component].value(t)
    }

    fn derivative(&self, t: f64, m: u32) -> Vec<f64> {
        self.components.iter().map(|c| c.derivative_value(t, m)).collect()
    }

    fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Invert s(t) by bracketed Newton on the subdivided cumulative table.
    fn param_at(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length());
        let idx = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => return self.t_nodes[i],
            Err(i) => i - 1,
        };
        let (t_lo, t_hi) = (self.t_nodes[idx], self.t_nodes[idx + 1]);
        let s_lo = self.cumulative[idx];
        numeric::solve_monotone(
            |t| {
                let v = s_lo + numeric::integrate(|u| self.speed(u), t_lo, t, 1) - s;
                (v, self.speed(t))
            },
            t_lo,
            t_hi,
            1e-15,
        )
    }
}

fn field_over_length(values: Vec<f64>, length: f64, closed: bool) -> Result<ScalarField, FieldError> {
    if closed {
        ScalarField::periodic(values, length)
    } else {
        ScalarField::open(values, 0.0, length)
    }
}

fn parse_csv(reader: impl BufRead, columns: usize) -> Result<Vec<Vec<f64>>, CurveError> {
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if lineno == 0 && trimmed.chars().any(|c| c.is_alphabetic()) {
            continue; // header
        }
        let fields: Result<Vec<f64>, _> = trimmed.split(',').map(|f| f.trim().parse()).collect();
        let fields = fields.map_err(|e| CurveError::Csv {
            line: lineno + 1,
            what: format!("{e}"),
        })?;
        if fields.len() != columns {
            return Err(CurveError::Csv {
                line: lineno + 1,
                what: format!("expected {columns} columns, got {}", fields.len()),
            });
        }
        rows.push(fields);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    fn ellipse(n: usize) -> Vec<Vector2<f64>> {
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector2::new(2.0 * t.cos(), t.sin())
            })
            .collect()
    }

    #[test]
    fn unit_circle_passes_through_unchanged() {
        let n = 256;
        let pts: Vec<Vector2<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector2::new(t.cos(), t.sin())
            })
            .collect();
        let curve = arclength_reparametrize_planar(&pts, true).unwrap();
        assert_relative_eq!(curve.length(), TAU, max_relative = 1e-10);
        for (p, q) in curve.sample_positions().iter().zip(&pts) {
            assert!((p - q).norm() < 1e-9);
        }
        assert_relative_eq!(curve.total_turning(), TAU, epsilon = 1e-7);
    }

    #[test]
    fn ellipse_reparametrization_is_unit_speed() {
        let curve = arclength_reparametrize_planar(&ellipse(512), true).unwrap();
        // independent perimeter: fine composite quadrature of the defining map
        let perimeter = numeric::integrate(
            |t| (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt(),
            0.0,
            TAU,
            64,
        );
        assert_relative_eq!(curve.length(), perimeter, max_relative = 1e-8);
        let h = 1e-5;
        for &s in &[0.3, 2.0, 5.5] {
            let speed = (curve.position(s + h) - curve.position(s - h)).norm() / (2.0 * h);
            assert_relative_eq!(speed, 1.0, epsilon = 1e-7);
        }
        assert_relative_eq!(curve.total_turning(), TAU, epsilon = 1e-6);
    }

    #[test]
    fn reparametrization_is_idempotent() {
        let once = arclength_reparametrize_planar(&ellipse(512), true).unwrap();
        let twice = arclength_reparametrize_planar(&once.sample_positions(), true).unwrap();
        for (p, q) in once.sample_positions().iter().zip(twice.sample_positions()) {
            assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn helix_frenet_matches_closed_form() {
        let (a, b) = (1.5, 0.4);
        let n = 512;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / (n - 1) as f64;
                Vector3::new(a * t.cos(), a * t.sin(), b * t)
            })
            .collect();
        let curve = arclength_reparametrize_space(&pts, false).unwrap();
        let denom = a * a + b * b;
        let mid = curve.length() / 2.0;
        let frame = curve.frenet(mid).unwrap();
        assert_relative_eq!(frame.k, a / denom, max_relative = 1e-8);
        assert_relative_eq!(frame.tau, b / denom, max_relative = 1e-7);
        // orthonormality
        assert_relative_eq!(frame.t.norm(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(frame.t.dot(&frame.n), 0.0, epsilon = 1e-10);
        assert_relative_eq!(frame.b.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn frenet_relations_hold_in_finite_differences() {
        let n = 1024;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector3::new((2.0 + 0.3 * (3.0 * t).cos()) * t.cos(), (2.0 + 0.3 * (3.0 * t).cos()) * t.sin(), 0.4 * (3.0 * t).sin())
            })
            .collect();
        let curve = arclength_reparametrize_space(&pts, true).unwrap();
        let h = curve.length() / 4096.0;
        for &s in &[1.0, 4.0, 9.0] {
            let f = curve.frenet(s).unwrap();
            let fp = curve.frenet(s + h).unwrap();
            let fm = curve.frenet(s - h).unwrap();
            let t_prime = (fp.t - fm.t) / (2.0 * h);
            assert!((t_prime - f.n * f.k).norm() < 1e-4 * f.k.max(1.0));
            let b_prime = (fp.b - fm.b) / (2.0 * h);
            assert!((b_prime + f.n * f.tau).norm() < 1e-4 * f.k.max(1.0));
        }
    }

    #[test]
    fn straight_segment_has_no_frame() {
        let pts: Vec<Vector3<f64>> =
            (0..64).map(|i| Vector3::new(i as f64 / 63.0, 0.0, 0.0)).collect();
        let curve = arclength_reparametrize_space(&pts, false).unwrap();
        assert!(matches!(curve.frenet(0.5), Err(CurveError::FrameUndefined { .. })));
    }

    #[test]
    fn vanishing_speed_is_rejected_with_location() {
        // cusp of (t³, t²) at t = 0 — sampled symmetrically around it
        let pts: Vec<Vector2<f64>> = (0..65)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / 64.0;
                Vector2::new(t * t * t, t * t)
            })
            .collect();
        match arclength_reparametrize_planar(&pts, false) {
            Err(CurveError::VanishingSpeed { t }) => assert!((t - 0.5).abs() < 0.05),
            other => panic!("expected vanishing speed, got {other:?}"),
        }
    }

    #[test]
    fn darboux_relations_roundtrip() {
        // circle of radius 1/2 in space: k ≡ 2, τ ≡ 0
        let n = 256;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vector3::new(0.5 * t.cos(), 0.5 * t.sin(), 0.0)
            })
            .collect();
        let curve = arclength_reparametrize_space(&pts, true).unwrap();
        let length = curve.length();
        assert_relative_eq!(length, PI, max_relative = 1e-9);

        // α ≡ 0 keeps the osculating split trivial
        let zero = ScalarField::periodic_fn(n, length, |_| 0.0).unwrap();
        let data = darboux_from_alpha(&curve, &zero).unwrap();
        assert_relative_eq!(data.kg.value(1.0), 2.0, max_relative = 1e-8);
        assert_relative_eq!(data.kn.value(1.0), 0.0, epsilon = 1e-10);

        // α(s) = 0.3 sin(2πs/L) gives τ_r = α′ since τ = 0
        let omega = TAU / length;
        let alpha = ScalarField::periodic_fn(n, length, |s| 0.3 * (omega * s).sin()).unwrap();
        let data = darboux_from_alpha(&curve, &alpha).unwrap();
        for &s in &[0.2, 1.1, 2.9] {
            let want = 0.3 * omega * (omega * s).cos();
            assert_relative_eq!(data.tau_r.value(s), want, epsilon = 1e-8);
            // three defining relations
            let a = alpha.value(s);
            assert_relative_eq!(data.kg.value(s), a.cos() * 2.0, epsilon = 1e-8);
            assert_relative_eq!(data.kn.value(s), -a.sin() * 2.0, epsilon = 1e-8);
        }
        // frame orthonormality and n = T × u
        for (i, s) in alpha.positions().enumerate().step_by(37) {
            let frame = curve.frenet(s).unwrap();
            assert_relative_eq!(data.u[i].norm(), 1.0, epsilon = 1e-8);
            assert_relative_eq!(data.u[i].dot(&frame.t), 0.0, epsilon = 1e-8);
            assert!((data.n[i] - frame.t.cross(&data.u[i])).norm() < 1e-12);
        }

        // roundtrip: alpha_from_descriptor recovers α and k = √(k_g²+k_n²)
        let alpha_back = alpha_from_descriptor(&data.kg, &data.kn).unwrap();
        for &s in &[0.0, 0.7, 2.2] {
            assert_relative_eq!(alpha_back.value(s), alpha.value(s), epsilon = 1e-10);
            let k_back = (data.kg.value(s).powi(2) + data.kn.value(s).powi(2)).sqrt();
            assert_relative_eq!(k_back, curve.curvature().value(s), epsilon = 1e-10);
        }
    }

    #[test]
    fn degenerate_descriptor_is_reported() {
        let vals: Vec<f64> = (0..16).map(|i| i as f64 - 6.0).collect();
        let kg = ScalarField::open(vals, 0.0, 1.0).unwrap();
        let kn = ScalarField::open_fn(16, 0.0, 1.0, |_| 0.0).unwrap();
        match alpha_from_descriptor(&kg, &kn) {
            Err(CurveError::Degenerate { s }) => assert_relative_eq!(s, 6.0 / 15.0, epsilon = 1e-12),
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn csv_roundtrip_planar() {
        let curve = PlanarCurve::circle(1.0, 256);
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let back = PlanarCurve::from_csv(&buf[..], true).unwrap();
        assert_relative_eq!(back.length(), TAU, max_relative = 1e-9);
        assert_relative_eq!(back.geodesic_curvature().value(1.0), 1.0, max_relative = 1e-6);
    }
}
