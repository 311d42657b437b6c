use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fekete::{fekete_search, FeketeSearch};
use super::measure::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::polyarith::FactoredPolynomial;

/// Discretization parameters for [`CompactSetModel`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SetOptions {
    /// Boundary samples per connected component.
    pub samples_per_component: usize,
    /// Fekete atoms in the stored equilibrium measure.
    pub equilibrium_atoms: usize,
    /// Relative tolerance of the hull test.
    pub hull_tol: f64,
}

impl Default for SetOptions {
    fn default() -> Self {
        SetOptions {
            samples_per_component: 4096,
            equilibrium_atoms: 1024,
            hull_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SetKind {
    Interval {
        a: f64,
        b: f64,
    },
    Disk {
        center: Complex64,
        radius: f64,
    },
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Disjoint closed intervals on the real line, sorted.
    IntervalUnion(Vec<(f64, f64)>),
    /// Closed region bounded by a polygon (vertices in order, not repeated).
    Polyline(Vec<Complex64>),
    PointCloud(Vec<Complex64>),
    /// `P^{-1}(base)`.
    Pullback {
        map: FactoredPolynomial,
        base: Box<CompactSetModel>,
    },
}

impl SetKind {
    pub fn name(&self) -> &'static str {
        match self {
            SetKind::Interval { .. } => "interval",
            SetKind::Disk { .. } => "disk",
            SetKind::Circle { .. } => "circle",
            SetKind::IntervalUnion(_) => "union-of-intervals",
            SetKind::Polyline(_) => "polyline-boundary",
            SetKind::PointCloud(_) => "point-cloud",
            SetKind::Pullback { .. } => "pullback",
        }
    }
}

/// Parameterized boundary curve of one component.
#[derive(Clone, Debug)]
pub(crate) enum Curve {
    /// `mid - half cos(π t)`, `t ∈ [0, 1]`.
    Segment { a: f64, b: f64 },
    /// `center + r e^{2πit}`.
    Circle { center: Complex64, radius: f64 },
    /// Constant-speed traversal of a closed polygon.
    Polygon {
        vertices: Vec<Complex64>,
        cum: Vec<f64>,
    },
}

impl Curve {
    pub(crate) fn closed(&self) -> bool {
        !matches!(self, Curve::Segment { .. })
    }

    pub(crate) fn point(&self, t: f64) -> Complex64 {
        match self {
            Curve::Segment { a, b } => {
                let t = t.clamp(0.0, 1.0);
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                Complex64::new(mid - half * (PI * t).cos(), 0.0)
            }
            Curve::Circle { center, radius } => center + Complex64::from_polar(*radius, TAU * t),
            Curve::Polygon { vertices, cum } => {
                let total = *cum.last().unwrap();
                let s = t.rem_euclid(1.0) * total;
                let k = cum.partition_point(|&c| c <= s).clamp(1, vertices.len()) - 1;
                let p = vertices[k];
                let q = vertices[(k + 1) % vertices.len()];
                let len = cum[k + 1] - cum[k];
                let u = if len > 0.0 { (s - cum[k]) / len } else { 0.0 };
                p + (q - p) * u
            }
        }
    }

    /// Parameter of sample `j` out of `n`.
    pub(crate) fn sample_param(&self, j: usize, n: usize) -> f64 {
        if self.closed() {
            j as f64 / n as f64
        } else if n == 1 {
            0.5
        } else {
            j as f64 / (n - 1) as f64
        }
    }
}

/// A run of consecutive boundary samples, optionally lying on a curve.
#[derive(Clone, Debug)]
pub(crate) struct Component {
    pub start: usize,
    pub len: usize,
    pub curve: Option<Curve>,
}

/// A plane compact set with its boundary discretization, equilibrium
/// measure and logarithmic capacity. Immutable once built.
#[derive(Clone, Debug)]
pub struct CompactSetModel {
    kind: SetKind,
    boundary_samples: Vec<Complex64>,
    pub(crate) components: Vec<Component>,
    symmetric: bool,
    equilibrium: Option<DiscreteMeasure>,
    log_capacity: f64,
    hull_samples: Vec<Complex64>,
    regular: bool,
    degenerate: bool,
    options: SetOptions,
    center: Complex64,
    diameter: f64,
}

impl CompactSetModel {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::build(SetKind::Interval { a, b }, SetOptions::default())
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        Self::build(SetKind::Disk { center, radius }, SetOptions::default())
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::build(SetKind::Circle { center, radius }, SetOptions::default())
    }

    pub fn interval_union(intervals: Vec<(f64, f64)>) -> Result<Self> {
        Self::build(SetKind::IntervalUnion(intervals), SetOptions::default())
    }

    pub fn polyline(vertices: Vec<Complex64>) -> Result<Self> {
        Self::build(SetKind::Polyline(vertices), SetOptions::default())
    }

    pub fn point_cloud(points: Vec<Complex64>) -> Result<Self> {
        Self::build(SetKind::PointCloud(points), SetOptions::default())
    }

    pub fn build(kind: SetKind, options: SetOptions) -> Result<Self> {
        if options.samples_per_component < 2 || options.equilibrium_atoms < 2 {
            return Err(Error::InvalidInput(
                "need at least 2 samples per component and 2 equilibrium atoms".into(),
            ));
        }
        if !(options.hull_tol >= 0.0) {
            return Err(Error::InvalidInput(
                "hull tolerance must be nonnegative".into(),
            ));
        }
        let kind = validate(kind)?;
        if let SetKind::Pullback { .. } = kind {
            return Err(Error::InvalidInput(
                "pullbacks are built with metric::pullback".into(),
            ));
        }
        let s = options.samples_per_component;
        let mut samples = Vec::new();
        let mut components = Vec::new();
        let mut push_curve = |curve: Curve, samples: &mut Vec<Complex64>| {
            let start = samples.len();
            samples.extend((0..s).map(|j| curve.point(curve.sample_param(j, s))));
            components.push(Component {
                start,
                len: s,
                curve: Some(curve),
            });
        };
        match &kind {
            SetKind::Interval { a, b } => push_curve(Curve::Segment { a: *a, b: *b }, &mut samples),
            SetKind::Disk { center, radius } | SetKind::Circle { center, radius } => push_curve(
                Curve::Circle {
                    center: *center,
                    radius: *radius,
                },
                &mut samples,
            ),
            SetKind::IntervalUnion(list) => {
                for &(a, b) in list {
                    push_curve(Curve::Segment { a, b }, &mut samples);
                }
            }
            SetKind::Polyline(vertices) => {
                let mut cum = vec![0.0];
                for k in 0..vertices.len() {
                    let len = (vertices[(k + 1) % vertices.len()] - vertices[k]).norm();
                    cum.push(cum[k] + len);
                }
                push_curve(
                    Curve::Polygon {
                        vertices: vertices.clone(),
                        cum,
                    },
                    &mut samples,
                );
            }
            SetKind::PointCloud(points) => {
                samples = points.clone();
                components.push(Component {
                    start: 0,
                    len: points.len(),
                    curve: None,
                });
            }
            SetKind::Pullback { .. } => unreachable!(),
        }

        let symmetric = match &kind {
            SetKind::Interval { .. } | SetKind::IntervalUnion(_) => true,
            SetKind::Disk { center, .. } | SetKind::Circle { center, .. } => center.im == 0.0,
            SetKind::Polyline(v) | SetKind::PointCloud(v) => conjugation_closed(v),
            SetKind::Pullback { .. } => unreachable!(),
        };
        let degenerate = is_degenerate(&samples);
        let mut model = CompactSetModel {
            kind,
            hull_samples: Vec::new(),
            boundary_samples: samples,
            components,
            symmetric,
            equilibrium: None,
            log_capacity: f64::NEG_INFINITY,
            regular: true,
            degenerate,
            options,
            center: Complex64::new(0.0, 0.0),
            diameter: 0.0,
        };
        (model.center, model.diameter) = center_and_diameter(&model.boundary_samples);
        model.regular = !matches!(model.kind, SetKind::PointCloud(_));
        model.hull_samples = model.make_hull_samples();
        if degenerate {
            return Ok(model);
        }

        let n = options.equilibrium_atoms.min(model.boundary_samples.len());
        let search = fekete_search(&model.boundary_samples, &model.components, n)?;
        let atoms: Vec<Complex64> = search
            .indices
            .iter()
            .map(|&i| model.boundary_samples[i])
            .collect();
        let measure = if symmetric {
            symmetrize(atoms, scale_of(&model.boundary_samples) * 1e-12)?
        } else {
            DiscreteMeasure::uniform(atoms)?
        };
        model.log_capacity = match model.closed_form_log_capacity() {
            Some(v) => v,
            None => robin_estimate(&model.boundary_samples, &search, &measure),
        };
        model.equilibrium = Some(measure);
        Ok(model)
    }

    /// Model of `map^{-1}(base)`, given its boundary samples.
    pub(crate) fn from_pullback(
        map: FactoredPolynomial,
        base: CompactSetModel,
        samples: Vec<Complex64>,
        equilibrium: Option<DiscreteMeasure>,
        symmetric: bool,
    ) -> Self {
        let d = map.degree() as f64;
        let log_capacity = (base.log_capacity - map.leading.norm().ln()) / d;
        let degenerate = base.degenerate;
        let regular = base.regular;
        let options = base.options;
        let n = samples.len();
        let (center, diameter) = center_and_diameter(&samples);
        CompactSetModel {
            center,
            diameter,
            kind: SetKind::Pullback {
                map,
                base: Box::new(base),
            },
            hull_samples: samples.clone(),
            boundary_samples: samples,
            components: vec![Component {
                start: 0,
                len: n,
                curve: None,
            }],
            symmetric,
            equilibrium,
            log_capacity,
            regular,
            degenerate,
            options,
        }
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn boundary_samples(&self) -> &[Complex64] {
        &self.boundary_samples
    }

    pub fn hull_samples(&self) -> &[Complex64] {
        &self.hull_samples
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// `false` for point clouds, whose Dirichlet regularity is not checked.
    pub fn regularity_verified(&self) -> bool {
        self.regular
    }

    /// All boundary samples coincide (capacity zero).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn options(&self) -> &SetOptions {
        &self.options
    }

    pub fn equilibrium(&self) -> Result<&DiscreteMeasure> {
        self.equilibrium
            .as_ref()
            .ok_or_else(|| Error::Degenerate("set has no equilibrium measure".into()))
    }

    /// `log cap(E)`; `-inf` for degenerate sets.
    pub fn log_capacity(&self) -> f64 {
        self.log_capacity
    }

    pub fn capacity(&self) -> f64 {
        self.log_capacity.exp()
    }

    /// The same set with a fresh equilibrium measure on `n` Fekete atoms.
    pub fn with_equilibrium(&self, n: usize) -> Result<Self> {
        let measure = super::equilibrium_measure(self, n)?;
        let mut out = self.clone();
        out.equilibrium = Some(measure);
        Ok(out)
    }

    pub(crate) fn closed_form_log_capacity(&self) -> Option<f64> {
        match &self.kind {
            SetKind::Interval { a, b } => Some(((b - a) / 4.0).ln()),
            SetKind::Disk { radius, .. } | SetKind::Circle { radius, .. } => Some(radius.ln()),
            _ => None,
        }
    }

    /// Center of the bounding box of the boundary samples.
    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Twice the largest distance from [`Self::center`] to a sample.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    fn hull_slack(&self) -> f64 {
        self.options.hull_tol * self.diameter().max(1.0)
    }

    /// Whether `z` lies in the polynomially convex hull, up to the hull
    /// tolerance.
    pub fn contains_hull(&self, z: Complex64) -> bool {
        let tol = self.hull_slack();
        match &self.kind {
            SetKind::Interval { a, b } => in_segment(z, *a, *b, tol),
            SetKind::Disk { center, radius } | SetKind::Circle { center, radius } => {
                (z - center).norm() <= radius + self.options.hull_tol * radius.max(1.0)
            }
            SetKind::IntervalUnion(list) => list.iter().any(|&(a, b)| in_segment(z, a, b, tol)),
            SetKind::Polyline(v) => winding_number(v, z) != 0 || polygon_distance(v, z) <= tol,
            SetKind::PointCloud(p) => nearest(p, z) <= tol,
            SetKind::Pullback { map, base } => match map.eval_scaled(z).to_finite() {
                Some(w) if w.is_finite() => base.contains_hull(w),
                _ => false,
            },
        }
    }

    /// Euclidean distance from `z` to the set.
    pub fn distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            SetKind::Interval { a, b } => segment_distance(z, *a, *b),
            SetKind::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
            SetKind::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            SetKind::IntervalUnion(list) => list
                .iter()
                .map(|&(a, b)| segment_distance(z, a, b))
                .fold(f64::INFINITY, f64::min),
            SetKind::Polyline(v) => {
                if winding_number(v, z) != 0 {
                    0.0
                } else {
                    polygon_distance(v, z)
                }
            }
            SetKind::PointCloud(p) => nearest(p, z),
            SetKind::Pullback { .. } => {
                if self.contains_hull(z) {
                    0.0
                } else {
                    nearest(&self.boundary_samples, z)
                }
            }
        }
    }

    /// Euclidean distance from `z` to the polynomially convex hull.
    pub fn distance_to_hull(&self, z: Complex64) -> f64 {
        match &self.kind {
            SetKind::Circle { center, radius } => ((z - center).norm() - radius).max(0.0),
            _ => self.distance(z),
        }
    }

    /// Green function of the unbounded complementary component, pole at ∞.
    ///
    /// Exact for intervals, disks and circles; composition for pullbacks;
    /// discrete Fekete potential otherwise.
    pub fn green(&self, z: Complex64) -> f64 {
        if self.degenerate {
            return if self.distance(z) <= self.hull_slack() {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if self.contains_hull(z) {
            return 0.0;
        }
        match &self.kind {
            SetKind::Interval { a, b } => interval_green(z, *a, *b),
            SetKind::Disk { center, radius } | SetKind::Circle { center, radius } => {
                ((z - center).norm() / radius).ln().max(0.0)
            }
            SetKind::Pullback { map, base } => pullback_green(map, base, z, CompactSetModel::green),
            _ => self.discrete_green(z),
        }
    }

    /// `max(0, ∫ log|z - ζ| dμ_E - log cap E)` with the hull clamp, whatever
    /// the kind.
    pub fn discrete_green(&self, z: Complex64) -> f64 {
        if self.degenerate {
            return self.green(z);
        }
        if self.contains_hull(z) {
            return 0.0;
        }
        if let SetKind::Pullback { map, base } = &self.kind {
            return pullback_green(map, base, z, CompactSetModel::discrete_green);
        }
        let Some(mu) = &self.equilibrium else {
            return 0.0;
        };
        (mu.log_potential(z) - self.log_capacity).max(0.0)
    }

    /// Point at parameter `t` on component `c`, when it has a curve.
    pub(crate) fn boundary_point(&self, c: usize, t: f64) -> Option<Complex64> {
        self.components[c]
            .curve
            .as_ref()
            .map(|curve| curve.point(t))
    }

    fn make_hull_samples(&self) -> Vec<Complex64> {
        let mut out = self.boundary_samples.clone();
        match &self.kind {
            SetKind::Disk { center, radius } | SetKind::Circle { center, radius } => {
                out.push(*center);
                for k in 1..8 {
                    let r = radius * k as f64 / 8.0;
                    out.extend(
                        (0..64).map(|j| center + Complex64::from_polar(r, TAU * j as f64 / 64.0)),
                    );
                }
            }
            SetKind::Polyline(v) => {
                let (lo, hi) = bbox(v);
                for i in 0..64 {
                    for j in 0..64 {
                        let z = Complex64::new(
                            lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / 64.0,
                            lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / 64.0,
                        );
                        if winding_number(v, z) != 0 {
                            out.push(z);
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}

fn validate(kind: SetKind) -> Result<SetKind> {
    let finite = |x: f64| x.is_finite();
    let bad = |msg: &str| Err(Error::InvalidInput(msg.to_string()));
    match kind {
        SetKind::Interval { a, b } => {
            if !finite(a) || !finite(b) || a > b {
                return bad("interval needs finite a <= b");
            }
            Ok(SetKind::Interval { a, b })
        }
        SetKind::Disk { center, radius } | SetKind::Circle { center, radius }
            if !(radius >= 0.0) || !radius.is_finite() || !center.is_finite() =>
        {
            bad("radius must be finite and nonnegative")
        }
        SetKind::IntervalUnion(mut list) => {
            if list.is_empty() {
                return bad("empty interval union");
            }
            if list.iter().any(|&(a, b)| !finite(a) || !finite(b) || a > b) {
                return bad("every interval needs finite a <= b");
            }
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut merged: Vec<(f64, f64)> = Vec::new();
            for (a, b) in list {
                match merged.last_mut() {
                    Some(last) if a <= last.1 => last.1 = last.1.max(b),
                    _ => merged.push((a, b)),
                }
            }
            Ok(SetKind::IntervalUnion(merged))
        }
        SetKind::Polyline(v) => {
            if v.len() < 3 || v.iter().any(|z| !z.is_finite()) {
                return bad("polyline needs at least 3 finite vertices");
            }
            if polygon_area(&v).abs() == 0.0 {
                return bad("polyline encloses no area");
            }
            Ok(SetKind::Polyline(v))
        }
        SetKind::PointCloud(p) => {
            if p.is_empty() || p.iter().any(|z| !z.is_finite()) {
                return bad("point cloud needs at least one finite point");
            }
            Ok(SetKind::PointCloud(p))
        }
        other => Ok(other),
    }
}

fn pullback_green(
    map: &FactoredPolynomial,
    base: &CompactSetModel,
    z: Complex64,
    g: fn(&CompactSetModel, Complex64) -> f64,
) -> f64 {
    let d = map.degree() as f64;
    let v = map.eval_scaled(z);
    match v.to_finite() {
        Some(w) if w.is_finite() => g(base, w) / d,
        _ => (v.ln_abs() - base.log_capacity).max(0.0) / d,
    }
}

/// `log |w + √(w²-1)|` for `w` the affine image of `z` onto `[-1, 1]`.
pub(crate) fn interval_green(z: Complex64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return f64::INFINITY;
    }
    let w = (z - 0.5 * (a + b)) / half;
    let s = (w - 1.0).sqrt() * (w + 1.0).sqrt();
    (w + s).norm().max((w - s).norm()).ln().max(0.0)
}

fn in_segment(z: Complex64, a: f64, b: f64, tol: f64) -> bool {
    z.im.abs() <= tol && z.re >= a - tol && z.re <= b + tol
}

fn segment_distance(z: Complex64, a: f64, b: f64) -> f64 {
    (z - Complex64::new(z.re.clamp(a, b), 0.0)).norm()
}

fn nearest(points: &[Complex64], z: Complex64) -> f64 {
    points
        .iter()
        .map(|p| (z - p).norm())
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn bbox(points: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for z in points {
        lo.re = lo.re.min(z.re);
        lo.im = lo.im.min(z.im);
        hi.re = hi.re.max(z.re);
        hi.im = hi.im.max(z.im);
    }
    (lo, hi)
}

fn center_and_diameter(points: &[Complex64]) -> (Complex64, f64) {
    let (lo, hi) = bbox(points);
    let c = (lo + hi) * 0.5;
    let d = 2.0 * points.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    (c, d)
}

fn scale_of(points: &[Complex64]) -> f64 {
    let (lo, hi) = bbox(points);
    (hi - lo).norm().max(1.0)
}

fn is_degenerate(points: &[Complex64]) -> bool {
    points.iter().all(|z| *z == points[0])
}

fn polygon_area(v: &[Complex64]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|k| {
            let p = v[k];
            let q = v[(k + 1) % n];
            p.re * q.im - q.re * p.im
        })
        .sum::<f64>()
}

/// Winding number of the closed polygon around `z` (0 outside).
pub(crate) fn winding_number(v: &[Complex64], z: Complex64) -> i32 {
    let n = v.len();
    let mut w = 0;
    for k in 0..n {
        let p = v[k];
        let q = v[(k + 1) % n];
        let cross = (q.re - p.re) * (z.im - p.im) - (z.re - p.re) * (q.im - p.im);
        if p.im <= z.im {
            if q.im > z.im && cross > 0.0 {
                w += 1;
            }
        } else if q.im <= z.im && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

fn polygon_distance(v: &[Complex64], z: Complex64) -> f64 {
    let n = v.len();
    (0..n)
        .map(|k| {
            let p = v[k];
            let q = v[(k + 1) % n];
            let e = q - p;
            let len2 = e.norm_sqr();
            let t = if len2 > 0.0 {
                (((z - p) * e.conj()).re / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (z - (p + e * t)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn conjugation_closed(points: &[Complex64]) -> bool {
    let tol = scale_of(points) * 1e-12;
    points
        .iter()
        .all(|z| points.iter().any(|w| (w - z.conj()).norm() <= tol))
}

/// Adds missing conjugates so the atom set is closed under conjugation.
fn symmetrize(atoms: Vec<Complex64>, tol: f64) -> Result<DiscreteMeasure> {
    if conjugation_closed_within(&atoms, tol) {
        return DiscreteMeasure::uniform(atoms);
    }
    let mut all = atoms.clone();
    all.extend(atoms.iter().map(|z| z.conj()));
    DiscreteMeasure::uniform(all)
}

fn conjugation_closed_within(points: &[Complex64], tol: f64) -> bool {
    points
        .iter()
        .all(|z| points.iter().any(|w| (w - z.conj()).norm() <= tol))
}

/// `log cap` as the mean equilibrium potential over boundary samples that
/// are not atoms; falls back to the transfinite diameter.
fn robin_estimate(samples: &[Complex64], search: &FeketeSearch, mu: &DiscreteMeasure) -> f64 {
    let mut is_atom = vec![false; samples.len()];
    for &i in &search.indices {
        is_atom[i] = true;
    }
    let values: Vec<f64> = samples
        .iter()
        .zip(&is_atom)
        .filter(|(z, atom)| !**atom && mu.support().iter().all(|s| s != *z))
        .map(|(z, _)| mu.log_potential(*z))
        .filter(|v| v.is_finite())
        .collect();
    if values.is_empty() {
        return search.log_transfinite_diameter();
    }
    values.iter().sum::<f64>() / values.len() as f64
}
