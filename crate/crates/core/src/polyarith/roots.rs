//! Simultaneous root finding (Aberth–Ehrlich).
//!
//! The iteration is generic over how `P/P'` is evaluated:
//!
//! * [`ComplexPolynomial`]: Horner in `f64` with a rounding-error scale, so
//!   a root stops moving once `|P(z)|` drops into the evaluation noise.
//! * [`IntPolynomial`]: an `f64` pass first, then a polishing pass where
//!   `P` and `P'` are evaluated exactly at the dyadic iterates. This is
//!   what makes high-degree Chebyshev-type polynomials (huge cancelling
//!   coefficients) tractable.
//! * preimage equations `P(w) = c` with `P` in factored form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::complex_poly::ComplexPolynomial;
use super::factored::FactoredPolynomial;
use super::int_poly::{horner_exact, IntPolynomial};
use super::numeric;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Knobs for the root finder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Acceptance threshold for the relative residual `|P(r)| / Σ|c_k||r|^k`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-10,
            max_iter: 2000,
        }
    }
}

impl RootConfig {
    pub fn with_tol(tol: f64) -> Self {
        RootConfig {
            tol,
            ..Default::default()
        }
    }
}

/// All roots of a polynomial, repeated according to multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `max_r |P(r)| / Σ |c_k| |r|^k`.
    pub residual_bound: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Distinct roots with their multiplicities.
    pub fn with_multiplicity(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &r in &self.roots {
            match out.iter_mut().find(|(s, _)| *s == r) {
                Some((_, m)) => *m += 1,
                None => out.push((r, 1)),
            }
        }
        out
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Number of roots with `|r| < radius`.
    pub fn count_inside(&self, radius: f64) -> usize {
        self.roots.iter().filter(|r| r.norm() < radius).count()
    }
}

/// One Newton ratio evaluation.
enum Step {
    /// `P(z)` is exactly zero or indistinguishable from zero.
    AtRoot,
    Ratio(Complex64),
    /// `P'(z) = 0` with `P(z) != 0`.
    Critical,
}

trait Target {
    fn degree(&self) -> usize;
    fn step(&self, z: Complex64) -> Step;
    /// Center and radius of a disk holding all roots.
    fn bounding_disk(&self) -> (Complex64, f64);
}

struct Horner<'a>(&'a ComplexPolynomial);

impl Target for Horner<'_> {
    fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    fn step(&self, z: Complex64) -> Step {
        let (p, dp, abs) = self.0.eval_with_derivative(z);
        let d = self.degree() as f64;
        if p.norm() <= 4.0 * (d + 1.0) * EPS * abs {
            return Step::AtRoot;
        }
        if dp.norm() == 0.0 {
            return Step::Critical;
        }
        Step::Ratio(p / dp)
    }

    fn bounding_disk(&self) -> (Complex64, f64) {
        let ln_abs: Vec<f64> = self.0.coeffs().iter().map(|c| c.norm().ln()).collect();
        (Complex64::new(0.0, 0.0), cauchy_radius(&ln_abs))
    }
}

struct Exact<'a> {
    coeffs: &'a [num_bigint::BigInt],
    deriv: Vec<num_bigint::BigInt>,
    radius: f64,
}

impl Target for Exact<'_> {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn step(&self, z: Complex64) -> Step {
        let p = horner_exact(self.coeffs, z);
        if p.is_zero() {
            return Step::AtRoot;
        }
        let dp = horner_exact(&self.deriv, z);
        match numeric::ratio(&p, &dp) {
            Some(r) => Step::Ratio(r),
            None => Step::Critical,
        }
    }

    fn bounding_disk(&self) -> (Complex64, f64) {
        (Complex64::new(0.0, 0.0), self.radius)
    }
}

/// `P(w) - c = 0` with `P` factored.
struct Preimage<'a> {
    poly: &'a FactoredPolynomial,
    target: Complex64,
}

impl Target for Preimage<'_> {
    fn degree(&self) -> usize {
        self.poly.degree()
    }

    fn step(&self, w: Complex64) -> Step {
        let p = self.poly.eval(w);
        let f = p - self.target;
        let d = self.degree() as f64;
        if f.norm() <= 4.0 * (d + 1.0) * EPS * (p.norm() + self.target.norm()) {
            return Step::AtRoot;
        }
        let dp = p * self.poly.log_derivative(w);
        if !dp.is_finite() || dp.norm() == 0.0 {
            return Step::Critical;
        }
        Step::Ratio(f / dp)
    }

    fn bounding_disk(&self) -> (Complex64, f64) {
        // If |w - center| > max|r - center| + t then every |w - r| > t and
        // |P(w)| > |a| t^d; t = (|c|/|a|)^(1/d) leaves no solutions outside.
        let center = self.poly.centroid();
        let spread = self
            .poly
            .roots
            .iter()
            .map(|r| (r - center).norm())
            .fold(0.0, f64::max);
        let d = self.degree() as f64;
        let t = (self.target.norm() / self.poly.leading.norm()).powf(1.0 / d);
        (center, (spread + t).max(f64::MIN_POSITIVE) * 1.000_001)
    }
}

/// Unique positive root of `|a_d| x^d = Σ_{k<d} |c_k| x^k` from `ln|c_k|`.
///
/// Every root of the polynomial lies in `|z| <=` this radius.
pub(crate) fn cauchy_radius(ln_abs: &[f64]) -> f64 {
    let d = ln_abs.len() - 1;
    let lead = ln_abs[d];
    // g(t) = ln Σ_{k<d} |c_k| e^{(k-d) t} - ln|a_d|, decreasing in t = ln x.
    let g = |t: f64| {
        let terms: Vec<f64> = ln_abs[..d]
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .map(|(k, l)| l + (k as f64 - d as f64) * t)
            .collect();
        if terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln() - lead
    };
    if g(-700.0) < 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (-700.0f64, 1.0f64);
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.exp()
}

fn initial_guesses(center: Complex64, radius: f64, d: usize) -> Vec<Complex64> {
    // Deterministic angular offset breaks the conjugation symmetry of the
    // start configuration.
    (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + 0.25) / d as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Runs the iteration; `Err` carries the best iterate.
fn aberth(target: &dyn Target, mut z: Vec<Complex64>, max_iter: usize) -> (Vec<Complex64>, bool) {
    let d = z.len();
    let mut done = vec![false; d];
    let (center, radius) = target.bounding_disk();
    let radius = radius * (1.0 + 1e-9);
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let zk = z[k];
            match target.step(zk) {
                Step::AtRoot => done[k] = true,
                Step::Critical => {
                    z[k] = zk + Complex64::new(1e-8, 1e-8) * (1.0 + zk.norm());
                    all_done = false;
                }
                Step::Ratio(n) => {
                    let s: Complex64 = (0..d)
                        .filter(|&j| j != k)
                        .map(|j| {
                            let diff = zk - z[j];
                            if diff.norm() == 0.0 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                diff.inv()
                            }
                        })
                        .sum();
                    let denom = Complex64::new(1.0, 0.0) - n * s;
                    let delta = if denom.norm() == 0.0 || !denom.is_finite() {
                        n
                    } else {
                        n / denom
                    };
                    if !delta.is_finite() {
                        z[k] = zk + Complex64::new(1e-8, -1e-8) * (1.0 + zk.norm());
                        all_done = false;
                        continue;
                    }
                    z[k] = zk - delta;
                    // every root lies in the disk; an iterate thrown far
                    // outside otherwise crawls back one Newton step at a time
                    let off = z[k] - center;
                    if off.norm() > radius {
                        z[k] = center + off * (radius / off.norm());
                        all_done = false;
                        continue;
                    }
                    if delta.norm() <= 4.0 * EPS * z[k].norm().max(f64::MIN_POSITIVE) {
                        done[k] = true;
                    } else {
                        all_done = false;
                    }
                }
            }
        }
        if all_done {
            return (z, true);
        }
    }
    (z, false)
}

/// Groups roots closer than `sqrt(tol) * max(1, |r|)` and replaces each
/// group by its mean, repeated with the group's multiplicity.
fn cluster(roots: &mut [Complex64], tol: f64) {
    let radius = tol.sqrt();
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    for members in groups.values().filter(|m| m.len() > 1) {
        let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
        for &i in members {
            roots[i] = mean;
        }
    }
}

/// Enforces conjugate symmetry for real polynomials: nearly real roots are
/// snapped onto the axis.
fn snap_real(roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        if r.im.abs() <= 64.0 * EPS * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

fn residual_complex(p: &ComplexPolynomial, roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|&r| {
            let (v, _, abs) = p.eval_with_derivative(r);
            if abs == 0.0 {
                0.0
            } else {
                v.norm() / abs
            }
        })
        .fold(0.0, f64::max)
}

fn residual_exact(p: &IntPolynomial, roots: &[Complex64]) -> f64 {
    let ln_c = p.ln_abs_coeffs();
    roots
        .iter()
        .map(|&r| {
            let v = p.eval_exact(r);
            if v.is_zero() {
                return 0.0;
            }
            let ln_v = v.log2_abs() * std::f64::consts::LN_2;
            let lr = r.norm().ln();
            let terms: Vec<f64> = ln_c
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_finite())
                .map(|(k, l)| l + k as f64 * lr)
                .collect();
            let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let ln_scale = m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
            (ln_v - ln_scale).exp()
        })
        .fold(0.0, f64::max)
}

/// All complex roots of `p` with multiplicity.
pub fn roots(p: &ComplexPolynomial, config: &RootConfig) -> Result<RootSet> {
    let d = p.require_degree(1)?;
    let zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPolynomial::new(p.coeffs()[zeros..].to_vec());
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if d > zeros {
        let target = Horner(&reduced);
        let (c, r) = target.bounding_disk();
        let start = initial_guesses(c, r, d - zeros);
        let (z, ok) = aberth(&target, start, config.max_iter);
        let residual = residual_complex(&reduced, &z);
        if !ok && residual > config.tol {
            return Err(Error::NoConvergence {
                iterations: config.max_iter,
                best: z,
                residual,
            });
        }
        out.extend(z);
    }
    if p.is_real() {
        snap_real(&mut out);
    }
    cluster(&mut out, config.tol);
    sort_roots(&mut out);
    let residual_bound = residual_complex(p, &out);
    if residual_bound > config.tol {
        return Err(Error::NoConvergence {
            iterations: config.max_iter,
            best: out,
            residual: residual_bound,
        });
    }
    Ok(RootSet {
        roots: out,
        residual_bound,
    })
}

/// All complex roots of an integer polynomial, polished with exact
/// evaluation.
pub fn int_roots(p: &IntPolynomial, config: &RootConfig) -> Result<RootSet> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::DegreeTooSmall { got: 0, min: 1 });
    }
    let zeros = p.zero_root_multiplicity();
    let reduced = p.strip_zero_roots();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let rd = d - zeros;
    if rd > 0 {
        let ln_abs = reduced.ln_abs_coeffs();
        let radius = cauchy_radius(&ln_abs);
        let float_poly = ComplexPolynomial::from_real(&reduced.to_f64_scaled());
        let start = initial_guesses(Complex64::new(0.0, 0.0), radius, rd);
        let (rough, _) = aberth(&Horner(&float_poly), start, config.max_iter.min(500));
        let exact = Exact {
            coeffs: reduced.coeffs(),
            deriv: reduced.derivative().coeffs().to_vec(),
            radius,
        };
        let (z, ok) = aberth(&exact, rough, config.max_iter);
        let residual = residual_exact(&reduced, &z);
        if !ok && residual > config.tol {
            return Err(Error::NoConvergence {
                iterations: config.max_iter,
                best: z,
                residual,
            });
        }
        out.extend(z);
    }
    snap_real(&mut out);
    cluster(&mut out, config.tol);
    sort_roots(&mut out);
    let residual_bound = residual_exact(p, &out);
    if residual_bound > config.tol {
        return Err(Error::NoConvergence {
            iterations: config.max_iter,
            best: out,
            residual: residual_bound,
        });
    }
    Ok(RootSet {
        roots: out,
        residual_bound,
    })
}

/// All solutions of `P(w) = c` for a factored `P`.
pub fn preimages(
    p: &FactoredPolynomial,
    c: Complex64,
    config: &RootConfig,
) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::DegreeTooSmall { got: 0, min: 1 });
    }
    if d == 1 {
        return Ok(vec![p.roots[0] + c / p.leading]);
    }
    let target = Preimage { poly: p, target: c };
    let (center, radius) = target.bounding_disk();
    let start = initial_guesses(center, radius, d);
    let (z, ok) = aberth(&target, start, config.max_iter);
    if !ok {
        let residual = z
            .iter()
            .map(|&w| (p.eval(w) - c).norm() / (c.norm() + p.eval(w).norm()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if residual > config.tol {
            return Err(Error::NoConvergence {
                iterations: config.max_iter,
                best: z,
                residual,
            });
        }
    }
    Ok(z)
}

impl ComplexPolynomial {
    pub fn roots(&self, config: &RootConfig) -> Result<RootSet> {
        roots(self, config)
    }

    /// Factored form from computed roots.
    pub fn factored(&self, config: &RootConfig) -> Result<FactoredPolynomial> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        if self.degree() == Some(0) {
            return Ok(FactoredPolynomial::new(lead, Vec::new()));
        }
        Ok(FactoredPolynomial::new(lead, self.roots(config)?.roots))
    }
}

impl IntPolynomial {
    pub fn roots(&self, config: &RootConfig) -> Result<RootSet> {
        int_roots(self, config)
    }

    /// Factored form with exactly polished roots.
    pub fn factored(&self, config: &RootConfig) -> Result<FactoredPolynomial> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let lead = Complex64::new(numeric::bigint_to_f64_shifted(lead, 0), 0.0);
        if self.degree() == Some(0) {
            return Ok(FactoredPolynomial::new(lead, Vec::new()));
        }
        Ok(FactoredPolynomial::new(lead, self.roots(config)?.roots))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{chebyshev_monic, cyclotomic};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_two() {
        let rs = ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0])
            .roots(&RootConfig::default())
            .unwrap();
        assert_eq!(rs.len(), 2);
        assert!((rs.roots[0] - c(-2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((rs.roots[1] - c(2f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn golden_ratio_matches_quadratic_formula() {
        // oracle: (1 ± √5)/2
        let rs = IntPolynomial::from_i64(&[-1, -1, 1])
            .roots(&RootConfig::default())
            .unwrap();
        let s5 = 5f64.sqrt();
        assert!((rs.roots[0].re - (1.0 - s5) / 2.0).abs() < 1e-15);
        assert!((rs.roots[1].re - (1.0 + s5) / 2.0).abs() < 1e-15);
        assert!((rs.roots[1].re - 1.6180339887).abs() < 1e-10);
    }

    #[test]
    fn fifth_cyclotomic_roots_of_unity() {
        let rs = cyclotomic(5).roots(&RootConfig::default()).unwrap();
        let mut angles: Vec<f64> = rs.roots.iter().map(|r| r.arg().to_degrees()).collect();
        angles.sort_by(f64::total_cmp);
        for (a, e) in angles.iter().zip([-144.0, -72.0, 72.0, 144.0]) {
            assert!((a - e).abs() < 1e-10, "{a} vs {e}");
        }
        assert!(rs.roots.iter().all(|r| (r.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn zero_roots_are_exact() {
        let rs = IntPolynomial::from_i64(&[0, 1, 0, 2])
            .roots(&RootConfig::default())
            .unwrap();
        assert_eq!(rs.roots.iter().filter(|r| r.norm() == 0.0).count(), 1);
        let p = IntPolynomial::monomial(1, 64);
        let rs = p.roots(&RootConfig::default()).unwrap();
        assert!(rs.roots.iter().all(|r| r.norm() == 0.0));
    }

    #[test]
    fn high_degree_chebyshev_via_exact_polish() {
        // Coefficients reach ~1e37; Horner alone cannot locate these roots.
        let n = 128;
        let rs = chebyshev_monic(n).roots(&RootConfig::default()).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|j| 2.0 * ((2 * j - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (r, e) in rs.roots.iter().zip(&expected) {
            assert!((r.re - e).abs() < 1e-12 && r.im == 0.0, "{r} vs {e}");
        }
    }

    #[test]
    fn double_root_is_clustered() {
        let p = IntPolynomial::from_i64(&[1, -2, 1]);
        let rs = p.roots(&RootConfig::default()).unwrap();
        assert_eq!(rs.with_multiplicity(), vec![(c(1.0, 0.0), 2)]);
    }

    #[test]
    fn preimages_of_a_factored_map() {
        let f = FactoredPolynomial::new(
            c(1.0, 0.0),
            vec![c(2f64.sqrt(), 0.0), c(-(2f64.sqrt()), 0.0)],
        );
        let mut w = preimages(&f, c(1.0, 0.0), &RootConfig::default()).unwrap();
        w.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((w[0] - c(-(3f64.sqrt()), 0.0)).norm() < 1e-14);
        assert!((w[1] - c(3f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cauchy_radius_bounds_roots() {
        // z^2 - 2: radius solves x^2 = 2.
        let r = cauchy_radius(&[2f64.ln(), f64::NEG_INFINITY, 0.0]);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
