//! Discrete Fekete search over boundary samples.

use num_complex::Complex64;

use super::set_model::Component;
use crate::error::{Error, Result};

pub(crate) struct FeketeSearch {
    /// Selected sample indices, ascending.
    pub indices: Vec<usize>,
    /// `Σ_{i<j} log |z_i - z_j|`.
    pub energy: f64,
}

impl FeketeSearch {
    /// `log d_n = 2 energy / (n (n - 1))`.
    pub fn log_transfinite_diameter(&self) -> f64 {
        let n = self.indices.len() as f64;
        2.0 * self.energy / (n * (n - 1.0))
    }
}

const MAX_SWEEPS: usize = 200;
const GLOBAL_CANDIDATES: usize = 16;

/// Greedy (Leja) start, optional parameter-uniform start, then local
/// exchange until no single move raises the energy.
pub(crate) fn fekete_search(
    samples: &[Complex64],
    components: &[Component],
    n: usize,
) -> Result<FeketeSearch> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 Fekete points, got {n}"
        )));
    }
    if n > samples.len() {
        return Err(Error::TooFewSamples {
            requested: n,
            available: samples.len(),
        });
    }
    let distinct = count_distinct(samples);
    if distinct <= 1 {
        return Err(Error::Degenerate("all boundary samples coincide".into()));
    }
    if n > distinct {
        return Err(Error::TooFewSamples {
            requested: n,
            available: distinct,
        });
    }

    let mut best = leja(samples, n);
    let mut best_energy = energy(samples, &best);
    if let [single] = components {
        if single.curve.is_some() {
            let uniform = uniform_start(single, n);
            let e = energy(samples, &uniform);
            if e > best_energy {
                best = uniform;
                best_energy = e;
            }
        }
    }
    let (mut indices, energy) = exchange(samples, components, best, best_energy);
    indices.sort_unstable();
    Ok(FeketeSearch { indices, energy })
}

fn count_distinct(samples: &[Complex64]) -> usize {
    let mut keys: Vec<(u64, u64)> = samples
        .iter()
        .map(|z| ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits()))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn ln_dist(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm().ln()
}

fn energy(samples: &[Complex64], idx: &[usize]) -> f64 {
    let mut e = 0.0;
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            e += ln_dist(samples[i], samples[j]);
        }
    }
    e
}

fn leja(samples: &[Complex64], n: usize) -> Vec<usize> {
    let centroid = samples.iter().sum::<Complex64>() / samples.len() as f64;
    let first = argmax(samples.iter().map(|z| (z - centroid).norm()));
    let mut pot = vec![0.0; samples.len()];
    let mut selected = vec![false; samples.len()];
    let mut out = Vec::with_capacity(n);
    let mut next = first;
    loop {
        out.push(next);
        selected[next] = true;
        if out.len() == n {
            return out;
        }
        let z = samples[next];
        for (p, s) in pot.iter_mut().zip(samples) {
            *p += ln_dist(*s, z);
        }
        next = argmax(
            pot.iter()
                .zip(&selected)
                .map(|(&p, &sel)| if sel { f64::NEG_INFINITY } else { p }),
        );
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Evenly spaced sample indices along a single curve.
fn uniform_start(c: &Component, n: usize) -> Vec<usize> {
    let closed = c.curve.as_ref().is_some_and(|k| k.closed());
    let mut idx: Vec<usize> = (0..n)
        .map(|k| {
            let off = if closed {
                (k * c.len) / n
            } else {
                ((k as f64) * (c.len - 1) as f64 / (n - 1) as f64).round() as usize
            };
            c.start + off.min(c.len - 1)
        })
        .collect();
    idx.dedup();
    // rounding can only collide when n is close to len; fill from the gaps
    let mut k = c.start;
    while idx.len() < n {
        if !idx.contains(&k) {
            idx.push(k);
        }
        k += 1;
    }
    idx
}

/// Potential of the selected atoms at every sample, skipping coincident points.
fn potentials(samples: &[Complex64], selected_idx: &[usize]) -> Vec<f64> {
    samples
        .iter()
        .map(|&s| {
            selected_idx
                .iter()
                .map(|&i| samples[i])
                .filter(|&z| z != s)
                .map(|z| ln_dist(s, z))
                .sum()
        })
        .collect()
}

fn exchange(
    samples: &[Complex64],
    components: &[Component],
    mut sel: Vec<usize>,
    mut e: f64,
) -> (Vec<usize>, f64) {
    let s_len = samples.len();
    let n = sel.len();
    let mut owner = vec![usize::MAX; s_len];
    for (k, c) in components.iter().enumerate() {
        owner[c.start..c.start + c.len].fill(k);
    }
    let mut selected = vec![false; s_len];
    for &i in &sel {
        selected[i] = true;
    }
    let curve_like = components.iter().all(|c| c.curve.is_some());
    let global = components.len() > 1 || !curve_like;
    let max_step = (s_len / n).clamp(1, 512);
    let mut pot = potentials(samples, &sel);

    for sweep in 0..MAX_SWEEPS {
        let threshold = 1e-13 * (1.0 + e.abs());
        let globals = if global {
            top_unselected(&pot, &selected, GLOBAL_CANDIDATES)
        } else {
            Vec::new()
        };
        let mut improved = false;
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            let a = sel[k];
            let za = samples[a];
            let mut best_gain = threshold;
            let mut best_b = None;
            let mut consider = |b: usize| {
                if selected[b] || samples[b] == za {
                    return;
                }
                let gain = pot[b] - ln_dist(samples[b], za) - pot[a];
                if gain > best_gain {
                    best_gain = gain;
                    best_b = Some(b);
                }
            };
            if let Some(c) = components.get(owner[a]).filter(|c| c.curve.is_some()) {
                let closed = c.curve.as_ref().is_some_and(|k| k.closed());
                let local = a - c.start;
                for step in 1..=max_step.min(c.len / 2) {
                    for off in [local as isize - step as isize, (local + step) as isize] {
                        let j = if closed {
                            off.rem_euclid(c.len as isize) as usize
                        } else if off < 0 || off >= c.len as isize {
                            continue;
                        } else {
                            off as usize
                        };
                        consider(c.start + j);
                    }
                }
            }
            for &b in &globals {
                consider(b);
            }
            if let Some(b) = best_b {
                let zb = samples[b];
                for (p, &s) in pot.iter_mut().zip(samples) {
                    if s != zb {
                        *p += ln_dist(s, zb);
                    }
                    if s != za {
                        *p -= ln_dist(s, za);
                    }
                }
                selected[a] = false;
                selected[b] = true;
                sel[k] = b;
                e += best_gain;
                improved = true;
            }
        }
        if !improved {
            break;
        }
        if sweep % 8 == 7 {
            pot = potentials(samples, &sel);
        }
    }
    let e = energy(samples, &sel);
    (sel, e)
}

fn top_unselected(pot: &[f64], selected: &[bool], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pot.len()).filter(|&j| !selected[j]).collect();
    let k = k.min(idx.len());
    if k == 0 {
        return idx;
    }
    idx.select_nth_unstable_by(k - 1, |&x, &y| pot[y].total_cmp(&pot[x]));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}
