//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Oracles are closed forms evaluated here, independently of the library.

use std::f64::consts::LN_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fekete_dyn::dynamics::{brolin_sample, julia_capacity, DynGreenEvaluator, DEFAULT_BURN_IN};
use fekete_dyn::harness::{run, run_dynamical_fs, ExperimentSpec, Report};
use fekete_dyn::heights::{
    canonical_height, canonical_height_limit, height_gap, rumely_height, weil_height,
    AlgebraicNumber,
};
use fekete_dyn::metric::{contraction_check, klimek_distance, GreenPair, GreenSide};
use fekete_dyn::polyarith::{chebyshev_monic, cyclotomic, BigInt};
use fekete_dyn::potential::CompactSetModel;
use fekete_dyn::{BigRational, Complex64, ComplexPolynomial, Error, IntPolynomial};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn int(coeffs: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(coeffs)
}

fn disk(r: f64) -> CompactSetModel {
    CompactSetModel::disk(c(0.0, 0.0), r).unwrap()
}

fn interval() -> CompactSetModel {
    CompactSetModel::interval(-2.0, 2.0).unwrap()
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn julia_side(coeffs: &[f64]) -> GreenSide {
    let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(coeffs)).unwrap();
    GreenSide::julia(e, 4096, 0).unwrap()
}

fn gamma(left: GreenSide, right: GreenSide) -> f64 {
    klimek_distance(&GreenPair { left, right }).unwrap().gamma
}

/// `g_{[-2,2]}(z) = log |w|`, `w + 1/w = z`, `|w| >= 1`.
fn interval_green(z: Complex64) -> f64 {
    let s = (z * z - 4.0).sqrt();
    (z + s).norm().max((z - s).norm()).ln() - LN_2
}

/// `(∏_{i<j} |z_i - z_j|)^{2/(N(N-1))}` over distinct atoms.
fn pairwise_transfinite_diameter(points: &[Complex64]) -> f64 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    let n = pts.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += (pts[i] - pts[j]).norm().ln();
        }
    }
    (2.0 * sum / (n * (n - 1)) as f64).exp()
}

fn criterion_1() -> Outcome {
    let cases: [(&[i64], f64); 3] = [
        (&[-2, 0, 1], 1.0),
        (&[0, 1, 0, 2], 0.5f64.sqrt()),
        (&[0, 0, 3], 1.0 / 3.0),
    ];
    let mut worst: f64 = 0.0;
    for (coeffs, expected) in cases {
        let p = int(coeffs);
        let cap = julia_capacity(&p).map_err(|e| e.to_string())?;
        ensure!(
            (cap - expected).abs() <= 4.0 * f64::EPSILON * expected,
            "cap K_[{p}] = {cap}, expected {expected}"
        );
        let mu = brolin_sample(
            &DynGreenEvaluator::from_int(&p).unwrap(),
            2048,
            DEFAULT_BURN_IN,
            1,
        )
        .map_err(|e| e.to_string())?;
        let est = pairwise_transfinite_diameter(mu.support());
        let rel = (est / expected - 1.0).abs();
        ensure!(
            rel <= 0.05,
            "Brolin re-estimate for [{p}]: {est} vs {expected}"
        );
        worst = worst.max(rel);
    }
    Ok(format!(
        "closed forms within 4 ulp; Brolin re-estimate worst rel err {worst:.2e}"
    ))
}

fn criterion_2() -> Outcome {
    let cheb = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0])).unwrap();
    let sq = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
    let probes: Vec<Complex64> = (0..64)
        .map(|k| {
            let r = 0.05 + 5.0 * (k as f64 / 63.0).powi(2);
            Complex64::from_polar(r, 0.37 + 2.1 * k as f64)
        })
        .collect();
    let e1 = probes
        .iter()
        .map(|&z| (cheb.green(z) - interval_green(z)).abs())
        .fold(0.0, f64::max);
    ensure!(e1 <= 1e-6, "z²-2 vs interval Green: {e1}");
    let e2 = probes
        .iter()
        .map(|&z| (sq.green(z) - z.norm().ln().max(0.0)).abs())
        .fold(0.0, f64::max);
    ensure!(e2 <= 1e-9, "z² vs log⁺|z|: {e2}");
    Ok(format!("sup errors {e1:.2e} (z²-2), {e2:.2e} (z²)"))
}

fn criterion_3() -> Outcome {
    let polys: [&[f64]; 5] = [
        &[-2.0, 0.0, 1.0],
        &[-1.0, 0.0, 1.0],
        &[0.0, 1.0, 0.0, 2.0],
        &[0.25, 0.0, 1.0],
        &[1.0, -1.0, 0.0, 0.0, 1.0],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for coeffs in polys {
        let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(coeffs)).unwrap();
        let d = e.degree() as f64;
        for _ in 0..200 {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let rhs = d * e.green(z);
            let lhs = e.green(e.apply(z));
            let err = (lhs - rhs).abs();
            ensure!(
                err <= 1e-7 * rhs.abs() || err == 0.0,
                "{coeffs:?} at {z}: {lhs} vs {rhs}"
            );
            if rhs > 0.0 {
                worst = worst.max(err / rhs);
            }
        }
    }
    Ok(format!("1000 points, worst rel err {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let g = gamma(disk(1.0).into(), disk(2.0).into());
    ensure!((g - LN_2).abs() <= 1e-3, "Γ(D, 2D) = {g}");
    let g = gamma(julia_side(&[-2.0, 0.0, 1.0]), interval().into());
    ensure!(g <= 1e-3, "Γ(K_{{z²-2}}, [-2,2]) = {g}");

    let catalog: Vec<(&str, GreenSide)> = vec![
        ("D", disk(1.0).into()),
        ("2D", disk(2.0).into()),
        ("[-2,2]", interval().into()),
        ("K_{z²-1}", julia_side(&[-1.0, 0.0, 1.0])),
    ];
    let n = catalog.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = gamma(catalog[i].1.clone(), catalog[j].1.clone());
        }
    }
    for i in 0..n {
        ensure!(m[i][i] <= 1e-9, "Γ({0}, {0}) = {1}", catalog[i].0, m[i][i]);
        for j in 0..n {
            ensure!(
                (m[i][j] - m[j][i]).abs() <= 1e-9,
                "asymmetry {} / {}",
                catalog[i].0,
                catalog[j].0
            );
            if i != j {
                ensure!(
                    m[i][j] > 0.05,
                    "Γ({}, {}) = {}",
                    catalog[i].0,
                    catalog[j].0,
                    m[i][j]
                );
            }
            for k in 0..n {
                ensure!(
                    m[i][k] <= m[i][j] + m[j][k] + 1e-6,
                    "triangle {} {} {}",
                    catalog[i].0,
                    catalog[j].0,
                    catalog[k].0
                );
            }
        }
    }

    let sq = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]);
    let cheb = ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0]);
    let r = contraction_check(&sq, &disk(1.0), &disk(2.0)).map_err(|e| e.to_string())?;
    ensure!(
        r.ok && (r.lhs - LN_2 / 2.0).abs() <= 1e-3 && (r.rhs - LN_2 / 2.0).abs() <= 1e-3,
        "{r:?}"
    );
    let r = contraction_check(&sq, &disk(1.0), &disk(1.0)).map_err(|e| e.to_string())?;
    ensure!(r.ok && r.lhs <= 1e-9, "{r:?}");
    let r = contraction_check(&cheb, &interval(), &disk(1.0)).map_err(|e| e.to_string())?;
    ensure!(r.ok, "{r:?}");
    Ok("closed forms, metric axioms and 3 contraction cases hold".into())
}

fn criterion_5() -> Outcome {
    let sq = int(&[0, 0, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p: i64 = rng.random_range(-1_000_000..=1_000_000);
        let q: i64 = rng.random_range(1..=1_000_000);
        let g = p.gcd(&q).max(1);
        let exact = ((p / g).abs().max(q / g) as f64).ln();
        let alpha = AlgebraicNumber::rational(&rational(p, q));
        let h = canonical_height(&sq, &alpha)
            .map_err(|e| e.to_string())?
            .total;
        ensure!(
            (h - exact).abs() <= 1e-8,
            "ĥ_{{z²}}({p}/{q}) = {h}, Weil {exact}"
        );
        worst = worst.max((h - exact).abs());
    }

    let basilica = int(&[-1, 0, 1]);
    for x in [0, -1] {
        let h = canonical_height(&basilica, &AlgebraicNumber::rational(&rational(x, 1)))
            .map_err(|e| e.to_string())?
            .total;
        ensure!(h.abs() <= 1e-9, "ĥ_{{z²-1}}({x}) = {h}");
    }
    let cheb = int(&[-2, 0, 1]);
    let h = canonical_height(&cheb, &AlgebraicNumber::rational(&rational(3, 1)))
        .map_err(|e| e.to_string())?
        .total;
    let expected = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    ensure!(
        (h - expected).abs() <= 1e-6,
        "ĥ_{{z²-2}}(3) = {h}, expected {expected}"
    );

    let cases = [
        (int(&[0, 0, 1]), rational(3, 2)),
        (int(&[-1, 0, 1]), rational(1, 2)),
        (int(&[-2, 0, 1]), rational(3, 1)),
        (int(&[1, 0, 1]), rational(2, 3)),
        (int(&[0, -1, 0, 1]), rational(5, 4)),
    ];
    for (p, a) in &cases {
        let seq = canonical_height_limit(p, a, 5).map_err(|e| e.to_string())?;
        ensure!(
            seq.depth() == 5,
            "[{p}] at {a}: orbit stopped at depth {}",
            seq.depth()
        );
        let h = canonical_height(p, &AlgebraicNumber::rational(a))
            .map_err(|e| e.to_string())?
            .total;
        let tol = 2.0 * (p.degree().unwrap() as f64).powi(-5);
        ensure!(
            (seq.last() - h).abs() <= tol,
            "[{p}] at {a}: limit {} vs {h}",
            seq.last()
        );
    }
    Ok(format!(
        "50 rationals (worst {worst:.1e}), preperiodic and closed-form values, 5 depth-5 limits"
    ))
}

fn criterion_6() -> Outcome {
    let catalog = [
        cyclotomic(5),
        cyclotomic(7),
        int(&[-1, -1, 1]),
        int(&[-2, 0, 1]),
        int(&[-3, 2]),
        int(&[-1, -1, 0, 1]),
        int(&[1, 0, 3]),
        int(&[1, 0, -10, 0, 1]),
        int(&[-5, 1]),
        int(&[2, -3, 0, 0, 0, 7]),
    ];
    let e = disk(1.0);
    let mut worst: f64 = 0.0;
    for p in &catalog {
        let alpha = AlgebraicNumber::from_minpoly(p).map_err(|e| e.to_string())?;
        let w = weil_height(&alpha).total;
        let r = rumely_height(&alpha, &e).map_err(|e| e.to_string())?.total;
        ensure!((w - r).abs() <= 1e-6, "[{p}]: Weil {w}, Rumely {r}");
        worst = worst.max((w - r).abs());
    }
    let alpha = AlgebraicNumber::from_minpoly(&int(&[-3, 0, 1])).unwrap();
    let h = rumely_height(&alpha, &interval())
        .map_err(|e| e.to_string())?
        .total;
    ensure!(h <= 1e-6, "h_[-2,2](√3) = {h}");
    Ok(format!(
        "10 minimal polynomials, worst gap {worst:.1e}; h_[-2,2](√3) = {h:.1e}"
    ))
}

fn decreasing_with_allowance(values: &[f64]) -> bool {
    let mut spare = true;
    for w in values.windows(2) {
        if w[1] < w[0] {
            continue;
        }
        if spare && w[1] <= 1.1 * w[0] {
            spare = false;
            continue;
        }
        return false;
    }
    true
}

fn experiment(text: &str) -> Result<Report, String> {
    let spec = ExperimentSpec::parse(text).map_err(|e| e.to_string())?;
    run(&spec, None).map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let r = experiment(
        "name = \"cyclotomic\"\nexperiment = \"bilu-rumely\"\nfamily = \"cyclotomic\"\n\
         degrees = [5, 17, 53, 101]\nset = { kind = \"circle\", r = 1 }\n",
    )?;
    ensure!(
        r.failure.is_none(),
        "cyclotomic run failed: {:?}",
        r.failure
    );
    let t = r.main_table();
    let col = |name: &str| {
        t.values(name)
            .ok_or_else(|| format!("missing column {name}"))
    };
    ensure!(t.rows.len() == 4, "cyclotomic rows: {}", t.rows.len());
    let h = col("h_E")?;
    let dist = col("dist")?;
    ensure!(h.iter().all(|v| v.abs() <= 1e-9), "h_E = {h:?}");
    ensure!(dist.iter().all(|v| v.abs() <= 1e-9), "dist = {dist:?}");
    let g = col("gamma")?;
    let disc = col("discrepancy")?;
    ensure!(decreasing_with_allowance(&g), "Γ not decreasing: {g:?}");
    ensure!(
        decreasing_with_allowance(&disc),
        "discrepancy not decreasing: {disc:?}"
    );

    let mut worst: f64 = 0.0;
    for (family, set) in [
        ("power_maps", "{ kind = \"disk\", r = 1 }"),
        ("chebyshev", "{ kind = \"interval\", a = -2, b = 2 }"),
    ] {
        let r = experiment(&format!(
            "name = \"{family}\"\nexperiment = \"bilu-rumely\"\nfamily = \"{family}\"\nset = {set}\n"
        ))?;
        ensure!(r.failure.is_none(), "{family} run failed: {:?}", r.failure);
        let g = r.main_table().values("gamma").ok_or("missing gamma")?;
        ensure!(g.len() == 6, "{family}: {} rows", g.len());
        ensure!(g.iter().all(|&v| v <= 1e-3), "{family}: Γ = {g:?}");
        worst = g.iter().fold(worst, |a, &b| a.max(b));
    }
    Ok(format!(
        "cyclotomic Γ {:.3} -> {:.3}, discrepancy {:.3} -> {:.3}; power/Chebyshev max Γ {worst:.1e}",
        g[0], g[3], disc[0], disc[3]
    ))
}

fn criterion_8() -> Outcome {
    let r = experiment("name = \"runaway\"\nexperiment = \"runaway\"\nfamily = \"runaway\"\ndegree_range = [4, 12]\n")?;
    ensure!(r.failure.is_none(), "runaway failed: {:?}", r.failure);
    let t = r.main_table();
    let col = |name: &str| {
        t.values(name)
            .ok_or_else(|| format!("missing column {name}"))
    };
    let (d, n_d, inside, modulus, h) = (
        col("d")?,
        col("N_d")?,
        col("inside")?,
        col("max_modulus")?,
        col("weil_height")?,
    );
    ensure!(
        d == (4..=12).map(f64::from).collect::<Vec<_>>(),
        "degrees {d:?}"
    );
    let mut worst: f64 = 0.0;
    for k in 0..d.len() {
        ensure!(
            inside[k] == d[k] - 1.0,
            "d = {}: {} roots inside",
            d[k],
            inside[k]
        );
        let predicted = n_d[k].ln() / d[k];
        let rel = (h[k] - predicted).abs() / predicted;
        ensure!(
            rel <= 0.1,
            "d = {}: h = {}, (1/d) log N_d = {predicted}",
            d[k],
            h[k]
        );
        worst = worst.max(rel);
    }
    ensure!(
        modulus.windows(2).all(|w| w[1] > w[0]),
        "max modulus not increasing: {modulus:?}"
    );
    ensure!(
        h.windows(2).all(|w| w[1] < w[0]),
        "height not decreasing: {h:?}"
    );
    Ok(format!("d = 4..12, worst rel height error {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let seq: Vec<IntPolynomial> = [2usize, 4, 8, 16, 32, 64]
        .iter()
        .map(|&n| chebyshev_monic(n))
        .collect();
    let probes = [
        AlgebraicNumber::rational(&rational(3, 1)),
        AlgebraicNumber::rational(&rational(5, 2)),
    ];
    let table = height_gap(&seq, &interval(), &probes).map_err(|e| e.to_string())?;
    ensure!(table.rows.len() == 12, "{} rows", table.rows.len());
    let mut slack = f64::INFINITY;
    for row in &table.rows {
        ensure!(row.gap <= row.gamma + 1e-3, "{row:?}");
        slack = slack.min(row.gamma + 1e-3 - row.gap);
    }
    Ok(format!("12 (n, probe) rows, minimum slack {slack:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut unit = 0;
    for _ in 0..10_000 {
        let d = rng.random_range(2..=12);
        let mut coeffs: Vec<i64> = (0..d).map(|_| rng.random_range(-50..=50)).collect();
        let lead = loop {
            let a: i64 = rng.random_range(-20..=20);
            if a != 0 {
                break a;
            }
        };
        coeffs.push(lead);
        let cap = julia_capacity(&int(&coeffs)).map_err(|e| e.to_string())?;
        ensure!(cap <= 1.0, "cap = {cap} for {coeffs:?}");
        ensure!(
            (cap == 1.0) == (lead.abs() == 1),
            "cap = {cap} with leading coefficient {lead}"
        );
        unit += usize::from(lead.abs() == 1);
    }
    for set in [
        "{ kind = \"disk\", r = 0.5 }",
        "{ kind = \"interval\", a = -1, b = 1 }",
    ] {
        let spec = ExperimentSpec::parse(&format!(
            "name = \"fs\"\nexperiment = \"dynamical-fs\"\nfamily = \"chebyshev\"\ndegrees = [4]\nepsilon = 0.2\nset = {set}\n"
        ))
        .map_err(|e| e.to_string())?;
        match run_dynamical_fs(&spec) {
            Err(Error::CapacityObstruction { .. }) => {}
            other => {
                return Err(format!(
                    "dynamical-fs on {set}: expected refusal, got {other:?}"
                ))
            }
        }
    }
    Ok(format!(
        "10⁴ polynomials ({unit} with |a_d| = 1); 2 refusals"
    ))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Outcome, Duration); 10] = [
        (criterion_1, Duration::from_secs(10)),
        (criterion_2, Duration::from_secs(5)),
        (criterion_3, Duration::from_secs(60)),
        (criterion_4, Duration::from_secs(60)),
        (criterion_5, Duration::from_secs(30)),
        (criterion_6, Duration::from_secs(60)),
        (criterion_7, Duration::from_secs(600)),
        (criterion_8, Duration::from_secs(30)),
        (criterion_9, Duration::from_secs(120)),
        (criterion_10, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2}: PASS ({:.1?}) {msg}", k + 1, elapsed),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL ({:.1?}) {msg}", k + 1, elapsed);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
