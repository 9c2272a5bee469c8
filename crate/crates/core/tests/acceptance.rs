//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplexvol::cli;
use simplexvol::combinatorics::{binomial_u64, exponents_up_to, factorial_f64, h_complete};
use simplexvol::cubature::{apply_rule, conical_product_rule, gauss_jacobi_rule, grundmann_moller_rule};
use simplexvol::exact_integration::{
    integrate_affine_power, integrate_monomial_standard, integrate_polynomial, lagrange_zero_sum,
    standard_monomial_integral, vertex_affine_values, AffinePowerMethod, GeneralizedExponent,
    PolyMethod,
};
use simplexvol::functions::FunctionSpec;
use simplexvol::geometry::{AnySimplex, Simplex};
use simplexvol::polynomial::Polynomial;
use simplexvol::relaxations::{
    cutoff_report, exp_case_a_limit, exp_case_b_limit, exp_family_volumes, hunter_bound_check,
    improved_bound_applies, max_integral_standard, naive_defect_monte_carlo, naive_volume_cubature,
    ratio_lower_bound_power, scaled_logsumexp_integral, ExpFamilyParams, RelaxConfig,
};
use simplexvol::scalar::{ratio, rational_to_f64, Rational, Scalar, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: simplexvol::Error) -> String {
    e.to_string()
}

fn rand_q(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    ratio(rng.random_range(-num..=num), rng.random_range(1..=den))
}

fn rand_simplex_q(rng: &mut ChaCha8Rng, d: usize, nonneg: bool) -> Simplex<Rational> {
    loop {
        let verts: Vec<Vec<Rational>> = (0..=d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let r = rand_q(rng, 6, 4);
                        if nonneg {
                            r.abs()
                        } else {
                            r
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(s) = Simplex::new(verts) {
            return s;
        }
    }
}

fn rand_poly(rng: &mut ChaCha8Rng, d: usize, max_deg: u32) -> Polynomial {
    let mut p = Polynomial::zero(d);
    let terms = rng.random_range(1..=6);
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_deg);
        let mut alpha = vec![0u32; d];
        for _ in 0..deg {
            alpha[rng.random_range(0..d)] += 1;
        }
        p.add_term(alpha, rand_q(rng, 9, 5));
    }
    p
}

fn ac1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let simplices: Vec<Simplex<Rational>> = (0..20).map(|i| rand_simplex_q(&mut rng, i % 4 + 1, false)).collect();
    let mut checks = 0;
    for i in 0..100 {
        let d = i % 4 + 1;
        let p = rand_poly(&mut rng, d, 6);
        for j in simplices.iter().filter(|s| s.dim() == d) {
            let a = integrate_polynomial(j, &p, PolyMethod::Pullback).map_err(e2s)?;
            let b = integrate_polynomial(j, &p, PolyMethod::TaylorExpansion).map_err(e2s)?;
            let c = integrate_polynomial(j, &p, PolyMethod::LinformDecomp).map_err(e2s)?;
            ensure(a == b && a == c, || format!("methods disagree for {p} on {j:?}: {a} {b} {c}"))?;
            checks += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{checks} polynomial/simplex pairs identical across three methods in {secs:.1} s"))
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut distinct = 0;
    while distinct < 50 {
        let d = rng.random_range(1..=4);
        let j = rand_simplex_q(&mut rng, d, false);
        let c: Vec<Rational> = (0..d).map(|_| rand_q(&mut rng, 5, 3)).collect();
        let b = rand_q(&mut rng, 3, 2);
        let n = rng.random_range(0..=6);
        let vals = vertex_affine_values(&j, &c, &b).map_err(e2s)?;
        let all_distinct = (0..vals.len()).all(|a| (a + 1..vals.len()).all(|k| vals[a] != vals[k]));
        if !all_distinct {
            continue;
        }
        let run = |m| integrate_affine_power(&j, &c, &b, n, m).map_err(e2s);
        let (br, se, re) = (run(AffinePowerMethod::Brion)?, run(AffinePowerMethod::Series)?, run(AffinePowerMethod::Residue)?);
        ensure(br == se && se == re, || format!("distinct poles disagree: {br} {se} {re}"))?;
        distinct += 1;
    }
    // repeated poles: prescribe vertex values with repeats and solve for the last coordinate
    let patterns: [&[i64]; 5] = [&[1, 1, 3], &[2, 2, 2, -1], &[0, 0, 5, 5], &[1, 4, 4, 4, 4], &[-2, 3, 3]];
    let mut repeated = 0;
    while repeated < 20 {
        let pattern = patterns[repeated % patterns.len()];
        let d = pattern.len() - 1;
        let scale = rand_q(&mut rng, 3, 1);
        if scale.is_zero() {
            continue;
        }
        let mut c: Vec<Rational> = (0..d).map(|_| rand_q(&mut rng, 4, 2)).collect();
        c[d - 1] = ratio(rng.random_range(1..=3), 1);
        let verts: Vec<Vec<Rational>> = pattern
            .iter()
            .map(|&p| {
                let mut v: Vec<Rational> = (0..d).map(|_| rand_q(&mut rng, 5, 3)).collect();
                let partial = (0..d - 1).fold(Rational::zero(), |acc, i| acc + &c[i] * &v[i]);
                v[d - 1] = (scale.clone() * ratio(p, 1) - partial) / &c[d - 1];
                v
            })
            .collect();
        let Ok(j) = Simplex::new(verts) else { continue };
        let n = rng.random_range(0..=6);
        let b = Rational::zero();
        let re = integrate_affine_power(&j, &c, &b, n, AffinePowerMethod::Residue).map_err(e2s)?;
        let se = integrate_affine_power(&j, &c, &b, n, AffinePowerMethod::Series).map_err(e2s)?;
        ensure(re == se, || format!("repeated poles disagree: {re} {se}"))?;
        ensure(integrate_affine_power(&j, &c, &b, n, AffinePowerMethod::Brion).is_err(), || {
            "vertex sum accepted repeated values".into()
        })?;
        repeated += 1;
    }
    Ok("50 distinct-pole cases: vertex sum = series = residue; 20 repeated-pole cases: residue = series".into())
}

/// `∫₀¹ Σ aₖ xᵏ dx`.
fn poly_integral_01(coeffs: &[Rational]) -> Rational {
    coeffs
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (k, a)| acc + a / Rational::from_u64(k as u64 + 1))
}

fn ac3() -> Outcome {
    let v = integrate_monomial_standard(&GeneralizedExponent::from_integers(&[1, 1, 0]).map_err(e2s)?);
    // iterated: ∫₀^{1−x₁} x₂ dx₂ = (1−x₁)²/2, then ∫₀¹ x₁(1−x₁)²/2 dx₁
    let oracle = poly_integral_01(&[ratio(0, 1), ratio(1, 2), ratio(-1, 1), ratio(1, 2)]);
    ensure(v == Value::Exact(oracle.clone()) && oracle == ratio(1, 24), || format!("x1*x2 gave {v}"))?;

    let sqrt = integrate_monomial_standard(&GeneralizedExponent::new(vec![ratio(1, 2), ratio(0, 1)]).map_err(e2s)?);
    // composite Simpson on ∫₀¹ √x dx = ∫₀¹ 2t² dt
    let n = 1000;
    let h = 1.0 / n as f64;
    let g = |t: f64| 2.0 * t * t;
    let simpson: f64 = (0..n)
        .map(|i| {
            let a = i as f64 * h;
            h / 6.0 * (g(a) + 4.0 * g(a + h / 2.0) + g(a + h))
        })
        .sum();
    let got = sqrt.to_f64();
    ensure((got - simpson).abs() <= 1e-12 && (got - 2.0 / 3.0).abs() <= 1e-12, || {
        format!("sqrt gave {got}, oracle {simpson}")
    })?;
    Ok(format!("x1*x2 on the triangle = {v}; sqrt(x) on [0,1] = {got:.15}"))
}

fn ac4() -> Outcome {
    let mut checked = 0;
    for d in 1..=4usize {
        for s in 0..=3usize {
            let gm = grundmann_moller_rule(d, s).map_err(e2s)?;
            let cp = conical_product_rule(d, s).map_err(e2s)?;
            ensure(gm.len() as u64 == binomial_u64((s + d + 1) as u64, s as u64), || {
                format!("GM d={d} s={s} has {} points", gm.len())
            })?;
            ensure(cp.len() == (s + 1).pow(d as u32), || format!("conical d={d} s={s} has {} points", cp.len()))?;
            ensure(cp.weights.iter().all(|&w| w > 0.0), || format!("conical d={d} s={s} has a nonpositive weight"))?;
            let target = 1.0 / factorial_f64(d as u32);
            ensure((cp.weight_sum() - target).abs() <= 1e-14, || {
                format!("conical d={d} s={s} weight sum {}", cp.weight_sum())
            })?;
            for alpha in exponents_up_to(d, 2 * s as u32 + 1) {
                let exact = rational_to_f64(&standard_monomial_integral(&alpha));
                let mono = |x: &[f64]| Ok(x.iter().zip(&alpha).map(|(xi, &a)| xi.powi(a as i32)).product());
                for rule in [&gm, &cp] {
                    let v = apply_rule(rule, mono).map_err(e2s)?;
                    ensure((v - exact).abs() <= 1e-12 * exact.abs(), || {
                        format!("{} d={d} s={s} alpha={alpha:?}: {v} vs {exact}", rule.name)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} monomial checks; point counts and conical weights as expected"))
}

fn ac5() -> Outcome {
    let r = gauss_jacobi_rule(1, 1.0, 0.0).map_err(e2s)?.to_unit_interval();
    let mut pairs: Vec<(f64, f64)> = r.nodes.iter().cloned().zip(r.weights.iter().cloned()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let s6 = 6f64.sqrt();
    let expected = [((4.0 - s6) / 10.0, (9.0 + s6) / 36.0), ((4.0 + s6) / 10.0, (9.0 - s6) / 36.0)];
    ensure(pairs.len() == 2, || format!("{} nodes", pairs.len()))?;
    for ((x, w), (ex, ew)) in pairs.iter().zip(expected) {
        ensure((x - ex).abs() <= 1e-12 && (w - ew).abs() <= 1e-12, || {
            format!("node {x} weight {w}, expected {ex} {ew}")
        })?;
    }
    Ok(format!("nodes {:.15}, {:.15}; weights {:.15}, {:.15}", pairs[0].0, pairs[1].0, pairs[0].1, pairs[1].1))
}

fn interval(l: Rational, u: Rational) -> AnySimplex {
    AnySimplex::Exact(Simplex::new(vec![vec![l], vec![u]]).unwrap())
}

fn ac6() -> Outcome {
    let cfg = RelaxConfig::default();
    let f = FunctionSpec::parse("poly:x1^2").map_err(e2s)?;
    let r = cutoff_report(&interval(ratio(1, 1), ratio(2, 1)), &f, &cfg).map_err(e2s)?;
    ensure(r.cutoff_amount.exact_value() == Some(&ratio(7, 36)), || {
        format!("cut-off amount {}", r.cutoff_amount.value)
    })?;
    let bound = ratio_lower_bound_power(2.0, 1).map_err(e2s)?;
    ensure((bound - 1.0 / 3.0).abs() < 1e-15, || format!("bound {bound}"))?;
    let measured = r.ratio_f64().ok_or("ratio undefined")?;
    ensure(measured >= bound, || format!("ratio {measured} below {bound}"))?;
    let tight = cutoff_report(&interval(ratio(1, 1000), ratio(1, 1)), &f, &cfg).map_err(e2s)?;
    let t = tight.ratio_f64().ok_or("ratio undefined")?;
    ensure((t - bound).abs() <= 0.02 * bound, || format!("ratio {t} at l/u = 1e-3"))?;
    Ok(format!("cut-off 7/36, ratio {measured:.6} >= 1/3, ratio {t:.6} at l/u = 1e-3"))
}

/// `∫₀¹ z^d ∫_J f(zx) dx dz` as `∫` over the (d+1)-simplex `conv{0, (vⱼ, 1)}` of `f(y)`.
fn cone_defect_exact(j: &Simplex<Rational>, p: &Polynomial) -> Result<Rational, String> {
    let d = j.dim();
    let mut verts = vec![vec![Rational::zero(); d + 1]];
    for v in j.vertices() {
        let mut w = v.clone();
        w.push(Rational::one());
        verts.push(w);
    }
    let cone = Simplex::new(verts).map_err(e2s)?;
    let lifted = p.with_nvars(d + 1).map_err(e2s)?;
    integrate_polynomial(&cone, &lifted, PolyMethod::Pullback).map_err(e2s)
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = RelaxConfig::default();
    for _ in 0..30 {
        let d = rng.random_range(1..=3);
        let q = rng.random_range(1..=5u32);
        let j = rand_simplex_q(&mut rng, d, true);
        // odd powers are convex on J only where c·x ≥ 0, so keep c nonnegative there
        let c: Vec<Rational> = (0..d)
            .map(|_| {
                let r = rand_q(&mut rng, 4, 3);
                if q % 2 == 1 {
                    r.abs()
                } else {
                    r
                }
            })
            .collect();
        let f = FunctionSpec::LinPow {
            c: c.clone(),
            b: Rational::zero(),
            q: Rational::from_u64(q as u64),
        };
        let any = AnySimplex::Exact(j.clone());
        let r = cutoff_report(&any, &f, &cfg).map_err(e2s)?;
        let (Some(naive), Some(persp)) = (r.naive_volume.exact_value(), r.perspective_volume.exact_value()) else {
            return Err(format!("non-exact volumes on route {}", r.route));
        };
        let p = Polynomial::affine(&c, Rational::zero()).pow(q);
        let integral = integrate_polynomial(&j, &p, PolyMethod::Pullback).map_err(e2s)?;
        let (qr, dr) = (Rational::from_u64(q as u64), Rational::from_u64(d as u64));
        let coeff = (qr.clone() - Rational::one()) / ((qr + &dr + Rational::one()) * (dr.clone() + Rational::from_u64(2)));
        ensure(naive - persp == coeff * &integral, || format!("identity fails for q={q} d={d}"))?;
        // the naive volume itself, with the defect integral taken over the cone as a simplex
        let secant = r.secant_mean.exact().ok_or("non-exact secant mean")?;
        let independent = secant / (dr + Rational::from_u64(2)) - cone_defect_exact(&j, &p)?;
        ensure(*naive == independent, || format!("naive volume {naive} vs {independent}"))?;
    }
    Ok("30 random (J, c, q) cases: identity exact, naive volume matches the lifted-cone integral".into())
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut improved = [0usize; 3];
    for i in 0..1000 {
        // every fourth draw lands in one of the improved cases
        let (q, d) = match i % 4 {
            0 => (2, rng.random_range(1..=5)),
            1 => (2 * rng.random_range(1..=4), 2),
            2 => (4, 3),
            _ => (2 * rng.random_range(1..=4), rng.random_range(1..=5)),
        };
        let values: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let chk = hunter_bound_check(q, &values).map_err(e2s)?;
        let half = q / 2;
        let hunter = chk.power_sum / (2f64.powi(half as i32) * factorial_f64(half));
        ensure(chk.h >= hunter - 1e-12 * chk.power_sum, || format!("h_{q}{values:?} below the general bound"))?;
        if improved_bound_applies(q, d) {
            ensure(chk.improved && chk.h >= 0.5 * chk.power_sum - 1e-12 * chk.power_sum, || {
                format!("h_{q}{values:?} below half the power sum")
            })?;
            if q == 2 {
                improved[0] += 1;
            } else if d == 2 {
                improved[1] += 1;
            } else {
                improved[2] += 1;
            }
        }
    }
    ensure(improved.iter().all(|&n| n > 0), || format!("improved cases {improved:?}"))?;

    let vals = [ratio(1, 1), ratio(1, 1), ratio(-2, 1)];
    let h6 = h_complete(6, &vals);
    let ps = vals.iter().fold(Rational::zero(), |acc, x| acc + x.powu(6));
    ensure(h6.clone() / ps == ratio(31, 66), || format!("h_6(1,1,-2) = {h6}"))?;
    let v4 = [0.3577, 0.3577, 0.3577, -0.9875];
    let r4 = h_complete(4, &v4[..]) / v4.iter().map(|x: &f64| x.powi(4)).sum::<f64>();
    ensure((r4 - 0.4598).abs() <= 0.0005 && !improved_bound_applies(4, 4), || format!("second ratio {r4}"))?;
    Ok(format!("1000 checks (improved cases {improved:?}); 31/66 exact; {r4:.4}"))
}

fn monotone_toward(values: &[f64], limit: f64) -> bool {
    let dist: Vec<f64> = values.iter().map(|v| (v - limit).abs()).collect();
    let same_side = values.iter().all(|v| (v - limit).signum() == (values[0] - limit).signum());
    let ordered = values.windows(2).all(|w| if values[0] < limit { w[1] > w[0] } else { w[1] < w[0] });
    same_side && ordered && dist.windows(2).all(|w| w[1] < w[0])
}

fn ac9() -> Outcome {
    let cfg = RelaxConfig::default();
    let grid = [10.0, 20.0, 40.0];
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &u in &grid {
        let ra = exp_family_volumes(&ExpFamilyParams::case_a(2, 1.0, u).map_err(e2s)?, &cfg).map_err(e2s)?;
        a.push(u * u * ra.ratio_f64().ok_or("ratio undefined")?);
        let rb = exp_family_volumes(&ExpFamilyParams::case_b(vec![1.0, 0.5], u).map_err(e2s)?, &cfg).map_err(e2s)?;
        b.push(u * rb.ratio_f64().ok_or("ratio undefined")?);
    }
    let (la, lb) = (exp_case_a_limit(2), exp_case_b_limit(2));
    ensure(monotone_toward(&a, la), || format!("case (a) {a:?} not monotone toward {la}"))?;
    ensure(monotone_toward(&b, lb), || format!("case (b) {b:?} not monotone toward {lb}"))?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    Ok(format!("u^2*ratio = {} -> {la}; u*ratio = {} -> {lb}", fmt(&a), fmt(&b)))
}

fn ac10() -> Outcome {
    let cfg = RelaxConfig::default();
    let mut worst_rel: f64 = 0.0;
    let mut worst_sigma: f64 = 0.0;
    for (case, (d, u)) in [2usize, 3]
        .into_iter()
        .flat_map(|d| [1.0f64, -1.0, 4.0, -4.0].map(|u| (d, u)))
        .enumerate()
    {
        let v0 = vec![u.abs() + 0.5; d];
        let mut verts = vec![v0.clone()];
        for j in 0..d {
            let mut v = v0.clone();
            v[j] -= u;
            verts.push(v);
        }
        let simplex = Simplex::new(verts).map_err(e2s)?;
        let params = ExpFamilyParams::new(simplex.clone(), vec![1.0; d]).map_err(e2s)?;
        let report = match exp_family_volumes(&params, &cfg) {
            Ok(r) => r,
            Err(e @ simplexvol::Error::Discrepancy { .. }) => {
                return Ok(format!("closed form flagged for d={d} u={u}: {e}"));
            }
            Err(e) => return Err(e2s(e)),
        };
        let closed = report.naive_volume.to_f64();
        let any = AnySimplex::Numeric(simplex.clone());
        let f = params.spec().map_err(e2s)?;
        let fine = RelaxConfig { s: 24, ..cfg.clone() };
        let cub = naive_volume_cubature(&any, &f, &fine).map_err(e2s)?.to_f64();
        let rel = (closed - cub).abs() / cub.abs();
        ensure(rel <= 1e-6, || format!("d={d} u={u}: closed {closed} vs cubature {cub}"))?;
        let mc = naive_defect_monte_carlo(&simplex, &f, 1_000_000, 0x5eed + case as u64).map_err(e2s)?;
        let mc_naive = report.secant_mean.to_f64() / (d as f64 + 2.0) - mc.to_f64();
        let sigma = (closed - mc_naive).abs() / mc.error;
        ensure(sigma <= 3.0, || format!("d={d} u={u}: Monte-Carlo {mc_naive} is {sigma:.2} sigma from {closed}"))?;
        worst_rel = worst_rel.max(rel);
        worst_sigma = worst_sigma.max(sigma);
    }
    Ok(format!("8 cases agree: worst cubature relative gap {worst_rel:.2e}, worst Monte-Carlo gap {worst_sigma:.2} sigma"))
}

fn ac11() -> Outcome {
    let args = ["simplexvol", "sweep", "--family", "logsumexp", "--d", "3", "--u-grid", "2:30:1", "--degree", "5"];
    let out = cli::run(args);
    ensure(out.code == 0, || format!("sweep exited {}: {}", out.code, out.stderr))?;
    let mut rows = Vec::new();
    for line in out.stdout.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let u: f64 = cols[0].parse().map_err(|_| format!("bad row {line}"))?;
        let r: f64 = cols[3].parse().map_err(|_| format!("ratio not numeric in {line}"))?;
        rows.push((u, r));
    }
    ensure(rows.len() == 29, || format!("{} rows", rows.len()))?;
    ensure(rows.iter().all(|&(_, r)| r > 0.0), || "nonpositive ratio".into())?;
    let at = |u: f64| rows.iter().find(|r| r.0 == u).map(|r| r.1).unwrap();
    ensure(at(30.0) < at(5.0), || format!("ratio(30) = {} >= ratio(5) = {}", at(30.0), at(5.0)))?;

    let target = rational_to_f64(&max_integral_standard(3));
    ensure((target - 11.0 / 144.0).abs() < 1e-15, || format!("max integral {target}"))?;
    let v = scaled_logsumexp_integral(3, 100.0, None, 12).map_err(e2s)?;
    ensure((v - target).abs() <= 0.05 * target, || format!("normalized integral {v} vs {target}"))?;
    Ok(format!(
        "29 positive ratios, ratio(5) = {:.4}, ratio(30) = {:.4}; normalized integral {v:.5} vs {target:.5}",
        at(5.0),
        at(30.0)
    ))
}

fn ac12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 100 {
        let d = rng.random_range(1..=5);
        let j = rand_simplex_q(&mut rng, d, false);
        let c: Vec<Rational> = (0..d).map(|_| rand_q(&mut rng, 5, 3)).collect();
        let n = rng.random_range(0..d as u32);
        let vals = vertex_affine_values(&j, &c, &Rational::zero()).map_err(e2s)?;
        if (0..vals.len()).any(|a| (a + 1..vals.len()).any(|k| vals[a] == vals[k])) {
            continue;
        }
        let exact = lagrange_zero_sum(&vals, n).map_err(e2s)?;
        ensure(exact.is_zero(), || format!("d={d} n={n}: exact sum {exact}"))?;
        let fvals: Vec<f64> = vals.iter().map(rational_to_f64).collect();
        let s = lagrange_zero_sum(&fvals, n).map_err(e2s)?;
        ensure(s.abs() <= 1e-10, || format!("d={d} n={n}: floating sum {s:e}"))?;
        worst = worst.max(s.abs());
        cases += 1;
    }
    Ok(format!("100 cases: exact sums zero, largest floating |sum| {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1 exact cross-method polynomial agreement", ac1),
        ("AC2 vertex-sum/residue/series consistency", ac2),
        ("AC3 monomial formula spot values", ac3),
        ("AC4 cubature degree exactness", ac4),
        ("AC5 Gauss-Jacobi two-point rule", ac5),
        ("AC6 univariate relaxation", ac6),
        ("AC7 q-homogeneous identity", ac7),
        ("AC8 even-power bounds", ac8),
        ("AC9 exponential-family asymptotics", ac9),
        ("AC10 exponential closed form vs cubature", ac10),
        ("AC11 log-sum-exp experiment", ac11),
        ("AC12 zero-sum Lagrange identity", ac12),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.1} s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.1} s]: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
