//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs without the libtest harness so the lines are always printed.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repzeta::exactalg::{series_of_ratfn_at, MultiPoly, RationalFn, Var};
use repzeta::gzeta::{
    abscissa_from_factorization, central_product, global_abscissa, global_dirichlet_coeffs, global_euler, local_additive,
    local_multiplicative, local_product_form, topo_of_factorization, QChoice, SplittingData,
};
use repzeta::lattice::{make_g_mn, LieLattice};
use repzeta::limits::Limits;
use repzeta::poincare::{alpha, brute_poincare, smoothness_probe, thm_tech_eval, ProbeStatus};
use repzeta::qcomb::{brute_rank_count, rank_count_at, verify_sv_identity, verify_sv_identity_random, verify_translation_lemma, OrderedSubset, SvMode};
use repzeta::snf::IntMatrix;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scalar(n: i64) -> repzeta::exactalg::Scalar {
    repzeta::exactalg::Scalar::from_integer(n.into())
}

fn c1_triple_equality() -> Outcome {
    for n in 1..=4 {
        for m in 1..=n {
            let add = local_additive(m, n, QChoice::Symbolic).map_err(|e| e.to_string())?;
            let mul = local_multiplicative(m, n, QChoice::Symbolic).map_err(|e| e.to_string())?;
            let prod = local_product_form(m, n).to_ratfn().map_err(|e| e.to_string())?;
            ensure(add == mul && mul == prod, || format!("forms differ at (m, n) = ({m}, {n})"))?;
        }
    }
    Ok(())
}

fn c2_brute_oracle() -> Outcome {
    let lim = Limits::default();
    for (m, n, p, k) in [(1, 1, 2, 6), (1, 1, 3, 4), (1, 2, 2, 4), (1, 2, 3, 3), (2, 2, 2, 3), (1, 3, 2, 3)] {
        let closed = local_additive(m, n, QChoice::Symbolic).map_err(|e| e.to_string())?;
        let series = series_of_ratfn_at(&closed, p, k as usize).map_err(|e| e.to_string())?;
        let g = make_g_mn(m, n).map_err(|e| e.to_string())?;
        let brute = brute_poincare(&g, p, k, &lim).map_err(|e| e.to_string())?;
        ensure(series.coeffs() == brute.coeffs(), || {
            format!("(m, n, p, K) = ({m}, {n}, {p}, {k}): closed {:?} vs brute {:?}", series.coeffs(), brute.coeffs())
        })?;
    }
    Ok(())
}

fn c3_tech_pipeline() -> Outcome {
    let lim = Limits::default();
    for n in 1..=3 {
        for m in 1..=n {
            let g = make_g_mn(m, n).map_err(|e| e.to_string())?;
            for p in [2u64, 3] {
                let tech = thm_tech_eval(&g, p, &lim).map_err(|e| e.to_string())?;
                let closed = local_multiplicative(m, n, QChoice::Prime(p)).map_err(|e| e.to_string())?;
                ensure(tech.zeta == closed, || format!("(m, n, p) = ({m}, {n}, {p}): {} vs {closed}", tech.zeta))?;
            }
        }
    }
    Ok(())
}

/// Euler's totient from the prime factorization, by trial division.
fn totient(mut i: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= i {
        if i.is_multiple_of(p) {
            let mut pk = 1;
            while i.is_multiple_of(p) {
                i /= p;
                pk *= p;
            }
            out *= pk / p * (p - 1);
        }
        p += 1;
    }
    if i > 1 {
        out *= i - 1;
    }
    out
}

fn c4_heisenberg_totient() -> Outcome {
    let a = global_dirichlet_coeffs(1, 1, 200).map_err(|e| e.to_string())?;
    for i in 1..=200u64 {
        ensure(a[i as usize] == BigInt::from(totient(i)), || format!("a_{i} = {} but phi({i}) = {}", a[i as usize], totient(i)))?;
    }
    Ok(())
}

fn c5_topological() -> Outcome {
    let s = MultiPoly::var(Var::S);
    for n in 1..=4i64 {
        for m in 1..=n {
            let mut expect = RationalFn::int(1);
            for i in 0..m {
                let num = &s - &MultiPoly::int(i);
                let den = &s - &MultiPoly::int(n + i);
                expect = &expect * &RationalFn::new(num, den).unwrap();
            }
            let got = topo_of_factorization(&local_product_form(m as usize, n as usize)).map_err(|e| e.to_string())?;
            ensure(got == expect, || format!("(m, n) = ({m}, {n}): {got} vs {expect}"))?;
        }
    }
    Ok(())
}

fn c6_abscissa_triangle() -> Outcome {
    let lim = Limits::default();
    for n in 1..=3 {
        for m in 1..=n {
            let expect = scalar((n + m - 1) as i64);
            let from_form = abscissa_from_factorization(&local_product_form(m, n)).map_err(|e| e.to_string())?;
            ensure(from_form == expect, || format!("({m}, {n}): factorization gives {from_form}"))?;
            let g = make_g_mn(m, n).map_err(|e| e.to_string())?;
            for p in [2u64, 3, 5] {
                let a = alpha(&g, p, &lim).map_err(|e| e.to_string())?;
                ensure(a.alpha == expect, || format!("({m}, {n}, p = {p}): alpha = {}", a.alpha))?;
            }
        }
    }
    Ok(())
}

fn c7_central_products() -> Outcome {
    for (m, n, k) in [(1usize, 4usize, 3u32), (2, 3, 2), (1, 1, 5)] {
        let f = central_product(&local_product_form(m, n), k).map_err(|e| e.to_string())?;
        let got = global_abscissa(&f).map_err(|e| e.to_string())?;
        let expect = repzeta::exactalg::Scalar::new(((m + n) as i64).into(), (k as i64).into());
        ensure(got == expect, || format!("({m}, {n}, k = {k}): {got} vs {expect}"))?;
    }
    Ok(())
}

fn c8_q_combinatorics() -> Outcome {
    let lim = Limits::default();
    for j in 1..=3u32 {
        for i in 1..=j {
            for r in 0..=i {
                for p in [2u64, 3] {
                    let formula = rank_count_at(i, j, r, p).map_err(|e| e.to_string())?;
                    let brute = brute_rank_count(i, j, r, p, &lim).map_err(|e| e.to_string())?;
                    ensure(formula == BigInt::from(brute), || format!("rank_count({i}, {j}, {r}) at {p}: {formula} vs {brute}"))?;
                }
            }
        }
    }
    for j in 1..=3 {
        ensure(verify_sv_identity(j, &SvMode::Symbolic).map_err(|e| e.to_string())?, || format!("symbolic identity fails at j = {j}"))?;
    }
    for j in 1..=5 {
        let trials = verify_sv_identity_random(j, 50, 20_251_014 + j as u64).map_err(|e| e.to_string())?;
        ensure(trials.len() == 50 && trials.iter().all(|t| t.holds), || format!("random specialisation fails at j = {j}"))?;
    }
    for a in 0..=3 {
        for j in 1..=4 {
            for subset in OrderedSubset::all(j) {
                ensure(verify_translation_lemma(a, j, &subset).map_err(|e| e.to_string())?, || {
                    format!("translation fails at a = {a}, j = {j}, I = {subset}")
                })?;
            }
        }
    }
    Ok(())
}

fn c9_functional_equation() -> Outcome {
    for n in 1..=4usize {
        for m in 1..=n {
            let f = local_multiplicative(m, n, QChoice::Symbolic).map_err(|e| e.to_string())?;
            let flipped = f.invert_var(Var::Q).invert_var(Var::T);
            let expect = &RationalFn::var_pow(Var::Q, (m * n) as i64) * &f;
            ensure(flipped == expect, || format!("({m}, {n}): {flipped} vs {expect}"))?;
        }
    }
    Ok(())
}

/// Random unimodular `k x k` matrix: a product of signed permutations and
/// elementary operations.
fn random_unimodular(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..6 {
        let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
        match rng.gen_range(0..3) {
            0 if a != b => {
                let c = rng.gen_range(-2..=2);
                for col in 0..k {
                    m[a][col] += c * m[b][col];
                }
            }
            1 => m.swap(a, b),
            _ => {
                for x in m[a].iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    m
}

fn c10_invariance() -> Outcome {
    let lim = Limits::default();
    let g = make_g_mn(1, 2).map_err(|e| e.to_string())?;
    let base = brute_poincare(&g, 2, 3, &lim).map_err(|e| e.to_string())?;
    let (d, dp) = (g.d(), g.d_prime());
    let top = d - dp;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..10 {
        let a = random_unimodular(&mut rng, top);
        let c = random_unimodular(&mut rng, dp);
        let mut rows = vec![vec![0i64; d]; d];
        for i in 0..top {
            rows[i][..top].copy_from_slice(&a[i]);
        }
        for i in 0..dp {
            for j in 0..top {
                rows[top + i][j] = rng.gen_range(-2..=2);
            }
            rows[top + i][top..].copy_from_slice(&c[i]);
        }
        let u = IntMatrix::from_rows(&rows);
        let h = g.base_change(&u).map_err(|e| format!("trial {trial}: {e}"))?;
        let s = brute_poincare(&h, 2, 3, &lim).map_err(|e| e.to_string())?;
        ensure(s == base, || format!("trial {trial}: {:?} vs {:?}", s.coeffs(), base.coeffs()))?;
    }
    Ok(())
}

fn c11_smoothness_probe() -> Outcome {
    let lim = Limits::default();
    for n in 1..=3 {
        for m in 1..=n {
            let g = make_g_mn(m, n).map_err(|e| e.to_string())?;
            for p in [2u64, 3] {
                let r = smoothness_probe(&g, p, &lim).map_err(|e| e.to_string())?;
                ensure(r.status == ProbeStatus::Pass, || format!("G_{m}x{n} at p = {p}: {r}"))?;
            }
        }
    }
    for p in [2u64, 3] {
        let rescaled = LieLattice::from_brackets("rescaled", 3, 1, &[(0, 1, vec![p as i64])]).map_err(|e| e.to_string())?;
        let first = smoothness_probe(&rescaled, p, &lim).map_err(|e| e.to_string())?;
        let again = smoothness_probe(&rescaled, p, &lim).map_err(|e| e.to_string())?;
        ensure(matches!(first.status, ProbeStatus::Inconclusive { .. }), || format!("rescaled at p = {p}: {first}"))?;
        ensure(first == again && first.to_string() == again.to_string(), || "report is not deterministic".into())?;
    }
    Ok(())
}

/// `zeta(k)` for `k >= 2` by partial sums, with the tail enclosed between
/// the integrals from `N + 1` and from `N`.
fn zeta_enclosed(k: i32, terms: u64) -> (f64, f64) {
    let partial: f64 = (1..=terms).rev().map(|i| (i as f64).powi(-k)).sum();
    let tail = |x: f64| x.powi(1 - k) / (k - 1) as f64;
    (partial + tail((terms + 1) as f64), partial + tail(terms as f64))
}

fn c12_euler_product() -> Outcome {
    let places = SplittingData::rational_primes_below(100_000);
    let v = global_euler(1, 1, &places, &scalar(3)).map_err(|e| e.to_string())?;
    let (z2_lo, z2_hi) = zeta_enclosed(2, 1_000_000);
    let (z3_lo, z3_hi) = zeta_enclosed(3, 1_000_000);
    let (lo, hi) = (z2_lo / z3_hi, z2_hi / z3_lo);
    let mid = (lo + hi) / 2.0;
    let err = (v.approx - mid).abs() + (hi - lo) / 2.0;
    ensure(err <= 1e-4, || format!("partial product {} vs zeta(2)/zeta(3) in [{lo}, {hi}]", v.approx))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "triple equality of the local forms", budget: secs(10), run: c1_triple_equality },
        Criterion { id: 2, name: "closed form against brute-force Poincare series", budget: secs(60), run: c2_brute_oracle },
        Criterion { id: 3, name: "kernel-class pipeline against closed form", budget: secs(120), run: c3_tech_pipeline },
        Criterion { id: 4, name: "Heisenberg global coefficients are the totient", budget: None, run: c4_heisenberg_totient },
        Criterion { id: 5, name: "topological zeta functions", budget: None, run: c5_topological },
        Criterion { id: 6, name: "abscissa triangle", budget: None, run: c6_abscissa_triangle },
        Criterion { id: 7, name: "central-product global abscissae", budget: None, run: c7_central_products },
        Criterion { id: 8, name: "q-combinatorics identities", budget: secs(30), run: c8_q_combinatorics },
        Criterion { id: 9, name: "functional equation", budget: None, run: c9_functional_equation },
        Criterion { id: 10, name: "invariance under adapted base change", budget: None, run: c10_invariance },
        Criterion { id: 11, name: "smoothness probe reports", budget: None, run: c11_smoothness_probe },
        Criterion { id: 12, name: "numeric Euler product", budget: secs(10), run: c12_euler_product },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(()), Some(b)) if took > b => Err(format!("took {:.1}s, budget {}s", took.as_secs_f64(), b.as_secs())),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {} ({:.2}s)", c.id, c.name, took.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {} ({:.2}s): {msg}", c.id, c.name, took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
