//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p corank --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use corank::arith::{euler_criterion, is_prime, is_squarefree, kronecker, validate_reciprocity};
use corank::experiments::{
    convergence_report, decomposition_check, hoeffding_tail, pell_space_crosscheck, transition_audit_exact,
    ConvergenceReport, MixtureFamily, ModePolicy, Target, DEFAULT_BUDGET,
};
use corank::f2linalg::{F2Matrix, F2Vector, TransitionClass};
use corank::markov::{drift_certificate, drift_ratio, qcl_entry, stationarity_residual, Dyadic, DEFAULT_PRECISION};
use corank::rules::RuleId;

const SEED: u64 = 2024;
const SAMPLES: u64 = 100_000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Runs a criterion, folding the runtime limit into the verdict.
fn run(id: u8, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took <= l);
    let pass = out.pass && in_time;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let timing = match limit {
        Some(l) if !in_time => format!("{:.1}s, over the {:.0}s limit", took.as_secs_f64(), l.as_secs_f64()),
        _ => format!("{:.1}s", took.as_secs_f64()),
    };
    println!("criterion {id:>2} {verdict} [{name}] ({timing}) {}", out.detail);
    pass
}

fn stationarity() -> Outcome {
    let s = stationarity_residual(64, DEFAULT_PRECISION);
    Outcome::new(s.residual <= 1e-12, format!("residual = {:.3e}", s.residual))
}

fn drift() -> Outcome {
    let closed = (1..=64u64).all(|x| drift_ratio(x) == &Dyadic::pow2(-1) + &Dyadic::pow2(-(x as i64)));
    let cert = drift_certificate(3, 64);
    let sup_ok = cert.lambda == Dyadic::new(5, 3) && cert.contracting;
    Outcome::new(
        closed && sup_ok,
        format!("closed form {closed}, sup over x >= 3 = {}", cert.lambda.to_f64()),
    )
}

fn all_vectors(n: usize) -> impl Iterator<Item = F2Vector> {
    (0u64..1 << n).map(move |x| F2Vector::from_u64(n, x))
}

fn qcl_row(s: usize) -> [Dyadic; 3] {
    let s = s as u64;
    [
        if s == 0 { Dyadic::zero() } else { qcl_entry(s, s - 1) },
        qcl_entry(s, s),
        qcl_entry(s, s + 1),
    ]
}

fn transition_law() -> Outcome {
    let (mut mismatches, mut full_bad, mut iff_bad) = (0u64, 0u64, 0u64);
    let mut both = [0u64; 2];
    for n in 0..=3 {
        for code in 0u64..1 << (n * n) {
            let a = F2Matrix::from_code(n, code);
            let s = a.corank();
            let mut full = [0u128; 3];
            let mut sym = [0u128; 3];
            for v in all_vectors(n) {
                for w in all_vectors(n) {
                    for c in [false, true] {
                        let after = a.extend(&v, &w, c).unwrap().corank();
                        let delta = after as i64 - s as i64;
                        if TransitionClass::from_delta(delta) != Some(a.classify_transition(&v, &w, c)) {
                            mismatches += 1;
                        }
                        full[(delta + 1) as usize] += 1;
                        if v == w {
                            sym[(delta + 1) as usize] += 1;
                        }
                    }
                }
            }
            if full.map(|k| Dyadic::ratio(k, 2 * n as u64 + 1)) != qcl_row(s) {
                full_bad += 1;
            }
            let markov = sym.map(|k| Dyadic::ratio(k, n as u64 + 1)) == qcl_row(s);
            let trivial = a.kernel_intersection_trivial();
            if markov != trivial {
                iff_bad += 1;
            }
            both[trivial as usize] += 1;
        }
    }
    Outcome::new(
        mismatches == 0 && full_bad == 0 && iff_bad == 0 && both[0] > 0 && both[1] > 0,
        format!(
            "classification mismatches {mismatches}, full-space rows off {full_bad}, iff violations {iff_bad} \
             (trivial {}, nontrivial {})",
            both[1], both[0]
        ),
    )
}

fn detector() -> Outcome {
    let rep = match transition_audit_exact(RuleId::Alt, 6, DEFAULT_BUDGET) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let ok = (0..=5).all(|i| {
        rep.records
            .iter()
            .find(|rec| rec.i == i)
            .is_some_and(|rec| rec.p_exceptional_exact == Some(Dyadic::pow2(-(i as i64))))
    });
    Outcome::new(ok, "P(Z_i = 1) = 2^-i for i <= 5")
}

fn decomposition() -> Outcome {
    let mut rules = vec![RuleId::Alt];
    rules.extend((0..=5).map(|kappa| RuleId::Redei { kappa }));
    let mut bad = Vec::new();
    for rule in rules {
        match decomposition_check(rule, 5, DEFAULT_BUDGET) {
            Ok(rep) if rep.max_residual.is_zero() => {}
            Ok(rep) => bad.push(format!("{rule}: {}", rep.max_residual)),
            Err(e) => bad.push(format!("{rule}: {e}")),
        }
    }
    let detail = if bad.is_empty() { "all residuals exactly 0".to_string() } else { bad.join("; ") };
    Outcome::new(bad.is_empty(), detail)
}

fn exact_trend() -> Outcome {
    let targets = [Target::Rule(RuleId::Mat), Target::Mixture(MixtureFamily::Redei)];
    let rs: Vec<usize> = (1..=6).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for t in targets {
        match convergence_report(t, &rs, ModePolicy::Exact, 0, 0, DEFAULT_BUDGET) {
            Ok(rep) => {
                let d: Vec<f64> = rep.rows.iter().map(|r| r.distance).collect();
                let dec = d.windows(2).all(|w| w[1] < w[0]);
                ok &= dec;
                let shown: Vec<String> = d.iter().map(|x| format!("{x:.4}")).collect();
                parts.push(format!("{t}: [{}]", shown.join(", ")));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{t}: {e}"));
            }
        }
    }
    Outcome::new(ok, parts.join("; "))
}

fn mc_protocol(target: Target, rs: &[usize], check_last: bool) -> (bool, String) {
    let rep: ConvergenceReport = match convergence_report(target, rs, ModePolicy::Mc, SAMPLES, SEED, DEFAULT_BUDGET) {
        Ok(r) => r,
        Err(e) => return (false, format!("{target}: {e}")),
    };
    let dec = rep.decreasing_until_floor();
    let rho = rep.rho_hat();
    let rho_ok = rho.is_some_and(|r| r < 0.95);
    let last = rep.rows.last().map_or(f64::NAN, |r| r.distance);
    let last_ok = !check_last || last <= 0.03;
    let dists: Vec<String> = rep
        .rows
        .iter()
        .map(|r| format!("{}:{:.4}{}", r.r, r.distance, if r.below_floor { "*" } else { "" }))
        .collect();
    let rho_text = rho.map_or_else(
        || format!("no fit ({} pre-floor points)", rep.pre_floor().len()),
        |r| format!("{r:.3}"),
    );
    (
        dec && rho_ok && last_ok,
        format!(
            "{target}: decreasing until floor {dec}, rho_hat {rho_text}, distances [{}]",
            dists.join(" ")
        ),
    )
}

fn mc_redei() -> Outcome {
    let (ok, text) = mc_protocol(Target::Mixture(MixtureFamily::Redei), &[10, 25, 50, 100, 200], true);
    Outcome::new(ok, format!("{text} (* = at noise floor)"))
}

fn mc_pell() -> Outcome {
    let mut fams = vec![MixtureFamily::Pell1, MixtureFamily::Pell2];
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        fams.push(MixtureFamily::Pell3 { a, b });
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for f in fams {
        let (pass, text) = mc_protocol(Target::Mixture(f), &[10, 25, 50, 100], false);
        ok &= pass;
        parts.push(text);
    }
    let mut failed = Vec::new();
    for j in [1u8, 2] {
        for s in 0..=3 {
            for kappa in 0..=s {
                match pell_space_crosscheck(j, s, kappa, false, false, DEFAULT_BUDGET) {
                    Ok(c) if c.matches => {}
                    Ok(_) => failed.push(format!("j={j} s={s} k={kappa}")),
                    Err(e) => failed.push(format!("j={j} s={s} k={kappa}: {e}")),
                }
            }
        }
    }
    ok &= failed.is_empty();
    parts.push(if failed.is_empty() {
        "crosscheck: all match".to_string()
    } else {
        format!("crosscheck mismatches: {}", failed.join(", "))
    });
    Outcome::new(ok, parts.join("; "))
}

fn hoeffding() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for r in [10, 50, 100, 200] {
        for eps in [0.1, 0.25, 0.4] {
            match hoeffding_tail(r, eps) {
                Ok(t) => {
                    ok &= t.holds;
                    worst = worst.max(t.exact_f64 / t.bound);
                }
                Err(_) => ok = false,
            }
        }
    }
    Outcome::new(ok, format!("largest tail/bound ratio {worst:.3e}"))
}

fn arithmetic() -> Outcome {
    let bad_d: Vec<i64> = (-10_000i64..=10_000)
        .filter(|&d| d != 0 && d != 1 && is_squarefree(d))
        .filter(|&d| !validate_reciprocity(d).unwrap_or(false))
        .collect();
    let mut symbol_bad = 0u64;
    for p in (3..2000u64).filter(|&p| is_prime(p)) {
        for a in 1..p as i64 {
            if kronecker(a, p as i64) != euler_criterion(a, p) {
                symbol_bad += 1;
            }
        }
    }
    Outcome::new(
        bad_d.is_empty() && symbol_bad == 0,
        format!("reciprocity failures {}, symbol mismatches {symbol_bad}", bad_d.len()),
    )
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "stationarity", Some(secs(1)), stationarity),
        run(2, "drift", Some(secs(1)), drift),
        run(3, "transition law", Some(secs(60)), transition_law),
        run(4, "detector exactness", None, detector),
        run(5, "decomposition identity", None, decomposition),
        run(6, "exact convergence trend", Some(secs(300)), exact_trend),
        run(7, "Monte Carlo convergence", Some(secs(600)), mc_redei),
        run(8, "Pell families", None, mc_pell),
        run(9, "Hoeffding step", None, hoeffding),
        run(10, "arithmetic integration", Some(secs(60)), arithmetic),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
