use corank::arith::{classify_pell, redei_matrix_with, scan, SCAN_COLUMNS};
use corank::experiments::{
    convergence_report, decomposition_check, hoeffding_tail, mc_target, pell_space_crosscheck,
    transition_audit_exact, transition_audit_mc, ExactDistribution, Target,
};
use corank::markov::{
    drift_certificate, drift_ratio, eta_infinity, pi_cl_log2, pi_cl_tail, pi_cl_vector,
    stationarity_residual, stationarity_residual_exact, TruncatedKernel,
};
use corank::Result;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::output::{float, Output};
use crate::Command;

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Pi { .. } => "pi",
        Command::Qcl { .. } => "qcl",
        Command::Stationarity { .. } => "stationarity",
        Command::Drift { .. } => "drift",
        Command::Exact { .. } => "exact",
        Command::Mc { .. } => "mc",
        Command::Mixture { .. } => "mixture",
        Command::Audit { .. } => "audit",
        Command::Decomp { .. } => "decomp",
        Command::Converge { .. } => "converge",
        Command::Hoeffding { .. } => "hoeffding",
        Command::Pellcheck { .. } => "pellcheck",
        Command::Redei { .. } => "redei",
        Command::Scan { .. } => "scan",
    }
}

pub fn seed(c: &Command) -> Option<u64> {
    match *c {
        Command::Mc { seed, .. } | Command::Converge { seed, .. } => Some(seed),
        Command::Mixture { seed, samples: Some(_), .. } | Command::Audit { seed, samples: Some(_), .. } => Some(seed),
        _ => None,
    }
}

fn bit(x: u8) -> Result<bool> {
    match x {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(corank::Error::InvalidArgument(format!("expected 0 or 1, got {x}"))),
    }
}

pub fn run(cmd: &Command, budget: u64) -> Result<Output> {
    match *cmd {
        Command::Pi { max_j, precision } => Ok(pi(max_j, precision)),
        Command::Qcl { n } => Ok(qcl(n)),
        Command::Stationarity { n, precision } => Ok(stationarity(n, precision)),
        Command::Drift { xmax } => Ok(drift(xmax)),
        Command::Exact { rule, r } => Ok(exact(rule, &rule.exact(r, budget)?)),
        Command::Mc { rule, r, samples, seed } => mc(rule, r, samples, seed),
        Command::Mixture { family, r, samples, seed } => match samples {
            Some(s) => mc(Target::Mixture(family), r, s, seed),
            None => {
                let t = Target::Mixture(family);
                Ok(exact(t, &t.exact(r, budget)?))
            }
        },
        Command::Audit { rule, r, samples, seed } => {
            let rep = match samples {
                Some(s) => {
                    positive(s)?;
                    transition_audit_mc(rule, r, s, seed)
                }
                None => transition_audit_exact(rule, r, budget)?,
            };
            let mut out = Output::new(&rep, vec!["i", "p_exceptional", "max_deviation", "generic_samples"]);
            for rec in &rep.records {
                out.row(vec![
                    json!(rec.i),
                    float(rec.p_exceptional),
                    float(rec.max_deviation),
                    json!(rec.generic_samples),
                ]);
            }
            Ok(out)
        }
        Command::Decomp { rule, rmax } => {
            let rep = decomposition_check(rule, rmax, budget)?;
            let mut out = Output::new(
                json!({ "rule": rule, "r_max": rmax, "residuals": rep.residuals, "max_residual": rep.max_residual,
                        "exact_zero": rep.max_residual.is_zero() }),
                vec!["i", "residual"],
            );
            for (i, r) in rep.residuals.iter().enumerate() {
                out.row(vec![json!(i), json!(r)]);
            }
            out.invariant_failed = !rep.max_residual.is_zero();
            Ok(out)
        }
        Command::Converge { family, ref rs, mode, samples, seed } => {
            let rep = convergence_report(family, rs, mode, samples, seed, budget)?;
            let mut payload = crate::output::to_value(&rep);
            payload["decreasing_until_floor"] = json!(rep.decreasing_until_floor());
            let mut out = Output::new(
                payload,
                vec!["r", "distance", "mode", "samples", "seed", "stderr", "floor", "below_floor"],
            );
            for row in &rep.rows {
                out.row(vec![
                    json!(row.r),
                    float(row.distance),
                    json!(row.mode),
                    json!(row.samples),
                    json!(row.seed),
                    float(row.stderr),
                    float(row.floor),
                    json!(row.below_floor),
                ]);
            }
            Ok(out)
        }
        Command::Hoeffding { r, eps } => {
            let t = hoeffding_tail(r, eps)?;
            let mut out = Output::new(&t, vec!["r", "epsilon", "exact", "exact_f64", "bound", "holds"]);
            out.row(vec![
                json!(t.r),
                float(t.epsilon),
                json!(t.exact),
                float(t.exact_f64),
                float(t.bound),
                json!(t.holds),
            ]);
            out.invariant_failed = !t.holds;
            Ok(out)
        }
        Command::Pellcheck { j, s, kappa, a, b } => {
            let c = pell_space_crosscheck(j, s, kappa, bit(a)?, bit(b)?, budget)?;
            let mut out = Output::new(&c, vec!["corank", "raw", "shifted_rule"]);
            let len = c.shifted_rule.len().max(c.raw.as_ref().map_or(0, Vec::len));
            for k in 0..len {
                out.row(vec![
                    json!(k),
                    c.raw.as_ref().and_then(|m| m.get(k)).map_or(Value::Null, |d| json!(d)),
                    c.shifted_rule.get(k).map_or(Value::Null, |d| json!(d)),
                ]);
            }
            Ok(out)
        }
        Command::Redei { d, l } => {
            let (a, ctx) = redei_matrix_with(d, l)?;
            let rows: Vec<Vec<u8>> = (1..=a.n()).map(|i| (1..=a.n()).map(|j| a.get(i, j) as u8).collect()).collect();
            let pell = l.map(|l| classify_pell(d, l)).transpose()?;
            let reciprocity = corank::arith::validate_reciprocity(d)?;
            let mut out = Output::new(
                json!({
                    "d": d,
                    "context": ctx,
                    "matrix": rows,
                    "corank": a.corank(),
                    "reciprocity_ok": reciprocity,
                    "pell": pell.as_ref().map(|p| json!({
                        "label": p.kind, "s": p.s, "kappa": p.kappa,
                        "constraints_ok": p.constraints_ok, "first_row_flag": p.first_row_flag,
                    })),
                }),
                vec!["row_prime", "entries"],
            );
            for (p, r) in ctx.primes.iter().zip(&rows) {
                let bits: String = r.iter().map(|b| char::from(b'0' + b)).collect();
                out.row(vec![json!(p), json!(bits)]);
            }
            out.invariant_failed = !reciprocity;
            Ok(out)
        }
        Command::Scan { dmax } => {
            if dmax < 2 {
                return Err(corank::Error::InvalidArgument("dmax must be at least 2".into()));
            }
            let rows = scan(dmax);
            let failed = rows.iter().any(|r| !r.reciprocity_ok);
            let mut out = Output::new(json!({ "dmax": dmax, "count": rows.len(), "rows": rows }), SCAN_COLUMNS.to_vec());
            for r in &rows {
                out.row(vec![
                    json!(r.d),
                    json!(r.discriminant),
                    json!(r.t),
                    json!(r.kappa),
                    json!(r.corank),
                    json!(r.reciprocity_ok),
                    json!(r.pell_label),
                    json!(r.first_row_flag),
                ]);
            }
            out.invariant_failed = failed;
            Ok(out)
        }
    }
}

fn positive(samples: u64) -> Result<()> {
    if samples == 0 {
        Err(corank::Error::InvalidArgument("samples must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn pi(max_j: usize, precision: f64) -> Output {
    let v = pi_cl_vector(max_j, precision);
    let (eta, terms) = eta_infinity(precision);
    let entries: Vec<Value> = (0..=max_j)
        .map(|j| json!({ "j": j, "pi": float(v.get(j)), "log2": float(pi_cl_log2(j as u64, precision)) }))
        .collect();
    let mut out = Output::new(
        json!({
            "max_j": max_j,
            "precision": float(precision),
            "eta_infinity": float(eta),
            "eta_terms": terms,
            "pi": entries,
            "tail": float(pi_cl_tail(max_j, precision)),
        }),
        vec!["j", "pi", "log2"],
    );
    for j in 0..=max_j {
        out.row(vec![json!(j), float(v.get(j)), float(pi_cl_log2(j as u64, precision))]);
    }
    out
}

fn qcl(n: usize) -> Output {
    let k = TruncatedKernel::qcl(n);
    let rows: Vec<Vec<Value>> = (0..=n)
        .map(|i| (0..=n).map(|j| json!(k.get(i, j))).collect())
        .collect();
    let mut out = Output::new(
        json!({ "n": n, "rows": rows, "clipped_mass": k.clipped_mass() }),
        vec!["i", "j", "q"],
    );
    for i in 0..=n {
        for j in i.saturating_sub(1)..=(i + 1).min(n) {
            out.row(vec![json!(i), json!(j), json!(k.get(i, j))]);
        }
    }
    out
}

fn stationarity(n: usize, precision: f64) -> Output {
    let s = stationarity_residual(n, precision);
    let exact = stationarity_residual_exact(n, 200);
    let mut out = Output::new(
        json!({
            "n": n,
            "residual": float(s.residual),
            "bound": float(s.bound),
            "within_bound": s.residual <= s.bound,
            "exact_residual": exact.to_string(),
            "exact_zero": exact.is_zero(),
        }),
        vec!["n", "residual", "bound", "exact_residual"],
    );
    out.row(vec![json!(n), float(s.residual), float(s.bound), json!(exact.to_string())]);
    out.invariant_failed = s.residual > s.bound;
    out
}

fn drift(xmax: u64) -> Output {
    let cert = drift_certificate(0, xmax);
    let ratios: Vec<Value> = (0..=xmax)
        .map(|x| {
            let r = drift_ratio(x);
            json!({ "x": x, "ratio": r, "ratio_f64": float(r.to_f64()) })
        })
        .collect();
    let mut out = Output::new(json!({ "xmax": xmax, "ratios": ratios, "certificate": cert }), vec!["x", "ratio", "ratio_f64"]);
    for x in 0..=xmax {
        let r = drift_ratio(x);
        out.row(vec![json!(x), json!(r), float(r.to_f64())]);
    }
    out
}

fn exact(target: Target, e: &ExactDistribution) -> Output {
    let f: Vec<Value> = e.mass.iter().map(|m| float(m.to_f64())).collect();
    let mut out = Output::new(
        json!({
            "target": target,
            "r": e.r,
            "mass": e.mass,
            "mass_f64": f,
            "total": e.total(),
            "distance_to_pi": float(e.distance_to_pi()),
        }),
        vec!["corank", "mass", "mass_f64"],
    );
    for (j, m) in e.mass.iter().enumerate() {
        out.row(vec![json!(j), json!(m), float(m.to_f64())]);
    }
    out
}

fn mc(target: Target, r: usize, samples: u64, seed: u64) -> Result<Output> {
    positive(samples)?;
    let e = mc_target(target, r, samples, seed);
    let masses = e.masses();
    let mut out = Output::new(
        json!({
            "target": target,
            "r": r,
            "samples": samples,
            "seed": seed,
            "counts": e.counts,
            "mass": masses.masses().iter().map(|&p| float(p)).collect::<Vec<_>>(),
            "stderr": float(e.stderr()),
            "distance_to_pi": float(e.distance_to_pi()),
        }),
        vec!["corank", "count", "mass"],
    );
    for (j, &c) in e.counts.iter().enumerate() {
        out.row(vec![json!(j), json!(c), float(masses.get(j))]);
    }
    Ok(out)
}
