//! Subcommand implementations. Each writes its report to `out` and returns
//! the process exit status.

use std::io::Write;

use chernoff_core::oracle::MAX_EXACT_TRIALS;
use chernoff_core::{
    check_conservative, evaluate, simulate_tail_frequency, BoundQuery, DeltaResult, Method, Mode,
    MonteCarlo, Side, Tail, TrialModel,
};

use crate::format::{sig_figs, Format, OutputTable};
use crate::gamma::Gamma;
use crate::{CliError, Exit};

/// Header of every CSV deviation record.
pub const CSV_COLUMNS: [&str; 8] = [
    "gamma", "mu", "method", "side", "delta", "endpoint", "residual", "status",
];

/// One solved side of a query, or the reason it could not be solved.
#[derive(Debug, Clone, Copy)]
struct SideRecord {
    side: Side,
    result: Result<DeltaResult, Failure>,
    mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Failure {
    Infeasible,
}

impl SideRecord {
    fn endpoint(&self) -> Option<f64> {
        let d = self.result.ok()?.value();
        Some(match self.side {
            Side::Upper => (1.0 + d) * self.mean,
            _ => (1.0 - d) * self.mean,
        })
    }

    fn status(&self) -> &'static str {
        match self.result {
            Err(Failure::Infeasible) => "infeasible",
            Ok(r) if !r.in_domain => "extrapolated",
            Ok(_) => "ok",
        }
    }
}

fn solve(
    gamma: &Gamma,
    mean: f64,
    mode: Mode,
    method: Method,
    side: Side,
) -> Result<SideRecord, CliError> {
    let query = BoundQuery::with_log_gamma(gamma.log_gamma, mean, mode, method, side)?;
    let result = match evaluate(&query) {
        Ok(r) => Ok(match side {
            Side::Lower => r.delta_l,
            _ => r.delta_u,
        }
        .expect("one-sided query carries its delta")),
        Err(e) if e.is_infeasible() => Err(Failure::Infeasible),
        Err(e) => return Err(e.into()),
    };
    Ok(SideRecord { side, result, mean })
}

fn check_methods(mode: Mode, methods: &[Method]) -> Result<(), CliError> {
    if mode == Mode::Regression && methods.contains(&Method::Classic) {
        return Err(CliError::Usage(
            "--method: classic has no regression-mode form".into(),
        ));
    }
    Ok(())
}

fn csv_row(gamma: &Gamma, rec: &SideRecord, method: Method, digits: usize) -> Vec<String> {
    let fmt = |x: Option<f64>| x.map_or_else(String::new, |v| sig_figs(v, digits));
    vec![
        gamma.label.clone(),
        format!("{}", rec.mean),
        method.name().to_string(),
        rec.side.name().to_string(),
        fmt(rec.result.ok().map(|r| r.value())),
        fmt(rec.endpoint()),
        fmt(rec.result.ok().map(|r| r.residual)),
        rec.status().to_string(),
    ]
}

/// `table tail` and `table ci`: one row per γ, δ_U and δ_L per method.
pub fn table(
    gammas: &[Gamma],
    mean: f64,
    mode: Mode,
    methods: &[Method],
    format: Format,
    digits: usize,
    out: &mut impl Write,
) -> Result<Exit, CliError> {
    check_methods(mode, methods)?;
    let mut records = Vec::new();
    for gamma in gammas {
        let mut row = Vec::new();
        for &method in methods {
            for side in [Side::Upper, Side::Lower] {
                row.push((method, solve(gamma, mean, mode, method, side)?));
            }
        }
        records.push((gamma, row));
    }
    let infeasible = records
        .iter()
        .flat_map(|(_, row)| row.iter())
        .any(|(_, r)| r.result.is_err());

    let table = if format == Format::Csv {
        let mut t = OutputTable::new("", CSV_COLUMNS.iter().map(|s| s.to_string()).collect());
        for (gamma, row) in &records {
            for (method, rec) in row {
                t.push(csv_row(gamma, rec, *method, digits));
            }
        }
        t
    } else {
        let (symbol, what) = match mode {
            Mode::Prediction => ("μ", "tail thresholds (1+δ_U)μ and (1−δ_L)μ"),
            Mode::Regression => ("μ̂", "confidence bounds (1+δ_U)μ̂ and (1−δ_L)μ̂"),
        };
        let caption = format!(
            "Deviation factors for {what}, {symbol} = {mean}, {digits} significant figures"
        );
        let mut columns = vec!["gamma".to_string()];
        for m in methods {
            columns.push(format!("{m} δ_U"));
            columns.push(format!("{m} δ_L"));
        }
        let mut t = OutputTable::new(caption, columns);
        for (gamma, row) in &records {
            let mut cells = vec![gamma.label.clone()];
            for (_, rec) in row {
                cells.push(match rec.result {
                    Ok(r) => sig_figs(r.value(), digits),
                    Err(Failure::Infeasible) => "infeasible".into(),
                });
            }
            t.push(cells);
        }
        t
    };
    table.render(format, out)?;
    Ok(if infeasible {
        Exit::Infeasible
    } else {
        Exit::Ok
    })
}

/// `invert`: a single query, every side it involves.
#[allow(clippy::too_many_arguments)]
pub fn invert(
    gamma: &Gamma,
    mean: f64,
    mode: Mode,
    method: Method,
    side: Side,
    format: Format,
    digits: usize,
    out: &mut impl Write,
) -> Result<Exit, CliError> {
    check_methods(mode, &[method])?;
    let records = match side {
        Side::Upper | Side::Lower => vec![solve(gamma, mean, mode, method, side)?],
        Side::TwoSidedAsymmetric => vec![
            solve(gamma, mean, mode, method, Side::Upper)?,
            solve(gamma, mean, mode, method, Side::Lower)?,
        ],
        Side::TwoSidedSymmetric => {
            // The lower endpoint reuses δ_U.
            let up = solve(gamma, mean, mode, method, Side::Upper)?;
            vec![
                up,
                SideRecord {
                    side: Side::Lower,
                    ..up
                },
            ]
        }
    };
    let infeasible = records.iter().any(|r| r.result.is_err());
    let fmt = |x: f64| sig_figs(x, digits);

    if format == Format::Csv {
        let mut t = OutputTable::new("", CSV_COLUMNS.iter().map(|s| s.to_string()).collect());
        for rec in &records {
            t.push(csv_row(gamma, rec, method, digits));
        }
        t.render(format, out)?;
    } else {
        let confidence = if side.is_two_sided() {
            1.0 - 2.0 * gamma.value()
        } else {
            1.0 - gamma.value()
        };
        let mut fields: Vec<(String, String)> = vec![
            ("mode".into(), mode.name().into()),
            ("method".into(), method.name().into()),
            ("side".into(), side.name().into()),
            ("gamma".into(), gamma.label.clone()),
            ("log gamma".into(), fmt(gamma.log_gamma)),
            (
                match mode {
                    Mode::Prediction => "mu".into(),
                    Mode::Regression => "mu-hat".into(),
                },
                format!("{mean}"),
            ),
            ("beta".into(), fmt(gamma.log_gamma / mean)),
        ];
        if mode == Mode::Regression {
            fields.push(("confidence".into(), fmt(confidence)));
        }
        for rec in &records {
            let tag = match rec.side {
                Side::Upper => "upper",
                _ => "lower",
            };
            let delta_name = match (rec.side, side) {
                (Side::Upper, _) | (_, Side::TwoSidedSymmetric) => "delta_u",
                _ => "delta_l",
            };
            match rec.result {
                Ok(r) => {
                    let endpoint = rec.endpoint().expect("solved side has an endpoint");
                    fields.push((format!("{tag} {delta_name}"), fmt(r.value())));
                    fields.push((format!("{tag} endpoint"), fmt(endpoint)));
                    if mode == Mode::Prediction {
                        // Counts: the tail event and the last count outside it.
                        if rec.side == Side::Upper {
                            fields
                                .push((format!("{tag} tail from"), format!("{}", endpoint.ceil())));
                            fields.push((
                                format!("{tag} max count"),
                                format!("{}", endpoint.ceil() - 1.0),
                            ));
                        } else {
                            fields
                                .push((format!("{tag} tail to"), format!("{}", endpoint.floor())));
                            fields.push((
                                format!("{tag} min count"),
                                format!("{}", endpoint.floor() + 1.0),
                            ));
                        }
                    }
                    fields.push((format!("{tag} residual"), fmt(r.residual)));
                }
                Err(Failure::Infeasible) => {}
            }
            fields.push((format!("{tag} status"), rec.status().into()));
        }
        if format == Format::Md {
            let mut t = OutputTable::new(
                format!("Inversion for {mode} mode"),
                vec!["field".into(), "value".into()],
            );
            for (k, v) in fields {
                t.push(vec![k, v]);
            }
            t.render(format, out)?;
        } else {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &fields {
                writeln!(out, "{k:<width$}  {v}")?;
            }
        }
    }
    Ok(if infeasible {
        Exit::Infeasible
    } else {
        Exit::Ok
    })
}

/// Settings of the `verify` command.
#[derive(Debug, Clone)]
pub struct VerifyPlan {
    pub gammas: Vec<Gamma>,
    pub n: u64,
    pub p: f64,
    pub methods: Vec<Method>,
    pub tails: Vec<Tail>,
    pub reps: u64,
    pub seed: u64,
}

/// `verify`: exact binomial tail at each emitted threshold, optionally
/// cross-checked by simulation.
pub fn verify(
    plan: &VerifyPlan,
    format: Format,
    digits: usize,
    out: &mut impl Write,
) -> Result<Exit, CliError> {
    if plan.n > MAX_EXACT_TRIALS {
        return Err(CliError::Usage(format!(
            "--n: exact verification is limited to {MAX_EXACT_TRIALS} trials"
        )));
    }
    let model =
        TrialModel::identical(plan.n, plan.p).map_err(|e| CliError::Usage(format!("--p: {e}")))?;
    let mut columns: Vec<String> = [
        "gamma",
        "method",
        "tail",
        "delta",
        "event",
        "requested",
        "achieved",
        "status",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if plan.reps > 0 {
        columns.push("simulated".into());
        columns.push("std error".into());
    }
    let caption = format!(
        "Achieved tail probability at each emitted threshold, n = {}, p = {}, μ = {}",
        plan.n,
        plan.p,
        model.mean()
    );
    let mut t = OutputTable::new(caption, columns);
    let mut failed = false;
    let mut infeasible = false;
    for gamma in &plan.gammas {
        let g = gamma.value();
        for &method in &plan.methods {
            for &tail in &plan.tails {
                let mc = MonteCarlo {
                    reps: plan.reps,
                    seed: plan.seed,
                };
                let report = match check_conservative(g, &model, method, tail, mc) {
                    Ok(r) => r,
                    Err(e) if e.is_infeasible() => {
                        infeasible = true;
                        let mut row = vec![
                            gamma.label.clone(),
                            method.name().into(),
                            tail.name().into(),
                            String::new(),
                            String::new(),
                            sig_figs(g, digits),
                            String::new(),
                            "infeasible".into(),
                        ];
                        if plan.reps > 0 {
                            row.extend([String::new(), String::new()]);
                        }
                        t.push(row);
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let pass = report.passes();
                failed |= !pass;
                let mut row = vec![
                    gamma.label.clone(),
                    method.name().into(),
                    tail.name().into(),
                    sig_figs(report.delta, digits),
                    match tail {
                        Tail::Upper => format!("≥ {}", report.threshold),
                        Tail::Lower => format!("≤ {}", report.threshold),
                    },
                    sig_figs(g, digits),
                    sig_figs(report.achieved_probability, digits),
                    if pass {
                        "conservative"
                    } else {
                        "NOT conservative"
                    }
                    .into(),
                ];
                if plan.reps > 0 {
                    let sim = simulate_tail_frequency(
                        &model,
                        report.threshold,
                        tail,
                        plan.reps,
                        plan.seed,
                    )?;
                    row.push(sig_figs(sim.frequency, digits));
                    row.push(sig_figs(sim.std_error, digits));
                }
                t.push(row);
            }
        }
    }
    t.render(format, out)?;
    Ok(if failed {
        Exit::Verification
    } else if infeasible {
        Exit::Infeasible
    } else {
        Exit::Ok
    })
}
