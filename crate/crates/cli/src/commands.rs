use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use subsearch_core::density::max_density_subset;
use subsearch_core::game::{
    best_response_searcher, curvature_approx_strategies, equalization, expected_cost_vector, game_value_spd,
    in_scaled_base_polyhedron, matrix_game_solve, modular_game_solution, GameSolution, MatrixMethod,
};
use subsearch_core::gen::{generate, generate_schedule, Family};
use subsearch_core::io::{canonical_json, DagFile, InstanceFile, Mode};
use subsearch_core::sched::{noprec_ratio, schedule};
use subsearch_core::setfn::MAX_VERIFY;
use subsearch_core::sidney::{solve, SolveMethod};
use subsearch_core::spd::{spd_decompose, SpdOutcome};
use subsearch_core::{Error, GroundSet, Rational, Scalar, SearchInstance, SearchOrder};

use crate::{Cli, Command, GameArg, SolveArg};

/// Exit codes.
const OK: u8 = 0;
const GENERIC: u8 = 1;
const INVALID: u8 = 2;
const CAPACITY: u8 = 3;
const NOT_DECOMPOSABLE: u8 = 4;

pub struct Output {
    pub value: Value,
    pub code: u8,
}

impl Output {
    pub fn render(&self, compact: bool) -> String {
        if compact {
            canonical_json(&self.value)
        } else {
            serde_json::to_string_pretty(&self.value).expect("serializable")
        }
    }
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => CAPACITY,
        Some(Error::NotDecomposable) => NOT_DECOMPOSABLE,
        Some(_) => INVALID,
        None => GENERIC,
    }
}

fn digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

struct Body {
    result: Value,
    certification: Value,
    code: u8,
}

impl Body {
    fn ok(result: Value, certification: Value) -> Self {
        Body {
            result,
            certification,
            code: OK,
        }
    }
}

fn report(command: Value, digest: String, body: Body, started: Instant) -> Output {
    Output {
        value: json!({
            "command": command,
            "digest": digest,
            "result": body.result,
            "certification": body.certification,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        }),
        code: body.code,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let started = Instant::now();
    let (name, file) = match &cli.command {
        Command::Gen { family, n, seed_arg, k } => return gen(family, *n, seed_arg.or(cli.seed).unwrap_or(0), *k),
        Command::Sched { file, method } => return sched(cli, file, *method, started),
        Command::Validate { file } => ("validate", file),
        Command::Solve { file, .. } => ("solve", file),
        Command::Decompose { file } => ("decompose", file),
        Command::Density { file } => ("density", file),
        Command::Game { file, .. } => ("game", file),
    };
    let instance = InstanceFile::from_json(&read(file)?)?;
    let mode = cli.mode.unwrap_or(instance.mode);
    let mut command = json!({"name": name, "file": file.display().to_string(), "mode": mode});
    match &cli.command {
        Command::Solve { method, .. } => command["method"] = json!(solve_method(*method)),
        Command::Game { method, .. } => {
            command["method"] = json!(format!("{method:?}").to_lowercase());
            if matches!(method, GameArg::Oracle) {
                command["iters"] = json!(cli.iters);
                command["tol"] = json!(cli.tol);
            }
        }
        _ => {}
    }
    let body = match mode {
        Mode::Rational => dispatch::<Rational>(cli, &instance)?,
        Mode::Float => dispatch::<f64>(cli, &instance)?,
    };
    Ok(report(command, digest(&instance.canonical()), body, started))
}

fn solve_method(m: SolveArg) -> SolveMethod {
    match m {
        SolveArg::Sidney => SolveMethod::Sidney,
        SolveArg::Spd => SolveMethod::Spd,
        SolveArg::Brute => SolveMethod::Brute,
    }
}

fn labels(ground: &GroundSet, order: &SearchOrder) -> Vec<String> {
    order.as_slice().iter().map(|&i| ground.label(i).to_string()).collect()
}

fn dispatch<T: Scalar>(cli: &Cli, file: &InstanceFile) -> Result<Body> {
    let inst = file.build::<T>()?;
    if let Command::Validate { .. } = cli.command {
        let report = inst.validation_report()?;
        return Ok(Body {
            code: if report.passed() { OK } else { INVALID },
            certification: json!({"passed": report.passed()}),
            result: serde_json::to_value(&report)?,
        });
    }
    let needs_validation = !matches!(cli.command, Command::Game { .. } | Command::Decompose { .. });
    if needs_validation && !cli.no_validate {
        inst.validate()?;
    }
    match &cli.command {
        Command::Solve { method, .. } => {
            let r = solve(&inst, solve_method(*method))?;
            Ok(Body::ok(
                json!({"order": labels(&inst.ground, &r.order), "cost": r.cost.to_json()}),
                json!({
                    "lower_bound": r.lower_bound.to_json(),
                    "ratio_bound": r.ratio_bound.to_json(),
                    "validated": !cli.no_validate,
                }),
            ))
        }
        Command::Decompose { .. } => Ok(Body::ok(
            match spd_decompose(&inst)? {
                SpdOutcome::Decomposed(tree) => json!({"decomposable": true, "tree": tree.to_json(&inst.ground)}),
                SpdOutcome::NotDecomposable { stuck } => json!({
                    "decomposable": false,
                    "stuck": inst.ground.names(stuck),
                }),
            },
            Value::Null,
        )),
        Command::Density { .. } => {
            let d = max_density_subset(&inst)?;
            Ok(Body::ok(
                json!({"set": inst.ground.names(d.set), "rho": d.rho.to_json()}),
                json!({"maximal": d.maximal}),
            ))
        }
        Command::Game { method, .. } => game(cli, &inst, *method),
        Command::Validate { .. } | Command::Sched { .. } | Command::Gen { .. } => unreachable!("handled by run"),
    }
}

fn game<T: Scalar>(cli: &Cli, inst: &SearchInstance<T>, method: GameArg) -> Result<Body> {
    let f = &inst.f;
    let ground = &inst.ground;
    let x_json = |x: &[T]| -> Value {
        Value::Object(
            x.iter()
                .enumerate()
                .map(|(i, v)| (ground.label(i).to_string(), v.to_json()))
                .collect(),
        )
    };
    let exact = |sol: GameSolution<T>| -> Result<Body> {
        let costs = expected_cost_vector(f, &sol.searcher)?;
        let upper = costs.iter().cloned().fold(T::zero(), |m, c| if c > m { c } else { m });
        let lower = best_response_searcher(f, &sol.hider)?.1;
        let total = f.total();
        let eq = equalization(f, &sol)?;
        let polyhedron = if f.n() <= MAX_VERIFY {
            let check = in_scaled_base_polyhedron(f, &sol.hider)?;
            json!({"holds": check.holds, "witness": check.witness.map(|w| ground.names(w))})
        } else {
            Value::Null
        };
        Ok(Body::ok(
            json!({
                "value": sol.value.to_json(),
                "phi": sol.phi.to_json(),
                "hider": x_json(&sol.hider.x),
                "searcher": sol.searcher.to_json(ground),
            }),
            json!({
                "searcher_max_cost": upper.to_json(),
                "hider_min_cost": lower.to_json(),
                "equalized": eq.on_support,
                "equalized_everywhere": eq.everywhere,
                "below_value": eq.off_value.iter().map(|&s| ground.label(s).to_string()).collect::<Vec<_>>(),
                "value_band": (total.clone() * T::half()).approx_le(&sol.value) && sol.value.approx_le(&total),
                "base_polyhedron": polyhedron,
            }),
        ))
    };
    match method {
        GameArg::Spd => exact(game_value_spd(f)?),
        GameArg::Modular => exact(modular_game_solution(f)?),
        GameArg::Approx => {
            let a = curvature_approx_strategies(f)?;
            let costs = expected_cost_vector(f, &a.searcher)?;
            let upper = costs.iter().cloned().fold(T::zero(), |m, c| if c > m { c } else { m });
            let lower = best_response_searcher(f, &a.hider)?.1;
            Ok(Body::ok(
                json!({
                    "kappa": a.kappa.to_json(),
                    "factor": a.factor.to_json(),
                    "hider": x_json(&a.hider.x),
                    "searcher": a.searcher.to_json(ground),
                }),
                json!({
                    "value_lower": lower.to_json(),
                    "value_upper": upper.to_json(),
                }),
            ))
        }
        GameArg::Oracle | GameArg::Lp => {
            let m = if method == GameArg::Lp {
                MatrixMethod::ExactLp
            } else {
                MatrixMethod::FictitiousPlay {
                    iters: cli.iters,
                    tol: cli.tol,
                }
            };
            let r = matrix_game_solve(f, m)?;
            Ok(Body::ok(
                json!({
                    "value": r.value.to_json(),
                    "hider": x_json(&r.hider.x),
                    "searcher": r.searcher.iter().map(|(o, p)| json!([labels(ground, o), p.to_json()])).collect::<Vec<_>>(),
                }),
                json!({
                    "lower": r.lower.to_json(),
                    "upper": r.upper.to_json(),
                    "converged": r.converged,
                    "iterations": r.iterations,
                }),
            ))
        }
    }
}

fn sched(cli: &Cli, path: &Path, method: SolveArg, started: Instant) -> Result<Output> {
    let file = DagFile::from_json(&read(path)?)?;
    let mode = cli.mode.unwrap_or(file.mode());
    let command = json!({
        "name": "sched",
        "file": path.display().to_string(),
        "mode": mode,
        "method": solve_method(method),
    });
    let body = match mode {
        Mode::Rational => sched_body::<Rational>(cli, &file, method)?,
        Mode::Float => sched_body::<f64>(cli, &file, method)?,
    };
    Ok(report(command, digest(&file.canonical()), body, started))
}

fn sched_body<T: Scalar>(cli: &Cli, file: &DagFile, method: SolveArg) -> Result<Body> {
    let (ground, inst) = file.build::<T>()?;
    if !cli.no_validate {
        inst.validate()?;
    }
    let r = schedule(&inst, solve_method(method))?;
    let anc = inst.dag.ancestors()?;
    let mut done = subsearch_core::Subset::EMPTY;
    let feasible = r.order.as_slice().iter().all(|&j| {
        let ok = anc[j].is_subset_of(done);
        done = done.with(j);
        ok
    });
    let noprec = if inst.dag.edges.is_empty() {
        let total: f64 = inst.p.iter().map(Scalar::to_f64).sum();
        Some(serde_json::to_value(noprec_ratio(&inst.h, total)?)?)
    } else {
        None
    };
    Ok(Body::ok(
        json!({"order": labels(&ground, &r.order), "cost": r.cost.to_json()}),
        json!({
            "lower_bound": r.lower_bound.to_json(),
            "ratio_bound": r.ratio_bound.to_json(),
            "precedence_feasible": feasible,
            "noprec_ratio": noprec,
        }),
    ))
}

fn gen(family: &str, n: usize, seed: u64, k: usize) -> Result<Output> {
    let value = if family == "schedule" {
        serde_json::to_value(generate_schedule(n, seed)?)?
    } else {
        let family: Family = family.parse()?;
        serde_json::to_value(generate(family, n, seed, k)?)?
    };
    Ok(Output { value, code: OK })
}
