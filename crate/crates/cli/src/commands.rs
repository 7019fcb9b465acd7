use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use qcap_core::memory::{
    convex_combination_capacity_with_tol, interchange_report, minmax_diagnostic,
    periodic_capacity_upper, periodic_capacity_with_tol, MemorySpec,
};
use qcap_core::optimize::{optimal_pair_angles, oracle_capacity, DEFAULT_TOL};
use qcap_core::{BlochVector, CapacityResult, Channel, ChannelRegistry, OracleConfig, Sign};

use crate::output::{csv, emit, json as to_json, round12, sig12};
use crate::{
    BranchArgs, CapacityArgs, ChannelArgs, Command, ConvexArgs, EllipsoidArgs, Failure, Format,
    OracleArgs, SweepArgs, Vary,
};

/// Environment variable overriding [`DEFAULT_TOL`].
pub const TOL_ENV: &str = "QCAP_TOL";

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Capacity(args) => capacity(args),
        Command::Sweep(args) => sweep(args),
        Command::Ellipsoid(args) => ellipsoid(args),
        Command::Oracle(args) => oracle(args),
        Command::Periodic(args) => periodic(args),
        Command::Convex(args) => convex(args),
        Command::Interchange(args) => interchange(args),
    }
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(Failure::Usage(format!(
                "{TOL_ENV}={raw} is not a positive number"
            ))),
        },
    }
}

fn build_channel(args: &ChannelArgs) -> Result<Channel, Failure> {
    Ok(ChannelRegistry::builtin().build_named(&args.channel, |p| args.lookup(p))?)
}

fn parse_branches(specs: &[String]) -> Result<Vec<Channel>, Failure> {
    let reg = ChannelRegistry::builtin();
    specs
        .iter()
        .map(|s| reg.parse_spec(s).map_err(Failure::from))
        .collect()
}

fn params_json(channel: &Channel) -> Value {
    let map: Map<String, Value> = channel
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    Value::Object(map)
}

fn result_fields(r: &CapacityResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("a_star".into(), json!(r.a_star));
    m.insert("capacity_bits".into(), json!(r.capacity_bits));
    m.insert("residual".into(), json!(r.residual));
    m.insert("iterations".into(), json!(r.iterations));
    m.insert("method".into(), json!(r.method.as_str()));
    if let Some(c) = r.closed_form {
        m.insert("closed_form".into(), json!(c));
    }
    if let Some(n) = &r.note {
        m.insert("note".into(), json!(n));
    }
    m
}

fn branch_specs(branches: &[Channel]) -> Value {
    json!(branches.iter().map(|c| c.spec()).collect::<Vec<_>>())
}

fn capacity(args: CapacityArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    let mut record = Map::new();
    if let Some(specs) = &args.periodic {
        let branches = parse_branches(specs)?;
        let spec = MemorySpec::periodic(branches.clone())?;
        record.insert("channel".into(), json!("periodic"));
        record.insert("branches".into(), branch_specs(&branches));
        record.extend(result_fields(&periodic_capacity_with_tol(&spec, tol)?));
    } else if let Some(specs) = &args.convex {
        let branches = parse_branches(specs)?;
        let spec = MemorySpec::convex(branches.clone())?;
        record.insert("channel".into(), json!("convex"));
        record.insert("branches".into(), branch_specs(&branches));
        record.extend(result_fields(&convex_combination_capacity_with_tol(
            &spec, tol,
        )?));
    } else {
        let channel = build_channel(&args.channel)?;
        let r = channel.capacity(tol)?;
        record.insert("channel".into(), json!(channel.name()));
        record.insert("params".into(), params_json(&channel));
        record.extend(result_fields(&r));
        if channel.name() == "ad" {
            let angles = optimal_pair_angles(r.a_star);
            record.insert("pair_angle_hilbert_deg".into(), json!(angles.hilbert_deg));
            record.insert("pair_angle_bloch_deg".into(), json!(angles.bloch_deg));
        }
    }
    emit(args.output.out.as_deref(), &to_json(&Value::Object(record)))
}

fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

const SWEEP_HEADER: [&str; 4] = ["param", "a_star", "capacity_bits", "chi_at_half"];

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if args.from.partial_cmp(&args.to) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Usage(format!(
            "--from ({}) must be below --to ({})",
            args.from, args.to
        )));
    }
    let reg = ChannelRegistry::builtin();
    let family = reg
        .get(&args.channel.channel)
        .ok_or_else(|| Failure::Usage(format!("unknown channel `{}`", args.channel.channel)))?;
    let mut rows = Vec::with_capacity(args.steps);
    match args.vary {
        Vary::A => {
            if args.from < 0.0 || args.to > 1.0 {
                return Err(Failure::Usage(
                    "--vary a needs a range inside [0, 1]".into(),
                ));
            }
            let channel = build_channel(&args.channel)?;
            let half = channel.chi(0.5)?;
            for a in grid(args.from, args.to, args.steps) {
                rows.push([a, a, channel.chi(a)?, half]);
            }
        }
        vary => {
            let name = match vary {
                Vary::Gamma => "gamma",
                Vary::Lambda => "lambda",
                Vary::P => "p",
                Vary::A => unreachable!(),
            };
            if !family.params.contains(&name) {
                return Err(Failure::Usage(format!(
                    "channel `{}` has no parameter `{name}`",
                    family.name
                )));
            }
            for value in grid(args.from, args.to, args.steps) {
                let channel = reg.build_named(family.name, |p| {
                    if p == name {
                        Some(value)
                    } else {
                        args.channel.lookup(p)
                    }
                })?;
                let r = channel.capacity(tol)?;
                rows.push([value, r.a_star, r.capacity_bits, channel.chi(0.5)?]);
            }
        }
    }
    let content = match args.format {
        Format::Csv => {
            let text: Vec<[String; 4]> = rows.iter().map(|r| r.map(sig12)).collect();
            csv(SWEEP_HEADER, &text)
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let map: Map<String, Value> = SWEEP_HEADER
                        .iter()
                        .zip(r)
                        .map(|(k, v)| (k.to_string(), json!(round12(*v))))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            to_json(&Value::Array(records))
        }
    };
    emit(args.output.out.as_deref(), &content)
}

/// Evenly spread points on the unit sphere.
fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

const ELLIPSOID_HEADER: [&str; 7] = ["x", "y", "z", "x_out", "y_out", "z_out", "is_optimal"];

fn ellipsoid(args: EllipsoidArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let channel = build_channel(&args.channel)?;
    let a = channel.capacity(tol)?.a_star;
    let mut inputs: Vec<([f64; 3], bool)> = fibonacci_sphere(args.n)
        .into_iter()
        .map(|v| (v, false))
        .collect();
    let transverse = 2.0 * (a * (1.0 - a)).sqrt();
    for sign in [Sign::Plus, Sign::Minus] {
        inputs.push(([sign.value() * transverse, 0.0, 2.0 * a - 1.0], true));
    }
    let mut rows = Vec::with_capacity(inputs.len());
    for ([x, y, z], optimal) in inputs {
        let out = channel.bloch_image(&BlochVector::new(x, y, z)?)?;
        rows.push(([x, y, z, out.x, out.y, out.z], optimal));
    }
    let content = match args.format {
        Format::Csv => {
            let text: Vec<[String; 7]> = rows
                .iter()
                .map(|(v, opt)| {
                    let [x, y, z, xo, yo, zo] = v.map(sig12);
                    [x, y, z, xo, yo, zo, u8::from(*opt).to_string()]
                })
                .collect();
            csv(ELLIPSOID_HEADER, &text)
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|(v, opt)| {
                    let mut map: Map<String, Value> = ELLIPSOID_HEADER
                        .iter()
                        .zip(v)
                        .map(|(k, x)| (k.to_string(), json!(round12(*x))))
                        .collect();
                    map.insert("is_optimal".into(), json!(opt));
                    Value::Object(map)
                })
                .collect();
            to_json(&Value::Array(records))
        }
    };
    emit(args.output.out.as_deref(), &content)
}

fn oracle(args: OracleArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    let channel = build_channel(&args.channel)?;
    let cfg = OracleConfig::new(args.states, args.restarts, args.seed);
    let r = oracle_capacity(channel.as_ref(), &cfg)?;
    let reference = if channel.has_chi_curve() {
        Some(channel.capacity(tol)?.capacity_bits)
    } else {
        None
    };
    let ensemble: Vec<Value> = r
        .ensemble
        .entries()
        .iter()
        .map(|(p, s)| {
            let v = s.density().to_bloch();
            json!({
                "p": p,
                "a": s.a(),
                "sign": if s.sign() == Sign::Plus { "+" } else { "-" },
                "phase": s.phase(),
                "bloch": [v.x, v.y, v.z],
            })
        })
        .collect();
    let record = json!({
        "channel": channel.name(),
        "params": params_json(&channel),
        "states": args.states,
        "restarts": args.restarts,
        "seed": args.seed,
        "chi_hat": r.chi_hat,
        "capacity_bits": reference,
        "gap": reference.map(|c| c - r.chi_hat),
        "best_restart": r.best_restart,
        "evaluations": r.evaluations,
        "ensemble": ensemble,
    });
    emit(args.output.out.as_deref(), &to_json(&record))
}

fn periodic(args: BranchArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    let branches = parse_branches(&args.branches)?;
    let spec = MemorySpec::periodic(branches.clone())?;
    let mut record = Map::new();
    record.insert("kind".into(), json!("periodic"));
    record.insert("branches".into(), branch_specs(&branches));
    let r = periodic_capacity_with_tol(&spec, tol)?;
    let upper = periodic_capacity_upper(&spec)?;
    record.extend(result_fields(&r));
    record.insert("c_upper".into(), json!(upper));
    record.insert("gap".into(), json!(upper - r.capacity_bits));
    emit(args.output.out.as_deref(), &to_json(&Value::Object(record)))
}

fn convex(args: ConvexArgs) -> Result<(), Failure> {
    let tol = tolerance()?;
    let branches = parse_branches(&args.branches.branches)?;
    let mut spec = MemorySpec::convex(branches.clone())?;
    if let Some(w) = args.weights {
        spec = spec.with_weights(w)?;
    }
    let mut record = Map::new();
    record.insert("kind".into(), json!("convex"));
    record.insert("branches".into(), branch_specs(&branches));
    record.insert("weights".into(), json!(spec.weights()));
    record.extend(result_fields(&convex_combination_capacity_with_tol(
        &spec, tol,
    )?));
    if branches.len() == 2 {
        let d = minmax_diagnostic(&spec)?;
        record.insert("sup_min".into(), json!(d.sup_min));
        record.insert("min_sup".into(), json!(d.min_sup));
        record.insert("crossings".into(), json!(d.crossings));
    }
    emit(
        args.branches.output.out.as_deref(),
        &to_json(&Value::Object(record)),
    )
}

fn interchange(args: BranchArgs) -> Result<(), Failure> {
    let branches = parse_branches(&args.branches)?;
    let report = interchange_report(&MemorySpec::periodic(branches.clone())?)?;
    let mut record = Map::new();
    record.insert("branches".into(), branch_specs(&branches));
    if let Value::Object(m) = serde_json::to_value(&report).expect("report serialises") {
        record.extend(m);
    }
    emit(args.output.out.as_deref(), &to_json(&Value::Object(record)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_both_ends() {
        let g = grid(0.0, 1.0, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fibonacci_points_are_unit() {
        for v in fibonacci_sphere(300) {
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
