use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};

use dioset::construct::{
    equivalent_transform, search_isolation_params, silver_family, SearchGrid,
};
use dioset::diocore::{
    brute_force_member, is_member, DiophParams, MembershipVerdict, OracleOutcome, ParamClass, Point,
    Settings,
};
use dioset::exactnum::{parse_exponent, parse_quad, rational, Exponent, PrecisionPolicy};
use dioset::gapscan::{
    build_cover, certify_isolated, emptiness_certificate, find_touching_points, measure_bounds,
    CertifyFailure,
};
use dioset::par::Exec;
use dioset::{report, Error};

use crate::config::Config;
use crate::output::{emit, render, write_atomic};
use crate::{Cli, Command, ExecMode, Format, ParamArgs};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::HypothesisViolation(_)) => 2,
            CliError::Lib(Error::Parse { .. }) | CliError::Lib(Error::InvalidInput(_)) => 3,
            CliError::Lib(Error::UnsupportedField(_)) => 3,
            CliError::Usage(_) => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Res<T> = Result<T, CliError>;

struct Ctx<'a> {
    config: &'a Config,
    settings: Settings,
    format: Format,
    output: Option<std::path::PathBuf>,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn parse_u64(s: &str, what: &str) -> Res<u64> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("{what}: expected a positive integer, got `{s}`")))
}

fn settings(cli: &Cli, config: &Config) -> Res<Settings> {
    let mut s = Settings::default();
    let exec = match cli.exec {
        Some(ExecMode::Sequential) => Some(Exec::Sequential),
        Some(ExecMode::Parallel) => Some(Exec::Parallel),
        None => match config.get("exec") {
            Some("sequential") => Some(Exec::Sequential),
            Some("parallel") => Some(Exec::Parallel),
            Some(other) => return Err(usage(format!("exec: expected sequential or parallel, got `{other}`"))),
            None => None,
        },
    };
    if let Some(e) = exec {
        s.exec = e;
    }
    let bits = |flag: Option<u32>, key: &str, default: u32| -> Res<u32> {
        match flag {
            Some(b) => Ok(b),
            None => config
                .get(key)
                .map(|v| v.parse().map_err(|_| usage(format!("{key}: bad value `{v}`"))))
                .unwrap_or(Ok(default)),
        }
    };
    let start = bits(cli.start_precision, "start_precision", s.policy.start)?;
    let max = bits(cli.max_precision, "max_precision", s.policy.max)?;
    if start < 16 || max < start {
        return Err(usage(format!("precision: need 16 <= start ({start}) <= max ({max})")));
    }
    s.policy = PrecisionPolicy { start, max };
    Ok(s)
}

pub fn run(cli: &Cli, config: &Config) -> Res<u8> {
    let format = match cli.format {
        Some(f) => f,
        None => match config.get("format") {
            None | Some("json") => Format::Json,
            Some("human") => Format::Human,
            Some(other) => return Err(usage(format!("format: expected json or human, got `{other}`"))),
        },
    };
    let ctx = Ctx {
        config,
        settings: settings(cli, config)?,
        format,
        output: cli
            .output
            .clone()
            .or_else(|| config.get("output").map(Into::into)),
    };
    let (value, code) = match &cli.command {
        Command::Member { xi, params, oracle } => member(&ctx, xi, params, oracle.as_deref())?,
        Command::Cover { params, q, csv } => cover(&ctx, params, q.as_deref(), csv.as_deref())?,
        Command::Certify {
            xi,
            params,
            left,
            right,
        } => certify(&ctx, xi, params, left, right)?,
        Command::Silver { n, range } => silver(&ctx, *n, range.as_deref())?,
        Command::Transform {
            alpha,
            params,
            search,
            search_q,
        } => transform(&ctx, alpha, params, *search, *search_q)?,
    };
    emit(&render(&value, ctx.format), ctx.output.as_deref())?;
    Ok(code)
}

fn params(ctx: &Ctx, p: &ParamArgs) -> Res<DiophParams> {
    let g = ctx
        .config
        .pick(p.gamma.as_deref(), "gamma")
        .ok_or_else(|| usage("missing --gamma"))?;
    let t = ctx
        .config
        .pick(p.tau.as_deref(), "tau")
        .ok_or_else(|| usage("missing --tau"))?;
    Ok(DiophParams::new(parse_quad(&g)?, parse_exponent(&t)?)?)
}

fn params_json(p: &DiophParams) -> Value {
    json!({
        "gamma": report::quad(p.gamma()),
        "tau": p.tau().to_string(),
        "tau_display": p.tau().enclose(96).to_decimal(20),
        "class": p.class().name(),
    })
}

fn member(ctx: &Ctx, xi: &str, p: &ParamArgs, oracle: Option<&str>) -> Res<(Value, u8)> {
    let x = parse_quad(xi)?;
    let params = params(ctx, p)?;
    let verdict = is_member(&x, &params, &ctx.settings)?;
    let mut out = json!({
        "command": "member",
        "xi": report::quad(&x),
        "params": params_json(&params),
        "verdict": verdict.to_json(),
    });
    let mut code = 0;
    let oracle = ctx.config.pick(oracle, "oracle");
    if let Some(q) = oracle {
        let q = parse_u64(&q, "--oracle")?;
        let outcome = brute_force_member(&Point::Exact(x), &params, q, &ctx.settings)?;
        let agreement = match (&verdict, &outcome) {
            (MembershipVerdict::Member(_), OracleOutcome::Consistent { .. }) => "agree",
            (MembershipVerdict::Member(_), OracleOutcome::Excluded { .. }) => "disagree",
            (MembershipVerdict::NotMember(_), OracleOutcome::Excluded { .. }) => "agree",
            _ => "inconclusive",
        };
        if agreement == "disagree" {
            code = 1;
        }
        out["oracle"] = json!({ "q_max": q, "outcome": outcome.to_json(), "agreement": agreement });
    }
    Ok((out, code))
}

fn cover(ctx: &Ctx, p: &ParamArgs, q: Option<&str>, csv: Option<&Path>) -> Res<(Value, u8)> {
    let params = params(ctx, p)?;
    let q = ctx
        .config
        .pick(q, "q")
        .ok_or_else(|| usage("missing --q"))?;
    let q = parse_u64(&q, "--q")?;
    let cover = build_cover(&params, q, &ctx.settings)?;
    if let Some(path) = csv {
        let mut buf = Vec::new();
        cover.write_csv(&mut buf)?;
        write_atomic(path, &buf)?;
    }
    let m = measure_bounds(&cover);
    let len = cover.covered_length();
    let touching: Vec<Value> = find_touching_points(&cover)
        .iter()
        .map(|t| {
            let certified = certify_isolated(
                &t.point,
                &params,
                (t.left.p.into(), t.left.q.into()),
                (t.right.p.into(), t.right.q.into()),
                &ctx.settings,
            );
            json!({
                "point": report::quad(&t.point),
                "left": t.left.to_string(),
                "right": t.right.to_string(),
                "in_unit_interval": t.in_unit_interval(),
                "isolation": match certified {
                    Ok(_) => json!({ "status": "certified" }),
                    Err(f) => f.to_json(),
                },
            })
        })
        .collect();
    let in_unit = find_touching_points(&cover)
        .iter()
        .filter(|t| t.in_unit_interval())
        .count();
    let unconfirmed: Vec<Value> = cover
        .unconfirmed()
        .iter()
        .map(|n| {
            json!({
                "left": n.left.to_string(),
                "right": n.right.to_string(),
                "gap": format!("[{}, {}]", n.gap.lo(), n.gap.hi()),
            })
        })
        .collect();
    let out = json!({
        "command": "cover",
        "params": params_json(&params),
        "q_max": q,
        "band": [report::quad(&cover.band().0), report::quad(&cover.band().1)],
        "atoms": cover.atom_count(),
        "interval_count": cover.intervals().len(),
        "covered_length": {
            "lower": report::rational(&len.lower),
            "upper": report::rational(&len.upper),
            "exact": len.exact.as_ref().map(report::quad),
        },
        "measure": m.to_json(),
        "empty_set": params.class() == ParamClass::Empty,
        "emptiness_certificate": emptiness_certificate(&params).map(|c| c.to_json()),
        "touching_points": touching,
        "touching_in_unit_interval": in_unit,
        "unconfirmed_candidates": unconfirmed,
    });
    Ok((out, 0))
}

fn parse_frac(s: &str, what: &str) -> Res<(BigInt, BigInt)> {
    let r = rational::parse(s).map_err(|_| usage(format!("{what}: expected p/q, got `{s}`")))?;
    Ok((r.numer().clone(), r.denom().clone()))
}

fn certify(ctx: &Ctx, xi: &str, p: &ParamArgs, left: &str, right: &str) -> Res<(Value, u8)> {
    let x = parse_quad(xi)?;
    let params = params(ctx, p)?;
    let (l, r) = (parse_frac(left, "--left")?, parse_frac(right, "--right")?);
    let (result, code) = match certify_isolated(&x, &params, l, r, &ctx.settings) {
        Ok(c) => (json!({ "status": "certified", "certificate": c.to_json() }), 0),
        Err(f @ CertifyFailure::Rejected { .. }) => (f.to_json(), 0),
        Err(f) => (f.to_json(), 1),
    };
    Ok((
        json!({ "command": "certify", "xi": report::quad(&x), "params": params_json(&params), "result": result }),
        code,
    ))
}

fn parse_range(s: &str) -> Res<(i64, i64)> {
    let bad = || usage(format!("--range: expected a..b, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn silver(ctx: &Ctx, n: Option<i64>, range: Option<&str>) -> Res<(Value, u8)> {
    let (a, b) = match (n, range) {
        (Some(n), None) => (n, n),
        (None, Some(r)) => parse_range(r)?,
        _ => return Err(usage("give n or --range a..b")),
    };
    let mut instances = Vec::new();
    let mut ok = 0;
    for n in a..=b {
        if n < 2 {
            return Err(Error::HypothesisViolation(format!("the family needs n >= 2, got n = {n}")).into());
        }
        let inst = silver_family(n as u64, &ctx.settings)?;
        // the checker re-derives the certificate from the bare data
        let c = &inst.certificate;
        let recheck = certify_isolated(&c.xi, &c.params, c.left.clone(), c.right.clone(), &ctx.settings);
        let mut v = inst.to_json();
        v["independent_check"] = match &recheck {
            Ok(_) => json!("certified"),
            Err(f) => f.to_json(),
        };
        if recheck.is_ok() {
            ok += 1;
        }
        instances.push(v);
    }
    let total = instances.len();
    let out = json!({
        "command": "silver",
        "instances": instances,
        "certified": ok,
        "total": total,
        "status": if ok == total { "ok" } else { "failed" },
    });
    Ok((out, if ok == total { 0 } else { 1 }))
}

fn transform(ctx: &Ctx, alpha: &str, p: &ParamArgs, search: bool, search_q: u64) -> Res<(Value, u8)> {
    let a = parse_quad(alpha)?;
    let params = params(ctx, p)?;
    let mut inst = equivalent_transform(&a, params.gamma(), params.tau(), &ctx.settings)?;
    let mut out_search = Value::Null;
    if search {
        let tau_min: &Exponent = params.tau();
        let mut grid = SearchGrid::default_for(tau_min)?;
        grid.q_max = search_q;
        let hit = search_isolation_params(&inst.alpha_prime, tau_min, &grid, &ctx.settings)?;
        out_search = json!({
            "grid": {
                "gammas": grid.gammas.len(),
                "taus": grid.taus.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "q_max": grid.q_max,
            },
            "found": hit.is_some(),
            "note": "exploratory: no hit says nothing about parameters outside the grid",
        });
        inst.search = hit;
    }
    let mut v = inst.to_json();
    v["command"] = json!("transform");
    v["search_run"] = out_search;
    Ok((v, 0))
}
