//! Command-line front end for `bimoment`.
//!
//! Exit statuses: 0 success, 1 usage or input error, 2 property violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bimoment::bounds::{
    bonferroni_pair, chung_bound, comparison_bound, frechet_gumbel_type, frechet_lower,
    gumbel_upper, sweep, Axis, Comparison, SweepFamily,
};
use bimoment::oracle::{sample_specs, InstanceKind, Property, ValidationReport};
use bimoment::transforms::{pmf_from_moment_matrix, TailTable};
use bimoment::{bonferroni_sums, Bound, Direction, Error, Moments, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::{json, Value};

pub mod input;
pub mod render;

use input::{load, text_grid, Input, MomentDoc, PmfDoc, TailDoc};
use render::{approx, bound_line, decimal, grid, table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bimoment",
    version,
    about = "Bivariate binomial moments and tail bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the binomial moment matrix (Bonferroni sums for an event CSV).
    Moments {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        lmax: Option<usize>,
        /// Emit the moment file format instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Recover the pmf or the joint tails from a full moment matrix.
    Invert {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: InvertTarget,
    },
    /// Evaluate one bound on P(S >= u, T >= v).
    Bound {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: BoundParams,
        /// Clamp the value into [0, 1].
        #[arg(long)]
        clamp: bool,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate a bound family over its (k, l) grid and check its shape.
    Sweep {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        family: SweepArg,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        json: bool,
    },
    /// List every applicable bound next to the exact tail.
    Compare {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized exact validation suite.
    Validate {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// Comma-separated property ids, or `all`.
        #[arg(long, default_value = "all")]
        properties: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InvertTarget {
    Pmf,
    Tails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "bonferroni_lower")]
    BonferroniLower,
    #[value(name = "bonferroni_upper")]
    BonferroniUpper,
    Frechet,
    Gumbel,
    #[value(name = "frechet_type")]
    FrechetType,
    #[value(name = "gumbel_type")]
    GumbelType,
    Chung,
    #[value(name = "c1", alias = "galambos_xu")]
    C1,
    #[value(name = "c3", alias = "chen_seneta")]
    C3,
    #[value(name = "c6", alias = "madi_nagy_prekopa")]
    C6,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepArg {
    Frechet,
    Gumbel,
    Chung,
}

#[derive(Debug, Clone, clap::Args)]
struct BoundParams {
    #[arg(long)]
    u: usize,
    #[arg(long)]
    v: usize,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
}

type CmdResult = Result<i32, String>;

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };
    let mut buf = String::new();
    let result = execute(cli.command, &mut buf, err);
    if out.write_all(buf.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn core(e: Error) -> String {
    e.to_string()
}

fn execute(command: Command, out: &mut String, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Moments {
            input,
            kmax,
            lmax,
            json,
        } => moments_cmd(&load(&input)?, kmax, lmax, json, out, err),
        Command::Invert { input, to } => invert_cmd(&load(&input)?, to, out),
        Command::Bound {
            input,
            family,
            params,
            clamp,
            json,
        } => bound_cmd(&load(&input)?, family, &params, clamp, json, out),
        Command::Sweep {
            input,
            family,
            u,
            v,
            json,
        } => sweep_cmd(&load(&input)?, family, u, v, json, out),
        Command::Compare { input, u, v, json } => compare_cmd(&load(&input)?, u, v, json, out),
        Command::Validate {
            trials,
            seed,
            mmax,
            nmax,
            properties,
            json,
        } => validate_cmd(trials, seed, mmax, nmax, &properties, json, out),
    }
}

fn json_line(out: &mut String, value: &impl serde::Serialize) -> Result<(), String> {
    out.push_str(&serde_json::to_string(value).map_err(|e| e.to_string())?);
    out.push('\n');
    Ok(())
}

fn json_pretty(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("json value"));
    out.push('\n');
}

fn truncate(rows: Vec<Vec<Rational>>, kmax: usize, lmax: usize) -> Vec<Vec<Rational>> {
    rows.into_iter()
        .take(kmax + 1)
        .map(|r| r.into_iter().take(lmax + 1).collect())
        .collect()
}

fn moments_cmd(
    input: &Input,
    kmax: Option<usize>,
    lmax: Option<usize>,
    json: bool,
    out: &mut String,
    err: &mut dyn Write,
) -> CmdResult {
    let (m, n) = input.dims();
    let mm = input.moments();
    let kmax = kmax.unwrap_or(mm.kmax());
    let lmax = lmax.unwrap_or(mm.lmax());
    if kmax > mm.kmax() || lmax > mm.lmax() {
        return Err(format!(
            "requested orders up to ({kmax},{lmax}) but only ({},{}) are available",
            mm.kmax(),
            mm.lmax()
        ));
    }
    let moments = truncate(mm.rows(), kmax, lmax);
    let mut code = EXIT_OK;
    let shown = if let Input::Events(es) = input {
        let sums = bonferroni_sums(es, kmax, lmax).map_err(core)?.rows();
        let ok = sums == moments;
        if !ok {
            code = EXIT_VIOLATION;
            let _ = writeln!(
                err,
                "Gumbel identity violated: Bonferroni sums differ from binomial moments"
            );
        }
        if !json {
            out.push_str(&format!(
                "Bonferroni sums S[k][l] over {m} A-events and {n} B-events\n"
            ));
            out.push_str(&grid("k\\l", 0, 0, &sums));
            let verdict = if ok { "ok" } else { "FAILED" };
            out.push_str(&format!("Gumbel identity check: sums equal binomial moments of the counting law: {verdict}\n"));
        }
        sums
    } else {
        if !json {
            out.push_str(&format!(
                "binomial moments S[i][j] = E[binom(S,i) binom(T,j)], m={m}, n={n}\n"
            ));
            out.push_str(&grid("i\\j", 0, 0, &moments));
        }
        moments
    };
    if json {
        json_line(
            out,
            &MomentDoc {
                m,
                n,
                s: text_grid(&shown),
            },
        )?;
    }
    Ok(code)
}

fn full_moments(input: &Input) -> Result<Moments, String> {
    let mm = input.moments();
    if !mm.is_full() {
        return Err(format!(
            "inversion needs every moment up to ({},{}), input stops at ({},{})",
            mm.m(),
            mm.n(),
            mm.kmax(),
            mm.lmax()
        ));
    }
    Ok(mm)
}

fn invert_cmd(input: &Input, to: InvertTarget, out: &mut String) -> CmdResult {
    let mm = full_moments(input)?;
    let (m, n) = (mm.m(), mm.n());
    let invalid = |e: Error| format!("moments do not come from a distribution: {e}");
    match to {
        InvertTarget::Pmf => {
            let pmf = pmf_from_moment_matrix(&mm).map_err(invalid)?;
            json_line(
                out,
                &PmfDoc {
                    m,
                    n,
                    p: text_grid(&pmf.rows()),
                },
            )?;
        }
        InvertTarget::Tails => {
            let tails = TailTable::from_moments(&mm).map_err(invalid)?;
            json_line(
                out,
                &TailDoc {
                    m,
                    n,
                    q: text_grid(&tails.rows()),
                },
            )?;
        }
    }
    Ok(EXIT_OK)
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::BonferroniLower => "bonferroni_lower",
            FamilyArg::BonferroniUpper => "bonferroni_upper",
            FamilyArg::Frechet => "frechet",
            FamilyArg::Gumbel => "gumbel",
            FamilyArg::FrechetType => "frechet_type",
            FamilyArg::GumbelType => "gumbel_type",
            FamilyArg::Chung => "chung",
            FamilyArg::C1 => "c1",
            FamilyArg::C3 => "c3",
            FamilyArg::C6 => "c6",
        }
    }

    /// Optional flags the family reads.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            FamilyArg::BonferroniLower | FamilyArg::BonferroniUpper => &["k"],
            FamilyArg::Frechet | FamilyArg::Gumbel => &["k", "l"],
            FamilyArg::FrechetType | FamilyArg::GumbelType | FamilyArg::Chung => {
                &["s", "t", "k", "l"]
            }
            FamilyArg::C1 | FamilyArg::C6 => &[],
            FamilyArg::C3 => &["a", "b"],
        }
    }
}

fn required(value: Option<usize>, flag: &str, family: FamilyArg) -> Result<usize, String> {
    value.ok_or_else(|| format!("--{flag} is required for family {}", family.name()))
}

fn compute_bound(mm: &Moments, family: FamilyArg, p: &BoundParams) -> Result<Bound, String> {
    let given = [
        ("s", p.s),
        ("t", p.t),
        ("k", p.k),
        ("l", p.l),
        ("a", p.a),
        ("b", p.b),
    ];
    for (flag, value) in given {
        if value.is_some() && !family.accepts().contains(&flag) {
            return Err(format!(
                "--{flag} does not apply to family {}",
                family.name()
            ));
        }
    }
    let unit_target = || {
        if (p.u, p.v) == (1, 1) {
            Ok(())
        } else {
            Err(format!(
                "family {} bounds P(S >= 1, T >= 1) only, got --u {} --v {}",
                family.name(),
                p.u,
                p.v
            ))
        }
    };
    let target = |flag: &str, given: Option<usize>, default: usize| match given {
        Some(x) if x != default => Err(format!(
            "--{flag} {x} conflicts with the target: {family} bounds the tail at s=u, t=v",
            family = family.name()
        )),
        _ => Ok(default),
    };
    let bound = match family {
        FamilyArg::BonferroniLower | FamilyArg::BonferroniUpper => {
            let (lo, up) = bonferroni_pair(mm, p.u, p.v, p.k.unwrap_or(0)).map_err(core)?;
            if family == FamilyArg::BonferroniLower {
                lo
            } else {
                up
            }
        }
        FamilyArg::Frechet | FamilyArg::Gumbel => {
            unit_target()?;
            let (k, l) = (required(p.k, "k", family)?, required(p.l, "l", family)?);
            if family == FamilyArg::Frechet {
                frechet_lower(mm, k, l)
            } else {
                gumbel_upper(mm, k, l)
            }
            .map_err(core)?
        }
        FamilyArg::FrechetType | FamilyArg::GumbelType | FamilyArg::Chung => {
            let (s, t) = (target("s", p.s, p.u)?, target("t", p.t, p.v)?);
            let (k, l) = (required(p.k, "k", family)?, required(p.l, "l", family)?);
            match family {
                FamilyArg::Chung => chung_bound(mm, s, t, k, l).map_err(core)?,
                FamilyArg::FrechetType => frechet_gumbel_type(mm, s, t, k, l)
                    .map_err(core)?
                    .lower
                    .map_err(core)?,
                _ => frechet_gumbel_type(mm, s, t, k, l)
                    .map_err(core)?
                    .upper
                    .map_err(core)?,
            }
        }
        FamilyArg::C1 | FamilyArg::C3 | FamilyArg::C6 => {
            unit_target()?;
            let which = match family {
                FamilyArg::C1 => Comparison::C1GalambosXu,
                FamilyArg::C3 => Comparison::C3ChenSeneta,
                _ => Comparison::C6MadiNagyPrekopa,
            };
            comparison_bound(mm, which, p.a, p.b).map_err(core)?
        }
    };
    Ok(bound)
}

fn params_json(b: &Bound) -> Value {
    Value::Object(
        b.params
            .iter()
            .map(|&(k, v)| (k.to_string(), json!(v)))
            .collect(),
    )
}

fn bound_json(b: &Bound) -> Value {
    json!({
        "family": b.family.name(),
        "direction": b.direction.to_string(),
        "params": params_json(b),
        "value": b.value.to_string(),
        "decimal": decimal(&b.value, 4),
    })
}

fn bound_cmd(
    input: &Input,
    family: FamilyArg,
    p: &BoundParams,
    clamp: bool,
    json: bool,
    out: &mut String,
) -> CmdResult {
    let mm = input.moments();
    let raw = compute_bound(&mm, family, p)?;
    let mut shown = raw.clone();
    if clamp {
        let (zero, one) = (Rational::zero(), Rational::one());
        if shown.value < zero {
            shown.value = zero;
        } else if shown.value > one {
            shown.value = one;
        }
    }
    let clamped = shown.value != raw.value;
    if json {
        let mut doc = bound_json(&shown);
        doc["clamped"] = json!(clamped);
        doc["raw_value"] = json!(raw.value.to_string());
        json_pretty(out, &doc);
    } else if clamped {
        out.push_str(&format!(
            "{} (clamped from {})\n",
            bound_line(&shown),
            raw.value
        ));
    } else {
        out.push_str(&bound_line(&shown));
        out.push('\n');
    }
    Ok(EXIT_OK)
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::K => "k",
        Axis::L => "l",
    }
}

fn sweep_cmd(
    input: &Input,
    family: SweepArg,
    u: usize,
    v: usize,
    json: bool,
    out: &mut String,
) -> CmdResult {
    let mm = input.moments();
    let (family, name, shape) = match family {
        SweepArg::Frechet => (SweepFamily::Frechet, "frechet", "nondecreasing and concave"),
        SweepArg::Gumbel => (SweepFamily::Gumbel, "gumbel", "nonincreasing and convex"),
        SweepArg::Chung => (SweepFamily::Chung, "chung", "nonincreasing and convex"),
    };
    let g = sweep(&mm, family, u, v).map_err(core)?;
    let violations = g.violations();
    if json {
        let values: Vec<Value> = g
            .values
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter().enumerate().map(move |(c, x)| {
                    json!({"k": r + g.k_start, "l": c + g.l_start, "value": x.to_string(), "decimal": decimal(x, 4)})
                })
            })
            .collect();
        let bad: Vec<Value> = violations
            .iter()
            .map(|w| {
                json!({"check": w.check, "axis": axis_name(w.axis), "k": w.at.0, "l": w.at.1,
                       "lhs": w.lhs.to_string(), "rhs": w.rhs.to_string()})
            })
            .collect();
        json_pretty(
            out,
            &json!({"family": name, "u": u, "v": v, "m": mm.m(), "n": mm.n(), "values": values, "violations": bad}),
        );
    } else {
        out.push_str(&format!(
            "{name} bound on P(S >= {u}, T >= {v}), m={}, n={}\n",
            mm.m(),
            mm.n()
        ));
        out.push_str(&grid("k\\l", g.k_start, g.l_start, &g.values));
        if violations.is_empty() {
            out.push_str(&format!("shape: {shape} in k and l: ok\n"));
        }
        for w in &violations {
            out.push_str(&format!(
                "violation: {} in {} at (k,l)=({},{}): {} > {}\n",
                w.check,
                axis_name(w.axis),
                w.at.0,
                w.at.1,
                w.lhs,
                w.rhs
            ));
        }
    }
    Ok(if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

/// Every bound on `P(S >= u, T >= v)` that the moments support, plus notes on omitted ones.
fn applicable_bounds(
    mm: &Moments,
    u: usize,
    v: usize,
) -> Result<(Vec<Bound>, Vec<String>), String> {
    let (m, n) = (mm.m(), mm.n());
    let mut bounds = Vec::new();
    let mut notes = Vec::new();
    let full_depth = (m + n - u - v).div_ceil(2);
    for k in 0..=full_depth {
        let (lo, up) = bonferroni_pair(mm, u, v, k).map_err(core)?;
        bounds.push(lo);
        bounds.push(up);
    }
    let unit = (u, v) == (1, 1);
    if unit {
        for k in 1..=m {
            for l in 1..=n {
                bounds.push(frechet_lower(mm, k, l).map_err(core)?);
                bounds.push(gumbel_upper(mm, k, l).map_err(core)?);
            }
        }
        notes.push("frechet_type, gumbel_type: coincide with frechet, gumbel at s=t=1".to_string());
    } else {
        notes.push("frechet, gumbel, c1, c3, c6: bound P(S >= 1, T >= 1) only".to_string());
        for k in 1..=m {
            for l in 1..=n {
                let pair = frechet_gumbel_type(mm, u, v, k, l).map_err(core)?;
                for side in [pair.lower, pair.upper] {
                    match side {
                        Ok(b) => bounds.push(b),
                        Err(e @ Error::UndefinedBound(_)) => {
                            notes.push(format!("(k={k},l={l}): {e}"))
                        }
                        Err(e) => return Err(core(e)),
                    }
                }
            }
        }
    }
    for k in u..=m {
        for l in v..=n {
            bounds.push(chung_bound(mm, u, v, k, l).map_err(core)?);
        }
    }
    if unit {
        if m >= 2 && n >= 2 {
            for which in [
                Comparison::C1GalambosXu,
                Comparison::C3ChenSeneta,
                Comparison::C6MadiNagyPrekopa,
            ] {
                bounds.push(comparison_bound(mm, which, None, None).map_err(core)?);
            }
        } else {
            notes.push(format!(
                "c1, c3, c6: require m >= 2 and n >= 2 (m={m}, n={n})"
            ));
        }
    }
    bounds.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then(a.direction.cmp(&b.direction))
            .then(a.family.cmp(&b.family))
            .then(a.params.cmp(&b.params))
    });
    Ok((bounds, notes))
}

fn comparison_label(b: &Bound) -> String {
    match b.family {
        bimoment::BoundFamily::GalambosXu => format!("c1 {}", b.label()),
        bimoment::BoundFamily::ChenSeneta => format!("c3 {}", b.label()),
        bimoment::BoundFamily::MadiNagyPrekopa => format!("c6 {}", b.label()),
        _ => b.label(),
    }
}

fn compare_cmd(input: &Input, u: usize, v: usize, json: bool, out: &mut String) -> CmdResult {
    let mm = input.moments();
    let (m, n) = (mm.m(), mm.n());
    if !(1..=m).contains(&u) || !(1..=n).contains(&v) {
        return Err(format!(
            "target ({u},{v}) must satisfy 1 <= u <= m = {m} and 1 <= v <= n = {n}"
        ));
    }
    let exact = input.exact_tail(u, v).map_err(core)?;
    let (bounds, notes) = applicable_bounds(&mm, u, v)?;
    let best = |dir: Direction| {
        let vals = bounds
            .iter()
            .filter(|b| b.direction == dir)
            .map(|b| &b.value);
        match dir {
            Direction::Lower => vals.max().cloned(),
            Direction::Upper => vals.min().cloned(),
        }
    };
    let (best_lower, best_upper) = (best(Direction::Lower), best(Direction::Upper));
    let is_best = |b: &Bound| match b.direction {
        Direction::Lower => best_lower.as_ref() == Some(&b.value),
        Direction::Upper => best_upper.as_ref() == Some(&b.value),
    };
    if json {
        let rows: Vec<Value> = bounds
            .iter()
            .map(|b| {
                let mut doc = bound_json(b);
                doc["best"] = json!(is_best(b));
                doc
            })
            .collect();
        let opt = |x: &Option<Rational>| x.as_ref().map(ToString::to_string);
        json_pretty(
            out,
            &json!({
                "u": u, "v": v, "m": m, "n": n,
                "exact": exact.to_string(),
                "best_lower": opt(&best_lower),
                "best_upper": opt(&best_upper),
                "bounds": rows,
                "omitted": notes,
            }),
        );
        return Ok(EXIT_OK);
    }
    out.push_str(&format!("bounds on P(S >= {u}, T >= {v}), m={m}, n={n}\n"));
    out.push_str(&format!("exact: {} ({})\n\n", exact, approx(&exact)));
    let mut rows = vec![vec![
        String::new(),
        "direction".into(),
        "bound".into(),
        "value".into(),
        "decimal".into(),
    ]];
    for b in &bounds {
        let mark = if is_best(b) { "*" } else { "" };
        rows.push(vec![
            mark.into(),
            b.direction.to_string(),
            comparison_label(b),
            b.value.to_string(),
            approx(&b.value),
        ]);
    }
    out.push_str(&table(&rows));
    out.push('\n');
    for (dir, value) in [
        (Direction::Lower, &best_lower),
        (Direction::Upper, &best_upper),
    ] {
        if let Some(value) = value {
            let names: Vec<String> = bounds
                .iter()
                .filter(|b| b.direction == dir && &b.value == value)
                .map(comparison_label)
                .collect();
            out.push_str(&format!(
                "best {dir}: {value} ({}) from {}\n",
                approx(value),
                names.join(", ")
            ));
        }
    }
    for note in &notes {
        out.push_str(&format!("omitted: {note}\n"));
    }
    Ok(EXIT_OK)
}

fn report_json(report: &ValidationReport, properties: &[Property]) -> Value {
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            let params: serde_json::Map<String, Value> = f.params.iter().map(|&(k, v)| (k.to_string(), json!(v))).collect();
            json!({
                "spec": {"seed": f.spec.seed, "m": f.spec.m, "n": f.spec.n, "kind": f.spec.kind.name(), "atoms": f.spec.atoms},
                "property": f.property.id(),
                "check": f.check,
                "params": params,
                "relation": f.relation,
                "lhs": f.lhs.to_string(),
                "rhs": f.rhs.to_string(),
            })
        })
        .collect();
    json!({
        "trials": report.trials,
        "properties": properties.iter().map(|p| p.id()).collect::<Vec<_>>(),
        "failures": failures,
        "elapsed_ms": report.elapsed.as_millis() as u64,
    })
}

fn validate_cmd(
    trials: usize,
    seed: u64,
    mmax: usize,
    nmax: usize,
    properties: &str,
    json: bool,
    out: &mut String,
) -> CmdResult {
    if mmax == 0 || nmax == 0 {
        return Err(format!(
            "--mmax and --nmax must be at least 1, got {mmax} and {nmax}"
        ));
    }
    let properties = Property::parse_list(properties).map_err(core)?;
    let kinds = [
        InstanceKind::DensePmf,
        InstanceKind::SparsePmf,
        InstanceKind::EventSystem,
    ];
    let specs = sample_specs(seed, trials, mmax, nmax, &kinds);
    let report = bimoment::oracle::validate(&specs, &properties).map_err(core)?;
    if json {
        json_pretty(out, &report_json(&report, &properties));
    } else {
        out.push_str(&format!(
            "validated {} trials (seed {seed}, m <= {mmax}, n <= {nmax}) in {:.3}s\n",
            report.trials,
            report.elapsed.as_secs_f64()
        ));
        let ids: Vec<&str> = properties.iter().map(|p| p.id()).collect();
        out.push_str(&format!(
            "properties: {}\n",
            if ids.is_empty() {
                "none".to_string()
            } else {
                ids.join(", ")
            }
        ));
        out.push_str(&format!("failures: {}\n", report.failures.len()));
        const SHOWN: usize = 50;
        for f in report.failures.iter().take(SHOWN) {
            let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "  {} / {} on {} [{}]: {} {} {}\n",
                f.property,
                f.check,
                f.spec,
                params.join(","),
                f.lhs,
                f.relation,
                f.rhs
            ));
        }
        if report.failures.len() > SHOWN {
            out.push_str(&format!(
                "  ... and {} more\n",
                report.failures.len() - SHOWN
            ));
        }
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}
