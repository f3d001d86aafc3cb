//! Acceptance suite. Every check is exact; there is no tolerance anywhere.
//!
//! Runs as a plain binary (`harness = false`) and prints one line per criterion.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use bimoment::combinatorics::{check_identity, Identity, IdentityCase};
use bimoment::oracle::{
    expected_complementary_moment, sample_specs, validate, InstanceKind, InstanceSpec, Property,
};
use bimoment::transforms::{complementary_moment, complementary_moment_s, complementary_moment_t};
use bimoment::{binom_int, moments_from_pmf, ratio, Pmf, Rational};
use serde_json::Value;

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// `(family, direction, params, value)` of one expected row.
type Expected<'a> = (&'a str, &'a str, &'a [(&'a str, u64)], &'a str);

fn pmf_specs(seed: u64, trials: usize, max: usize) -> Vec<InstanceSpec> {
    sample_specs(
        seed,
        trials,
        max,
        max,
        &[InstanceKind::DensePmf, InstanceKind::SparsePmf],
    )
}

fn run_properties(specs: &[InstanceSpec], properties: &[Property]) -> Outcome {
    let report = validate(specs, properties).map_err(|e| e.to_string())?;
    if report.passed() {
        return Ok(format!(
            "{} instances, 0 failures, {:.1}s",
            report.trials,
            report.elapsed.as_secs_f64()
        ));
    }
    let f = &report.failures[0];
    Err(format!(
        "{} failures; first: {} / {} on {} {:?}: {} {} {}",
        report.failures.len(),
        f.property,
        f.check,
        f.spec,
        f.params,
        f.lhs,
        f.relation,
        f.rhs
    ))
}

fn round_trips() -> Outcome {
    run_properties(
        &pmf_specs(SEED, 500, 6),
        &[Property::PmfRoundTrip, Property::TailRoundTrip],
    )
}

fn gumbel_identity() -> Outcome {
    let specs = sample_specs(SEED + 1, 200, 4, 4, &[InstanceKind::EventSystem]);
    if specs.iter().any(|s| s.atoms.is_none_or(|a| a > 16)) {
        return Err("generated event system exceeds 16 atoms".into());
    }
    run_properties(&specs, &[Property::GumbelIdentity])
}

fn sandwich() -> Outcome {
    run_properties(&pmf_specs(SEED + 2, 500, 6), &[Property::Sandwich])
}

fn shapes() -> Outcome {
    run_properties(
        &pmf_specs(SEED + 3, 500, 6),
        &[
            Property::FrechetShape,
            Property::GumbelShape,
            Property::ChungShape,
        ],
    )
}

fn anchors() -> Outcome {
    run_properties(&pmf_specs(SEED + 4, 500, 6), &[Property::Anchors])
}

fn pgf() -> Outcome {
    run_properties(&pmf_specs(SEED + 5, 100, 6), &[Property::PgfIdentity])
}

/// A deterministic pmf with every cell positive.
fn full_support(m: usize, n: usize) -> Pmf {
    let weights: Vec<i64> = (0..=m)
        .flat_map(|u| (0..=n).map(move |v| 1 + ((7 * u + 13 * v + 3 * u * v) % 16) as i64))
        .collect();
    let total: i64 = weights.iter().sum();
    Pmf::from_flat(m, n, weights.into_iter().map(|w| ratio(w, total)).collect()).unwrap()
}

fn identities() -> Outcome {
    const MAX: i64 = 12;
    let start = Instant::now();
    let mut checked = 0usize;
    let mut check = |which: Identity, params: &[i64]| -> Result<(), String> {
        let case = IdentityCase::<Rational>::from_params(which, params)
            .map_err(|e| format!("{which:?} {params:?}: {e}"))?;
        match check_identity(&case) {
            Ok(true) => {
                checked += 1;
                Ok(())
            }
            Ok(false) => Err(format!("{which:?} fails at {params:?}")),
            Err(e) => Err(format!("{which:?} {params:?}: {e}")),
        }
    };
    for num in -2 * MAX..=2 * MAX {
        for den in 1..=6 {
            for k in 1..=MAX {
                check(Identity::ExtendedPascal, &[num, den, k])?;
            }
        }
    }
    for n in 1..=MAX {
        for k in 0..=MAX {
            check(Identity::AlternatingSum, &[n, k])?;
        }
    }
    for n in 0..=MAX {
        for k in 1..=MAX {
            check(Identity::HockeyStick, &[n, k])?;
        }
    }
    for n in 1..=MAX {
        for k in 1..=n {
            for r in 1..=MAX {
                check(Identity::Telescoping, &[n, k, r])?;
            }
        }
    }
    for n in 0..=MAX {
        for l in 0..=n {
            for t in 0..=n {
                check(Identity::ComplementExpansion, &[n, l, t])?;
            }
        }
    }
    let identity_cases = checked;

    // Univariate complementary moments are linear in the law, so point masses are exhaustive.
    let mut univariate = 0usize;
    for size in 1..=MAX as usize {
        for x in 0..=size {
            let along_s = moments_from_pmf(&Pmf::point_mass(size, 1, x, 0).unwrap());
            let along_t = moments_from_pmf(&Pmf::point_mass(1, size, 0, x).unwrap());
            for r in 0..=size {
                let want = binom_int::<Rational>((size - x) as i64, r as i64);
                let got_s = complementary_moment_s(&along_s, r).map_err(|e| e.to_string())?;
                let got_t = complementary_moment_t(&along_t, r).map_err(|e| e.to_string())?;
                if got_s != want || got_t != want {
                    return Err(format!("univariate complementary moment at size={size}, x={x}, order={r}: {got_s}, {got_t} != {want}"));
                }
                univariate += 2;
            }
        }
    }

    let mut bivariate = 0usize;
    for m in 1..=MAX as usize {
        for n in 1..=MAX as usize {
            let pmf = full_support(m, n);
            let mm = moments_from_pmf(&pmf);
            for k in 1..=m {
                for l in 1..=n {
                    let linear = complementary_moment(&mm, k, l).map_err(|e| e.to_string())?;
                    let direct = expected_complementary_moment(&pmf, k, l);
                    if linear != direct {
                        return Err(format!("complementary moment at m={m}, n={n}, k={k}, l={l}: {linear} != {direct}"));
                    }
                    bivariate += 1;
                }
            }
        }
    }
    Ok(format!(
        "{identity_cases} identity cases, {univariate} univariate and {bivariate} bivariate complementary moments, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_bimoment"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!(
            "{args:?} exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr)
        ));
    }
    Ok(output.stdout)
}

fn cli_compare() -> Outcome {
    let e2 = fixture("e2.json");
    let e2 = e2.to_str().ok_or("fixture path is not UTF-8")?;
    let text_args = ["compare", "--in", e2, "--u", "1", "--v", "1"];
    let first = cli(&text_args)?;
    let second = cli(&text_args)?;
    if first != second {
        return Err("compare output differs between runs".into());
    }
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    if !text.lines().any(|l| l == "exact: 2/3 (≈0.6667)") {
        return Err(format!("exact line missing from:\n{text}"));
    }

    let json_args = ["compare", "--in", e2, "--u", "1", "--v", "1", "--json"];
    let doc_bytes = cli(&json_args)?;
    if doc_bytes != cli(&json_args)? {
        return Err("compare --json output differs between runs".into());
    }
    let doc: Value = serde_json::from_slice(&doc_bytes).map_err(|e| e.to_string())?;
    let rows = doc["bounds"].as_array().ok_or("no bounds array")?;
    let find = |family: &str, direction: &str, params: &[(&str, u64)]| -> Option<String> {
        rows.iter()
            .find(|r| {
                r["family"] == family
                    && r["direction"] == direction
                    && params.iter().all(|(k, v)| r["params"][*k] == *v)
            })
            .and_then(|r| r["value"].as_str().map(str::to_string))
    };
    let expected: [Expected; 14] = [
        ("bonferroni", "lower", &[("k", 0)], "1/3"),
        ("bonferroni", "upper", &[("k", 0)], "5/3"),
        ("bonferroni", "lower", &[("k", 1)], "2/3"),
        ("bonferroni", "upper", &[("k", 1)], "2/3"),
        ("frechet", "lower", &[("k", 1), ("l", 1)], "5/12"),
        ("frechet", "lower", &[("k", 2), ("l", 2)], "2/3"),
        ("gumbel", "upper", &[("k", 1), ("l", 1)], "5/3"),
        ("gumbel", "upper", &[("k", 2), ("l", 2)], "2/3"),
        ("chung", "upper", &[("k", 1), ("l", 1)], "5/3"),
        ("chung", "upper", &[("k", 2), ("l", 2)], "2/3"),
        ("galambos_xu", "upper", &[], "2/3"),
        ("chen_seneta", "lower", &[("a", 1), ("b", 1)], "2/3"),
        ("madi_nagy_prekopa", "upper", &[], "2/3"),
        ("chung", "upper", &[("k", 1), ("l", 2)], "1"),
    ];
    for (family, direction, params, want) in expected {
        match find(family, direction, params) {
            Some(got) if got == want => {}
            got => {
                return Err(format!(
                    "{family} {direction} {params:?}: expected {want}, got {got:?}"
                ))
            }
        }
    }
    if doc["exact"] != "2/3" || doc["best_lower"] != "2/3" || doc["best_upper"] != "2/3" {
        return Err(format!(
            "exact/best mismatch: {} {} {}",
            doc["exact"], doc["best_lower"], doc["best_upper"]
        ));
    }
    Ok(format!(
        "{} bounds listed, {} expected values matched, output byte-stable",
        rows.len(),
        expected.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "moment/pmf and moment/tail round trips on 500 random laws",
            round_trips,
        ),
        (
            "Bonferroni sums equal binomial moments on 200 event systems",
            gumbel_identity,
        ),
        (
            "every bound brackets the exact tail on 500 random laws",
            sandwich,
        ),
        (
            "Frechet, Gumbel and Chung shape properties on 500 random laws",
            shapes,
        ),
        ("exact-attainment anchors on 500 random laws", anchors),
        (
            "binomial identities and complementary moments up to 12",
            identities,
        ),
        (
            "generating-function identity at 9 points on 100 random laws",
            pgf,
        ),
        ("CLI compare on the three-point diagonal law", cli_compare),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
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
