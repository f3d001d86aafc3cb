//! Instance files: pmf JSON, moment JSON and event CSV.

use std::fs;
use std::path::Path;

use bimoment::oracle::exact_tail;
use bimoment::transforms::tails_from_moments;
use bimoment::{counting_pmf, moments_from_pmf, Atom, Events, Moments, Pmf, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A loaded instance.
#[derive(Debug, Clone)]
pub enum Input {
    Pmf(Pmf),
    Events(Events),
    Moments(Moments),
}

impl Input {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Input::Pmf(p) => (p.m(), p.n()),
            Input::Events(e) => (e.m(), e.n()),
            Input::Moments(mm) => (mm.m(), mm.n()),
        }
    }

    pub fn pmf(&self) -> Option<Pmf> {
        match self {
            Input::Pmf(p) => Some(p.clone()),
            Input::Events(e) => Some(counting_pmf(e)),
            Input::Moments(_) => None,
        }
    }

    pub fn moments(&self) -> Moments {
        match self {
            Input::Moments(mm) => mm.clone(),
            _ => moments_from_pmf(&self.pmf().expect("pmf-backed input")),
        }
    }

    /// The exact tail, by suffix sum when the law is known.
    pub fn exact_tail(&self, u: usize, v: usize) -> bimoment::Result<Rational> {
        match self.pmf() {
            Some(p) => exact_tail(&p, u, v),
            None => tails_from_moments(&self.moments(), u, v),
        }
    }
}

/// Parses `a/b`, an integer, or a decimal such as `-0.125` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let bad =
        || format!("cannot parse {text:?} as a rational (expected a/b, an integer or a decimal)");
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = parse_int(num).ok_or_else(bad)?;
        let den: BigInt = parse_int(den).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(format!("cannot parse {text:?}: zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if (whole.is_empty() && frac.is_empty()) || !digits(whole) || !digits(frac) {
        return Err(bad());
    }
    let joined: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len() + 1);
    let value = Rational::new(joined, scale);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Grid entries may be strings or plain JSON numbers (read from their decimal text).
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Number(serde_json::Number),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    m: usize,
    n: usize,
    p: Option<Vec<Vec<Entry>>>,
    s: Option<Vec<Vec<Entry>>>,
}

/// Canonical output documents, one grid per file.
#[derive(Debug, Serialize)]
pub struct PmfDoc {
    pub m: usize,
    pub n: usize,
    pub p: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct MomentDoc {
    pub m: usize,
    pub n: usize,
    pub s: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct TailDoc {
    pub m: usize,
    pub n: usize,
    pub q: Vec<Vec<String>>,
}

pub fn text_grid(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn parse_grid(file: &str, name: &str, rows: &[Vec<Entry>]) -> Result<Vec<Vec<Rational>>, String> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, e)| {
                    parse_rational(&e.text())
                        .map_err(|msg| format!("{file}: {name}[{i}][{j}]: {msg}"))
                })
                .collect()
        })
        .collect()
}

/// Loads an instance, choosing the format by extension (`.csv`) or by the JSON keys `p` / `s`.
pub fn load(path: &Path) -> Result<Input, String> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| format!("{file}: cannot read: {e}"))?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        return load_events(&file, &text).map(Input::Events);
    }
    let doc: GridDoc = serde_json::from_str(&text).map_err(|e| format!("{file}: {e}"))?;
    let (m, n) = (doc.m, doc.n);
    let check_shape = |rows: &[Vec<Rational>]| -> Result<(), String> {
        if rows.len() != m + 1 {
            return Err(format!(
                "{file}: constraint violated: p must have m+1 = {} rows, found {}",
                m + 1,
                rows.len()
            ));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n + 1 {
                return Err(format!(
                    "{file}: constraint violated: p[{i}] must have n+1 = {} entries, found {}",
                    n + 1,
                    r.len()
                ));
            }
        }
        Ok(())
    };
    match (doc.p, doc.s) {
        (Some(p), None) => {
            let rows = parse_grid(&file, "p", &p)?;
            check_shape(&rows)?;
            Pmf::new(m, n, rows)
                .map(Input::Pmf)
                .map_err(|e| format!("{file}: {e}"))
        }
        (None, Some(s)) => {
            let rows = parse_grid(&file, "s", &s)?;
            if rows.is_empty() || rows.len() > m + 1 {
                return Err(format!(
                    "{file}: constraint violated: s must have between 1 and m+1 = {} rows",
                    m + 1
                ));
            }
            let full = rows.len() == m + 1 && rows.iter().all(|r| r.len() == n + 1);
            let result = if full {
                Moments::new(m, n, rows)
            } else {
                let lmax = rows[0].len().saturating_sub(1);
                if rows.iter().any(|r| r.len() != lmax + 1) || lmax > n {
                    return Err(format!("{file}: constraint violated: truncated s rows must share one length <= n+1"));
                }
                Moments::truncated(m, n, lmax, rows)
            };
            result
                .map(Input::Moments)
                .map_err(|e| format!("{file}: {e}"))
        }
        (Some(_), Some(_)) => Err(format!(
            "{file}: give either \"p\" (pmf) or \"s\" (moments), not both"
        )),
        (None, None) => Err(format!("{file}: missing \"p\" (pmf) or \"s\" (moments)")),
    }
}

fn load_events(file: &str, text: &str) -> Result<Events, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| format!("{file}: line 1: {e}"))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    if names.first() != Some(&"weight") {
        return Err(format!("{file}: line 1: header must start with `weight`"));
    }
    let m = names
        .iter()
        .skip(1)
        .take_while(|h| h.starts_with('A'))
        .count();
    let n = names.len() - 1 - m;
    let expected: Vec<String> = std::iter::once("weight".to_string())
        .chain((1..=m).map(|i| format!("A{i}")))
        .chain((1..=n).map(|j| format!("B{j}")))
        .collect();
    if names != expected || m == 0 || n == 0 {
        return Err(format!(
            "{file}: line 1: header must be weight,A1..Am,B1..Bn with m, n >= 1, found {}",
            names.join(",")
        ));
    }
    let mut atoms = Vec::new();
    let mut total = Rational::zero();
    for record in reader.records() {
        let record = record.map_err(|e| format!("{file}: {e}"))?;
        let line = record.position().map_or(0, |p| p.line());
        let weight =
            parse_rational(&record[0]).map_err(|e| format!("{file}: line {line}: weight: {e}"))?;
        let bit = |idx: usize| -> Result<bool, String> {
            match &record[idx] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(format!(
                    "{file}: line {line}: column {}: indicator must be 0 or 1, found {other:?}",
                    names[idx]
                )),
            }
        };
        let a = (1..=m).map(bit).collect::<Result<Vec<_>, _>>()?;
        let b = (m + 1..=m + n).map(bit).collect::<Result<Vec<_>, _>>()?;
        total += &weight;
        atoms.push(Atom::new(weight, a, b));
    }
    if !total.is_one() {
        return Err(format!(
            "{file}: constraint violated: weights must sum to 1, got {total}"
        ));
    }
    Events::new(m, n, atoms).map_err(|e| format!("{file}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bimoment::ratio;

    #[test]
    fn parses_rationals_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("1.").unwrap(), ratio(1, 1));
        for bad in ["", ".", "1/0", "a", "1/2/3", "1e3", "--1", "0x1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
}
