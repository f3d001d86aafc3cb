use bimoment::{Bound, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rounds half away from zero to `places` decimals.
pub fn decimal(x: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (x * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let (whole, frac) = (&abs / &scale, &abs % &scale);
    if places == 0 {
        return format!("{sign}{whole}");
    }
    let frac = if frac.is_zero() {
        "0".repeat(places)
    } else {
        format!("{frac:0>places$}")
    };
    format!("{sign}{whole}.{frac}")
}

pub fn approx(x: &Rational) -> String {
    format!("≈{}", decimal(x, 4))
}

/// `5/3 (≈1.6667) [upper]`
pub fn bound_line(b: &Bound) -> String {
    format!("{} ({}) [{}]", b.value, approx(&b.value), b.direction)
}

/// Left-aligned columns separated by two spaces; trailing spaces trimmed.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            line.extend(std::iter::repeat_n(' ', widths[c] - cell.chars().count()));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// A labelled grid: header row `corner, col_labels...`, then one row per label.
pub fn grid(corner: &str, row_start: usize, col_start: usize, values: &[Vec<Rational>]) -> String {
    let cols = values.first().map_or(0, Vec::len);
    let mut rows = vec![std::iter::once(corner.to_string())
        .chain((0..cols).map(|c| (c + col_start).to_string()))
        .collect()];
    for (r, vals) in values.iter().enumerate() {
        rows.push(
            std::iter::once((r + row_start).to_string())
                .chain(vals.iter().map(ToString::to_string))
                .collect(),
        );
    }
    table(&rows)
}
