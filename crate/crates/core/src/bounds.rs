//! Bounds on the joint upper tail `P(S >= u, T >= v)` from binomial moments.
//!
//! Every bound reads the [`MomentMatrix`] only. Values are returned raw: a
//! lower bound may be negative and an upper bound may exceed one.

use std::fmt;

use crate::combinatorics::sign;
use crate::error::{ensure, Error, Result};
use crate::model::MomentMatrix;
use crate::scalar::Scalar;
use crate::transforms::{complementary_moment, union_product_moment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Lower,
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundFamily {
    Bonferroni,
    Frechet,
    Gumbel,
    FrechetType,
    GumbelType,
    Chung,
    GalambosXu,
    ChenSeneta,
    MadiNagyPrekopa,
}

impl BoundFamily {
    pub fn name(self) -> &'static str {
        match self {
            BoundFamily::Bonferroni => "bonferroni",
            BoundFamily::Frechet => "frechet",
            BoundFamily::Gumbel => "gumbel",
            BoundFamily::FrechetType => "frechet_type",
            BoundFamily::GumbelType => "gumbel_type",
            BoundFamily::Chung => "chung",
            BoundFamily::GalambosXu => "galambos_xu",
            BoundFamily::ChenSeneta => "chen_seneta",
            BoundFamily::MadiNagyPrekopa => "madi_nagy_prekopa",
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A computed bound on `P(S >= u, T >= v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue<T> {
    pub value: T,
    pub direction: Direction,
    pub family: BoundFamily,
    /// Named integer parameters in a fixed order, always starting with `u` and `v`.
    pub params: Vec<(&'static str, usize)>,
}

impl<T: Scalar> BoundValue<T> {
    fn new(
        value: T,
        direction: Direction,
        family: BoundFamily,
        params: Vec<(&'static str, usize)>,
    ) -> Self {
        Self {
            value,
            direction,
            family,
            params,
        }
    }

    pub fn param(&self, name: &str) -> Option<usize> {
        self.params
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, v)| v)
    }

    /// The tail `(u, v)` this bound targets.
    pub fn target(&self) -> (usize, usize) {
        (self.param("u").unwrap_or(1), self.param("v").unwrap_or(1))
    }

    /// Whether the bound is consistent with the exact tail probability.
    pub fn holds_for(&self, exact: &T) -> bool {
        match self.direction {
            Direction::Lower => self.value.approx_le(exact),
            Direction::Upper => exact.approx_le(&self.value),
        }
    }

    /// Family and parameters other than the target, e.g. `gumbel(k=2,l=1)`.
    pub fn label(&self) -> String {
        let extra: Vec<String> = self
            .params
            .iter()
            .filter(|(k, _)| !matches!(*k, "u" | "v"))
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if extra.is_empty() {
            self.family.to_string()
        } else {
            format!("{}({})", self.family, extra.join(","))
        }
    }
}

fn check_target<T: Scalar>(mm: &MomentMatrix<T>, u: usize, v: usize) -> Result<()> {
    ensure(u >= 1 && v >= 1, || {
        format!("target ({u},{v}) unsupported: u and v must be at least 1 (use the marginal tail for u=0 or v=0)")
    })?;
    ensure(u <= mm.m() && v <= mm.n(), || {
        format!("target ({u},{v}) outside 1..={} x 1..={}", mm.m(), mm.n())
    })
}

fn check_orders<T: Scalar>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<()> {
    ensure((1..=mm.m()).contains(&k), || {
        format!("k must satisfy 1 <= k <= m = {}, got {k}", mm.m())
    })?;
    ensure((1..=mm.n()).contains(&l), || {
        format!("l must satisfy 1 <= l <= n = {}, got {l}", mm.n())
    })
}

fn divide<T: Scalar>(num: T, den: T, what: impl FnOnce() -> String) -> Result<T> {
    if den.is_zero() {
        return Err(Error::UndefinedBound(what()));
    }
    Ok(num / den)
}

/// Bonferroni truncations of the tail inversion.
///
/// The tail is an alternating sum over anti-diagonals `t = i + j`, from
/// `t = u + v` up. Stopping after `t = u + v + 2k + 1` gives a lower bound
/// and after `t = u + v + 2k` an upper bound. Once a cutoff reaches `m + n`
/// the sum is the exact tail.
pub fn bonferroni_pair<T: Scalar>(
    mm: &MomentMatrix<T>,
    u: usize,
    v: usize,
    k: usize,
) -> Result<(BoundValue<T>, BoundValue<T>)> {
    check_target(mm, u, v)?;
    let (m, n) = (mm.m(), mm.n());
    let upper_cut = u + v + 2 * k;
    let lower_cut = upper_cut + 1;
    let mut upper = T::zero();
    let mut lower = T::zero();
    for t in (u + v)..=lower_cut.min(m + n) {
        let mut diag = T::zero();
        for i in u.max(t.saturating_sub(n))..=m.min(t - v) {
            let j = t - i;
            diag = diag
                + mm.binom(i as i64 - 1, u as i64 - 1)
                    * mm.binom(j as i64 - 1, v as i64 - 1)
                    * mm.moment(i, j)?;
        }
        let g = sign::<T>((t - u - v) as i64) * diag;
        if t <= upper_cut {
            upper = upper + g.clone();
        }
        lower = lower + g;
    }
    let params = vec![("u", u), ("v", v), ("k", k)];
    Ok((
        BoundValue::new(
            lower,
            Direction::Lower,
            BoundFamily::Bonferroni,
            params.clone(),
        ),
        BoundValue::new(upper, Direction::Upper, BoundFamily::Bonferroni, params),
    ))
}

/// Fréchet-type lower bound on `P(S >= 1, T >= 1)`:
/// `(binom(m,k) binom(n,l) - S̄[k][l]) / (binom(m,k) binom(n,l))`.
pub fn frechet_lower<T: Scalar>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<BoundValue<T>> {
    check_orders(mm, k, l)?;
    let den = mm.binom(mm.m() as i64, k as i64) * mm.binom(mm.n() as i64, l as i64);
    let value = divide(union_product_moment(mm, k, l)?, den, || {
        format!("binom(m,{k}) binom(n,{l}) = 0")
    })?;
    Ok(BoundValue::new(
        value,
        Direction::Lower,
        BoundFamily::Frechet,
        vec![("u", 1), ("v", 1), ("k", k), ("l", l)],
    ))
}

/// Gumbel-type upper bound on `P(S >= 1, T >= 1)`:
/// `(binom(m,k) binom(n,l) - S̄[k][l]) / (binom(m-1,k-1) binom(n-1,l-1))`.
pub fn gumbel_upper<T: Scalar>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<BoundValue<T>> {
    check_orders(mm, k, l)?;
    let den = mm.binom(mm.m() as i64 - 1, k as i64 - 1) * mm.binom(mm.n() as i64 - 1, l as i64 - 1);
    let value = divide(union_product_moment(mm, k, l)?, den, || {
        format!("binom(m-1,{}) binom(n-1,{}) = 0", k - 1, l - 1)
    })?;
    Ok(BoundValue::new(
        value,
        Direction::Upper,
        BoundFamily::Gumbel,
        vec![("u", 1), ("v", 1), ("k", k), ("l", l)],
    ))
}

/// Lower and upper bounds on `P(S >= s, T >= t)` for one `(k, l)`; either
/// side may be undefined when its denominator vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct TypePair<T> {
    pub lower: Result<BoundValue<T>>,
    pub upper: Result<BoundValue<T>>,
}

/// Fréchet-type and Gumbel-type bounds for a general target `(s, t)`:
///
/// * lower: `1 - S̄[k][l] / (binom(m-s+1,k) binom(n-t+1,l))`;
/// * upper: `(binom(m,k) binom(n,l) - S̄[k][l]) / ((binom(m,k) - binom(m-s,k)) (binom(n,l) - binom(n-t,l)))`.
pub fn frechet_gumbel_type<T: Scalar>(
    mm: &MomentMatrix<T>,
    s: usize,
    t: usize,
    k: usize,
    l: usize,
) -> Result<TypePair<T>> {
    check_target(mm, s, t)?;
    check_orders(mm, k, l)?;
    let (m, n) = (mm.m() as i64, mm.n() as i64);
    let (si, ti, ki, li) = (s as i64, t as i64, k as i64, l as i64);
    let params = vec![("u", s), ("v", t), ("s", s), ("t", t), ("k", k), ("l", l)];
    let comp = complementary_moment(mm, k, l)?;
    let numerator = mm.binom(m, ki) * mm.binom(n, li) - comp.clone();

    let lower_den = mm.binom(m - si + 1, ki) * mm.binom(n - ti + 1, li);
    let lower = divide(comp, lower_den, || {
        format!("binom(m-s+1,k) binom(n-t+1,l) = 0 for s={s}, t={t}, k={k}, l={l}")
    })
    .map(|r| {
        BoundValue::new(
            T::one() - r,
            Direction::Lower,
            BoundFamily::FrechetType,
            params.clone(),
        )
    });

    let upper_den =
        (mm.binom(m, ki) - mm.binom(m - si, ki)) * (mm.binom(n, li) - mm.binom(n - ti, li));
    let upper = divide(numerator, upper_den, || {
        format!("(binom(m,k) - binom(m-s,k)) (binom(n,l) - binom(n-t,l)) = 0 for s={s}, t={t}, k={k}, l={l}")
    })
    .map(|x| BoundValue::new(x, Direction::Upper, BoundFamily::GumbelType, params));

    Ok(TypePair { lower, upper })
}

/// Chung-type bound on `P(S >= s, T >= t)`, for `s <= k <= m`, `t <= l <= n`:
///
/// `sum_{i=s..k} sum_{j=t..l} (-1)^(i+j-s-t) binom(i-1,i-s) binom(m-i,k-i)
///  binom(j-1,j-t) binom(n-j,l-j) S[i][j] / (binom(m-s,k-s) binom(n-t,l-t))`.
///
/// Nonincreasing in `k` and `l` and exact at `(k, l) = (m, n)`, hence an
/// upper bound everywhere.
pub fn chung_bound<T: Scalar>(
    mm: &MomentMatrix<T>,
    s: usize,
    t: usize,
    k: usize,
    l: usize,
) -> Result<BoundValue<T>> {
    let (m, n) = (mm.m(), mm.n());
    ensure(1 <= s && s <= k && k <= m, || {
        format!("chung bound requires 1 <= s <= k <= m, got s={s}, k={k}, m={m}")
    })?;
    ensure(1 <= t && t <= l && l <= n, || {
        format!("chung bound requires 1 <= t <= l <= n, got t={t}, l={l}, n={n}")
    })?;
    let (m, n, s, t, k, l) = (m as i64, n as i64, s as i64, t as i64, k as i64, l as i64);
    let mut num = T::zero();
    for i in s..=k {
        let ci = mm.binom(i - 1, i - s) * mm.binom(m - i, k - i);
        for j in t..=l {
            let term = ci.clone()
                * mm.binom(j - 1, j - t)
                * mm.binom(n - j, l - j)
                * mm.moment(i as usize, j as usize)?;
            num = if (i + j - s - t) % 2 == 0 {
                num + term
            } else {
                num - term
            };
        }
    }
    let den = mm.binom(m - s, k - s) * mm.binom(n - t, l - t);
    let value = divide(num, den, || "binom(m-s,k-s) binom(n-t,l-t) = 0".into())?;
    let (s, t, k, l) = (s as usize, t as usize, k as usize, l as usize);
    Ok(BoundValue::new(
        value,
        Direction::Upper,
        BoundFamily::Chung,
        vec![("u", s), ("v", t), ("s", s), ("t", t), ("k", k), ("l", l)],
    ))
}

/// Literature bounds on `P(S >= 1, T >= 1)` built from `S[1][1]`, `S[1][2]`, `S[2][1]`, `S[2][2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    /// Upper: `S11 - (2/n) S12 - (2/m) S21 + (4/mn) S22`.
    C1GalambosXu,
    /// Lower, for integers `a, b` with `m <= 2a + 1`, `n <= 2b + 1`.
    C3ChenSeneta,
    /// Upper: `min(S11 - (2/mn) S12 - (2/m) S21, S11 - (2/n) S12 - (2/mn) S21)`.
    C6MadiNagyPrekopa,
}

/// Evaluates one of the [`Comparison`] bounds. `a` and `b` are used by
/// [`Comparison::C3ChenSeneta`] only and default to `m - 1`, `n - 1`.
pub fn comparison_bound<T: Scalar>(
    mm: &MomentMatrix<T>,
    which: Comparison,
    a: Option<usize>,
    b: Option<usize>,
) -> Result<BoundValue<T>> {
    let (m, n) = (mm.m(), mm.n());
    ensure(m >= 2 && n >= 2, || {
        format!("comparison bounds require m, n >= 2, got m={m}, n={n}")
    })?;
    let s11 = mm.moment(1, 1)?;
    let s12 = mm.moment(1, 2)?;
    let s21 = mm.moment(2, 1)?;
    let s22 = mm.moment(2, 2)?;
    let int = |x: usize| T::from_int(x as i64);
    let two = int(2);
    let base = vec![("u", 1), ("v", 1)];
    Ok(match which {
        Comparison::C1GalambosXu => {
            let value =
                s11 - two.clone() / int(n) * s12 - two / int(m) * s21 + int(4) / int(m * n) * s22;
            BoundValue::new(value, Direction::Upper, BoundFamily::GalambosXu, base)
        }
        Comparison::C3ChenSeneta => {
            let a = a.unwrap_or(m - 1);
            let b = b.unwrap_or(n - 1);
            ensure(a >= 1 && b >= 1, || {
                format!("chen_seneta requires positive integers a, b, got a={a}, b={b}")
            })?;
            ensure(m <= 2 * a + 1, || {
                format!("chen_seneta requires m - 2a - 1 <= 0, got m={m}, a={a}")
            })?;
            ensure(n <= 2 * b + 1, || {
                format!("chen_seneta requires n - 2b - 1 <= 0, got n={n}, b={b}")
            })?;
            let den = int((a + 1) * (b + 1));
            let four = int(4);
            let value = four.clone() / den.clone() * s11
                - four.clone() / (int(b) * den.clone()) * s12
                - four.clone() / (int(a) * den.clone()) * s21
                + four / (int(a * b) * den) * s22;
            let mut params = base;
            params.extend([("a", a), ("b", b)]);
            BoundValue::new(value, Direction::Lower, BoundFamily::ChenSeneta, params)
        }
        Comparison::C6MadiNagyPrekopa => {
            let mn = int(m * n);
            let first = s11.clone()
                - two.clone() / mn.clone() * s12.clone()
                - two.clone() / int(m) * s21.clone();
            let second = s11 - two.clone() / int(n) * s12 - two / mn * s21;
            let value = if first <= second { first } else { second };
            BoundValue::new(value, Direction::Upper, BoundFamily::MadiNagyPrekopa, base)
        }
    })
}

/// Families whose values over a `(k, l)` grid have a known shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepFamily {
    /// Nondecreasing and concave in `k` and `l`.
    Frechet,
    /// Nonincreasing and convex in `k` and `l`.
    Gumbel,
    /// Nonincreasing and convex in `k` and `l`, for a fixed target `(s, t)`.
    Chung,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    K,
    L,
}

/// One failed monotonicity or curvature check in a sweep. The expected relation is `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeViolation<T> {
    pub axis: Axis,
    pub check: &'static str,
    /// `(k, l)` of the first cell involved.
    pub at: (usize, usize),
    pub lhs: T,
    pub rhs: T,
}

/// Bound values over all `(k, l)` with `k_start <= k <= m`, `l_start <= l <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    pub family: SweepFamily,
    pub target: (usize, usize),
    pub k_start: usize,
    pub l_start: usize,
    /// `values[k - k_start][l - l_start]`.
    pub values: Vec<Vec<T>>,
}

/// Evaluates a family over its full `(k, l)` grid. Fréchet and Gumbel sweeps target `(1, 1)`.
pub fn sweep<T: Scalar>(
    mm: &MomentMatrix<T>,
    family: SweepFamily,
    u: usize,
    v: usize,
) -> Result<SweepGrid<T>> {
    check_target(mm, u, v)?;
    let (m, n) = (mm.m(), mm.n());
    let (k_start, l_start) = match family {
        SweepFamily::Frechet | SweepFamily::Gumbel => {
            ensure((u, v) == (1, 1), || {
                format!("{family:?} bounds target (1,1), got ({u},{v})")
            })?;
            (1, 1)
        }
        SweepFamily::Chung => (u, v),
    };
    let values = (k_start..=m)
        .map(|k| {
            (l_start..=n)
                .map(|l| {
                    Ok(match family {
                        SweepFamily::Frechet => frechet_lower(mm, k, l)?.value,
                        SweepFamily::Gumbel => gumbel_upper(mm, k, l)?.value,
                        SweepFamily::Chung => chung_bound(mm, u, v, k, l)?.value,
                    })
                })
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        family,
        target: (u, v),
        k_start,
        l_start,
        values,
    })
}

impl<T: Scalar> SweepGrid<T> {
    pub fn get(&self, k: usize, l: usize) -> Option<&T> {
        self.values
            .get(k.checked_sub(self.k_start)?)?
            .get(l.checked_sub(self.l_start)?)
    }

    /// All monotonicity and curvature checks that fail along either axis.
    pub fn violations(&self) -> Vec<ShapeViolation<T>> {
        let increasing = self.family == SweepFamily::Frechet;
        let mut out = Vec::new();
        let rows = self.values.len();
        let cols = self.values.first().map_or(0, Vec::len);
        for axis in [Axis::K, Axis::L] {
            for r in 0..rows {
                for c in 0..cols {
                    let step = |d: usize| match axis {
                        Axis::K => self.values.get(r + d).map(|row| &row[c]),
                        Axis::L => self.values[r].get(c + d),
                    };
                    let at = (r + self.k_start, c + self.l_start);
                    let (Some(x0), Some(x1)) = (step(0), step(1)) else {
                        continue;
                    };
                    let (lhs, rhs) = if increasing { (x0, x1) } else { (x1, x0) };
                    if !lhs.approx_le(rhs) {
                        let check = if increasing {
                            "nondecreasing"
                        } else {
                            "nonincreasing"
                        };
                        out.push(ShapeViolation {
                            axis,
                            check,
                            at,
                            lhs: lhs.clone(),
                            rhs: rhs.clone(),
                        });
                    }
                    let Some(x2) = step(2) else { continue };
                    let second = x2.clone() - x1.clone() - x1.clone() + x0.clone();
                    let (lhs, rhs, check) = if increasing {
                        (second, T::zero(), "concave")
                    } else {
                        (T::zero(), second, "convex")
                    };
                    if !lhs.approx_le(&rhs) {
                        out.push(ShapeViolation {
                            axis,
                            check,
                            at,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        out
    }
}
