//! Exact conversions between the joint law, the joint upper tails
//! `P(S >= u, T >= v)` and the binomial moment matrix.
//!
//! The inversion formulas read moments only. [`TailTable::from_pmf`] is the
//! independent suffix-sum route used to check them.

use crate::combinatorics::sign;
use crate::error::{ensure, Error, Result};
use crate::model::{JointPmf, MomentMatrix};
use crate::scalar::Scalar;

/// Joint upper tails `q[u][v] = P(S >= u, T >= v)` for `0 <= u <= m`, `0 <= v <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailTable<T> {
    m: usize,
    n: usize,
    q: Vec<T>,
}

impl<T: Scalar> TailTable<T> {
    /// Validates a tail grid: `q[0][0] = 1`, entries in `[0, 1]`, nonincreasing along both axes.
    pub fn new(m: usize, n: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        ensure(m >= 1 && n >= 1, || {
            format!("m and n must be positive, got m={m}, n={n}")
        })?;
        ensure(
            rows.len() == m + 1 && rows.iter().all(|r| r.len() == n + 1),
            || format!("tail grid must be {}x{}", m + 1, n + 1),
        )?;
        let table = Self {
            m,
            n,
            q: rows.into_iter().flatten().collect(),
        };
        if !table.at(0, 0).approx_eq(&T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "q[0][0] = {:?}, expected 1",
                table.at(0, 0)
            )));
        }
        for u in 0..=m {
            for v in 0..=n {
                let x = table.at(u, v);
                let bad = x.is_negative()
                    || !x.approx_le(&T::one())
                    || (u > 0 && !x.approx_le(table.at(u - 1, v)))
                    || (v > 0 && !x.approx_le(table.at(u, v - 1)));
                if bad {
                    return Err(Error::InvalidDistribution(format!(
                        "q[{u}][{v}] = {x:?} breaks tail monotonicity"
                    )));
                }
            }
        }
        Ok(table)
    }

    /// Suffix sums of the pmf. Uses no moment code.
    pub fn from_pmf(pmf: &JointPmf<T>) -> Self {
        let (m, n) = (pmf.m(), pmf.n());
        let w = n + 1;
        let mut q = vec![T::zero(); (m + 1) * w];
        for u in (0..=m).rev() {
            for v in (0..=n).rev() {
                let mut x = pmf.prob(u, v);
                if u < m {
                    x = x + q[(u + 1) * w + v].clone();
                }
                if v < n {
                    x = x + q[u * w + v + 1].clone();
                }
                if u < m && v < n {
                    x = x - q[(u + 1) * w + v + 1].clone();
                }
                q[u * w + v] = x;
            }
        }
        Self { m, n, q }
    }

    /// All tails from the moment matrix.
    pub fn from_moments(mm: &MomentMatrix<T>) -> Result<Self> {
        let (m, n) = (mm.m(), mm.n());
        let mut q = Vec::with_capacity((m + 1) * (n + 1));
        for u in 0..=m {
            for v in 0..=n {
                q.push(tails_from_moments(mm, u, v)?);
            }
        }
        Ok(Self { m, n, q })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn at(&self, u: usize, v: usize) -> &T {
        &self.q[u * (self.n + 1) + v]
    }

    /// `P(S >= u, T >= v)`; zero beyond the grid.
    pub fn tail(&self, u: usize, v: usize) -> T {
        if u > self.m || v > self.n {
            return T::zero();
        }
        self.at(u, v).clone()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.q.chunks(self.n + 1).map(<[T]>::to_vec).collect()
    }
}

fn check_cell(m: usize, n: usize, u: usize, v: usize) -> Result<()> {
    ensure(u <= m && v <= n, || {
        format!("index ({u},{v}) outside 0..={m} x 0..={n}")
    })
}

/// `P(S = u, T = v) = sum_{i>=u, j>=v} binom(i,u) binom(j,v) (-1)^(i+j-u-v) S[i][j]`.
pub fn pmf_from_moments<T: Scalar>(mm: &MomentMatrix<T>, u: usize, v: usize) -> Result<T> {
    let (m, n) = (mm.m(), mm.n());
    check_cell(m, n, u, v)?;
    let mut total = T::zero();
    for i in u..=m {
        let ci = sign::<T>((i - u) as i64) * mm.binom(i as i64, u as i64);
        for j in v..=n {
            let term = mm.binom(j as i64, v as i64) * mm.moment(i, j)?;
            total = if (j - v).is_multiple_of(2) {
                total + ci.clone() * term
            } else {
                total - ci.clone() * term
            };
        }
    }
    Ok(total)
}

/// Raw `(m+1) x (n+1)` grid of [`pmf_from_moments`] values; not checked for non-negativity.
pub fn pmf_grid_from_moments<T: Scalar>(mm: &MomentMatrix<T>) -> Result<Vec<Vec<T>>> {
    (0..=mm.m())
        .map(|u| (0..=mm.n()).map(|v| pmf_from_moments(mm, u, v)).collect())
        .collect()
}

/// The joint law reconstructed from a full moment matrix.
pub fn pmf_from_moment_matrix<T: Scalar>(mm: &MomentMatrix<T>) -> Result<JointPmf<T>> {
    JointPmf::new(mm.m(), mm.n(), pmf_grid_from_moments(mm)?)
}

/// `P(S >= u, T >= v)` from the moments.
///
/// For `u, v >= 1` this is the alternating double sum with coefficients
/// `binom(i-1,u-1) binom(j-1,v-1)`. When `u = 0` or `v = 0` the event on that
/// coordinate is certain and the univariate tail of the other marginal is
/// used instead.
pub fn tails_from_moments<T: Scalar>(mm: &MomentMatrix<T>, u: usize, v: usize) -> Result<T> {
    let (m, n) = (mm.m(), mm.n());
    check_cell(m, n, u, v)?;
    match (u, v) {
        (0, 0) => Ok(T::one()),
        (0, v) => univariate_tail(v, n, |j| mm.moment(0, j), |d, r| mm.binom(d, r)),
        (u, 0) => univariate_tail(u, m, |i| mm.moment(i, 0), |d, r| mm.binom(d, r)),
        (u, v) => {
            let mut total = T::zero();
            for i in u..=m {
                let ci = mm.binom(i as i64 - 1, u as i64 - 1);
                for j in v..=n {
                    let term =
                        ci.clone() * mm.binom(j as i64 - 1, v as i64 - 1) * mm.moment(i, j)?;
                    total = if (i + j - u - v) % 2 == 0 {
                        total + term
                    } else {
                        total - term
                    };
                }
            }
            Ok(total)
        }
    }
}

fn univariate_tail<T: Scalar>(
    v: usize,
    n: usize,
    moment: impl Fn(usize) -> Result<T>,
    binom: impl Fn(i64, i64) -> T,
) -> Result<T> {
    let mut total = T::zero();
    for j in v..=n {
        let term = binom(j as i64 - 1, v as i64 - 1) * moment(j)?;
        total = if (j - v).is_multiple_of(2) {
            total + term
        } else {
            total - term
        };
    }
    Ok(total)
}

/// `S[i][j] = sum_{u>=i, v>=j} binom(u-1,i-1) binom(v-1,j-1) P(S >= u, T >= v)`.
///
/// Zero orders use the univariate form on the corresponding marginal tail.
pub fn moments_from_tails<T: Scalar>(tt: &TailTable<T>, i: usize, j: usize) -> Result<T> {
    let (m, n) = (tt.m(), tt.n());
    check_cell(m, n, i, j)?;
    let b = |d: usize, r: usize| crate::combinatorics::binom_int::<T>(d as i64 - 1, r as i64 - 1);
    let total = match (i, j) {
        (0, 0) => T::one(),
        (0, j) => (j..=n).fold(T::zero(), |acc, v| acc + b(v, j) * tt.tail(0, v)),
        (i, 0) => (i..=m).fold(T::zero(), |acc, u| acc + b(u, i) * tt.tail(u, 0)),
        (i, j) => {
            let mut total = T::zero();
            for u in i..=m {
                for v in j..=n {
                    total = total + b(u, i) * b(v, j) * tt.tail(u, v);
                }
            }
            total
        }
    };
    Ok(total)
}

/// Full moment matrix from a tail table.
pub fn moment_matrix_from_tails<T: Scalar>(tt: &TailTable<T>) -> Result<MomentMatrix<T>> {
    let rows = (0..=tt.m())
        .map(|i| {
            (0..=tt.n())
                .map(|j| moments_from_tails(tt, i, j))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MomentMatrix::new(tt.m(), tt.n(), rows)
}

/// Probability generating function `sum_{u,v} p[u][v] t^u s^v`.
pub fn pgf_eval<T: Scalar>(pmf: &JointPmf<T>, t: &T, s: &T) -> T {
    let t_pows = powers(t, pmf.m());
    let s_pows = powers(s, pmf.n());
    pmf.support().fold(T::zero(), |acc, (u, v, p)| {
        acc + p.clone() * t_pows[u].clone() * s_pows[v].clone()
    })
}

/// `sum_{i,j} S[i][j] t^i s^j`, which equals the pgf at `(1 + t, 1 + s)`.
pub fn moment_series_eval<T: Scalar>(mm: &MomentMatrix<T>, t: &T, s: &T) -> Result<T> {
    let t_pows = powers(t, mm.m());
    let s_pows = powers(s, mm.n());
    let mut total = T::zero();
    for (i, ti) in t_pows.iter().enumerate() {
        for (j, sj) in s_pows.iter().enumerate() {
            total = total + mm.moment(i, j)? * ti.clone() * sj.clone();
        }
    }
    Ok(total)
}

/// Whether `P(1 + t, 1 + s) = sum S[i][j] t^i s^j` holds at this point.
pub fn pgf_identity_holds<T: Scalar>(
    pmf: &JointPmf<T>,
    mm: &MomentMatrix<T>,
    t: &T,
    s: &T,
) -> Result<bool> {
    let lhs = pgf_eval(pmf, &(T::one() + t.clone()), &(T::one() + s.clone()));
    Ok(lhs.approx_eq(&moment_series_eval(mm, t, s)?))
}

fn powers<T: Scalar>(x: &T, max: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(T::one());
    for k in 1..=max {
        out.push(out[k - 1].clone() * x.clone());
    }
    out
}

/// `P(S = 0, T = 0)` by grouping the moments along anti-diagonals `i + j = t`.
pub fn prob_origin_by_antidiagonals<T: Scalar>(mm: &MomentMatrix<T>) -> Result<T> {
    let mut total = T::zero();
    for t in 0..=(mm.m() + mm.n()) {
        let mut diag = T::zero();
        for i in t.saturating_sub(mm.n())..=t.min(mm.m()) {
            diag = diag + mm.moment(i, t - i)?;
        }
        total = total + sign::<T>(t as i64) * diag;
    }
    Ok(total)
}

fn check_orders<T>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<()>
where
    T: Scalar,
{
    ensure((1..=mm.m()).contains(&k), || {
        format!("k must satisfy 1 <= k <= m = {}, got {k}", mm.m())
    })?;
    ensure((1..=mm.n()).contains(&l), || {
        format!("l must satisfy 1 <= l <= n = {}, got {l}", mm.n())
    })
}

/// `binom(m,k) binom(n,l) - S̄[k][l]` as a linear form in the moments:
/// `sum_{s=1..k} sum_{r=1..l} (-1)^(s+r) binom(m-s,k-s) binom(n-r,l-r) S[s][r]`.
///
/// This is `E[(binom(m,k) - binom(m-S,k)) (binom(n,l) - binom(n-T,l))]`, the
/// common numerator of the Fréchet- and Gumbel-type bounds.
pub fn union_product_moment<T: Scalar>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<T> {
    check_orders(mm, k, l)?;
    let (m, n) = (mm.m() as i64, mm.n() as i64);
    let (k, l) = (k as i64, l as i64);
    let mut total = T::zero();
    for s in 1..=k {
        let cs = mm.binom(m - s, k - s);
        for r in 1..=l {
            let term = cs.clone() * mm.binom(n - r, l - r) * mm.moment(s as usize, r as usize)?;
            total = if (s + r) % 2 == 0 {
                total + term
            } else {
                total - term
            };
        }
    }
    Ok(total)
}

/// Complementary bivariate moment
/// `S̄[k][l] = binom(m,k) E binom(n-T,l) + binom(n,l) E binom(m-S,k) - E binom(m-S,k) binom(n-T,l)`,
/// computed from the moment matrix.
pub fn complementary_moment<T: Scalar>(mm: &MomentMatrix<T>, k: usize, l: usize) -> Result<T> {
    let full = mm.binom(mm.m() as i64, k as i64) * mm.binom(mm.n() as i64, l as i64);
    Ok(full - union_product_moment(mm, k, l)?)
}

/// `E binom(m-S, k)` from the `T`-free row of moments.
pub fn complementary_moment_s<T: Scalar>(mm: &MomentMatrix<T>, k: usize) -> Result<T> {
    ensure(k <= mm.m(), || {
        format!("k must satisfy 0 <= k <= m = {}, got {k}", mm.m())
    })?;
    let m = mm.m() as i64;
    (0..=k).try_fold(T::zero(), |acc, s| {
        Ok(acc + sign::<T>(s as i64) * mm.binom(m - s as i64, (k - s) as i64) * mm.moment(s, 0)?)
    })
}

/// `E binom(n-T, l) = sum_r (-1)^r binom(n-r, l-r) S[0][r]`.
pub fn complementary_moment_t<T: Scalar>(mm: &MomentMatrix<T>, l: usize) -> Result<T> {
    ensure(l <= mm.n(), || {
        format!("l must satisfy 0 <= l <= n = {}, got {l}", mm.n())
    })?;
    let n = mm.n() as i64;
    (0..=l).try_fold(T::zero(), |acc, r| {
        Ok(acc + sign::<T>(r as i64) * mm.binom(n - r as i64, (l - r) as i64) * mm.moment(0, r)?)
    })
}
