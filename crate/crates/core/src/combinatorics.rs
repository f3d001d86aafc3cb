//! Generalized binomial coefficients and the binomial-coefficient identities
//! the moment and bound formulas rest on.
//!
//! Conventions for `binom(d, r)`:
//!
//! * `r > 0`: the falling factorial `d (d-1) ... (d-r+1) / r!`, for any `d`;
//! * `r == 0`: `1`, for any `d`;
//! * `r < 0`: `0`.
//!
//! For a non-negative integer `d < r` the falling factorial contains a zero
//! factor, so `binom(m, r) = 0` whenever `r > m >= 0` without special casing.

use crate::error::{ensure, Result};
use crate::scalar::Scalar;

/// Generalized binomial coefficient for an arbitrary scalar upper index.
pub fn binom<T: Scalar>(d: &T, r: i64) -> T {
    if r < 0 {
        return T::zero();
    }
    let mut num = T::one();
    let mut den = T::one();
    for i in 0..r {
        num = num * (d.clone() - T::from_int(i));
        den = den * T::from_int(i + 1);
    }
    num / den
}

/// Binomial coefficient with an integer upper index.
pub fn binom_int<T: Scalar>(d: i64, r: i64) -> T {
    binom(&T::from_int(d), r)
}

/// Pascal-triangle cache of `binom(d, r)` for `0 <= d <= size`.
///
/// Lookups outside the cached triangle fall back to [`binom_int`], so the
/// table is observationally identical to calling it directly.
#[derive(Debug, Clone)]
pub struct BinomTable<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> BinomTable<T> {
    pub fn new(size: usize) -> Self {
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(size + 1);
        for d in 0..=size {
            let mut row = Vec::with_capacity(d + 1);
            row.push(T::one());
            for r in 1..d {
                let prev = &rows[d - 1];
                row.push(prev[r - 1].clone() + prev[r].clone());
            }
            if d > 0 {
                row.push(T::one());
            }
            rows.push(row);
        }
        Self { rows }
    }

    /// Largest upper index held in the table.
    pub fn size(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, d: i64, r: i64) -> T {
        if r < 0 {
            return T::zero();
        }
        if d >= 0 && (d as usize) < self.rows.len() {
            let row = &self.rows[d as usize];
            return row.get(r as usize).cloned().unwrap_or_else(T::zero);
        }
        binom_int(d, r)
    }
}

/// The five binomial-coefficient identities, with fixed ids 1 to 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `binom(d,k) = binom(d-1,k) + binom(d-1,k-1)` for real `d`, `k >= 1`.
    ExtendedPascal = 1,
    /// `sum_{x=0..k} (-1)^x binom(n,x) = (-1)^k binom(n-1,k)` for `n >= 1`, `k >= 0`.
    AlternatingSum = 2,
    /// `binom(n,k) = sum_{x=k..n} binom(x-1,k-1)` for `k >= 1`.
    HockeyStick = 3,
    /// `binom(n,k) = sum_{j=1..r-1} binom(n-j,k-1) + binom(n-r+1,k)` for `n >= k >= 1`, `r >= 1`.
    Telescoping = 4,
    /// `binom(n-T,l) = sum_{r=0..l} (-1)^r binom(n-r,l-r) binom(T,r)` for `0 <= T <= n`.
    ComplementExpansion = 5,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::ExtendedPascal,
        Identity::AlternatingSum,
        Identity::HockeyStick,
        Identity::Telescoping,
        Identity::ComplementExpansion,
    ];

    pub fn from_id(id: u8) -> Result<Self> {
        Self::ALL
            .get((id as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| crate::error::domain(format!("identity id must be in 1..=5, got {id}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Identity::ExtendedPascal => "extended_pascal",
            Identity::AlternatingSum => "alternating_sum",
            Identity::HockeyStick => "hockey_stick",
            Identity::Telescoping => "telescoping",
            Identity::ComplementExpansion => "complement_expansion",
        }
    }
}

/// One instance of an identity with concrete parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityCase<T> {
    ExtendedPascal { d: T, k: i64 },
    AlternatingSum { n: i64, k: i64 },
    HockeyStick { n: i64, k: i64 },
    Telescoping { n: i64, k: i64, r: i64 },
    ComplementExpansion { n: i64, l: i64, t: i64 },
}

impl<T: Scalar> IdentityCase<T> {
    /// Build a case from an integer parameter tuple.
    ///
    /// `ExtendedPascal` takes `[d, k]` or `[d_num, d_den, k]`; `AlternatingSum` and
    /// `HockeyStick` take `[n, k]`; `Telescoping` takes `[n, k, r]`;
    /// `ComplementExpansion` takes `[n, l, T]`.
    pub fn from_params(which: Identity, params: &[i64]) -> Result<Self> {
        let arity = |want: usize| {
            ensure(params.len() == want, || {
                format!(
                    "{} expects {want} parameters, got {}",
                    which.name(),
                    params.len()
                )
            })
        };
        Ok(match which {
            Identity::ExtendedPascal => match *params {
                [d, k] => Self::ExtendedPascal {
                    d: T::from_int(d),
                    k,
                },
                [num, den, k] => {
                    ensure(den != 0, || {
                        "extended_pascal requires a nonzero denominator for d".into()
                    })?;
                    Self::ExtendedPascal {
                        d: T::from_int(num) / T::from_int(den),
                        k,
                    }
                }
                _ => {
                    return Err(crate::error::domain(format!(
                        "extended_pascal expects [d, k] or [d_num, d_den, k], got {} parameters",
                        params.len()
                    )))
                }
            },
            Identity::AlternatingSum => {
                arity(2)?;
                Self::AlternatingSum {
                    n: params[0],
                    k: params[1],
                }
            }
            Identity::HockeyStick => {
                arity(2)?;
                Self::HockeyStick {
                    n: params[0],
                    k: params[1],
                }
            }
            Identity::Telescoping => {
                arity(3)?;
                Self::Telescoping {
                    n: params[0],
                    k: params[1],
                    r: params[2],
                }
            }
            Identity::ComplementExpansion => {
                arity(3)?;
                Self::ComplementExpansion {
                    n: params[0],
                    l: params[1],
                    t: params[2],
                }
            }
        })
    }

    pub fn identity(&self) -> Identity {
        match self {
            Self::ExtendedPascal { .. } => Identity::ExtendedPascal,
            Self::AlternatingSum { .. } => Identity::AlternatingSum,
            Self::HockeyStick { .. } => Identity::HockeyStick,
            Self::Telescoping { .. } => Identity::Telescoping,
            Self::ComplementExpansion { .. } => Identity::ComplementExpansion,
        }
    }

    /// Checks the case's parameters against the identity's stated domain.
    pub fn check_domain(&self) -> Result<()> {
        match *self {
            Self::ExtendedPascal { k, .. } => ensure(k >= 1, || {
                format!("extended_pascal requires k >= 1, got k={k}")
            }),
            Self::AlternatingSum { n, k } => {
                ensure(n >= 1, || {
                    format!("alternating_sum requires n >= 1, got n={n}")
                })?;
                ensure(k >= 0, || {
                    format!("alternating_sum requires k >= 0, got k={k}")
                })
            }
            Self::HockeyStick { n, k } => {
                ensure(k >= 1, || {
                    format!("hockey_stick requires k >= 1, got k={k}")
                })?;
                ensure(n >= 0, || {
                    format!("hockey_stick requires n >= 0, got n={n}")
                })
            }
            Self::Telescoping { n, k, r } => {
                ensure(n >= k && k >= 1, || {
                    format!("telescoping requires n >= k >= 1, got n={n}, k={k}")
                })?;
                ensure(r >= 1, || format!("telescoping requires r >= 1, got r={r}"))
            }
            Self::ComplementExpansion { n, l, t } => {
                ensure(0 <= t && t <= n, || {
                    format!("complement_expansion requires 0 <= T <= n, got T={t}, n={n}")
                })?;
                ensure(0 <= l && l <= n, || {
                    format!("complement_expansion requires 0 <= l <= n, got l={l}, n={n}")
                })
            }
        }
    }

    /// Evaluates `(lhs, rhs)` exactly as written.
    pub fn sides(&self) -> Result<(T, T)> {
        self.check_domain()?;
        let b = |d: i64, r: i64| binom_int::<T>(d, r);
        Ok(match self {
            Self::ExtendedPascal { d, k } => {
                let d1 = d.clone() - T::one();
                (binom(d, *k), binom(&d1, *k) + binom(&d1, k - 1))
            }
            &Self::AlternatingSum { n, k } => {
                let lhs = (0..=k).fold(T::zero(), |acc, x| acc + sign::<T>(x) * b(n, x));
                (lhs, sign::<T>(k) * b(n - 1, k))
            }
            &Self::HockeyStick { n, k } => {
                // The x = 0 term of the second form is dropped: under the
                // falling-factorial convention binom(-1, k-1) = (-1)^(k-1).
                let first = (k..=n).fold(T::zero(), |acc, x| acc + b(x - 1, k - 1));
                let second = (1..=n).fold(T::zero(), |acc, x| acc + b(x - 1, k - 1));
                let lhs = b(n, k);
                // Report whichever form disagrees, so equality means both hold.
                let rhs = if first.approx_eq(&lhs) { second } else { first };
                (lhs, rhs)
            }
            &Self::Telescoping { n, k, r } => {
                let sum = (1..r).fold(T::zero(), |acc, j| acc + b(n - j, k - 1));
                (b(n, k), sum + b(n - r + 1, k))
            }
            &Self::ComplementExpansion { n, l, t } => {
                let rhs = (0..=l).fold(T::zero(), |acc, r| {
                    acc + sign::<T>(r) * b(n - r, l - r) * b(t, r)
                });
                (b(n - t, l), rhs)
            }
        })
    }
}

/// Evaluates both sides of an identity instance and reports equality.
pub fn check_identity<T: Scalar>(case: &IdentityCase<T>) -> Result<bool> {
    let (lhs, rhs) = case.sides()?;
    Ok(lhs.approx_eq(&rhs))
}

/// `(-1)^e` as a scalar.
pub(crate) fn sign<T: Scalar>(e: i64) -> T {
    if e.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
