//! Bivariate binomial moments and the bounds they imply.
//!
//! Two families of events `A_1..A_m` and `B_1..B_n` give counts `S` and `T`.
//! This crate converts between the joint law of `(S, T)`, its binomial
//! moments `S[i][j] = E[binom(S,i) binom(T,j)]` and its joint tails, and
//! evaluates the classical lower/upper bounds on `P(S >= u, T >= v)` from
//! the moments.
//!
//! The numeric core is generic over [`Scalar`]; [`Rational`] gives exact
//! results and `f64` is available for quick approximate work.
//!
//! ```
//! use bimoment::{bounds, moments_from_pmf, ratio, Pmf};
//!
//! let third = ratio(1, 3);
//! let zero = ratio(0, 1);
//! let pmf = Pmf::new(2, 2, vec![
//!     vec![third.clone(), zero.clone(), zero.clone()],
//!     vec![zero.clone(), third.clone(), zero.clone()],
//!     vec![zero.clone(), zero.clone(), third.clone()],
//! ]).unwrap();
//! let mm = moments_from_pmf(&pmf);
//! let g = bounds::gumbel_upper(&mm, 2, 2).unwrap();
//! assert_eq!(g.value, ratio(2, 3));
//! ```

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod transforms;

pub use bounds::{BoundFamily, BoundValue, Direction};
pub use combinatorics::{binom, binom_int, check_identity, BinomTable, Identity, IdentityCase};
pub use error::{Error, Result};
pub use model::{
    bonferroni_sums, complement_pmf, counting_pmf, event_system_from_pmf, moments_from_pmf, Atom,
    EventSystem, JointPmf, MomentMatrix,
};
pub use scalar::{ratio, Scalar};
pub use transforms::TailTable;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Pmf = JointPmf<Rational>;
pub type Moments = MomentMatrix<Rational>;
pub type Events = EventSystem<Rational>;
pub type Tails = TailTable<Rational>;
pub type Bound = BoundValue<Rational>;

pub type PmfF64 = JointPmf<f64>;
pub type MomentsF64 = MomentMatrix<f64>;
pub type TailsF64 = TailTable<f64>;
