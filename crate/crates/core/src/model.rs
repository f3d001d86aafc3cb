//! Problem instances: the joint law of a pair of counting variables `(S, T)`,
//! finite event systems that realize such a law, and bivariate binomial
//! moment matrices.

use itertools::Itertools;

use crate::combinatorics::BinomTable;
use crate::error::{domain, ensure, Error, Result};
use crate::scalar::Scalar;

/// Exact joint law of `(S, T)` on `{0..m} x {0..n}`, stored densely row-major by `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    m: usize,
    n: usize,
    p: Vec<T>,
}

impl<T: Scalar> JointPmf<T> {
    /// Builds a pmf from `m + 1` rows of `n + 1` probabilities each.
    pub fn new(m: usize, n: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        ensure(rows.len() == m + 1, || {
            format!("expected {} rows (m = {m}), got {}", m + 1, rows.len())
        })?;
        for (u, row) in rows.iter().enumerate() {
            ensure(row.len() == n + 1, || {
                format!(
                    "row {u} has {} entries, expected {} (n = {n})",
                    row.len(),
                    n + 1
                )
            })?;
        }
        Self::from_flat(m, n, rows.into_iter().flatten().collect())
    }

    /// Builds a pmf from a flat row-major grid of length `(m + 1) * (n + 1)`.
    pub fn from_flat(m: usize, n: usize, p: Vec<T>) -> Result<Self> {
        ensure(m >= 1 && n >= 1, || {
            format!("m and n must be positive, got m={m}, n={n}")
        })?;
        ensure(p.len() == (m + 1) * (n + 1), || {
            format!("grid has {} cells, expected {}", p.len(), (m + 1) * (n + 1))
        })?;
        if let Some(idx) = p.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidDistribution(format!(
                "p[{}][{}] = {:?} is negative",
                idx / (n + 1),
                idx % (n + 1),
                p[idx]
            )));
        }
        let total = p.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.approx_eq(&T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total:?}, not 1"
            )));
        }
        Ok(Self { m, n, p })
    }

    /// The law of a deterministic pair `(S, T) = (u, v)`.
    pub fn point_mass(m: usize, n: usize, u: usize, v: usize) -> Result<Self> {
        ensure(u <= m && v <= n, || {
            format!("point ({u},{v}) outside grid {m}x{n}")
        })?;
        let mut p = vec![T::zero(); (m + 1) * (n + 1)];
        p[u * (n + 1) + v] = T::one();
        Self::from_flat(m, n, p)
    }

    /// Uniform law over the whole grid.
    pub fn uniform(m: usize, n: usize) -> Result<Self> {
        let cells = (m + 1) * (n + 1);
        let w = T::one() / T::from_int(cells as i64);
        Self::from_flat(m, n, vec![w; cells])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `P(S = u, T = v)`; zero outside the grid.
    pub fn prob(&self, u: usize, v: usize) -> T {
        if u > self.m || v > self.n {
            return T::zero();
        }
        self.p[u * (self.n + 1) + v].clone()
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&T> {
        (u <= self.m && v <= self.n).then(|| &self.p[u * (self.n + 1) + v])
    }

    /// Row-major cells as `(u, v, p)`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let width = self.n + 1;
        self.p
            .iter()
            .enumerate()
            .map(move |(idx, x)| (idx / width, idx % width, x))
    }

    /// Cells with positive probability.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.cells().filter(|(_, _, x)| !x.is_zero())
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.p.chunks(self.n + 1).map(<[T]>::to_vec).collect()
    }

    /// Law of `S`.
    pub fn marginal_s(&self) -> Vec<T> {
        self.p
            .chunks(self.n + 1)
            .map(|row| row.iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    /// Law of `T`.
    pub fn marginal_t(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.n + 1];
        for (_, v, x) in self.cells() {
            out[v] = out[v].clone() + x.clone();
        }
        out
    }
}

/// One sample point of an [`EventSystem`]: its probability and which events contain it.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<T> {
    pub weight: T,
    pub a: Vec<bool>,
    pub b: Vec<bool>,
}

impl<T> Atom<T> {
    pub fn new(weight: T, a: Vec<bool>, b: Vec<bool>) -> Self {
        Self { weight, a, b }
    }

    /// Number of `A` events containing the atom.
    pub fn a_count(&self) -> usize {
        self.a.iter().filter(|&&x| x).count()
    }

    /// Number of `B` events containing the atom.
    pub fn b_count(&self) -> usize {
        self.b.iter().filter(|&&x| x).count()
    }
}

/// Finite weighted sample space carrying events `A_1..A_m` and `B_1..B_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSystem<T> {
    m: usize,
    n: usize,
    atoms: Vec<Atom<T>>,
}

impl<T: Scalar> EventSystem<T> {
    /// Validates and normalizes a list of atoms. Zero-weight atoms are dropped.
    pub fn new(m: usize, n: usize, atoms: Vec<Atom<T>>) -> Result<Self> {
        ensure(m >= 1 && n >= 1, || {
            format!("m and n must be positive, got m={m}, n={n}")
        })?;
        ensure(m <= 64 && n <= 64, || {
            format!("at most 64 events per family, got m={m}, n={n}")
        })?;
        let mut total = T::zero();
        for (idx, atom) in atoms.iter().enumerate() {
            ensure(atom.a.len() == m && atom.b.len() == n, || {
                format!(
                    "atom {idx} has {} A-indicators and {} B-indicators, expected {m} and {n}",
                    atom.a.len(),
                    atom.b.len()
                )
            })?;
            if atom.weight.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "atom {idx} has negative weight {:?}",
                    atom.weight
                )));
            }
            total = total + atom.weight.clone();
        }
        if !total.approx_eq(&T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "atom weights sum to {total:?}, not 1"
            )));
        }
        let atoms = atoms.into_iter().filter(|a| !a.weight.is_zero()).collect();
        Ok(Self { m, n, atoms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }
}

/// Grid of bivariate binomial moments `S[i][j] = E[binom(S,i) binom(T,j)]`.
///
/// A matrix may hold only the low orders `i <= kmax`, `j <= lmax`, as when
/// the moments come from Bonferroni sums of small intersections. Orders
/// beyond `m` or `n` are identically zero and always available.
#[derive(Debug, Clone)]
pub struct MomentMatrix<T> {
    m: usize,
    n: usize,
    kmax: usize,
    lmax: usize,
    s: Vec<T>,
    binom: BinomTable<T>,
}

impl<T: Scalar> PartialEq for MomentMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        (self.m, self.n, self.kmax, self.lmax) == (other.m, other.n, other.kmax, other.lmax)
            && self.s == other.s
    }
}

impl<T: Scalar> MomentMatrix<T> {
    /// Full matrix from `m + 1` rows of `n + 1` moments each.
    pub fn new(m: usize, n: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let kmax = rows
            .len()
            .checked_sub(1)
            .ok_or_else(|| domain("moment grid has no rows"))?;
        ensure(kmax == m, || {
            format!("expected {} rows (m = {m}), got {}", m + 1, rows.len())
        })?;
        Self::truncated(m, n, n, rows)
    }

    /// Matrix holding orders up to `(rows.len() - 1, lmax)` of a pair on `{0..m} x {0..n}`.
    pub fn truncated(m: usize, n: usize, lmax: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        ensure(m >= 1 && n >= 1, || {
            format!("m and n must be positive, got m={m}, n={n}")
        })?;
        let kmax = rows
            .len()
            .checked_sub(1)
            .ok_or_else(|| domain("moment grid has no rows"))?;
        ensure(kmax <= m && lmax <= n, || {
            format!("orders ({kmax},{lmax}) exceed dimensions ({m},{n})")
        })?;
        for (i, row) in rows.iter().enumerate() {
            ensure(row.len() == lmax + 1, || {
                format!("row {i} has {} entries, expected {}", row.len(), lmax + 1)
            })?;
        }
        let mm = Self::from_parts(m, n, kmax, lmax, rows.into_iter().flatten().collect());
        mm.check_invariants()?;
        Ok(mm)
    }

    fn from_parts(m: usize, n: usize, kmax: usize, lmax: usize, s: Vec<T>) -> Self {
        Self {
            m,
            n,
            kmax,
            lmax,
            s,
            binom: BinomTable::new(m.max(n) + 1),
        }
    }

    /// `S[0][0] = 1`, entries non-negative and at most `binom(m,i) binom(n,j)`.
    pub fn check_invariants(&self) -> Result<()> {
        if !self.s[0].approx_eq(&T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "S[0][0] = {:?}, expected 1",
                self.s[0]
            )));
        }
        for i in 0..=self.kmax {
            for j in 0..=self.lmax {
                let x = &self.s[i * (self.lmax + 1) + j];
                let cap = self.binom(self.m as i64, i as i64) * self.binom(self.n as i64, j as i64);
                if x.is_negative() || !x.approx_le(&cap) {
                    return Err(Error::InvalidDistribution(format!(
                        "S[{i}][{j}] = {x:?} outside [0, binom(m,i) binom(n,j)] = [0, {cap:?}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Returns a copy with one entry replaced, without re-validating.
    ///
    /// Intended for fault injection in validation runs.
    pub fn with_entry(&self, i: usize, j: usize, value: T) -> Self {
        assert!(
            i <= self.kmax && j <= self.lmax,
            "entry ({i},{j}) not stored"
        );
        let mut out = self.clone();
        out.s[i * (self.lmax + 1) + j] = value;
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest stored order in `S`.
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Highest stored order in `T`.
    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn is_full(&self) -> bool {
        self.kmax == self.m && self.lmax == self.n
    }

    /// Stored entry, if any.
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i <= self.kmax && j <= self.lmax).then(|| &self.s[i * (self.lmax + 1) + j])
    }

    /// `S[i][j]`: zero beyond the support, an error if not stored.
    pub fn moment(&self, i: usize, j: usize) -> Result<T> {
        if i > self.m || j > self.n {
            return Ok(T::zero());
        }
        self.get(i, j).cloned().ok_or(Error::MissingMoment {
            i,
            j,
            kmax: self.kmax,
            lmax: self.lmax,
        })
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.s.chunks(self.lmax + 1).map(<[T]>::to_vec).collect()
    }

    /// Cached `binom(d, r)` for integer `d`.
    pub fn binom(&self, d: i64, r: i64) -> T {
        self.binom.get(d, r)
    }
}

/// `S[i][j] = sum_{u,v} binom(u,i) binom(v,j) p[u][v]`.
pub fn moments_from_pmf<T: Scalar>(pmf: &JointPmf<T>) -> MomentMatrix<T> {
    let (m, n) = (pmf.m(), pmf.n());
    let table = BinomTable::<T>::new(m.max(n) + 1);
    let mut s = vec![T::zero(); (m + 1) * (n + 1)];
    for (u, v, p) in pmf.support() {
        for i in 0..=u {
            let bi = table.get(u as i64, i as i64) * p.clone();
            for j in 0..=v {
                let idx = i * (n + 1) + j;
                s[idx] = s[idx].clone() + bi.clone() * table.get(v as i64, j as i64);
            }
        }
    }
    MomentMatrix {
        m,
        n,
        kmax: m,
        lmax: n,
        s,
        binom: table,
    }
}

/// Bivariate Bonferroni sums by direct enumeration of index subsets.
///
/// Entry `(k, l)` is the sum, over all `k`-subsets `I` of the `A` events and
/// `l`-subsets `J` of the `B` events, of `P(A_I and B_J)`. The counting
/// variables are never formed.
pub fn bonferroni_sums<T: Scalar>(
    es: &EventSystem<T>,
    kmax: usize,
    lmax: usize,
) -> Result<MomentMatrix<T>> {
    let (m, n) = (es.m(), es.n());
    ensure(kmax <= m, || {
        format!("kmax must satisfy 0 <= kmax <= m = {m}, got {kmax}")
    })?;
    ensure(lmax <= n, || {
        format!("lmax must satisfy 0 <= lmax <= n = {n}, got {lmax}")
    })?;
    let mask = |bits: &[bool]| {
        bits.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    };
    let atoms: Vec<(u64, u64, &T)> = es
        .atoms()
        .iter()
        .map(|a| (mask(&a.a), mask(&a.b), &a.weight))
        .collect();
    let subsets = |size: usize, k: usize| -> Vec<u64> {
        (0..size)
            .combinations(k)
            .map(|c| c.into_iter().fold(0u64, |acc, i| acc | (1 << i)))
            .collect()
    };
    let b_subsets: Vec<Vec<u64>> = (0..=lmax).map(|l| subsets(n, l)).collect();
    let mut s = Vec::with_capacity((kmax + 1) * (lmax + 1));
    for k in 0..=kmax {
        let a_subsets = subsets(m, k);
        for b_subsets_l in &b_subsets {
            let mut total = T::zero();
            for &ai in &a_subsets {
                for &bj in b_subsets_l {
                    for &(a, b, w) in &atoms {
                        if a & ai == ai && b & bj == bj {
                            total = total + w.clone();
                        }
                    }
                }
            }
            s.push(total);
        }
    }
    Ok(MomentMatrix::from_parts(m, n, kmax, lmax, s))
}

/// Joint law of the counting variables `S = #{i : A_i occurs}`, `T = #{j : B_j occurs}`.
pub fn counting_pmf<T: Scalar>(es: &EventSystem<T>) -> JointPmf<T> {
    let (m, n) = (es.m(), es.n());
    let mut p = vec![T::zero(); (m + 1) * (n + 1)];
    for atom in es.atoms() {
        let idx = atom.a_count() * (n + 1) + atom.b_count();
        p[idx] = p[idx].clone() + atom.weight.clone();
    }
    JointPmf { m, n, p }
}

/// An event system whose counting variables have law `pmf`.
///
/// One atom per support point `(u, v)`; `A_i` contains it iff `u >= i` and
/// `B_j` iff `v >= j`.
pub fn event_system_from_pmf<T: Scalar>(pmf: &JointPmf<T>) -> EventSystem<T> {
    let (m, n) = (pmf.m(), pmf.n());
    let atoms = pmf
        .support()
        .map(|(u, v, w)| {
            Atom::new(
                w.clone(),
                (1..=m).map(|i| u >= i).collect(),
                (1..=n).map(|j| v >= j).collect(),
            )
        })
        .collect();
    EventSystem { m, n, atoms }
}

/// Law of `(m - S, n - T)`.
pub fn complement_pmf<T: Scalar>(pmf: &JointPmf<T>) -> JointPmf<T> {
    let (m, n) = (pmf.m(), pmf.n());
    let mut p = Vec::with_capacity((m + 1) * (n + 1));
    for u in 0..=m {
        for v in 0..=n {
            p.push(pmf.prob(m - u, n - v));
        }
    }
    JointPmf { m, n, p }
}
