//! Finite-rank torsion-free groups presented as eventually periodic towers
//! `Z^r → Z^r → …`, with element arithmetic, divisibility, `p`-heights and
//! characteristics.
//!
//! A tower fixes integer matrices `A_0, A_1, …` (a finite prefix followed by
//! a repeating period). An element is a pair `(stage, coords)`; pushing it one
//! stage forward multiplies by the connecting matrix. Identifying stage 0 with
//! `Z^r ⊂ Q^r`, the group is the increasing union `⋃ P_s⁻¹ Z^r` where
//! `P_s = A_{s-1} ⋯ A_0`.
//!
//! # Deciding divisibility
//!
//! Let `Q` be the product of one period and `w` an element pushed past the
//! prefix. Over the `p`-adic integers `Z_p^r = N ⊕ U`, where `Q` is
//! invertible on `U` and `Q^r N ⊂ pN` (Fitting decomposition). The `p`-local
//! part of the group is `(Q_p ⊗ N) ⊕ U`, which gives:
//!
//! * `w / m` lies in the group iff `Q^{r·e} (w / m)` is integral, where
//!   `e ≥ v_p(m)` for every prime `p`. [`Tower::divisibility_depth`] is the
//!   resulting stage bound.
//! * the `p`-height of `w` is `v_p` of its `U`-component. The sequence
//!   `a_k = v_p(Q^k w)` is nondecreasing and `a_k = a_{k+r}` only once it has
//!   reached that value.
//! * the height is infinite iff the `U`-component vanishes, i.e. iff the
//!   minimal polynomial of `w` under `Q` is `x^d` modulo `p`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{IntMatrix, RatMatrix};
use crate::primes::{content, is_prime, max_prime_exponent, prime_divisors, vector_valuation};
use crate::supernatural::{types_equivalent, Exponent, Supernatural, TypeClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Section {
    Prefix,
    Period,
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Section::Prefix => "prefix",
            Section::Period => "period",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TowerDefect {
    ZeroRank,
    SizeMismatch { section: Section, index: usize, rows: usize, cols: usize },
    Singular { section: Section, index: usize },
}

impl fmt::Display for TowerDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerDefect::ZeroRank => write!(f, "rank must be at least 1"),
            TowerDefect::SizeMismatch { section, index, rows, cols } => {
                write!(f, "{section} matrix {index} is {rows}x{cols}, expected the tower rank")
            }
            TowerDefect::Singular { section, index } => write!(f, "{section} matrix {index} is singular"),
        }
    }
}

pub(crate) fn describe_defects(defects: &[TowerDefect]) -> String {
    defects.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// An eventually periodic tower of rank `r`.
///
/// The connecting map at stage `s` is `prefix[s]` while `s < prefix.len()`,
/// then `period[(s - prefix.len()) % period.len()]`. An empty period means
/// the identity from the end of the prefix on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tower {
    rank: usize,
    prefix: Vec<IntMatrix>,
    period: Vec<IntMatrix>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(rank {}, prefix {:?}, period {:?})", self.rank, self.prefix, self.period)
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ms: &[IntMatrix]| ms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "tower(rank {}; prefix [{}]; period [{}])", self.rank, list(&self.prefix), list(&self.period))
    }
}

/// Returns every defect of the tower; empty means valid.
pub fn validate_tower(t: &Tower) -> Result<(), Vec<TowerDefect>> {
    let mut defects = Vec::new();
    if t.rank == 0 {
        defects.push(TowerDefect::ZeroRank);
    }
    for (section, list) in [(Section::Prefix, &t.prefix), (Section::Period, &t.period)] {
        for (index, m) in list.iter().enumerate() {
            if m.rows() != t.rank || m.cols() != t.rank {
                defects.push(TowerDefect::SizeMismatch { section, index, rows: m.rows(), cols: m.cols() });
            } else if m.determinant().map_or(true, |d| d.is_zero()) {
                defects.push(TowerDefect::Singular { section, index });
            }
        }
    }
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

/// An element of a tower-presented group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub stage: usize,
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(stage: usize, coords: Vec<BigInt>) -> Self {
        GroupElement { stage, coords }
    }

    pub fn from_i64(stage: usize, coords: &[i64]) -> Self {
        GroupElement { stage, coords: coords.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// The `i`-th standard basis vector at stage 0.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coords = vec![BigInt::zero(); rank];
        coords[i] = BigInt::one();
        GroupElement { stage: 0, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        GroupElement { stage: self.stage, coords: self.coords.iter().map(|x| x * k).collect() }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "(stage {}, [{}])", self.stage, coords.join(", "))
    }
}

/// Divisibility by a fixed `m` of arbitrary integer vectors at a fixed stage,
/// with the stage product precomputed modulo `m`.
#[derive(Clone, Debug)]
pub struct DivisibilitySieve {
    modulus: u64,
    rank: usize,
    matrix: Vec<u64>,
}

impl DivisibilitySieve {
    /// Whether the element with these coordinates (at the sieve's stage) is
    /// divisible by the modulus.
    pub fn divides(&self, coords: &[i64]) -> bool {
        let m = self.modulus as u128;
        (0..self.rank).all(|i| {
            let acc = coords.iter().enumerate().fold(0u128, |acc, (j, &c)| {
                let c = c.rem_euclid(self.modulus as i64) as u128;
                (acc + self.matrix[i * self.rank + j] as u128 * c) % m
            });
            acc == 0
        })
    }
}

impl Tower {
    /// Validated constructor.
    pub fn new(rank: usize, prefix: Vec<IntMatrix>, period: Vec<IntMatrix>) -> Result<Tower> {
        let t = Tower { rank, prefix, period };
        validate_tower(&t).map_err(Error::InvalidTower)?;
        Ok(t)
    }

    /// Builds a tower without validating it; see [`validate_tower`].
    pub fn unchecked(rank: usize, prefix: Vec<IntMatrix>, period: Vec<IntMatrix>) -> Tower {
        Tower { rank, prefix, period }
    }

    /// `Z^rank`.
    pub fn free(rank: usize) -> Tower {
        Tower { rank, prefix: Vec::new(), period: Vec::new() }
    }

    /// The rank-one tower realising a supernatural number: one prefix stage
    /// multiplying by the finite part, then a period multiplying by the
    /// product of the primes with infinite exponent.
    pub fn from_supernatural(s: &Supernatural) -> Tower {
        let mut finite = BigInt::one();
        let mut infinite = BigInt::one();
        for (p, e) in s.iter() {
            match e {
                Exponent::Finite(k) => finite *= BigInt::from(p).pow(k as u32),
                Exponent::Infinite => infinite *= BigInt::from(p),
            }
        }
        let scalar = |x: BigInt| IntMatrix::diagonal(&[x]);
        let prefix = if finite.is_one() { vec![] } else { vec![scalar(finite)] };
        let period = if infinite.is_one() { vec![] } else { vec![scalar(infinite)] };
        Tower { rank: 1, prefix, period }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prefix(&self) -> &[IntMatrix] {
        &self.prefix
    }

    pub fn period(&self) -> &[IntMatrix] {
        &self.period
    }

    /// All distinct connecting matrices, prefix then period.
    pub fn matrices(&self) -> impl Iterator<Item = &IntMatrix> {
        self.prefix.iter().chain(self.period.iter())
    }

    /// The stage `s → s+1` map; `None` stands for the identity.
    pub fn map_at(&self, s: usize) -> Option<&IntMatrix> {
        if s < self.prefix.len() {
            Some(&self.prefix[s])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(s - self.prefix.len()) % self.period.len()])
        }
    }

    fn matrix_at(&self, s: usize) -> IntMatrix {
        self.map_at(s).cloned().unwrap_or_else(|| IntMatrix::identity(self.rank))
    }

    /// `A_{to-1} ⋯ A_from`, the map from stage `from` to stage `to`.
    pub fn stage_product(&self, from: usize, to: usize) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rank);
        for s in from..to {
            if let Some(a) = self.map_at(s) {
                acc = a * &acc;
            }
        }
        acc
    }

    pub fn apply(&self, s: usize, v: &[BigInt]) -> Vec<BigInt> {
        match self.map_at(s) {
            Some(a) => a.mul_vec(v),
            None => v.to_vec(),
        }
    }

    /// Product over one full period starting at `start` (which must be past
    /// the prefix); the identity when the period is empty.
    pub fn period_product_at(&self, start: usize) -> IntMatrix {
        self.stage_product(start, start + self.period.len())
    }

    /// The unit `x₁` at stage 0.
    pub fn unit(&self) -> GroupElement {
        GroupElement::basis(self.rank, 0)
    }

    pub fn push_to_stage(&self, e: &GroupElement, s: usize) -> Result<GroupElement> {
        if s < e.stage {
            return Err(Error::StageBackwards { from: e.stage, to: s });
        }
        let mut coords = e.coords.clone();
        for t in e.stage..s {
            coords = self.apply(t, &coords);
        }
        Ok(GroupElement { stage: s, coords })
    }

    /// Coordinates of `e` in `Q^r ⊃ Z^r = stage 0`.
    pub fn stage_zero_coords(&self, e: &GroupElement) -> Vec<BigRational> {
        let coords: Vec<BigRational> = e.coords.iter().cloned().map(BigRational::from_integer).collect();
        if e.stage == 0 {
            return coords;
        }
        let p = self.stage_product(0, e.stage).to_rational();
        let inv = crate::exactla::rational_inverse(&p).expect("valid towers have nonsingular maps");
        inv.mul_vec(&coords)
    }

    /// Equality in the limit, decided at the later of the two stages.
    pub fn elements_equal(&self, a: &GroupElement, b: &GroupElement) -> bool {
        let s = a.stage.max(b.stage);
        self.push_to_stage(a, s).ok() == self.push_to_stage(b, s).ok()
    }

    /// A stage by which an element living at `stage` that is divisible by
    /// `m` has become divisible in coordinates: past the prefix by
    /// `rank · e` periods, where `e` is the largest exponent in the
    /// factorisation of `m`.
    pub fn divisibility_depth(&self, stage: usize, m: &BigInt) -> usize {
        let start = stage.max(self.prefix.len());
        if self.period.is_empty() || m.magnitude().is_one() {
            return start;
        }
        let e = max_prime_exponent(m) as usize;
        start + self.rank * e * self.period.len()
    }

    /// Whether `e / m` lies in the group (for `m ≥ 1`).
    pub fn is_divisible(&self, e: &GroupElement, m: &BigInt) -> bool {
        assert!(m.is_positive(), "divisor must be positive");
        if m.is_one() {
            return true;
        }
        let depth = self.divisibility_depth(e.stage, m);
        let mut x: Vec<BigInt> = e.coords.iter().map(|c| c.mod_floor(m)).collect();
        for s in e.stage..=depth {
            if x.iter().all(Zero::is_zero) {
                return true;
            }
            if s < depth {
                x = self.apply(s, &x).into_iter().map(|c| c.mod_floor(m)).collect();
            }
        }
        false
    }

    /// Precomputes divisibility by `m` (`1 ≤ m < 2³²`) for elements at `stage`.
    pub fn divisibility_sieve(&self, stage: usize, m: u64) -> DivisibilitySieve {
        assert!((1..1 << 32).contains(&m), "sieve modulus out of range");
        let modulus = BigInt::from(m);
        let depth = self.divisibility_depth(stage, &modulus);
        let mut acc = IntMatrix::identity(self.rank);
        for s in stage..depth {
            if let Some(a) = self.map_at(s) {
                acc = (a * &acc).reduce_mod(&modulus);
            }
        }
        let matrix = acc.reduce_mod(&modulus).entries().iter().map(|x| x.to_u64().unwrap()).collect();
        DivisibilitySieve { modulus: m, rank: self.rank, matrix }
    }

    /// The element with stage-0 rational coordinates `v`, at the first stage
    /// where it has integral coordinates, or `None` if `v` is not in the group.
    pub fn membership(&self, v: &[BigRational]) -> Option<GroupElement> {
        assert_eq!(v.len(), self.rank, "vector length must equal the tower rank");
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let depth = self.divisibility_depth(0, &den);
        let mut x = num;
        for s in 0..=depth {
            if x.iter().all(|c| c.is_multiple_of(&den)) {
                return Some(GroupElement { stage: s, coords: x.into_iter().map(|c| c / &den).collect() });
            }
            if s < depth {
                x = self.apply(s, &x);
            }
        }
        None
    }

    /// Primes dividing the determinant of some connecting matrix.
    pub fn determinant_primes(&self) -> Result<BTreeSet<u64>> {
        let mut primes = BTreeSet::new();
        for m in self.matrices() {
            primes.extend(prime_divisors(&m.determinant()?)?);
        }
        Ok(primes)
    }

    /// The `p`-height of a nonzero element.
    pub fn height(&self, e: &GroupElement, p: u64) -> Result<Exponent> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        let start = e.stage.max(self.prefix.len());
        let w = self.push_to_stage(e, start)?.coords;
        if self.period.is_empty() {
            return Ok(Exponent::Finite(vector_valuation(&w, p).expect("nonzero vector")));
        }
        let q = self.period_product_at(start);
        if krylov_polynomial_is_nilpotent_mod(&q, &w, p) {
            return Ok(Exponent::Infinite);
        }
        let r = self.rank;
        let mut history = vec![vector_valuation(&w, p).expect("nonzero vector")];
        let mut x = w;
        loop {
            x = q.mul_vec(&x);
            history.push(vector_valuation(&x, p).expect("maps are injective"));
            let k = history.len() - 1;
            if k >= r && history[k] == history[k - r] {
                return Ok(Exponent::Finite(history[k]));
            }
        }
    }

    /// Height at every prime where it can be nonzero: primes of the
    /// connecting determinants and primes of the element's content.
    pub fn characteristic(&self, e: &GroupElement) -> Result<Supernatural> {
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut primes = self.determinant_primes()?;
        primes.extend(prime_divisors(&content(&e.coords))?);
        let mut s = Supernatural::one();
        for p in primes {
            s.set(p, self.height(e, p)?);
        }
        Ok(s)
    }

    /// Re-expresses the tower with a prefix of length `prefix_len` and a
    /// period of length `period_len` (a multiple of the current period
    /// length, or anything when the period is empty). The group is unchanged.
    pub fn aligned(&self, prefix_len: usize, period_len: usize) -> Tower {
        assert!(prefix_len >= self.prefix.len(), "cannot shorten the prefix");
        assert!(
            self.period.is_empty() || (period_len > 0 && period_len.is_multiple_of(self.period.len())),
            "period length must be a multiple of the current period"
        );
        Tower {
            rank: self.rank,
            prefix: (0..prefix_len).map(|s| self.matrix_at(s)).collect(),
            period: (prefix_len..prefix_len + period_len).map(|s| self.matrix_at(s)).collect(),
        }
    }

    fn common_shape(towers: &[&Tower]) -> (usize, usize) {
        let prefix = towers.iter().map(|t| t.prefix.len()).max().unwrap_or(0);
        let period = towers.iter().map(|t| t.period.len()).filter(|&l| l > 0).fold(0usize, |acc, l| {
            if acc == 0 {
                l
            } else {
                acc.lcm(&l)
            }
        });
        (prefix, period)
    }

    /// The towers re-expressed over a common prefix and period length.
    pub fn align_all(towers: &[&Tower]) -> Vec<Tower> {
        let (pre, per) = Self::common_shape(towers);
        towers.iter().map(|t| t.aligned(pre, per)).collect()
    }

    /// Direct sum of towers (stage-wise block diagonal).
    pub fn direct_sum(towers: &[&Tower]) -> Tower {
        assert!(!towers.is_empty(), "direct sum of no towers");
        let (pre, per) = Self::common_shape(towers);
        let aligned: Vec<Tower> = towers.iter().map(|t| t.aligned(pre, per)).collect();
        let stage = |s: usize| {
            let blocks: Vec<IntMatrix> = aligned.iter().map(|t| t.matrix_at(s)).collect();
            IntMatrix::block_diagonal(&blocks)
        };
        Tower {
            rank: towers.iter().map(|t| t.rank).sum(),
            prefix: (0..pre).map(stage).collect(),
            period: (pre..pre + per).map(stage).collect(),
        }
    }

    /// Tensor product of towers (stage-wise Kronecker product).
    pub fn tensor(&self, other: &Tower) -> Tower {
        let (pre, per) = Self::common_shape(&[self, other]);
        let (a, b) = (self.aligned(pre, per), other.aligned(pre, per));
        let stage = |s: usize| a.matrix_at(s).kronecker(&b.matrix_at(s));
        Tower {
            rank: self.rank * other.rank,
            prefix: (0..pre).map(stage).collect(),
            period: (pre..pre + per).map(stage).collect(),
        }
    }

    /// Applies `f` to every connecting matrix; `rank` is the new rank.
    pub fn map_matrices(&self, rank: usize, mut f: impl FnMut(&IntMatrix) -> IntMatrix) -> Tower {
        Tower {
            rank,
            prefix: self.prefix.iter().map(&mut f).collect(),
            period: self.period.iter().map(&mut f).collect(),
        }
    }

    /// `dim_{F_p} Γ/pΓ`: the stable rank of the period product mod `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        if self.period.is_empty() {
            return self.rank;
        }
        let q = self.period_product_at(self.prefix.len());
        let mut power = IntMatrix::identity(self.rank);
        let modulus = BigInt::from(p);
        for _ in 0..self.rank {
            power = (&q * &power).reduce_mod(&modulus);
        }
        rank_mod_p(&power, p)
    }

    /// Every connecting matrix is diagonal, so the group splits into rank-one
    /// summands along the coordinate axes.
    pub fn is_diagonal(&self) -> bool {
        self.matrices().all(IntMatrix::is_diagonal)
    }

    /// The coordinate rank-one summand `i` of a diagonal tower.
    pub fn diagonal_summand(&self, i: usize) -> Tower {
        self.map_matrices(1, |m| IntMatrix::diagonal(&[m.get(i, i).clone()]))
    }
}

fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let p = p as u128;
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<u128> = m.entries().iter().map(|x| x.mod_floor(&BigInt::from(p)).to_u128().unwrap()).collect();
    let inverse = |x: u128| -> u128 {
        // Fermat: x^(p-2) mod p
        let (mut base, mut exp, mut acc) = (x % p, p - 2, 1u128);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
        for j in 0..cols {
            a.swap(rank * cols + j, r * cols + j);
        }
        let inv = inverse(a[rank * cols + c]);
        for i in 0..rows {
            if i != rank && a[i * cols + c] != 0 {
                let f = a[i * cols + c] * inv % p;
                for j in 0..cols {
                    let sub = f * a[rank * cols + j] % p;
                    a[i * cols + j] = (a[i * cols + j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the minimal polynomial of `w` under `q` is `x^d` modulo `p`.
fn krylov_polynomial_is_nilpotent_mod(q: &IntMatrix, w: &[BigInt], p: u64) -> bool {
    let to_rat = |v: &[BigInt]| v.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>();
    let mut krylov: Vec<Vec<BigRational>> = vec![to_rat(w)];
    let mut current = w.to_vec();
    loop {
        current = q.mul_vec(&current);
        let target = to_rat(&current);
        if let Some(coeffs) = solve_in_span(&krylov, &target) {
            // μ(x) = x^d − Σ cᵢ xⁱ has integer coefficients
            let p = BigInt::from(p);
            return coeffs.iter().all(|c| {
                debug_assert!(c.is_integer(), "minimal polynomial of an integral matrix is integral");
                c.to_integer().is_multiple_of(&p)
            });
        }
        krylov.push(target);
    }
}

/// Solves `Σ cᵢ vᵢ = target` for linearly independent `vᵢ`, if possible.
fn solve_in_span(vectors: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = vectors.len();
    let mut a = RatMatrix::zeros(n, k + 1);
    for i in 0..n {
        for (j, v) in vectors.iter().enumerate() {
            a.set(i, j, v[i].clone());
        }
        a.set(i, k, target[i].clone());
    }
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..k {
        let r = (pivot_row..n).find(|&r| !a.get(r, c).is_zero())?;
        for j in 0..=k {
            let (x, y) = (a.get(pivot_row, j).clone(), a.get(r, j).clone());
            a.set(pivot_row, j, y);
            a.set(r, j, x);
        }
        let pv = a.get(pivot_row, c).clone();
        for j in 0..=k {
            let v = a.get(pivot_row, j) / &pv;
            a.set(pivot_row, j, v);
        }
        for i in 0..n {
            if i != pivot_row && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in 0..=k {
                    let v = a.get(i, j) - &f * a.get(pivot_row, j);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if (pivot_row..n).any(|i| !a.get(i, k).is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a.get(i, k).clone()).collect())
}

/// Type of a rank-one tower.
pub fn rank1_type(t: &Tower) -> Result<TypeClass> {
    if t.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, found: t.rank() });
    }
    Ok(TypeClass::new(t.characteristic(&t.unit())?))
}

/// Rank-one groups are isomorphic iff their nonzero elements share a type.
pub fn rank1_isomorphic(a: &Tower, b: &Tower) -> Result<bool> {
    let (ta, tb) = (rank1_type(a)?, rank1_type(b)?);
    Ok(types_equivalent(ta.representative(), tb.representative()))
}
