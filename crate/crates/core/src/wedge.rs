//! Exterior powers of towers, and `K₁`/`K₀` of group C*-algebras as the odd
//! and even parts of the exterior algebra of the torsion-free quotient.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::desc::{normalize_types, AbGroupDesc, FreePartDesc};
use crate::error::{Error, Result};
use crate::exactla::{binomial, compound_matrix, IntMatrix};
use crate::fgab::Multiplicity;
use crate::supernatural::{Exponent, Supernatural, TypeClass};
use crate::tower::{rank1_type, GroupElement, Tower};

/// Structural description of a `K`-group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KGroupDesc {
    FreeOfRank(usize),
    CompletelyDecomposable(Vec<(TypeClass, Multiplicity)>),
    TowerForm(Tower),
    DirectSum(Vec<KGroupDesc>),
}

impl KGroupDesc {
    pub fn rank(&self) -> Multiplicity {
        match self {
            KGroupDesc::FreeOfRank(n) => Multiplicity::Finite(*n),
            KGroupDesc::CompletelyDecomposable(items) => {
                items.iter().fold(Multiplicity::Finite(0), |acc, (_, m)| acc + *m)
            }
            KGroupDesc::TowerForm(t) => Multiplicity::Finite(t.rank()),
            KGroupDesc::DirectSum(parts) => parts.iter().fold(Multiplicity::Finite(0), |acc, p| acc + p.rank()),
        }
    }
}

impl fmt::Display for KGroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KGroupDesc::FreeOfRank(n) => write!(f, "free rank {n}"),
            KGroupDesc::CompletelyDecomposable(items) => {
                let parts: Vec<String> = items.iter().map(|(t, m)| format!("{t} x{m}")).collect();
                write!(f, "cd[{}]", parts.join(", "))
            }
            KGroupDesc::TowerForm(t) => write!(f, "{t}"),
            KGroupDesc::DirectSum(parts) => {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "sum[{}]", parts.join(", "))
            }
        }
    }
}

/// `∧^k` of a tower: stage-wise compound matrices.
pub fn wedge_power_tower(t: &Tower, k: usize) -> Result<Tower> {
    if k > t.rank() {
        return Err(Error::OrderOutOfRange { k, rows: t.rank(), cols: t.rank() });
    }
    Ok(t.map_matrices(binomial(t.rank(), k), |m| compound_matrix(m, k).expect("k checked against the rank")))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn of(k: usize) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// `K₁(C*(Γ)) ≅ ∧_odd(Γ/tΓ)`. Free parts of rank at most 2 come back
/// unchanged.
pub fn k1(desc: &AbGroupDesc) -> Result<KGroupDesc> {
    if let Multiplicity::Finite(r) = desc.free_part.rank() {
        if r <= 2 {
            return Ok(structural(&desc.free_part));
        }
    }
    exterior_part(&desc.free_part, Parity::Odd)
}

/// `K₀(C*(Γ)) ≅ ∧_even(Γ/tΓ)`, including `∧⁰ = Z`.
pub fn k0(desc: &AbGroupDesc) -> Result<KGroupDesc> {
    exterior_part(&desc.free_part, Parity::Even)
}

fn structural(f: &FreePartDesc) -> KGroupDesc {
    match f {
        FreePartDesc::FreeOfRank(n) => KGroupDesc::FreeOfRank(*n),
        FreePartDesc::Rank1(t) | FreePartDesc::TowerForm(t) => KGroupDesc::TowerForm(t.clone()),
        FreePartDesc::CompletelyDecomposable(items) => KGroupDesc::CompletelyDecomposable(items.clone()),
        FreePartDesc::DirectSum(parts) => KGroupDesc::DirectSum(parts.iter().map(structural).collect()),
        FreePartDesc::OmegaCopies(_) => unreachable!("omega copies have infinite rank"),
    }
}

/// Splits a free part into rank-one summands (by type) and towers of rank
/// at least 2.
fn flatten(f: &FreePartDesc, types: &mut Vec<(TypeClass, Multiplicity)>, towers: &mut Vec<Tower>) -> Result<()> {
    match f {
        FreePartDesc::FreeOfRank(n) => types.push((TypeClass::zero(), Multiplicity::Finite(*n))),
        FreePartDesc::CompletelyDecomposable(items) => types.extend(items.iter().cloned()),
        FreePartDesc::Rank1(t) | FreePartDesc::TowerForm(t) if t.rank() == 1 => {
            types.push((rank1_type(t)?, Multiplicity::Finite(1)))
        }
        FreePartDesc::Rank1(t) | FreePartDesc::TowerForm(t) => towers.push(t.clone()),
        FreePartDesc::OmegaCopies(t) if t.rank() == 1 => types.push((rank1_type(t)?, Multiplicity::Omega)),
        FreePartDesc::OmegaCopies(t) => {
            return Err(Error::Unsupported(format!("exterior powers of omega copies of a rank {} tower", t.rank())))
        }
        FreePartDesc::DirectSum(parts) => {
            for p in parts {
                flatten(p, types, towers)?;
            }
        }
    }
    Ok(())
}

fn union_key(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn type_from_key(key: &[u64]) -> TypeClass {
    TypeClass::new(Supernatural::from_pairs(key.iter().map(|&p| (p, Exponent::Infinite))))
}

/// Number of nonempty subsets of an `n`-set of each parity size.
fn parity_counts(n: Multiplicity) -> Result<(Multiplicity, Multiplicity)> {
    match n {
        Multiplicity::Omega => Ok((Multiplicity::Omega, Multiplicity::Omega)),
        Multiplicity::Finite(0) => Ok((Multiplicity::Finite(0), Multiplicity::Finite(0))),
        Multiplicity::Finite(n) => {
            let half = 1usize
                .checked_shl(n as u32 - 1)
                .filter(|_| n < usize::BITS as usize)
                .ok_or_else(|| Error::Unsupported(format!("exterior algebra of a rank {n} summand")))?;
            Ok((Multiplicity::Finite(half), Multiplicity::Finite(half - 1)))
        }
    }
}

fn exterior_part(f: &FreePartDesc, parity: Parity) -> Result<KGroupDesc> {
    let mut types = Vec::new();
    let mut towers = Vec::new();
    flatten(f, &mut types, &mut towers)?;
    let types = normalize_types(types);
    if towers.is_empty() {
        return types_only(&types, parity);
    }
    if types.iter().any(|(_, m)| *m == Multiplicity::Omega) {
        return Err(Error::Unsupported("omega rank-one summands next to towers".into()));
    }
    mixed(&types, &towers, parity)
}

/// `∧_even` or `∧_odd` of a completely decomposable group: every choice of
/// a sub-multiset of summands contributes the type of its union.
fn types_only(types: &[(TypeClass, Multiplicity)], parity: Parity) -> Result<KGroupDesc> {
    let mut states: BTreeMap<(Parity, Vec<u64>), Multiplicity> = BTreeMap::new();
    states.insert((Parity::Even, Vec::new()), Multiplicity::Finite(1));
    for (t, n) in types {
        let (odd, even) = parity_counts(*n)?;
        let key = t.key();
        let mut next: BTreeMap<(Parity, Vec<u64>), Multiplicity> = BTreeMap::new();
        for ((par, k), count) in &states {
            let mut add = |state: (Parity, Vec<u64>), weight: Multiplicity| {
                let w = count.scale(weight);
                if !w.is_zero() {
                    let slot = next.entry(state).or_insert(Multiplicity::Finite(0));
                    *slot = *slot + w;
                }
            };
            add((*par, k.clone()), Multiplicity::Finite(1));
            add((par.flip(), union_key(k, &key)), odd);
            add((*par, union_key(k, &key)), even);
        }
        states = next;
    }
    let items = states.into_iter().filter(|((p, _), _)| *p == parity).map(|((_, k), m)| (type_from_key(&k), m));
    Ok(cd_or_free(normalize_types(items)))
}

fn cd_or_free(items: Vec<(TypeClass, Multiplicity)>) -> KGroupDesc {
    match items.as_slice() {
        [] => KGroupDesc::FreeOfRank(0),
        [(t, Multiplicity::Finite(n))] if t.is_zero() => KGroupDesc::FreeOfRank(*n),
        _ => KGroupDesc::CompletelyDecomposable(items),
    }
}

/// `∧^k` of a direct sum is the sum over `k = Σ kᵢ` of `⊗ ∧^{kᵢ}` of the
/// summands.
fn mixed(types: &[(TypeClass, Multiplicity)], towers: &[Tower], parity: Parity) -> Result<KGroupDesc> {
    // rank-one part, by degree: degree -> type key -> count
    let mut by_degree: Vec<BTreeMap<Vec<u64>, usize>> = vec![BTreeMap::from([(Vec::new(), 1)])];
    for (t, n) in types {
        let Multiplicity::Finite(n) = *n else { unreachable!("checked by the caller") };
        let key = t.key();
        let mut next = vec![BTreeMap::new(); by_degree.len() + n];
        for (deg, entries) in by_degree.iter().enumerate() {
            for (k, count) in entries {
                for j in 0..=n {
                    let k2 = if j == 0 { k.clone() } else { union_key(k, &key) };
                    *next[deg + j].entry(k2).or_insert(0) += count * binomial(n, j);
                }
            }
        }
        by_degree = next;
    }

    let mut rank_one: Vec<(TypeClass, Multiplicity)> = Vec::new();
    let mut tower_parts: Vec<Tower> = Vec::new();
    let mut choice = vec![0usize; towers.len()];
    loop {
        let tower_degree: usize = choice.iter().sum();
        let picked: Vec<Tower> = towers
            .iter()
            .zip(&choice)
            .filter(|(_, &k)| k > 0)
            .map(|(t, &k)| wedge_power_tower(t, k))
            .collect::<Result<_>>()?;
        let product = picked.split_first().map(|(first, rest)| rest.iter().fold(first.clone(), |acc, t| acc.tensor(t)));
        for (deg, entries) in by_degree.iter().enumerate() {
            if Parity::of(deg + tower_degree) != parity {
                continue;
            }
            for (key, &count) in entries {
                match &product {
                    None => rank_one.push((type_from_key(key), Multiplicity::Finite(count))),
                    Some(w) if w.rank() == 1 => {
                        rank_one.push((rank1_type(w)?.tensor(&type_from_key(key)), Multiplicity::Finite(count)))
                    }
                    Some(w) => {
                        let part = if key.is_empty() {
                            w.clone()
                        } else {
                            w.tensor(&Tower::from_supernatural(&type_from_key(key).canonical()))
                        };
                        tower_parts.extend(std::iter::repeat_n(part, count));
                    }
                }
            }
        }
        // next choice of exterior degrees for the towers
        let Some(i) = (0..towers.len()).find(|&i| choice[i] < towers[i].rank()) else { break };
        choice[i] += 1;
        for c in &mut choice[..i] {
            *c = 0;
        }
    }

    let mut parts = Vec::new();
    let free = cd_or_free(normalize_types(rank_one));
    if free != KGroupDesc::FreeOfRank(0) {
        parts.push(free);
    }
    parts.extend(tower_parts.into_iter().map(KGroupDesc::TowerForm));
    Ok(match parts.len() {
        0 => KGroupDesc::FreeOfRank(0),
        1 => parts.pop().unwrap(),
        _ => KGroupDesc::DirectSum(parts),
    })
}

/// Type of `Γ ∧ Γ` for a rank-2 tower.
pub fn wedge2_type_rank2(t: &Tower) -> Result<TypeClass> {
    if t.rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: t.rank() });
    }
    rank1_type(&wedge_power_tower(t, 2)?)
}

/// Whether `x₁ ∧ x₂` is divisible by `m` in `∧²Γ`, with `x₁, x₂` the stage-0
/// basis.
pub fn wedge2_divisible(t: &Tower, m: u64) -> Result<bool> {
    if t.rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: t.rank() });
    }
    let w = wedge_power_tower(t, 2)?;
    Ok(w.is_divisible(&w.unit(), &BigInt::from(m)))
}

/// Searches `(k₁, k₂) ∈ [0, m)²` with `k₁` or `k₂` coprime to `m` for an
/// element `k₁x₁ + k₂x₂` divisible by `m`.
///
/// A hit implies [`wedge2_divisible`]. The converse holds for prime `m`
/// only: with a single stage map `2·I`, `x₁ ∧ x₂` is divisible by 4 while no
/// element with an odd coefficient is.
pub fn lemma_det_oracle(t: &Tower, m: u64) -> Result<bool> {
    search_multiples(t, m, |k1, k2| k1.gcd(&m) == 1 || k2.gcd(&m) == 1)
}

/// As [`lemma_det_oracle`], but only asking `gcd(k₁, k₂, m) = 1`. For `m` a
/// prime power the two searches agree; for squarefree `m` this one is
/// equivalent to [`wedge2_divisible`].
pub fn primitive_multiple_oracle(t: &Tower, m: u64) -> Result<bool> {
    search_multiples(t, m, |k1, k2| k1.gcd(&k2).gcd(&m) == 1)
}

fn search_multiples(t: &Tower, m: u64, admissible: impl Fn(u64, u64) -> bool) -> Result<bool> {
    if t.rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: t.rank() });
    }
    assert!(m >= 2, "modulus must be at least 2");
    let sieve = t.divisibility_sieve(0, m);
    for k1 in 0..m {
        for k2 in 0..m {
            if admissible(k1, k2) && sieve.divides(&[k1 as i64, k2 as i64]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The `∧³` block law for `Z² ⊕ Γ`: the compound of `id₂ ⊕ A` in the
/// lexicographic basis of `(e₁, e₂, f₁, f₂)` is `diag(A, det A, det A)`.
pub fn third_compound_block_law(a: &IntMatrix) -> Result<bool> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 matrix, got {}x{}", a.rows(), a.cols())));
    }
    let det = a.determinant()?;
    let sum = IntMatrix::block_diagonal(&[IntMatrix::identity(2), a.clone()]);
    let expected = IntMatrix::block_diagonal(&[a.clone(), IntMatrix::diagonal(&[det.clone(), det])]);
    Ok(compound_matrix(&sum, 3)? == expected)
}

/// `∧¹ ⊕ ∧³` of `id₂ ⊕ A`, the odd exterior map of `Z² ⊕ Γ` at one stage.
pub fn odd_compound(a: &IntMatrix) -> Result<IntMatrix> {
    let sum = IntMatrix::block_diagonal(&[IntMatrix::identity(2), a.clone()]);
    Ok(IntMatrix::block_diagonal(&[compound_matrix(&sum, 1)?, compound_matrix(&sum, 3)?]))
}

/// The unit `x₁ ∧ x₂` of `∧²` of a rank-2 tower.
pub fn wedge_unit(t: &Tower) -> GroupElement {
    GroupElement::basis(binomial(t.rank(), 2), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::TorsionDesc;

    fn tower2(period: &[[[i64; 2]; 2]]) -> Tower {
        Tower::new(2, vec![], period.iter().map(|m| IntMatrix::from_rows(m)).collect()).unwrap()
    }

    #[test]
    fn wedge_power_examples() {
        let t = tower2(&[[[1, 2], [3, 4]], [[2, 1], [1, 1]]]);
        assert_eq!(wedge_power_tower(&t, 1).unwrap(), t);
        let top = wedge_power_tower(&t, 2).unwrap();
        assert_eq!(top.rank(), 1);
        assert_eq!(top.period()[0], IntMatrix::from_rows(&[[-2]]));
        assert_eq!(top.period()[1], IntMatrix::from_rows(&[[1]]));
        assert!(wedge_power_tower(&t, 3).is_err());
    }

    #[test]
    fn k_groups_of_free_groups() {
        for m in 1..=6 {
            let expect = KGroupDesc::FreeOfRank(1 << (m - 1));
            assert_eq!(k1(&AbGroupDesc::free(m)).unwrap(), expect);
            assert_eq!(k0(&AbGroupDesc::free(m)).unwrap(), expect);
        }
        assert_eq!(k0(&AbGroupDesc::free(0)).unwrap(), KGroupDesc::FreeOfRank(1));
        assert_eq!(k1(&AbGroupDesc::free(0)).unwrap(), KGroupDesc::FreeOfRank(0));
    }

    #[test]
    fn torsion_is_discarded() {
        let g = AbGroupDesc::new(TorsionDesc::CountablyInfinite, FreePartDesc::FreeOfRank(1));
        assert_eq!(k1(&g).unwrap(), KGroupDesc::FreeOfRank(1));
    }

    #[test]
    fn small_rank_is_returned_unchanged() {
        let t = tower2(&[[[3, -10], [2, 3]]]);
        let g = AbGroupDesc::torsion_free(FreePartDesc::TowerForm(t.clone()));
        assert_eq!(k1(&g).unwrap(), KGroupDesc::TowerForm(t));
    }

    #[test]
    fn k0_of_z2_plus_rank_two_tower() {
        // ∧⁰ ⊕ ∧² ⊕ ∧⁴ of Z² ⊕ Γ: Z, then Z ⊕ Γ ⊕ Γ ⊕ ∧²Γ, then ∧²Γ
        let t = tower2(&[[[2, 1], [1, 3]]]);
        let delta = FreePartDesc::DirectSum(vec![FreePartDesc::FreeOfRank(2), FreePartDesc::TowerForm(t.clone())]);
        let k = k0(&AbGroupDesc::torsion_free(delta)).unwrap();
        let wedge_type = wedge2_type_rank2(&t).unwrap();
        let expect = KGroupDesc::DirectSum(vec![
            KGroupDesc::CompletelyDecomposable(vec![
                (TypeClass::zero(), Multiplicity::Finite(2)),
                (wedge_type, Multiplicity::Finite(2)),
            ]),
            KGroupDesc::TowerForm(t.clone()),
            KGroupDesc::TowerForm(t),
        ]);
        assert_eq!(k, expect);
        assert_eq!(k.rank(), Multiplicity::Finite(8));
    }

    #[test]
    fn omega_free_groups() {
        let g = AbGroupDesc::torsion_free(FreePartDesc::cd([(TypeClass::zero(), Multiplicity::Omega)]));
        let expect = KGroupDesc::CompletelyDecomposable(vec![(TypeClass::zero(), Multiplicity::Omega)]);
        assert_eq!(k1(&g).unwrap(), expect);
        assert_eq!(k0(&g).unwrap(), expect);
    }

    #[test]
    fn wedge2_types() {
        assert!(wedge2_type_rank2(&Tower::free(2)).unwrap().is_zero());
        let t = tower2(&[[[2, 0], [0, 1]]]);
        assert_eq!(wedge2_type_rank2(&t).unwrap().key(), vec![2]);
        assert!(wedge2_type_rank2(&Tower::free(3)).is_err());
    }

    #[test]
    fn coprime_search_examples() {
        let t = tower2(&[[[2, 0], [0, 1]]]);
        assert!(lemma_det_oracle(&t, 4).unwrap());
        assert!(!lemma_det_oracle(&t, 3).unwrap());
        assert!(!wedge2_divisible(&t, 3).unwrap());
    }

    #[test]
    fn coprimality_fails_for_two_primes() {
        // Z[1/2] ⊕ Z[1/3]: x₁ ∧ x₂ is divisible by 6 but every element
        // divisible by 6 has k₁ ≡ 0 (mod 3) and k₂ ≡ 0 (mod 2)
        let t = tower2(&[[[2, 0], [0, 3]]]);
        assert!(wedge2_divisible(&t, 6).unwrap());
        assert!(!lemma_det_oracle(&t, 6).unwrap());
        assert!(primitive_multiple_oracle(&t, 6).unwrap());
    }

    #[test]
    fn searches_miss_square_divisors() {
        let t = Tower::new(2, vec![IntMatrix::from_rows(&[[2, 0], [0, 2]])], vec![]).unwrap();
        assert!(wedge2_divisible(&t, 4).unwrap());
        assert!(!lemma_det_oracle(&t, 4).unwrap());
        assert!(!primitive_multiple_oracle(&t, 4).unwrap());
        assert!(lemma_det_oracle(&t, 2).unwrap());
    }

    #[test]
    fn block_law() {
        let a = IntMatrix::from_rows(&[[3, -10], [2, 3]]);
        assert!(third_compound_block_law(&a).unwrap());
        let det = IntMatrix::diagonal(&[BigInt::from(29), BigInt::from(29)]);
        let expect = IntMatrix::block_diagonal(&[IntMatrix::identity(2), a.clone(), a.clone(), det]);
        assert_eq!(odd_compound(&a).unwrap(), expect);
    }
}
