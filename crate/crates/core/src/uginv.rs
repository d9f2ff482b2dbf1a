//! The unitary-group invariant `(α, ⊕_α Γ/tΓ)` and three-valued comparison
//! of unitary groups and `K₁`-groups.
//!
//! Comparison summarises a free part as a multiset of rank-one types plus a
//! multiset of towers. Completely decomposable inputs are decided exactly.
//! Otherwise identical towers and witnessed isomorphisms `Xⁿ ≅ Yⁿ` are
//! cancelled; if what remains is completely decomposable and equal the
//! groups are isomorphic. Failing that, the free rank, `p`-ranks and the type
//! of the top exterior power may separate them; if nothing does, the verdict
//! is `Unknown`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

pub use crate::desc::{AbGroupDesc, FreePartDesc};
use crate::error::{Error, Result};
use crate::exactla::{rational_inverse, IntMatrix, RatMatrix};
use crate::fgab::{torsion_cardinal, Cardinal, Multiplicity};
use crate::supernatural::TypeClass;
use crate::tower::{rank1_type, Tower};
use crate::wedge::{k1, wedge_power_tower, KGroupDesc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryInvariant {
    pub alpha: Cardinal,
    pub amplified: FreePartDesc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonResult {
    Isomorphic(String),
    NotIsomorphic(String),
    Unknown(String),
}

impl ComparisonResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            ComparisonResult::Isomorphic(_) => "Isomorphic",
            ComparisonResult::NotIsomorphic(_) => "NotIsomorphic",
            ComparisonResult::Unknown(_) => "Unknown",
        }
    }

    pub fn evidence(&self) -> &str {
        match self {
            ComparisonResult::Isomorphic(s) | ComparisonResult::NotIsomorphic(s) | ComparisonResult::Unknown(s) => s,
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, ComparisonResult::Isomorphic(_))
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, ComparisonResult::NotIsomorphic(_))
    }
}

impl fmt::Display for ComparisonResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.verdict(), self.evidence())
    }
}

/// A claimed isomorphism `srcⁿ → dstⁿ`, given by its matrix on stage-0
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub copies: usize,
    pub map: RatMatrix,
    pub src: FreePartDesc,
    pub dst: FreePartDesc,
}

/// `⊕_α f`.
pub fn amplify(f: &FreePartDesc, alpha: &Cardinal) -> FreePartDesc {
    match alpha {
        Cardinal::Fin(n) if n.is_one() => f.clone(),
        Cardinal::Fin(n) => {
            let n: usize = n.try_into().expect("finite torsion of addressable order");
            amplify_finite(f, n)
        }
        Cardinal::Omega => amplify_omega(f),
    }
}

fn amplify_finite(f: &FreePartDesc, n: usize) -> FreePartDesc {
    match f {
        FreePartDesc::FreeOfRank(r) => FreePartDesc::FreeOfRank(n * r),
        FreePartDesc::CompletelyDecomposable(items) => {
            FreePartDesc::cd(items.iter().map(|(t, m)| (t.clone(), m.scale(Multiplicity::Finite(n)))))
        }
        FreePartDesc::Rank1(_) | FreePartDesc::TowerForm(_) => FreePartDesc::DirectSum(vec![f.clone(); n]),
        FreePartDesc::DirectSum(parts) => FreePartDesc::DirectSum(parts.iter().map(|p| amplify_finite(p, n)).collect()),
        FreePartDesc::OmegaCopies(_) => f.clone(),
    }
}

fn amplify_omega(f: &FreePartDesc) -> FreePartDesc {
    match f {
        FreePartDesc::FreeOfRank(0) => FreePartDesc::FreeOfRank(0),
        FreePartDesc::FreeOfRank(_) => FreePartDesc::cd([(TypeClass::zero(), Multiplicity::Omega)]),
        FreePartDesc::CompletelyDecomposable(items) => {
            FreePartDesc::cd(items.iter().map(|(t, _)| (t.clone(), Multiplicity::Omega)))
        }
        FreePartDesc::Rank1(t) => match rank1_type(t) {
            Ok(ty) => FreePartDesc::cd([(ty, Multiplicity::Omega)]),
            Err(_) => FreePartDesc::OmegaCopies(t.clone()),
        },
        FreePartDesc::TowerForm(t) | FreePartDesc::OmegaCopies(t) => FreePartDesc::OmegaCopies(t.clone()),
        FreePartDesc::DirectSum(parts) => FreePartDesc::DirectSum(parts.iter().map(amplify_omega).collect()),
    }
}

pub fn unitary_invariant(d: &AbGroupDesc) -> UnitaryInvariant {
    let alpha = torsion_cardinal(&d.torsion);
    let amplified = amplify(&d.free_part, &alpha);
    UnitaryInvariant { alpha, amplified }
}

/// Compares `U(C*(Γ₁))` and `U(C*(Γ₂))` through the torsion cardinal and
/// `⊕_α Γᵢ/tΓᵢ`.
pub fn compare_unitary(d1: &AbGroupDesc, d2: &AbGroupDesc, witnesses: &[Witness]) -> ComparisonResult {
    let (u1, u2) = (unitary_invariant(d1), unitary_invariant(d2));
    if u1.alpha != u2.alpha {
        return ComparisonResult::NotIsomorphic(format!("torsion cardinal {} vs {}", u1.alpha, u2.alpha));
    }
    compare_free_parts(&u1.amplified, &u2.amplified, witnesses)
}

/// Compares `K₁(C*(Γ₁))` and `K₁(C*(Γ₂))`.
pub fn compare_k1(d1: &AbGroupDesc, d2: &AbGroupDesc, witnesses: &[Witness]) -> ComparisonResult {
    match (k1(d1), k1(d2)) {
        (Ok(a), Ok(b)) => compare_free_parts(&k_as_free_part(&a), &k_as_free_part(&b), witnesses),
        (Err(e), _) | (_, Err(e)) => ComparisonResult::Unknown(format!("K1 not computable: {e}")),
    }
}

/// A `K`-group description read as a torsion-free group.
pub fn k_as_free_part(k: &KGroupDesc) -> FreePartDesc {
    match k {
        KGroupDesc::FreeOfRank(n) => FreePartDesc::FreeOfRank(*n),
        KGroupDesc::CompletelyDecomposable(items) => FreePartDesc::CompletelyDecomposable(items.clone()),
        KGroupDesc::TowerForm(t) => FreePartDesc::TowerForm(t.clone()),
        KGroupDesc::DirectSum(parts) => FreePartDesc::DirectSum(parts.iter().map(k_as_free_part).collect()),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Summary {
    types: BTreeMap<TypeClass, Multiplicity>,
    towers: Vec<(Tower, Multiplicity)>,
}

impl Summary {
    fn of(f: &FreePartDesc) -> Result<Summary> {
        let mut s = Summary::default();
        s.add(f, Multiplicity::Finite(1))?;
        Ok(s)
    }

    fn add_type(&mut self, t: TypeClass, m: Multiplicity) {
        if m.is_zero() {
            return;
        }
        let slot = self.types.entry(t).or_insert(Multiplicity::Finite(0));
        *slot = *slot + m;
    }

    fn add_tower(&mut self, t: &Tower, m: Multiplicity) -> Result<()> {
        if t.rank() == 1 {
            self.add_type(rank1_type(t)?, m);
        } else if t.is_diagonal() {
            for i in 0..t.rank() {
                self.add_type(rank1_type(&t.diagonal_summand(i))?, m);
            }
        } else if let Some(slot) = self.towers.iter_mut().find(|(u, _)| u == t) {
            slot.1 = slot.1 + m;
        } else {
            self.towers.push((t.clone(), m));
        }
        Ok(())
    }

    fn add(&mut self, f: &FreePartDesc, m: Multiplicity) -> Result<()> {
        match f {
            FreePartDesc::FreeOfRank(n) => self.add_type(TypeClass::zero(), m.scale(Multiplicity::Finite(*n))),
            FreePartDesc::CompletelyDecomposable(items) => {
                for (t, k) in items {
                    self.add_type(t.clone(), m.scale(*k));
                }
            }
            FreePartDesc::Rank1(t) | FreePartDesc::TowerForm(t) => self.add_tower(t, m)?,
            FreePartDesc::OmegaCopies(t) => self.add_tower(t, Multiplicity::Omega.scale(m))?,
            FreePartDesc::DirectSum(parts) => {
                for p in parts {
                    self.add(p, m)?;
                }
            }
        }
        Ok(())
    }

    fn types_text(&self) -> String {
        let parts: Vec<String> = self.types.iter().map(|(t, m)| format!("{t} x{m}")).collect();
        format!("[{}]", parts.join(", "))
    }

    fn single_tower(&self) -> Option<&Tower> {
        match (self.types.is_empty(), self.towers.as_slice()) {
            (true, [(t, Multiplicity::Finite(1))]) => Some(t),
            _ => None,
        }
    }

    fn take_tower(&mut self, t: &Tower, n: usize) -> bool {
        let Some(pos) = self.towers.iter().position(|(u, _)| u == t) else { return false };
        match self.towers[pos].1 {
            Multiplicity::Finite(k) if k >= n => {
                if k == n {
                    self.towers.remove(pos);
                } else {
                    self.towers[pos].1 = Multiplicity::Finite(k - n);
                }
                true
            }
            _ => false,
        }
    }

    fn p_rank(&self, p: u64) -> Multiplicity {
        let from_types = self
            .types
            .iter()
            .filter(|(t, _)| !t.key().contains(&p))
            .fold(Multiplicity::Finite(0), |acc, (_, m)| acc + *m);
        self.towers.iter().fold(from_types, |acc, (t, m)| acc + m.scale(Multiplicity::Finite(t.p_rank(p))))
    }

    /// Key of the type of the top exterior power (finite rank only).
    fn top_type_key(&self) -> Result<Vec<u64>> {
        let mut key: BTreeSet<u64> = self.types.keys().flat_map(|t| t.key()).collect();
        for (t, _) in &self.towers {
            key.extend(rank1_type(&wedge_power_tower(t, t.rank())?)?.key());
        }
        Ok(key.into_iter().collect())
    }

    fn relevant_primes(&self) -> Result<BTreeSet<u64>> {
        let mut primes: BTreeSet<u64> = self.types.keys().flat_map(|t| t.key()).collect();
        for (t, _) in &self.towers {
            primes.extend(t.determinant_primes()?);
        }
        Ok(primes)
    }
}

fn key_text(key: &[u64]) -> String {
    let parts: Vec<String> = key.iter().map(|p| format!("{p}^inf")).collect();
    if parts.is_empty() {
        "type(Z)".into()
    } else {
        format!("type({})", parts.join("·"))
    }
}

/// The comparison engine shared by [`compare_unitary`] and [`compare_k1`].
pub fn compare_free_parts(a: &FreePartDesc, b: &FreePartDesc, witnesses: &[Witness]) -> ComparisonResult {
    let (rank_a, rank_b) = (a.rank(), b.rank());
    if rank_a != rank_b {
        return ComparisonResult::NotIsomorphic(format!("free rank {rank_a} vs {rank_b}"));
    }
    let (sa, sb) = match (Summary::of(a), Summary::of(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return ComparisonResult::Unknown(format!("cannot summarise the groups: {e}")),
    };
    if sa.towers.is_empty() && sb.towers.is_empty() {
        return if sa.types == sb.types {
            ComparisonResult::Isomorphic(format!(
                "completely decomposable with equal type multiplicities {}",
                sa.types_text()
            ))
        } else {
            ComparisonResult::NotIsomorphic(format!("type multiplicities {} vs {}", sa.types_text(), sb.types_text()))
        };
    }

    let (mut ra, mut rb) = (sa.clone(), sb.clone());
    let mut notes = Vec::new();
    let cancelled: Vec<(Tower, Multiplicity)> =
        ra.towers.iter().filter(|(t, m)| rb.towers.contains(&(t.clone(), *m))).cloned().collect();
    for (t, m) in &cancelled {
        ra.towers.retain(|(u, _)| u != t);
        rb.towers.retain(|(u, _)| u != t);
        notes.push(format!("identical summand {t} x{m}"));
    }
    for (i, w) in witnesses.iter().enumerate() {
        if !matches!(check_witness(w), Ok(true)) {
            continue;
        }
        let (Ok(src), Ok(dst)) = (Summary::of(&w.src), Summary::of(&w.dst)) else { continue };
        let (Some(src), Some(dst)) = (src.single_tower(), dst.single_tower()) else { continue };
        for (x, y) in [(src, dst), (dst, src)] {
            while apply_witness(&mut ra, &mut rb, x, y, w.copies) {
                notes.push(format!("witness {} ({} copies)", i + 1, w.copies));
            }
        }
    }
    if ra.towers.is_empty() && rb.towers.is_empty() && ra.types == rb.types {
        notes.push(format!("remaining type multiplicities {}", ra.types_text()));
        return ComparisonResult::Isomorphic(notes.join("; "));
    }

    match separating_invariant(&sa, &sb) {
        Ok(Some(reason)) => ComparisonResult::NotIsomorphic(reason),
        Ok(None) => ComparisonResult::Unknown(
            "outside the decidable class (completely decomposable or witnessed); free rank, p-ranks and top \
             exterior type agree"
                .into(),
        ),
        Err(e) => ComparisonResult::Unknown(format!("invariants not computable: {e}")),
    }
}

fn apply_witness(a: &mut Summary, b: &mut Summary, x: &Tower, y: &Tower, n: usize) -> bool {
    let omega_pair = |s: &Summary, t: &Tower| s.towers.iter().any(|(u, m)| u == t && *m == Multiplicity::Omega);
    if omega_pair(a, x) && omega_pair(b, y) {
        a.towers.retain(|(u, _)| u != x);
        b.towers.retain(|(u, _)| u != y);
        return true;
    }
    let has = |s: &Summary, t: &Tower| {
        s.towers.iter().any(|(u, m)| u == t && matches!(m, Multiplicity::Finite(k) if *k >= n))
    };
    if has(a, x) && has(b, y) {
        a.take_tower(x, n);
        b.take_tower(y, n);
        return true;
    }
    false
}

fn separating_invariant(a: &Summary, b: &Summary) -> Result<Option<String>> {
    let mut primes = a.relevant_primes()?;
    primes.extend(b.relevant_primes()?);
    for p in primes {
        let (pa, pb) = (a.p_rank(p), b.p_rank(p));
        if pa != pb {
            return Ok(Some(format!("{p}-rank {pa} vs {pb}")));
        }
    }
    let finite = |s: &Summary| {
        s.types.values().all(|m| *m != Multiplicity::Omega) && s.towers.iter().all(|(_, m)| *m != Multiplicity::Omega)
    };
    if finite(a) && finite(b) {
        let (ka, kb) = (a.top_type_key()?, b.top_type_key()?);
        if ka != kb {
            return Ok(Some(format!("top exterior power {} vs {}", key_text(&ka), key_text(&kb))));
        }
    }
    Ok(None)
}

/// Outcome of checking a witness, with the first failure if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub valid: bool,
    pub stages_checked: usize,
    pub first_violation: Option<String>,
    /// The stage maps `P'ₛ M Pₛ⁻¹` (and those of the inverse) are integral
    /// and repeat after one period, so the check holds at every stage.
    pub periodic_certificate: bool,
}

/// The tower presenting a free part built from towers and finitely many
/// rank-one summands.
pub fn as_tower(f: &FreePartDesc) -> Result<Tower> {
    match f {
        FreePartDesc::FreeOfRank(n) => Ok(Tower::free(*n)),
        FreePartDesc::Rank1(t) | FreePartDesc::TowerForm(t) => Ok(t.clone()),
        FreePartDesc::CompletelyDecomposable(items) => {
            let mut parts = Vec::new();
            for (t, m) in items {
                let Multiplicity::Finite(m) = m else {
                    return Err(Error::Unsupported("witness over omega copies".into()));
                };
                parts.extend(std::iter::repeat_n(Tower::from_supernatural(&t.canonical()), *m));
            }
            direct_sum(&parts)
        }
        FreePartDesc::DirectSum(parts) => {
            let towers: Vec<Tower> = parts.iter().map(as_tower).collect::<Result<_>>()?;
            direct_sum(&towers)
        }
        FreePartDesc::OmegaCopies(_) => Err(Error::Unsupported("witness over omega copies".into())),
    }
}

fn direct_sum(towers: &[Tower]) -> Result<Tower> {
    let nonzero: Vec<&Tower> = towers.iter().filter(|t| t.rank() > 0).collect();
    if nonzero.is_empty() {
        return Ok(Tower::free(0));
    }
    Ok(Tower::direct_sum(&nonzero))
}

/// Whether the witness map and its inverse send each side into the other,
/// checked on stage lattices up to `prefix + 2·period`.
pub fn check_witness(w: &Witness) -> Result<bool> {
    Ok(witness_report(w)?.valid)
}

pub fn witness_report(w: &Witness) -> Result<WitnessReport> {
    witness_report_to_depth(w, None)
}

/// As [`witness_report`], checking stages `0..=depth` instead of the
/// default bound.
pub fn witness_report_to_depth(w: &Witness, depth: Option<usize>) -> Result<WitnessReport> {
    if w.copies == 0 {
        return Err(Error::DimensionMismatch("a witness needs at least one copy".into()));
    }
    let copies = |f: &FreePartDesc| -> Result<Tower> {
        let t = as_tower(f)?;
        Ok(Tower::direct_sum(&vec![&t; w.copies]))
    };
    let (src, dst) = (copies(&w.src)?, copies(&w.dst)?);
    let n = src.rank();
    if dst.rank() != n || w.map.rows() != n || w.map.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "witness map is {}x{} between groups of rank {} and {}",
            w.map.rows(),
            w.map.cols(),
            n,
            dst.rank()
        )));
    }
    let inverse = rational_inverse(&w.map).map_err(|_| Error::SingularWitness)?;
    let aligned = Tower::align_all(&[&src, &dst]);
    let (src, dst) = (&aligned[0], &aligned[1]);
    let (pre, per) = (src.prefix().len(), src.period().len());
    let depth = depth.unwrap_or(pre + 2 * per);

    let mut first_violation = None;
    'outer: for s in 0..=depth {
        for (from, to, map, label) in [(src, dst, &w.map, "map"), (dst, src, &inverse, "inverse")] {
            let generators = stage_generators(from, s);
            for (j, g) in generators.iter().enumerate() {
                let image = map.mul_vec(g);
                if to.membership(&image).is_none() {
                    first_violation = Some(format!("{label} sends stage {s} generator {j} outside the target"));
                    break 'outer;
                }
            }
        }
    }
    let periodic_certificate =
        first_violation.is_none() && stage_maps_repeat(src, dst, &w.map) && stage_maps_repeat(dst, src, &inverse);
    Ok(WitnessReport {
        valid: first_violation.is_none(),
        stages_checked: depth + 1,
        first_violation,
        periodic_certificate,
    })
}

/// Columns of `Pₛ⁻¹`: generators of the stage-`s` lattice in stage-0
/// coordinates.
fn stage_generators(t: &Tower, s: usize) -> Vec<Vec<BigRational>> {
    let inv = rational_inverse(&t.stage_product(0, s).to_rational()).expect("valid towers have nonsingular maps");
    (0..t.rank()).map(|j| (0..t.rank()).map(|i| inv.get(i, j).clone()).collect()).collect()
}

fn stage_map(from: &Tower, to: &Tower, m: &RatMatrix, s: usize) -> RatMatrix {
    let p = rational_inverse(&from.stage_product(0, s).to_rational()).expect("valid towers have nonsingular maps");
    &(&to.stage_product(0, s).to_rational() * m) * &p
}

/// `Bₛ = P'ₛ M Pₛ⁻¹` integral for the prefix and one period, and
/// `B_{pre+per} = B_pre`; then `Bₛ` is integral at every stage.
fn stage_maps_repeat(from: &Tower, to: &Tower, m: &RatMatrix) -> bool {
    let (pre, per) = (from.prefix().len(), from.period().len());
    let maps: Vec<RatMatrix> = (0..=pre + per).map(|s| stage_map(from, to, m, s)).collect();
    maps.iter().all(RatMatrix::is_integral) && maps[pre] == maps[pre + per]
}

/// An integer matrix as a witness map.
pub fn integer_witness(copies: usize, map: &IntMatrix, src: FreePartDesc, dst: FreePartDesc) -> Witness {
    Witness { copies, map: map.to_rational(), src, dst }
}

#[cfg(test)]
fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
