//! Descriptions of countable abelian groups: a torsion descriptor plus a
//! torsion-free part built from free groups, rank-one groups, completely
//! decomposable groups and towers.

use std::collections::BTreeMap;
use std::fmt;

use crate::fgab::{Multiplicity, TorsionDesc};
use crate::supernatural::TypeClass;
use crate::tower::Tower;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreePartDesc {
    FreeOfRank(usize),
    Rank1(Tower),
    /// Types with multiplicities; see [`FreePartDesc::cd`] for the normal form.
    CompletelyDecomposable(Vec<(TypeClass, Multiplicity)>),
    TowerForm(Tower),
    DirectSum(Vec<FreePartDesc>),
    /// `⊕_ω` of a tower.
    OmegaCopies(Tower),
}

/// Merges equal types, drops zero multiplicities and sorts by type.
pub fn normalize_types(items: impl IntoIterator<Item = (TypeClass, Multiplicity)>) -> Vec<(TypeClass, Multiplicity)> {
    let mut merged: BTreeMap<TypeClass, Multiplicity> = BTreeMap::new();
    for (t, m) in items {
        if m.is_zero() {
            continue;
        }
        let slot = merged.entry(t).or_insert(Multiplicity::Finite(0));
        *slot = *slot + m;
    }
    merged.into_iter().collect()
}

impl FreePartDesc {
    /// A completely decomposable group in normal form; an empty multiset
    /// becomes the trivial group.
    pub fn cd(items: impl IntoIterator<Item = (TypeClass, Multiplicity)>) -> FreePartDesc {
        let items = normalize_types(items);
        if items.is_empty() {
            FreePartDesc::FreeOfRank(0)
        } else {
            FreePartDesc::CompletelyDecomposable(items)
        }
    }

    pub fn rank(&self) -> Multiplicity {
        match self {
            FreePartDesc::FreeOfRank(n) => Multiplicity::Finite(*n),
            FreePartDesc::Rank1(_) => Multiplicity::Finite(1),
            FreePartDesc::CompletelyDecomposable(items) => {
                items.iter().fold(Multiplicity::Finite(0), |acc, (_, m)| acc + *m)
            }
            FreePartDesc::TowerForm(t) => Multiplicity::Finite(t.rank()),
            FreePartDesc::DirectSum(parts) => parts.iter().fold(Multiplicity::Finite(0), |acc, p| acc + p.rank()),
            FreePartDesc::OmegaCopies(_) => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for FreePartDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreePartDesc::FreeOfRank(n) => write!(f, "free rank {n}"),
            FreePartDesc::Rank1(t) => write!(f, "rank-1 {t}"),
            FreePartDesc::CompletelyDecomposable(items) => {
                let parts: Vec<String> = items.iter().map(|(t, m)| format!("{t} x{m}")).collect();
                write!(f, "cd[{}]", parts.join(", "))
            }
            FreePartDesc::TowerForm(t) => write!(f, "{t}"),
            FreePartDesc::DirectSum(parts) => {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "sum[{}]", parts.join(", "))
            }
            FreePartDesc::OmegaCopies(t) => write!(f, "omega x {t}"),
        }
    }
}

/// A countable abelian group `T ⊕ F`, `T` torsion and `F` torsion-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroupDesc {
    pub torsion: TorsionDesc,
    pub free_part: FreePartDesc,
}

impl AbGroupDesc {
    pub fn new(torsion: TorsionDesc, free_part: FreePartDesc) -> Self {
        AbGroupDesc { torsion, free_part }
    }

    pub fn torsion_free(free_part: FreePartDesc) -> Self {
        AbGroupDesc { torsion: TorsionDesc::trivial(), free_part }
    }

    /// `Z^n`.
    pub fn free(n: usize) -> Self {
        Self::torsion_free(FreePartDesc::FreeOfRank(n))
    }
}

impl fmt::Display for AbGroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.torsion, self.free_part)
    }
}
