//! Finitely generated abelian groups in invariant-factor form, and the
//! torsion descriptors used by the unitary invariant.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::exactla::{smith_normal_form, IntMatrix};

/// `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `d₁ | d₂ | … | d_k`, every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// `⊕ Z/nᵢ` for the given cyclic orders (orders 0 and 1 contribute `Z`
    /// and nothing, respectively).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|&n| BigInt::from(n)).collect();
        from_relations(&IntMatrix::diagonal(&diag))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the group, if finite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.invariant_factors.iter().fold(BigUint::one(), |acc, d| acc * d.magnitude()))
    }

    pub fn torsion_subgroup(&self) -> FgAbGroup {
        FgAbGroup { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// The group presented by the relation matrix `R`: one generator per column,
/// one relation per row.
pub fn from_relations(r: &IntMatrix) -> FgAbGroup {
    let smith = smith_normal_form(r);
    let diag = smith.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let invariant_factors = diag.into_iter().filter(|d| d > &BigInt::one()).collect();
    FgAbGroup { free_rank: r.cols() - nonzero, invariant_factors }
}

pub fn fg_isomorphic(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors
}

/// The torsion subgroup of a countable abelian group, up to what the unitary
/// invariant can see: a finite group, or "countably infinite".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TorsionDesc {
    Finite(FgAbGroup),
    CountablyInfinite,
}

impl TorsionDesc {
    pub fn trivial() -> Self {
        TorsionDesc::Finite(FgAbGroup::trivial())
    }

    /// Panics if `group` has positive free rank.
    pub fn finite(group: FgAbGroup) -> Self {
        assert!(group.is_finite(), "torsion descriptor must be a finite group");
        TorsionDesc::Finite(group)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, TorsionDesc::Finite(g) if g.is_trivial())
    }
}

impl fmt::Display for TorsionDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionDesc::Finite(g) => write!(f, "{g}"),
            TorsionDesc::CountablyInfinite => write!(f, "countable torsion"),
        }
    }
}

/// Cardinality of a countable set: `Fin(n)` with `n ≥ 1`, or `ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Fin(BigUint),
    Omega,
}

impl Cardinal {
    pub fn one() -> Self {
        Cardinal::Fin(BigUint::one())
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Fin(n) => write!(f, "{n}"),
            Cardinal::Omega => write!(f, "ω"),
        }
    }
}

pub fn torsion_cardinal(t: &TorsionDesc) -> Cardinal {
    match t {
        TorsionDesc::Finite(g) => Cardinal::Fin(g.order().expect("finite torsion descriptor")),
        TorsionDesc::CountablyInfinite => Cardinal::Omega,
    }
}

/// Multiplicities used by direct sums: a count or `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(usize),
    Omega,
}

impl Multiplicity {
    pub fn is_zero(self) -> bool {
        self == Multiplicity::Finite(0)
    }

    pub fn scale(self, factor: Multiplicity) -> Multiplicity {
        match (self, factor) {
            (Multiplicity::Finite(0), _) | (_, Multiplicity::Finite(0)) => Multiplicity::Finite(0),
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a * b),
            _ => Multiplicity::Omega,
        }
    }
}

impl std::ops::Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => write!(f, "ω"),
        }
    }
}
