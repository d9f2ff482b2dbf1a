//! Supernatural (Steinitz) numbers and the types they represent.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Add;

/// A `p`-height: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinite
    }

    pub fn is_zero(self) -> bool {
        self == Exponent::Finite(0)
    }
}

impl Add for Exponent {
    type Output = Exponent;

    fn add(self, rhs: Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(k) => write!(f, "{k}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// A formal product `∏ p^{e_p}` with finitely many nonzero exponents.
///
/// Zero exponents are never stored, so structural equality is equality of
/// supernatural numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Supernatural {
    exponents: BTreeMap<u64, Exponent>,
}

impl Supernatural {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, Exponent)>) -> Self {
        let mut s = Self::default();
        for (p, e) in pairs {
            s.set(p, e);
        }
        s
    }

    pub fn set(&mut self, p: u64, e: Exponent) {
        if e.is_zero() {
            self.exponents.remove(&p);
        } else {
            self.exponents.insert(p, e);
        }
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    /// Nonzero entries in increasing prime order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exponents.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Primes carrying an infinite exponent, increasing.
    pub fn infinite_support(&self) -> Vec<u64> {
        self.iter().filter(|(_, e)| e.is_infinite()).map(|(p, _)| p).collect()
    }

    /// Product of supernaturals: exponents add.
    pub fn product(&self, other: &Supernatural) -> Supernatural {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.set(p, out.exponent(p) + e);
        }
        out
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, e)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {e}")?;
        }
        write!(f, "}}")
    }
}

/// Two characteristics are equivalent when they differ only at finitely many
/// primes, and only where both exponents are finite. With finite support this
/// reduces to: the sets of primes with infinite exponent coincide.
pub fn types_equivalent(a: &Supernatural, b: &Supernatural) -> bool {
    a.infinite_support() == b.infinite_support()
}

/// A type: an equivalence class of characteristics.
///
/// Equality, ordering and hashing go through the canonical key (the infinite
/// support), so a `TypeClass` can key a map or sit in a sorted multiset.
#[derive(Clone, Debug)]
pub struct TypeClass {
    representative: Supernatural,
}

impl TypeClass {
    pub fn new(representative: Supernatural) -> Self {
        TypeClass { representative }
    }

    /// The type of `Z`.
    pub fn zero() -> Self {
        TypeClass { representative: Supernatural::one() }
    }

    pub fn representative(&self) -> &Supernatural {
        &self.representative
    }

    pub fn key(&self) -> Vec<u64> {
        self.representative.infinite_support()
    }

    pub fn is_zero(&self) -> bool {
        self.key().is_empty()
    }

    /// Type of the tensor product of two rank-one groups.
    pub fn tensor(&self, other: &TypeClass) -> TypeClass {
        TypeClass { representative: self.representative.product(&other.representative) }
    }

    /// The canonical representative: exponent ∞ on the key, 0 elsewhere.
    pub fn canonical(&self) -> Supernatural {
        Supernatural::from_pairs(self.key().into_iter().map(|p| (p, Exponent::Infinite)))
    }
}

impl PartialEq for TypeClass {
    fn eq(&self, other: &Self) -> bool {
        types_equivalent(&self.representative, &other.representative)
    }
}

impl Eq for TypeClass {}

impl Hash for TypeClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for TypeClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TypeClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = self.key();
        if key.is_empty() {
            return write!(f, "type(Z)");
        }
        write!(f, "type(")?;
        for (i, p) in key.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{p}^inf")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sn(pairs: &[(u64, Exponent)]) -> Supernatural {
        Supernatural::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn equivalence_examples() {
        use Exponent::*;
        assert!(types_equivalent(&sn(&[(2, Infinite), (3, Finite(1))]), &sn(&[(2, Infinite)])));
        assert!(!types_equivalent(&sn(&[(2, Infinite)]), &sn(&[])));
        let s = sn(&[(5, Finite(7)), (7, Infinite)]);
        assert!(types_equivalent(&s, &s));
    }

    #[test]
    fn zero_exponents_are_not_stored() {
        let s = sn(&[(2, Exponent::Finite(0)), (3, Exponent::Finite(2))]);
        assert_eq!(s, sn(&[(3, Exponent::Finite(2))]));
        assert_eq!(s.exponent(2), Exponent::Finite(0));
    }

    fn supernatural() -> impl Strategy<Value = Supernatural> {
        let exp = prop_oneof![(0u64..4).prop_map(Exponent::Finite), Just(Exponent::Infinite)];
        prop::collection::vec((prop::sample::select(vec![2u64, 3, 5, 7]), exp), 0..4).prop_map(Supernatural::from_pairs)
    }

    proptest! {
        #[test]
        fn equivalence_is_an_equivalence_relation(a in supernatural(), b in supernatural(), c in supernatural()) {
            prop_assert!(types_equivalent(&a, &a));
            prop_assert_eq!(types_equivalent(&a, &b), types_equivalent(&b, &a));
            if types_equivalent(&a, &b) && types_equivalent(&b, &c) {
                prop_assert!(types_equivalent(&a, &c));
            }
        }

        #[test]
        fn type_class_order_agrees_with_equivalence(a in supernatural(), b in supernatural()) {
            let (ta, tb) = (TypeClass::new(a.clone()), TypeClass::new(b.clone()));
            prop_assert_eq!(ta == tb, types_equivalent(&a, &b));
            prop_assert_eq!(ta.cmp(&tb) == Ordering::Equal, ta == tb);
        }
    }
}
