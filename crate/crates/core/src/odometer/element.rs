use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;

/// The three acting groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// `Z`
    Integers,
    /// `Z ⋊ Z_2`, the generator of `Z_2` acting by negation.
    Dihedral,
    /// `Z × Z_2`
    DirectProduct,
}

impl GroupKind {
    pub const ALL: [GroupKind; 3] = [GroupKind::Integers, GroupKind::Dihedral, GroupKind::DirectProduct];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Integers => "z",
            GroupKind::Dihedral => "dihedral",
            GroupKind::DirectProduct => "direct_product",
        }
    }

    pub fn has_flip(self) -> bool {
        !matches!(self, GroupKind::Integers)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Integers => "Z",
            GroupKind::Dihedral => "Z ⋊ Z_2",
            GroupKind::DirectProduct => "Z × Z_2",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" | "integers" | "int" => Ok(GroupKind::Integers),
            "dihedral" | "infinite_dihedral" | "d_inf" | "zxz2_semidirect" => Ok(GroupKind::Dihedral),
            "direct_product" | "direct" | "zxz2" | "z_x_z2" => Ok(GroupKind::DirectProduct),
            _ => Err(Error::UnknownGroupKind(s.to_string())),
        }
    }
}

/// Element of `Z`, `Z ⋊ Z_2` or `Z × Z_2` written as `(t, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Z(BigInt),
    Dihedral(BigInt, bool),
    DirectProduct(BigInt, bool),
}

impl GroupElement {
    pub fn identity(kind: GroupKind) -> Self {
        Self::new(kind, BigInt::zero(), false)
    }

    /// `(t, s)`; the flip bit is ignored for `Z`.
    pub fn new(kind: GroupKind, t: BigInt, s: bool) -> Self {
        match kind {
            GroupKind::Integers => GroupElement::Z(t),
            GroupKind::Dihedral => GroupElement::Dihedral(t, s),
            GroupKind::DirectProduct => GroupElement::DirectProduct(t, s),
        }
    }

    pub fn from_ints(kind: GroupKind, t: i64, s: bool) -> Self {
        Self::new(kind, BigInt::from(t), s)
    }

    /// The translation `(t, 0)`.
    pub fn translation(kind: GroupKind, t: impl Into<BigInt>) -> Self {
        Self::new(kind, t.into(), false)
    }

    /// `(0, 1)`; `None` for `Z`.
    pub fn flip(kind: GroupKind) -> Option<Self> {
        kind.has_flip().then(|| Self::new(kind, BigInt::zero(), true))
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::Z(_) => GroupKind::Integers,
            GroupElement::Dihedral(..) => GroupKind::Dihedral,
            GroupElement::DirectProduct(..) => GroupKind::DirectProduct,
        }
    }

    pub fn t(&self) -> &BigInt {
        match self {
            GroupElement::Z(t) | GroupElement::Dihedral(t, _) | GroupElement::DirectProduct(t, _) => t,
        }
    }

    pub fn s(&self) -> bool {
        match self {
            GroupElement::Z(_) => false,
            GroupElement::Dihedral(_, s) | GroupElement::DirectProduct(_, s) => *s,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.t().is_zero() && !self.s()
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Z(t) => GroupElement::Z(-t),
            GroupElement::Dihedral(t, false) => GroupElement::Dihedral(-t, false),
            GroupElement::Dihedral(t, true) => GroupElement::Dihedral(t.clone(), true),
            GroupElement::DirectProduct(t, s) => GroupElement::DirectProduct(-t, *s),
        }
    }

    /// `self⁻¹ · other · self`
    pub fn conjugate(&self, other: &GroupElement) -> GroupElement {
        &(&self.inverse() * other) * self
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics when the operands belong to different groups.
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        match (self, rhs) {
            (GroupElement::Z(a), GroupElement::Z(b)) => GroupElement::Z(a + b),
            (GroupElement::Dihedral(a, s), GroupElement::Dihedral(b, s2)) => {
                let t = if *s { a - b } else { a + b };
                GroupElement::Dihedral(t, s ^ s2)
            }
            (GroupElement::DirectProduct(a, s), GroupElement::DirectProduct(b, s2)) => {
                GroupElement::DirectProduct(a + b, s ^ s2)
            }
            _ => panic!("cannot multiply {} by {}", self, rhs),
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Z(t) => write!(f, "{}", t),
            GroupElement::Dihedral(t, s) | GroupElement::DirectProduct(t, s) => {
                write!(f, "({},{})", t, *s as u8)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: i64, s: bool) -> GroupElement {
        GroupElement::from_ints(GroupKind::Dihedral, t, s)
    }

    #[test]
    fn dihedral_multiplication() {
        assert_eq!(&d(1, false) * &d(1, false), d(2, false));
        assert_eq!(&d(0, true) * &d(1, false), d(-1, true));
        assert_eq!(&d(3, true) * &d(3, true), d(0, false));
        // (n,0)(0,1)(-n,0) = (2n,1)
        assert_eq!(&(&d(5, false) * &d(0, true)) * &d(-5, false), d(10, true));
    }

    #[test]
    fn inverses() {
        for g in [d(4, false), d(-3, true), GroupElement::from_ints(GroupKind::DirectProduct, 7, true)] {
            assert!((&g * &g.inverse()).is_identity());
            assert!((&g.inverse() * &g).is_identity());
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("Dihedral".parse::<GroupKind>().unwrap(), GroupKind::Dihedral);
        assert_eq!("z".parse::<GroupKind>().unwrap(), GroupKind::Integers);
        assert!(matches!("heisenberg".parse::<GroupKind>(), Err(Error::UnknownGroupKind(_))));
    }

    #[test]
    #[should_panic]
    fn mixed_kinds_panic() {
        let _ = &d(1, false) * &GroupElement::from_ints(GroupKind::Integers, 1, false);
    }
}
