//! Signature groups: the cyclic group `S¹ₖ = {ξ^j}` with `ξ = e^{2πi/k}`, and
//! the circle group `U(1)`.
//!
//! Cyclic elements are stored as exponents so that products, inverses and
//! identity tests are exact. Circle elements are stored as angles reduced into
//! `[0, 2π)`.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_complex::Complex64;

use crate::math::{self, TAU};
use crate::{Error, Result};

/// Angular tolerance used when testing circle elements for identity.
pub const ANGLE_TOL: f64 = 1e-9;

/// The group a signature takes values in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignatureGroup {
    /// `S¹ₖ`, `k ≥ 1`.
    Cyclic(u32),
    /// `U(1)`.
    Circle,
}

impl SignatureGroup {
    pub fn identity(self) -> GroupElement {
        match self {
            SignatureGroup::Cyclic(k) => GroupElement::Cyclic { k, j: 0 },
            SignatureGroup::Circle => GroupElement::Circle(0.0),
        }
    }

    pub fn order(self) -> Option<u32> {
        match self {
            SignatureGroup::Cyclic(k) => Some(k),
            SignatureGroup::Circle => None,
        }
    }

    /// Whether `-1` belongs to the group.
    pub fn contains_minus_one(self) -> bool {
        match self {
            SignatureGroup::Cyclic(k) => k % 2 == 0,
            SignatureGroup::Circle => true,
        }
    }

    /// Whether `g` is an element of this group.
    pub fn contains(self, g: GroupElement) -> bool {
        match (self, g) {
            (SignatureGroup::Cyclic(k), GroupElement::Cyclic { k: gk, .. }) => k == gk,
            (SignatureGroup::Circle, GroupElement::Circle(_)) => true,
            _ => false,
        }
    }

    pub(crate) fn check(self, g: GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: format!("{self}"),
                found: format!("{}", g.group()),
            })
        }
    }
}

impl fmt::Display for SignatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureGroup::Cyclic(k) => write!(f, "S1_{k}"),
            SignatureGroup::Circle => f.write_str("U(1)"),
        }
    }
}

/// An element of `S¹ₖ` or `U(1)`.
#[derive(Debug, Clone, Copy)]
pub enum GroupElement {
    /// `ξ_k^j`, with `0 ≤ j < k`.
    Cyclic { k: u32, j: u32 },
    /// `e^{iθ}`, with `θ ∈ [0, 2π)`.
    Circle(f64),
}

impl GroupElement {
    /// `ξ_k^j`; `j` is reduced modulo `k`.
    pub fn cyclic(k: u32, j: i64) -> Self {
        assert!(k >= 1, "cyclic group order must be positive");
        let j = j.rem_euclid(k as i64) as u32;
        GroupElement::Cyclic { k, j }
    }

    /// `e^{iθ}`; `θ` is reduced into `[0, 2π)`.
    pub fn circle(theta: f64) -> Self {
        GroupElement::Circle(math::wrap_angle(theta))
    }

    pub fn group(self) -> SignatureGroup {
        match self {
            GroupElement::Cyclic { k, .. } => SignatureGroup::Cyclic(k),
            GroupElement::Circle(_) => SignatureGroup::Circle,
        }
    }

    /// The argument in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        match self {
            GroupElement::Cyclic { k, j } => TAU * j as f64 / k as f64,
            GroupElement::Circle(theta) => theta,
        }
    }

    /// The unit complex number this element represents.
    pub fn to_complex(self) -> Complex64 {
        let a = self.angle();
        Complex64::new(math::cos(a), math::sin(a))
    }

    pub fn inverse(self) -> Self {
        match self {
            GroupElement::Cyclic { k, j } => GroupElement::Cyclic { k, j: (k - j) % k },
            GroupElement::Circle(theta) => GroupElement::circle(-theta),
        }
    }

    /// Group product. Panics when the operands live in different groups; use
    /// [`GroupElement::try_mul`] for a checked version.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        self.try_mul(other).expect("group mismatch in product")
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        match (self, other) {
            (GroupElement::Cyclic { k, j }, GroupElement::Cyclic { k: k2, j: j2 }) if k == k2 => {
                Ok(GroupElement::Cyclic { k, j: (j + j2) % k })
            }
            (GroupElement::Circle(a), GroupElement::Circle(b)) => Ok(GroupElement::circle(a + b)),
            _ => Err(Error::GroupMismatch {
                expected: format!("{}", self.group()),
                found: format!("{}", other.group()),
            }),
        }
    }

    /// Exact for cyclic elements, within [`ANGLE_TOL`] for circle elements.
    pub fn is_identity(self) -> bool {
        match self {
            GroupElement::Cyclic { j, .. } => j == 0,
            GroupElement::Circle(theta) => theta.min(TAU - theta) <= ANGLE_TOL,
        }
    }

    /// The element whose complex value is the negative of this one; `None`
    /// when `-1` is not in the group.
    pub fn negated(self) -> Option<Self> {
        match self {
            GroupElement::Cyclic { k, j } if k % 2 == 0 => Some(GroupElement::Cyclic { k, j: (j + k / 2) % k }),
            GroupElement::Cyclic { .. } => None,
            GroupElement::Circle(theta) => Some(GroupElement::circle(theta + math::PI)),
        }
    }

    /// Human-readable token, e.g. `1/3` or `0.785398`.
    pub fn token(self) -> String {
        match self {
            GroupElement::Cyclic { k, j } => format!("{j}/{k}"),
            GroupElement::Circle(theta) => format!("{theta}"),
        }
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        match (*self, *other) {
            (GroupElement::Cyclic { k, j }, GroupElement::Cyclic { k: k2, j: j2 }) => k == k2 && j == j2,
            (GroupElement::Circle(a), GroupElement::Circle(b)) => a == b,
            _ => false,
        }
    }
}

/// `|1 − ξ_k^l|` for `l = 0..k`.
pub(crate) fn chord_table(k: u32) -> alloc::vec::Vec<f64> {
    (0..k).map(|l| if l == 0 { 0.0 } else { math::chord(TAU * l as f64 / k as f64) }).collect()
}
