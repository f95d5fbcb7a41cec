use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement / preparation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// `↕`: `{|↑⟩, |↓⟩}`, codes bit 0.
    Rectilinear,
    /// `↔`: `{|→⟩, |←⟩}`, codes bit 1.
    Diagonal,
}

impl Basis {
    pub const BOTH: [Basis; 2] = [Basis::Rectilinear, Basis::Diagonal];

    /// Hilbert angle of the basis' first member.
    pub fn angle(self) -> f64 {
        match self {
            Basis::Rectilinear => 0.0,
            Basis::Diagonal => FRAC_PI_4,
        }
    }

    /// Member selected by a measurement outcome index (0 = first member).
    pub fn member(self, outcome: usize) -> SargSymbol {
        match (self, outcome) {
            (Basis::Rectilinear, 0) => SargSymbol::Up,
            (Basis::Rectilinear, _) => SargSymbol::Down,
            (Basis::Diagonal, 0) => SargSymbol::Right,
            (Basis::Diagonal, _) => SargSymbol::Left,
        }
    }

    /// The bit this basis carries under SARG coding.
    pub fn sarg_bit(self) -> u8 {
        match self {
            Basis::Rectilinear => 0,
            Basis::Diagonal => 1,
        }
    }

    pub fn from_sarg_bit(bit: u8) -> Self {
        if bit == 0 {
            Basis::Rectilinear
        } else {
            Basis::Diagonal
        }
    }

    pub fn other(self) -> Self {
        match self {
            Basis::Rectilinear => Basis::Diagonal,
            Basis::Diagonal => Basis::Rectilinear,
        }
    }
}

/// One of the four protocol states, in cyclic angle order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SargSymbol {
    Up,
    Right,
    Down,
    Left,
}

impl SargSymbol {
    pub const ALL: [SargSymbol; 4] = [SargSymbol::Up, SargSymbol::Right, SargSymbol::Down, SargSymbol::Left];

    /// Position in the cycle `↑ → ↓ ←`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }

    /// Hilbert angle: ↑ = 0, → = π/4, ↓ = π/2, ← = 3π/4.
    pub fn angle(self) -> f64 {
        self.index() as f64 * FRAC_PI_4
    }

    pub fn basis(self) -> Basis {
        match self {
            SargSymbol::Up | SargSymbol::Down => Basis::Rectilinear,
            SargSymbol::Right | SargSymbol::Left => Basis::Diagonal,
        }
    }

    /// SARG coding: the basis is the bit.
    pub fn bit(self) -> u8 {
        self.basis().sarg_bit()
    }

    /// BB84 coding: first member of each basis is 0, second is 1.
    pub fn bb84_bit(self) -> u8 {
        match self {
            SargSymbol::Up | SargSymbol::Right => 0,
            SargSymbol::Down | SargSymbol::Left => 1,
        }
    }

    pub fn orthogonal(self) -> Self {
        Self::from_index(self.index() + 2)
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap_sq(self, other: SargSymbol) -> f64 {
        match (self.index() + 4 - other.index()) % 4 {
            0 => 1.0,
            2 => 0.0,
            _ => 0.5,
        }
    }
}

impl fmt::Display for SargSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            SargSymbol::Up => "↑",
            SargSymbol::Right => "→",
            SargSymbol::Down => "↓",
            SargSymbol::Left => "←",
        };
        f.write_str(c)
    }
}

/// Two cyclically adjacent symbols, one per basis: `{↑,→}`, `{→,↓}`, `{↓,←}` or `{←,↑}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[SargSymbol; 2]", into = "[SargSymbol; 2]")]
pub struct AnnouncedPair {
    /// Index of the first member in cyclic order.
    start: u8,
}

impl AnnouncedPair {
    /// `{↑, →}`
    pub const CANONICAL: AnnouncedPair = AnnouncedPair { start: 0 };

    pub fn new(a: SargSymbol, b: SargSymbol) -> Result<Self> {
        let (ia, ib) = (a.index(), b.index());
        if (ia + 1) % 4 == ib {
            Ok(Self { start: ia as u8 })
        } else if (ib + 1) % 4 == ia {
            Ok(Self { start: ib as u8 })
        } else {
            Err(Error::InvalidParameter(format!("{{{a}, {b}}} is not an announceable pair")))
        }
    }

    /// Pair whose first member (in cyclic order) is `symbol`.
    pub fn starting_at(symbol: SargSymbol) -> Self {
        Self {
            start: symbol.index() as u8,
        }
    }

    /// Position in [`AnnouncedPair::all`].
    pub fn index(self) -> usize {
        self.start as usize
    }

    pub fn all() -> [AnnouncedPair; 4] {
        [0, 1, 2, 3].map(|start| AnnouncedPair { start })
    }

    /// Members in cyclic order.
    pub fn members(self) -> [SargSymbol; 2] {
        let s = self.start as usize;
        [SargSymbol::from_index(s), SargSymbol::from_index(s + 1)]
    }

    pub fn contains(self, symbol: SargSymbol) -> bool {
        self.members().contains(&symbol)
    }

    /// The member other than `symbol`, if `symbol` belongs to the pair.
    pub fn partner(self, symbol: SargSymbol) -> Option<SargSymbol> {
        let [a, b] = self.members();
        if symbol == a {
            Some(b)
        } else if symbol == b {
            Some(a)
        } else {
            None
        }
    }

    /// The member carrying `bit`.
    pub fn member_with_bit(self, bit: u8) -> SargSymbol {
        let [a, b] = self.members();
        if a.bit() == bit {
            a
        } else {
            b
        }
    }

    /// Angles `θ, θ + π/4` representing the members with a positive overlap.
    ///
    /// For `{←, ↑}` the second member is `−|↑⟩`, which is the same physical state.
    pub fn member_angles(self) -> [f64; 2] {
        let theta = self.start as f64 * FRAC_PI_4;
        [theta, theta + FRAC_PI_4]
    }
}

impl TryFrom<[SargSymbol; 2]> for AnnouncedPair {
    type Error = Error;

    fn try_from([a, b]: [SargSymbol; 2]) -> Result<Self> {
        Self::new(a, b)
    }
}

impl From<AnnouncedPair> for [SargSymbol; 2] {
    fn from(p: AnnouncedPair) -> Self {
        p.members()
    }
}

impl fmt::Display for AnnouncedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.members();
        write!(f, "{{{a},{b}}}")
    }
}

/// Alice's knowledge about one raw bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interpretation {
    Conclusive { bit: u8 },
    /// Posterior probability that the bit is 1.
    Inconclusive { p_one: f64 },
}

impl Interpretation {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, Interpretation::Conclusive { .. })
    }

    pub fn conclusive_bit(&self) -> Option<u8> {
        match *self {
            Interpretation::Conclusive { bit } => Some(bit),
            Interpretation::Inconclusive { .. } => None,
        }
    }
}

/// Classical announcement made by Bob for a detected qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Announcement {
    Pair(AnnouncedPair),
    /// Contrast mode: the preparation basis itself is revealed.
    Basis(Basis),
}
