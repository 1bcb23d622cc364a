//! Qubit, pair and bipartition labels.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::Error;

/// One of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Bit position of this qubit inside a basis index `a·4 + b·2 + c`.
    pub const fn bit(self) -> usize {
        match self {
            Qubit::A => 2,
            Qubit::B => 1,
            Qubit::C => 0,
        }
    }

    pub const fn index(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Qubit::A => "A",
            Qubit::B => "B",
            Qubit::C => "C",
        }
    }
}

/// An unordered pair of distinct qubits, ordered AB < AC < BC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    /// The two members, in alphabetical order.
    pub const fn qubits(self) -> (Qubit, Qubit) {
        match self {
            Pair::AB => (Qubit::A, Qubit::B),
            Pair::AC => (Qubit::A, Qubit::C),
            Pair::BC => (Qubit::B, Qubit::C),
        }
    }

    /// The qubit not in the pair.
    pub const fn complement(self) -> Qubit {
        match self {
            Pair::AB => Qubit::C,
            Pair::AC => Qubit::B,
            Pair::BC => Qubit::A,
        }
    }

    pub const fn index(self) -> usize {
        match self {
            Pair::AB => 0,
            Pair::AC => 1,
            Pair::BC => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Pair::AB => "AB",
            Pair::AC => "AC",
            Pair::BC => "BC",
        }
    }
}

/// A one-versus-two cut `I|JK`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bipartition {
    ABC,
    BAC,
    CAB,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::ABC, Bipartition::BAC, Bipartition::CAB];

    /// The isolated qubit `I`.
    pub const fn single(self) -> Qubit {
        match self {
            Bipartition::ABC => Qubit::A,
            Bipartition::BAC => Qubit::B,
            Bipartition::CAB => Qubit::C,
        }
    }

    /// The remaining pair `JK`.
    pub const fn rest(self) -> Pair {
        match self {
            Bipartition::ABC => Pair::BC,
            Bipartition::BAC => Pair::AC,
            Bipartition::CAB => Pair::AB,
        }
    }

    pub const fn of(single: Qubit) -> Self {
        match single {
            Qubit::A => Bipartition::ABC,
            Qubit::B => Bipartition::BAC,
            Qubit::C => Bipartition::CAB,
        }
    }

    pub const fn index(self) -> usize {
        self.single().index()
    }

    pub const fn name(self) -> &'static str {
        match self {
            Bipartition::ABC => "A|BC",
            Bipartition::BAC => "B|AC",
            Bipartition::CAB => "C|AB",
        }
    }
}

/// What a partial trace keeps: a single qubit or a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keep {
    One(Qubit),
    Two(Pair),
}

impl From<Qubit> for Keep {
    fn from(q: Qubit) -> Self {
        Keep::One(q)
    }
}

impl From<Pair> for Keep {
    fn from(p: Pair) -> Self {
        Keep::Two(p)
    }
}

macro_rules! label_impls {
    ($ty:ty, [$($v:expr),*]) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                [$($v),*]
                    .into_iter()
                    .find(|l: &$ty| l.name().eq_ignore_ascii_case(s.trim()))
                    .ok_or_else(|| Error::InvalidLabel(s.to_string()))
            }
        }
    };
}

label_impls!(Qubit, [Qubit::A, Qubit::B, Qubit::C]);
label_impls!(Pair, [Pair::AB, Pair::AC, Pair::BC]);
label_impls!(Bipartition, [Bipartition::ABC, Bipartition::BAC, Bipartition::CAB]);

impl FromStr for Keep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().len() {
            1 => s.parse().map(Keep::One),
            2 => {
                // accept "BA" as well as "AB"
                let t = s.trim();
                let swapped: alloc::string::String = t.chars().rev().collect();
                t.parse()
                    .or_else(|_| swapped.parse())
                    .map(Keep::Two)
                    .map_err(|_| Error::InvalidLabel(s.to_string()))
            }
            _ => Err(Error::InvalidLabel(s.to_string())),
        }
    }
}
