//! Three-valued answers for questions asked of truncated objects.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Ternary {
        if b {
            Ternary::Yes
        } else {
            Ternary::No
        }
    }

    pub fn and(self, other: Ternary) -> Ternary {
        match (self, other) {
            (Ternary::No, _) | (_, Ternary::No) => Ternary::No,
            (Ternary::Yes, Ternary::Yes) => Ternary::Yes,
            _ => Ternary::Unknown,
        }
    }

    pub fn or(self, other: Ternary) -> Ternary {
        match (self, other) {
            (Ternary::Yes, _) | (_, Ternary::Yes) => Ternary::Yes,
            (Ternary::No, Ternary::No) => Ternary::No,
            _ => Ternary::Unknown,
        }
    }

    /// Conjunction over an iterator, stopping at the first `No`.
    pub fn all<I: IntoIterator<Item = Ternary>>(items: I) -> Ternary {
        let mut acc = Ternary::Yes;
        for t in items {
            acc = acc.and(t);
            if acc == Ternary::No {
                break;
            }
        }
        acc
    }

    /// Disjunction over an iterator, stopping at the first `Yes`.
    pub fn any<I: IntoIterator<Item = Ternary>>(items: I) -> Ternary {
        let mut acc = Ternary::No;
        for t in items {
            acc = acc.or(t);
            if acc == Ternary::Yes {
                break;
            }
        }
        acc
    }

    pub fn is_yes(self) -> bool {
        self == Ternary::Yes
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::Yes => "yes",
            Ternary::No => "no",
            Ternary::Unknown => "unknown",
        })
    }
}
