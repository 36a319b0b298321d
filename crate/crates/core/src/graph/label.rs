use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Generator coordinate attached to a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Plain index (explicit and random graphs).
    Index(usize),
    /// Point of `Z` (half-line and bi-infinite chain).
    Integer(i64),
    /// Point of `Z^d_+`.
    Lattice(Vec<u32>),
    /// Tree word: child choices from the root, empty for the root.
    Word(Vec<u8>),
    /// Comb vertex `x_{n,k}`: tooth `n`, depth `k` along the tooth.
    Comb { n: u32, k: u32 },
    /// Bratteli vertex: slot within level.
    Bratteli { level: u32, slot: u32 },
    Named(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Integer(i) => write!(f, "{i}"),
            Label::Lattice(p) => {
                write!(f, "(")?;
                for (i, c) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Label::Word(w) if w.is_empty() => write!(f, "root"),
            Label::Word(w) => {
                for (i, c) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Label::Comb { n, k } => write!(f, "x[{n},{k}]"),
            Label::Bratteli { level, slot } => write!(f, "v[{level},{slot}]"),
            Label::Named(s) => write!(f, "{s}"),
        }
    }
}
