use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

/// Label of an irreducible representation, unique within its ring.
///
/// Each family uses one variant as its normal form: spin indices for the
/// SU(2)-type fusion rules, lattice points for torus and Heisenberg duals,
/// reduced words for free-group duals, declared labels for file rings and
/// pairs for product rings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepId {
    Index(u32),
    Point(SmallVec<[i64; 3]>),
    /// Reduced word; letter code `2g` is generator `g`, `2g + 1` its inverse,
    /// so derived ordering matches shortlex order `a < A < b < B < …` within
    /// a length.
    Word(SmallVec<[u8; 16]>),
    Label(Arc<str>),
    Pair(Box<(IrrepId, IrrepId)>),
}

impl IrrepId {
    pub fn point(coords: &[i64]) -> Self {
        IrrepId::Point(SmallVec::from_slice(coords))
    }

    pub fn label(s: &str) -> Self {
        IrrepId::Label(Arc::from(s))
    }

    pub fn pair(a: IrrepId, b: IrrepId) -> Self {
        IrrepId::Pair(Box::new((a, b)))
    }

    pub fn as_index(&self) -> Option<u32> {
        match self {
            IrrepId::Index(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<&[i64]> {
        match self {
            IrrepId::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[u8]> {
        match self {
            IrrepId::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&IrrepId, &IrrepId)> {
        match self {
            IrrepId::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }
}

pub(crate) fn letter_char(code: u8) -> char {
    let base = if code & 1 == 0 { b'a' } else { b'A' };
    (base + code / 2) as char
}

impl fmt::Display for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepId::Index(n) => write!(f, "u{n}"),
            IrrepId::Point(p) => {
                write!(f, "(")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            IrrepId::Word(w) if w.is_empty() => write!(f, "1"),
            IrrepId::Word(w) => {
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
            IrrepId::Label(s) => write!(f, "{s}"),
            IrrepId::Pair(p) => write!(f, "[{}|{}]", p.0, p.1),
        }
    }
}

impl fmt::Debug for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits `s` at `sep` occurrences that are not nested in `()` or `[]`.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses `(a,b,...)` or a bare integer into lattice coordinates.
pub(crate) fn parse_point(s: &str) -> Option<Vec<i64>> {
    let s = s.trim();
    let inner = match s.strip_prefix('(') {
        Some(rest) => rest.strip_suffix(')')?,
        None => s,
    };
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().ok())
        .collect()
}

/// Splits a product label `[a|b]` into its two halves.
pub(crate) fn split_pair(s: &str) -> Option<(&str, &str)> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    let parts = split_top_level(inner, '|');
    match parts.as_slice() {
        [a, b] => Some((a, b)),
        _ => None,
    }
}
