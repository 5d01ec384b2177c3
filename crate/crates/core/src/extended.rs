use std::fmt;

/// Integer extended by the two infinities. Used wherever an invariant may be unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    /// Shift a finite value; infinities absorb.
    pub fn add(self, d: i64) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v + d),
            x => x,
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Finite(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        assert!(ExtInt::NegInf < ExtInt::Finite(-1000));
        assert!(ExtInt::Finite(1000) < ExtInt::PosInf);
        assert_eq!(ExtInt::NegInf.add(5), ExtInt::NegInf);
    }
}
