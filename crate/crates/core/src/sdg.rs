use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the 17 Sustainable Development Goals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Sdg(u8);

impl Sdg {
    pub const COUNT: usize = 17;

    pub fn new(goal: u8) -> Option<Self> {
        (1..=17).contains(&goal).then_some(Sdg(goal))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// 0-based index, for dense per-goal arrays.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn all() -> impl Iterator<Item = Sdg> {
        (1..=17).map(Sdg)
    }
}

impl TryFrom<u8> for Sdg {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Sdg::new(v).ok_or_else(|| format!("SDG must be in 1..=17, got {v}"))
    }
}

impl From<Sdg> for u8 {
    fn from(s: Sdg) -> u8 {
        s.0
    }
}

impl FromStr for Sdg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| format!("SDG must be an integer, got {s:?}"))?;
        u8::try_from(v)
            .ok()
            .and_then(Sdg::new)
            .ok_or_else(|| format!("SDG must be in 1..=17, got {v}"))
    }
}

impl fmt::Display for Sdg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_enforced() {
        assert!(Sdg::new(0).is_none());
        assert!(Sdg::new(18).is_none());
        assert_eq!(Sdg::all().count(), 17);
        assert!("18".parse::<Sdg>().is_err());
        assert!("-1".parse::<Sdg>().is_err());
        assert_eq!("17".parse::<Sdg>().unwrap().index(), 16);
    }
}
