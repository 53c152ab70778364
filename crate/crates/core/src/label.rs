use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Class label of a sample. Serialized as the integers `1` and `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    First,
    Second,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::First => 0,
            Label::Second => 1,
        }
    }

    /// Parses a raw integer label; `index` is only used for the diagnostic.
    pub fn from_raw(value: i64, index: usize) -> Result<Self> {
        match value {
            1 => Ok(Label::First),
            2 => Ok(Label::Second),
            _ => Err(Error::InvalidLabel { index, value }),
        }
    }
}

impl From<Label> for u8 {
    fn from(label: Label) -> u8 {
        match label {
            Label::First => 1,
            Label::Second => 2,
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Label::from_raw(i64::from(value), 0)
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}
