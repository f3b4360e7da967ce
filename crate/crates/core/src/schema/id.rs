use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{SchemaError, CRITERION_PART};

/// Dotted question number such as `3.2.2` or `4.3.10`.
///
/// Ordering is numeric per segment, so `4.3.2 < 4.3.10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuestionPath(Vec<u16>);

impl QuestionPath {
    pub fn segments(&self) -> &[u16] {
        &self.0
    }

    pub fn part(&self) -> u16 {
        self.0[0]
    }

    pub fn is_criterion_scoped(&self) -> bool {
        self.part() == CRITERION_PART
    }
}

impl FromStr for QuestionPath {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || SchemaError::InvalidQuestionId(s.to_string());
        let segments = s
            .split('.')
            .map(|seg| {
                if seg.is_empty() || !seg.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(invalid());
                }
                seg.parse::<u16>().map_err(|_| invalid())
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !(2..=3).contains(&segments.len()) {
            return Err(invalid());
        }
        Ok(QuestionPath(segments))
    }
}

impl fmt::Display for QuestionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}

impl Serialize for QuestionPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuestionPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A question path plus, for part-4 questions, the 1-based criterion block
/// it belongs to. Written `4.3.3@2`; fixed questions carry no suffix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuestionId {
    path: QuestionPath,
    criterion: Option<u8>,
}

impl QuestionId {
    /// Id of a question outside the criterion block.
    ///
    /// Panics if `path` belongs to part 4.
    pub fn fixed(path: QuestionPath) -> Self {
        assert!(!path.is_criterion_scoped(), "{path} needs a criterion index");
        QuestionId { path, criterion: None }
    }

    /// Id of a question inside criterion block `index` (1-based).
    ///
    /// Panics if `path` is not in part 4.
    pub fn criterion(path: QuestionPath, index: u8) -> Self {
        assert!(path.is_criterion_scoped(), "{path} is not a criterion question");
        QuestionId { path, criterion: Some(index) }
    }

    /// Builds the id matching `path`'s scope; `index` is only used for
    /// criterion questions.
    pub fn scoped(path: QuestionPath, index: u8) -> Self {
        if path.is_criterion_scoped() {
            QuestionId::criterion(path, index)
        } else {
            QuestionId::fixed(path)
        }
    }

    pub fn path(&self) -> &QuestionPath {
        &self.path
    }

    pub fn criterion_index(&self) -> Option<u8> {
        self.criterion
    }

    fn sort_key(&self) -> (u16, u8, &[u16]) {
        let segs = self.path.segments();
        (segs[0], self.criterion.unwrap_or(0), &segs[1..])
    }
}

impl Ord for QuestionId {
    /// Form order: parts ascending, criterion blocks in index order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for QuestionId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for QuestionId {
    type Err = SchemaError;

    /// Parses `3.1.1` or `4.3.3@2`. A part-4 path without suffix refers to
    /// criterion 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || SchemaError::InvalidQuestionId(s.to_string());
        let (path, index) = match s.split_once('@') {
            Some((path, index)) => {
                let index: u8 = index.parse().map_err(|_| invalid())?;
                (path.parse::<QuestionPath>()?, Some(index))
            }
            None => (s.parse::<QuestionPath>()?, None),
        };
        match (path.is_criterion_scoped(), index) {
            (true, Some(0)) | (false, Some(_)) => Err(invalid()),
            (true, index) => Ok(QuestionId::criterion(path, index.unwrap_or(1))),
            (false, None) => Ok(QuestionId::fixed(path)),
        }
    }
}

impl fmt::Display for QuestionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.criterion {
            Some(i) => write!(f, "{}@{}", self.path, i),
            None => write!(f, "{}", self.path),
        }
    }
}

impl Serialize for QuestionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuestionId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_paths() {
        let p: QuestionPath = "4.3.10".parse().unwrap();
        assert_eq!(p.segments(), &[4, 3, 10]);
        assert_eq!(p.to_string(), "4.3.10");
        for bad in ["", "4", "4.", "4..1", "1.2.3.4", "a.b", "4.3.x", "+1.2", " 1.1"] {
            assert!(bad.parse::<QuestionPath>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn numeric_ordering() {
        let mut ids: Vec<QuestionId> = ["5.1", "4.3.10@1", "4.1.1@2", "4.3.2@1", "3.3.8", "1.1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        ids.sort();
        let shown: Vec<String> = ids.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["1.1", "3.3.8", "4.3.2@1", "4.3.10@1", "4.1.1@2", "5.1"]);
    }

    #[test]
    fn criterion_suffix() {
        let id: QuestionId = "4.3.3".parse().unwrap();
        assert_eq!(id.criterion_index(), Some(1));
        let id: QuestionId = "4.3.3@7".parse().unwrap();
        assert_eq!(id.criterion_index(), Some(7));
        assert_eq!(id.to_string(), "4.3.3@7");
        assert!("3.1.1@1".parse::<QuestionId>().is_err());
        assert!("4.1.1@0".parse::<QuestionId>().is_err());
        let id: QuestionId = "3.1.1".parse().unwrap();
        assert_eq!(id.criterion_index(), None);
    }
}
