//! Serde adapters that write 0-based index sets as 1-based numbers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod single {
    use super::*;

    pub fn serialize<S: Serializer>(i: &usize, ser: S) -> Result<S::Ok, S::Error> {
        (i + 1).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<usize, D::Error> {
        let v = usize::deserialize(de)?;
        v.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based"))
    }
}

pub mod set {
    use super::*;

    pub fn serialize<S: Serializer>(set: &[usize], ser: S) -> Result<S::Ok, S::Error> {
        set.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<usize>, D::Error> {
        Vec::<usize>::deserialize(de)?
            .into_iter()
            .map(|v| v.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
            .collect()
    }
}

pub mod sets {
    use super::*;

    pub fn serialize<S: Serializer>(sets: &[Vec<usize>], ser: S) -> Result<S::Ok, S::Error> {
        let shifted: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect();
        shifted.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<usize>>, D::Error> {
        Vec::<Vec<usize>>::deserialize(de)?
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .map(|v| v.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
                    .collect()
            })
            .collect()
    }
}

pub mod opt_set {
    use super::*;

    pub fn serialize<S: Serializer>(set: &Option<Vec<usize>>, ser: S) -> Result<S::Ok, S::Error> {
        set.as_ref().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Vec<usize>>, D::Error> {
        Option::<Vec<usize>>::deserialize(de)?
            .map(|s| {
                s.into_iter()
                    .map(|v| v.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
                    .collect()
            })
            .transpose()
    }
}
