// Copyright 2026 The qnet-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Fixed-length bit string, MSB-first: element 0 is the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    value: u64,
}

impl Bits {
    pub const MAX_LEN: usize = 64;

    pub fn new(len: usize, value: u64) -> Result<Self> {
        if len > Self::MAX_LEN || (len < 64 && value >> len != 0) {
            return Err(Error::invalid(format!("value {value} does not fit in {len} bits")));
        }
        Ok(Self { len, value })
    }

    pub fn zeros(len: usize) -> Self {
        Self { len, value: 0 }
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        if bits.len() > Self::MAX_LEN {
            return Err(Error::invalid("bit string longer than 64"));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        Ok(Self { len: bits.len(), value })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Element `k` (0-based, left to right).
    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len, "bit {k} out of range for length {}", self.len);
        (self.value >> (self.len - 1 - k)) & 1 == 1
    }

    pub fn parity(&self) -> bool {
        self.value.count_ones() % 2 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_outcome(self.value as usize, self.len))
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bools = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bools)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// MSB-first rendering of an outcome index.
pub fn format_outcome(outcome: usize, num_bits: usize) -> String {
    (0..num_bits)
        .map(|k| if (outcome >> (num_bits - 1 - k)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_outcome(s: &str) -> Result<usize> {
    let bits: Bits = s.parse()?;
    usize::try_from(bits.value()).map_err(|_| Error::invalid("outcome too large"))
}
