//! Set file formats.
//!
//! Text: a `horizon=N` header line, then one element per line in increasing
//! order. Binary: `N` as a little-endian `u64`, then the packed membership
//! words, each a little-endian `u64`.

use std::io::{BufRead, Write};

use super::kernel::words_for;
use super::GroundSet;
use crate::error::{Error, Result};

impl GroundSet {
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "horizon={}", self.horizon)?;
        for x in self.iter() {
            writeln!(out, "{x}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header".into()))??;
        let horizon = header
            .trim()
            .strip_prefix("horizon=")
            .and_then(|n| n.parse::<u64>().ok())
            .ok_or_else(|| Error::Format(format!("bad header `{header}`")))?;
        let mut elements = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let x = line
                .parse()
                .map_err(|_| Error::Format(format!("bad element `{line}`")))?;
            elements.push(x);
        }
        GroundSet::from_elements(horizon, elements)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (self.words.len() + 1));
        out.extend_from_slice(&self.horizon.to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || !bytes.len().is_multiple_of(8) {
            return Err(Error::Format(format!(
                "length {} is not a positive multiple of 8",
                bytes.len()
            )));
        }
        let mut chunks = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()));
        let horizon = chunks.next().unwrap();
        let words: Vec<u64> = chunks.collect();
        if words.len() != words_for(horizon) {
            return Err(Error::Format(format!(
                "horizon {horizon} needs {} words, found {}",
                words_for(horizon),
                words.len()
            )));
        }
        let set = GroundSet::from_words(horizon, words.clone());
        if set.words != words {
            return Err(Error::Format("bits set beyond the horizon".into()));
        }
        Ok(set)
    }
}
