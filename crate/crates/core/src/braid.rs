//! Braid words and the two positive braid families used throughout the crate.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count must be positive")]
    NoStrands,
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("invalid token {token:?} at byte {position}")]
    Parse { position: usize, token: String },
    #[error("family parameter out of range: {0}")]
    Family(String),
}

/// Sign of a braid letter or of a diagram crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// One generator `σ_index^sign`, with `index` counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(index: usize) -> Letter {
        Letter { index, sign: Sign::Positive }
    }

    pub fn neg(index: usize) -> Letter {
        Letter { index, sign: Sign::Negative }
    }

    /// Signed integer form, as used by the text format.
    pub fn signed(self) -> i64 {
        self.index as i64 * self.sign.value()
    }
}

/// An immutable word in the braid group on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BraidRecord", into = "BraidRecord")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct BraidRecord {
    strands: usize,
    letters: Vec<i64>,
}

impl TryFrom<BraidRecord> for BraidWord {
    type Error = BraidError;

    fn try_from(r: BraidRecord) -> Result<Self, Self::Error> {
        let letters = r
            .letters
            .iter()
            .map(|&v| {
                let sign = if v > 0 { Sign::Positive } else { Sign::Negative };
                Letter { index: v.unsigned_abs() as usize, sign }
            })
            .collect();
        BraidWord::new(r.strands, letters)
    }
}

impl From<BraidWord> for BraidRecord {
    fn from(b: BraidWord) -> Self {
        BraidRecord { strands: b.strands, letters: b.letters.iter().map(|l| l.signed()).collect() }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<BraidWord, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(BraidError::IndexOutOfRange { index: l.index, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word from signed generator indices such as `[1, -2, 1]`.
    pub fn from_signed(strands: usize, letters: &[i64]) -> Result<BraidWord, BraidError> {
        let mut out = Vec::with_capacity(letters.len());
        for &v in letters {
            if v == 0 {
                return Err(BraidError::IndexOutOfRange { index: 0, strands });
            }
            let sign = if v > 0 { Sign::Positive } else { Sign::Negative };
            out.push(Letter { index: v.unsigned_abs() as usize, sign });
        }
        BraidWord::new(strands, out)
    }

    /// Parses whitespace-separated signed integers, e.g. `"3 -2 1"`.
    pub fn parse(text: &str, strands: usize) -> Result<BraidWord, BraidError> {
        let mut letters = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            // Token boundaries are ASCII whitespace, so slicing stays on char boundaries.
            let token = &text[start..i];
            let value: i64 = token
                .parse()
                .map_err(|_| BraidError::Parse { position: start, token: token.to_string() })?;
            if value == 0 || value.unsigned_abs() > usize::MAX as u64 / 2 {
                return Err(BraidError::Parse { position: start, token: token.to_string() });
            }
            let sign = if value > 0 { Sign::Positive } else { Sign::Negative };
            letters.push(Letter { index: value.unsigned_abs() as usize, sign });
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.sign == Sign::Positive)
    }

    /// Text form accepted by [`BraidWord::parse`].
    pub fn to_text(&self) -> String {
        self.letters.iter().map(|l| l.signed().to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Disjoint union: `other` is placed on fresh strands to the right.
    pub fn block_sum(&self, other: &BraidWord) -> BraidWord {
        let shift = self.strands;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().map(|l| Letter { index: l.index + shift, sign: l.sign }));
        BraidWord { strands: self.strands + other.strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] on {} strands", self.to_text(), self.strands)
    }
}

/// `(σ₁σ₂⋯σ_{n−1})^p`, whose closure is the torus link T(n,p).
pub fn torus_braid(n: usize, p: usize) -> Result<BraidWord, BraidError> {
    if n < 2 || p < 1 {
        return Err(BraidError::Family(format!("torus({n},{p}) needs n >= 2 and p >= 1")));
    }
    let letters = (0..p).flat_map(|_| (1..n).map(Letter::pos)).collect();
    BraidWord::new(n, letters)
}

/// The m-block descending positive braid on n+m strands; block j is σ_{n+j−1}⋯σ_j.
///
/// Block j carries strand j (the j-th travelling strand) across the bundle of n.
pub fn knm_braid(n: usize, m: usize) -> Result<BraidWord, BraidError> {
    if n < 1 || m < 1 {
        return Err(BraidError::Family(format!("knm({n},{m}) needs n, m >= 1")));
    }
    let letters = (1..=m).flat_map(|j| (j..n + j).rev().map(Letter::pos)).collect();
    BraidWord::new(n + m, letters)
}

pub fn mirror_braid(b: &BraidWord) -> BraidWord {
    BraidWord {
        strands: b.strands,
        letters: b.letters.iter().map(|l| Letter { index: l.index, sign: l.sign.flip() }).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureInfo {
    /// `permutation[i]` is where the strand starting at position `i` (0-based) ends.
    pub permutation: Vec<usize>,
    pub components: usize,
    pub crossings: usize,
    pub writhe: i64,
}

pub fn closure_info(b: &BraidWord) -> ClosureInfo {
    // pos[s] = current position of strand s; track the inverse while applying letters.
    let k = b.strands;
    let mut at: Vec<usize> = (0..k).collect(); // at[position] = strand
    for l in &b.letters {
        at.swap(l.index - 1, l.index);
    }
    let mut permutation = vec![0; k];
    for (position, &strand) in at.iter().enumerate() {
        permutation[strand] = position;
    }
    let mut seen = vec![false; k];
    let mut components = 0;
    for s in 0..k {
        if !seen[s] {
            components += 1;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = permutation[t];
            }
        }
    }
    ClosureInfo {
        permutation,
        components,
        crossings: b.letters.len(),
        writhe: b.letters.iter().map(|l| l.sign.value()).sum(),
    }
}

/// Number of components of T(n,m) and K(n,m).
pub fn expected_components(n: usize, m: usize) -> usize {
    n.gcd(&m)
}
