//! Binary words and eventually constant 2-adic sequences.
//!
//! Digit 0 of a word is its least significant digit, printed first, so
//! `"110"` is the word with `w_0 = 1, w_1 = 1, w_2 = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{IetError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|d| **d > 1) {
            return Err(IetError::InvalidArgument(format!(
                "digit {d} is not binary"
            )));
        }
        Ok(Self { digits })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            digits: vec![0; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            digits: vec![1; len],
        }
    }

    /// The `len` lowest binary digits of `n`.
    pub fn from_int(mut n: u64, len: usize) -> Self {
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            digits.push((n & 1) as u8);
            n >>= 1;
        }
        Self { digits }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_all_ones(&self) -> bool {
        self.digits.iter().all(|d| *d == 1)
    }

    /// Position of the first 0.
    pub fn first_zero(&self) -> Option<usize> {
        self.digits.iter().position(|d| *d == 0)
    }

    pub fn push(&mut self, digit: u8) {
        debug_assert!(digit <= 1);
        self.digits.push(digit);
    }

    pub fn pushed(&self, digit: u8) -> Self {
        let mut w = self.clone();
        w.push(digit);
        w
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Self { digits }
    }

    /// All words of length `len`, in increasing binary value.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "word length {len} too large to enumerate");
        (0..1u64 << len).map(move |n| Word::from_int(n, len))
    }
}

/// Adds one with carry, keeping the length: the leading ones become zeros
/// and the first zero becomes a one. Undefined on all-ones words.
pub fn word_step(w: &Word) -> Result<Word> {
    let j = w
        .first_zero()
        .ok_or_else(|| IetError::UndefinedSuccessor(w.to_string()))?;
    let mut digits = w.digits.clone();
    for d in &mut digits[..j] {
        *d = 0;
    }
    digits[j] = 1;
    Ok(Word { digits })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "ε");
        }
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = IetError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ε" || s.is_empty() {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(IetError::Parse(format!("malformed word {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|digits| Word { digits })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    AllZeros,
    AllOnes,
}

impl Tail {
    fn digit(self) -> u8 {
        match self {
            Tail::AllZeros => 0,
            Tail::AllOnes => 1,
        }
    }
}

/// An eventually constant sequence `prefix` followed by `0̄` or `1̄`.
///
/// Stored normalized: the prefix never ends with the tail digit, so equal
/// sequences have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdicSeq {
    prefix: Word,
    tail: Tail,
}

impl AdicSeq {
    pub fn new(prefix: Word, tail: Tail) -> Self {
        let mut digits = prefix.digits;
        while digits.last() == Some(&tail.digit()) {
            digits.pop();
        }
        Self {
            prefix: Word { digits },
            tail,
        }
    }

    pub fn zero() -> Self {
        Self::new(Word::empty(), Tail::AllZeros)
    }

    pub fn all_ones() -> Self {
        Self::new(Word::empty(), Tail::AllOnes)
    }

    /// The nonnegative integer `n` as a 2-adic number.
    pub fn from_int(n: u64) -> Self {
        Self::new(Word::from_int(n, 64), Tail::AllZeros)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn digit(&self, k: usize) -> u8 {
        self.prefix
            .digits
            .get(k)
            .copied()
            .unwrap_or(self.tail.digit())
    }

    /// The first `len` digits.
    pub fn truncate(&self, len: usize) -> Word {
        Word {
            digits: (0..len).map(|k| self.digit(k)).collect(),
        }
    }

    /// Whether the sequence ends in ones.
    pub fn ends_in_ones(&self) -> bool {
        self.tail == Tail::AllOnes
    }
}

/// Addition by one with carry. The all-ones sequence has no successor here:
/// its carry never stops.
pub fn odometer_step(alpha: &AdicSeq) -> Result<AdicSeq> {
    if alpha.tail == Tail::AllOnes && alpha.prefix.is_empty() {
        return Err(IetError::UndefinedSuccessor(alpha.to_string()));
    }
    // a normalized prefix followed by the tail always has a 0 within
    // prefix.len() + 1 digits unless the whole sequence is ones
    let len = alpha.prefix.len() + 1;
    let stepped = word_step(&alpha.truncate(len)).expect("contains a zero");
    Ok(AdicSeq::new(stepped, alpha.tail))
}

impl fmt::Display for AdicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = match self.tail {
            Tail::AllZeros => "0\u{304}",
            Tail::AllOnes => "1\u{304}",
        };
        write!(f, "{}+{bar}", self.prefix)
    }
}

impl FromStr for AdicSeq {
    type Err = IetError;

    /// Accepts `prefix+0̄`, `prefix+1̄`, or the ASCII forms `prefix+0` and
    /// `prefix+1`.
    fn from_str(s: &str) -> Result<Self> {
        let (prefix, tail) = s
            .rsplit_once('+')
            .ok_or_else(|| IetError::Parse(format!("expected prefix+tail, got {s:?}")))?;
        let tail = match tail {
            "0\u{304}" | "0" => Tail::AllZeros,
            "1\u{304}" | "1" => Tail::AllOnes,
            _ => return Err(IetError::Parse(format!("malformed tail in {s:?}"))),
        };
        Ok(AdicSeq::new(prefix.parse()?, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_step_examples() {
        assert_eq!(word_step(&w("00")).unwrap(), w("10"));
        assert_eq!(word_step(&w("10")).unwrap(), w("01"));
        assert_eq!(word_step(&w("110")).unwrap(), w("001"));
        assert!(matches!(
            word_step(&w("111")),
            Err(IetError::UndefinedSuccessor(_))
        ));
        assert!(word_step(&Word::empty()).is_err());
    }

    #[test]
    fn odometer_examples() {
        let a = AdicSeq::new(w("110"), Tail::AllZeros);
        assert_eq!(
            odometer_step(&a).unwrap(),
            AdicSeq::new(w("001"), Tail::AllZeros)
        );
        assert_eq!(
            odometer_step(&AdicSeq::zero()).unwrap(),
            AdicSeq::new(w("1"), Tail::AllZeros)
        );
        let b = AdicSeq::new(w("0"), Tail::AllOnes);
        assert_eq!(odometer_step(&b).unwrap(), AdicSeq::all_ones());
        assert!(odometer_step(&AdicSeq::all_ones()).is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(w("110").to_string(), "110");
        assert_eq!(
            AdicSeq::new(w("1100"), Tail::AllZeros).to_string(),
            "11+0\u{304}"
        );
        assert_eq!(AdicSeq::all_ones().to_string(), "ε+1\u{304}");
        assert_eq!(
            "01+1".parse::<AdicSeq>().unwrap(),
            AdicSeq::new(w("0"), Tail::AllOnes)
        );
        assert!("01".parse::<AdicSeq>().is_err());
        assert!("012".parse::<Word>().is_err());
    }

    #[test]
    fn integers_count_up() {
        let mut a = AdicSeq::zero();
        for n in 0..300u64 {
            assert_eq!(a, AdicSeq::from_int(n));
            a = odometer_step(&a).unwrap();
        }
    }

    proptest! {
        #[test]
        fn word_step_is_plus_one(n in 0u64..(1 << 12), len in 1usize..13) {
            let word = Word::from_int(n, len);
            if word.is_all_ones() {
                prop_assert!(word_step(&word).is_err());
            } else {
                prop_assert_eq!(word_step(&word).unwrap(), Word::from_int(n + 1, len));
            }
        }

        #[test]
        fn odometer_commutes_with_truncation(bits in proptest::collection::vec(0u8..2, 0..12), ones in any::<bool>(), len in 1usize..20) {
            let tail = if ones { Tail::AllOnes } else { Tail::AllZeros };
            let a = AdicSeq::new(Word::from_digits(bits).unwrap(), tail);
            prop_assume!(a != AdicSeq::all_ones());
            let next = odometer_step(&a).unwrap();
            let t = a.truncate(len);
            if !t.is_all_ones() {
                prop_assert_eq!(word_step(&t).unwrap(), next.truncate(len));
            }
        }
    }
}
