//! The XOR view of coin-randomized detector records.
//!
//! A run with the exit splitter fixed at "heads" reads out a known pattern,
//! so per-trial coin flips act on that pattern exactly like a one-time pad:
//! the published record is ciphertext, the coin history is the key, and a
//! single XOR restores the pattern. The bit conventions live in
//! [`encode_states`] and [`key_bits`].

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::trials::{Coin, TrialRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CipherError {
    #[error("operand lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid bit symbol {found:?} at position {position}; expected '0' or '1'")]
    InvalidBit { position: usize, found: char },
    #[error("invalid coin symbol {found:?} at position {position}; expected 'H' or 'T'")]
    InvalidCoin { position: usize, found: char },
    #[error("record {index} carries no coin value")]
    MissingCoin { index: usize },
}

/// Fixed-length bit sequence with `0`/`1` text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<Self, CipherError> {
        s.trim_end_matches(['\n', '\r'])
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(CipherError::InvalidBit { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// Ordered list of per-trial coin values with `H`/`T` text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinHistory(Vec<Coin>);

impl CoinHistory {
    pub fn new(coins: Vec<Coin>) -> Self {
        Self(coins)
    }

    /// Extracts the coin column from trial records, insisting that every
    /// record has one.
    pub fn from_records(records: &[TrialRecord]) -> Result<Self, CipherError> {
        records
            .iter()
            .enumerate()
            .map(|(index, r)| r.coin.ok_or(CipherError::MissingCoin { index }))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn coins(&self) -> &[Coin] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CoinHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            f.write_str(match c {
                Coin::Heads => "H",
                Coin::Tails => "T",
            })?;
        }
        Ok(())
    }
}

impl FromStr for CoinHistory {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<Self, CipherError> {
        s.trim_end_matches(['\n', '\r'])
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                'H' => Ok(Coin::Heads),
                'T' => Ok(Coin::Tails),
                found => Err(CipherError::InvalidCoin { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// State labels: heads-device trials read out `1`, tails-device trials `0`.
pub fn encode_states(coins: &CoinHistory) -> BitString {
    BitString(coins.0.iter().map(|&c| c == Coin::Heads).collect())
}

/// Key bits: tails maps to `1`, heads to `0`.
///
/// The convention follows from the pad equation `ciphertext = plaintext XOR
/// key` once the fixed-orientation run is taken as the plaintext: that run
/// is all heads, i.e. all `1`s, and a tails flip toggles the recorded label
/// to `0`, so the key bit must be `1` exactly on tails trials.
pub fn key_bits(coins: &CoinHistory) -> BitString {
    BitString(coins.0.iter().map(|&c| c == Coin::Tails).collect())
}

/// Bitwise XOR of equal-length operands; its own inverse, so the same call
/// both encrypts and decrypts.
pub fn vernam(text: &BitString, key: &BitString) -> Result<BitString, CipherError> {
    if text.len() != key.len() {
        return Err(CipherError::LengthMismatch { left: text.len(), right: key.len() });
    }
    Ok(BitString(text.0.iter().zip(&key.0).map(|(&t, &k)| t ^ k).collect()))
}

/// Splits records into (heads, tails) sublists according to a coin history
/// of the same length, preserving order.
pub fn partition_by_coins(
    records: &[TrialRecord],
    coins: &CoinHistory,
) -> Result<(Vec<TrialRecord>, Vec<TrialRecord>), CipherError> {
    if records.len() != coins.len() {
        return Err(CipherError::LengthMismatch { left: records.len(), right: coins.len() });
    }
    let mut heads = Vec::new();
    let mut tails = Vec::new();
    for (r, &c) in records.iter().zip(coins.coins()) {
        match c {
            Coin::Heads => heads.push(*r),
            Coin::Tails => tails.push(*r),
        }
    }
    Ok((heads, tails))
}
