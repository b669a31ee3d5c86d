//! Theta characteristics: vectors `m = (a; b)` in `F_2^{2g}`, their parity,
//! the symplectic pairing `e(m, n)`, and the canonical per-parity ordering
//! used as the column order of every operator matrix in this crate.

use crate::error::{Error, Result};
use crate::f2::BitVec;
use std::fmt;
use std::str::FromStr;

/// Parity of a characteristic: even iff `a'b = 0` over `F_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of even characteristics in genus `g`: `2^(g-1) (2^g + 1)`.
pub fn count_even(g: usize) -> usize {
    (1 << (g - 1)) * ((1 << g) + 1)
}

/// Number of odd characteristics in genus `g`: `2^(g-1) (2^g - 1)`.
pub fn count_odd(g: usize) -> usize {
    (1 << (g - 1)) * ((1 << g) - 1)
}

/// A characteristic `m = (a; b)` with `a, b` in `F_2^g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Characteristic {
    g: usize,
    a: BitVec,
    b: BitVec,
}

impl Characteristic {
    pub fn new(a: BitVec, b: BitVec) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "characteristic halves of lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(Characteristic { g: a.len(), a, b })
    }

    pub fn zero(g: usize) -> Self {
        Characteristic {
            g,
            a: BitVec::zeros(g),
            b: BitVec::zeros(g),
        }
    }

    /// The fixed odd base characteristic `(1,0,...,0; 1,0,...,0)`.
    pub fn odd_base(g: usize) -> Self {
        let mut a = BitVec::zeros(g);
        let mut b = BitVec::zeros(g);
        a.set(0, true);
        b.set(0, true);
        Characteristic { g, a, b }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn a(&self) -> &BitVec {
        &self.a
    }

    pub fn b(&self) -> &BitVec {
        &self.b
    }

    pub fn parity(&self) -> Parity {
        if self.a.dot(&self.b).expect("equal lengths by construction") {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Packs `(a; b)` into a `2g`-bit word: bits `0..g` hold `a`, bits
    /// `g..2g` hold `b`. This is the layout the affine action operates on.
    pub fn word(&self) -> u64 {
        self.a.word() | (self.b.word() << self.g)
    }

    pub fn from_word(g: usize, word: u64) -> Self {
        let a = BitVec::from_word(g, word);
        let b = BitVec::from_word(g, word >> g);
        Characteristic { g, a, b }
    }

    /// Lexicographic code of the bit string `a_1 .. a_g b_1 .. b_g`.
    /// Sorting by this code gives the canonical ordering.
    pub fn code(&self) -> u32 {
        let mut c = 0u32;
        for bit in self.a.iter_bits().chain(self.b.iter_bits()) {
            c = (c << 1) | u32::from(bit);
        }
        c
    }

    pub fn from_code(g: usize, code: u32) -> Self {
        let mut a = BitVec::zeros(g);
        let mut b = BitVec::zeros(g);
        for i in 0..g {
            a.set(i, (code >> (2 * g - 1 - i)) & 1 == 1);
            b.set(i, (code >> (g - 1 - i)) & 1 == 1);
        }
        Characteristic { g, a, b }
    }

    /// Symplectic pairing sign `e(m, n) = (-1)^(a'beta + b'alpha)`.
    pub fn pairing(&self, other: &Characteristic) -> Result<i64> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        let x = self.a.dot(&other.b)? ^ self.b.dot(&other.a)?;
        Ok(if x { -1 } else { 1 })
    }

    /// Canonical integer lift: entries of `a`, `b` as `0`/`1`.
    pub fn lift(&self) -> (Vec<i64>, Vec<i64>) {
        let a = self.a.iter_bits().map(i64::from).collect();
        let b = self.b.iter_bits().map(i64::from).collect();
        (a, b)
    }
}

impl Ord for Characteristic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.g, self.code()).cmp(&(other.g, other.code()))
    }
}

impl PartialOrd for Characteristic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Characteristic {
    /// Canonical text form `a_1...a_g|b_1...b_g`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.a.iter_bits() {
            write!(f, "{}", u8::from(bit))?;
        }
        f.write_str("|")?;
        for bit in self.b.iter_bits() {
            write!(f, "{}", u8::from(bit))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Characteristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadCharacteristic(s.to_string());
        let (sa, sb) = s.split_once('|').ok_or_else(bad)?;
        if sa.is_empty() || sa.len() != sb.len() {
            return Err(bad());
        }
        let g = sa.len();
        let mut a = BitVec::zeros(g);
        let mut b = BitVec::zeros(g);
        for (i, ch) in sa.chars().enumerate() {
            a.set(i, matches!(ch, '1'));
            if !matches!(ch, '0' | '1') {
                return Err(bad());
            }
        }
        for (i, ch) in sb.chars().enumerate() {
            b.set(i, matches!(ch, '1'));
            if !matches!(ch, '0' | '1') {
                return Err(bad());
            }
        }
        Characteristic::new(a, b)
    }
}

/// Canonical tables of characteristics in genus `g`: both parity sectors in
/// lexicographic order, with constant-time word-to-index lookup.
pub struct CharTable {
    g: usize,
    evens: Vec<Characteristic>,
    odds: Vec<Characteristic>,
    /// Position of each packed word within its parity sector.
    pos: Vec<u16>,
}

impl CharTable {
    pub fn new(g: usize) -> Self {
        assert!((1..=8).contains(&g), "characteristic tables need 1 <= g <= 8");
        let mut all: Vec<Characteristic> = (0..(1u32 << (2 * g)))
            .map(|c| Characteristic::from_code(g, c))
            .collect();
        all.sort();
        let mut evens = Vec::new();
        let mut odds = Vec::new();
        let mut pos = vec![0u16; 1 << (2 * g)];
        for m in all {
            match m.parity() {
                Parity::Even => {
                    pos[m.word() as usize] = evens.len() as u16;
                    evens.push(m);
                }
                Parity::Odd => {
                    pos[m.word() as usize] = odds.len() as u16;
                    odds.push(m);
                }
            }
        }
        CharTable { g, evens, odds, pos }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn sector(&self, parity: Parity) -> &[Characteristic] {
        match parity {
            Parity::Even => &self.evens,
            Parity::Odd => &self.odds,
        }
    }

    /// Index of `m` within its own parity sector.
    pub fn index_of(&self, m: &Characteristic) -> usize {
        debug_assert_eq!(m.genus(), self.g);
        self.pos[m.word() as usize] as usize
    }

    pub fn index_of_word(&self, word: u64) -> usize {
        self.pos[word as usize] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_small_cases() {
        let m: Characteristic = "0|0".parse().unwrap();
        assert_eq!(m.parity(), Parity::Even);
        let m: Characteristic = "1|1".parse().unwrap();
        assert_eq!(m.parity(), Parity::Odd);
    }

    #[test]
    fn parity_counts_exhaustive_up_to_genus_4() {
        for g in 1..=4 {
            let t = CharTable::new(g);
            assert_eq!(t.sector(Parity::Even).len(), count_even(g));
            assert_eq!(t.sector(Parity::Odd).len(), count_odd(g));
        }
    }

    #[test]
    fn pairing_is_symmetric_and_unit_on_diagonal() {
        let t = CharTable::new(2);
        for m in t.sector(Parity::Even).iter().chain(t.sector(Parity::Odd)) {
            assert_eq!(m.pairing(m).unwrap(), 1);
            for n in t.sector(Parity::Even) {
                assert_eq!(m.pairing(n).unwrap(), n.pairing(m).unwrap());
            }
        }
    }

    #[test]
    fn genus_one_pairing_values() {
        let m: Characteristic = "0|1".parse().unwrap();
        let n: Characteristic = "1|0".parse().unwrap();
        assert_eq!(m.pairing(&n).unwrap(), -1);
    }

    #[test]
    fn genus_one_even_pairing_matrix() {
        // canonical even order (0;0), (0;1), (1;0)
        let t = CharTable::new(1);
        let ev = t.sector(Parity::Even);
        let expect = [[1, 1, 1], [1, 1, -1], [1, -1, 1]];
        for (i, m) in ev.iter().enumerate() {
            for (j, n) in ev.iter().enumerate() {
                assert_eq!(m.pairing(n).unwrap(), expect[i][j], "at ({i},{j})");
            }
        }
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let t = CharTable::new(1);
        let strs: Vec<String> = t.sector(Parity::Even).iter().map(|m| m.to_string()).collect();
        assert_eq!(strs, vec!["0|0", "0|1", "1|0"]);
        let t2 = CharTable::new(2);
        let odd_strs: Vec<String> = t2.sector(Parity::Odd).iter().map(|m| m.to_string()).collect();
        assert_eq!(
            odd_strs,
            vec!["01|01", "01|11", "10|10", "10|11", "11|01", "11|10"]
        );
    }

    #[test]
    fn parse_rejects_malformed_strings() {
        assert!("01|1".parse::<Characteristic>().is_err());
        assert!("0110".parse::<Characteristic>().is_err());
        assert!("0a|01".parse::<Characteristic>().is_err());
        assert!("|".parse::<Characteristic>().is_err());
    }

    #[test]
    fn code_word_roundtrip() {
        for g in 1..=4 {
            for c in 0..(1u32 << (2 * g)) {
                let m = Characteristic::from_code(g, c);
                assert_eq!(m.code(), c);
                assert_eq!(Characteristic::from_word(g, m.word()), m);
            }
        }
    }

    #[test]
    fn pairing_rejects_genus_mismatch() {
        let m = Characteristic::zero(1);
        let n = Characteristic::zero(2);
        assert!(m.pairing(&n).is_err());
    }

    #[test]
    fn odd_base_is_odd() {
        for g in 1..=4 {
            assert_eq!(Characteristic::odd_base(g).parity(), Parity::Odd);
        }
    }
}
