//! The numerical semigroup value type.
//!
//! A semigroup is stored as a membership bitmap over `0..=conductor`; every
//! integer at or beyond the conductor is implicitly a member. Multiplicity,
//! Frobenius number, genus and the minimal generating set are computed once at
//! construction and cached.

use std::fmt;

use num_integer::Integer;
use smallvec::SmallVec;
use thiserror::Error;

pub(crate) type Words = SmallVec<[u64; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("gap set is not the complement of a semigroup: {a} + {b} = {} is a gap", a + b)]
    NotClosed { a: u32, b: u32 },
    #[error("0 can never be a gap")]
    ZeroGap,
    #[error("malformed semigroup text {0:?}")]
    Parse(String),
}

#[inline]
pub(crate) fn word_count(bits: u32) -> usize {
    (bits as usize).div_ceil(64)
}

#[inline]
pub(crate) fn test_bit(words: &[u64], i: u32) -> bool {
    words[(i / 64) as usize] >> (i % 64) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: u32) {
    words[(i / 64) as usize] |= 1 << (i % 64);
}

#[inline]
pub(crate) fn clear_bit(words: &mut [u64], i: u32) {
    words[(i / 64) as usize] &= !(1 << (i % 64));
}

/// A numerical semigroup: a cofinite additive submonoid of the nonnegative
/// integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Semigroup {
    /// bit `i` set iff `i` is a member, for `0 <= i <= conductor`
    members: Words,
    frobenius: i32,
    genus: u32,
    multiplicity: u32,
    generators: Vec<u32>,
}

impl Semigroup {
    /// The semigroup of all nonnegative integers, root of the tree.
    pub fn trivial() -> Self {
        Semigroup {
            members: SmallVec::from_slice(&[1]),
            frobenius: -1,
            genus: 0,
            multiplicity: 1,
            generators: vec![1],
        }
    }

    /// Builds the semigroup whose gaps are exactly `gaps`.
    ///
    /// Fails with [`SemigroupError::NotClosed`] naming the lexicographically
    /// smallest pair of members whose sum is a gap.
    pub fn from_gap_set<I: IntoIterator<Item = u32>>(gaps: I) -> Result<Self, SemigroupError> {
        let mut gaps: Vec<u32> = gaps.into_iter().collect();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.first() == Some(&0) {
            return Err(SemigroupError::ZeroGap);
        }
        let frobenius = match gaps.last() {
            None => return Ok(Self::trivial()),
            Some(&f) => f,
        };
        let conductor = frobenius + 1;
        let mut members: Words = SmallVec::from_elem(!0, word_count(conductor + 1));
        for &gap in &gaps {
            clear_bit(&mut members, gap);
        }
        let top = conductor + 1;
        let words = members.len();
        if top % 64 != 0 {
            members[words - 1] &= (1u64 << (top % 64)) - 1;
        }
        for a in 1..=frobenius / 2 {
            if !test_bit(&members, a) {
                continue;
            }
            for b in a..=frobenius - a {
                if test_bit(&members, b) && !test_bit(&members, a + b) {
                    return Err(SemigroupError::NotClosed { a, b });
                }
            }
        }
        Ok(Self::from_closed_bits(members, frobenius as i32))
    }

    /// Builds from a membership bitmap already known to be closed, recomputing
    /// every cached field. `members` must cover `0..=frobenius+1` with nothing
    /// set above that range.
    pub(crate) fn from_closed_bits(members: Words, frobenius: i32) -> Self {
        if frobenius < 0 {
            return Self::trivial();
        }
        let f = frobenius as u32;
        let genus = (f + 2) - members.iter().map(|w| w.count_ones()).sum::<u32>();
        let multiplicity = (1..=f + 1).find(|&i| test_bit(&members, i)).unwrap();
        let generators = generators_by_shifts(&members, f, multiplicity);
        Semigroup {
            members,
            frobenius,
            genus,
            multiplicity,
            generators,
        }
    }

    /// Assembles a semigroup whose generators were derived elsewhere.
    pub(crate) fn from_raw_parts(
        members: Words,
        frobenius: i32,
        genus: u32,
        multiplicity: u32,
        generators: Vec<u32>,
    ) -> Self {
        Semigroup {
            members,
            frobenius,
            genus,
            multiplicity,
            generators,
        }
    }

    pub(crate) fn member_words(&self) -> &[u64] {
        &self.members
    }

    pub fn frobenius(&self) -> i32 {
        self.frobenius
    }

    pub fn conductor(&self) -> u32 {
        (self.frobenius + 1) as u32
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn is_trivial(&self) -> bool {
        self.frobenius < 0
    }

    /// `true` iff `n` belongs to the semigroup.
    #[inline]
    pub fn contains(&self, n: u32) -> bool {
        n >= self.conductor() || test_bit(&self.members, n)
    }

    /// Sorted gap list.
    pub fn gaps(&self) -> Vec<u32> {
        (1..self.conductor()).filter(|&i| !self.contains(i)).collect()
    }

    /// Members strictly below the Frobenius number, ascending (includes 0
    /// whenever the Frobenius number is positive).
    pub fn left_elements(&self) -> Vec<u32> {
        if self.frobenius <= 0 {
            return Vec::new();
        }
        (0..self.frobenius as u32).filter(|&i| self.contains(i)).collect()
    }

    /// Left elements without 0.
    pub fn nonzero_left_elements(&self) -> Vec<u32> {
        if self.frobenius <= 0 {
            return Vec::new();
        }
        (1..self.frobenius as u32).filter(|&i| self.contains(i)).collect()
    }

    pub fn minimal_generators(&self) -> &[u32] {
        &self.generators
    }

    /// Minimal generators above the Frobenius number; removing one of them
    /// gives a child in the semigroup tree.
    pub fn effective_generators(&self) -> impl Iterator<Item = u32> + '_ {
        let f = self.frobenius;
        self.generators
            .iter()
            .copied()
            .filter(move |&x| x as i64 > f as i64)
    }

    /// gcd of the nonzero left elements, 0 when there are none.
    pub fn gcd_left(&self) -> u32 {
        let mut acc = 0u32;
        if self.frobenius <= 0 {
            return acc;
        }
        for i in self.multiplicity..self.frobenius as u32 {
            if test_bit(&self.members, i) {
                acc = acc.gcd(&i);
                if acc == 1 {
                    break;
                }
            }
        }
        acc
    }

    /// Whether the semigroup lies on an infinite chain of the tree, decided by
    /// its nonzero left elements not being coprime. An empty set of left
    /// elements has gcd 0 and counts as not coprime.
    pub fn in_infinite_chain(&self) -> bool {
        self.gcd_left() != 1
    }

    /// Whether two consecutive integers are both left elements.
    pub fn has_consecutive_left_elements(&self) -> bool {
        if self.frobenius <= 1 {
            return false;
        }
        let f = self.frobenius as u32;
        (self.multiplicity..f - 1).any(|n| test_bit(&self.members, n) && test_bit(&self.members, n + 1))
    }

    /// Comma-separated sorted gap list, e.g. `1,2,5`; empty for the trivial
    /// semigroup.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        for (k, g) in self.gaps().into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&g.to_string());
        }
        out
    }

    pub fn from_canonical_string(text: &str) -> Result<Self, SemigroupError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::trivial());
        }
        let gaps = text
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SemigroupError::Parse(text.to_string()))?;
        Self::from_gap_set(gaps)
    }

    /// Hex encoding of the gap bitmap: byte `k` holds integers `8k..8k+8`,
    /// bit `j` of that byte standing for `8k+j`. Bytes appear in increasing
    /// order, each as two lowercase hex digits. The trivial semigroup is `00`.
    pub fn canonical_id(&self) -> String {
        let bytes = (self.conductor() as usize).div_ceil(8).max(1);
        let mut raw = vec![0u8; bytes];
        for gap in self.gaps() {
            raw[(gap / 8) as usize] |= 1 << (gap % 8);
        }
        raw.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_canonical_id(id: &str) -> Result<Self, SemigroupError> {
        let err = || SemigroupError::Parse(id.to_string());
        if id.is_empty() || !id.len().is_multiple_of(2) {
            return Err(err());
        }
        let mut gaps = Vec::new();
        for (k, chunk) in id.as_bytes().chunks(2).enumerate() {
            let text = std::str::from_utf8(chunk).map_err(|_| err())?;
            let byte = u8::from_str_radix(text, 16).map_err(|_| err())?;
            for j in 0..8 {
                if byte >> j & 1 == 1 {
                    gaps.push(8 * k as u32 + j);
                }
            }
        }
        Self::from_gap_set(gaps)
    }
}

/// Minimal generators of the semigroup described by `members` (covering
/// `0..=f+1`), found by marking every sum of two nonzero members up to
/// `f + m` with shifted copies of the bitmap.
fn generators_by_shifts(members: &[u64], f: u32, m: u32) -> Vec<u32> {
    let limit = f + m;
    let words = word_count(limit + 1);
    let mut ext: Words = SmallVec::from_elem(0, words);
    for i in 1..=limit {
        if i > f || test_bit(members, i) {
            set_bit(&mut ext, i);
        }
    }
    let mut sums: Words = SmallVec::from_elem(0, words);
    for s in m..=limit / 2 {
        if !test_bit(&ext, s) {
            continue;
        }
        let (ws, bs) = ((s / 64) as usize, s % 64);
        for k in (ws..words).rev() {
            let lo = ext[k - ws] << bs;
            let hi = if bs != 0 && k > ws { ext[k - ws - 1] >> (64 - bs) } else { 0 };
            sums[k] |= lo | hi;
        }
    }
    (m..=limit)
        .filter(|&x| test_bit(&ext, x) && !test_bit(&sums, x))
        .collect()
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Semigroup{{gaps:[{}], F:{}, g:{}, m:{}, gens:{:?}}}",
            self.canonical_string(),
            self.frobenius,
            self.genus,
            self.multiplicity,
            self.generators
        )
    }
}

impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}
