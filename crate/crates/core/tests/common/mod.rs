//! Brute-force reference computations that share no code with the library.
//!
//! A gap set is a `u64` mask, bit `i` standing for the integer `i`.

#![allow(dead_code)]

/// Every gap set of size `g` inside `[1, 2g-1]` whose complement is closed
/// under addition. This is every semigroup of genus `g`, since the Frobenius
/// number never exceeds `2g - 1`.
pub fn semigroups_of_genus(g: u32) -> Vec<u64> {
    if g == 0 {
        return vec![0];
    }
    let width = 2 * g - 1;
    assert!(width < 63);
    let mut out = Vec::new();
    // Gosper's hack over subsets of {1, .., width}, stored shifted by one
    let mut combo: u64 = (1u64 << g) - 1;
    let limit = 1u64 << width;
    while combo < limit {
        let gaps = combo << 1;
        if complement_is_closed(gaps, width) {
            out.push(gaps);
        }
        let c = combo & combo.wrapping_neg();
        let r = combo + c;
        combo = (((r ^ combo) >> 2) / c) | r;
    }
    out
}

fn complement_is_closed(gaps: u64, width: u32) -> bool {
    let member = |i: u32| i > width || gaps >> i & 1 == 0;
    for a in 1..=width {
        if !member(a) {
            continue;
        }
        for b in a..=width - a {
            if member(b) && !member(a + b) {
                return false;
            }
        }
    }
    true
}

pub fn frobenius(gaps: u64) -> i64 {
    if gaps == 0 {
        -1
    } else {
        63 - gaps.leading_zeros() as i64
    }
}

pub fn multiplicity(gaps: u64) -> u32 {
    (!gaps & !1).trailing_zeros()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// gcd of the nonzero members below the Frobenius number, 0 if none.
pub fn gcd_left(gaps: u64) -> u32 {
    let f = frobenius(gaps);
    (1..f.max(0) as u32)
        .filter(|&i| gaps >> i & 1 == 0)
        .fold(0, gcd)
}

pub fn gap_list(gaps: u64) -> Vec<u32> {
    (1..64).filter(|&i| gaps >> i & 1 == 1).collect()
}

/// n_0..=n_max by exhaustive subset search.
pub fn counts(max_genus: u32) -> Vec<u64> {
    (0..=max_genus).map(|g| semigroups_of_genus(g).len() as u64).collect()
}
