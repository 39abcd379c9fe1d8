//! Per-genus statistics of the multiplicity/Frobenius windows and of
//! membership in infinite chains.
//!
//! With `γ = (5+√5)/10`, a semigroup `S` of genus `g` is in
//!
//! * `A^m(ε₁)` when `(γ-ε₁)g < m(S) < (γ+ε₁)g`,
//! * `A^F(ε₂)` when `(2-ε₂)m(S) < F(S) < (2+ε₂)m(S)`,
//! * `A^{m,F}` when it is in both,
//! * `B(ε)` when `(γ-ε)g < m(S) < (γ+ε)g` and `(2-ε)γg < F(S) < (2+ε)γg`,
//! * the not-infinite set when the gcd of its left elements is 1.
//!
//! Every boundary lives in `Q(√5)`, so all comparisons are exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::quadratic::QuadSqrt5;
use crate::semigroup::Semigroup;
use crate::tree::{Traversal, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("genus {0} is below 6, where the epsilon bound is not positive")]
    GenusTooSmall(u32),
    #[error("semigroup has genus {actual}, expected {expected}")]
    GenusMismatch { expected: u32, actual: u32 },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),
    #[error("epsilon {epsilon} exceeds the admissible bound {bound} at genus {genus}")]
    EpsilonOutOfRange { genus: u32, epsilon: String, bound: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `γ = 1/2 + √5/10`.
pub fn gamma() -> QuadSqrt5 {
    QuadSqrt5::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 10.into()))
}

/// Largest ε for which every semigroup of `B_g(ε)` is guaranteed two
/// consecutive left elements: `(3γ - 2 - 1/g) / (1 + 3γ)`.
pub fn epsilon_max(g: u32) -> Result<QuadSqrt5, StatsError> {
    if g < 6 {
        return Err(StatsError::GenusTooSmall(g));
    }
    let three_gamma = QuadSqrt5::from_integer(3) * gamma();
    let num = three_gamma.clone() - QuadSqrt5::from_integer(2) - QuadSqrt5::from_ratio(1, g as i64);
    Ok(num / (QuadSqrt5::from_integer(1) + three_gamma))
}

/// The limit of [`epsilon_max`] as the genus grows.
pub fn epsilon_max_limit() -> QuadSqrt5 {
    let three_gamma = QuadSqrt5::from_integer(3) * gamma();
    (three_gamma.clone() - QuadSqrt5::from_integer(2)) / (QuadSqrt5::from_integer(1) + three_gamma)
}

/// The triple `(ε, ε₁, ε₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonParams {
    epsilon: QuadSqrt5,
    epsilon1: QuadSqrt5,
    epsilon2: QuadSqrt5,
}

impl EpsilonParams {
    /// `ε₁ = γε/(4+ε)` and `ε₂ = ε/2`.
    pub fn linked(epsilon: QuadSqrt5) -> Result<Self, StatsError> {
        if !epsilon.is_positive() {
            return Err(StatsError::NonPositiveEpsilon(epsilon.to_string()));
        }
        let epsilon1 = gamma() * epsilon.clone() / (QuadSqrt5::from_integer(4) + epsilon.clone());
        let epsilon2 = epsilon.clone() / QuadSqrt5::from_integer(2);
        Ok(EpsilonParams {
            epsilon,
            epsilon1,
            epsilon2,
        })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, StatsError> {
        Self::linked(QuadSqrt5::from_ratio(num, den))
    }

    /// Sets the three tolerances independently, e.g. `ε₁ = ε₂` for looking
    /// at the multiplicity and Frobenius windows on their own.
    pub fn independent(epsilon: QuadSqrt5, epsilon1: QuadSqrt5, epsilon2: QuadSqrt5) -> Result<Self, StatsError> {
        for e in [&epsilon, &epsilon1, &epsilon2] {
            if !e.is_positive() {
                return Err(StatsError::NonPositiveEpsilon(e.to_string()));
            }
        }
        Ok(EpsilonParams {
            epsilon,
            epsilon1,
            epsilon2,
        })
    }

    pub fn epsilon(&self) -> &QuadSqrt5 {
        &self.epsilon
    }

    pub fn epsilon1(&self) -> &QuadSqrt5 {
        &self.epsilon1
    }

    pub fn epsilon2(&self) -> &QuadSqrt5 {
        &self.epsilon2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClassFlags {
    pub in_am: bool,
    pub in_af: bool,
    pub in_amf: bool,
    pub in_b: bool,
    /// gcd of the left elements is 1
    pub not_infinite: bool,
}

/// `lo < x < hi`, strictly.
fn strictly_between(x: i64, lo: &QuadSqrt5, hi: &QuadSqrt5) -> bool {
    let x = QuadSqrt5::from_integer(x);
    lo.cmp(&x) == Ordering::Less && x.cmp(hi) == Ordering::Less
}

/// Classifies `s`, which must have genus `g`, by direct exact comparison
/// against every boundary.
pub fn classify(s: &Semigroup, g: u32, p: &EpsilonParams) -> Result<ClassFlags, StatsError> {
    if s.genus() != g {
        return Err(StatsError::GenusMismatch {
            expected: g,
            actual: s.genus(),
        });
    }
    let gq = QuadSqrt5::from_integer(g as i64);
    let m = s.multiplicity() as i64;
    let f = s.frobenius() as i64;
    let mq = QuadSqrt5::from_integer(m);
    let two = QuadSqrt5::from_integer(2);
    let gg = gamma() * gq.clone();

    let in_am = strictly_between(
        m,
        &((gamma() - p.epsilon1.clone()) * gq.clone()),
        &((gamma() + p.epsilon1.clone()) * gq.clone()),
    );
    let in_af = strictly_between(
        f,
        &((two.clone() - p.epsilon2.clone()) * mq.clone()),
        &((two.clone() + p.epsilon2.clone()) * mq),
    );
    let in_b = strictly_between(
        m,
        &((gamma() - p.epsilon.clone()) * gq.clone()),
        &((gamma() + p.epsilon.clone()) * gq),
    ) && strictly_between(
        f,
        &((two.clone() - p.epsilon.clone()) * gg.clone()),
        &((two + p.epsilon.clone()) * gg),
    );
    Ok(ClassFlags {
        in_am,
        in_af,
        in_amf: in_am && in_af,
        in_b,
        not_infinite: !s.in_infinite_chain(),
    })
}

/// Inclusive integer range, empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IntRange {
    lo: i64,
    hi: i64,
}

impl IntRange {
    /// Integers strictly between two exact bounds.
    fn open(lo: &QuadSqrt5, hi: &QuadSqrt5) -> Self {
        let to_i64 = |n: BigInt| n.to_i64().expect("window bound fits in i64");
        IntRange {
            lo: to_i64(lo.floor()) + 1,
            hi: to_i64(hi.ceil()) - 1,
        }
    }

    #[inline]
    fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// The windows of one genus turned into integer ranges once, so that
/// classifying a semigroup costs a handful of integer comparisons.
#[derive(Debug, Clone)]
pub struct GenusWindows {
    genus: u32,
    am: IntRange,
    b_m: IntRange,
    b_f: IntRange,
    /// indexed by multiplicity, `0..=genus+1`
    af: Vec<IntRange>,
}

impl GenusWindows {
    pub fn new(g: u32, p: &EpsilonParams) -> Self {
        let gq = QuadSqrt5::from_integer(g as i64);
        let two = QuadSqrt5::from_integer(2);
        let gg = gamma() * gq.clone();
        let am = IntRange::open(
            &((gamma() - p.epsilon1.clone()) * gq.clone()),
            &((gamma() + p.epsilon1.clone()) * gq.clone()),
        );
        let b_m = IntRange::open(
            &((gamma() - p.epsilon.clone()) * gq.clone()),
            &((gamma() + p.epsilon.clone()) * gq),
        );
        let b_f = IntRange::open(
            &((two.clone() - p.epsilon.clone()) * gg.clone()),
            &((two.clone() + p.epsilon.clone()) * gg),
        );
        let low = two.clone() - p.epsilon2.clone();
        let high = two + p.epsilon2.clone();
        let af = (0..=g as i64 + 1)
            .map(|m| {
                let mq = QuadSqrt5::from_integer(m);
                IntRange::open(&(low.clone() * mq.clone()), &(high.clone() * mq))
            })
            .collect();
        GenusWindows {
            genus: g,
            am,
            b_m,
            b_f,
            af,
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Same result as [`classify`]; the genus is assumed to match.
    pub fn classify(&self, s: &Semigroup) -> ClassFlags {
        debug_assert_eq!(s.genus(), self.genus);
        let m = s.multiplicity() as i64;
        let f = s.frobenius() as i64;
        let in_am = self.am.contains(m);
        let in_af = self.af[m as usize].contains(f);
        ClassFlags {
            in_am,
            in_af,
            in_amf: in_am && in_af,
            in_b: self.b_m.contains(m) && self.b_f.contains(f),
            not_infinite: !s.in_infinite_chain(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GenusStats {
    pub genus: u32,
    pub n_g: u64,
    #[serde(rename = "count_Am")]
    pub count_am: u64,
    #[serde(rename = "count_AF")]
    pub count_af: u64,
    #[serde(rename = "count_AmF")]
    pub count_amf: u64,
    #[serde(rename = "count_B")]
    pub count_b: u64,
    pub count_not_infinite: u64,
    pub count_infinite: u64,
}

pub const CSV_HEADER: &str = "genus,n_g,count_Am,count_AF,count_AmF,count_B,count_not_infinite,count_infinite";

impl GenusStats {
    pub fn empty(genus: u32) -> Self {
        GenusStats {
            genus,
            ..Default::default()
        }
    }

    pub fn add(&mut self, flags: ClassFlags) {
        self.n_g += 1;
        self.count_am += flags.in_am as u64;
        self.count_af += flags.in_af as u64;
        self.count_amf += flags.in_amf as u64;
        self.count_b += flags.in_b as u64;
        if flags.not_infinite {
            self.count_not_infinite += 1;
        } else {
            self.count_infinite += 1;
        }
    }

    pub fn merge(&mut self, other: &GenusStats) {
        debug_assert_eq!(self.genus, other.genus);
        self.n_g += other.n_g;
        self.count_am += other.count_am;
        self.count_af += other.count_af;
        self.count_amf += other.count_amf;
        self.count_b += other.count_b;
        self.count_not_infinite += other.count_not_infinite;
        self.count_infinite += other.count_infinite;
    }

    fn ratio(&self, count: u64) -> f64 {
        if self.n_g == 0 {
            0.0
        } else {
            count as f64 / self.n_g as f64
        }
    }

    pub fn ratio_am(&self) -> f64 {
        self.ratio(self.count_am)
    }

    pub fn ratio_af(&self) -> f64 {
        self.ratio(self.count_af)
    }

    pub fn ratio_amf(&self) -> f64 {
        self.ratio(self.count_amf)
    }

    pub fn ratio_b(&self) -> f64 {
        self.ratio(self.count_b)
    }

    pub fn ratio_not_infinite(&self) -> f64 {
        self.ratio(self.count_not_infinite)
    }

    pub fn ratio_infinite(&self) -> f64 {
        self.ratio(self.count_infinite)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.genus,
            self.n_g,
            self.count_am,
            self.count_af,
            self.count_amf,
            self.count_b,
            self.count_not_infinite,
            self.count_infinite
        )
    }
}

pub fn render_csv(rows: &[GenusStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn render_json(rows: &[GenusStats]) -> String {
    serde_json::to_string_pretty(rows).expect("stats rows serialize") + "\n"
}

/// Statistics for every genus `0..=max_genus` from a single traversal.
pub fn stats_by_genus(max_genus: u32, p: &EpsilonParams, workers: usize) -> Result<Vec<GenusStats>, StatsError> {
    stats_with(Traversal::new(max_genus).workers(workers), p)
}

/// Like [`stats_by_genus`] on a caller-configured traversal.
pub fn stats_with(traversal: Traversal, p: &EpsilonParams) -> Result<Vec<GenusStats>, StatsError> {
    let max_genus = traversal.max_genus();
    let windows: Vec<GenusWindows> = (0..=max_genus).map(|g| GenusWindows::new(g, p)).collect();
    let init = || (0..=max_genus).map(GenusStats::empty).collect::<Vec<_>>();
    let rows = traversal.fold(
        init,
        |acc, s, depth| acc[depth as usize].add(windows[depth as usize].classify(s)),
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| x.merge(y));
            a
        },
    )?;
    Ok(rows)
}

/// Statistics of the semigroups of genus exactly `g`.
pub fn classify_genus(g: u32, p: &EpsilonParams, workers: usize) -> Result<GenusStats, StatsError> {
    let windows = GenusWindows::new(g, p);
    let stats = Traversal::new(g).workers(workers).fold(
        || GenusStats::empty(g),
        |acc, s, depth| {
            if depth == g {
                acc.add(windows.classify(s));
            }
        },
        |mut a, b| {
            a.merge(&b);
            a
        },
    )?;
    Ok(stats)
}

/// One row of the density trend table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub genus: u32,
    pub n_g: u64,
    pub ratio_not_infinite: f64,
    pub ratio_am: f64,
    pub ratio_af: f64,
}

pub fn ratio_trend(max_genus: u32, p: &EpsilonParams, workers: usize) -> Result<Vec<TrendRow>, StatsError> {
    Ok(stats_by_genus(max_genus, p, workers)?
        .iter()
        .map(|s| TrendRow {
            genus: s.genus,
            n_g: s.n_g,
            ratio_not_infinite: s.ratio_not_infinite(),
            ratio_am: s.ratio_am(),
            ratio_af: s.ratio_af(),
        })
        .collect())
}

pub fn render_trend_csv(rows: &[TrendRow]) -> String {
    let mut out = String::from("genus,n_g,ratio_not_infinite,ratio_Am,ratio_AF\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6}\n",
            r.genus, r.n_g, r.ratio_not_infinite, r.ratio_am, r.ratio_af
        ));
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub workers: usize,
    /// Run even when ε exceeds [`epsilon_max`]; only the first inclusion is
    /// then guaranteed.
    pub allow_out_of_range: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 1,
            allow_out_of_range: false,
        }
    }
}

/// Counterexamples found by [`verify_inclusions`], as canonical gap strings
/// in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub genus: u32,
    pub n_g: u64,
    pub count_amf: u64,
    pub count_b: u64,
    /// in `A^{m,F}(ε₁,ε₂)` but not in `B(ε)`
    pub violations_amf_in_b: Vec<String>,
    /// in `B(ε)` but on an infinite chain
    pub violations_b_in_not_infinite: Vec<String>,
    /// in `B(ε)` without two consecutive left elements
    pub violations_b_consecutive: Vec<String>,
}

impl InclusionReport {
    pub fn is_clean(&self) -> bool {
        self.violations_amf_in_b.is_empty()
            && self.violations_b_in_not_infinite.is_empty()
            && self.violations_b_consecutive.is_empty()
    }

    fn merge(mut self, other: Self) -> Self {
        self.n_g += other.n_g;
        self.count_amf += other.count_amf;
        self.count_b += other.count_b;
        self.violations_amf_in_b.extend(other.violations_amf_in_b);
        self.violations_b_in_not_infinite.extend(other.violations_b_in_not_infinite);
        self.violations_b_consecutive.extend(other.violations_b_consecutive);
        self
    }
}

/// Checks `A^{m,F}(ε₁,ε₂) ⊆ B(ε) ⊆ S^∞̄` over all semigroups of genus `g`,
/// with ε₁, ε₂ linked to ε, and that every member of `B(ε)` has two
/// consecutive left elements.
pub fn verify_inclusions(g: u32, epsilon: &QuadSqrt5, opts: VerifyOptions) -> Result<InclusionReport, StatsError> {
    verify_inclusions_with(g, epsilon, opts, &|s: &Semigroup| s.in_infinite_chain())
}

/// [`verify_inclusions`] with the infinite-chain classifier supplied by the
/// caller.
pub fn verify_inclusions_with(
    g: u32,
    epsilon: &QuadSqrt5,
    opts: VerifyOptions,
    in_infinite_chain: &(dyn Fn(&Semigroup) -> bool + Sync),
) -> Result<InclusionReport, StatsError> {
    let bound = epsilon_max(g)?;
    if !opts.allow_out_of_range && epsilon > &bound {
        return Err(StatsError::EpsilonOutOfRange {
            genus: g,
            epsilon: epsilon.to_string(),
            bound: bound.to_decimal(8),
        });
    }
    let p = EpsilonParams::linked(epsilon.clone())?;
    let windows = GenusWindows::new(g, &p);
    let mut report = Traversal::new(g).workers(opts.workers).fold(
        InclusionReport::default,
        |acc, s, depth| {
            if depth != g {
                return;
            }
            let flags = windows.classify(s);
            acc.n_g += 1;
            acc.count_amf += flags.in_amf as u64;
            acc.count_b += flags.in_b as u64;
            if flags.in_amf && !flags.in_b {
                acc.violations_amf_in_b.push(s.canonical_string());
            }
            if flags.in_b {
                if in_infinite_chain(s) {
                    acc.violations_b_in_not_infinite.push(s.canonical_string());
                }
                if !s.has_consecutive_left_elements() {
                    acc.violations_b_consecutive.push(s.canonical_string());
                }
            }
        },
        InclusionReport::merge,
    )?;
    report.genus = g;
    report.violations_amf_in_b.sort();
    report.violations_b_in_not_infinite.sort();
    report.violations_b_consecutive.sort();
    Ok(report)
}
