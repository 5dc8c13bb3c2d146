//! Construction of explicit non-standard members and deterministic
//! parameter-space censuses.
//!
//! The construction: for a prime `p ≡ 1 mod 4`, take the smallest `m` with
//! `(m/p) = -1` and `(m+1/p) = +1` (such a consecutive pair always exists),
//! then set `a1 = b1 = p`, `|a2| = 2m-1`, `|a3| = |b2| = 2m+1`, `|b3| = 2m+3`
//! with each sign fixed by the ≡ 1 mod 4 rule.  The resulting member has
//! `n = -p²`, `a0 = -m`, `b0 = -(m+1)`, carries the fast certificate at `p`,
//! and is NonStandard.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, legendre, Symbol};
use crate::classify::{classify, ClassifyError, Verdict};
use crate::family::{FamilyParams, MAX_ENTRY_ABS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{0} is not a prime ≡ 1 mod 4")]
    BadPrime(u64),
    #[error("constructed entries for p = {0} exceed the parameter bound")]
    OutOfRange(u64),
}

/// Smallest `m` in `[1, p-2]` with `(m/p) = -1` and `(m+1/p) = +1`.
///
/// Existence follows from a counting argument (non-squares and squares each
/// fill half the units), but the scan asserts it anyway.
pub fn find_m(p: u64) -> Result<u64, SearchError> {
    if p % 4 != 1 || !is_prime(p as u128) {
        return Err(SearchError::BadPrime(p));
    }
    for m in 1..=p - 2 {
        if legendre(m as i128, p as u128).unwrap() == Symbol::MinusOne
            && legendre(m as i128 + 1, p as u128).unwrap() == Symbol::PlusOne
        {
            return Ok(m);
        }
    }
    unreachable!("a consecutive non-square/square pair exists below every prime ≡ 1 mod 4")
}

/// Sign an odd magnitude so the result is ≡ 1 mod 4; the unique choice.
fn signed(q: u64) -> i64 {
    debug_assert_eq!(q % 2, 1);
    if q % 4 == 1 {
        q as i64
    } else {
        -(q as i64)
    }
}

/// Builds the explicit NonStandard member attached to a prime `p ≡ 1 mod 4`
/// and verifies every promised property of the construction.
pub fn construct_corollary(p: u64) -> Result<FamilyParams, SearchError> {
    let m = find_m(p)?;
    if 2 * m + 3 > MAX_ENTRY_ABS as u64 || p > MAX_ENTRY_ABS as u64 {
        return Err(SearchError::OutOfRange(p));
    }
    let raw = [
        p as i64,
        signed(2 * m - 1),
        signed(2 * m + 1),
        p as i64,
        signed(2 * m + 1),
        signed(2 * m + 3),
    ];
    let params = FamilyParams::validate(raw).expect("construction satisfies the family conditions");

    let inv = params.derived();
    assert_eq!(inv.a0, -(m as i64));
    assert_eq!(inv.b0, -(m as i64) - 1);
    assert_eq!(inv.n, -((p * p) as i64));
    let c = classify(&params).expect("small construction cannot exhaust resources");
    assert_eq!(c.egs_prime(), Some(p), "fast certificate must fire at p");
    assert!(c.verdict.is_nonstandard(), "constructed member must be NonStandard");
    Ok(params)
}

/// Verdict label carried by census rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    #[serde(rename = "standard")]
    Standard,
    #[serde(rename = "nonstandard")]
    NonStandard,
    #[serde(rename = "trivial_torsion")]
    TrivialTorsion,
    #[serde(rename = "infinite_torsion")]
    InfiniteTorsion,
    /// Classification aborted (factorization guard); row kept, not dropped.
    #[serde(rename = "error")]
    Error,
}

impl VerdictKind {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictKind::Standard => "standard",
            VerdictKind::NonStandard => "nonstandard",
            VerdictKind::TrivialTorsion => "trivial_torsion",
            VerdictKind::InfiniteTorsion => "infinite_torsion",
            VerdictKind::Error => "error",
        }
    }
}

impl From<&Verdict> for VerdictKind {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Standard { .. } => VerdictKind::Standard,
            Verdict::NonStandard { .. } => VerdictKind::NonStandard,
            Verdict::TrivialTorsion => VerdictKind::TrivialTorsion,
            Verdict::InfiniteTorsion => VerdictKind::InfiniteTorsion,
        }
    }
}

/// One classified member in census output.  Field order matches the CSV
/// column contract `a1,a2,a3,b1,b2,b3,n,h4_order,rho,kappa,verdict,egs_prime`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub b1: i64,
    pub b2: i64,
    pub b3: i64,
    pub n: i64,
    pub h4_order: u64,
    pub rho: Option<u64>,
    pub kappa: Option<u64>,
    pub verdict: VerdictKind,
    pub egs_prime: Option<u64>,
}

/// Exact CSV header for census files.
pub const CSV_HEADER: &str = "a1,a2,a3,b1,b2,b3,n,h4_order,rho,kappa,verdict,egs_prime";

impl CensusRow {
    pub fn from_family(p: &FamilyParams) -> CensusRow {
        let [a1, a2, a3, b1, b2, b3] = p.entries();
        let inv = p.derived();
        match classify(p) {
            Ok(c) => CensusRow {
                a1,
                a2,
                a3,
                b1,
                b2,
                b3,
                n: inv.n,
                h4_order: inv.h4_order,
                rho: c.linking.map(|lf| lf.rho),
                kappa: c.linking.map(|lf| lf.kappa),
                verdict: VerdictKind::from(&c.verdict),
                egs_prime: c.egs_prime(),
            },
            Err(ClassifyError::Arith(_)) => CensusRow {
                a1,
                a2,
                a3,
                b1,
                b2,
                b3,
                n: inv.n,
                h4_order: inv.h4_order,
                rho: None,
                kappa: None,
                verdict: VerdictKind::Error,
                egs_prime: None,
            },
            Err(e) => unreachable!("validated member cannot fail classification: {e}"),
        }
    }

    /// One CSV record under [`CSV_HEADER`]; `None` fields stay empty.
    pub fn csv_record(&self) -> String {
        let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.a1,
            self.a2,
            self.a3,
            self.b1,
            self.b2,
            self.b3,
            self.n,
            self.h4_order,
            opt(self.rho),
            opt(self.kappa),
            self.verdict.label(),
            opt(self.egs_prime),
        )
    }

    pub fn params(&self) -> [i64; 6] {
        [self.a1, self.a2, self.a3, self.b1, self.b2, self.b3]
    }
}

/// Verdict filter for censuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerdictFilter {
    #[default]
    All,
    Standard,
    NonStandard,
}

impl VerdictFilter {
    fn admits(&self, kind: VerdictKind) -> bool {
        match self {
            VerdictFilter::All => true,
            VerdictFilter::Standard => kind == VerdictKind::Standard,
            VerdictFilter::NonStandard => kind == VerdictKind::NonStandard,
        }
    }
}

/// Census specification: entry bound, optional pin `a1 = b1 = p`, filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    /// Bound on `|entries|`; at least 1.
    pub bound: i64,
    /// Pins both leading entries to this value.
    pub pin_p: Option<i64>,
    pub filter: VerdictFilter,
    /// Drop rows with `n = 0`.
    pub require_finite: bool,
    /// Keep only rows with `h4_order` in this inclusive range.
    pub h4_range: Option<(u64, u64)>,
    /// Deduplicate by canonical key (a no-op on valid members, where signs
    /// are forced; kept for defense against future widenings).
    pub dedup: bool,
}

impl SearchSpec {
    pub fn with_bound(bound: i64) -> SearchSpec {
        SearchSpec {
            bound,
            pin_p: None,
            filter: VerdictFilter::All,
            require_finite: false,
            h4_range: None,
            dedup: true,
        }
    }

    fn admits(&self, row: &CensusRow) -> bool {
        if self.require_finite && row.n == 0 {
            return false;
        }
        if let Some((lo, hi)) = self.h4_range {
            if row.h4_order < lo || row.h4_order > hi {
                return false;
            }
        }
        self.filter.admits(row.verdict)
    }
}

/// Entry candidates `≡ 1 mod 4` with `|x| ≤ bound`, ascending.
fn candidate_values(bound: i64) -> Vec<i64> {
    let mut vals: Vec<i64> = (-bound..=bound).filter(|x| x.rem_euclid(4) == 1).collect();
    vals.sort_unstable();
    vals
}

/// The same candidates ordered by square (the canonical-key order for the
/// non-leading slots).
fn candidates_by_square(bound: i64) -> Vec<i64> {
    let mut vals = candidate_values(bound);
    vals.sort_by_key(|x| x.abs());
    vals
}

/// One partition of the census: all members with the given leading entry
/// `a1`.  Partitions are pure and independent, so they can be distributed;
/// concatenating them in ascending `a1` order reproduces [`enumerate`].
pub fn enumerate_partition(spec: &SearchSpec, a1: i64, seen: &mut HashSet<(i64, i64, i64, i64, i64, i64)>) -> Vec<CensusRow> {
    let by_square = candidates_by_square(spec.bound);
    let b1_values = match spec.pin_p {
        Some(p) => vec![p],
        None => candidate_values(spec.bound),
    };
    let mut rows = Vec::new();
    for &a2 in &by_square {
        for &a3 in &by_square {
            for &b1 in &b1_values {
                for &b2 in &by_square {
                    for &b3 in &by_square {
                        let raw = [a1, a2, a3, b1, b2, b3];
                        let Ok(params) = FamilyParams::validate(raw) else {
                            continue;
                        };
                        if spec.dedup && !seen.insert(params.canonical_key()) {
                            continue;
                        }
                        let row = CensusRow::from_family(&params);
                        if spec.admits(&row) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    rows
}

/// Enumerates and classifies every valid member within the bound, in the
/// deterministic lexicographic order of canonical keys.
pub fn enumerate(spec: &SearchSpec) -> Vec<CensusRow> {
    assert!(spec.bound >= 1, "bound must be at least 1");
    let a1_values = match spec.pin_p {
        Some(p) => vec![p],
        None => candidate_values(spec.bound),
    };
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for a1 in a1_values {
        rows.extend(enumerate_partition(spec, a1, &mut seen));
    }
    rows
}

/// Census of the explicit constructions for every prime `p ≡ 1 mod 4` up to
/// `limit`, ascending.
pub fn corollary_census(limit: u64) -> Vec<CensusRow> {
    primes_one_mod_four(limit)
        .into_iter()
        .map(|p| {
            let params = construct_corollary(p).expect("p filtered to valid inputs");
            CensusRow::from_family(&params)
        })
        .collect()
}

/// Primes `p ≡ 1 mod 4` with `p ≤ limit`, ascending.
pub fn primes_one_mod_four(limit: u64) -> Vec<u64> {
    (5..=limit).filter(|&p| p % 4 == 1 && is_prime(p as u128)).collect()
}

/// Group census rows: distinct `h4_order` values among NonStandard rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistinctTypes {
    /// `h4_order` → (row count, first representative's parameters).
    pub orders: BTreeMap<u64, (usize, [i64; 6])>,
}

impl DistinctTypes {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }
}

/// Counts NonStandard rows by cohomology order; other rows are ignored.
pub fn distinct_types_report<'a>(rows: impl IntoIterator<Item = &'a CensusRow>) -> DistinctTypes {
    let mut report = DistinctTypes::default();
    for row in rows {
        if row.verdict == VerdictKind::NonStandard {
            let entry = report.orders.entry(row.h4_order).or_insert((0, row.params()));
            entry.0 += 1;
        }
    }
    report
}
