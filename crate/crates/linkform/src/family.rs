//! Parameter validation for the manifold family and the derived invariants
//! `a0`, `b0` and the fourth-cohomology order `n`.
//!
//! A note on the first entries: `a1` and `b1` are general integers ≡ 1 mod 4,
//! not pinned to 1.  Pinning them to 1 would force `gcd(a1, b1) = 1`, and
//! every such member has standard linking form, so the interesting part of
//! the parameter space lives at `a1, b1 ≠ 1`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;

/// Largest accepted entry magnitude.  Keeps every derived quantity
/// (`a1²·b0`, `n`, residues mod `|n|`) exactly representable in 64 bits.
pub const MAX_ENTRY_ABS: i64 = 65_535;

/// Which triple an entry or condition belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

/// A single violated validity condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Entry is not ≡ 1 mod 4; `slot` is 1..=3.
    Congruence { side: Side, slot: u8, value: i64, residue: i64 },
    /// `gcd(x1, x2 ± x3) ≠ 1`; `sign` is +1 or -1.
    Freeness { side: Side, sign: i8, gcd: i64 },
    /// Entry magnitude exceeds [`MAX_ENTRY_ABS`].
    Magnitude { side: Side, slot: u8, value: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Congruence { side, slot, value, residue } => {
                write!(f, "{side}{slot} = {value} is {residue} mod 4, expected 1 mod 4")
            }
            Violation::Freeness { side, sign, gcd } => {
                let op = if *sign >= 0 { '+' } else { '-' };
                write!(f, "gcd({side}1, {side}2 {op} {side}3) = {gcd}, expected 1")
            }
            Violation::Magnitude { side, slot, value } => {
                write!(f, "|{side}{slot}| = |{value}| exceeds the limit {MAX_ENTRY_ABS}")
            }
        }
    }
}

/// Every condition violated by a candidate parameter set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidFamily {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid family parameters: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Error from parsing the `"a1,a2,a3;b1,b2,b3"` text form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parameter parse error at position {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input where the offending token starts.
    pub position: usize,
    pub message: String,
}

/// One triple (x1, x2, x3), each entry ≡ 1 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamTriple {
    x1: i64,
    x2: i64,
    x3: i64,
}

impl ParamTriple {
    /// Validates congruence, magnitude, and the freeness conditions
    /// `gcd(x1, x2 ± x3) = 1` for this triple.
    pub fn new(x1: i64, x2: i64, x3: i64) -> Result<Self, InvalidFamily> {
        let violations = check_triple(Side::A, [x1, x2, x3]);
        if violations.is_empty() {
            Ok(ParamTriple { x1, x2, x3 })
        } else {
            Err(InvalidFamily { violations })
        }
    }

    pub fn x1(&self) -> i64 {
        self.x1
    }
    pub fn x2(&self) -> i64 {
        self.x2
    }
    pub fn x3(&self) -> i64 {
        self.x3
    }

    /// `(x2² − x3²)/8`; exact because odd squares are 1 mod 8.
    pub fn x0(&self) -> i64 {
        let d = self.x2 as i128 * self.x2 as i128 - self.x3 as i128 * self.x3 as i128;
        debug_assert_eq!(d % 8, 0);
        (d / 8) as i64
    }
}

fn check_triple(side: Side, xs: [i64; 3]) -> Vec<Violation> {
    let mut violations = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let slot = i as u8 + 1;
        if x.rem_euclid(4) != 1 {
            violations.push(Violation::Congruence { side, slot, value: x, residue: x.rem_euclid(4) });
        }
        if x.abs() > MAX_ENTRY_ABS {
            violations.push(Violation::Magnitude { side, slot, value: x });
        }
    }
    // Freeness only meaningful once the entries themselves are sane.
    if violations.is_empty() {
        let [x1, x2, x3] = xs;
        for sign in [1i8, -1] {
            let other = if sign > 0 { x2 + x3 } else { x2 - x3 };
            let g = gcd(x1 as i128, other as i128) as i64;
            if g != 1 {
                violations.push(Violation::Freeness { side, sign, gcd: g });
            }
        }
    }
    violations
}

/// Validated parameter pair (a, b) describing one family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    a: ParamTriple,
    b: ParamTriple,
}

/// Derived invariants of a family member.
///
/// `h4_order` is `|n|`, with 0 encoding the infinite cyclic case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldInvariants {
    pub a0: i64,
    pub b0: i64,
    pub n: i64,
    pub h4_order: u64,
}

impl FamilyParams {
    /// Validates six raw entries `(a1, a2, a3, b1, b2, b3)`, reporting every
    /// violated condition rather than the first one.
    pub fn validate(raw: [i64; 6]) -> Result<Self, InvalidFamily> {
        let mut violations = check_triple(Side::A, [raw[0], raw[1], raw[2]]);
        violations.extend(
            check_triple(Side::B, [raw[3], raw[4], raw[5]]).into_iter().map(|v| match v {
                Violation::Congruence { slot, value, residue, .. } => {
                    Violation::Congruence { side: Side::B, slot, value, residue }
                }
                Violation::Freeness { sign, gcd, .. } => Violation::Freeness { side: Side::B, sign, gcd },
                Violation::Magnitude { slot, value, .. } => {
                    Violation::Magnitude { side: Side::B, slot, value }
                }
            }),
        );
        if !violations.is_empty() {
            return Err(InvalidFamily { violations });
        }
        let params = FamilyParams {
            a: ParamTriple { x1: raw[0], x2: raw[1], x3: raw[2] },
            b: ParamTriple { x1: raw[3], x2: raw[4], x3: raw[5] },
        };
        // Freeness forces both triples to be coprime overall.
        debug_assert_eq!(gcd(gcd(raw[0] as i128, raw[1] as i128), raw[2] as i128), 1);
        debug_assert_eq!(gcd(gcd(raw[3] as i128, raw[4] as i128), raw[5] as i128), 1);
        Ok(params)
    }

    pub fn from_triples(a: ParamTriple, b: ParamTriple) -> Self {
        FamilyParams { a, b }
    }

    pub fn a(&self) -> &ParamTriple {
        &self.a
    }
    pub fn b(&self) -> &ParamTriple {
        &self.b
    }

    pub fn entries(&self) -> [i64; 6] {
        [self.a.x1, self.a.x2, self.a.x3, self.b.x1, self.b.x2, self.b.x3]
    }

    /// The member with the roles of a and b exchanged.
    pub fn swapped(&self) -> FamilyParams {
        FamilyParams { a: self.b, b: self.a }
    }

    /// Canonical key for deduplication: signs of valid entries are forced by
    /// the congruence, so `(a1, a2², a3², b1, b2², b3²)` identifies a member.
    pub fn canonical_key(&self) -> (i64, i64, i64, i64, i64, i64) {
        let sq = |x: i64| x * x;
        (self.a.x1, sq(self.a.x2), sq(self.a.x3), self.b.x1, sq(self.b.x2), sq(self.b.x3))
    }

    /// Derived invariants: `a0`, `b0` by exact division, then
    /// `n = a1²·b0 − a0·b1²`.
    pub fn derived(&self) -> ManifoldInvariants {
        let a0 = self.a.x0();
        let b0 = self.b.x0();
        let a1 = self.a.x1 as i128;
        let b1 = self.b.x1 as i128;
        let n = a1 * a1 * b0 as i128 - a0 as i128 * b1 * b1;
        let n = i64::try_from(n).expect("bounded entries keep n in i64");
        ManifoldInvariants { a0, b0, n, h4_order: n.unsigned_abs() }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{};{},{},{}",
            self.a.x1, self.a.x2, self.a.x3, self.b.x1, self.b.x2, self.b.x3
        )
    }
}

/// Parses the `"a1,a2,a3;b1,b2,b3"` text form into raw entries, without
/// validating the family conditions.
pub fn parse_raw(input: &str) -> Result<[i64; 6], ParseError> {
    let halves: Vec<&str> = input.split(';').collect();
    if halves.len() != 2 {
        return Err(ParseError {
            position: input.find(';').map_or(input.len(), |i| i + 1),
            message: format!("expected exactly one ';' separating two triples, got {}", halves.len() - 1),
        });
    }
    let mut out = [0i64; 6];
    let mut offset = 0;
    for (half_idx, half) in halves.iter().enumerate() {
        let fields: Vec<&str> = half.split(',').collect();
        if fields.len() != 3 {
            return Err(ParseError {
                position: offset,
                message: format!("expected three comma-separated integers, got {}", fields.len()),
            });
        }
        let mut field_pos = offset;
        for (i, field) in fields.iter().enumerate() {
            out[half_idx * 3 + i] = field.trim().parse().map_err(|e| ParseError {
                position: field_pos,
                message: format!("bad integer {field:?}: {e}"),
            })?;
            field_pos += field.len() + 1;
        }
        offset += half.len() + 1;
    }
    Ok(out)
}

/// Parse plus validation, for `"a1,a2,a3;b1,b2,b3"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyFromStrError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] InvalidFamily),
}

impl FromStr for FamilyParams {
    type Err = FamilyFromStrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(FamilyParams::validate(parse_raw(s)?)?)
    }
}

/// Draws a uniformly random valid member with all `|entries| <= bound`, by
/// rejection over the ≡ 1 mod 4 grid.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> FamilyParams {
    assert!((1..=MAX_ENTRY_ABS).contains(&bound));
    let lo = -((bound + 1) / 4); // smallest k with |4k+1| <= bound
    let hi = (bound - 1) / 4;
    loop {
        let mut raw = [0i64; 6];
        for entry in &mut raw {
            *entry = 4 * rng.gen_range(lo..=hi) + 1;
        }
        if let Ok(params) = FamilyParams::validate(raw) {
            return params;
        }
    }
}
