//! Brute-force reference implementations backing the test suite and the
//! verification runner.  These define correctness for the fast paths; they
//! are deliberately simple, bounded, and kept out of the CLI surface.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{gcd, is_prime, Symbol};
use crate::cohomology::IntMatrix2x2;

/// Moduli above this are refused rather than enumerated.
pub const BRUTE_MODULUS_BOUND: i128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("|{0}| exceeds the brute-force bound {BRUTE_MODULUS_BOUND}")]
    ModulusTooLarge(i128),
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: i128, modulus: i128 },
}

/// True iff some unit `λ` mod `|n|` has `λ² ≡ x`, by exhaustive loop.
pub fn brute_square_unit(x: i128, n: i128) -> Result<bool, OracleError> {
    let m = n.unsigned_abs();
    if m == 0 || m as i128 > BRUTE_MODULUS_BOUND {
        return Err(OracleError::ModulusTooLarge(n));
    }
    if m == 1 {
        return Ok(true);
    }
    let m = m as u64;
    let xr = x.rem_euclid(m as i128) as u64;
    if gcd(xr as i128, m as i128) != 1 {
        return Err(OracleError::NotCoprime { value: x, modulus: n });
    }
    for lambda in 1..m {
        if lambda * lambda % m == xr && gcd(lambda as i128, m as i128) == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Per-residue square-unit table for modulus `m >= 2`: entry `x` is true iff
/// `x` is the square of a unit.  One pass over all units.
pub fn brute_unit_square_table(m: u64) -> Vec<bool> {
    assert!(m >= 2 && m as i128 <= BRUTE_MODULUS_BOUND);
    let mut table = vec![false; m as usize];
    for lambda in 1..m {
        if gcd(lambda as i128, m as i128) == 1 {
            table[(lambda * lambda % m) as usize] = true;
        }
    }
    table
}

/// Legendre symbol by enumerating all squares mod `p`.
pub fn brute_legendre(x: i128, p: u64) -> Symbol {
    assert!(p <= 100_000 && p % 2 == 1 && is_prime(p as u128), "p must be a small odd prime");
    let xr = x.rem_euclid(p as i128) as u64;
    if xr == 0 {
        return Symbol::Zero;
    }
    for r in 1..p {
        if r * r % p == xr {
            return Symbol::PlusOne;
        }
    }
    Symbol::MinusOne
}

/// Cokernel of `M : Z² → Z²` computed by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CokernelShape {
    /// Group order, `None` when infinite.
    pub order: Option<u128>,
    /// Whether a single element generates the whole group.
    pub cyclic: bool,
}

/// Enumerates `Z²/im(M)` for small matrices.
///
/// For `det ≠ 0` the box `[0, |det|)²` is scanned and points are identified
/// by the lattice membership test `adj(M)·(v − w) ≡ 0 mod det`; element
/// orders then decide cyclicity.  For `det = 0` the cokernel is infinite:
/// `Z²` for the zero matrix, otherwise `Z ⊕ Z_g` with `g` the gcd of the
/// entries, cyclic exactly when the torsion part vanishes.
pub fn brute_coker(m: &IntMatrix2x2) -> CokernelShape {
    assert!(
        [m.m11, m.m12, m.m21, m.m22].iter().all(|e| e.abs() <= 40),
        "entries exceed the brute-force bound"
    );
    let det = m.det();
    if det == 0 {
        if m.m11 == 0 && m.m12 == 0 && m.m21 == 0 && m.m22 == 0 {
            return CokernelShape { order: None, cyclic: false }; // Z ⊕ Z
        }
        let g = gcd(gcd(m.m11, m.m12), gcd(m.m21, m.m22));
        return CokernelShape { order: None, cyclic: g == 1 };
    }

    let d = det.unsigned_abs() as i128;
    let adj = m.adjugate();
    // phi(v) = adj(M)·v mod d vanishes exactly on im(M), so it indexes cosets.
    let phi = |v1: i128, v2: i128| -> (i128, i128) {
        ((adj.m11 * v1 + adj.m12 * v2).rem_euclid(d), (adj.m21 * v1 + adj.m22 * v2).rem_euclid(d))
    };

    let mut classes: HashMap<(i128, i128), (i128, i128)> = HashMap::new();
    for v1 in 0..d {
        for v2 in 0..d {
            classes.entry(phi(v1, v2)).or_insert((v1, v2));
        }
    }
    let order = classes.len() as u128;

    // Additive order of a coset inside (Z_d)² under phi.
    let elem_order = |h: (i128, i128)| -> u128 {
        let ord = |x: i128| (d / gcd(x, d)) as u128;
        let (o1, o2) = (ord(h.0), ord(h.1));
        o1 / gcd(o1 as i128, o2 as i128) as u128 * o2 // lcm
    };
    let cyclic = classes.keys().any(|&h| elem_order(h) == order);
    CokernelShape { order: Some(order), cyclic }
}
