//! Linking-form data of a family member: Bézout certificates and the
//! mutually inverse residues `rho` and `kappa` mod `|n|`.
//!
//! With `e1·a1² + e0·a0 = 1` and `f1·b1² + f0·b0 = 1`, the residues are
//!
//! ```text
//! rho   = e1·b1² + e0·b0   (generator 𝟏)
//! kappa = f1·a1² + f0·a0   (generator 𝟏' = kappa·𝟏)
//! ```
//!
//! and the linking form sends `(x·𝟏, y·𝟏)` to `± rho·x·y / n mod 1`.  The
//! global sign depends on the choice of orientation and is not determined by
//! the parameters, so every [`LinkingForm`] carries `sign_ambiguous = true`
//! and downstream classification checks both signs.

use thiserror::Error;

use crate::arith::{ext_gcd, gcd, mul_mod};
use crate::family::{FamilyParams, ManifoldInvariants};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkingError {
    /// `n = 0`: H⁴ is infinite cyclic and carries no linking form.
    #[error("n = 0: the torsion linking form needs finite H4")]
    InfiniteTorsion,
    /// Bézout precondition failed; signals a freeness violation upstream.
    #[error("gcd({x1}² , {x0}) = {gcd} ≠ 1; parameters are not a valid family")]
    NotCoprime { x1: i64, x0: i64, gcd: i64 },
}

/// Bézout certificates for both triples:
/// `e1·a1² + e0·a0 = 1` and `f1·b1² + f0·b0 = 1`, exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BezoutCert {
    pub e1: i64,
    pub e0: i64,
    pub f1: i64,
    pub f0: i64,
}

/// Linking form of a member with finite H⁴, reduced to canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkingForm {
    /// Signed cohomology order; `|n| ≥ 1`.
    pub n: i64,
    /// `|n|`.
    pub h4_order: u64,
    /// Residue of the form on the generator `𝟏`, in `[0, |n|)`.
    pub rho: u64,
    /// Residue on the generator `𝟏' = kappa·𝟏`; `rho·kappa ≡ 1 mod |n|`.
    pub kappa: u64,
    pub cert: BezoutCert,
    /// Always true: the orientation sign of the form is not derived.
    pub sign_ambiguous: bool,
}

impl LinkingForm {
    /// JSON rendering `{n, h4_order, rho, kappa, e1, e0, f1, f0}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "h4_order": self.h4_order,
            "rho": self.rho,
            "kappa": self.kappa,
            "e1": self.cert.e1,
            "e0": self.cert.e0,
            "f1": self.cert.f1,
            "f0": self.cert.f0,
        })
    }
}

/// Canonical `(c1, c0)` with `c1·x1² + c0·x0 = 1`.
///
/// `c0` is the minimal-magnitude coefficient mod `x1²` from [`ext_gcd`], so
/// the certificate is reproducible.
pub fn bezout_pair(x1: i64, x0: i64) -> Result<(i64, i64), LinkingError> {
    let sq = x1 as i128 * x1 as i128;
    let (g, c0, c1) = ext_gcd(x0 as i128, sq).expect("x1² ≥ 1");
    if g != 1 {
        return Err(LinkingError::NotCoprime { x1, x0, gcd: g as i64 });
    }
    debug_assert_eq!(c1 * sq + c0 * x0 as i128, 1);
    Ok((c1 as i64, c0 as i64))
}

/// Computes the linking-form residues of a validated member with `n ≠ 0`.
///
/// All defining congruences are checked before returning:
/// `rho·kappa ≡ 1`, `a1²·rho ≡ b1²`, `b1²·kappa ≡ a1²`, `a0·rho ≡ b0` and
/// `b0·kappa ≡ a0`, all mod `|n|`.
pub fn linking_form(p: &FamilyParams) -> Result<LinkingForm, LinkingError> {
    let inv = p.derived();
    linking_form_of(p, &inv)
}

/// [`linking_form`] reusing already-computed invariants.
pub fn linking_form_of(p: &FamilyParams, inv: &ManifoldInvariants) -> Result<LinkingForm, LinkingError> {
    if inv.n == 0 {
        return Err(LinkingError::InfiniteTorsion);
    }
    let (e1, e0) = bezout_pair(p.a().x1(), inv.a0)?;
    let (f1, f0) = bezout_pair(p.b().x1(), inv.b0)?;
    let m = inv.h4_order;

    let reduce = |c1: i64, c0: i64, x1: i64, x0: i64| -> u64 {
        let v = c1 as i128 * (x1 as i128 * x1 as i128) + c0 as i128 * x0 as i128;
        v.rem_euclid(m as i128) as u64
    };
    let rho = reduce(e1, e0, p.b().x1(), inv.b0);
    let kappa = reduce(f1, f0, p.a().x1(), inv.a0);

    let form = LinkingForm {
        n: inv.n,
        h4_order: m,
        rho,
        kappa,
        cert: BezoutCert { e1, e0, f1, f0 },
        sign_ambiguous: true,
    };

    // The defining identities hold by construction; fail loudly if not.
    let mm = m as u128;
    let sq = |x: i64| (x as i128 * x as i128).rem_euclid(m as i128) as u128;
    let red = |x: i64| (x as i128).rem_euclid(m as i128) as u128;
    assert_eq!(mul_mod(rho as u128, kappa as u128, mm), 1 % mm, "rho·kappa ≢ 1");
    assert_eq!(mul_mod(sq(p.a().x1()), rho as u128, mm), sq(p.b().x1()), "a1²·rho ≢ b1²");
    assert_eq!(mul_mod(sq(p.b().x1()), kappa as u128, mm), sq(p.a().x1()), "b1²·kappa ≢ a1²");
    assert_eq!(mul_mod(red(inv.a0), rho as u128, mm), red(inv.b0), "a0·rho ≢ b0");
    assert_eq!(mul_mod(red(inv.b0), kappa as u128, mm), red(inv.a0), "b0·kappa ≢ a0");
    assert_eq!(gcd(rho as i128, m as i128), 1);
    assert_eq!(gcd(kappa as i128, m as i128), 1);
    Ok(form)
}
