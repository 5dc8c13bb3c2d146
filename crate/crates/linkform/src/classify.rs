//! Standardness of the linking form and the bundle-homotopy verdict.
//!
//! A linking form on a cyclic group of order `|n|` is standard exactly when
//! `±rho` is the square of a unit mod `|n|` for one of the two signs, and a
//! 2-connected 7-manifold with finite cyclic H⁴ is homotopy equivalent to an
//! S3-bundle over S4 if and only if its linking form is standard for some
//! orientation.  Every verdict carries a witness checkable in a single
//! multiplication (`lambda² ≡ ±rho`) or a single Legendre evaluation.
//!
//! Not every `(n, rho)` pair arises from the parameter family.  Members with
//! `gcd(a1, b1) = 1` always have standard linking form, and a non-standard
//! form forces `p² | n` for some prime `p`; so, for example, a manifold with
//! `|H⁴| = 5` and residue 2 (a non-square unit mod 5) is classified
//! NonStandard here but is realized by no parameter choice.

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{
    factorize, gcd, is_square_unit_with, legendre, ArithError, PrimePower, SquareDecision, Symbol,
};
use crate::cohomology::h4_structure;
use crate::family::{FamilyParams, ManifoldInvariants};
use crate::linking::{linking_form_of, LinkingError, LinkingForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("rho = {rho} is not a unit mod {n}")]
    NotUnit { n: i64, rho: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Classification of a linking form, with machine-checkable witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `lambda² ≡ sign·rho mod |n|` with `gcd(lambda, n) = 1`.
    Standard { sign: i8, lambda: u64 },
    /// Obstructing prime powers for both signs of `rho`.
    NonStandard { obstruction_plus: PrimePower, obstruction_minus: PrimePower },
    /// `|n| = 1`: the torsion group is trivial, the form vacuously standard.
    TrivialTorsion,
    /// `n = 0`: H⁴ is infinite cyclic; the bundle criterion does not apply.
    InfiniteTorsion,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Standard { .. } => "standard",
            Verdict::NonStandard { .. } => "nonstandard",
            Verdict::TrivialTorsion => "trivial_torsion",
            Verdict::InfiniteTorsion => "infinite_torsion",
        }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self, Verdict::Standard { .. } | Verdict::TrivialTorsion)
    }

    pub fn is_nonstandard(&self) -> bool {
        matches!(self, Verdict::NonStandard { .. })
    }

    /// JSON rendering: `{kind, sign?, lambda?, obstruction_plus?,
    /// obstruction_minus?, egs_prime?}`.
    pub fn to_json(&self, egs_prime: Option<u64>) -> Value {
        let mut obj = json!({ "kind": self.kind() });
        match self {
            Verdict::Standard { sign, lambda } => {
                obj["sign"] = json!(sign);
                obj["lambda"] = json!(lambda);
            }
            Verdict::NonStandard { obstruction_plus, obstruction_minus } => {
                obj["obstruction_plus"] = json!(obstruction_plus.to_string());
                obj["obstruction_minus"] = json!(obstruction_minus.to_string());
            }
            _ => {}
        }
        if let Some(p) = egs_prime {
            obj["egs_prime"] = json!(p);
        }
        obj
    }
}

/// Decides standardness of the form `±rho·xy/n` on a cyclic group of order
/// `|n| ≥ 1`.  Both signs are tried, mirroring the free orientation choice.
pub fn standardness(n: i64, rho: u64) -> Result<Verdict, ClassifyError> {
    assert!(n != 0, "standardness needs finite torsion");
    let m = n.unsigned_abs();
    if m == 1 {
        return Ok(Verdict::TrivialTorsion);
    }
    let rho = rho % m;
    if gcd(rho as i128, m as i128) != 1 {
        return Err(ClassifyError::NotUnit { n, rho });
    }
    let f = factorize(m as i128)?;
    let plus = is_square_unit_with(rho as u128, &f);
    if let SquareDecision::Square { root } = plus {
        return Ok(Verdict::Standard { sign: 1, lambda: root as u64 });
    }
    let minus = is_square_unit_with((m - rho) as u128, &f);
    if let SquareDecision::Square { root } = minus {
        return Ok(Verdict::Standard { sign: -1, lambda: root as u64 });
    }
    match (plus, minus) {
        (
            SquareDecision::NotSquare { obstruction: obstruction_plus },
            SquareDecision::NotSquare { obstruction: obstruction_minus },
        ) => Ok(Verdict::NonStandard { obstruction_plus, obstruction_minus }),
        _ => unreachable!("non-square cases handled above"),
    }
}

/// Standardness of a computed linking form.
pub fn is_standard(lf: &LinkingForm) -> Result<Verdict, ClassifyError> {
    let verdict = standardness(lf.n, lf.rho)?;
    if let Verdict::Standard { sign, lambda } = verdict {
        // One-multiplication check of the shipped witness.
        let m = lf.h4_order as u128;
        let target = if sign > 0 { lf.rho as u128 } else { (lf.h4_order - lf.rho) as u128 % m };
        debug_assert_eq!(lambda as u128 * lambda as u128 % m, target % m);
    }
    Ok(verdict)
}

/// Witness for the fast sufficient non-standardness test: a prime
/// `p ≡ 1 mod 4` dividing `gcd(a1, b1)` with `a0` a non-square and `b0` a
/// square mod `p`.  All three conditions are verified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EgsWitness {
    pub prime: u64,
}

/// Scans the prime divisors `p ≡ 1 mod 4` of `gcd(a1, b1)` in increasing
/// order for the non-standardness certificate.  A returned witness is sound
/// (the member is NonStandard); absence proves nothing.
pub fn egs_fast_check(p: &FamilyParams) -> Result<Option<EgsWitness>, ClassifyError> {
    let inv = p.derived();
    assert!(inv.n != 0, "fast check needs finite torsion");
    let g = gcd(p.a().x1() as i128, p.b().x1() as i128);
    if g == 1 {
        return Ok(None);
    }
    for pp in factorize(g)?.prime_powers() {
        let prime = pp.prime;
        if prime % 4 != 1 {
            continue;
        }
        if legendre(inv.a0 as i128, prime)? == Symbol::MinusOne
            && legendre(inv.b0 as i128, prime)? == Symbol::PlusOne
        {
            return Ok(Some(EgsWitness { prime: prime as u64 }));
        }
    }
    Ok(None)
}

/// Full classification bundle for one family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub params: FamilyParams,
    pub invariants: ManifoldInvariants,
    /// SNF divisors of the restriction matrix; always `(1, |n|)`.
    pub snf: (u64, u64),
    /// `None` exactly when `n = 0`.
    pub linking: Option<LinkingForm>,
    pub verdict: Verdict,
    pub egs: Option<EgsWitness>,
}

impl Classification {
    /// Human-readable bundle conclusion.
    pub fn conclusion(&self) -> &'static str {
        match self.verdict {
            Verdict::InfiniteTorsion => {
                "no verdict: H4 is infinite cyclic, outside the bundle criterion"
            }
            Verdict::TrivialTorsion | Verdict::Standard { .. } => {
                "homotopy equivalent to an S3-bundle over S4"
            }
            Verdict::NonStandard { .. } => {
                "not even homotopy equivalent to an S3-bundle over S4"
            }
        }
    }

    pub fn egs_prime(&self) -> Option<u64> {
        self.egs.map(|w| w.prime)
    }

    /// Flat JSON report; every numeric field re-derivable from the params.
    pub fn to_json(&self) -> Value {
        let [a1, a2, a3, b1, b2, b3] = self.params.entries();
        let mut obj = json!({
            "a1": a1, "a2": a2, "a3": a3, "b1": b1, "b2": b2, "b3": b3,
            "a0": self.invariants.a0,
            "b0": self.invariants.b0,
            "n": self.invariants.n,
            "h4_order": self.invariants.h4_order,
            "d1": self.snf.0,
            "d2": self.snf.1,
            "verdict": self.verdict.to_json(self.egs_prime()),
            "conclusion": self.conclusion(),
        });
        if let Some(lf) = &self.linking {
            obj["rho"] = json!(lf.rho);
            obj["kappa"] = json!(lf.kappa);
            obj["e1"] = json!(lf.cert.e1);
            obj["e0"] = json!(lf.cert.e0);
            obj["f1"] = json!(lf.cert.f1);
            obj["f0"] = json!(lf.cert.f0);
            obj["sign_ambiguous"] = json!(lf.sign_ambiguous);
        }
        obj
    }
}

/// Classifies a validated member end to end: invariants, SNF cross-check,
/// linking residues, fast certificate, standardness verdict.
pub fn classify(p: &FamilyParams) -> Result<Classification, ClassifyError> {
    let invariants = p.derived();
    let snf = h4_structure(p);
    assert_eq!(snf.1, invariants.h4_order, "SNF disagrees with the determinant");

    if invariants.n == 0 {
        return Ok(Classification {
            params: *p,
            invariants,
            snf,
            linking: None,
            verdict: Verdict::InfiniteTorsion,
            egs: None,
        });
    }

    let lf = match linking_form_of(p, &invariants) {
        Ok(lf) => lf,
        Err(LinkingError::InfiniteTorsion) => unreachable!("n ≠ 0 here"),
        Err(LinkingError::NotCoprime { .. }) => unreachable!("validated params are free"),
    };
    let verdict = is_standard(&lf)?;
    let egs = egs_fast_check(p)?;
    Ok(Classification { params: *p, invariants, snf, linking: Some(lf), verdict, egs })
}

/// The bundle-homotopy verdict alone; see [`Classification::conclusion`].
pub fn bundle_verdict(p: &FamilyParams) -> Result<Classification, ClassifyError> {
    classify(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::random_family;
    use crate::oracle::brute_unit_square_table;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standardness_examples() {
        // |H4| = 5 with residue 2: ±2 is a non-square unit mod 5.
        let v = standardness(5, 2).unwrap();
        assert!(v.is_nonstandard());

        for n in [2i64, 3, 10, -25, 169] {
            match standardness(n, 1).unwrap() {
                Verdict::Standard { sign: 1, lambda: 1 } => {}
                other => panic!("rho = 1 must be standard with lambda 1, got {other:?}"),
            }
        }

        match standardness(-25, 18).unwrap() {
            Verdict::NonStandard { obstruction_plus, obstruction_minus } => {
                assert_eq!(obstruction_plus, PrimePower { prime: 5, exponent: 2 });
                assert_eq!(obstruction_minus, PrimePower { prime: 5, exponent: 2 });
            }
            other => panic!("expected NonStandard, got {other:?}"),
        }

        assert_eq!(standardness(1, 0).unwrap(), Verdict::TrivialTorsion);
        assert!(matches!(standardness(10, 4), Err(ClassifyError::NotUnit { .. })));
    }

    #[test]
    fn standard_witness_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x10DA);
        for _ in 0..500 {
            let n: i64 = rng.gen_range(2..=4000);
            let rho: u64 = rng.gen_range(1..n as u64);
            if gcd(rho as i128, n as i128) != 1 {
                continue;
            }
            if let Verdict::Standard { sign, lambda } = standardness(n, rho).unwrap() {
                let m = n as u64;
                let target = if sign > 0 { rho } else { (m - rho) % m };
                assert_eq!(lambda * lambda % m, target % m);
                assert_eq!(gcd(lambda as i128, m as i128), 1);
            }
        }
    }

    #[test]
    fn orientation_and_generator_robustness() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11);
        let mut tested = 0;
        while tested < 300 {
            let n: i64 = rng.gen_range(2..=2000);
            let rho: u64 = rng.gen_range(1..n as u64);
            let m = n as u64;
            if gcd(rho as i128, n as i128) != 1 {
                continue;
            }
            tested += 1;
            let base = standardness(n, rho).unwrap().is_standard();
            // orientation flip
            assert_eq!(standardness(n, (m - rho) % m).unwrap().is_standard(), base);
            // generator change to kappa = rho^{-1}
            let kappa = crate::arith::inv_mod(rho as u128, m as u128).unwrap() as u64;
            assert_eq!(standardness(n, kappa).unwrap().is_standard(), base);
            // unit-square scaling
            let mu: u64 = rng.gen_range(1..m);
            if gcd(mu as i128, m as i128) == 1 {
                let scaled = (mu as u128 * mu as u128 % m as u128 * rho as u128 % m as u128) as u64;
                assert_eq!(standardness(n, scaled).unwrap().is_standard(), base);
            }
        }
    }

    #[test]
    fn standardness_matches_exhaustive_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0DD);
        for _ in 0..40 {
            let n: i64 = rng.gen_range(2..=600);
            let m = n as u64;
            let table = brute_unit_square_table(m);
            for rho in 1..m {
                if gcd(rho as i128, m as i128) != 1 {
                    continue;
                }
                let expected = table[rho as usize] || table[((m - rho) % m) as usize];
                assert_eq!(
                    standardness(n, rho).unwrap().is_standard(),
                    expected,
                    "n = {n}, rho = {rho}"
                );
            }
        }
    }

    #[test]
    fn egs_examples() {
        let p = FamilyParams::validate([5, 5, -7, 5, -7, 9]).unwrap();
        assert_eq!(egs_fast_check(&p).unwrap(), Some(EgsWitness { prime: 5 }));

        // gcd(a1, b1) = 1: empty scan
        let p = FamilyParams::validate([1, 1, 1, 1, 5, 1]).unwrap();
        assert_eq!(egs_fast_check(&p).unwrap(), None);

        let p = FamilyParams::validate([13, -3, 5, 13, 5, -7]).unwrap();
        assert_eq!(egs_fast_check(&p).unwrap(), Some(EgsWitness { prime: 13 }));
    }

    #[test]
    fn classify_examples() {
        let p = FamilyParams::validate([5, 5, -7, 5, -7, 9]).unwrap();
        let c = classify(&p).unwrap();
        assert!(c.verdict.is_nonstandard());
        assert_eq!(c.snf, (1, 25));
        assert_eq!(c.conclusion(), "not even homotopy equivalent to an S3-bundle over S4");

        let p = FamilyParams::validate([1, 1, 1, 1, 5, 1]).unwrap();
        let c = classify(&p).unwrap();
        assert!(matches!(c.verdict, Verdict::Standard { sign: 1, lambda: 1 }));

        let p = FamilyParams::validate([5, 5, -7, 5, 5, -7]).unwrap();
        let c = classify(&p).unwrap();
        assert_eq!(c.verdict, Verdict::InfiniteTorsion);
        assert!(c.linking.is_none());
        assert!(c.conclusion().starts_with("no verdict"));
    }

    #[test]
    fn coprime_heads_classify_standard() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x57D);
        let mut tested = 0;
        while tested < 500 {
            let p = random_family(&mut rng, 101);
            let inv = p.derived();
            if inv.n == 0 || gcd(p.a().x1() as i128, p.b().x1() as i128) != 1 {
                continue;
            }
            tested += 1;
            let c = classify(&p).unwrap();
            assert!(c.verdict.is_standard(), "family {p} must be standard");
        }
    }

    #[test]
    fn egs_witness_implies_nonstandard() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE65);
        let mut hits = 0;
        for _ in 0..5_000 {
            let p = random_family(&mut rng, 33);
            if p.derived().n == 0 {
                continue;
            }
            let c = classify(&p).unwrap();
            if c.egs.is_some() {
                hits += 1;
                assert!(c.verdict.is_nonstandard(), "witness without NonStandard verdict for {p}");
            }
        }
        assert!(hits > 0, "sampler never produced a certificate; weak test");
    }

    #[test]
    fn trivial_torsion_classifies_vacuously() {
        // |n| = 1: H4 trivial, vacuously standard, still a bundle.
        let p = FamilyParams::validate([1, 1, 1, 1, -3, 1]).unwrap();
        let inv = p.derived();
        assert_eq!(inv.h4_order, 1, "intended |n| = 1 example, got {}", inv.n);
        let c = classify(&p).unwrap();
        assert_eq!(c.verdict, Verdict::TrivialTorsion);
        assert!(c.verdict.is_standard());
    }
}
