//! Seeded self-verification suite: re-checks the defining identities,
//! classification properties, and oracle equivalences on random members.
//! Backs the CLI `verify` subcommand; each check reports a minimal
//! reproducing input on failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, inv_mod, is_square_unit_mod, jacobi, legendre, mul_mod, Symbol};
use crate::classify::classify;
use crate::cohomology::h4_structure;
use crate::family::random_family;
use crate::linking::linking_form;
use crate::oracle::{brute_legendre, brute_unit_square_table};
use crate::search::{construct_corollary, primes_one_mod_four};

/// Outcome of one named check over many cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing input, for reproduction.
    pub counterexample: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult { name, cases: 0, failures: 0, counterexample: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, input: impl Fn() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(input());
            }
        }
    }
}

/// Report of a full suite run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Entry bound for sampled members.
const SAMPLE_BOUND: i64 = 401;

/// Runs every check on `samples` members drawn from `seed`.
pub fn run_suite(seed: u64, samples: usize) -> VerifyReport {
    assert!(samples >= 1, "at least one sample required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut inverse = CheckResult::new("rho*kappa = 1 mod |n|");
    let mut congruences = CheckResult::new("restriction congruences mod |n|");
    let mut perturbation = CheckResult::new("rho invariant under certificate shifts");
    let mut swap_duality = CheckResult::new("swap exchanges rho and kappa");
    let mut coprime_standard = CheckResult::new("gcd(a1,b1) = 1 implies standard");
    let mut egs_sound = CheckResult::new("fast certificate implies nonstandard");
    let mut snf_cross = CheckResult::new("SNF divisors equal (1, |n|)");

    for _ in 0..samples {
        let p = random_family(&mut rng, SAMPLE_BOUND);
        let inv = p.derived();
        let show = || p.to_string();

        let (d1, d2) = h4_structure(&p);
        snf_cross.record(d1 == 1 && d2 == inv.h4_order, show);

        if inv.n == 0 {
            continue;
        }
        let m = inv.h4_order;
        let mm = m as u128;
        let lf = match linking_form(&p) {
            Ok(lf) => lf,
            Err(_) => {
                inverse.record(false, show);
                continue;
            }
        };

        inverse.record(mul_mod(lf.rho as u128, lf.kappa as u128, mm) == 1 % mm, show);

        let sq = |x: i64| (x as i128 * x as i128).rem_euclid(m as i128) as u128;
        let red = |x: i64| (x as i128).rem_euclid(m as i128) as u128;
        let all_congruences = mul_mod(sq(p.a().x1()), lf.rho as u128, mm) == sq(p.b().x1())
            && mul_mod(sq(p.b().x1()), lf.kappa as u128, mm) == sq(p.a().x1())
            && mul_mod(red(inv.a0), lf.rho as u128, mm) == red(inv.b0)
            && mul_mod(red(inv.b0), lf.kappa as u128, mm) == red(inv.a0);
        congruences.record(all_congruences, show);

        let (a1, b1) = (p.a().x1() as i128, p.b().x1() as i128);
        let shifted_ok = (-5i128..=5).all(|t| {
            let e1 = lf.cert.e1 as i128 - t * inv.a0 as i128;
            let e0 = lf.cert.e0 as i128 + t * a1 * a1;
            let rho_t = e1 * b1 * b1 + e0 * inv.b0 as i128;
            e1 * a1 * a1 + e0 * inv.a0 as i128 == 1
                && rho_t.rem_euclid(m as i128) as u64 == lf.rho
        });
        perturbation.record(shifted_ok, show);

        match linking_form(&p.swapped()) {
            Ok(sw) => swap_duality.record(sw.rho == lf.kappa && sw.kappa == lf.rho, show),
            Err(_) => swap_duality.record(false, show),
        }

        match classify(&p) {
            Ok(c) => {
                if gcd(a1, b1) == 1 {
                    coprime_standard.record(c.verdict.is_standard(), show);
                }
                if c.egs.is_some() {
                    egs_sound.record(c.verdict.is_nonstandard(), show);
                }
            }
            Err(_) => coprime_standard.record(false, show),
        }
    }

    // The explicit constructions exercise the certificate path for real.
    for p in primes_one_mod_four(97) {
        match construct_corollary(p) {
            Ok(params) => match classify(&params) {
                Ok(c) => egs_sound.record(
                    c.egs_prime() == Some(p) && c.verdict.is_nonstandard(),
                    || params.to_string(),
                ),
                Err(_) => egs_sound.record(false, || params.to_string()),
            },
            Err(_) => egs_sound.record(false, || format!("p = {p}")),
        }
    }

    let mut checks = vec![
        inverse,
        congruences,
        perturbation,
        swap_duality,
        coprime_standard,
        egs_sound,
        snf_cross,
    ];
    checks.push(oracle_square_units(&mut rng));
    checks.push(oracle_symbols());

    VerifyReport { seed, samples, checks }
}

/// Square-unit decision against exhaustive unit tables for random moduli.
fn oracle_square_units(rng: &mut ChaCha8Rng) -> CheckResult {
    let mut check = CheckResult::new("square-unit decision matches enumeration");
    for _ in 0..10 {
        let n: i64 = rng.gen_range(2..=2000);
        let table = brute_unit_square_table(n as u64);
        for x in 1..n as u64 {
            if gcd(x as i128, n as i128) != 1 {
                continue;
            }
            let fast = is_square_unit_mod(x as i128, n as i128).unwrap().is_square();
            check.record(fast == table[x as usize], || format!("x = {x}, n = {n}"));
        }
    }
    check
}

/// Legendre and Jacobi against square enumeration for small primes, plus the
/// `p mod 4` rule for `-1`.
fn oracle_symbols() -> CheckResult {
    let mut check = CheckResult::new("legendre/jacobi match enumeration");
    for p in (3u64..200).filter(|&p| crate::arith::is_prime(p as u128)) {
        for x in 0..p {
            let expected = brute_legendre(x as i128, p);
            let fast = legendre(x as i128, p as u128).unwrap();
            let via_jacobi = jacobi(x as i128, p as i128).unwrap();
            check.record(fast == expected && via_jacobi == expected, || format!("x = {x}, p = {p}"));
        }
        let minus_one = legendre(-1, p as u128).unwrap();
        let expected = if p % 4 == 1 { Symbol::PlusOne } else { Symbol::MinusOne };
        check.record(minus_one == expected, || format!("p = {p}"));
    }
    // inverses of units stay units; spot-check inv_mod round trips
    for (a, m) in [(3u128, 7u128), (18, 25), (7, 25), (5, 8)] {
        let inv = inv_mod(a, m).unwrap();
        check.record(mul_mod(a, inv, m) == 1, || format!("a = {a}, m = {m}"));
    }
    check
}
