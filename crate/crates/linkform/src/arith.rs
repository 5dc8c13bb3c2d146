//! Exact integer and modular arithmetic: extended gcd with canonical Bézout
//! pairs, Legendre/Jacobi symbols, verified factorization, and the
//! square-unit decision modulo a composite.
//!
//! Everything here is deterministic.  The factorizer walks a fixed
//! polynomial-parameter sequence instead of drawing random values, and every
//! factor it emits is certified prime and re-multiplied before the result is
//! returned.

use std::env;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Trial-division bound used before switching to cycle-finding splits.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Total cycle-finding iterations allowed per `factorize` call.
const SPLIT_ITERATION_BUDGET: u64 = 1 << 26;

/// Environment variable overriding the factorization magnitude guard.
pub const FACTOR_LIMIT_ENV: &str = "LINKFORM_FACTOR_LIMIT";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("ext_gcd(0, 0) has no gcd")]
    BothZero,
    #[error("modulus {0} is not an odd certified prime")]
    NotOddPrime(u128),
    #[error("modulus {0} is not odd and positive")]
    NotOddPositive(i128),
    #[error("0 has no factorization")]
    FactorZero,
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: i128, modulus: i128 },
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
}

/// Value of a Legendre or Jacobi symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Symbol {
    MinusOne = -1,
    Zero = 0,
    PlusOne = 1,
}

impl Symbol {
    pub fn value(self) -> i8 {
        self as i8
    }

    fn from_i8(v: i8) -> Symbol {
        match v {
            -1 => Symbol::MinusOne,
            0 => Symbol::Zero,
            1 => Symbol::PlusOne,
            _ => unreachable!("symbol out of range"),
        }
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;
    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::from_i8(self.value() * rhs.value())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// A prime power `prime^exponent`, used as a non-squareness obstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub prime: u128,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u128 {
        self.prime.pow(self.exponent)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

/// Complete, certified prime factorization of a non-zero integer.
///
/// Invariant: `sign * prod(prime^exponent) == value`, primes strictly
/// increasing, each certified by a deterministic primality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: i128,
    pub sign: i8,
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn magnitude(&self) -> u128 {
        self.value.unsigned_abs()
    }

    /// Re-multiplies sign and prime powers; equals `value` by construction.
    pub fn recombine(&self) -> i128 {
        let mut acc: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc *= p as i128;
            }
        }
        acc
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = PrimePower> + '_ {
        self.factors.iter().map(|&(prime, exponent)| PrimePower { prime, exponent })
    }
}

/// Outcome of the square-unit decision mod `|n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareDecision {
    /// `root² ≡ x mod |n|` with `gcd(root, n) = 1`.
    Square { root: u128 },
    /// `x` is a non-square unit mod `obstruction`, which divides `|n|`.
    NotSquare { obstruction: PrimePower },
}

impl SquareDecision {
    pub fn is_square(&self) -> bool {
        matches!(self, SquareDecision::Square { .. })
    }
}

/// Extended gcd with a canonical minimal Bézout pair.
///
/// Returns `(g, u, v)` with `u·x + v·y = g = gcd(|x|, |y|) ≥ 0`.  When
/// `y ≠ 0` the coefficient `u` is reduced to minimal magnitude
/// (`|u| ≤ |y| / 2g`), ties broken toward non-negative `u`, so the output is
/// reproducible across platforms.
pub fn ext_gcd(x: i128, y: i128) -> Result<(i128, i128, i128), ArithError> {
    if x == 0 && y == 0 {
        return Err(ArithError::BothZero);
    }
    if y == 0 {
        return Ok((x.abs(), x.signum(), 0));
    }

    let (mut old_r, mut r) = (x, y);
    let (mut old_u, mut u) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_u, u) = (u, old_u - q * u);
    }
    // old_r = ±g, old_u·x ≡ old_r mod y
    let (g, mut cu) = if old_r < 0 { (-old_r, -old_u) } else { (old_r, old_u) };

    // Canonical representative of u modulo |y|/g.
    let step = (y / g).abs();
    cu = cu.rem_euclid(step);
    if cu > step - cu {
        cu -= step;
    }
    let cv = (g - cu * x) / y;
    debug_assert_eq!(cu * x + cv * y, g);
    Ok((g, cu, cv))
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Canonical representative of `x` in `[0, m)`, for any `u128` modulus.
fn reduce_mod(x: i128, m: u128) -> u128 {
    let r = x.unsigned_abs() % m;
    if x >= 0 || r == 0 {
        r
    } else {
        m - r
    }
}

/// `(a + b) mod m` without overflow, for already-reduced operands.
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `(a · b) mod m` for any `u128` modulus.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    assert!(m > 0, "zero modulus");
    let (mut a, mut b) = (a % m, b % m);
    if m <= u64::MAX as u128 {
        return a * b % m; // both operands < 2^64, product fits
    }
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// `base^exp mod m` by binary exponentiation.
pub fn mod_pow(base: u128, mut exp: u128, m: u128) -> u128 {
    assert!(m > 0, "zero modulus");
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` for coprime `a`, `m ≥ 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    debug_assert!(m <= i128::MAX as u128);
    let (g, u, _) = ext_gcd((a % m) as i128, m as i128).ok()?;
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(m as i128) as u128)
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn is_perfect_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Deterministic primality test.
///
/// Below 2^64 this is Miller-Rabin with a witness set proven sufficient for
/// that range.  Above 2^64 it is the Baillie-PSW combination (base-2
/// Miller-Rabin plus a strong Lucas test), which has no known counterexample
/// and involves no randomness.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    if n <= u64::MAX as u128 {
        // Proven-deterministic witness set for n < 3.3 * 10^24.
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
            .iter()
            .all(|&a| miller_rabin_round(n, a))
    } else {
        miller_rabin_round(n, 2) && strong_lucas_prp(n)
    }
}

/// One strong-pseudoprime round to base `a`; `n` odd, `n > a`.
fn miller_rabin_round(n: u128, a: u128) -> bool {
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = mod_pow(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 0..s - 1 {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas_prp(n: u128) -> bool {
    if is_perfect_square(n) {
        return false; // no D with (D/n) = -1 exists
    }
    // First D in 5, -7, 9, -11, ... with Jacobi (D/n) = -1.
    let mut d: i128 = 5;
    loop {
        match jacobi_unchecked(d, n) {
            Symbol::MinusOne => break,
            Symbol::Zero => return false, // shares a factor with n
            Symbol::PlusOne => {
                d = if d > 0 { -(d + 2) } else { -(d - 2) };
            }
        }
    }
    // P = 1, Q = (1 - D)/4;  track U_k, V_k, Q^k mod n.
    let q_int = (1 - d) / 4;
    let qm = reduce_mod(q_int, n);
    let dm = reduce_mod(d, n);

    let mut m = n + 1;
    let s = m.trailing_zeros();
    m >>= s;

    let inv2 = n / 2 + 1; // (n + 1)/2 without overflow; n is odd
    let (mut u, mut v, mut qk) = (0u128, 2u128, 1u128); // U_0, V_0, Q^0
    let bits = 128 - m.leading_zeros();
    for i in (0..bits).rev() {
        // double: k -> 2k
        u = mul_mod(u, v, n);
        v = {
            let v2 = mul_mod(v, v, n);
            add_mod(v2, (n - mul_mod(2, qk, n)) % n, n)
        };
        qk = mul_mod(qk, qk, n);
        if (m >> i) & 1 == 1 {
            // increment: 2k -> 2k+1 (P = 1)
            let tu = mul_mod(add_mod(u, v, n), inv2, n);
            let tv = mul_mod(add_mod(mul_mod(dm, u, n), v, n), inv2, n);
            u = tu;
            v = tv;
            qk = mul_mod(qk, qm, n);
        }
    }
    // n is a strong Lucas PRP if U_m = 0, or V_{m·2^r} = 0 for some r < s.
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = {
            let v2 = mul_mod(v, v, n);
            add_mod(v2, (n - mul_mod(2, qk, n)) % n, n)
        };
        qk = mul_mod(qk, qk, n);
        if v == 0 {
            return true;
        }
    }
    false
}

/// Legendre symbol `(x/p)` for an odd certified prime `p`, by Euler's
/// criterion with fast modular exponentiation.
pub fn legendre(x: i128, p: u128) -> Result<Symbol, ArithError> {
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    Ok(euler_symbol(x, p))
}

/// Euler's criterion for a known odd prime; no certification.
fn euler_symbol(x: i128, p: u128) -> Symbol {
    let xr = reduce_mod(x, p);
    if xr == 0 {
        return Symbol::Zero;
    }
    let e = mod_pow(xr, (p - 1) / 2, p);
    if e == 1 {
        Symbol::PlusOne
    } else {
        debug_assert_eq!(e, p - 1);
        Symbol::MinusOne
    }
}

/// Jacobi symbol `(x/m)` for odd positive `m`, by quadratic reciprocity
/// without factoring `m`.
pub fn jacobi(x: i128, m: i128) -> Result<Symbol, ArithError> {
    if m <= 0 || m % 2 == 0 {
        return Err(ArithError::NotOddPositive(m));
    }
    Ok(jacobi_unchecked(x, m as u128))
}

fn jacobi_unchecked(x: i128, m: u128) -> Symbol {
    let mut a = reduce_mod(x, m);
    let mut m = m;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(m % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    if m == 1 {
        Symbol::from_i8(sign)
    } else {
        Symbol::Zero
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::with_capacity(80_000);
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        primes
    })
}

/// Largest magnitude `factorize` will attempt, from `LINKFORM_FACTOR_LIMIT`
/// if set (decimal), otherwise unlimited.  Read once per process.
pub fn factor_limit() -> u128 {
    static LIMIT: OnceLock<u128> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        env::var(FACTOR_LIMIT_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(u128::MAX)
    })
}

/// Complete prime factorization of a non-zero integer.
///
/// Trial division below 10^6, then deterministic Pollard-Brent splitting
/// over a fixed parameter sequence.  The result is certified: every prime
/// passes [`is_prime`] and the product is checked against the input.  On
/// budget exhaustion the error is `ResourceExceeded`, never a wrong answer.
pub fn factorize(n: i128) -> Result<Factorization, ArithError> {
    factorize_limited(n, factor_limit())
}

/// [`factorize`] with an explicit magnitude guard.
pub fn factorize_limited(n: i128, max_magnitude: u128) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::FactorZero);
    }
    let magnitude = n.unsigned_abs();
    if magnitude > max_magnitude {
        return Err(ArithError::ResourceExceeded(format!(
            "|{n}| exceeds the factorization guard {max_magnitude}"
        )));
    }

    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut rest = magnitude;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }

    if rest > 1 {
        let mut budget = SPLIT_ITERATION_BUDGET;
        let mut stack = vec![rest];
        let mut large: Vec<u128> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                large.push(m);
                continue;
            }
            let d = pollard_brent(m, &mut budget)?;
            debug_assert!(d > 1 && d < m && m % d == 0);
            stack.push(d);
            stack.push(m / d);
        }
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }

    let result = Factorization { value: n, sign: if n < 0 { -1 } else { 1 }, factors };
    // Certification: primes increasing and the product restores the input.
    debug_assert!(result.factors.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(result.factors.iter().all(|&(p, _)| is_prime(p)), "uncertified factor");
    assert_eq!(result.recombine(), n, "factorization does not re-multiply");
    Ok(result)
}

/// Brent's cycle variant of the rho method with the fixed parameter
/// sequence c = 1, 2, 3, ...; `m` odd, composite, with no factor < 10^6.
fn pollard_brent(m: u128, budget: &mut u64) -> Result<u128, ArithError> {
    for c in 1u128.. {
        let step = |x: u128| add_mod(mul_mod(x, x, m), c % m, m);
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let (mut g, mut x, mut ys) = (1u128, 0u128, 0u128);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let chunk = 128.min(r - k);
                if *budget < chunk {
                    return Err(ArithError::ResourceExceeded(format!(
                        "splitting {m} exhausted the iteration budget"
                    )));
                }
                *budget -= chunk;
                for _ in 0..chunk {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), m);
                }
                g = gcd_u128(q, m);
                k += chunk;
            }
            r *= 2;
        }
        if g == m {
            // Backtrack one step at a time from the last checkpoint.
            g = 1;
            let mut z = ys;
            while g == 1 {
                z = step(z);
                g = gcd_u128(x.abs_diff(z), m);
            }
        }
        if g != m {
            return Ok(g);
        }
        // Whole cycle collapsed; retry with the next parameter.
    }
    unreachable!()
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Tonelli-Shanks square root of a quadratic residue mod an
/// odd prime; returns the smaller of the two roots.
fn sqrt_mod_prime(x: u128, p: u128) -> u128 {
    let x = x % p;
    if x == 0 {
        return 0;
    }
    debug_assert_eq!(euler_symbol(x as i128, p), Symbol::PlusOne);
    let root = if p % 4 == 3 {
        mod_pow(x, (p + 1) / 4, p)
    } else {
        // Write p - 1 = q·2^s and walk the 2-Sylow tower.
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2u128;
        while euler_symbol(z as i128, p) != Symbol::MinusOne {
            z += 1;
        }
        let mut m = s;
        let mut c = mod_pow(z, q, p);
        let mut t = mod_pow(x, q, p);
        let mut r = mod_pow(x, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = mod_pow(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    debug_assert_eq!(mul_mod(root, root, p), x);
    root.min(p - root)
}

/// Hensel lift of a unit square root from mod `p` to mod `p^e`, `p` odd.
fn lift_sqrt_odd(x: u128, p: u128, e: u32) -> u128 {
    let target = p.pow(e);
    let mut modulus = p;
    let mut r = sqrt_mod_prime(x % p, p);
    for _ in 1..e {
        let next = modulus * p;
        let xr = x % next;
        // t = (x - r²)/modulus · (2r)^(-1) mod p
        let diff = add_mod(xr, next - mul_mod(r, r, next), next);
        debug_assert_eq!(diff % modulus, 0);
        let t = mul_mod(diff / modulus, inv_mod(2 * r % p, p).expect("2r unit"), p);
        r += t * modulus;
        modulus = next;
    }
    debug_assert_eq!(mul_mod(r, r, target), x % target);
    r
}

/// Square root of `x ≡ 1 mod 8` modulo `2^e`, `e ≥ 3`, lifted from 1.
fn lift_sqrt_two(x: u128, e: u32) -> u128 {
    debug_assert!(e >= 3 && x % 8 == 1);
    let mut r = 1u128;
    for k in 3..e {
        let next = 1u128 << (k + 1);
        if (mul_mod(r, r, next)) != x % next {
            r += 1 << (k - 1);
        }
    }
    debug_assert_eq!(mul_mod(r, r, 1 << e), x % (1 << e));
    r
}

/// Decides whether the unit `x` is the square of a unit modulo `|n|`.
///
/// The decision runs prime-by-prime over the factorization of `|n|`: for odd
/// `p^e` the answer is `(x/p) = +1` (Hensel lifting preserves unit squares);
/// for `2` it always holds, for `4` iff `x ≡ 1 mod 4`, and for `2^e`, `e ≥ 3`,
/// iff `x ≡ 1 mod 8`.  A positive answer carries a verified square root, a
/// negative one the obstructing prime power.
pub fn is_square_unit_mod(x: i128, n: i128) -> Result<SquareDecision, ArithError> {
    if n == 0 {
        return Err(ArithError::NotCoprime { value: x, modulus: n });
    }
    let magnitude = n.unsigned_abs();
    if magnitude == 1 {
        return Ok(SquareDecision::Square { root: 0 });
    }
    let xr = reduce_mod(x, magnitude);
    if gcd_u128(xr, magnitude) != 1 {
        return Err(ArithError::NotCoprime { value: x, modulus: n });
    }
    let f = factorize(n)?;
    Ok(is_square_unit_with(xr, &f))
}

/// [`is_square_unit_mod`] against an existing factorization of the modulus;
/// lets callers decide several residues without re-factoring.
pub fn is_square_unit_with(x: u128, f: &Factorization) -> SquareDecision {
    let magnitude = f.magnitude();
    let x = x % magnitude;
    debug_assert_eq!(gcd_u128(x, magnitude), 1, "x must be a unit");

    for pp in f.prime_powers() {
        let ok = if pp.prime == 2 {
            match pp.exponent {
                1 => true,
                2 => x % 4 == 1,
                _ => x % 8 == 1,
            }
        } else {
            euler_symbol(x as i128, pp.prime) == Symbol::PlusOne
        };
        if !ok {
            return SquareDecision::NotSquare { obstruction: pp };
        }
    }

    // Square at every prime power: assemble a root by CRT.
    let mut root = 0u128;
    let mut modulus = 1u128;
    for pp in f.prime_powers() {
        let pe = pp.value();
        let r = if pp.prime == 2 {
            match pp.exponent {
                1 => 1,
                2 => 1,
                e => lift_sqrt_two(x % pe, e),
            }
        } else {
            lift_sqrt_odd(x % pe, pp.prime, pp.exponent)
        };
        if modulus == 1 {
            root = r;
            modulus = pe;
        } else {
            // root' ≡ root mod modulus, ≡ r mod pe
            let inv = inv_mod(modulus % pe, pe).expect("coprime prime powers");
            let delta = add_mod(r % pe, (pe - root % pe) % pe, pe);
            let t = mul_mod(delta, inv, pe);
            root += modulus * t;
            modulus *= pe;
        }
    }
    debug_assert_eq!(modulus, magnitude);
    let root = root.min(magnitude - root);
    assert_eq!(mul_mod(root, root, magnitude), x, "root fails verification");
    SquareDecision::Square { root }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_canonical_examples() {
        assert_eq!(ext_gcd(25, -3).unwrap(), (1, 1, 8)); // 25 - 24 = 1
        assert_eq!(ext_gcd(0, 5).unwrap(), (5, 0, 1));
        assert_eq!(ext_gcd(12, 8).unwrap(), (4, 1, -1)); // 12 - 8 = 4
        assert_eq!(ext_gcd(5, 0).unwrap(), (5, 1, 0));
        assert_eq!(ext_gcd(-5, 0).unwrap(), (5, -1, 0));
        assert_eq!(ext_gcd(0, 0), Err(ArithError::BothZero));
    }

    #[test]
    fn ext_gcd_postconditions() {
        for x in -40i128..=40 {
            for y in -40i128..=40 {
                if x == 0 && y == 0 {
                    continue;
                }
                let (g, u, v) = ext_gcd(x, y).unwrap();
                assert_eq!(u * x + v * y, g);
                assert_eq!(g, gcd(x, y));
                if y != 0 {
                    let step = (y / g).abs();
                    assert!(2 * u.abs() <= step, "non-minimal u for ({x},{y})");
                    if 2 * u.abs() == step {
                        assert!(u >= 0, "tie not broken non-negative for ({x},{y})");
                    }
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 5).unwrap(), Symbol::MinusOne);
        assert_eq!(legendre(-1, 13).unwrap(), Symbol::PlusOne);
        assert_eq!(legendre(0, 7).unwrap(), Symbol::Zero);
        assert!(legendre(3, 4).is_err());
        assert!(legendre(3, 15).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn first_supplement_below_1000() {
        // (-1/p) = +1 iff p ≡ 1 mod 4
        for p in (3u128..1000).filter(|&p| is_prime(p)) {
            let expected = if p % 4 == 1 { Symbol::PlusOne } else { Symbol::MinusOne };
            assert_eq!(legendre(-1, p).unwrap(), expected, "p = {p}");
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 5).unwrap(), Symbol::MinusOne);
        assert_eq!(jacobi(1, 9).unwrap(), Symbol::PlusOne);
        assert_eq!(jacobi(8, 15).unwrap(), Symbol::PlusOne); // (2/3)(3/5) = (-1)(-1)
        assert_eq!(jacobi(0, 1).unwrap(), Symbol::PlusOne);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, -5).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn is_prime_spot_checks() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97) && is_prime(65_537));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(91) && !is_prime(1_000_003u128 * 999_983));
        // Strong pseudoprimes to small bases.
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_474_749_660_383));
        // Above 2^64: Mersenne prime 2^89 - 1 and a composite neighbour.
        let m89 = (1u128 << 89) - 1;
        assert!(is_prime(m89));
        assert!(!is_prime(m89 - 2));
        // Moduli past i128::MAX exercise the sign-safe reductions.
        assert!(is_prime((1u128 << 127) - 1));
        assert!(is_prime(u128::MAX - 158)); // largest prime below 2^128
        assert!(!is_prime(u128::MAX - 160));
        assert!(!is_prime(u128::MAX));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(25).unwrap();
        assert_eq!((f.sign, f.factors.clone()), (1, vec![(5, 2)]));
        let f = factorize(1).unwrap();
        assert_eq!((f.sign, f.factors.clone()), (1, vec![]));
        let f = factorize(-360).unwrap();
        assert_eq!((f.sign, f.factors.clone()), (-1, vec![(2, 3), (3, 2), (5, 1)]));
        assert_eq!(factorize(0), Err(ArithError::FactorZero));
    }

    #[test]
    fn factorize_large_semiprime() {
        // Forces the cycle-finding path: both primes exceed the trial bound.
        let p = 1_000_003u128;
        let q = 1_000_033u128;
        let f = factorize((p * q) as i128).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn factorize_beyond_u64() {
        let p = (1u128 << 89) - 1; // Mersenne prime
        let n = (p * 9) as i128;
        let f = factorize(n).unwrap();
        assert_eq!(f.factors, vec![(3, 2), (p, 1)]);
        assert_eq!(f.recombine(), n);
    }

    #[test]
    fn factorize_respects_explicit_guard() {
        assert!(matches!(
            factorize_limited(1 << 40, 1 << 20),
            Err(ArithError::ResourceExceeded(_))
        ));
        assert!(factorize_limited(1 << 19, 1 << 20).is_ok());
    }

    #[test]
    fn factorize_random_remultiplication() {
        // 10,000 seeded random inputs re-multiply exactly.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xFAC70);
        for _ in 0..10_000 {
            let n: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
            if n == 0 {
                continue;
            }
            let f = factorize(n as i128).unwrap();
            assert_eq!(f.recombine(), n as i128);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn square_unit_examples() {
        for n in [2i128, 3, 10, 25, -25, 4096] {
            match is_square_unit_mod(1, n).unwrap() {
                SquareDecision::Square { root } => assert_eq!(root, 1),
                other => panic!("1 must be a square mod {n}, got {other:?}"),
            }
        }
        assert_eq!(
            is_square_unit_mod(18, 25).unwrap(),
            SquareDecision::NotSquare { obstruction: PrimePower { prime: 5, exponent: 2 } }
        );
        assert_eq!(is_square_unit_mod(24, 25).unwrap(), SquareDecision::Square { root: 7 });
        assert_eq!(is_square_unit_mod(7, 1).unwrap(), SquareDecision::Square { root: 0 });
        assert!(matches!(is_square_unit_mod(10, 25), Err(ArithError::NotCoprime { .. })));
    }

    #[test]
    fn square_unit_two_adic_rules() {
        // mod 2: every unit is a square
        assert!(is_square_unit_mod(1, 2).unwrap().is_square());
        // mod 4: exactly x ≡ 1
        assert!(is_square_unit_mod(1, 4).unwrap().is_square());
        assert!(!is_square_unit_mod(3, 4).unwrap().is_square());
        // mod 8 and higher: exactly x ≡ 1 mod 8
        assert!(is_square_unit_mod(1, 8).unwrap().is_square());
        for x in [3i128, 5, 7] {
            assert!(!is_square_unit_mod(x, 8).unwrap().is_square());
        }
        assert!(is_square_unit_mod(17, 32).unwrap().is_square());
        assert!(!is_square_unit_mod(5, 32).unwrap().is_square());
    }

    #[test]
    fn square_unit_witnesses_verify() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x51);
        for _ in 0..300 {
            let n: i128 = rng.gen_range(2..=5000);
            let x: i128 = rng.gen_range(1..n);
            if gcd(x, n) != 1 {
                continue;
            }
            match is_square_unit_mod(x, n).unwrap() {
                SquareDecision::Square { root } => {
                    assert_eq!(mul_mod(root, root, n as u128), x as u128);
                    assert_eq!(gcd(root as i128, n), 1);
                }
                SquareDecision::NotSquare { obstruction } => {
                    let pe = obstruction.value();
                    assert_eq!(n as u128 % pe, 0);
                    // exhaustive check that x is a non-square unit mod p^e
                    let found = (1..pe).any(|l| {
                        gcd_u128(l, pe) == 1 && mul_mod(l, l, pe) == (x as u128) % pe
                    });
                    assert!(!found, "obstruction {obstruction} refuted for x={x}, n={n}");
                }
            }
        }
    }
}
