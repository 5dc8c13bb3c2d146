//! Independent recomputation of the fourth cohomology group as the cokernel
//! of the degree-three restriction matrix, via integer Smith normal form.
//!
//! The matrix has columns `(a0, a1²)` and `(b0, b1²)`; its cokernel is the
//! group the linking form lives on.  The SNF comes with explicit unimodular
//! transforms so cyclicity has a checkable certificate.

use std::fmt;

use crate::family::FamilyParams;

/// Dense 2x2 integer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntMatrix2x2 {
    pub m11: i128,
    pub m12: i128,
    pub m21: i128,
    pub m22: i128,
}

impl IntMatrix2x2 {
    pub fn new(m11: i128, m12: i128, m21: i128, m22: i128) -> Self {
        IntMatrix2x2 { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        IntMatrix2x2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i128 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn mul(&self, rhs: &IntMatrix2x2) -> IntMatrix2x2 {
        IntMatrix2x2::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }

    fn is_zero(&self) -> bool {
        self.m11 == 0 && self.m12 == 0 && self.m21 == 0 && self.m22 == 0
    }

    /// Adjugate: `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> IntMatrix2x2 {
        IntMatrix2x2::new(self.m22, -self.m12, -self.m21, self.m11)
    }
}

impl fmt::Display for IntMatrix2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m11, self.m12, self.m21, self.m22)
    }
}

/// Smith normal form `left · M · right = diag(d1, d2)` with unimodular
/// transforms and `0 <= d1`, `d1 | d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SnfResult {
    pub d1: i128,
    pub d2: i128,
    pub left: IntMatrix2x2,
    pub right: IntMatrix2x2,
}

impl SnfResult {
    pub fn diagonal(&self) -> IntMatrix2x2 {
        IntMatrix2x2::new(self.d1, 0, 0, self.d2)
    }

    /// Order of the cokernel `Z²/im(M)`: `d1·d2`, or `None` when infinite.
    pub fn cokernel_order(&self) -> Option<u128> {
        if self.d2 == 0 {
            None
        } else {
            Some((self.d1 * self.d2) as u128)
        }
    }

    /// The cokernel is cyclic (a quotient of Z by one relation) iff `d1 = 1`,
    /// or in the degenerate rank-0 case never (Z² is not cyclic).
    pub fn cokernel_cyclic(&self) -> bool {
        self.d1 == 1
    }
}

/// Smith normal form of a 2x2 integer matrix by elementary row and column
/// operations with explicit transform accumulation.
pub fn smith_normal_form(m: &IntMatrix2x2) -> SnfResult {
    let mut a = *m;
    let mut left = IntMatrix2x2::identity();
    let mut right = IntMatrix2x2::identity();

    // Row op: row_i -= q * row_j, mirrored into `left`.
    fn row_sub(a: &mut IntMatrix2x2, left: &mut IntMatrix2x2, q: i128) {
        a.m21 -= q * a.m11;
        a.m22 -= q * a.m12;
        left.m21 -= q * left.m11;
        left.m22 -= q * left.m12;
    }
    fn row_swap(a: &mut IntMatrix2x2, left: &mut IntMatrix2x2) {
        std::mem::swap(&mut a.m11, &mut a.m21);
        std::mem::swap(&mut a.m12, &mut a.m22);
        std::mem::swap(&mut left.m11, &mut left.m21);
        std::mem::swap(&mut left.m12, &mut left.m22);
    }
    fn col_sub(a: &mut IntMatrix2x2, right: &mut IntMatrix2x2, q: i128) {
        a.m12 -= q * a.m11;
        a.m22 -= q * a.m21;
        right.m12 -= q * right.m11;
        right.m22 -= q * right.m21;
    }
    fn col_swap(a: &mut IntMatrix2x2, right: &mut IntMatrix2x2) {
        std::mem::swap(&mut a.m11, &mut a.m12);
        std::mem::swap(&mut a.m21, &mut a.m22);
        std::mem::swap(&mut right.m11, &mut right.m12);
        std::mem::swap(&mut right.m21, &mut right.m22);
    }

    if !a.is_zero() {
        loop {
            // Bring a nonzero entry to the pivot.
            if a.m11 == 0 {
                if a.m21 != 0 {
                    row_swap(&mut a, &mut left);
                } else if a.m12 != 0 {
                    col_swap(&mut a, &mut right);
                } else {
                    // only m22 nonzero
                    row_swap(&mut a, &mut left);
                    col_swap(&mut a, &mut right);
                }
            }
            // Euclidean elimination below and right of the pivot.
            while a.m21 != 0 {
                let q = a.m21.div_euclid(a.m11);
                row_sub(&mut a, &mut left, q);
                if a.m21 != 0 {
                    row_swap(&mut a, &mut left);
                }
            }
            while a.m12 != 0 {
                let q = a.m12.div_euclid(a.m11);
                col_sub(&mut a, &mut right, q);
                if a.m12 != 0 {
                    col_swap(&mut a, &mut right);
                    // column swap can repopulate the (2,1) entry
                    while a.m21 != 0 {
                        let q = a.m21.div_euclid(a.m11);
                        row_sub(&mut a, &mut left, q);
                        if a.m21 != 0 {
                            row_swap(&mut a, &mut left);
                        }
                    }
                }
            }
            // Diagonal now; enforce the divisibility chain.
            if a.m22 % a.m11 != 0 {
                // Fold row 2 into row 1 and restart the elimination.
                a.m11 += a.m21;
                a.m12 += a.m22;
                left.m11 += left.m21;
                left.m12 += left.m22;
                continue;
            }
            break;
        }
    }

    // Normalize diagonal signs by negating rows (keeps left unimodular).
    if a.m11 < 0 {
        a.m11 = -a.m11;
        left.m11 = -left.m11;
        left.m12 = -left.m12;
    }
    if a.m22 < 0 {
        a.m22 = -a.m22;
        left.m21 = -left.m21;
        left.m22 = -left.m22;
    }

    let result = SnfResult { d1: a.m11, d2: a.m22, left, right };
    // Certificate: transforms are unimodular and reproduce the diagonal.
    assert_eq!(left.det().abs(), 1, "left transform not unimodular");
    assert_eq!(right.det().abs(), 1, "right transform not unimodular");
    assert_eq!(left.mul(m).mul(&right), result.diagonal(), "transform identity fails");
    assert!(result.d1 >= 0 && result.d2 >= 0);
    assert!(result.d1 == 0 && result.d2 == 0 || result.d1 != 0 && result.d2 % result.d1 == 0);
    result
}

/// Restriction matrix of a family member in the fixed degree-three bases:
/// columns `(a0, a1²)` and `(b0, b1²)`.  Negating the second column does not
/// change the cokernel, so the positive convention is used throughout.
pub fn restriction_matrix(p: &FamilyParams) -> IntMatrix2x2 {
    let inv = p.derived();
    let a1 = p.a().x1() as i128;
    let b1 = p.b().x1() as i128;
    IntMatrix2x2::new(inv.a0 as i128, inv.b0 as i128, a1 * a1, b1 * b1)
}

/// SNF divisors of the restriction matrix.  For valid parameters `d1 = 1`
/// always holds, so H⁴ is cyclic of order `d2 = |n|` (0 meaning infinite).
pub fn h4_structure(p: &FamilyParams) -> (u64, u64) {
    let snf = smith_normal_form(&restriction_matrix(p));
    assert_eq!(snf.d1, 1, "freeness conditions force a cyclic cokernel");
    (snf.d1 as u64, snf.d2 as u64)
}
