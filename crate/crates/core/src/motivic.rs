//! Z[L] class calculus for the incidence-divisor argument: classes of
//! projective spaces, the Grassmannian Gr(2,5), and its hyperplane
//! sections by skew forms of rank 2 and 4; the symbolic identity
//! ([X] - [Y]) L^4 = 0; and point-count cross-checks over small fields.

use serde::Serialize;
use std::fmt;

use crate::ffield::{FfieldError, Field, PrimeField};
use crate::grassmann::{
    enumerate_rank2_points, projective_points, skew_from_coords, skew_rank, GrassmannError, Side,
};
use crate::MatrixFF;

/// Polynomial in the affine-line class L with integer coefficients,
/// lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LPolynomial {
    coeffs: Vec<i64>,
}

impl LPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        LPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        LPolynomial::new(vec![])
    }

    pub fn one() -> Self {
        LPolynomial::new(vec![1])
    }

    /// L^k.
    pub fn l_power(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        LPolynomial::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        LPolynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0)
                        + other.coeffs.get(i).copied().unwrap_or(0)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        LPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LPolynomial::new(out)
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0i64, |acc, &c| acc * q + c)
    }
}

impl fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "L")?;
                    } else {
                        write!(f, "L^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// [P^n] = 1 + L + ... + L^n.
pub fn class_pn(n: usize) -> LPolynomial {
    LPolynomial::new(vec![1; n + 1])
}

/// [Gr(2,5)] = (1 + L + L^2 + L^3 + L^4)(1 + L^2).
pub fn class_grassmannian_25() -> LPolynomial {
    class_pn(4).mul(&LPolynomial::new(vec![1, 0, 1]))
}

#[derive(Debug, thiserror::Error)]
pub enum MotivicError {
    #[error("a hyperplane section of the Grassmannian has skew rank 2 or 4, got {0}")]
    InvalidRank(usize),
    #[error("expected S2 - S4 = L^4, got {0}")]
    CancellationFailed(LPolynomial),
    #[error(transparent)]
    Enumeration(#[from] GrassmannError),
    #[error(transparent)]
    Field(#[from] FfieldError),
}

/// Class of the hyperplane section of Gr(2,5) by a skew form of the
/// given rank: (L^2+L+1)(L^3+L^2+1) for rank 2, (L^2+1)(L^3+L^2+L+1)
/// for rank 4.
pub fn class_section(rank: usize) -> Result<LPolynomial, MotivicError> {
    match rank {
        2 => Ok(LPolynomial::new(vec![1, 1, 1]).mul(&LPolynomial::new(vec![1, 0, 1, 1]))),
        4 => Ok(LPolynomial::new(vec![1, 0, 1]).mul(&LPolynomial::new(vec![1, 1, 1, 1]))),
        r => Err(MotivicError::InvalidRank(r)),
    }
}

/// A class affine-linear in the unknown classes [X] and [Y]:
/// c + a*[X] + b*[Y] with c, a, b in Z[L]. Products of the unknowns are
/// unrepresentable by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MotivicClass {
    pub constant: LPolynomial,
    pub x: LPolynomial,
    pub y: LPolynomial,
}

impl MotivicClass {
    pub fn constant(c: LPolynomial) -> Self {
        MotivicClass {
            constant: c,
            ..Default::default()
        }
    }

    pub fn x_class() -> Self {
        MotivicClass {
            x: LPolynomial::one(),
            ..Default::default()
        }
    }

    pub fn y_class() -> Self {
        MotivicClass {
            y: LPolynomial::one(),
            ..Default::default()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        MotivicClass {
            constant: self.constant.add(&other.constant),
            x: self.x.add(&other.x),
            y: self.y.add(&other.y),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        MotivicClass {
            constant: self.constant.sub(&other.constant),
            x: self.x.sub(&other.x),
            y: self.y.sub(&other.y),
        }
    }

    pub fn scale(&self, f: &LPolynomial) -> Self {
        MotivicClass {
            constant: self.constant.mul(f),
            x: self.x.mul(f),
            y: self.y.mul(f),
        }
    }

    /// Substitute a polynomial for both unknowns and evaluate at q.
    pub fn eval(&self, q: i64, x_count: i64, y_count: i64) -> i64 {
        self.constant.eval(q) + self.x.eval(q) * x_count + self.y.eval(q) * y_count
    }
}

/// The two fibration expansions of the incidence divisor class and the
/// L^4 factor of their difference: via the first projection
/// [X] S2 + ([Gr] - [X]) S4 = [X] L^4 + [Gr] S4, via the second the same
/// with [Y]; the difference is ([X] - [Y]) L^4.
pub fn incidence_identity() -> Result<(MotivicClass, MotivicClass, LPolynomial), MotivicError> {
    let s2 = class_section(2)?;
    let s4 = class_section(4)?;
    let l4 = LPolynomial::l_power(4);
    let cancellation = s2.sub(&s4);
    if cancellation != l4 {
        return Err(MotivicError::CancellationFailed(cancellation));
    }
    let gr = MotivicClass::constant(class_grassmannian_25());
    let via_p1 = MotivicClass::x_class()
        .scale(&s2)
        .add(&gr.sub(&MotivicClass::x_class()).scale(&s4));
    let via_p2 = MotivicClass::y_class()
        .scale(&s2)
        .add(&gr.sub(&MotivicClass::y_class()).scale(&s4));
    let diff = via_p1.sub(&via_p2);
    debug_assert_eq!(diff.constant, LPolynomial::zero());
    debug_assert_eq!(diff.x, l4);
    debug_assert_eq!(diff.y, l4.neg());
    Ok((via_p1, via_p2, l4))
}

/// Count points of the hyperplane section of the Grassmannian cut out by
/// the linear form with the given Pluecker coefficients.
pub fn section_count(field: PrimeField, omega: &[u64]) -> u64 {
    assert_eq!(omega.len(), 10);
    let q = field.modulus();
    let mut count = 0u64;
    for x in projective_points(q, 9) {
        if skew_rank(&skew_from_coords(field, &x)).0 != 2 {
            continue;
        }
        let mut dot = 0u64;
        for k in 0..10 {
            dot = field.add(&dot, &field.mul(&x[k], &omega[k]));
        }
        if dot == 0 {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub prime: u64,
    pub n_x: u64,
    pub n_y: u64,
    pub n_gr: u64,
    /// Incidence-pair count; enumerated only at q = 2.
    pub n_q: Option<u64>,
    pub incidence_balanced_x: Option<bool>,
    pub incidence_balanced_y: Option<bool>,
    pub marginals_equal: bool,
}

impl CountReport {
    pub fn verified(&self) -> bool {
        self.marginals_equal
            && self.incidence_balanced_x != Some(false)
            && self.incidence_balanced_y != Some(false)
    }
}

/// Enumerate the point counts of X, Y, Gr over F_q and, at q = 2, the
/// incidence pairs (x, y) with x on the first Grassmannian, y on the
/// translated dual one, and zero Pluecker pairing; checks
/// n_Q = n_X q^4 + n_Gr (q^2+1)(q^3+q^2+q+1) on both sides.
pub fn count_and_compare(field: PrimeField, g: &MatrixFF) -> Result<CountReport, MotivicError> {
    let q = field.modulus();
    let n_x = enumerate_rank2_points(field, g, Side::X)?;
    let n_y = enumerate_rank2_points(field, g, Side::Y)?;
    let id = MatrixFF::identity(field, 10);
    let n_gr = enumerate_rank2_points(field, &id, Side::X)?;

    let mut n_q = None;
    let mut balanced_x = None;
    let mut balanced_y = None;
    if q == 2 {
        let g_mt = g.inverse()?.transpose();
        let gr1: Vec<Vec<u64>> = projective_points(q, 9)
            .filter(|x| skew_rank(&skew_from_coords(field, x)).0 == 2)
            .collect();
        let gr2_dual: Vec<Vec<u64>> = projective_points(q, 9)
            .filter(|y| {
                let yg: Vec<u64> = (0..10)
                    .map(|j| {
                        let mut acc = 0u64;
                        for l in 0..10 {
                            acc = field.add(&acc, &field.mul(&y[l], g_mt.get(l, j)));
                        }
                        acc
                    })
                    .collect();
                skew_rank(&skew_from_coords(field, &yg)).0 == 2
            })
            .collect();
        let mut pairs = 0u64;
        for x in &gr1 {
            for y in &gr2_dual {
                let mut dot = 0u64;
                for k in 0..10 {
                    dot = field.add(&dot, &field.mul(&x[k], &y[k]));
                }
                if dot == 0 {
                    pairs += 1;
                }
            }
        }
        n_q = Some(pairs);
        let s4_at_q = class_section(4)?.eval(q as i64) as u64;
        let q4 = q.pow(4);
        balanced_x = Some(pairs == n_x * q4 + n_gr * s4_at_q);
        balanced_y = Some(pairs == n_y * q4 + n_gr * s4_at_q);
    }

    Ok(CountReport {
        prime: q,
        n_x,
        n_y,
        n_gr,
        n_q,
        incidence_balanced_x: balanced_x,
        incidence_balanced_y: balanced_y,
        marginals_equal: n_x == n_y,
    })
}
