//! Eigenvalue-multiset calculus for involutive automorphisms acting on
//! the 51-dimensional deformation space of an intersection of two
//! translated Grassmannians: fixed-space multiplicities, traces for both
//! automorphism types, the trace of the duality involution, and an
//! independent explicit-matrix oracle over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

use crate::ffield::{Matrix, RandomState, Rationals};
use crate::grassmann::PAIRS;
use crate::MatrixQ;

pub const TANGENT_DIM: i64 = 51;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TracesError {
    #[error("involution type {{{p}, {q}}} must have part sum {expected}")]
    BadSum { p: u32, q: u32, expected: u32 },
    #[error("type {{9, 1}} forces a negative fixed-space multiplicity; no such automorphism")]
    ImpossibleType,
    #[error("pair-sum multisets of the two eigenvalue lists differ by no global scalar")]
    PairMultisetMismatch,
    #[error("no generic conjugator found in {0} attempts")]
    RetryExhausted(u64),
    #[error("input is not a +-1 diagonal involution")]
    NotInvolution,
}

/// Unordered eigenvalue-multiplicity pair {p, q} of a diagonalizable
/// involution, p + q fixed by context (5 upstairs, 10 downstairs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvolutionType {
    pub p: u32,
    pub q: u32,
}

impl InvolutionType {
    fn new(p: u32, q: u32, expected: u32) -> Result<Self, TracesError> {
        if p + q != expected || p == 0 || q == 0 {
            return Err(TracesError::BadSum { p, q, expected });
        }
        Ok(InvolutionType {
            p: p.max(q),
            q: p.min(q),
        })
    }

    /// A type upstairs: p + q = 5.
    pub fn on_v(p: u32, q: u32) -> Result<Self, TracesError> {
        InvolutionType::new(p, q, 5)
    }

    /// A type downstairs: p + q = 10.
    pub fn on_w(p: u32, q: u32) -> Result<Self, TracesError> {
        InvolutionType::new(p, q, 10)
    }

    /// Exponents mod 2 of the eigenvalues: p zeros, q ones.
    pub fn exponents(&self) -> EigenExponents {
        let mut exps = vec![0u64; self.p as usize];
        exps.extend(std::iter::repeat(1).take(self.q as usize));
        EigenExponents { modulus: 2, exps }
    }
}

/// Five eigenvalues of a finite-order diagonalizable element, stored as
/// exponents of a primitive m-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenExponents {
    pub modulus: u64,
    pub exps: Vec<u64>,
}

impl EigenExponents {
    pub fn new(modulus: u64, exps: Vec<u64>) -> Self {
        assert!(modulus >= 1 && exps.len() == 5);
        assert!(exps.iter().all(|&e| e < modulus));
        EigenExponents { modulus, exps }
    }

    /// Sorted multiset of pairwise sums (the exponents of the eigenvalues
    /// of the induced action on pairs).
    fn pair_sums(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(10);
        for i in 0..5 {
            for j in (i + 1)..5 {
                out.push((self.exps[i] + self.exps[j]) % self.modulus);
            }
        }
        out.sort_unstable();
        out
    }
}

/// mult_1 of the adjoint action of an involution of type {p, q}:
/// p^2 + q^2.
pub fn ad_fixed_mult(t: InvolutionType) -> i64 {
    (t.p as i64).pow(2) + (t.q as i64).pow(2)
}

/// Signed multiplicity of the trivial eigenvalue in the multiset
/// {1} + {mu_i mu_j / mu_k mu_l} - {lambda_i / lambda_k} - {mu_i / mu_k},
/// exponent arithmetic mod m. The two lists must induce the same
/// pair-product multiset up to one global scalar.
pub fn eigen_multiset_mult1(
    lam: &EigenExponents,
    mu: &EigenExponents,
) -> Result<i64, TracesError> {
    assert_eq!(lam.modulus, mu.modulus);
    let m = lam.modulus;
    let lam_sums = lam.pair_sums();
    let mu_sums = mu.pair_sums();
    let shifted_matches = (0..m).any(|c| {
        let mut shifted: Vec<u64> = lam_sums.iter().map(|&s| (s + c) % m).collect();
        shifted.sort_unstable();
        shifted == mu_sums
    });
    if !shifted_matches {
        return Err(TracesError::PairMultisetMismatch);
    }

    let mut mult: i64 = 1;
    for i in 0..5 {
        for j in (i + 1)..5 {
            for k in 0..5 {
                for l in (k + 1)..5 {
                    let s = (mu.exps[i] + mu.exps[j] + 2 * m - mu.exps[k] - mu.exps[l]) % m;
                    if s == 0 {
                        mult += 1;
                    }
                }
            }
        }
    }
    for e in [lam, mu] {
        for i in 0..5 {
            for k in 0..5 {
                if e.exps[i] == e.exps[k] {
                    mult -= 1;
                }
            }
        }
    }
    Ok(mult)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceKind {
    TypeI,
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub kind: TraceKind,
    pub inputs: Vec<InvolutionType>,
    pub mult1: i64,
    pub trace: i64,
}

fn report(kind: TraceKind, inputs: Vec<InvolutionType>, mult1: i64) -> TraceReport {
    TraceReport {
        kind,
        inputs,
        trace: 2 * mult1 - TANGENT_DIM,
        mult1,
    }
}

/// Trace on the deformation space of a type-I involution pair acting with
/// eigenvalue types (a0, b0) upstairs.
pub fn trace_type1(a0: InvolutionType, b0: InvolutionType) -> Result<TraceReport, TracesError> {
    if a0.p + a0.q != 5 || b0.p + b0.q != 5 {
        return Err(TracesError::BadSum {
            p: a0.p,
            q: a0.q,
            expected: 5,
        });
    }
    let mult1 = eigen_multiset_mult1(&a0.exponents(), &b0.exponents())?;
    Ok(report(TraceKind::TypeI, vec![a0, b0], mult1))
}

/// Trace of a type-II (factor-swapping) involution with downstairs type
/// {p, q}: mult_1 = 76 - p^2 - q^2. The type {9, 1} is rejected since it
/// would give a negative multiplicity.
pub fn trace_type2(a: InvolutionType) -> Result<TraceReport, TracesError> {
    if a.p + a.q != 10 {
        return Err(TracesError::BadSum {
            p: a.p,
            q: a.q,
            expected: 10,
        });
    }
    let mult1 = 76 - ad_fixed_mult(a);
    if mult1 < 0 {
        return Err(TracesError::ImpossibleType);
    }
    Ok(report(TraceKind::TypeII, vec![a], mult1))
}

/// Every trace an involutive automorphism can realize on the
/// 51-dimensional space: the identity plus all type-I and type-II values.
pub fn allowed_involution_traces() -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    out.insert(TANGENT_DIM);
    let h_types = [(4, 1), (3, 2)];
    for &(p, q) in &h_types {
        for &(r, s) in &h_types {
            let a = InvolutionType::on_v(p, q).expect("valid");
            let b = InvolutionType::on_v(r, s).expect("valid");
            out.insert(trace_type1(a, b).expect("valid pair").trace);
        }
    }
    for p in 5..=9u32 {
        let t = InvolutionType::on_w(p, 10 - p).expect("valid");
        if let Ok(r) = trace_type2(t) {
            out.insert(r.trace);
        }
    }
    out
}

/// Trace of the negative-transpose map R -> -R^T on pgl(L): -dim(L) + 1
/// (only the diagonal elementary matrices contribute on gl, and the
/// scalar quotient adds one).
pub fn pgl_neg_transpose_trace(dim: i64) -> i64 {
    -dim + 1
}

/// Trace of the differential of the duality involution on the
/// 51-dimensional space: twice the trace on g/h minus the trace on g,
/// with g = pgl(10) and h = pgl(5).
pub fn trace_dtau() -> i64 {
    let on_g = pgl_neg_transpose_trace(10);
    let on_h = pgl_neg_transpose_trace(5);
    let on_quotient = on_g - on_h;
    2 * on_quotient - on_g
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The induced map on pairs: (wedge2 M)_{(i,j),(k,l)} =
/// M_ik M_jl - M_il M_jk, rows and columns in the fixed pair order.
pub fn wedge2(m: &MatrixQ) -> MatrixQ {
    assert_eq!((m.rows(), m.cols()), (5, 5));
    Matrix::from_fn(Rationals, 10, 10, |r, c| {
        let (i, j) = PAIRS[r];
        let (k, l) = PAIRS[c];
        m.get(i, k) * m.get(j, l) - m.get(i, l) * m.get(j, k)
    })
}

/// Derivative of the pair action at the identity: R acts on e_k ^ e_l as
/// (R e_k) ^ e_l + e_k ^ (R e_l), as a 10x10 matrix.
pub fn wedge2_derivative(r: &MatrixQ) -> MatrixQ {
    assert_eq!((r.rows(), r.cols()), (5, 5));
    let mut out = Matrix::zero(Rationals, 10, 10);
    for (col, &(k, l)) in PAIRS.iter().enumerate() {
        for a in 0..5 {
            // (R e_k) ^ e_l picks up R_ak e_a ^ e_l.
            if a != l {
                let (row, sign) = pair_slot(a, l);
                add_entry(&mut out, row, col, r.get(a, k), sign);
            }
            // e_k ^ (R e_l) picks up R_al e_k ^ e_a.
            if a != k {
                let (row, sign) = pair_slot(k, a);
                add_entry(&mut out, row, col, r.get(a, l), sign);
            }
        }
    }
    out
}

fn pair_slot(a: usize, b: usize) -> (usize, i64) {
    if a < b {
        (PAIRS.iter().position(|&p| p == (a, b)).unwrap(), 1)
    } else {
        (PAIRS.iter().position(|&p| p == (b, a)).unwrap(), -1)
    }
}

fn add_entry(m: &mut MatrixQ, row: usize, col: usize, v: &BigRational, sign: i64) {
    let cur = m.get(row, col).clone();
    m.set(row, col, cur + q(sign) * v);
}

fn flatten(m: &MatrixQ) -> Vec<BigRational> {
    let mut v = Vec::with_capacity(100);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            v.push(m.get(i, j).clone());
        }
    }
    v
}

fn columns_matrix(cols: &[Vec<BigRational>]) -> MatrixQ {
    let n = cols[0].len();
    Matrix::from_fn(Rationals, n, cols.len(), |i, j| cols[j][i].clone())
}

/// Solve basis * X = rhs column by column via one Gaussian elimination of
/// the augmented matrix; None when some column is outside the span.
fn solve_in_span(basis: &MatrixQ, rhs: &MatrixQ) -> Option<MatrixQ> {
    let n = basis.rows();
    let k = basis.cols();
    let w = rhs.cols();
    assert_eq!(rhs.rows(), n);
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| basis.get(i, j).clone()).collect();
            row.extend((0..w).map(|j| rhs.get(i, j).clone()));
            row
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(k);
    let mut row = 0usize;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| !aug[r][col].is_zero()) else {
            // Basis columns must be independent for coefficients to be
            // well defined.
            return None;
        };
        aug.swap(row, p);
        let inv = aug[row][col].clone().recip();
        for c in col..(k + w) {
            let v = aug[row][c].clone() * &inv;
            aug[row][c] = v;
        }
        for r in 0..n {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..(k + w) {
                    let v = aug[r][c].clone() - &f * &aug[row][c];
                    aug[r][c] = v;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Consistency: no leftover nonzero rhs entries below the pivots.
    for r in row..n {
        if (k..k + w).any(|c| !aug[r][c].is_zero()) {
            return None;
        }
    }
    Some(Matrix::from_fn(Rationals, k, w, |i, j| {
        aug[pivot_rows[i]][k + j].clone()
    }))
}

/// Trace of conjugation by `a` on all of gl(10), computed entrywise from
/// matrix products.
fn full_conjugation_trace(a: &MatrixQ) -> BigRational {
    let a_inv = a.inverse().expect("involution invertible");
    let mut tr = BigRational::zero();
    for r in 0..10 {
        for c in 0..10 {
            let mut e = Matrix::zero(Rationals, 10, 10);
            e.set(r, c, BigRational::one());
            let img = a.mul(&e).unwrap().mul(&a_inv).unwrap();
            tr += img.get(r, c);
        }
    }
    tr
}

fn diag_pm1(signs: &[i64; 5]) -> Result<MatrixQ, TracesError> {
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(TracesError::NotInvolution);
    }
    Ok(Matrix::from_fn(Rationals, 5, 5, |i, j| {
        if i == j {
            q(signs[i])
        } else {
            BigRational::zero()
        }
    }))
}

/// Explicit-matrix oracle for the type-I trace: builds the pair actions
/// A and B of two +-1 diagonal involutions, solves A g = g B for a random
/// invertible conjugator over exact rationals, and computes the trace on
/// the 51-dimensional quotient from honest restriction solves: trace on
/// (gl10/h) + (gl10/h) minus trace on the embedded copy of pgl(10), where
/// h is the image of gl(5) under the derivative of the pair action.
pub fn oracle_trace_type1(
    a0_signs: &[i64; 5],
    b0_signs: &[i64; 5],
    seed: u64,
) -> Result<BigRational, TracesError> {
    let a0 = diag_pm1(a0_signs)?;
    let b0 = diag_pm1(b0_signs)?;
    let a = wedge2(&a0);
    let mut b = wedge2(&b0);
    // A and B represent involutions in PGL: pick the lift of B whose
    // eigenvalue multiplicities match A's, else no conjugator exists.
    let plus = |m: &MatrixQ| (0..10).filter(|&i| m.get(i, i).is_one()).count();
    if plus(&a) != plus(&b) {
        b = Matrix::from_fn(Rationals, 10, 10, |i, j| -b.get(i, j));
    }
    if plus(&a) != plus(&b) {
        return Err(TracesError::RetryExhausted(0));
    }
    debug_assert!(a.mul(&a).unwrap().is_identity());
    debug_assert!(b.mul(&b).unwrap().is_identity());

    // Image of gl(5): 25 derivative matrices, flattened to 100-vectors.
    let h_cols: Vec<Vec<BigRational>> = (0..25)
        .map(|idx| {
            let mut e = Matrix::zero(Rationals, 5, 5);
            e.set(idx / 5, idx % 5, BigRational::one());
            flatten(&wedge2_derivative(&e))
        })
        .collect();
    let h_mat = columns_matrix(&h_cols);
    let (h_rank, _) = h_mat.rank_and_kernel();
    debug_assert_eq!(h_rank, 25);

    let mut rng = RandomState::new(seed);
    let max_attempts = 200u64;
    for _ in 0..max_attempts {
        // A g = g B entrywise forces g_st = 0 unless A_ss = B_tt; fill
        // the allowed support with random nonzero entries.
        let g = Matrix::from_fn(Rationals, 10, 10, |s, t| {
            if a.get(s, s) == b.get(t, t) {
                q(rng.below(19) as i64 - 9)
            } else {
                BigRational::zero()
            }
        });
        let Ok(g_inv) = g.inverse() else { continue };
        debug_assert_eq!(a.mul(&g).unwrap(), g.mul(&b).unwrap());

        // Consistency of the presentation kernel: h and g h g^{-1} meet
        // at least in the scalars, and in at most one extra direction
        // (the derivative of the involution itself when the two types
        // coincide).
        let conj_h_cols: Vec<Vec<BigRational>> = (0..25)
            .map(|i| {
                let hm = Matrix::from_fn(Rationals, 10, 10, |r, c| h_cols[i][r * 10 + c].clone());
                flatten(&g.mul(&hm).unwrap().mul(&g_inv).unwrap())
            })
            .collect();
        let mut stacked_cols = h_cols.clone();
        stacked_cols.extend(conj_h_cols);
        let stacked = columns_matrix(&stacked_cols);
        let (rank, _) = stacked.rank_and_kernel();
        // dim(h) + dim(ghg^{-1}) - dim(intersection) = rank.
        let intersection = 50 - rank;
        if !(1..=2).contains(&intersection) {
            continue;
        }

        let quotient_trace = |m: &MatrixQ| -> BigRational {
            let full = full_conjugation_trace(m);
            let m_inv = m.inverse().expect("invertible");
            let acted: Vec<Vec<BigRational>> = h_cols
                .iter()
                .map(|col| {
                    let hm = Matrix::from_fn(Rationals, 10, 10, |r, c| col[r * 10 + c].clone());
                    flatten(&m.mul(&hm).unwrap().mul(&m_inv).unwrap())
                })
                .collect();
            let coeffs = solve_in_span(&h_mat, &columns_matrix(&acted))
                .expect("h is invariant under conjugation by the pair action");
            let mut sub = BigRational::zero();
            for i in 0..25 {
                sub += coeffs.get(i, i);
            }
            full - sub
        };

        let tr_w = quotient_trace(&a) + quotient_trace(&b);
        // The embedded copy of pgl(10) carries conjugation by A; scalars
        // (the kernel) are fixed, so subtract their unit contribution.
        let tr_embedded = full_conjugation_trace(&a) - BigRational::one();
        return Ok(tr_w - tr_embedded);
    }
    Err(TracesError::RetryExhausted(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32, q: u32) -> InvolutionType {
        InvolutionType::on_v(p, q).unwrap()
    }

    #[test]
    fn ad_fixed_mult_examples() {
        assert_eq!(ad_fixed_mult(t(4, 1)), 17);
        assert_eq!(ad_fixed_mult(t(3, 2)), 13);
        assert_eq!(ad_fixed_mult(InvolutionType::on_w(5, 5).unwrap()), 50);
    }

    #[test]
    fn eigen_multiset_examples() {
        let trivial = EigenExponents::new(1, vec![0; 5]);
        assert_eq!(eigen_multiset_mult1(&trivial, &trivial).unwrap(), 51);
        let e41 = t(4, 1).exponents();
        let e32 = t(3, 2).exponents();
        assert_eq!(eigen_multiset_mult1(&e41, &e41).unwrap(), 19);
        assert_eq!(eigen_multiset_mult1(&e41, &e32).unwrap(), 23);
        assert_eq!(eigen_multiset_mult1(&e32, &e32).unwrap(), 27);
    }

    #[test]
    fn eigen_multiset_rejects_incompatible_lists() {
        let lam = EigenExponents::new(4, vec![0, 0, 0, 0, 1]);
        let mu = EigenExponents::new(4, vec![0, 0, 1, 1, 2]);
        assert_eq!(
            eigen_multiset_mult1(&lam, &mu),
            Err(TracesError::PairMultisetMismatch)
        );
    }

    #[test]
    fn constant_eigenvalues_give_trivial_action() {
        for m in [2u64, 3, 6] {
            for c in 0..m {
                for d in 0..m {
                    let lam = EigenExponents::new(m, vec![c; 5]);
                    let mu = EigenExponents::new(m, vec![d; 5]);
                    assert_eq!(eigen_multiset_mult1(&lam, &mu).unwrap(), 51);
                }
            }
        }
    }

    #[test]
    fn type1_table() {
        let r = trace_type1(t(4, 1), t(4, 1)).unwrap();
        assert_eq!((r.mult1, r.trace), (19, -13));
        let r = trace_type1(t(3, 2), t(3, 2)).unwrap();
        assert_eq!((r.mult1, r.trace), (27, 3));
        let r = trace_type1(t(4, 1), t(3, 2)).unwrap();
        assert_eq!((r.mult1, r.trace), (23, -5));
        let r = trace_type1(t(3, 2), t(4, 1)).unwrap();
        assert_eq!(r.trace, -5);
    }

    #[test]
    fn type2_table() {
        let cases = [((8, 2), -35), ((7, 3), -15), ((6, 4), -3), ((5, 5), 1)];
        for ((p, q), trace) in cases {
            let r = trace_type2(InvolutionType::on_w(p, q).unwrap()).unwrap();
            assert_eq!(r.trace, trace);
            assert_eq!(r.trace, 101 - 2 * (p as i64 * p as i64 + q as i64 * q as i64));
        }
        assert_eq!(
            trace_type2(InvolutionType::on_w(9, 1).unwrap()),
            Err(TracesError::ImpossibleType)
        );
    }

    #[test]
    fn allowed_trace_set() {
        let set = allowed_involution_traces();
        let expect: BTreeSet<i64> = [51, 3, 1, -3, -5, -13, -15, -35].into_iter().collect();
        assert_eq!(set, expect);
        assert_eq!(set.len(), 8);
        assert!(!set.contains(&-1));
        assert!(set.iter().all(|t| t.rem_euclid(2) == 1));
    }

    #[test]
    fn dtau_trace_is_excluded() {
        assert_eq!(pgl_neg_transpose_trace(10), -9);
        assert_eq!(pgl_neg_transpose_trace(5), -4);
        assert_eq!(trace_dtau(), -1);
        assert!(!allowed_involution_traces().contains(&trace_dtau()));
    }

    #[test]
    fn wedge2_basics() {
        let id = Matrix::identity(Rationals, 5);
        assert!(wedge2(&id).is_identity());
        // Derivative of the identity direction is twice the identity on
        // pairs, so the image of gl(5) contains the scalars.
        assert_eq!(
            wedge2_derivative(&id),
            Matrix::from_fn(Rationals, 10, 10, |i, j| if i == j {
                q(2)
            } else {
                BigRational::zero()
            })
        );
    }

    #[test]
    fn oracle_matches_type1_table() {
        let cases: [(([i64; 5], [i64; 5]), i64); 3] = [
            (([1, 1, 1, 1, -1], [1, 1, 1, 1, -1]), -13),
            (([1, 1, 1, -1, -1], [1, 1, 1, -1, -1]), 3),
            (([1, 1, 1, 1, -1], [1, 1, 1, -1, -1]), -5),
        ];
        for ((a0, b0), expect) in cases {
            for seed in [1u64, 2, 3] {
                let got = oracle_trace_type1(&a0, &b0, seed).unwrap();
                assert_eq!(got, q(expect), "a0 {a0:?} b0 {b0:?} seed {seed}");
            }
        }
    }
}
