//! Prime-field arithmetic, dense matrices, and the square-root /
//! Gram-Schmidt primitives used to build orthogonal matrices over F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FfieldError {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(i64),
    #[error("square roots require p = 3 mod 4, got p = {0}")]
    NotThreeMod4(u64),
    #[error("{0} is not a square mod {1}")]
    NotASquare(u64, u64),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix dimensions do not match: {0}")]
    Shape(String),
    #[error("retry budget of {0} exhausted while sampling vector {1}")]
    RetriesExceeded(u64, usize),
    #[error("bad matrix file: {0}")]
    Parse(String),
}

/// Coefficient field abstraction. The modulus of a prime field is runtime
/// data, so operations go through a field handle rather than bare element
/// methods; the same trait covers the exact rationals used by the trace
/// oracle.
pub trait Field: Clone + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The field F_p for an odd prime p < 2^31. Elements are canonical
/// representatives in `[0, p)` stored as `u64`; products are reduced from
/// 64-bit intermediates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Any prime below 2^31 is accepted; square roots and Gram-Schmidt
    /// additionally require p = 3 mod 4.
    pub fn new(p: u64) -> Result<Self, FfieldError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(FfieldError::NotPrime(p as i64));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// (p-1)/2, the Euler-criterion exponent.
    pub fn euler_exponent(&self) -> u64 {
        (self.p - 1) / 2
    }

    /// (p+1)/4; only meaningful when p = 3 mod 4.
    pub fn sqrt_exponent(&self) -> Result<u64, FfieldError> {
        if self.p % 4 != 3 {
            return Err(FfieldError::NotThreeMod4(self.p));
        }
        Ok((self.p + 1) / 4)
    }

    pub fn elem(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (n.rem_euclid(p)) as u64
    }

    /// x^e mod p by square-and-multiply.
    pub fn pow_mod(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x % self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Euler criterion: true iff x^((p-1)/2) = 1. In particular zero is
    /// not counted as a square, matching the retry behavior of the
    /// Gram-Schmidt sampling loop on isotropic vectors.
    pub fn is_square(&self, x: u64) -> bool {
        self.pow_mod(x, self.euler_exponent()) == 1
    }

    /// Square root as x^((p+1)/4); requires p = 3 mod 4 and x a square.
    pub fn sqrt_3mod4(&self, x: u64) -> Result<u64, FfieldError> {
        let r = self.sqrt_exponent()?;
        if !self.is_square(x) {
            return Err(FfieldError::NotASquare(x % self.p, self.p));
        }
        Ok(self.pow_mod(x, r))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            // Fermat; p is prime.
            Some(self.pow_mod(*a, self.p - 2))
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.elem(n)
    }
}

/// The exact rationals, as a `Field` handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Deterministic 64-bit PRNG: xorshift64*, i.e. the xorshift steps
/// (13, 7, 17) followed by multiplication with 0x2545F4914F6CDD1D.
/// A zero seed is replaced by a fixed nonzero constant. Identical seeds
/// produce identical streams on every platform.
#[derive(Debug, Clone)]
pub struct RandomState {
    state: u64,
}

impl RandomState {
    pub fn new(seed: u64) -> Self {
        RandomState {
            state: if seed == 0 { 0x9E3779B97F4A7C15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform-ish residue in [0, m).
    pub fn below(&mut self, m: u64) -> u64 {
        self.next_u64() % m
    }
}

/// Dense row-major matrix over a coefficient field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix {
            field,
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(field, rows, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FfieldError> {
        if self.cols != other.rows {
            return Err(FfieldError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        Ok(Matrix::from_fn(
            f.clone(),
            self.rows,
            other.cols,
            |i, j| {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)));
                }
                acc
            },
        ))
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let f = &self.field;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if i == j {
                    if !f.is_one(e) {
                        return false;
                    }
                } else if !f.is_zero(e) {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse by Gaussian elimination with exact pivoting.
    pub fn inverse(&self) -> Result<Self, FfieldError> {
        if self.rows != self.cols {
            return Err(FfieldError::Shape(format!("{}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(f.clone(), n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(&a[r * n + col]));
            let pivot = pivot.ok_or(FfieldError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let pinv = f.inv(&a[col * n + col]).ok_or(FfieldError::Singular)?;
            for j in 0..n {
                a[col * n + j] = f.mul(&a[col * n + j], &pinv);
                inv.data[col * n + j] = f.mul(&inv.data[col * n + j], &pinv);
            }
            for r in 0..n {
                if r != col && !f.is_zero(&a[r * n + col]) {
                    let factor = a[r * n + col].clone();
                    for j in 0..n {
                        let t = f.mul(&factor, &a[col * n + j]);
                        a[r * n + j] = f.sub(&a[r * n + j], &t);
                        let t = f.mul(&factor, &inv.data[col * n + j]);
                        inv.data[r * n + j] = f.sub(&inv.data[r * n + j], &t);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Row-echelon rank together with a basis of the right nullspace.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<F::Elem>>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0usize;
        for col in 0..cols {
            let pr = (row..rows).find(|&r| !f.is_zero(&a[r * cols + col]));
            let Some(pr) = pr else { continue };
            if pr != row {
                for j in 0..cols {
                    a.swap(pr * cols + j, row * cols + j);
                }
            }
            let pinv = f.inv(&a[row * cols + col]).expect("nonzero pivot");
            for j in 0..cols {
                a[row * cols + j] = f.mul(&a[row * cols + j], &pinv);
            }
            for r in 0..rows {
                if r != row && !f.is_zero(&a[r * cols + col]) {
                    let factor = a[r * cols + col].clone();
                    for j in 0..cols {
                        let t = f.mul(&factor, &a[row * cols + j]);
                        a[r * cols + j] = f.sub(&a[r * cols + j], &t);
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        let rank = pivot_cols.len();
        let mut kernel = Vec::new();
        let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        for &fc in &free {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = f.neg(&a[r * cols + fc]);
            }
            kernel.push(v);
        }
        (rank, kernel)
    }
}

impl Matrix<PrimeField> {
    /// Parse the matrix text format: a `rows cols` header line followed by
    /// row-major whitespace-separated integers, interpreted mod p
    /// (negatives allowed).
    pub fn parse_text(field: PrimeField, text: &str) -> Result<Self, FfieldError> {
        let mut tokens = text.split_whitespace();
        let rows: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FfieldError::Parse("missing rows header".into()))?;
        let cols: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FfieldError::Parse("missing cols header".into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for t in tokens {
            let v: i64 = t
                .parse()
                .map_err(|_| FfieldError::Parse(format!("bad integer {t:?}")))?;
            data.push(field.elem(v));
        }
        if data.len() != rows * cols {
            return Err(FfieldError::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix::new(field, rows, cols, data))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn dot(field: &PrimeField, u: &[u64], v: &[u64]) -> u64 {
    let mut acc = 0u64;
    for (a, b) in u.iter().zip(v) {
        acc = field.add(&acc, &field.mul(a, b));
    }
    acc
}

/// Gram-Schmidt construction of a random orthogonal matrix over F_p with
/// p = 3 mod 4: sample a vector, subtract projections (v.u)/(u.u) u against
/// the earlier unnormalized vectors, retry while the self-dot-product is
/// not a nonzero square, finally scale each vector by the inverse square
/// root of its norm. The v_i become the columns of the result.
pub fn gram_schmidt_orthogonal(
    field: PrimeField,
    dim: usize,
    rng: &mut RandomState,
    max_retries: u64,
) -> Result<Matrix<PrimeField>, FfieldError> {
    field.sqrt_exponent()?;
    let p = field.modulus();
    let mut basis: Vec<Vec<u64>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut tries = 0u64;
        loop {
            tries += 1;
            if tries > max_retries {
                return Err(FfieldError::RetriesExceeded(max_retries, i));
            }
            let mut v: Vec<u64> = (0..dim).map(|_| rng.below(p)).collect();
            for u in &basis {
                let c = field
                    .div(&dot(&field, &v, u), &dot(&field, u, u))
                    .expect("accepted vectors have nonzero norm");
                for (vk, uk) in v.iter_mut().zip(u) {
                    *vk = field.sub(vk, &field.mul(&c, uk));
                }
            }
            if field.is_square(dot(&field, &v, &v)) {
                basis.push(v);
                break;
            }
        }
    }
    for v in &mut basis {
        let norm = dot(&field, v, v);
        let s = field
            .inv(&field.sqrt_3mod4(norm)?)
            .expect("square norm is nonzero");
        for vk in v.iter_mut() {
            *vk = field.mul(vk, &s);
        }
    }
    Ok(Matrix::from_fn(field, dim, dim, |i, j| basis[j][i]))
}

/// Rational numbers as matrix entries need a signed magnitude check in
/// tests; re-export a small helper for sampling matrices over Q.
pub fn random_rational_matrix(n: usize, bound: i64, rng: &mut RandomState) -> Matrix<Rationals> {
    let span = (2 * bound + 1) as u64;
    Matrix::from_fn(Rationals, n, n, |_, _| {
        let v = rng.below(span) as i64 - bound;
        Rationals.from_i64(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f103() -> PrimeField {
        PrimeField::new(103).unwrap()
    }

    #[test]
    fn pow_mod_basics() {
        let f = f103();
        assert_eq!(f.pow_mod(1, 1_000_000_000), 1);
        // 2 is a QR mod 103 (103 = 7 mod 8), so 2^51 = 1.
        assert_eq!(f.pow_mod(2, 51), 1);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.pow_mod(2, 2), 4);
    }

    #[test]
    fn is_square_matches_exhaustive_table() {
        for p in [3u64, 7, 11, 19, 23, 31] {
            let f = PrimeField::new(p).unwrap();
            let mut squares = vec![false; p as usize];
            for y in 1..p {
                squares[(y * y % p) as usize] = true;
            }
            for x in 0..p {
                assert_eq!(f.is_square(x), x != 0 && squares[x as usize], "p={p} x={x}");
            }
        }
    }

    #[test]
    fn is_square_zero_is_false() {
        assert!(!f103().is_square(0));
        assert!(f103().is_square(1));
    }

    #[test]
    fn sqrt_3mod4_values() {
        let f = f103();
        assert_eq!(f.sqrt_3mod4(1).unwrap(), 1);
        let y = f.sqrt_3mod4(4).unwrap();
        assert_eq!(f.mul(&y, &y), 4);
        assert_eq!(y, 2);
        let f7 = PrimeField::new(7).unwrap();
        let y = f7.sqrt_3mod4(2).unwrap();
        assert_eq!(f7.mul(&y, &y), 2);
        assert_eq!(y, 4);
    }

    #[test]
    fn sqrt_rejects_wrong_prime_class() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.sqrt_3mod4(4), Err(FfieldError::NotThreeMod4(5)));
        assert_eq!(f103().sqrt_3mod4(5), Err(FfieldError::NotASquare(5, 103)));
    }

    #[test]
    fn inverse_of_diagonal() {
        let f7 = PrimeField::new(7).unwrap();
        let m = Matrix::new(f7, 2, 2, vec![2, 0, 0, 4]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.entries(), &[4, 0, 0, 2]);
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverse_roundtrip_random() {
        let f = f103();
        let mut rng = RandomState::new(7);
        for _ in 0..10 {
            let m = Matrix::from_fn(f, 6, 6, |_, _| rng.below(103));
            if let Ok(inv) = m.inverse() {
                assert!(m.mul(&inv).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn field_inverse_property() {
        let f = f103();
        for x in 1..103 {
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
        }
    }

    #[test]
    fn gram_schmidt_is_orthogonal_and_deterministic() {
        let f = f103();
        let mut rng = RandomState::new(42);
        let t = gram_schmidt_orthogonal(f, 10, &mut rng, 10_000).unwrap();
        assert!(t.transpose().mul(&t).unwrap().is_identity());
        let mut rng2 = RandomState::new(42);
        let t2 = gram_schmidt_orthogonal(f, 10, &mut rng2, 10_000).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn gram_schmidt_dim1_is_sign() {
        let f = f103();
        let mut rng = RandomState::new(5);
        let t = gram_schmidt_orthogonal(f, 1, &mut rng, 10_000).unwrap();
        let v = *t.get(0, 0);
        assert!(v == 1 || v == 102);
    }

    #[test]
    fn matrix_text_roundtrip_negative_entries() {
        let f = f103();
        let m = Matrix::parse_text(f, "2 2\n-1 5\n-52 51\n").unwrap();
        assert_eq!(m.entries(), &[102, 5, 51, 51]);
        let again = Matrix::parse_text(f, &m.to_text()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn kernel_dimension() {
        let f = f103();
        let m = Matrix::new(f, 2, 3, vec![1, 0, 0, 0, 1, 0]);
        let (rank, ker) = m.rank_and_kernel();
        assert_eq!(rank, 2);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], vec![0, 0, 1]);
    }
}
