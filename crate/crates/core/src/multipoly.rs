//! Sparse multivariate polynomial arithmetic over a coefficient field:
//! substitution, partial derivatives, Jacobians, minors, and Pfaffians.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::ffield::Field;

/// Total order on monomials. Degrevlex is the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

/// Exponent vector with cached total degree. Exponents are capped at 255
/// per variable; overflow is a hard error.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            deg: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u8> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| {
                a.checked_add(b)
                    .unwrap_or_else(|| panic!("monomial exponent overflow ({a} + {b})"))
            })
            .collect();
        Monomial::new(exps)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial::new(
            self.exps.iter().zip(&other.exps).map(|(&a, &b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn cmp_in(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => self.exps.cmp(&other.exps),
            MonomialOrder::DegRevLex => {
                match self.deg.cmp(&other.deg) {
                    Ordering::Equal => {}
                    c => return c,
                }
                // Equal degree: the last variable with differing exponent
                // decides, smaller exponent winning.
                for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                    match a.cmp(b) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {}
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Polynomial ring handle: coefficient field, named variables, and the
/// active monomial order used for the canonical term sort.
#[derive(Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub names: Vec<String>,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, names: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable name {n}");
        }
        Arc::new(PolyRing { field, names, order })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("expected {expected} substitution images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("minor size {k} out of range for {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("pfaffian index subset must have even size, got {0}")]
    OddPfaffian(usize),
    #[error("pfaffian index {0} out of range for size {1}")]
    IndexRange(usize, usize),
}

/// Sparse polynomial: terms sorted descending in the ring's order, no zero
/// coefficients stored.
#[derive(Debug, Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        let mut p = Polynomial::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn var(ring: &Arc<PolyRing<F>>, i: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i), ring.field.one())],
        }
    }

    pub fn from_terms(ring: &Arc<PolyRing<F>>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let mut map: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.exps().len(), ring.nvars());
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = ring.field.add(e.get(), &c);
                    *e.get_mut() = s;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
            }
        }
        let mut terms: Vec<(Monomial, F::Elem)> = map
            .into_iter()
            .filter(|(_, c)| !ring.field.is_zero(c))
            .collect();
        terms.sort_by(|a, b| b.0.cmp_in(&a.0, ring.order));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn check_ring(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    /// Merge-add of sorted term lists.
    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        let f = &self.ring.field;
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp_in(&other.terms[j].0, order) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(&self.terms[i].1, &other.terms[j].1);
                    if !f.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: out,
        })
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), f.mul(a, c)))
                .collect(),
        }
    }

    /// self - c * mono * other, by merge. The workhorse of polynomial
    /// reduction.
    pub fn sub_scaled_shifted(&self, c: &F::Elem, mono: &Monomial, other: &Self) -> Self {
        let f = &self.ring.field;
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let om = other.terms[j].0.mul(mono);
            match self.terms[i].0.cmp_in(&om, order) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let v = f.neg(&f.mul(c, &other.terms[j].1));
                    out.push((om, v));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&self.terms[i].1, &f.mul(c, &other.terms[j].1));
                    if !f.is_zero(&v) {
                        out.push((om, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        while j < other.terms.len() {
            let om = other.terms[j].0.mul(mono);
            out.push((om, f.neg(&f.mul(c, &other.terms[j].1))));
            j += 1;
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        let f = &self.ring.field;
        let mut map: HashMap<Monomial, F::Elem> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = f.mul(ca, cb);
                match map.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = f.add(e.get(), &c);
                        *e.get_mut() = s;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, F::Elem)> =
            map.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        terms.sort_by(|a, b| b.0.cmp_in(&a.0, self.ring.order));
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::constant(&self.ring, self.ring.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.ring.field;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] = e - 1;
            let coeff = f.mul(c, &f.from_i64(e as i64));
            if !f.is_zero(&coeff) {
                terms.push((Monomial::new(exps), coeff));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Ring homomorphism determined by a list of images of the variables
    /// in a (possibly different) target ring.
    pub fn substitute(&self, target: &Arc<PolyRing<F>>, images: &[Polynomial<F>]) -> Result<Polynomial<F>, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::ImageCount {
                expected: self.ring.nvars(),
                got: images.len(),
            });
        }
        for img in images {
            if !(Arc::ptr_eq(&img.ring, target) || *img.ring == **target) {
                return Err(PolyError::RingMismatch);
            }
        }
        let f = &target.field;
        // Cache powers of each image up to the maximum exponent used.
        let mut max_exp = vec![0u8; self.ring.nvars()];
        for (m, _) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let mut powers: Vec<Vec<Polynomial<F>>> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let mut ps = vec![Polynomial::constant(target, f.one())];
            for e in 1..=max_exp[i] {
                let next = ps[(e - 1) as usize].mul(img)?;
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.ring.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &point[i]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

impl<F: Field> fmt::Display for Polynomial<F>
where
    F::Elem: fmt::Display,
{
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(w, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(w, " + ")?;
            }
            first = false;
            let mut parts = vec![format!("{c}")];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 1 {
                    parts.push(self.ring.names[i].clone());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.ring.names[i], e));
                }
            }
            write!(w, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Jacobian of a generator list: entry (i, j) is d gens[j] / d x_i, so the
/// layout is nvars x ngens.
pub fn jacobian<F: Field>(gens: &[Polynomial<F>]) -> Vec<Vec<Polynomial<F>>> {
    assert!(!gens.is_empty());
    let nvars = gens[0].ring().nvars();
    (0..nvars)
        .map(|i| gens.iter().map(|g| g.derivative(i)).collect())
        .collect()
}

/// All k x k minors of a polynomial matrix, with sub-determinants memoized
/// by (row-set, column-set).
pub fn minors<F: Field>(
    m: &[Vec<Polynomial<F>>],
    k: usize,
) -> Result<Vec<Polynomial<F>>, PolyError> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    if k == 0 || k > rows.min(cols) {
        return Err(PolyError::MinorSize { k, rows, cols });
    }
    let ring = m[0][0].ring().clone();
    let mut memo: HashMap<(Vec<usize>, Vec<usize>), Polynomial<F>> = HashMap::new();
    let row_sets = subsets(rows, k);
    let col_sets = subsets(cols, k);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            out.push(det_memo(m, rs, cs, &ring, &mut memo)?);
        }
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn det_memo<F: Field>(
    m: &[Vec<Polynomial<F>>],
    rows: &[usize],
    cols: &[usize],
    ring: &Arc<PolyRing<F>>,
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), Polynomial<F>>,
) -> Result<Polynomial<F>, PolyError> {
    if rows.len() == 1 {
        return Ok(m[rows[0]][cols[0]].clone());
    }
    let key = (rows.to_vec(), cols.to_vec());
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    // Laplace expansion along the first listed row.
    let mut acc = Polynomial::zero(ring);
    let rest_rows: Vec<usize> = rows[1..].to_vec();
    for (j, &c) in cols.iter().enumerate() {
        let entry = &m[rows[0]][c];
        if entry.is_zero() {
            continue;
        }
        let rest_cols: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(jj, _)| jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = det_memo(m, &rest_rows, &rest_cols, ring, memo)?;
        let term = entry.mul(&sub)?;
        acc = if j % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    memo.insert(key, acc.clone());
    Ok(acc)
}

/// Symbolic skew-symmetric matrix: upper-triangular entries stored, the
/// diagonal is zero and entry (j, i) = -entry(i, j).
#[derive(Debug, Clone)]
pub struct SkewMatrixSymbolic<F: Field> {
    n: usize,
    ring: Arc<PolyRing<F>>,
    upper: Vec<Polynomial<F>>, // (i,j) with i<j in row-major upper order
}

impl<F: Field> SkewMatrixSymbolic<F> {
    pub fn new(ring: &Arc<PolyRing<F>>, n: usize, upper: Vec<Polynomial<F>>) -> Self {
        assert_eq!(upper.len(), n * (n - 1) / 2);
        SkewMatrixSymbolic {
            n,
            ring: ring.clone(),
            upper,
        }
    }

    /// The generic skew matrix whose upper entries are the first
    /// n(n-1)/2 ring variables, in row-major upper-triangular order.
    pub fn generic(ring: &Arc<PolyRing<F>>, n: usize) -> Self {
        assert!(ring.nvars() >= n * (n - 1) / 2);
        let upper = (0..n * (n - 1) / 2).map(|i| Polynomial::var(ring, i)).collect();
        SkewMatrixSymbolic::new(ring, n, upper)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial<F> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Polynomial::zero(&self.ring),
            Less => self.upper[self.upper_index(i, j)].clone(),
            Greater => self.upper[self.upper_index(j, i)].neg(),
        }
    }

    /// Pfaffian of the principal submatrix on a sorted, even-sized index
    /// subset, by the recursive expansion along the first index.
    pub fn pfaffian(&self, indices: &[usize]) -> Result<Polynomial<F>, PolyError> {
        if indices.len() % 2 != 0 {
            return Err(PolyError::OddPfaffian(indices.len()));
        }
        for &i in indices {
            if i >= self.n {
                return Err(PolyError::IndexRange(i, self.n));
            }
        }
        Ok(self.pf_rec(indices))
    }

    fn pf_rec(&self, indices: &[usize]) -> Polynomial<F> {
        if indices.is_empty() {
            return Polynomial::constant(&self.ring, self.ring.field.one());
        }
        let i0 = indices[0];
        let mut acc = Polynomial::zero(&self.ring);
        for j in 1..indices.len() {
            let rest: Vec<usize> = indices[1..]
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j - 1)
                .map(|(_, &v)| v)
                .collect();
            let term = self
                .entry(i0, indices[j])
                .mul(&self.pf_rec(&rest))
                .expect("same ring");
            acc = if j % 2 == 1 {
                acc.add(&term).expect("same ring")
            } else {
                acc.sub(&term).expect("same ring")
            };
        }
        acc
    }
}
