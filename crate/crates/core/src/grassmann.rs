//! Geometry layer for Gr(2,5) in P^9: the Pfaffian ideal in Pluecker
//! coordinates, affine patch parametrizations, intersection ideals for a
//! pair of translated Grassmannians, Jacobian smoothness certificates,
//! skew-form rank tools, the inverse-transpose mirror map, and point
//! enumeration over small prime fields.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ffield::{gram_schmidt_orthogonal, FfieldError, Field, Matrix, PrimeField, RandomState};
use crate::groebner::{is_unit_ideal, BudgetExceeded, GroebnerStats, ResourceBudget};
use crate::multipoly::{jacobian, minors, MonomialOrder, PolyError, PolyRing, Polynomial, SkewMatrixSymbolic};
use crate::MatrixFF;

/// The index pairs (i, j), i < j, of the ten Pluecker coordinates, in the
/// fixed variable order x01, x02, x03, x04, x12, x13, x14, x23, x24, x34.
pub const PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Variable index of the coordinate x_{ij}, i < j.
pub fn var_index(i: usize, j: usize) -> usize {
    PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

#[derive(Debug, thiserror::Error)]
pub enum GrassmannError {
    #[error(transparent)]
    Field(#[from] FfieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("chart invariant failed for pivot ({0}, {1}): a Pfaffian does not vanish on the chart")]
    ChartInvariant(usize, usize),
    #[error("enumeration supports q <= {cap}, got q = {q}")]
    EnumerationBudget { q: u64, cap: u64 },
    #[error("no smooth orthogonal matrix found in {0} attempts; failing patches: {1:?}")]
    SearchExhausted(u64, Vec<String>),
}

/// The Pluecker coordinate ring: 10 variables x_{ij} over F_p.
pub fn pluecker_ring(field: PrimeField, order: MonomialOrder) -> Arc<PolyRing<PrimeField>> {
    let names = PAIRS.iter().map(|&(i, j)| format!("x{i}{j}")).collect();
    PolyRing::new(field, names, order)
}

/// The five 4x4 Pfaffians of the generic 5x5 skew matrix, one for each
/// omitted index; these quadrics cut out Gr(2,5) in P^9.
pub fn pfaffian_ideal(ring: &Arc<PolyRing<PrimeField>>) -> Vec<Polynomial<PrimeField>> {
    let skew = SkewMatrixSymbolic::generic(ring, 5);
    (0..5)
        .map(|omit| {
            let idx: Vec<usize> = (0..5).filter(|&k| k != omit).collect();
            skew.pfaffian(&idx).expect("even subset")
        })
        .collect()
}

/// An affine chart x_{ij} = 1 of the Grassmannian. The six coordinates
/// with exactly one index in the pivot pair are free; the three
/// complementary coordinates are solved from the Pfaffian relations.
#[derive(Debug, Clone)]
pub struct PatchChart {
    pub pivot: (usize, usize),
    /// 6-variable ring of the free coordinates, in the global coordinate
    /// order.
    pub ring: Arc<PolyRing<PrimeField>>,
    /// Image of each of the ten Pluecker variables inside `ring`.
    pub images: Vec<Polynomial<PrimeField>>,
    pub free_pairs: Vec<(usize, usize)>,
}

/// Build the chart for a pivot pair, solving each dependent coordinate
/// from the unique Pfaffian relation containing the pivot-dependent
/// monomial, and verifying that all five Pfaffians vanish identically on
/// the chart.
pub fn patch_parametrization(
    field: PrimeField,
    pivot: (usize, usize),
) -> Result<PatchChart, GrassmannError> {
    let (pi, pj) = pivot;
    assert!(pi < pj && pj < 5, "pivot must satisfy 0 <= i < j <= 4");
    let source = pluecker_ring(field, MonomialOrder::DegRevLex);

    let free_pairs: Vec<(usize, usize)> = PAIRS
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let hits = [a, b].iter().filter(|&&t| t == pi || t == pj).count();
            hits == 1
        })
        .collect();
    debug_assert_eq!(free_pairs.len(), 6);
    let target = PolyRing::new(
        field,
        free_pairs.iter().map(|&(a, b)| format!("x{a}{b}")).collect(),
        MonomialOrder::DegRevLex,
    );
    let free_var = |a: usize, b: usize| -> Polynomial<PrimeField> {
        let k = free_pairs.iter().position(|&p| p == (a, b)).expect("free pair");
        Polynomial::var(&target, k)
    };

    let mut images: Vec<Option<Polynomial<PrimeField>>> = vec![None; 10];
    images[var_index(pi, pj)] = Some(Polynomial::constant(&target, 1));
    for &(a, b) in &free_pairs {
        images[var_index(a, b)] = Some(free_var(a, b));
    }

    // Dependent pairs {k, l} are disjoint from the pivot. The Pfaffian on
    // the sorted four indices {i, j, k, l} is
    //   x_ab x_cd - x_ac x_bd + x_ad x_bc  (a < b < c < d),
    // and exactly one of the three products is x_{pivot} x_{kl}; solving
    // for x_kl fixes the sign convention.
    let others: Vec<usize> = (0..5).filter(|&t| t != pi && t != pj).collect();
    for s in 0..3 {
        for t in (s + 1)..3 {
            let (k, l) = (others[s], others[t]);
            let mut four = vec![pi, pj, k, l];
            four.sort_unstable();
            let [a, b, c, d] = [four[0], four[1], four[2], four[3]];
            // (pairing, sign) triples of the Pfaffian expansion.
            let prods = [((a, b), (c, d), 1i64), ((a, c), (b, d), -1), ((a, d), (b, c), 1)];
            let is_pivot =
                |p: (usize, usize), q: (usize, usize)| -> bool { p == (pi, pj) || q == (pi, pj) };
            let mut expr = Polynomial::zero(&target);
            let mut pivot_sign = 0i64;
            for (p, q, sign) in prods {
                if is_pivot(p, q) {
                    pivot_sign = sign;
                } else {
                    let term = free_var(p.0, p.1).mul(&free_var(q.0, q.1))?;
                    let signed = if sign > 0 { term } else { term.neg() };
                    expr = expr.add(&signed)?;
                }
            }
            debug_assert_ne!(pivot_sign, 0);
            // pivot_sign * x_kl + expr = 0 with x_{pivot} = 1.
            let solved = if pivot_sign > 0 { expr.neg() } else { expr };
            images[var_index(k.min(l), k.max(l))] = Some(solved);
        }
    }
    let images: Vec<Polynomial<PrimeField>> =
        images.into_iter().map(|im| im.expect("all ten assigned")).collect();

    // Chart invariant: all five Pfaffians die on the chart.
    for pf in pfaffian_ideal(&source) {
        if !pf.substitute(&target, &images)?.is_zero() {
            return Err(GrassmannError::ChartInvariant(pi, pj));
        }
    }

    Ok(PatchChart {
        pivot,
        ring: target,
        images,
        free_pairs,
    })
}

/// All ten charts, one per pivot pair.
pub fn all_charts(field: PrimeField) -> Result<Vec<PatchChart>, GrassmannError> {
    PAIRS.iter().map(|&p| patch_parametrization(field, p)).collect()
}

/// A pair of Grassmannian translates cutting out an intersection in P^9.
/// Coordinates act as row vectors: the translate of `g` consists of the
/// points x with x*g on the Grassmannian, matching the substitution
/// convention of the certification pipeline.
#[derive(Debug, Clone)]
pub struct GPK3Instance {
    pub field: PrimeField,
    pub g1: MatrixFF,
    pub g2: MatrixFF,
    pub label: Option<String>,
}

impl GPK3Instance {
    pub fn new(field: PrimeField, g1: MatrixFF, g2: MatrixFF) -> Self {
        GPK3Instance {
            field,
            g1,
            g2,
            label: None,
        }
    }

    pub fn with_identity_g1(field: PrimeField, g2: MatrixFF) -> Self {
        GPK3Instance::new(field, Matrix::identity(field, 10), g2)
    }

    /// Reduce to the normalized form (1, g1^{-1} g2).
    pub fn normalized(&self) -> Result<GPK3Instance, GrassmannError> {
        if self.g1.is_identity() {
            return Ok(self.clone());
        }
        let g = self.g1.inverse()?.mul(&self.g2)?;
        Ok(GPK3Instance::with_identity_g1(self.field, g))
    }

    /// The double mirror: inverse transposes in the fixed Pluecker basis.
    pub fn double_mirror(&self) -> Result<GPK3Instance, GrassmannError> {
        Ok(GPK3Instance::new(
            self.field,
            self.g1.inverse()?.transpose(),
            self.g2.inverse()?.transpose(),
        ))
    }
}

/// Pull the five Pfaffians back along the row-vector substitution
/// x -> x * g2, then restrict to the chart. The result cuts out the
/// intersection inside affine 6-space.
pub fn gpk3_patch_ideal(
    inst: &GPK3Instance,
    chart: &PatchChart,
) -> Result<Vec<Polynomial<PrimeField>>, GrassmannError> {
    let inst = inst.normalized()?;
    let ring = pluecker_ring(inst.field, MonomialOrder::DegRevLex);
    let gens = pfaffian_ideal(&ring);
    // Linear images: variable t maps to (V * g2)_t = sum_l x_l g2[l][t].
    let linear: Vec<Polynomial<PrimeField>> = (0..10)
        .map(|t| {
            let mut acc = Polynomial::zero(&ring);
            for l in 0..10 {
                let c = *inst.g2.get(l, t);
                if c != 0 {
                    acc = acc.add(&Polynomial::var(&ring, l).scale(&c)).expect("same ring");
                }
            }
            acc
        })
        .collect();
    let mut out = Vec::with_capacity(5);
    for f in &gens {
        let pulled = f.substitute(&ring, &linear)?;
        out.push(pulled.substitute(&chart.ring, &chart.images)?);
    }
    Ok(out)
}

/// The singular-scheme ideal: the input equations together with all 3x3
/// minors of their Jacobian.
pub fn singular_scheme_ideal(
    cy: &[Polynomial<PrimeField>],
) -> Result<Vec<Polynomial<PrimeField>>, GrassmannError> {
    if cy.is_empty() {
        return Ok(Vec::new());
    }
    let jac = jacobian(cy);
    let mut gens = cy.to_vec();
    gens.extend(minors(&jac, 3)?);
    Ok(gens)
}

#[derive(Debug, Clone, Serialize)]
pub struct PatchReport {
    pub pivot: (usize, usize),
    /// None when the Groebner budget was exhausted for this patch.
    pub unit_ideal: Option<bool>,
    pub pairs: u64,
    pub max_degree: u32,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessCertificate {
    pub prime: u64,
    pub matrix_sha: String,
    pub patches: Vec<PatchReport>,
    pub smooth: bool,
    pub inconclusive: bool,
}

pub fn matrix_sha(m: &MatrixFF) -> String {
    let mut h = Sha256::new();
    h.update(m.to_text().as_bytes());
    format!("{:x}", h.finalize())
}

/// Certify smoothness of the intersection for an instance: in each of the
/// ten charts, the singular-scheme ideal must be the unit ideal, i.e. the
/// rank-deficiency locus of the Jacobian is empty over the algebraic
/// closure. Patches run concurrently.
pub fn certify_smooth_gpk3(
    inst: &GPK3Instance,
    budget: &ResourceBudget,
) -> Result<SmoothnessCertificate, GrassmannError> {
    let inst = inst.normalized()?;
    let charts = all_charts(inst.field)?;
    let patches: Vec<PatchReport> = charts
        .par_iter()
        .map(|chart| {
            let start = Instant::now();
            let run = || -> Result<(Option<bool>, GroebnerStats), GrassmannError> {
                let cy = gpk3_patch_ideal(&inst, chart)?;
                let sing = singular_scheme_ideal(&cy)?;
                if sing.iter().all(|p| p.is_zero()) {
                    // Zero ideal: certainly not the unit ideal.
                    return Ok((Some(false), GroebnerStats::default()));
                }
                match is_unit_ideal(&sing, budget) {
                    Ok((unit, stats)) => Ok((Some(unit), stats)),
                    Err(b) => Ok((None, b.stats)),
                }
            };
            let (unit_ideal, stats) = run()?;
            Ok(PatchReport {
                pivot: chart.pivot,
                unit_ideal,
                pairs: stats.pairs_processed,
                max_degree: stats.max_degree_seen,
                millis: start.elapsed().as_millis(),
            })
        })
        .collect::<Result<_, GrassmannError>>()?;
    let inconclusive = patches.iter().any(|p| p.unit_ideal.is_none());
    let smooth = !inconclusive && patches.iter().all(|p| p.unit_ideal == Some(true));
    Ok(SmoothnessCertificate {
        prime: inst.field.modulus(),
        matrix_sha: matrix_sha(&inst.g2),
        patches,
        smooth,
        inconclusive,
    })
}

/// Sample orthogonal matrices by Gram-Schmidt until one certifies smooth.
pub fn search_orthogonal_smooth(
    field: PrimeField,
    seed: u64,
    max_attempts: u64,
    budget: &ResourceBudget,
) -> Result<(MatrixFF, SmoothnessCertificate, u64), GrassmannError> {
    field.sqrt_exponent()?;
    let mut rng = RandomState::new(seed);
    let mut failures = Vec::new();
    for attempt in 1..=max_attempts {
        let t = gram_schmidt_orthogonal(field, 10, &mut rng, 10_000)?;
        let cert = certify_smooth_gpk3(&GPK3Instance::with_identity_g1(field, t.clone()), budget)?;
        if cert.smooth {
            return Ok((t, cert, attempt));
        }
        let failing: Vec<String> = cert
            .patches
            .iter()
            .filter(|p| p.unit_ideal != Some(true))
            .map(|p| format!("attempt {}: patch x{}{}", attempt, p.pivot.0, p.pivot.1))
            .collect();
        failures.extend(failing.into_iter().take(1));
    }
    Err(GrassmannError::SearchExhausted(max_attempts, failures))
}

/// View a coordinate 10-vector as the corresponding 5x5 skew matrix.
pub fn skew_from_coords(field: PrimeField, coords: &[u64]) -> MatrixFF {
    assert_eq!(coords.len(), 10);
    let mut m = Matrix::zero(field, 5, 5);
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        m.set(i, j, coords[k]);
        m.set(j, i, field.neg(&coords[k]));
    }
    m
}

/// Rank (always even) and kernel basis of a skew form on F_p^5.
pub fn skew_rank(form: &MatrixFF) -> (usize, Vec<Vec<u64>>) {
    let (rank, kernel) = form.rank_and_kernel();
    debug_assert!(rank % 2 == 0, "skew forms have even rank");
    (rank, kernel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

pub const ENUMERATION_CAP: u64 = 7;

/// Iterate the normalized representatives of P^{dim}(F_q): first nonzero
/// coordinate scaled to 1.
pub fn projective_points(q: u64, dim: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..=dim).flat_map(move |lead| {
        let tail = dim - lead;
        let count = q.pow(tail as u32);
        (0..count).map(move |mut n| {
            let mut v = vec![0u64; lead];
            v.push(1);
            for _ in 0..tail {
                v.push(n % q);
                n /= q;
            }
            v
        })
    })
}

fn row_times(field: &PrimeField, x: &[u64], g: &MatrixFF) -> Vec<u64> {
    (0..g.cols())
        .map(|j| {
            let mut acc = 0u64;
            for (l, &xl) in x.iter().enumerate() {
                acc = field.add(&acc, &field.mul(&xl, g.get(l, j)));
            }
            acc
        })
        .collect()
}

/// Count points of the intersection over F_q by direct enumeration of
/// P^9(F_q): side X counts x with both x and x*g of skew rank 2; side Y
/// counts the double-mirror side, i.e. uses g^{-T} in place of g.
pub fn enumerate_rank2_points(
    field: PrimeField,
    g: &MatrixFF,
    side: Side,
) -> Result<u64, GrassmannError> {
    let q = field.modulus();
    if q > ENUMERATION_CAP {
        return Err(GrassmannError::EnumerationBudget {
            q,
            cap: ENUMERATION_CAP,
        });
    }
    let g_eff = match side {
        Side::X => g.clone(),
        Side::Y => g.inverse()?.transpose(),
    };
    let mut count = 0u64;
    for x in projective_points(q, 9) {
        if skew_rank(&skew_from_coords(field, &x)).0 != 2 {
            continue;
        }
        let xg = row_times(&field, &x, &g_eff);
        if skew_rank(&skew_from_coords(field, &xg)).0 == 2 {
            count += 1;
        }
    }
    Ok(count)
}

/// Independent oracle for #Gr(2,5)(F_q): enumerate 2-subspaces of F_q^5
/// as row-reduced echelon bases.
pub fn count_gr_rref(q: u64) -> u64 {
    let mut count = 0u64;
    for p1 in 0..5usize {
        for p2 in (p1 + 1)..5usize {
            // Free entries: row 1 in columns > p1 excluding p2; row 2 in
            // columns > p2.
            let f1 = (p1 + 1..5).filter(|&c| c != p2).count();
            let f2 = 5 - (p2 + 1);
            count += q.pow((f1 + f2) as u32);
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f103() -> PrimeField {
        PrimeField::new(103).unwrap()
    }

    #[test]
    fn pfaffian_ideal_shape() {
        let ring = pluecker_ring(f103(), MonomialOrder::DegRevLex);
        let gens = pfaffian_ideal(&ring);
        assert_eq!(gens.len(), 5);
        assert!(gens.iter().all(|g| g.total_degree() == Some(2)));
        // Omitting 0 gives the Pfaffian on {1,2,3,4}: x12 x34 - x13 x24 + x14 x23.
        let v = |k: usize| Polynomial::var(&ring, k);
        let expect = v(4)
            .mul(&v(9))
            .unwrap()
            .sub(&v(5).mul(&v(8)).unwrap())
            .unwrap()
            .add(&v(6).mul(&v(7)).unwrap())
            .unwrap();
        assert_eq!(gens[0], expect);
    }

    #[test]
    fn pfaffians_vanish_on_decomposable_forms() {
        let field = f103();
        let ring = pluecker_ring(field, MonomialOrder::DegRevLex);
        let gens = pfaffian_ideal(&ring);
        let mut rng = RandomState::new(17);
        for _ in 0..100 {
            let u: Vec<u64> = (0..5).map(|_| rng.below(103)).collect();
            let w: Vec<u64> = (0..5).map(|_| rng.below(103)).collect();
            let coords: Vec<u64> = PAIRS
                .iter()
                .map(|&(i, j)| {
                    field.sub(&field.mul(&u[i], &w[j]), &field.mul(&u[j], &w[i]))
                })
                .collect();
            for g in &gens {
                assert_eq!(g.eval(&coords), 0);
            }
        }
    }

    #[test]
    fn chart_01_matches_script() {
        let chart = patch_parametrization(f103(), (0, 1)).unwrap();
        assert_eq!(
            chart.ring.names,
            vec!["x02", "x03", "x04", "x12", "x13", "x14"]
        );
        let v = |k: usize| Polynomial::var(&chart.ring, k);
        // x23 -> x02 x13 - x03 x12
        let x23 = v(0).mul(&v(4)).unwrap().sub(&v(1).mul(&v(3)).unwrap()).unwrap();
        assert_eq!(chart.images[var_index(2, 3)], x23);
        // x24 -> x02 x14 - x04 x12
        let x24 = v(0).mul(&v(5)).unwrap().sub(&v(2).mul(&v(3)).unwrap()).unwrap();
        assert_eq!(chart.images[var_index(2, 4)], x24);
        // x34 -> x03 x14 - x04 x13
        let x34 = v(1).mul(&v(5)).unwrap().sub(&v(2).mul(&v(4)).unwrap()).unwrap();
        assert_eq!(chart.images[var_index(3, 4)], x34);
    }

    #[test]
    fn every_chart_satisfies_invariant() {
        // patch_parametrization verifies the invariant internally.
        assert_eq!(all_charts(f103()).unwrap().len(), 10);
    }

    #[test]
    fn charts_cover_gr_over_f3() {
        // Round trip: every rank-2 point of P^9(F_3) with pivot coordinate
        // normalized reproduces itself through the chart parametrization.
        let field = PrimeField::new(3).unwrap();
        let charts = all_charts(field).unwrap();
        let mut seen = 0u64;
        for x in projective_points(3, 9) {
            if skew_rank(&skew_from_coords(field, &x)).0 != 2 {
                continue;
            }
            seen += 1;
            let k = (0..10).find(|&k| x[k] != 0).expect("nonzero point");
            let (i, j) = PAIRS[k];
            let chart = charts.iter().find(|c| c.pivot == (i, j)).unwrap();
            let scale = field.inv(&x[k]).unwrap();
            let normalized: Vec<u64> = x.iter().map(|&c| field.mul(&c, &scale)).collect();
            let free: Vec<u64> = chart
                .free_pairs
                .iter()
                .map(|&(a, b)| normalized[var_index(a, b)])
                .collect();
            let image: Vec<u64> = chart.images.iter().map(|im| im.eval(&free)).collect();
            assert_eq!(image, normalized);
        }
        assert_eq!(seen, 1210);
    }

    #[test]
    fn identity_instance_gives_zero_patch_ideal() {
        let field = f103();
        let inst = GPK3Instance::with_identity_g1(field, Matrix::identity(field, 10));
        let chart = patch_parametrization(field, (0, 1)).unwrap();
        let cy = gpk3_patch_ideal(&inst, &chart).unwrap();
        assert!(cy.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn singular_ideal_of_linear_forms_is_unit() {
        let field = f103();
        let ring = PolyRing::new(
            field,
            (0..6).map(|i| format!("y{i}")).collect(),
            MonomialOrder::DegRevLex,
        );
        let cy: Vec<_> = (0..5).map(|i| Polynomial::var(&ring, i)).collect();
        let sing = singular_scheme_ideal(&cy).unwrap();
        assert_eq!(sing.len(), 5 + 200);
        let (unit, _) = is_unit_ideal(&sing, &ResourceBudget::default()).unwrap();
        assert!(unit);
        assert!(singular_scheme_ideal(&[]).unwrap().is_empty());
    }

    #[test]
    fn appendix_matrix_is_orthogonal() {
        let field = f103();
        let text = include_str!("../fixtures/appendix_b_f103.txt");
        let t = Matrix::parse_text(field, text).unwrap();
        assert!(t.transpose().mul(&t).unwrap().is_identity());
    }

    #[test]
    fn appendix_matrix_patch_x01_certifies() {
        let field = f103();
        let text = include_str!("../fixtures/appendix_b_f103.txt");
        let t = Matrix::parse_text(field, text).unwrap();
        let inst = GPK3Instance::with_identity_g1(field, t);
        let chart = patch_parametrization(field, (0, 1)).unwrap();
        let cy = gpk3_patch_ideal(&inst, &chart).unwrap();
        assert_eq!(cy.len(), 5);
        assert!(cy.iter().all(|p| p.total_degree().unwrap_or(0) <= 4));
        let sing = singular_scheme_ideal(&cy).unwrap();
        assert_eq!(sing.len(), 205);
        let (unit, _) = is_unit_ideal(&sing, &ResourceBudget::default()).unwrap();
        assert!(unit);
    }

    #[test]
    fn skew_rank_basics() {
        let field = f103();
        // e0 ^ e1
        let mut coords = vec![0u64; 10];
        coords[var_index(0, 1)] = 1;
        let (rank, kernel) = skew_rank(&skew_from_coords(field, &coords));
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 3);
        // e0 ^ e1 + e2 ^ e3
        coords[var_index(2, 3)] = 1;
        let (rank, kernel) = skew_rank(&skew_from_coords(field, &coords));
        assert_eq!(rank, 4);
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0], vec![0, 0, 0, 0, 1]);
        // Random forms: even rank, kernel dim 5 - rank.
        let mut rng = RandomState::new(23);
        for _ in 0..100 {
            let coords: Vec<u64> = (0..10).map(|_| rng.below(103)).collect();
            let (rank, kernel) = skew_rank(&skew_from_coords(field, &coords));
            assert!(rank % 2 == 0 && rank <= 4 || rank == 0);
            assert_eq!(kernel.len(), 5 - rank);
        }
    }

    #[test]
    fn double_mirror_involutive_and_fixes_orthogonal() {
        let field = f103();
        let text = include_str!("../fixtures/appendix_b_f103.txt");
        let t = Matrix::parse_text(field, text).unwrap();
        let inst = GPK3Instance::with_identity_g1(field, t.clone());
        let dm = inst.double_mirror().unwrap();
        assert_eq!(dm.g2, t);
        let mut rng = RandomState::new(31);
        for _ in 0..20 {
            let g = Matrix::from_fn(field, 10, 10, |_, _| rng.below(103));
            if g.inverse().is_err() {
                continue;
            }
            let inst = GPK3Instance::with_identity_g1(field, g.clone());
            let back = inst.double_mirror().unwrap().double_mirror().unwrap();
            assert_eq!(back.g2, g);
        }
    }

    #[test]
    fn gr_point_counts_match_gaussian_binomial() {
        for q in [2u64, 3] {
            let field = PrimeField::new(q).unwrap();
            let id = Matrix::identity(field, 10);
            let n = enumerate_rank2_points(field, &id, Side::X).unwrap();
            let expect = (1 + q + q * q + q.pow(3) + q.pow(4)) * (1 + q * q);
            assert_eq!(n, expect);
            assert_eq!(count_gr_rref(q), expect);
        }
    }

    #[test]
    fn enumeration_rejects_large_fields() {
        let field = PrimeField::new(11).unwrap();
        let id = Matrix::identity(field, 10);
        assert!(matches!(
            enumerate_rank2_points(field, &id, Side::X),
            Err(GrassmannError::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(2, 9).count(), 1023);
        assert_eq!(projective_points(3, 3).count(), 40);
    }

    #[test]
    fn patch_ideal_membership_sanity() {
        // The chart pullback of each Pfaffian lies in the ideal of the
        // other four on Gr itself: with g2 = identity everything is zero,
        // so use a permutation instead and check the ideal is consistent
        // under normal forms of its own generators.
        let field = f103();
        let mut g = Matrix::zero(field, 10, 10);
        // A permutation of the coordinates induced by swapping e3 and e4.
        // x_{ij} -> sign * x_{s(i)s(j)}, with a sign flip when the swap
        // reverses the index order.
        for (from, &(i, j)) in PAIRS.iter().enumerate() {
            let map = |t: usize| match t {
                3 => 4,
                4 => 3,
                o => o,
            };
            let (a, b) = (map(i), map(j));
            let to = var_index(a.min(b), a.max(b));
            g.set(from, to, if a < b { 1 } else { field.neg(&1) });
        }
        let inst = GPK3Instance::with_identity_g1(field, g);
        let chart = patch_parametrization(field, (0, 1)).unwrap();
        let cy = gpk3_patch_ideal(&inst, &chart).unwrap();
        // The permuted Grassmannian equals Gr, so the patch ideal must
        // vanish identically on the chart.
        assert!(cy.iter().all(|p| p.is_zero()));
        // A non-symmetry of Gr gives a nonzero ideal.
        let mut rng = RandomState::new(41);
        let g = Matrix::from_fn(field, 10, 10, |_, _| rng.below(103));
        if g.inverse().is_ok() {
            let inst = GPK3Instance::with_identity_g1(field, g);
            let cy = gpk3_patch_ideal(&inst, &chart).unwrap();
            assert!(cy.iter().any(|p| !p.is_zero()));
        }
    }
}
