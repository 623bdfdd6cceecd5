//! Buchberger's algorithm over a coefficient field, with unit-ideal
//! short-circuiting, resource budgets, and combinatorial Krull dimension
//! from the initial ideal.

use std::sync::Arc;

use crate::ffield::Field;
use crate::multipoly::{Monomial, MonomialOrder, PolyRing, Polynomial};

/// Caps on a single Gröbner run. The degree cap applies to every
/// polynomial produced during the computation.
#[derive(Debug, Clone, Copy)]
pub struct ResourceBudget {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_pair_reductions: u64,
}

impl Default for ResourceBudget {
    fn default() -> Self {
        ResourceBudget {
            max_degree: 60,
            max_basis: 200_000,
            max_pair_reductions: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct GroebnerStats {
    pub pairs_processed: u64,
    pub max_degree_seen: u32,
    pub basis_size: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("resource budget exceeded ({reason}); pairs={} max_degree={} basis={}",
        stats.pairs_processed, stats.max_degree_seen, stats.basis_size)]
pub struct BudgetExceeded {
    pub reason: String,
    pub stats: GroebnerStats,
}

/// A (reduced) Gröbner basis with the statistics of the run that
/// produced it.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    pub order: MonomialOrder,
    pub generators: Vec<Polynomial<F>>,
    pub reduced: bool,
    pub stats: GroebnerStats,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn contains_unit(&self) -> bool {
        self.generators.iter().any(|g| !g.is_zero() && g.is_constant())
    }
}

/// Full normal form: no term of the result is divisible by any leading
/// monomial of the basis.
pub fn normal_form<F: Field>(f: &Polynomial<F>, basis: &[Polynomial<F>]) -> Polynomial<F> {
    let ring = f.ring().clone();
    let field = ring.field.clone();
    let reducers: Vec<(&Polynomial<F>, (Monomial, F::Elem))> = basis
        .iter()
        .filter_map(|g| g.leading().cloned().map(|lead| (g, lead)))
        .collect();
    let mut remainder = Polynomial::zero(&ring);
    let mut work = f.clone();
    'outer: while let Some((lm, lc)) = work.leading().cloned() {
        for (g, (glm, glc)) in &reducers {
            if glm.divides(&lm) {
                let shift = lm.div(glm).expect("divisibility checked");
                let c = field.div(&lc, glc).expect("nonzero leading coefficient");
                work = work.sub_scaled_shifted(&c, &shift, g);
                continue 'outer;
            }
        }
        // Leading term irreducible: move it to the remainder.
        let lt = Polynomial::from_terms(&ring, vec![(lm, lc)]);
        remainder = remainder.add(&lt).expect("same ring");
        work = work.sub(&lt).expect("same ring");
    }
    remainder
}

/// Re-sort a polynomial into a clone of its ring carrying a different
/// monomial order.
pub fn change_order<F: Field>(
    polys: &[Polynomial<F>],
    order: MonomialOrder,
) -> (Arc<PolyRing<F>>, Vec<Polynomial<F>>) {
    let old = polys[0].ring();
    let ring = PolyRing::new(old.field.clone(), old.names.clone(), order);
    let out = polys
        .iter()
        .map(|p| Polynomial::from_terms(&ring, p.terms().to_vec()))
        .collect();
    (ring, out)
}

struct PairQueue {
    // (lcm, i, j); selection is minimal lcm degree first, ties by order.
    pairs: Vec<(Monomial, usize, usize)>,
    order: MonomialOrder,
}

impl PairQueue {
    fn pop(&mut self) -> Option<(Monomial, usize, usize)> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let a = &self.pairs[k].0;
            let b = &self.pairs[best].0;
            let better = match a.degree().cmp(&b.degree()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => a.cmp_in(b, self.order) == std::cmp::Ordering::Less,
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Buchberger with the product and chain criteria, normal selection
/// strategy, input inter-reduction, monic output, and an immediate abort
/// to {1} as soon as a nonzero constant appears.
pub fn groebner_basis<F: Field>(
    gens: &[Polynomial<F>],
    budget: &ResourceBudget,
) -> Result<GroebnerBasis<F>, BudgetExceeded> {
    assert!(!gens.is_empty(), "empty generator list");
    let ring = gens[0].ring().clone();
    let order = ring.order;
    let mut stats = GroebnerStats::default();

    let unit_basis = |stats: GroebnerStats| GroebnerBasis {
        order,
        generators: vec![Polynomial::constant(&ring, ring.field.one())],
        reduced: true,
        stats,
    };

    // Inter-reduce the inputs; the minor lists fed to this engine are
    // highly redundant.
    let mut basis: Vec<Polynomial<F>> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let r = normal_form(g, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            stats.basis_size = 1;
            return Ok(unit_basis(stats));
        }
        basis.push(r.monic());
    }
    if basis.is_empty() {
        return Ok(GroebnerBasis {
            order,
            generators: vec![],
            reduced: true,
            stats,
        });
    }

    let mut queue = PairQueue {
        pairs: Vec::new(),
        order,
    };
    let mut processed: std::collections::HashSet<(usize, usize)> = Default::default();
    let lm = |basis: &[Polynomial<F>], i: usize| basis[i].leading().unwrap().0.clone();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let l = lm(&basis, i).lcm(&lm(&basis, j));
            queue.pairs.push((l, i, j));
        }
    }

    while let Some((l, i, j)) = queue.pop() {
        processed.insert((i, j));
        let (gi, gj) = (&basis[i], &basis[j]);
        let (lmi, _) = gi.leading().unwrap();
        let (lmj, _) = gj.leading().unwrap();
        // Product criterion.
        if lmi.coprime(lmj) {
            continue;
        }
        // Chain criterion: some k with LM_k | lcm and both pairs already
        // handled.
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let lmk = &basis[k].leading().unwrap().0;
            if lmk.divides(&l) {
                let p1 = (i.min(k), i.max(k));
                let p2 = (j.min(k), j.max(k));
                if processed.contains(&p1) && processed.contains(&p2) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }

        stats.pairs_processed += 1;
        if stats.pairs_processed > budget.max_pair_reductions {
            stats.basis_size = basis.len();
            return Err(BudgetExceeded {
                reason: "pair reduction cap".into(),
                stats,
            });
        }

        let spoly = s_polynomial(gi, gj, &l);
        let r = normal_form(&spoly, &basis);
        if r.is_zero() {
            continue;
        }
        if let Some(d) = r.total_degree() {
            stats.max_degree_seen = stats.max_degree_seen.max(d);
            if d > budget.max_degree {
                stats.basis_size = basis.len();
                return Err(BudgetExceeded {
                    reason: format!("degree cap ({} > {})", d, budget.max_degree),
                    stats,
                });
            }
        }
        if r.is_constant() {
            stats.basis_size = 1;
            return Ok(unit_basis(stats));
        }
        let r = r.monic();
        let t = basis.len();
        for k in 0..t {
            let l = lm(&basis, k).lcm(&r.leading().unwrap().0.clone());
            queue.pairs.push((l, k, t));
        }
        basis.push(r);
        if basis.len() > budget.max_basis {
            stats.basis_size = basis.len();
            return Err(BudgetExceeded {
                reason: "basis size cap".into(),
                stats,
            });
        }
    }

    // Reduce: drop elements whose leading monomial is divisible by
    // another's, then fully reduce each against the rest.
    let mut keep: Vec<Polynomial<F>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lmi = &g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            if i == j {
                return false;
            }
            let lmj = &h.leading().unwrap().0;
            lmj.divides(lmi) && (lmj != lmi || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Polynomial<F>> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Polynomial<F>> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = normal_form(&keep[i], &others);
        if !r.is_zero() {
            reduced.push(r.monic());
        }
    }
    reduced.sort_by(|a, b| {
        b.leading()
            .unwrap()
            .0
            .cmp_in(&a.leading().unwrap().0, order)
    });
    stats.basis_size = reduced.len();
    Ok(GroebnerBasis {
        order,
        generators: reduced,
        reduced: true,
        stats,
    })
}

fn s_polynomial<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    lcm: &Monomial,
) -> Polynomial<F> {
    let field = &f.ring().field;
    let (lmf, lcf) = f.leading().unwrap();
    let (lmg, lcg) = g.leading().unwrap();
    let sf = lcm.div(lmf).unwrap();
    let sg = lcm.div(lmg).unwrap();
    // lcg * x^sf * f - lcf * x^sg * g, normalized so both leading terms
    // cancel.
    let zero = Polynomial::zero(f.ring());
    let a = zero.sub_scaled_shifted(&field.neg(lcg), &sf, f);
    a.sub_scaled_shifted(lcf, &sg, g)
}

/// True iff 1 lies in the ideal. Over F_p this certifies emptiness of the
/// vanishing locus over the algebraic closure.
pub fn is_unit_ideal<F: Field>(
    gens: &[Polynomial<F>],
    budget: &ResourceBudget,
) -> Result<(bool, GroebnerStats), BudgetExceeded> {
    let gb = groebner_basis(gens, budget)?;
    Ok((gb.contains_unit(), gb.stats))
}

/// Krull dimension of the affine quotient ring, computed from the initial
/// ideal: the largest cardinality of a variable subset S such that no
/// leading monomial is supported entirely inside S. Returns -1 for the
/// unit ideal.
pub fn ideal_dimension<F: Field>(
    gens: &[Polynomial<F>],
    budget: &ResourceBudget,
) -> Result<(i64, GroebnerStats), BudgetExceeded> {
    let gb = groebner_basis(gens, budget)?;
    if gb.contains_unit() {
        return Ok((-1, gb.stats));
    }
    let nvars = gens[0].ring().nvars();
    let supports: Vec<u32> = gb
        .generators
        .iter()
        .map(|g| {
            let mut mask = 0u32;
            for (i, &e) in g.leading().unwrap().0.exps().iter().enumerate() {
                if e > 0 {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();
    let mut best = 0u32;
    for s in 0u32..(1 << nvars) {
        if s.count_ones() <= best {
            continue;
        }
        // S is admissible when no leading monomial lives entirely in S.
        if supports.iter().all(|&m| m & !s != 0) {
            best = s.count_ones();
        }
    }
    Ok((best as i64, gb.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeField;

    fn ring(p: u64, names: &[&str], order: MonomialOrder) -> Arc<PolyRing<PrimeField>> {
        PolyRing::new(
            PrimeField::new(p).unwrap(),
            names.iter().map(|s| s.to_string()).collect(),
            order,
        )
    }

    fn xy(r: &Arc<PolyRing<PrimeField>>) -> (Polynomial<PrimeField>, Polynomial<PrimeField>) {
        (Polynomial::var(r, 0), Polynomial::var(r, 1))
    }

    #[test]
    fn normal_form_substitutes_on_a_line() {
        // NF(x^2 y, {x - y}) in lex x > y is y^3.
        let r = ring(103, &["x", "y"], MonomialOrder::Lex);
        let (x, y) = xy(&r);
        let f = x.pow(2).mul(&y).unwrap();
        let g = x.sub(&y).unwrap();
        let nf = normal_form(&f, &[g]);
        assert_eq!(nf, y.pow(3));
    }

    #[test]
    fn normal_form_of_member_and_constant() {
        let r = ring(103, &["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = xy(&r);
        let g = x.pow(2).add(&y).unwrap();
        assert!(normal_form(&g, &[g.clone()]).is_zero());
        let one = Polynomial::constant(&r, 1);
        assert_eq!(normal_form(&one, &[x, y]), one);
    }

    #[test]
    fn already_a_basis() {
        let r = ring(103, &["x", "y"], MonomialOrder::Lex);
        let (x, y) = xy(&r);
        let gens = [x.pow(2), x.mul(&y).unwrap()];
        let gb = groebner_basis(&gens, &ResourceBudget::default()).unwrap();
        assert_eq!(gb.generators.len(), 2);
        for g in &gens {
            assert!(normal_form(g, &gb.generators).is_zero());
        }
    }

    #[test]
    fn unit_from_difference() {
        let r = ring(103, &["x"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&r, 0);
        let gens = [x.clone(), x.add(&Polynomial::constant(&r, 1)).unwrap()];
        let gb = groebner_basis(&gens, &ResourceBudget::default()).unwrap();
        assert!(gb.contains_unit());
        assert_eq!(gb.generators.len(), 1);
        assert!(is_unit_ideal(&gens, &ResourceBudget::default()).unwrap().0);
    }

    #[test]
    fn quotient_relation_holds() {
        // {x^2 - y, y^2 - x}: x^4 - x reduces to 0.
        let r = ring(7, &["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = xy(&r);
        let gens = [x.pow(2).sub(&y).unwrap(), y.pow(2).sub(&x).unwrap()];
        let gb = groebner_basis(&gens, &ResourceBudget::default()).unwrap();
        let f = x.pow(4).sub(&x).unwrap();
        assert!(normal_form(&f, &gb.generators).is_zero());
        // Substitution oracle: x^4 - x vanishes on every F_7 point of the
        // curve.
        for a in 0..7u64 {
            for b in 0..7u64 {
                let p = [a, b];
                if gens.iter().all(|g| g.eval(&p) == 0) {
                    assert_eq!(f.eval(&p), 0);
                }
            }
        }
    }

    #[test]
    fn spolys_of_result_reduce_to_zero() {
        let r = ring(103, &["x", "y", "z"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let z = Polynomial::var(&r, 2);
        let gens = [
            x.pow(2).add(&y.mul(&z).unwrap()).unwrap(),
            y.pow(2).add(&x.mul(&z).unwrap()).unwrap(),
            z.pow(2).add(&x.mul(&y).unwrap()).unwrap(),
        ];
        let gb = groebner_basis(&gens, &ResourceBudget::default()).unwrap();
        for i in 0..gb.generators.len() {
            for j in (i + 1)..gb.generators.len() {
                let gi = &gb.generators[i];
                let gj = &gb.generators[j];
                let l = gi.leading().unwrap().0.lcm(&gj.leading().unwrap().0);
                let s = s_polynomial(gi, gj, &l);
                assert!(normal_form(&s, &gb.generators).is_zero());
            }
        }
        for g in &gens {
            assert!(normal_form(g, &gb.generators).is_zero());
        }
    }

    #[test]
    fn dimensions() {
        let r = ring(103, &["a", "b", "c", "d", "e", "f"], MonomialOrder::DegRevLex);
        let zero = [Polynomial::zero(&r)];
        assert_eq!(ideal_dimension(&zero, &ResourceBudget::default()).unwrap().0, 6);
        let one = [Polynomial::constant(&r, 1)];
        assert_eq!(ideal_dimension(&one, &ResourceBudget::default()).unwrap().0, -1);

        let r2 = ring(3, &["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = xy(&r2);
        let gens = [x.pow(2), x.mul(&y).unwrap()];
        // Variety is the y-axis: dimension 1. Point-count oracle: solutions
        // over F_3 and F_9 would grow linearly in q; over F_3 the solutions
        // are exactly x = 0.
        assert_eq!(ideal_dimension(&gens, &ResourceBudget::default()).unwrap().0, 1);
        let count = (0..3u64)
            .flat_map(|a| (0..3u64).map(move |b| [a, b]))
            .filter(|p| gens.iter().all(|g| g.eval(p) == 0))
            .count();
        assert_eq!(count, 3);
    }

    #[test]
    fn dimension_is_order_independent() {
        let r = ring(7, &["x", "y", "z"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let z = Polynomial::var(&r, 2);
        let cases: Vec<Vec<Polynomial<PrimeField>>> = vec![
            vec![x.mul(&y).unwrap().sub(&z).unwrap()],
            vec![x.pow(2), y.pow(3)],
            vec![x.pow(2).sub(&y).unwrap(), y.pow(2).sub(&z).unwrap()],
            vec![x.mul(&y).unwrap(), y.mul(&z).unwrap(), x.mul(&z).unwrap()],
        ];
        for gens in cases {
            let (_, lex_gens) = change_order(&gens, MonomialOrder::Lex);
            let d1 = ideal_dimension(&gens, &ResourceBudget::default()).unwrap().0;
            let d2 = ideal_dimension(&lex_gens, &ResourceBudget::default()).unwrap().0;
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn budget_exceeded_reports_stats() {
        let r = ring(103, &["x", "y", "z"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let z = Polynomial::var(&r, 2);
        let gens = [
            x.pow(2).mul(&y).unwrap().sub(&z).unwrap(),
            x.mul(&y.pow(2)).unwrap().sub(&Polynomial::constant(&r, 1)).unwrap(),
        ];
        let tiny = ResourceBudget {
            max_degree: 60,
            max_basis: 200_000,
            max_pair_reductions: 0,
        };
        let err = groebner_basis(&gens, &tiny).unwrap_err();
        assert!(err.stats.pairs_processed >= 1);
    }
}
