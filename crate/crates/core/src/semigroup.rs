//! Generators of the dual semigroup of a cone: the monoid of monomial
//! exponents of the associated chart ring.
//!
//! Zero cone and rays have closed-form generator sets. A general simplicial
//! cone is handled by enumerating the lattice points of the fundamental
//! parallelepiped spanned by the extreme rays of the dual cone and discarding
//! the reducible ones; a cone of positive codimension is first split into its
//! perpendicular lattice and a pointed quotient part.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::feas::{project_out, Ineq};
use crate::lattice::{kernel_lattice, quotient_presentation, right_inverse};
use crate::mat::{primitivize, IntMatrix};
use crate::snf::snf;

/// Is `m` in the dual cone of `cone`, i.e. nonnegative against every ray?
pub fn in_dual_cone(fan: &Fan, cone: &Cone, m: &[BigInt]) -> bool {
    cone.ray_indices().iter().all(|&i| {
        let pairing: BigInt = fan.rays[i]
            .iter()
            .zip(m)
            .map(|(a, b)| a * b)
            .sum();
        !pairing.is_negative()
    })
}

/// Finite generating set of the semigroup of monomial exponents of the chart
/// of `cone` (its dual cone intersected with the character lattice), sorted
/// lexicographically. Supports ambient dimension up to 3.
pub fn dual_semigroup_generators(fan: &Fan, cone: &Cone) -> Result<Vec<Vec<BigInt>>> {
    let d = fan.dim;
    if d > 3 {
        return Err(Error::DimensionUnsupported(d));
    }
    let k = cone.dim();
    let mut gens: Vec<Vec<BigInt>> = if k == 0 {
        let mut out = Vec::new();
        for i in 0..d {
            for sign in [1i64, -1] {
                out.push(
                    (0..d)
                        .map(|j| if i == j { BigInt::from(sign) } else { BigInt::zero() })
                        .collect(),
                );
            }
        }
        out
    } else if k == 1 {
        // one vector pairing to 1 with the ray plus the hyperplane lattice
        let ray = &fan.rays[cone.ray_indices()[0]];
        let col = IntMatrix::from_columns(d, std::slice::from_ref(ray));
        let dec = snf(&col);
        debug_assert!(dec.invariant_factors() == vec![BigInt::one()]);
        let mut out = Vec::new();
        out.push(dec.u.row_slice(0).to_vec());
        for i in 1..d {
            let row = dec.u.row_slice(i).to_vec();
            out.push(row.iter().map(|x| -x.clone()).collect());
            out.push(row);
        }
        out
    } else if k == d {
        let rays: Vec<Vec<BigInt>> =
            cone.ray_indices().iter().map(|&i| fan.rays[i].clone()).collect();
        pointed_dual_generators(&rays)
    } else {
        // split off the perpendicular lattice, reduce to a pointed problem
        let ray_rows = IntMatrix::from_fn(k, d, |i, j| fan.rays[cone.ray_indices()[i]][j].clone());
        let perp = kernel_lattice(&ray_rows); // d x (d-k)
        let q = quotient_presentation(&perp, d);
        let r = right_inverse(&q.projection)
            .ok_or_else(|| Error::Internal("projection without right inverse".into()))?;
        // pairing vectors in the quotient: c_i = R^T * ray_i
        let pairings: Vec<Vec<BigInt>> = (0..k)
            .map(|i| r.transpose().apply(&fan.rays[cone.ray_indices()[i]]))
            .collect();
        let quotient_gens = pointed_dual_generators(&pairings);
        let mut out = Vec::new();
        for j in 0..perp.cols() {
            let col = perp.column(j);
            out.push(col.iter().map(|x| -x.clone()).collect());
            out.push(col);
        }
        for g in quotient_gens {
            out.push(r.apply(&g));
        }
        out
    };
    gens.sort();
    gens.dedup();
    Ok(gens)
}

/// Generators of { y : <y, c_i> >= 0 for all i } for linearly independent
/// c_1..c_k in Z^k: enumerate the fundamental parallelepiped of the extreme
/// rays, then keep the irreducible points.
fn pointed_dual_generators(pairings: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = pairings.len();
    debug_assert!(pairings.iter().all(|c| c.len() == k));
    let mc = IntMatrix::from_fn(k, k, |i, j| pairings[i][j].clone());
    let det = mc.det();
    assert!(!det.is_zero(), "pairing vectors must be independent");
    // columns of det * Mc^{-1}, oriented to pair positively, primitivized
    let inv = mc.to_q().inverse().expect("invertible");
    let sign = if det.is_negative() { -BigInt::one() } else { BigInt::one() };
    let w: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let col: Vec<BigInt> = (0..k)
                .map(|row| {
                    let x = &inv[(row, i)] * BigRational::from_integer(det.clone() * &sign);
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect();
            primitivize(&col)
        })
        .collect();
    let bound: Vec<BigInt> = (0..k)
        .map(|i| w[i].iter().zip(&pairings[i]).map(|(a, b)| a * b).sum())
        .collect();
    // bounding box of the parallelepiped from its vertices (subset sums)
    let mut lo = vec![BigInt::zero(); k];
    let mut hi = vec![BigInt::zero(); k];
    for mask in 0u32..(1u32 << k) {
        let mut v = vec![BigInt::zero(); k];
        for (i, wi) in w.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for j in 0..k {
                    v[j] += &wi[j];
                }
            }
        }
        for j in 0..k {
            if v[j] < lo[j] {
                lo[j] = v[j].clone();
            }
            if v[j] > hi[j] {
                hi[j] = v[j].clone();
            }
        }
    }
    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let mut cursor: Vec<BigInt> = lo.clone();
    'outer: loop {
        let inside = (0..k).all(|i| {
            let pairing: BigInt = cursor.iter().zip(&pairings[i]).map(|(a, b)| a * b).sum();
            !pairing.is_negative() && pairing <= bound[i]
        });
        if inside && cursor.iter().any(|x| !x.is_zero()) {
            candidates.push(cursor.clone());
        }
        // lexicographic increment over the box
        for j in (0..k).rev() {
            if cursor[j] < hi[j] {
                cursor[j] += BigInt::one();
                cursor[(j + 1)..k].clone_from_slice(&lo[(j + 1)..k]);
                continue 'outer;
            }
            if j == 0 {
                break 'outer;
            }
        }
        if k == 0 {
            break;
        }
    }
    let in_cone = |v: &[BigInt]| {
        pairings.iter().all(|c| {
            let p: BigInt = v.iter().zip(c).map(|(a, b)| a * b).sum();
            !p.is_negative()
        })
    };
    // p is reducible when p - g stays in the semigroup for some other candidate g
    let irreducible: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|p| {
            !candidates.iter().any(|g| {
                if g == *p {
                    return false;
                }
                let diff: Vec<BigInt> = p.iter().zip(g).map(|(a, b)| a - b).collect();
                diff.iter().any(|x| !x.is_zero()) && in_cone(&diff)
            })
        })
        .cloned()
        .collect();
    irreducible
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombinationSearch {
    Found,
    /// Definitely not a nonnegative integer combination.
    NotFound,
    /// Not found within the coefficient budget; membership undecided.
    Inconclusive,
}

/// An exact inequality-and-span description of the rational cone spanned by
/// a generator list, precomputed once so membership queries are integer dot
/// products. Built by projecting { v = G*lambda, lambda >= 0 } onto v.
#[derive(Clone, Debug)]
pub struct ConeDescription {
    dim: usize,
    empty: bool,
    /// v is in the cone iff <row, v> >= 0 for every row.
    rows: Vec<Vec<BigInt>>,
    /// ...and <row, v> = 0 for every row here (complement of the span).
    equalities: Vec<Vec<BigInt>>,
}

impl ConeDescription {
    pub fn new(gens: &[Vec<BigInt>], dim: usize) -> Self {
        if gens.is_empty() {
            return ConeDescription { dim, empty: true, rows: Vec::new(), equalities: Vec::new() };
        }
        let n = gens.len();
        // variables (lambda_1..lambda_n, v_1..v_dim)
        let nvars = n + dim;
        let mut system: Vec<Ineq> = Vec::new();
        for i in 0..n {
            let mut coeffs = vec![BigRational::zero(); nvars];
            coeffs[i] = BigRational::one();
            system.push(Ineq::ge(coeffs, BigRational::zero()));
        }
        for j in 0..dim {
            for sign in [1i64, -1] {
                let mut coeffs = vec![BigRational::zero(); nvars];
                for i in 0..n {
                    coeffs[i] = BigRational::from_integer(&gens[i][j] * BigInt::from(sign));
                }
                coeffs[n + j] = BigRational::from_integer(BigInt::from(-sign));
                system.push(Ineq::ge(coeffs, BigRational::zero()));
            }
        }
        let projected = project_out(system, nvars, n);
        let mut rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for ineq in projected {
            let cleared: Vec<BigInt> = {
                let mut lcm = BigInt::one();
                for c in &ineq.coeffs[n..] {
                    lcm = lcm.lcm(c.denom());
                }
                ineq.coeffs[n..]
                    .iter()
                    .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                    .collect()
            };
            let normalized = primitivize(&cleared);
            if normalized.iter().any(|x| !x.is_zero()) {
                rows.insert(normalized);
            }
        }
        // pair up opposite rows into equalities
        let mut equalities = Vec::new();
        let mut inequalities = Vec::new();
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for row in &rows {
            if seen.contains(row) {
                continue;
            }
            let neg: Vec<BigInt> = row.iter().map(|x| -x.clone()).collect();
            if rows.contains(&neg) {
                seen.insert(neg.clone());
                seen.insert(row.clone());
                equalities.push(row.clone());
            } else {
                inequalities.push(row.clone());
            }
        }
        ConeDescription { dim, empty: false, rows: inequalities, equalities }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        if self.empty {
            return v.iter().all(|x| x.is_zero());
        }
        self.equalities.iter().all(|row| {
            let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
            dot.is_zero()
        }) && self.rows.iter().all(|row| {
            let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
            !dot.is_negative()
        })
    }
}

/// Rational cone membership: is target a nonnegative rational combination of
/// the generators?
pub fn in_rational_cone(gens: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    ConeDescription::new(gens, target.len()).contains(target)
}

/// A fixed generator list with precomputed suffix cone descriptions, for
/// repeated bounded membership queries.
#[derive(Clone, Debug)]
pub struct GeneratedSemigroup {
    gens: Vec<Vec<BigInt>>,
    dim: usize,
    suffixes: Vec<ConeDescription>,
}

impl GeneratedSemigroup {
    pub fn new(gens: Vec<Vec<BigInt>>, dim: usize) -> Self {
        let suffixes = (0..=gens.len())
            .map(|idx| ConeDescription::new(&gens[idx..], dim))
            .collect();
        GeneratedSemigroup { gens, dim, suffixes }
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    /// Search for target = sum c_i g_i with c_i >= 0 integers, sum c_i <= bound.
    pub fn contains_within(&self, target: &[BigInt], bound: usize) -> CombinationSearch {
        debug_assert_eq!(target.len(), self.dim);
        if !self.suffixes[0].contains(target) {
            return CombinationSearch::NotFound;
        }
        let mut ctx = SearchCtx {
            gens: &self.gens,
            suffixes: &self.suffixes,
            truncated: false,
            failed: HashMap::new(),
        };
        if search(&mut ctx, target.to_vec(), 0, bound) {
            CombinationSearch::Found
        } else if ctx.truncated {
            CombinationSearch::Inconclusive
        } else {
            CombinationSearch::NotFound
        }
    }
}

/// Bounded search for target = sum c_i g_i with c_i >= 0 integers and
/// sum c_i <= bound.
pub fn bounded_nonneg_combination(
    gens: &[Vec<BigInt>],
    target: &[BigInt],
    bound: usize,
) -> CombinationSearch {
    GeneratedSemigroup::new(gens.to_vec(), target.len()).contains_within(target, bound)
}

struct SearchCtx<'a> {
    gens: &'a [Vec<BigInt>],
    suffixes: &'a [ConeDescription],
    truncated: bool,
    /// (generator index, remaining vector) -> largest budget that failed
    failed: HashMap<(usize, Vec<BigInt>), usize>,
}

fn search(ctx: &mut SearchCtx, v: Vec<BigInt>, idx: usize, budget: usize) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if idx == ctx.gens.len() {
        return false;
    }
    if !ctx.suffixes[idx].contains(&v) {
        return false;
    }
    if budget == 0 {
        ctx.truncated = true;
        return false;
    }
    if let Some(&b) = ctx.failed.get(&(idx, v.clone())) {
        if budget <= b {
            return false;
        }
    }
    let mut current = v.clone();
    for c in 0..=budget {
        if c > 0 {
            for (cur, g) in current.iter_mut().zip(&ctx.gens[idx]) {
                *cur -= g;
            }
            // once the remainder leaves the cone of this suffix it never
            // returns by subtracting more of the same generator
            if !ctx.suffixes[idx].contains(&current) {
                break;
            }
        }
        if search(ctx, current.clone(), idx + 1, budget - c) {
            return true;
        }
    }
    let entry = ctx.failed.entry((idx, v)).or_insert(0);
    if budget > *entry {
        *entry = budget;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::make_wps_fan;
    use crate::mat::bi;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    #[test]
    fn hilbert_basis_of_index_two_cone() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let cone = Cone::new(vec![0, 2]); // <(1,0), (-1,-2)>
        let gens = dual_semigroup_generators(&w.fan, &cone).unwrap();
        assert_eq!(gens, vec![v(&[0, -1]), v(&[1, -1]), v(&[2, -1])]);
        // the u*w = v^2 relation: h1 + h3 = 2*h2
        let sum: Vec<BigInt> = gens[0].iter().zip(&gens[2]).map(|(a, b)| a + b).collect();
        let twice: Vec<BigInt> = gens[1].iter().map(|x| x * bi(2)).collect();
        assert_eq!(sum, twice);
    }

    #[test]
    fn ray_chart_in_z3() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        let gens = dual_semigroup_generators(&w.fan, &Cone::new(vec![0])).unwrap();
        let expected = vec![
            v(&[0, -1, 0]),
            v(&[0, 0, -1]),
            v(&[0, 0, 1]),
            v(&[0, 1, 0]),
            v(&[1, 0, 0]),
        ];
        assert_eq!(gens, expected);
    }

    #[test]
    fn smooth_quadrant() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(1)]).unwrap();
        let gens = dual_semigroup_generators(&w.fan, &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(gens, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn zero_cone_gives_laurent_generators() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let gens = dual_semigroup_generators(&w.fan, &Cone::zero()).unwrap();
        assert_eq!(gens.len(), 4);
        assert!(gens.contains(&v(&[0, -1])));
        assert!(gens.contains(&v(&[1, 0])));
    }

    #[test]
    fn dimension_above_three_rejected() {
        let fan = crate::fan::make_projective_space_fan(4);
        let cone = Cone::new(vec![0]);
        assert!(matches!(
            dual_semigroup_generators(&fan, &cone),
            Err(crate::error::Error::DimensionUnsupported(4))
        ));
    }

    #[test]
    fn rational_cone_membership() {
        let gens = vec![v(&[-1, 0, 0]), v(&[0, -1, 0]), v(&[0, 0, -1]), v(&[-4, 0, 1]), v(&[0, -2, 1])];
        assert!(in_rational_cone(&gens, &v(&[-1, -1, 0])));
        assert!(!in_rational_cone(&gens, &v(&[1, 1, -1])));
        assert!(!in_rational_cone(&gens, &v(&[2, -1, 0])));
    }

    #[test]
    fn bounded_combination_search() {
        let gens = vec![v(&[-1, 0, 0]), v(&[0, -1, 0]), v(&[0, 0, -1]), v(&[-4, 0, 1]), v(&[0, -2, 1])];
        assert_eq!(
            bounded_nonneg_combination(&gens, &v(&[-5, -2, 1]), 50),
            CombinationSearch::Found
        );
        assert_eq!(
            bounded_nonneg_combination(&gens, &v(&[1, 0, 0]), 50),
            CombinationSearch::NotFound
        );
    }
}
