//! Rational multiplicity bookkeeping for the homotopy K-theory of a complete
//! simplicial toric variety, computed from the torus pieces of its
//! maximal-cone cover.
//!
//! K of a rank-r split torus decomposes along exterior-algebra weights: the
//! weight-s part has one formal generator per s-subset of the character
//! basis, and a torus morphism acts by the s x s minors of its character
//! matrix. For each weight the cover yields a cochain complex of rational
//! vector spaces; its cohomology ranks, reindexed by the offset s - p,
//! assemble the multiplicity vector
//!     KH_n(X) tensor Q = sum over offsets o of kappa_{n-o}^mult(o),
//! where kappa_j is a formal symbol for K_j of the base ring tensor Q. The
//! assembly assumes the descent spectral sequence degenerates rationally;
//! every report records that assumption.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::fan_iso::{rational_fan_isomorphism, FanIsomorphism};
use crate::lattice::LatticeMap;
use crate::mat::QMatrix;
use crate::nerve::{build_nerve, nerve_morphism, Nerve, NerveMode, NerveMorphism};

/// Weight decomposition of K of a rank-r split torus: weight s carries
/// multiplicity C(r, s), one generator per s-subset of characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTorusDecomposition {
    pub rank: usize,
    pub weights: Vec<(usize, u64)>,
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

pub fn torus_k_decomposition(rank: usize) -> KTorusDecomposition {
    KTorusDecomposition {
        rank,
        weights: (0..=rank).map(|s| (s, binomial(rank, s))).collect(),
    }
}

/// Increasing k-subsets of 0..n in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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

/// Matrix of s x s minors on increasing-subset bases; the weight-s action of
/// a map of character lattices.
pub fn exterior_power(a: &QMatrix, s: usize) -> QMatrix {
    let rows = k_subsets(a.rows(), s);
    let cols = k_subsets(a.cols(), s);
    QMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        let sub = QMatrix::from_fn(s, s, |r, c| a[(rows[i][r], cols[j][c])].clone());
        sub.det()
    })
}

#[derive(Clone, Debug)]
pub struct WeightTerm {
    /// (cell index within the level, subset of the cell's character basis)
    pub labels: Vec<(usize, Vec<usize>)>,
}

impl WeightTerm {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// The weight-s cochain complex of the cover: one block per nerve cell, with
/// differential the signed sum of exterior powers of character inclusions.
#[derive(Clone, Debug)]
pub struct WeightComplex {
    pub weight: usize,
    pub terms: Vec<WeightTerm>,
    pub differentials: Vec<QMatrix>,
    /// Cohomology is meaningful for degrees 0..=valid_through.
    pub valid_through: usize,
}

/// Alternating-mode weight complex across all levels of the nerve. When the
/// nerve is truncated below level m-1 the top stored degree has no outgoing
/// differential, so its cohomology is not claimed.
pub fn build_weight_complex(nerve: &Nerve, weight: usize) -> Result<WeightComplex> {
    if nerve.mode != NerveMode::Alternating {
        return Err(Error::ModeMismatch("weight complexes use the alternating nerve".into()));
    }
    let full_depth = nerve.max_level() + 1 >= nerve.fan.max_cones.len();
    let valid_through = if full_depth {
        nerve.max_level()
    } else {
        nerve.max_level().saturating_sub(1)
    };
    let keep = |_tuple: &[usize]| true;
    build_weight_complex_filtered(nerve, weight, &keep, valid_through)
}

/// Weight complex of the normalized full-mode nerve: cells with an adjacent
/// repeated index are dropped, which realizes the normalization. Cohomology
/// is valid through p_max - 1 because the top differential is missing.
pub fn build_weight_complex_normalized(nerve: &Nerve, weight: usize) -> Result<WeightComplex> {
    if nerve.mode != NerveMode::Full {
        return Err(Error::ModeMismatch("normalized complexes use the full nerve".into()));
    }
    let keep = |tuple: &[usize]| !Nerve::degenerate_tuple(tuple);
    build_weight_complex_filtered(nerve, weight, &keep, nerve.max_level().saturating_sub(1))
}

fn build_weight_complex_filtered(
    nerve: &Nerve,
    weight: usize,
    keep: &dyn Fn(&[usize]) -> bool,
    valid_through: usize,
) -> Result<WeightComplex> {
    let mut terms: Vec<WeightTerm> = Vec::new();
    let mut kept: Vec<Vec<usize>> = Vec::new(); // per level: kept cell indices
    let mut offsets: Vec<Vec<usize>> = Vec::new(); // per level: start offset per kept cell
    for level in 0..=nerve.max_level() {
        let mut labels = Vec::new();
        let mut kept_level = Vec::new();
        let mut offs = Vec::new();
        for (ci, cell) in nerve.levels[level].iter().enumerate() {
            if !keep(&cell.tuple) {
                continue;
            }
            offs.push(labels.len());
            kept_level.push(ci);
            for subset in k_subsets(cell.torus_rank, weight) {
                labels.push((ci, subset));
            }
        }
        terms.push(WeightTerm { labels });
        kept.push(kept_level);
        offsets.push(offs);
    }
    let mut differentials = Vec::new();
    for p in 0..nerve.max_level() {
        let src_dim = terms[p].dim();
        let dst_dim = terms[p + 1].dim();
        let mut d = QMatrix::zeros(dst_dim, src_dim);
        for (slot, &ci) in kept[p + 1].iter().enumerate() {
            let cell = nerve.cell(p + 1, ci);
            let row0 = offsets[p + 1][slot];
            for j in 0..=p + 1 {
                let mut face = cell.tuple.clone();
                face.remove(j);
                if !keep(&face) {
                    continue;
                }
                let face_ci = nerve
                    .cell_index(p, &face)
                    .ok_or_else(|| Error::Internal("missing face cell".into()))?;
                let slot_src = kept[p]
                    .iter()
                    .position(|&k| k == face_ci)
                    .ok_or_else(|| Error::Internal("face cell filtered".into()))?;
                let col0 = offsets[p][slot_src];
                let inc = nerve.character_inclusion(p + 1, ci, j)?;
                let block = exterior_power(&inc.to_q(), weight);
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        let t = &block[(r, c)] * BigRational::from_integer(sign.clone());
                        d[(row0 + r, col0 + c)] += t;
                    }
                }
            }
        }
        differentials.push(d);
    }
    for w in differentials.windows(2) {
        assert!(w[1].matmul(&w[0]).is_zero(), "differential does not square to zero");
    }
    Ok(WeightComplex { weight, terms, differentials, valid_through })
}

/// Exact cohomology ranks H^0..H^valid_through.
pub fn cohomology_ranks(wc: &WeightComplex) -> Vec<usize> {
    let ranks: Vec<usize> = wc.differentials.iter().map(|d| d.rank()).collect();
    (0..=wc.valid_through)
        .map(|p| {
            let dim = wc.terms[p].dim();
            let out = if p < ranks.len() { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dim - out - inc
        })
        .collect()
}

/// KH_n(X) tensor Q = sum over offsets o of kappa_{n-o}^mult(o).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityVector {
    pub mult: BTreeMap<i64, usize>,
}

impl MultiplicityVector {
    pub fn total(&self) -> usize {
        self.mult.values().sum()
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (o, m)) in self.mult.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}: {m}")?;
        }
        write!(f, "}}")
    }
}

pub const ASSUMPTION_E2: &str =
    "rational degeneration of the descent spectral sequence (E2 assembly)";
pub const ASSUMPTION_FORMAL: &str =
    "multiplicities are over formal symbols kappa_j = K_j(R) tensor Q, R regular; K_*(R) is never evaluated";

#[derive(Clone, Debug)]
pub struct KhMultiplicities {
    pub vector: MultiplicityVector,
    /// (weight s, cochain degree p, rank of H^p) for every pair computed.
    pub table: Vec<(usize, usize, usize)>,
    pub assumptions: Vec<String>,
}

/// Multiplicity vector of a complete simplicial fan: cohomology of every
/// weight complex, collapsed along the offset o = s - p.
pub fn kh_multiplicities(fan: &Fan) -> Result<KhMultiplicities> {
    let m = fan.max_cones.len();
    let nerve = build_nerve(fan, NerveMode::Alternating, m.saturating_sub(1))?;
    let mut table = Vec::new();
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for s in 0..=fan.dim {
        let wc = build_weight_complex(&nerve, s)?;
        for (p, h) in cohomology_ranks(&wc).iter().enumerate() {
            table.push((s, p, *h));
            if *h > 0 {
                *mult.entry(s as i64 - p as i64).or_insert(0) += h;
            }
        }
    }
    Ok(KhMultiplicities {
        vector: MultiplicityVector { mult },
        table,
        assumptions: vec![ASSUMPTION_E2.to_string(), ASSUMPTION_FORMAL.to_string()],
    })
}

#[derive(Clone, Debug)]
pub struct IsogenyKReport {
    pub rank: usize,
    pub det: BigInt,
    /// (weight, determinant of the weight-s action)
    pub weight_determinants: Vec<(usize, BigRational)>,
    /// For diagonal maps: (character subset, product of the selected entries)
    pub diagonal_scalings: Option<Vec<(Vec<usize>, BigInt)>>,
}

/// Check that an injective endomorphism acts invertibly on every weight of
/// the rational K of the torus; diagonal maps also report the subset
/// scalings (the product of the selected diagonal entries).
pub fn verify_isogeny_k_automorphism(alpha: &LatticeMap) -> Result<IsogenyKReport> {
    if alpha.domain_rank != alpha.codomain_rank {
        return Err(Error::RankMismatch {
            domain: alpha.domain_rank,
            codomain: alpha.codomain_rank,
        });
    }
    let r = alpha.domain_rank;
    let det = alpha.matrix.det();
    if det.is_zero() {
        return Err(Error::NotInjective);
    }
    let aq = alpha.matrix.to_q();
    let mut weight_determinants = Vec::new();
    for s in 0..=r {
        let pow = exterior_power(&aq, s);
        let d = pow.det();
        assert!(!d.is_zero(), "weight {s} action degenerates despite injectivity");
        weight_determinants.push((s, d));
    }
    let diagonal = (0..r).all(|i| {
        (0..r).all(|j| i == j || alpha.matrix[(i, j)].is_zero())
    });
    let diagonal_scalings = diagonal.then(|| {
        let mut out = Vec::new();
        for s in 0..=r {
            for subset in k_subsets(r, s) {
                let mut prod = BigInt::one();
                for &i in &subset {
                    prod *= &alpha.matrix[(i, i)];
                }
                out.push((subset, prod));
            }
        }
        out
    });
    Ok(IsogenyKReport { rank: r, det, weight_determinants, diagonal_scalings })
}

#[derive(Clone, Debug)]
pub struct KhComparison {
    pub iso: FanIsomorphism,
    pub morphism: NerveMorphism,
    pub vector_x: MultiplicityVector,
    pub vector_y: MultiplicityVector,
    pub table_x: Vec<(usize, usize, usize)>,
    pub table_y: Vec<(usize, usize, usize)>,
    pub equal: bool,
    pub assumptions: Vec<String>,
}

impl KhComparison {
    /// (level, tuple, degree) rows of the per-cell isogeny table.
    pub fn degree_table(&self) -> Vec<(usize, Vec<usize>, BigInt)> {
        let mut out = Vec::new();
        for (level, cells) in self.morphism.cells.iter().enumerate() {
            for cell in cells {
                out.push((level, cell.tuple.clone(), cell.degree.clone()));
            }
        }
        out
    }
}

/// Full comparison pipeline: find a rational fan isomorphism, certify the
/// induced nerve morphism cell-by-cell as isogenies, compute both
/// multiplicity vectors, and compare.
pub fn compare_kh(fx: &Fan, fy: &Fan) -> Result<KhComparison> {
    let iso = rational_fan_isomorphism(fx, fy).ok_or(Error::NoRationalIsomorphism)?;
    let mx = fx.max_cones.len();
    let nx = build_nerve(fx, NerveMode::Alternating, mx.saturating_sub(1))?;
    let ny = build_nerve(fy, NerveMode::Alternating, fy.max_cones.len().saturating_sub(1))?;
    let morphism = nerve_morphism(&nx, &ny, &iso.map, &iso.cone_bijection)?;
    let kx = kh_multiplicities(fx)?;
    let ky = kh_multiplicities(fy)?;
    let equal = kx.vector == ky.vector;
    Ok(KhComparison {
        iso,
        morphism,
        equal,
        vector_x: kx.vector,
        vector_y: ky.vector,
        table_x: kx.table,
        table_y: ky.table,
        assumptions: kx.assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_projective_space_fan, make_wps_fan};
    use crate::mat::{bi, rat, IntMatrix};
    use num_traits::Signed;

    #[test]
    fn torus_decomposition_small_ranks() {
        assert_eq!(torus_k_decomposition(0).weights, vec![(0, 1)]);
        assert_eq!(torus_k_decomposition(1).weights, vec![(0, 1), (1, 1)]);
        assert_eq!(torus_k_decomposition(2).weights, vec![(0, 1), (1, 2), (2, 1)]);
        for r in 0..=6 {
            let total: u64 = torus_k_decomposition(r).weights.iter().map(|&(_, m)| m).sum();
            assert_eq!(total, 1 << r);
        }
    }

    #[test]
    fn exterior_power_examples() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).to_q();
        assert_eq!(exterior_power(&a, 1), a);
        let top = exterior_power(&a, 2);
        assert_eq!(top[(0, 0)], rat(-2));

        let d = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).to_q();
        assert_eq!(exterior_power(&d, 2)[(0, 0)], rat(6));

        let any = IntMatrix::from_rows(&[vec![5, 7], vec![1, 9]]).to_q();
        let zeroth = exterior_power(&any, 0);
        assert_eq!((zeroth.rows(), zeroth.cols()), (1, 1));
        assert_eq!(zeroth[(0, 0)], rat(1));
    }

    #[test]
    fn p1_weight_complexes() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 1).unwrap();
        let w0 = build_weight_complex(&nerve, 0).unwrap();
        assert_eq!(w0.terms[0].dim(), 2);
        assert_eq!(w0.terms[1].dim(), 1);
        assert_eq!(cohomology_ranks(&w0), vec![1, 0]);

        let w1 = build_weight_complex(&nerve, 1).unwrap();
        assert_eq!(w1.terms[0].dim(), 0);
        assert_eq!(w1.terms[1].dim(), 1);
        assert_eq!(cohomology_ranks(&w1), vec![0, 1]);

        // weights above the dimension vanish
        let w5 = build_weight_complex(&nerve, 5).unwrap();
        assert!(w5.terms.iter().all(|t| t.dim() == 0));
    }

    #[test]
    fn multiplicities_p1_p2() {
        let k1 = kh_multiplicities(&make_projective_space_fan(1)).unwrap();
        assert_eq!(k1.vector.mult, BTreeMap::from([(0, 2)]));
        let k2 = kh_multiplicities(&make_projective_space_fan(2)).unwrap();
        assert_eq!(k2.vector.mult, BTreeMap::from([(0, 3)]));
        // per-weight table for the plane: H^s of weight s is 1-dimensional
        for s in 0..=2 {
            assert!(k2.table.contains(&(s, s, 1)));
        }
    }

    #[test]
    fn multiplicities_p112() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let k = kh_multiplicities(&w.fan).unwrap();
        assert_eq!(k.vector.mult, BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn isogeny_automorphism_reports() {
        let id = LatticeMap::identity(2);
        let rep = verify_isogeny_k_automorphism(&id).unwrap();
        assert_eq!(rep.det, bi(1));
        assert!(rep.weight_determinants.iter().all(|(_, d)| d.is_one()));

        let d23 = LatticeMap::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        let rep = verify_isogeny_k_automorphism(&d23).unwrap();
        let scalings = rep.diagonal_scalings.unwrap();
        assert!(scalings.contains(&(vec![0, 1], bi(6))));

        let sing = LatticeMap::new(IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        assert!(matches!(verify_isogeny_k_automorphism(&sing), Err(Error::NotInjective)));
    }

    #[test]
    fn compare_p112_p2() {
        let x = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap().fan;
        let y = make_projective_space_fan(2);
        let cmp = compare_kh(&x, &y).unwrap();
        assert!(cmp.equal);
        assert_eq!(cmp.vector_x.mult, BTreeMap::from([(0, 3)]));
        let degrees = cmp.degree_table();
        assert!(degrees.iter().all(|(_, _, d)| d.is_positive()));
    }

    #[test]
    fn compare_self_identity() {
        let p2 = make_projective_space_fan(2);
        let cmp = compare_kh(&p2, &p2).unwrap();
        assert!(cmp.equal);
        assert!(cmp.degree_table().iter().all(|(_, _, d)| d.is_one()));
    }

    #[test]
    fn alternating_matches_normalized_full() {
        for fan in [make_projective_space_fan(1), make_projective_space_fan(2)] {
            let m = fan.max_cones.len();
            let alt = build_nerve(&fan, NerveMode::Alternating, m - 1).unwrap();
            let full = build_nerve(&fan, NerveMode::Full, m).unwrap();
            for s in 0..=fan.dim {
                let a = build_weight_complex(&alt, s).unwrap();
                let f = build_weight_complex_normalized(&full, s).unwrap();
                let ra = cohomology_ranks(&a);
                let rf = cohomology_ranks(&f);
                assert_eq!(ra[..m], rf[..m], "weight {s} mismatch");
            }
        }
    }
}
