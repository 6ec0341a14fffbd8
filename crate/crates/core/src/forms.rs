//! Multigraded slices of wedge-generated differential-form modules over the
//! chart rings of a fan, and the graded complex of the maximal-cone cover.
//!
//! Everything is written in the log basis: x^a dlog_S has multidegree a,
//! where dlog x_i = dx_i / x_i. The differential of a monomial expands as
//! d(x^a) = x^a * sum_i a_i dlog x_i, so a wedge of j monomial differentials
//! has, at its multidegree, the coefficient vector of j x j minors of the
//! exponent matrix. Restriction maps between chart modules become identity
//! inclusions of coefficient subspaces of Q^C(d,j), which makes the graded
//! pieces finite-dimensional exact linear algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{is_complete, validate_fan, Cone, Fan};
use crate::kh::k_subsets;
use crate::mat::{bi, IntMatrix, QMatrix};
use crate::semigroup::{dual_semigroup_generators, CombinationSearch, GeneratedSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    /// The explicit chart presentations of the P(1,1,2,4) computation.
    PaperList,
    /// Generators from the full dual semigroup of each chart cone.
    Hilbert,
}

/// Search budget for membership in a generated subsemigroup (paper-list
/// mode); covers every multidegree with |mu_i| <= 10.
pub const MEMBERSHIP_BOUND: usize = 50;

#[derive(Clone, Debug)]
enum Membership {
    /// Exponent must pair nonnegatively with the listed rays.
    DualCone { rays: Vec<Vec<BigInt>> },
    /// Exponent must be a bounded nonnegative combination of the ring
    /// generators.
    Generated { semigroup: GeneratedSemigroup, bound: usize },
}

/// A module of j-forms over a monomial chart ring, generated by wedges of
/// differentials of monomials.
#[derive(Clone, Debug)]
pub struct MonomialModule {
    pub ambient_dim: usize,
    pub form_degree: usize,
    /// Exponent vectors of the ring's monomial generators.
    pub ring_generators: Vec<Vec<BigInt>>,
    /// j-tuples of exponent vectors whose differentials are wedged.
    pub wedge_generators: Vec<Vec<Vec<BigInt>>>,
    membership: Membership,
}

impl MonomialModule {
    /// Multidegree of a wedge generator (sum of its exponent vectors).
    pub fn wedge_degree(&self, w: &[Vec<BigInt>]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.ambient_dim];
        for m in w {
            for (a, b) in acc.iter_mut().zip(m) {
                *a += b;
            }
        }
        acc
    }

    /// Log-basis coefficient vector of a wedge generator: the j x j minors of
    /// its exponent matrix, indexed by increasing column subsets.
    pub fn wedge_coefficients(&self, w: &[Vec<BigInt>]) -> Vec<BigInt> {
        let j = self.form_degree;
        let exponents = IntMatrix::from_fn(j, self.ambient_dim, |r, c| w[r][c].clone());
        k_subsets(self.ambient_dim, j)
            .into_iter()
            .map(|cols| {
                let rows: Vec<usize> = (0..j).collect();
                exponents.submatrix(&rows, &cols).det()
            })
            .collect()
    }

    /// Is the exponent a monomial of the chart ring? The second component
    /// reports an inconclusive bounded search.
    pub fn contains_monomial(&self, nu: &[BigInt]) -> (bool, bool) {
        match &self.membership {
            Membership::DualCone { rays } => {
                let ok = rays.iter().all(|r| {
                    let pairing: BigInt = r.iter().zip(nu).map(|(a, b)| a * b).sum();
                    pairing >= BigInt::zero()
                });
                (ok, false)
            }
            Membership::Generated { semigroup, bound } => match semigroup.contains_within(nu, *bound) {
                CombinationSearch::Found => (true, false),
                CombinationSearch::NotFound => (false, false),
                CombinationSearch::Inconclusive => (false, true),
            },
        }
    }
}

fn unit_vec(dim: usize, i: usize, sign: i64) -> Vec<BigInt> {
    (0..dim)
        .map(|j| if i == j { bi(sign) } else { BigInt::zero() })
        .collect()
}

/// The explicit chart generator lists of the P(1,1,2,4) computation, keyed by
/// the cone: coordinate rays get their Laurent presentations with coordinate
/// wedge generators, the fourth ray gets the five listed monomials with all
/// pairwise wedges, and the zero cone gets the full Laurent ring.
fn paper_chart(fan: &Fan, cone: &Cone) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let d = fan.dim;
    if cone.is_zero() {
        let mut ring = Vec::new();
        for i in 0..d {
            ring.push(unit_vec(d, i, 1));
            ring.push(unit_vec(d, i, -1));
        }
        let base: Vec<Vec<BigInt>> = (0..d).map(|i| unit_vec(d, i, 1)).collect();
        return Ok((ring, base));
    }
    if cone.dim() != 1 {
        return Err(Error::UnknownPaperChart(cone.ray_indices().to_vec()));
    }
    let ray = &fan.rays[cone.ray_indices()[0]];
    let coord = (0..d).position(|i| *ray == unit_vec(d, i, 1));
    if let Some(axis) = coord {
        // k[x_axis, other coordinates Laurent]; wedges of coordinate differentials
        let mut ring = vec![unit_vec(d, axis, 1)];
        for i in 0..d {
            if i != axis {
                ring.push(unit_vec(d, i, 1));
                ring.push(unit_vec(d, i, -1));
            }
        }
        let base: Vec<Vec<BigInt>> = (0..d).map(|i| unit_vec(d, i, 1)).collect();
        return Ok((ring, base));
    }
    if d == 3 && *ray == vec![bi(-1), bi(-2), bi(-4)] {
        let ring = vec![
            vec![bi(-1), bi(0), bi(0)],
            vec![bi(0), bi(-1), bi(0)],
            vec![bi(0), bi(0), bi(-1)],
            vec![bi(-4), bi(0), bi(1)],
            vec![bi(0), bi(-2), bi(1)],
        ];
        return Ok((ring.clone(), ring));
    }
    Err(Error::UnknownPaperChart(cone.ray_indices().to_vec()))
}

/// The module of j-forms on the chart of `cone`, with generators chosen by
/// `mode`.
pub fn chart_module(fan: &Fan, cone: &Cone, j: usize, mode: GeneratorMode) -> Result<MonomialModule> {
    let d = fan.dim;
    if d > 3 {
        return Err(Error::DimensionUnsupported(d));
    }
    if j > d {
        return Err(Error::DimensionMismatch(format!("form degree {j} exceeds dimension {d}")));
    }
    let (ring_generators, wedge_base, membership) = match mode {
        GeneratorMode::Hilbert => {
            let gens = dual_semigroup_generators(fan, cone)?;
            let rays = cone.ray_indices().iter().map(|&i| fan.rays[i].clone()).collect();
            (gens.clone(), gens, Membership::DualCone { rays })
        }
        GeneratorMode::PaperList => {
            let (ring, base) = paper_chart(fan, cone)?;
            // coordinate charts are exactly sign conditions, which the dual
            // cone test decides with no search bound
            let is_laurent_presentation = base.iter().all(|b| {
                b.iter().filter(|x| !x.is_zero()).count() == 1
                    && b.iter().all(|x| x.is_zero() || x.is_one())
            });
            let membership = if is_laurent_presentation {
                let rays = cone.ray_indices().iter().map(|&i| fan.rays[i].clone()).collect();
                Membership::DualCone { rays }
            } else {
                Membership::Generated {
                    semigroup: GeneratedSemigroup::new(ring.clone(), d),
                    bound: MEMBERSHIP_BOUND,
                }
            };
            (ring, base, membership)
        }
    };
    let wedge_generators: Vec<Vec<Vec<BigInt>>> = k_subsets(wedge_base.len(), j)
        .into_iter()
        .map(|subset| subset.into_iter().map(|i| wedge_base[i].clone()).collect())
        .collect();
    Ok(MonomialModule {
        ambient_dim: d,
        form_degree: j,
        ring_generators,
        wedge_generators,
        membership,
    })
}

/// Basis of the multidegree-mu slice of the module, as coefficient vectors
/// in Q^C(d,j) in the log form basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub multidegree: Vec<BigInt>,
    pub basis: Vec<Vec<BigRational>>,
    /// Indices of the wedge generators realizing the basis vectors.
    pub contributing: Vec<usize>,
    pub warnings: Vec<String>,
}

pub fn graded_slice(module: &MonomialModule, mu: &[BigInt]) -> GradedPiece {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut contributing = Vec::new();
    let mut warnings = Vec::new();
    let ambient = k_subsets(module.ambient_dim, module.form_degree).len();
    for (wi, w) in module.wedge_generators.iter().enumerate() {
        let deg = module.wedge_degree(w);
        let nu: Vec<BigInt> = mu.iter().zip(&deg).map(|(a, b)| a - b).collect();
        let (member, truncated) = module.contains_monomial(&nu);
        if truncated {
            warnings.push(format!(
                "membership search for exponent {nu:?} hit the bound; slice may be incomplete"
            ));
        }
        if !member {
            continue;
        }
        let coeffs: Vec<BigRational> = module
            .wedge_coefficients(w)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        if coeffs.iter().all(|x| x.is_zero()) {
            continue;
        }
        // keep only vectors enlarging the span
        let mut probe: Vec<Vec<BigRational>> = basis.clone();
        probe.push(coeffs.clone());
        let mat = QMatrix::from_fn(probe.len(), ambient, |i, jj| probe[i][jj].clone());
        if mat.rank() == probe.len() {
            basis.push(coeffs);
            contributing.push(wi);
        }
    }
    GradedPiece { multidegree: mu.to_vec(), basis, contributing, warnings }
}

/// The portion of the graded complex of the maximal-cone cover computed for
/// a fixed multidegree: terms indexed by (p+1)-fold intersections, with
/// signed identity-inclusion differentials in the shared coordinate space.
#[derive(Clone, Debug)]
pub struct GradedCechComplex {
    pub form_degree: usize,
    pub multidegree: Vec<BigInt>,
    pub mode: GeneratorMode,
    /// Cochain degrees actually built (consecutive).
    pub degrees: Vec<usize>,
    /// Per degree, per cell: the tuple of maximal-cone indices.
    pub cells: Vec<Vec<Vec<usize>>>,
    pub slices: Vec<Vec<GradedPiece>>,
    pub differentials: Vec<QMatrix>,
    pub warnings: Vec<String>,
}

impl GradedCechComplex {
    pub fn term_dim(&self, level: usize) -> usize {
        self.slices[level].iter().map(|s| s.basis.len()).sum()
    }

    fn top_slice(&self) -> &GradedPiece {
        let last = self.slices.last().expect("nonempty complex");
        &last[0]
    }
}

fn intersection_cone(fan: &Fan, tuple: &[usize]) -> Cone {
    let mut iter = tuple.iter();
    let first = *iter.next().expect("nonempty");
    let mut cone = fan.max_cones[first].clone();
    for &i in iter {
        cone = cone.intersect(&fan.max_cones[i]);
    }
    cone
}

/// Build the graded complex at multidegree `mu`. Hilbert mode builds all
/// cochain degrees; paper-list mode builds the final two (the chart
/// presentations are given for rays and the torus only).
pub fn graded_cech_complex(
    fan: &Fan,
    j: usize,
    mu: &[BigInt],
    mode: GeneratorMode,
) -> Result<GradedCechComplex> {
    validate_fan(fan)?;
    if !is_complete(fan) {
        return Err(Error::NotComplete);
    }
    if fan.dim > 3 {
        return Err(Error::DimensionUnsupported(fan.dim));
    }
    if mu.len() != fan.dim {
        return Err(Error::DimensionMismatch(format!(
            "multidegree has length {}, expected {}",
            mu.len(),
            fan.dim
        )));
    }
    let m = fan.max_cones.len();
    let degrees: Vec<usize> = match mode {
        GeneratorMode::Hilbert => (0..m).collect(),
        GeneratorMode::PaperList => (m.saturating_sub(2)..m).collect(),
    };
    let mut cells = Vec::new();
    let mut slices = Vec::new();
    let mut warnings = Vec::new();
    for &p in &degrees {
        let mut level_cells = Vec::new();
        let mut level_slices = Vec::new();
        for tuple in k_subsets(m, p + 1) {
            let cone = intersection_cone(fan, &tuple);
            let module = chart_module(fan, &cone, j, mode)?;
            let slice = graded_slice(&module, mu);
            warnings.extend(slice.warnings.iter().cloned());
            level_cells.push(tuple);
            level_slices.push(slice);
        }
        cells.push(level_cells);
        slices.push(level_slices);
    }
    // differentials between consecutive built degrees
    let mut differentials = Vec::new();
    for li in 0..degrees.len().saturating_sub(1) {
        let dims_src: Vec<usize> = slices[li].iter().map(|s| s.basis.len()).collect();
        let dims_dst: Vec<usize> = slices[li + 1].iter().map(|s| s.basis.len()).collect();
        let off = |dims: &[usize], i: usize| dims[..i].iter().sum::<usize>();
        let total_src: usize = dims_src.iter().sum();
        let total_dst: usize = dims_dst.iter().sum();
        let mut d = QMatrix::zeros(total_dst, total_src);
        for (ti, target_tuple) in cells[li + 1].iter().enumerate() {
            let target = &slices[li + 1][ti];
            let target_mat = QMatrix::from_columns(
                k_subsets(fan.dim, j).len(),
                &target.basis,
            );
            for jj in 0..target_tuple.len() {
                let mut face = target_tuple.clone();
                face.remove(jj);
                let si = cells[li]
                    .iter()
                    .position(|t| *t == face)
                    .ok_or_else(|| Error::Internal("face term missing".into()))?;
                let sign = if jj % 2 == 0 { 1i64 } else { -1 };
                for (bc, vec) in slices[li][si].basis.iter().enumerate() {
                    // the restriction is the identity on ambient coordinates;
                    // express the source vector in the target basis
                    let coords = target_mat.solve(vec).ok_or_else(|| {
                        Error::Internal("restriction leaves the target slice".into())
                    })?;
                    for (r, x) in coords.iter().enumerate() {
                        let t = x * BigRational::from_integer(bi(sign));
                        d[(off(&dims_dst, ti) + r, off(&dims_src, si) + bc)] += t;
                    }
                }
            }
        }
        differentials.push(d);
    }
    for w in differentials.windows(2) {
        assert!(w[1].matmul(&w[0]).is_zero(), "graded differential does not square to zero");
    }
    Ok(GradedCechComplex {
        form_degree: j,
        multidegree: mu.to_vec(),
        mode,
        degrees,
        cells,
        slices,
        differentials,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessVerdict {
    InImage,
    NonzeroClass,
}

/// Exact solvability of d(xi) = class over the penultimate term. The class
/// is given in the ambient log coordinates of the top term.
pub fn top_cokernel_witness(
    complex: &GradedCechComplex,
    class: &[BigRational],
) -> Result<WitnessVerdict> {
    let top = complex.top_slice();
    let ambient = k_subsets(complex.multidegree.len(), complex.form_degree).len();
    if class.len() != ambient {
        return Err(Error::DimensionMismatch(format!(
            "class vector has length {}, expected {}",
            class.len(),
            ambient
        )));
    }
    let top_mat = QMatrix::from_columns(ambient, &top.basis);
    let coords = top_mat.solve(class).ok_or(Error::WitnessOutsideSlice)?;
    let d = complex
        .differentials
        .last()
        .ok_or_else(|| Error::Internal("complex has no differential".into()))?;
    match d.solve(&coords) {
        Some(_) => Ok(WitnessVerdict::InImage),
        None => Ok(WitnessVerdict::NonzeroClass),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_projective_space_fan, make_wps_fan};
    use crate::mat::rat;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    fn p1124() -> Fan {
        make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap().fan
    }

    #[test]
    fn paper_chart_m1_wedges() {
        let fan = p1124();
        let m1 = chart_module(&fan, &Cone::new(vec![0]), 2, GeneratorMode::PaperList).unwrap();
        // ring k[x, y^{pm}, z^{pm}]; wedge basis dx^dy, dx^dz, dy^dz
        assert_eq!(m1.ring_generators.len(), 5);
        assert_eq!(m1.wedge_generators.len(), 3);
        assert_eq!(m1.wedge_generators[0], vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
    }

    #[test]
    fn paper_chart_m4_five_differentials() {
        let fan = p1124();
        let m4 = chart_module(&fan, &Cone::new(vec![3]), 2, GeneratorMode::PaperList).unwrap();
        assert_eq!(m4.ring_generators.len(), 5);
        assert_eq!(m4.wedge_generators.len(), 10);
    }

    #[test]
    fn paper_chart_torus() {
        let fan = p1124();
        let m = chart_module(&fan, &Cone::zero(), 2, GeneratorMode::PaperList).unwrap();
        assert_eq!(m.ring_generators.len(), 6);
        assert_eq!(m.wedge_generators.len(), 3);
    }

    #[test]
    fn dimension_above_three_rejected() {
        let p4 = make_projective_space_fan(4);
        assert!(matches!(
            chart_module(&p4, &Cone::zero(), 2, GeneratorMode::Hilbert),
            Err(Error::DimensionUnsupported(4))
        ));
        let mu: Vec<BigInt> = (0..4).map(|_| bi(0)).collect();
        assert!(matches!(
            graded_cech_complex(&p4, 2, &mu, GeneratorMode::Hilbert),
            Err(Error::DimensionUnsupported(4))
        ));
    }

    #[test]
    fn unknown_chart_errors() {
        let p3 = make_projective_space_fan(3);
        // the anticanonical ray of projective 3-space has no catalogued list
        let err = chart_module(&p3, &Cone::new(vec![3]), 2, GeneratorMode::PaperList);
        assert!(matches!(err, Err(Error::UnknownPaperChart(_))));
    }

    #[test]
    fn slice_of_m1_is_one_dimensional() {
        let fan = p1124();
        let m1 = chart_module(&fan, &Cone::new(vec![0]), 2, GeneratorMode::PaperList).unwrap();
        let slice = graded_slice(&m1, &v(&[0, 0, -1]));
        assert_eq!(slice.basis.len(), 1);
        // spanned by dlog y ^ dlog z
        assert_eq!(slice.basis[0], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn log_coefficients_match_direct_expansion() {
        let fan = p1124();
        let m4 = chart_module(&fan, &Cone::new(vec![3]), 2, GeneratorMode::PaperList).unwrap();
        // d(x^{-1}) ^ d(y^{-1}) = (1/x^2y^2) dx^dy = x^0y^0z^0 dlogx^dlogy
        let w_ab = vec![v(&[-1, 0, 0]), v(&[0, -1, 0])];
        assert_eq!(m4.wedge_coefficients(&w_ab), v(&[1, 0, 0]));
        assert_eq!(m4.wedge_degree(&w_ab), v(&[-1, -1, 0]));
        // d(x^{-4}z) ^ d(y^{-1}): dx^dy coefficient 4z/(x^5 y^2), and the
        // dy^dz component x^{-4}y^{-2} appears as +1 on dlog y^dlog z
        let w_eb = vec![v(&[-4, 0, 1]), v(&[0, -1, 0])];
        assert_eq!(m4.wedge_coefficients(&w_eb), v(&[4, 0, 1]));
        assert_eq!(m4.wedge_degree(&w_eb), v(&[-4, -1, 1]));
    }

    #[test]
    fn p1124_complex_shape_at_witness_degree() {
        let fan = p1124();
        let cx = graded_cech_complex(&fan, 2, &v(&[0, 0, -1]), GeneratorMode::PaperList).unwrap();
        assert_eq!(cx.degrees, vec![2, 3]);
        assert_eq!(cx.cells[0].len(), 4);
        assert_eq!(cx.slices[1][0].basis.len(), 3);
        // ray slices: M1 and M2 contribute a line each, M3 and M4 nothing
        let dims: Vec<usize> = cx.slices[0].iter().map(|s| s.basis.len()).collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn witness_is_nonzero_for_p1124_and_in_image_for_p3() {
        let fan = p1124();
        let cx = graded_cech_complex(&fan, 2, &v(&[0, 0, -1]), GeneratorMode::PaperList).unwrap();
        let class = vec![rat(1), rat(0), rat(0)];
        assert_eq!(top_cokernel_witness(&cx, &class).unwrap(), WitnessVerdict::NonzeroClass);

        // control: the smooth projective space, full chart semigroups
        let p3 = make_projective_space_fan(3);
        let cx = graded_cech_complex(&p3, 2, &v(&[0, 0, -1]), GeneratorMode::Hilbert).unwrap();
        assert_eq!(top_cokernel_witness(&cx, &class).unwrap(), WitnessVerdict::InImage);

        // the zero class is trivially a boundary
        let zero = vec![rat(0), rat(0), rat(0)];
        let cx = graded_cech_complex(&fan, 2, &v(&[0, 0, -1]), GeneratorMode::PaperList).unwrap();
        assert_eq!(top_cokernel_witness(&cx, &zero).unwrap(), WitnessVerdict::InImage);
    }

    #[test]
    fn hilbert_mode_answers_the_open_generator_question() {
        // with full chart semigroups the witness class becomes a boundary:
        // the listed generators of the fourth chart span a strictly smaller
        // module, and that difference carries the obstruction
        let fan = p1124();
        let cx = graded_cech_complex(&fan, 2, &v(&[0, 0, -1]), GeneratorMode::Hilbert).unwrap();
        let class = vec![rat(1), rat(0), rat(0)];
        assert_eq!(top_cokernel_witness(&cx, &class).unwrap(), WitnessVerdict::InImage);
    }

    #[test]
    fn hilbert_slices_contain_paper_slices() {
        let fan = p1124();
        let mu = v(&[0, 0, -1]);
        for cone in [Cone::new(vec![0]), Cone::new(vec![1]), Cone::new(vec![3]), Cone::zero()] {
            let paper = chart_module(&fan, &cone, 2, GeneratorMode::PaperList).unwrap();
            let hilbert = chart_module(&fan, &cone, 2, GeneratorMode::Hilbert).unwrap();
            let ps = graded_slice(&paper, &mu);
            let hs = graded_slice(&hilbert, &mu);
            let ambient = 3;
            let hmat = QMatrix::from_columns(ambient, &hs.basis);
            for vec in &ps.basis {
                assert!(hmat.solve(vec).is_some(), "paper slice escapes hilbert slice");
            }
        }
    }

    #[test]
    fn search_bound_truncation_is_reported() {
        // the cheapest expression of (-102, 0, 0) over the five listed
        // generators has coefficient sum 52, past the budget, and the point
        // is inside the rational cone: the search is inconclusive and flagged
        let fan = p1124();
        let m4 = chart_module(&fan, &Cone::new(vec![3]), 2, GeneratorMode::PaperList).unwrap();
        let slice = graded_slice(&m4, &v(&[-103, -1, 0]));
        assert!(!slice.warnings.is_empty());
    }

    #[test]
    fn degree_zero_constants() {
        let fan = p1124();
        let cx = graded_cech_complex(&fan, 0, &v(&[0, 0, 0]), GeneratorMode::Hilbert).unwrap();
        // every chart contains the constants: all terms have one basis vector
        // per cell and the complex is the simplicial cochain complex of a
        // simplex, so the top cohomology vanishes
        let class = vec![rat(1)];
        assert_eq!(top_cokernel_witness(&cx, &class).unwrap(), WitnessVerdict::InImage);
        assert_eq!(cx.term_dim(0), 4);
    }
}
