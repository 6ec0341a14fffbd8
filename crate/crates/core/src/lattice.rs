//! Lattice-level operations built on the Smith normal form: saturations,
//! quotient presentations Z^d ->> Z^(d-p), induced maps between quotients,
//! and isogeny degrees.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::IntMatrix;
use crate::snf::snf;

/// A basis of the saturation { v in Z^d : k*v in colspan_Z(B) for some k >= 1 }.
///
/// With U*B*V = D, the column span of B is U^{-1} * colspan(D), so the
/// saturation is spanned by the first rank(B) columns of U^{-1}.
pub fn saturate(b: &IntMatrix) -> IntMatrix {
    let dec = snf(b);
    let r = dec.rank();
    let rows: Vec<usize> = (0..b.rows()).collect();
    let cols: Vec<usize> = (0..r).collect();
    dec.u_inv().submatrix(&rows, &cols)
}

/// A presentation of the quotient Z^d / sat(colspan B): a saturated basis of
/// the sublattice together with a surjection onto Z^(d-p) whose kernel is
/// exactly that saturation.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub ambient_rank: usize,
    pub sublattice_basis: IntMatrix,
    pub projection: IntMatrix,
}

impl QuotientPresentation {
    pub fn quotient_rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn sublattice_rank(&self) -> usize {
        self.sublattice_basis.cols()
    }

    /// Image of an ambient vector in the quotient coordinates.
    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.projection.apply(v)
    }

    /// Whether an ambient vector lies in the saturated sublattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.project(v).iter().all(|x| x.is_zero())
    }
}

/// Quotient presentation of Z^ambient by the saturation of colspan(B).
pub fn quotient_presentation(b: &IntMatrix, ambient_rank: usize) -> QuotientPresentation {
    assert_eq!(b.rows(), ambient_rank, "generators must live in Z^ambient");
    if b.cols() == 0 {
        return QuotientPresentation {
            ambient_rank,
            sublattice_basis: IntMatrix::zeros(ambient_rank, 0),
            projection: IntMatrix::identity(ambient_rank),
        };
    }
    let dec = snf(b);
    let r = dec.rank();
    let all_rows: Vec<usize> = (0..ambient_rank).collect();
    let sat_cols: Vec<usize> = (0..r).collect();
    let proj_rows: Vec<usize> = (r..ambient_rank).collect();
    let all_cols: Vec<usize> = (0..ambient_rank).collect();
    QuotientPresentation {
        ambient_rank,
        sublattice_basis: dec.u_inv().submatrix(&all_rows, &sat_cols),
        projection: dec.u.submatrix(&proj_rows, &all_cols),
    }
}

/// A homomorphism of free lattices, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub domain_rank: usize,
    pub codomain_rank: usize,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix) -> Self {
        let domain_rank = matrix.cols();
        let codomain_rank = matrix.rows();
        LatticeMap { matrix, domain_rank, codomain_rank }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(IntMatrix::identity(n))
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply(v)
    }
}

/// Basis of the integer kernel of A (a saturated sublattice of Z^cols):
/// the last cols - rank columns of V from U*A*V = D.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let dec = snf(a);
    let r = dec.rank();
    let rows: Vec<usize> = (0..a.cols()).collect();
    let cols: Vec<usize> = (r..a.cols()).collect();
    dec.v.submatrix(&rows, &cols)
}

/// Integral right inverse of a surjective matrix P (P*R = I), chosen
/// deterministically from the Smith factors of P.
pub fn right_inverse(p: &IntMatrix) -> Option<IntMatrix> {
    if p.rows() == 0 {
        return Some(IntMatrix::zeros(p.cols(), 0));
    }
    let dec = snf(p);
    if dec.rank() != p.rows() || dec.invariant_factors().iter().any(|f| !f.is_one()) {
        return None;
    }
    let embed = IntMatrix::from_fn(p.cols(), p.rows(), |i, j| {
        if i == j {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    Some(dec.v.matmul(&embed).matmul(&dec.u))
}

/// The unique map on quotients making the square with the two projections
/// commute, provided `l` carries the source sublattice into the target one.
pub fn induced_quotient_map(
    l: &LatticeMap,
    src: &QuotientPresentation,
    dst: &QuotientPresentation,
) -> Result<LatticeMap> {
    if l.domain_rank != src.ambient_rank || l.codomain_rank != dst.ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} but quotients have ambient ranks {} -> {}",
            l.codomain_rank, l.domain_rank, src.ambient_rank, dst.ambient_rank
        )));
    }
    for j in 0..src.sublattice_basis.cols() {
        let image = l.matrix.apply(&src.sublattice_basis.column(j));
        if !dst.contains(&image) {
            return Err(Error::IncompatibleSublattices);
        }
    }
    let r = right_inverse(&src.projection)
        .ok_or_else(|| Error::Internal("projection is not surjective".into()))?;
    let induced = dst.projection.matmul(&l.matrix).matmul(&r);
    Ok(LatticeMap::new(induced))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsogenyDegree {
    Degree(BigInt),
    NotIsogeny,
}

/// For a square map: |coker| = product of invariant factors when injective.
pub fn isogeny_degree(l: &LatticeMap) -> Result<IsogenyDegree> {
    if l.domain_rank != l.codomain_rank {
        return Err(Error::RankMismatch { domain: l.domain_rank, codomain: l.codomain_rank });
    }
    let det = l.matrix.det();
    if det.is_zero() {
        return Ok(IsogenyDegree::NotIsogeny);
    }
    Ok(IsogenyDegree::Degree(det.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::bi;

    fn colspan_contains(basis: &IntMatrix, v: &[BigInt]) -> bool {
        let rhs: Vec<_> = v.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect();
        match basis.to_q().solve(&rhs) {
            Some(sol) => sol.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    #[test]
    fn saturate_doubled_vector() {
        let b = IntMatrix::from_rows(&[vec![2], vec![0]]);
        let s = saturate(&b);
        assert_eq!(s.cols(), 1);
        assert!(colspan_contains(&s, &[bi(1), bi(0)]));
    }

    #[test]
    fn saturate_plane_z_eq_2y() {
        let b = IntMatrix::from_rows(&[vec![1, -1], vec![0, -2], vec![0, -4]]);
        let s = saturate(&b);
        assert_eq!(s.cols(), 2);
        // saturation is the lattice { (x, y, 2y) }
        assert!(colspan_contains(&s, &[bi(1), bi(0), bi(0)]));
        assert!(colspan_contains(&s, &[bi(0), bi(1), bi(2)]));
        for j in 0..s.cols() {
            let c = s.column(j);
            assert_eq!(c[2], &c[1] * bi(2));
        }
    }

    #[test]
    fn saturate_already_saturated() {
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let s = saturate(&b);
        assert!(colspan_contains(&s, &[bi(1), bi(0), bi(0)]));
        assert!(colspan_contains(&s, &[bi(0), bi(1), bi(0)]));
        assert_eq!(s.cols(), 2);
    }

    #[test]
    fn quotient_by_coordinate_plane() {
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let q = quotient_presentation(&b, 3);
        assert_eq!(q.quotient_rank(), 1);
        assert!(q.projection.matmul(&b).is_zero());
        // surjectivity: cokernel of the projection is trivial
        assert_eq!(crate::snf::cokernel_structure(&q.projection), (0, vec![]));
    }

    #[test]
    fn quotient_by_singular_cone_span() {
        let b = IntMatrix::from_rows(&[vec![1, -1], vec![0, -2], vec![0, -4]]);
        let q = quotient_presentation(&b, 3);
        assert_eq!(q.quotient_rank(), 1);
        assert!(q.projection.matmul(&b).is_zero());
        // proportional to (0, -2, 1)
        let p = q.projection;
        assert!(p[(0, 0)].is_zero());
        assert_eq!(p[(0, 1)].clone() * bi(1), &p[(0, 2)] * bi(-2));
        assert_eq!(crate::snf::cokernel_structure(&p), (0, vec![]));
    }

    #[test]
    fn quotient_full_rank_is_trivial() {
        let b = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let q = quotient_presentation(&b, 2);
        assert_eq!(q.quotient_rank(), 0);
        assert_eq!(q.projection.rows(), 0);
    }

    #[test]
    fn induced_map_trivial_quotients() {
        let q0 = quotient_presentation(&IntMatrix::zeros(2, 0), 2);
        let id = LatticeMap::identity(2);
        let ind = induced_quotient_map(&id, &q0, &q0).unwrap();
        assert!(ind.matrix.is_identity());

        let f = LatticeMap::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]));
        let ind = induced_quotient_map(&f, &q0, &q0).unwrap();
        assert_eq!(ind.matrix, IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]));
    }

    #[test]
    fn induced_map_to_rank_zero() {
        // quotient by {0} mapping onto quotient by the full lattice
        let src = quotient_presentation(&IntMatrix::from_rows(&[vec![1], vec![0]]), 2);
        let dst = quotient_presentation(&IntMatrix::identity(2), 2);
        let ind = induced_quotient_map(&LatticeMap::identity(2), &src, &dst).unwrap();
        assert_eq!(ind.matrix.rows(), 0);
        assert_eq!(ind.matrix.cols(), 1);
    }

    #[test]
    fn induced_map_incompatible() {
        // the x-axis does not map into the y-axis under the identity
        let src = quotient_presentation(&IntMatrix::from_rows(&[vec![1], vec![0]]), 2);
        let dst = quotient_presentation(&IntMatrix::from_rows(&[vec![0], vec![1]]), 2);
        let err = induced_quotient_map(&LatticeMap::identity(2), &src, &dst);
        assert!(matches!(err, Err(Error::IncompatibleSublattices)));
    }

    #[test]
    fn commuting_square() {
        // result * P_src == P_dst * L when L respects the sublattices
        let src = quotient_presentation(&IntMatrix::from_rows(&[vec![1], vec![0], vec![0]]), 3);
        let dst = quotient_presentation(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]), 3);
        let l = LatticeMap::identity(3);
        let ind = induced_quotient_map(&l, &src, &dst).unwrap();
        assert_eq!(ind.matrix.matmul(&src.projection), dst.projection.matmul(&l.matrix));
    }

    #[test]
    fn isogeny_degrees() {
        assert_eq!(
            isogeny_degree(&LatticeMap::identity(2)).unwrap(),
            IsogenyDegree::Degree(bi(1))
        );
        let d23 = LatticeMap::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(isogeny_degree(&d23).unwrap(), IsogenyDegree::Degree(bi(6)));
        let sing = LatticeMap::new(IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(isogeny_degree(&sing).unwrap(), IsogenyDegree::NotIsogeny);
        let rect = LatticeMap::new(IntMatrix::zeros(2, 3));
        assert!(matches!(isogeny_degree(&rect), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn kernel_lattice_of_projection() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = kernel_lattice(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.matmul(&k).is_zero());
    }

    #[test]
    fn right_inverse_of_surjection() {
        let p = IntMatrix::from_rows(&[vec![0, -2, 1]]);
        let r = right_inverse(&p).unwrap();
        assert!(p.matmul(&r).is_identity());
        assert!(right_inverse(&IntMatrix::from_rows(&[vec![2, 0]])).is_none());
    }
}
