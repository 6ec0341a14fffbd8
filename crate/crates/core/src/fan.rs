//! Complete simplicial fans: construction (projective spaces, weighted
//! projective spaces), validation, smoothness and completeness tests,
//! singular loci, star subdivision, star fans, and the 2d cone normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::error::{Error as CrateError, Result};
use crate::feas::{feasible, Ineq};
use crate::mat::{bi, gcd_all, is_primitive, primitivize, IntMatrix};
use crate::snf::snf;

/// A cone of a fan, referenced by indices into the fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        Cone { ray_indices }
    }

    pub fn zero() -> Self {
        Cone { ray_indices: Vec::new() }
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn dim(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.ray_indices.is_empty()
    }

    /// Intersection as the cone on the common rays (valid in a fan).
    pub fn intersect(&self, other: &Cone) -> Cone {
        let set: BTreeSet<usize> = other.ray_indices.iter().copied().collect();
        Cone::new(
            self.ray_indices
                .iter()
                .copied()
                .filter(|i| set.contains(i))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Cone>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanViolation {
    #[error("ray {index} is the zero vector")]
    ZeroRay { index: usize },
    #[error("ray {index} = {ray:?} is not primitive")]
    NonPrimitiveRay { index: usize, ray: Vec<BigInt> },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("ray has wrong dimension at index {index}")]
    WrongRayDimension { index: usize },
    #[error("cone {cone:?} references ray index {index} out of range")]
    BadRayIndex { cone: Vec<usize>, index: usize },
    #[error("cone {cone:?} repeats a ray index")]
    RepeatedRayIndex { cone: Vec<usize> },
    #[error("maximal cone {cone:?} has {found} rays, expected {expected}")]
    WrongConeDimension { cone: Vec<usize>, expected: usize, found: usize },
    #[error("cone {cone:?} is not simplicial: its rays are linearly dependent")]
    NonSimplicialCone { cone: Vec<usize> },
    #[error("maximal cones {first:?} and {second:?} coincide")]
    DuplicateMaxCone { first: Vec<usize>, second: Vec<usize> },
    #[error("cones {first:?} and {second:?} do not intersect in a common face{}",
        witness.as_ref().map(|w| format!(" (witness point {:?})", w)).unwrap_or_default())]
    IntersectionNotFace {
        first: Vec<usize>,
        second: Vec<usize>,
        witness: Option<Vec<BigInt>>,
    },
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Cone>) -> Self {
        Fan { dim, rays, max_cones }
    }

    /// d x k matrix whose columns are the cone's rays.
    pub fn ray_matrix(&self, cone: &Cone) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = cone
            .ray_indices()
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect();
        IntMatrix::from_columns(self.dim, &cols)
    }

    pub fn ray_index(&self, ray: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == ray)
    }

    /// All distinct nonzero faces of maximal cones, ordered by (dim, indices).
    pub fn all_faces(&self) -> Vec<Cone> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.max_cones {
            let idx = c.ray_indices();
            for mask in 1u32..(1u32 << idx.len()) {
                let subset: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| mask & (1 << pos) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                set.insert(subset);
            }
        }
        let mut faces: Vec<Cone> = set.into_iter().map(Cone::new).collect();
        faces.sort_by_key(|c| (c.dim(), c.ray_indices().to_vec()));
        faces
    }

    /// Exact test: does the cone contain the rational point?
    pub fn cone_contains(&self, cone: &Cone, point: &[BigRational]) -> bool {
        if cone.is_zero() {
            return point.iter().all(|x| x.is_zero());
        }
        let b = self.ray_matrix(cone).to_q();
        match b.solve(point) {
            Some(coeffs) => {
                // unique since the columns are independent; residual must vanish
                let image = b.apply(&coeffs);
                image
                    .iter()
                    .zip(point)
                    .all(|(a, b)| a == b)
                    && coeffs.iter().all(|c| !c.is_negative())
            }
            None => false,
        }
    }

    pub fn support_contains(&self, point: &[BigRational]) -> bool {
        self.max_cones.iter().any(|c| self.cone_contains(c, point))
    }
}

/// The fan of projective d-space: rays e_1..e_d and -(e_1+...+e_d), maximal
/// cones all d-subsets.
pub fn make_projective_space_fan(dim: usize) -> Fan {
    assert!(dim >= 1);
    let mut rays: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    rays.push(vec![-BigInt::one(); dim]);
    let max_cones = d_subsets(dim + 1, dim).into_iter().map(Cone::new).collect();
    Fan::new(dim, rays, max_cones)
}

fn d_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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

pub struct WpsFan {
    pub fan: Fan,
    pub weights: Vec<BigInt>,
    pub warnings: Vec<String>,
}

/// Fan of the weighted projective space P(q_0,...,q_d).
///
/// For q_0 = 1 the rays are e_1,...,e_d and -(q_1 e_1 + ... + q_d e_d), the
/// ray carrying weight q_0 listed last. Otherwise the rays are the
/// primitivized images of the standard basis of Z^(d+1) under a deterministic
/// identification of Z^(d+1)/Z*q with Z^d, listed in weight order. Maximal
/// cones are all d-subsets, enumerated lexicographically.
pub fn make_wps_fan(weights: &[BigInt]) -> Result<WpsFan> {
    let d = weights.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        CrateError::InvalidWeights("need at least two weights".into())
    })?;
    if weights.iter().any(|q| !q.is_positive()) {
        return Err(CrateError::InvalidWeights("all weights must be positive".into()));
    }
    if !gcd_all(weights).is_one() {
        return Err(CrateError::InvalidWeights("weights must have gcd 1".into()));
    }
    let mut warnings = Vec::new();
    for omit in 0..weights.len() {
        let rest: Vec<BigInt> = weights
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != omit)
            .map(|(_, q)| q.clone())
            .collect();
        let g = gcd_all(&rest);
        if !g.is_one() {
            warnings.push(format!(
                "weights are not well-formed: omitting q_{} leaves gcd {}",
                omit, g
            ));
        }
    }
    let rays: Vec<Vec<BigInt>> = if weights[0].is_one() {
        let mut rays: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let last: Vec<BigInt> = (0..d).map(|j| -weights[j + 1].clone()).collect();
        rays.push(primitivize(&last));
        rays
    } else {
        // quotient Z^(d+1) by the weight vector, rays in weight order
        let col = IntMatrix::from_columns(d + 1, &[weights.to_vec()]);
        let q = crate::lattice::quotient_presentation(&col, d + 1);
        (0..=d)
            .map(|i| {
                let e: Vec<BigInt> = (0..=d)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect();
                primitivize(&q.project(&e))
            })
            .collect()
    };
    let max_cones: Vec<Cone> = d_subsets(d + 1, d).into_iter().map(Cone::new).collect();
    let fan = Fan::new(d, rays, max_cones);
    validate_fan(&fan)?;
    Ok(WpsFan { fan, weights: weights.to_vec(), warnings })
}

/// Search for a vector w with w.r = 0 on `zero`, w.r > 0 on `pos`, w.r < 0 on
/// `neg`; such a w separates two cones along their common face.
fn separation_exists(
    dim: usize,
    zero: &[&Vec<BigInt>],
    pos: &[&Vec<BigInt>],
    neg: &[&Vec<BigInt>],
) -> bool {
    let mut system: Vec<Ineq> = Vec::new();
    let row = |r: &Vec<BigInt>, sign: i64| -> Vec<BigRational> {
        r.iter().map(|x| BigRational::from_integer(x * bi(sign))).collect()
    };
    for r in zero {
        system.push(Ineq::ge(row(r, 1), BigRational::zero()));
        system.push(Ineq::ge(row(r, -1), BigRational::zero()));
    }
    for r in pos {
        system.push(Ineq::gt(row(r, 1), BigRational::zero()));
    }
    for r in neg {
        system.push(Ineq::gt(row(r, -1), BigRational::zero()));
    }
    feasible(system, dim)
}

/// Check all fan axioms; returns the first violation found.
pub fn validate_fan(fan: &Fan) -> std::result::Result<(), FanViolation> {
    let d = fan.dim;
    for (i, ray) in fan.rays.iter().enumerate() {
        if ray.len() != d {
            return Err(FanViolation::WrongRayDimension { index: i });
        }
        if ray.iter().all(|x| x.is_zero()) {
            return Err(FanViolation::ZeroRay { index: i });
        }
        if !is_primitive(ray) {
            return Err(FanViolation::NonPrimitiveRay { index: i, ray: ray.clone() });
        }
        for (j, other) in fan.rays.iter().enumerate().take(i) {
            if ray == other {
                return Err(FanViolation::DuplicateRay { first: j, second: i });
            }
        }
    }
    for cone in &fan.max_cones {
        let idx = cone.ray_indices();
        for &i in idx {
            if i >= fan.rays.len() {
                return Err(FanViolation::BadRayIndex { cone: idx.to_vec(), index: i });
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(FanViolation::RepeatedRayIndex { cone: idx.to_vec() });
        }
        if idx.len() != d {
            return Err(FanViolation::WrongConeDimension {
                cone: idx.to_vec(),
                expected: d,
                found: idx.len(),
            });
        }
        if fan.ray_matrix(cone).rank() != idx.len() {
            return Err(FanViolation::NonSimplicialCone { cone: idx.to_vec() });
        }
    }
    for (a, ca) in fan.max_cones.iter().enumerate() {
        for cb in fan.max_cones.iter().take(a) {
            if ca.ray_indices() == cb.ray_indices() {
                return Err(FanViolation::DuplicateMaxCone {
                    first: cb.ray_indices().to_vec(),
                    second: ca.ray_indices().to_vec(),
                });
            }
        }
    }
    for (a, ca) in fan.max_cones.iter().enumerate() {
        for cb in fan.max_cones.iter().take(a) {
            let common = ca.intersect(cb);
            let common_set: BTreeSet<usize> = common.ray_indices().iter().copied().collect();
            let zero: Vec<&Vec<BigInt>> =
                common.ray_indices().iter().map(|&i| &fan.rays[i]).collect();
            let pos: Vec<&Vec<BigInt>> = ca
                .ray_indices()
                .iter()
                .filter(|i| !common_set.contains(i))
                .map(|&i| &fan.rays[i])
                .collect();
            let neg: Vec<&Vec<BigInt>> = cb
                .ray_indices()
                .iter()
                .filter(|i| !common_set.contains(i))
                .map(|&i| &fan.rays[i])
                .collect();
            if !separation_exists(d, &zero, &pos, &neg) {
                // try to exhibit a ray of one cone interior to the other
                let mut witness = None;
                for (rays, other) in [(&pos, cb), (&neg, ca)] {
                    for r in rays.iter() {
                        let pt: Vec<BigRational> =
                            r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
                        if fan.cone_contains(other, &pt) {
                            witness = Some((*r).clone());
                            break;
                        }
                    }
                    if witness.is_some() {
                        break;
                    }
                }
                return Err(FanViolation::IntersectionNotFace {
                    first: cb.ray_indices().to_vec(),
                    second: ca.ray_indices().to_vec(),
                    witness,
                });
            }
        }
    }
    Ok(())
}

/// True iff the cone's ray matrix has all Smith invariant factors 1, i.e. its
/// rays extend to a lattice basis.
pub fn is_smooth_cone(fan: &Fan, cone: &Cone) -> bool {
    if cone.is_zero() {
        return true;
    }
    let m = fan.ray_matrix(cone);
    let dec = snf(&m);
    dec.rank() == cone.dim() && dec.invariant_factors().iter().all(|f| f.is_one())
}

#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub complete: bool,
    /// walls (as sorted ray-index sets) adjacent to a number of maximal cones
    /// other than two
    pub bad_walls: Vec<(Vec<usize>, usize)>,
    pub connected: bool,
}

/// Wall criterion: every (d-1)-face of a maximal cone borders exactly two
/// maximal cones and the adjacency graph is connected.
pub fn completeness_report(fan: &Fan) -> CompletenessReport {
    if fan.max_cones.is_empty() {
        return CompletenessReport { complete: false, bad_walls: Vec::new(), connected: false };
    }
    let mut wall_cones: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        let idx = cone.ray_indices();
        for omit in 0..idx.len() {
            let mut wall = idx.to_vec();
            wall.remove(omit);
            wall_cones.entry(wall).or_default().push(ci);
        }
    }
    let bad_walls: Vec<(Vec<usize>, usize)> = wall_cones
        .iter()
        .filter(|(_, cones)| cones.len() != 2)
        .map(|(w, cones)| (w.clone(), cones.len()))
        .collect();
    // adjacency across shared walls
    let n = fan.max_cones.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for cones in wall_cones.values() {
            if cones.contains(&c) {
                for &o in cones {
                    if !seen[o] {
                        seen[o] = true;
                        stack.push(o);
                    }
                }
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    CompletenessReport { complete: bad_walls.is_empty() && connected, bad_walls, connected }
}

pub fn is_complete(fan: &Fan) -> bool {
    completeness_report(fan).complete
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub singular_cones: Vec<Cone>,
    /// -1 when smooth, otherwise dim - min dim of a singular cone
    pub singular_locus_dim: i64,
}

pub fn singular_locus(fan: &Fan) -> SingularityReport {
    let singular_cones: Vec<Cone> = fan
        .all_faces()
        .into_iter()
        .filter(|c| !is_smooth_cone(fan, c))
        .collect();
    let singular_locus_dim = match singular_cones.iter().map(|c| c.dim()).min() {
        Some(min_dim) => fan.dim as i64 - min_dim as i64,
        None => -1,
    };
    SingularityReport { singular_cones, singular_locus_dim }
}

/// Star subdivision at a new ray: every maximal cone containing the ray is
/// replaced by the cones it spans with the facets not containing the ray.
pub fn star_subdivision(fan: &Fan, new_ray: &[BigInt]) -> Result<Fan> {
    if !is_primitive(new_ray) {
        return Err(CrateError::NotPrimitive(new_ray.to_vec()));
    }
    if fan.ray_index(new_ray).is_some() {
        return Err(CrateError::DuplicateRay(new_ray.to_vec()));
    }
    let pt: Vec<BigRational> =
        new_ray.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    if !fan.support_contains(&pt) {
        return Err(CrateError::RayOutsideSupport(new_ray.to_vec()));
    }
    let mut rays = fan.rays.clone();
    rays.push(new_ray.to_vec());
    let new_index = rays.len() - 1;
    let mut max_cones = Vec::new();
    for cone in &fan.max_cones {
        if !fan.cone_contains(cone, &pt) {
            max_cones.push(cone.clone());
            continue;
        }
        let idx = cone.ray_indices();
        for omit in 0..idx.len() {
            let mut facet = idx.to_vec();
            facet.remove(omit);
            let facet_cone = Cone::new(facet.clone());
            if fan.cone_contains(&facet_cone, &pt) {
                continue;
            }
            let mut gens = facet;
            gens.push(new_index);
            max_cones.push(Cone::new(gens));
        }
    }
    let out = Fan::new(fan.dim, rays, max_cones);
    validate_fan(&out)?;
    Ok(out)
}

/// The fan of images, in Z^d/(Z*ray), of the cones containing the ray.
pub fn star_fan_of_ray(fan: &Fan, ray: &[BigInt]) -> Result<Fan> {
    let Some(ray_idx) = fan.ray_index(ray) else {
        return Err(CrateError::NotARay(ray.to_vec()));
    };
    let col = IntMatrix::from_columns(fan.dim, &[ray.to_vec()]);
    let q = crate::lattice::quotient_presentation(&col, fan.dim);
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut max_cones = Vec::new();
    for cone in &fan.max_cones {
        if !cone.ray_indices().contains(&ray_idx) {
            continue;
        }
        let mut image_cone = Vec::new();
        for &i in cone.ray_indices() {
            if i == ray_idx {
                continue;
            }
            let img = primitivize(&q.project(&fan.rays[i]));
            let pos = match rays.iter().position(|r| *r == img) {
                Some(p) => p,
                None => {
                    rays.push(img);
                    rays.len() - 1
                }
            };
            image_cone.push(pos);
        }
        max_cones.push(Cone::new(image_cone));
    }
    let out = Fan::new(fan.dim - 1, rays, max_cones);
    validate_fan(&out)?;
    Ok(out)
}

/// Lattice normal form (n, k) of a two-dimensional cone in Z^2: the cone is
/// equivalent to <e2, n*e1 - k*e2> with 0 <= k < n, gcd(n, k) = 1, and the
/// representative is canonical under swapping the generators.
pub fn cone_normal_form_2d(u: &[BigInt], v: &[BigInt]) -> Result<(BigInt, BigInt)> {
    if u.len() != 2 || v.len() != 2 {
        return Err(CrateError::DimensionMismatch("normal form needs vectors in Z^2".into()));
    }
    let det = &u[0] * &v[1] - &u[1] * &v[0];
    if det.is_zero() {
        return Err(CrateError::DimensionMismatch("generators are dependent".into()));
    }
    let k1 = ordered_k(u, v);
    let k2 = ordered_k(v, u);
    let n = det.abs();
    Ok((n, k1.min(k2)))
}

/// The k of the ordered pair (a, b): transform a to (0,1), b to (n, -k).
fn ordered_k(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let eg = a[0].extended_gcd(&a[1]);
    debug_assert!(eg.gcd.is_one(), "cone generators must be primitive");
    // rows (-a1, a0) and (x, y) send a to (0, 1)
    let p = -&a[1] * &b[0] + &a[0] * &b[1];
    let q = &eg.x * &b[0] + &eg.y * &b[1];
    let p = if p.is_negative() { -p } else { p };
    if p.is_one() {
        return BigInt::zero();
    }
    (-q).mod_floor(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| BigRational::from_integer(bi(x))).collect()
    }

    #[test]
    fn projective_fans() {
        let p1 = make_projective_space_fan(1);
        assert_eq!(p1.rays, vec![vec![bi(1)], vec![bi(-1)]]);
        assert_eq!(p1.max_cones.len(), 2);

        let p2 = make_projective_space_fan(2);
        assert_eq!(p2.rays[2], vec![bi(-1), bi(-1)]);
        assert_eq!(p2.max_cones.len(), 3);

        let p3 = make_projective_space_fan(3);
        assert_eq!(p3.rays.len(), 4);
        assert_eq!(p3.max_cones.len(), 4);
        assert!(validate_fan(&p3).is_ok());
    }

    #[test]
    fn wps_112_rays() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        assert_eq!(
            w.fan.rays,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)], vec![bi(-1), bi(-2)]]
        );
        assert!(w.warnings.is_empty());
    }

    #[test]
    fn wps_1124_rays() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        assert_eq!(w.fan.rays[0], vec![bi(1), bi(0), bi(0)]);
        assert_eq!(w.fan.rays[1], vec![bi(0), bi(1), bi(0)]);
        assert_eq!(w.fan.rays[2], vec![bi(0), bi(0), bi(1)]);
        assert_eq!(w.fan.rays[3], vec![bi(-1), bi(-2), bi(-4)]);
        assert!(is_complete(&w.fan));
    }

    #[test]
    fn wps_235_relation_and_completeness() {
        let w = make_wps_fan(&[bi(2), bi(3), bi(5)]).unwrap();
        let fan = &w.fan;
        assert_eq!(fan.rays.len(), 3);
        // sum of q_i * u_i = 0 (rays are already primitive here)
        let mut acc = vec![BigInt::zero(); 2];
        for (i, q) in w.weights.iter().enumerate() {
            for j in 0..2 {
                acc[j] += q * &fan.rays[i][j];
            }
        }
        assert!(acc.iter().all(|x| x.is_zero()));
        assert!(validate_fan(fan).is_ok());
        assert!(is_complete(fan));
    }

    #[test]
    fn wps_bad_weights() {
        assert!(make_wps_fan(&[bi(2), bi(4)]).is_err());
        assert!(make_wps_fan(&[bi(0), bi(1)]).is_err());
        // accepted but flagged: omitting q_1 leaves gcd 2
        let w = make_wps_fan(&[bi(2), bi(3), bi(4)]).unwrap();
        assert!(!w.warnings.is_empty());
    }

    #[test]
    fn validate_detects_overlap() {
        let fan = Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(1), bi(1)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 2]), Cone::new(vec![1, 2])],
        );
        let err = validate_fan(&fan).unwrap_err();
        match err {
            FanViolation::IntersectionNotFace { witness, .. } => {
                assert_eq!(witness, Some(vec![bi(1), bi(1)]));
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn validate_detects_non_primitive() {
        let fan = Fan::new(
            2,
            vec![vec![bi(2), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        );
        assert!(matches!(
            validate_fan(&fan),
            Err(FanViolation::NonPrimitiveRay { index: 0, .. })
        ));
    }

    #[test]
    fn smoothness_examples() {
        let p3 = make_projective_space_fan(3);
        let c = Cone::new(vec![0, 1]);
        assert!(is_smooth_cone(&p3, &c));

        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        assert!(!is_smooth_cone(&w.fan, &Cone::new(vec![0, 3])));

        let w2 = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        assert!(!is_smooth_cone(&w2.fan, &Cone::new(vec![0, 2])));
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&make_projective_space_fan(2)));
        let orthant = Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        );
        assert!(validate_fan(&orthant).is_ok());
        assert!(!is_complete(&orthant));
    }

    #[test]
    fn singular_locus_examples() {
        let p3 = make_projective_space_fan(3);
        let rep = singular_locus(&p3);
        assert_eq!(rep.singular_locus_dim, -1);
        assert!(rep.singular_cones.is_empty());

        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        let rep = singular_locus(&w.fan);
        assert_eq!(rep.singular_locus_dim, 1);
        assert!(rep.singular_cones.contains(&Cone::new(vec![0, 3])));

        let w = make_wps_fan(&[bi(1), bi(2), bi(3), bi(5)]).unwrap();
        let rep = singular_locus(&w.fan);
        assert_eq!(rep.singular_locus_dim, 0);
        assert!(rep.singular_cones.iter().all(|c| c.dim() == 3));
    }

    #[test]
    fn star_subdivision_p112() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let sub = star_subdivision(&w.fan, &[bi(0), bi(-1)]).unwrap();
        assert_eq!(sub.max_cones.len(), 4);
        assert!(is_complete(&sub));
        for cone in sub.all_faces() {
            assert!(is_smooth_cone(&sub, &cone));
        }
        // subdividing at an existing ray fails
        assert!(matches!(
            star_subdivision(&w.fan, &[bi(1), bi(0)]),
            Err(CrateError::DuplicateRay(_))
        ));
        // a ray outside the support of an incomplete fan fails
        let orthant = Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        );
        assert!(matches!(
            star_subdivision(&orthant, &[bi(-1), bi(-1)]),
            Err(CrateError::RayOutsideSupport(_))
        ));
    }

    #[test]
    fn star_subdivision_on_a_shared_wall() {
        // (1,1,0) lies in the relative interior of the face <e1,e2>, which is
        // shared by two maximal cones; both are replaced
        let p3 = make_projective_space_fan(3);
        let sub = star_subdivision(&p3, &[bi(1), bi(1), bi(0)]).unwrap();
        assert_eq!(sub.max_cones.len(), 6);
        assert!(is_complete(&sub));
        for pt in crate::sampling::sample_points(3, 200, 7) {
            assert_eq!(p3.support_contains(&pt), sub.support_contains(&pt));
        }
    }

    #[test]
    fn star_fan_examples() {
        let p2 = make_projective_space_fan(2);
        let star = star_fan_of_ray(&p2, &[bi(1), bi(0)]).unwrap();
        assert_eq!(star.dim, 1);
        assert_eq!(star.rays.len(), 2);
        assert!(is_complete(&star));
        // two opposite rays
        assert_eq!(star.rays[0], vec![-star.rays[1][0].clone()]);

        let orthant = Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        );
        let half = star_fan_of_ray(&orthant, &[bi(1), bi(0)]).unwrap();
        assert_eq!(half.max_cones.len(), 1);
        assert!(!is_complete(&half));

        assert!(matches!(
            star_fan_of_ray(&p2, &[bi(5), bi(1)]),
            Err(CrateError::NotARay(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        let nf = cone_normal_form_2d(&[bi(1), bi(0)], &[bi(0), bi(1)]).unwrap();
        assert_eq!(nf, (bi(1), bi(0)));
        let nf = cone_normal_form_2d(&[bi(1), bi(0)], &[bi(-1), bi(-2)]).unwrap();
        assert_eq!(nf, (bi(2), bi(1)));
        let nf = cone_normal_form_2d(&[bi(0), bi(1)], &[bi(3), bi(-1)]).unwrap();
        assert_eq!(nf, (bi(3), bi(1)));
    }

    #[test]
    fn containment_tests() {
        let p2 = make_projective_space_fan(2);
        let c = Cone::new(vec![0, 1]);
        assert!(p2.cone_contains(&c, &qv(&[2, 3])));
        assert!(!p2.cone_contains(&c, &qv(&[-1, 3])));
        assert!(p2.support_contains(&qv(&[-7, 5])));
    }
}
