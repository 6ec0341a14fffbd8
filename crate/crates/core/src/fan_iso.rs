//! Search for rational (and exact lattice) isomorphisms between fans:
//! ray bijections compatible with the maximal-cone combinatorics, together
//! with a linear map carrying each ray onto a positive multiple of its image.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::fan::Fan;
use crate::lattice::LatticeMap;
use crate::mat::QMatrix;

#[derive(Clone, Debug)]
pub struct FanIsomorphism {
    /// The rational matrix with F(u_i) = lambda_i * v_{ray_bijection(i)}.
    pub matrix_q: QMatrix,
    /// Denominator-cleared primitive integral form of `matrix_q`.
    pub map: LatticeMap,
    pub ray_bijection: Vec<usize>,
    /// cone_bijection[i] is the index in fanY of the image of max cone i.
    pub cone_bijection: Vec<usize>,
    pub scalings: Vec<BigRational>,
}

fn cone_key(indices: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut mapped: Vec<usize> = indices.iter().map(|&i| perm[i]).collect();
    mapped.sort_unstable();
    mapped
}

/// All bijections of ray indices under which max cones map onto max cones,
/// in lexicographic order.
fn compatible_bijections(fx: &Fan, fy: &Fan) -> Vec<Vec<usize>> {
    let n = fx.rays.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // prune by how many maximal cones each ray belongs to
    let degree = |fan: &Fan, i: usize| {
        fan.max_cones
            .iter()
            .filter(|c| c.ray_indices().contains(&i))
            .count()
    };
    let deg_x: Vec<usize> = (0..n).map(|i| degree(fx, i)).collect();
    let deg_y: Vec<usize> = (0..n).map(|i| degree(fy, i)).collect();

    fn rec(
        pos: usize,
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        deg_x: &[usize],
        deg_y: &[usize],
        fx: &Fan,
        fy: &Fan,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == n {
            let target: std::collections::BTreeSet<Vec<usize>> = fy
                .max_cones
                .iter()
                .map(|c| c.ray_indices().to_vec())
                .collect();
            let image: std::collections::BTreeSet<Vec<usize>> = fx
                .max_cones
                .iter()
                .map(|c| cone_key(c.ray_indices(), perm))
                .collect();
            if image == target {
                out.push(perm.clone());
            }
            return;
        }
        for cand in 0..n {
            if used[cand] || deg_x[pos] != deg_y[cand] {
                continue;
            }
            perm[pos] = cand;
            used[cand] = true;
            rec(pos + 1, n, perm, used, deg_x, deg_y, fx, fy, out);
            used[cand] = false;
            perm[pos] = usize::MAX;
        }
    }
    rec(0, n, &mut perm, &mut used, &deg_x, &deg_y, fx, fy, &mut out);
    out
}

/// First (in deterministic order) rational linear automorphism carrying the
/// fan of X onto the fan of Y, or None.
pub fn rational_fan_isomorphism(fx: &Fan, fy: &Fan) -> Option<FanIsomorphism> {
    if fx.dim != fy.dim
        || fx.rays.len() != fy.rays.len()
        || fx.max_cones.len() != fy.max_cones.len()
    {
        return None;
    }
    let d = fx.dim;
    let n = fx.rays.len();
    for perm in compatible_bijections(fx, fy) {
        let base = &fx.max_cones[0];
        let base_idx = base.ray_indices().to_vec();
        let u = fx.ray_matrix(base).to_q();
        let Some(u_inv) = u.inverse() else { continue };
        let image_cols: Vec<Vec<BigRational>> = base_idx
            .iter()
            .map(|&i| {
                fy.rays[perm[i]]
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let vmat = QMatrix::from_columns(d, &image_cols);
        // unknown scalings, one per ray; base-cone scalings determine F
        let others: Vec<usize> = (0..n).filter(|i| !base_idx.contains(i)).collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for &j in &others {
            let uj: Vec<BigRational> = fx.rays[j]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            let c = u_inv.apply(&uj);
            // sum_k lambda_{base_k} c_k * v_{perm(base_k)} - lambda_j v_{perm(j)} = 0
            for row_dim in 0..d {
                let mut row = vec![BigRational::zero(); n];
                for (k, &bi_idx) in base_idx.iter().enumerate() {
                    row[bi_idx] =
                        &c[k] * BigRational::from_integer(fy.rays[perm[bi_idx]][row_dim].clone());
                }
                row[j] = BigRational::from_integer(-fy.rays[perm[j]][row_dim].clone());
                rows.push(row);
            }
        }
        let system = QMatrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone());
        let null = system.nullspace();
        let positive = find_positive(&null);
        let Some(lambda) = positive else { continue };
        // F = V * diag(lambda_base) * U^{-1}
        let diag = QMatrix::from_fn(d, d, |i, j| {
            if i == j {
                lambda[base_idx[i]].clone()
            } else {
                BigRational::zero()
            }
        });
        let f = vmat.matmul(&diag).matmul(&u_inv);
        if f.det().is_zero() {
            continue;
        }
        // confirm every ray maps onto the positive multiple it should
        let ok = (0..n).all(|i| {
            let ui: Vec<BigRational> = fx.rays[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            let img = f.apply(&ui);
            let expected: Vec<BigRational> = fy.rays[perm[i]]
                .iter()
                .map(|x| &lambda[i] * BigRational::from_integer(x.clone()))
                .collect();
            img == expected
        });
        if !ok {
            continue;
        }
        let cone_bijection: Vec<usize> = fx
            .max_cones
            .iter()
            .map(|c| {
                let key = cone_key(c.ray_indices(), &perm);
                fy.max_cones
                    .iter()
                    .position(|cy| cy.ray_indices() == key.as_slice())
                    .expect("combinatorial compatibility")
            })
            .collect();
        let cleared = f.clear_denominators();
        return Some(FanIsomorphism {
            matrix_q: f,
            map: LatticeMap::new(cleared),
            ray_bijection: perm,
            cone_bijection,
            scalings: lambda,
        });
    }
    None
}

/// A strictly positive vector in the span of the given nullspace basis, if
/// one is easy to exhibit (a signed combination of basis vectors). For the
/// compatible-scaling systems of connected complete fans the space is one
/// dimensional, where this is exact.
fn find_positive(basis: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    if basis.is_empty() {
        return None;
    }
    let all_positive = |v: &[BigRational]| v.iter().all(|x| x.is_positive());
    if basis.len() == 1 {
        let v = &basis[0];
        if all_positive(v) {
            return Some(v.clone());
        }
        let neg: Vec<BigRational> = v.iter().map(|x| -x.clone()).collect();
        if all_positive(&neg) {
            return Some(neg);
        }
        return None;
    }
    for mask in 1u32..(1u32 << basis.len().min(16)) {
        let mut acc = vec![BigRational::zero(); basis[0].len()];
        for (i, b) in basis.iter().enumerate() {
            let sign = if mask & (1 << i) != 0 { 1 } else { -1 };
            for (j, x) in b.iter().enumerate() {
                acc[j] += x * BigRational::from_integer(BigInt::from(sign));
            }
        }
        if all_positive(&acc) {
            return Some(acc);
        }
    }
    None
}

/// Exact lattice isomorphism: unimodular integral F with F(u_i) = v_{pi(i)}.
pub fn lattice_isomorphism(fx: &Fan, fy: &Fan) -> Option<FanIsomorphism> {
    if fx.dim != fy.dim
        || fx.rays.len() != fy.rays.len()
        || fx.max_cones.len() != fy.max_cones.len()
    {
        return None;
    }
    let d = fx.dim;
    let n = fx.rays.len();
    for perm in compatible_bijections(fx, fy) {
        let base = &fx.max_cones[0];
        let base_idx = base.ray_indices().to_vec();
        let u = fx.ray_matrix(base).to_q();
        let Some(u_inv) = u.inverse() else { continue };
        let image_cols: Vec<Vec<BigRational>> = base_idx
            .iter()
            .map(|&i| {
                fy.rays[perm[i]]
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let vmat = QMatrix::from_columns(d, &image_cols);
        let f = vmat.matmul(&u_inv);
        let Some(f_int) = f.to_int() else { continue };
        if f_int.det().abs() != BigInt::from(1) {
            continue;
        }
        let ok = (0..n).all(|i| f_int.apply(&fx.rays[i]) == fy.rays[perm[i]]);
        if !ok {
            continue;
        }
        let cone_bijection: Vec<usize> = fx
            .max_cones
            .iter()
            .map(|c| {
                let key = cone_key(c.ray_indices(), &perm);
                fy.max_cones
                    .iter()
                    .position(|cy| cy.ray_indices() == key.as_slice())
                    .expect("combinatorial compatibility")
            })
            .collect();
        let scalings = vec![BigRational::from_integer(BigInt::from(1)); n];
        return Some(FanIsomorphism {
            matrix_q: f,
            map: LatticeMap::new(f_int),
            ray_bijection: perm,
            cone_bijection,
            scalings,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_projective_space_fan, make_wps_fan, star_subdivision};
    use crate::mat::{bi, IntMatrix};

    #[test]
    fn p112_to_p2_is_diag_2_1() {
        let x = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap().fan;
        let y = make_projective_space_fan(2);
        let iso = rational_fan_isomorphism(&x, &y).unwrap();
        assert_eq!(iso.map.matrix, IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]));
        assert!(iso.scalings.iter().all(|l| l.is_positive()));
    }

    #[test]
    fn identity_found_first() {
        let p2 = make_projective_space_fan(2);
        let iso = rational_fan_isomorphism(&p2, &p2).unwrap();
        assert!(iso.map.matrix.is_identity());
        assert_eq!(iso.ray_bijection, vec![0, 1, 2]);
    }

    #[test]
    fn cone_count_mismatch_gives_none() {
        let x = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap().fan;
        let sub = star_subdivision(&x, &[bi(0), bi(-1)]).unwrap();
        let p2 = make_projective_space_fan(2);
        assert!(rational_fan_isomorphism(&p2, &sub).is_none());
    }

    #[test]
    fn cones_map_onto_cones() {
        let x = make_wps_fan(&[bi(2), bi(3), bi(5)]).unwrap().fan;
        let y = make_projective_space_fan(2);
        let iso = rational_fan_isomorphism(&x, &y).unwrap();
        // check per-cone set mapping both ways on the rays
        for (ci, cone) in x.max_cones.iter().enumerate() {
            let target = &y.max_cones[iso.cone_bijection[ci]];
            for &ri in cone.ray_indices() {
                assert!(target.ray_indices().contains(&iso.ray_bijection[ri]));
            }
        }
    }

    #[test]
    fn lattice_iso_detects_relabeling() {
        let p2 = make_projective_space_fan(2);
        let relabeled = Fan::new(
            2,
            vec![
                vec![bi(0), bi(1)],
                vec![bi(-1), bi(-1)],
                vec![bi(1), bi(0)],
            ],
            vec![
                crate::fan::Cone::new(vec![0, 1]),
                crate::fan::Cone::new(vec![1, 2]),
                crate::fan::Cone::new(vec![0, 2]),
            ],
        );
        assert!(lattice_isomorphism(&p2, &relabeled).is_some());
        let p112 = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap().fan;
        assert!(lattice_isomorphism(&p2, &p112).is_none());
        assert!(rational_fan_isomorphism(&p2, &p112).is_some());
    }
}
