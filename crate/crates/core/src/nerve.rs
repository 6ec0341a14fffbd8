//! The nerve of the maximal-cone cover, with each cell carrying its
//! intersection cone and the quotient lattice presenting the torus piece of
//! the corresponding chart. Face maps are induced by the identity of the
//! ambient lattice; degeneracy maps are identities. The full mode keeps
//! tuples with repeats, the alternating mode keeps strictly increasing
//! tuples only.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{is_complete, validate_fan, Cone, Fan};
use crate::lattice::{
    induced_quotient_map, isogeny_degree, quotient_presentation, IsogenyDegree, LatticeMap,
    QuotientPresentation,
};
use crate::mat::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NerveMode {
    Full,
    Alternating,
}

#[derive(Clone, Debug)]
pub struct NerveCell {
    /// Maximal-cone indices; strictly increasing in alternating mode.
    pub tuple: Vec<usize>,
    /// Intersection of the referenced maximal cones.
    pub cone: Cone,
    /// Rank of the torus piece of the associated chart, equal to the rank of
    /// its character lattice.
    pub torus_rank: usize,
}

impl NerveCell {
    pub fn char_lattice_rank(&self) -> usize {
        self.torus_rank
    }
}

#[derive(Clone, Debug)]
pub struct Nerve {
    pub fan: Fan,
    pub mode: NerveMode,
    pub levels: Vec<Vec<NerveCell>>,
    presentations: BTreeMap<Vec<usize>, QuotientPresentation>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

/// Quotient presentation of the ambient lattice by the saturated span of a
/// cone; its dual is the character lattice of the chart's torus piece.
pub fn torus_piece(fan: &Fan, cone: &Cone) -> QuotientPresentation {
    quotient_presentation(&fan.ray_matrix(cone), fan.dim)
}

fn intersection_cone(fan: &Fan, tuple: &[usize]) -> Cone {
    let mut iter = tuple.iter();
    let first = *iter.next().expect("nonempty tuple");
    let mut cone = fan.max_cones[first].clone();
    for &i in iter {
        cone = cone.intersect(&fan.max_cones[i]);
    }
    cone
}

fn tuples(m: usize, len: usize, mode: NerveMode) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(m: usize, len: usize, strict: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = if strict { cur.last().map_or(0, |&l| l + 1) } else { 0 };
        for i in start..m {
            cur.push(i);
            rec(m, len, strict, cur, out);
            cur.pop();
        }
    }
    rec(m, len, matches!(mode, NerveMode::Alternating), &mut cur, &mut out);
    out
}

/// Build the nerve through level `p_max` (capped at m-1 in alternating mode).
pub fn build_nerve(fan: &Fan, mode: NerveMode, p_max: usize) -> Result<Nerve> {
    validate_fan(fan)?;
    if !is_complete(fan) {
        return Err(Error::NotComplete);
    }
    let m = fan.max_cones.len();
    let p_max = match mode {
        NerveMode::Alternating => p_max.min(m - 1),
        NerveMode::Full => p_max,
    };
    let mut presentations: BTreeMap<Vec<usize>, QuotientPresentation> = BTreeMap::new();
    let mut levels = Vec::new();
    let mut index = Vec::new();
    for p in 0..=p_max {
        let mut cells = Vec::new();
        let mut level_index = BTreeMap::new();
        for tuple in tuples(m, p + 1, mode) {
            let cone = intersection_cone(fan, &tuple);
            let key = cone.ray_indices().to_vec();
            let q = presentations
                .entry(key)
                .or_insert_with(|| torus_piece(fan, &cone));
            let torus_rank = q.quotient_rank();
            level_index.insert(tuple.clone(), cells.len());
            cells.push(NerveCell { tuple, cone, torus_rank });
        }
        levels.push(cells);
        index.push(level_index);
    }
    Ok(Nerve { fan: fan.clone(), mode, levels, presentations, index })
}

impl Nerve {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn cell(&self, level: usize, idx: usize) -> &NerveCell {
        &self.levels[level][idx]
    }

    pub fn cell_index(&self, level: usize, tuple: &[usize]) -> Option<usize> {
        self.index.get(level)?.get(tuple).copied()
    }

    pub fn presentation(&self, cone: &Cone) -> &QuotientPresentation {
        &self.presentations[cone.ray_indices()]
    }

    fn face_tuple(tuple: &[usize], j: usize) -> Vec<usize> {
        let mut t = tuple.to_vec();
        t.remove(j);
        t
    }

    /// The induced surjection between torus-piece lattices dropping entry j.
    pub fn face_map(&self, level: usize, cell_idx: usize, j: usize) -> Result<LatticeMap> {
        if level == 0 || j > level {
            return Err(Error::IndexOutOfRange { level, index: j });
        }
        let cell = self.cell(level, cell_idx);
        let target_tuple = Self::face_tuple(&cell.tuple, j);
        let target_cone = intersection_cone(&self.fan, &target_tuple);
        let src = self.presentation(&cell.cone);
        let dst = &self.presentations[target_cone.ray_indices()];
        induced_quotient_map(&LatticeMap::identity(self.fan.dim), src, dst)
    }

    /// Degeneracy maps repeat an index and are identities on the lattice.
    pub fn degeneracy_map(&self, level: usize, cell_idx: usize, j: usize) -> Result<LatticeMap> {
        if !matches!(self.mode, NerveMode::Full) {
            return Err(Error::ModeMismatch("degeneracies exist in full mode only".into()));
        }
        if j > level || level + 1 > self.max_level() {
            return Err(Error::IndexOutOfRange { level, index: j });
        }
        let cell = self.cell(level, cell_idx);
        Ok(LatticeMap::identity(cell.torus_rank))
    }

    /// Character-lattice inclusion dual to `face_map`, integral.
    pub fn character_inclusion(&self, level: usize, cell_idx: usize, j: usize) -> Result<IntMatrix> {
        Ok(self.face_map(level, cell_idx, j)?.matrix.transpose())
    }

    pub fn degenerate_tuple(tuple: &[usize]) -> bool {
        tuple.windows(2).any(|w| w[0] == w[1])
    }
}

/// Exhaustive check of the simplicial identities on a full-mode nerve, as
/// exact matrix equations together with the tuple bookkeeping.
pub fn verify_simplicial_identities(nerve: &Nerve) -> std::result::Result<(), String> {
    if !matches!(nerve.mode, NerveMode::Full) {
        return Err("identities are checked on a full-mode nerve".into());
    }
    let top = nerve.max_level();
    let face = |level: usize, tuple: &[usize], j: usize| -> (Vec<usize>, IntMatrix) {
        let idx = nerve.cell_index(level, tuple).expect("cell exists");
        let m = nerve.face_map(level, idx, j).expect("face map");
        (Nerve::face_tuple(tuple, j), m.matrix)
    };
    for level in 0..=top {
        for cell in &nerve.levels[level] {
            let t = &cell.tuple;
            // d_i d_j = d_{j-1} d_i for i < j
            if level >= 2 {
                for j in 1..=level {
                    for i in 0..j {
                        let (tj, mj) = face(level, t, j);
                        let (tij, mij) = face(level - 1, &tj, i);
                        let (ti, mi) = face(level, t, i);
                        let (tji, mji) = face(level - 1, &ti, j - 1);
                        if tij != tji || mij.matmul(&mj) != mji.matmul(&mi) {
                            return Err(format!(
                                "face identity fails at level {level}, tuple {t:?}, i={i}, j={j}"
                            ));
                        }
                    }
                }
            }
            // degeneracy-involving identities need room above
            if level < top {
                for j in 0..=level {
                    let mut sj = t.clone();
                    sj.insert(j, t[j]);
                    // d_j s_j = id = d_{j+1} s_j
                    for dj in [j, j + 1] {
                        let (back, m) = face(level + 1, &sj, dj);
                        if back != *t || !m.is_identity() {
                            return Err(format!(
                                "mixed identity d_{dj} s_{j} != id at level {level}, tuple {t:?}"
                            ));
                        }
                    }
                    // d_i s_j = s_{j-1} d_i for i < j
                    for i in 0..j {
                        let (dsj, m) = face(level + 1, &sj, i);
                        let (ti, mi) = face(level, t, i);
                        let mut expect = ti.clone();
                        expect.insert(j - 1, ti[j - 1]);
                        if dsj != expect || m != mi {
                            return Err(format!(
                                "mixed identity d_{i} s_{j} fails at level {level}, tuple {t:?}"
                            ));
                        }
                    }
                    // d_i s_j = s_j d_{i-1} for i > j+1
                    for i in j + 2..=level + 1 {
                        let (dsj, m) = face(level + 1, &sj, i);
                        let (ti, mi) = face(level, t, i - 1);
                        let mut expect = ti.clone();
                        expect.insert(j, ti[j]);
                        if dsj != expect || m != mi {
                            return Err(format!(
                                "mixed identity d_{i} s_{j} fails at level {level}, tuple {t:?}"
                            ));
                        }
                    }
                }
            }
            if level + 2 <= top {
                // s_i s_j = s_{j+1} s_i for i <= j (tuple bookkeeping; the
                // lattice maps are identities)
                for j in 0..=level {
                    for i in 0..=j {
                        let mut sj = t.clone();
                        sj.insert(j, t[j]);
                        let mut sisj = sj.clone();
                        sisj.insert(i, sj[i]);
                        let mut si = t.clone();
                        si.insert(i, t[i]);
                        let mut sjsi = si.clone();
                        sjsi.insert(j + 1, si[j + 1]);
                        if sisj != sjsi {
                            return Err(format!(
                                "degeneracy identity fails at level {level}, tuple {t:?}, i={i}, j={j}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct NerveCellMap {
    pub tuple: Vec<usize>,
    pub map: LatticeMap,
    pub degree: BigInt,
}

#[derive(Clone, Debug)]
pub struct NerveMorphism {
    /// Per level, per cell of the source nerve.
    pub cells: Vec<Vec<NerveCellMap>>,
}

/// The morphism of torus-piece nerves induced by a lattice map `f` carrying
/// the fan of `nx` onto the fan of `ny` with maximal-cone correspondence
/// `cone_map`. Every cell map is certified an isogeny and checked to commute
/// with all face maps.
pub fn nerve_morphism(
    nx: &Nerve,
    ny: &Nerve,
    f: &LatticeMap,
    cone_map: &[usize],
) -> Result<NerveMorphism> {
    if nx.mode != ny.mode || nx.max_level() != ny.max_level() {
        return Err(Error::ModeMismatch(
            "nerves must be built in the same mode to the same level".into(),
        ));
    }
    let image_tuple = |tuple: &[usize]| -> Vec<usize> {
        let mut t: Vec<usize> = tuple.iter().map(|&i| cone_map[i]).collect();
        if matches!(nx.mode, NerveMode::Alternating) {
            t.sort_unstable();
        }
        t
    };
    let mut cells: Vec<Vec<NerveCellMap>> = Vec::new();
    for level in 0..=nx.max_level() {
        let mut level_maps = Vec::new();
        for cell in &nx.levels[level] {
            let ty = image_tuple(&cell.tuple);
            let y_idx = ny
                .cell_index(level, &ty)
                .ok_or_else(|| Error::ModeMismatch("combinatorics mismatch".into()))?;
            let y_cell = ny.cell(level, y_idx);
            let src = nx.presentation(&cell.cone);
            let dst = ny.presentation(&y_cell.cone);
            let map = induced_quotient_map(f, src, dst)?;
            if map.domain_rank != map.codomain_rank {
                return Err(Error::NotIsogeny { level, tuple: cell.tuple.clone() });
            }
            let degree = match isogeny_degree(&map)? {
                IsogenyDegree::Degree(deg) => deg,
                IsogenyDegree::NotIsogeny => {
                    return Err(Error::NotIsogeny { level, tuple: cell.tuple.clone() })
                }
            };
            level_maps.push(NerveCellMap { tuple: cell.tuple.clone(), map, degree });
        }
        cells.push(level_maps);
    }
    // commutation with every face map
    for level in 1..=nx.max_level() {
        for (ci, cell) in nx.levels[level].iter().enumerate() {
            let ty = image_tuple(&cell.tuple);
            let y_idx = ny.cell_index(level, &ty).expect("checked above");
            for j in 0..=level {
                let fx = nx.face_map(level, ci, j)?;
                let face_tuple = Nerve::face_tuple(&cell.tuple, j);
                let fx_idx = nx.cell_index(level - 1, &face_tuple).expect("face cell");
                // position of the dropped entry in the image tuple
                let dropped = cone_map[cell.tuple[j]];
                let jy = match nx.mode {
                    NerveMode::Full => j,
                    NerveMode::Alternating => ty.iter().position(|&v| v == dropped).expect("entry"),
                };
                let fy = ny.face_map(level, y_idx, jy)?;
                let lhs = cells[level - 1][fx_idx].map.matrix.matmul(&fx.matrix);
                let rhs = fy.matrix.matmul(&cells[level][ci].map.matrix);
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "cell map does not commute with face {j} at level {level}, tuple {:?}",
                        cell.tuple
                    )));
                }
            }
        }
    }
    Ok(NerveMorphism { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_projective_space_fan, make_wps_fan};
    use crate::mat::bi;
    use num_traits::{One, Zero};

    #[test]
    fn p1_alternating_levels() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 10).unwrap();
        assert_eq!(nerve.max_level(), 1);
        assert_eq!(nerve.levels[0].len(), 2);
        assert!(nerve.levels[0].iter().all(|c| c.torus_rank == 0));
        assert_eq!(nerve.levels[1].len(), 1);
        assert_eq!(nerve.levels[1][0].torus_rank, 1);
    }

    #[test]
    fn p2_alternating_levels() {
        let p2 = make_projective_space_fan(2);
        let nerve = build_nerve(&p2, NerveMode::Alternating, 2).unwrap();
        assert_eq!(nerve.levels[0].len(), 3);
        assert!(nerve.levels[0].iter().all(|c| c.torus_rank == 0));
        assert_eq!(nerve.levels[1].len(), 3);
        assert!(nerve.levels[1].iter().all(|c| c.torus_rank == 1));
        assert_eq!(nerve.levels[2].len(), 1);
        assert_eq!(nerve.levels[2][0].torus_rank, 2);
    }

    #[test]
    fn p1_full_level_one() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Full, 1).unwrap();
        assert_eq!(nerve.levels[1].len(), 4);
        let ranks: Vec<usize> = nerve.levels[1].iter().map(|c| c.torus_rank).collect();
        assert_eq!(ranks, vec![0, 1, 1, 0]);
    }

    #[test]
    fn face_maps_examples() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 1).unwrap();
        let m = nerve.face_map(1, 0, 0).unwrap();
        assert_eq!(m.matrix.rows(), 0);
        assert_eq!(m.matrix.cols(), 1);

        let full = build_nerve(&p1, NerveMode::Full, 1).unwrap();
        let diag_idx = full.cell_index(1, &[0, 0]).unwrap();
        for j in 0..=1 {
            let m = full.face_map(1, diag_idx, j).unwrap();
            assert!(m.matrix.is_identity());
        }

        let p2 = make_projective_space_fan(2);
        let nerve = build_nerve(&p2, NerveMode::Alternating, 2).unwrap();
        let m = nerve.face_map(2, 0, 2).unwrap();
        assert_eq!(m.matrix.rows(), 1);
        assert_eq!(m.matrix.cols(), 2);
        // surjection onto a rank-1 quotient
        assert_eq!(crate::snf::cokernel_structure(&m.matrix), (0, vec![]));
    }

    #[test]
    fn face_index_bounds() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 1).unwrap();
        assert!(matches!(
            nerve.face_map(0, 0, 0),
            Err(crate::error::Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            nerve.face_map(1, 0, 2),
            Err(crate::error::Error::IndexOutOfRange { .. })
        ));
        // degeneracies are identities where defined, full mode only
        assert!(nerve.degeneracy_map(0, 0, 0).is_err());
        let full = build_nerve(&p1, NerveMode::Full, 2).unwrap();
        let m = full.degeneracy_map(0, 0, 0).unwrap();
        assert!(m.matrix.is_identity());
    }

    #[test]
    fn character_inclusions() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 1).unwrap();
        let inc = nerve.character_inclusion(1, 0, 0).unwrap();
        assert_eq!((inc.rows(), inc.cols()), (1, 0));

        let p2 = make_projective_space_fan(2);
        let nerve = build_nerve(&p2, NerveMode::Alternating, 2).unwrap();
        let inc = nerve.character_inclusion(2, 0, 0).unwrap();
        assert_eq!((inc.rows(), inc.cols()), (2, 1));
        assert_eq!(inc.rank(), 1);
    }

    #[test]
    fn torus_rank_depends_on_set_only() {
        let p2 = make_projective_space_fan(2);
        let nerve = build_nerve(&p2, NerveMode::Full, 2).unwrap();
        for level in &nerve.levels {
            for cell in level {
                let mut sorted = cell.tuple.clone();
                sorted.sort_unstable();
                sorted.dedup();
                let reference = intersection_cone(&nerve.fan, &sorted);
                assert_eq!(cell.torus_rank, 2 - reference.dim());
            }
        }
    }

    #[test]
    fn identities_on_small_fans() {
        for fan in [make_projective_space_fan(1), make_projective_space_fan(2)] {
            let nerve = build_nerve(&fan, NerveMode::Full, 3).unwrap();
            verify_simplicial_identities(&nerve).unwrap();
        }
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let nerve = build_nerve(&w.fan, NerveMode::Full, 3).unwrap();
        verify_simplicial_identities(&nerve).unwrap();
    }

    #[test]
    fn morphism_identity_all_degree_one() {
        let p2 = make_projective_space_fan(2);
        let nerve = build_nerve(&p2, NerveMode::Alternating, 2).unwrap();
        let id = LatticeMap::identity(2);
        let cone_map: Vec<usize> = (0..3).collect();
        let morph = nerve_morphism(&nerve, &nerve, &id, &cone_map).unwrap();
        for level in &morph.cells {
            for cell in level {
                assert_eq!(cell.degree, bi(1));
            }
        }
    }

    #[test]
    fn morphism_doubling_on_p1() {
        let p1 = make_projective_space_fan(1);
        let nerve = build_nerve(&p1, NerveMode::Alternating, 1).unwrap();
        let two = LatticeMap::new(crate::mat::IntMatrix::from_rows(&[vec![2]]));
        let morph = nerve_morphism(&nerve, &nerve, &two, &[0, 1]).unwrap();
        assert_eq!(morph.cells[0][0].degree, bi(1));
        assert_eq!(morph.cells[1][0].degree, bi(2));
    }

    #[test]
    fn morphism_p112_to_p2() {
        let x = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap().fan;
        let y = make_projective_space_fan(2);
        let iso = crate::fan_iso::rational_fan_isomorphism(&x, &y).unwrap();
        let nx = build_nerve(&x, NerveMode::Alternating, 2).unwrap();
        let ny = build_nerve(&y, NerveMode::Alternating, 2).unwrap();
        let morph = nerve_morphism(&nx, &ny, &iso.map, &iso.cone_bijection).unwrap();
        for cell in &morph.cells[0] {
            assert_eq!(cell.degree, bi(1));
        }
        for cell in &morph.cells[1] {
            // degrees divide a power of two
            let mut deg = cell.degree.clone();
            while (&deg % bi(2)).is_zero() {
                deg /= bi(2);
            }
            assert!(deg.is_one(), "degree {} not a power of two", cell.degree);
        }
        assert_eq!(morph.cells[2][0].degree, bi(2));
    }
}
