//! K-regularity verdicts for complete simplicial toric varieties over a
//! field of characteristic zero.
//!
//! The chart-sum decomposition applies to every complete surface, and in
//! higher dimension exactly when all non-maximal faces are smooth; in that
//! case negative K of every chart vanishes and the variety is K_0-regular.
//! On surfaces, a chart of normal form (2, 1) is the quadric cone chart
//! k[u,v,w]/(uw - v^2), the one configuration with a known K_1 obstruction;
//! everything beyond that stays UNKNOWN rather than guessed.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{
    cone_normal_form_2d, is_complete, is_smooth_cone, singular_locus, validate_fan, Cone, Fan,
    SingularityReport,
};
use crate::fan_iso::lattice_isomorphism;
use crate::mat::bi;
use crate::semigroup::dual_semigroup_generators;

pub const ASSUMPTION_CHAR_ZERO: &str = "verdicts hold over fields of characteristic 0";

#[derive(Clone, Debug)]
pub struct DecompositionVerdict {
    pub applies: bool,
    pub reason: String,
    /// A singular non-maximal cone when the decomposition fails.
    pub witness: Option<(Cone, Vec<Vec<BigInt>>)>,
}

/// Chart-sum decomposition: dimension 2 needs completeness only; in higher
/// dimension every non-maximal face must be smooth.
pub fn decomposition_applies(fan: &Fan) -> Result<DecompositionVerdict> {
    validate_fan(fan)?;
    if !is_complete(fan) {
        return Err(Error::NotComplete);
    }
    if fan.dim == 2 {
        return Ok(DecompositionVerdict {
            applies: true,
            reason: "complete toric surface: chart intersections are smooth by normality".into(),
            witness: None,
        });
    }
    let bad = fan
        .all_faces()
        .into_iter()
        .find(|c| c.dim() < fan.dim && !is_smooth_cone(fan, c));
    match bad {
        None => Ok(DecompositionVerdict {
            applies: true,
            reason: format!(
                "smooth in all codimensions <= {}: only maximal cones may be singular",
                fan.dim - 1
            ),
            witness: None,
        }),
        Some(cone) => {
            let rays = cone.ray_indices().iter().map(|&i| fan.rays[i].clone()).collect();
            Ok(DecompositionVerdict {
                applies: false,
                reason: "a non-maximal face is singular, so chart intersections are not all smooth"
                    .into(),
                witness: Some((cone, rays)),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Verdict {
    Regular { reason: String },
    Unknown,
    NotRegular { witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K1Verdict {
    NotRegular,
    Unknown,
}

/// A maximal cone whose chart is the quadric cone Spec k[u,v,w]/(uw - v^2).
#[derive(Clone, Debug)]
pub struct K1Witness {
    pub cone: Cone,
    pub rays: Vec<Vec<BigInt>>,
    pub normal_form: (BigInt, BigInt),
    pub hilbert_basis: Vec<Vec<BigInt>>,
}

/// List the (2,1)-chart witnesses of a complete surface fan.
pub fn surface_k1_obstruction(fan: &Fan) -> Result<Vec<K1Witness>> {
    if fan.dim != 2 {
        return Err(Error::DimensionMismatch(format!(
            "surface obstruction needs dimension 2, got {}",
            fan.dim
        )));
    }
    validate_fan(fan)?;
    if !is_complete(fan) {
        return Err(Error::NotComplete);
    }
    let mut out = Vec::new();
    for cone in &fan.max_cones {
        let idx = cone.ray_indices();
        let nf = cone_normal_form_2d(&fan.rays[idx[0]], &fan.rays[idx[1]])?;
        if nf == (bi(2), bi(1)) {
            out.push(K1Witness {
                cone: cone.clone(),
                rays: idx.iter().map(|&i| fan.rays[i].clone()).collect(),
                normal_form: nf,
                hilbert_basis: dual_semigroup_generators(fan, cone)?,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub dim: usize,
    pub complete: bool,
    pub singularity: SingularityReport,
    pub decomposition: DecompositionVerdict,
    pub k0: K0Verdict,
    pub k1: K1Verdict,
    pub k1_witnesses: Vec<K1Witness>,
    pub k_negative_note: String,
    pub notes: Vec<String>,
    pub assumptions: Vec<String>,
}

impl RegularityReport {
    /// Upgrade the K_0 verdict with a computed differential-form obstruction.
    /// UNKNOWN becomes NOT_REGULAR; an existing REGULAR verdict is never
    /// downgraded (obstructions only refine ignorance).
    pub fn with_forms_obstruction(mut self, witness: String) -> Self {
        if matches!(self.k0, K0Verdict::Unknown) {
            self.k0 = K0Verdict::NotRegular { witness };
        }
        self
    }
}

/// Assemble the regularity verdicts of a complete simplicial fan.
pub fn regularity_report(fan: &Fan) -> Result<RegularityReport> {
    validate_fan(fan)?;
    if !is_complete(fan) {
        return Err(Error::NotComplete);
    }
    let singularity = singular_locus(fan);
    let decomposition = decomposition_applies(fan)?;
    let k0 = if decomposition.applies {
        K0Verdict::Regular {
            reason: format!(
                "{}; negative K and the K_0 defect of every chart vanish (monoid rings over a regular base)",
                decomposition.reason
            ),
        }
    } else {
        K0Verdict::Unknown
    };
    let (k1, k1_witnesses) = if fan.dim == 2 {
        let witnesses = surface_k1_obstruction(fan)?;
        let only_singular_charts_are_quadric = fan.max_cones.iter().all(|c| {
            is_smooth_cone(fan, c)
                || witnesses.iter().any(|w| w.cone.ray_indices() == c.ray_indices())
        });
        if !witnesses.is_empty() && only_singular_charts_are_quadric {
            (K1Verdict::NotRegular, witnesses)
        } else {
            (K1Verdict::Unknown, witnesses)
        }
    } else {
        (K1Verdict::Unknown, Vec::new())
    };
    let mut notes = Vec::new();
    if fan.dim == 3 {
        // the one singular profile with a catalogued K_{-1} statement
        let reference = crate::fan::make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)])
            .expect("reference weights are valid");
        if lattice_isomorphism(fan, &reference.fan).is_some() {
            notes.push(
                "fan is lattice-isomorphic to the P(1,1,2,4) fan: K_{-1}-regular (cited result)"
                    .to_string(),
            );
        }
    }
    Ok(RegularityReport {
        dim: fan.dim,
        complete: true,
        singularity,
        decomposition,
        k0,
        k1,
        k1_witnesses,
        k_negative_note:
            "K_n of every affine chart vanishes for n <= -1 (monoid ring over a regular base)"
                .into(),
        notes,
        assumptions: vec![ASSUMPTION_CHAR_ZERO.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{make_projective_space_fan, make_wps_fan};

    #[test]
    fn decomposition_on_surfaces() {
        let p2 = make_projective_space_fan(2);
        assert!(decomposition_applies(&p2).unwrap().applies);
        let w = make_wps_fan(&[bi(2), bi(3), bi(5)]).unwrap();
        assert!(decomposition_applies(&w.fan).unwrap().applies);
    }

    #[test]
    fn decomposition_fails_for_p1124() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        let verdict = decomposition_applies(&w.fan).unwrap();
        assert!(!verdict.applies);
        let (cone, rays) = verdict.witness.unwrap();
        assert_eq!(cone.ray_indices(), &[0, 3]);
        assert_eq!(rays[0], vec![bi(1), bi(0), bi(0)]);
        assert_eq!(rays[1], vec![bi(-1), bi(-2), bi(-4)]);
    }

    #[test]
    fn decomposition_holds_for_isolated_singularities() {
        let w = make_wps_fan(&[bi(1), bi(2), bi(3), bi(5)]).unwrap();
        let verdict = decomposition_applies(&w.fan).unwrap();
        assert!(verdict.applies);
        let rep = regularity_report(&w.fan).unwrap();
        assert!(matches!(rep.k0, K0Verdict::Regular { .. }));
    }

    #[test]
    fn k1_witness_on_p112() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2)]).unwrap();
        let rep = regularity_report(&w.fan).unwrap();
        assert!(matches!(rep.k0, K0Verdict::Regular { .. }));
        assert_eq!(rep.k1, K1Verdict::NotRegular);
        assert_eq!(rep.k1_witnesses.len(), 1);
        let w0 = &rep.k1_witnesses[0];
        assert_eq!(w0.normal_form, (bi(2), bi(1)));
        assert_eq!(w0.rays, vec![vec![bi(1), bi(0)], vec![bi(-1), bi(-2)]]);
        assert_eq!(
            w0.hilbert_basis,
            vec![vec![bi(0), bi(-1)], vec![bi(1), bi(-1)], vec![bi(2), bi(-1)]]
        );
    }

    #[test]
    fn incomplete_fans_are_rejected() {
        let orthant = crate::fan::Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        );
        assert!(matches!(decomposition_applies(&orthant), Err(Error::NotComplete)));
        assert!(matches!(regularity_report(&orthant), Err(Error::NotComplete)));
    }

    #[test]
    fn k1_obstruction_needs_a_surface() {
        let p3 = make_projective_space_fan(3);
        assert!(matches!(
            surface_k1_obstruction(&p3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn k1_unknown_on_smooth_and_p113() {
        let p2 = make_projective_space_fan(2);
        let rep = regularity_report(&p2).unwrap();
        assert_eq!(rep.k1, K1Verdict::Unknown);
        assert!(rep.k1_witnesses.is_empty());

        let w = make_wps_fan(&[bi(1), bi(1), bi(3)]).unwrap();
        let rep = regularity_report(&w.fan).unwrap();
        assert_eq!(rep.k1, K1Verdict::Unknown);
        assert!(rep.k1_witnesses.is_empty());
    }

    #[test]
    fn p1124_gets_k_minus_one_note() {
        let w = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)]).unwrap();
        let rep = regularity_report(&w.fan).unwrap();
        assert!(matches!(rep.k0, K0Verdict::Unknown));
        assert!(rep.notes.iter().any(|n| n.contains("K_{-1}")));
        let upgraded = rep.with_forms_obstruction("H^3 slice witness".into());
        assert!(matches!(upgraded.k0, K0Verdict::NotRegular { .. }));
    }

    #[test]
    fn verdict_monotonicity() {
        let p2 = make_projective_space_fan(2);
        let rep = regularity_report(&p2).unwrap();
        let before = matches!(rep.k0, K0Verdict::Regular { .. });
        let after = rep.with_forms_obstruction("spurious".into());
        assert_eq!(before, matches!(after.k0, K0Verdict::Regular { .. }));
    }
}
