//! Deterministic self-verification suites: exact certificate checks that the
//! integration tests and the acceptance gate both run. Each routine returns
//! the first failure as a message.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fan::{completeness_report, make_projective_space_fan, make_wps_fan, Cone, Fan};
use crate::kh::{
    build_weight_complex, build_weight_complex_normalized, cohomology_ranks, exterior_power,
    k_subsets,
};
use crate::mat::{bi, IntMatrix};
use crate::nerve::{build_nerve, verify_simplicial_identities, NerveMode};
use crate::sampling::{sample_points, Xorshift};
use crate::snf::snf;

type Check = Result<(), String>;

fn random_matrix(rng: &mut Xorshift, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| bi(rng.next_range(-bound, bound)))
}

/// Weighted projective fixtures used across the suites.
pub fn wps_fixtures() -> Vec<(String, Fan)> {
    let weight_sets: Vec<Vec<i64>> = vec![
        vec![1, 1],
        vec![1, 1, 1],
        vec![1, 1, 2],
        vec![1, 1, 3],
        vec![1, 2, 3],
        vec![2, 3, 5],
        vec![3, 4, 5],
        vec![5, 7, 9],
        vec![1, 1, 1, 1],
        vec![1, 1, 1, 2],
        vec![1, 1, 2, 4],
        vec![1, 2, 3, 5],
        vec![2, 3, 5, 7],
    ];
    weight_sets
        .into_iter()
        .map(|ws| {
            let weights: Vec<BigInt> = ws.iter().map(|&w| bi(w)).collect();
            let fan = make_wps_fan(&weights).expect("fixture weights are valid").fan;
            (format!("P{ws:?}"), fan)
        })
        .collect()
}

/// Smith certificates U*A*V = D, unimodularity, and the divisibility chain on
/// random matrices.
pub fn check_snf_certificates(count: usize, max_size: usize, bound: i64) -> Check {
    let mut rng = Xorshift::new(0x5eed_0001);
    for i in 0..count {
        let rows = rng.next_range(1, max_size as i64) as usize;
        let cols = rng.next_range(1, max_size as i64) as usize;
        let a = random_matrix(&mut rng, rows, cols, bound);
        let dec = snf(&a);
        if !dec.verify(&a) {
            return Err(format!("certificate failed at sample {i}"));
        }
        if !dec.u.det().abs().is_one() || !dec.v.det().abs().is_one() {
            return Err(format!("non-unimodular factor at sample {i}"));
        }
    }
    Ok(())
}

/// The simplicial identities, exhaustively, on full-mode nerves of all
/// weighted projective fixtures of dimension <= 3.
pub fn check_simplicial_identities() -> Check {
    for (name, fan) in wps_fixtures() {
        if fan.dim > 3 {
            continue;
        }
        let nerve = build_nerve(&fan, NerveMode::Full, 3).map_err(|e| e.to_string())?;
        verify_simplicial_identities(&nerve).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

/// d compose d = 0 for every weight complex of every fixture (asserted in the
/// builder), plus the Euler characteristic identity.
pub fn check_weight_complexes() -> Check {
    let mut fans = wps_fixtures();
    fans.push(("P4".into(), make_projective_space_fan(4)));
    for (name, fan) in fans {
        let m = fan.max_cones.len();
        let nerve = build_nerve(&fan, NerveMode::Alternating, m - 1).map_err(|e| e.to_string())?;
        for s in 0..=fan.dim {
            let wc = build_weight_complex(&nerve, s).map_err(|e| e.to_string())?;
            let ranks = cohomology_ranks(&wc);
            let mut chi_dim = 0i64;
            let mut chi_h = 0i64;
            for p in 0..wc.terms.len() {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                chi_dim += sign * wc.terms[p].dim() as i64;
                chi_h += sign * ranks[p] as i64;
            }
            if chi_dim != chi_h {
                return Err(format!("{name}: Euler characteristic mismatch at weight {s}"));
            }
        }
    }
    Ok(())
}

/// Alternating-mode cohomology equals the normalized full-mode cohomology on
/// the line and the plane.
pub fn check_alternating_vs_full() -> Check {
    for fan in [make_projective_space_fan(1), make_projective_space_fan(2)] {
        let m = fan.max_cones.len();
        let alt = build_nerve(&fan, NerveMode::Alternating, m - 1).map_err(|e| e.to_string())?;
        let full = build_nerve(&fan, NerveMode::Full, m).map_err(|e| e.to_string())?;
        for s in 0..=fan.dim {
            let a = cohomology_ranks(&build_weight_complex(&alt, s).map_err(|e| e.to_string())?);
            let f = cohomology_ranks(
                &build_weight_complex_normalized(&full, s).map_err(|e| e.to_string())?,
            );
            if a[..m] != f[..m] {
                return Err(format!("mode disagreement at weight {s}: {a:?} vs {f:?}"));
            }
        }
    }
    Ok(())
}

/// Functoriality of exterior powers on random pairs (Cauchy-Binet).
pub fn check_exterior_functoriality(pairs: usize) -> Check {
    let mut rng = Xorshift::new(0x5eed_0006);
    for i in 0..pairs {
        let m = rng.next_range(1, 4) as usize;
        let n = rng.next_range(1, 4) as usize;
        let p = rng.next_range(1, 4) as usize;
        let a = random_matrix(&mut rng, m, n, 5).to_q();
        let b = random_matrix(&mut rng, n, p, 5).to_q();
        let s = rng.next_range(0, 3) as usize;
        if exterior_power(&a.matmul(&b), s)
            != exterior_power(&a, s).matmul(&exterior_power(&b, s))
        {
            return Err(format!("functoriality failed at pair {i}"));
        }
    }
    Ok(())
}

/// Wall-criterion completeness agrees with the sampling oracle on the
/// fixtures plus two deliberately incomplete fans.
pub fn check_completeness_oracle() -> Check {
    let mut fixtures = wps_fixtures();
    fixtures.push(("P3".into(), make_projective_space_fan(3)));
    fixtures.push(("P4".into(), make_projective_space_fan(4)));
    fixtures.push((
        "orthant".into(),
        Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            vec![Cone::new(vec![0, 1])],
        ),
    ));
    fixtures.push((
        "half plane".into(),
        Fan::new(
            2,
            vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)], vec![bi(-1), bi(0)]],
            vec![Cone::new(vec![0, 1]), Cone::new(vec![1, 2])],
        ),
    ));
    for (name, fan) in fixtures {
        let report = completeness_report(&fan);
        let points = sample_points(fan.dim, 1000, 0xabcdef);
        if report.complete {
            if points.iter().any(|pt| !fan.support_contains(pt)) {
                return Err(format!("{name}: sampled point escapes a complete fan"));
            }
        } else {
            let witness = points.iter().any(|pt| !fan.support_contains(pt));
            if !(witness || !report.bad_walls.is_empty() || !report.connected) {
                return Err(format!("{name}: incompleteness has no witness"));
            }
        }
    }
    Ok(())
}

/// d compose d = 0 on graded differential-form complexes across charts,
/// degrees, and multidegrees.
pub fn check_graded_forms_complexes() -> Check {
    use crate::forms::{graded_cech_complex, GeneratorMode};
    let p1124 = make_wps_fan(&[bi(1), bi(1), bi(2), bi(4)])
        .expect("valid weights")
        .fan;
    let p3 = make_projective_space_fan(3);
    let mus: Vec<Vec<BigInt>> = vec![
        vec![bi(0), bi(0), bi(-1)],
        vec![bi(0), bi(0), bi(0)],
        vec![bi(-1), bi(1), bi(-2)],
        vec![bi(2), bi(-1), bi(0)],
    ];
    for fan in [&p1124, &p3] {
        for j in 0..=2usize {
            for mu in &mus {
                let cx = graded_cech_complex(fan, j, mu, GeneratorMode::Hilbert)
                    .map_err(|e| e.to_string())?;
                for w in cx.differentials.windows(2) {
                    if !w[1].matmul(&w[0]).is_zero() {
                        return Err(format!("d*d != 0 at j={j}, mu={mu:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// On a diagonal map the weight-s action scales each subset generator by the
/// product of the selected diagonal entries.
pub fn check_diagonal_scaling() -> Check {
    let mut rng = Xorshift::new(0x5eed_0007);
    for _ in 0..50 {
        let r = rng.next_range(1, 5) as usize;
        let entries: Vec<BigInt> = (0..r).map(|_| bi(rng.next_range(1, 9))).collect();
        let diag = IntMatrix::from_fn(r, r, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                BigInt::zero()
            }
        });
        for s in 0..=r {
            let pow = exterior_power(&diag.to_q(), s);
            let subsets = k_subsets(r, s);
            for (i, subset) in subsets.iter().enumerate() {
                for j in 0..subsets.len() {
                    let expected = if i == j {
                        let mut prod = BigInt::one();
                        for &k in subset {
                            prod *= &entries[k];
                        }
                        BigRational::from_integer(prod)
                    } else {
                        BigRational::zero()
                    };
                    if pow[(i, j)] != expected {
                        return Err("diagonal scaling mismatch".into());
                    }
                }
            }
        }
    }
    Ok(())
}
