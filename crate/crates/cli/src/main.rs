//! Command-line surface for the toric KH toolkit: fan validation, weighted
//! projective constructions, KH multiplicity vectors and comparisons,
//! K-regularity verdicts, star subdivisions, nerve summaries, and graded
//! differential-form witnesses.
//!
//! Exit codes: 0 success, 1 computational verdict NONE / NOT_*, 2 input
//! error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use toric_kh::fan::{completeness_report, is_smooth_cone, singular_locus, validate_fan, Cone, Fan};
use toric_kh::forms::{
    graded_cech_complex, top_cokernel_witness, GeneratorMode, GradedCechComplex, WitnessVerdict,
};
use toric_kh::io::{bigint_value, emit_fan, emit_report, parse_fan, parse_fan_raw, Report, ReportFormat};
use toric_kh::kh::{compare_kh, kh_multiplicities};
use toric_kh::nerve::{build_nerve, verify_simplicial_identities, NerveMode};
use toric_kh::regularity::{regularity_report, K0Verdict, K1Verdict};
use toric_kh::{make_wps_fan, star_fan_of_ray, star_subdivision, Error};

#[derive(Parser)]
#[command(name = "toric-kh", version, about = "Exact KH multiplicities, K-regularity, and singularity data of complete simplicial toric varieties")]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Hilbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum NerveModeArg {
    Full,
    Alt,
}

#[derive(Subcommand)]
enum Command {
    /// Fan-file validation, completeness, and singular locus
    Fan {
        #[command(subcommand)]
        sub: FanSub,
    },
    /// Construct a weighted projective fan and report rays and singularities
    Wps {
        /// Weights q0 q1 ... qd
        #[arg(required = true, num_args = 2..)]
        weights: Vec<String>,
    },
    /// KH multiplicity vector of a complete simplicial fan
    #[command(args_conflicts_with_subcommands = true)]
    Kh {
        #[command(subcommand)]
        sub: Option<KhSub>,
        file: Option<PathBuf>,
        /// Include the per-(weight, degree) rank table
        #[arg(long)]
        full_table: bool,
    },
    /// Star subdivision at a new ray
    Resolve {
        file: PathBuf,
        /// Ray coordinates, comma separated
        #[arg(long)]
        ray: String,
    },
    /// Star fan of an existing ray
    Star {
        file: PathBuf,
        /// Ray coordinates, comma separated
        #[arg(long)]
        ray: String,
    },
    /// K-regularity verdicts
    Regularity { file: PathBuf },
    /// Graded differential-form complex at a multidegree, with optional
    /// witness check
    Forms {
        file: PathBuf,
        /// Form degree j
        #[arg(long)]
        j: usize,
        /// Multidegree, comma separated (log grading)
        #[arg(long)]
        mu: String,
        /// Generator mode; both run when omitted
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Witness class in log coordinates, comma separated rationals
        #[arg(long)]
        witness: Option<String>,
    },
    /// Nerve summary of the maximal-cone cover
    Nerve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = NerveModeArg::Alt)]
        mode: NerveModeArg,
        /// Check the simplicial identities exhaustively (full mode)
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum KhSub {
    /// Compare two fans: isomorphism search, isogeny table, vector equality
    Compare { file_x: PathBuf, file_y: PathBuf },
}

#[derive(Subcommand)]
enum FanSub {
    /// Validate a fan file and report completeness and singularities
    Check { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Human => ReportFormat::Human,
        FormatArg::Machine => ReportFormat::Machine,
    };
    match dispatch(&cli.command) {
        Ok((report, code)) => {
            let text = emit_report(&report, format);
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
                if matches!(format, ReportFormat::Machine) {
                    println!();
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<(Report, u8), Error> {
    match cmd {
        Command::Fan { sub: FanSub::Check { file } } => fan_check(file),
        Command::Wps { weights } => wps(weights),
        Command::Kh { sub: Some(KhSub::Compare { file_x, file_y }), .. } => kh_compare(file_x, file_y),
        Command::Kh { sub: None, file, full_table } => {
            let file = file.as_ref().ok_or_else(|| Error::Parse("kh needs a fan file".into()))?;
            kh(file, *full_table)
        }
        Command::Resolve { file, ray } => resolve(file, ray),
        Command::Star { file, ray } => star(file, ray),
        Command::Regularity { file } => regularity(file),
        Command::Forms { file, j, mu, mode, witness } => {
            forms(file, *j, mu, *mode, witness.as_deref())
        }
        Command::Nerve { file, mode, verify } => nerve(file, *mode, *verify),
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn parse_int_list(text: &str, what: &str) -> Result<Vec<BigInt>, Error> {
    text.split(',')
        .map(|p| {
            BigInt::from_str(p.trim())
                .map_err(|_| Error::Parse(format!("{what}: {p:?} is not an integer")))
        })
        .collect()
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<BigRational>, Error> {
    text.split(',')
        .map(|p| {
            BigRational::from_str(p.trim())
                .map_err(|_| Error::Parse(format!("{what}: {p:?} is not a rational")))
        })
        .collect()
}

fn int_vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(bigint_value).collect())
}

fn cone_value(cone: &Cone) -> Value {
    Value::Array(cone.ray_indices().iter().map(|&i| json!(i)).collect())
}

fn fan_input_value(path: &Path, fan: &Fan, label: Option<&str>) -> Value {
    json!({
        "file": path.display().to_string(),
        "label": label,
        "dim": fan.dim,
        "rays": fan.rays.len(),
        "max_cones": fan.max_cones.len(),
    })
}

fn singularity_value(fan: &Fan) -> Value {
    let rep = singular_locus(fan);
    json!({
        "singular_locus_dim": rep.singular_locus_dim,
        "singular_cones": rep.singular_cones.iter().map(cone_value).collect::<Vec<_>>(),
    })
}

fn multiplicities_value(mult: &std::collections::BTreeMap<i64, usize>) -> Value {
    let mut map = serde_json::Map::new();
    for (o, m) in mult {
        map.insert(o.to_string(), json!(m));
    }
    Value::Object(map)
}

fn fan_check(path: &Path) -> Result<(Report, u8), Error> {
    let text = read_file(path)?;
    let parsed = parse_fan_raw(&text)?;
    let mut report = Report::new("fan check")
        .input("file", json!(path.display().to_string()))
        .input("label", json!(parsed.label));
    report.warnings = parsed.warnings.clone();
    match validate_fan(&parsed.fan) {
        Err(violation) => {
            report = report
                .result("verdict", json!("NOT_VALID"))
                .result("violation", json!(violation.to_string()));
            Ok((report, 1))
        }
        Ok(()) => {
            let completeness = completeness_report(&parsed.fan);
            report = report
                .result("verdict", json!("VALID"))
                .result("complete", json!(completeness.complete))
                .result("connected", json!(completeness.connected))
                .result(
                    "bad_walls",
                    Value::Array(
                        completeness
                            .bad_walls
                            .iter()
                            .map(|(w, c)| json!({ "wall": w, "cone_count": c }))
                            .collect(),
                    ),
                )
                .result("singularity", singularity_value(&parsed.fan));
            Ok((report, 0))
        }
    }
}

fn wps(weights: &[String]) -> Result<(Report, u8), Error> {
    let weights: Vec<BigInt> = weights
        .iter()
        .map(|w| BigInt::from_str(w).map_err(|_| Error::Parse(format!("{w:?} is not an integer"))))
        .collect::<Result<_, _>>()?;
    let built = make_wps_fan(&weights)?;
    let mut report = Report::new("wps").input("weights", int_vec_value(&weights));
    report.warnings = built.warnings.clone();
    let completeness = completeness_report(&built.fan);
    report = report
        .result("dim", json!(built.fan.dim))
        .result(
            "rays",
            Value::Array(built.fan.rays.iter().map(|r| int_vec_value(r)).collect()),
        )
        .result(
            "max_cones",
            Value::Array(built.fan.max_cones.iter().map(cone_value).collect()),
        )
        .result("complete", json!(completeness.complete))
        .result("singularity", singularity_value(&built.fan))
        .result("fan", emit_fan(&built.fan, None));
    Ok((report, 0))
}

fn kh(path: &Path, full_table: bool) -> Result<(Report, u8), Error> {
    let text = read_file(path)?;
    let parsed = parse_fan(&text)?;
    let result = kh_multiplicities(&parsed.fan)?;
    let mut report = Report::new("kh")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .result("multiplicities", multiplicities_value(&result.vector.mult));
    if full_table {
        report = report.result(
            "table",
            Value::Array(
                result
                    .table
                    .iter()
                    .map(|(s, p, h)| json!({ "weight": s, "degree": p, "rank": h }))
                    .collect(),
            ),
        );
    }
    report.warnings = parsed.warnings;
    report.assumptions = result.assumptions;
    Ok((report, 0))
}

fn kh_compare(path_x: &Path, path_y: &Path) -> Result<(Report, u8), Error> {
    let x = parse_fan(&read_file(path_x)?)?;
    let y = parse_fan(&read_file(path_y)?)?;
    let mut report = Report::new("kh compare")
        .input("fan_x", fan_input_value(path_x, &x.fan, x.label.as_deref()))
        .input("fan_y", fan_input_value(path_y, &y.fan, y.label.as_deref()));
    match compare_kh(&x.fan, &y.fan) {
        Err(Error::NoRationalIsomorphism) => {
            report = report.result("verdict", json!("NONE"));
            Ok((report, 1))
        }
        Err(other) => Err(other),
        Ok(cmp) => {
            report = report
                .result("verdict", json!(if cmp.equal { "EQUAL" } else { "MISMATCH" }))
                .result("rational_isomorphism", json!({
                    "matrix": matrix_value(&cmp.iso.map.matrix),
                    "ray_bijection": cmp.iso.ray_bijection,
                    "scalings": cmp.iso.scalings.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                }))
                .result(
                    "isogeny_degrees",
                    Value::Array(
                        cmp.degree_table()
                            .iter()
                            .map(|(level, tuple, deg)| {
                                json!({ "level": level, "tuple": tuple, "degree": deg.to_string() })
                            })
                            .collect(),
                    ),
                )
                .result("multiplicities_x", multiplicities_value(&cmp.vector_x.mult))
                .result("multiplicities_y", multiplicities_value(&cmp.vector_y.mult));
            report.assumptions = cmp.assumptions;
            Ok((report, if cmp.equal { 0 } else { 1 }))
        }
    }
}

fn matrix_value(m: &toric_kh::IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| bigint_value(&m[(i, j)])).collect()))
            .collect(),
    )
}

fn resolve(path: &Path, ray: &str) -> Result<(Report, u8), Error> {
    let parsed = parse_fan(&read_file(path)?)?;
    let ray = parse_int_list(ray, "--ray")?;
    let subdivided = star_subdivision(&parsed.fan, &ray)?;
    let all_smooth = subdivided
        .all_faces()
        .iter()
        .all(|c| is_smooth_cone(&subdivided, c));
    let report = Report::new("resolve")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .input("ray", int_vec_value(&ray))
        .result("fan", emit_fan(&subdivided, None))
        .result("max_cones", json!(subdivided.max_cones.len()))
        .result("smooth", json!(all_smooth))
        .result("complete", json!(completeness_report(&subdivided).complete))
        .result("singularity", singularity_value(&subdivided));
    Ok((report, 0))
}

fn star(path: &Path, ray: &str) -> Result<(Report, u8), Error> {
    let parsed = parse_fan(&read_file(path)?)?;
    let ray = parse_int_list(ray, "--ray")?;
    let star = star_fan_of_ray(&parsed.fan, &ray)?;
    let report = Report::new("star")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .input("ray", int_vec_value(&ray))
        .result("fan", emit_fan(&star, None))
        .result("dim", json!(star.dim))
        .result("complete", json!(completeness_report(&star).complete));
    Ok((report, 0))
}

fn regularity(path: &Path) -> Result<(Report, u8), Error> {
    let parsed = parse_fan(&read_file(path)?)?;
    let rep = regularity_report(&parsed.fan)?;
    let k0 = match &rep.k0 {
        K0Verdict::Regular { reason } => json!({ "verdict": "REGULAR", "reason": reason }),
        K0Verdict::Unknown => json!({ "verdict": "UNKNOWN" }),
        K0Verdict::NotRegular { witness } => {
            json!({ "verdict": "NOT_REGULAR", "witness": witness })
        }
    };
    let k1 = match rep.k1 {
        K1Verdict::NotRegular => "NOT_REGULAR",
        K1Verdict::Unknown => "UNKNOWN",
    };
    let mut report = Report::new("regularity")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .result("dim", json!(rep.dim))
        .result("complete", json!(rep.complete))
        .result("singularity", json!({
            "singular_locus_dim": rep.singularity.singular_locus_dim,
            "singular_cones": rep.singularity.singular_cones.iter().map(cone_value).collect::<Vec<_>>(),
        }))
        .result("decomposition", json!({
            "applies": rep.decomposition.applies,
            "reason": rep.decomposition.reason,
            "witness": rep.decomposition.witness.as_ref().map(|(cone, rays)| json!({
                "cone": cone_value(cone),
                "rays": rays.iter().map(|r| int_vec_value(r)).collect::<Vec<_>>(),
            })),
        }))
        .result("k0", k0)
        .result("k1", json!({
            "verdict": k1,
            "witnesses": rep.k1_witnesses.iter().map(|w| json!({
                "cone": cone_value(&w.cone),
                "rays": w.rays.iter().map(|r| int_vec_value(r)).collect::<Vec<_>>(),
                "normal_form": [w.normal_form.0.to_string(), w.normal_form.1.to_string()],
                "hilbert_basis": w.hilbert_basis.iter().map(|h| int_vec_value(h)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }))
        .result("k_negative_note", json!(rep.k_negative_note))
        .result("notes", json!(rep.notes));
    report.warnings = parsed.warnings;
    report.assumptions = rep.assumptions;
    let k0_bad = matches!(rep.k0, K0Verdict::NotRegular { .. });
    let k1_bad = matches!(rep.k1, K1Verdict::NotRegular);
    Ok((report, if k0_bad || k1_bad { 1 } else { 0 }))
}

fn forms_mode_value(
    fan: &Fan,
    j: usize,
    mu: &[BigInt],
    mode: GeneratorMode,
    witness: Option<&[BigRational]>,
) -> Result<(Value, Vec<String>), Error> {
    let complex: GradedCechComplex = graded_cech_complex(fan, j, mu, mode)?;
    let mut obj = serde_json::Map::new();
    obj.insert("degrees".into(), json!(complex.degrees));
    obj.insert(
        "term_dims".into(),
        json!((0..complex.degrees.len())
            .map(|l| complex.term_dim(l))
            .collect::<Vec<_>>()),
    );
    obj.insert(
        "slice_dims".into(),
        Value::Array(
            complex
                .slices
                .iter()
                .zip(&complex.cells)
                .map(|(level, cells)| {
                    Value::Array(
                        level
                            .iter()
                            .zip(cells)
                            .map(|(s, t)| json!({ "cells": t, "dim": s.basis.len() }))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    if let Some(class) = witness {
        let verdict = top_cokernel_witness(&complex, class)?;
        obj.insert(
            "witness_verdict".into(),
            json!(match verdict {
                WitnessVerdict::InImage => "IN_IMAGE",
                WitnessVerdict::NonzeroClass => "NONZERO_CLASS",
            }),
        );
    }
    Ok((Value::Object(obj), complex.warnings))
}

fn forms(
    path: &Path,
    j: usize,
    mu: &str,
    mode: Option<ModeArg>,
    witness: Option<&str>,
) -> Result<(Report, u8), Error> {
    let parsed = parse_fan(&read_file(path)?)?;
    let mu = parse_int_list(mu, "--mu")?;
    let witness = witness
        .map(|w| parse_rational_list(w, "--witness"))
        .transpose()?;
    let mut report = Report::new("forms")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .input("j", json!(j))
        .input("mu", int_vec_value(&mu));
    let mut warnings = parsed.warnings.clone();
    let modes: Vec<(GeneratorMode, &str)> = match mode {
        Some(ModeArg::Paper) => vec![(GeneratorMode::PaperList, "paper")],
        Some(ModeArg::Hilbert) => vec![(GeneratorMode::Hilbert, "hilbert")],
        None => vec![
            (GeneratorMode::PaperList, "paper"),
            (GeneratorMode::Hilbert, "hilbert"),
        ],
    };
    for (gm, name) in modes {
        match forms_mode_value(&parsed.fan, j, &mu, gm, witness.as_deref()) {
            Ok((value, mode_warnings)) => {
                report = report.result(name, value);
                warnings.extend(mode_warnings);
            }
            Err(Error::UnknownPaperChart(cone)) if mode.is_none() => {
                // only the explicitly requested mode is allowed to fail hard
                report = report.result(
                    name,
                    json!({ "unavailable": format!("no catalogued chart generators for cone {cone:?}") }),
                );
            }
            Err(e) => return Err(e),
        }
    }
    report.warnings = warnings;
    Ok((report, 0))
}

fn nerve(path: &Path, mode: NerveModeArg, verify: bool) -> Result<(Report, u8), Error> {
    let parsed = parse_fan(&read_file(path)?)?;
    let m = parsed.fan.max_cones.len();
    let (nerve_mode, p_max) = match mode {
        NerveModeArg::Alt => (NerveMode::Alternating, m.saturating_sub(1)),
        NerveModeArg::Full => (NerveMode::Full, m.min(3)),
    };
    let nerve = build_nerve(&parsed.fan, nerve_mode, p_max)?;
    let levels: Vec<Value> = nerve
        .levels
        .iter()
        .enumerate()
        .map(|(p, cells)| {
            let mut by_rank: std::collections::BTreeMap<usize, usize> = Default::default();
            for c in cells {
                *by_rank.entry(c.torus_rank).or_insert(0) += 1;
            }
            json!({
                "level": p,
                "cells": cells.len(),
                "torus_ranks": by_rank.iter().map(|(r, n)| json!({"rank": r, "cells": n})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut report = Report::new("nerve")
        .input("fan", fan_input_value(path, &parsed.fan, parsed.label.as_deref()))
        .input("mode", json!(match mode { NerveModeArg::Alt => "alt", NerveModeArg::Full => "full" }))
        .result("levels", Value::Array(levels));
    report.warnings = parsed.warnings;
    if verify {
        let full = if matches!(nerve_mode, NerveMode::Full) {
            nerve
        } else {
            build_nerve(&parsed.fan, NerveMode::Full, m.min(3))?
        };
        match verify_simplicial_identities(&full) {
            Ok(()) => {
                report = report.result("simplicial_identities", json!("OK"));
                Ok((report, 0))
            }
            Err(msg) => {
                report = report.result("simplicial_identities", json!(format!("FAILED: {msg}")));
                Ok((report, 1))
            }
        }
    } else {
        Ok((report, 0))
    }
}
