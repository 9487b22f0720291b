//! JSON wire formats: fans, desingularization traces, factorization
//! scripts, weight-action reports, monomial ideals, Newton subdivisions,
//! and circuit-order certificates.
//!
//! Integers are emitted as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise, and both encodings are accepted on input, so
//! files stay readable without capping the arithmetic.

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::cobordism::FanProfile;
use crate::desing::{DesingTrace, StepKind};
use crate::error::{Error, Result};
use crate::factor::{FactorizationReport, FactorizationStep, OrderCertificate, WeightActionReport};
use crate::fan::{make_fan, Fan, ValidateLevel};
use crate::ideal::{MonomialIdeal, NewtonSubdivision};
use crate::IntVec;

/// An integer on the wire: a number when it fits, a decimal string when it
/// does not.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

pub fn int_to_json(x: &BigInt) -> JsonInt {
    match i64::try_from(x) {
        Ok(small) => JsonInt::Small(small),
        Err(_) => JsonInt::Big(x.to_string()),
    }
}

pub fn json_to_int(j: &JsonInt) -> Result<BigInt> {
    match j {
        JsonInt::Small(x) => Ok(BigInt::from(*x)),
        JsonInt::Big(s) => s
            .parse()
            .map_err(|_| Error::Invalid(format!("bad integer literal {s:?}"))),
    }
}

pub fn vec_to_json(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().map(int_to_json).collect()
}

pub fn json_to_vec(v: &[JsonInt]) -> Result<IntVec> {
    v.iter().map(json_to_int).collect()
}

fn mat_to_json(m: &[IntVec]) -> Vec<Vec<JsonInt>> {
    m.iter().map(|row| vec_to_json(row)).collect()
}

fn json_to_mat(m: &[Vec<JsonInt>]) -> Result<Vec<IntVec>> {
    m.iter().map(|row| json_to_vec(row)).collect()
}

/// Pretty-printed JSON with a trailing newline; the single serialization
/// used for file output, so identical values give identical bytes.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}

const FORMAT: u32 = 1;

fn format_version() -> u32 {
    FORMAT
}

fn check_format(format: u32, what: &str) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Invalid(format!(
            "unsupported {what} format {format} (this build reads format {FORMAT})"
        )));
    }
    Ok(())
}

/// Wire form of a fan: primitive rays and maximal cones as ray-index lists.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FanJson {
    #[serde(default = "format_version")]
    pub format: u32,
    pub ambient_rank: usize,
    pub cobordism: bool,
    pub rays: Vec<Vec<JsonInt>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

pub fn fan_to_json(fan: &Fan) -> FanJson {
    FanJson {
        format: FORMAT,
        ambient_rank: fan.ambient_rank(),
        cobordism: fan.is_cobordism(),
        rays: mat_to_json(fan.rays()),
        maximal_cones: fan
            .maximal_cones()
            .iter()
            .map(|c| c.ray_ids().to_vec())
            .collect(),
    }
}

pub fn fan_from_json(json: &FanJson, level: ValidateLevel) -> Result<Fan> {
    check_format(json.format, "fan")?;
    let rays = json_to_mat(&json.rays)?;
    make_fan(
        json.ambient_rank,
        &rays,
        &json.maximal_cones,
        json.cobordism,
        level,
    )
}

pub fn parse_fan(text: &str, level: ValidateLevel) -> Result<Fan> {
    let json: FanJson =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad fan JSON: {e}")))?;
    fan_from_json(&json, level)
}

pub fn fan_to_string(fan: &Fan) -> String {
    to_pretty(&fan_to_json(fan))
}

/// Wire form of a fan profile (the lexicographic invariant the
/// desingularization drives down).
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ProfileJson {
    pub mult: JsonInt,
    pub b: u8,
    pub k: u32,
    pub r: u32,
    pub s: usize,
}

fn profile_to_json(p: &FanProfile) -> ProfileJson {
    ProfileJson {
        mult: int_to_json(&p.g.mult),
        b: p.g.b,
        k: p.g.k,
        r: p.g.r,
        s: p.s,
    }
}

/// One line of a JSON-lines subdivision trace.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TraceLineJson {
    pub step: String,
    pub center_ray: Vec<JsonInt>,
    pub profile: ProfileJson,
    pub outer_iteration: usize,
}

/// Serializes a desingularization trace as JSON lines (one compact object
/// per subdivision).
pub fn trace_lines(trace: &DesingTrace) -> Vec<String> {
    trace
        .entries
        .iter()
        .map(|entry| {
            let line = TraceLineJson {
                step: entry.step_kind.wire_name().to_string(),
                center_ray: vec_to_json(&entry.center_ray),
                profile: profile_to_json(&entry.fan_profile_after),
                outer_iteration: entry.outer_iteration,
            };
            serde_json::to_string(&line).expect("serialization cannot fail")
        })
        .collect()
}

pub fn parse_trace_line(line: &str) -> Result<TraceLineJson> {
    let parsed: TraceLineJson = serde_json::from_str(line)
        .map_err(|e| Error::Invalid(format!("bad trace line: {e}")))?;
    if StepKind::from_wire_name(&parsed.step).is_none() {
        return Err(Error::Invalid(format!("unknown trace step {:?}", parsed.step)));
    }
    Ok(parsed)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorStepJson {
    pub circuit_rays: Vec<Vec<JsonInt>>,
    pub v: Vec<JsonInt>,
    pub lower_fan: FanJson,
    pub upper_fan: FanJson,
    pub middle_fan: FanJson,
    pub lower_center: Vec<Vec<JsonInt>>,
    pub upper_center: Vec<Vec<JsonInt>>,
    pub lower_degenerate: bool,
    pub upper_degenerate: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DesingSummaryJson {
    pub performed: bool,
    pub subdivisions: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CenterSmoothnessJson {
    pub lower: bool,
    pub upper: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorReportJson {
    pub initial_lower_fan: FanJson,
    pub final_upper_fan: FanJson,
    pub center_smoothness: Vec<CenterSmoothnessJson>,
    pub chain_consistent: bool,
    pub non_degenerate_steps: usize,
}

/// Complete factorization output: the blowup/blowdown script plus the
/// verification report and human-readable summary.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorScriptJson {
    #[serde(default = "format_version")]
    pub format: u32,
    pub desing: DesingSummaryJson,
    pub steps: Vec<FactorStepJson>,
    pub report: FactorReportJson,
    pub summary: Vec<String>,
}

pub fn factor_script_json(
    steps: &[FactorizationStep],
    report: &FactorizationReport,
) -> FactorScriptJson {
    FactorScriptJson {
        format: FORMAT,
        desing: DesingSummaryJson {
            performed: report.desing_performed,
            subdivisions: report.desing_subdivisions,
        },
        steps: steps
            .iter()
            .map(|s| FactorStepJson {
                circuit_rays: mat_to_json(&s.circuit_rays),
                v: vec_to_json(&s.v),
                lower_fan: fan_to_json(&s.lower_fan),
                upper_fan: fan_to_json(&s.upper_fan),
                middle_fan: fan_to_json(&s.middle_fan),
                lower_center: mat_to_json(&s.lower_fan.cone_rays(&s.lower_center)),
                upper_center: mat_to_json(&s.upper_fan.cone_rays(&s.upper_center)),
                lower_degenerate: s.lower_degenerate,
                upper_degenerate: s.upper_degenerate,
            })
            .collect(),
        report: FactorReportJson {
            initial_lower_fan: fan_to_json(&report.initial_lower_fan),
            final_upper_fan: fan_to_json(&report.final_upper_fan),
            center_smoothness: report
                .center_smoothness
                .iter()
                .map(|c| CenterSmoothnessJson { lower: c.lower, upper: c.upper })
                .collect(),
            chain_consistent: report.chain_consistent,
            non_degenerate_steps: report.non_degenerate_steps,
        },
        summary: report.summary.clone(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct WeightReportJson {
    #[serde(default = "format_version")]
    pub format: u32,
    pub weights: Vec<JsonInt>,
    pub alpha_split: usize,
    pub cobordism_fan: FanJson,
    pub lower_quotient_fan: FanJson,
    pub upper_quotient_fan: FanJson,
    pub fiber_weights_minus: Option<Vec<JsonInt>>,
    pub fiber_weights_plus: Option<Vec<JsonInt>>,
}

pub fn weight_report_json(report: &WeightActionReport) -> WeightReportJson {
    WeightReportJson {
        format: FORMAT,
        weights: vec_to_json(&report.weights),
        alpha_split: report.alpha_split,
        cobordism_fan: fan_to_json(&report.cobordism_fan),
        lower_quotient_fan: fan_to_json(&report.lower_quotient_fan),
        upper_quotient_fan: fan_to_json(&report.upper_quotient_fan),
        fiber_weights_minus: report.fiber_weights_minus.as_deref().map(vec_to_json),
        fiber_weights_plus: report.fiber_weights_plus.as_deref().map(vec_to_json),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IdealJson {
    pub chart_rank: usize,
    pub poly_count: usize,
    pub generators: Vec<Vec<JsonInt>>,
}

pub fn ideal_to_json(ideal: &MonomialIdeal) -> IdealJson {
    IdealJson {
        chart_rank: ideal.chart_rank,
        poly_count: ideal.poly_count,
        generators: mat_to_json(&ideal.generators),
    }
}

pub fn ideal_from_json(json: &IdealJson) -> Result<MonomialIdeal> {
    MonomialIdeal::new(json.chart_rank, json.poly_count, json_to_mat(&json.generators)?)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct NewtonCellJson {
    pub rays: Vec<Vec<JsonInt>>,
    pub active_generator: Vec<JsonInt>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct NewtonSubdivisionJson {
    #[serde(default = "format_version")]
    pub format: u32,
    pub base_rays: Vec<Vec<JsonInt>>,
    pub cells: Vec<NewtonCellJson>,
    pub exceptional_rays: Vec<Vec<JsonInt>>,
}

pub fn newton_to_json(sub: &NewtonSubdivision) -> NewtonSubdivisionJson {
    NewtonSubdivisionJson {
        format: FORMAT,
        base_rays: mat_to_json(&sub.base_rays),
        cells: sub
            .cells
            .iter()
            .map(|c| NewtonCellJson {
                rays: mat_to_json(&c.rays),
                active_generator: vec_to_json(&c.active_generator),
            })
            .collect(),
        exceptional_rays: mat_to_json(&sub.exceptional_rays),
    }
}

/// A rational number on the wire: an integer or a `"p/q"` string.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum JsonRat {
    Int(i64),
    Str(String),
}

fn json_to_rat(j: &JsonRat) -> Result<BigRational> {
    let bad = |s: &str| Error::BadCertificate(format!("bad rational literal {s:?}"));
    match j {
        JsonRat::Int(x) => Ok(BigRational::from_integer(BigInt::from(*x))),
        JsonRat::Str(s) => {
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p, q),
                None => (s.as_str(), "1"),
            };
            let numer: BigInt = p.parse().map_err(|_| bad(s))?;
            let denom: BigInt = q.parse().map_err(|_| bad(s))?;
            if denom.is_zero() {
                return Err(Error::BadCertificate(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

fn rat_to_json(x: &BigRational) -> JsonRat {
    if x.denom().is_one() {
        match i64::try_from(x.numer()) {
            Ok(small) => JsonRat::Int(small),
            Err(_) => JsonRat::Str(x.numer().to_string()),
        }
    } else {
        JsonRat::Str(format!("{}/{}", x.numer(), x.denom()))
    }
}

/// One certified circuit: its rays (in the cobordism lattice) and a
/// filtration weight; circuits with smaller weight are crossed first.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CertificateEntryJson {
    pub rays: Vec<Vec<JsonInt>>,
    pub weight: JsonRat,
}

pub fn certificate_from_json(text: &str) -> Result<OrderCertificate> {
    let entries: Vec<CertificateEntryJson> = serde_json::from_str(text)
        .map_err(|e| Error::BadCertificate(format!("bad certificate JSON: {e}")))?;
    let mut cert = OrderCertificate::new();
    for entry in entries {
        let mut rays = json_to_mat(&entry.rays)?;
        rays.sort();
        let weight = json_to_rat(&entry.weight)?;
        if cert.insert(rays, weight).is_some() {
            return Err(Error::BadCertificate(
                "duplicate circuit in certificate".into(),
            ));
        }
    }
    Ok(cert)
}

pub fn certificate_to_json(cert: &OrderCertificate) -> String {
    let entries: Vec<CertificateEntryJson> = cert
        .iter()
        .map(|(rays, weight)| CertificateEntryJson {
            rays: mat_to_json(rays),
            weight: rat_to_json(weight),
        })
        .collect();
    to_pretty(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{cobordism_of_blowup, factorize};
    use crate::fan::Cone;
    use crate::matrix::big;

    fn v(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| big(x)).collect()
    }

    fn e1_fan() -> Fan {
        make_fan(
            3,
            &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 1])],
            &[vec![0, 1, 2]],
            true,
            ValidateLevel::Full,
        )
        .unwrap()
    }

    #[test]
    fn fan_round_trip() {
        let fan = e1_fan();
        let text = fan_to_string(&fan);
        let back = parse_fan(&text, ValidateLevel::Full).unwrap();
        assert_eq!(back.rays(), fan.rays());
        assert_eq!(back.maximal_cones(), fan.maximal_cones());
        assert_eq!(back.ambient_rank(), fan.ambient_rank());
        assert!(back.is_cobordism());
        // serialization is reproducible byte for byte
        assert_eq!(text, fan_to_string(&back));
    }

    #[test]
    fn format_field_defaults_and_rejects() {
        let text = r#"{"ambient_rank":2,"cobordism":false,
                       "rays":[[1,0],[0,1]],"maximal_cones":[[0,1]]}"#;
        assert!(parse_fan(text, ValidateLevel::Full).is_ok());
        let v2 = r#"{"format":2,"ambient_rank":2,"cobordism":false,
                     "rays":[[1,0],[0,1]],"maximal_cones":[[0,1]]}"#;
        assert!(matches!(
            parse_fan(v2, ValidateLevel::Full),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            parse_fan("not json", ValidateLevel::Full),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn huge_integers_ride_as_strings() {
        let huge: BigInt = BigInt::from(1u64) << 80;
        let j = int_to_json(&huge);
        assert!(matches!(&j, JsonInt::Big(s) if s == &huge.to_string()));
        assert_eq!(json_to_int(&j).unwrap(), huge);
        assert_eq!(json_to_int(&JsonInt::Small(-7)).unwrap(), big(-7));
        assert!(json_to_int(&JsonInt::Big("12x".into())).is_err());
    }

    #[test]
    fn trace_lines_round_trip_with_wire_names() {
        let cob = cobordism_of_blowup(
            &make_fan(
                2,
                &[v(&[1, 0]), v(&[0, 1])],
                &[vec![0, 1]],
                false,
                ValidateLevel::Full,
            )
            .unwrap(),
            &Cone::new(vec![0, 1]),
        )
        .unwrap();
        // E1 is already π-nonsingular, so desingularizing produces an empty
        // trace; build one entry by hand instead
        let (_, trace) = crate::desing::pi_desingularize_with_cap(&cob, 100).unwrap();
        assert!(trace.entries.is_empty());
        let line = TraceLineJson {
            step: "prop-finale".into(),
            center_ray: vec_to_json(&v(&[1, 2, 1])),
            profile: ProfileJson { mult: JsonInt::Small(1), b: 1, k: 3, r: 3, s: 1 },
            outer_iteration: 2,
        };
        let text = serde_json::to_string(&line).unwrap();
        let back = parse_trace_line(&text).unwrap();
        assert_eq!(back.step, "prop-finale");
        assert_eq!(json_to_vec(&back.center_ray).unwrap(), v(&[1, 2, 1]));
        assert!(parse_trace_line(r#"{"step":"nope","center_ray":[],
            "profile":{"mult":1,"b":0,"k":0,"r":0,"s":0},"outer_iteration":1}"#)
        .is_err());
    }

    #[test]
    fn factor_script_serializes_the_blowup_round_trip() {
        let a2 = make_fan(
            2,
            &[v(&[1, 0]), v(&[0, 1])],
            &[vec![0, 1]],
            false,
            ValidateLevel::Full,
        )
        .unwrap();
        let cob = cobordism_of_blowup(&a2, &Cone::new(vec![0, 1])).unwrap();
        let (steps, report) = factorize(&cob).unwrap();
        let script = factor_script_json(&steps, &report);
        assert_eq!(script.format, 1);
        assert_eq!(script.steps.len(), 1);
        assert!(!script.desing.performed);
        assert!(script.report.chain_consistent);
        assert_eq!(script.summary, report.summary);
        let text = to_pretty(&script);
        let back: FactorScriptJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.steps[0].upper_center, script.steps[0].upper_center);
        assert_eq!(text, to_pretty(&back));
    }

    #[test]
    fn certificate_parsing() {
        let good = r#"[
            {"rays": [[1, 0], [1, -1]], "weight": 2},
            {"rays": [[1, 1], [1, 0]], "weight": "1/2"},
            {"rays": [[2, 1], [1, 0]], "weight": "-3"}
        ]"#;
        let cert = certificate_from_json(good).unwrap();
        assert_eq!(cert.len(), 3);
        // keys are sorted ray lists
        let key = vec![v(&[1, -1]), v(&[1, 0])];
        assert_eq!(cert[&key], BigRational::from_integer(big(2)));
        let key2 = vec![v(&[1, 0]), v(&[1, 1])];
        assert_eq!(cert[&key2], BigRational::new(big(1), big(2)));
        // round trip through the writer
        let back = certificate_from_json(&certificate_to_json(&cert)).unwrap();
        assert_eq!(back, cert);

        for bad in [
            r#"[{"rays": [[1, 0]], "weight": "1/0"}]"#,
            r#"[{"rays": [[1, 0]], "weight": "x"}]"#,
            r#"{"rays": []}"#,
            r#"[{"rays": [[1, 0]], "weight": 1},
                {"rays": [[1, 0]], "weight": 2}]"#,
        ] {
            assert!(
                matches!(certificate_from_json(bad), Err(Error::BadCertificate(_))),
                "accepted {bad}"
            );
        }
    }

    #[test]
    fn ideal_and_newton_json() {
        let sigma: Vec<IntVec> = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let a = v(&[2, 1, -1]);
        let ideal = crate::ideal::weight_ideal_generators(&sigma, &a, &big(2)).unwrap();
        let json = ideal_to_json(&ideal);
        assert_eq!(ideal_from_json(&json).unwrap(), ideal);
        let sub = crate::ideal::newton_subdivision(&sigma, &ideal).unwrap();
        let nj = newton_to_json(&sub);
        assert_eq!(nj.cells.len(), sub.cells.len());
        assert_eq!(
            json_to_mat(&nj.exceptional_rays).unwrap(),
            sub.exceptional_rays
        );
    }

    #[test]
    fn weight_report_json_keeps_missing_fibers_null() {
        let report = crate::factor::from_weights(&[big(-1), big(2), big(1)]).unwrap();
        let json = weight_report_json(&report);
        assert!(json.fiber_weights_minus.is_none());
        assert!(json.fiber_weights_plus.is_none());
        let text = to_pretty(&json);
        assert!(text.contains("\"fiber_weights_minus\": null"));
        let flop = crate::factor::from_weights(&[big(-1), big(-1), big(1), big(1)]).unwrap();
        let fj = weight_report_json(&flop);
        assert_eq!(fj.fiber_weights_minus, Some(vec![JsonInt::Small(1), JsonInt::Small(1)]));
    }
}
