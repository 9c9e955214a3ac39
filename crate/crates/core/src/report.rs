//! Versioned JSON artifacts for curves, fact scans, certificates and theorem
//! scans. Every artifact carries full field data so it can be re-checked
//! without this crate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::curve::{quartic_closed_form, Curve, SingularOrderReport, TangentOrderReport};
use crate::error::Result;
use crate::field::FieldHeader;
use crate::galois::{Evidence, GaloisCertificate, Obstruction, ScanReport, ASSUMPTIONS};
use crate::pgl::SerializedMatrix;
use crate::plane::{enumerate_points, ProjPoint, SerializedProjective};
use crate::poly::SerializedTerm;

pub const SCHEMA_VERSION: u32 = 1;

fn assumptions() -> Vec<String> {
    ASSUMPTIONS.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionChecks {
    pub division_identity: bool,
    pub homogeneous: bool,
    pub degree_matches: bool,
    pub coefficients_in_base_field: bool,
    /// Comparison with the closed-form quartic, only for `q = 2`.
    pub closed_form_match: Option<bool>,
}

impl ConstructionChecks {
    pub fn new(curve: &Curve) -> Self {
        let q = curve.q();
        ConstructionChecks {
            division_identity: curve.division_identity_holds(),
            homogeneous: curve.poly().is_homogeneous(),
            degree_matches: curve.poly().degree() == Some((q * q * q - q * q) as u32),
            coefficients_in_base_field: curve.coefficients_in_base_field(),
            closed_form_match: (q == 2).then(|| curve.poly() == &quartic_closed_form(curve.ctx())),
        }
    }

    pub fn pass(&self) -> bool {
        self.division_identity
            && self.homogeneous
            && self.degree_matches
            && self.coefficients_in_base_field
            && self.closed_form_match != Some(false)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveArtifact {
    pub schema_version: u32,
    pub q: u64,
    pub p: u32,
    pub m: u32,
    pub field: FieldHeader,
    pub degree: u32,
    pub terms: Vec<SerializedTerm>,
    pub d1: Vec<SerializedTerm>,
    pub d2: Vec<SerializedTerm>,
    pub checks: ConstructionChecks,
    pub assumptions: Vec<String>,
}

impl CurveArtifact {
    pub fn new(curve: &Curve) -> Self {
        let ctx = curve.ctx();
        CurveArtifact {
            schema_version: SCHEMA_VERSION,
            q: curve.q(),
            p: ctx.characteristic(),
            m: ctx.base_degree(),
            field: ctx.header(),
            degree: curve.degree(),
            terms: curve.poly().serialize(ctx),
            d1: curve.d1().serialize(ctx),
            d2: curve.d2().serialize(ctx),
            checks: ConstructionChecks::new(curve),
            assumptions: assumptions(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularLocusCheck {
    pub extension_degree: u32,
    pub singular_points: usize,
    /// `|P²(F_{q^k})| - |P²(F_q)|` when `k = 2`.
    pub expected: Option<usize>,
    pub equals_set_difference: Option<bool>,
    pub rational_singular_points: usize,
}

impl SingularLocusCheck {
    pub fn pass(&self) -> bool {
        self.rational_singular_points == 0 && self.equals_set_difference != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactsReport {
    pub schema_version: u32,
    pub q: u64,
    pub field: FieldHeader,
    pub ext_bound: u32,
    pub construction: ConstructionChecks,
    /// Why the fact scans did not run, when they did not.
    pub skipped: Option<String>,
    pub singular_locus: Option<SingularLocusCheck>,
    pub singular_orders: Option<SingularOrderReport>,
    pub tangent_orders: Option<TangentOrderReport>,
    pub assumptions: Vec<String>,
    pub pass: bool,
}

/// Construction checks, then for `q > 2` the singular locus, the orders at
/// singular points along `F_{q²}`-lines, and the tangent orders at smooth
/// points over `F_{q^k}`, `k ≤ ext_bound`.
pub fn verify_facts(curve: &Curve, ext_bound: u32) -> Result<FactsReport> {
    let ctx = curve.ctx();
    let construction = ConstructionChecks::new(curve);
    let mut report = FactsReport {
        schema_version: SCHEMA_VERSION,
        q: curve.q(),
        field: ctx.header(),
        ext_bound,
        construction: construction.clone(),
        skipped: None,
        singular_locus: None,
        singular_orders: None,
        tangent_orders: None,
        assumptions: assumptions(),
        pass: construction.pass(),
    };
    if curve.q() <= 2 {
        report.skipped = Some("facts are not asserted for q = 2".into());
        return Ok(report);
    }
    let rational_singular_points = curve.singular_locus(1)?.len();
    let quadratic = ext_bound >= 2 && ctx.working_degree().is_multiple_of(2);
    let locus = if quadratic {
        let singular: BTreeSet<ProjPoint> = curve
            .singular_points_quadratic()?
            .iter()
            .map(|d| d.point)
            .collect();
        let difference: BTreeSet<ProjPoint> = enumerate_points(ctx, 2)?
            .into_iter()
            .filter(|p| p.def_degree() == 2)
            .collect();
        SingularLocusCheck {
            extension_degree: 2,
            singular_points: singular.len(),
            expected: Some(difference.len()),
            equals_set_difference: Some(singular == difference),
            rational_singular_points,
        }
    } else {
        SingularLocusCheck {
            extension_degree: 1,
            singular_points: rational_singular_points,
            expected: None,
            equals_set_difference: None,
            rational_singular_points,
        }
    };
    let singular_orders = if quadratic {
        Some(curve.verify_singular_orders()?)
    } else {
        None
    };
    let tangent_orders = curve.verify_tangent_orders(ext_bound)?;
    report.pass = construction.pass()
        && locus.pass()
        && singular_orders
            .as_ref()
            .is_none_or(|r| r.violations.is_empty())
        && tangent_orders.violations.is_empty();
    report.singular_locus = Some(locus);
    report.singular_orders = singular_orders;
    report.tangent_orders = Some(tangent_orders);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SerializedObstruction {
    NonUniformRamification { indices: Vec<u32> },
    IndexNotDividingDegree { index: u32, degree: u32 },
}

impl From<&Obstruction> for SerializedObstruction {
    fn from(o: &Obstruction) -> Self {
        match o {
            Obstruction::NonUniformRamification { indices } => {
                SerializedObstruction::NonUniformRamification {
                    indices: indices.clone(),
                }
            }
            Obstruction::IndexNotDividingDegree { index, degree } => {
                SerializedObstruction::IndexNotDividingDegree {
                    index: *index,
                    degree: *degree,
                }
            }
        }
    }
}

impl From<&SerializedObstruction> for Obstruction {
    fn from(o: &SerializedObstruction) -> Self {
        match o {
            SerializedObstruction::NonUniformRamification { indices } => {
                Obstruction::NonUniformRamification {
                    indices: indices.clone(),
                }
            }
            SerializedObstruction::IndexNotDividingDegree { index, degree } => {
                Obstruction::IndexNotDividingDegree {
                    index: *index,
                    degree: *degree,
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedFiber {
    pub line: SerializedProjective,
    /// `[e, count]` pairs away from the center.
    pub entries: Vec<(u32, u32)>,
    pub center_order: u32,
    pub center_multiplicity: u32,
    pub center_entry: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SerializedEvidence {
    Positive {
        search_degree: u32,
        order: u32,
        generators: Vec<SerializedMatrix>,
        elements: Vec<SerializedMatrix>,
    },
    Negative {
        obstruction: SerializedObstruction,
        fiber: SerializedFiber,
    },
    Inconclusive {
        pencil_degree: u32,
        random_lines: u32,
        random_degrees: Vec<u32>,
        max_pencil_lines: u64,
        max_discriminant_degree: u64,
        positive_degrees: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateArtifact {
    pub point: SerializedProjective,
    pub point_multiplicity: u32,
    pub projection_degree: u32,
    pub lines_examined: usize,
    pub evidence: SerializedEvidence,
}

impl CertificateArtifact {
    pub fn new(curve: &Curve, cert: &GaloisCertificate) -> Self {
        let ctx = curve.ctx();
        let evidence = match &cert.evidence {
            Evidence::Positive(w) => SerializedEvidence::Positive {
                search_degree: w.search_degree,
                order: w.order,
                generators: w.generators.iter().map(|g| g.serialize(ctx)).collect(),
                elements: w.elements.iter().map(|g| g.serialize(ctx)).collect(),
            },
            Evidence::Negative(w) => SerializedEvidence::Negative {
                obstruction: (&w.obstruction).into(),
                fiber: SerializedFiber {
                    line: w.profile.line.serialize(ctx),
                    entries: w.profile.entries.clone(),
                    center_order: w.profile.center_order,
                    center_multiplicity: w.profile.center_multiplicity,
                    center_entry: w.profile.center_entry(),
                },
            },
            Evidence::Inconclusive {
                bounds,
                positive_degrees,
            } => SerializedEvidence::Inconclusive {
                pencil_degree: bounds.pencil_degree,
                random_lines: bounds.random_lines,
                random_degrees: bounds.random_degrees.clone(),
                max_pencil_lines: bounds.max_pencil_lines,
                max_discriminant_degree: bounds.max_discriminant_degree,
                positive_degrees: positive_degrees.clone(),
            },
        };
        CertificateArtifact {
            point: cert.point.serialize(ctx),
            point_multiplicity: cert.point_multiplicity,
            projection_degree: cert.projection_degree,
            lines_examined: cert.lines_examined,
            evidence,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self.evidence {
            SerializedEvidence::Positive { .. } => "positive",
            SerializedEvidence::Negative { .. } => "negative",
            SerializedEvidence::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyArtifact {
    pub schema_version: u32,
    pub q: u64,
    pub field: FieldHeader,
    pub certificate: CertificateArtifact,
    pub assumptions: Vec<String>,
}

impl CertifyArtifact {
    pub fn new(curve: &Curve, cert: &GaloisCertificate) -> Self {
        CertifyArtifact {
            schema_version: SCHEMA_VERSION,
            q: curve.q(),
            field: curve.ctx().header(),
            certificate: CertificateArtifact::new(curve, cert),
            assumptions: assumptions(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanParameters {
    pub exhaustive_degree: u32,
    pub sample_degrees: Vec<u32>,
    pub samples: u32,
    pub seed: u64,
    pub pencil_degree: u32,
    pub random_lines: u32,
    pub max_pencil_lines: u64,
    pub max_discriminant_degree: u64,
    pub positive_degrees: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanSummary {
    pub points_scanned: usize,
    pub galois_count: usize,
    pub expected: u64,
    pub galois_points: Vec<SerializedProjective>,
    pub inconclusive: Vec<SerializedProjective>,
    pub galois_set_is_rational_plane: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanArtifact {
    pub schema_version: u32,
    pub q: u64,
    pub field: FieldHeader,
    pub parameters: ScanParameters,
    pub assumptions: Vec<String>,
    pub points: Vec<CertificateArtifact>,
    pub summary: ScanSummary,
}

impl ScanArtifact {
    pub fn new(curve: &Curve, report: &ScanReport) -> Self {
        let ctx = curve.ctx();
        let c = &report.config;
        ScanArtifact {
            schema_version: SCHEMA_VERSION,
            q: report.q,
            field: ctx.header(),
            parameters: ScanParameters {
                exhaustive_degree: c.exhaustive_degree,
                sample_degrees: c.sample_degrees.clone(),
                samples: c.samples,
                seed: c.seed,
                pencil_degree: c.decide.bounds.pencil_degree,
                random_lines: c.decide.bounds.random_lines,
                max_pencil_lines: c.decide.bounds.max_pencil_lines,
                max_discriminant_degree: c.decide.bounds.max_discriminant_degree,
                positive_degrees: c.decide.positive_degrees.clone(),
            },
            assumptions: assumptions(),
            points: report
                .certificates
                .iter()
                .map(|cert| CertificateArtifact::new(curve, cert))
                .collect(),
            summary: ScanSummary {
                points_scanned: report.certificates.len(),
                galois_count: report.galois_points.len(),
                expected: report.expected_count,
                galois_points: report
                    .galois_points
                    .iter()
                    .map(|p| p.serialize(ctx))
                    .collect(),
                inconclusive: report
                    .inconclusive
                    .iter()
                    .map(|p| p.serialize(ctx))
                    .collect(),
                galois_set_is_rational_plane: report.galois_set_is_rational_plane,
                pass: report.pass(),
            },
        }
    }
}

/// Pretty JSON with a trailing newline; field order is fixed by the types,
/// so equal inputs give equal bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{decide, DecideConfig};

    #[test]
    fn curve_artifact_round_trip() {
        let curve = Curve::for_q(2, 12).unwrap();
        let art = CurveArtifact::new(&curve);
        assert!(art.checks.pass());
        assert_eq!(art.checks.closed_form_match, Some(true));
        let json = to_json(&art);
        let back: CurveArtifact = serde_json::from_str(&json).unwrap();
        let f = crate::poly::TriPoly::deserialize(curve.ctx(), &back.terms).unwrap();
        assert_eq!(&f, curve.poly());
        assert_eq!(json, to_json(&CurveArtifact::new(&curve)));
        assert!(json.contains("\"schema_version\": 1"));
    }

    #[test]
    fn facts_q2_skipped_q3_pass() {
        let curve = Curve::for_q(2, 12).unwrap();
        let r = verify_facts(&curve, 2).unwrap();
        assert!(r.pass && r.skipped.is_some() && r.singular_orders.is_none());
        let curve = Curve::for_q(3, 12).unwrap();
        let r = verify_facts(&curve, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.singular_locus.as_ref().unwrap().singular_points, 0);
    }

    #[test]
    fn certificate_serializes_with_verdict_tag() {
        let curve = Curve::for_q(3, 12).unwrap();
        let p = ProjPoint::standard(curve.ctx(), 1);
        let cert = decide(&curve, &p, &DecideConfig::default()).unwrap();
        let art = CertifyArtifact::new(&curve, &cert);
        let json = to_json(&art);
        assert!(json.contains("\"verdict\": \"positive\""));
        let back: CertifyArtifact = serde_json::from_str(&json).unwrap();
        assert_eq!(back.certificate, art.certificate);
    }
}
