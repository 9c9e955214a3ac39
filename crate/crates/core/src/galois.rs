//! Fibers of projections from a point and the Galois-point decision.

use std::collections::{BTreeSet, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{Curve, TangentCone};
use crate::error::{Error, Result};
use crate::field::{divisors, Fel};
use crate::pgl::{positive_certificate, PositiveWitness};
use crate::plane::{enumerate_points, incident, line_through, pencil_through, ProjLine, ProjPoint};
use crate::poly::{affine_profile, interpolate, merge_profile, sylvester_resultant};

/// Assumptions every verdict depends on and that are not machine-checked.
pub const ASSUMPTIONS: [&str; 2] = [
    "curve is absolutely irreducible (not verified)",
    "every curve point is unibranch, so intersection multiplicities on fiber lines are ramification indices",
];

/// Degree of the projection from `p`: `deg C - mult_p(C)`.
pub fn deg_pi(curve: &Curve, p: &ProjPoint) -> Result<u32> {
    let m = curve.multiplicity_at(p)?.multiplicity;
    curve
        .degree()
        .checked_sub(m)
        .filter(|d| *d > 0)
        .ok_or_else(|| Error::Config("projection of degree zero".into()))
}

/// Ramification data of `π_P` over the direction of one line through `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProfile {
    pub line: ProjLine,
    /// `(e, number of places)` away from the center, sorted by `e`.
    pub entries: Vec<(u32, u32)>,
    /// Order of the restriction at the center.
    pub center_order: u32,
    pub center_multiplicity: u32,
}

impl FiberProfile {
    /// Index at the center, `center_order - mult_P`, when positive.
    pub fn center_entry(&self) -> Option<u32> {
        Some(self.center_order - self.center_multiplicity).filter(|e| *e > 0)
    }

    /// All ramification indices in the fiber, center included.
    pub fn indices(&self) -> BTreeSet<u32> {
        self.entries
            .iter()
            .map(|(e, _)| *e)
            .chain(self.center_entry())
            .collect()
    }

    /// `Σ e·count + center_order`, which equals `deg C`.
    pub fn accounted_degree(&self) -> u32 {
        self.entries.iter().map(|(e, c)| e * c).sum::<u32>() + self.center_order
    }

    /// `Σ e·count` including the center place; equals `deg π_P`.
    pub fn fiber_degree(&self) -> u32 {
        self.entries.iter().map(|(e, c)| e * c).sum::<u32>() + self.center_entry().unwrap_or(0)
    }

    /// The obstruction to `π_P` being Galois that this fiber exhibits, if
    /// any; divisibility is checked before uniformity.
    pub fn obstruction(&self, projection_degree: u32) -> Option<Obstruction> {
        let indices = self.indices();
        if let Some(&e) = indices
            .iter()
            .find(|&&e| !projection_degree.is_multiple_of(e))
        {
            return Some(Obstruction::IndexNotDividingDegree {
                index: e,
                degree: projection_degree,
            });
        }
        if indices.len() > 1 {
            return Some(Obstruction::NonUniformRamification {
                indices: indices.into_iter().collect(),
            });
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    NonUniformRamification { indices: Vec<u32> },
    IndexNotDividingDegree { index: u32, degree: u32 },
}

impl Obstruction {
    pub fn kind(&self) -> &'static str {
        match self {
            Obstruction::NonUniformRamification { .. } => "non-uniform-ramification",
            Obstruction::IndexNotDividingDegree { .. } => "index-not-dividing-degree",
        }
    }
}

/// Fiber of `π_P` over `line`, with `P` placed at parameter `(1:0)`.
pub fn fiber_profile(curve: &Curve, p: &ProjPoint, line: &ProjLine) -> Result<FiberProfile> {
    let center_multiplicity = curve.multiplicity_at(p)?.multiplicity;
    fiber_profile_with(curve, p, line, center_multiplicity)
}

fn fiber_profile_with(
    curve: &Curve,
    p: &ProjPoint,
    line: &ProjLine,
    center_multiplicity: u32,
) -> Result<FiberProfile> {
    let g = curve.restrict_at(p, line)?;
    let center_order = g.order_at_first_point()?;
    let entries = merge_profile(affine_profile(curve.ctx(), &g.dehomogenize())?);
    Ok(FiberProfile {
        line: *line,
        entries,
        center_order,
        center_multiplicity,
    })
}

/// Limits of the line search behind negative certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest `k` whose `F_{q^k}`-pencil through `P` is searched.
    pub pencil_degree: u32,
    /// Lines through `P` and random points over each degree in `random_degrees`.
    pub random_lines: u32,
    pub random_degrees: Vec<u32>,
    pub seed: u64,
    /// Pencils over larger subfields of the working field are searched last,
    /// while they have at most this many lines.
    pub max_pencil_lines: u64,
    /// Largest degree bound of the pencil discriminant that is interpolated.
    pub max_discriminant_degree: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            pencil_degree: 2,
            random_lines: 16,
            random_degrees: vec![3, 4],
            seed: 42,
            max_pencil_lines: 5000,
            max_discriminant_degree: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    pub bounds: SearchBounds,
    /// Extension degrees over which linear automorphisms are searched, in order.
    pub positive_degrees: Vec<u32>,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            bounds: SearchBounds::default(),
            positive_degrees: vec![1, 2],
        }
    }
}

#[derive(Clone, Debug)]
pub struct NegativeWitness {
    pub obstruction: Obstruction,
    pub profile: FiberProfile,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    Positive(PositiveWitness),
    Negative(NegativeWitness),
    Inconclusive {
        bounds: SearchBounds,
        positive_degrees: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Positive,
    Negative,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GaloisCertificate {
    pub point: ProjPoint,
    pub point_multiplicity: u32,
    pub projection_degree: u32,
    /// Lines whose fibers were examined before the verdict.
    pub lines_examined: usize,
    pub evidence: Evidence,
}

impl GaloisCertificate {
    pub fn verdict(&self) -> Verdict {
        match self.evidence {
            Evidence::Positive(_) => Verdict::Positive,
            Evidence::Negative(_) => Verdict::Negative,
            Evidence::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }

    pub fn is_galois(&self) -> bool {
        self.verdict() == Verdict::Positive
    }
}

/// Mixes the point into the seed so each point gets its own random lines.
fn point_seed(curve: &Curve, p: &ProjPoint, seed: u64) -> u64 {
    p.coords()
        .iter()
        .fold(seed ^ 0x9e37_79b9_7f4a_7c15, |acc, &c| {
            (acc ^ u64::from(curve.ctx().packed(c))).wrapping_mul(0x1000_0000_01b3)
        })
}

/// Lines through `p` in search order: tangent line, joins to singular
/// points over `F_{q²}`, pencils up to `pencil_degree`, seeded random lines,
/// then the larger pencils allowed by `max_pencil_lines`.
pub fn candidate_lines(
    curve: &Curve,
    p: &ProjPoint,
    bounds: &SearchBounds,
) -> Result<Vec<ProjLine>> {
    let ctx = curve.ctx();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |l: ProjLine, out: &mut Vec<ProjLine>| {
        if seen.insert(l) {
            out.push(l);
        }
    };
    if let TangentCone::PowerOfLine { line, .. } = curve.multiplicity_at(p)?.cone {
        push(line, &mut out);
    }
    for q in curve.singular_points_quadratic()? {
        if q.point != *p {
            push(line_through(ctx, p, &q.point)?, &mut out);
        }
    }
    for k in divisors(ctx.working_degree()) {
        if k <= bounds.pencil_degree && p.defined_over(k) {
            for l in pencil_through(ctx, p, k)? {
                push(l, &mut out);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(curve, p, bounds.seed));
    for &k in &bounds.random_degrees {
        if !ctx.working_degree().is_multiple_of(k) {
            continue;
        }
        let mut drawn = 0;
        while drawn < bounds.random_lines {
            let coords = [
                ctx.random_in_subfield(k, &mut rng)?,
                ctx.random_in_subfield(k, &mut rng)?,
                ctx.random_in_subfield(k, &mut rng)?,
            ];
            let Ok(r) = ProjPoint::new(ctx, coords) else {
                continue;
            };
            if r == *p {
                continue;
            }
            push(line_through(ctx, p, &r)?, &mut out);
            drawn += 1;
        }
    }
    for k in divisors(ctx.working_degree()) {
        let lines = ctx.subfield_order(k)? + 1;
        if k > bounds.pencil_degree && p.defined_over(k) && lines <= bounds.max_pencil_lines {
            for l in pencil_through(ctx, p, k)? {
                push(l, &mut out);
            }
        }
    }
    Ok(out)
}

/// Lines through an off-curve point `p` along which `π_P` ramifies and that
/// are defined over the working field.
///
/// Lines of the pencil are joins of `p` with `R(λ)` on a coordinate line
/// missing `p`. The restriction `g_λ(s) = F(s·p + R(λ))` has degree `d` in
/// `s` for every `λ`, so `D(λ) = Res(g_λ, g_λ')` (formal degrees `d`, `d-1`)
/// vanishes exactly at the ramified lines. `D` has degree at most
/// `d(2d-1)` and is interpolated from that many values plus one; its roots
/// in the working field give the lines. `None` when `p` is on the curve,
/// `D` vanishes identically, or the degree bound exceeds `max_degree`.
pub fn branch_lines(
    curve: &Curve,
    p: &ProjPoint,
    max_degree: u64,
    seed: u64,
) -> Result<Option<Vec<ProjLine>>> {
    let ctx = curve.ctx();
    if curve.contains(p) {
        return Ok(None);
    }
    let d = curve.degree() as usize;
    let bound = (d * (2 * d - 1)) as u64;
    if bound > max_degree || bound + 2 >= ctx.unit_count() {
        return Ok(None);
    }
    let axis = (0..3)
        .find(|&i| !p.coords()[i].is_zero())
        .expect("normalized point");
    let (u, v) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let on_axis = |lambda: Fel| {
        let mut c = [Fel::ZERO; 3];
        c[u] = Fel::ONE;
        c[v] = lambda;
        ProjPoint::new(ctx, c).expect("nonzero")
    };
    let disc_at = |lambda: Fel| -> Result<Fel> {
        let g = curve
            .poly()
            .restrict_to_line(ctx, p, &on_axis(lambda))?
            .dehomogenize();
        Ok(sylvester_resultant(ctx, &g, d, &g.derivative(ctx), d - 1))
    };
    let gen = ctx.generator();
    let mut samples = Vec::with_capacity(bound as usize + 1);
    for j in 0..=bound {
        let lambda = ctx.pow(gen, j);
        samples.push((lambda, disc_at(lambda)?));
    }
    let disc = interpolate(ctx, &samples)?;
    let check = ctx.pow(gen, bound + 1);
    if disc.eval(ctx, check) != disc_at(check)? {
        return Err(Error::Config(
            "pencil discriminant exceeds its degree bound".into(),
        ));
    }
    if disc.is_zero() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    for lambda in disc.roots(ctx, &mut rng)? {
        lines.push(line_through(ctx, p, &on_axis(lambda))?);
    }
    let mut far = [Fel::ZERO; 3];
    far[v] = Fel::ONE;
    lines.push(line_through(ctx, p, &ProjPoint::new(ctx, far)?)?);
    Ok(Some(lines))
}

/// First fiber along the candidate lines that rules out `π_P` being Galois,
/// together with the number of lines examined. The branch lines of
/// [`branch_lines`] are searched only after every candidate line fails.
pub fn negative_certificate(
    curve: &Curve,
    p: &ProjPoint,
    bounds: &SearchBounds,
) -> Result<(Option<NegativeWitness>, usize)> {
    let m = curve.multiplicity_at(p)?.multiplicity;
    let degree = deg_pi(curve, p)?;
    let mut examined = HashSet::new();
    let mut check = |line: &ProjLine| -> Result<Option<NegativeWitness>> {
        if !examined.insert(*line) {
            return Ok(None);
        }
        let profile = match fiber_profile_with(curve, p, line, m) {
            Ok(profile) => profile,
            Err(Error::LineInCurve) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(profile
            .obstruction(degree)
            .map(|obstruction| NegativeWitness {
                obstruction,
                profile,
            }))
    };
    for line in candidate_lines(curve, p, bounds)? {
        if let Some(w) = check(&line)? {
            return Ok((Some(w), examined.len()));
        }
    }
    let seed = point_seed(curve, p, bounds.seed).rotate_left(17);
    if let Some(lines) = branch_lines(curve, p, bounds.max_discriminant_degree, seed)? {
        for line in lines {
            if let Some(w) = check(&line)? {
                return Ok((Some(w), examined.len()));
            }
        }
    }
    Ok((None, examined.len()))
}

/// Negative search first, then positive search; otherwise inconclusive.
pub fn decide(curve: &Curve, p: &ProjPoint, config: &DecideConfig) -> Result<GaloisCertificate> {
    let point_multiplicity = curve.multiplicity_at(p)?.multiplicity;
    let projection_degree = deg_pi(curve, p)?;
    let (negative, lines_examined) = negative_certificate(curve, p, &config.bounds)?;
    let certificate = |evidence| GaloisCertificate {
        point: *p,
        point_multiplicity,
        projection_degree,
        lines_examined,
        evidence,
    };
    let mut positive = None;
    for &e in &config.positive_degrees {
        if !curve.ctx().working_degree().is_multiple_of(e) || !p.defined_over(e) {
            continue;
        }
        if let Some(w) = positive_certificate(curve, p, e, projection_degree)? {
            positive = Some(w);
            break;
        }
        if negative.is_some() {
            // a negative certificate is proof; one failed search is enough
            // to confirm the two never coexist at this bound
            break;
        }
    }
    match (negative, positive) {
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "point {:?} received both certificate kinds",
            p.coords()
        ))),
        (Some(n), None) => Ok(certificate(Evidence::Negative(n))),
        (None, Some(w)) => Ok(certificate(Evidence::Positive(w))),
        (None, None) => Ok(certificate(Evidence::Inconclusive {
            bounds: config.bounds.clone(),
            positive_degrees: config.positive_degrees.clone(),
        })),
    }
}

/// Which points a theorem scan decides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    /// Every point of `P²(F_{q^k})` for `k ≤ exhaustive_degree` is scanned.
    pub exhaustive_degree: u32,
    /// Extension degrees sampled beyond the exhaustive range.
    pub sample_degrees: Vec<u32>,
    pub samples: u32,
    pub seed: u64,
    pub decide: DecideConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            exhaustive_degree: 2,
            sample_degrees: vec![3, 4],
            samples: 50,
            seed: 42,
            decide: DecideConfig::default(),
        }
    }
}

impl ScanConfig {
    /// Exhaustive over `P²(F_{q^k})` for `k ≤ min(ext_bound, 2)`, sampled over
    /// the remaining degrees up to `ext_bound` that divide `working_degree`.
    pub fn with_ext_bound(working_degree: u32, ext_bound: u32, samples: u32, seed: u64) -> Self {
        ScanConfig {
            exhaustive_degree: ext_bound.min(2),
            sample_degrees: (3..=ext_bound)
                .filter(|k| working_degree.is_multiple_of(*k))
                .collect(),
            samples,
            seed,
            decide: DecideConfig {
                bounds: SearchBounds {
                    seed,
                    ..SearchBounds::default()
                },
                ..DecideConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub q: u64,
    pub config: ScanConfig,
    pub certificates: Vec<GaloisCertificate>,
    pub galois_points: Vec<ProjPoint>,
    pub inconclusive: Vec<ProjPoint>,
    pub expected_count: u64,
    /// The Galois points are exactly the `F_q`-rational points, all scanned.
    pub galois_set_is_rational_plane: bool,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.inconclusive.is_empty()
            && self.galois_set_is_rational_plane
            && self.galois_points.len() as u64 == self.expected_count
    }
}

/// Points of exact definition degree `k`, distinct, from a seeded stream.
pub fn sample_points(
    curve: &Curve,
    k: u32,
    count: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ProjPoint>> {
    let ctx = curve.ctx();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count as usize);
    while out.len() < count as usize {
        let coords = [
            ctx.random_in_subfield(k, rng)?,
            ctx.random_in_subfield(k, rng)?,
            ctx.random_in_subfield(k, rng)?,
        ];
        let Ok(p) = ProjPoint::new(ctx, coords) else {
            continue;
        };
        if p.def_degree() == k && seen.insert(p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// The points a scan will decide, in report order.
pub fn scan_points(curve: &Curve, config: &ScanConfig) -> Result<Vec<ProjPoint>> {
    let ctx = curve.ctx();
    let mut points = Vec::new();
    for k in divisors(ctx.working_degree()) {
        if k <= config.exhaustive_degree {
            points.extend(
                enumerate_points(ctx, k)?
                    .into_iter()
                    .filter(|p| p.def_degree() == k),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for &k in &config.sample_degrees {
        if k > config.exhaustive_degree && ctx.working_degree().is_multiple_of(k) {
            points.extend(sample_points(curve, k, config.samples, &mut rng)?);
        }
    }
    Ok(points)
}

pub fn theorem_scan(curve: &Curve, config: &ScanConfig) -> Result<ScanReport> {
    scan_with_progress(curve, config, |_, _| {})
}

/// As [`theorem_scan`], calling `progress(done, total)` after each point.
pub fn scan_with_progress(
    curve: &Curve,
    config: &ScanConfig,
    mut progress: impl FnMut(usize, usize),
) -> Result<ScanReport> {
    let q = curve.q();
    let points = scan_points(curve, config)?;
    let mut certificates = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        certificates.push(decide(curve, p, &config.decide)?);
        progress(i + 1, points.len());
    }
    let galois_points: Vec<ProjPoint> = certificates
        .iter()
        .filter(|c| c.is_galois())
        .map(|c| c.point)
        .collect();
    let inconclusive = certificates
        .iter()
        .filter(|c| c.verdict() == Verdict::Inconclusive)
        .map(|c| c.point)
        .collect();
    let rational: BTreeSet<ProjPoint> = enumerate_points(curve.ctx(), 1)?.into_iter().collect();
    let scanned: BTreeSet<ProjPoint> = points.iter().copied().collect();
    let galois_set: BTreeSet<ProjPoint> = galois_points.iter().copied().collect();
    Ok(ScanReport {
        q,
        config: config.clone(),
        certificates,
        galois_points,
        inconclusive,
        expected_count: q * q + q + 1,
        galois_set_is_rational_plane: rational.is_subset(&scanned) && galois_set == rational,
    })
}

/// Recomputes a negative certificate's fiber from its line and checks it
/// still exhibits the recorded obstruction.
pub fn recheck_negative(curve: &Curve, p: &ProjPoint, witness: &NegativeWitness) -> Result<bool> {
    if !incident(curve.ctx(), p, &witness.profile.line) {
        return Ok(false);
    }
    let profile = fiber_profile(curve, p, &witness.profile.line)?;
    Ok(profile == witness.profile
        && profile.obstruction(deg_pi(curve, p)?).as_ref() == Some(&witness.obstruction))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obstruction_is_always_available_at_singular_points() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let d = q * q * q - q * q - q + 1;
            assert_eq!(d % q, 1);
            assert_eq!(gcd(q, d), 1);
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn projection_degrees() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        assert_eq!(deg_pi(&curve, &ProjPoint::standard(ctx, 1)).unwrap(), 18);
        let sing = curve.singular_points_quadratic().unwrap()[0].point;
        assert_eq!(deg_pi(&curve, &sing).unwrap(), 16);
        let smooth = enumerate_points(ctx, 3)
            .unwrap()
            .into_iter()
            .find(|p| curve.contains(p))
            .unwrap();
        assert_eq!(deg_pi(&curve, &smooth).unwrap(), 17);
    }

    #[test]
    fn q2_fiber_on_z_zero() {
        let curve = Curve::for_q(2, 12).unwrap();
        let ctx = curve.ctx();
        let p = ProjPoint::standard(ctx, 1);
        let line = ProjLine::new(ctx, [Fel::ZERO, Fel::ZERO, Fel::ONE]).unwrap();
        let profile = fiber_profile(&curve, &p, &line).unwrap();
        assert_eq!(profile.entries, vec![(2, 2)]);
        assert_eq!(profile.center_entry(), None);
        assert_eq!(profile.obstruction(4), None);
    }

    #[test]
    fn q3_fibers() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        let p = ProjPoint::standard(ctx, 1);
        for line in pencil_through(ctx, &p, 1).unwrap() {
            let profile = fiber_profile(&curve, &p, &line).unwrap();
            assert_eq!(profile.indices().len(), 1);
            assert_eq!(profile.accounted_degree(), 18);
        }
        let data = &curve.singular_points_quadratic().unwrap()[0];
        let tangent = data.tangent_line().unwrap();
        let profile = fiber_profile(&curve, &data.point, &tangent).unwrap();
        assert!(profile.entries.iter().any(|(e, _)| *e == 3));
        assert_eq!(profile.accounted_degree(), 18);
        assert_eq!(
            profile.obstruction(16),
            Some(Obstruction::IndexNotDividingDegree {
                index: 3,
                degree: 16
            })
        );
    }

    #[test]
    fn decisions_q3() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        let config = DecideConfig::default();
        let cert = decide(&curve, &ProjPoint::standard(ctx, 1), &config).unwrap();
        assert_eq!(cert.verdict(), Verdict::Positive);
        let sing = curve.singular_points_quadratic().unwrap()[5].point;
        let cert = decide(&curve, &sing, &config).unwrap();
        let Evidence::Negative(w) = &cert.evidence else {
            panic!("expected negative")
        };
        assert_eq!(w.obstruction.kind(), "index-not-dividing-degree");
        assert!(recheck_negative(&curve, &sing, w).unwrap());
    }
}
