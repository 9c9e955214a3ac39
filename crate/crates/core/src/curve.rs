//! The Dickson-Guralnick-Zieve curve `F = D₁ / D₂` and its local geometry.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};
use crate::linalg::{complete_basis, Mat3};
use crate::plane::{enumerate_points, pencil_through, ProjLine, ProjPoint, SerializedProjective};
use crate::poly::{BinForm, Monomial, TriPoly};

/// Moore determinant `det(v, v^{q^i}, v^{q^j})` over the rows `v = x, y, z`.
pub fn moore_det(ctx: &FieldCtx, q: u64, i: u32, j: u32) -> Result<TriPoly> {
    let exps: [u32; 3] = [
        1,
        u32::try_from(q.pow(i)).map_err(|_| Error::Config("exponent overflow".into()))?,
        u32::try_from(q.pow(j)).map_err(|_| Error::Config("exponent overflow".into()))?,
    ];
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    // row r contributes variable r raised to the exponent of column sigma(r)
    Ok(TriPoly::from_terms(
        ctx,
        PERMS.iter().map(|(sigma, sign)| {
            let e = [exps[sigma[0]], exps[sigma[1]], exps[sigma[2]]];
            (Monomial(e), ctx.from_int(*sign))
        }),
    ))
}

/// `(x²+xz)² + (x²+xz)(y²+yz) + (y²+yz)² + z⁴`, the closed form for `q = 2`.
pub fn quartic_closed_form(ctx: &FieldCtx) -> TriPoly {
    let (x, y, z) = (TriPoly::var(0), TriPoly::var(1), TriPoly::var(2));
    let u = x.mul(ctx, &x).add(ctx, &x.mul(ctx, &z));
    let v = y.mul(ctx, &y).add(ctx, &y.mul(ctx, &z));
    let z2 = z.mul(ctx, &z);
    u.mul(ctx, &u)
        .add(ctx, &u.mul(ctx, &v))
        .add(ctx, &v.mul(ctx, &v))
        .add(ctx, &z2.mul(ctx, &z2))
}

/// Lowest-degree part of the curve at a point, in local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangentCone {
    /// The point is not on the curve.
    Empty,
    /// The cone is `line^exponent`.
    PowerOfLine {
        line: ProjLine,
        exponent: u32,
    },
    NonSplit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentData {
    pub point: ProjPoint,
    pub multiplicity: u32,
    pub cone: TangentCone,
}

impl TangentData {
    pub fn tangent_line(&self) -> Option<ProjLine> {
        match &self.cone {
            TangentCone::PowerOfLine { line, .. } => Some(*line),
            _ => None,
        }
    }
}

pub struct Curve {
    ctx: Arc<FieldCtx>,
    f: TriPoly,
    d1: TriPoly,
    d2: TriPoly,
    gradient: [TriPoly; 3],
    degree: u32,
    singular_cache: OnceLock<Vec<TangentData>>,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("q", &self.q())
            .field("degree", &self.degree)
            .field("terms", &self.f.len())
            .finish()
    }
}

impl Curve {
    /// Builds `F = D₁/D₂` over the base field of `ctx` and checks the
    /// structural facts the rest of the crate relies on.
    pub fn build(ctx: Arc<FieldCtx>) -> Result<Curve> {
        let q = ctx.q();
        let d1 = moore_det(&ctx, q, 1, 3)?;
        let d2 = moore_det(&ctx, q, 1, 2)?;
        let f = d1.exact_divide(&ctx, &d2)?;
        let degree = (q * q * q - q * q) as u32;
        if f.degree() != Some(degree) || !f.is_homogeneous() {
            return Err(Error::Config(format!(
                "quotient has degree {:?}, expected {degree}",
                f.degree()
            )));
        }
        let gradient = [
            f.derivative(&ctx, 0),
            f.derivative(&ctx, 1),
            f.derivative(&ctx, 2),
        ];
        Ok(Curve {
            ctx,
            f,
            d1,
            d2,
            gradient,
            degree,
            singular_cache: OnceLock::new(),
        })
    }

    /// Convenience: shared context for `F_{q^L}` and the curve over it.
    pub fn for_q(q: u64, working_degree: u32) -> Result<Curve> {
        Self::build(FieldCtx::shared(q, working_degree)?)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        self.ctx.clone()
    }

    pub fn q(&self) -> u64 {
        self.ctx.q()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &TriPoly {
        &self.f
    }

    pub fn d1(&self) -> &TriPoly {
        &self.d1
    }

    pub fn d2(&self) -> &TriPoly {
        &self.d2
    }

    /// `D₂ · F = D₁`, recomputed.
    pub fn division_identity_holds(&self) -> bool {
        self.d2.mul(&self.ctx, &self.f) == self.d1
    }

    pub fn coefficients_in_base_field(&self) -> bool {
        self.f
            .terms()
            .all(|(_, c)| self.ctx.in_subfield(*c, 1).unwrap_or(false))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.f.eval(&self.ctx, p.coords()).is_zero()
    }

    fn gradient_vanishes(&self, p: &ProjPoint) -> bool {
        self.gradient
            .iter()
            .all(|g| g.eval(&self.ctx, p.coords()).is_zero())
    }

    /// Multiplicity and tangent cone at `point`, read from the lowest-degree
    /// part of `F` after moving the point to `(0:0:1)`.
    pub fn multiplicity_at(&self, point: &ProjPoint) -> Result<TangentData> {
        let ctx = &*self.ctx;
        if !self.contains(point) {
            return Ok(TangentData {
                point: *point,
                multiplicity: 0,
                cone: TangentCone::Empty,
            });
        }
        let t = complete_basis(ctx, point.coords(), 2)?;
        let g = self.f.substitute_linear(ctx, &t)?;
        let multiplicity = g
            .terms()
            .map(|(m, _)| m.0[0] + m.0[1])
            .min()
            .expect("F is nonzero");
        let mut lowest = vec![Fel::ZERO; multiplicity as usize + 1];
        for (m, c) in g.terms() {
            if m.0[0] + m.0[1] == multiplicity {
                lowest[m.0[1] as usize] = *c;
            }
        }
        let cone = match split_power_of_line(ctx, &lowest)? {
            None => TangentCone::NonSplit,
            Some((alpha, beta)) => {
                let t_inv = t.inverse(ctx)?;
                let line = ProjLine::new(ctx, t_inv.apply_left(ctx, &[alpha, beta, Fel::ZERO]))?;
                TangentCone::PowerOfLine {
                    line,
                    exponent: multiplicity,
                }
            }
        };
        Ok(TangentData {
            point: *point,
            multiplicity,
            cone,
        })
    }

    /// Points of `P²(F_{q^k})` of multiplicity at least two. A vanishing
    /// gradient only nominates candidates; the multiplicity decides.
    pub fn singular_locus(&self, k: u32) -> Result<Vec<TangentData>> {
        let mut out = Vec::new();
        for p in enumerate_points(&self.ctx, k)? {
            if !self.contains(&p) || !self.gradient_vanishes(&p) {
                continue;
            }
            let data = self.multiplicity_at(&p)?;
            if data.multiplicity >= 2 {
                out.push(data);
            }
        }
        Ok(out)
    }

    /// Singular points over `F_{q²}`, computed once.
    pub fn singular_points_quadratic(&self) -> Result<&[TangentData]> {
        if let Some(v) = self.singular_cache.get() {
            return Ok(v);
        }
        let k = if self.ctx.working_degree().is_multiple_of(2) {
            2
        } else {
            1
        };
        let computed = self.singular_locus(k)?;
        Ok(self.singular_cache.get_or_init(|| computed))
    }

    /// Restriction of `F` to `line`, parametrized so that `point` sits at
    /// `(1:0)`.
    pub fn restrict_at(&self, point: &ProjPoint, line: &ProjLine) -> Result<BinForm> {
        if !crate::plane::incident(&self.ctx, point, line) {
            return Err(Error::NotIncident);
        }
        let other = line.point_other_than(&self.ctx, point);
        let g = self.f.restrict_to_line(&self.ctx, point, &other)?;
        if g.is_zero() {
            return Err(Error::LineInCurve);
        }
        Ok(g)
    }

    /// Intersection multiplicity of `line` with the curve at `point`.
    pub fn intersection_order(&self, point: &ProjPoint, line: &ProjLine) -> Result<u32> {
        self.restrict_at(point, line)?.order_at_first_point()
    }

    pub fn verify_singular_orders(&self) -> Result<SingularOrderReport> {
        let q = self.q();
        if q <= 2 {
            return Err(Error::Config(
                "singular-point orders are only claimed for q > 2".into(),
            ));
        }
        let ctx = &*self.ctx;
        let singular = self.singular_points_quadratic()?;
        let mut histogram = BTreeMap::new();
        let mut violations = Vec::new();
        let mut pairs = 0u64;
        for data in singular {
            for line in pencil_through(ctx, &data.point, 2)? {
                let order = self.intersection_order(&data.point, &line)?;
                pairs += 1;
                *histogram.entry(order).or_insert(0u64) += 1;
                let bad_order = order as u64 != q - 1 && order as u64 != q;
                let bad_rationality = order as u64 == q && line.def_degree() != 1;
                if bad_order || bad_rationality {
                    violations.push(OrderViolation {
                        point: data.point.serialize(ctx),
                        line: line.serialize(ctx),
                        order,
                        line_def_degree: line.def_degree(),
                    });
                }
            }
        }
        Ok(SingularOrderReport {
            q,
            singular_points: singular.len(),
            pairs_checked: pairs,
            order_histogram: histogram,
            violations,
        })
    }

    /// Tangent-line orders at smooth points over `F_{q^k}`, `k ≤ k_max`,
    /// counting each point once at its field of definition.
    pub fn verify_tangent_orders(&self, k_max: u32) -> Result<TangentOrderReport> {
        let q = self.q();
        if q <= 2 {
            return Err(Error::Config(
                "tangent orders are only claimed for q > 2".into(),
            ));
        }
        let ctx = &*self.ctx;
        let mut per_degree = Vec::new();
        let mut violations = Vec::new();
        let mut min_order: Option<u32> = None;
        for k in crate::field::divisors(ctx.working_degree()) {
            if k > k_max {
                continue;
            }
            let mut smooth = 0u64;
            for p in enumerate_points(ctx, k)? {
                if p.def_degree() != k || !self.contains(&p) || self.gradient_vanishes(&p) {
                    continue;
                }
                let data = self.multiplicity_at(&p)?;
                if data.multiplicity != 1 {
                    continue;
                }
                smooth += 1;
                let tangent = data
                    .tangent_line()
                    .expect("smooth points have a tangent line");
                let order = self.intersection_order(&p, &tangent)?;
                min_order = Some(min_order.map_or(order, |m| m.min(order)));
                if (order as u64) < q {
                    violations.push(OrderViolation {
                        point: p.serialize(ctx),
                        line: tangent.serialize(ctx),
                        order,
                        line_def_degree: tangent.def_degree(),
                    });
                }
            }
            per_degree.push(SmoothCount {
                extension_degree: k,
                smooth_points: smooth,
            });
        }
        Ok(TangentOrderReport {
            q,
            k_max,
            per_degree,
            min_order,
            violations,
        })
    }
}

/// Tests whether the binary form `Σ φ_b x^{m-b} y^b` is a scalar multiple of
/// `(αx + βy)^m`, returning `(α, β)`. The candidate comes from the
/// coefficient at `y^{p^s}` where `p^s` is the largest power of `p` dividing
/// `m`, whose binomial coefficient is nonzero mod `p`.
fn split_power_of_line(ctx: &FieldCtx, phi: &[Fel]) -> Result<Option<(Fel, Fel)>> {
    let m = phi.len() as u32 - 1;
    let p = ctx.characteristic();
    let (alpha, beta, lambda) = if phi[0].is_zero() {
        (Fel::ZERO, Fel::ONE, phi[m as usize])
    } else {
        let mut ps = 1u32;
        while m.is_multiple_of(ps * p) {
            ps *= p;
        }
        let r = ctx.from_int(((m / ps) % p) as i64);
        let lambda = phi[0];
        let mut beta = ctx.div(phi[ps as usize], ctx.mul(lambda, r))?;
        let mut pp = ps;
        while pp > 1 {
            beta = ctx.pth_root(beta);
            pp /= p;
        }
        (Fel::ONE, beta, lambda)
    };
    if lambda.is_zero() {
        return Ok(None);
    }
    // compare against λ (αx + βy)^m coefficient by coefficient
    let mut binom = vec![1u64; 1];
    for n in 1..=m as usize {
        let mut row = vec![1u64; n + 1];
        for k in 1..n {
            row[k] = (binom[k - 1] + binom[k]) % p as u64;
        }
        binom = row;
    }
    let matches = (0..=m).all(|b| {
        let expected = ctx.mul(
            lambda,
            ctx.mul(
                ctx.from_int(binom[b as usize] as i64),
                ctx.mul(ctx.pow(alpha, (m - b) as u64), ctx.pow(beta, b as u64)),
            ),
        );
        expected == phi[b as usize]
    });
    Ok(matches.then_some((alpha, beta)))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderViolation {
    pub point: SerializedProjective,
    pub line: SerializedProjective,
    pub order: u32,
    pub line_def_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularOrderReport {
    pub q: u64,
    pub singular_points: usize,
    pub pairs_checked: u64,
    pub order_histogram: BTreeMap<u32, u64>,
    pub violations: Vec<OrderViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothCount {
    pub extension_degree: u32,
    pub smooth_points: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentOrderReport {
    pub q: u64,
    pub k_max: u32,
    pub per_degree: Vec<SmoothCount>,
    pub min_order: Option<u32>,
    pub violations: Vec<OrderViolation>,
}

/// Applies `A` to a point given the curve action `f ↦ f ∘ A`.
pub fn transform_point(ctx: &FieldCtx, a: &Mat3, p: &ProjPoint) -> Result<ProjPoint> {
    ProjPoint::new(ctx, a.apply(ctx, p.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{enumerate_points, line_through};
    use std::collections::HashSet;

    /// Direct expansion of `x y z (x+y)(x+z)(y+z)(x+y+z)` over `F_2`.
    fn product_of_f2_lines(ctx: &FieldCtx) -> TriPoly {
        let (x, y, z) = (TriPoly::var(0), TriPoly::var(1), TriPoly::var(2));
        [
            x.clone(),
            y.clone(),
            z.clone(),
            x.add(ctx, &y),
            x.add(ctx, &z),
            y.add(ctx, &z),
            x.add(ctx, &y).add(ctx, &z),
        ]
        .iter()
        .fold(TriPoly::constant(Fel::ONE), |acc, l| acc.mul(ctx, l))
    }

    #[test]
    fn moore_determinants() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let d2 = moore_det(&ctx, 2, 1, 2).unwrap();
        assert_eq!(d2, product_of_f2_lines(&ctx));
        assert_eq!(moore_det(&ctx, 2, 1, 3).unwrap().degree(), Some(11));
        let ctx3 = FieldCtx::new(3, 1, 1).unwrap();
        let d = moore_det(&ctx3, 3, 1, 2).unwrap();
        assert_eq!(d.degree(), Some(13));
        assert!(d.is_homogeneous());
    }

    #[test]
    fn q2_curve_is_the_quartic() {
        let curve = Curve::for_q(2, 12).unwrap();
        assert_eq!(curve.degree(), 4);
        assert_eq!(curve.poly(), &quartic_closed_form(curve.ctx()));
        assert!(curve.division_identity_holds());
    }

    #[test]
    fn q2_restriction_to_z_zero() {
        let curve = Curve::for_q(2, 12).unwrap();
        let ctx = curve.ctx();
        let g = curve
            .poly()
            .restrict_to_line(
                ctx,
                &ProjPoint::standard(ctx, 0),
                &ProjPoint::standard(ctx, 1),
            )
            .unwrap();
        // z = 0 in the quartic leaves x^4 + x^2 y^2 + y^4
        let one = Fel::ONE;
        let zero = Fel::ZERO;
        assert_eq!(g.coeffs(), &[one, zero, one, zero, one]);
    }

    #[test]
    fn q3_structure() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        assert_eq!(curve.degree(), 18);
        assert!(curve.division_identity_holds());
        assert!(curve.coefficients_in_base_field());
        assert!(curve.singular_locus(1).unwrap().is_empty());

        let sing: HashSet<ProjPoint> = curve
            .singular_points_quadratic()
            .unwrap()
            .iter()
            .map(|d| d.point)
            .collect();
        let expected: HashSet<ProjPoint> = enumerate_points(ctx, 2)
            .unwrap()
            .into_iter()
            .filter(|p| p.def_degree() == 2)
            .collect();
        assert_eq!(sing.len(), 78);
        assert_eq!(sing, expected);
    }

    #[test]
    fn q3_singular_points_have_multiplicity_two_and_rational_tangent() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        for data in curve.singular_points_quadratic().unwrap().iter().take(12) {
            assert_eq!(data.multiplicity, 2);
            let tangent = data.tangent_line().expect("cone is a double line");
            assert_eq!(tangent.def_degree(), 1);
            assert_eq!(curve.intersection_order(&data.point, &tangent).unwrap(), 3);
            // cross-check the multiplicity on a few other lines
            for line in pencil_through(ctx, &data.point, 2).unwrap().iter().take(4) {
                if *line != tangent {
                    assert_eq!(curve.intersection_order(&data.point, line).unwrap(), 2);
                }
            }
        }
    }

    #[test]
    fn off_curve_and_smooth_points() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        let p = ProjPoint::standard(ctx, 1);
        let data = curve.multiplicity_at(&p).unwrap();
        assert_eq!((data.multiplicity, data.cone), (0, TangentCone::Empty));
        let smooth = enumerate_points(ctx, 3)
            .unwrap()
            .into_iter()
            .find(|p| p.def_degree() == 3 && curve.contains(p))
            .unwrap();
        let data = curve.multiplicity_at(&smooth).unwrap();
        assert_eq!(data.multiplicity, 1);
        let t = data.tangent_line().unwrap();
        assert!(crate::plane::incident(ctx, &smooth, &t));
        assert!(curve.intersection_order(&smooth, &t).unwrap() >= 3);
    }

    #[test]
    fn split_detection() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let g = ctx.generator();
        // (x + g y)^3 = x^3 + g^3 y^3 in characteristic 3
        let phi = [Fel::ONE, Fel::ZERO, Fel::ZERO, ctx.pow(g, 3)];
        assert_eq!(
            split_power_of_line(&ctx, &phi).unwrap(),
            Some((Fel::ONE, g))
        );
        // x y is not a power of a line
        let phi = [Fel::ZERO, Fel::ONE, Fel::ZERO];
        assert_eq!(split_power_of_line(&ctx, &phi).unwrap(), None);
        // y^2
        let phi = [Fel::ZERO, Fel::ZERO, Fel::ONE];
        assert_eq!(
            split_power_of_line(&ctx, &phi).unwrap(),
            Some((Fel::ZERO, Fel::ONE))
        );
    }

    #[test]
    fn restriction_errors() {
        let curve = Curve::for_q(3, 12).unwrap();
        let ctx = curve.ctx();
        let (a, b) = (ProjPoint::standard(ctx, 0), ProjPoint::standard(ctx, 1));
        let l = line_through(ctx, &a, &b).unwrap();
        assert_eq!(
            curve.restrict_at(&ProjPoint::standard(ctx, 2), &l),
            Err(Error::NotIncident)
        );
    }
}
