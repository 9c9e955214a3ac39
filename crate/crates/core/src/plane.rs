//! Points and lines of the projective plane over subfields of the working field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{divisors, Fel, FieldCtx};
use crate::linalg::{cross, dot, unit, Vec3};

/// Scales so the first nonzero coordinate is one.
pub fn normalize(ctx: &FieldCtx, v: &Vec3) -> Result<Vec3> {
    let lead = v
        .iter()
        .copied()
        .find(|x| !x.is_zero())
        .ok_or(Error::ZeroVector)?;
    let inv = ctx.inv(lead)?;
    Ok([ctx.mul(v[0], inv), ctx.mul(v[1], inv), ctx.mul(v[2], inv)])
}

/// Smallest `k | L` with every entry in `F_{q^k}`.
pub fn def_degree_of<I: IntoIterator<Item = Fel>>(ctx: &FieldCtx, entries: I) -> u32 {
    let entries: Vec<Fel> = entries.into_iter().collect();
    divisors(ctx.working_degree())
        .into_iter()
        .find(|&k| {
            entries
                .iter()
                .all(|&a| ctx.in_subfield(a, k).unwrap_or(false))
        })
        .unwrap_or(ctx.working_degree())
}

macro_rules! projective_type {
    ($name:ident) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
        pub struct $name {
            coords: Vec3,
            def_degree: u32,
        }

        impl $name {
            pub fn new(ctx: &FieldCtx, coords: Vec3) -> Result<Self> {
                let coords = normalize(ctx, &coords)?;
                let def_degree = def_degree_of(ctx, coords);
                Ok($name { coords, def_degree })
            }

            pub fn coords(&self) -> &Vec3 {
                &self.coords
            }

            pub fn def_degree(&self) -> u32 {
                self.def_degree
            }

            /// Whether the object is defined over `F_{q^k}`.
            pub fn defined_over(&self, k: u32) -> bool {
                k % self.def_degree == 0
            }
        }
    };
}

projective_type!(ProjPoint);
projective_type!(ProjLine);

impl ProjPoint {
    pub fn standard(ctx: &FieldCtx, i: usize) -> Self {
        ProjPoint::new(ctx, unit(i)).expect("unit vector")
    }
}

impl ProjLine {
    /// A point of the line different from `avoid`: the first of the
    /// intersections with `x = 0`, `y = 0`, `z = 0` that qualifies.
    pub fn point_other_than(&self, ctx: &FieldCtx, avoid: &ProjPoint) -> ProjPoint {
        (0..3)
            .filter_map(|i| ProjPoint::new(ctx, cross(ctx, &self.coords, &unit(i))).ok())
            .find(|pt| pt != avoid)
            .expect("a projective line has at least three points")
    }

    /// Two distinct points spanning the line.
    pub fn spanning_points(&self, ctx: &FieldCtx) -> (ProjPoint, ProjPoint) {
        let mut pts =
            (0..3).filter_map(|i| ProjPoint::new(ctx, cross(ctx, &self.coords, &unit(i))).ok());
        let a = pts.next().expect("line meets a coordinate line");
        let b = pts
            .find(|p| *p != a)
            .unwrap_or_else(|| self.point_other_than(ctx, &a));
        (a, b)
    }
}

pub fn incident(ctx: &FieldCtx, p: &ProjPoint, l: &ProjLine) -> bool {
    dot(ctx, p.coords(), l.coords()).is_zero()
}

pub fn line_through(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine> {
    if a == b {
        return Err(Error::CoincidentPoints);
    }
    ProjLine::new(ctx, cross(ctx, a.coords(), b.coords()))
}

pub fn meet(ctx: &FieldCtx, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::CoincidentPoints);
    }
    ProjPoint::new(ctx, cross(ctx, l.coords(), m.coords()))
}

/// Normalized triples over `F_{q^k}`: `(1:a:b)`, then `(0:1:c)`, then `(0:0:1)`,
/// each class ordered by the subfield enumeration order.
fn enumerate_triples(ctx: &FieldCtx, k: u32) -> Result<Vec<Vec3>> {
    let elems = ctx.enumerate_subfield(k)?;
    let mut out = Vec::with_capacity(elems.len() * elems.len() + elems.len() + 1);
    for &a in &elems {
        for &b in &elems {
            out.push([Fel::ONE, a, b]);
        }
    }
    for &c in &elems {
        out.push([Fel::ZERO, Fel::ONE, c]);
    }
    out.push([Fel::ZERO, Fel::ZERO, Fel::ONE]);
    Ok(out)
}

/// All `q^{2k} + q^k + 1` points of `P^2(F_{q^k})`.
pub fn enumerate_points(ctx: &FieldCtx, k: u32) -> Result<Vec<ProjPoint>> {
    Ok(enumerate_triples(ctx, k)?
        .into_iter()
        .map(|v| ProjPoint {
            coords: v,
            def_degree: def_degree_of(ctx, v),
        })
        .collect())
}

/// All lines of `P^2(F_{q^k})`, in the same order as the points.
pub fn enumerate_lines(ctx: &FieldCtx, k: u32) -> Result<Vec<ProjLine>> {
    Ok(enumerate_triples(ctx, k)?
        .into_iter()
        .map(|v| ProjLine {
            coords: v,
            def_degree: def_degree_of(ctx, v),
        })
        .collect())
}

/// The `q^k + 1` lines over `F_{q^k}` through `p`, obtained by joining `p`
/// to the points of the first coordinate line missing it.
pub fn pencil_through(ctx: &FieldCtx, p: &ProjPoint, k: u32) -> Result<Vec<ProjLine>> {
    let elems = ctx.enumerate_subfield(k)?;
    if !p.defined_over(k) {
        return Err(Error::NotDefinedOver { k });
    }
    let axis = (0..3)
        .find(|&i| !p.coords()[i].is_zero())
        .expect("normalized point");
    // points of the line x_axis = 0, parametrized as P^1(F_{q^k})
    let (u, v) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut targets = Vec::with_capacity(elems.len() + 1);
    for &a in &elems {
        let mut c = [Fel::ZERO; 3];
        c[u] = Fel::ONE;
        c[v] = a;
        targets.push(c);
    }
    let mut c = [Fel::ZERO; 3];
    c[v] = Fel::ONE;
    targets.push(c);
    targets
        .into_iter()
        .map(|t| line_through(ctx, p, &ProjPoint::new(ctx, t)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedProjective {
    pub coords: [Vec<u32>; 3],
    pub def_degree: u32,
}

pub fn serialize_coords(ctx: &FieldCtx, coords: &Vec3, def_degree: u32) -> SerializedProjective {
    SerializedProjective {
        coords: [
            ctx.coeffs(coords[0]),
            ctx.coeffs(coords[1]),
            ctx.coeffs(coords[2]),
        ],
        def_degree,
    }
}

impl ProjPoint {
    pub fn serialize(&self, ctx: &FieldCtx) -> SerializedProjective {
        serialize_coords(ctx, &self.coords, self.def_degree)
    }
}

impl ProjLine {
    pub fn serialize(&self, ctx: &FieldCtx) -> SerializedProjective {
        serialize_coords(ctx, &self.coords, self.def_degree)
    }

    pub fn from_serialized(ctx: &FieldCtx, s: &SerializedProjective) -> Result<Self> {
        let c = [
            ctx.from_coeffs(&s.coords[0])?,
            ctx.from_coeffs(&s.coords[1])?,
            ctx.from_coeffs(&s.coords[2])?,
        ];
        ProjLine::new(ctx, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn point_counts() {
        let ctx2 = FieldCtx::new(2, 1, 12).unwrap();
        assert_eq!(enumerate_points(&ctx2, 1).unwrap().len(), 7);
        assert_eq!(enumerate_points(&ctx2, 2).unwrap().len(), 21);
        let ctx3 = FieldCtx::new(3, 1, 12).unwrap();
        let pts = enumerate_points(&ctx3, 2).unwrap();
        assert_eq!(pts.len(), 91);
        let set: HashSet<_> = pts.iter().collect();
        assert_eq!(set.len(), 91);
        assert_eq!(pts.iter().filter(|p| p.def_degree() == 1).count(), 13);
        for p in &pts {
            assert_eq!(ProjPoint::new(&ctx3, *p.coords()).unwrap(), *p);
        }
        assert!(enumerate_points(&ctx3, 5).is_err());
    }

    #[test]
    fn lines_through_standard_points() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let (e0, e1, e2) = (
            ProjPoint::standard(&ctx, 0),
            ProjPoint::standard(&ctx, 1),
            ProjPoint::standard(&ctx, 2),
        );
        let z0 = line_through(&ctx, &e0, &e1).unwrap();
        assert_eq!(z0.coords(), &unit(2));
        assert_eq!(line_through(&ctx, &e0, &e2).unwrap().coords(), &unit(1));
        assert!(incident(&ctx, &e0, &z0));
        assert!(!incident(&ctx, &e2, &z0));
        assert_eq!(line_through(&ctx, &e0, &e0), Err(Error::CoincidentPoints));
    }

    #[test]
    fn pencils() {
        let ctx = FieldCtx::new(2, 1, 12).unwrap();
        let p = ProjPoint::standard(&ctx, 1);
        let pencil = pencil_through(&ctx, &p, 1).unwrap();
        let coords: Vec<Vec3> = pencil.iter().map(|l| *l.coords()).collect();
        // z = 0, x + z = 0, x = 0
        assert_eq!(
            coords,
            vec![unit(2), [Fel::ONE, Fel::ZERO, Fel::ONE], unit(0)]
        );
        let ctx3 = FieldCtx::new(3, 1, 12).unwrap();
        for p in enumerate_points(&ctx3, 2).unwrap() {
            let pencil = pencil_through(&ctx3, &p, 2).unwrap();
            assert_eq!(pencil.len(), 10);
            assert_eq!(pencil.iter().collect::<HashSet<_>>().len(), 10);
            assert!(pencil.iter().all(|l| incident(&ctx3, &p, l)));
        }
        let off = ProjPoint::new(&ctx3, [Fel::ONE, ctx3.generator(), Fel::ZERO]).unwrap();
        assert_eq!(
            pencil_through(&ctx3, &off, 2),
            Err(Error::NotDefinedOver { k: 2 })
        );
    }

    #[test]
    fn lines_over_f_q_have_q_plus_one_points() {
        let ctx = FieldCtx::new(3, 1, 12).unwrap();
        let pts = enumerate_points(&ctx, 1).unwrap();
        for l in enumerate_lines(&ctx, 1).unwrap() {
            assert_eq!(pts.iter().filter(|p| incident(&ctx, p, &l)).count(), 4);
        }
    }

    #[test]
    fn join_of_f4_points_has_dividing_degree() {
        let ctx = FieldCtx::new(2, 1, 12).unwrap();
        let pts = enumerate_points(&ctx, 2).unwrap();
        for a in &pts {
            for b in &pts {
                if a == b {
                    continue;
                }
                let l = line_through(&ctx, a, b).unwrap();
                assert_eq!(2 % l.def_degree(), 0);
                assert!(incident(&ctx, a, &l) && incident(&ctx, b, &l));
                let c = l.point_other_than(&ctx, a);
                assert!(c != *a && incident(&ctx, &c, &l));
            }
        }
    }
}
