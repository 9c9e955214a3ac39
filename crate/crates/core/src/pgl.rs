//! Projective linear groups over subfields, their action on curves, and
//! projection-stabilizing subgroups.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};
use crate::linalg::{complete_basis, Mat3};
use crate::plane::{def_degree_of, ProjPoint};
use crate::poly::TriPoly;

/// Largest group the enumerator will materialize.
pub const MAX_PGL_ORDER: u128 = 10_000_000;

/// Invertible matrix scaled so its first nonzero entry in row-major order is one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PglElt {
    matrix: Mat3,
    def_degree: u32,
}

impl PglElt {
    pub fn new(ctx: &FieldCtx, matrix: Mat3) -> Result<Self> {
        if matrix.det(ctx).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lead = matrix
            .entries()
            .find(|x| !x.is_zero())
            .expect("det is nonzero");
        let matrix = matrix.scale(ctx, ctx.inv(lead)?);
        Ok(PglElt {
            matrix,
            def_degree: def_degree_of(ctx, matrix.entries()),
        })
    }

    pub fn identity() -> Self {
        PglElt {
            matrix: Mat3::identity(),
            def_degree: 1,
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn def_degree(&self) -> u32 {
        self.def_degree
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &PglElt) -> PglElt {
        PglElt::new(ctx, self.matrix.mul(ctx, &other.matrix)).expect("product of invertibles")
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> PglElt {
        PglElt::new(ctx, self.matrix.inverse(ctx).expect("invertible")).expect("invertible")
    }

    pub fn serialize(&self, ctx: &FieldCtx) -> SerializedMatrix {
        SerializedMatrix {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| ctx.coeffs(self.matrix.0[i][j]))),
        }
    }

    pub fn from_serialized(ctx: &FieldCtx, s: &SerializedMatrix) -> Result<Self> {
        let mut m = [[Fel::ZERO; 3]; 3];
        for (i, row) in s.rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                m[i][j] = ctx.from_coeffs(entry)?;
            }
        }
        PglElt::new(ctx, Mat3(m))
    }
}

/// Rows of coefficient vectors over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedMatrix {
    pub rows: [[Vec<u32>; 3]; 3],
}

/// `|PGL(3, F_s)|` for a field of order `s`.
pub fn pgl_order(s: u128) -> u128 {
    (s.pow(3) - 1) * (s.pow(3) - s) * (s.pow(3) - s * s) / (s - 1)
}

/// Every element of `PGL(3, F_{q^k})`: the first row runs over normalized
/// nonzero vectors, the other two over all vectors.
pub fn enumerate_pgl(ctx: &FieldCtx, k: u32) -> Result<Vec<PglElt>> {
    let elems = ctx.enumerate_subfield(k)?;
    let order = pgl_order(elems.len() as u128);
    if order > MAX_PGL_ORDER {
        return Err(Error::GuardExceeded {
            what: "PGL order",
            size: order,
            limit: MAX_PGL_ORDER,
        });
    }
    let mut all_vectors: Vec<[Fel; 3]> = Vec::with_capacity(elems.len().pow(3));
    for &a in &elems {
        for &b in &elems {
            for &c in &elems {
                all_vectors.push([a, b, c]);
            }
        }
    }
    let first_rows: Vec<[Fel; 3]> = all_vectors
        .iter()
        .copied()
        .filter(|v| v.iter().find(|x| !x.is_zero()) == Some(&Fel::ONE))
        .collect();
    let mut out = Vec::with_capacity(order as usize);
    for r0 in &first_rows {
        for r1 in &all_vectors {
            for r2 in &all_vectors {
                let m = Mat3([*r0, *r1, *r2]);
                if !m.det(ctx).is_zero() {
                    out.push(PglElt {
                        matrix: m,
                        def_degree: def_degree_of(ctx, m.entries()),
                    });
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u128, order);
    Ok(out)
}

/// `λ` with `f ∘ A = λ f`, if any.
pub fn preserves_curve(ctx: &FieldCtx, a: &PglElt, f: &TriPoly) -> Result<Option<Fel>> {
    let g = f.substitute_linear(ctx, a.matrix())?;
    let Some((lead, c)) = f.leading() else {
        return Ok(Some(Fel::ONE));
    };
    if g.len() != f.len() {
        return Ok(None);
    }
    let lambda = ctx.div(g.coeff(&lead), c)?;
    if lambda.is_zero() {
        return Ok(None);
    }
    let matches = f.terms().all(|(m, &c)| g.coeff(m) == ctx.mul(lambda, c));
    Ok(matches.then_some(lambda))
}

/// Change of basis sending the canonical center `(0:1:0)` to `p`.
pub fn center_basis(ctx: &FieldCtx, p: &ProjPoint) -> Result<Mat3> {
    complete_basis(ctx, p.coords(), 1)
}

/// The `q^{2e}(q^e - 1)` elements fixing every line through `p`, as
/// conjugates `T S T⁻¹` of `S` with rows `(1,0,0), (γ,δ,β), (0,0,1)`.
pub fn projection_stabilizer_candidates<'a>(
    ctx: &'a FieldCtx,
    p: &ProjPoint,
    e: u32,
) -> Result<impl Iterator<Item = PglElt> + use<'a>> {
    let elems = ctx.enumerate_subfield(e)?;
    if !p.defined_over(e) {
        return Err(Error::NotDefinedOver { k: e });
    }
    let t = center_basis(ctx, p)?;
    let t_inv = t.inverse(ctx)?;
    let units: Vec<Fel> = elems.iter().copied().filter(|x| !x.is_zero()).collect();
    let mut triples = Vec::with_capacity(elems.len() * elems.len() * units.len());
    for &gamma in &elems {
        for &beta in &elems {
            for &delta in &units {
                triples.push((gamma, delta, beta));
            }
        }
    }
    Ok(triples.into_iter().map(move |(gamma, delta, beta)| {
        let s = Mat3([
            [Fel::ONE, Fel::ZERO, Fel::ZERO],
            [gamma, delta, beta],
            [Fel::ZERO, Fel::ZERO, Fel::ONE],
        ]);
        PglElt::new(ctx, t.mul(ctx, &s).mul(ctx, &t_inv)).expect("conjugate is invertible")
    }))
}

/// Whether `a` fixes every line through `p`: after conjugating the center
/// to `(0:1:0)` the first and third rows are proportional to `(1,0,0)` and
/// `(0,0,1)` with the same scalar.
pub fn fixes_lines_through(ctx: &FieldCtx, a: &PglElt, p: &ProjPoint) -> Result<bool> {
    let t = center_basis(ctx, p)?;
    let s = t.inverse(ctx)?.mul(ctx, a.matrix()).mul(ctx, &t);
    let c = s.0[0][0];
    Ok(!c.is_zero()
        && s.0[0][1].is_zero()
        && s.0[0][2].is_zero()
        && s.0[2][0].is_zero()
        && s.0[2][1].is_zero()
        && s.0[2][2] == c)
}

/// Subgroup of linear automorphisms of the curve fixing every line through
/// a point, found by exhaustive search over `F_{q^e}`.
#[derive(Clone, Debug)]
pub struct PositiveWitness {
    pub search_degree: u32,
    pub order: u32,
    pub generators: Vec<PglElt>,
    pub elements: Vec<PglElt>,
}

/// Searches for `target` candidates over `F_{q^e}` preserving the curve;
/// succeeds only when exactly `target` are found and they form a group.
pub fn positive_certificate(
    curve: &Curve,
    p: &ProjPoint,
    e: u32,
    target: u32,
) -> Result<Option<PositiveWitness>> {
    let ctx = curve.ctx();
    let mut elements = Vec::new();
    for a in projection_stabilizer_candidates(ctx, p, e)? {
        if preserves_curve(ctx, &a, curve.poly())?.is_some() {
            elements.push(a);
            if elements.len() > target as usize {
                return Ok(None);
            }
        }
    }
    if elements.len() != target as usize || !is_closed_group(ctx, &elements) {
        return Ok(None);
    }
    elements.sort();
    let generators = greedy_generators(ctx, &elements);
    Ok(Some(PositiveWitness {
        search_degree: e,
        order: target,
        generators,
        elements,
    }))
}

/// Full multiplication-table and inverse check.
pub fn is_closed_group(ctx: &FieldCtx, elements: &[PglElt]) -> bool {
    let set: HashSet<PglElt> = elements.iter().copied().collect();
    set.len() == elements.len()
        && set.contains(&PglElt::identity())
        && elements.iter().all(|a| set.contains(&a.inverse(ctx)))
        && elements
            .iter()
            .all(|a| elements.iter().all(|b| set.contains(&a.mul(ctx, b))))
}

/// Closure of `gens` under multiplication.
pub fn generated_subgroup(ctx: &FieldCtx, gens: &[PglElt]) -> BTreeSet<PglElt> {
    let mut group = BTreeSet::from([PglElt::identity()]);
    let mut frontier = vec![PglElt::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(ctx, g);
            if group.insert(y) {
                frontier.push(y);
            }
        }
    }
    group
}

/// Adds each element not yet generated, in the order given.
fn greedy_generators(ctx: &FieldCtx, elements: &[PglElt]) -> Vec<PglElt> {
    let mut gens = Vec::new();
    let mut span = generated_subgroup(ctx, &gens);
    for a in elements {
        if !span.contains(a) {
            gens.push(*a);
            span = generated_subgroup(ctx, &gens);
        }
    }
    gens
}
