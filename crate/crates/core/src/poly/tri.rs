use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};
use crate::linalg::{Elementary, Mat3, Vec3};
use crate::plane::ProjPoint;

use super::binform::BinForm;

/// Exponent triple of `x^a y^b z^c`, ordered by graded reverse lex with
/// `x > y > z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// `self / other`, assuming divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0[2].cmp(&self.0[2]))
            .then_with(|| other.0[1].cmp(&self.0[1]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `x, y, z`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TriPoly {
    terms: BTreeMap<Monomial, Fel>,
}

/// One entry of a serialized term list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedTerm {
    pub exponents: [u32; 3],
    pub coeff: Vec<u32>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Fel) -> Self {
        Self::monomial(Monomial([0, 0, 0]), c)
    }

    pub fn monomial(m: Monomial, c: Fel) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TriPoly { terms }
    }

    /// The coordinate function `x`, `y` or `z`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Monomial(e), Fel::ONE)
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Fel)>>(ctx: &FieldCtx, terms: I) -> Self {
        let mut out = TriPoly::zero();
        for (m, c) in terms {
            out.add_term(ctx, m, c);
        }
        out
    }

    /// Like [`TriPoly::from_terms`] but rejects terms of the wrong degree.
    pub fn homogeneous<I: IntoIterator<Item = (Monomial, Fel)>>(
        ctx: &FieldCtx,
        degree: u32,
        terms: I,
    ) -> Result<Self> {
        let mut out = TriPoly::zero();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::NotHomogeneous);
            }
            out.add_term(ctx, m, c);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, ctx: &FieldCtx, m: Monomial, c: Fel) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert(Fel::ZERO);
        *entry = ctx.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Fel)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Fel {
        self.terms.get(m).copied().unwrap_or(Fel::ZERO)
    }

    pub fn leading(&self) -> Option<(Monomial, Fel)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(Fel) -> Fel) -> Self {
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = f(*c);
                    (!v.is_zero()).then_some((*m, v))
                })
                .collect(),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ctx, *m, *c);
        }
        out
    }

    pub fn neg(&self, ctx: &FieldCtx) -> TriPoly {
        self.map_coeffs(|c| ctx.neg(c))
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ctx, *m, ctx.neg(*c));
        }
        out
    }

    pub fn scalar_mul(&self, ctx: &FieldCtx, c: Fel) -> TriPoly {
        self.map_coeffs(|x| ctx.mul(x, c))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ctx, ma.mul(mb), ctx.mul(*ca, *cb));
            }
        }
        out
    }

    /// Exact quotient by multivariate division in graded reverse lex order.
    /// Any leading term the divisor cannot absorb means a nonzero remainder.
    pub fn exact_divide(&self, ctx: &FieldCtx, divisor: &TriPoly) -> Result<TriPoly> {
        let (lead_m, lead_c) = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(lead_c)?;
        let mut rem = self.clone();
        let mut quot = TriPoly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lead_m.divides(&m) {
                return Err(Error::NonzeroRemainder);
            }
            let qm = m.div(&lead_m);
            let qc = ctx.mul(c, lead_inv);
            quot.add_term(ctx, qm, qc);
            let neg_qc = ctx.neg(qc);
            for (dm, dc) in &divisor.terms {
                rem.add_term(ctx, dm.mul(&qm), ctx.mul(*dc, neg_qc));
            }
        }
        Ok(quot)
    }

    pub fn eval(&self, ctx: &FieldCtx, v: &Vec3) -> Fel {
        let d = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<Fel>> = v
            .iter()
            .map(|&a| {
                let mut p = Vec::with_capacity(d + 1);
                let mut cur = Fel::ONE;
                for _ in 0..=d {
                    p.push(cur);
                    cur = ctx.mul(cur, a);
                }
                p
            })
            .collect();
        ctx.sum(self.terms.iter().map(|(m, c)| {
            let e = m.0;
            ctx.mul(
                *c,
                ctx.mul(
                    powers[0][e[0] as usize],
                    ctx.mul(powers[1][e[1] as usize], powers[2][e[2] as usize]),
                ),
            )
        }))
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, ctx: &FieldCtx, i: usize) -> TriPoly {
        let mut out = TriPoly::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[i] -= 1;
            out.add_term(ctx, dm, ctx.mul(*c, ctx.from_int(e as i64)));
        }
        out
    }

    /// `f ∘ M`, i.e. the polynomial `v ↦ f(M v)`.
    ///
    /// `M` is factored into elementary matrices and each factor is applied to
    /// dense homogeneous components, so the cost stays near
    /// `terms × degree` instead of expanding products of linear forms.
    pub fn substitute_linear(&self, ctx: &FieldCtx, m: &Mat3) -> Result<TriPoly> {
        let factors = m.elementary_factors(ctx)?;
        let mut by_degree: BTreeMap<u32, Vec<(Monomial, Fel)>> = BTreeMap::new();
        for (mono, c) in &self.terms {
            by_degree
                .entry(mono.degree())
                .or_default()
                .push((*mono, *c));
        }
        let mut out = TriPoly::zero();
        for (d, terms) in by_degree {
            let mut form = DenseForm::from_terms(d, &terms);
            for e in &factors {
                form = form.apply(ctx, e);
            }
            out.terms.extend(form.into_terms());
        }
        Ok(out)
    }

    /// The binary form `g(s, t) = f(s·A + t·B)`. Parameter `(1:0)` is `A`.
    pub fn restrict_to_line(
        &self,
        ctx: &FieldCtx,
        a: &ProjPoint,
        b: &ProjPoint,
    ) -> Result<BinForm> {
        if a == b {
            return Err(Error::CoincidentPoints);
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let Some(d) = self.degree() else {
            return Ok(BinForm::zero(0));
        };
        let third = (0..3)
            .map(crate::linalg::unit)
            .map(|e| Mat3::from_columns([*a.coords(), *b.coords(), e]))
            .find(|m| !m.det(ctx).is_zero())
            .expect("two independent vectors extend to a basis");
        let g = self.substitute_linear(ctx, &third)?;
        let mut coeffs = vec![Fel::ZERO; d as usize + 1];
        for (m, c) in &g.terms {
            if m.0[2] == 0 {
                coeffs[m.0[1] as usize] = *c;
            }
        }
        Ok(BinForm::new(d, coeffs))
    }

    /// Term list sorted from the leading term down.
    pub fn serialize(&self, ctx: &FieldCtx) -> Vec<SerializedTerm> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| SerializedTerm {
                exponents: m.0,
                coeff: ctx.coeffs(*c),
            })
            .collect()
    }

    pub fn deserialize(ctx: &FieldCtx, terms: &[SerializedTerm]) -> Result<TriPoly> {
        let mut out = TriPoly::zero();
        for t in terms {
            out.add_term(ctx, Monomial(t.exponents), ctx.from_coeffs(&t.coeff)?);
        }
        Ok(out)
    }
}

/// Dense homogeneous form of degree `d`, indexed by the exponents of `x`, `y`.
struct DenseForm {
    d: u32,
    coeffs: Vec<Fel>,
}

impl DenseForm {
    fn idx(&self, e: [u32; 3]) -> usize {
        (e[0] * (self.d + 1) + e[1]) as usize
    }

    fn empty(d: u32) -> Self {
        DenseForm {
            d,
            coeffs: vec![Fel::ZERO; ((d + 1) * (d + 1)) as usize],
        }
    }

    fn from_terms(d: u32, terms: &[(Monomial, Fel)]) -> Self {
        let mut f = Self::empty(d);
        for (m, c) in terms {
            let i = f.idx(m.0);
            f.coeffs[i] = *c;
        }
        f
    }

    fn nonzero(&self) -> impl Iterator<Item = ([u32; 3], Fel)> + '_ {
        let d = self.d;
        (0..=d).flat_map(move |a| {
            (0..=d - a).filter_map(move |b| {
                let c = self.coeffs[(a * (d + 1) + b) as usize];
                (!c.is_zero()).then_some(([a, b, d - a - b], c))
            })
        })
    }

    fn into_terms(self) -> Vec<(Monomial, Fel)> {
        self.nonzero().map(|(e, c)| (Monomial(e), c)).collect()
    }

    fn apply(self, ctx: &FieldCtx, e: &Elementary) -> DenseForm {
        let d = self.d;
        match *e {
            Elementary::Swap(i, j) => {
                let mut out = Self::empty(d);
                for (mut ex, c) in self.nonzero() {
                    ex.swap(i, j);
                    let k = out.idx(ex);
                    out.coeffs[k] = c;
                }
                out
            }
            Elementary::Scale(i, s) => {
                let powers = powers_of(ctx, s, d);
                let mut out = self;
                let entries: Vec<_> = out.nonzero().collect();
                for (ex, c) in entries {
                    let k = out.idx(ex);
                    out.coeffs[k] = ctx.mul(c, powers[ex[i] as usize]);
                }
                out
            }
            Elementary::AddMultiple {
                target,
                source,
                factor,
            } => {
                // x_target -> x_target + factor * x_source
                let powers = powers_of(ctx, factor, d);
                let binom = binomials_mod(ctx, d);
                let mut out = Self::empty(d);
                for (ex, c) in self.nonzero() {
                    let a = ex[target];
                    for k in 0..=a {
                        let b = binom[a as usize][k as usize];
                        if b.is_zero() {
                            continue;
                        }
                        let mut ne = ex;
                        ne[target] -= k;
                        ne[source] += k;
                        let idx = out.idx(ne);
                        let term = ctx.mul(c, ctx.mul(b, powers[k as usize]));
                        out.coeffs[idx] = ctx.add(out.coeffs[idx], term);
                    }
                }
                out
            }
        }
    }
}

fn powers_of(ctx: &FieldCtx, s: Fel, d: u32) -> Vec<Fel> {
    let mut out = Vec::with_capacity(d as usize + 1);
    let mut cur = Fel::ONE;
    for _ in 0..=d {
        out.push(cur);
        cur = ctx.mul(cur, s);
    }
    out
}

/// Pascal's triangle reduced into the prime field.
fn binomials_mod(ctx: &FieldCtx, d: u32) -> Vec<Vec<Fel>> {
    let p = ctx.characteristic();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(d as usize + 1);
    for n in 0..=d as usize {
        let mut row = vec![1u32; n + 1];
        for k in 1..n {
            row[k] = (rows[n - 1][k - 1] + rows[n - 1][k]) % p;
        }
        rows.push(row);
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(|v| ctx.from_int(v as i64)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::ProjPoint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x() -> TriPoly {
        TriPoly::var(0)
    }
    fn y() -> TriPoly {
        TriPoly::var(1)
    }
    fn z() -> TriPoly {
        TriPoly::var(2)
    }

    #[test]
    fn grevlex_order() {
        let m = |a, b, c| Monomial([a, b, c]);
        assert!(m(1, 0, 0) > m(0, 1, 0));
        assert!(m(0, 1, 0) > m(0, 0, 1));
        assert!(m(0, 0, 2) > m(1, 0, 0));
        // x y^2 > x^2 z in grevlex (smaller z-power wins)
        assert!(m(1, 2, 0) > m(2, 0, 1));
        assert!(m(2, 1, 0) > m(1, 2, 0));
    }

    #[test]
    fn ring_examples() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let p = x().add(&ctx, &y()).mul(&ctx, &x().sub(&ctx, &y()));
        let expected = x().mul(&ctx, &x()).sub(&ctx, &y().mul(&ctx, &y()));
        assert_eq!(p, expected);
        assert!(p.mul(&ctx, &TriPoly::zero()).is_zero());

        let ctx2 = FieldCtx::new(2, 1, 1).unwrap();
        let s = x().add(&ctx2, &y());
        assert_eq!(
            s.mul(&ctx2, &s),
            x().mul(&ctx2, &x()).add(&ctx2, &y().mul(&ctx2, &y()))
        );
    }

    #[test]
    fn division_examples() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let xy = x().mul(&ctx, &y());
        let num = xy.mul(&ctx, &x()).add(&ctx, &xy.mul(&ctx, &y()));
        assert_eq!(num.exact_divide(&ctx, &xy).unwrap(), x().add(&ctx, &y()));
        let diff = x().mul(&ctx, &x()).sub(&ctx, &y().mul(&ctx, &y()));
        assert_eq!(
            diff.exact_divide(&ctx, &x().add(&ctx, &y())).unwrap(),
            x().sub(&ctx, &y())
        );
        assert_eq!(
            x().add(&ctx, &TriPoly::constant(Fel::ONE))
                .exact_divide(&ctx, &y()),
            Err(Error::NonzeroRemainder)
        );
        assert_eq!(
            x().exact_divide(&ctx, &TriPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn substitution_examples() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let f = x().mul(&ctx, &y()).add(&ctx, &z().mul(&ctx, &z()));
        assert_eq!(f.substitute_linear(&ctx, &Mat3::identity()).unwrap(), f);
        let mu = ctx.generator();
        let mut tau = Mat3::identity();
        tau.0[1][1] = mu;
        assert_eq!(x().substitute_linear(&ctx, &tau).unwrap(), x());
        let mut swap = Mat3::identity();
        swap.0.swap(0, 1);
        let s = x().add(&ctx, &y());
        assert_eq!(s.substitute_linear(&ctx, &swap).unwrap(), s);
    }

    /// Substitution by brute-force expansion of products of linear forms.
    fn substitute_naive(ctx: &FieldCtx, f: &TriPoly, m: &Mat3) -> TriPoly {
        let forms: Vec<TriPoly> = (0..3)
            .map(|i| {
                TriPoly::from_terms(
                    ctx,
                    (0..3).map(|j| {
                        let mut e = [0; 3];
                        e[j] = 1;
                        (Monomial(e), m.0[i][j])
                    }),
                )
            })
            .collect();
        let mut out = TriPoly::zero();
        for (mono, c) in f.terms() {
            let mut t = TriPoly::constant(*c);
            for (form, &exp) in forms.iter().zip(&mono.0) {
                for _ in 0..exp {
                    t = t.mul(ctx, form);
                }
            }
            out = out.add(ctx, &t);
        }
        out
    }

    fn random_poly(ctx: &FieldCtx, rng: &mut ChaCha8Rng, d: u32, k: u32) -> TriPoly {
        let mut terms = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                terms.push((
                    Monomial([a, b, d - a - b]),
                    ctx.random_in_subfield(k, rng).unwrap(),
                ));
            }
        }
        TriPoly::from_terms(ctx, terms)
    }

    fn random_matrix(ctx: &FieldCtx, rng: &mut ChaCha8Rng, k: u32) -> Mat3 {
        loop {
            let mut m = [[Fel::ZERO; 3]; 3];
            m.iter_mut()
                .flatten()
                .for_each(|x| *x = ctx.random_in_subfield(k, rng).unwrap());
            if !Mat3(m).det(ctx).is_zero() {
                return Mat3(m);
            }
        }
    }

    #[test]
    fn substitution_matches_naive_expansion_and_composes() {
        for (p, l) in [(2, 4), (3, 2), (5, 1)] {
            let ctx = FieldCtx::new(p, 1, l).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            for round in 0..30 {
                let f = random_poly(&ctx, &mut rng, 1 + round % 7, l);
                let (m, n) = (
                    random_matrix(&ctx, &mut rng, l),
                    random_matrix(&ctx, &mut rng, l),
                );
                let fm = f.substitute_linear(&ctx, &m).unwrap();
                assert_eq!(fm, substitute_naive(&ctx, &f, &m));
                assert_eq!(
                    fm.substitute_linear(&ctx, &n).unwrap(),
                    f.substitute_linear(&ctx, &m.mul(&ctx, &n)).unwrap()
                );
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let (e0, e1, e2) = (
            ProjPoint::standard(&ctx, 0),
            ProjPoint::standard(&ctx, 1),
            ProjPoint::standard(&ctx, 2),
        );
        let g = x().restrict_to_line(&ctx, &e0, &e1).unwrap();
        assert_eq!(g.coeffs(), &[Fel::ONE, Fel::ZERO]);
        assert!(z().restrict_to_line(&ctx, &e0, &e1).unwrap().is_zero());
        assert_eq!(
            x().restrict_to_line(&ctx, &e2, &e2),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn restriction_agrees_with_evaluation() {
        let ctx = FieldCtx::new(3, 1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_poly(&ctx, &mut rng, 5, 4);
            let a = ProjPoint::new(&ctx, [ctx.random(&mut rng), Fel::ONE, ctx.random(&mut rng)])
                .unwrap();
            let b = ProjPoint::new(&ctx, [Fel::ONE, ctx.random(&mut rng), ctx.random(&mut rng)])
                .unwrap();
            if a == b {
                continue;
            }
            let g = f.restrict_to_line(&ctx, &a, &b).unwrap();
            let (s, t) = (ctx.random(&mut rng), ctx.random(&mut rng));
            let pt: Vec3 = std::array::from_fn(|i| {
                ctx.add(ctx.mul(s, a.coords()[i]), ctx.mul(t, b.coords()[i]))
            });
            assert_eq!(g.eval(&ctx, s, t), f.eval(&ctx, &pt));
        }
    }

    #[test]
    fn serialization_roundtrip_and_order() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_poly(&ctx, &mut rng, 4, 2);
        let s = f.serialize(&ctx);
        assert_eq!(TriPoly::deserialize(&ctx, &s).unwrap(), f);
        let monos: Vec<Monomial> = s.iter().map(|t| Monomial(t.exponents)).collect();
        assert!(monos.windows(2).all(|w| w[0] > w[1]));
    }
}
