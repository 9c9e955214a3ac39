use crate::error::{Error, Result};
use rand::Rng;

use crate::field::{Fel, FieldCtx};

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Fel>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Fel>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Fel::ONE)
    }

    pub fn constant(c: Fel) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`.
    pub fn linear(ctx: &FieldCtx, root: Fel) -> Self {
        Self::new(vec![ctx.neg(root), Fel::ONE])
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fel {
        self.coeffs.last().copied().unwrap_or(Fel::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    ctx.add(
                        self.coeffs.get(i).copied().unwrap_or_default(),
                        other.coeffs.get(i).copied().unwrap_or_default(),
                    )
                })
                .collect(),
        )
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Fel) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Fel::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, ctx: &FieldCtx, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(), |acc, _| acc.mul(ctx, self))
    }

    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Fel::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = ctx.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = ctx.sub(rem[i + j], ctx.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Quotient, failing on a nonzero remainder.
    pub fn exact_div(&self, ctx: &FieldCtx, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(ctx, divisor)?;
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder);
        }
        Ok(q)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> UniPoly {
        match ctx.inv(self.lead()) {
            Ok(inv) => self.scale(ctx, inv),
            Err(_) => UniPoly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(ctx, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(c, ctx.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Fel) -> Fel {
        self.coeffs
            .iter()
            .rev()
            .fold(Fel::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn rem(&self, ctx: &FieldCtx, modulus: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(ctx, modulus)?.1)
    }

    pub fn mulmod(&self, ctx: &FieldCtx, other: &UniPoly, modulus: &UniPoly) -> Result<UniPoly> {
        self.mul(ctx, other).rem(ctx, modulus)
    }

    pub fn powmod(&self, ctx: &FieldCtx, mut e: u64, modulus: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(ctx, modulus)?;
        let mut acc = UniPoly::one().rem(ctx, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(ctx, &base, modulus)?;
            }
            base = base.mulmod(ctx, &base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Distinct roots lying in the working field, sorted.
    ///
    /// The roots are those of `gcd(self, t^Q - t)`, separated by the absolute
    /// trace of `a·t` for random `a` (equal-degree splitting into linear factors).
    pub fn roots<R: Rng + ?Sized>(&self, ctx: &FieldCtx, rng: &mut R) -> Result<Vec<Fel>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let f = self.monic(ctx);
        let t = UniPoly::new(vec![Fel::ZERO, Fel::ONE]);
        let frob = t.powmod(ctx, ctx.order(), &f)?;
        let linear_part = f.gcd(ctx, &frob.add(ctx, &t.scale(ctx, ctx.from_int(-1))));
        let mut roots = Vec::new();
        split_linear(ctx, &linear_part, rng, &mut roots)?;
        roots.sort();
        Ok(roots)
    }

    /// `h` with `h(t)^p = self(t)`, valid when only exponents divisible by
    /// `p` occur (the derivative vanishes).
    fn pth_root(&self, ctx: &FieldCtx) -> UniPoly {
        let p = ctx.characteristic() as usize;
        debug_assert!(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % p == 0 || c.is_zero()));
        UniPoly::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|&c| ctx.pth_root(c))
                .collect(),
        )
    }
}

/// `content · Π factor^multiplicity`, factors monic, squarefree, pairwise
/// coprime, multiplicities strictly increasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqfDecomp {
    pub content: Fel,
    pub parts: Vec<(u32, UniPoly)>,
}

impl SqfDecomp {
    pub fn reconstruct(&self, ctx: &FieldCtx) -> UniPoly {
        self.parts
            .iter()
            .fold(UniPoly::constant(self.content), |acc, (m, f)| {
                acc.mul(ctx, &f.pow(ctx, *m))
            })
    }
}

/// Squarefree decomposition over a finite field of characteristic `p`.
///
/// The gcd loop peels off multiplicities prime to `p`; whatever is left is a
/// polynomial in `t^p`, which is unwrapped by coefficient-wise `p`-th roots
/// and decomposed recursively with multiplicities scaled by `p`.
pub fn squarefree_decompose(ctx: &FieldCtx, g: &UniPoly) -> Result<SqfDecomp> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let content = g.lead();
    let mut parts = sqf_monic(ctx, &g.monic(ctx));
    parts.sort_by_key(|(m, _)| *m);
    let mut merged: Vec<(u32, UniPoly)> = Vec::with_capacity(parts.len());
    for (m, f) in parts {
        match merged.last_mut() {
            Some((lm, lf)) if *lm == m => *lf = lf.mul(ctx, &f),
            _ => merged.push((m, f)),
        }
    }
    Ok(SqfDecomp {
        content,
        parts: merged,
    })
}

fn sqf_monic(ctx: &FieldCtx, f: &UniPoly) -> Vec<(u32, UniPoly)> {
    if f.is_constant() {
        return Vec::new();
    }
    let p = ctx.characteristic();
    let deriv = f.derivative(ctx);
    if deriv.is_zero() {
        return scale_multiplicities(sqf_monic(ctx, &f.pth_root(ctx)), p);
    }
    let mut out = Vec::new();
    let mut c = f.gcd(ctx, &deriv);
    let mut w = f.exact_div(ctx, &c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(ctx, &c);
        let z = w.exact_div(ctx, &y).expect("gcd divides");
        if !z.is_constant() {
            out.push((i, z));
        }
        i += 1;
        w = y;
        c = c.exact_div(ctx, &w).expect("gcd divides");
    }
    if !c.is_constant() {
        out.extend(scale_multiplicities(sqf_monic(ctx, &c.pth_root(ctx)), p));
    }
    out
}

fn scale_multiplicities(parts: Vec<(u32, UniPoly)>, p: u32) -> Vec<(u32, UniPoly)> {
    parts.into_iter().map(|(m, f)| (m * p, f)).collect()
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    h: &UniPoly,
    rng: &mut R,
    out: &mut Vec<Fel>,
) -> Result<()> {
    match h.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(ctx.neg(h.coeffs()[0]));
            return Ok(());
        }
        _ => {}
    }
    let p = ctx.characteristic() as u64;
    loop {
        let a = ctx.random(rng);
        if a.is_zero() {
            continue;
        }
        // absolute trace of a·t modulo h; its value at each root lies in F_p
        let mut term = UniPoly::new(vec![Fel::ZERO, a]).rem(ctx, h)?;
        let mut trace = term.clone();
        for _ in 1..ctx.prime_degree() {
            term = term.powmod(ctx, p, h)?;
            trace = trace.add(ctx, &term);
        }
        for c in 0..p {
            let shifted = trace.add(ctx, &UniPoly::constant(ctx.from_int(-(c as i64))));
            let g = h.gcd(ctx, &shifted);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < h.degree().unwrap_or(0) {
                split_linear(ctx, &g, rng, out)?;
                split_linear(ctx, &h.exact_div(ctx, &g)?.monic(ctx), rng, out)?;
                return Ok(());
            }
        }
    }
}

/// Determinant of the Sylvester matrix of `a` and `b` taken with formal
/// degrees `m` and `n`; zero iff the two share a root, provided the formal
/// leading coefficient of `a` is nonzero.
pub fn sylvester_resultant(ctx: &FieldCtx, a: &UniPoly, m: usize, b: &UniPoly, n: usize) -> Fel {
    let size = m + n;
    if size == 0 {
        return Fel::ONE;
    }
    let coeff = |p: &UniPoly, i: usize| p.coeffs().get(i).copied().unwrap_or(Fel::ZERO);
    let mut rows = vec![vec![Fel::ZERO; size]; size];
    for r in 0..n {
        for j in 0..=m {
            rows[r][r + j] = coeff(a, m - j);
        }
    }
    for r in 0..m {
        for j in 0..=n {
            rows[n + r][r + j] = coeff(b, n - j);
        }
    }
    dense_det(ctx, rows)
}

/// Determinant by Gaussian elimination.
pub fn dense_det(ctx: &FieldCtx, mut rows: Vec<Vec<Fel>>) -> Fel {
    let n = rows.len();
    let mut det = Fel::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Fel::ZERO;
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = ctx.neg(det);
        }
        let lead = rows[col][col];
        det = ctx.mul(det, lead);
        let inv = ctx.inv(lead).expect("pivot is nonzero");
        let (upper, lower) = rows.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = ctx.mul(row[col], inv);
            if factor.is_zero() {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = ctx.sub(*x, ctx.mul(factor, y));
            }
        }
    }
    det
}

/// Newton interpolation through points with distinct abscissae.
pub fn interpolate(ctx: &FieldCtx, points: &[(Fel, Fel)]) -> Result<UniPoly> {
    let n = points.len();
    let mut diffs: Vec<Fel> = points.iter().map(|&(_, y)| y).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = ctx.sub(diffs[i], diffs[i - 1]);
            let den = ctx.sub(points[i].0, points[i - level].0);
            diffs[i] = ctx.div(num, den)?;
        }
    }
    let mut acc = UniPoly::zero();
    for i in (0..n).rev() {
        acc = acc
            .mul(ctx, &UniPoly::linear(ctx, points[i].0))
            .add(ctx, &UniPoly::constant(diffs[i]));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &FieldCtx, c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| ctx.from_int(v)).collect())
    }

    #[test]
    fn decomposition_examples() {
        let f3 = FieldCtx::new(3, 1, 1).unwrap();
        // t^2 (t + 1)
        let g = poly(&f3, &[0, 0, 1, 1]);
        let d = squarefree_decompose(&f3, &g).unwrap();
        assert_eq!(
            d.parts,
            vec![(1, poly(&f3, &[1, 1])), (2, poly(&f3, &[0, 1]))]
        );

        let f2 = FieldCtx::new(2, 1, 1).unwrap();
        let d = squarefree_decompose(&f2, &poly(&f2, &[0, 0, 1, 0, 1])).unwrap();
        assert_eq!(d.parts, vec![(2, poly(&f2, &[0, 1, 1]))]);
        let d = squarefree_decompose(&f2, &poly(&f2, &[1, 0, 1, 0, 1])).unwrap();
        assert_eq!(d.parts, vec![(2, poly(&f2, &[1, 1, 1]))]);

        assert_eq!(
            squarefree_decompose(&f2, &UniPoly::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn p_power_multiplicities() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let a = UniPoly::linear(&ctx, ctx.generator());
        let b = UniPoly::linear(&ctx, Fel::ONE);
        // a^3 b^7 c^9 with c = t
        let c = poly(&ctx, &[0, 1]);
        let g = a
            .pow(&ctx, 3)
            .mul(&ctx, &b.pow(&ctx, 7))
            .mul(&ctx, &c.pow(&ctx, 9));
        let d = squarefree_decompose(&ctx, &g.scale(&ctx, ctx.generator())).unwrap();
        let mults: Vec<u32> = d.parts.iter().map(|(m, _)| *m).collect();
        assert_eq!(mults, vec![3, 7, 9]);
        assert_eq!(d.content, ctx.generator());
        assert_eq!(d.reconstruct(&ctx), g.scale(&ctx, ctx.generator()));
    }

    #[test]
    fn roots_and_interpolation() {
        use rand::SeedableRng;
        let ctx = FieldCtx::new(2, 1, 12).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let roots: Vec<Fel> = (0..6).map(|_| ctx.random(&mut rng)).collect();
        let mut expected = roots.clone();
        expected.sort();
        expected.dedup();
        let cubic = poly(&ctx, &[1, 1, 0, 1]);
        let mut f = roots.iter().fold(UniPoly::one(), |acc, &r| {
            acc.mul(&ctx, &UniPoly::linear(&ctx, r))
        });
        assert_eq!(f.roots(&ctx, &mut rng).unwrap(), expected);
        f = f.mul(&ctx, &cubic);
        // t^3 + t + 1 splits in F_8, which lies in F_{2^12}
        assert_eq!(f.roots(&ctx, &mut rng).unwrap().len(), expected.len() + 3);

        let pts: Vec<(Fel, Fel)> = (0..7)
            .map(|i| {
                let x = ctx.pow(ctx.generator(), i);
                (x, f.eval(&ctx, x))
            })
            .collect();
        let g = interpolate(&ctx, &pts).unwrap();
        assert!(g.degree().unwrap() <= 6);
        for (x, y) in pts {
            assert_eq!(g.eval(&ctx, x), y);
        }
    }

    #[test]
    fn resultant_detects_common_roots() {
        let ctx = FieldCtx::new(5, 1, 1).unwrap();
        let a = poly(&ctx, &[1, 1]).mul(&ctx, &poly(&ctx, &[2, 1]));
        let b = poly(&ctx, &[2, 1]);
        assert!(sylvester_resultant(&ctx, &a, 2, &b, 1).is_zero());
        let c = poly(&ctx, &[3, 1]);
        // Res((t+1)(t+2), t+3) = (-3+1)(-3+2) = 2
        assert_eq!(sylvester_resultant(&ctx, &a, 2, &c, 1), ctx.from_int(2));
        let rows = vec![
            vec![ctx.from_int(2), ctx.from_int(1)],
            vec![ctx.from_int(1), ctx.from_int(3)],
        ];
        assert_eq!(dense_det(&ctx, rows), ctx.from_int(5));
    }

    #[test]
    fn gcd_and_division() {
        let ctx = FieldCtx::new(5, 1, 1).unwrap();
        let a = poly(&ctx, &[1, 1]);
        let b = poly(&ctx, &[2, 1]);
        let g = a.mul(&ctx, &b).gcd(&ctx, &a.mul(&ctx, &a));
        assert_eq!(g, a);
        assert_eq!(a.exact_div(&ctx, &b), Err(Error::NonzeroRemainder));
    }
}
