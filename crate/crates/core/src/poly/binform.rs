use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};

use super::univariate::{squarefree_decompose, UniPoly};

/// Binary form `Σ coeffs[i] s^{d-i} t^i` of degree `d`.
///
/// The parameter `(1:0)` (a root of `t`) is the first point of a line
/// parametrization `s·A + t·B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinForm {
    degree: u32,
    coeffs: Vec<Fel>,
}

impl BinForm {
    pub fn new(degree: u32, mut coeffs: Vec<Fel>) -> Self {
        coeffs.resize(degree as usize + 1, Fel::ZERO);
        BinForm { degree, coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, s: Fel, t: Fel) -> Fel {
        let d = self.degree as u64;
        ctx.sum(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| ctx.mul(c, ctx.mul(ctx.pow(s, d - i as u64), ctx.pow(t, i as u64)))),
        )
    }

    /// Multiplicity of the root `(1:0)`, the power of `t` dividing the form.
    pub fn order_at_first_point(&self) -> Result<u32> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i as u32)
            .ok_or(Error::ZeroPolynomial)
    }

    /// `g(s, 1)` as a polynomial in `s`; its roots are the points `s·A + B`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().copied().collect())
    }

    /// Root multiplicities over the algebraic closure, as
    /// `(multiplicity, number of distinct roots)` sorted by multiplicity.
    pub fn multiplicity_profile(&self, ctx: &FieldCtx) -> Result<Vec<(u32, u32)>> {
        let at_first = self.order_at_first_point()?;
        let mut entries = affine_profile(ctx, &self.dehomogenize())?;
        if at_first > 0 {
            entries.push((at_first, 1));
        }
        Ok(merge_profile(entries))
    }
}

/// Profile of the roots of a nonzero univariate polynomial.
pub fn affine_profile(ctx: &FieldCtx, g: &UniPoly) -> Result<Vec<(u32, u32)>> {
    let decomp = squarefree_decompose(ctx, g)?;
    Ok(decomp
        .parts
        .iter()
        .map(|(m, f)| (*m, f.degree().unwrap_or(0) as u32))
        .filter(|(_, count)| *count > 0)
        .collect())
}

pub fn merge_profile(mut entries: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    entries.sort();
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(entries.len());
    for (m, c) in entries {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let one = Fel::ONE;
        let zero = Fel::ZERO;
        // s^4 + s^2 t^2 + t^4
        let g = BinForm::new(4, vec![one, zero, one, zero, one]);
        assert_eq!(g.multiplicity_profile(&ctx).unwrap(), vec![(2, 2)]);
        // s t
        let g = BinForm::new(2, vec![zero, one, zero]);
        assert_eq!(g.multiplicity_profile(&ctx).unwrap(), vec![(1, 2)]);
        // t^3
        let g = BinForm::new(3, vec![zero, zero, zero, one]);
        assert_eq!(g.multiplicity_profile(&ctx).unwrap(), vec![(3, 1)]);
        assert_eq!(g.order_at_first_point().unwrap(), 3);
        assert!(BinForm::zero(3).multiplicity_profile(&ctx).is_err());
    }
}
