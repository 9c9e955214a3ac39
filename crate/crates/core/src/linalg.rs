//! 3×3 matrices and coordinate vectors over the working field.

use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};

pub type Vec3 = [Fel; 3];

pub fn dot(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Fel {
    ctx.sum((0..3).map(|i| ctx.mul(a[i], b[i])))
}

pub fn cross(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Vec3 {
    let c = |i: usize, j: usize| ctx.sub(ctx.mul(a[i], b[j]), ctx.mul(a[j], b[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

pub fn unit(i: usize) -> Vec3 {
    let mut v = [Fel::ZERO; 3];
    v[i] = Fel::ONE;
    v
}

/// Row-major 3×3 matrix acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mat3(pub [[Fel; 3]; 3]);

/// One factor of an elementary decomposition `M = E_1 E_2 ... E_k`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Elementary {
    /// Exchanges coordinates `i` and `j`.
    Swap(usize, usize),
    /// Multiplies coordinate `i` by a nonzero scalar.
    Scale(usize, Fel),
    /// `(Ev)_target = v_target + factor * v_source`.
    AddMultiple {
        target: usize,
        source: usize,
        factor: Fel,
    },
}

impl Mat3 {
    pub fn identity() -> Self {
        Mat3([unit(0), unit(1), unit(2)])
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut m = [[Fel::ZERO; 3]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        Mat3(m)
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn row(&self, i: usize) -> Vec3 {
        self.0[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = Fel> + '_ {
        self.0.iter().flatten().copied()
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Mat3) -> Mat3 {
        let mut out = [[Fel::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = ctx.sum((0..3).map(|k| ctx.mul(self.0[i][k], other.0[k][j])));
            }
        }
        Mat3(out)
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &Vec3) -> Vec3 {
        [
            dot(ctx, &self.0[0], v),
            dot(ctx, &self.0[1], v),
            dot(ctx, &self.0[2], v),
        ]
    }

    /// Row vector times matrix, used for pulling back linear forms.
    pub fn apply_left(&self, ctx: &FieldCtx, v: &Vec3) -> Vec3 {
        let mut out = [Fel::ZERO; 3];
        for (j, o) in out.iter_mut().enumerate() {
            *o = ctx.sum((0..3).map(|i| ctx.mul(v[i], self.0[i][j])));
        }
        out
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Fel) -> Mat3 {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|x| *x = ctx.mul(*x, c));
        Mat3(out)
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fel {
        dot(ctx, &self.0[0], &cross(ctx, &self.0[1], &self.0[2]))
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Mat3> {
        let det_inv = ctx.inv(self.det(ctx)).map_err(|_| Error::SingularMatrix)?;
        // adjugate: columns of the inverse are cross products of rows
        let r = &self.0;
        let cols = [
            cross(ctx, &r[1], &r[2]),
            cross(ctx, &r[2], &r[0]),
            cross(ctx, &r[0], &r[1]),
        ];
        Ok(Mat3::from_columns(cols).scale(ctx, det_inv))
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = [[Fel::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[j][i];
            }
        }
        Mat3(out)
    }

    /// Gauss-Jordan factorization into elementary matrices, ordered so that
    /// their product (left to right) is `self`.
    pub fn elementary_factors(&self, ctx: &FieldCtx) -> Result<Vec<Elementary>> {
        let mut a = self.0;
        let mut factors = Vec::new();
        for col in 0..3 {
            let pivot = (col..3)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap(pivot, col);
                factors.push(Elementary::Swap(pivot, col));
            }
            let pv = a[col][col];
            if pv != Fel::ONE {
                let pinv = ctx.inv(pv)?;
                a[col].iter_mut().for_each(|x| *x = ctx.mul(*x, pinv));
                factors.push(Elementary::Scale(col, pv));
            }
            for r in 0..3 {
                let c = a[r][col];
                if r == col || c.is_zero() {
                    continue;
                }
                let src = a[col];
                for (x, s) in a[r].iter_mut().zip(src) {
                    *x = ctx.sub(*x, ctx.mul(c, s));
                }
                factors.push(Elementary::AddMultiple {
                    target: r,
                    source: col,
                    factor: c,
                });
            }
        }
        Ok(factors)
    }

    pub fn from_elementary(e: &Elementary) -> Mat3 {
        let mut m = Mat3::identity();
        match *e {
            Elementary::Swap(i, j) => m.0.swap(i, j),
            Elementary::Scale(i, c) => m.0[i][i] = c,
            Elementary::AddMultiple {
                target,
                source,
                factor,
            } => m.0[target][source] = factor,
        }
        m
    }
}

/// Matrix with `v` in column `slot` and the remaining columns filled, in
/// increasing column order, by the lexicographically first pair of standard
/// basis vectors that makes it invertible.
pub fn complete_basis(ctx: &FieldCtx, v: &Vec3, slot: usize) -> Result<Mat3> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut others = [unit(i), unit(j)].into_iter();
        let mut cols = [[Fel::ZERO; 3]; 3];
        for (c, col) in cols.iter_mut().enumerate() {
            *col = if c == slot {
                *v
            } else {
                others.next().unwrap()
            };
        }
        let m = Mat3::from_columns(cols);
        if !m.det(ctx).is_zero() {
            return Ok(m);
        }
    }
    unreachable!("a nonzero vector always completes to a basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Mat3 {
        loop {
            let mut m = [[Fel::ZERO; 3]; 3];
            m.iter_mut()
                .flatten()
                .for_each(|x| *x = ctx.random_in_subfield(1, rng).unwrap());
            let m = Mat3(m);
            if !m.det(ctx).is_zero() {
                return m;
            }
        }
    }

    #[test]
    fn inverse_and_factors() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = random_invertible(&ctx, &mut rng);
            let inv = m.inverse(&ctx).unwrap();
            assert_eq!(m.mul(&ctx, &inv), Mat3::identity());
            let product = m
                .elementary_factors(&ctx)
                .unwrap()
                .iter()
                .fold(Mat3::identity(), |acc, e| {
                    acc.mul(&ctx, &Mat3::from_elementary(e))
                });
            assert_eq!(product, m);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let m = Mat3([[Fel::ONE; 3]; 3]);
        assert_eq!(m.inverse(&ctx), Err(Error::SingularMatrix));
        assert_eq!(m.elementary_factors(&ctx), Err(Error::SingularMatrix));
    }

    #[test]
    fn completion_prefers_low_indices() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let t = complete_basis(&ctx, &unit(1), 1).unwrap();
        assert_eq!(t, Mat3::identity());
        let t = complete_basis(&ctx, &unit(0), 2).unwrap();
        assert_eq!(t.column(0), unit(1));
        assert_eq!(t.column(1), unit(2));
    }
}
