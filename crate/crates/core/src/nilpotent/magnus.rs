//! Truncated Magnus series `Z<<X_1..X_r>> / (degree > c)`.
//!
//! `x_i ↦ 1 + X_i` embeds the free nilpotent group of class `c` into the unit
//! group of this ring, so any word can be evaluated here and its Mal'cev
//! coordinates read off weight by weight. The presentation uses it to derive
//! its commutator relations.

use crate::scalar::Exponent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Series<Z> {
    rank: usize,
    /// `coeffs[d]` holds the coefficients of the `rank^d` words of length `d`,
    /// first letter most significant.
    coeffs: Vec<Vec<Z>>,
}

impl<Z: Exponent> Series<Z> {
    pub fn one(rank: usize, class: usize) -> Self {
        let coeffs = (0..=class)
            .map(|d| {
                let mut v = vec![Z::zero(); rank.pow(d as u32)];
                if d == 0 {
                    v[0] = Z::one();
                }
                v
            })
            .collect();
        Series { rank, coeffs }
    }

    /// `1 + X_g`.
    pub fn generator(rank: usize, class: usize, g: usize) -> Self {
        let mut s = Self::one(rank, class);
        if class >= 1 {
            s.coeffs[1][g] = Z::one();
        }
        s
    }

    pub fn class(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self, d: usize) -> &[Z] {
        &self.coeffs[d]
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0][0].is_one()
            && self.coeffs[1..]
                .iter()
                .all(|v| v.iter().all(|x| x.is_zero()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let class = self.class();
        let mut out = Self::one(self.rank, class);
        out.coeffs[0][0] = Z::zero();
        for a in 0..=class {
            let left = &self.coeffs[a];
            for b in 0..=(class - a) {
                let right = &other.coeffs[b];
                let target = &mut out.coeffs[a + b];
                let stride = right.len();
                for (i, x) in left.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let base = i * stride;
                    for (j, y) in right.iter().enumerate() {
                        if !y.is_zero() {
                            target[base + j] = target[base + j].clone() + x.clone() * y.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term 1, solved degree by degree.
    pub fn inverse(&self) -> Self {
        debug_assert!(self.coeffs[0][0].is_one());
        let class = self.class();
        let mut inv = Self::one(self.rank, class);
        for n in 1..=class {
            let mut acc = vec![Z::zero(); self.rank.pow(n as u32)];
            for a in 1..=n {
                let left = &self.coeffs[a];
                let right = &inv.coeffs[n - a];
                let stride = right.len();
                for (i, x) in left.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in right.iter().enumerate() {
                        if !y.is_zero() {
                            acc[i * stride + j] =
                                acc[i * stride + j].clone() - x.clone() * y.clone();
                        }
                    }
                }
            }
            inv.coeffs[n] = acc;
        }
        inv
    }

    pub fn pow(&self, exponent: &Z) -> Self {
        let (mut base, mut e) = if exponent.is_negative() {
            (self.inverse(), -exponent.clone())
        } else {
            (self.clone(), exponent.clone())
        };
        let two = Z::one() + Z::one();
        let mut acc = Self::one(self.rank, self.class());
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.mul(&base);
            }
            e = e / two.clone();
            if !e.is_zero() {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }
}
