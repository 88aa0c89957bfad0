use std::fmt;

use nalgebra::DMatrix;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::VirtualEndomorphism;
use crate::error::{Error, Result};
use crate::nilpotent::GroupElement;
use crate::scalar::Exponent;

/// Distance from 1 below which a spectral radius is reported as indeterminate.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

/// Square matrix over the rationals, acting on row vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix<Z: Exponent> {
    rows: Vec<Vec<Ratio<Z>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralVerdict {
    /// Radius below 1: the induced representation is finite-state.
    FiniteState,
    /// Radius above 1.
    NotFiniteState,
    /// Within tolerance of 1.
    Indeterminate,
}

impl fmt::Display for SpectralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralVerdict::FiniteState => "finite-state",
            SpectralVerdict::NotFiniteState => "not finite-state",
            SpectralVerdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    /// Whether the value came from the `t^r - q` closed form.
    pub exact_form: bool,
}

impl SpectralRadius {
    pub fn verdict(&self) -> SpectralVerdict {
        if self.value < 1.0 - SPECTRAL_TOLERANCE {
            SpectralVerdict::FiniteState
        } else if self.value > 1.0 + SPECTRAL_TOLERANCE {
            SpectralVerdict::NotFiniteState
        } else {
            SpectralVerdict::Indeterminate
        }
    }
}

impl<Z: Exponent> RationalMatrix<Z> {
    pub fn from_rows(rows: Vec<Vec<Ratio<Z>>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Ratio::one() } else { Ratio::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Ratio<Z>>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Ratio<Z> {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Ratio::zero(), |acc, k| {
                            acc + self.rows[i][k].clone() * other.rows[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularLattice)?;
            a.swap(col, p);
            inv.swap(col, p);
            let scale = Ratio::one() / a[col][col].clone();
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = x.clone() * scale.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    a[r][c] = a[r][c].clone() - factor.clone() * a[col][c].clone();
                    inv[r][c] = inv[r][c].clone() - factor.clone() * inv[col][c].clone();
                }
            }
        }
        Ok(RationalMatrix { rows: inv })
    }

    fn trace(&self) -> Ratio<Z> {
        (0..self.dim()).fold(Ratio::zero(), |acc, i| acc + self.rows[i][i].clone())
    }

    /// Monic characteristic polynomial `det(tI - A)`, highest degree first,
    /// by the Faddeev-LeVerrier recurrence.
    pub fn characteristic_polynomial(&self) -> Vec<Ratio<Z>> {
        let n = self.dim();
        let mut coeffs = vec![Ratio::one()];
        let mut m = RationalMatrix {
            rows: vec![vec![Ratio::zero(); n]; n],
        };
        for k in 1..=n {
            let c_prev = coeffs[k - 1].clone();
            for i in 0..n {
                m.rows[i][i] = m.rows[i][i].clone() + c_prev.clone();
            }
            m = self.mul(&m);
            let k_ratio = Ratio::from_integer(Z::from_usize(k).expect("dimension fits"));
            coeffs.push(-m.trace() / k_ratio);
        }
        coeffs
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| ratio_to_f64(&self.rows[i][j]))
    }

    /// Largest eigenvalue modulus. When the characteristic polynomial is
    /// `t^r - q` the value is `|q|^{1/r}`; otherwise eigenvalues are computed
    /// numerically.
    pub fn spectral_radius(&self) -> SpectralRadius {
        let n = self.dim();
        if n == 0 {
            return SpectralRadius {
                value: 0.0,
                exact_form: true,
            };
        }
        let poly = self.characteristic_polynomial();
        if poly[1..n].iter().all(Zero::is_zero) {
            let q = -poly[n].clone();
            return SpectralRadius {
                value: ratio_to_f64(&q.abs()).powf(1.0 / n as f64),
                exact_form: true,
            };
        }
        let value = self
            .to_f64()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        SpectralRadius {
            value,
            exact_form: false,
        }
    }
}

impl<Z: Exponent> fmt::Display for RationalMatrix<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Writes coefficients (highest degree first) as a polynomial in `t`,
/// e.g. `t^3 - 1/2`.
pub fn polynomial_to_string<Z: Exponent>(coeffs: &[Ratio<Z>]) -> String {
    let n = coeffs.len().saturating_sub(1);
    let mut s = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let deg = n - i;
        let abs = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if deg == 0 {
            s.push_str(&abs.to_string());
            continue;
        }
        if !abs.is_one() {
            s.push_str(&abs.to_string());
            s.push(' ');
        }
        s.push('t');
        if deg > 1 {
            s.push('^');
            s.push_str(&deg.to_string());
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn ratio_to_f64<Z: Exponent>(r: &Ratio<Z>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Abelianized matrix `M` with `ā(h_i) M = ā(f(h_i))` for each distinguished
/// generator, where `ā` is the abelianization written as a row vector.
pub fn abelianized_matrix_of<Z: Exponent>(
    generators: &[GroupElement<Z>],
    images: &[GroupElement<Z>],
) -> Result<RationalMatrix<Z>> {
    if generators.len() != images.len() {
        return Err(Error::InvalidArgument(
            "need as many images as generators".into(),
        ));
    }
    let to_rows = |xs: &[GroupElement<Z>]| -> Result<RationalMatrix<Z>> {
        RationalMatrix::from_rows(
            xs.iter()
                .map(|x| x.abelianization().into_iter().map(Ratio::from_integer).collect())
                .collect(),
        )
    };
    let domain = to_rows(generators)?;
    let target = to_rows(images)?;
    Ok(domain.inverse()?.mul(&target))
}

pub fn abelianized_matrix<Z: Exponent>(f: &VirtualEndomorphism<Z>) -> Result<RationalMatrix<Z>> {
    abelianized_matrix_of(f.generators(), f.images())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::Presentation;
    use crate::selfsim::cyclic_data;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn polynomial_text() {
        assert_eq!(polynomial_to_string(&[r(1, 1), r(0, 1), r(0, 1), r(-1, 2)]), "t^3 - 1/2");
        assert_eq!(polynomial_to_string(&[r(1, 1), r(-3, 1), r(2, 1)]), "t^2 - 3 t + 2");
        assert_eq!(polynomial_to_string::<i64>(&[]), "0");
    }

    #[test]
    fn companion_form_for_cyclic_map() {
        let p = Presentation::<i64>::new(3, 2).unwrap();
        let (gens, images) = cyclic_data(&p, &[2, 1, 1]).unwrap();
        let m = abelianized_matrix_of(&gens, &images).unwrap();
        assert_eq!(m.get(0, 2), &r(1, 2));
        assert_eq!(m.get(1, 0), &r(1, 1));
        assert_eq!(m.get(2, 1), &r(1, 1));
        assert_eq!(
            m.characteristic_polynomial(),
            vec![r(1, 1), r(0, 1), r(0, 1), r(-1, 2)]
        );
        let rho = m.spectral_radius();
        assert!(rho.exact_form);
        assert!((rho.value - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert_eq!(rho.verdict(), SpectralVerdict::FiniteState);
    }

    #[test]
    fn unit_exponents_give_radius_one() {
        let p = Presentation::<i64>::new(3, 2).unwrap();
        let (gens, images) = cyclic_data(&p, &[1, 1, 1]).unwrap();
        let rho = abelianized_matrix_of(&gens, &images).unwrap().spectral_radius();
        assert!((rho.value - 1.0).abs() < 1e-12);
        assert_eq!(rho.verdict(), SpectralVerdict::Indeterminate);
    }

    #[test]
    fn identity_endomorphism() {
        let p = Presentation::<i64>::new(2, 2).unwrap();
        let gens: Vec<_> = (0..2).map(|i| GroupElement::generator(&p, i).unwrap()).collect();
        let m = abelianized_matrix_of(&gens, &gens).unwrap();
        assert_eq!(m, RationalMatrix::identity(2));
        assert!((m.spectral_radius().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_path_and_singular_lattice() {
        let m = RationalMatrix::from_rows(vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]])
            .unwrap();
        let rho = m.spectral_radius();
        assert!(!rho.exact_form);
        assert!((rho.value - (5.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert_eq!(rho.verdict(), SpectralVerdict::NotFiniteState);

        let p = Presentation::<i64>::new(2, 2).unwrap();
        let g1 = GroupElement::generator(&p, 0).unwrap();
        let err = abelianized_matrix_of(&[g1.clone(), g1.pow(&2)], &[g1.clone(), g1]).unwrap_err();
        assert_eq!(err, Error::SingularLattice);
    }
}
