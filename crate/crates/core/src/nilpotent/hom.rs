use std::sync::Arc;

use super::{GroupElement, Presentation};
use crate::commutator::CommutatorShape;
use crate::error::{Error, Result};
use crate::scalar::Exponent;

/// A homomorphism `N(r, c_src) → N(r', c_tgt)` determined by the images of
/// the free generators. Any choice of images extends uniquely as long as
/// `c_tgt <= c_src`.
#[derive(Debug, Clone)]
pub struct Homomorphism<Z: Exponent> {
    source: Arc<Presentation<Z>>,
    target: Arc<Presentation<Z>>,
    /// Image of every source basis commutator.
    basis_images: Vec<GroupElement<Z>>,
}

impl<Z: Exponent> Homomorphism<Z> {
    pub fn extend(
        images: &[GroupElement<Z>],
        source: &Arc<Presentation<Z>>,
        target: &Arc<Presentation<Z>>,
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidArgument(format!(
                "need {} generator images, got {}",
                source.rank(),
                images.len()
            )));
        }
        if target.class() > source.class() {
            return Err(Error::InvalidArgument(format!(
                "target class {} exceeds source class {}",
                target.class(),
                source.class()
            )));
        }
        for img in images {
            target.check_same(img.presentation())?;
        }
        let mut basis_images: Vec<GroupElement<Z>> = Vec::with_capacity(source.len());
        for c in source.basis().entries() {
            let img = match c.shape {
                CommutatorShape::Generator(g) => images[g].clone(),
                CommutatorShape::Bracket(i, j) => {
                    basis_images[i].commutator(&basis_images[j])?
                }
            };
            basis_images.push(img);
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            basis_images,
        })
    }

    pub fn source(&self) -> &Arc<Presentation<Z>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation<Z>> {
        &self.target
    }

    pub fn generator_images(&self) -> &[GroupElement<Z>] {
        &self.basis_images[..self.source.rank()]
    }

    /// Image of the basic commutator at position `k`.
    pub fn basis_image(&self, k: usize) -> &GroupElement<Z> {
        &self.basis_images[k]
    }

    pub fn apply(&self, a: &GroupElement<Z>) -> Result<GroupElement<Z>> {
        self.source.check_same(a.presentation())?;
        let mut exps = vec![Z::zero(); self.target.len()];
        for (k, e) in a.exponents().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let powered = self.target.pow_vec(self.basis_images[k].exponents(), e);
            self.target.mul_into(&mut exps, &powered);
        }
        Ok(GroupElement::from_raw(&self.target, exps))
    }
}

/// Free function form of [`Homomorphism::extend`].
pub fn hom_extend<Z: Exponent>(
    images: &[GroupElement<Z>],
    source: &Arc<Presentation<Z>>,
    target: &Arc<Presentation<Z>>,
) -> Result<Homomorphism<Z>> {
    Homomorphism::extend(images, source, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Expr;

    fn ev(p: &Arc<Presentation<i64>>, s: &str) -> GroupElement<i64> {
        Expr::parse(s).unwrap().eval(p).unwrap()
    }

    #[test]
    fn identity_images_give_identity_map() {
        let p = Presentation::<i64>::new(3, 3).unwrap();
        let gens: Vec<_> = (0..3).map(|i| GroupElement::generator(&p, i).unwrap()).collect();
        let h = hom_extend(&gens, &p, &p).unwrap();
        let a = ev(&p, "g1^2 [g3,g2]^-1 [g2,g1,g1]^3");
        assert_eq!(h.apply(&a).unwrap(), a);
    }

    #[test]
    fn bracket_of_images() {
        let p = Presentation::<i64>::new(3, 2).unwrap();
        let images = vec![ev(&p, "g2"), ev(&p, "g3"), ev(&p, "g1^2")];
        let h = hom_extend(&images, &p, &p).unwrap();
        assert_eq!(h.apply(&ev(&p, "[g2,g1]")).unwrap(), ev(&p, "[g3,g2]"));
        assert_eq!(h.apply(&ev(&p, "[g1,g2]^2")).unwrap(), ev(&p, "[g2,g3]^2"));
    }

    #[test]
    fn truncation_to_lower_class() {
        let src = Presentation::<i64>::new(2, 3).unwrap();
        let tgt = Presentation::<i64>::new(2, 2).unwrap();
        let images = vec![ev(&tgt, "g1"), ev(&tgt, "g2")];
        let h = hom_extend(&images, &src, &tgt).unwrap();
        assert_eq!(h.apply(&ev(&src, "g2 g1 [g2,g1,g1]")).unwrap(), ev(&tgt, "g2 g1"));
        assert!(hom_extend(&[ev(&src, "g1"), ev(&src, "g2")], &tgt, &src).is_err());
        assert!(hom_extend(&images[..1], &src, &tgt).is_err());
    }
}
