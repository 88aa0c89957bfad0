use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nilpotent::{GroupElement, Homomorphism, Presentation, Subgroup};
use crate::scalar::Exponent;

/// A homomorphism `f: H → G` from a finite-index subgroup `H` of `G = N(r, c)`.
///
/// `H` must be generated by distinguished elements `h_i = g_i^{n_i} z_i` with
/// `n_i > 0` and `z_i ∈ G'`. Such an `H` is itself free nilpotent on the
/// `h_i`, so any choice of images defines `f`. Evaluation goes through the
/// isomorphism `ψ: G → H, g_i ↦ h_i`: `f(h) = F(ψ^{-1}(h))` where
/// `F: G → G` sends `g_i` to the image of `h_i`.
#[derive(Debug, Clone)]
pub struct VirtualEndomorphism<Z: Exponent> {
    pres: Arc<Presentation<Z>>,
    domain: Subgroup<Z>,
    generators: Vec<GroupElement<Z>>,
    images: Vec<GroupElement<Z>>,
    embedding: Homomorphism<Z>,
    lift: Homomorphism<Z>,
    /// Leading exponent of `ψ(c_k)` at coordinate `k`.
    leading: Vec<Z>,
}

impl<Z: Exponent> VirtualEndomorphism<Z> {
    pub fn new(
        domain: Subgroup<Z>,
        generators: Vec<GroupElement<Z>>,
        images: Vec<GroupElement<Z>>,
    ) -> Result<Self> {
        let pres = domain.presentation().clone();
        let r = pres.rank();
        if generators.len() != r || images.len() != r {
            return Err(Error::InvalidArgument(format!(
                "need {r} distinguished generators and {r} images, got {} and {}",
                generators.len(),
                images.len()
            )));
        }
        for h in &generators {
            if !domain.contains(h)? {
                return Err(Error::NotInDomain(h.to_string()));
            }
        }
        for img in &images {
            pres.check_same(img.presentation())?;
        }
        for (i, h) in generators.iter().enumerate() {
            let ab = h.abelianization();
            let diagonal = ab
                .iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_positive() } else { x.is_zero() });
            if !diagonal {
                return Err(Error::InvalidArgument(format!(
                    "distinguished generator {} must have the form g{}^n z with n > 0 and z in G'",
                    i + 1,
                    i + 1
                )));
            }
        }
        let spanned = Subgroup::generated_by(&pres, &generators)?;
        if !spanned.contains_subgroup(&domain)? {
            return Err(Error::InvalidArgument(
                "distinguished generators do not generate the domain".into(),
            ));
        }
        let m = domain.index()?;
        if m < Z::one() + Z::one() {
            return Err(Error::InvalidArgument(format!(
                "domain index is {m}; a tree alphabet needs at least 2 letters"
            )));
        }

        let embedding = Homomorphism::extend(&generators, &pres, &pres)?;
        let mut leading = Vec::with_capacity(pres.len());
        for k in 0..pres.len() {
            match embedding.basis_image(k).leading() {
                Some((d, e)) if d == k && e.is_positive() => leading.push(e.clone()),
                _ => {
                    return Err(Error::Internal(format!(
                        "image of basis element {} is not triangular",
                        k + 1
                    )))
                }
            }
        }
        let lift = Homomorphism::extend(&images, &pres, &pres)?;
        Ok(VirtualEndomorphism {
            pres,
            domain,
            generators,
            images,
            embedding,
            lift,
            leading,
        })
    }

    /// `H = <g_1^{n_1}, …, g_r^{n_r}>` with the cyclic map
    /// `g_1^{n_1} ↦ g_r` and `g_{i+1}^{n_{i+1}} ↦ g_i`.
    pub fn cyclic(pres: &Arc<Presentation<Z>>, exponents: &[Z]) -> Result<Self> {
        let (generators, images) = cyclic_data(pres, exponents)?;
        let product = exponents.iter().fold(Z::one(), |acc, n| acc * n.clone());
        if product.is_one() {
            return Err(Error::InvalidArgument(
                "all exponents are 1, so the domain is the whole group".into(),
            ));
        }
        let domain = Subgroup::generated_by(pres, &generators)?;
        Self::new(domain, generators, images)
    }

    pub fn presentation(&self) -> &Arc<Presentation<Z>> {
        &self.pres
    }

    pub fn domain(&self) -> &Subgroup<Z> {
        &self.domain
    }

    pub fn generators(&self) -> &[GroupElement<Z>] {
        &self.generators
    }

    pub fn images(&self) -> &[GroupElement<Z>] {
        &self.images
    }

    /// `[G : H]`.
    pub fn degree(&self) -> Z {
        self.domain.index().expect("domain has finite index")
    }

    /// Writes `h ∈ H` as `ψ(x)` and returns `x`.
    pub fn preimage(&self, h: &GroupElement<Z>) -> Result<GroupElement<Z>> {
        self.pres.check_same(h.presentation())?;
        let mut rest = h.clone();
        let mut coords = vec![Z::zero(); self.pres.len()];
        for k in 0..self.pres.len() {
            let a = rest.exponents()[k].clone();
            if a.is_zero() {
                continue;
            }
            let n = &self.leading[k];
            if !a.is_multiple_of(n) {
                return Err(Error::NotInDomain(h.to_string()));
            }
            let q = a / n.clone();
            rest = &self.embedding.basis_image(k).pow(&-q.clone()) * &rest;
            coords[k] = q;
        }
        debug_assert!(rest.is_identity());
        GroupElement::from_exponents(&self.pres, coords)
    }

    pub fn apply(&self, h: &GroupElement<Z>) -> Result<GroupElement<Z>> {
        self.lift.apply(&self.preimage(h)?)
    }
}

/// Distinguished generators and images of the cyclic virtual endomorphism,
/// without the index checks (useful for the `n_i = 1` matrix).
pub fn cyclic_data<Z: Exponent>(
    pres: &Arc<Presentation<Z>>,
    exponents: &[Z],
) -> Result<(Vec<GroupElement<Z>>, Vec<GroupElement<Z>>)> {
    let r = pres.rank();
    if exponents.len() != r {
        return Err(Error::InvalidArgument(format!(
            "expected {r} exponents, got {}",
            exponents.len()
        )));
    }
    if exponents.iter().any(|n| !n.is_positive()) {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    let gens: Vec<GroupElement<Z>> = (0..r)
        .map(|i| GroupElement::generator(pres, i))
        .collect::<Result<_>>()?;
    let generators = gens
        .iter()
        .zip(exponents)
        .map(|(g, n)| g.pow(n))
        .collect();
    let images = (0..r).map(|i| gens[(i + r - 1) % r].clone()).collect();
    Ok((generators, images))
}

/// Free function form of [`VirtualEndomorphism::new`].
pub fn make_virtual_endomorphism<Z: Exponent>(
    domain: Subgroup<Z>,
    generators: Vec<GroupElement<Z>>,
    images: Vec<GroupElement<Z>>,
) -> Result<VirtualEndomorphism<Z>> {
    VirtualEndomorphism::new(domain, generators, images)
}

/// The cyclic virtual endomorphism on `N(rank, class)`.
pub fn cyclic_endomorphism<Z: Exponent>(
    rank: usize,
    class: usize,
    exponents: &[Z],
) -> Result<VirtualEndomorphism<Z>> {
    let pres = Presentation::new(rank, class)?;
    VirtualEndomorphism::cyclic(&pres, exponents)
}
