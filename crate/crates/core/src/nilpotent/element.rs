use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Presentation;
use crate::error::{Error, Result};
use crate::scalar::Exponent;

/// An element `c_1^{e_1} ⋯ c_M^{e_M}` of a free nilpotent group, stored by its
/// Mal'cev coordinates. Two elements are equal iff their coordinates agree.
#[derive(Clone)]
pub struct GroupElement<Z: Exponent> {
    pres: Arc<Presentation<Z>>,
    exps: Vec<Z>,
}

impl<Z: Exponent> GroupElement<Z> {
    pub fn identity(pres: &Arc<Presentation<Z>>) -> Self {
        GroupElement {
            pres: pres.clone(),
            exps: vec![Z::zero(); pres.len()],
        }
    }

    /// The free generator `g_{i+1}` (0-based `i`).
    pub fn generator(pres: &Arc<Presentation<Z>>, i: usize) -> Result<Self> {
        if i >= pres.rank() {
            return Err(Error::InvalidArgument(format!(
                "generator g{} out of range for rank {}",
                i + 1,
                pres.rank()
            )));
        }
        Ok(Self::basis_element(pres, i))
    }

    /// The basic commutator at basis position `k`.
    pub fn basis_element(pres: &Arc<Presentation<Z>>, k: usize) -> Self {
        let mut e = Self::identity(pres);
        e.exps[k] = Z::one();
        e
    }

    pub fn from_exponents(pres: &Arc<Presentation<Z>>, exps: Vec<Z>) -> Result<Self> {
        if exps.len() != pres.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} exponents, got {}",
                pres.len(),
                exps.len()
            )));
        }
        Ok(GroupElement {
            pres: pres.clone(),
            exps,
        })
    }

    pub(crate) fn from_raw(pres: &Arc<Presentation<Z>>, exps: Vec<Z>) -> Self {
        debug_assert_eq!(exps.len(), pres.len());
        GroupElement {
            pres: pres.clone(),
            exps,
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation<Z>> {
        &self.pres
    }

    pub fn exponents(&self) -> &[Z] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Z::is_zero)
    }

    /// Lowest nonzero coordinate and its exponent.
    pub fn leading(&self) -> Option<(usize, &Z)> {
        self.exps.iter().enumerate().find(|(_, e)| !e.is_zero())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.pres.check_same(&other.pres)?;
        let mut exps = self.exps.clone();
        self.pres.mul_into(&mut exps, &other.exps);
        Ok(Self::from_raw(&self.pres, exps))
    }

    pub fn inverse(&self) -> Self {
        Self::from_raw(&self.pres, self.pres.inverse_vec(&self.exps))
    }

    pub fn pow(&self, n: &Z) -> Self {
        Self::from_raw(&self.pres, self.pres.pow_vec(&self.exps, n))
    }

    pub fn powi(&self, n: i64) -> Self {
        self.pow(&Z::from_i64_exact(n))
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.pres.check_same(&other.pres)?;
        let mut exps = self.pres.inverse_vec(&self.exps);
        self.pres
            .mul_into(&mut exps, &self.pres.inverse_vec(&other.exps));
        self.pres.mul_into(&mut exps, &self.exps);
        self.pres.mul_into(&mut exps, &other.exps);
        Ok(Self::from_raw(&self.pres, exps))
    }

    /// `self^other = other^-1 self other`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        self.pres.check_same(&other.pres)?;
        let mut exps = self.pres.inverse_vec(&other.exps);
        self.pres.mul_into(&mut exps, &self.exps);
        self.pres.mul_into(&mut exps, &other.exps);
        Ok(Self::from_raw(&self.pres, exps))
    }

    /// Image in `Z^r`, i.e. the generator coordinates.
    pub fn abelianization(&self) -> Vec<Z> {
        self.exps[..self.pres.rank()].to_vec()
    }

    /// Recomputes the normal form through the Magnus embedding; used to cross
    /// check collection.
    pub fn via_magnus(&self) -> Result<Self> {
        let series = self.pres.series_of(&self.exps);
        Ok(Self::from_raw(&self.pres, self.pres.normal_form_of_series(&series)?))
    }

    pub fn to_record(&self) -> ElementRecord {
        ElementRecord {
            rank: self.pres.rank(),
            class: self.pres.class(),
            exponents: self.exps.iter().map(JsonInt::from_exponent).collect(),
        }
    }

    pub fn from_record(pres: &Arc<Presentation<Z>>, record: &ElementRecord) -> Result<Self> {
        if record.rank != pres.rank() || record.class != pres.class() {
            return Err(Error::PresentationMismatch(
                record.rank,
                record.class,
                pres.rank(),
                pres.class(),
            ));
        }
        let exps = record
            .exponents
            .iter()
            .map(JsonInt::to_exponent)
            .collect::<Result<Vec<Z>>>()?;
        Self::from_exponents(pres, exps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_record()).expect("element record serializes")
    }

    pub fn from_json(pres: &Arc<Presentation<Z>>, value: &serde_json::Value) -> Result<Self> {
        let record: ElementRecord = serde_json::from_value(value.clone())?;
        Self::from_record(pres, &record)
    }
}

/// Wire form: `{"rank": r, "class": c, "exponents": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub rank: usize,
    pub class: usize,
    pub exponents: Vec<JsonInt>,
}

/// Integers that fit in `i64` are written as JSON numbers, larger ones as
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub fn from_exponent<Z: Exponent>(z: &Z) -> Self {
        match z.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(z.to_string()),
        }
    }

    pub fn to_exponent<Z: Exponent>(&self) -> Result<Z> {
        match self {
            JsonInt::Small(v) => Z::from_i64(*v)
                .ok_or_else(|| Error::Json(format!("{v} does not fit the exponent type"))),
            JsonInt::Big(s) => Z::from_str_radix(s, 10)
                .map_err(|_| Error::Json(format!("invalid integer string {s:?}"))),
        }
    }
}

impl<Z: Exponent> PartialEq for GroupElement<Z> {
    fn eq(&self, other: &Self) -> bool {
        self.pres.same_group(&other.pres) && self.exps == other.exps
    }
}

impl<Z: Exponent> Eq for GroupElement<Z> {}

impl<Z: Exponent> Hash for GroupElement<Z> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl<Z: Exponent> fmt::Debug for GroupElement<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement(")?;
        for (k, e) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Writes the normal form as a product of basic commutators, e.g.
/// `g1^2 [g2,g1]^-1`; the identity prints as `e`. The output parses back with
/// [`crate::Expr::parse`].
impl<Z: Exponent> fmt::Display for GroupElement<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, e) in self.exps.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", self.pres.basis().format_entry(k))?;
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "e")?;
        }
        Ok(())
    }
}

/// Panics if the operands come from different groups; use
/// [`GroupElement::multiply`] for a checked product.
impl<'a, Z: Exponent> Mul<&'a GroupElement<Z>> for &'a GroupElement<Z> {
    type Output = GroupElement<Z>;

    fn mul(self, rhs: &'a GroupElement<Z>) -> GroupElement<Z> {
        self.multiply(rhs).expect("operands from the same group")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: &Arc<Presentation<i64>>, v: &[i64]) -> GroupElement<i64> {
        GroupElement::from_exponents(p, v.to_vec()).unwrap()
    }

    #[test]
    fn class_two_products() {
        let p = Presentation::new(2, 2).unwrap();
        let id = GroupElement::identity(&p);
        let b = el(&p, &[3, -2, 7]);
        assert_eq!(id.multiply(&b).unwrap(), b);
        assert_eq!(&el(&p, &[0, 1, 0]) * &el(&p, &[1, 0, 0]), el(&p, &[1, 1, 1]));
        assert_eq!(&el(&p, &[1, 1, 0]) * &el(&p, &[1, 1, 0]), el(&p, &[2, 2, 1]));
    }

    #[test]
    fn inverse_and_commutator() {
        let p = Presentation::new(2, 2).unwrap();
        let id = GroupElement::identity(&p);
        assert_eq!(id.inverse(), id);
        assert_eq!(el(&p, &[1, 1, 0]).inverse(), el(&p, &[-1, -1, 1]));
        let x1 = GroupElement::generator(&p, 0).unwrap();
        let x2 = GroupElement::generator(&p, 1).unwrap();
        assert_eq!(x1.commutator(&x2).unwrap(), el(&p, &[0, 0, -1]));
        let a = el(&p, &[2, -3, 5]);
        assert!(a.commutator(&a).unwrap().is_identity());
    }

    #[test]
    fn abelianization_is_additive() {
        let p = Presentation::new(2, 2).unwrap();
        assert_eq!(el(&p, &[3, -2, 7]).abelianization(), vec![3, -2]);
        let prod = &el(&p, &[1, 0, 0]) * &el(&p, &[0, 1, 0]);
        assert_eq!(prod.abelianization(), vec![1, 1]);
        assert_eq!(GroupElement::identity(&p).abelianization(), vec![0, 0]);
    }

    #[test]
    fn mismatched_presentations_are_rejected() {
        let p = Presentation::<i64>::new(2, 2).unwrap();
        let q = Presentation::<i64>::new(2, 3).unwrap();
        let a = GroupElement::generator(&p, 0).unwrap();
        let b = GroupElement::generator(&q, 0).unwrap();
        assert!(matches!(
            a.multiply(&b),
            Err(Error::PresentationMismatch(2, 2, 2, 3))
        ));
    }

    #[test]
    fn json_shape() {
        let p = Presentation::new(2, 2).unwrap();
        let a = el(&p, &[1, -1, 4]);
        assert_eq!(
            serde_json::to_string(&a.to_record()).unwrap(),
            r#"{"rank":2,"class":2,"exponents":[1,-1,4]}"#
        );
        assert_eq!(GroupElement::from_json(&p, &a.to_json()).unwrap(), a);
    }

    #[test]
    fn display_normal_form() {
        let p = Presentation::new(2, 2).unwrap();
        assert_eq!(el(&p, &[2, 0, -1]).to_string(), "g1^2 [g2,g1]^-1");
        assert_eq!(GroupElement::identity(&p).to_string(), "e");
    }
}
