use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::element::{ElementRecord, JsonInt};
use super::{GroupElement, Presentation};
use crate::error::{Error, Result};
use crate::scalar::Exponent;

/// Largest transversal [`Subgroup::transversal`] will materialize.
pub const TRANSVERSAL_CAP: usize = 10_000_000;

/// A subgroup given by an induced (triangular) generating sequence.
///
/// `table[k]`, when present, is a subgroup element whose first nonzero
/// Mal'cev coordinate is `k`, with a positive exponent `p_k` there (the
/// pivot). Every element of the subgroup is uniquely `Π table[k]^{a_k}`.
#[derive(Debug, Clone)]
pub struct Subgroup<Z: Exponent> {
    pres: Arc<Presentation<Z>>,
    generators: Vec<GroupElement<Z>>,
    table: Vec<Option<GroupElement<Z>>>,
}

enum Sifted<Z: Exponent> {
    Reduced,
    /// Table changed; these elements must be sifted again.
    Changed(Vec<GroupElement<Z>>),
}

impl<Z: Exponent> Subgroup<Z> {
    /// Triangularizes `generators` and saturates the table under commutators
    /// until it is closed.
    pub fn generated_by(pres: &Arc<Presentation<Z>>, generators: &[GroupElement<Z>]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "a subgroup needs at least one generator".into(),
            ));
        }
        for g in generators {
            pres.check_same(g.presentation())?;
        }
        let mut sub = Subgroup {
            pres: pres.clone(),
            generators: generators.to_vec(),
            table: vec![None; pres.len()],
        };
        let mut queue: VecDeque<GroupElement<Z>> = generators.iter().cloned().collect();
        loop {
            while let Some(g) = queue.pop_front() {
                if let Sifted::Changed(again) = sub.sift_insert(g) {
                    queue.extend(again);
                }
            }
            // closure: s_j^{s_i} = s_j [s_j, s_i] must lie in the span
            let members: Vec<GroupElement<Z>> = sub.table.iter().flatten().cloned().collect();
            for (a, x) in members.iter().enumerate() {
                for y in &members[..a] {
                    let c = x.commutator(y)?;
                    if !sub.reduce(&c).is_identity() {
                        queue.push_back(c);
                    }
                }
            }
            if queue.is_empty() {
                break;
            }
        }
        Ok(sub)
    }

    fn sift_insert(&mut self, g: GroupElement<Z>) -> Sifted<Z> {
        let mut x = g;
        loop {
            let Some((d, a)) = x.leading().map(|(d, a)| (d, a.clone())) else {
                return Sifted::Reduced;
            };
            let Some(s) = self.table[d].clone() else {
                self.table[d] = Some(if a.is_negative() { x.inverse() } else { x });
                return Sifted::Changed(Vec::new());
            };
            let p = s.exponents()[d].clone();
            if a.is_multiple_of(&p) {
                x = &s.pow(&-(a / p)) * &x;
                continue;
            }
            let eg = p.extended_gcd(&a);
            let mut combined = &s.pow(&eg.x) * &x.pow(&eg.y);
            if combined.exponents()[d].is_negative() {
                combined = combined.inverse();
            }
            self.table[d] = Some(combined);
            return Sifted::Changed(vec![s, x]);
        }
    }

    /// Left-reduces `a` by the table as far as the pivots allow.
    fn reduce(&self, a: &GroupElement<Z>) -> GroupElement<Z> {
        let mut x = a.clone();
        while let Some((d, e)) = x.leading().map(|(d, e)| (d, e.clone())) {
            let Some(s) = &self.table[d] else { break };
            let p = &s.exponents()[d];
            if !e.is_multiple_of(p) {
                break;
            }
            x = &s.pow(&-(e / p.clone())) * &x;
        }
        x
    }

    pub fn presentation(&self) -> &Arc<Presentation<Z>> {
        &self.pres
    }

    pub fn generators(&self) -> &[GroupElement<Z>] {
        &self.generators
    }

    /// The induced sequence, in increasing order of leading coordinate.
    pub fn sequence(&self) -> Vec<&GroupElement<Z>> {
        self.table.iter().flatten().collect()
    }

    /// Pivot exponent per coordinate, `None` where the sequence has no element.
    pub fn pivots(&self) -> Vec<Option<Z>> {
        self.table
            .iter()
            .enumerate()
            .map(|(k, s)| s.as_ref().map(|s| s.exponents()[k].clone()))
            .collect()
    }

    pub fn is_finite_index(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    pub fn index(&self) -> Result<Z> {
        self.pivots()
            .into_iter()
            .try_fold(Z::one(), |acc, p| p.map(|p| acc * p))
            .ok_or(Error::InfiniteIndex)
    }

    pub fn contains(&self, a: &GroupElement<Z>) -> Result<bool> {
        self.pres.check_same(a.presentation())?;
        Ok(self.reduce(a).is_identity())
    }

    /// True when every element of `other` lies in `self`.
    pub fn contains_subgroup(&self, other: &Subgroup<Z>) -> Result<bool> {
        for s in other.sequence() {
            if !self.contains(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The representative of the right coset `H a` whose coordinates satisfy
    /// `0 <= a_k < p_k`.
    pub fn canonical_rep(&self, a: &GroupElement<Z>) -> Result<GroupElement<Z>> {
        self.pres.check_same(a.presentation())?;
        let mut x = a.clone();
        for (k, s) in self.table.iter().enumerate() {
            let s = s.as_ref().ok_or(Error::InfiniteIndex)?;
            let p = &s.exponents()[k];
            let q = x.exponents()[k].div_floor(p);
            if !q.is_zero() {
                x = &s.pow(&-q) * &x;
            }
        }
        Ok(x)
    }

    /// All pivot-bounded coordinate tuples, in lexicographic order.
    pub fn transversal(&self) -> Result<Vec<GroupElement<Z>>> {
        let pivots = self
            .pivots()
            .into_iter()
            .collect::<Option<Vec<Z>>>()
            .ok_or(Error::InfiniteIndex)?;
        let index = self.index()?;
        if index.to_usize().is_none_or(|n| n > TRANSVERSAL_CAP) {
            return Err(Error::InvalidArgument(format!(
                "index {index} is too large to list a transversal"
            )));
        }
        let mut out = Vec::with_capacity(index.to_usize().unwrap());
        let mut digits = vec![Z::zero(); pivots.len()];
        loop {
            out.push(GroupElement::from_raw(&self.pres, digits.clone()));
            // odometer, last coordinate fastest
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                digits[k] = digits[k].clone() + Z::one();
                if digits[k] < pivots[k] {
                    break;
                }
                digits[k] = Z::zero();
            }
        }
    }

    /// Checks that `reps` hits every right coset exactly once; returns the map
    /// from canonical representative to position.
    pub fn validate_transversal(
        &self,
        reps: &[GroupElement<Z>],
    ) -> Result<HashMap<GroupElement<Z>, usize>> {
        let index = self.index()?;
        if Z::from_usize(reps.len()) != Some(index.clone()) {
            return Err(Error::InvalidTransversal(format!(
                "{} representatives for index {index}",
                reps.len()
            )));
        }
        let mut seen = HashMap::with_capacity(reps.len());
        for (i, t) in reps.iter().enumerate() {
            let c = self.canonical_rep(t)?;
            if let Some(j) = seen.insert(c, i) {
                return Err(Error::InvalidTransversal(format!(
                    "representatives {} and {} lie in the same coset",
                    j + 1,
                    i + 1
                )));
            }
        }
        Ok(seen)
    }

    pub fn to_record(&self) -> SubgroupRecord {
        SubgroupRecord {
            rank: self.pres.rank(),
            class: self.pres.class(),
            generators: self.generators.iter().map(|g| g.to_record()).collect(),
            pivots: self
                .pivots()
                .iter()
                .map(|p| p.as_ref().map(JsonInt::from_exponent))
                .collect(),
            sequence: self.sequence().iter().map(|s| s.to_record()).collect(),
            index: match self.index() {
                Ok(i) => IndexRecord::Finite(JsonInt::from_exponent(&i)),
                Err(_) => IndexRecord::Infinite("infinite".into()),
            },
        }
    }

    /// Rebuilds the subgroup from the recorded generators and checks that the
    /// recorded pivots match.
    pub fn from_record(pres: &Arc<Presentation<Z>>, record: &SubgroupRecord) -> Result<Self> {
        let gens = record
            .generators
            .iter()
            .map(|r| GroupElement::from_record(pres, r))
            .collect::<Result<Vec<_>>>()?;
        let sub = Self::generated_by(pres, &gens)?;
        if sub.to_record() != *record {
            return Err(Error::Json("subgroup record is inconsistent".into()));
        }
        Ok(sub)
    }
}

/// Free function form of [`Subgroup::generated_by`].
pub fn induced_sequence<Z: Exponent>(
    pres: &Arc<Presentation<Z>>,
    generators: &[GroupElement<Z>],
) -> Result<Subgroup<Z>> {
    Subgroup::generated_by(pres, generators)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub rank: usize,
    pub class: usize,
    pub generators: Vec<ElementRecord>,
    pub pivots: Vec<Option<JsonInt>>,
    pub sequence: Vec<ElementRecord>,
    pub index: IndexRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexRecord {
    Finite(JsonInt),
    Infinite(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Expr;

    fn ev(p: &Arc<Presentation<i64>>, s: &str) -> GroupElement<i64> {
        Expr::parse(s).unwrap().eval(p).unwrap()
    }

    fn sub(p: &Arc<Presentation<i64>>, gens: &[&str]) -> Subgroup<i64> {
        let gens: Vec<_> = gens.iter().map(|s| ev(p, s)).collect();
        Subgroup::generated_by(p, &gens).unwrap()
    }

    #[test]
    fn whole_group() {
        let p = Presentation::new(3, 2).unwrap();
        let h = sub(&p, &["g1", "g2", "g3"]);
        assert!(h.pivots().iter().all(|x| *x == Some(1)));
        assert_eq!(h.index().unwrap(), 1);
        assert_eq!(h.transversal().unwrap(), vec![GroupElement::identity(&p)]);
    }

    #[test]
    fn example_subgroup_pivots() {
        let p = Presentation::new(3, 2).unwrap();
        let h = sub(&p, &["g1^2", "g2", "g3"]);
        let pivots: Vec<i64> = h.pivots().into_iter().map(Option::unwrap).collect();
        assert_eq!(pivots, vec![2, 1, 1, 2, 2, 1]);
        assert_eq!(h.index().unwrap(), 8);
        assert!(h.contains(&GroupElement::identity(&p)).unwrap());
        assert!(!h.contains(&ev(&p, "g1")).unwrap());
        assert!(h.contains(&ev(&p, "[g2,g1]^2")).unwrap());
        let rep = h.canonical_rep(&ev(&p, "g1^3")).unwrap();
        assert_eq!(rep.exponents()[0], 1);
        assert_eq!(h.canonical_rep(&rep).unwrap(), rep);
    }

    #[test]
    fn infinite_index() {
        let p = Presentation::new(2, 2).unwrap();
        let h = sub(&p, &["g1"]);
        assert!(!h.is_finite_index());
        assert_eq!(h.pivots()[1], None);
        assert_eq!(h.index(), Err(Error::InfiniteIndex));
        assert!(h.canonical_rep(&ev(&p, "g2")).is_err());
        assert!(h.transversal().is_err());
    }

    #[test]
    fn gcd_descent() {
        let p = Presentation::new(2, 1).unwrap();
        let h = sub(&p, &["g1^6", "g1^4 g2", "g1^9"]);
        let pivots: Vec<i64> = h.pivots().into_iter().map(Option::unwrap).collect();
        // lattice spanned by (3,0) and (1,1)
        assert_eq!(pivots, vec![1, 3]);
        assert_eq!(h.index().unwrap(), 3);
        let h = sub(&p, &["g1^6", "g2^2", "g1^9"]);
        assert_eq!(h.index().unwrap(), 6);
    }

    #[test]
    fn transversal_validation() {
        let p = Presentation::new(3, 2).unwrap();
        let h = sub(&p, &["g1^2", "g2", "g3"]);
        let t = h.transversal().unwrap();
        assert_eq!(t.len(), 8);
        assert!(h.validate_transversal(&t).is_ok());
        let mut dup = t.clone();
        dup[1] = ev(&p, "g1^3");
        dup[2] = ev(&p, "g1");
        assert!(matches!(
            h.validate_transversal(&dup),
            Err(Error::InvalidTransversal(_))
        ));
        assert!(h.validate_transversal(&t[..7]).is_err());
    }

    #[test]
    fn record_round_trip() {
        let p = Presentation::new(2, 2).unwrap();
        let h = sub(&p, &["g1^2 [g2,g1]", "g2^3"]);
        let json = serde_json::to_string(&h.to_record()).unwrap();
        let back: SubgroupRecord = serde_json::from_str(&json).unwrap();
        let h2 = Subgroup::from_record(&p, &back).unwrap();
        assert_eq!(h2.pivots(), h.pivots());
    }
}
