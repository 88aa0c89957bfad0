use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::VirtualEndomorphism;
use crate::error::{Error, Result};
use crate::nilpotent::{ElementRecord, GroupElement};
use crate::scalar::Exponent;

/// Default ceiling on portrait size.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// A permutation of the alphabet, stored 0-based as the list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    /// Builds from 1-based disjoint cycles, e.g. `&[&[1, 2], &[3, 5]]`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > m {
                    return Err(Error::LetterOutOfRange { letter: a, alphabet: m });
                }
                if std::mem::replace(&mut touched[a - 1], true) {
                    return Err(Error::InvalidArgument(format!("letter {a} repeated in cycles")));
                }
                images[a - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation(images))
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 0-based image.
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Images of `1..=m`, 1-based.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }

    /// Disjoint cycles of length > 1, 1-based, each starting at its least letter.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation, `(1,2)(3,5)`; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let letters: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", letters.join(","))?;
        }
        Ok(())
    }
}

/// First-level wreath recursion `g = (s_1, …, s_m) σ(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<Z: Exponent> {
    pub permutation: Permutation,
    /// `s_i = f(t_i g t_{i^σ}^-1)`, indexed by 0-based letter.
    pub states: Vec<GroupElement<Z>>,
}

/// The transitive state-closed action of `G` on the `m`-ary tree induced by a
/// virtual endomorphism and an ordered right transversal.
///
/// The action is evaluated lazily; decompositions are memoized behind a lock
/// and may be shared across threads.
#[derive(Debug)]
pub struct SelfSimilarRep<Z: Exponent> {
    endo: VirtualEndomorphism<Z>,
    transversal: Vec<GroupElement<Z>>,
    inverses: Vec<GroupElement<Z>>,
    letter_of_coset: HashMap<GroupElement<Z>, usize>,
    cache: RwLock<HashMap<GroupElement<Z>, Arc<Decomposition<Z>>>>,
}

/// Outcome of [`SelfSimilarRep::state_closure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateClosure<Z: Exponent> {
    /// All states, in breadth-first discovery order (seeds first).
    Finite(Vec<GroupElement<Z>>),
    CutoffExceeded { explored: usize },
}

impl<Z: Exponent> SelfSimilarRep<Z> {
    /// Uses the canonical (pivot-bounded, lexicographic) transversal.
    pub fn new(endo: VirtualEndomorphism<Z>) -> Result<Self> {
        let transversal = endo.domain().transversal()?;
        Self::with_transversal(endo, transversal)
    }

    pub fn with_transversal(
        endo: VirtualEndomorphism<Z>,
        transversal: Vec<GroupElement<Z>>,
    ) -> Result<Self> {
        let letter_of_coset = endo.domain().validate_transversal(&transversal)?;
        let inverses = transversal.iter().map(GroupElement::inverse).collect();
        Ok(SelfSimilarRep {
            endo,
            transversal,
            inverses,
            letter_of_coset,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn endomorphism(&self) -> &VirtualEndomorphism<Z> {
        &self.endo
    }

    pub fn transversal(&self) -> &[GroupElement<Z>] {
        &self.transversal
    }

    /// Alphabet size `m = [G : H]`.
    pub fn degree(&self) -> usize {
        self.transversal.len()
    }

    pub fn generators(&self) -> Vec<GroupElement<Z>> {
        let pres = self.endo.presentation();
        (0..pres.rank())
            .map(|i| GroupElement::generator(pres, i).expect("generator in range"))
            .collect()
    }

    /// 0-based letter `j` with `H t_i g = H t_j`.
    fn coset_letter(&self, x: &GroupElement<Z>) -> Result<usize> {
        let c = self.endo.domain().canonical_rep(x)?;
        self.letter_of_coset
            .get(&c)
            .copied()
            .ok_or_else(|| Error::Internal(format!("no transversal element for coset of {x}")))
    }

    pub fn decompose(&self, g: &GroupElement<Z>) -> Result<Arc<Decomposition<Z>>> {
        self.endo.presentation().check_same(g.presentation())?;
        if let Some(d) = self.cache.read().unwrap().get(g) {
            return Ok(d.clone());
        }
        let m = self.degree();
        let mut images = Vec::with_capacity(m);
        let mut states = Vec::with_capacity(m);
        for t in &self.transversal {
            let x = t * g;
            let j = self.coset_letter(&x)?;
            let h = &x * &self.inverses[j];
            let s = self.endo.apply(&h).map_err(|e| {
                Error::Internal(format!("cofactor {h} escaped the domain: {e}"))
            })?;
            images.push(j);
            states.push(s);
        }
        let d = Arc::new(Decomposition {
            permutation: Permutation::from_images(images)?,
            states,
        });
        Ok(self
            .cache
            .write()
            .unwrap()
            .entry(g.clone())
            .or_insert(d)
            .clone())
    }

    /// Image of a 1-based word under `g`.
    pub fn act(&self, g: &GroupElement<Z>, word: &[usize]) -> Result<Vec<usize>> {
        let m = self.degree();
        if let Some(&bad) = word.iter().find(|&&y| y == 0 || y > m) {
            return Err(Error::LetterOutOfRange { letter: bad, alphabet: m });
        }
        let mut out = Vec::with_capacity(word.len());
        let mut current = g.clone();
        for &y in word {
            if current.is_identity() {
                out.push(y);
                continue;
            }
            let d = self.decompose(&current)?;
            out.push(d.permutation.image(y - 1) + 1);
            current = d.states[y - 1].clone();
        }
        Ok(out)
    }

    pub fn portrait(&self, g: &GroupElement<Z>, depth: usize) -> Result<Portrait> {
        self.portrait_with_cap(g, depth, DEFAULT_NODE_CAP)
    }

    pub fn portrait_with_cap(
        &self,
        g: &GroupElement<Z>,
        depth: usize,
        cap: usize,
    ) -> Result<Portrait> {
        let m = self.degree();
        let mut nodes: u128 = 0;
        let mut level: u128 = 1;
        for _ in 0..=depth {
            nodes = nodes.saturating_add(level);
            level = level.saturating_mul(m as u128);
        }
        if nodes > cap as u128 {
            return Err(Error::NodeCapExceeded {
                nodes: nodes.to_string(),
                cap,
            });
        }
        Ok(Portrait {
            alphabet: m,
            depth,
            root: self.portrait_node(g, depth)?,
        })
    }

    fn portrait_node(&self, g: &GroupElement<Z>, depth: usize) -> Result<PortraitNode> {
        let d = self.decompose(g)?;
        let children = if depth == 0 {
            Vec::new()
        } else {
            d.states
                .iter()
                .map(|s| self.portrait_node(s, depth - 1))
                .collect::<Result<_>>()?
        };
        Ok(PortraitNode {
            perm: d.permutation.one_based(),
            children,
        })
    }

    /// Breadth-first closure of `seeds` under taking first-level states.
    pub fn state_closure(
        &self,
        seeds: &[GroupElement<Z>],
        cutoff: usize,
    ) -> Result<StateClosure<Z>> {
        let mut seen: HashSet<GroupElement<Z>> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if seen.insert(s.clone()) {
                order.push(s.clone());
                queue.push_back(s.clone());
            }
        }
        if order.len() > cutoff {
            return Ok(StateClosure::CutoffExceeded {
                explored: order.len(),
            });
        }
        while let Some(g) = queue.pop_front() {
            let d = self.decompose(&g)?;
            for s in &d.states {
                if seen.insert(s.clone()) {
                    order.push(s.clone());
                    if order.len() > cutoff {
                        return Ok(StateClosure::CutoffExceeded {
                            explored: order.len(),
                        });
                    }
                    queue.push_back(s.clone());
                }
            }
        }
        Ok(StateClosure::Finite(order))
    }

    /// Explicit finite automaton over the closure of `seeds`, or `None` when
    /// the closure exceeds `cutoff`.
    pub fn automaton(&self, seeds: &[GroupElement<Z>], cutoff: usize) -> Result<Option<Automaton>> {
        let states = match self.state_closure(seeds, cutoff)? {
            StateClosure::Finite(states) => states,
            StateClosure::CutoffExceeded { .. } => return Ok(None),
        };
        let id_of: HashMap<&GroupElement<Z>, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut records = Vec::with_capacity(states.len());
        for (id, g) in states.iter().enumerate() {
            let d = self.decompose(g)?;
            records.push(AutomatonState {
                id,
                element: g.to_record(),
                perm: d.permutation.one_based(),
                children: d.states.iter().map(|s| id_of[s]).collect(),
            });
        }
        let initial = seeds.iter().map(|s| id_of[s]).collect();
        Ok(Some(Automaton {
            alphabet: self.degree(),
            states: records,
            initial,
        }))
    }

    /// Shortest (then lexicographically least) 1-based word of length at most
    /// `max_depth` that `g` moves. `None` means no witness within the bound,
    /// not that `g` acts trivially.
    pub fn faithfulness_witness(
        &self,
        g: &GroupElement<Z>,
        max_depth: usize,
    ) -> Result<Option<Vec<usize>>> {
        if g.is_identity() {
            return Ok(None);
        }
        let mut seen: HashSet<GroupElement<Z>> = HashSet::from([g.clone()]);
        let mut frontier: Vec<(Vec<usize>, GroupElement<Z>)> = vec![(Vec::new(), g.clone())];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for (prefix, x) in &frontier {
                let d = self.decompose(x)?;
                if let Some(y) = (0..self.degree()).find(|&y| d.permutation.image(y) != y) {
                    let mut w = prefix.clone();
                    w.push(y + 1);
                    return Ok(Some(w));
                }
                for (y, s) in d.states.iter().enumerate() {
                    if !s.is_identity() && seen.insert(s.clone()) {
                        let mut w = prefix.clone();
                        w.push(y + 1);
                        next.push((w, s.clone()));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(None)
    }

    /// Whether `σ(g_1), …, σ(g_r)` act transitively on the first level.
    pub fn is_level1_transitive(&self) -> Result<bool> {
        self.is_level1_transitive_on(&self.generators())
    }

    /// Whether the group generated by `elements` is transitive on the first
    /// level. Elements of `H` all fix the letter of the trivial coset.
    pub fn is_level1_transitive_on(&self, elements: &[GroupElement<Z>]) -> Result<bool> {
        let m = self.degree();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in elements {
            let d = self.decompose(g)?;
            for i in 0..m {
                let (a, b) = (find(&mut parent, i), find(&mut parent, d.permutation.image(i)));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        Ok((0..m).all(|i| find(&mut parent, i) == root))
    }
}

/// Depth-truncated view of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portrait {
    pub alphabet: usize,
    pub depth: usize,
    pub root: PortraitNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitNode {
    /// 1-based images of `1..=m`.
    pub perm: Vec<usize>,
    pub children: Vec<PortraitNode>,
}

impl Portrait {
    pub fn node_count(&self) -> usize {
        fn count(n: &PortraitNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.root)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automaton {
    pub alphabet: usize,
    pub states: Vec<AutomatonState>,
    pub initial: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonState {
    pub id: usize,
    pub element: ElementRecord,
    pub perm: Vec<usize>,
    pub children: Vec<usize>,
}

impl Automaton {
    /// Runs the automaton from state `start` on a 1-based word.
    pub fn act(&self, start: usize, word: &[usize]) -> Vec<usize> {
        let mut q = start;
        word.iter()
            .map(|&y| {
                let s = &self.states[q];
                q = s.children[y - 1];
                s.perm[y - 1]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::cyclic_endomorphism;

    #[test]
    fn permutation_cycles() {
        let p = Permutation::from_cycles(8, &[&[1, 2], &[3, 5], &[4, 6], &[7, 8]]).unwrap();
        assert_eq!(p.to_string(), "(1,2)(3,5)(4,6)(7,8)");
        assert_eq!(p.one_based(), vec![2, 1, 5, 6, 3, 4, 8, 7]);
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_cycles(3, &[&[1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn binary_rep_of_z2() {
        let f = cyclic_endomorphism::<i64>(2, 1, &[2, 1]).unwrap();
        let rep = SelfSimilarRep::new(f).unwrap();
        assert_eq!(rep.degree(), 2);
        assert!(rep.is_level1_transitive().unwrap());
        let id = GroupElement::identity(rep.endomorphism().presentation());
        let d = rep.decompose(&id).unwrap();
        assert!(d.permutation.is_identity());
        assert!(d.states.iter().all(GroupElement::is_identity));
        assert_eq!(rep.act(&id, &[1, 2, 2]).unwrap(), vec![1, 2, 2]);
        assert!(matches!(
            rep.act(&id, &[3]),
            Err(Error::LetterOutOfRange { letter: 3, alphabet: 2 })
        ));
    }

    #[test]
    fn portrait_sizes() {
        let f = cyclic_endomorphism::<i64>(2, 1, &[2, 1]).unwrap();
        let rep = SelfSimilarRep::new(f).unwrap();
        let g = rep.generators()[0].clone();
        let p0 = rep.portrait(&g, 0).unwrap();
        assert_eq!(p0.node_count(), 1);
        assert!(p0.root.children.is_empty());
        let p3 = rep.portrait(&g, 3).unwrap();
        assert_eq!(p3.node_count(), 15);
        assert!(matches!(
            rep.portrait_with_cap(&g, 10, 100),
            Err(Error::NodeCapExceeded { .. })
        ));
    }
}
