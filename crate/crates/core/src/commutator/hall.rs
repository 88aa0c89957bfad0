use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::counting::witt_rank;
use crate::error::{Error, Result};

/// Default ceiling on the number of basis entries a caller may request.
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// How a basic commutator is built. Indices are 0-based positions in the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommutatorShape {
    Generator(usize),
    /// `[c_left, c_right]` with `left > right`.
    Bracket(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCommutator {
    /// 0-based position in the basis; [`BasicCommutator::id`] is the 1-based id.
    pub index: usize,
    pub weight: usize,
    /// Occurrences of each generator.
    pub multiweight: Vec<usize>,
    pub shape: CommutatorShape,
}

impl BasicCommutator {
    pub fn id(&self) -> usize {
        self.index + 1
    }

    pub fn is_generator(&self) -> bool {
        matches!(self.shape, CommutatorShape::Generator(_))
    }
}

/// Basic commutators of weight at most `class` on `rank` generators.
///
/// Entries are sorted by weight. Within a weight, brackets `[c_i, c_j]` are
/// ordered by `(j, i)` ascending, so the basis is fully deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallBasis {
    rank: usize,
    class: usize,
    entries: Vec<BasicCommutator>,
    /// `weight_starts[w - 1]..weight_starts[w]` are the entries of weight `w`.
    weight_starts: Vec<usize>,
}

pub fn hall_basis(rank: usize, class: usize) -> Result<HallBasis> {
    HallBasis::new(rank, class)
}

impl HallBasis {
    pub fn new(rank: usize, class: usize) -> Result<Self> {
        Self::with_cap(rank, class, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(rank: usize, class: usize, cap: usize) -> Result<Self> {
        if rank < 1 || class < 1 {
            return Err(Error::InvalidArgument(format!(
                "Hall basis needs rank >= 1 and class >= 1, got rank={rank}, class={class}"
            )));
        }
        let mut size = BigInt::from(0);
        for n in 1..=class {
            size += witt_rank(rank, n)?;
        }
        if size.to_usize().is_none_or(|s| s > cap) {
            return Err(Error::BasisCapExceeded {
                rank,
                class,
                size: size.to_string(),
                cap,
            });
        }

        let mut entries: Vec<BasicCommutator> = (0..rank)
            .map(|g| {
                let mut multiweight = vec![0; rank];
                multiweight[g] = 1;
                BasicCommutator {
                    index: g,
                    weight: 1,
                    multiweight,
                    shape: CommutatorShape::Generator(g),
                }
            })
            .collect();
        let mut weight_starts = vec![0, rank];

        for n in 2..=class {
            let before = entries.len();
            for j in 0..before {
                let wj = entries[j].weight;
                if wj >= n {
                    break;
                }
                let wanted = n - wj;
                if wanted > class {
                    continue;
                }
                let start = weight_starts[wanted - 1].max(j + 1);
                let end = weight_starts[wanted];
                for i in start..end {
                    if let CommutatorShape::Bracket(_, t) = entries[i].shape {
                        if j < t {
                            continue;
                        }
                    }
                    let multiweight = entries[i]
                        .multiweight
                        .iter()
                        .zip(&entries[j].multiweight)
                        .map(|(a, b)| a + b)
                        .collect();
                    let index = entries.len();
                    entries.push(BasicCommutator {
                        index,
                        weight: n,
                        multiweight,
                        shape: CommutatorShape::Bracket(i, j),
                    });
                }
            }
            weight_starts.push(entries.len());
        }

        Ok(HallBasis {
            rank,
            class,
            entries,
            weight_starts,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasicCommutator] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> &BasicCommutator {
        &self.entries[index]
    }

    pub fn weight(&self, index: usize) -> usize {
        self.entries[index].weight
    }

    /// Positions of the entries of weight `w` (empty when `w > class`).
    pub fn weight_range(&self, w: usize) -> Range<usize> {
        if w == 0 || w > self.class {
            let end = self.entries.len();
            return end..end;
        }
        self.weight_starts[w - 1]..self.weight_starts[w]
    }

    /// Writes entry `index` as a nested commutator of `g1..gr`.
    pub fn format_entry(&self, index: usize) -> String {
        let mut out = String::new();
        self.write_entry(index, &mut out);
        out
    }

    fn write_entry(&self, index: usize, out: &mut String) {
        match self.entries[index].shape {
            CommutatorShape::Generator(g) => {
                out.push('g');
                out.push_str(&(g + 1).to_string());
            }
            CommutatorShape::Bracket(i, j) => {
                out.push('[');
                self.write_entry(i, out);
                out.push(',');
                self.write_entry(j, out);
                out.push(']');
            }
        }
    }
}

impl fmt::Display for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.entries.iter().enumerate() {
            writeln!(
                f,
                "{}\tweight {}\t{}",
                c.id(),
                c.weight,
                self.format_entry(k)
            )?;
        }
        Ok(())
    }
}
