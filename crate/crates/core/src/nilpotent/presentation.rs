use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::magnus::Series;
use crate::commutator::{CommutatorShape, HallBasis, DEFAULT_BASIS_CAP};
use crate::error::{Error, Result};
use crate::scalar::Exponent;

/// The free nilpotent group `N(rank, class)` with a consistent polycyclic
/// presentation on its Hall basis.
///
/// Relations `c_j^{c_i^{±1}} = c_j [c_j, c_i^{±1}]` for `j > i` are derived
/// on demand from the Magnus embedding and memoized; the cache is behind a
/// lock so a shared presentation can be used from several threads.
pub struct Presentation<Z: Exponent> {
    basis: HallBasis,
    magnus: Vec<OnceLock<Series<Z>>>,
    solvers: Vec<OnceLock<LieSolver<Z>>>,
    /// `(j, i, inverse)` → normal form of `[c_j, c_i]` or `[c_j, c_i^-1]`.
    relations: Cache<(usize, usize, bool), Vec<Z>>,
    /// `(l, k)` → forward differences at 0 of `t ↦ c_l^{c_k^t}`.
    conjugation: Cache<(usize, usize), Vec<Vec<Z>>>,
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

impl<Z: Exponent> std::fmt::Debug for Presentation<Z> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("rank", &self.rank())
            .field("class", &self.class())
            .field("basis_len", &self.len())
            .finish()
    }
}

/// Expresses a homogeneous Lie element of one weight in the Hall basis.
///
/// `transform * lie_rows` is in reduced row echelon form with pivot columns
/// `pivots`, so the coordinates of `P = Σ e_k L_k` are `e = P[pivots] · transform`.
struct LieSolver<Z: Exponent> {
    pivots: Vec<usize>,
    transform: Vec<Vec<Ratio<Z>>>,
}

impl<Z: Exponent> Presentation<Z> {
    pub fn new(rank: usize, class: usize) -> Result<Arc<Self>> {
        Self::with_cap(rank, class, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(rank: usize, class: usize, cap: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::from_basis(HallBasis::with_cap(
            rank, class, cap,
        )?)))
    }

    pub fn from_basis(basis: HallBasis) -> Self {
        let len = basis.len();
        let class = basis.class();
        Presentation {
            magnus: (0..len).map(|_| OnceLock::new()).collect(),
            solvers: (0..=class).map(|_| OnceLock::new()).collect(),
            relations: RwLock::new(HashMap::new()),
            conjugation: RwLock::new(HashMap::new()),
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn class(&self) -> usize {
        self.basis.class()
    }

    /// Number of Mal'cev coordinates (the Hirsch length).
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub(crate) fn same_group(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.class() == other.class()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch(
                self.rank(),
                self.class(),
                other.rank(),
                other.class(),
            ))
        }
    }

    // ---- Magnus route -------------------------------------------------

    pub(crate) fn magnus(&self, k: usize) -> &Series<Z> {
        self.magnus[k].get_or_init(|| match self.basis.get(k).shape {
            CommutatorShape::Generator(g) => Series::generator(self.rank(), self.class(), g),
            CommutatorShape::Bracket(i, j) => Series::commutator(self.magnus(i), self.magnus(j)),
        })
    }

    /// Magnus image of the normal-form word `c_1^{e_1} ⋯ c_M^{e_M}`.
    pub(crate) fn series_of(&self, exps: &[Z]) -> Series<Z> {
        let mut acc = Series::one(self.rank(), self.class());
        for (k, e) in exps.iter().enumerate() {
            if !e.is_zero() {
                acc = acc.mul(&self.magnus(k).pow(e));
            }
        }
        acc
    }

    fn solver(&self, weight: usize) -> &LieSolver<Z> {
        self.solvers[weight].get_or_init(|| {
            let range = self.basis.weight_range(weight);
            let rows: Vec<Vec<Ratio<Z>>> = range
                .clone()
                .map(|k| {
                    self.magnus(k)
                        .degree(weight)
                        .iter()
                        .map(|x| Ratio::from_integer(x.clone()))
                        .collect()
                })
                .collect();
            LieSolver::new(rows)
        })
    }

    /// Mal'cev coordinates of a Magnus series that lies in the image of the group.
    pub(crate) fn normal_form_of_series(&self, series: &Series<Z>) -> Result<Vec<Z>> {
        let mut exps = vec![Z::zero(); self.len()];
        let mut current = series.clone();
        for w in 1..=self.class() {
            let range = self.basis.weight_range(w);
            if range.is_empty() {
                continue;
            }
            let coords = self.solver(w).solve(current.degree(w))?;
            let mut strip = Series::one(self.rank(), self.class());
            for (k, e) in range.clone().zip(&coords) {
                if !e.is_zero() {
                    strip = strip.mul(&self.magnus(k).pow(e));
                }
            }
            current = strip.inverse().mul(&current);
            if current.degree(w).iter().any(|x| !x.is_zero()) {
                return Err(Error::Internal(format!(
                    "weight-{w} component did not vanish after stripping"
                )));
            }
            for (k, e) in range.zip(coords) {
                exps[k] = e;
            }
        }
        if !current.is_one() {
            return Err(Error::Internal("series is not in the group image".into()));
        }
        Ok(exps)
    }

    // ---- relations ----------------------------------------------------

    /// Normal form of `[c_j, c_i]` (or `[c_j, c_i^-1]` when `inverse`) for `j > i`.
    pub(crate) fn relation(&self, j: usize, i: usize, inverse: bool) -> Arc<Vec<Z>> {
        let key = (j, i, inverse);
        if let Some(found) = self.relations.read().unwrap().get(&key) {
            return found.clone();
        }
        let cj = self.magnus(j);
        let ci = if inverse {
            self.magnus(i).inverse()
        } else {
            self.magnus(i).clone()
        };
        let comm = Series::commutator(cj, &ci);
        let nf = Arc::new(
            self.normal_form_of_series(&comm)
                .expect("commutator of basis elements lies in the group"),
        );
        self.relations
            .write()
            .unwrap()
            .entry(key)
            .or_insert(nf)
            .clone()
    }

    /// True when `c_j` and `c_i` commute for weight reasons alone.
    fn commute_by_weight(&self, j: usize, i: usize) -> bool {
        self.basis.weight(j) + self.basis.weight(i) > self.class()
    }

    // ---- collection ---------------------------------------------------

    /// `acc ← acc · rhs`, both given in Mal'cev coordinates.
    pub(crate) fn mul_into(&self, acc: &mut [Z], rhs: &[Z]) {
        for (k, a) in rhs.iter().enumerate() {
            if !a.is_zero() {
                self.mul_syllable(acc, k, a.clone());
            }
        }
    }

    /// `acc ← acc · c_k^a` by collection from the left.
    ///
    /// Writing `acc = P c_k^e S T` where `S` holds the coordinates after `k`
    /// that may fail to commute with `c_k` and `T` the rest, the product is
    /// `P c_k^{e+a} S^{c_k^a} T`; the conjugate and `T` only involve
    /// coordinates after `k`, so the recursion terminates.
    pub(crate) fn mul_syllable(&self, acc: &mut [Z], k: usize, a: Z) {
        if a.is_zero() {
            return;
        }
        let wk = self.basis.weight(k);
        let limit = if wk >= self.class() {
            k + 1
        } else {
            self.basis.weight_range(self.class() - wk).end.max(k + 1)
        };
        if acc[k + 1..limit].iter().all(Zero::is_zero) {
            acc[k] = acc[k].clone() + a;
            return;
        }
        let mut suffix = vec![Z::zero(); acc.len()];
        for l in k + 1..limit {
            std::mem::swap(&mut suffix[l], &mut acc[l]);
        }
        let mut tail = vec![Z::zero(); acc.len()];
        for l in limit..acc.len() {
            std::mem::swap(&mut tail[l], &mut acc[l]);
        }
        acc[k] = acc[k].clone() + a.clone();
        let conjugated = self.conjugate_by_power(suffix, k, &a);
        self.mul_into(acc, &conjugated);
        self.mul_into(acc, &tail);
    }

    /// `y^{c_k^a}` for `y` supported after `k`.
    fn conjugate_by_power(&self, y: Vec<Z>, k: usize, a: &Z) -> Vec<Z> {
        if a.abs().is_one() {
            return self.conjugate_once(&y, k, a.is_negative());
        }
        let mut out = vec![Z::zero(); y.len()];
        for (l, e) in y.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if self.commute_by_weight(l, k) {
                self.mul_syllable(&mut out, l, e.clone());
                continue;
            }
            let image = self.conjugate_basis_by_power(l, k, a);
            let powered = self.pow_vec(&image, e);
            self.mul_into(&mut out, &powered);
        }
        out
    }

    /// `c_l^{c_k^a}` from its Newton expansion `Σ_i C(a, i) Δ^i`.
    fn conjugate_basis_by_power(&self, l: usize, k: usize, a: &Z) -> Vec<Z> {
        let diffs = self.conjugation_differences(l, k);
        let mut out = vec![Z::zero(); self.len()];
        let mut binom = Z::one();
        for (i, d) in diffs.iter().enumerate() {
            if i > 0 {
                let i = Z::from_usize(i).expect("small integer");
                binom = binom * (a.clone() - i.clone() + Z::one()) / i;
                if binom.is_zero() {
                    break;
                }
            }
            for (o, x) in out.iter_mut().zip(d) {
                if !x.is_zero() {
                    *o = o.clone() + binom.clone() * x.clone();
                }
            }
        }
        out
    }

    /// The coordinates of `c_l^{c_k^t}` are integer polynomials in `t` of
    /// degree at most `(class - ω(l)) / ω(k)`.
    fn conjugation_differences(&self, l: usize, k: usize) -> Arc<Vec<Vec<Z>>> {
        if let Some(found) = self.conjugation.read().unwrap().get(&(l, k)) {
            return found.clone();
        }
        let degree = (self.class() - self.basis.weight(l)) / self.basis.weight(k);
        let mut samples = Vec::with_capacity(degree + 2);
        let mut current = vec![Z::zero(); self.len()];
        current[l] = Z::one();
        samples.push(current.clone());
        for _ in 0..=degree {
            current = self.conjugate_once(&current, k, false);
            samples.push(current.clone());
        }
        let mut diffs = Vec::with_capacity(degree + 2);
        while !samples.is_empty() {
            diffs.push(samples[0].clone());
            samples = samples
                .windows(2)
                .map(|w| w[1].iter().zip(&w[0]).map(|(x, y)| x.clone() - y.clone()).collect())
                .collect();
        }
        let top = diffs.pop().expect("at least two samples");
        debug_assert!(top.iter().all(Zero::is_zero), "conjugation degree bound");
        let diffs = Arc::new(diffs);
        self.conjugation
            .write()
            .unwrap()
            .entry((l, k))
            .or_insert(diffs)
            .clone()
    }

    /// `y^{c_k}` (or `y^{c_k^-1}`), applying the automorphism syllable by syllable.
    fn conjugate_once(&self, y: &[Z], k: usize, inverse: bool) -> Vec<Z> {
        let mut out = vec![Z::zero(); y.len()];
        for (l, e) in y.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if self.commute_by_weight(l, k) {
                self.mul_syllable(&mut out, l, e.clone());
                continue;
            }
            let rel = self.relation(l, k, inverse);
            if rel.iter().all(Zero::is_zero) {
                self.mul_syllable(&mut out, l, e.clone());
                continue;
            }
            // c_l^{c_k} = c_l [c_l, c_k]; the bracket lives after l.
            let mut image = (*rel).clone();
            image[l] = image[l].clone() + Z::one();
            let powered = self.pow_vec(&image, e);
            self.mul_into(&mut out, &powered);
        }
        out
    }

    pub(crate) fn inverse_vec(&self, x: &[Z]) -> Vec<Z> {
        let mut out = vec![Z::zero(); x.len()];
        for (k, e) in x.iter().enumerate().rev() {
            if !e.is_zero() {
                self.mul_syllable(&mut out, k, -e.clone());
            }
        }
        out
    }

    pub(crate) fn pow_vec(&self, x: &[Z], n: &Z) -> Vec<Z> {
        let mut out = vec![Z::zero(); x.len()];
        if n.is_zero() {
            return out;
        }
        // single syllable: c_k^e raised to n is c_k^{en}
        let mut support = x.iter().enumerate().filter(|(_, e)| !e.is_zero());
        if let (Some((k, e)), None) = (support.next(), support.next()) {
            out[k] = e.clone() * n.clone();
            return out;
        }
        let (mut base, mut e) = if n.is_negative() {
            (self.inverse_vec(x), -n.clone())
        } else {
            (x.to_vec(), n.clone())
        };
        let two = Z::one() + Z::one();
        loop {
            if e.is_odd() {
                self.mul_into(&mut out, &base);
            }
            e = e / two.clone();
            if e.is_zero() {
                break;
            }
            let snapshot = base.clone();
            self.mul_into(&mut base, &snapshot);
        }
        out
    }
}

impl<Z: Exponent> LieSolver<Z> {
    fn new(rows: Vec<Vec<Ratio<Z>>>) -> Self {
        let n = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut a = rows;
        let mut t: Vec<Vec<Ratio<Z>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Ratio::one()
                        } else {
                            Ratio::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::with_capacity(n);
        let mut row = 0;
        for col in 0..width {
            if row == n {
                break;
            }
            let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            t.swap(row, p);
            let inv = Ratio::one() / a[row][col].clone();
            for x in a[row].iter_mut().chain(t[row].iter_mut()) {
                *x = x.clone() * inv.clone();
            }
            for r in 0..n {
                if r == row || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..width {
                    let v = a[row][c].clone();
                    if !v.is_zero() {
                        a[r][c] = a[r][c].clone() - factor.clone() * v;
                    }
                }
                for c in 0..n {
                    let v = t[row][c].clone();
                    if !v.is_zero() {
                        t[r][c] = t[r][c].clone() - factor.clone() * v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        assert_eq!(row, n, "Lie elements of the Hall basis must be independent");
        LieSolver {
            pivots,
            transform: t,
        }
    }

    fn solve(&self, component: &[Z]) -> Result<Vec<Z>> {
        let n = self.pivots.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Ratio::<Z>::zero();
            for (s, &col) in self.pivots.iter().enumerate() {
                let v = &component[col];
                if !v.is_zero() {
                    acc = acc + self.transform[s][k].clone() * v.clone();
                }
            }
            if !acc.is_integer() {
                return Err(Error::Internal(format!(
                    "non-integral Hall coordinate {acc}"
                )));
            }
            out.push(acc.to_integer());
        }
        Ok(out)
    }
}
