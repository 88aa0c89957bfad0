//! The worked example on `N(3, 2)`: `H = <g1^2, g2, g3>`, the map
//! `g1^2 ↦ g3, g2 ↦ g1, g3 ↦ g2`, and a fixed transversal of eight
//! elements. Its wreath recursions for `α = φ(g1)`, `β = φ(g2)`,
//! `γ = φ(g3)` serve as end-to-end ground truth.

use std::sync::Arc;

use super::{Permutation, SelfSimilarRep, VirtualEndomorphism};
use crate::error::Result;
use crate::nilpotent::{GroupElement, Presentation};
use crate::scalar::Exponent;
use crate::Expr;

pub const EXAMPLE_RANK: usize = 3;
pub const EXAMPLE_CLASS: usize = 2;
pub const EXAMPLE_EXPONENTS: [i64; 3] = [2, 1, 1];

/// Transversal `t_1..t_8` in the reference order.
pub const EXAMPLE_TRANSVERSAL: [&str; 8] = [
    "1",
    "g1",
    "[g1,g2]",
    "[g1,g3]",
    "g1 [g1,g2]",
    "g1 [g1,g3]",
    "[g1,g2] [g1,g3]",
    "g1 [g1,g2] [g1,g3]",
];

/// Expected first-level recursion of one generator image.
#[derive(Debug, Clone)]
pub struct ExpectedRecursion {
    pub name: &'static str,
    pub generator: usize,
    pub cycles: &'static [&'static [usize]],
    /// Reference states, in terms of α, β, γ.
    pub listed_states: [&'static str; 8],
    /// The same states as group elements, after applying [`EXAMPLE_ERRATA`].
    pub states: [&'static str; 8],
}

/// A reference state that contradicts the defining recursion.
#[derive(Debug, Clone)]
pub struct Erratum {
    pub name: &'static str,
    /// 1-based letter.
    pub position: usize,
    pub listed: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

/// For `β` at letter 8 the cofactor is `h_8 = t_8 g2 t_6^-1 = g2 [g1,g2]^2`,
/// whose `g1`-exponent is 0, so its image has no `g3` in its abelianization.
/// The listed `αγ[γ,α]` has abelianization `(1,0,1)`.
pub const EXAMPLE_ERRATA: [Erratum; 1] = [Erratum {
    name: "beta",
    position: 8,
    listed: "αγ[γ,α]",
    corrected: "α[γ,α]",
    reason: "abelianization (1,0,1) is unreachable: h_8 = g2 [g1,g2]^2 has g1-exponent 0",
}];

pub const EXPECTED_RECURSIONS: [ExpectedRecursion; 3] = [
    ExpectedRecursion {
        name: "alpha",
        generator: 0,
        cycles: &[&[1, 2], &[3, 5], &[4, 6], &[7, 8]],
        listed_states: ["e", "γ", "e", "e", "γ", "γ", "e", "γ"],
        states: ["e", "g3", "e", "e", "g3", "g3", "e", "g3"],
    },
    ExpectedRecursion {
        name: "beta",
        generator: 1,
        cycles: &[&[2, 5], &[6, 8]],
        listed_states: ["α", "α", "α", "α", "α[γ,α]", "α", "α", "αγ[γ,α]"],
        states: ["g1", "g1", "g1", "g1", "g1 [g3,g1]", "g1", "g1", "g1 [g3,g1]"],
    },
    ExpectedRecursion {
        name: "gamma",
        generator: 2,
        cycles: &[&[2, 6], &[5, 8]],
        listed_states: ["β", "β", "β", "β", "β", "β[γ,β]", "β", "β[γ,β]"],
        states: ["g2", "g2", "g2", "g2", "g2", "g2 [g3,g2]", "g2", "g2 [g3,g2]"],
    },
];

pub fn example_transversal<Z: Exponent>(
    pres: &Arc<Presentation<Z>>,
) -> Result<Vec<GroupElement<Z>>> {
    EXAMPLE_TRANSVERSAL
        .iter()
        .map(|s| Expr::parse(s)?.eval(pres))
        .collect()
}

pub fn example_endomorphism<Z: Exponent>() -> Result<VirtualEndomorphism<Z>> {
    let pres = Presentation::new(EXAMPLE_RANK, EXAMPLE_CLASS)?;
    let exps: Vec<Z> = EXAMPLE_EXPONENTS.iter().map(|&n| Z::from_i64_exact(n)).collect();
    VirtualEndomorphism::cyclic(&pres, &exps)
}

/// The example representation with the reference transversal.
pub fn example_rep<Z: Exponent>() -> Result<SelfSimilarRep<Z>> {
    let f = example_endomorphism()?;
    let t = example_transversal(f.presentation())?;
    SelfSimilarRep::with_transversal(f, t)
}

/// One line of the example check.
#[derive(Debug, Clone)]
pub struct ExampleCheck {
    pub name: &'static str,
    /// `"permutation"` or `"states"`.
    pub kind: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub note: Option<String>,
}

/// Compares the computed recursions of `α, β, γ` with the reference ones.
pub fn verify_example<Z: Exponent>(rep: &SelfSimilarRep<Z>) -> Result<Vec<ExampleCheck>> {
    let pres = rep.endomorphism().presentation().clone();
    let mut out = Vec::new();
    for exp in &EXPECTED_RECURSIONS {
        let g = GroupElement::generator(&pres, exp.generator)?;
        let d = rep.decompose(&g)?;
        let perm = Permutation::from_cycles(rep.degree(), exp.cycles)?;
        out.push(ExampleCheck {
            name: exp.name,
            kind: "permutation",
            expected: perm.to_string(),
            actual: d.permutation.to_string(),
            pass: perm == d.permutation,
            note: None,
        });
        let expected_states = exp
            .states
            .iter()
            .map(|s| Expr::parse(s)?.eval(&pres))
            .collect::<Result<Vec<_>>>()?;
        let mut listed = exp.listed_states;
        let mut notes = Vec::new();
        for e in EXAMPLE_ERRATA.iter().filter(|e| e.name == exp.name) {
            listed[e.position - 1] = e.corrected;
            notes.push(format!(
                "letter {}: listed {} corrected to {} ({})",
                e.position, e.listed, e.corrected, e.reason
            ));
        }
        out.push(ExampleCheck {
            name: exp.name,
            kind: "states",
            expected: format!("({})", listed.join(", ")),
            actual: format!("({})", format_states(&d.states)),
            pass: expected_states == d.states,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        });
    }
    Ok(out)
}

/// Writes states in `α, β, γ` notation (`g1, g2, g3` renamed), e.g. `α[γ,α]`.
pub fn format_states<Z: Exponent>(states: &[GroupElement<Z>]) -> String {
    states
        .iter()
        .map(|s| greek(&s.to_string()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn greek(normal_form: &str) -> String {
    normal_form
        .replace("g1", "α")
        .replace("g2", "β")
        .replace("g3", "γ")
        .replace(' ', "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_reproduces() {
        let rep = example_rep::<i64>().unwrap();
        for check in verify_example(&rep).unwrap() {
            assert!(check.pass, "{}: expected {} got {}", check.name, check.expected, check.actual);
        }
    }

    #[test]
    fn greek_rendering() {
        let rep = example_rep::<i64>().unwrap();
        let g2 = GroupElement::generator(rep.endomorphism().presentation(), 1).unwrap();
        let d = rep.decompose(&g2).unwrap();
        assert_eq!(
            format_states(&d.states),
            "α, α, α, α, α[γ,α], α, α, α[γ,α]"
        );
    }

    /// Independent of `decompose`: a cofactor `t_i g2 t_j^-1` has g1-exponent
    /// `a_i - a_j`, and `t_i g2` lies in `H t_j` only if `a_i ≡ a_j (mod 2)`.
    /// With `a_i ∈ {0, 1}` the difference is 0, so no state of `β` can carry
    /// `g3` in its abelianization.
    #[test]
    fn listed_beta_state_is_unreachable() {
        let pres = Presentation::<i64>::new(3, 2).unwrap();
        let t = example_transversal(&pres).unwrap();
        let parity: Vec<i64> = t.iter().map(|x| x.abelianization()[0]).collect();
        assert!(parity.iter().all(|a| *a == 0 || *a == 1));
        for &ai in &parity {
            for &aj in &parity {
                if (ai - aj) % 2 == 0 {
                    assert_eq!(ai - aj, 0);
                }
            }
        }
        let listed = Expr::parse("g1 g3 [g3,g1]").unwrap().eval(&pres).unwrap();
        assert_eq!(listed.abelianization(), vec![1, 0, 1]);
    }
}
