use std::fmt::Write;
use std::sync::Arc;

use serde::Serialize;
use selfsim::nilpotent::{ElementRecord, JsonInt};
use selfsim::selfsim::example::{self, ExampleCheck};
use selfsim::selfsim::{
    abelianized_matrix, polynomial_to_string, Permutation, PortraitNode, SpectralRadius,
    StateClosure, VirtualEndomorphism,
};
use selfsim::{
    index_exponent, subgroup_index_formula, weight_count, witt_multirank, witt_rank, BigInt,
    CommutatorShape, Element, Error, Expr, HallBasis, Presentation, Result, SelfSimilarRep,
    Subgroup, DEFAULT_BASIS_CAP,
};

use crate::{Cli, Command, Format, RepAction, RepArgs, TransversalChoice, VerifyTarget};

/// What a successful dispatch prints, and whether it reports a failed check.
pub struct Outcome {
    pub stdout: String,
    pub failed: bool,
}

impl From<String> for Outcome {
    fn from(stdout: String) -> Self {
        Outcome { stdout, failed: false }
    }
}

pub fn basis_cap() -> std::result::Result<usize, String> {
    match std::env::var("SELFSIM_BASIS_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| format!("SELFSIM_BASIS_CAP must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BASIS_CAP),
    }
}

pub fn run(cli: &Cli, cap: usize) -> Result<Outcome> {
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Witt { rank, weight } => {
            let value = witt_rank(*rank as usize, *weight as usize)?;
            count(json, &value, &[("rank", *rank), ("weight", *weight)])?
        }
        Command::Multirank { parts } => {
            let value = witt_multirank(parts)?;
            if json {
                to_json(&MultirankOut {
                    parts: parts.clone(),
                    value: JsonInt::from_exponent(&value),
                })?
            } else {
                format!("{value}\n")
            }
        }
        Command::Hall(g) => {
            let basis = HallBasis::with_cap(g.rank as usize, g.class as usize, cap)?;
            hall(json, &basis)?
        }
        Command::Arn { rank, weight } => {
            let value = weight_count(*rank as usize, *weight as usize)?;
            count(json, &value, &[("rank", *rank), ("weight", *weight)])?
        }
        Command::IndexExponent(g) => {
            let value = index_exponent(g.rank as usize, g.class as usize)?;
            count(json, &value, &[("rank", g.rank), ("class", g.class)])?
        }
        Command::Index { group, exponents } => {
            let value = subgroup_index_formula(group.rank as usize, group.class as usize, exponents)?;
            if json {
                to_json(&IndexOut {
                    rank: group.rank,
                    class: group.class,
                    exponents: exponents.clone(),
                    index: JsonInt::from_exponent(&value),
                })?
            } else {
                format!("{value}\n")
            }
        }
        Command::Collect { group, expr } => {
            let pres = Presentation::with_cap(group.rank as usize, group.class as usize, cap)?;
            let x = parse(&pres, expr)?;
            if json {
                to_json(&x.to_record())?
            } else {
                format!("{x}\n")
            }
        }
        Command::Subgroup { group, gens } => {
            let pres = Presentation::with_cap(group.rank as usize, group.class as usize, cap)?;
            let elems = gens
                .iter()
                .flat_map(|g| g.split(';'))
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse(&pres, s))
                .collect::<Result<Vec<_>>>()?;
            let h = Subgroup::generated_by(&pres, &elems)?;
            if json {
                to_json(&h.to_record())?
            } else {
                subgroup_text(&h)
            }
        }
        Command::Rep(cmd) => return rep(json, &cmd.rep, &cmd.action, cap),
        Command::Verify { target: VerifyTarget::Example } => return verify(json, cap),
    };
    Ok(out.into())
}

#[derive(Serialize)]
struct MultirankOut {
    parts: Vec<usize>,
    value: JsonInt,
}

#[derive(Serialize)]
struct IndexOut {
    rank: u32,
    class: u32,
    exponents: Vec<usize>,
    index: JsonInt,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse(pres: &Arc<Presentation>, s: &str) -> Result<Element> {
    Expr::parse(s)?.eval(pres)
}

fn count(json: bool, value: &BigInt, fields: &[(&str, u32)]) -> Result<String> {
    if !json {
        return Ok(format!("{value}\n"));
    }
    let mut map = serde_json::Map::new();
    for (k, v) in fields {
        map.insert((*k).into(), (*v).into());
    }
    map.insert("value".into(), serde_json::to_value(JsonInt::from_exponent(value))?);
    to_json(&map)
}

#[derive(Serialize)]
struct HallEntryOut {
    id: usize,
    weight: usize,
    multiweight: Vec<usize>,
    commutator: String,
    /// 1-based ids of the bracketed entries.
    left: Option<usize>,
    right: Option<usize>,
}

#[derive(Serialize)]
struct HallOut {
    rank: usize,
    class: usize,
    entries: Vec<HallEntryOut>,
}

fn hall(json: bool, basis: &HallBasis) -> Result<String> {
    let entries: Vec<HallEntryOut> = basis
        .entries()
        .iter()
        .map(|e| {
            let (left, right) = match e.shape {
                CommutatorShape::Generator(_) => (None, None),
                CommutatorShape::Bracket(i, j) => (Some(i + 1), Some(j + 1)),
            };
            HallEntryOut {
                id: e.id(),
                weight: e.weight,
                multiweight: e.multiweight.clone(),
                commutator: basis.format_entry(e.index),
                left,
                right,
            }
        })
        .collect();
    if json {
        return to_json(&HallOut {
            rank: basis.rank(),
            class: basis.class(),
            entries,
        });
    }
    let mut s = String::new();
    for e in entries {
        let mw: Vec<String> = e.multiweight.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "{} {} {} {}", e.id, e.weight, mw.join(","), e.commutator);
    }
    Ok(s)
}

fn subgroup_text(h: &Subgroup) -> String {
    let mut s = String::new();
    match h.index() {
        Ok(i) => {
            let _ = writeln!(s, "index: {i}");
        }
        Err(_) => s.push_str("index: infinite\n"),
    }
    let pivots: Vec<String> = h
        .pivots()
        .iter()
        .map(|p| p.as_ref().map_or("-".to_string(), ToString::to_string))
        .collect();
    let _ = writeln!(s, "pivots: {}", pivots.join(","));
    s.push_str("sequence:\n");
    for x in h.sequence() {
        let _ = writeln!(s, "  {x}");
    }
    s
}

// ---- rep ----------------------------------------------------------------

fn is_example(args: &RepArgs) -> bool {
    args.rank as usize == example::EXAMPLE_RANK
        && args.class as usize == example::EXAMPLE_CLASS
        && args.exponents.len() == example::EXAMPLE_EXPONENTS.len()
        && args
            .exponents
            .iter()
            .zip(example::EXAMPLE_EXPONENTS)
            .all(|(a, b)| *a == BigInt::from(b))
}

fn build_rep(args: &RepArgs, cap: usize) -> Result<(SelfSimilarRep, TransversalChoice)> {
    let pres = Presentation::with_cap(args.rank as usize, args.class as usize, cap)?;
    let f = VirtualEndomorphism::cyclic(&pres, &args.exponents)?;
    let choice = args.transversal.unwrap_or(if is_example(args) {
        TransversalChoice::Example
    } else {
        TransversalChoice::Canonical
    });
    let rep = match choice {
        TransversalChoice::Canonical => SelfSimilarRep::new(f)?,
        TransversalChoice::Example => {
            if !is_example(args) {
                return Err(Error::InvalidArgument(
                    "the example transversal needs rank 3, class 2, exponents 2,1,1".into(),
                ));
            }
            let t = example::example_transversal(&pres)?;
            SelfSimilarRep::with_transversal(f, t)?
        }
    };
    Ok((rep, choice))
}

#[derive(Serialize)]
struct BuildOut {
    rank: usize,
    class: usize,
    exponents: Vec<JsonInt>,
    alphabet: usize,
    transversal_order: &'static str,
    transversal: Vec<ElementRecord>,
    domain_generators: Vec<ElementRecord>,
    images: Vec<ElementRecord>,
    level1_transitive: bool,
}

#[derive(Serialize)]
struct DecomposeOut {
    permutation: Vec<usize>,
    cycles: String,
    states: Vec<ElementRecord>,
}

#[derive(Serialize)]
struct ActOut {
    word: Vec<usize>,
    image: Vec<usize>,
}

#[derive(Serialize)]
struct CutoffOut {
    cutoff_exceeded: bool,
    explored: usize,
}

#[derive(Serialize)]
struct SpectralOut {
    matrix: Vec<Vec<String>>,
    characteristic_polynomial: Vec<String>,
    spectral_radius: f64,
    exact_form: bool,
    verdict: String,
}

#[derive(Serialize)]
struct WitnessOut {
    element: ElementRecord,
    max_depth: usize,
    witness: Option<Vec<usize>>,
}

fn join_letters(w: &[usize]) -> String {
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn rep(json: bool, args: &RepArgs, action: &RepAction, cap: usize) -> Result<Outcome> {
    let (rep, choice) = build_rep(args, cap)?;
    let pres = rep.endomorphism().presentation().clone();
    let out = match action {
        RepAction::Build => {
            let f = rep.endomorphism();
            let transitive = rep.is_level1_transitive()?;
            let order = match choice {
                TransversalChoice::Example => "paper-example",
                TransversalChoice::Canonical => "canonical",
            };
            if json {
                let records = |xs: &[Element]| xs.iter().map(Element::to_record).collect();
                to_json(&BuildOut {
                    rank: pres.rank(),
                    class: pres.class(),
                    exponents: args.exponents.iter().map(JsonInt::from_exponent).collect(),
                    alphabet: rep.degree(),
                    transversal_order: order,
                    transversal: records(rep.transversal()),
                    domain_generators: records(f.generators()),
                    images: records(f.images()),
                    level1_transitive: transitive,
                })?
            } else {
                let list = |xs: &[Element]| {
                    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                };
                let mut s = String::new();
                let _ = writeln!(s, "rank: {}", pres.rank());
                let _ = writeln!(s, "class: {}", pres.class());
                let _ = writeln!(s, "alphabet: {}", rep.degree());
                let _ = writeln!(s, "domain generators: {}", list(f.generators()));
                let _ = writeln!(s, "images: {}", list(f.images()));
                let _ = writeln!(s, "transversal ({order}):");
                for (i, t) in rep.transversal().iter().enumerate() {
                    let _ = writeln!(s, "  {}: {t}", i + 1);
                }
                let _ = writeln!(s, "level-1 transitive: {}", if transitive { "yes" } else { "no" });
                s
            }
        }
        RepAction::Decompose { elem } => {
            let g = parse(&pres, elem)?;
            let d = rep.decompose(&g)?;
            if json {
                to_json(&DecomposeOut {
                    permutation: d.permutation.one_based(),
                    cycles: d.permutation.to_string(),
                    states: d.states.iter().map(Element::to_record).collect(),
                })?
            } else {
                let mut s = format!("permutation: {}\n", d.permutation);
                for (i, st) in d.states.iter().enumerate() {
                    let _ = writeln!(s, "state {}: {st}", i + 1);
                }
                s
            }
        }
        RepAction::Act { elem, word } => {
            let g = parse(&pres, elem)?;
            let image = rep.act(&g, &word.0)?;
            if json {
                to_json(&ActOut {
                    word: word.0.clone(),
                    image,
                })?
            } else {
                format!("{}\n", join_letters(&image))
            }
        }
        RepAction::Portrait { elem, depth } => {
            let g = parse(&pres, elem)?;
            let portrait = rep.portrait(&g, *depth)?;
            if json {
                to_json(&portrait)?
            } else {
                let mut s = String::new();
                portrait_text(&mut s, &portrait.root, "root", 0);
                s
            }
        }
        RepAction::States { cutoff, seeds } => {
            let seeds = if seeds.is_empty() {
                rep.generators()
            } else {
                seeds.iter().map(|x| parse(&pres, x)).collect::<Result<_>>()?
            };
            let cutoff = usize::try_from(*cutoff).unwrap_or(usize::MAX);
            if json {
                match rep.automaton(&seeds, cutoff)? {
                    Some(a) => to_json(&a)?,
                    None => to_json(&CutoffOut {
                        cutoff_exceeded: true,
                        explored: cutoff + 1,
                    })?,
                }
            } else {
                match rep.state_closure(&seeds, cutoff)? {
                    StateClosure::Finite(states) => {
                        let mut s = format!("states: {}\n", states.len());
                        for (i, x) in states.iter().enumerate() {
                            let _ = writeln!(s, "  {i}: {x}");
                        }
                        s
                    }
                    StateClosure::CutoffExceeded { explored } => {
                        format!("cutoff exceeded: {explored} states found (cutoff {cutoff})\n")
                    }
                }
            }
        }
        RepAction::Spectral => {
            let m = abelianized_matrix(rep.endomorphism())?;
            let poly = m.characteristic_polynomial();
            let SpectralRadius { value, exact_form } = m.spectral_radius();
            let verdict = m.spectral_radius().verdict().to_string();
            if json {
                to_json(&SpectralOut {
                    matrix: m
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .collect(),
                    characteristic_polynomial: poly.iter().map(ToString::to_string).collect(),
                    spectral_radius: value,
                    exact_form,
                    verdict,
                })?
            } else {
                let mut s = format!("matrix:\n{m}");
                let _ = writeln!(s, "characteristic polynomial: {}", polynomial_to_string(&poly));
                let _ = writeln!(
                    s,
                    "spectral radius: {value:.15} ({})",
                    if exact_form { "closed form" } else { "numerical" }
                );
                let _ = writeln!(s, "verdict: {verdict}");
                s
            }
        }
        RepAction::Witness { elem, depth } => {
            let g = parse(&pres, elem)?;
            let w = rep.faithfulness_witness(&g, *depth)?;
            if json {
                to_json(&WitnessOut {
                    element: g.to_record(),
                    max_depth: *depth,
                    witness: w,
                })?
            } else {
                match w {
                    Some(w) => format!("{}\n", join_letters(&w)),
                    None => "unknown\n".to_string(),
                }
            }
        }
    };
    Ok(out.into())
}

fn portrait_text(s: &mut String, node: &PortraitNode, label: &str, indent: usize) {
    let cycles = Permutation::from_images(
        node.perm.iter().map(|y| y - 1).collect(),
    )
    .map(|p| p.to_string())
    .unwrap_or_default();
    let _ = writeln!(s, "{:indent$}{label}: {cycles}", "", indent = indent);
    for (i, child) in node.children.iter().enumerate() {
        portrait_text(s, child, &(i + 1).to_string(), indent + 2);
    }
}

// ---- verify -------------------------------------------------------------

#[derive(Serialize)]
struct CheckOut {
    name: &'static str,
    kind: &'static str,
    expected: String,
    actual: String,
    pass: bool,
    note: Option<String>,
}

fn verify(json: bool, cap: usize) -> Result<Outcome> {
    let pres = Presentation::with_cap(example::EXAMPLE_RANK, example::EXAMPLE_CLASS, cap)?;
    let exps: Vec<BigInt> = example::EXAMPLE_EXPONENTS.iter().map(|&n| BigInt::from(n)).collect();
    let f = VirtualEndomorphism::cyclic(&pres, &exps)?;
    let t = example::example_transversal(&pres)?;
    let rep = SelfSimilarRep::with_transversal(f, t)?;
    let checks: Vec<ExampleCheck> = example::verify_example(&rep)?;
    let failed = checks.iter().any(|c| !c.pass);
    let stdout = if json {
        let out: Vec<CheckOut> = checks
            .iter()
            .map(|c| CheckOut {
                name: c.name,
                kind: c.kind,
                expected: c.expected.clone(),
                actual: c.actual.clone(),
                pass: c.pass,
                note: c.note.clone(),
            })
            .collect();
        to_json(&out)?
    } else {
        let mut s = String::new();
        for c in &checks {
            let _ = write!(
                s,
                "{} {} {}: expected {} got {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.kind,
                c.expected,
                c.actual
            );
            if let Some(note) = &c.note {
                let _ = write!(s, " [erratum {note}]");
            }
            s.push('\n');
        }
        let passed = checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(s, "{passed}/{} checks passed", checks.len());
        s
    };
    Ok(Outcome { stdout, failed })
}
