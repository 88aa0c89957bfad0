use num_bigint::BigInt;
use selfsim::{
    hall_basis, index_exponent, subgroup_index_formula, weight_count, witt_multirank, witt_rank,
    CommutatorShape,
};

/// Duval's algorithm: counts Lyndon words of length exactly `n` over `r` letters.
fn lyndon_count(r: usize, n: usize) -> u64 {
    if r == 0 || n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == n {
            count += 1;
        }
        let len = w.len();
        while w.len() < n {
            let next = w[w.len() - len];
            w.push(next);
        }
        while let Some(&last) = w.last() {
            if last == r - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    count
}

/// Lyndon words by brute force: primitive words that are strictly smaller
/// than all their proper rotations.
fn lyndon_count_brute(r: usize, n: usize) -> u64 {
    let total = r.pow(n as u32);
    let mut count = 0;
    for code in 0..total {
        let mut w = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            w.push(x % r);
            x /= r;
        }
        let is_lyndon = (1..n).all(|k| {
            let rot: Vec<usize> = w[k..].iter().chain(&w[..k]).copied().collect();
            w < rot
        });
        if is_lyndon {
            count += 1;
        }
    }
    count
}

fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, r - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn witt_matches_lyndon_brute_force() {
    for r in 1..=3 {
        for n in 1..=7 {
            assert_eq!(
                witt_rank(r, n).unwrap(),
                BigInt::from(lyndon_count_brute(r, n)),
                "r={r} n={n}"
            );
        }
    }
}

#[test]
fn witt_matches_duval_enumeration() {
    for r in 1..=4 {
        for n in 1..=8 {
            assert_eq!(witt_rank(r, n).unwrap(), BigInt::from(lyndon_count(r, n)), "r={r} n={n}");
        }
    }
}

#[test]
fn known_witt_values() {
    assert_eq!(witt_rank(2, 3).unwrap(), BigInt::from(2));
    assert_eq!(witt_rank(3, 2).unwrap(), BigInt::from(3));
    assert_eq!(witt_rank(2, 6).unwrap(), BigInt::from(9));
    assert_eq!(witt_multirank(&[2, 1]).unwrap(), BigInt::from(1));
    assert_eq!(witt_multirank(&[2, 2]).unwrap(), BigInt::from(1));
}

#[test]
fn multirank_sums_over_compositions() {
    for r in 1..=5 {
        for n in 1..=8 {
            let total: BigInt = compositions(n, r)
                .iter()
                .map(|p| witt_multirank(p).unwrap())
                .sum();
            assert_eq!(total, witt_rank(r, n).unwrap(), "r={r} n={n}");
        }
    }
}

#[test]
fn hall_weight_counts_match_witt() {
    for r in 1..=4 {
        for c in 1..=6 {
            let basis = hall_basis(r, c).unwrap();
            for n in 1..=c {
                assert_eq!(
                    BigInt::from(basis.weight_range(n).len()),
                    witt_rank(r, n).unwrap(),
                    "r={r} c={c} n={n}"
                );
            }
        }
    }
}

#[test]
fn hall_entries_satisfy_basic_rules() {
    for r in 1..=3 {
        let basis = hall_basis(r, 5).unwrap();
        for e in basis.entries() {
            match e.shape {
                CommutatorShape::Generator(g) => {
                    assert_eq!(e.weight, 1);
                    assert_eq!(e.index, g);
                }
                CommutatorShape::Bracket(i, j) => {
                    assert!(i > j);
                    assert_eq!(e.weight, basis.weight(i) + basis.weight(j));
                    if let CommutatorShape::Bracket(_, t) = basis.get(i).shape {
                        assert!(j >= t);
                    }
                    let sum: Vec<usize> = basis
                        .get(i)
                        .multiweight
                        .iter()
                        .zip(&basis.get(j).multiweight)
                        .map(|(a, b)| a + b)
                        .collect();
                    assert_eq!(e.multiweight, sum);
                }
            }
        }
        for w in basis.entries().windows(2) {
            assert!(w[0].weight <= w[1].weight);
        }
    }
}

#[test]
fn multiweight_sums_are_generator_independent() {
    for r in 1..=4 {
        let basis = hall_basis(r, 6).unwrap();
        for n in 1..=6 {
            let range = basis.weight_range(n);
            let sums: Vec<usize> = (0..r)
                .map(|j| range.clone().map(|k| basis.get(k).multiweight[j]).sum())
                .collect();
            assert!(sums.windows(2).all(|w| w[0] == w[1]), "r={r} n={n}: {sums:?}");
            assert_eq!(BigInt::from(sums[0]), weight_count(r, n).unwrap());
            assert_eq!(
                BigInt::from(sums[0] * r),
                BigInt::from(n) * witt_rank(r, n).unwrap()
            );
        }
    }
}

#[test]
fn index_exponent_closed_form_matches_sum() {
    for r in 1..=4 {
        for c in 1..=6 {
            let sum: BigInt = (1..=c).map(|n| weight_count(r, n).unwrap()).sum();
            assert_eq!(index_exponent(r, c).unwrap(), sum, "r={r} c={c}");
        }
    }
    assert_eq!(index_exponent(1, 9).unwrap(), BigInt::from(1));
    assert_eq!(index_exponent(2, 3).unwrap(), BigInt::from(5));
}

#[test]
fn index_formula_examples() {
    assert_eq!(subgroup_index_formula(3, 2, &[2, 1, 1]).unwrap(), BigInt::from(8));
    assert_eq!(subgroup_index_formula(2, 3, &[2, 2]).unwrap(), BigInt::from(1024));
    assert_eq!(subgroup_index_formula(4, 1, &[2, 3, 1, 5]).unwrap(), BigInt::from(30));
}

#[test]
fn oracle_sanity() {
    for r in 1..=3 {
        for n in 1..=6 {
            assert_eq!(lyndon_count(r, n), lyndon_count_brute(r, n));
        }
    }
    assert_eq!(compositions(3, 2).len(), 4);
}
