//! Breadth-first enumeration against exhaustive word enumeration.

use std::collections::HashMap;

use kmeis::cartan::Gcm;
use kmeis::fixtures;
use kmeis::weyl::{self, EnumOptions, WeylElt};

type Mat = Vec<Vec<i64>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

/// Root action of `s_i` in the simple-root basis: `s_i a_j = a_j - a_ij a_i`.
fn reflection(rows: &Mat, i: usize) -> Mat {
    let n = rows.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| i64::from(r == c) - if r == i { rows[i][c] } else { 0 })
                .collect()
        })
        .collect()
}

/// Every element of length `<= max_len`, keyed by its matrix, with the
/// lexicographically smallest word of minimal length.
fn exhaustive(rows: &Mat, max_len: usize) -> HashMap<Mat, Vec<usize>> {
    let n = rows.len();
    let id: Mat = (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect();
    let mut best: HashMap<Mat, Vec<usize>> = HashMap::new();
    let mut layer: Vec<(Vec<usize>, Mat)> = vec![(vec![], id)];
    for _ in 0..=max_len {
        // words of one length in lexicographic order
        for (w, m) in &layer {
            best.entry(m.clone()).or_insert_with(|| w.clone());
        }
        layer = layer
            .iter()
            .flat_map(|(w, m)| {
                (0..n).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    (v, mat_mul(m, &reflection(rows, i)))
                })
            })
            .collect();
    }
    best
}

fn compare(rows: Mat, max_len: usize) {
    let g = Gcm::new(rows.clone()).unwrap();
    let oracle = exhaustive(&rows, max_len);
    let shells = weyl::enumerate_shells(&g, EnumOptions::new(max_len)).unwrap();
    let mut total = 0;
    for shell in &shells {
        let mut want: Vec<&Vec<usize>> = oracle
            .values()
            .filter(|w| w.len() == shell.length)
            .collect();
        want.sort();
        let got: Vec<&[usize]> = shell.elements.iter().map(|w| w.word()).collect();
        assert_eq!(got.len(), want.len(), "shell {} of {rows:?}", shell.length);
        for (a, b) in got.iter().zip(&want) {
            assert_eq!(*a, b.as_slice());
        }
        total += got.len();
    }
    assert_eq!(total, oracle.len());
}

#[test]
fn rank_one() {
    compare(fixtures::rank1_rows(), 6);
}

#[test]
fn hyperbolic_rank_two() {
    compare(fixtures::hyperbolic_rows(), 12);
}

#[test]
fn rank_three_fixture() {
    compare(fixtures::rank3_rows(), 8);
}

#[test]
fn finite_types() {
    // A2, B2, G2: orders 6, 8, 12
    for (rows, order) in [
        (vec![vec![2, -1], vec![-1, 2]], 6),
        (vec![vec![2, -2], vec![-1, 2]], 8),
        (vec![vec![2, -3], vec![-1, 2]], 12),
    ] {
        compare(rows.clone(), 8);
        let g = Gcm::new(rows).unwrap();
        let shells = weyl::enumerate_shells(&g, EnumOptions::new(8)).unwrap();
        assert_eq!(shells.iter().map(|s| s.len()).sum::<usize>(), order);
    }
}

#[test]
fn a3_has_24_elements() {
    let g = Gcm::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
    let sizes: Vec<usize> = weyl::enumerate_shells(&g, EnumOptions::new(8))
        .unwrap()
        .iter()
        .map(|s| s.len())
        .collect();
    assert_eq!(sizes, [1, 3, 5, 6, 5, 3, 1, 0, 0]);
}

#[test]
fn canonical_words_are_stable() {
    let g = fixtures::rank3();
    for shell in weyl::enumerate_shells(&g, EnumOptions::new(6)).unwrap() {
        for w in &shell.elements {
            let again = WeylElt::from_word(&g, w.word()).unwrap();
            assert_eq!(again.word(), w.word());
            assert_eq!(&again, w);
        }
    }
}

#[test]
fn parents_link_to_prefixes() {
    let g = fixtures::rank3();
    let shells = weyl::enumerate_shells(&g, EnumOptions::new(7)).unwrap();
    for k in 1..shells.len() {
        for (w, p) in shells[k].elements.iter().zip(&shells[k].parents) {
            let parent = &shells[k - 1].elements[p.index];
            let mut word = parent.word().to_vec();
            word.push(p.generator);
            assert_eq!(word, w.word());
        }
    }
}
