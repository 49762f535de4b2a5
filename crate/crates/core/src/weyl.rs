//! Weyl group elements as exact integer actions, shell enumeration by
//! length, and inversion sets.
//!
//! Generator conventions (indices are 0-based):
//!
//! * roots: `s_i alpha_j = alpha_j - a_ij alpha_i`
//! * coroots: `s_i alpha_j^vee = alpha_j^vee - a_ji alpha_i^vee`
//! * weights: `(s_i lambda)_j = lambda_j - a_ji lambda_i`

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{Coefficient, CorootVec, Gcm, RootVec, Weight};
use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, VecSign};

/// Default bound on the number of elements in a single shell.
pub const DEFAULT_SHELL_CAP: usize = 1_000_000;

/// `u` with `S_root(i) = I + e_i u^T`.
fn root_update(g: &Gcm, i: usize) -> Vec<i64> {
    (0..g.rank()).map(|c| -g.entry(i, c)).collect()
}

/// `u` with `S_coroot(i) = I + e_i u^T`.
fn coroot_update(g: &Gcm, i: usize) -> Vec<i64> {
    (0..g.rank()).map(|c| -g.entry(c, i)).collect()
}

/// `v` with `S_weight(i) = I + v e_i^T`.
fn weight_update(g: &Gcm, i: usize) -> Vec<i64> {
    (0..g.rank()).map(|j| -g.entry(j, i)).collect()
}

/// Matrices of a simple reflection on the root lattice, the coroot lattice
/// and on weights (fundamental-weight coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionActions {
    pub root: IntMatrix,
    pub coroot: IntMatrix,
    pub weight: IntMatrix,
}

pub fn simple_reflection_action(g: &Gcm, i: usize) -> Result<ReflectionActions> {
    g.check_index(i)?;
    let id = IntMatrix::identity(g.rank());
    Ok(ReflectionActions {
        root: id.mul_row_update(i, &root_update(g, i)),
        coroot: id.mul_row_update(i, &coroot_update(g, i)),
        weight: id.mul_col_update(i, &weight_update(g, i)),
    })
}

/// A Weyl group element: its lexicographically smallest reduced word and its
/// exact actions on the root and coroot lattices.
#[derive(Clone, Debug)]
pub struct WeylElt {
    word: Vec<usize>,
    m_root: IntMatrix,
    m_coroot: IntMatrix,
    m_weight: OnceLock<IntMatrix>,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.m_root == other.m_root
    }
}

impl Eq for WeylElt {}

impl WeylElt {
    pub fn identity(g: &Gcm) -> Self {
        let id = IntMatrix::identity(g.rank());
        WeylElt {
            word: Vec::new(),
            m_root: id.clone(),
            m_coroot: id,
            m_weight: OnceLock::new(),
        }
    }

    /// Builds the element `s_{w[0]} s_{w[1]} ...`. The word must be reduced;
    /// the stored word is replaced by the canonical one.
    pub fn from_word(g: &Gcm, word: &[usize]) -> Result<Self> {
        let mut e = WeylElt::identity(g);
        for (pos, &i) in word.iter().enumerate() {
            g.check_index(i)?;
            if !e.ascends_right(i) {
                return Err(Error::NotReduced(pos));
            }
            e = e.times_generator(g, i);
        }
        e.word = canonical_word(g, &e.inverse_root_matrix(g), e.length());
        Ok(e)
    }

    /// `w s_i`, with word `word(w) + [i]`. No reducedness check.
    fn times_generator(&self, g: &Gcm, i: usize) -> Self {
        let mut word = self.word.clone();
        word.push(i);
        WeylElt {
            word,
            m_root: self.m_root.mul_row_update(i, &root_update(g, i)),
            m_coroot: self.m_coroot.mul_row_update(i, &coroot_update(g, i)),
            m_weight: OnceLock::new(),
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Action on the root lattice in the simple-root basis.
    pub fn m_root(&self) -> &IntMatrix {
        &self.m_root
    }

    /// Action on the coroot lattice in the simple-coroot basis.
    pub fn m_coroot(&self) -> &IntMatrix {
        &self.m_coroot
    }

    /// `l(w s_i) = l(w) + 1`, i.e. `w alpha_i > 0`.
    pub fn ascends_right(&self, i: usize) -> bool {
        self.m_root.column_sign(i) == VecSign::Positive
    }

    fn inverse_root_matrix(&self, g: &Gcm) -> IntMatrix {
        self.word
            .iter()
            .rev()
            .fold(IntMatrix::identity(g.rank()), |m, &i| {
                m.mul_row_update(i, &root_update(g, i))
            })
    }

    pub fn inverse(&self, g: &Gcm) -> WeylElt {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        WeylElt::from_word(g, &rev).expect("reverse of a reduced word is reduced")
    }

    /// Action on weights in fundamental-weight coordinates. It is the
    /// transpose of the coroot action of `w^{-1}`.
    pub fn weight_matrix(&self, g: &Gcm) -> &IntMatrix {
        self.m_weight.get_or_init(|| {
            self.word
                .iter()
                .fold(IntMatrix::identity(g.rank()), |m, &i| {
                    m.mul_col_update(i, &weight_update(g, i))
                })
        })
    }

    /// `w lambda`.
    pub fn apply<T: Coefficient>(&self, g: &Gcm, weight: &Weight<T>) -> Result<Weight<T>> {
        g.check_rank(weight.rank())?;
        Ok(Weight::new(
            self.weight_matrix(g).apply_coeff(&weight.coords),
        ))
    }

    pub fn apply_root(&self, root: &RootVec) -> RootVec {
        RootVec(self.m_root.apply(&root.0))
    }

    pub fn apply_coroot(&self, coroot: &CorootVec) -> CorootVec {
        CorootVec(self.m_coroot.apply(&coroot.0))
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, g: &Gcm, other: &WeylElt) -> WeylElt {
        let mut m = self.m_root.clone();
        let mut mc = self.m_coroot.clone();
        for &i in &other.word {
            m = m.mul_row_update(i, &root_update(g, i));
            mc = mc.mul_row_update(i, &coroot_update(g, i));
        }
        // the product of two reduced words need not be reduced, so the
        // length is recomputed from the inverse action
        let inv = inverse_from_words(g, &self.word, &other.word);
        let word = canonical_word(g, &inv, usize::MAX);
        WeylElt {
            word,
            m_root: m,
            m_coroot: mc,
            m_weight: OnceLock::new(),
        }
    }
}

fn inverse_from_words(g: &Gcm, first: &[usize], second: &[usize]) -> IntMatrix {
    first
        .iter()
        .chain(second)
        .rev()
        .fold(IntMatrix::identity(g.rank()), |m, &i| {
            m.mul_row_update(i, &root_update(g, i))
        })
}

/// Lexicographically smallest reduced word of `w`, given `w^{-1}` on roots.
/// Repeatedly strips the smallest left descent `i` (`w^{-1} alpha_i < 0`).
fn canonical_word(g: &Gcm, inverse_root: &IntMatrix, max_len: usize) -> Vec<usize> {
    let n = g.rank();
    let mut inv = inverse_root.clone();
    let mut word = Vec::new();
    while word.len() < max_len {
        let Some(i) = (0..n).find(|&i| inv.column_sign(i) == VecSign::Negative) else {
            break;
        };
        word.push(i);
        inv = inv.mul_row_update(i, &root_update(g, i));
    }
    word
}

/// `Phi_w`: positive roots sent to negative roots by `w`, with coroots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionSet {
    pub entries: Vec<(RootVec, CorootVec)>,
}

impl InversionSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = &RootVec> {
        self.entries.iter().map(|(r, _)| r)
    }

    pub fn coroots(&self) -> impl Iterator<Item = &CorootVec> {
        self.entries.iter().map(|(_, c)| c)
    }
}

/// For `w = s_{i_1} ... s_{i_l}` returns `beta_k = s_{i_l} ... s_{i_{k+1}} alpha_{i_k}`
/// and the same product applied to `alpha_{i_k}^vee`, for `k = 1..l`.
pub fn inversion_set(w: &WeylElt, g: &Gcm) -> InversionSet {
    let n = g.rank();
    let mut p_root = IntMatrix::identity(n);
    let mut p_coroot = IntMatrix::identity(n);
    let mut entries = Vec::with_capacity(w.length());
    for &i in w.word.iter().rev() {
        entries.push((RootVec(p_root.column(i)), CorootVec(p_coroot.column(i))));
        p_root = p_root.mul_row_update(i, &root_update(g, i));
        p_coroot = p_coroot.mul_row_update(i, &coroot_update(g, i));
    }
    entries.reverse();
    InversionSet { entries }
}

/// Link from an element to the element of the previous shell it was first
/// reached from: `element = parent * s_generator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parent {
    pub index: usize,
    pub generator: usize,
}

/// All elements of one length, ordered by canonical word.
#[derive(Clone, Debug)]
pub struct Shell {
    pub length: usize,
    pub elements: Vec<WeylElt>,
    /// `parents[j]` refers into the previous shell; empty for shell 0.
    pub parents: Vec<Parent>,
}

impl Shell {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub max_length: usize,
    pub shell_cap: usize,
}

impl EnumOptions {
    pub fn new(max_length: usize) -> Self {
        EnumOptions {
            max_length,
            shell_cap: DEFAULT_SHELL_CAP,
        }
    }
}

/// Breadth-first enumeration of `W` by length, closing under right
/// multiplication by simple reflections and deduplicating by the exact root
/// action. Output does not depend on the size of the rayon pool.
pub fn enumerate_shells(g: &Gcm, opts: EnumOptions) -> Result<Vec<Shell>> {
    let mut shells = vec![Shell {
        length: 0,
        elements: vec![WeylElt::identity(g)],
        parents: Vec::new(),
    }];
    let n = g.rank();
    let root_updates: Vec<Vec<i64>> = (0..n).map(|i| root_update(g, i)).collect();
    for length in 1..=opts.max_length {
        let prev = shells.last().unwrap();
        // Candidates come out ordered by (parent index, generator), which is
        // lexicographic order on the words since parents are sorted.
        let candidates: Vec<(usize, usize, IntMatrix)> = prev
            .elements
            .par_iter()
            .enumerate()
            .flat_map_iter(|(idx, w)| {
                let root_updates = &root_updates;
                (0..n)
                    .filter(move |&i| w.ascends_right(i))
                    .map(move |i| (idx, i, w.m_root.mul_row_update(i, &root_updates[i])))
            })
            .collect();
        let mut seen: HashMap<&IntMatrix, ()> = HashMap::with_capacity(candidates.len());
        let mut keep = Vec::new();
        for (k, (_, _, m)) in candidates.iter().enumerate() {
            if seen.insert(m, ()).is_none() {
                keep.push(k);
                if keep.len() > opts.shell_cap {
                    return Err(Error::ShellLimit {
                        length,
                        cap: opts.shell_cap,
                    });
                }
            }
        }
        drop(seen);
        let elements: Vec<WeylElt> = keep
            .par_iter()
            .map(|&k| {
                let (idx, i, ref m) = candidates[k];
                let parent = &prev.elements[idx];
                let mut word = parent.word.clone();
                word.push(i);
                WeylElt {
                    word,
                    m_root: m.clone(),
                    m_coroot: parent.m_coroot.mul_row_update(i, &coroot_update(g, i)),
                    m_weight: OnceLock::new(),
                }
            })
            .collect();
        let parents = keep
            .iter()
            .map(|&k| Parent {
                index: candidates[k].0,
                generator: candidates[k].1,
            })
            .collect();
        shells.push(Shell {
            length,
            elements,
            parents,
        });
    }
    Ok(shells)
}

/// Serialized form of one shell.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShellReport {
    pub length: usize,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub words: Option<Vec<Vec<usize>>>,
}

impl ShellReport {
    pub fn from_shell(shell: &Shell, with_words: bool) -> Self {
        ShellReport {
            length: shell.length,
            count: shell.len(),
            words: with_words.then(|| shell.elements.iter().map(|w| w.word.clone()).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_complex::Complex64;

    fn hyp() -> Gcm {
        Gcm::new(vec![vec![2, -3], vec![-3, 2]]).unwrap()
    }

    fn rank3() -> Gcm {
        Gcm::new(vec![vec![2, -2, 0], vec![-2, 2, -1], vec![0, -1, 2]]).unwrap()
    }

    #[test]
    fn reflections() {
        let g1 = Gcm::new(vec![vec![2]]).unwrap();
        let s = simple_reflection_action(&g1, 0).unwrap();
        assert_eq!(s.root, IntMatrix::from_rows(&[vec![-1]]));
        let g = hyp();
        let s = simple_reflection_action(&g, 0).unwrap();
        // s_1 alpha_2 = alpha_2 + 3 alpha_1
        assert_eq!(s.root.column(1), vec![BigInt::from(3), BigInt::from(1)]);
        for m in [&s.root, &s.coroot, &s.weight] {
            assert!(m.mul(m).is_identity());
        }
        assert!(simple_reflection_action(&g, 2).is_err());
    }

    #[test]
    fn shell_sizes() {
        let g1 = Gcm::new(vec![vec![2]]).unwrap();
        let sizes: Vec<usize> = enumerate_shells(&g1, EnumOptions::new(4))
            .unwrap()
            .iter()
            .map(Shell::len)
            .collect();
        assert_eq!(sizes, vec![1, 1, 0, 0, 0]);
        let sizes: Vec<usize> = enumerate_shells(&hyp(), EnumOptions::new(10))
            .unwrap()
            .iter()
            .map(Shell::len)
            .collect();
        assert_eq!(sizes, [vec![1], vec![2; 10]].concat());
    }

    #[test]
    fn shell_cap() {
        let err = enumerate_shells(
            &rank3(),
            EnumOptions {
                max_length: 6,
                shell_cap: 5,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::ShellLimit { .. }));
    }

    #[test]
    fn canonical_words_are_lex_minimal() {
        let g = rank3();
        for shell in enumerate_shells(&g, EnumOptions::new(6)).unwrap() {
            for w in &shell.elements {
                let again = WeylElt::from_word(&g, w.word()).unwrap();
                assert_eq!(again.word(), w.word());
                assert_eq!(&again, w);
            }
            let words: Vec<&[usize]> = shell.elements.iter().map(|w| w.word()).collect();
            assert!(words.windows(2).all(|p| p[0] < p[1]));
        }
        // s2 s1 s2 ... in the finite A2 group equals s1 s2 s1
        let a2 = Gcm::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let w = WeylElt::from_word(&a2, &[1, 0, 1]).unwrap();
        assert_eq!(w.word(), &[0, 1, 0]);
        assert_eq!(
            WeylElt::from_word(&a2, &[0, 0]).unwrap_err(),
            Error::NotReduced(1)
        );
    }

    #[test]
    fn inversion_set_example() {
        let g = hyp();
        let w = WeylElt::from_word(&g, &[0, 1]).unwrap();
        let inv = inversion_set(&w, &g);
        let roots: Vec<RootVec> = inv.roots().cloned().collect();
        assert_eq!(
            roots,
            vec![RootVec::from_i64(&[1, 3]), RootVec::from_i64(&[0, 1])]
        );
        let coroots: Vec<CorootVec> = inv.coroots().cloned().collect();
        assert_eq!(
            coroots,
            vec![CorootVec::from_i64(&[1, 3]), CorootVec::from_i64(&[0, 1])]
        );
        for r in inv.roots() {
            assert!(w.apply_root(r).is_negative());
        }
        assert!(inversion_set(&WeylElt::identity(&g), &g).is_empty());
    }

    #[test]
    fn weight_action() {
        let g1 = Gcm::new(vec![vec![2]]).unwrap();
        let s = WeylElt::from_word(&g1, &[0]).unwrap();
        let l = Weight::new(vec![Complex64::new(2.5, 1.0)]);
        assert_eq!(
            s.apply(&g1, &l).unwrap().coords,
            vec![Complex64::new(-2.5, -1.0)]
        );
        let g = hyp();
        let s1 = WeylElt::from_word(&g, &[0]).unwrap();
        let rho = Weight::new(vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(
            s1.apply(&g, &rho).unwrap().coords,
            vec![BigInt::from(-1), BigInt::from(4)]
        );
        for shell in enumerate_shells(&g, EnumOptions::new(4))
            .unwrap()
            .iter()
            .skip(1)
        {
            for w in &shell.elements {
                assert_ne!(w.apply(&g, &rho).unwrap(), rho);
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let g = rank3();
        let a = WeylElt::from_word(&g, &[0, 1, 2]).unwrap();
        let b = WeylElt::from_word(&g, &[2, 1]).unwrap();
        let ab = a.compose(&g, &b);
        assert_eq!(ab.m_root(), &a.m_root().mul(b.m_root()));
        // s0 s1 s2 s2 s1 = s0
        assert_eq!(ab.word(), &[0]);
        let e = a.compose(&g, &a.inverse(&g));
        assert!(e.is_identity());
        assert!(e.m_root().is_identity());
    }
}
