//! Built-in example groups. Everything the self-test and the acceptance
//! suite run on is defined here, so results are reproducible offline.

use crate::error::Result;
use crate::exactlat::IntMatrix;
use crate::matgroup::{MatGroup, DEFAULT_MAX_ORDER};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: &'static str,
    pub n: usize,
    pub generators: Vec<IntMatrix>,
    /// Characteristics the corpus exercises for this group.
    pub primes: Vec<u64>,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, description: &'static str, generators: Vec<IntMatrix>, primes: &[u64]) -> Self {
        CorpusEntry {
            name: name.into(),
            description,
            n: generators[0].rows(),
            generators,
            primes: primes.to_vec(),
        }
    }

    pub fn group(&self) -> Result<MatGroup> {
        MatGroup::generate(self.n, &self.generators, DEFAULT_MAX_ORDER)
    }
}

/// Column permutation matrix sending `e_j` to `e_{perm[j]}`.
pub fn perm_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut rows = vec![vec![0i64; n]; n];
    for (j, &i) in perm.iter().enumerate() {
        rows[i][j] = 1;
    }
    IntMatrix::from_rows(&rows)
}

/// Block-diagonal sum.
pub fn direct_sum(blocks: &[IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(IntMatrix::rows).sum();
    let mut m = IntMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    m
}

pub fn minus_identity(n: usize) -> IntMatrix {
    IntMatrix::diag(&vec![-1; n])
}

/// `x -> x^{-1}`, `y <-> z` on `Z^3`.
pub fn g1() -> IntMatrix {
    IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]])
}

pub fn swap2() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
}

/// Swap on both halves of `Z^4`.
pub fn g2() -> IntMatrix {
    direct_sum(&[swap2(), swap2()])
}

pub fn gamma_generators() -> Vec<IntMatrix> {
    vec![g1(), IntMatrix::diag(&[-1, 1, 1])]
}

/// Rotation of order 4 on `Z^2`.
pub fn rotation4() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]])
}

/// Multiplication by `s` on `Z[s]/((s-1)(s^2+1))` in the basis `1, s, s^2`.
pub fn rotation4_companion() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, -1], vec![0, 1, 1]])
}

/// Rotation of order 3 on the `A_2` root lattice.
pub fn rotation3() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]])
}

/// Rotation of order 6 on the `A_2` root lattice.
pub fn rotation6() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, -1], vec![1, 0]])
}

pub fn symmetric_group_generators(n: usize) -> Vec<IntMatrix> {
    let mut transposition: Vec<usize> = (0..n).collect();
    transposition.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    vec![perm_matrix(&transposition), perm_matrix(&cycle)]
}

pub fn signed_permutation_generators(n: usize) -> Vec<IntMatrix> {
    let mut gens = symmetric_group_generators(n);
    let mut signs = vec![1i64; n];
    signs[0] = -1;
    gens.push(IntMatrix::diag(&signs));
    gens
}

fn repeat(m: &IntMatrix, k: usize) -> IntMatrix {
    direct_sum(&vec![m.clone(); k])
}

/// The full built-in corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(CorpusEntry::new(
            format!("inversion-{n}"),
            "-I acting on Z^n",
            vec![minus_identity(n)],
            &[2],
        ));
    }
    out.push(CorpusEntry::new("g1", "x -> 1/x, y <-> z", vec![g1()], &[2, 3]));
    out.push(CorpusEntry::new("g2", "double swap on Z^4", vec![g2()], &[2]));
    out.push(CorpusEntry::new(
        "gamma",
        "<g1, diag(-1,1,1)>, Klein four-group on Z^3",
        gamma_generators(),
        &[2],
    ));
    out.push(CorpusEntry::new(
        "s3-perm",
        "S3 permuting coordinates of Z^3",
        symmetric_group_generators(3),
        &[2, 3],
    ));
    out.push(CorpusEntry::new(
        "s4-perm",
        "S4 permuting coordinates of Z^4",
        symmetric_group_generators(4),
        &[2, 3],
    ));
    out.push(CorpusEntry::new("rot4", "rotation of order 4 on Z^2", vec![rotation4()], &[2]));
    out.push(CorpusEntry::new(
        "rot4-companion",
        "order-4 action on Z[s]/((s-1)(s^2+1))",
        vec![rotation4_companion()],
        &[2],
    ));
    out.push(CorpusEntry::new("z3-rot", "rotation of order 3 on A2", vec![rotation3()], &[3]));
    out.push(CorpusEntry::new(
        "z3-perm",
        "cyclic shift on Z^3",
        vec![perm_matrix(&[1, 2, 0])],
        &[3],
    ));
    out.push(CorpusEntry::new(
        "z3-perm-x2",
        "cyclic shift on two copies of Z^3",
        vec![repeat(&perm_matrix(&[1, 2, 0]), 2)],
        &[3],
    ));
    out.push(CorpusEntry::new(
        "c6-rot",
        "rotation of order 6 on A2",
        vec![rotation6()],
        &[2, 3],
    ));
    out.push(CorpusEntry::new(
        "diag-3minus",
        "diag(-1,-1,-1,1)",
        vec![IntMatrix::diag(&[-1, -1, -1, 1])],
        &[2],
    ));
    for k in 1..=3 {
        out.push(CorpusEntry::new(
            format!("s3-a2-x{k}"),
            "S3 on k copies of the A2 root lattice",
            vec![repeat(&rotation3(), k), repeat(&swap2(), k)],
            &[2, 3],
        ));
    }
    out.push(CorpusEntry::new(
        "s3-perm-x2",
        "S3 permuting coordinates of two copies of Z^3",
        symmetric_group_generators(3)
            .iter()
            .map(|m| repeat(m, 2))
            .collect(),
        &[2, 3],
    ));
    out.push(CorpusEntry::new(
        "d4",
        "signed permutations of Z^2 (dihedral of order 8)",
        signed_permutation_generators(2),
        &[2],
    ));
    out.push(CorpusEntry::new(
        "b3",
        "signed permutations of Z^3 (order 48)",
        signed_permutation_generators(3),
        &[2, 3],
    ));
    out
}

pub fn builtin(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_orders() {
        let expected = [
            ("inversion-3", 2),
            ("g1", 2),
            ("g2", 2),
            ("gamma", 4),
            ("s3-perm", 6),
            ("s4-perm", 24),
            ("rot4", 4),
            ("rot4-companion", 4),
            ("z3-rot", 3),
            ("c6-rot", 6),
            ("s3-a2-x1", 6),
            ("s3-a2-x3", 6),
            ("s3-perm-x2", 6),
            ("d4", 8),
            ("b3", 48),
        ];
        for (name, order) in expected {
            let g = builtin(name).unwrap().group().unwrap();
            assert_eq!(g.order(), order, "{name}");
        }
    }
}
