use serde::Serialize;

use super::fp::{null_space, rank_of_columns, Echelon, Fp};
use super::GroupTable;

/// A free resolution `... -> F_1 -> F_0 -> F_p` over `F_p[G]`, truncated.
///
/// `F_r` has rank `ranks[r]`; its F_p-basis is `h e_j` at coordinate
/// `j * |G| + h`. `boundaries[r - 1][j]` is the image of `e_j` in `F_{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpResolution {
    pub p: u64,
    pub group_order: usize,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<u32>>>,
}

fn act(g: &GroupTable, x: usize, v: &[u32]) -> Vec<u32> {
    let n = g.order();
    let mut out = vec![0u32; v.len()];
    for (blk, chunk) in v.chunks(n).enumerate() {
        for (h, &c) in chunk.iter().enumerate() {
            if c != 0 {
                out[blk * n + g.mul(x, h)] = c;
            }
        }
    }
    out
}

/// Sum of coefficients in each block: the augmentation applied coordinate-wise.
fn augment_blocks(field: Fp, n: usize, v: &[u32]) -> Vec<u32> {
    v.chunks(n)
        .map(|c| c.iter().fold(0, |acc, &x| field.add(acc, x)))
        .collect()
}

impl FpResolution {
    pub fn depth(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Applies `d_r : F_r -> F_{r-1}` to a vector of `F_r`; `d_0` is the augmentation.
    pub fn apply_boundary(&self, g: &GroupTable, r: usize, v: &[u32]) -> Vec<u32> {
        let field = Fp::new(self.p);
        let n = self.group_order;
        if r == 0 {
            return vec![v.iter().fold(0, |acc, &x| field.add(acc, x))];
        }
        let mut out = vec![0u32; n * self.ranks[r - 1]];
        for (j, chunk) in v.chunks(n).enumerate() {
            for (h, &c) in chunk.iter().enumerate() {
                if c != 0 {
                    let img = act(g, h, &self.boundaries[r - 1][j]);
                    field.axpy(&mut out, field.sub(0, c), &img);
                }
            }
        }
        out
    }

    /// `d_{r-1} ∘ d_r = 0` on every generator, including `ε ∘ d_1`.
    pub fn composition_is_zero(&self, g: &GroupTable) -> bool {
        (1..=self.depth()).all(|r| {
            self.boundaries[r - 1]
                .iter()
                .all(|v| self.apply_boundary(g, r - 1, v).iter().all(|&x| x == 0))
        })
    }

    /// Every boundary entry lies in the augmentation ideal. This is what
    /// makes `rank F_r = dim H^r`; it is attainable only for `p`-groups.
    pub fn is_minimal(&self) -> bool {
        let field = Fp::new(self.p);
        self.boundaries.iter().flatten().all(|v| {
            augment_blocks(field, self.group_order, v)
                .iter()
                .all(|&x| x == 0)
        })
    }
}

/// Builds a resolution one degree at a time.
///
/// Generators for each kernel are chosen to be independent modulo
/// `I·K` (`I` the augmentation ideal), which gives a minimal resolution
/// for `p`-groups. For other groups those vectors may fail to generate, and
/// further kernel vectors are added until they do; cohomology is then read
/// from the cochain complex rather than from the ranks.
#[derive(Clone, Debug)]
pub struct Resolver {
    group: GroupTable,
    field: Fp,
    reverse: bool,
    conj_gens: Vec<usize>,
    ranks: Vec<usize>,
    boundaries: Vec<Vec<Vec<u32>>>,
    kernel: Vec<Vec<u32>>,
}

impl Resolver {
    pub fn new(group: &GroupTable, p: u64, reverse_pivots: bool) -> Self {
        let field = Fp::new(p);
        let n = group.order();
        let eps: Vec<Vec<u32>> = vec![vec![1]; n];
        let order = scan_order(n, reverse_pivots);
        Resolver {
            conj_gens: group.conjugation_closed_generators(),
            group: group.clone(),
            field,
            reverse: reverse_pivots,
            ranks: vec![1],
            boundaries: Vec::new(),
            kernel: null_space(field, 1, &eps, &order),
        }
    }

    pub fn depth(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Adds `F_{r+1}` and `d_{r+1}` covering the current kernel.
    pub fn extend(&mut self) {
        let g = &self.group;
        let n = g.order();
        let len = n * self.ranks[self.ranks.len() - 1];
        let field = self.field;

        let mut modulo = Echelon::new(field, len);
        for &s in &self.conj_gens {
            for k in &self.kernel {
                let mut w = act(g, s, k);
                field.axpy(&mut w, 1, k);
                modulo.insert(&w);
            }
        }
        let mut chosen: Vec<Vec<u32>> = Vec::new();
        for k in &self.kernel {
            if modulo.insert(k) {
                chosen.push(k.clone());
            }
        }
        let mut span = Echelon::new(field, len);
        for c in &chosen {
            for x in 0..n {
                span.insert(&act(g, x, c));
            }
        }
        if span.dim() < self.kernel.len() {
            for k in &self.kernel {
                if !span.contains(k) {
                    chosen.push(k.clone());
                    for x in 0..n {
                        span.insert(&act(g, x, k));
                    }
                }
            }
        }
        debug_assert_eq!(span.dim(), self.kernel.len());

        let cols: Vec<Vec<u32>> = chosen
            .iter()
            .flat_map(|c| (0..n).map(move |x| act(g, x, c)))
            .collect();
        let order = scan_order(cols.len(), self.reverse);
        self.kernel = null_space(field, len, &cols, &order);
        self.ranks.push(chosen.len());
        self.boundaries.push(chosen);
    }

    /// Rank of `δ^r : Hom(F_r, F_p) -> Hom(F_{r+1}, F_p)`; needs depth > r.
    fn coboundary_rank(&self, r: usize) -> usize {
        let n = self.group.order();
        let cols: Vec<Vec<u32>> = self.boundaries[r]
            .iter()
            .map(|v| augment_blocks(self.field, n, v))
            .collect();
        rank_of_columns(self.field, self.ranks[r], &cols)
    }

    /// `dim H^r(G, F_p)`; requires `depth() > r`.
    pub fn cohomology_dim(&self, r: usize) -> usize {
        assert!(self.depth() > r, "resolution too short for H^{r}");
        let prev = if r == 0 { 0 } else { self.coboundary_rank(r - 1) };
        self.ranks[r] - self.coboundary_rank(r) - prev
    }

    pub fn into_resolution(self) -> FpResolution {
        FpResolution {
            p: self.field.modulus() as u64,
            group_order: self.group.order(),
            ranks: self.ranks,
            boundaries: self.boundaries,
        }
    }
}

fn scan_order(m: usize, reverse: bool) -> Vec<usize> {
    if reverse {
        (0..m).rev().collect()
    } else {
        (0..m).collect()
    }
}
