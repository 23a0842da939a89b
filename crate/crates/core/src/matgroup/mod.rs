//! Finite subgroups of `GL_n(Z)` held as explicit, canonically ordered element lists.

mod element;
mod subgroups;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactlat::IntMatrix;

pub use element::{classify_element, is_fixed_point_free, ElementProfile, ELEMENT_ORDER_BOUND};
pub(crate) use subgroups::{check_prime, is_power_of};
pub use subgroups::{
    op_core, subgroup_classes, subgroup_structure, subgroups, subgroups_bounded, sylow,
    SubgroupStructure,
};

pub const DEFAULT_MAX_ORDER: usize = 10_000;
pub const DEFAULT_SUBGROUP_BOUND: usize = 200;

/// Groups up to this order carry a full multiplication table.
pub const TABLE_LIMIT: usize = 512;

/// A finite matrix group. Elements are sorted lexicographically by their
/// row-major entries; every index-based API refers to that order.
#[derive(Clone)]
pub struct MatGroup {
    n: usize,
    elements: Vec<IntMatrix>,
    lookup: HashMap<IntMatrix, usize>,
    generators: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for MatGroup {}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("n", &self.n)
            .field("order", &self.order())
            .field("generators", &self.generators())
            .finish()
    }
}

fn check_generator(n: usize, g: &IntMatrix) -> Result<()> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    if g.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.rows(),
        });
    }
    let d = g.det()?;
    if !d.abs().is_one() {
        return Err(Error::NonUnimodular { det: d.to_string() });
    }
    Ok(())
}

impl MatGroup {
    /// Closure of `gens` under multiplication. Fails with
    /// [`Error::OrderBoundExceeded`] once more than `max_order` elements appear.
    pub fn generate(n: usize, gens: &[IntMatrix], max_order: usize) -> Result<MatGroup> {
        for g in gens {
            check_generator(n, g)?;
        }
        let id = IntMatrix::identity(n);
        let mut seen: HashMap<IntMatrix, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = &x * g;
                if !seen.contains_key(&y) {
                    if seen.len() >= max_order {
                        return Err(Error::OrderBoundExceeded { bound: max_order });
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<IntMatrix> = seen.into_keys().collect();
        elements.sort();
        let mut group = Self::from_sorted(n, elements);
        let mut gen_idx = Vec::new();
        for g in gens {
            let i = group.lookup[g];
            if !gen_idx.contains(&i) {
                gen_idx.push(i);
            }
        }
        group.generators = gen_idx;
        Ok(group)
    }

    pub fn trivial(n: usize) -> MatGroup {
        Self::from_sorted(n, vec![IntMatrix::identity(n)])
    }

    fn from_sorted(n: usize, elements: Vec<IntMatrix>) -> MatGroup {
        let lookup: HashMap<IntMatrix, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let identity = lookup[&IntMatrix::identity(n)];
        let order = elements.len();
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; order * order];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    t[i * order + j] = lookup[&(a * b)] as u32;
                }
            }
            t
        });
        let inverse = match &table {
            Some(t) => (0..order)
                .map(|i| {
                    (0..order)
                        .find(|&j| t[i * order + j] as usize == identity)
                        .expect("group has inverses")
                })
                .collect(),
            None => elements
                .iter()
                .map(|m| lookup[&m.inverse_unimodular().expect("unimodular element")])
                .collect(),
        };
        MatGroup {
            n,
            elements,
            lookup,
            generators: Vec::new(),
            identity,
            inverse,
            table,
        }
    }

    /// Subgroup of `parent` on the given sorted parent indices.
    pub(crate) fn from_parent(parent: &MatGroup, members: &[usize], gens: &[usize]) -> MatGroup {
        let elements: Vec<IntMatrix> = members.iter().map(|&i| parent.elements[i].clone()).collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let order = members.len();
        let table = parent.table.as_ref().map(|_| {
            let mut t = vec![0u32; order * order];
            for (a, &ia) in members.iter().enumerate() {
                for (b, &ib) in members.iter().enumerate() {
                    t[a * order + b] = local[&parent.mul(ia, ib)] as u32;
                }
            }
            t
        });
        let lookup = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MatGroup {
            n: parent.n,
            identity: local[&parent.identity],
            inverse: members.iter().map(|&i| local[&parent.inverse[i]]).collect(),
            generators: gens.iter().map(|g| local[g]).collect(),
            elements,
            lookup,
            table,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.lookup.contains_key(m)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn multiplication_table(&self) -> Option<&[u32]> {
        self.table.as_deref()
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.lookup[&(&self.elements[i] * &self.elements[j])],
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// `g h g^{-1}` by index.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse[g])
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// True iff the group has an element whose order equals the group order.
    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|i| self.element_order(i) == self.order())
    }

    /// The largest power of `p` dividing the order.
    pub fn p_part(&self, p: u64) -> usize {
        let mut m = self.order();
        let mut part = 1;
        let p = p as usize;
        while m.is_multiple_of(p) {
            m /= p;
            part *= p;
        }
        part
    }

    /// Every element of `self` lies in `other` (same ambient rank).
    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.n == other.n && self.elements.iter().all(|m| other.contains(m))
    }

    /// Parent indices of the elements of `sub`, sorted.
    pub fn indices_of(&self, sub: &MatGroup) -> Result<Vec<usize>> {
        if sub.n != self.n {
            return Err(Error::NotSubgroup);
        }
        let mut idx = sub
            .elements
            .iter()
            .map(|m| self.index_of(m).ok_or(Error::NotSubgroup))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        Ok(idx)
    }

    /// `T G T^{-1}` for a unimodular `t`.
    pub fn conjugate_by(&self, t: &IntMatrix) -> Result<MatGroup> {
        let t_inv = t.inverse_unimodular()?;
        let gens: Vec<IntMatrix> = self.generators().iter().map(|g| &(t * g) * &t_inv).collect();
        MatGroup::generate(self.n, &gens, self.order())
    }

    /// Indices reachable from the identity by right multiplication with `seeds`.
    pub(crate) fn closure_mask(&self, seeds: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    pub(crate) fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        mask_to_indices(&self.closure_mask(seeds))
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup_generated_by(&self, seeds: &[usize]) -> MatGroup {
        let members = self.closure(seeds);
        let gens = greedy_generators(self, &members);
        MatGroup::from_parent(self, &members, &gens)
    }
}

pub(crate) fn mask_to_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// A generating set for the subgroup on `members`: scan in canonical order and
/// keep each element not yet generated.
pub(crate) fn greedy_generators(g: &MatGroup, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.closure_mask(&[]);
    for &m in members {
        if !span[m] {
            gens.push(m);
            span = g.closure_mask(&gens);
        }
    }
    gens
}
