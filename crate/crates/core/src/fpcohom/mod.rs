//! Mod-`p` cohomology of small finite groups through explicit free
//! resolutions of the trivial module over `F_p[G]`, and the invariant
//! `mu_p(G) = min { r > 0 : H^r(G, F_p) != 0 }`.

mod fp;
mod resolution;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matgroup::{subgroup_structure, sylow, MatGroup};

pub use fp::{null_space, rank_of_columns, Echelon, Fp};
pub use resolution::{FpResolution, Resolver};

pub const DEFAULT_MAX_GROUP_ORDER: usize = 48;
pub const DEFAULT_MAX_DEPTH: usize = 10;

/// Finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
}

impl GroupTable {
    /// Builds a table and validates the group axioms.
    pub fn new(order: usize, table: Vec<usize>, identity: usize, generators: Vec<usize>) -> Result<Self> {
        if table.len() != order * order || identity >= order.max(1) {
            return Err(Error::Precondition("malformed multiplication table".into()));
        }
        let t = GroupTable {
            order,
            table,
            identity,
            generators,
        };
        for a in 0..order {
            if t.mul(identity, a) != a || t.mul(a, identity) != a {
                return Err(Error::Precondition("identity is not neutral".into()));
            }
            let mut row: Vec<usize> = (0..order).map(|b| t.mul(a, b)).collect();
            row.sort_unstable();
            if row != (0..order).collect::<Vec<_>>() {
                return Err(Error::Precondition("table is not a Latin square".into()));
            }
            for b in 0..order {
                for c in 0..order {
                    if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                        return Err(Error::Precondition("table is not associative".into()));
                    }
                }
            }
        }
        if t.generated_order(&t.generators) != order {
            return Err(Error::Precondition("generators do not generate".into()));
        }
        Ok(t)
    }

    /// `Z/m` with generator 1.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        GroupTable {
            order: m,
            table: (0..m * m).map(|k| (k / m + k % m) % m).collect(),
            identity: 0,
            generators: if m > 1 { vec![1] } else { vec![] },
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order)
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("group element has an inverse")
    }

    fn generated_order(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// Union of the conjugacy classes of the generators. `(s - 1)` over this
    /// set spans the augmentation ideal times any submodule.
    pub(crate) fn conjugation_closed_generators(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &s in &self.generators {
            for x in 0..self.order {
                let c = self.mul(self.mul(x, s), self.inv(x));
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl From<&MatGroup> for GroupTable {
    fn from(g: &MatGroup) -> Self {
        let order = g.order();
        let table = (0..order * order).map(|k| g.mul(k / order, k % order)).collect();
        let generators = if g.generator_indices().is_empty() && order > 1 {
            (0..order).collect()
        } else {
            g.generator_indices().to_vec()
        };
        GroupTable {
            order,
            table,
            identity: g.identity_index(),
            generators,
        }
    }
}

/// Bounds for resolution computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolutionOptions {
    pub max_group_order: usize,
    pub max_depth: usize,
    /// Scan kernel columns in reverse order; changes the chosen bases only.
    pub reverse_pivots: bool,
}

impl Default for ResolutionOptions {
    fn default() -> Self {
        ResolutionOptions {
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            max_depth: DEFAULT_MAX_DEPTH,
            reverse_pivots: false,
        }
    }
}

impl ResolutionOptions {
    fn check(&self, g: &GroupTable, depth: usize) -> Result<()> {
        if g.order() > self.max_group_order {
            return Err(Error::BoundExceeded {
                what: "group order for resolutions",
                bound: self.max_group_order,
                got: g.order(),
            });
        }
        if depth > self.max_depth {
            return Err(Error::BoundExceeded {
                what: "resolution depth",
                bound: self.max_depth,
                got: depth,
            });
        }
        Ok(())
    }
}

/// Free resolution of `F_p` over `F_p[G]` through homological degree `depth`.
pub fn resolution(g: &GroupTable, p: u64, depth: usize, opts: &ResolutionOptions) -> Result<FpResolution> {
    crate::matgroup::check_prime(p)?;
    opts.check(g, depth)?;
    let mut r = Resolver::new(g, p, opts.reverse_pivots);
    while r.depth() < depth {
        r.extend();
    }
    Ok(r.into_resolution())
}

/// `dim H^r(G, F_p)` for `r = 0..=depth`.
pub fn cohomology_dims(g: &GroupTable, p: u64, depth: usize, opts: &ResolutionOptions) -> Result<Vec<usize>> {
    crate::matgroup::check_prime(p)?;
    opts.check(g, depth)?;
    let mut r = Resolver::new(g, p, opts.reverse_pivots);
    // H^depth needs the boundary out of degree depth + 1.
    while r.depth() < depth + 1 {
        r.extend();
    }
    Ok((0..=depth).map(|k| r.cohomology_dim(k)).collect())
}

pub fn h_dim(g: &GroupTable, p: u64, r: usize) -> Result<usize> {
    h_dim_with(g, p, r, &ResolutionOptions::default())
}

pub fn h_dim_with(g: &GroupTable, p: u64, r: usize, opts: &ResolutionOptions) -> Result<usize> {
    Ok(cohomology_dims(g, p, r, opts)?[r])
}

/// `mu_p` of a group, or a lower bound when the search limit was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MuValue {
    /// `None` is infinity.
    pub value: Option<usize>,
    /// False when only `mu >= value` is known.
    pub exact: bool,
}

impl MuValue {
    pub fn infinity() -> Self {
        MuValue {
            value: None,
            exact: true,
        }
    }

    pub fn exact(v: usize) -> Self {
        MuValue {
            value: Some(v),
            exact: true,
        }
    }

    pub fn at_least(v: usize) -> Self {
        MuValue {
            value: Some(v),
            exact: false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }

    /// Minimum of two values, tracking whether the result is still exact.
    pub fn min(self, other: MuValue) -> MuValue {
        let key = |m: &MuValue| m.value.unwrap_or(usize::MAX);
        match key(&self).cmp(&key(&other)) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal if self.exact => self,
            std::cmp::Ordering::Equal => other,
        }
    }
}

impl fmt::Display for MuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, self.exact) {
            (None, _) => write!(f, "infinity"),
            (Some(v), true) => write!(f, "{v}"),
            (Some(v), false) => write!(f, ">= {v}"),
        }
    }
}

impl Serialize for MuValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MuValue", 2)?;
        match self.value {
            Some(v) => st.serialize_field("value", &v)?,
            None => st.serialize_field("value", "infinity")?,
        }
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

/// Least `r` in `1..=search_limit` with `H^r(G, F_p) != 0`.
///
/// Infinity (exact) when `p` does not divide `|G|`; otherwise an inexact
/// `search_limit + 1` if no such degree was found.
pub fn mu_p(g: &GroupTable, p: u64, search_limit: usize) -> Result<MuValue> {
    mu_p_with(g, p, search_limit, &ResolutionOptions::default())
}

pub fn mu_p_with(g: &GroupTable, p: u64, search_limit: usize, opts: &ResolutionOptions) -> Result<MuValue> {
    crate::matgroup::check_prime(p)?;
    if !g.order().is_multiple_of(p as usize) {
        return Ok(MuValue::infinity());
    }
    opts.check(g, search_limit)?;
    let mut r = Resolver::new(g, p, opts.reverse_pivots);
    for k in 1..=search_limit {
        while r.depth() < k + 1 {
            r.extend();
        }
        if r.cohomology_dim(k) != 0 {
            return Ok(MuValue::exact(k));
        }
    }
    Ok(MuValue::at_least(search_limit + 1))
}

/// `2 [N_G(P) : C_G(P)] - 1` for a Sylow subgroup `P` of order exactly `p`.
pub fn mu_p_formula(g: &MatGroup, p: u64) -> Result<usize> {
    let sy = sylow(g, p)?;
    if sy.order() as u64 != p {
        return Err(Error::Precondition(format!(
            "Sylow {p}-subgroup has order {}, not {p}",
            sy.order()
        )));
    }
    Ok(2 * subgroup_structure(g, &sy)?.nc_index - 1)
}


#[cfg(test)]
mod group_tests {
    use super::*;
    use crate::corpus;

    fn table(gens: Vec<crate::IntMatrix>) -> (MatGroup, GroupTable) {
        let n = gens[0].rows();
        let g = MatGroup::generate(n, &gens, 1000).unwrap();
        let t = GroupTable::from(&g);
        (g, t)
    }

    #[test]
    fn cyclic_of_prime_order_has_periodic_cohomology() {
        for p in [2u64, 3, 5] {
            let g = GroupTable::cyclic(p as usize);
            let res = resolution(&g, p, 6, &ResolutionOptions::default()).unwrap();
            assert_eq!(res.ranks, vec![1; 7]);
            assert!(res.composition_is_zero(&g));
            assert!(res.is_minimal());
            let dims = cohomology_dims(&g, p, 8, &ResolutionOptions::default()).unwrap();
            assert_eq!(dims, vec![1; 9]);
        }
    }

    #[test]
    fn trivial_group() {
        let g = GroupTable::cyclic(1);
        let res = resolution(&g, 2, 3, &ResolutionOptions::default()).unwrap();
        assert_eq!(res.ranks, vec![1, 0, 0, 0]);
        assert_eq!(mu_p(&g, 2, 10).unwrap(), MuValue::infinity());
    }

    #[test]
    fn coprime_order_is_acyclic() {
        let g = GroupTable::cyclic(3);
        let dims = cohomology_dims(&g, 2, 4, &ResolutionOptions::default()).unwrap();
        assert_eq!(dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn s3_at_three() {
        let (_, t) = table(corpus::symmetric_group_generators(3));
        let dims = cohomology_dims(&t, 3, 6, &ResolutionOptions::default()).unwrap();
        assert_eq!(dims, vec![1, 0, 0, 1, 1, 0, 0]);
        let res = resolution(&t, 3, 5, &ResolutionOptions::default()).unwrap();
        assert!(res.composition_is_zero(&t));
        assert_eq!(mu_p(&t, 3, 10).unwrap(), MuValue::exact(3));
    }

    #[test]
    fn klein_four_minimal_ranks() {
        let (_, t) = table(corpus::gamma_generators());
        let res = resolution(&t, 2, 4, &ResolutionOptions::default()).unwrap();
        assert_eq!(res.ranks, vec![1, 2, 3, 4, 5]);
        assert!(res.is_minimal());
        assert!(res.composition_is_zero(&t));
    }

    #[test]
    fn pivot_order_does_not_change_dimensions() {
        let rev = ResolutionOptions {
            reverse_pivots: true,
            ..Default::default()
        };
        for gens in [
            corpus::symmetric_group_generators(3),
            corpus::signed_permutation_generators(2),
            vec![corpus::rotation4()],
        ] {
            let (_, t) = table(gens);
            for p in [2, 3] {
                assert_eq!(
                    cohomology_dims(&t, p, 5, &ResolutionOptions::default()).unwrap(),
                    cohomology_dims(&t, p, 5, &rev).unwrap()
                );
            }
        }
    }

    #[test]
    fn formula_matches_resolution() {
        let cases = [
            (vec![corpus::minus_identity(1)], 2u64),
            (vec![corpus::rotation4()], 2),
            (corpus::symmetric_group_generators(3), 2),
            (corpus::symmetric_group_generators(3), 3),
            (corpus::symmetric_group_generators(4), 3),
            (vec![corpus::rotation6()], 3),
        ];
        for (gens, p) in cases {
            let (g, t) = table(gens);
            let mu = mu_p(&t, p, 10).unwrap();
            if g.p_part(p) == p as usize {
                assert_eq!(mu.value, Some(mu_p_formula(&g, p).unwrap()));
            } else {
                assert!(mu_p_formula(&g, p).is_err());
                // abelian Sylow 2-subgroup with trivial action: H^1 != 0
                assert_eq!(mu, MuValue::exact(1));
            }
        }
    }

    #[test]
    fn bounds_are_reported() {
        let (_, t) = table(corpus::symmetric_group_generators(4));
        let opts = ResolutionOptions {
            max_group_order: 12,
            ..Default::default()
        };
        assert!(matches!(
            resolution(&t, 2, 2, &opts),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(matches!(
            mu_p(&t, 4, 2),
            Err(Error::NotPrime(4))
        ));
    }
}
