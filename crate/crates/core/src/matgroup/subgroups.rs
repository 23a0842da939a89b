use std::collections::{BTreeSet, HashSet};


use super::{greedy_generators, MatGroup, DEFAULT_SUBGROUP_BOUND};
use crate::error::{Error, Result};
use crate::par;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn is_power_of(mut m: usize, p: usize) -> bool {
    while m > 1 && m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

// A subgroup in the parent's index space.
#[derive(Clone, Debug)]
struct Sub {
    members: Vec<usize>,
    gens: Vec<usize>,
}

/// All subgroups of `g`, with the default bound on `|g|`.
pub fn subgroups(g: &MatGroup) -> Result<Vec<MatGroup>> {
    subgroups_bounded(g, DEFAULT_SUBGROUP_BOUND)
}

/// All subgroups, sorted by order and then by their sorted element indices.
/// The list starts with the trivial group and ends with `g` itself.
pub fn subgroups_bounded(g: &MatGroup, bound: usize) -> Result<Vec<MatGroup>> {
    Ok(subgroup_index_sets(g, bound)?
        .into_iter()
        .map(|s| MatGroup::from_parent(g, &s.members, &s.gens))
        .collect())
}

fn subgroup_index_sets(g: &MatGroup, bound: usize) -> Result<Vec<Sub>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            what: "group order for subgroup enumeration",
            bound,
            got: g.order(),
        });
    }
    // Every subgroup is a join of cyclic subgroups.
    let mut cyclic: Vec<Sub> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for x in 0..g.order() {
        let members = g.closure(&[x]);
        if seen.insert(members.clone()) {
            let gens = if x == g.identity_index() { vec![] } else { vec![x] };
            cyclic.push(Sub { members, gens });
        }
    }
    let mut all: Vec<Sub> = cyclic.clone();
    let mut frontier: Vec<Sub> = cyclic.clone();
    while !frontier.is_empty() {
        let joins: Vec<Vec<Sub>> = par::map(&frontier, |h| {
            let mask = {
                let mut m = vec![false; g.order()];
                for &i in &h.members {
                    m[i] = true;
                }
                m
            };
            cyclic
                .iter()
                .filter(|c| c.gens.first().is_some_and(|&x| !mask[x]))
                .map(|c| {
                    let mut gens = h.gens.clone();
                    gens.push(c.gens[0]);
                    Sub {
                        members: g.closure(&gens),
                        gens,
                    }
                })
                .collect()
        });
        let mut next = Vec::new();
        for s in joins.into_iter().flatten() {
            if seen.insert(s.members.clone()) {
                next.push(s.clone());
                all.push(s);
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    for s in &mut all {
        s.gens = greedy_generators(g, &s.members);
    }
    Ok(all)
}

/// A Sylow `p`-subgroup: the first subgroup of full `p`-power order in
/// canonical subgroup order. Groups beyond the enumeration bound fall back to
/// growing a `p`-subgroup inside successive normalizers.
pub fn sylow(g: &MatGroup, p: u64) -> Result<MatGroup> {
    check_prime(p)?;
    let target = g.p_part(p);
    if target == 1 {
        return Ok(MatGroup::from_parent(g, &[g.identity_index()], &[]));
    }
    if g.order() <= DEFAULT_SUBGROUP_BOUND {
        let subs = subgroup_index_sets(g, DEFAULT_SUBGROUP_BOUND)?;
        let s = subs
            .into_iter()
            .find(|s| s.members.len() == target)
            .expect("Sylow subgroups exist");
        return Ok(MatGroup::from_parent(g, &s.members, &s.gens));
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut members = g.closure(&gens);
    while members.len() < target {
        let normalizer = normalizer_indices(g, &members, &gens);
        let step = normalizer
            .into_iter()
            .filter(|x| members.binary_search(x).is_err())
            .find_map(|x| {
                let mut trial = gens.clone();
                trial.push(x);
                let m = g.closure(&trial);
                is_power_of(m.len(), p as usize).then_some((trial, m))
            })
            .expect("a non-Sylow p-subgroup has a larger p-subgroup in its normalizer");
        gens = step.0;
        members = step.1;
    }
    let gens = greedy_generators(g, &members);
    Ok(MatGroup::from_parent(g, &members, &gens))
}

fn normalizer_indices(g: &MatGroup, members: &[usize], gens: &[usize]) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| gens.iter().all(|&h| members.binary_search(&g.conj(x, h)).is_ok()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SubgroupStructure {
    pub normalizer: MatGroup,
    pub centralizer: MatGroup,
    /// `[N_G(H) : C_G(H)]`.
    pub nc_index: usize,
}

/// Normalizer and centralizer of `h` in `g`.
pub fn subgroup_structure(g: &MatGroup, h: &MatGroup) -> Result<SubgroupStructure> {
    let members = g.indices_of(h)?;
    let hgens = greedy_generators(g, &members);
    let norm = normalizer_indices(g, &members, &hgens);
    let cent: Vec<usize> = (0..g.order())
        .filter(|&x| hgens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    let normalizer = MatGroup::from_parent(g, &norm, &greedy_generators(g, &norm));
    let centralizer = MatGroup::from_parent(g, &cent, &greedy_generators(g, &cent));
    Ok(SubgroupStructure {
        nc_index: norm.len() / cent.len(),
        normalizer,
        centralizer,
    })
}

/// `O^p(G)`, generated by the elements of order prime to `p`.
pub fn op_core(g: &MatGroup, p: u64) -> Result<MatGroup> {
    check_prime(p)?;
    let seeds: Vec<usize> = (0..g.order())
        .filter(|&i| !g.element_order(i).is_multiple_of(p as usize))
        .collect();
    let members = g.closure(&seeds);
    debug_assert!(g.order().is_multiple_of(members.len()));
    if !is_power_of(g.order() / members.len(), p as usize) {
        return Err(Error::Precondition(format!(
            "|G|/|O^p(G)| = {} is not a power of {p}",
            g.order() / members.len()
        )));
    }
    let gens = greedy_generators(g, &members);
    Ok(MatGroup::from_parent(g, &members, &gens))
}

/// Conjugacy class label for each subgroup in `subs` (all subgroups of `g`).
/// Labels are the position of the first class member in `subs`.
pub fn subgroup_classes(g: &MatGroup, subs: &[MatGroup]) -> Result<Vec<usize>> {
    let keys: Vec<Vec<usize>> = subs.iter().map(|s| g.indices_of(s)).collect::<Result<_>>()?;
    let mut label = vec![usize::MAX; subs.len()];
    for i in 0..subs.len() {
        if label[i] != usize::MAX {
            continue;
        }
        let conjugates: BTreeSet<Vec<usize>> = (0..g.order())
            .map(|x| {
                let mut c: Vec<usize> = keys[i].iter().map(|&h| g.conj(x, h)).collect();
                c.sort_unstable();
                c
            })
            .collect();
        for j in i..subs.len() {
            if label[j] == usize::MAX && conjugates.contains(&keys[j]) {
                label[j] = i;
            }
        }
    }
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::IntMatrix;
    use crate::matgroup::DEFAULT_MAX_ORDER;

    fn perm(p: &[usize]) -> IntMatrix {
        let n = p.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (j, &i) in p.iter().enumerate() {
            rows[i][j] = 1;
        }
        IntMatrix::from_rows(&rows)
    }

    fn s3() -> MatGroup {
        MatGroup::generate(3, &[perm(&[1, 0, 2]), perm(&[0, 2, 1])], DEFAULT_MAX_ORDER).unwrap()
    }

    fn cyclic(m: &IntMatrix) -> MatGroup {
        MatGroup::generate(m.rows(), std::slice::from_ref(m), DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn subgroup_counts() {
        let z2 = cyclic(&IntMatrix::diag(&[-1, -1, -1]));
        assert_eq!(subgroups(&z2).unwrap().len(), 2);
        let subs = subgroups(&s3()).unwrap();
        assert_eq!(subs.len(), 6);
        assert!(subs[0].is_trivial());
        assert_eq!(subs.last().unwrap(), &s3());
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(subgroups(&cyclic(&rot)).unwrap().len(), 3);
    }

    #[test]
    fn subgroup_bound() {
        let s3 = s3();
        assert!(matches!(
            subgroups_bounded(&s3, 5),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn sylow_examples() {
        let s3 = s3();
        assert_eq!(sylow(&s3, 3).unwrap().order(), 3);
        assert_eq!(sylow(&s3, 2).unwrap().order(), 2);
        let z2 = cyclic(&IntMatrix::diag(&[-1, -1, -1]));
        assert!(sylow(&z2, 5).unwrap().is_trivial());
        assert_eq!(sylow(&z2, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn sylow_fallback_for_large_groups() {
        // Signed permutations of 4 coordinates, order 384 = 2^7 * 3.
        let gens = [perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0]), IntMatrix::diag(&[-1, 1, 1, 1])];
        let b4 = MatGroup::generate(4, &gens, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(sylow(&b4, 2).unwrap().order(), 128);
        assert_eq!(sylow(&b4, 3).unwrap().order(), 3);
    }

    #[test]
    fn structure_examples() {
        let s3 = s3();
        let p = sylow(&s3, 3).unwrap();
        let st = subgroup_structure(&s3, &p).unwrap();
        assert_eq!(st.normalizer, s3);
        assert_eq!(st.centralizer, p);
        assert_eq!(st.nc_index, 2);

        let st = subgroup_structure(&s3, &MatGroup::trivial(3)).unwrap();
        assert_eq!((st.normalizer.order(), st.centralizer.order(), st.nc_index), (6, 6, 1));

        let z = cyclic(&IntMatrix::diag(&[-1, -1]));
        let st = subgroup_structure(&z, &z).unwrap();
        assert_eq!((st.normalizer.order(), st.centralizer.order(), st.nc_index), (2, 2, 1));

        let other = cyclic(&IntMatrix::diag(&[-1, 1]));
        assert_eq!(subgroup_structure(&z, &other).unwrap_err(), Error::NotSubgroup);
    }

    #[test]
    fn op_core_examples() {
        // Z/6 generated by a 2x2 rotation of order 6.
        let r6 = IntMatrix::from_rows(&[vec![1, -1], vec![1, 0]]);
        let c6 = cyclic(&r6);
        assert_eq!(c6.order(), 6);
        assert_eq!(op_core(&c6, 2).unwrap().order(), 3);
        assert_eq!(op_core(&s3(), 3).unwrap().order(), 6);
        let rot = cyclic(&IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]));
        assert!(op_core(&rot, 2).unwrap().is_trivial());
    }

    #[test]
    fn sylow_count_is_one_mod_p() {
        let s4 = MatGroup::generate(
            4,
            &[perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])],
            DEFAULT_MAX_ORDER,
        )
        .unwrap();
        let subs = subgroups(&s4).unwrap();
        assert_eq!(subs.len(), 30);
        for p in [2u64, 3] {
            let part = s4.p_part(p);
            let count = subs.iter().filter(|s| s.order() == part).count();
            assert_eq!(count as u64 % p, 1);
        }
        let labels = subgroup_classes(&s4, &subs).unwrap();
        let classes: BTreeSet<usize> = labels.into_iter().collect();
        assert_eq!(classes.len(), 11);
    }
}
