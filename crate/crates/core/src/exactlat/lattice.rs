use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::snf::{kernel_basis, snf};
use super::IntMatrix;
use crate::error::{Error, Result};

/// Upper bound on the order of the finite quotient scanned by [`covers`].
pub const COVER_QUOTIENT_LIMIT: usize = 10_000_000;

/// A subgroup of `Z^n`, stored by its canonical column Hermite basis:
/// lower-triangular echelon, positive pivots, and entries left of each pivot
/// reduced into `[0, pivot)`. Two sublattices are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
    saturated: bool,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column Hermite form of the span of `cols`; returns basis columns and pivot rows.
pub(crate) fn column_hnf(n: usize, cols: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut cols: Vec<Vec<BigInt>> = cols
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..n {
        if k == cols.len() {
            break;
        }
        for j in k + 1..cols.len() {
            if cols[j][i].is_zero() {
                continue;
            }
            let a = cols[k][i].clone();
            let b = cols[j][i].clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let bg = &b / &g;
            let ag = &a / &g;
            let new_k: Vec<BigInt> = cols[k]
                .iter()
                .zip(&cols[j])
                .map(|(x, y)| &s * x + &t * y)
                .collect();
            let new_j: Vec<BigInt> = cols[k]
                .iter()
                .zip(&cols[j])
                .map(|(x, y)| &bg * x - &ag * y)
                .collect();
            cols[k] = new_k;
            cols[j] = new_j;
        }
        if cols[k][i].is_zero() {
            continue;
        }
        if cols[k][i].is_negative() {
            for x in cols[k].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = cols[k][i].clone();
        for j in 0..k {
            let q = cols[j][i].div_floor(&pivot);
            if !q.is_zero() {
                let (left, right) = cols.split_at_mut(k);
                for (x, y) in left[j].iter_mut().zip(&right[0]) {
                    *x -= &q * y;
                }
            }
        }
        pivots.push(i);
        k += 1;
    }
    cols.truncate(k);
    (cols, pivots)
}

impl Sublattice {
    /// The sublattice generated by the given vectors (not saturated).
    pub fn span(n: usize, generators: &[Vec<BigInt>]) -> Result<Self> {
        for g in generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let (cols, pivots) = column_hnf(n, generators);
        let basis = IntMatrix::from_columns(n, &cols);
        let saturated = snf(&basis).diagonal().iter().all(|d| d.is_zero() || d.is_one());
        Ok(Sublattice {
            ambient_rank: n,
            basis,
            pivots,
            saturated,
        })
    }

    /// Sublattice generated by the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Self {
        Self::span(m.rows(), &m.columns()).expect("columns have matching length")
    }

    pub fn full(n: usize) -> Self {
        Self::from_columns(&IntMatrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_columns(&IntMatrix::zeros(n, 0))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis columns in column Hermite form (`n` rows, `rank` columns).
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Coordinates of `v` in the Hermite basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (k, &row) in self.pivots.iter().enumerate() {
            if rest[..row].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let pivot = self.basis.get(row, k);
            let (q, r) = rest[row].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, x) in rest.iter_mut().enumerate().skip(row) {
                    *x -= &q * self.basis.get(i, k);
                }
            }
            coords.push(q);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subset_of(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.basis_vectors().iter().all(|c| other.contains(c))
    }

    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice> {
        let n = self.ambient_rank;
        if other.ambient_rank != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.ambient_rank,
            });
        }
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Sublattice::zero(n));
        }
        let joint = IntMatrix::hstack(n, &[self.basis.clone(), -&other.basis])?;
        let ker = kernel_basis(&joint);
        let r1 = self.rank();
        let gens: Vec<Vec<BigInt>> = ker
            .columns()
            .iter()
            .map(|c| self.basis.mul_vec(&c[..r1]))
            .collect();
        Sublattice::span(n, &gens)
    }

    /// Smallest saturated sublattice containing `self`: `(self ⊗ Q) ∩ Z^n`.
    pub fn saturation(&self) -> Sublattice {
        let n = self.ambient_rank;
        if self.saturated {
            return self.clone();
        }
        let f = snf(&self.basis);
        let r = f.rank();
        let u_inv = f.u.inverse_unimodular().expect("snf transform is unimodular");
        let gens: Vec<Vec<BigInt>> = (0..r).map(|j| u_inv.column(j)).collect();
        Sublattice::span(n, &gens).expect("dimensions agree")
    }

    /// Invariant factors of `Z^n / self`: the free rank and the torsion
    /// coefficients greater than one, in divisibility order.
    pub fn quotient_invariants(&self) -> QuotientInvariants {
        let f = snf(&self.basis);
        let torsion = f
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        QuotientInvariants {
            free_rank: self.ambient_rank - f.rank(),
            torsion,
        }
    }

    /// `[self : sub]` for a sublattice of equal rank.
    pub fn index_of(&self, sub: &Sublattice) -> Result<BigInt> {
        if !sub.is_subset_of(self) {
            return Err(Error::NotContained);
        }
        if sub.rank() != self.rank() {
            return Err(Error::Precondition("index of a sublattice of smaller rank is infinite".into()));
        }
        let coords = self.coordinates_matrix(sub);
        Ok(coords.det()?.abs())
    }

    // Columns: coordinates of each basis vector of `sub` in the basis of `self`.
    fn coordinates_matrix(&self, sub: &Sublattice) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = sub
            .basis_vectors()
            .iter()
            .map(|v| self.coordinates(v).expect("sub is contained"))
            .collect();
        IntMatrix::from_columns(self.rank(), &cols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::Error as _;
    let ints: Option<Vec<i64>> = v.iter().map(ToPrimitive::to_i64).collect();
    ints.ok_or_else(|| S::Error::custom("integer exceeds 64 bits"))?
        .serialize(s)
}

fn check_square(n: usize, elems: &[IntMatrix]) -> Result<()> {
    for e in elems {
        if e.rows() != n || e.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if e.rows() != n { e.rows() } else { e.cols() },
            });
        }
    }
    Ok(())
}

/// `{a ∈ Z^n : h a = a for all h}`; always saturated.
pub fn fixed_lattice(n: usize, elems: &[IntMatrix]) -> Result<Sublattice> {
    check_square(n, elems)?;
    if elems.is_empty() {
        return Ok(Sublattice::full(n));
    }
    let stacked = IntMatrix::vstack(&elems.iter().map(IntMatrix::minus_identity).collect::<Vec<_>>())?;
    Ok(Sublattice::from_columns(&kernel_basis(&stacked)))
}

/// The lattice generated by all `h a - a`, i.e. by the columns of every `h - I`.
/// Not saturated in general.
pub fn moved_lattice(n: usize, elems: &[IntMatrix]) -> Result<Sublattice> {
    check_square(n, elems)?;
    let gens: Vec<Vec<BigInt>> = elems
        .iter()
        .flat_map(|h| h.minus_identity().columns())
        .collect();
    Sublattice::span(n, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub covered: bool,
    /// A point of the ambient lattice outside every part, when not covered.
    pub witness: Option<Vec<BigInt>>,
}

/// Decides whether the union of `parts` equals `ambient` as a set.
///
/// Parts of smaller rank have density zero and cannot help complete a cover,
/// so only full-rank parts are kept; they all contain their common
/// intersection `K`, which has finite index, and the question reduces to the
/// finite group `ambient / K`.
pub fn covers(ambient: &Sublattice, parts: &[Sublattice]) -> Result<Cover> {
    for part in parts {
        if !part.is_subset_of(ambient) {
            return Err(Error::NotContained);
        }
    }
    let full: Vec<&Sublattice> = parts.iter().filter(|p| p.rank() == ambient.rank()).collect();
    if full.contains(&ambient) {
        return Ok(Cover {
            covered: true,
            witness: None,
        });
    }
    if !full.is_empty() {
        let mut k = full[0].clone();
        for p in &full[1..] {
            k = k.intersect(p)?;
        }
        // Hermite form of K in ambient coordinates is square lower-triangular,
        // so 0 <= c_i < d_i enumerates coset representatives.
        let coords = ambient.coordinates_matrix(&k);
        let (hcols, _) = column_hnf(ambient.rank(), &coords.columns());
        let moduli: Vec<usize> = (0..ambient.rank())
            .map(|i| hcols[i][i].to_usize().unwrap_or(usize::MAX))
            .collect();
        let index = moduli
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if index > COVER_QUOTIENT_LIMIT {
            return Err(Error::BoundExceeded {
                what: "covering quotient order",
                bound: COVER_QUOTIENT_LIMIT,
                got: index,
            });
        }
        let mut c = vec![0usize; moduli.len()];
        let mut all_covered = true;
        'scan: loop {
            let coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            let v = ambient.basis.mul_vec(&coeffs);
            if !full.iter().any(|p| p.contains(&v)) {
                all_covered = false;
                break;
            }
            for i in 0..c.len() {
                c[i] += 1;
                if c[i] < moduli[i] {
                    continue 'scan;
                }
                c[i] = 0;
            }
            break;
        }
        if all_covered {
            return Ok(Cover {
                covered: true,
                witness: None,
            });
        }
    }
    Ok(Cover {
        covered: false,
        witness: Some(smallest_uncovered(ambient, parts)),
    })
}

const NORM_SEARCH_POINTS: usize = 4_000_000;

/// Minimal-norm point of `ambient` outside every part. The caller has
/// established that one exists. Ties are broken by smaller L1 norm, then by
/// descending lexicographic order (so `e_1` precedes `-e_1`).
fn smallest_uncovered(ambient: &Sublattice, parts: &[Sublattice]) -> Vec<BigInt> {
    let n = ambient.ambient_rank;
    // Rows annihilating the ambient lattice; a cheap necessary test for membership.
    let annihilator: Option<Vec<Vec<i64>>> = kernel_basis(&ambient.basis.transpose())
        .transpose()
        .to_i64_rows();
    let may_contain = |v: &[i64]| match &annihilator {
        Some(rows) => rows.iter().all(|r| {
            r.iter()
                .zip(v)
                .try_fold(0i64, |acc, (a, b)| a.checked_mul(*b).and_then(|t| acc.checked_add(t)))
                .is_none_or(|s| s == 0)
        }),
        None => true,
    };
    let ok = |v: &[BigInt]| ambient.contains(v) && !parts.iter().any(|p| p.contains(v));
    let mut radius: i64 = 0;
    loop {
        let side = (2 * radius + 1) as usize;
        if side.checked_pow(n as u32).is_none_or(|s| s > NORM_SEARCH_POINTS) {
            break;
        }
        let mut found: Vec<Vec<i64>> = shell(n, radius)
            .into_iter()
            .filter(|v| may_contain(v) && ok(&to_big(v)))
            .collect();
        if !found.is_empty() {
            found.sort_by(|a, b| {
                let l1 = |v: &Vec<i64>| v.iter().map(|x| x.abs()).sum::<i64>();
                l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
            });
            return to_big(&found[0]);
        }
        radius += 1;
    }
    // Very sparse ambient lattices: walk coefficient vectors instead.
    let r = ambient.rank();
    let mut radius: i64 = 0;
    loop {
        for c in shell(r, radius) {
            let v = ambient.basis.mul_vec(&to_big(&c));
            if !parts.iter().any(|p| p.contains(&v)) {
                return v;
            }
        }
        radius += 1;
    }
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// All integer vectors of length `n` with infinity norm exactly `radius`.
fn shell(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-radius; n];
    if n == 0 {
        return if radius == 0 { vec![vec![]] } else { out };
    }
    loop {
        if v.iter().any(|x| x.abs() == radius) {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            v[i] += 1;
            if v[i] <= radius {
                break;
            }
            v[i] = -radius;
            i += 1;
        }
    }
}
