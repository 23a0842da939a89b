//! Dense linear algebra over a prime field `F_p`, entries held as `u32`.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 31)).contains(&p), "prime out of range");
        Fp { p: p as u32 }
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert_ne!(a, 0, "inverse of zero");
        let mut r = 1u64;
        let mut base = a as u64;
        let mut e = self.p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// `dst -= c * src`
    pub fn axpy(self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        let neg = p - c as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = ((*d as u64 + neg * s as u64) % p) as u32;
            }
        }
    }
}

/// Incrementally built row-echelon basis of a subspace of `F_p^len`.
/// Rows are normalized so each pivot entry is 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fp,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Fp, len: usize) -> Self {
        Echelon {
            field,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                self.field.axpy(v, c, row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        // Keep earlier rows reduced at the new pivot so `reduce` stays one pass.
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                self.field.axpy(row, c, &w);
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

/// Column-major view: `cols[j]` is the image of the j-th basis vector.
pub fn rank_of_columns(field: Fp, len: usize, cols: &[Vec<u32>]) -> usize {
    let mut e = Echelon::new(field, len);
    for c in cols {
        e.insert(c);
    }
    e.dim()
}

/// Basis of `{x : sum_j x_j cols[j] = 0}`, scanning columns in `order`.
/// Each column reduced to zero yields one kernel vector, so the pivot order
/// determines the basis but not its span.
pub fn null_space(field: Fp, len: usize, cols: &[Vec<u32>], order: &[usize]) -> Vec<Vec<u32>> {
    let m = cols.len();
    // (reduced image, combination of original columns producing it)
    let mut rows: Vec<(Vec<u32>, Vec<u32>, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for &j in order {
        let mut img = cols[j].clone();
        debug_assert_eq!(img.len(), len);
        let mut comb = vec![0u32; m];
        comb[j] = 1;
        for (rimg, rcomb, pc) in &rows {
            let c = img[*pc];
            if c != 0 {
                field.axpy(&mut img, c, rimg);
                field.axpy(&mut comb, c, rcomb);
            }
        }
        match img.iter().position(|&x| x != 0) {
            None => kernel.push(comb),
            Some(pc) => {
                let inv = field.inv(img[pc]);
                for x in img.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                rows.push((img, comb, pc));
            }
        }
    }
    kernel
}
