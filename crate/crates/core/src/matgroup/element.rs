use serde::Serialize;

use super::MatGroup;
use crate::error::{Error, Result};
use crate::exactlat::{rank, IntMatrix};

/// Power bound used when computing the order of a single matrix.
pub const ELEMENT_ORDER_BOUND: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementProfile {
    pub order: usize,
    /// `rank(g - I)`.
    pub rank_drop: usize,
    pub is_reflection: bool,
    pub is_bireflection: bool,
}

impl ElementProfile {
    fn new(order: usize, rank_drop: usize) -> Self {
        ElementProfile {
            order,
            rank_drop,
            is_reflection: rank_drop <= 1,
            is_bireflection: rank_drop <= 2,
        }
    }
}

pub fn classify_element(g: &IntMatrix) -> Result<ElementProfile> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let mut order = 1;
    let mut x = g.clone();
    while !x.is_identity() {
        if order >= ELEMENT_ORDER_BOUND {
            return Err(Error::InfiniteOrder {
                bound: ELEMENT_ORDER_BOUND,
            });
        }
        x = &x * g;
        order += 1;
    }
    Ok(ElementProfile::new(order, rank(&g.minus_identity())))
}

/// No non-identity element has eigenvalue 1, i.e. `rank(h - I) = n` for all `h != 1`.
pub fn is_fixed_point_free(h: &MatGroup) -> bool {
    let n = h.n();
    (0..h.order())
        .filter(|&i| i != h.identity_index())
        .all(|i| rank(&h.element(i).minus_identity()) == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::DEFAULT_MAX_ORDER;

    #[test]
    fn profiles() {
        let t = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let p = classify_element(&t).unwrap();
        assert_eq!((p.order, p.rank_drop, p.is_reflection), (2, 1, true));

        let p = classify_element(&IntMatrix::diag(&[-1, -1])).unwrap();
        assert_eq!(p.rank_drop, 2);
        assert!(p.is_bireflection && !p.is_reflection);

        let p = classify_element(&IntMatrix::diag(&[-1, -1, -1])).unwrap();
        assert_eq!(p.rank_drop, 3);
        assert!(!p.is_bireflection && !p.is_reflection);

        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(matches!(
            classify_element(&shear),
            Err(Error::InfiniteOrder { .. })
        ));
    }

    #[test]
    fn fixed_point_freeness() {
        for n in 1..=4 {
            let minus = IntMatrix::diag(&vec![-1; n]);
            let g = MatGroup::generate(n, &[minus], DEFAULT_MAX_ORDER).unwrap();
            assert!(is_fixed_point_free(&g));
        }
        let g1 = IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let g = MatGroup::generate(3, &[g1], DEFAULT_MAX_ORDER).unwrap();
        assert!(!is_fixed_point_free(&g));
        assert!(is_fixed_point_free(&MatGroup::trivial(3)));
    }
}
