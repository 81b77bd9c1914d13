//! An independent oracle for the nilpotency index of the Jacobson radical.
//!
//! For a finite p-group G and the field k = GF(p), the radical of the group
//! algebra kG is the augmentation ideal I (the kernel of the coefficient-sum
//! map). This module computes the powers I ⊇ I² ⊇ … directly, by linear
//! algebra over GF(p) on the group-element basis, and reports the least t
//! with I^t = 0.
//!
//! Nothing here touches the dimension-series machinery: the only inputs are
//! the multiplication table and row reduction. That makes
//! [`nilpotency_index_radical`] a genuinely independent cross-check for the
//! series-based computation of t(G).
//!
//! Right multiplication by a basis element e_g permutes coordinates
//! (`(v·e_g)[h·g] = v[h]`), so products with `e_g − e_1` are cheap. One
//! honest shortcut keeps large sweeps fast: if the current subspace V is
//! verified to satisfy `V·e_s ⊆ V` for every s in a generating set S of G,
//! then `V·I = Σ_{s∈S} V·(e_s − e_1)`, because `e_{gh} − 1 =
//! e_g(e_h − 1) + (e_g − 1)` lets induction on word length rewrite every
//! `V·(e_g − 1)`. The invariance is checked, never assumed; if it fails the
//! step falls back to multiplying by every nonidentity element.

use crate::group::GroupTable;
use thiserror::Error;

/// Errors from subspace arithmetic and the oracle driver.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RadicalError {
    /// A vector's length does not match the ambient dimension.
    #[error("vector has length {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Two subspaces live over different primes or ambient dimensions.
    #[error("subspace shapes differ: GF({p_left})^{left} vs GF({p_right})^{right}")]
    ShapeMismatch {
        p_left: usize,
        left: usize,
        p_right: usize,
        right: usize,
    },
    /// The group is larger than the configured cap for exhaustive work.
    #[error("order {order} exceeds the size cap {cap}")]
    SizeCapExceeded { order: usize, cap: usize },
}

/// A subspace of GF(p)^ambient kept in reduced row echelon form.
///
/// Rows have strictly increasing pivot columns, pivots are 1, and every
/// pivot column is zero in all other rows — so `rows()` is a canonical
/// basis: two equal subspaces produce identical row lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSubspace {
    p: usize,
    ambient: usize,
    rows: Vec<Vec<u8>>,
}

impl FpSubspace {
    /// The zero subspace of GF(p)^ambient.
    pub fn zero(p: usize, ambient: usize) -> FpSubspace {
        assert!((2..256).contains(&p), "prime must fit in u8 arithmetic");
        FpSubspace {
            p,
            ambient,
            rows: Vec::new(),
        }
    }

    /// Spans the given vectors.
    pub fn from_rows<I>(p: usize, ambient: usize, rows: I) -> Result<FpSubspace, RadicalError>
    where
        I: IntoIterator,
        I::Item: AsRef<[u8]>,
    {
        let mut s = FpSubspace::zero(p, ambient);
        for r in rows {
            s.insert(r.as_ref())?;
        }
        Ok(s)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The canonical (RREF) basis rows.
    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    fn check_len(&self, v: &[u8]) -> Result<(), RadicalError> {
        if v.len() != self.ambient {
            return Err(RadicalError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        Ok(())
    }

    fn inv_mod_p(&self, a: usize) -> usize {
        debug_assert!(!a.is_multiple_of(self.p));
        (1..self.p)
            .find(|&b| (a * b) % self.p == 1)
            .expect("nonzero residues are invertible mod a prime")
    }

    /// Reduces `v` against the current rows in place; returns the pivot
    /// column if a nonzero remainder survives.
    fn reduce(&self, v: &mut [u8]) -> Option<usize> {
        let p = self.p;
        for row in &self.rows {
            let c = pivot_of(row).expect("stored rows are nonzero");
            let coeff = v[c] as usize;
            if coeff != 0 {
                let factor = p - coeff; // v += factor * row clears column c
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = ((*vi as usize + factor * *ri as usize) % p) as u8;
                }
            }
        }
        v.iter().position(|&x| x != 0)
    }

    /// Adds a vector to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> Result<bool, RadicalError> {
        self.check_len(v)?;
        debug_assert!(v.iter().all(|&x| (x as usize) < self.p));
        let mut w = v.to_vec();
        let Some(c) = self.reduce(&mut w) else {
            return Ok(false);
        };
        // Normalize the pivot to 1 and clear column c in the other rows.
        let p = self.p;
        let inv = self.inv_mod_p(w[c] as usize);
        for x in w.iter_mut() {
            *x = ((*x as usize * inv) % p) as u8;
        }
        for row in &mut self.rows {
            let coeff = row[c] as usize;
            if coeff != 0 {
                let factor = p - coeff;
                for (ri, wi) in row.iter_mut().zip(&w) {
                    *ri = ((*ri as usize + factor * *wi as usize) % p) as u8;
                }
            }
        }
        let at = self
            .rows
            .partition_point(|row| pivot_of(row).expect("nonzero") < c);
        self.rows.insert(at, w);
        Ok(true)
    }

    /// Membership test.
    pub fn contains(&self, v: &[u8]) -> Result<bool, RadicalError> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        Ok(self.reduce(&mut w).is_none())
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &FpSubspace) -> Result<bool, RadicalError> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(RadicalError::ShapeMismatch {
                p_left: self.p,
                left: self.ambient,
                p_right: other.p,
                right: other.ambient,
            });
        }
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn pivot_of(row: &[u8]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// The augmentation ideal of kG: the span of `e_g − e_1` for g ≠ 1.
pub fn augmentation_ideal(g: &GroupTable) -> FpSubspace {
    let p = g.p();
    let order = g.order();
    let mut s = FpSubspace::zero(p, order);
    for x in 1..order {
        let mut v = vec![0u8; order];
        v[0] = (p - 1) as u8;
        v[x] = 1;
        s.insert(&v).expect("ambient dimensions match");
    }
    s
}

/// One radical power step: given V ⊆ kG, returns V·I.
///
/// Uses the verified generating-set shortcut described in the module docs
/// when V is right-invariant under a minimal generating set of G, and the
/// full multiplier set otherwise. Both paths compute exactly V·I.
pub fn ideal_power_step(g: &GroupTable, v: &FpSubspace) -> Result<FpSubspace, RadicalError> {
    let p = g.p();
    let order = g.order();
    if v.p() != p || v.ambient_dim() != order {
        return Err(RadicalError::ShapeMismatch {
            p_left: v.p(),
            left: v.ambient_dim(),
            p_right: p,
            right: order,
        });
    }

    let right_mul = |r: &[u8], s: usize| -> Vec<u8> {
        let mut w = vec![0u8; order];
        for h in 0..order {
            w[g.mul(h, s)] = r[h];
        }
        w
    };

    let gens = g.minimal_generating_set();
    let invariant = 'check: {
        for r in v.rows() {
            for &s in &gens {
                if !v.contains(&right_mul(r, s))? {
                    break 'check false;
                }
            }
        }
        true
    };
    let multipliers: Vec<usize> = if invariant {
        gens
    } else {
        (1..order).collect()
    };

    let mut out = FpSubspace::zero(p, order);
    for r in v.rows() {
        for &s in &multipliers {
            // r · (e_s − e_1)
            let mut w = right_mul(r, s);
            for (wi, ri) in w.iter_mut().zip(r) {
                *wi = ((*wi as usize + (p - *ri as usize)) % p) as u8;
            }
            out.insert(&w)?;
        }
    }
    Ok(out)
}

/// The least t with I^t = 0, computed purely by linear algebra.
///
/// `cap` bounds the group order; the computation is cubic-ish in the order
/// per power step, with up to t steps.
pub fn nilpotency_index_radical(g: &GroupTable, cap: usize) -> Result<usize, RadicalError> {
    if g.order() > cap {
        return Err(RadicalError::SizeCapExceeded {
            order: g.order(),
            cap,
        });
    }
    let mut v = augmentation_ideal(g);
    let mut t = 1usize;
    while v.dim() > 0 {
        let next = ideal_power_step(g, &v)?;
        assert!(
            next.dim() < v.dim(),
            "radical powers must strictly descend for {}",
            g.label()
        );
        v = next;
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_of_order, GroupSpec};
    use crate::jennings::t_index;

    fn build(s: &str) -> GroupTable {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn rref_rows_are_canonical() {
        let a = FpSubspace::from_rows(
            3,
            4,
            [vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![2, 1, 1, 2]],
        )
        .unwrap();
        let b = FpSubspace::from_rows(
            3,
            4,
            [vec![2, 1, 1, 2], vec![1, 2, 0, 1], vec![0, 2, 2, 0]],
        )
        .unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a, b);
        // Pivots strictly increase and pivot columns are cleared elsewhere.
        for (i, r) in a.rows().iter().enumerate() {
            let c = r.iter().position(|&x| x != 0).unwrap();
            assert_eq!(r[c], 1);
            for (j, other) in a.rows().iter().enumerate() {
                if i != j {
                    assert_eq!(other[c], 0);
                }
            }
        }
    }

    #[test]
    fn insert_reports_dimension_growth() {
        let mut s = FpSubspace::zero(2, 3);
        assert!(s.insert(&[1, 1, 0]).unwrap());
        assert!(s.insert(&[0, 1, 1]).unwrap());
        assert!(!s.insert(&[1, 0, 1]).unwrap()); // the sum of the first two
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 0, 1]).unwrap());
        assert!(!s.contains(&[1, 0, 0]).unwrap());
    }

    #[test]
    fn shape_errors() {
        let mut s = FpSubspace::zero(2, 3);
        assert_eq!(
            s.insert(&[1, 1]).unwrap_err(),
            RadicalError::DimensionMismatch {
                expected: 3,
                got: 2
            }
        );
        let other = FpSubspace::zero(3, 3);
        assert!(matches!(
            s.is_subspace_of(&other).unwrap_err(),
            RadicalError::ShapeMismatch { .. }
        ));
    }

    #[test]
    fn cyclic_four_power_dimensions() {
        let g = build("C(4)");
        let mut v = augmentation_ideal(&g);
        let mut dims = vec![v.dim()];
        while v.dim() > 0 {
            v = ideal_power_step(&g, &v).unwrap();
            dims.push(v.dim());
        }
        assert_eq!(dims, vec![3, 2, 1, 0]); // dim I^s = 4 - s
    }

    #[test]
    fn klein_four_radical_square_is_the_socle() {
        let g = build("EA(2,2)");
        let i1 = augmentation_ideal(&g);
        let i2 = ideal_power_step(&g, &i1).unwrap();
        let i3 = ideal_power_step(&g, &i2).unwrap();
        assert_eq!((i1.dim(), i2.dim(), i3.dim()), (3, 1, 0));
        assert!(i2.is_subspace_of(&i1).unwrap());
        assert!(!i1.is_subspace_of(&i2).unwrap());
        // I² is spanned by the sum of all four basis elements.
        assert_eq!(i2.rows(), &[vec![1, 1, 1, 1]]);
    }

    #[test]
    fn oracle_matches_the_series_on_small_catalogs() {
        for (p, max_n) in [(2usize, 4u32), (3, 3), (5, 2)] {
            for n in 0..=max_n {
                for (spec, table) in catalog_of_order(p, n, 1 << 30).unwrap() {
                    let by_series = t_index(&table);
                    let by_radical = nilpotency_index_radical(&table, 1 << 30).unwrap();
                    assert_eq!(by_radical, by_series, "oracle disagreement for {spec}");
                }
            }
        }
    }

    #[test]
    fn quaternion_eight_has_index_five() {
        assert_eq!(nilpotency_index_radical(&build("Q(8)"), 256).unwrap(), 5);
    }

    #[test]
    fn trivial_group_has_index_one() {
        let c2 = build("C(2)");
        let trivial = c2.quotient(&c2.full_subgroup()).unwrap();
        assert_eq!(nilpotency_index_radical(&trivial, 256).unwrap(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            nilpotency_index_radical(&build("C(8)"), 4).unwrap_err(),
            RadicalError::SizeCapExceeded { order: 8, cap: 4 }
        );
    }
}
