//! Finite p-groups as fully validated multiplication tables.
//!
//! A [`GroupTable`] is an `order x order` table over element indices
//! `0..order` with the identity pinned at index `0`. Construction checks
//! every group law exhaustively (closure, identity, inverses, associativity)
//! and that the order and all element orders are powers of the stated prime,
//! so downstream algorithms never need to re-verify axioms.
//!
//! Subgroups are plain sorted element sets ([`Subgroup`]) produced by
//! generator closure; the structural subgroups (center, derived subgroup,
//! Frattini subgroup, omega_1 of the center) come from their textbook
//! definitions by exhaustive enumeration. Quotients, direct products and
//! central products re-validate their output tables, so any bug in table
//! assembly surfaces as a loud construction error rather than a silent
//! wrong answer.

use thiserror::Error;

/// Which axiom failed when a multiplication table was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupLaw {
    /// A row has the wrong length or an entry is out of range.
    Closure,
    /// No two-sided identity element exists.
    Identity,
    /// Some row does not contain the identity exactly once.
    Inverses,
    /// `(a*b)*c != a*(b*c)` for the witness triple.
    Associativity,
}

/// Errors raised by table validation and subgroup/quotient/product
/// constructions.
#[derive(Debug, Error)]
pub enum GroupError {
    /// The table is not a group; `witness` is the offending triple
    /// (interpretation depends on the law: for `Closure` it is
    /// `(row, col, entry)`, for `Inverses` `(row, zero_count, 0)`,
    /// for `Associativity` the triple `(a, b, c)` itself).
    #[error("not a group: {law:?} fails at witness {witness:?}")]
    NotAGroup {
        law: GroupLaw,
        witness: (usize, usize, usize),
    },
    #[error("order {order} is not a power of {p}")]
    OrderNotPrimePower { order: usize, p: usize },
    #[error("{p} is not a prime")]
    NotPrime { p: usize },
    #[error("element {g} has order {got}, which is not a power of {p}")]
    WrongPrime { g: usize, got: usize, p: usize },
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("subgroup is not normal: conjugate of {n} by {g} lies outside")]
    NotNormal { g: usize, n: usize },
    #[error("cannot combine groups over different primes {left} and {right}")]
    PrimeMismatch { left: usize, right: usize },
    #[error("element {g} is not central")]
    NotCentral { g: usize },
    #[error("identified central elements must both have order {expected}: got orders {left} and {right}")]
    OrderMismatch {
        expected: usize,
        left: usize,
        right: usize,
    },
    #[error("the trivial group has no order-p subgroups")]
    TrivialGroup,
}

/// Trial-division primality check; sufficient for the small primes used here.
pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// If `x == base^k`, returns `Some(k)`.
pub fn log_exact(x: usize, base: usize) -> Option<u32> {
    debug_assert!(base >= 2);
    let mut v = x;
    let mut k = 0;
    while v > 1 {
        if !v.is_multiple_of(base) {
            return None;
        }
        v /= base;
        k += 1;
    }
    if x == 0 {
        None
    } else {
        Some(k)
    }
}

/// A finite p-group given by its full multiplication table.
///
/// Invariants (established by [`GroupTable::new`] and preserved by every
/// constructor in this crate):
/// * `order == p^n` with `p` prime,
/// * index `0` is the identity,
/// * the table satisfies all group axioms,
/// * every element order is a power of `p`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    p: usize,
    n: u32,
    order: usize,
    /// Row-major products: `table[a * order + b] = a * b`.
    table: Vec<u32>,
    /// Precomputed inverses.
    inv: Vec<u32>,
    label: String,
}

/// A subgroup of some [`GroupTable`], stored as its sorted element set
/// together with the generators it was closed from. Equality compares the
/// element sets only.
#[derive(Debug, Clone)]
pub struct Subgroup {
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    /// Sorted element indices; always starts with `0`.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }
    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// The structural subgroups of a p-group, computed exhaustively.
#[derive(Debug, Clone)]
pub struct Structure {
    /// Center `Z(G)`.
    pub center: Subgroup,
    /// Derived subgroup `[G, G]`.
    pub derived: Subgroup,
    /// Frattini subgroup `G^p [G, G]` (for p-groups).
    pub frattini: Subgroup,
    /// `Omega_1(Z(G))`: central elements of order dividing `p`.
    pub omega1_center: Subgroup,
    /// The group exponent (maximal element order; orders are p-powers).
    pub exponent: usize,
}

impl GroupTable {
    /// Validates a multiplication table and builds the group.
    ///
    /// The identity may sit at any index in the input; the constructor
    /// relabels so it lands at index `0`.
    pub fn new(p: usize, rows: &[Vec<usize>], label: &str) -> Result<GroupTable, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime { p });
        }
        let order = rows.len();
        let Some(n) = log_exact(order, p) else {
            return Err(GroupError::OrderNotPrimePower { order, p });
        };

        // Closure: square shape, entries in range.
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::NotAGroup {
                    law: GroupLaw::Closure,
                    witness: (a, row.len(), order),
                });
            }
            for (b, &e) in row.iter().enumerate() {
                if e >= order {
                    return Err(GroupError::NotAGroup {
                        law: GroupLaw::Closure,
                        witness: (a, b, e),
                    });
                }
            }
        }

        // Locate the two-sided identity.
        let identity = (0..order).find(|&e| (0..order).all(|g| rows[e][g] == g && rows[g][e] == g));
        let Some(e) = identity else {
            return Err(GroupError::NotAGroup {
                law: GroupLaw::Identity,
                witness: (0, 0, 0),
            });
        };

        // Relabel so the identity is index 0 (swap the labels 0 <-> e).
        let perm = |g: usize| -> usize {
            if g == e {
                0
            } else if g == 0 {
                e
            } else {
                g
            }
        };
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                table[perm(a) * order + perm(b)] = perm(rows[a][b]) as u32;
            }
        }

        // Inverses: each row must contain the identity exactly once.
        let mut inv = vec![0u32; order];
        for g in 0..order {
            let zeros: Vec<usize> = (0..order).filter(|&h| table[g * order + h] == 0).collect();
            if zeros.len() != 1 {
                return Err(GroupError::NotAGroup {
                    law: GroupLaw::Inverses,
                    witness: (g, zeros.len(), 0),
                });
            }
            inv[g] = zeros[0] as u32;
        }

        // Associativity, exhaustively.
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b] as usize;
                for c in 0..order {
                    let bc = table[b * order + c] as usize;
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(GroupError::NotAGroup {
                            law: GroupLaw::Associativity,
                            witness: (a, b, c),
                        });
                    }
                }
            }
        }

        let g = GroupTable {
            p,
            n,
            order,
            table,
            inv,
            label: label.to_string(),
        };

        // Element orders must be powers of p. (Lagrange makes this automatic
        // once the axioms hold, but it is cheap and guards the invariant
        // directly.)
        for x in 0..order {
            let k = g.ord_of(x);
            if log_exact(k, p).is_none() {
                return Err(GroupError::WrongPrime { g: x, got: k, p });
            }
        }

        Ok(g)
    }

    pub fn p(&self) -> usize {
        self.p
    }
    /// `log_p(order)`.
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn set_label(&mut self, label: &str) {
        self.label = label.to_string();
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }
    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g >= self.order {
            Err(GroupError::IndexOutOfRange {
                index: g,
                order: self.order,
            })
        } else {
            Ok(())
        }
    }

    /// `g^k` by repeated multiplication (k is always small here).
    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    fn ord_of(&self, g: usize) -> usize {
        let mut acc = g;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, g);
            k += 1;
        }
        k
    }

    /// Multiplicative order of `g`.
    pub fn element_order(&self, g: usize) -> Result<usize, GroupError> {
        self.check_index(g)?;
        Ok(self.ord_of(g))
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ai = self.inverse(a);
        let bi = self.inverse(b);
        self.mul(self.mul(ab, ai), bi)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Maximal element order. For p-groups this is the group exponent.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.ord_of(g)).max().unwrap_or(1)
    }

    /// Closure of a generator set under multiplication.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in gens {
            self.check_index(g)?;
        }
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &g in gens {
                let w = self.mul(v, g);
                if !member[w] {
                    member[w] = true;
                    queue.push(w);
                }
            }
        }
        let elements: Vec<usize> = (0..self.order).filter(|&g| member[g]).collect();
        Ok(Subgroup {
            elements,
            generators: gens.to_vec(),
        })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![0],
            generators: vec![],
        }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order).collect(),
            generators: (0..self.order).collect(),
        }
    }

    /// Center, derived subgroup, Frattini subgroup, omega_1 of the center
    /// and the exponent, all by exhaustive enumeration.
    pub fn structural_subgroups(&self) -> Structure {
        let central: Vec<usize> = (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        let center = Subgroup {
            elements: central.clone(),
            generators: central.clone(),
        };

        let mut comms: Vec<usize> = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                comms.push(self.commutator(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        let derived = self
            .subgroup_generated(&comms)
            .expect("commutators are in range");

        let mut frat_gens = comms;
        for g in 0..self.order {
            frat_gens.push(self.pow(g, self.p));
        }
        frat_gens.sort_unstable();
        frat_gens.dedup();
        let frattini = self
            .subgroup_generated(&frat_gens)
            .expect("generators are in range");

        let omega: Vec<usize> = central
            .iter()
            .copied()
            .filter(|&z| self.pow(z, self.p) == 0)
            .collect();
        let omega1_center = Subgroup {
            elements: omega.clone(),
            generators: omega,
        };

        Structure {
            center,
            derived,
            frattini,
            omega1_center,
            exponent: self.exponent(),
        }
    }

    /// Coset representatives and quotient table for a normal subgroup.
    /// Returns the quotient together with the projection `g -> coset index`.
    pub fn quotient_with_map(
        &self,
        nsub: &Subgroup,
    ) -> Result<(GroupTable, Vec<usize>), GroupError> {
        // Normality check.
        for g in 0..self.order {
            for &x in &nsub.elements {
                let conj = self.mul(self.mul(g, x), self.inverse(g));
                if !nsub.contains(conj) {
                    return Err(GroupError::NotNormal { g, n: x });
                }
            }
        }
        // Canonical representative of gN: the minimal element of the coset.
        let rep: Vec<usize> = (0..self.order)
            .map(|g| {
                nsub.elements
                    .iter()
                    .map(|&x| self.mul(g, x))
                    .min()
                    .expect("subgroups are nonempty")
            })
            .collect();
        let mut reps: Vec<usize> = rep.clone();
        reps.sort_unstable();
        reps.dedup();
        // The identity coset contains 0, so its representative is 0 and it
        // sorts first: the quotient identity is index 0 by construction.
        let index_of = |r: usize| reps.binary_search(&r).expect("representative");
        let mut rows = vec![vec![0usize; reps.len()]; reps.len()];
        for (i, &ri) in reps.iter().enumerate() {
            for (j, &rj) in reps.iter().enumerate() {
                rows[i][j] = index_of(rep[self.mul(ri, rj)]);
            }
        }
        let label = format!("{}/N{}", self.label, nsub.order());
        let q = GroupTable::new(self.p, &rows, &label)?;
        let proj: Vec<usize> = (0..self.order).map(|g| index_of(rep[g])).collect();
        Ok((q, proj))
    }

    /// Quotient by a normal subgroup.
    pub fn quotient(&self, nsub: &Subgroup) -> Result<GroupTable, GroupError> {
        Ok(self.quotient_with_map(nsub)?.0)
    }

    /// Direct product, with pairs `(a, b)` indexed as `a * other.order + b`.
    pub fn direct_product(&self, other: &GroupTable) -> Result<GroupTable, GroupError> {
        if self.p != other.p {
            return Err(GroupError::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        let o1 = self.order;
        let o2 = other.order;
        let order = o1 * o2;
        let mut rows = vec![vec![0usize; order]; order];
        for a1 in 0..o1 {
            for b1 in 0..o2 {
                for a2 in 0..o1 {
                    for b2 in 0..o2 {
                        rows[a1 * o2 + b1][a2 * o2 + b2] =
                            self.mul(a1, a2) * o2 + other.mul(b1, b2);
                    }
                }
            }
        }
        let label = format!("{}x{}", self.label, other.label);
        GroupTable::new(self.p, &rows, &label)
    }

    /// Central product: the direct product modulo the anti-diagonal copy of
    /// the identified central order-p elements `z_self` and `z_other`.
    pub fn central_product(
        &self,
        other: &GroupTable,
        z_self: usize,
        z_other: usize,
    ) -> Result<GroupTable, GroupError> {
        self.check_index(z_self)?;
        other.check_index(z_other)?;
        if self.p != other.p {
            return Err(GroupError::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if !(0..self.order).all(|g| self.mul(z_self, g) == self.mul(g, z_self)) {
            return Err(GroupError::NotCentral { g: z_self });
        }
        if !(0..other.order).all(|g| other.mul(z_other, g) == other.mul(g, z_other)) {
            return Err(GroupError::NotCentral { g: z_other });
        }
        let o_left = self.ord_of(z_self);
        let o_right = other.ord_of(z_other);
        if o_left != self.p || o_right != self.p {
            return Err(GroupError::OrderMismatch {
                expected: self.p,
                left: o_left,
                right: o_right,
            });
        }
        let prod = self.direct_product(other)?;
        let gen = z_self * other.order + other.inverse(z_other);
        let anti = prod.subgroup_generated(&[gen])?;
        let (mut q, _) = prod.quotient_with_map(&anti)?;
        q.label = format!("{}*{}", self.label, other.label);
        Ok(q)
    }

    /// All order-p subgroups of the center, in ascending order of their
    /// minimal generator.
    pub fn central_order_p_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if self.order == 1 {
            return Err(GroupError::TrivialGroup);
        }
        let st = self.structural_subgroups();
        let mut out: Vec<Subgroup> = Vec::new();
        for &z in st.center.elements() {
            if z != 0 && self.ord_of(z) == self.p {
                let sub = self.subgroup_generated(&[z])?;
                if !out.contains(&sub) {
                    out.push(sub);
                }
            }
        }
        Ok(out)
    }

    /// A minimal generating set, chosen greedily by ascending element index.
    /// For p-groups its size is the rank of `G / Frattini(G)`.
    pub fn minimal_generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut closure = self.trivial_subgroup();
        for g in 1..self.order {
            if !closure.contains(g) {
                gens.push(g);
                closure = self.subgroup_generated(&gens).expect("indices in range");
                if closure.order() == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Extracts a subgroup as a standalone validated group.
    pub fn subgroup_table(&self, sub: &Subgroup, label: &str) -> Result<GroupTable, GroupError> {
        let pos = |g: usize| sub.elements.binary_search(&g).expect("closed subgroup");
        let k = sub.order();
        let mut rows = vec![vec![0usize; k]; k];
        for (i, &a) in sub.elements.iter().enumerate() {
            for (j, &b) in sub.elements.iter().enumerate() {
                rows[i][j] = pos(self.mul(a, b));
            }
        }
        GroupTable::new(self.p, &rows, label)
    }

    /// All maximal (index-p) subgroups. They are exactly the preimages of
    /// the hyperplanes of the elementary abelian quotient `G / Frattini(G)`.
    pub fn maximal_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if self.order == 1 {
            return Ok(Vec::new());
        }
        let st = self.structural_subgroups();
        let (q, proj) = self.quotient_with_map(&st.frattini)?;

        // Choose a basis of the quotient (elementary abelian of rank d).
        let mut basis: Vec<usize> = Vec::new();
        let mut span = q.trivial_subgroup();
        for g in 1..q.order {
            if !span.contains(g) {
                basis.push(g);
                span = q.subgroup_generated(&basis)?;
                if span.order() == q.order {
                    break;
                }
            }
        }
        let d = basis.len();
        let p = self.p;

        // Coordinates of every quotient element in that basis.
        let mut coords = vec![vec![0u8; d]; q.order];
        let mut exps = vec![0usize; d];
        loop {
            let mut elt = 0usize;
            for (i, &e) in exps.iter().enumerate() {
                elt = q.mul(elt, q.pow(basis[i], e));
            }
            coords[elt] = exps.iter().map(|&e| e as u8).collect();
            // Increment the exponent vector in base p.
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                exps[i] += 1;
                if exps[i] < p {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }

        // Hyperplanes: kernels of nonzero functionals, one per projective
        // representative (first nonzero coefficient equal to 1).
        let mut out = Vec::new();
        let mut func = vec![0usize; d];
        loop {
            // Advance to the next functional vector in base p.
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                func[i] += 1;
                if func[i] < p {
                    break;
                }
                func[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
            let first_nonzero = func.iter().position(|&c| c != 0).expect("nonzero");
            if func[first_nonzero] != 1 {
                continue; // scalar multiple of an earlier functional
            }
            let elements: Vec<usize> = (0..self.order)
                .filter(|&g| {
                    let c = &coords[proj[g]];
                    let dot: usize = c.iter().zip(&func).map(|(&a, &b)| a as usize * b).sum();
                    dot.is_multiple_of(p)
                })
                .collect();
            out.push(Subgroup {
                generators: elements.clone(),
                elements,
            });
        }
        Ok(out)
    }
}
