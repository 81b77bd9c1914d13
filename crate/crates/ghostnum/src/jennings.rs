//! The Jennings (dimension) series of a finite p-group and the nilpotency
//! index `t(G)` of the Jacobson radical of its modular group algebra.
//!
//! The series is `G = Γ_1 ⊇ Γ_2 ⊇ …` with
//!
//! ```text
//! Γ_s = [Γ_(s-1), G] · (Γ_(ceil(s/p)))^p   for s >= 2,
//! ```
//!
//! each quotient `Γ_s / Γ_(s+1)` elementary abelian of rank `d_s`. Jennings'
//! theorem computes the radical's nilpotency index from those ranks:
//!
//! ```text
//! t(G) = 1 + (p - 1) * Σ_s s · d_s.
//! ```
//!
//! Intermediate zero ranks are retained — e.g. the cyclic group of order 8
//! has ranks `[1, 1, 0, 1]` — because the weights `s` matter.
//!
//! [`t_closed_form`] evaluates the classical closed forms (cyclic groups,
//! groups with a cyclic maximal subgroup, elementary abelian groups, groups
//! whose Frattini subgroup has order p) and reports which one applied, so
//! sweeps can cross-check the series computation against independent
//! formulas.

use crate::group::{log_exact, GroupTable, Subgroup};

/// The Jennings series of a group, its ranks, and the nilpotency index.
#[derive(Debug, Clone)]
pub struct JenningsSeries {
    /// `gammas[i]` is `Γ_(i+1)`; the last entry is the trivial subgroup.
    pub gammas: Vec<Subgroup>,
    /// `dims[i]` is `d_(i+1) = log_p [Γ_(i+1) : Γ_(i+2)]`, zeros retained.
    pub dims: Vec<u32>,
    /// `t(G) = 1 + (p-1) Σ s·d_s`.
    pub t: usize,
}

/// Computes the Jennings series by closing commutators and p-th powers.
///
/// Panics if internal sanity checks fail (`Σ d_s = log_p |G|`, and
/// `t >= n(p-1) + 1`); both hold for every group by Jennings' theorem, so a
/// violation would mean a bug in the table or the closure code.
pub fn jennings_series(g: &GroupTable) -> JenningsSeries {
    let p = g.p();
    let mut gammas: Vec<Subgroup> = vec![g.full_subgroup()];
    while !gammas.last().expect("nonempty").is_trivial() {
        let s = gammas.len() + 1; // index of the subgroup being computed
        let mut gens: Vec<usize> = Vec::new();
        for &h in gammas[s - 2].elements() {
            for y in 0..g.order() {
                gens.push(g.commutator(h, y));
            }
        }
        for &x in gammas[s.div_ceil(p) - 1].elements() {
            gens.push(g.pow(x, p));
        }
        gens.sort_unstable();
        gens.dedup();
        let next = g
            .subgroup_generated(&gens)
            .expect("generators are valid element indices");
        debug_assert!(
            next.elements().iter().all(|&e| gammas[s - 2].contains(e)),
            "series must descend"
        );
        gammas.push(next);
        assert!(
            gammas.len() <= g.order() + 1,
            "dimension series failed to terminate for {}",
            g.label()
        );
    }

    let mut dims = Vec::with_capacity(gammas.len() - 1);
    for w in gammas.windows(2) {
        let ratio = w[0].order() / w[1].order();
        dims.push(log_exact(ratio, p).expect("successive quotients are p-powers"));
    }
    let t = 1 + (p - 1)
        * dims
            .iter()
            .enumerate()
            .map(|(i, &d)| (i + 1) * d as usize)
            .sum::<usize>();

    let n = g.n() as usize;
    assert_eq!(
        dims.iter().map(|&d| d as usize).sum::<usize>(),
        n,
        "ranks must sum to log_p |G| for {}",
        g.label()
    );
    assert!(
        t > n * (p - 1),
        "nilpotency index below the universal floor for {}",
        g.label()
    );
    JenningsSeries { gammas, dims, t }
}

/// The nilpotency index `t(G)` of the radical, via the Jennings series.
pub fn t_index(g: &GroupTable) -> usize {
    jennings_series(g).t
}

/// Which closed form produced a value of `t(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormSource {
    /// `t(C_(p^n)) = p^n`.
    Cyclic,
    /// Noncyclic with an element of order `p^(n-1)`: `t = p^(n-1) + p - 1`.
    CyclicMaximal,
    /// `t((C_p)^n) = n(p-1) + 1`.
    ElementaryAbelian,
    /// `|Φ(G)| = p`: `t = (n+1)(p-1)+1` for exponent p, and
    /// `t = (p+n-1)(p-1)+1` for exponent p².
    FrattiniOrderP,
}

impl std::fmt::Display for ClosedFormSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClosedFormSource::Cyclic => "cyclic",
            ClosedFormSource::CyclicMaximal => "cyclic-maximal",
            ClosedFormSource::ElementaryAbelian => "elementary-abelian",
            ClosedFormSource::FrattiniOrderP => "frattini-order-p",
        })
    }
}

/// Closed-form value of `t(G)` where a classical formula applies, with its
/// source. Branches are tried in a fixed order (cyclic, cyclic-maximal,
/// elementary abelian, Frattini of order p); where several apply their
/// values agree, so the order only affects the reported source.
pub fn t_closed_form(g: &GroupTable) -> Option<(usize, ClosedFormSource)> {
    let p = g.p();
    let n = g.n();
    let order = g.order();
    let exponent = g.exponent();

    if exponent == order {
        return Some((order, ClosedFormSource::Cyclic));
    }
    // Noncyclic from here on (a p-group is cyclic iff exponent = order).
    if n >= 2 && exponent == order / p {
        return Some((order / p + p - 1, ClosedFormSource::CyclicMaximal));
    }
    if g.is_abelian() && exponent == p {
        return Some((n as usize * (p - 1) + 1, ClosedFormSource::ElementaryAbelian));
    }
    let frattini = g.structural_subgroups().frattini;
    if frattini.order() == p {
        // |Φ(G)| = p forces exponent p or p².
        let t = if exponent == p {
            (n as usize + 1) * (p - 1) + 1
        } else {
            debug_assert_eq!(exponent, p * p);
            (p + n as usize - 1) * (p - 1) + 1
        };
        return Some((t, ClosedFormSource::FrattiniOrderP));
    }
    None
}
