//! The stable module category of a cyclic `p`-group, made concrete.
//!
//! Over `k[x]/(x^m)` with `k` the prime field of characteristic `p` and
//! `m = p^j`, every finite-dimensional module is a direct sum of Jordan
//! blocks `J_a = k[x]/(x^a)` with `1 <= a <= m`, and `J_m` is the unique
//! indecomposable projective.  This module represents such sums explicitly
//! ([`JordanModule`]), represents module maps as matrices checked for
//! `x`-equivariance ([`ModuleMap`]), and computes the Tate cohomology data
//! needed to recognise ghosts: maps that vanish on Tate cohomology in every
//! degree.
//!
//! Concretely, writing `x = g - 1` for a generator `g` of the cyclic group,
//! the norm element is `x^{m-1}`, so for a nonfull block `J_a` (`a < m`):
//!
//! * even Tate degrees are computed by the socle `x^{a-1}` of each nonfull
//!   block (invariants modulo norms), and
//! * odd Tate degrees are computed by the top `x^0` of each nonfull block
//!   (the norm kernel modulo `x`-multiples),
//!
//! each contributing one dimension; full blocks contribute nothing.  Tate
//! cohomology is 2-periodic, so those two corners decide every degree.  The
//! induced map of a [`ModuleMap`] in a given degree is therefore a literal
//! corner extraction from its matrix ([`ModuleMap::induced_tate_map`]).
//!
//! A map is *stably trivial* when it factors through a projective module.
//! For a single block pair `J_a -> J_b` the equivariant maps are the
//! polynomials `1 -> x^u` with `max(b-a,0) <= u <= b-1`, of which exactly
//! those with `u >= m-a` factor through `J_m`; stable equality is
//! coefficientwise comparison below that cutoff.  The chain machinery at the
//! bottom of the module composes ghosts and certifies when a composition is
//! still stably nontrivial, which bounds the ghost number of the cyclic
//! group algebra from below ([`certified_lower_bound`]).

use serde::Serialize;
use thiserror::Error;

use crate::radical::FpSubspace;

/// Errors from stable-module computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StmodError {
    /// The modulus must be `p^j >= 2` for a prime `p`.
    #[error("modulus {m} is not a prime power (need m = p^j with p prime, j >= 1)")]
    InvalidModulus { m: usize },
    /// The modulus is too large for exhaustive desk-scale linear algebra.
    #[error("modulus {m} exceeds the desk-scale cap {cap} for p = {p}")]
    DeskScaleExceeded { m: usize, p: usize, cap: usize },
    /// A Jordan block size outside `1..=m`.
    #[error("block size {size} must lie in 1..={m}")]
    InvalidBlock { size: usize, m: usize },
    /// A matrix whose shape does not match the modules it is supposed to connect.
    #[error("matrix is {rows}x{cols} but a map between these modules needs {want_rows}x{want_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    /// Source and target (or two maps in a composition) live over different rings.
    #[error("modulus mismatch: x^{left} = 0 on one side, x^{right} = 0 on the other")]
    ModulusMismatch { left: usize, right: usize },
    /// The matrix does not commute with multiplication by `x`.
    #[error("matrix does not commute with the x-action, so it is not a module map")]
    NotEquivariant,
    /// Two maps whose middle modules disagree cannot be composed.
    #[error("maps do not compose: the first ends at J{left:?} but the second starts at J{right:?}")]
    NotComposable { left: Vec<usize>, right: Vec<usize> },
    /// The chain search ran out of budget before deciding the question.
    #[error("search budget exhausted after exploring {explored} partial chains")]
    BudgetExceeded { explored: usize },
    /// A chain certificate must contain at least one map.
    #[error("a ghost chain needs at least one map")]
    EmptyChain,
    /// A claimed certificate failed re-verification.
    #[error("certificate verification failed: {0}")]
    CertificateFailure(String),
}

/// Largest modulus accepted for the prime `p`.
///
/// The caps keep every exhaustive computation (hom bases, subspace
/// containments, chain searches) comfortably within desk scale: full Jordan
/// theory for cyclic 2-groups up to order 32, 3-groups up to 27, 5-groups up
/// to 25, and the first interesting modulus `p^2` for larger primes.
pub fn desk_scale_cap(p: usize) -> usize {
    match p {
        2 => 32,
        3 => 27,
        5 => 25,
        q => q * q,
    }
}

/// Decomposes `m` as `p^j` with `p` prime and `j >= 1`.
fn prime_power_root(m: usize) -> Option<(usize, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d))?;
    if !crate::group::is_prime(p) {
        return None;
    }
    crate::group::log_exact(m, p).map(|j| (p, j))
}

// ---------------------------------------------------------------------------
// Matrices over GF(p)
// ---------------------------------------------------------------------------

/// A dense matrix over the prime field GF(`p`), stored row-major.
///
/// Entries are always reduced representatives in `0..p`.  Only the handful
/// of operations the stable-module computations need are provided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    p: usize,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FpMat {
    /// The zero matrix of the given shape.
    pub fn zero(p: usize, rows: usize, cols: usize) -> Self {
        assert!((2..256).contains(&p), "field characteristic out of range");
        FpMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(p: usize, n: usize) -> Self {
        let mut m = FpMat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of entries, reducing each entry mod `p`.
    pub fn from_rows(p: usize, rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let mut m = FpMat::zero(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % p as u8);
            }
        }
        m
    }

    /// Field characteristic.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    /// Sets the entry at `(r, c)` to `v mod p`.
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p as u8;
    }

    /// Whether every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// The entries flattened row-major, as a vector over GF(`p`).
    pub fn flatten(&self) -> Vec<u8> {
        self.data.clone()
    }

    /// Matrix product `self * rhs` (so composition `g . f` is `g.mul(f)`).
    pub fn mul(&self, rhs: &FpMat) -> Result<FpMat, StmodError> {
        if self.cols != rhs.rows {
            return Err(StmodError::ShapeMismatch {
                rows: rhs.rows,
                cols: rhs.cols,
                want_rows: self.cols,
                want_cols: rhs.cols,
            });
        }
        let p = self.p;
        let mut out = FpMat::zero(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as usize;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j) as usize;
                    out.set(i, j, ((cur + a * rhs.get(k, j) as usize) % p) as u8);
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for FpMat {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect();
        rows.serialize(ser)
    }
}

// ---------------------------------------------------------------------------
// Jordan modules
// ---------------------------------------------------------------------------

/// A finite-dimensional module over `k[x]/(x^m)`, `k = GF(p)`, given as a
/// direct sum of Jordan blocks.
///
/// Block `i` of size `a_i` has basis `x^0, …, x^{a_i - 1}`; the flat
/// coordinate of `x^j` in block `i` is `offset(i) + j`, and multiplication
/// by `x` shifts `j -> j + 1`, truncating at the block boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanModule {
    p: usize,
    m: usize,
    blocks: Vec<usize>,
}

impl JordanModule {
    /// Builds the direct sum of the given Jordan blocks over `k[x]/(x^m)`.
    ///
    /// `m` must be a prime power `p^j >= 2` within [`desk_scale_cap`], and
    /// every block size must lie in `1..=m`.  The block order is kept as
    /// given (maps index blocks positionally).
    pub fn new(m: usize, blocks: &[usize]) -> Result<Self, StmodError> {
        let (p, _) = prime_power_root(m).ok_or(StmodError::InvalidModulus { m })?;
        let cap = desk_scale_cap(p);
        if m > cap {
            return Err(StmodError::DeskScaleExceeded { m, p, cap });
        }
        for &size in blocks {
            if size == 0 || size > m {
                return Err(StmodError::InvalidBlock { size, m });
            }
        }
        Ok(JordanModule {
            p,
            m,
            blocks: blocks.to_vec(),
        })
    }

    /// The field characteristic (the prime of which `m` is a power).
    pub fn p(&self) -> usize {
        self.p
    }

    /// The modulus: `x^m = 0`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The block sizes, in construction order.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Total dimension over `k`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Flat coordinate offsets of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &a in &self.blocks {
            out.push(acc);
            acc += a;
        }
        out
    }

    /// Indices of the blocks of size `< m` (the stably nontrivial ones).
    pub fn nonfull_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| self.blocks[i] < self.m)
            .collect()
    }

    /// The matrix of multiplication by `x` in the flat basis.
    pub fn x_matrix(&self) -> FpMat {
        let d = self.dim();
        let mut s = FpMat::zero(self.p, d, d);
        for (off, &a) in self.offsets().iter().zip(&self.blocks) {
            for j in 0..a.saturating_sub(1) {
                s.set(off + j + 1, off + j, 1);
            }
        }
        s
    }

    /// A basis of Tate cohomology in the given degree.
    ///
    /// Tate cohomology of `k[x]/(x^m)` is 2-periodic, so only the parity of
    /// `degree` matters: even degrees are computed by block socles, odd
    /// degrees by block tops, in both cases ranging over nonfull blocks.
    pub fn tate_basis(&self, degree: i64) -> TateBasis {
        let parity = degree.rem_euclid(2) as u8;
        let offsets = self.offsets();
        let nonfull = self.nonfull_blocks();
        let coords = nonfull
            .iter()
            .map(|&i| {
                if parity == 0 {
                    offsets[i] + self.blocks[i] - 1 // socle x^{a-1}
                } else {
                    offsets[i] // top x^0
                }
            })
            .collect();
        TateBasis {
            parity,
            blocks: nonfull,
            coords,
        }
    }
}

/// A chosen basis of Tate cohomology in one degree parity.
///
/// Each basis vector is a single flat coordinate of the underlying module:
/// the socle (even degrees) or the top (odd degrees) of a nonfull block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TateBasis {
    /// Degree parity: 0 for even degrees, 1 for odd degrees.
    pub parity: u8,
    /// The nonfull block index carrying each basis vector.
    pub blocks: Vec<usize>,
    /// The flat module coordinate of each basis vector.
    pub coords: Vec<usize>,
}

/// Dimension of Tate cohomology of `module` in the given degree.
///
/// Every nonfull block contributes exactly one dimension in every degree,
/// so this is independent of `degree`; the argument is kept so callers can
/// state degree-specific facts and tests can witness 2-periodicity.
pub fn tate_dimension(module: &JordanModule, degree: i64) -> usize {
    module.tate_basis(degree).coords.len()
}

// ---------------------------------------------------------------------------
// Module maps
// ---------------------------------------------------------------------------

/// A map of `k[x]/(x^m)`-modules between two [`JordanModule`]s.
///
/// The matrix acts on flat coordinate columns (`dst.dim() x src.dim()`), and
/// construction verifies `x`-equivariance, so every value of this type is an
/// honest module map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleMap {
    src: JordanModule,
    dst: JordanModule,
    mat: FpMat,
}

impl ModuleMap {
    /// Wraps a matrix as a module map after checking shape, common modulus,
    /// and equivariance with the `x`-action.
    pub fn new(src: JordanModule, dst: JordanModule, mat: FpMat) -> Result<Self, StmodError> {
        if src.m != dst.m {
            return Err(StmodError::ModulusMismatch {
                left: dst.m,
                right: src.m,
            });
        }
        if mat.rows() != dst.dim() || mat.cols() != src.dim() {
            return Err(StmodError::ShapeMismatch {
                rows: mat.rows(),
                cols: mat.cols(),
                want_rows: dst.dim(),
                want_cols: src.dim(),
            });
        }
        let left = mat.mul(&src.x_matrix()).expect("shape checked above");
        let right = dst.x_matrix().mul(&mat).expect("shape checked above");
        if left != right {
            return Err(StmodError::NotEquivariant);
        }
        Ok(ModuleMap { src, dst, mat })
    }

    /// The zero map between two modules over the same ring.
    pub fn zero(src: JordanModule, dst: JordanModule) -> Result<Self, StmodError> {
        let mat = FpMat::zero(src.p, dst.dim(), src.dim());
        ModuleMap::new(src, dst, mat)
    }

    /// The identity map of a module.
    pub fn identity(module: JordanModule) -> Self {
        let mat = FpMat::identity(module.p, module.dim());
        ModuleMap {
            src: module.clone(),
            dst: module,
            mat,
        }
    }

    /// The map `J_a -> J_b`, `1 -> x^u`, between single blocks over
    /// `k[x]/(x^m)` (so `x^j -> x^{j+u}`, truncated at `x^b`).
    ///
    /// Any `u` is accepted; exponents at or beyond `b` simply give the zero
    /// map.  Multiplication by `x` on `J_a` is `monomial(m, a, a, 1)`.
    pub fn monomial(m: usize, a: usize, b: usize, u: usize) -> Result<Self, StmodError> {
        let src = JordanModule::new(m, &[a])?;
        let dst = JordanModule::new(m, &[b])?;
        let mut mat = FpMat::zero(src.p, b, a);
        for j in 0..a {
            if j + u < b {
                mat.set(j + u, j, 1);
            }
        }
        ModuleMap::new(src, dst, mat)
    }

    /// Source module.
    pub fn src(&self) -> &JordanModule {
        &self.src
    }

    /// Target module.
    pub fn dst(&self) -> &JordanModule {
        &self.dst
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &FpMat {
        &self.mat
    }

    /// The matrix induced on Tate cohomology in the given degree.
    ///
    /// Rows index the target's Tate basis, columns the source's.  By
    /// 2-periodicity this is the socle-to-socle corner of the matrix in even
    /// degrees and the top-to-top corner in odd degrees.
    pub fn induced_tate_map(&self, degree: i64) -> FpMat {
        let sb = self.src.tate_basis(degree);
        let db = self.dst.tate_basis(degree);
        let mut out = FpMat::zero(self.mat.p(), db.coords.len(), sb.coords.len());
        for (col, &sc) in sb.coords.iter().enumerate() {
            for (row, &dc) in db.coords.iter().enumerate() {
                out.set(row, col, self.mat.get(dc, sc));
            }
        }
        out
    }

    /// Whether the map vanishes on Tate cohomology in every degree.
    ///
    /// By 2-periodicity it is enough to check one even and one odd degree.
    pub fn is_ghost(&self) -> bool {
        self.induced_tate_map(0).is_zero() && self.induced_tate_map(-1).is_zero()
    }

    /// Whether the map factors through a projective module.
    ///
    /// Componentwise criterion: the `(i, i')` component `J_a -> J_b` of an
    /// equivariant map is `1 -> sum_u c_u x^u`, and it factors through `J_m`
    /// exactly when `c_u = 0` for every `u < m - a`.  A direct-sum map
    /// factors through a projective iff every component does.
    pub fn is_stably_trivial(&self) -> bool {
        let m = self.src.m;
        let soff = self.src.offsets();
        let doff = self.dst.offsets();
        for (i, &a) in self.src.blocks.iter().enumerate() {
            for (ip, &b) in self.dst.blocks.iter().enumerate() {
                // c_u is the coefficient of x^u in the image of the block top.
                let lo = b.saturating_sub(a); // equivariance forces c_u = 0 below b-a
                let hi = (m - a).min(b); // cutoff for factoring through J_m
                for u in lo..hi {
                    if self.mat.get(doff[ip] + u, soff[i]) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The composition `second . first`, checking that the middle modules agree.
pub fn compose(first: &ModuleMap, second: &ModuleMap) -> Result<ModuleMap, StmodError> {
    if first.dst.m != second.src.m {
        return Err(StmodError::ModulusMismatch {
            left: first.dst.m,
            right: second.src.m,
        });
    }
    if first.dst != second.src {
        return Err(StmodError::NotComposable {
            left: first.dst.blocks.clone(),
            right: second.src.blocks.clone(),
        });
    }
    let mat = second.mat.mul(&first.mat)?;
    ModuleMap::new(first.src.clone(), second.dst.clone(), mat)
}

// ---------------------------------------------------------------------------
// Hom spaces, ghosts, and maps factoring through projectives
// ---------------------------------------------------------------------------

/// Description of one basis map of `Hom(src, dst)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct HomBasisLabel {
    /// Source block index.
    src_block: usize,
    /// Target block index.
    dst_block: usize,
    /// The exponent: the component map is `1 -> x^u`.
    exponent: usize,
}

/// Enumerates the labels of the standard basis of `Hom(src, dst)`:
/// for blocks `J_a -> J_b` the maps `1 -> x^u` with `max(b-a,0) <= u <= b-1`.
fn hom_basis_labels(src: &JordanModule, dst: &JordanModule) -> Vec<HomBasisLabel> {
    let mut out = Vec::new();
    for (i, &a) in src.blocks.iter().enumerate() {
        for (ip, &b) in dst.blocks.iter().enumerate() {
            for u in b.saturating_sub(a)..b {
                out.push(HomBasisLabel {
                    src_block: i,
                    dst_block: ip,
                    exponent: u,
                });
            }
        }
    }
    out
}

/// Realises one hom-basis label as a full matrix between the flat bases.
fn hom_basis_matrix(src: &JordanModule, dst: &JordanModule, label: HomBasisLabel) -> FpMat {
    let soff = src.offsets();
    let doff = dst.offsets();
    let a = src.blocks[label.src_block];
    let b = dst.blocks[label.dst_block];
    let mut mat = FpMat::zero(src.p, dst.dim(), src.dim());
    for j in 0..a {
        if j + label.exponent < b {
            mat.set(doff[label.dst_block] + j + label.exponent, soff[label.src_block] + j, 1);
        }
    }
    mat
}

/// The standard basis of the space of module maps `src -> dst`.
///
/// Every equivariant map is a unique linear combination of these; the basis
/// has `sum over block pairs of min(a, b)` elements.
pub fn hom_basis(src: &JordanModule, dst: &JordanModule) -> Result<Vec<ModuleMap>, StmodError> {
    if src.m != dst.m {
        return Err(StmodError::ModulusMismatch {
            left: dst.m,
            right: src.m,
        });
    }
    hom_basis_labels(src, dst)
        .into_iter()
        .map(|label| ModuleMap::new(src.clone(), dst.clone(), hom_basis_matrix(src, dst, label)))
        .collect()
}

/// Builds a subspace of the flattened matrix space from a label filter.
fn span_of_labels(
    src: &JordanModule,
    dst: &JordanModule,
    keep: impl Fn(&HomBasisLabel, usize, usize) -> bool,
) -> FpSubspace {
    let ambient = src.dim() * dst.dim();
    let mut space = FpSubspace::zero(src.p, ambient);
    for label in hom_basis_labels(src, dst) {
        let a = src.blocks[label.src_block];
        let b = dst.blocks[label.dst_block];
        if keep(&label, a, b) {
            space
                .insert(&hom_basis_matrix(src, dst, label).flatten())
                .expect("flattened matrices match the ambient dimension");
        }
    }
    space
}

/// The space of maps `src -> dst` that factor through a projective module,
/// as a subspace of the flattened `dst.dim() x src.dim()` matrix space.
///
/// Componentwise, `J_a -> J_b` factors through `J_m` iff its exponent
/// satisfies `u >= m - a`; in particular every map out of a full block
/// factors.  The dimension is `sum of max(0, a + b - m)` over block pairs.
pub fn factoring_subspace(src: &JordanModule, dst: &JordanModule) -> Result<FpSubspace, StmodError> {
    if src.m != dst.m {
        return Err(StmodError::ModulusMismatch {
            left: dst.m,
            right: src.m,
        });
    }
    let m = src.m;
    Ok(span_of_labels(src, dst, |label, a, _b| label.exponent >= m - a))
}

/// The space of ghosts `src -> dst`, as a subspace of the flattened matrix
/// space.
///
/// A basis map `1 -> x^u` between nonfull blocks `J_a -> J_b` is detected on
/// Tate cohomology exactly when `u = b - a` (even degrees, socle corner, only
/// when `b >= a`) or `u = 0` (odd degrees, top corner, only possible when
/// `b <= a`); every other basis map, and every basis map into or out of a
/// full block, is a ghost.  Ghosts therefore form a coordinate subspace in
/// the standard hom basis, and its basis is enumerated directly.
pub fn ghost_subspace(src: &JordanModule, dst: &JordanModule) -> Result<FpSubspace, StmodError> {
    if src.m != dst.m {
        return Err(StmodError::ModulusMismatch {
            left: dst.m,
            right: src.m,
        });
    }
    let m = src.m;
    Ok(span_of_labels(src, dst, |label, a, b| {
        if a == m || b == m {
            return true;
        }
        let socle_detector = b >= a && label.exponent == b - a;
        let top_detector = label.exponent == 0; // only in range when b <= a
        !socle_detector && !top_detector
    }))
}

/// Exhaustively checks that every ghost between modules with at most
/// `max_blocks` Jordan blocks over `k[x]/(x^m)` is stably trivial.
///
/// Enumerates all block multisets with sizes in `1..=m` and at most
/// `max_blocks` parts, and for each ordered pair `(src, dst)` checks the
/// containment `ghost_subspace <= factoring_subspace`.  Returns `true` when
/// the containment holds for every pair — over `k[x]/(x^2)` and `k[x]/(x^3)`
/// there are no nonzero stable ghosts, and this verifies it by brute force.
pub fn no_stable_ghost(m: usize, max_blocks: usize) -> Result<bool, StmodError> {
    // Validate m (and desk scale) once via a throwaway module.
    JordanModule::new(m, &[1])?;
    let mut shapes: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(shape) = stack.pop() {
        if !shape.is_empty() {
            shapes.push(shape.clone());
        }
        if shape.len() < max_blocks {
            let lo = shape.last().copied().unwrap_or(1);
            for size in lo..=m {
                let mut next = shape.clone();
                next.push(size);
                stack.push(next);
            }
        }
    }
    let modules: Vec<JordanModule> = shapes
        .iter()
        .map(|s| JordanModule::new(m, s))
        .collect::<Result<_, _>>()?;
    for src in &modules {
        for dst in &modules {
            let ghosts = ghost_subspace(src, dst)?;
            let factoring = factoring_subspace(src, dst)?;
            let contained = ghosts
                .is_subspace_of(&factoring)
                .expect("both spaces share the ambient matrix space");
            if !contained {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Ghost chains and certificates
// ---------------------------------------------------------------------------

/// A verified chain of composable ghosts with stably nontrivial composite.
///
/// Construction re-checks every claim (each step is a ghost, consecutive
/// steps compose, the full composite does not factor through a projective)
/// and records the findings in a human-readable transcript.  A certificate
/// of length `L` witnesses that `L` ghosts can compose to something stably
/// nontrivial, so the ghost number of `k[x]/(x^m)` is at least `L + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCertificate {
    /// The modulus: all modules in the chain live over `k[x]/(x^m)`.
    pub m: usize,
    /// The field characteristic.
    pub p: usize,
    /// Number of maps in the chain.
    pub length: usize,
    /// The maps, in composition order: `maps[0]` is applied first.
    pub maps: Vec<ModuleMap>,
    /// The verified composite of the whole chain.
    pub composite: ModuleMap,
    /// One line per verified fact.
    pub transcript: Vec<String>,
}

impl ChainCertificate {
    /// Verifies a chain of maps and assembles the certificate.
    ///
    /// Fails with [`StmodError::CertificateFailure`] if any step is not a
    /// ghost or the composite is stably trivial, and with a shape or modulus
    /// error if consecutive steps do not compose.
    pub fn certify(maps: Vec<ModuleMap>) -> Result<Self, StmodError> {
        let first = maps.first().ok_or(StmodError::EmptyChain)?;
        let m = first.src().m();
        let p = first.src().p();
        let mut transcript = Vec::new();
        let mut composite = ModuleMap::identity(first.src().clone());
        for (k, map) in maps.iter().enumerate() {
            if !map.is_ghost() {
                return Err(StmodError::CertificateFailure(format!(
                    "step {} does not vanish on Tate cohomology",
                    k + 1
                )));
            }
            transcript.push(format!(
                "step {}: J{:?} -> J{:?} vanishes on Tate cohomology in both parities",
                k + 1,
                map.src().blocks(),
                map.dst().blocks()
            ));
            composite = compose(&composite, map)?;
        }
        if composite.is_stably_trivial() {
            return Err(StmodError::CertificateFailure(
                "composite factors through a projective module".into(),
            ));
        }
        transcript.push(format!(
            "composite J{:?} -> J{:?} does not factor through a projective",
            composite.src().blocks(),
            composite.dst().blocks()
        ));
        transcript.push(format!(
            "conclusion: {} ghosts compose nontrivially over k[x]/(x^{}), so the ghost number is at least {}",
            maps.len(),
            m,
            maps.len() + 1
        ));
        Ok(ChainCertificate {
            m,
            p,
            length: maps.len(),
            maps,
            composite,
            transcript,
        })
    }
}

/// Outcome of a bounded ghost-chain search.
#[derive(Debug, Clone, Serialize)]
pub enum ChainOutcome {
    /// A chain of the requested length was found and verified.
    Found(Box<ChainCertificate>),
    /// The whole single-block search space was exhausted: no chain of the
    /// requested length has a stably nontrivial composite there.
    Exhausted {
        /// Number of partial chains the search composed and tested.
        explored: usize,
    },
}

/// Searches for `length` composable ghosts over `k[x]/(x^m)` whose composite
/// is stably nontrivial.
///
/// Two phases:
///
/// 1. **Closed form.** Multiplication by `x` on `J_a` is always a ghost, and
///    `x^L` on `J_a` is stably nontrivial exactly when `L < min(a, m - a)`.
///    Taking `a = floor(m/2)` realises any `length <= floor((m-2)/2)`
///    immediately, with no search.
/// 2. **Depth-first search** over chains of single-block monomial ghosts
///    `1 -> x^u : J_a -> J_b` with `1 <= a, b <= m-1`.  Monomial chains are
///    exhaustive for single blocks: in any chain of polynomial maps the
///    lowest-degree terms compose to a monomial chain that survives at least
///    as far, so if any single-block ghost chain of the requested length is
///    stably nontrivial, a monomial one is.  Stably trivial partial
///    composites are pruned (composing further cannot resurrect them).
///
/// Each composed partial chain counts against `budget`; exceeding it returns
/// [`StmodError::BudgetExceeded`].  `Exhausted` therefore certifies that no
/// single-block ghost chain of this length is stably nontrivial — for
/// `length >= ceil((m-1)/2)` that matches the ghost number of `k[x]/(x^m)`
/// being exactly `ceil((m-1)/2)`.
pub fn ghost_chain_search(m: usize, length: usize, budget: usize) -> Result<ChainOutcome, StmodError> {
    if length == 0 {
        return Err(StmodError::EmptyChain);
    }
    JordanModule::new(m, &[1])?; // validate m and desk scale

    // Phase 1: the x-power chain on the middle Jordan block.
    if m >= 4 && length <= (m - 2) / 2 {
        let a = m / 2;
        let step = ModuleMap::monomial(m, a, a, 1)?;
        let maps = vec![step; length];
        let cert = ChainCertificate::certify(maps)?;
        return Ok(ChainOutcome::Found(Box::new(cert)));
    }

    // Phase 2: depth-first search over monomial ghost chains between single
    // nonprojective blocks.  ghost_moves[a] lists the (b, u) with
    // 1 -> x^u : J_a -> J_b a ghost basis map.
    let mut ghost_moves: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for (a, moves) in ghost_moves.iter_mut().enumerate().skip(1) {
        for b in 1..m {
            // Monomials u in max(b-a,0)..=b-1, excluding the two Tate
            // detectors u = b-a (socle) and u = 0 (top).
            let lo = if b >= a { b - a + 1 } else { 1 };
            for u in lo..b {
                moves.push((b, u));
            }
        }
    }

    let mut explored = 0usize;
    let mut stack: Vec<(ModuleMap, Vec<ModuleMap>)> = Vec::new();
    // Seed: every ghost basis map out of every block, as a chain of length 1.
    // Pushed in reverse so smaller source blocks are explored first.
    for a in (1..m).rev() {
        for &(b, u) in ghost_moves[a].iter().rev() {
            let step = ModuleMap::monomial(m, a, b, u)?;
            stack.push((step.clone(), vec![step]));
        }
    }
    while let Some((composite, chain)) = stack.pop() {
        explored += 1;
        if explored > budget {
            return Err(StmodError::BudgetExceeded { explored: explored - 1 });
        }
        if composite.is_stably_trivial() {
            continue;
        }
        if chain.len() == length {
            let cert = ChainCertificate::certify(chain)?;
            return Ok(ChainOutcome::Found(Box::new(cert)));
        }
        let a = composite.dst().blocks()[0];
        for &(b, u) in ghost_moves[a].iter().rev() {
            let step = ModuleMap::monomial(m, a, b, u)?;
            let next = compose(&composite, &step)?;
            let mut next_chain = chain.clone();
            next_chain.push(step);
            stack.push((next, next_chain));
        }
    }
    Ok(ChainOutcome::Exhausted { explored })
}

/// A certified lower bound for the ghost number of `k[x]/(x^m)`.
///
/// Builds the longest stably nontrivial `x`-power chain — length
/// `L = ceil((m-1)/2) - 1` on the block `J_{floor(m/2)}` — verifies it, and
/// returns `(L + 1, certificate)`.  The value `ceil((m-1)/2)` is the exact
/// ghost number of `k[x]/(x^m)`, so the certificate is sharp.  For
/// `m in {2, 3}` every ghost is already stably trivial, the bound is the
/// trivial `1`, and there is no chain to certify.
pub fn certified_lower_bound(m: usize) -> Result<(usize, Option<ChainCertificate>), StmodError> {
    JordanModule::new(m, &[1])?; // validate m and desk scale
    let chain_len = (m - 1).div_ceil(2) - 1;
    if chain_len == 0 {
        return Ok((1, None));
    }
    match ghost_chain_search(m, chain_len, 1)? {
        ChainOutcome::Found(cert) => Ok((chain_len + 1, Some(*cert))),
        ChainOutcome::Exhausted { .. } => Err(StmodError::CertificateFailure(format!(
            "expected an x-power chain of length {chain_len} over k[x]/(x^{m})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn module_construction_validates_inputs() {
        assert_eq!(
            JordanModule::new(6, &[1]).unwrap_err(),
            StmodError::InvalidModulus { m: 6 }
        );
        assert_eq!(
            JordanModule::new(1, &[1]).unwrap_err(),
            StmodError::InvalidModulus { m: 1 }
        );
        assert_eq!(
            JordanModule::new(64, &[1]).unwrap_err(),
            StmodError::DeskScaleExceeded { m: 64, p: 2, cap: 32 }
        );
        assert_eq!(
            JordanModule::new(8, &[3, 0]).unwrap_err(),
            StmodError::InvalidBlock { size: 0, m: 8 }
        );
        assert_eq!(
            JordanModule::new(8, &[9]).unwrap_err(),
            StmodError::InvalidBlock { size: 9, m: 8 }
        );
        let module = JordanModule::new(9, &[4, 9, 1]).unwrap();
        assert_eq!(module.p(), 3);
        assert_eq!(module.dim(), 14);
        assert_eq!(module.offsets(), vec![0, 4, 13]);
        assert_eq!(module.nonfull_blocks(), vec![0, 2]);
    }

    #[test]
    fn x_matrix_shifts_within_blocks() {
        let module = JordanModule::new(4, &[2, 1]).unwrap();
        let s = module.x_matrix();
        // Block of size 2: x^0 -> x^1 -> 0; block of size 1: x^0 -> 0.
        assert_eq!(s.get(1, 0), 1);
        let square = s.mul(&s).unwrap();
        assert!(square.is_zero());
        // x on the full block J_4 is nilpotent of index exactly 4.
        let full = JordanModule::new(4, &[4]).unwrap();
        let t = full.x_matrix();
        let t3 = t.mul(&t).unwrap().mul(&t).unwrap();
        assert!(!t3.is_zero());
        assert!(t3.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn equivariance_is_enforced() {
        let src = JordanModule::new(4, &[2]).unwrap();
        let dst = JordanModule::new(4, &[3]).unwrap();
        // 1 -> x: equivariant (this is the monomial u = 1).
        let ok = ModuleMap::monomial(4, 2, 3, 1).unwrap();
        assert_eq!(ok.matrix().get(1, 0), 1);
        assert_eq!(ok.matrix().get(2, 1), 1);
        // 1 -> 1 is not equivariant J_2 -> J_3: x^2 kills the source top but
        // not its would-be image.
        let mut bad = FpMat::zero(2, 3, 2);
        bad.set(0, 0, 1);
        bad.set(1, 1, 1);
        assert_eq!(
            ModuleMap::new(src.clone(), dst.clone(), bad).unwrap_err(),
            StmodError::NotEquivariant
        );
        // Shape and modulus mismatches are caught before equivariance.
        let wrong_shape = FpMat::zero(2, 2, 2);
        assert!(matches!(
            ModuleMap::new(src.clone(), dst.clone(), wrong_shape).unwrap_err(),
            StmodError::ShapeMismatch { .. }
        ));
        let other_ring = JordanModule::new(8, &[3]).unwrap();
        assert!(matches!(
            ModuleMap::new(src, other_ring, FpMat::zero(2, 3, 2)).unwrap_err(),
            StmodError::ModulusMismatch { .. }
        ));
    }

    #[test]
    fn tate_dimensions_are_two_periodic_and_additive() {
        let module = JordanModule::new(8, &[3, 8, 5, 8, 1]).unwrap();
        // Full blocks are invisible; each nonfull block contributes 1.
        for degree in -4..=4 {
            assert_eq!(tate_dimension(&module, degree), 3);
        }
        let even = module.tate_basis(0);
        let odd = module.tate_basis(-1);
        assert_eq!(even.blocks, vec![0, 2, 4]);
        // Socles: x^2 in J_3 (coord 2), x^4 in J_5 (coord 11+4), x^0 in J_1.
        assert_eq!(even.coords, vec![2, 15, 24]);
        // Tops: x^0 of the same blocks.
        assert_eq!(odd.coords, vec![0, 11, 24]);
        // Additivity across a direct-sum split of the same block list.
        let left = JordanModule::new(8, &[3, 8]).unwrap();
        let right = JordanModule::new(8, &[5, 8, 1]).unwrap();
        assert_eq!(
            tate_dimension(&left, 0) + tate_dimension(&right, 0),
            tate_dimension(&module, 0)
        );
    }

    #[test]
    fn multiplication_by_x_is_a_ghost_and_identity_is_not() {
        for m in [4usize, 8, 9] {
            for a in 1..=m {
                let x = ModuleMap::monomial(m, a, a, 1).unwrap();
                assert!(x.is_ghost(), "x on J_{a} over k[x]/(x^{m})");
            }
        }
        let id = ModuleMap::identity(JordanModule::new(8, &[3]).unwrap());
        assert!(!id.is_ghost());
        assert_eq!(id.induced_tate_map(0), FpMat::identity(2, 1));
        assert_eq!(id.induced_tate_map(1), FpMat::identity(2, 1));
        // The identity of a projective module is a ghost (its Tate
        // cohomology is zero) and is stably trivial.
        let id_full = ModuleMap::identity(JordanModule::new(8, &[8]).unwrap());
        assert!(id_full.is_ghost());
        assert!(id_full.is_stably_trivial());
    }

    #[test]
    fn x_power_stable_nontriviality_matches_the_closed_form() {
        for m in [2usize, 3, 4, 5, 8, 9] {
            for a in 1..m {
                let x = ModuleMap::monomial(m, a, a, 1).unwrap();
                let mut power = ModuleMap::identity(JordanModule::new(m, &[a]).unwrap());
                for ell in 1..=m {
                    power = compose(&power, &x).unwrap();
                    let nontrivial = !power.is_stably_trivial();
                    assert_eq!(
                        nontrivial,
                        ell < a.min(m - a),
                        "x^{ell} on J_{a} over k[x]/(x^{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn stable_endomorphism_dimensions() {
        // dim Hom(J_a, J_a) = a; the maps factoring through J_m cut this
        // down to a stable endomorphism algebra of dimension min(a, m-a).
        for m in 2..=9usize {
            if prime_power_root(m).is_none() {
                continue;
            }
            for a in 1..m {
                let block = JordanModule::new(m, &[a]).unwrap();
                let hom = hom_basis(&block, &block).unwrap();
                assert_eq!(hom.len(), a);
                let factoring = factoring_subspace(&block, &block).unwrap();
                assert_eq!(factoring.dim(), (2 * a).saturating_sub(m));
                assert_eq!(a - factoring.dim(), a.min(m - a));
            }
        }
    }

    #[test]
    fn ghost_subspace_members_are_ghosts_and_count_detectors() {
        let m = 8;
        let src = JordanModule::new(m, &[3, 8, 5]).unwrap();
        let dst = JordanModule::new(m, &[5, 2]).unwrap();
        let hom = hom_basis(&src, &dst).unwrap();
        let ghosts = ghost_subspace(&src, &dst).unwrap();
        // Each basis map is a ghost iff it lies in the ghost subspace, and
        // the detected maps are one per nonfull block pair.
        let mut detected = 0;
        for map in &hom {
            let in_space = ghosts.contains(&map.matrix().flatten()).unwrap();
            assert_eq!(in_space, map.is_ghost());
            if !in_space {
                detected += 1;
            }
        }
        // Nonfull pairs: src {3, 5} x dst {5, 2}; b >= a contributes the
        // socle detector, b <= a the top detector, one each per pair.
        assert_eq!(detected, 4);
        assert_eq!(ghosts.dim() + detected, hom.len());
        // Random linear combinations of ghost basis rows stay ghosts.
        let mut rng = StdRng::seed_from_u64(0x9057);
        for _ in 0..200 {
            let mut vec = vec![0u8; src.dim() * dst.dim()];
            for row in ghosts.rows() {
                let c = rng.random_range(0..2u8);
                for (v, r) in vec.iter_mut().zip(row) {
                    *v = (*v + c * r) % 2;
                }
            }
            let mut mat = FpMat::zero(2, dst.dim(), src.dim());
            for r in 0..dst.dim() {
                for c in 0..src.dim() {
                    mat.set(r, c, vec[r * src.dim() + c]);
                }
            }
            let map = ModuleMap::new(src.clone(), dst.clone(), mat).unwrap();
            assert!(map.is_ghost());
        }
    }

    #[test]
    fn no_stable_ghosts_for_tiny_moduli() {
        assert!(no_stable_ghost(2, 4).unwrap());
        assert!(no_stable_ghost(3, 4).unwrap());
        // Over k[x]/(x^4) the map x on J_2 is a stable ghost, so the
        // containment fails already with single blocks.
        assert!(!no_stable_ghost(4, 1).unwrap());
    }

    #[test]
    fn chain_search_finds_x_power_chains() {
        let outcome = ghost_chain_search(9, 3, 10).unwrap();
        let cert = match outcome {
            ChainOutcome::Found(cert) => cert,
            ChainOutcome::Exhausted { .. } => panic!("expected a chain"),
        };
        assert_eq!(cert.length, 3);
        assert_eq!(cert.m, 9);
        assert_eq!(cert.p, 3);
        assert_eq!(cert.maps.len(), 3);
        for map in &cert.maps {
            assert_eq!(map.src().blocks(), &[4]);
            assert!(map.is_ghost());
        }
        assert!(!cert.composite.is_stably_trivial());
        assert_eq!(cert.transcript.len(), 5);
        assert!(cert.transcript.last().unwrap().contains("at least 4"));
    }

    #[test]
    fn chain_search_exhausts_when_no_chain_exists() {
        // Over k[x]/(x^2) and k[x]/(x^3) there is no ghost to chain at all.
        match ghost_chain_search(2, 1, 1000).unwrap() {
            ChainOutcome::Exhausted { explored } => assert_eq!(explored, 0),
            ChainOutcome::Found(_) => panic!("no ghosts exist over k[x]/(x^2)"),
        }
        match ghost_chain_search(3, 1, 1000).unwrap() {
            ChainOutcome::Exhausted { explored } => assert!(explored > 0),
            ChainOutcome::Found(_) => panic!("no stably nontrivial ghost over k[x]/(x^3)"),
        }
        // The ghost number of k[x]/(x^9) is 4: three ghosts can compose
        // nontrivially, four never can.  The search certifies the negative
        // side within the single-block family.
        match ghost_chain_search(9, 4, 2_000_000).unwrap() {
            ChainOutcome::Exhausted { explored } => assert!(explored > 0),
            ChainOutcome::Found(cert) => panic!("impossible chain: {:?}", cert.transcript),
        }
    }

    #[test]
    fn chain_search_respects_budget() {
        let err = ghost_chain_search(9, 4, 5).unwrap_err();
        assert_eq!(err, StmodError::BudgetExceeded { explored: 5 });
        assert!(matches!(
            ghost_chain_search(9, 0, 5).unwrap_err(),
            StmodError::EmptyChain
        ));
    }

    #[test]
    fn certified_lower_bounds_match_the_cyclic_ghost_numbers() {
        for (m, expected) in [
            (2usize, 1usize),
            (3, 1),
            (4, 2),
            (5, 2),
            (8, 4),
            (9, 4),
            (16, 8),
            (25, 12),
            (27, 13),
        ] {
            let (bound, cert) = certified_lower_bound(m).unwrap();
            assert_eq!(bound, expected, "m = {m}");
            assert_eq!(bound, (m - 1).div_ceil(2));
            if m <= 3 {
                assert!(cert.is_none());
            } else {
                let cert = cert.expect("certificate for m >= 4");
                assert_eq!(cert.length + 1, bound);
                // Re-verify the stored chain from scratch.
                let again = ChainCertificate::certify(cert.maps.clone()).unwrap();
                assert_eq!(again.length, cert.length);
            }
        }
    }

    #[test]
    fn certificates_reject_bad_chains() {
        // A non-ghost step is refused.
        let id = ModuleMap::identity(JordanModule::new(8, &[3]).unwrap());
        assert!(matches!(
            ChainCertificate::certify(vec![id]).unwrap_err(),
            StmodError::CertificateFailure(_)
        ));
        // A stably trivial composite is refused: x^2 on J_2 over k[x]/(x^8)
        // is zero, hence stably trivial.
        let x = ModuleMap::monomial(8, 2, 2, 1).unwrap();
        assert!(matches!(
            ChainCertificate::certify(vec![x.clone(), x]).unwrap_err(),
            StmodError::CertificateFailure(_)
        ));
        // Non-composable steps are refused.
        let a = ModuleMap::monomial(8, 4, 4, 1).unwrap();
        let b = ModuleMap::monomial(8, 3, 3, 1).unwrap();
        assert_eq!(
            ChainCertificate::certify(vec![a, b]).unwrap_err(),
            StmodError::NotComposable {
                left: vec![4],
                right: vec![3]
            }
        );
        assert!(matches!(
            ChainCertificate::certify(Vec::new()).unwrap_err(),
            StmodError::EmptyChain
        ));
    }

    #[test]
    fn random_ghost_compositions_stay_in_the_ghost_ideal() {
        // Ghosts form an ideal: composing a ghost with any map on either
        // side is again a ghost.  Exercise this with random monomial data.
        let mut rng = StdRng::seed_from_u64(0x1dea);
        for _ in 0..1000 {
            let m = [4usize, 8, 9][rng.random_range(0..3)];
            let a = rng.random_range(1..m);
            let b = rng.random_range(1..m);
            let c = rng.random_range(1..m);
            // Random ghost J_a -> J_b (skip when none exists).
            let lo = if b >= a { b - a + 1 } else { 1 };
            if lo >= b {
                continue;
            }
            let u = rng.random_range(lo..b);
            let ghost = ModuleMap::monomial(m, a, b, u).unwrap();
            assert!(ghost.is_ghost());
            // Any monomial J_b -> J_c at all.
            let lo2 = c.saturating_sub(b);
            if lo2 >= c {
                continue;
            }
            let v = rng.random_range(lo2..c);
            let any = ModuleMap::monomial(m, b, c, v).unwrap();
            assert!(compose(&ghost, &any).unwrap().is_ghost());
        }
    }
}
