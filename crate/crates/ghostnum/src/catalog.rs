//! A small text grammar and builders for the standard p-group families.
//!
//! Specs look like `"C(8)"`, `"EA(3,2)"`, `"D(16)"`, `"ES(3,1,+)"`, or
//! products such as `"C(8)xEA(2,2)"`. The grammar is
//!
//! ```text
//! spec := term ("x" term)*
//! term := NAME "(" args ")"
//! NAME := C | EA | D | Q | SD | Mod | ES | AES
//! ```
//!
//! with integers, `+`/`-` signs as arguments, insignificant whitespace and
//! case-sensitive names. Every atom determines a prime; all atoms of one
//! spec must share it.
//!
//! Families:
//! * `C(m)` — cyclic of prime-power order `m >= 2`;
//! * `EA(p,n)` — elementary abelian of order `p^n`;
//! * `D(m)`, `Q(m)` — dihedral / generalized quaternion, `m = 2^k >= 8`;
//! * `SD(m)`, `Mod(m)` — semidihedral / modular maximal-cyclic, `m = 2^k >= 16`;
//! * `ES(p,r,s)` — extraspecial of order `p^(1+2r)` and sign `s`, built as an
//!   iterated central product of the two order-`p^3` types (for `p = 2`:
//!   `ES(2,r,+)` is a central product of `r` copies of `D(8)`, and
//!   `ES(2,r,-)` replaces one factor by `Q(8)`);
//! * `AES(p,r)` — almost extraspecial of order `p^(2+2r)`: the central
//!   product of `ES(p,r,+)` with `C(p^2)` along their order-`p` central
//!   subgroups.
//!
//! [`catalog_of_order`] enumerates, for a given order `p^n`, the abelian
//! types plus every family above that exists at that order, together with
//! the `ES x EA`, `D x EA` and `Q x EA` products the theorem verifier
//! sweeps over. The list is distinct by construction (for `p = 2` the
//! aliases `ES(2,1,+) = D(8)` and `ES(2,1,-) = Q(8)` are suppressed).

use crate::group::{is_prime, log_exact, GroupError, GroupTable};
use thiserror::Error;

/// Errors from parsing, validating, or building group specs.
#[derive(Debug, Error)]
pub enum CatalogError {
    /// Syntax error: the input does not match the grammar.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    /// The spec parses but names no valid group.
    #[error("invalid spec at byte {position}: {message}")]
    InvalidSpec { position: usize, message: String },
    /// The requested order exceeds the configured cap.
    #[error("order {order} exceeds the size cap {cap}")]
    SizeCapExceeded { order: usize, cap: usize },
    /// An underlying table construction failed (should not happen for
    /// validated specs; surfaced for transparency).
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Sign of an extraspecial group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One factor of a group spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// Cyclic of prime-power order `m`.
    C(usize),
    /// Elementary abelian `(C_p)^n`.
    EA(usize, u32),
    /// Dihedral of order `m = 2^k`, `k >= 3`.
    D(usize),
    /// Generalized quaternion of order `m = 2^k`, `k >= 3`.
    Q(usize),
    /// Semidihedral of order `m = 2^k`, `k >= 4`.
    SD(usize),
    /// Modular maximal-cyclic of order `m = 2^k`, `k >= 4`.
    Mod(usize),
    /// Extraspecial of order `p^(1+2r)` with a sign.
    ES(usize, u32, Sign),
    /// Almost extraspecial of order `p^(2+2r)`.
    AES(usize, u32),
}

impl Atom {
    /// The prime this atom lives over.
    pub fn prime(&self) -> usize {
        match *self {
            Atom::C(m) => smallest_prime_factor(m),
            Atom::EA(p, _) | Atom::ES(p, _, _) | Atom::AES(p, _) => p,
            Atom::D(_) | Atom::Q(_) | Atom::SD(_) | Atom::Mod(_) => 2,
        }
    }

    /// Group order of this atom.
    pub fn order(&self) -> usize {
        match *self {
            Atom::C(m) | Atom::D(m) | Atom::Q(m) | Atom::SD(m) | Atom::Mod(m) => m,
            Atom::EA(p, n) => p.pow(n),
            Atom::ES(p, r, _) => p.pow(2 * r + 1),
            Atom::AES(p, r) => p.pow(2 * r + 2),
        }
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Atom::C(m) => write!(f, "C({m})"),
            Atom::EA(p, n) => write!(f, "EA({p},{n})"),
            Atom::D(m) => write!(f, "D({m})"),
            Atom::Q(m) => write!(f, "Q({m})"),
            Atom::SD(m) => write!(f, "SD({m})"),
            Atom::Mod(m) => write!(f, "Mod({m})"),
            Atom::ES(p, r, s) => write!(f, "ES({p},{r},{s})"),
            Atom::AES(p, r) => write!(f, "AES({p},{r})"),
        }
    }
}

fn smallest_prime_factor(m: usize) -> usize {
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    m
}

/// A validated group spec: a nonempty product of atoms over one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    atoms: Vec<Atom>,
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl GroupSpec {
    /// Builds a spec from atoms, validating each and the shared prime.
    pub fn from_atoms(atoms: Vec<Atom>) -> Result<GroupSpec, CatalogError> {
        if atoms.is_empty() {
            return Err(CatalogError::InvalidSpec {
                position: 0,
                message: "empty spec".into(),
            });
        }
        for a in &atoms {
            validate_atom(a, 0)?;
        }
        let p = atoms[0].prime();
        if let Some(bad) = atoms.iter().find(|a| a.prime() != p) {
            return Err(CatalogError::InvalidSpec {
                position: 0,
                message: format!("mixed primes: {bad} does not live over {p}"),
            });
        }
        Ok(GroupSpec { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn prime(&self) -> usize {
        self.atoms[0].prime()
    }

    /// The order of the group this spec names (product of atom orders).
    pub fn order(&self) -> usize {
        self.atoms.iter().map(Atom::order).product()
    }

    /// `log_p(order)`.
    pub fn n(&self) -> u32 {
        log_exact(self.order(), self.prime()).expect("atom orders are p-powers")
    }

    /// Parses the spec grammar; errors carry byte positions.
    pub fn parse(input: &str) -> Result<GroupSpec, CatalogError> {
        Parser::new(input).parse()
    }

    /// Builds the group: each atom's table, folded with direct products.
    /// The result is labeled with the canonical rendering of the spec.
    pub fn build(&self) -> Result<GroupTable, CatalogError> {
        let mut acc = build_atom(&self.atoms[0])?;
        for a in &self.atoms[1..] {
            acc = acc.direct_product(&build_atom(a)?)?;
        }
        acc.set_label(&self.to_string());
        Ok(acc)
    }
}

fn validate_atom(atom: &Atom, position: usize) -> Result<(), CatalogError> {
    let invalid = |message: String| CatalogError::InvalidSpec { position, message };
    match *atom {
        Atom::C(m) => {
            if m < 2 {
                return Err(invalid(format!(
                    "C({m}): the trivial group has no well-defined prime"
                )));
            }
            let p = smallest_prime_factor(m);
            if log_exact(m, p).is_none() {
                return Err(invalid(format!("C({m}): order not a prime power")));
            }
        }
        Atom::EA(p, n) => {
            if !is_prime(p) {
                return Err(invalid(format!("EA({p},{n}): {p} is not prime")));
            }
            if n == 0 {
                return Err(invalid(format!("EA({p},{n}): rank must be at least 1")));
            }
        }
        Atom::D(m) | Atom::Q(m) => {
            if log_exact(m, 2).is_none() || m < 8 {
                return Err(invalid(format!(
                    "{atom}: order must be a power of 2 and at least 8"
                )));
            }
        }
        Atom::SD(m) | Atom::Mod(m) => {
            if log_exact(m, 2).is_none() || m < 16 {
                return Err(invalid(format!(
                    "{atom}: order must be a power of 2 and at least 16"
                )));
            }
        }
        Atom::ES(p, r, _) => {
            if !is_prime(p) {
                return Err(invalid(format!("{atom}: {p} is not prime")));
            }
            if r == 0 {
                return Err(invalid(format!("{atom}: rank must be at least 1")));
            }
        }
        Atom::AES(p, r) => {
            if !is_prime(p) {
                return Err(invalid(format!("{atom}: {p} is not prime")));
            }
            if r == 0 {
                return Err(invalid(format!("{atom}: rank must be at least 1")));
            }
        }
    }
    Ok(())
}

// ----------------------------------------------------------------------
// Parser
// ----------------------------------------------------------------------

enum ArgTok {
    Int(usize, usize),  // value, position
    Sign(Sign, usize),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, at: usize, message: impl Into<String>) -> CatalogError {
        CatalogError::Parse {
            position: at,
            message: message.into(),
        }
    }

    fn parse(mut self) -> Result<GroupSpec, CatalogError> {
        let mut atoms = vec![self.parse_term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'x') => {
                    self.pos += 1;
                    atoms.push(self.parse_term()?);
                }
                Some(c) => {
                    return Err(self.err(
                        self.pos,
                        format!("expected 'x' or end of input, found {:?}", c as char),
                    ));
                }
            }
        }
        // Atom validation happened in parse_term; check the shared prime.
        let p = atoms[0].0.prime();
        for (atom, at) in &atoms[1..] {
            if atom.prime() != p {
                return Err(CatalogError::InvalidSpec {
                    position: *at,
                    message: format!("mixed primes: {atom} does not live over {p}"),
                });
            }
        }
        Ok(GroupSpec {
            atoms: atoms.into_iter().map(|(a, _)| a).collect(),
        })
    }

    fn parse_term(&mut self) -> Result<(Atom, usize), CatalogError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphabetic() && c != b'x')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(start, "expected a family name"));
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(self.err(self.pos, format!("expected '(' after {name:?}")));
        }
        self.pos += 1;
        let mut args: Vec<ArgTok> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    args.push(ArgTok::Sign(Sign::Plus, self.pos));
                    self.pos += 1;
                }
                Some(b'-') => {
                    args.push(ArgTok::Sign(Sign::Minus, self.pos));
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() => {
                    let d0 = self.pos;
                    let mut v: usize = 0;
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add((self.bytes[self.pos] - b'0') as usize))
                            .ok_or_else(|| self.err(d0, "integer overflow"))?;
                        self.pos += 1;
                    }
                    args.push(ArgTok::Int(v, d0));
                }
                other => {
                    return Err(self.err(
                        self.pos,
                        format!(
                            "expected an argument, found {}",
                            other.map_or("end of input".to_string(), |c| format!(
                                "{:?}",
                                c as char
                            ))
                        ),
                    ));
                }
            }
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                other => {
                    return Err(self.err(
                        self.pos,
                        format!(
                            "expected ',' or ')', found {}",
                            other.map_or("end of input".to_string(), |c| format!(
                                "{:?}",
                                c as char
                            ))
                        ),
                    ));
                }
            }
        }
        let atom = self.assemble(name, start, &args)?;
        validate_atom(&atom, start)?;
        Ok((atom, start))
    }

    fn assemble(&self, name: &str, at: usize, args: &[ArgTok]) -> Result<Atom, CatalogError> {
        let int = |i: usize| -> Result<usize, CatalogError> {
            match args.get(i) {
                Some(&ArgTok::Int(v, _)) => Ok(v),
                Some(&ArgTok::Sign(_, p)) => {
                    Err(self.err(p, format!("{name}: argument {} must be an integer", i + 1)))
                }
                None => Err(self.err(at, format!("{name}: missing argument {}", i + 1))),
            }
        };
        let arity = |k: usize| -> Result<(), CatalogError> {
            if args.len() != k {
                Err(self.err(
                    at,
                    format!("{name} takes {k} argument(s), found {}", args.len()),
                ))
            } else {
                Ok(())
            }
        };
        match name {
            "C" => {
                arity(1)?;
                Ok(Atom::C(int(0)?))
            }
            "EA" => {
                arity(2)?;
                Ok(Atom::EA(int(0)?, int(1)? as u32))
            }
            "D" => {
                arity(1)?;
                Ok(Atom::D(int(0)?))
            }
            "Q" => {
                arity(1)?;
                Ok(Atom::Q(int(0)?))
            }
            "SD" => {
                arity(1)?;
                Ok(Atom::SD(int(0)?))
            }
            "Mod" => {
                arity(1)?;
                Ok(Atom::Mod(int(0)?))
            }
            "ES" => {
                arity(3)?;
                let sign = match args[2] {
                    ArgTok::Sign(s, _) => s,
                    ArgTok::Int(_, p) => {
                        return Err(self.err(p, "ES: third argument must be '+' or '-'"));
                    }
                };
                Ok(Atom::ES(int(0)?, int(1)? as u32, sign))
            }
            "AES" => {
                arity(2)?;
                Ok(Atom::AES(int(0)?, int(1)? as u32))
            }
            _ => Err(self.err(at, format!("unknown family name {name:?}"))),
        }
    }
}

// ----------------------------------------------------------------------
// Builders
// ----------------------------------------------------------------------

fn cyclic_table(m: usize, p: usize) -> Result<GroupTable, CatalogError> {
    let rows: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    Ok(GroupTable::new(p, &rows, &format!("C({m})"))?)
}

/// Dihedral-family tables: elements `r^i s^j` indexed `i + half * j`, where
/// `half = m / 2` and conjugation by `s` sends `r` to `r^twist`.
fn two_generator_table(
    m: usize,
    twist: impl Fn(usize) -> usize,
    s_square: usize,
    label: &str,
) -> Result<GroupTable, CatalogError> {
    let half = m / 2;
    let mut rows = vec![vec![0usize; m]; m];
    for i in 0..half {
        for j in 0..2 {
            for a in 0..half {
                for b in 0..2 {
                    // (r^i s^j)(r^a s^b) = r^(i + twist^j(a)) s^(j+b), with
                    // s^2 contributing r^s_square when j = b = 1.
                    let exp = if j == 0 { a } else { twist(a) % half };
                    let carry = if j == 1 && b == 1 { s_square } else { 0 };
                    let k = (i + exp + carry) % half;
                    rows[i + half * j][a + half * b] = k + half * ((j + b) % 2);
                }
            }
        }
    }
    Ok(GroupTable::new(2, &rows, label)?)
}

fn dihedral(m: usize) -> Result<GroupTable, CatalogError> {
    let half = m / 2;
    two_generator_table(m, move |a| (half - a) % half, 0, &format!("D({m})"))
}

fn quaternion(m: usize) -> Result<GroupTable, CatalogError> {
    let half = m / 2;
    two_generator_table(m, move |a| (half - a) % half, half / 2, &format!("Q({m})"))
}

fn semidihedral(m: usize) -> Result<GroupTable, CatalogError> {
    let half = m / 2;
    two_generator_table(
        m,
        move |a| (a * (half / 2 - 1)) % half,
        0,
        &format!("SD({m})"),
    )
}

fn modular_maximal_cyclic(m: usize) -> Result<GroupTable, CatalogError> {
    let half = m / 2;
    two_generator_table(
        m,
        move |a| (a * (half / 2 + 1)) % half,
        0,
        &format!("Mod({m})"),
    )
}

/// Heisenberg group: unitriangular 3x3 matrices over GF(p), exponent p for
/// odd p. Triples `(a, b, c)` indexed `a*p^2 + b*p + c`.
fn heisenberg(p: usize) -> Result<GroupTable, CatalogError> {
    let ord = p * p * p;
    let mut rows = vec![vec![0usize; ord]; ord];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for a2 in 0..p {
                    for b2 in 0..p {
                        for c2 in 0..p {
                            let na = (a + a2) % p;
                            let nb = (b + b2) % p;
                            let nc = (c + c2 + a * b2) % p;
                            rows[a * p * p + b * p + c][a2 * p * p + b2 * p + c2] =
                                na * p * p + nb * p + nc;
                        }
                    }
                }
            }
        }
    }
    Ok(GroupTable::new(p, &rows, &format!("ES({p},1,+)"))?)
}

/// Exponent-p^2 extraspecial group of order p^3 for odd p:
/// `<a, b | a^(p^2) = b^p = 1, b a b^(-1) = a^(1+p)>`.
/// Pairs `(i, j)` with `i < p^2`, `j < p`, indexed `i*p + j`.
fn extraspecial_minus_p3(p: usize) -> Result<GroupTable, CatalogError> {
    let p2 = p * p;
    let ord = p2 * p;
    let mut rows = vec![vec![0usize; ord]; ord];
    for i in 0..p2 {
        for j in 0..p {
            for u in 0..p2 {
                for v in 0..p {
                    // b^j a^u = a^(u * (1 + jp)) b^j
                    let ni = (i + u * (1 + j * p)) % p2;
                    let nj = (j + v) % p;
                    rows[i * p + j][u * p + v] = ni * p + nj;
                }
            }
        }
    }
    Ok(GroupTable::new(p, &rows, &format!("ES({p},1,-)"))?)
}

/// First central element of order exactly p (used to glue central products).
fn central_order_p_element(g: &GroupTable) -> Result<usize, CatalogError> {
    let subs = g.central_order_p_subgroups()?;
    Ok(subs
        .first()
        .expect("nontrivial p-group has a central order-p element")
        .generators()[0])
}

fn extraspecial_base(p: usize, sign: Sign) -> Result<GroupTable, CatalogError> {
    match (p, sign) {
        (2, Sign::Plus) => dihedral(8),
        (2, Sign::Minus) => quaternion(8),
        (_, Sign::Plus) => heisenberg(p),
        (_, Sign::Minus) => extraspecial_minus_p3(p),
    }
}

fn extraspecial(p: usize, r: u32, sign: Sign) -> Result<GroupTable, CatalogError> {
    // ES(p,r,-) = (minus base) * ES(p,1,+)^(r-1); ES(p,r,+) = plus^r.
    let mut acc = extraspecial_base(p, sign)?;
    for _ in 1..r {
        let plus = extraspecial_base(p, Sign::Plus)?;
        let za = central_order_p_element(&acc)?;
        let zb = central_order_p_element(&plus)?;
        acc = acc.central_product(&plus, za, zb)?;
    }
    Ok(acc)
}

fn almost_extraspecial(p: usize, r: u32) -> Result<GroupTable, CatalogError> {
    let es = extraspecial(p, r, Sign::Plus)?;
    let cp2 = cyclic_table(p * p, p)?;
    let za = central_order_p_element(&es)?;
    let zb = central_order_p_element(&cp2)?; // the element p in Z/p^2
    Ok(es.central_product(&cp2, za, zb)?)
}

fn build_atom(atom: &Atom) -> Result<GroupTable, CatalogError> {
    let mut g = match *atom {
        Atom::C(m) => cyclic_table(m, smallest_prime_factor(m))?,
        Atom::EA(p, n) => {
            let mut acc = cyclic_table(p, p)?;
            for _ in 1..n {
                acc = acc.direct_product(&cyclic_table(p, p)?)?;
            }
            acc
        }
        Atom::D(m) => dihedral(m)?,
        Atom::Q(m) => quaternion(m)?,
        Atom::SD(m) => semidihedral(m)?,
        Atom::Mod(m) => modular_maximal_cyclic(m)?,
        Atom::ES(p, r, s) => extraspecial(p, r, s)?,
        Atom::AES(p, r) => almost_extraspecial(p, r)?,
    };
    g.set_label(&atom.to_string());
    Ok(g)
}

// ----------------------------------------------------------------------
// Order catalogs
// ----------------------------------------------------------------------

/// Default order cap per prime. The caps bound the exhaustive sweeps (table
/// validation is cubic in the order and the radical oracle is cubic in the
/// dimension of the group algebra).
pub fn default_order_cap(p: usize) -> usize {
    match p {
        2 => 256,
        3 => 243,
        5 => 125,
        _ => p * p,
    }
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let hi = n.min(max);
        for first in (1..=hi).rev() {
            prefix.push(first);
            rec(n - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Renders a partition of n as an abelian spec: trailing 1-parts become a
/// single `EA` atom (or `C(p)` if there is only one), the rest ascend.
fn abelian_spec(p: usize, partition: &[u32]) -> GroupSpec {
    let ones = partition.iter().filter(|&&k| k == 1).count();
    let mut atoms: Vec<Atom> = Vec::new();
    if ones == 1 {
        atoms.push(Atom::C(p));
    } else if ones >= 2 {
        atoms.push(Atom::EA(p, ones as u32));
    }
    let mut rest: Vec<u32> = partition.iter().copied().filter(|&k| k > 1).collect();
    rest.sort_unstable();
    for k in rest {
        atoms.push(Atom::C(p.pow(k)));
    }
    GroupSpec { atoms }
}

/// The elementary-abelian tail used in product specs: `C(p)` for rank 1.
fn ea_tail(p: usize, e: u32) -> Atom {
    if e == 1 {
        Atom::C(p)
    } else {
        Atom::EA(p, e)
    }
}

/// All distinct-by-construction catalog specs of order `p^n`, built.
///
/// Sections, in order: abelian types (partitions of `n`, largest part
/// first), the maximal-class 2-families `D/Q/SD/Mod`, extraspecial and
/// almost extraspecial groups, and the `ES x EA`, `D x EA`, `Q x EA`
/// products used by the theorem sweeps.
pub fn catalog_of_order(
    p: usize,
    n: u32,
    cap: usize,
) -> Result<Vec<(GroupSpec, GroupTable)>, CatalogError> {
    if !is_prime(p) {
        return Err(CatalogError::Group(GroupError::NotPrime { p }));
    }
    let order = p
        .checked_pow(n)
        .ok_or(CatalogError::SizeCapExceeded { order: usize::MAX, cap })?;
    if order > cap {
        return Err(CatalogError::SizeCapExceeded { order, cap });
    }
    let mut specs: Vec<GroupSpec> = Vec::new();
    if n == 0 {
        return Ok(Vec::new());
    }

    for part in partitions(n) {
        specs.push(abelian_spec(p, &part));
    }
    if p == 2 && n >= 3 {
        specs.push(GroupSpec { atoms: vec![Atom::D(order)] });
        specs.push(GroupSpec { atoms: vec![Atom::Q(order)] });
    }
    if p == 2 && n >= 4 {
        specs.push(GroupSpec { atoms: vec![Atom::SD(order)] });
        specs.push(GroupSpec { atoms: vec![Atom::Mod(order)] });
    }
    // Extraspecial atoms; for p = 2, rank 1 duplicates D(8)/Q(8).
    if n % 2 == 1 && n >= 3 {
        let r = (n - 1) / 2;
        if p != 2 || r >= 2 {
            specs.push(GroupSpec { atoms: vec![Atom::ES(p, r, Sign::Plus)] });
            specs.push(GroupSpec { atoms: vec![Atom::ES(p, r, Sign::Minus)] });
        }
    }
    if n.is_multiple_of(2) && n >= 4 {
        let r = (n - 2) / 2;
        specs.push(GroupSpec { atoms: vec![Atom::AES(p, r)] });
    }
    // ES x EA products (r descending), skipping the p = 2 rank-1 aliases.
    let mut r = if n >= 4 { (n - 2) / 2 } else { 0 };
    while r >= 1 {
        let e = n - (2 * r + 1);
        if e >= 1 && (p != 2 || r >= 2) {
            for sign in [Sign::Plus, Sign::Minus] {
                specs.push(GroupSpec {
                    atoms: vec![Atom::ES(p, r, sign), ea_tail(p, e)],
                });
            }
        }
        r -= 1;
    }
    // D x EA and Q x EA products (d descending).
    if p == 2 && n >= 4 {
        for d in (3..=(n - 1)).rev() {
            let e = n - d;
            specs.push(GroupSpec {
                atoms: vec![Atom::D(2usize.pow(d)), ea_tail(2, e)],
            });
        }
        for d in (3..=(n - 1)).rev() {
            let e = n - d;
            specs.push(GroupSpec {
                atoms: vec![Atom::Q(2usize.pow(d)), ea_tail(2, e)],
            });
        }
    }

    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let table = spec.build()?;
        debug_assert_eq!(table.order(), order);
        out.push((spec, table));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> GroupTable {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    fn involutions(g: &GroupTable) -> usize {
        (1..g.order())
            .filter(|&x| g.element_order(x).unwrap() == 2)
            .count()
    }

    #[test]
    fn parse_round_trips_canonical_forms() {
        for s in [
            "C(8)",
            "EA(3,2)",
            "D(16)",
            "Q(32)",
            "SD(16)",
            "Mod(32)",
            "ES(3,1,+)",
            "ES(2,2,-)",
            "AES(2,1)",
            "C(8)xEA(2,2)",
            "D(8)xC(2)",
        ] {
            assert_eq!(GroupSpec::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn parse_ignores_whitespace() {
        let spec = GroupSpec::parse("  ES( 3 , 1 , + )  x  C( 3 ) ").unwrap();
        assert_eq!(spec.to_string(), "ES(3,1,+)xC(3)");
        assert_eq!(spec.order(), 81);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match GroupSpec::parse("C(6)").unwrap_err() {
            CatalogError::InvalidSpec { position, message } => {
                assert_eq!(position, 0);
                assert!(message.contains("order not a prime power"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        match GroupSpec::parse("C(8)xF(4)").unwrap_err() {
            CatalogError::Parse { position, message } => {
                assert_eq!(position, 5);
                assert!(message.contains("unknown family name"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            GroupSpec::parse("C(8").unwrap_err(),
            CatalogError::Parse { .. }
        ));
        assert!(matches!(
            GroupSpec::parse("ES(3,1)").unwrap_err(),
            CatalogError::Parse { .. }
        ));
        assert!(matches!(
            GroupSpec::parse("EA(4,2)").unwrap_err(),
            CatalogError::InvalidSpec { .. }
        ));
        match GroupSpec::parse("C(8)xC(9)").unwrap_err() {
            CatalogError::InvalidSpec { position, message } => {
                assert_eq!(position, 5);
                assert!(message.contains("mixed primes"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            GroupSpec::parse("C(1)").unwrap_err(),
            CatalogError::InvalidSpec { .. }
        ));
        assert!(matches!(
            GroupSpec::parse("D(4)").unwrap_err(),
            CatalogError::InvalidSpec { .. }
        ));
        assert!(matches!(
            GroupSpec::parse("SD(8)").unwrap_err(),
            CatalogError::InvalidSpec { .. }
        ));
    }

    #[test]
    fn cyclic_and_elementary_abelian_builders() {
        let c9 = build("C(9)");
        assert_eq!((c9.order(), c9.exponent()), (9, 9));
        assert_eq!(c9.p(), 3);
        let ea = build("EA(3,2)");
        assert_eq!((ea.order(), ea.exponent()), (9, 3));
        assert!(ea.is_abelian());
    }

    #[test]
    fn two_generator_families_have_distinct_involution_counts() {
        // The four order-16 maximal-class-and-friends families are told
        // apart by their involution counts: D 9, SD 5, Mod 3, Q 1.
        assert_eq!(involutions(&build("D(16)")), 9);
        assert_eq!(involutions(&build("SD(16)")), 5);
        assert_eq!(involutions(&build("Mod(16)")), 3);
        assert_eq!(involutions(&build("Q(16)")), 1);
    }

    #[test]
    fn modular_group_has_cyclic_maximal_subgroup() {
        let m = build("Mod(16)");
        assert_eq!(m.exponent(), 8); // an element of order 2^(n-1)
        assert!(!m.is_abelian());
        let st = m.structural_subgroups();
        assert_eq!(st.center.order(), 4);
        assert_eq!(st.derived.order(), 2);
    }

    #[test]
    fn quaternion_has_unique_involution_in_center() {
        let q8 = build("Q(8)");
        assert_eq!(involutions(&q8), 1);
        let st = q8.structural_subgroups();
        assert_eq!(st.center.order(), 2);
        assert_eq!(st.frattini.order(), 2);
        assert_eq!(q8.exponent(), 4);
    }

    #[test]
    fn heisenberg_group_has_exponent_p() {
        let g = build("ES(3,1,+)");
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 3);
        assert!(!g.is_abelian());
        let st = g.structural_subgroups();
        assert_eq!(st.center.order(), 3);
        assert_eq!(st.derived.elements(), st.center.elements());
        assert_eq!(st.frattini.elements(), st.center.elements());
    }

    #[test]
    fn exponent_nine_extraspecial_group() {
        let g = build("ES(3,1,-)");
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 9);
        let st = g.structural_subgroups();
        assert_eq!(st.center.order(), 3);
        assert_eq!(st.derived.elements(), st.center.elements());
    }

    #[test]
    fn rank_two_extraspecial_two_groups() {
        let plus = build("ES(2,2,+)");
        let minus = build("ES(2,2,-)");
        for g in [&plus, &minus] {
            assert_eq!(g.order(), 32);
            assert_eq!(g.exponent(), 4);
            let st = g.structural_subgroups();
            assert_eq!(st.center.order(), 2);
            assert_eq!(st.derived.elements(), st.center.elements());
            assert_eq!(st.frattini.elements(), st.center.elements());
        }
        // The two types differ: central products of D(8)s versus one Q(8).
        assert_eq!(involutions(&plus), 19);
        assert_eq!(involutions(&minus), 11);
    }

    #[test]
    fn almost_extraspecial_sixteen() {
        let g = build("AES(2,1)");
        assert_eq!(g.order(), 16);
        let st = g.structural_subgroups();
        assert_eq!(st.center.order(), 4);
        // Cyclic center of order 4:
        assert!(st
            .center
            .elements()
            .iter()
            .any(|&z| g.element_order(z).unwrap() == 4));
        assert_eq!(st.frattini.order(), 2);
        assert_eq!(st.derived.order(), 2);
        assert_eq!(g.exponent(), 4);
    }

    #[test]
    fn odd_extraspecial_rank_two() {
        let g = build("ES(3,2,-)");
        assert_eq!(g.order(), 243);
        assert_eq!(g.exponent(), 9);
        let st = g.structural_subgroups();
        assert_eq!(st.center.order(), 3);
        assert_eq!(st.frattini.elements(), st.center.elements());
    }

    #[test]
    fn catalog_small_orders() {
        let names = |p: usize, n: u32| -> Vec<String> {
            catalog_of_order(p, n, default_order_cap(p))
                .unwrap()
                .into_iter()
                .map(|(s, _)| s.to_string())
                .collect()
        };
        assert_eq!(names(2, 1), vec!["C(2)"]);
        assert_eq!(names(2, 2), vec!["C(4)", "EA(2,2)"]);
        assert_eq!(
            names(2, 3),
            vec!["C(8)", "C(2)xC(4)", "EA(2,3)", "D(8)", "Q(8)"]
        );
        assert_eq!(
            names(3, 3),
            vec!["C(27)", "C(3)xC(9)", "EA(3,3)", "ES(3,1,+)", "ES(3,1,-)"]
        );
        assert_eq!(
            names(2, 4),
            vec![
                "C(16)",
                "C(2)xC(8)",
                "C(4)xC(4)",
                "EA(2,2)xC(4)",
                "EA(2,4)",
                "D(16)",
                "Q(16)",
                "SD(16)",
                "Mod(16)",
                "AES(2,1)",
                "D(8)xC(2)",
                "Q(8)xC(2)",
            ]
        );
    }

    #[test]
    fn catalog_entries_have_the_requested_order() {
        for (spec, table) in catalog_of_order(2, 5, 256).unwrap() {
            assert_eq!(table.order(), 32, "wrong order for {spec}");
            assert_eq!(table.label(), spec.to_string());
        }
        assert!(catalog_of_order(2, 0, 256).unwrap().is_empty());
    }

    #[test]
    fn catalog_respects_the_cap() {
        assert!(matches!(
            catalog_of_order(2, 9, 256).unwrap_err(),
            CatalogError::SizeCapExceeded { order: 512, cap: 256 }
        ));
    }
}
