//! Trivariate bicycle code construction.
//!
//! Codes are specified by two polynomials A and B in the commuting shift
//! variables x, y, z over Z_l x Z_m, with z = xy. The check matrices are
//! H_X = [A|B] and H_Z = [B^T|A^T].

use std::fmt;

use thiserror::Error;

use crate::gf2::{intersect_kernels, BinaryMatrix, BinaryVector, Echelon};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("spec syntax error: {0}")]
    Syntax(String),
    #[error("l and m must be positive (got l={l}, m={m})")]
    BadDimensions { l: usize, m: usize },
    #[error("duplicate canonical term {term} in {poly} (terms would cancel over GF(2))")]
    DuplicateTerm { poly: char, term: String },
    #[error("polynomial {0} is empty")]
    EmptyPolynomial(char),
}

/// An element of the monomial group M = Z_l x Z_m, in canonical form
/// 0 <= ex < l, 0 <= ey < m. z^c canonicalizes to (c mod l, c mod m).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pub ex: usize,
    pub ey: usize,
}

/// Group context carrying the cyclic orders l and m.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Group {
    pub l: usize,
    pub m: usize,
}

impl Group {
    pub fn new(l: usize, m: usize) -> Self {
        Self { l, m }
    }

    pub fn size(&self) -> usize {
        self.l * self.m
    }

    pub fn identity(&self) -> Monomial {
        Monomial { ex: 0, ey: 0 }
    }

    pub fn mul(&self, a: Monomial, b: Monomial) -> Monomial {
        Monomial {
            ex: (a.ex + b.ex) % self.l,
            ey: (a.ey + b.ey) % self.m,
        }
    }

    pub fn inv(&self, a: Monomial) -> Monomial {
        Monomial {
            ex: (self.l - a.ex) % self.l,
            ey: (self.m - a.ey) % self.m,
        }
    }

    pub fn pow(&self, a: Monomial, e: usize) -> Monomial {
        Monomial {
            ex: a.ex * e % self.l,
            ey: a.ey * e % self.m,
        }
    }

    /// Order of the element in the group.
    pub fn ord(&self, a: Monomial) -> usize {
        let mut cur = a;
        let mut n = 1;
        while cur != self.identity() {
            cur = self.mul(cur, a);
            n += 1;
        }
        n
    }

    /// All elements of the subgroup generated by `gens`, by closure.
    pub fn span(&self, gens: &[Monomial]) -> Vec<Monomial> {
        let mut seen = vec![false; self.size()];
        seen[0] = true;
        let mut out = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[self.index(y)] {
                    seen[self.index(y)] = true;
                    out.push(y);
                    frontier.push(y);
                }
            }
        }
        out
    }

    /// Row/column index of a monomial label: ex * m + ey.
    pub fn index(&self, a: Monomial) -> usize {
        a.ex * self.m + a.ey
    }

    pub fn from_index(&self, i: usize) -> Monomial {
        Monomial {
            ex: i / self.m,
            ey: i % self.m,
        }
    }
}

/// A term of a code polynomial as written: 1 or a power of x, y, z.
/// The canonical group element is derived per (l, m); the written form is
/// kept for display.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Term {
    One,
    X(usize),
    Y(usize),
    Z(usize),
}

impl Term {
    pub fn canonical(&self, group: &Group) -> Monomial {
        match *self {
            Term::One => group.identity(),
            Term::X(e) => Monomial {
                ex: e % group.l,
                ey: 0,
            },
            Term::Y(e) => Monomial {
                ex: 0,
                ey: e % group.m,
            },
            Term::Z(e) => Monomial {
                ex: e % group.l,
                ey: e % group.m,
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Term::One => write!(f, "1"),
            Term::X(1) => write!(f, "x"),
            Term::Y(1) => write!(f, "y"),
            Term::Z(1) => write!(f, "z"),
            Term::X(e) => write!(f, "x^{e}"),
            Term::Y(e) => write!(f, "y^{e}"),
            Term::Z(e) => write!(f, "z^{e}"),
        }
    }
}

/// A TB code specification: l, m and the ordered term lists of A and B.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeSpec {
    pub l: usize,
    pub m: usize,
    pub a: Vec<Term>,
    pub b: Vec<Term>,
}

impl CodeSpec {
    pub fn new(l: usize, m: usize, a: Vec<Term>, b: Vec<Term>) -> Result<Self, SpecError> {
        let spec = Self { l, m, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn group(&self) -> Group {
        Group::new(self.l, self.m)
    }

    pub fn weight(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn a_monomials(&self) -> Vec<Monomial> {
        let g = self.group();
        self.a.iter().map(|t| t.canonical(&g)).collect()
    }

    pub fn b_monomials(&self) -> Vec<Monomial> {
        let g = self.group();
        self.b.iter().map(|t| t.canonical(&g)).collect()
    }

    fn validate(&self) -> Result<(), SpecError> {
        if self.l == 0 || self.m == 0 {
            return Err(SpecError::BadDimensions { l: self.l, m: self.m });
        }
        if self.a.is_empty() {
            return Err(SpecError::EmptyPolynomial('A'));
        }
        if self.b.is_empty() {
            return Err(SpecError::EmptyPolynomial('B'));
        }
        let g = self.group();
        for (name, terms) in [('A', &self.a), ('B', &self.b)] {
            let mut seen = std::collections::HashSet::new();
            for t in terms.iter() {
                if !seen.insert(t.canonical(&g)) {
                    return Err(SpecError::DuplicateTerm {
                        poly: name,
                        term: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses `l=<int> m=<int> A=<poly> B=<poly>`; whitespace-insensitive
    /// apart from the separation of the four fields.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut l = None;
        let mut m = None;
        let mut a = None;
        let mut b = None;
        for field in text.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| SpecError::Syntax(format!("expected key=value, got {field:?}")))?;
            match key {
                "l" => l = Some(parse_usize(value)?),
                "m" => m = Some(parse_usize(value)?),
                "A" => a = Some(parse_poly(value)?),
                "B" => b = Some(parse_poly(value)?),
                other => return Err(SpecError::Syntax(format!("unknown field {other:?}"))),
            }
        }
        let l = l.ok_or_else(|| SpecError::Syntax("missing l=".into()))?;
        let m = m.ok_or_else(|| SpecError::Syntax("missing m=".into()))?;
        let a = a.ok_or_else(|| SpecError::Syntax("missing A=".into()))?;
        let b = b.ok_or_else(|| SpecError::Syntax("missing B=".into()))?;
        Self::new(l, m, a, b)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = |terms: &[Term]| {
            terms
                .iter()
                .map(Term::to_string)
                .collect::<Vec<_>>()
                .join("+")
        };
        write!(
            f,
            "l={} m={} A={} B={}",
            self.l,
            self.m,
            poly(&self.a),
            poly(&self.b)
        )
    }
}

fn parse_usize(s: &str) -> Result<usize, SpecError> {
    s.parse()
        .map_err(|_| SpecError::Syntax(format!("bad integer {s:?}")))
}

fn parse_poly(s: &str) -> Result<Vec<Term>, SpecError> {
    let mut terms = Vec::new();
    for raw in s.split('+') {
        let t = raw.trim();
        if t.is_empty() {
            return Err(SpecError::Syntax("empty term".into()));
        }
        if t == "1" {
            terms.push(Term::One);
            continue;
        }
        let (var, exp) = match t.split_once('^') {
            Some((v, e)) => (v, parse_usize(e)?),
            None => (t, 1),
        };
        let term = match var {
            "x" => Term::X(exp),
            "y" => Term::Y(exp),
            "z" => Term::Z(exp),
            other => return Err(SpecError::Syntax(format!("bad term {other:?}"))),
        };
        terms.push(term);
    }
    Ok(terms)
}

/// A CSS code given by its two check matrices, with a logical-operator basis.
///
/// This is the substrate the decoder and simulator run on; TB codes and the
/// surface-code baseline both produce one.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub h_x: BinaryMatrix,
    pub h_z: BinaryMatrix,
    pub n: usize,
    pub k: usize,
    /// X-type logicals: in ker(h_z), independent modulo rs(h_x).
    pub logicals_x: Vec<BinaryVector>,
    /// Z-type logicals: in ker(h_x), independent modulo rs(h_z).
    pub logicals_z: Vec<BinaryVector>,
}

impl CssCode {
    /// Assembles a CSS code from commuting check matrices, deriving k and a
    /// logical basis. Panics if the matrices do not commute; callers build
    /// them from constructions where commutation is structural.
    pub fn from_checks(h_x: BinaryMatrix, h_z: BinaryMatrix) -> Self {
        assert_eq!(h_x.cols(), h_z.cols());
        assert!(
            h_x.mul_transpose(&h_z).is_zero(),
            "check matrices do not commute"
        );
        let n = h_x.cols();
        let k = n - h_x.rank() - h_z.rank();
        let logicals_z = logical_basis(&h_x, &h_z, k);
        let logicals_x = logical_basis(&h_z, &h_x, k);
        Self {
            h_x,
            h_z,
            n,
            k,
            logicals_x,
            logicals_z,
        }
    }
}

/// k coset representatives of ker(h_ker) modulo rs(h_rs).
///
/// No symplectic pairing is attempted; failure detection only needs
/// row-space membership.
fn logical_basis(h_ker: &BinaryMatrix, h_rs: &BinaryMatrix, k: usize) -> Vec<BinaryVector> {
    let mut span = Echelon::from_matrix(h_rs);
    let kernel = h_ker.kernel_basis();
    let mut logicals = Vec::with_capacity(k);
    for i in 0..kernel.rows() {
        if logicals.len() == k {
            break;
        }
        let v = kernel.row(i);
        if span.insert(v.clone()) {
            logicals.push(v);
        }
    }
    assert_eq!(logicals.len(), k, "kernel basis must contain k coset reps");
    logicals
}

/// A constructed TB code: spec, canonical term monomials, and the CSS data.
#[derive(Clone, Debug)]
pub struct TbCode {
    pub spec: CodeSpec,
    pub group: Group,
    pub a_monos: Vec<Monomial>,
    pub b_monos: Vec<Monomial>,
    pub css: CssCode,
}

impl TbCode {
    pub fn n(&self) -> usize {
        self.css.n
    }

    pub fn k(&self) -> usize {
        self.css.k
    }

    pub fn weight(&self) -> usize {
        self.spec.weight()
    }
}

/// The lm x lm permutation matrix x^ex y^ey, where x = S_l (x) I_m and
/// y = I_l (x) S_m. Row a*m+b has its single 1 at column
/// ((a+ex) mod l)*m + ((b+ey) mod m).
pub fn monomial_matrix(mono: Monomial, l: usize, m: usize) -> BinaryMatrix {
    let n = l * m;
    let mut out = BinaryMatrix::zeros(n, n);
    for a in 0..l {
        for b in 0..m {
            out.set(a * m + b, (a + mono.ex) % l * m + (b + mono.ey) % m, true);
        }
    }
    out
}

fn poly_matrix(monos: &[Monomial], l: usize, m: usize) -> BinaryMatrix {
    let n = l * m;
    let mut out = BinaryMatrix::zeros(n, n);
    for mono in monos {
        for a in 0..l {
            for b in 0..m {
                let c = (a + mono.ex) % l * m + (b + mono.ey) % m;
                out.set(a * m + b, c, true);
            }
        }
    }
    out
}

/// Builds the code for a spec: check matrices, parameters, logical basis.
///
/// k = 0 is a legal outcome (the object is still constructible so search
/// pipelines can filter on it); the logical lists are then empty.
pub fn build_code(spec: &CodeSpec) -> Result<TbCode, SpecError> {
    spec.validate()?;
    let group = spec.group();
    let a_monos = spec.a_monomials();
    let b_monos = spec.b_monomials();
    let (l, m) = (spec.l, spec.m);

    let a = poly_matrix(&a_monos, l, m);
    let b = poly_matrix(&b_monos, l, m);
    let h_x = a.hconcat(&b);
    let h_z = b.transpose().hconcat(&a.transpose());

    let css = CssCode::from_checks(h_x, h_z);
    debug_assert_eq!(css.n, 2 * l * m);
    // Two-route consistency: k from the kernel intersection must agree with
    // the rank formula used by CssCode::from_checks.
    let k_int = 2 * intersect_kernels(&a, &b).expect("equal widths").rows();
    assert_eq!(css.k, k_int, "rank-based k disagrees with kernel-intersection k");

    Ok(TbCode {
        spec: spec.clone(),
        group,
        a_monos,
        b_monos,
        css,
    })
}

/// The locality constant c = k d^2 / n from the BPT bound k d^2 <= c n.
pub fn bpt_locality_constant(code: &TbCode, d: usize) -> f64 {
    code.k() as f64 * (d * d) as f64 / code.n() as f64
}
