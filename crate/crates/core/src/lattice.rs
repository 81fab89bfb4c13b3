//! Integral lattices with their bilinear form: construction from block
//! expressions, pairings over Q, Q(sqrt n) and its complexification,
//! invariants, duals, complements, saturation and the quartic intersection
//! form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat;
use crate::scalar::{CScalar, ExtScalar, Int, Rat};

/// Integer coordinate vector in a fixed lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVec(pub Vec<Int>);

/// Rational coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVec(pub Vec<Rat>);

/// Vector with coordinates in Q(sqrt n); all coordinates share the radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtVec {
    coords: Vec<ExtScalar>,
}

/// Complexified vector: re + i*im, both over the same Q(sqrt n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CVec {
    pub re: ExtVec,
    pub im: ExtVec,
}

impl IntVec {
    pub fn from_i64(v: &[i64]) -> Self {
        IntVec(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn to_qvec(&self) -> QVec {
        QVec(self.0.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    pub fn to_extvec(&self, n: u64) -> ExtVec {
        ExtVec {
            coords: self
                .0
                .iter()
                .map(|x| ExtScalar::from_rat(Rat::from_integer(x.clone()), n))
                .collect(),
        }
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x.clone()).collect())
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> Int {
        self.0
            .iter()
            .fold(Int::zero(), |acc, x| acc.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == Int::one()
    }

    /// Canonical sign representative: first nonzero coordinate positive.
    pub fn canonical_sign(&self) -> IntVec {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl QVec {
    pub fn from_i64(v: &[i64]) -> Self {
        IntVec::from_i64(v).to_qvec()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> QVec {
        QVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_extvec(&self, n: u64) -> ExtVec {
        ExtVec {
            coords: self
                .0
                .iter()
                .map(|x| ExtScalar::from_rat(x.clone(), n))
                .collect(),
        }
    }
}

impl ExtVec {
    pub fn new(coords: Vec<ExtScalar>) -> Result<Self> {
        if let Some(first) = coords.first() {
            for c in &coords[1..] {
                first.compatible(c)?;
            }
        }
        Ok(ExtVec { coords })
    }

    pub fn zero(len: usize, n: u64) -> Self {
        ExtVec {
            coords: (0..len).map(|_| ExtScalar::zero(n)).collect(),
        }
    }

    pub fn coords(&self) -> &[ExtScalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn radicand(&self) -> u64 {
        self.coords
            .first()
            .map(|c| c.radicand())
            .expect("radicand of empty vector")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &ExtVec) -> ExtVec {
        ExtVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ExtVec) -> ExtVec {
        ExtVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> ExtVec {
        ExtVec {
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &ExtScalar) -> ExtVec {
        ExtVec {
            coords: self.coords.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn to_cvec(&self) -> CVec {
        let n = self.radicand();
        CVec {
            re: self.clone(),
            im: ExtVec::zero(self.len(), n),
        }
    }
}

impl CVec {
    pub fn new(re: ExtVec, im: ExtVec) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                got: im.len(),
            });
        }
        if !re.is_empty() && re.radicand() != im.radicand() {
            return Err(Error::MixedRadicand {
                left: re.radicand(),
                right: im.radicand(),
            });
        }
        Ok(CVec { re, im })
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn radicand(&self) -> u64 {
        self.re.radicand()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &CVec) -> CVec {
        CVec {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        CVec {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> CVec {
        CVec {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn scale_ext(&self, c: &ExtScalar) -> CVec {
        CVec {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    pub fn scale_c(&self, c: &CScalar) -> CVec {
        // (re + i im)(cr + i ci) = (re*cr - im*ci) + i(re*ci + im*cr)
        CVec {
            re: self.re.scale(&c.re).sub(&self.im.scale(&c.im)),
            im: self.re.scale(&c.im).add(&self.im.scale(&c.re)),
        }
    }

    pub fn div_ext(&self, c: &ExtScalar) -> Result<CVec> {
        let inv = c.inv()?;
        Ok(self.scale_ext(&inv))
    }

    pub fn conj(&self) -> CVec {
        CVec {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn component(&self, i: usize) -> CScalar {
        CScalar::new(self.re.coords()[i].clone(), self.im.coords()[i].clone())
    }
}

/// How a basis range of a block-built lattice was produced. Kept so that a
/// hyperbolic summand can later be selected by block index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// U(n): Gram [[0,n],[n,0]].
    U(u64),
    /// E8 scaled by m (m = -1 gives the negative definite E8 lattice).
    E8(i64),
    /// Rank-one lattice <k>.
    Rank1(i64),
    /// Explicit Gram block.
    Gram,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub start: usize,
    pub len: usize,
}

/// An integral lattice: symmetric Gram matrix plus basis labels and the block
/// decomposition it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<Int>>,
    labels: Vec<String>,
    blocks: Vec<Block>,
}

/// Cartan matrix of E8 (positive definite, determinant 1).
/// Simple roots numbered along the A7 chain with the branch node at index 4.
const E8_GRAM: [[i64; 8]; 8] = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2],
];

/// Block expression for building a lattice. JSON form:
/// `{"sum":[{"U":2},{"U":2},{"U":2},{"E8":-1},{"rank1":-2},{"rank1":-2}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum LatticeSpec {
    Sum {
        sum: Vec<LatticeSpec>,
    },
    U {
        #[serde(rename = "U")]
        u: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pow: Option<u32>,
    },
    E8 {
        #[serde(rename = "E8")]
        e8: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pow: Option<u32>,
    },
    Rank1 {
        rank1: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pow: Option<u32>,
    },
    Gram {
        gram: Vec<Vec<i64>>,
    },
    Twist {
        twist: Box<TwistSpec>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistSpec {
    pub of: LatticeSpec,
    pub by: i64,
}

impl Lattice {
    /// Build directly from a Gram matrix (must be square and symmetric).
    pub fn from_gram(gram: Vec<Vec<Int>>, labels: Option<Vec<String>>) -> Result<Self> {
        let r = gram.len();
        for row in &gram {
            if row.len() != r {
                return Err(Error::InvalidSpec("Gram matrix is not square".into()));
            }
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidSpec("Gram matrix is not symmetric".into()));
                }
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != r {
                    return Err(Error::InvalidSpec("wrong number of basis labels".into()));
                }
                l
            }
            None => (0..r).map(|i| format!("b{i}")).collect(),
        };
        let blocks = vec![Block {
            kind: BlockKind::Gram,
            start: 0,
            len: r,
        }];
        Ok(Lattice { gram, labels, blocks })
    }

    pub fn from_gram_i64(gram: &[Vec<i64>]) -> Result<Self> {
        let g = gram
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        Lattice::from_gram(g, None)
    }

    /// Assemble a lattice from a block expression.
    pub fn build(spec: &LatticeSpec) -> Result<Self> {
        let mut gram: Vec<Vec<Int>> = Vec::new();
        let mut labels = Vec::new();
        let mut blocks = Vec::new();
        let mut u_count = 0usize;
        append_spec(spec, 1, &mut gram, &mut labels, &mut blocks, &mut u_count)?;
        if gram.is_empty() {
            return Err(Error::InvalidSpec("empty lattice spec".into()));
        }
        Ok(Lattice { gram, labels, blocks })
    }

    /// Parse the textual mini-language, e.g. `U(2)^3⊕E8(-1)⊕(-2)^2`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parsed = parse_spec_string(spec)?;
        Lattice::build(&parsed)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Int>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn gram_rat(&self) -> Vec<Vec<Rat>> {
        mat::int_to_rat_mat(&self.gram)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: len,
            });
        }
        Ok(())
    }

    /// Gram-matrix-weighted covector G*x, integer version.
    pub fn gram_apply_int(&self, x: &IntVec) -> Vec<Int> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(&x.0).map(|(g, c)| g * c).sum())
            .collect()
    }

    pub fn gram_apply_q(&self, x: &QVec) -> Vec<Rat> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x.0)
                    .map(|(g, c)| Rat::from_integer(g.clone()) * c)
                    .sum()
            })
            .collect()
    }

    pub fn gram_apply_ext(&self, x: &ExtVec) -> Vec<ExtScalar> {
        let n = x.radicand();
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x.coords())
                    .fold(ExtScalar::zero(n), |acc, (g, c)| acc.add(&c.scale_int(g)))
            })
            .collect()
    }

    pub fn pair_int(&self, x: &IntVec, y: &IntVec) -> Result<Int> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let gx = self.gram_apply_int(x);
        Ok(gx.iter().zip(&y.0).map(|(a, b)| a * b).sum())
    }

    pub fn pair_q(&self, x: &QVec, y: &QVec) -> Result<Rat> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let gx = self.gram_apply_q(x);
        Ok(gx.iter().zip(&y.0).map(|(a, b)| a * b).sum())
    }

    pub fn pair_ext(&self, x: &ExtVec, y: &ExtVec) -> Result<ExtScalar> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        if x.radicand() != y.radicand() {
            return Err(Error::MixedRadicand {
                left: x.radicand(),
                right: y.radicand(),
            });
        }
        let n = x.radicand();
        let gx = self.gram_apply_ext(x);
        Ok(gx
            .iter()
            .zip(y.coords())
            .fold(ExtScalar::zero(n), |acc, (a, b)| acc.add(&a.mul(b))))
    }

    /// Complex bilinear pairing; with `conjugate` set, computes x . conj(y).
    pub fn pair_c(&self, x: &CVec, y: &CVec, conjugate: bool) -> Result<CScalar> {
        let y = if conjugate { y.conj() } else { y.clone() };
        let rr = self.pair_ext(&x.re, &y.re)?;
        let ii = self.pair_ext(&x.im, &y.im)?;
        let ri = self.pair_ext(&x.re, &y.im)?;
        let ir = self.pair_ext(&x.im, &y.re)?;
        Ok(CScalar::new(rr.sub(&ii), ri.add(&ir)))
    }

    pub fn pair_ext_int(&self, x: &ExtVec, y: &IntVec) -> Result<ExtScalar> {
        self.pair_ext(x, &y.to_extvec(x.radicand()))
    }

    pub fn pair_c_int(&self, x: &CVec, y: &IntVec) -> Result<CScalar> {
        let ye = y.to_extvec(x.radicand());
        Ok(CScalar::new(
            self.pair_ext(&x.re, &ye)?,
            self.pair_ext(&x.im, &ye)?,
        ))
    }

    pub fn q_int(&self, x: &IntVec) -> Result<Int> {
        self.pair_int(x, x)
    }

    pub fn q_q(&self, x: &QVec) -> Result<Rat> {
        self.pair_q(x, x)
    }

    pub fn q_ext(&self, x: &ExtVec) -> Result<ExtScalar> {
        self.pair_ext(x, x)
    }

    /// Complex bilinear square of a complexified vector.
    pub fn q_c(&self, x: &CVec) -> Result<CScalar> {
        self.pair_c(x, x, false)
    }

    /// (pos, neg, disc). Errors on a degenerate form.
    pub fn signature_disc(&self) -> Result<(usize, usize, Int)> {
        let disc = mat::det_bareiss(&self.gram);
        if disc.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        let (pos, neg, zero) = mat::inertia_sym(&self.gram_rat());
        debug_assert_eq!(zero, 0);
        Ok((pos, neg, disc))
    }

    /// Solve gram * y = f exactly over the rationals: the class dual to the
    /// functional z -> f(z).
    pub fn dual_class(&self, f: &[Rat]) -> Result<QVec> {
        self.check_len(f.len())?;
        match mat::solve_rat(&self.gram_rat(), f) {
            Some(y) => Ok(QVec(y)),
            None => Err(Error::DegenerateLattice),
        }
    }

    /// gcd of D . L, the divisibility of D in this lattice.
    pub fn divisibility(&self, d: &IntVec) -> Result<Int> {
        self.check_len(d.len())?;
        if d.is_zero() {
            return Err(Error::ZeroVector);
        }
        let gd = self.gram_apply_int(d);
        Ok(gd.iter().fold(Int::zero(), |acc, x| acc.gcd(x)))
    }

    /// Primitive (saturated) sublattice orthogonal to a set of constraint
    /// vectors, with the restricted Gram matrix. An ExtScalar constraint
    /// a + b*sqrt(n) = 0 splits into a = 0 and b = 0 when n is not a perfect
    /// square.
    pub fn orth_complement(&self, constraints: &[Constraint]) -> Result<Sublattice> {
        let rows = self.constraint_rows(constraints)?;
        self.complement_from_rows(rows)
    }

    fn constraint_rows(&self, constraints: &[Constraint]) -> Result<Vec<Vec<Rat>>> {
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for c in constraints {
            match c {
                Constraint::Q(v) => {
                    self.check_len(v.len())?;
                    rows.push(self.gram_apply_q(v));
                }
                Constraint::Ext(v) => {
                    self.check_len(v.len())?;
                    let gv = self.gram_apply_ext(v);
                    match gv.first().and_then(|s| s.square_root_of_radicand()) {
                        Some(m) => {
                            // sqrt(n) is the integer m: single rational constraint a + m b
                            let m = Rat::from_integer(Int::from(m));
                            rows.push(gv.iter().map(|s| s.a() + s.b() * &m).collect());
                        }
                        None => {
                            rows.push(gv.iter().map(|s| s.a().clone()).collect());
                            rows.push(gv.iter().map(|s| s.b().clone()).collect());
                        }
                    }
                }
            }
        }
        Ok(rows)
    }

    fn complement_from_rows(&self, rows: Vec<Vec<Rat>>) -> Result<Sublattice> {
        let r = self.rank();
        let int_rows: Vec<Vec<Int>> = rows
            .iter()
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .map(|row| clear_denominators(row))
            .collect();
        let basis_rows = if int_rows.is_empty() {
            // no constraints: the whole lattice, in canonical form
            mat::hnf_rows(&vec_identity(r))
        } else {
            mat::integer_kernel(&int_rows, r)
        };
        self.sublattice_from_basis(basis_rows)
    }

    fn sublattice_from_basis(&self, basis_rows: Vec<Vec<Int>>) -> Result<Sublattice> {
        let basis: Vec<IntVec> = basis_rows.into_iter().map(IntVec).collect();
        let k = basis.len();
        let mut gram = vec![vec![Int::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = self.pair_int(&basis[i], &basis[j])?;
            }
        }
        let degenerate = k > 0 && mat::det_bareiss(&gram).is_zero();
        Ok(Sublattice {
            basis,
            gram,
            degenerate,
        })
    }

    /// Saturation (Q-span intersected with the lattice) of a set of
    /// independent vectors; also reports whether the span was already
    /// primitive.
    pub fn saturate(&self, vectors: &[IntVec]) -> Result<(bool, Vec<IntVec>)> {
        for v in vectors {
            self.check_len(v.len())?;
        }
        let r = self.rank();
        let rows: Vec<Vec<Int>> = vectors.iter().map(|v| v.0.clone()).collect();
        let rat_rows = mat::int_to_rat_mat(&rows);
        if mat::rank_rat(&rat_rows) != vectors.len() {
            return Err(Error::DependentVectors);
        }
        if vectors.is_empty() {
            return Ok((true, Vec::new()));
        }
        // x in Q-span(S) iff x is std-orthogonal to ker(S .), so the
        // saturation is the integer kernel of the kernel
        let ker = mat::integer_kernel(&rows, r);
        let saturation = if ker.is_empty() {
            mat::hnf_rows(&vec_identity(r))
        } else {
            mat::integer_kernel(&ker, r)
        };
        // index of span(S) inside its saturation: ratio of HNF pivot products
        let hs = mat::hnf_rows(&rows);
        let index = hnf_pivot_product(&hs)
            .checked_div_exact(&hnf_pivot_product(&saturation))
            .expect("saturation index must be integral");
        let is_primitive = index == Int::one();
        Ok((is_primitive, saturation.into_iter().map(IntVec).collect()))
    }

    /// Developed Fujiki formula: (c/3) [B12 B34 + B13 B24 + B14 B23],
    /// the collapse of (c/24) * sum over all 24 permutations.
    pub fn fujiki_product(
        &self,
        c: &Rat,
        a1: &QVec,
        a2: &QVec,
        a3: &QVec,
        a4: &QVec,
    ) -> Result<Rat> {
        let b12 = self.pair_q(a1, a2)?;
        let b34 = self.pair_q(a3, a4)?;
        let b13 = self.pair_q(a1, a3)?;
        let b24 = self.pair_q(a2, a4)?;
        let b14 = self.pair_q(a1, a4)?;
        let b23 = self.pair_q(a2, a3)?;
        let sum = &b12 * &b34 + &b13 * &b24 + &b14 * &b23;
        Ok(c / crate::scalar::rat_int(3) * sum)
    }
}

/// A constraint vector for orthogonal-complement computations.
#[derive(Clone, Debug)]
pub enum Constraint {
    Q(QVec),
    Ext(ExtVec),
}

impl Constraint {
    pub fn from_cvec(v: &CVec) -> Vec<Constraint> {
        vec![
            Constraint::Ext(v.re.clone()),
            Constraint::Ext(v.im.clone()),
        ]
    }
}

/// Result of an orthogonal-complement computation: canonical integer basis,
/// restricted Gram matrix, and whether the restriction is degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub basis: Vec<IntVec>,
    pub gram: Vec<Vec<Int>>,
    pub degenerate: bool,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

trait CheckedDivExact {
    fn checked_div_exact(&self, other: &Int) -> Option<Int>;
}

impl CheckedDivExact for Int {
    fn checked_div_exact(&self, other: &Int) -> Option<Int> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }
}

fn hnf_pivot_product(rows: &[Vec<Int>]) -> Int {
    rows.iter()
        .map(|row| {
            row.iter()
                .find(|x| !x.is_zero())
                .cloned()
                .unwrap_or_else(Int::one)
        })
        .product()
}

fn vec_identity(r: usize) -> Vec<Vec<Int>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let lcm = row
        .iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn append_spec(
    spec: &LatticeSpec,
    mult: i64,
    gram: &mut Vec<Vec<Int>>,
    labels: &mut Vec<String>,
    blocks: &mut Vec<Block>,
    u_count: &mut usize,
) -> Result<()> {
    match spec {
        LatticeSpec::Sum { sum } => {
            for s in sum {
                append_spec(s, mult, gram, labels, blocks, u_count)?;
            }
        }
        LatticeSpec::U { u, pow } => {
            for _ in 0..pow.unwrap_or(1) {
                let n = (*u as i64)
                    .checked_mul(mult)
                    .filter(|&m| m > 0)
                    .ok_or_else(|| Error::InvalidSpec(format!("U(n) needs n > 0, got {}", *u as i64 * mult)))?;
                if *u == 0 {
                    return Err(Error::InvalidSpec("U(n) needs n > 0, got 0".into()));
                }
                *u_count += 1;
                let idx = *u_count;
                append_block(
                    gram,
                    labels,
                    blocks,
                    BlockKind::U(n as u64),
                    &[vec![0, n], vec![n, 0]],
                    &[format!("e{idx}"), format!("f{idx}")],
                );
            }
        }
        LatticeSpec::E8 { e8, pow } => {
            for _ in 0..pow.unwrap_or(1) {
                let m = e8 * mult;
                if m == 0 {
                    return Err(Error::InvalidSpec("E8 scale must be nonzero".into()));
                }
                let block: Vec<Vec<i64>> = E8_GRAM
                    .iter()
                    .map(|row| row.iter().map(|&x| x * m).collect())
                    .collect();
                let base = gram.len();
                let lbls: Vec<String> = (0..8).map(|i| format!("x{}", base + i)).collect();
                append_block(gram, labels, blocks, BlockKind::E8(m), &block, &lbls);
            }
        }
        LatticeSpec::Rank1 { rank1, pow } => {
            for _ in 0..pow.unwrap_or(1) {
                let k = rank1 * mult;
                let base = gram.len();
                append_block(
                    gram,
                    labels,
                    blocks,
                    BlockKind::Rank1(k),
                    &[vec![k]],
                    &[format!("r{base}")],
                );
            }
        }
        LatticeSpec::Gram { gram: g } => {
            let r = g.len();
            for row in g {
                if row.len() != r {
                    return Err(Error::InvalidSpec("gram block is not square".into()));
                }
            }
            for i in 0..r {
                for j in 0..i {
                    if g[i][j] != g[j][i] {
                        return Err(Error::InvalidSpec("gram block is not symmetric".into()));
                    }
                }
            }
            let scaled: Vec<Vec<i64>> = g
                .iter()
                .map(|row| row.iter().map(|&x| x * mult).collect())
                .collect();
            let base = gram.len();
            let lbls: Vec<String> = (0..r).map(|i| format!("g{}", base + i)).collect();
            append_block(gram, labels, blocks, BlockKind::Gram, &scaled, &lbls);
        }
        LatticeSpec::Twist { twist } => {
            let m = mult
                .checked_mul(twist.by)
                .ok_or_else(|| Error::InvalidSpec("twist overflow".into()))?;
            if twist.by == 0 {
                return Err(Error::InvalidSpec("twist by zero".into()));
            }
            append_spec(&twist.of, m, gram, labels, blocks, u_count)?;
        }
    }
    Ok(())
}

fn append_block(
    gram: &mut Vec<Vec<Int>>,
    labels: &mut Vec<String>,
    blocks: &mut Vec<Block>,
    kind: BlockKind,
    block: &[Vec<i64>],
    block_labels: &[String],
) {
    let base = gram.len();
    let k = block.len();
    for row in gram.iter_mut() {
        row.extend((0..k).map(|_| Int::zero()));
    }
    for (i, row) in block.iter().enumerate() {
        let mut new_row: Vec<Int> = (0..base).map(|_| Int::zero()).collect();
        new_row.extend(row.iter().map(|&x| Int::from(x)));
        debug_assert_eq!(new_row.len(), base + k);
        let _ = i;
        gram.push(new_row);
    }
    labels.extend_from_slice(block_labels);
    blocks.push(Block {
        kind,
        start: base,
        len: k,
    });
}

/// Parse the textual block mini-language:
/// terms separated by `⊕` or `+`, each one of
/// `U(n)`, `E8(m)`, `(k)` (rank one), `gram([[..],..])`, `twist(<spec>, m)`,
/// optionally raised by `^j`.
pub fn parse_spec_string(s: &str) -> Result<LatticeSpec> {
    let normalized: String = s
        .chars()
        .map(|c| match c {
            '−' => '-',
            '⊕' => '+',
            _ => c,
        })
        .collect();
    let terms = split_top_level(&normalized, '+');
    let mut sum = Vec::new();
    for t in terms {
        let t = t.trim();
        if t.is_empty() {
            return Err(Error::InvalidSpec("empty term in spec".into()));
        }
        sum.push(parse_term(t)?);
    }
    if sum.len() == 1 {
        Ok(sum.pop().unwrap())
    } else {
        Ok(LatticeSpec::Sum { sum })
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(c);
            }
            c if c == sep && depth == 0 => {
                parts.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    parts.push(cur);
    parts
}

fn parse_term(t: &str) -> Result<LatticeSpec> {
    let (body, pow) = match t.rfind('^') {
        Some(i) if t[..i].chars().filter(|&c| c == '(').count()
            == t[..i].chars().filter(|&c| c == ')').count() =>
        {
            let p: u32 = t[i + 1..]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad exponent in `{t}`")))?;
            (t[..i].trim(), Some(p))
        }
        _ => (t, None),
    };
    let bad = || Error::InvalidSpec(format!("cannot parse term `{t}`"));
    if let Some(rest) = body.strip_prefix("U(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let n: i64 = inner.trim().parse().map_err(|_| bad())?;
        if n <= 0 {
            return Err(Error::InvalidSpec(format!("U(n) needs n > 0, got {n}")));
        }
        return Ok(LatticeSpec::U { u: n as u64, pow });
    }
    if let Some(rest) = body.strip_prefix("E8(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let m: i64 = inner.trim().parse().map_err(|_| bad())?;
        return Ok(LatticeSpec::E8 { e8: m, pow });
    }
    if body == "E8" {
        return Ok(LatticeSpec::E8 { e8: 1, pow });
    }
    if let Some(rest) = body.strip_prefix("gram(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let g: Vec<Vec<i64>> = serde_json::from_str(inner.trim()).map_err(|_| bad())?;
        if pow.is_some() {
            return Err(Error::InvalidSpec("gram(..) does not take an exponent".into()));
        }
        return Ok(LatticeSpec::Gram { gram: g });
    }
    if let Some(rest) = body.strip_prefix("twist(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let parts = split_top_level(inner, ',');
        if parts.len() != 2 {
            return Err(bad());
        }
        let of = parse_spec_string(parts[0].trim())?;
        let by: i64 = parts[1].trim().parse().map_err(|_| bad())?;
        if pow.is_some() {
            return Err(Error::InvalidSpec("twist(..) does not take an exponent".into()));
        }
        return Ok(LatticeSpec::Twist {
            twist: Box::new(TwistSpec { of, by }),
        });
    }
    if let Some(rest) = body.strip_prefix("rank1(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let k: i64 = inner.trim().parse().map_err(|_| bad())?;
        return Ok(LatticeSpec::Rank1 { rank1: k, pow });
    }
    if let Some(rest) = body.strip_prefix('(') {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let k: i64 = inner.trim().parse().map_err(|_| bad())?;
        return Ok(LatticeSpec::Rank1 { rank1: k, pow });
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    pub(crate) fn u_lattice() -> Lattice {
        Lattice::parse("U(1)").unwrap()
    }

    pub(crate) fn u3() -> Lattice {
        Lattice::parse("U(1)^3").unwrap()
    }

    fn mprime() -> Lattice {
        Lattice::parse("U(2)^3⊕E8(−1)⊕(−2)^2").unwrap()
    }

    fn kprime() -> Lattice {
        Lattice::parse("U(3)^3⊕gram([[-5,-4],[-4,-5]])").unwrap()
    }

    #[test]
    fn build_u1() {
        let l = u_lattice();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.gram()[0][1], Int::one());
        assert_eq!(l.gram()[0][0], Int::zero());
    }

    #[test]
    fn build_mprime_and_kprime() {
        let m = mprime();
        assert_eq!(m.rank(), 16);
        let k = kprime();
        assert_eq!(k.rank(), 8);
        // last basis vector of M' squares to -2
        let last = {
            let mut v = vec![0i64; 16];
            v[15] = 1;
            IntVec::from_i64(&v)
        };
        assert_eq!(m.q_int(&last).unwrap(), Int::from(-2));
    }

    #[test]
    fn json_spec_roundtrip() {
        let json = r#"{"sum":[{"U":2},{"U":2},{"U":2},{"E8":-1},{"rank1":-2},{"rank1":-2}]}"#;
        let spec: LatticeSpec = serde_json::from_str(json).unwrap();
        let l = Lattice::build(&spec).unwrap();
        assert_eq!(l.rank(), 16);
        assert_eq!(l, mprime());
    }

    #[test]
    fn twist_scales_entries() {
        let a = Lattice::parse("twist(U(1)^3, 2)").unwrap();
        let b = Lattice::parse("U(2)^3").unwrap();
        assert_eq!(a.gram(), b.gram());
        // twisted U blocks keep their U identity
        assert!(matches!(a.blocks()[0].kind, BlockKind::U(2)));
    }

    #[test]
    fn signatures_and_discriminants() {
        assert_eq!(u_lattice().signature_disc().unwrap(), (1, 1, Int::from(-1)));
        assert_eq!(mprime().signature_disc().unwrap(), (3, 13, Int::from(-256)));
        assert_eq!(kprime().signature_disc().unwrap(), (3, 5, Int::from(-6561)));
    }

    #[test]
    fn pairing_examples() {
        let l = Lattice::parse("U(3)").unwrap();
        let v = IntVec::from_i64(&[1, 0]);
        let vstar = IntVec::from_i64(&[0, 1]);
        assert_eq!(l.pair_int(&v, &vstar).unwrap(), Int::from(3));
        assert_eq!(l.q_int(&v).unwrap(), Int::zero());
    }

    #[test]
    fn dual_class_examples() {
        let u = u_lattice();
        let d = u.dual_class(&[rat_int(1), rat_int(0)]).unwrap();
        assert_eq!(d, QVec::from_i64(&[0, 1]));
        let r = Lattice::parse("(-2)").unwrap();
        let d = r.dual_class(&[rat_int(1)]).unwrap();
        assert_eq!(d, QVec(vec![rat(-1, 2)]));
        let any = mprime();
        let zero = vec![rat_int(0); 16];
        assert!(any.dual_class(&zero).unwrap().is_zero());
    }

    #[test]
    fn orth_complement_fixture() {
        // U^3 basis (e1,f1,e2,f2,v,v*); S = {e1+f1+v*, e2+f2, e1+f1-2v}
        let l = u3();
        let s = vec![
            Constraint::Q(QVec::from_i64(&[1, 1, 0, 0, 0, 1])),
            Constraint::Q(QVec::from_i64(&[0, 0, 1, 1, 0, 0])),
            Constraint::Q(QVec::from_i64(&[1, 1, 0, 0, -2, 0])),
        ];
        let sub = l.orth_complement(&s).unwrap();
        assert_eq!(sub.rank(), 3);
        assert!(!sub.degenerate);
        let (pos, neg, _zero) = mat::inertia_sym(&mat::int_to_rat_mat(&sub.gram));
        assert_eq!((pos, neg), (0, 3));
        // isomorphic to diag(-2,-2,-2): same determinant, and a change of
        // basis (b1, b3, b2 - b1) diagonalizes it
        assert_eq!(mat::det_bareiss(&sub.gram), Int::from(-8));
        let b = |i: usize| sub.basis[i].to_qvec();
        let d2 = b(1).add(&b(0).scale(&rat_int(-1)));
        for (x, y) in [(b(0), b(2)), (b(0), d2.clone()), (b(2), d2.clone())] {
            assert!(l.pair_q(&x, &y).unwrap().is_zero());
        }
        for x in [b(0), b(2), d2] {
            assert_eq!(l.q_q(&x).unwrap(), rat_int(-2));
        }
        // and each returned vector pairs to 0 with all of S
        for b in &sub.basis {
            for c in &s {
                if let Constraint::Q(v) = c {
                    assert!(l.pair_q(&b.to_qvec(), v).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn orth_complement_of_summand_and_full_span() {
        // complement of {v,v*} in U^3: the first two hyperbolic planes
        let l = u3();
        let s = vec![
            Constraint::Q(QVec::from_i64(&[0, 0, 0, 0, 1, 0])),
            Constraint::Q(QVec::from_i64(&[0, 0, 0, 0, 0, 1])),
        ];
        let sub = l.orth_complement(&s).unwrap();
        assert_eq!(sub.rank(), 4);
        assert_eq!(sub.gram, Lattice::parse("U(1)^2").unwrap().gram());
        // S spanning L over Q: rank-0 complement
        let full: Vec<Constraint> = (0..6)
            .map(|i| {
                let mut v = vec![0i64; 6];
                v[i] = 1;
                Constraint::Q(QVec::from_i64(&v))
            })
            .collect();
        assert_eq!(l.orth_complement(&full).unwrap().rank(), 0);
    }

    #[test]
    fn saturation_examples() {
        let u = u_lattice();
        let (prim, sat) = u.saturate(&[IntVec::from_i64(&[2, 2])]).unwrap();
        assert!(!prim);
        assert_eq!(sat, vec![IntVec::from_i64(&[1, 1])]);
        let (prim, _) = u.saturate(&[IntVec::from_i64(&[1, 2])]).unwrap();
        assert!(prim);
        let (prim, sat) = u
            .saturate(&[IntVec::from_i64(&[1, 0]), IntVec::from_i64(&[0, 1])])
            .unwrap();
        assert!(prim);
        assert_eq!(sat.len(), 2);
        assert!(u
            .saturate(&[IntVec::from_i64(&[1, 1]), IntVec::from_i64(&[2, 2])])
            .is_err());
    }

    #[test]
    fn divisibility_examples() {
        let u = u_lattice();
        assert_eq!(u.divisibility(&IntVec::from_i64(&[1, 0])).unwrap(), Int::one());
        let l = Lattice::parse("(-2)⊕U(1)").unwrap();
        assert_eq!(
            l.divisibility(&IntVec::from_i64(&[1, 0, 0])).unwrap(),
            Int::from(2)
        );
        let u3n = Lattice::parse("U(3)").unwrap();
        assert_eq!(
            u3n.divisibility(&IntVec::from_i64(&[1, 0])).unwrap(),
            Int::from(3)
        );
        assert!(u.divisibility(&IntVec::from_i64(&[0, 0])).is_err());
    }

    #[test]
    fn fujiki_collapses() {
        let u = u_lattice();
        let e = QVec::from_i64(&[1, 0]);
        let f = QVec::from_i64(&[0, 1]);
        let c = rat_int(1);
        assert_eq!(u.fujiki_product(&c, &e, &e, &f, &f).unwrap(), rat(2, 3));
        // all four equal: c * q(a)^2
        let a = QVec::from_i64(&[2, 3]);
        let q = u.q_q(&a).unwrap();
        assert_eq!(u.fujiki_product(&c, &a, &a, &a, &a).unwrap(), &q * &q);
    }

    #[test]
    fn ext_constraints_split() {
        // z . (e1 + sqrt2 f1) = 0 over U forces z = 0 when split
        let u = u_lattice();
        let w = ExtVec::new(vec![ExtScalar::one(2), ExtScalar::sqrt_n(2)]).unwrap();
        let sub = u.orth_complement(&[Constraint::Ext(w)]).unwrap();
        assert_eq!(sub.rank(), 0);
        // with n = 4 = 2^2 the constraint is a single rational one
        let w = ExtVec::new(vec![ExtScalar::one(4), ExtScalar::sqrt_n(4)]).unwrap();
        let sub = u.orth_complement(&[Constraint::Ext(w)]).unwrap();
        assert_eq!(sub.rank(), 1);
    }
}
