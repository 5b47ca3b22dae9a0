//! Exact scalars and dense matrices over the rationals and prime fields.
//!
//! Every homology computation in the crate bottoms out in [`Matrix::rank`] and
//! [`Matrix::kernel_basis`]. There is no floating point anywhere: rationals are
//! arbitrary precision and prime-field residues are canonical representatives
//! in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest admissible prime (exclusive). Products of two residues then fit in `u64`.
pub const PRIME_BOUND: u64 = 1 << 31;

/// The ground field: `Q` or `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// `GF(p)`, checking that `p` is a prime below 2^31.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= PRIME_BOUND {
            return Err(Error::InvalidArgument(format!(
                "prime {p} is not below 2^31"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Characteristic of the field (0 for `Q`).
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, a: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(a))),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: a.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// The image of `num / den` in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match *self {
            FieldSpec::Rationals => {
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            FieldSpec::Prime(p) => {
                let modulus = BigInt::from(p);
                let n = num.mod_floor(&modulus).to_u32().expect("residue fits");
                let d = den.mod_floor(&modulus).to_u32().expect("residue fits");
                let n = Scalar::Residue { value: n, p };
                let d = Scalar::Residue { value: d, p };
                n.mul(&d.inv()?)
            }
        }
    }

    /// Parses `"a"` or `"a/b"` and maps it into the field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let malformed = || Error::Malformed(format!("bad scalar literal {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (text, None),
        };
        let num: BigInt = num.parse().map_err(|_| malformed())?;
        let den: BigInt = match den {
            Some(b) => b.parse().map_err(|_| malformed())?,
            None => BigInt::one(),
        };
        if den.is_negative() {
            return Err(Error::Malformed(format!(
                "denominator must be positive in {text:?}"
            )));
        }
        self.from_ratio(&num, &den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        match s.strip_prefix("GF:") {
            Some(p) => {
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad field spec {s:?}")))?;
                FieldSpec::prime(p)
            }
            None => Err(Error::Malformed(format!(
                "bad field spec {s:?}, expected Q or GF:<p>"
            ))),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Lowest terms, positive denominator (maintained by `BigRational`).
    Rational(BigRational),
    Residue {
        value: u32,
        p: u32,
    },
}

fn mismatch(a: &Scalar, b: &Scalar) -> Error {
    Error::Malformed(format!("mixed fields {} and {}", a.field(), b.field()))
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    // extended Euclid on (a, p)
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(p as i64) as u64)
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                let v = (*a as u64 + *b as u64) % *p as u64;
                Ok(Scalar::Residue {
                    value: v as u32,
                    p: *p,
                })
            }
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: (*p - *value) % *p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                let v = (*a as u64 * *b as u64) % *p as u64;
                Ok(Scalar::Residue {
                    value: v as u32,
                    p: *p,
                })
            }
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(a) => Ok(Scalar::Rational(a.recip())),
            Scalar::Residue { value, p } => {
                let inv = mod_inverse(*value as u64, *p as u64).ok_or(Error::DivisionByZero)?;
                Ok(Scalar::Residue {
                    value: inv as u32,
                    p: *p,
                })
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::Malformed(format!(
                "entry over {} in a matrix over {field}",
                bad.field()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&a| field.from_i64(a)).collect();
        Matrix::new(field, rows.len(), cols, entries)
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        let n = rows.len();
        Matrix::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) -> Result<()> {
        if value.field() != self.field {
            return Err(Error::Malformed(format!(
                "entry over {} in a matrix over {}",
                value.field(),
                self.field
            )));
        }
        self.entries[r * self.cols + c] = value;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
        }
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * columns.len());
        for r in 0..self.rows {
            for &c in columns {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.rows,
            cols: columns.len(),
            field: self.field,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::Malformed(format!(
                "product of matrices over {} and {}",
                self.field, other.field
            )));
        }
        if self.cols != other.rows {
            return Err(Error::Malformed(format!(
                "shape mismatch {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        match self.field {
            FieldSpec::Rationals => {
                let a = to_rational(self);
                let b = to_rational(other);
                let mut out = Vec::with_capacity(self.rows * other.cols);
                for i in 0..self.rows {
                    for j in 0..other.cols {
                        let mut acc = BigRational::zero();
                        for k in 0..self.cols {
                            let x = &a[i][k];
                            if !x.is_zero() {
                                acc += x * &b[k][j];
                            }
                        }
                        out.push(Scalar::Rational(acc));
                    }
                }
                Ok(Matrix {
                    rows: self.rows,
                    cols: other.cols,
                    field: self.field,
                    entries: out,
                })
            }
            FieldSpec::Prime(p) => {
                let a = to_residues(self);
                let b = to_residues(other);
                let p64 = p as u64;
                let mut out = Vec::with_capacity(self.rows * other.cols);
                for i in 0..self.rows {
                    for j in 0..other.cols {
                        let mut acc = 0u64;
                        for k in 0..self.cols {
                            acc = (acc + a[i][k] * b[k][j]) % p64;
                        }
                        out.push(Scalar::Residue {
                            value: acc as u32,
                            p,
                        });
                    }
                }
                Ok(Matrix {
                    rows: self.rows,
                    cols: other.cols,
                    field: self.field,
                    entries: out,
                })
            }
        }
    }

    /// Rank over the matrix's field.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Rationals => {
                let mut rows = to_rational(self);
                echelon(&RationalOps, &mut rows, self.cols, false).len()
            }
            FieldSpec::Prime(p) => {
                let mut rows = to_residues(self);
                echelon(&PrimeOps(p as u64), &mut rows, self.cols, false).len()
            }
        }
    }

    /// A basis of the right null space `{x : self * x = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> Matrix {
        match self.field {
            FieldSpec::Rationals => {
                let mut rows = to_rational(self);
                let basis = kernel_from_rref(&RationalOps, &mut rows, self.cols);
                let n = basis.len();
                let entries = basis.into_iter().flatten().map(Scalar::Rational).collect();
                Matrix {
                    rows: n,
                    cols: self.cols,
                    field: self.field,
                    entries,
                }
            }
            FieldSpec::Prime(p) => {
                let mut rows = to_residues(self);
                let basis = kernel_from_rref(&PrimeOps(p as u64), &mut rows, self.cols);
                let n = basis.len();
                let entries = basis
                    .into_iter()
                    .flatten()
                    .map(|v| Scalar::Residue { value: v as u32, p })
                    .collect();
                Matrix {
                    rows: n,
                    cols: self.cols,
                    field: self.field,
                    entries,
                }
            }
        }
    }
}

fn to_rational(m: &Matrix) -> Vec<Vec<BigRational>> {
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|e| match e {
                    Scalar::Rational(q) => q.clone(),
                    Scalar::Residue { .. } => unreachable!("field checked at construction"),
                })
                .collect()
        })
        .collect()
}

fn to_residues(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|e| match e {
                    Scalar::Residue { value, .. } => *value as u64,
                    Scalar::Rational(_) => unreachable!("field checked at construction"),
                })
                .collect()
        })
        .collect()
}

/// Arithmetic needed by Gaussian elimination, specialised per field.
trait ElimOps {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

struct RationalOps;

impl ElimOps for RationalOps {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
}

struct PrimeOps(u64);

impl ElimOps for PrimeOps {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inverse(*a, self.0).expect("nonzero residue mod a prime")
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
}

/// In-place Gaussian elimination. Returns the pivot columns; rows `0..pivots.len()`
/// hold the echelon form. With `reduced`, pivots are normalised to one and
/// cleared above as well (RREF).
fn echelon<F: ElimOps>(ops: &F, rows: &mut [Vec<F::E>], cols: usize, reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !ops.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ops.inv(&rows[r][c]);
        if reduced {
            for x in rows[r][c..].iter_mut() {
                *x = ops.mul(x, &inv);
            }
        }
        let (above, rest) = rows.split_at_mut(r);
        let (pivot, below) = rest.split_at_mut(1);
        let pivot_row = &pivot[0];
        let above: &mut [Vec<F::E>] = if reduced { above } else { &mut [] };
        for row in below.iter_mut().chain(above.iter_mut()) {
            if ops.is_zero(&row[c]) {
                continue;
            }
            let factor = if reduced {
                row[c].clone()
            } else {
                ops.mul(&row[c], &inv)
            };
            for k in c..cols {
                if !ops.is_zero(&pivot_row[k]) {
                    row[k] = ops.sub(&row[k], &ops.mul(&factor, &pivot_row[k]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref<F: ElimOps>(ops: &F, rows: &mut [Vec<F::E>], cols: usize) -> Vec<Vec<F::E>> {
    let pivots = echelon(ops, rows, cols, true);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![ops.zero(); cols];
            x[free] = ops.one();
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = ops.neg(&rows[i][free]);
            }
            x
        })
        .collect()
}
