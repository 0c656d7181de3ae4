//! Finite fields GF(p^k) with k <= 4 and dense matrices over them.
//!
//! Elements are polynomials in `x` of degree < k reduced modulo a fixed monic
//! irreducible. The modulus is the first irreducible found by a lexicographic
//! search, so GF(9) = GF(3)[x]/(x^2+1) and GF(25) = GF(5)[x]/(x^2+2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

pub const MAX_DEGREE: usize = 4;

/// Largest characteristic accepted. Keeps every product inside `u64`.
pub const MAX_PRIME: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u8,
    /// c_0..c_{k-1} of the monic modulus x^k + c_{k-1} x^{k-1} + ... + c_0.
    modulus: [u32; MAX_DEGREE],
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol (a/p) by Euler's criterion. Returns -1, 0 or 1.
pub fn legendre(a: i64, p: u32) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p as u64 - 1) / 2, p as u64) {
        1 => 1,
        _ => -1,
    }
}

/// Smallest positive quadratic nonresidue mod p.
pub fn smallest_nonsquare(p: u32) -> u32 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a nonresidue")
}

// Polynomial helpers over GF(p), coefficient vectors low degree first.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    // b is monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let t = lead * bi % p;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop();
    }
    a
}

fn monic_polys(deg: usize, p: u32) -> impl Iterator<Item = Vec<u64>> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut idx| {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(idx % p as u64);
            idx /= p as u64;
        }
        v.push(1);
        v
    })
}

fn is_irreducible(f: &[u64], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(d, p) {
            if poly_rem(f.to_vec(), &g, p as u64).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    pub fn new(p: u32, k: u8) -> Result<Self> {
        if !is_odd_prime(p) {
            return invalid(format!("{p} is not an odd prime"));
        }
        if p > MAX_PRIME {
            return invalid(format!("prime {p} exceeds supported bound {MAX_PRIME}"));
        }
        if k == 0 || k as usize > MAX_DEGREE {
            return invalid(format!("extension degree {k} not in 1..={MAX_DEGREE}"));
        }
        let mut modulus = [0u32; MAX_DEGREE];
        if k > 1 {
            let f = monic_polys(k as usize, p)
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree");
            for i in 0..k as usize {
                modulus[i] = f[i] as u32;
            }
        }
        Ok(FieldSpec { p, k, modulus })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Low coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus[..self.k as usize]
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    pub fn zero(&self) -> Gf {
        Gf { field: *self, c: [0; MAX_DEGREE] }
    }

    pub fn one(&self) -> Gf {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Gf {
        let mut c = [0; MAX_DEGREE];
        c[0] = n.rem_euclid(self.p as i64) as u32;
        Gf { field: *self, c }
    }

    /// Element with the given coefficients (low degree first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Gf> {
        if coeffs.len() > self.k as usize {
            return invalid("too many coefficients for field degree");
        }
        let mut c = [0; MAX_DEGREE];
        for (i, &a) in coeffs.iter().enumerate() {
            c[i] = a.rem_euclid(self.p as i64) as u32;
        }
        Ok(Gf { field: *self, c })
    }

    /// The class of `x`. Only meaningful for k >= 2.
    pub fn gen(&self) -> Gf {
        let mut c = [0; MAX_DEGREE];
        if self.k > 1 {
            c[1] = 1;
        } else {
            c[0] = 0;
        }
        Gf { field: *self, c }
    }

    /// Element number `idx` in the canonical enumeration 0..q.
    pub fn element(&self, mut idx: u64) -> Gf {
        let mut c = [0; MAX_DEGREE];
        for ci in c.iter_mut().take(self.k as usize) {
            *ci = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        Gf { field: *self, c }
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Smallest generator of the multiplicative group in the canonical enumeration.
    pub fn primitive_element(&self) -> Gf {
        let q1 = self.order() - 1;
        let mut factors = Vec::new();
        let mut r = q1;
        let mut d = 2;
        while d * d <= r {
            if r.is_multiple_of(d) {
                factors.push(d);
                while r.is_multiple_of(d) {
                    r /= d;
                }
            }
            d += 1;
        }
        if r > 1 {
            factors.push(r);
        }
        self.elements()
            .skip(1)
            .find(|a| factors.iter().all(|&f| a.pow(q1 / f) != self.one()))
            .expect("multiplicative group is cyclic")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}

/// An element of a finite field. Arithmetic operators panic when the operands
/// live in different fields; use [`field_arith`] for a checked version.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf {
    field: FieldSpec,
    c: [u32; MAX_DEGREE],
}

impl Gf {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.field.k as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn pow(&self, mut e: u64) -> Gf {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Gf> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn frobenius(&self) -> Gf {
        if self.field.k == 1 {
            *self
        } else {
            self.pow(self.field.p as u64)
        }
    }

    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow((self.field.order() - 1) / 2).is_one()
    }

    /// Some square root, by exhaustive search. Fine for the field sizes used here.
    pub fn sqrt(&self) -> Option<Gf> {
        if !self.is_square() {
            return None;
        }
        self.field.elements().find(|r| *r * *r == *self)
    }

    fn same_field(&self, other: &Gf) {
        assert!(self.field == other.field, "field mismatch: {} vs {}", self.field, other.field);
    }

    /// Integer value when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u32> {
        if self.c[1..].iter().all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        self.same_field(&rhs);
        let p = self.field.p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.field.k as usize {
            let s = self.c[i] + rhs.c[i];
            c[i] = if s >= p { s - p } else { s };
        }
        Gf { field: self.field, c }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, rhs: Gf) -> Gf {
        self + (-rhs)
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        let p = self.field.p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.field.k as usize {
            c[i] = if self.c[i] == 0 { 0 } else { p - self.c[i] };
        }
        Gf { field: self.field, c }
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        self.same_field(&rhs);
        let p = self.field.p as u64;
        let k = self.field.k as usize;
        if k == 1 {
            let mut c = [0; MAX_DEGREE];
            c[0] = (self.c[0] as u64 * rhs.c[0] as u64 % p) as u32;
            return Gf { field: self.field, c };
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + self.c[i] as u64 * rhs.c[j] as u64) % p;
            }
        }
        // x^k = -(c_0 + ... + c_{k-1} x^{k-1})
        for d in (k..2 * k - 1).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let t = lead * self.field.modulus[i] as u64 % p;
                prod[d - k + i] = (prod[d - k + i] + p - t) % p;
            }
        }
        let mut c = [0; MAX_DEGREE];
        for i in 0..k {
            c[i] = prod[i] as u32;
        }
        Gf { field: self.field, c }
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_prime_field() {
            return write!(f, "{v}");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs().iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic.
pub fn field_arith(a: Gf, b: Gf, op: ArithOp) -> Result<Gf> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a * b.inv()?,
    })
}

/// Uniform element drawn from a ChaCha8 stream seeded by `seed`.
pub fn random_element(field: FieldSpec, seed: u64) -> Gf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample(field, &mut rng)
}

pub fn sample<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Gf {
    field.element(rng.gen_range(0..field.order()))
}

pub fn sample_nonzero<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Gf {
    field.element(rng.gen_range(1..field.order()))
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Gf>,
}

impl GfMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        GfMatrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Gf) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.field, field, "field mismatch");
                entries.push(e);
            }
        }
        GfMatrix { rows, cols, field, entries }
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<Gf>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|e| e.field != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(GfMatrix { rows: r, cols: c, field, entries: rows.concat() })
    }

    /// Matrix with anti-diagonal entries `diag[i]` at (i, n-1-i).
    pub fn antidiag(field: FieldSpec, diag: &[Gf]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, n - 1 - i, d);
        }
        m
    }

    pub fn diag(field: FieldSpec, diag: &[Gf]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        debug_assert_eq!(v.field, self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Gf] {
        &self.entries
    }

    pub fn mul(&self, rhs: &GfMatrix) -> Result<GfMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = GfMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = out.entries[idx] + a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &GfMatrix) -> Result<GfMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &GfMatrix) -> Result<GfMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &GfMatrix, f: impl Fn(Gf, Gf) -> Gf) -> Result<GfMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape("operands differ in shape".into()));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(GfMatrix { rows: self.rows, cols: self.cols, field: self.field, entries })
    }

    pub fn scale(&self, s: Gf) -> GfMatrix {
        let entries = self.entries.iter().map(|&a| a * s).collect();
        GfMatrix { entries, ..self.clone() }
    }

    pub fn transpose(&self) -> GfMatrix {
        GfMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn frobenius(&self) -> GfMatrix {
        let entries = self.entries.iter().map(Gf::frobenius).collect();
        GfMatrix { entries, ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn det(&self) -> Result<Gf> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let pv = a.get(col, col);
            det = det * pv;
            let pinv = pv.inv()?;
            for r in col + 1..n {
                let f = a.get(r, col) * pinv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c) - f * a.get(col, c);
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<GfMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = GfMatrix::identity(self.field, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::Singular)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let pinv = a.get(col, col).inv()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c) * pinv);
                inv.set(col, c, inv.get(col, c) * pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c) - f * a.get(col, c));
                    inv.set(r, c, inv.get(r, c) - f * inv.get(col, c));
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GfMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Inverse,
    Transpose,
    Det,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatValue {
    Matrix(GfMatrix),
    Scalar(Gf),
}

/// Single entry point for the basic matrix operations. `b` is only read by `Mul`.
pub fn mat_ops(a: &GfMatrix, b: Option<&GfMatrix>, op: MatOp) -> Result<MatValue> {
    Ok(match op {
        MatOp::Mul => {
            let b = b.ok_or_else(|| Error::Invalid("multiplication needs two operands".into()))?;
            MatValue::Matrix(a.mul(b)?)
        }
        MatOp::Inverse => MatValue::Matrix(a.inverse()?),
        MatOp::Transpose => MatValue::Matrix(a.transpose()),
        MatOp::Det => MatValue::Scalar(a.det()?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_are_the_first_irreducibles() {
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[1, 0]);
        assert_eq!(FieldSpec::new(5, 2).unwrap().modulus(), &[2, 0]);
        for (p, k) in [(3, 3), (3, 4), (5, 3), (7, 2), (7, 4)] {
            let f = FieldSpec::new(p, k).unwrap();
            let mut poly: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
            poly.push(1);
            assert!(is_irreducible(&poly, p));
        }
    }

    #[test]
    fn small_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.int(3) * f5.int(4), f5.int(2));
        let f9 = FieldSpec::new(3, 2).unwrap();
        let x = f9.gen();
        assert_eq!(x * x, f9.int(2));
        assert_eq!(x.frobenius(), -x);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(field_arith(f7.one(), f7.int(3), ArithOp::Div).unwrap(), f7.int(5));
        assert_eq!(field_arith(f7.one(), f7.zero(), ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::new(2, 1).is_err());
        assert!(FieldSpec::new(9, 1).is_err());
        assert!(FieldSpec::new(5, 5).is_err());
        assert!(FieldSpec::new(5, 0).is_err());
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, k) in [(3, 2), (5, 2), (3, 3), (3, 4)] {
            let f = FieldSpec::new(p, k).unwrap();
            for a in f.elements().skip(1) {
                assert!((a * a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn primitive_element_generates() {
        let f = FieldSpec::new(5, 2).unwrap();
        let g = f.primitive_element();
        let mut seen = std::collections::HashSet::new();
        let mut a = f.one();
        for _ in 0..24 {
            seen.insert(a);
            a = a * g;
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn antidiag_det() {
        let f5 = FieldSpec::prime(5).unwrap();
        let j = GfMatrix::antidiag(f5, &[f5.one(), f5.one()]);
        assert_eq!(j.det().unwrap(), f5.int(4));
    }

    #[test]
    fn singular_and_shape_errors() {
        let f = FieldSpec::prime(7).unwrap();
        let z = GfMatrix::zeros(f, 2, 2);
        assert_eq!(z.inverse(), Err(Error::Singular));
        let a = GfMatrix::zeros(f, 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Shape(_))));
        assert!(matches!(mat_ops(&a, None, MatOp::Det), Err(Error::Shape(_))));
    }

    #[test]
    fn legendre_matches_squares() {
        for p in [3u32, 5, 7, 11, 13] {
            for a in 1..p {
                let is_sq = (1..p).any(|r| r * r % p == a);
                assert_eq!(legendre(a as i64, p) == 1, is_sq);
            }
        }
        assert_eq!(smallest_nonsquare(7), 3);
        assert_eq!(smallest_nonsquare(5), 2);
    }

    #[test]
    fn sqrt_in_quadratic_extension() {
        let f = FieldSpec::new(7, 2).unwrap();
        for a in FieldSpec::prime(7).unwrap().elements() {
            let b = f.int(a.as_prime_field().unwrap() as i64);
            let r = b.sqrt().expect("prime field elements are squares in GF(p^2)");
            assert_eq!(r * r, b);
        }
    }
}
