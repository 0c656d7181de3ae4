//! Clifford algebras over Q, the idempotents θ_i^± and the Kuga-Satake
//! slopes of the Newton cocharacters of GSpin(n,2).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::weyl::WeylGroupSpec;
use crate::zipcox::{CoxeterZipDatum, PsiSpec};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomials in one variable X over Q, stored as degree → coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<u32, BigRational>);

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(deg: u32, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(deg, c);
        }
        Poly(m)
    }

    pub fn x() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<u32, BigRational> {
        &self.0
    }

    fn add_term(&mut self, deg: u32, c: &BigRational) {
        let e = self.0.entry(deg).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&deg);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (d, c) in &other.0 {
            self.add_term(*d, c);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (d1, c1) in &self.0 {
            for (d2, c2) in &other.0 {
                out.add_term(d1 + d2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::default();
        }
        Poly(self.0.iter().map(|(d, c)| (*d, c * s)).collect())
    }

    /// The constant term if the polynomial has degree <= 0.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }
}

/// Symmetric Gram matrix Ψ on δ_1..δ_k, with q(v) = Ψ(v, v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordGram {
    psi: Vec<Vec<BigRational>>,
    diagonal: bool,
}

/// Which of the three Newton cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QpCase {
    Odd,
    EvenSplit,
    EvenNonsplit,
}

impl QpCase {
    pub fn for_n(n: usize, split: bool) -> Self {
        if n % 2 == 1 {
            QpCase::Odd
        } else if split {
            QpCase::EvenSplit
        } else {
            QpCase::EvenNonsplit
        }
    }
}

/// Constant standing in for a nonsquare unit in the even nonsplit form.
const NONSPLIT_CONSTANT: i64 = 3;

impl CliffordGram {
    pub fn new(psi: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = psi.len();
        if k == 0 || k > 16 {
            return invalid(format!("{k} generators is outside 1..=16"));
        }
        for (i, row) in psi.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Shape(format!("row {i} has length {}", row.len())));
            }
            for j in 0..i {
                if psi[i][j] != psi[j][i] {
                    return invalid("Gram matrix is not symmetric");
                }
            }
        }
        let diagonal = (0..k).all(|i| (0..k).all(|j| i == j || psi[i][j].is_zero()));
        Ok(CliffordGram { psi, diagonal })
    }

    pub fn diagonal(q: &[BigRational]) -> Result<Self> {
        let k = q.len();
        Self::new((0..k).map(|i| (0..k).map(|j| if i == j { q[i].clone() } else { BigRational::zero() }).collect()).collect())
    }

    /// x_1 x_k + x_2 x_{k-1} + ... (+ x_c^2 for odd k): Ψ(δ_i, δ_{k+1-i}) = 1/2.
    pub fn hyperbolic(k: usize) -> Result<Self> {
        let psi = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i + j == k - 1 {
                            if i == j {
                                BigRational::one()
                            } else {
                                rat(1, 2)
                            }
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(psi)
    }

    /// The form for n with each pair (δ_i, δ_{n+3-i}) diagonalized as x_i² - x_{n+3-i}².
    pub fn newton_standard(n: usize, case: QpCase) -> Result<Self> {
        let k = n + 2;
        let mut q = vec![BigRational::zero(); k];
        let pairs = k / 2;
        for i in 0..pairs {
            q[i] = BigRational::one();
            q[k - 1 - i] = -BigRational::one();
        }
        if k % 2 == 1 {
            q[pairs] = BigRational::one();
        }
        if case == QpCase::EvenNonsplit {
            let m = n / 2 + 1;
            q[m] = BigRational::from_integer(BigInt::from(-NONSPLIT_CONSTANT));
        }
        Self::diagonal(&q)
    }

    pub fn generators(&self) -> usize {
        self.psi.len()
    }

    fn q(&self, i: usize) -> &BigRational {
        &self.psi[i][i]
    }

    /// δ_S · δ_k on monomials, S given as a bit mask.
    fn gen_mul(&self, mask: u32, k: usize) -> Vec<(u32, BigRational)> {
        if mask == 0 {
            return vec![(1 << k, BigRational::one())];
        }
        let last = 31 - mask.leading_zeros() as usize;
        if last < k {
            return vec![(mask | 1 << k, BigRational::one())];
        }
        let rest = mask & !(1 << last);
        if last == k {
            return if self.q(k).is_zero() { vec![] } else { vec![(rest, self.q(k).clone())] };
        }
        // δ_last δ_k = 2Ψ(k, last) - δ_k δ_last
        let mut out = Vec::new();
        let b = &self.psi[k][last];
        if !b.is_zero() {
            out.push((rest, b * BigRational::from_integer(2.into())));
        }
        for (m, c) in self.gen_mul(rest, k) {
            out.push((m | 1 << last, -c));
        }
        out
    }

    fn mono_mul(&self, a: u32, b: u32) -> Vec<(u32, BigRational)> {
        if self.diagonal {
            // δ_A δ_B = ± ∏_{i∈A∩B} q(δ_i) δ_{A△B}, one sign per pair a > b
            let mut swaps = 0;
            let mut bits = b;
            while bits != 0 {
                let k = bits.trailing_zeros();
                bits &= bits - 1;
                swaps += (a >> (k + 1)).count_ones();
            }
            let mut c = if swaps % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            let mut common = a & b;
            while common != 0 {
                let k = common.trailing_zeros() as usize;
                common &= common - 1;
                c *= self.q(k);
            }
            return if c.is_zero() { vec![] } else { vec![(a ^ b, c)] };
        }
        let mut cur: BTreeMap<u32, BigRational> = BTreeMap::from([(a, BigRational::one())]);
        let mut bits = b;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut next: BTreeMap<u32, BigRational> = BTreeMap::new();
            for (m, c) in &cur {
                for (m2, c2) in self.gen_mul(*m, k) {
                    let e = next.entry(m2).or_insert_with(BigRational::zero);
                    *e += c * c2;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur.into_iter().collect()
    }
}

#[derive(Clone, Debug)]
pub struct CliffordElement {
    gram: Arc<CliffordGram>,
    terms: BTreeMap<u32, Poly>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.gram, &other.gram) || self.gram == other.gram) && self.terms == other.terms
    }
}

impl CliffordElement {
    pub fn zero(gram: &Arc<CliffordGram>) -> Self {
        CliffordElement { gram: gram.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(gram: &Arc<CliffordGram>, c: Poly) -> Self {
        Self::monomial(gram, &[], c).expect("empty monomial")
    }

    pub fn one(gram: &Arc<CliffordGram>) -> Self {
        Self::scalar(gram, Poly::constant(BigRational::one()))
    }

    /// c · δ_{s_1} ⋯ δ_{s_k} for strictly increasing 1-based indices.
    pub fn monomial(gram: &Arc<CliffordGram>, indices: &[usize], c: Poly) -> Result<Self> {
        let mut mask = 0u32;
        let mut prev = 0;
        for &i in indices {
            if i <= prev || i > gram.generators() {
                return invalid(format!("monomial indices {indices:?} must increase within 1..={}", gram.generators()));
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        Ok(CliffordElement { gram: gram.clone(), terms })
    }

    /// δ_i, 1-based.
    pub fn generator(gram: &Arc<CliffordGram>, i: usize) -> Result<Self> {
        Self::monomial(gram, &[i], Poly::constant(BigRational::one()))
    }

    pub fn gram(&self) -> &Arc<CliffordGram> {
        &self.gram
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    /// Terms as (sorted 1-based indices, coefficient).
    pub fn terms(&self) -> Vec<(Vec<usize>, Poly)> {
        self.terms.iter().map(|(m, c)| (mask_indices(*m), c.clone())).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.gram, &other.gram) || self.gram == other.gram {
            Ok(())
        } else {
            invalid("Clifford elements over different Gram matrices")
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_default();
            e.add_assign(c);
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Ok(CliffordElement { gram: self.gram.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        self.scale_poly(&Poly::constant(s.clone()))
    }

    pub fn scale_poly(&self, s: &Poly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.mul(s)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        CliffordElement { gram: self.gram.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms: BTreeMap<u32, Poly> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = ca.mul(cb);
                for (m, c) in self.gram.mono_mul(*a, *b) {
                    terms.entry(m).or_default().add_assign(&prod.scale(&c));
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(CliffordElement { gram: self.gram.clone(), terms })
    }

    /// Coefficients as rationals, when every coefficient is constant.
    fn rational_vector(&self) -> Option<BTreeMap<u32, BigRational>> {
        self.terms.iter().map(|(m, c)| c.as_constant().map(|v| (*m, v))).collect()
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeff: Vec<String> = c
                    .terms()
                    .iter()
                    .map(|(d, v)| match d {
                        0 => v.to_string(),
                        1 => format!("{v}X"),
                        _ => format!("{v}X^{d}"),
                    })
                    .collect();
                let mono: String = mask_indices(*m).iter().map(|i| format!("δ{i}")).collect();
                format!("({}){}", coeff.join("+"), mono)
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn mask_indices(m: u32) -> Vec<usize> {
    (0..32).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.mul(b)
}

/// θ_i^± = ½(1 ± δ_i δ_{k+1-i}) for k generators.
pub fn theta(gram: &Arc<CliffordGram>, i: usize, plus: bool) -> Result<CliffordElement> {
    let k = gram.generators();
    if i == 0 || 2 * i > k {
        return invalid(format!("θ index {i} outside 1..={}", k / 2));
    }
    let half = rat(1, 2);
    let sign = if plus { half.clone() } else { -half.clone() };
    let pair = CliffordElement::monomial(gram, &[i, k + 1 - i], Poly::constant(sign))?;
    CliffordElement::scalar(gram, Poly::constant(half)).add(&pair)
}

/// Monomial basis of C⁺ as bit masks.
fn even_masks(k: usize) -> Vec<u32> {
    (0u32..1 << k).filter(|m| m.count_ones() % 2 == 0).collect()
}

/// Incremental row echelon form over Q on sparse vectors.
#[derive(Default)]
struct Echelon {
    rows: Vec<(u32, BTreeMap<u32, BigRational>)>,
}

impl Echelon {
    /// Reduces `v` against the basis and keeps it if independent.
    fn insert(&mut self, mut v: BTreeMap<u32, BigRational>) -> bool {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (k, r) in row {
                    let e = v.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &c * r;
                }
                v.retain(|_, x| !x.is_zero());
            }
        }
        match v.keys().next().copied() {
            None => false,
            Some(p) => {
                let inv = v[&p].recip();
                for x in v.values_mut() {
                    *x *= &inv;
                }
                // keep rows fully reduced at their pivots
                for (_, row) in self.rows.iter_mut() {
                    if let Some(c) = row.get(&p).cloned() {
                        for (k, r) in &v {
                            let e = row.entry(*k).or_insert_with(BigRational::zero);
                            *e -= &c * r;
                        }
                        row.retain(|_, x| !x.is_zero());
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// θ^σ = θ_1^{σ_1} ⋯ θ_j^{σ_j}.
fn theta_product(gram: &Arc<CliffordGram>, sigma: &[bool]) -> Result<CliffordElement> {
    let mut acc = CliffordElement::one(gram);
    for (i, &s) in sigma.iter().enumerate() {
        acc = acc.mul(&theta(gram, i + 1, s)?)?;
    }
    Ok(acc)
}

fn sign_vectors(j: usize) -> Vec<Vec<bool>> {
    (0..1u32 << j).map(|bits| (0..j).map(|i| bits & (1 << (j - 1 - i)) == 0).collect()).collect()
}

/// A block C_σ with a basis.
struct Block {
    sigma: Vec<bool>,
    basis: Vec<CliffordElement>,
}

fn max_j(n: usize, case: QpCase) -> usize {
    match case {
        QpCase::Odd => n.div_ceil(2),
        QpCase::EvenSplit => n / 2 + 1,
        QpCase::EvenNonsplit => n / 2,
    }
}

fn blocks(n: usize, j: usize, case: QpCase) -> Result<(Arc<CliffordGram>, Vec<Block>)> {
    if n > 10 {
        return invalid("Clifford computations are limited to n <= 10");
    }
    if j == 0 || j > max_j(n, case) {
        return invalid(format!("j = {j} is not admissible for n = {n}"));
    }
    let gram = Arc::new(CliffordGram::newton_standard(n, case)?);
    let masks = even_masks(n + 2);
    let mut out = Vec::new();
    let mut total = Echelon::default();
    for sigma in sign_vectors(j) {
        let th = theta_product(&gram, &sigma)?;
        let mut ech = Echelon::default();
        let mut basis = Vec::new();
        for &m in &masks {
            let mono = CliffordElement { gram: gram.clone(), terms: BTreeMap::from([(m, Poly::constant(BigRational::one()))]) };
            let img = th.mul(&mono)?;
            let vec = img.rational_vector().expect("rational input");
            if ech.insert(vec.clone()) {
                total.insert(vec);
                basis.push(img);
            }
        }
        out.push(Block { sigma, basis });
    }
    let dim = 1usize << (n + 1);
    let sum: usize = out.iter().map(|b| b.basis.len()).sum();
    if sum != dim || total.rank() != dim {
        return Err(Error::Consistency(format!(
            "θ-blocks do not decompose C⁺: dimensions sum to {sum}, span has rank {}, expected {dim}",
            total.rank()
        )));
    }
    Ok((gram, out))
}

/// dim C_σ for every σ ∈ {±}^j, keyed by the sign string ("+-+").
pub fn sigma_decomposition(n: usize, j: usize) -> Result<BTreeMap<String, usize>> {
    let case = if n % 2 == 1 { QpCase::Odd } else { QpCase::EvenSplit };
    let (_, bl) = blocks(n, j, case)?;
    Ok(bl.into_iter().map(|b| (sign_string(&b.sigma), b.basis.len())).collect())
}

fn sign_string(sigma: &[bool]) -> String {
    sigma.iter().map(|&s| if s { '+' } else { '-' }).collect()
}

/// Slopes with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SlopeMultiset(pub BTreeMap<BigRational, u64>);

impl SlopeMultiset {
    pub fn add(&mut self, slope: BigRational, mult: u64) {
        if mult > 0 {
            *self.0.entry(slope).or_insert(0) += mult;
        }
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn multiplicity(&self, slope: &BigRational) -> u64 {
        self.0.get(slope).copied().unwrap_or(0)
    }

    /// Multiplicity of slope 0.
    pub fn p_rank(&self) -> u64 {
        self.multiplicity(&BigRational::zero())
    }

    /// Invariant under s ↦ 1 - s.
    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(s, m)| self.multiplicity(&(BigRational::one() - s)) == *m)
    }
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(s, m)| format!("{s}: {m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize)]
struct SlopeEntry {
    slope: String,
    multiplicity: u64,
}

impl Serialize for SlopeMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<SlopeEntry> =
            self.0.iter().map(|(k, m)| SlopeEntry { slope: k.to_string(), multiplicity: *m }).collect();
        entries.serialize(s)
    }
}

/// ν_j(X) = ∏_{i≤j} (X θ_i^+ + θ_i^-), or ν'_m(X) = (θ_m^+ + X θ_m^-) ∏_{i<m} (X θ_i^+ + θ_i^-).
fn nu(gram: &Arc<CliffordGram>, j: usize, primed: bool) -> Result<CliffordElement> {
    let mut acc = CliffordElement::one(gram);
    for i in 1..=j {
        let (tp, tm) = (theta(gram, i, true)?, theta(gram, i, false)?);
        let factor = if primed && i == j {
            tp.add(&tm.scale_poly(&Poly::x()))?
        } else {
            tp.scale_poly(&Poly::x()).add(&tm)?
        };
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Slopes of ν_j (X standing for t^{1/j}) acting on C⁺ by left multiplication,
/// computed block by block.
pub fn slopes_of_nu(n: usize, j: usize, primed: bool) -> Result<SlopeMultiset> {
    let case = if n % 2 == 1 { QpCase::Odd } else { QpCase::EvenSplit };
    if primed && (n % 2 == 1 || j != n / 2 + 1) {
        return invalid("ν' exists only for n even split and j = m");
    }
    let (gram, bl) = blocks(n, j, case)?;
    let nu = nu(&gram, j, primed)?;
    let mut out = SlopeMultiset::default();
    for b in &bl {
        let mut degree = None;
        for v in &b.basis {
            let image = nu.mul(v)?;
            let r = scalar_degree(&image, v).ok_or_else(|| {
                Error::Consistency(format!("ν_{j} does not act by a power of X on C_{}", sign_string(&b.sigma)))
            })?;
            if *degree.get_or_insert(r) != r {
                return Err(Error::Consistency(format!("C_{} carries two weights", sign_string(&b.sigma))));
            }
        }
        if let Some(r) = degree {
            out.add(rat(r as i64, j as i64), b.basis.len() as u64);
        }
    }
    Ok(out)
}

/// r with image = X^r · v, if there is one.
fn scalar_degree(image: &CliffordElement, v: &CliffordElement) -> Option<u32> {
    let (_, first) = image.terms.iter().next()?;
    if first.terms().len() != 1 {
        return None;
    }
    let r = *first.terms().keys().next()?;
    let shifted = v.scale_poly(&Poly::monomial(r, BigRational::one()));
    (&shifted == image).then_some(r)
}

/// {i/j ↦ 2^{n+1-j} C(j, i)}.
pub fn closed_form_slopes(n: usize, j: usize) -> SlopeMultiset {
    let mut out = SlopeMultiset::default();
    let mut binom: u64 = 1;
    for i in 0..=j {
        out.add(rat(i as i64, j as i64), (1u64 << (n + 1 - j)) * binom);
        binom = binom * (j - i) as u64 / (i + 1) as u64;
    }
    out
}

pub fn basic_slopes(n: usize) -> SlopeMultiset {
    let mut out = SlopeMultiset::default();
    out.add(rat(1, 2), 1u64 << (n + 1));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NewtonKind {
    Standard,
    Primed,
    Basic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonCocharacter {
    pub kind: NewtonKind,
    pub j: usize,
    /// Coefficients on α_1^∨, ..., α_r^∨.
    pub coeffs: Vec<BigRational>,
}

impl NewtonCocharacter {
    pub fn name(&self) -> String {
        match self.kind {
            NewtonKind::Standard => format!("b_{}", self.j),
            NewtonKind::Primed => format!("b'_{}", self.j),
            NewtonKind::Basic => "basic".into(),
        }
    }
}

impl Serialize for NewtonCocharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            name: String,
            kind: NewtonKind,
            j: usize,
            coeffs: Vec<String>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Repr {
            name: self.name(),
            kind: self.kind,
            j: self.j,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonStratum {
    pub cocharacter: NewtonCocharacter,
    /// None for the basic locus.
    pub dim: Option<usize>,
    pub p_rank: u64,
}

/// b_j, b'_m (even split only) and the basic element, with stratum dimensions
/// n + 1 - j and p-ranks 2^{n+1-j}.
pub fn newton_set(n: usize, case: QpCase) -> Result<Vec<NewtonStratum>> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if (n % 2 == 1) != (case == QpCase::Odd) {
        return invalid(format!("case {case:?} does not match the parity of n = {n}"));
    }
    let rank = match case {
        QpCase::EvenNonsplit => n / 2,
        _ => max_j(n, case),
    };
    let jmax = max_j(n, case);
    let mut out = Vec::new();
    for j in 1..=jmax {
        let coeffs = (0..rank).map(|i| if i < j { rat(1, j as i64) } else { BigRational::zero() }).collect();
        out.push(NewtonStratum {
            cocharacter: NewtonCocharacter { kind: NewtonKind::Standard, j, coeffs },
            dim: Some(n + 1 - j),
            p_rank: 1u64 << (n + 1 - j),
        });
        if case == QpCase::EvenSplit && j == jmax {
            let coeffs = (0..rank).map(|i| if i + 1 < j { rat(1, j as i64) } else { rat(-1, j as i64) }).collect();
            out.push(NewtonStratum {
                cocharacter: NewtonCocharacter { kind: NewtonKind::Primed, j, coeffs },
                dim: Some(n + 1 - j),
                p_rank: 1u64 << (n + 1 - j),
            });
        }
    }
    out.push(NewtonStratum {
        cocharacter: NewtonCocharacter { kind: NewtonKind::Basic, j: 0, coeffs: vec![BigRational::zero(); rank] },
        dim: None,
        p_rank: 0,
    });
    Ok(out)
}

/// b ≤ a: a - b is a nonnegative combination of positive coroots. The root
/// system is B_r for n odd and for the relative system of the nonsplit form,
/// and D_m for n even split.
pub fn newton_leq(b: &NewtonCocharacter, a: &NewtonCocharacter, case: QpCase) -> Result<bool> {
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::Shape("cocharacters of different rank".into()));
    }
    let v: Vec<BigRational> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
    let r = v.len();
    let mut partial = Vec::with_capacity(r);
    let mut s = BigRational::zero();
    for x in &v {
        s += x;
        partial.push(s.clone());
    }
    Ok(match case {
        QpCase::Odd | QpCase::EvenNonsplit => partial.iter().all(|p| !p.is_negative()),
        QpCase::EvenSplit => {
            // simple coroots e_i - e_{i+1} and e_{r-1} + e_r
            partial[..r.saturating_sub(2)].iter().all(|p| !p.is_negative())
                && !partial[r - 1].is_negative()
                && (r < 2 || !(&partial[r - 2] - &v[r - 1]).is_negative())
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroDimBehavior {
    /// q = x_1² - x_2²
    Split,
    /// q = x_1² - u x_2²
    Inert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroDimLocus {
    Ordinary,
    Superspecial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroDimResult {
    pub locus: ZeroDimLocus,
    /// Element of ^µW for GL_2 labelling the orbit of 1.
    pub label: String,
    /// Frame element g of (B, T, g).
    pub frame: String,
}

/// Image of the zero-dimensional GSpin(0,2) Shimura variety in the modular
/// curve. The frame is (B, T, w̃_0) for split and (B, T, 1) for inert, so
/// 1 = g · g⁻¹ lies in the framed orbit of g⁻¹.
pub fn zero_dim_case(behavior: ZeroDimBehavior) -> Result<ZeroDimResult> {
    let group = WeylGroupSpec::a(2)?;
    // L = T, so W_µ is trivial; ψ is trivial on the abelian group W either way
    let datum = CoxeterZipDatum::new(group, &[], PsiSpec::identity(group))?;
    let (g, frame) = match behavior {
        ZeroDimBehavior::Split => (group.simple_reflection(1)?, "w̃_0"),
        ZeroDimBehavior::Inert => (group.identity(), "1"),
    };
    let label = datum.canonical_label(&g.inverse())?;
    let locus = if label.dim == 1 { ZeroDimLocus::Ordinary } else { ZeroDimLocus::Superspecial };
    Ok(ZeroDimResult { locus, label: label.rep.cycles(), frame: frame.into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(g: &Arc<CliffordGram>) -> CliffordElement {
        CliffordElement::one(g)
    }

    #[test]
    fn hyperbolic_pair() {
        let g = Arc::new(CliffordGram::hyperbolic(2).unwrap());
        let e = CliffordElement::generator(&g, 1).unwrap();
        let f = CliffordElement::generator(&g, 2).unwrap();
        assert_eq!(e.mul(&f).unwrap().add(&f.mul(&e).unwrap()).unwrap(), one(&g));
        let u = e.mul(&f).unwrap();
        assert_eq!(u.mul(&u).unwrap(), u);
        // u* = fe = 1 - u
        assert_eq!(f.mul(&e).unwrap(), one(&g).sub(&u).unwrap());
    }

    #[test]
    fn orthogonal_square() {
        let g = Arc::new(CliffordGram::diagonal(&[rat(2, 1), rat(-3, 1), rat(5, 1)]).unwrap());
        let d12 = CliffordElement::generator(&g, 1).unwrap().mul(&CliffordElement::generator(&g, 2).unwrap()).unwrap();
        assert_eq!(d12.mul(&d12).unwrap(), CliffordElement::scalar(&g, Poly::constant(rat(6, 1))));
    }

    #[test]
    fn theta_identities() {
        let g = Arc::new(CliffordGram::newton_standard(3, QpCase::Odd).unwrap());
        for i in 1..=2 {
            let tp = theta(&g, i, true).unwrap();
            let tm = theta(&g, i, false).unwrap();
            assert!(tp.mul(&tm).unwrap().is_zero());
            assert_eq!(tp.mul(&tp).unwrap(), tp);
            assert_eq!(tm.mul(&tm).unwrap(), tm);
        }
        let a = theta(&g, 1, true).unwrap();
        let b = theta(&g, 2, false).unwrap();
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn sigma_blocks() {
        let d = sigma_decomposition(2, 2).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.values().all(|&v| v == 2));
        let d = sigma_decomposition(1, 1).unwrap();
        assert_eq!(d.values().copied().collect::<Vec<_>>(), [2, 2]);
    }

    #[test]
    fn slope_examples() {
        let s = slopes_of_nu(1, 1, false).unwrap();
        assert_eq!(s, closed_form_slopes(1, 1));
        assert_eq!(s.to_string(), "{0: 2, 1: 2}");
        let s = slopes_of_nu(2, 2, false).unwrap();
        assert_eq!(s.to_string(), "{0: 2, 1/2: 4, 1: 2}");
        assert_eq!(slopes_of_nu(2, 2, true).unwrap(), s);
        assert!(slopes_of_nu(3, 2, true).is_err());
        assert_eq!(basic_slopes(3).to_string(), "{1/2: 16}");
    }

    #[test]
    fn newton_sets() {
        let s = newton_set(3, QpCase::Odd).unwrap();
        let names: Vec<String> = s.iter().map(|x| x.cocharacter.name()).collect();
        assert_eq!(names, ["b_1", "b_2", "basic"]);
        assert_eq!(s.iter().map(|x| x.dim).collect::<Vec<_>>(), [Some(3), Some(2), None]);
        let s = newton_set(2, QpCase::EvenSplit).unwrap();
        let mid: Vec<_> = s.iter().filter(|x| x.dim == Some(1)).collect();
        assert_eq!(mid.len(), 2);
        assert!(!newton_leq(&mid[0].cocharacter, &mid[1].cocharacter, QpCase::EvenSplit).unwrap());
        assert!(!newton_leq(&mid[1].cocharacter, &mid[0].cocharacter, QpCase::EvenSplit).unwrap());
        assert_eq!(newton_set(2, QpCase::EvenNonsplit).unwrap().len(), 2);
    }

    #[test]
    fn newton_chain_order() {
        for (n, case) in [(5, QpCase::Odd), (6, QpCase::EvenSplit), (6, QpCase::EvenNonsplit)] {
            let s = newton_set(n, case).unwrap();
            for a in &s {
                for b in &s {
                    let leq = newton_leq(&b.cocharacter, &a.cocharacter, case).unwrap();
                    let expected = match (a.cocharacter.kind, b.cocharacter.kind) {
                        (_, NewtonKind::Basic) => true,
                        (NewtonKind::Basic, _) => false,
                        // b_m and b'_m are incomparable
                        (NewtonKind::Primed, NewtonKind::Standard) | (NewtonKind::Standard, NewtonKind::Primed) => {
                            a.cocharacter.j < b.cocharacter.j
                        }
                        _ => a.cocharacter.j <= b.cocharacter.j,
                    };
                    assert_eq!(leq, expected, "{} <= {}", b.cocharacter.name(), a.cocharacter.name());
                }
            }
        }
    }

    #[test]
    fn zero_dim() {
        let s = zero_dim_case(ZeroDimBehavior::Split).unwrap();
        assert_eq!(s.locus, ZeroDimLocus::Ordinary);
        assert_eq!(s.frame, "w̃_0");
        assert_eq!(zero_dim_case(ZeroDimBehavior::Inert).unwrap().locus, ZeroDimLocus::Superspecial);
    }
}
