//! SO(J) over GF(p^2) in the normalized coordinates: Gram matrices, the
//! representatives P_w, parabolic shapes, the twisted Frobenius, randomized
//! frame verification and the embeddings ι between neighbouring ranks.
//!
//! Coordinates are 1..N with N = n+2. The Levi L = diag(t, A, t⁻¹) has blocks
//! of sizes (1, N-2, 1).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gf::{self, FieldSpec, Gf, GfMatrix};
use crate::weyl::{self, Family, WeylElement, WeylGroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GramKind {
    /// q = x_1 x_N + ... + c x_{m+1}^2.
    Odd { c: u32 },
    EvenSplit,
    /// Nonsplit over F_p with x_m^2 - c x_{m+1}^2 in the middle, c a nonsquare.
    /// In the normalized coordinates over GF(p^2) the Gram matrix is split.
    EvenNonsplit { c: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GramSpec {
    n: usize,
    p: u32,
    kind: GramKind,
    field: FieldSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitness {
    Split,
    Nonsplit,
}

impl GramSpec {
    pub fn odd(n: usize, p: u32, c: i64) -> Result<Self> {
        if n.is_multiple_of(2) {
            return invalid(format!("n = {n} is not odd"));
        }
        let field = FieldSpec::new(p, 2)?;
        let c = c.rem_euclid(p as i64) as u32;
        if c == 0 {
            return invalid("c must be a unit");
        }
        Ok(GramSpec { n, p, kind: GramKind::Odd { c }, field })
    }

    pub fn even_split(n: usize, p: u32) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return invalid(format!("n = {n} is not a positive even integer"));
        }
        Ok(GramSpec { n, p, kind: GramKind::EvenSplit, field: FieldSpec::new(p, 2)? })
    }

    pub fn even_nonsplit(n: usize, p: u32, c: i64) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return invalid(format!("n = {n} is not a positive even integer"));
        }
        let field = FieldSpec::new(p, 2)?;
        if gf::legendre(c, p) != -1 {
            return invalid(format!("c = {c} is not a nonsquare mod {p}"));
        }
        let c = c.rem_euclid(p as i64) as u32;
        Ok(GramSpec { n, p, kind: GramKind::EvenNonsplit { c }, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kind(&self) -> GramKind {
        self.kind
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Matrix size N = n + 2.
    pub fn dim(&self) -> usize {
        self.n + 2
    }

    /// Rank m of the Weyl group.
    pub fn m(&self) -> usize {
        if self.n % 2 == 1 {
            self.n.div_ceil(2)
        } else {
            self.n / 2 + 1
        }
    }

    pub fn weyl_group(&self) -> WeylGroupSpec {
        WeylGroupSpec::orthogonal(self.n).expect("n >= 1")
    }

    /// Anti-diagonal entries d_1..d_N of J.
    pub fn antidiagonal(&self) -> Vec<Gf> {
        let f = self.field;
        let half = f.int(2).inv().expect("p is odd");
        let mut d = vec![half; self.dim()];
        if let GramKind::Odd { c } = self.kind {
            d[self.m()] = f.int(c as i64);
        }
        d
    }

    pub fn j_matrix(&self) -> GfMatrix {
        GfMatrix::antidiag(self.field, &self.antidiagonal())
    }

    /// Conjugating element of the twisted Frobenius: the swap of coordinates
    /// m, m+1 for even n and P_{s_m} for odd n.
    pub fn twist_h(&self) -> GfMatrix {
        let m = self.m();
        if self.n.is_multiple_of(2) {
            let mut h = GfMatrix::identity(self.field, self.dim());
            swap_coordinates(&mut h, m - 1, m);
            h
        } else {
            word_rep(self, &self.weyl_group().simple_reflection(m).unwrap()).unwrap().matrix
        }
    }
}

fn swap_coordinates(h: &mut GfMatrix, a: usize, b: usize) {
    let f = h.field();
    h.set(a, a, f.zero());
    h.set(b, b, f.zero());
    h.set(a, b, f.one());
    h.set(b, a, f.one());
}

/// split iff (-1/p)^m = (disc/p), m = n/2 + 1.
pub fn splitness(n: usize, p: u32, disc: i64) -> Result<Splitness> {
    if n % 2 == 1 {
        return invalid("splitness is only defined for even n");
    }
    if !gf::is_odd_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    let d = gf::legendre(disc, p);
    if d == 0 {
        return invalid("discriminant must be a unit");
    }
    let m = n / 2 + 1;
    let lhs = if m.is_multiple_of(2) { 1 } else { gf::legendre(-1, p) };
    Ok(if lhs == d { Splitness::Split } else { Splitness::Nonsplit })
}

/// A matrix in SO(J).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthMatrix {
    pub matrix: GfMatrix,
    pub gram: GramSpec,
}

impl OrthMatrix {
    pub fn new(matrix: GfMatrix, gram: GramSpec) -> Result<Self> {
        if !is_in_so(&matrix, &gram) {
            return invalid("matrix does not lie in SO(J)");
        }
        Ok(OrthMatrix { matrix, gram })
    }

    pub fn identity(gram: GramSpec) -> Self {
        OrthMatrix { matrix: GfMatrix::identity(gram.field, gram.dim()), gram }
    }

    pub fn mul(&self, rhs: &OrthMatrix) -> Result<OrthMatrix> {
        if self.gram != rhs.gram {
            return invalid("matrices belong to different Gram forms");
        }
        Ok(OrthMatrix { matrix: self.matrix.mul(&rhs.matrix)?, gram: self.gram })
    }

    pub fn inverse(&self) -> OrthMatrix {
        OrthMatrix { matrix: self.matrix.inverse().expect("SO elements are invertible"), gram: self.gram }
    }

    /// For a monomial matrix, the Weyl element σ with column j nonzero in row σ(j).
    pub fn weyl_element(&self) -> Option<WeylElement> {
        monomial_permutation(&self.matrix).and_then(|perm| self.gram.weyl_group().element(perm).ok())
    }
}

/// Row positions (1-based) of the single nonzero entry in each column.
pub fn monomial_permutation(x: &GfMatrix) -> Option<Vec<u8>> {
    let n = x.cols();
    let mut perm = Vec::with_capacity(n);
    for j in 0..n {
        let rows: Vec<usize> = (0..x.rows()).filter(|&i| !x.get(i, j).is_zero()).collect();
        if rows.len() != 1 {
            return None;
        }
        perm.push((rows[0] + 1) as u8);
    }
    Some(perm)
}

/// XᵗJX = J and det X = 1.
pub fn is_in_so(x: &GfMatrix, gram: &GramSpec) -> bool {
    let n = gram.dim();
    if x.rows() != n || x.cols() != n || x.field() != gram.field {
        return false;
    }
    let d = gram.antidiagonal();
    // (JX)_{ij} = d_i X_{N+1-i, j}
    let jx = GfMatrix::from_fn(gram.field, n, n, |i, j| d[i] * x.get(n - 1 - i, j));
    let lhs = x.transpose().mul(&jx).expect("square");
    lhs == gram.j_matrix() && x.det().map(|v| v.is_one()).unwrap_or(false)
}

/// P_{s_i}.
pub fn reflection_rep(gram: &GramSpec, i: usize) -> Result<OrthMatrix> {
    word_rep(gram, &gram.weyl_group().simple_reflection(i)?)
}

/// P_w: the permutation matrix of w, with the centre entry -1 in odd rank when
/// an odd number of i <= m have w(i) > m+1. This agrees with the product of
/// the P_{s_i} along any reduced word.
pub fn word_rep(gram: &GramSpec, w: &WeylElement) -> Result<OrthMatrix> {
    let group = gram.weyl_group();
    if w.group() != group {
        return Err(Error::GroupMismatch);
    }
    let f = gram.field;
    let n = gram.dim();
    let mut x = GfMatrix::zeros(f, n, n);
    for j in 1..=n {
        x.set(w.apply(j) - 1, j - 1, f.one());
    }
    if group.family() == Family::B {
        let m = group.rank();
        let flips = (1..=m).filter(|&i| w.apply(i) > m + 1).count();
        if flips % 2 == 1 {
            x.set(m, m, -f.one());
        }
    }
    Ok(OrthMatrix { matrix: x, gram: *gram })
}

/// Product of P_{s_i} along a word.
pub fn word_product(gram: &GramSpec, word: &[usize]) -> Result<OrthMatrix> {
    let mut acc = OrthMatrix::identity(*gram);
    for &i in word {
        acc = acc.mul(&reflection_rep(gram, i)?)?;
    }
    Ok(acc)
}

/// X ↦ X^(p), or h X^(p) h⁻¹ when twisted.
pub fn twisted_frobenius(x: &OrthMatrix, twisted: bool) -> OrthMatrix {
    let gram = x.gram;
    let mut out = x.matrix.frobenius();
    if twisted {
        let h = gram.twist_h();
        out = h.mul(&out).unwrap().mul(&h.inverse().unwrap()).unwrap();
    }
    OrthMatrix { matrix: out, gram }
}

fn frobenius_inverse_matrix(x: &GfMatrix) -> GfMatrix {
    let k = x.field().k();
    let mut out = x.clone();
    for _ in 1..k {
        out = out.frobenius();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Subgroup {
    P,
    Q,
    L,
    B,
    BL,
}

fn block(i: usize, n: usize) -> usize {
    if i == 0 {
        0
    } else if i == n - 1 {
        2
    } else {
        1
    }
}

fn is_upper(x: &GfMatrix) -> bool {
    (0..x.rows()).all(|i| (0..i).all(|j| x.get(i, j).is_zero()))
}

fn is_diagonal(x: &GfMatrix) -> bool {
    (0..x.rows()).all(|i| (0..x.cols()).all(|j| i == j || x.get(i, j).is_zero()))
}

fn shape_member(x: &GfMatrix, which: Subgroup) -> bool {
    let n = x.rows();
    let zero_where = |pred: &dyn Fn(usize, usize) -> bool| {
        (0..n).all(|i| (0..n).all(|j| !pred(block(i, n), block(j, n)) || x.get(i, j).is_zero()))
    };
    match which {
        Subgroup::P => zero_where(&|bi, bj| bi > bj),
        Subgroup::Q => zero_where(&|bi, bj| bi < bj),
        Subgroup::L => zero_where(&|bi, bj| bi != bj),
        Subgroup::B => is_upper(x),
        Subgroup::BL => is_upper(x) && zero_where(&|bi, bj| bi != bj),
    }
}

/// Block-shape membership in P, Q, L, B or B ∩ L, for an element of SO(J).
pub fn parabolic_membership(x: &OrthMatrix, which: Subgroup) -> bool {
    is_in_so(&x.matrix, &x.gram) && shape_member(&x.matrix, which)
}

/// A frame candidate (B, T, g) with the standard Borel and torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCandidate {
    pub g: OrthMatrix,
}

impl FrameCandidate {
    pub fn new(g: OrthMatrix) -> Self {
        FrameCandidate { g }
    }
}

/// g = P_{w_{0,µ} w_0}, untwisted, or P_{w_0 w_{0,µ} s_m} for odd n with twisted Frobenius.
pub fn standard_frame(gram: &GramSpec, twisted: bool) -> Result<FrameCandidate> {
    let group = gram.weyl_group();
    let (w0, w0mu) = weyl::longest_elements(group, &group.levi_gens())?;
    let w = if twisted && gram.n % 2 == 1 {
        if gram.n < 3 {
            return invalid("the twisted odd frame needs n >= 3");
        }
        w0.compose(&w0mu).compose(&group.simple_reflection(group.rank())?)
    } else {
        w0mu.compose(&w0)
    };
    Ok(FrameCandidate::new(word_rep(gram, &w)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    /// "sample k" or "generator k"
    pub source: String,
    pub witness: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub sampled: usize,
    pub generators: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub n: usize,
    pub p: u32,
    pub gram: GramKind,
    pub twisted: bool,
    pub g: String,
    pub samples: usize,
    pub seed: u64,
    pub conditions: Vec<ConditionReport>,
    pub violations: Vec<Violation>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn witness(x: &GfMatrix) -> Vec<Vec<String>> {
    (0..x.rows()).map(|i| (0..x.cols()).map(|j| x.get(i, j).to_string()).collect()).collect()
}

/// Strictly upper positions (a, j) with a + j < N+1 (0-based a + j < N-1),
/// one per pair {(a,j), (N+1-j, N+1-a)}, restricted by `allowed`.
fn root_positions(n: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for j in a + 1..n {
            if a + j < n - 1 && allowed(a, j) {
                let (pa, pj) = (n - 1 - j, n - 1 - a);
                assert!(allowed(pa, pj), "pattern is not closed under the Gram pairing");
                out.push((a, j));
            }
        }
    }
    out
}

/// Element of so(J) with value `v` at (a, j) and the paired entry.
fn add_root(x: &mut GfMatrix, d: &[Gf], a: usize, j: usize, v: Gf) {
    let n = x.rows();
    x.set(a, j, x.get(a, j) + v);
    let partner = -(d[a] * d[j].inv().unwrap()) * v;
    let (pa, pj) = (n - 1 - j, n - 1 - a);
    x.set(pa, pj, x.get(pa, pj) + partner);
}

/// (I - X)⁻¹(I + X) = 2(I - X)⁻¹ - I for strictly upper triangular X.
fn cayley_upper(x: &GfMatrix) -> GfMatrix {
    let f = x.field();
    let n = x.rows();
    // Y = (I - X)⁻¹ = I + XY, solved from the last row up
    let mut y = GfMatrix::identity(f, n);
    for i in (0..n).rev() {
        for j in i + 1..n {
            let mut s = f.zero();
            for k in i + 1..=j {
                let xik = x.get(i, k);
                if !xik.is_zero() {
                    s = s + xik * y.get(k, j);
                }
            }
            y.set(i, j, s);
        }
    }
    let two = f.int(2);
    GfMatrix::from_fn(f, n, n, |i, j| {
        let v = two * y.get(i, j);
        if i == j {
            v - f.one()
        } else {
            v
        }
    })
}

fn torus(gram: &GramSpec, ts: &[Gf]) -> GfMatrix {
    let f = gram.field;
    let n = gram.dim();
    let mut diag = vec![f.one(); n];
    for (i, &t) in ts.iter().enumerate() {
        diag[i] = t;
        diag[n - 1 - i] = t.inv().expect("torus parameters are units");
    }
    GfMatrix::diag(f, &diag)
}

struct Sampler<'a> {
    gram: &'a GramSpec,
    d: Vec<Gf>,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    fn torus(&mut self) -> GfMatrix {
        let f = self.gram.field;
        let count = self.gram.dim() / 2;
        let ts: Vec<Gf> = (0..count).map(|_| gf::sample_nonzero(f, &mut self.rng)).collect();
        torus(self.gram, &ts)
    }

    /// t · Cayley(X) with X a random element of the given root pattern.
    fn borel_pattern(&mut self, positions: &[(usize, usize)]) -> GfMatrix {
        let f = self.gram.field;
        let n = self.gram.dim();
        let mut x = GfMatrix::zeros(f, n, n);
        for &(a, j) in positions {
            let v = gf::sample(f, &mut self.rng);
            add_root(&mut x, &self.d, a, j, v);
        }
        self.torus().mul(&cayley_upper(&x)).unwrap()
    }
}

/// Checks the four frame conditions
/// (i) B ⊆ P, (ii) g⁻¹Bg ⊆ Q, (iii) φ(B∩L) = g⁻¹Bg ∩ L, (iv) φ(T) = g⁻¹Tg
/// on `samples` seeded random points of each side and on generators of the
/// torus and of every root group involved.
pub fn frame_verify(
    gram: &GramSpec,
    cand: &FrameCandidate,
    twisted: bool,
    samples: usize,
    seed: u64,
) -> Result<FrameReport> {
    if samples == 0 {
        return invalid("at least one sample is required");
    }
    if cand.g.gram != *gram {
        return invalid("frame element belongs to a different Gram form");
    }
    let f = gram.field;
    let n = gram.dim();
    let g = &cand.g.matrix;
    let g_inv = g.inverse()?;
    let pi = monomial_permutation(g);
    let h = if twisted { gram.twist_h() } else { GfMatrix::identity(f, n) };
    let h_inv = h.inverse()?;

    let conj_g = |x: &GfMatrix| g_inv.mul(x).unwrap().mul(g).unwrap(); // g⁻¹ x g
    let unconj_g = |x: &GfMatrix| g.mul(x).unwrap().mul(&g_inv).unwrap(); // g x g⁻¹
    let phi = |x: &GfMatrix| h.mul(&x.frobenius()).unwrap().mul(&h_inv).unwrap();
    let phi_inv = |x: &GfMatrix| frobenius_inverse_matrix(&h_inv.mul(x).unwrap().mul(&h).unwrap());

    let in_b = |x: &GfMatrix| is_in_so(x, gram) && is_upper(x);
    let in_t = |x: &GfMatrix| is_in_so(x, gram) && is_diagonal(x);

    let pos_b = root_positions(n, &|_, _| true);
    let pos_bl = root_positions(n, &|a, j| block(a, n) == 1 && block(j, n) == 1);
    // B ∩ gLg⁻¹ in B-coordinates, conjugated back by g afterwards. Needs g monomial.
    let pos_gbl = match &pi {
        Some(perm) => {
            let mut inv = vec![0usize; n];
            for (j, &r) in perm.iter().enumerate() {
                inv[r as usize - 1] = j;
            }
            root_positions(n, &|a, j| block(inv[a], n) == 1 && block(inv[j], n) == 1)
        }
        None => return invalid("frame element must be monomial"),
    };

    let mut sampler = Sampler { gram, d: gram.antidiagonal(), rng: ChaCha8Rng::seed_from_u64(seed) };

    // generators: torus with a primitive element in one slot, root elements with entry 1
    let zeta = f.primitive_element();
    let torus_gens: Vec<GfMatrix> = (0..n / 2)
        .map(|i| {
            let mut ts = vec![f.one(); n / 2];
            ts[i] = zeta;
            torus(gram, &ts)
        })
        .collect();
    let root_gens = |positions: &[(usize, usize)]| -> Vec<GfMatrix> {
        positions
            .iter()
            .flat_map(|&(a, j)| {
                [f.one(), zeta].into_iter().map(move |v| {
                    let mut x = GfMatrix::zeros(f, n, n);
                    add_root(&mut x, &sampler_d(gram), a, j, v);
                    cayley_upper(&x)
                })
            })
            .collect()
    };
    let gens_b: Vec<GfMatrix> = torus_gens.iter().cloned().chain(root_gens(&pos_b)).collect();
    let gens_bl: Vec<GfMatrix> = torus_gens.iter().cloned().chain(root_gens(&pos_bl)).collect();
    let gens_gbl: Vec<GfMatrix> =
        torus_gens.iter().cloned().chain(root_gens(&pos_gbl)).map(|x| conj_g(&x)).collect();

    type Check<'c> = Box<dyn Fn(&GfMatrix) -> Option<GfMatrix> + 'c>;
    // each check returns the offending matrix when the condition fails
    let checks: Vec<(&str, Check)> = vec![
        ("(i) B ⊆ P", Box::new(|b: &GfMatrix| (!shape_member(b, Subgroup::P)).then(|| b.clone()))),
        (
            "(ii) g⁻¹Bg ⊆ Q",
            Box::new(|b: &GfMatrix| {
                let y = conj_g(b);
                (!shape_member(&y, Subgroup::Q)).then_some(y)
            }),
        ),
        (
            "(iii) φ(B∩L) ⊆ g⁻¹Bg∩L",
            Box::new(|x: &GfMatrix| {
                let y = phi(x);
                (!(shape_member(&y, Subgroup::L) && in_b(&unconj_g(&y)))).then_some(y)
            }),
        ),
        (
            "(iii) φ⁻¹(g⁻¹Bg∩L) ⊆ B∩L",
            Box::new(|y: &GfMatrix| {
                let x = phi_inv(y);
                (!(in_b(&x) && shape_member(&x, Subgroup::BL))).then_some(x)
            }),
        ),
        (
            "(iv) φ(T) ⊆ g⁻¹Tg",
            Box::new(|t: &GfMatrix| {
                let y = phi(t);
                (!in_t(&unconj_g(&y))).then_some(y)
            }),
        ),
        (
            "(iv) φ⁻¹(g⁻¹Tg) ⊆ T",
            Box::new(|t: &GfMatrix| {
                let x = phi_inv(&conj_g(t));
                (!in_t(&x)).then_some(x)
            }),
        ),
    ];

    let mut conditions = Vec::new();
    let mut violations = Vec::new();
    for (ci, (name, check)) in checks.iter().enumerate() {
        let gens: &[GfMatrix] = match ci {
            0 | 1 => &gens_b,
            2 => &gens_bl,
            3 => &gens_gbl,
            _ => &torus_gens,
        };
        let mut bad = 0;
        let mut record = |source: String, input: &GfMatrix, bad: &mut usize| {
            if !is_in_so(input, gram) {
                violations.push(Violation {
                    condition: format!("{name}: sampled point outside SO(J)"),
                    source: source.clone(),
                    witness: witness(input),
                });
                *bad += 1;
            } else if let Some(w) = check(input) {
                *bad += 1;
                if violations.len() < 16 {
                    violations.push(Violation { condition: name.to_string(), source, witness: witness(&w) });
                }
            }
        };
        for (k, x) in gens.iter().enumerate() {
            record(format!("generator {k}"), x, &mut bad);
        }
        for k in 0..samples {
            let x = match ci {
                0 | 1 => sampler.borel_pattern(&pos_b),
                2 => sampler.borel_pattern(&pos_bl),
                3 => conj_g(&sampler.borel_pattern(&pos_gbl)),
                _ => sampler.torus(),
            };
            record(format!("sample {k}"), &x, &mut bad);
        }
        conditions.push(ConditionReport {
            name: name.to_string(),
            sampled: samples,
            generators: gens.len(),
            violations: bad,
        });
    }

    Ok(FrameReport {
        n: gram.n,
        p: gram.p,
        gram: gram.kind,
        twisted,
        g: pi.map(|perm| {
            gram.weyl_group().element(perm).map(|w| w.cycles()).unwrap_or_else(|_| "non-Weyl".into())
        })
        .unwrap_or_default(),
        samples,
        seed,
        conditions,
        violations,
    })
}

fn sampler_d(gram: &GramSpec) -> Vec<Gf> {
    gram.antidiagonal()
}

/// The Gram forms and Frobenius modes covered by the frame conditions for (n, p):
/// odd n untwisted with c = 1 and c = u, odd n >= 3 twisted (c = -1 and c = u),
/// even n split untwisted and nonsplit twisted.
pub fn frame_cases(n: usize, p: u32) -> Result<Vec<(GramSpec, bool)>> {
    let u = gf::smallest_nonsquare(p) as i64;
    Ok(if n % 2 == 1 {
        let mut v = vec![(GramSpec::odd(n, p, 1)?, false), (GramSpec::odd(n, p, u)?, false)];
        if n >= 3 {
            v.push((GramSpec::odd(n, p, -1)?, true));
            v.push((GramSpec::odd(n, p, u)?, true));
        }
        v
    } else {
        vec![(GramSpec::even_split(n, p)?, false), (GramSpec::even_nonsplit(n, p, u)?, true)]
    })
}

/// The embedding ι: SO(J') → SO(J) of the ranks n-1 → n.
///
/// Even source into odd target inserts a fixed middle coordinate. Odd source
/// into even target replaces the source centre δ (q(δ) = c) and the added
/// vector by the isotropic pair δ'_m = (δ/r + δ_new/s)/2, δ'_{m+1} = (-δ/r + δ_new/s)/2
/// with r² = -c; the result does not depend on s.
pub fn embed_iota(src: &GramSpec, dst: &GramSpec, x: &OrthMatrix) -> Result<OrthMatrix> {
    if dst.n != src.n + 1 || src.p != dst.p {
        return invalid("ι needs target rank one above the source over the same prime");
    }
    if x.gram != *src {
        return invalid("matrix does not belong to the source form");
    }
    let f = dst.field;
    let ns = src.dim();
    let nt = dst.dim();
    let xm = &x.matrix;
    let mut out = GfMatrix::zeros(f, nt, nt);
    match (src.kind, dst.kind) {
        (GramKind::EvenSplit | GramKind::EvenNonsplit { .. }, GramKind::Odd { .. }) => {
            let m = src.dim() / 2;
            let lift = |i: usize| if i < m { i } else { i + 1 };
            for i in 0..ns {
                for j in 0..ns {
                    out.set(lift(i), lift(j), xm.get(i, j));
                }
            }
            out.set(m, m, f.one());
        }
        (GramKind::Odd { c }, GramKind::EvenSplit | GramKind::EvenNonsplit { .. }) => {
            let r = f.int(-(c as i64)).sqrt().expect("every element of GF(p) is a square in GF(p^2)");
            let r_inv = r.inv()?;
            let half = f.int(2).inv()?;
            let cs = src.m(); // source centre, 0-based
            let (a, b) = (cs, cs + 1); // δ'_m, δ'_{m+1}, 0-based
            let lift = |k: usize| if k < cs { k } else { k + 1 }; // source k != cs
            let xcc = xm.get(cs, cs);
            for k in (0..ns).filter(|&k| k != cs) {
                for l in (0..ns).filter(|&l| l != cs) {
                    out.set(lift(l), lift(k), xm.get(l, k));
                }
                let xck = xm.get(cs, k);
                out.set(a, lift(k), xck * r);
                out.set(b, lift(k), -(xck * r));
                let xlc = xm.get(k, cs);
                out.set(lift(k), a, xlc * half * r_inv);
                out.set(lift(k), b, -(xlc * half * r_inv));
            }
            out.set(a, a, (xcc + f.one()) * half);
            out.set(b, a, (f.one() - xcc) * half);
            out.set(a, b, (f.one() - xcc) * half);
            out.set(b, b, (xcc + f.one()) * half);
        }
        _ => return invalid("incompatible Gram pair for ι"),
    }
    let res = OrthMatrix { matrix: out, gram: *dst };
    if !is_in_so(&res.matrix, dst) {
        return Err(Error::Consistency("ι produced a matrix outside SO(J)".into()));
    }
    Ok(res)
}

/// Random element of SO(J): b₁ · P_w · b₂ with b₁, b₂ ∈ B and w uniform in W.
pub fn random_so_element(gram: &GramSpec, seed: u64) -> OrthMatrix {
    use rand::Rng;
    let n = gram.dim();
    let mut sampler = Sampler { gram, d: gram.antidiagonal(), rng: ChaCha8Rng::seed_from_u64(seed) };
    let pos = root_positions(n, &|_, _| true);
    let b1 = sampler.borel_pattern(&pos);
    let b2 = sampler.borel_pattern(&pos);
    let elems = gram.weyl_group().enumerate();
    let w = &elems[sampler.rng.gen_range(0..elems.len())];
    let pw = word_rep(gram, w).unwrap().matrix;
    OrthMatrix { matrix: b1.mul(&pw).unwrap().mul(&b2).unwrap(), gram: *gram }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_int(g: &GramSpec, v: i64) -> Gf {
        g.field().int(v)
    }

    #[test]
    fn torus_membership() {
        let g = GramSpec::odd(3, 7, 1).unwrap();
        let f = g.field();
        assert!(is_in_so(&GfMatrix::identity(f, 5), &g));
        let t = f_int(&g, 3);
        let mut x = GfMatrix::identity(f, 5);
        x.set(0, 0, t);
        x.set(4, 4, t.inv().unwrap());
        assert!(is_in_so(&x, &g));
        x.set(4, 4, f.one());
        assert!(!is_in_so(&x, &g));
    }

    #[test]
    fn centre_block_of_odd_reflection() {
        let g = GramSpec::odd(3, 5, 1).unwrap();
        let p = reflection_rep(&g, 2).unwrap().matrix;
        let expected = [[0, 0, 1], [0, -1, 0], [1, 0, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.get(1 + i, 1 + j), f_int(&g, expected[i][j]));
            }
        }
    }

    #[test]
    fn centre_block_of_even_reflection() {
        let g = GramSpec::even_split(4, 5).unwrap();
        let p = reflection_rep(&g, 3).unwrap().matrix;
        let a = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.get(1 + i, 1 + j), f_int(&g, a[i][j]));
            }
        }
    }

    #[test]
    fn reflections_are_involutions_in_so() {
        for n in 1..=6 {
            for gram in frame_cases(n, 5).unwrap().into_iter().map(|c| c.0) {
                for i in 1..=gram.m() {
                    let p = reflection_rep(&gram, i).unwrap();
                    assert!(is_in_so(&p.matrix, &gram));
                    assert!(p.mul(&p).unwrap().matrix.is_identity());
                }
            }
        }
    }

    #[test]
    fn frame_element_for_n3() {
        let g = GramSpec::odd(3, 5, 1).unwrap();
        let frame = standard_frame(&g, false).unwrap();
        let f = g.field();
        let mut expected = GfMatrix::zeros(f, 5, 5);
        expected.set(0, 4, f.one());
        expected.set(4, 0, f.one());
        expected.set(1, 1, f.one());
        expected.set(2, 2, -f.one());
        expected.set(3, 3, f.one());
        assert_eq!(frame.g.matrix, expected);
    }

    #[test]
    fn even_frame_is_one_n_times_m_m_plus_one() {
        for n in [2, 4, 6, 8] {
            let g = GramSpec::even_split(n, 7).unwrap();
            let w = standard_frame(&g, false).unwrap().g.weyl_element().unwrap();
            let m = g.m();
            let expected = g.weyl_group().from_transpositions(&[(1, n + 2), (m, m + 1)]).unwrap();
            assert_eq!(w, expected);
        }
    }

    #[test]
    fn twisted_frobenius_swaps_centre() {
        let g = GramSpec::even_nonsplit(2, 5, 2).unwrap();
        let f = g.field();
        let a = f.gen();
        let b = a.inv().unwrap();
        let mut x = GfMatrix::identity(f, 4);
        x.set(1, 1, a);
        x.set(2, 2, b);
        let x = OrthMatrix::new(x, g).unwrap();
        let y = twisted_frobenius(&x, true);
        assert_eq!(y.matrix.get(1, 1), b.frobenius());
        assert_eq!(y.matrix.get(2, 2), a.frobenius());
        assert_eq!(twisted_frobenius(&y, true), x);
    }

    #[test]
    fn nonsplit_constructor_rejects_squares() {
        assert!(GramSpec::even_nonsplit(4, 7, 2).is_err());
        assert!(GramSpec::even_nonsplit(4, 7, 3).is_ok());
        assert!(GramSpec::odd(3, 7, 0).is_err());
        assert!(GramSpec::odd(4, 7, 1).is_err());
    }

    #[test]
    fn splitness_examples() {
        assert_eq!(splitness(2, 5, 1).unwrap(), Splitness::Split);
        assert_eq!(splitness(2, 3, 1).unwrap(), Splitness::Split);
        // m = 2: split iff disc is a square
        assert_eq!(splitness(2, 7, 3).unwrap(), Splitness::Nonsplit);
        // m = 3, p = 3: (-1/3) = -1
        assert_eq!(splitness(4, 3, 1).unwrap(), Splitness::Nonsplit);
        assert_eq!(splitness(4, 3, 2).unwrap(), Splitness::Split);
    }

    #[test]
    fn parabolic_shapes() {
        let g = GramSpec::odd(3, 7, 1).unwrap();
        let id = OrthMatrix::identity(g);
        for s in [Subgroup::P, Subgroup::Q, Subgroup::L, Subgroup::B, Subgroup::BL] {
            assert!(parabolic_membership(&id, s));
        }
        let f = g.field();
        let mut x = GfMatrix::zeros(f, 5, 5);
        add_root(&mut x, &g.antidiagonal(), 0, 1, f.one());
        let u = OrthMatrix::new(cayley_upper(&x), g).unwrap();
        assert!(parabolic_membership(&u, Subgroup::P));
        assert!(!parabolic_membership(&u, Subgroup::Q));
        assert!(!parabolic_membership(&u, Subgroup::L));
    }

    #[test]
    fn identity_frame_fails_condition_two() {
        let g = GramSpec::odd(3, 5, 1).unwrap();
        let report = frame_verify(&g, &FrameCandidate::new(OrthMatrix::identity(g)), false, 20, 1).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.condition.starts_with("(ii)")));
    }

    #[test]
    fn frames_small() {
        for (gram, twisted) in frame_cases(3, 5).unwrap().into_iter().chain(frame_cases(4, 7).unwrap()) {
            let cand = standard_frame(&gram, twisted).unwrap();
            let report = frame_verify(&gram, &cand, twisted, 30, 7).unwrap();
            assert!(report.passed(), "{:?}", report.violations.first());
        }
    }

    #[test]
    fn embedding_images_of_simple_reflections() {
        for n in 2..=7 {
            let p = 7;
            let src = if n % 2 == 0 { GramSpec::odd(n - 1, p, 3).unwrap() } else { GramSpec::even_split(n - 1, p).unwrap() };
            let dst = if n % 2 == 0 { GramSpec::even_split(n, p).unwrap() } else { GramSpec::odd(n, p, 1).unwrap() };
            let tg = dst.weyl_group();
            let m = dst.m();
            for i in 1..=src.m() {
                let img = embed_iota(&src, &dst, &reflection_rep(&src, i).unwrap()).unwrap();
                let expected = if i < src.m() {
                    word_rep(&dst, &tg.simple_reflection(i).unwrap()).unwrap()
                } else if n % 2 == 0 {
                    word_product(&dst, &[m - 1, m]).unwrap()
                } else {
                    word_product(&dst, &[m, m - 1, m]).unwrap()
                };
                assert_eq!(img, expected, "n={n} i={i}");
            }
        }
    }
}
