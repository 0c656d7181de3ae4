//! Basis-combinatorial Dieudonne modules for unitary BT-1s of signature (n,1).
//!
//! Every module here has a basis on which F and V act by sending basis
//! vectors to basis vectors or to zero, so all subspaces that arise are
//! spanned by subsets of the basis and every computation is exact.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::clifford_newton::SlopeMultiset;
use crate::error::{invalid, Error, Result};

/// Behaviour of p in the imaginary quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Split,
    Inert,
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Behavior::Split => "split",
            Behavior::Inert => "inert",
        })
    }
}

/// The grading datum: which side F and V land on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KappaTilde {
    pub behavior: Behavior,
}

impl KappaTilde {
    pub fn new(behavior: Behavior) -> Self {
        KappaTilde { behavior }
    }

    pub fn split() -> Self {
        Self::new(Behavior::Split)
    }

    pub fn inert() -> Self {
        Self::new(Behavior::Inert)
    }

    /// γ on the side index {1, 2}.
    pub fn gamma(&self, side: u8) -> u8 {
        match self.behavior {
            Behavior::Split => side,
            Behavior::Inert => 3 - side,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EllipticKind {
    OrdinarySplit,
    SupersingularInert,
}

/// A subspace spanned by basis vectors, stored as basis indices.
pub type Span = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisVector {
    pub label: String,
    pub side: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryDieudonneModule {
    basis: Vec<BasisVector>,
    f: Vec<Option<usize>>,
    v: Vec<Option<usize>>,
    kappa: KappaTilde,
}

/// Increasing chain of side-1 subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationChain {
    pub steps: Vec<Span>,
}

impl FiltrationChain {
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.len()).collect()
    }
}

impl UnitaryDieudonneModule {
    /// Builds a module from explicit maps. Checks the grading and the side
    /// dimensions but not the BT-1 condition; see [`Self::is_bt1`].
    pub fn from_maps(
        kappa: KappaTilde,
        basis: Vec<BasisVector>,
        f: Vec<Option<usize>>,
        v: Vec<Option<usize>>,
    ) -> Result<Self> {
        let len = basis.len();
        if f.len() != len || v.len() != len {
            return Err(Error::Shape(format!(
                "basis has {len} vectors but F has {} and V has {} entries",
                f.len(),
                v.len()
            )));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.side != 1 && b.side != 2 {
                return invalid(format!("basis vector {} has side {}", b.label, b.side));
            }
            for (name, map) in [("F", &f), ("V", &v)] {
                if let Some(t) = map[i] {
                    if t >= len {
                        return Err(Error::IndexOutOfRange { index: t, max: len - 1 });
                    }
                    if basis[t].side != kappa.gamma(b.side) {
                        return invalid(format!(
                            "{name}({}) = {} breaks the grading",
                            b.label, basis[t].label
                        ));
                    }
                }
            }
        }
        let m = Self { basis, f, v, kappa };
        if m.side(1).len() != m.side(2).len() {
            return invalid("the two sides have different dimensions");
        }
        Ok(m)
    }

    pub fn kappa(&self) -> KappaTilde {
        self.kappa
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn side(&self, side: u8) -> Span {
        (0..self.dim()).filter(|&i| self.basis[i].side == side).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn f_of(&self, i: usize) -> Option<usize> {
        self.f[i]
    }

    pub fn v_of(&self, i: usize) -> Option<usize> {
        self.v[i]
    }

    pub fn f_image(&self, u: &Span) -> Span {
        u.iter().filter_map(|&i| self.f[i]).collect()
    }

    pub fn v_image(&self, u: &Span) -> Span {
        u.iter().filter_map(|&i| self.v[i]).collect()
    }

    /// V^{-1}(U): ker V together with the vectors whose V-image lies in U.
    pub fn v_preimage(&self, u: &Span) -> Span {
        (0..self.dim())
            .filter(|&i| self.v[i].is_none_or(|t| u.contains(&t)))
            .collect()
    }

    pub fn f_kernel(&self) -> Span {
        (0..self.dim()).filter(|&i| self.f[i].is_none()).collect()
    }

    pub fn v_kernel(&self) -> Span {
        (0..self.dim()).filter(|&i| self.v[i].is_none()).collect()
    }

    fn injective_off_kernel(map: &[Option<usize>]) -> bool {
        let mut seen = HashSet::new();
        map.iter().flatten().all(|t| seen.insert(*t))
    }

    /// ker F = im V and ker V = im F, as basis spans.
    pub fn is_bt1(&self) -> bool {
        let all: Span = (0..self.dim()).collect();
        Self::injective_off_kernel(&self.f)
            && Self::injective_off_kernel(&self.v)
            && self.f_kernel() == self.v_image(&all)
            && self.v_kernel() == self.f_image(&all)
    }

    fn require_bt1(&self) -> Result<()> {
        if self.is_bt1() {
            Ok(())
        } else {
            invalid(format!("not a BT-1: ker F != im V or ker V != im F\n{self}"))
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.kappa != other.kappa {
            return invalid("direct sum of modules with different gradings");
        }
        let off = self.dim();
        let mut basis = Vec::with_capacity(off + other.dim());
        basis.extend(self.basis.iter().map(|b| BasisVector {
            label: format!("{}⊕", b.label),
            side: b.side,
        }));
        basis.extend(other.basis.iter().map(|b| BasisVector {
            label: format!("⊕{}", b.label),
            side: b.side,
        }));
        let shift = |m: &[Option<usize>], k: usize| -> Vec<Option<usize>> {
            m.iter().map(|t| t.map(|t| t + k)).collect()
        };
        let mut f = self.f.clone();
        f.extend(shift(&other.f, off));
        let mut v = self.v.clone();
        v.extend(shift(&other.v, off));
        Self::from_maps(self.kappa, basis, f, v)
    }

    /// T = V^{-1} F on side-1 subspaces.
    pub fn t_operator(&self, u: &Span) -> Span {
        let side1 = self.side(1);
        let fu = self.f_image(&u.intersection(&side1).copied().collect());
        self.v_preimage(&fu).intersection(&side1).copied().collect()
    }

    /// Closure of {0, M} under F and V^{-1}, cut down to side 1.
    pub fn canonical_filtration(&self) -> Result<FiltrationChain> {
        self.require_bt1()?;
        let all: Span = (0..self.dim()).collect();
        let mut seen: HashSet<Span> = HashSet::new();
        let mut todo = vec![Span::new(), all];
        while let Some(u) = todo.pop() {
            if !seen.insert(u.clone()) {
                continue;
            }
            todo.push(self.f_image(&u));
            todo.push(self.v_preimage(&u));
        }
        let side1 = self.side(1);
        let mut steps: Vec<Span> = seen
            .iter()
            .map(|u| u.intersection(&side1).copied().collect::<Span>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        steps.sort_by_key(|s| s.len());
        for w in steps.windows(2) {
            if !w[0].is_subset(&w[1]) || w[0].len() == w[1].len() {
                return Err(Error::Consistency(format!(
                    "canonical filtration is not a chain\n{self}"
                )));
            }
        }
        Ok(FiltrationChain { steps })
    }

    /// The index a = b - 1, where b is the dimension at which
    /// η_1(j) = dim M_{1,j}[F] jumps from 0 to 1.
    pub fn eo_invariant(&self) -> Result<usize> {
        let side1 = self.side(1);
        let ker1: Span = self.f_kernel().intersection(&side1).copied().collect();
        if ker1.len() != 1 {
            return invalid(format!(
                "expected a one-dimensional kernel of F on side 1, found {}",
                ker1.len()
            ));
        }
        let chain = self.canonical_filtration()?;
        let eta: Vec<(usize, usize)> = chain
            .steps
            .iter()
            .map(|s| (s.len(), s.intersection(&ker1).count()))
            .collect();
        let pos = eta.iter().position(|&(_, e)| e > 0).ok_or_else(|| {
            Error::Consistency("η_1 never becomes positive".into())
        })?;
        let b = eta[pos].0;
        if pos == 0 || eta[pos - 1] != (b - 1, 0) {
            return Err(Error::Consistency(format!(
                "η_1 has no unique jump along dimensions {:?}",
                chain.dims()
            )));
        }
        Ok(b - 1)
    }

    /// Dimension of the part where F is bijective.
    pub fn p_rank(&self) -> usize {
        let mut u: Span = (0..self.dim()).collect();
        loop {
            let next = self.f_image(&u);
            if next == u {
                return u.len();
            }
            u = next;
        }
    }

    /// dim M / (FM + VM).
    pub fn a_number(&self) -> usize {
        let all: Span = (0..self.dim()).collect();
        let mut img = self.f_image(&all);
        img.extend(self.v_image(&all));
        self.dim() - img.len()
    }
}

impl fmt::Display for UnitaryDieudonneModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |t: Option<usize>| t.map_or("0".to_string(), |t| self.basis[t].label.clone());
        writeln!(f, "module ({}), dim {}", self.kappa.behavior, self.dim())?;
        for (i, b) in self.basis.iter().enumerate() {
            writeln!(
                f,
                "  [{}] {}: F -> {}, V -> {}",
                b.side,
                b.label,
                show(self.f[i]),
                show(self.v[i])
            )?;
        }
        Ok(())
    }
}

/// Standard module of signature (n,1) with EO index a, on the basis
/// v_{i,j}, i in {1,2}, 1 <= j <= g = n+1.
///
/// In the inert case this is the tabulated module with F and V swapping the
/// sides. In the split case F and V preserve the sides, and the tabulated
/// rows for V on side 1 and F on side 2 do not give a BT-1. There side 1 is
/// étale of rank a plus a local-local part of height g-a, and side 2 is its
/// dual. The F rows of side 1 and the V rows of side 2 coincide with the table.
pub fn standard_module(n: usize, a: usize, kappa: KappaTilde) -> Result<UnitaryDieudonneModule> {
    if n == 0 || a > n {
        return invalid(format!("need 0 <= a <= n and n >= 1, got n = {n}, a = {a}"));
    }
    let g = n + 1;
    // v_{i,j} sits at (i-1)*g + (j-1)
    let idx = |i: u8, j: usize| (i as usize - 1) * g + (j - 1);
    let mut basis = Vec::with_capacity(2 * g);
    for i in 1..=2u8 {
        for j in 1..=g {
            basis.push(BasisVector { label: format!("v{i},{j}"), side: i });
        }
    }
    let mut f = vec![None; 2 * g];
    let mut v = vec![None; 2 * g];
    let gm = |i: u8| kappa.gamma(i);
    // F on side 1 is shared by both cases.
    for j in 1..=g {
        f[idx(1, j)] = match j.cmp(&(a + 1)) {
            std::cmp::Ordering::Less => Some(idx(gm(1), j)),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(idx(gm(1), j - 1)),
        };
    }
    match kappa.behavior {
        Behavior::Inert => {
            for j in 1..=g {
                v[idx(1, j)] = if j == 1 {
                    None
                } else if j <= g - a {
                    Some(idx(gm(1), j - 1))
                } else {
                    Some(idx(gm(1), j))
                };
                f[idx(2, j)] = (j == g - a).then(|| idx(gm(2), 1));
                v[idx(2, j)] = (j == g).then(|| idx(gm(2), a + 1));
            }
        }
        Behavior::Split => {
            for j in 1..=g {
                v[idx(1, j)] = (j == g).then(|| idx(1, a + 1));
                v[idx(2, j)] = match j.cmp(&(a + 1)) {
                    std::cmp::Ordering::Less => Some(idx(2, j)),
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Greater => Some(idx(2, j - 1)),
                };
                f[idx(2, j)] = (j == g).then(|| idx(2, a + 1));
            }
        }
    }
    let m = UnitaryDieudonneModule::from_maps(kappa, basis, f, v)?;
    if !m.is_bt1() {
        return Err(Error::Consistency(format!("standard module fails BT-1\n{m}")));
    }
    Ok(m)
}

/// Dieudonne module of the auxiliary elliptic curve.
pub fn elliptic_module(kind: EllipticKind) -> UnitaryDieudonneModule {
    let basis = vec![
        BasisVector { label: "n1".into(), side: 1 },
        BasisVector { label: "n2".into(), side: 2 },
    ];
    let (kappa, f, v) = match kind {
        EllipticKind::OrdinarySplit => (KappaTilde::split(), vec![Some(0), None], vec![None, Some(1)]),
        EllipticKind::SupersingularInert => {
            (KappaTilde::inert(), vec![Some(1), None], vec![Some(1), None])
        }
    };
    UnitaryDieudonneModule::from_maps(kappa, basis, f, v).expect("elliptic module is well formed")
}

pub fn elliptic_for(behavior: Behavior) -> UnitaryDieudonneModule {
    match behavior {
        Behavior::Split => elliptic_module(EllipticKind::OrdinarySplit),
        Behavior::Inert => elliptic_module(EllipticKind::SupersingularInert),
    }
}

pub fn closed_form_image(n: usize, a: usize, behavior: Behavior) -> usize {
    match behavior {
        Behavior::Split => a + 1,
        Behavior::Inert if 2 * a <= n => a,
        Behavior::Inert => a + 1,
    }
}

/// Image of the stratum a of signature (n,1) in signature (n+1,1), by adding
/// the elliptic curve and recomputing the EO index from the filtration.
/// Cross-checked against the closed form.
pub fn embed_image_unitary(n: usize, a: usize, behavior: Behavior) -> Result<usize> {
    let m = standard_module(n, a, KappaTilde::new(behavior))?;
    let sum = m.direct_sum(&elliptic_for(behavior))?;
    let derived = sum.eo_invariant()?;
    let closed = closed_form_image(n, a, behavior);
    if derived != closed {
        return Err(Error::Consistency(format!(
            "unitary image of a = {a} (n = {n}, {behavior}): filtration gives {derived}, \
             closed form gives {closed}\n{sum}"
        )));
    }
    Ok(derived)
}

/// Codimension of the stratum ρ in the (n,1) variety.
pub fn bw_codim(rho: usize, n: usize) -> Result<usize> {
    if rho == 0 || rho > n + 1 {
        return invalid(format!("ρ = {rho} outside 1..={}", n + 1));
    }
    Ok(if rho.is_multiple_of(2) { rho / 2 - 1 } else { n + 1 - rho.div_ceil(2) })
}

/// EO index (= dimension) of the stratum ρ.
pub fn bw_stratum(rho: usize, n: usize) -> Result<usize> {
    Ok(n - bw_codim(rho, n)?)
}

/// Slopes of the isocrystal of the ρ stratum, total multiplicity 2n+2.
pub fn bw_slopes(rho: usize, n: usize) -> Result<SlopeMultiset> {
    bw_codim(rho, n)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut s = SlopeMultiset::default();
    let total = 2 * n as u64 + 2;
    if rho % 2 == 1 {
        s.add(half, total);
        return Ok(s);
    }
    let m = (rho / 2) as u64;
    let d = BigRational::new(BigInt::from(1), BigInt::from(2 * m));
    s.add(&half - &d, 2 * m);
    s.add(half.clone(), total - 4 * m);
    s.add(&half + &d, 2 * m);
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimRow {
    pub rho: usize,
    pub dim: usize,
    pub image_dim: usize,
    pub codim: usize,
    pub image_codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimReport {
    pub n: usize,
    pub rows: Vec<CodimRow>,
    pub even_rho_dims: Vec<usize>,
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Re-derives the inert image through the codimension formula: the
/// stratum ρ of (n,1) goes to the stratum ρ of (n+1,1).
pub fn codim_consistency(n: usize) -> Result<CodimReport> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut dims_seen = BTreeSet::new();
    for rho in 1..=n + 1 {
        let codim = bw_codim(rho, n)?;
        let image_codim = bw_codim(rho, n + 1)?;
        let dim = n - codim;
        let image_dim = n + 1 - image_codim;
        let expect = if rho % 2 == 0 { codim } else { codim + 1 };
        if image_codim != expect {
            problems.push(format!("ρ = {rho}: codimension {codim} -> {image_codim}"));
        }
        if !dims_seen.insert(dim) {
            problems.push(format!("ρ = {rho}: dimension {dim} repeated"));
        }
        rows.push(CodimRow { rho, dim, image_dim, codim, image_codim });
    }
    if dims_seen.len() != n + 1 {
        problems.push("ρ does not enumerate all strata".into());
    }
    let mut even_rho_dims: Vec<usize> =
        rows.iter().filter(|r| r.rho % 2 == 0).map(|r| r.dim).collect();
    even_rho_dims.sort_unstable_by(|a, b| b.cmp(a));
    let big: Vec<usize> = (0..=n).rev().filter(|&d| 2 * d > n).collect();
    if even_rho_dims != big {
        problems.push(format!(
            "even ρ give dimensions {even_rho_dims:?}, expected those above n/2: {big:?}"
        ));
    }
    for r in &rows {
        let closed = closed_form_image(n, r.dim, Behavior::Inert);
        if r.image_dim != closed {
            problems.push(format!(
                "ρ = {}: codimension route sends {} to {}, closed form {}",
                r.rho, r.dim, r.image_dim, closed
            ));
        }
    }
    Ok(CodimReport { n, ok: problems.is_empty(), rows, even_rho_dims, problems })
}

/// p-rank of the split stratum a: the étale rank a of side 1, plus the
/// étale line of side 2 dual to µ in the ordinary stratum.
pub fn split_p_rank(n: usize, a: usize) -> usize {
    if a == n {
        n + 1
    } else {
        a
    }
}

/// Inverse of [`split_p_rank`]; p-rank n never occurs.
pub fn split_stratum_of_p_rank(n: usize, f: usize) -> Result<usize> {
    match f {
        f if f == n + 1 => Ok(n),
        f if f < n => Ok(f),
        _ => Err(Error::Consistency(format!("no split stratum of p-rank {f} for n = {n}"))),
    }
}

/// Image by the second route: codimension formula when inert, p-rank when
/// split (split strata are told apart by their p-rank).
pub fn second_route_image(n: usize, a: usize, behavior: Behavior) -> Result<usize> {
    if a > n {
        return invalid(format!("a = {a} exceeds n = {n}"));
    }
    match behavior {
        Behavior::Inert => {
            let rho = (1..=n + 1)
                .find(|&r| bw_stratum(r, n).ok() == Some(a))
                .ok_or_else(|| Error::Consistency(format!("no ρ for a = {a}, n = {n}")))?;
            bw_stratum(rho, n + 1)
        }
        Behavior::Split => {
            let m = standard_module(n, a, KappaTilde::split())?;
            let e = elliptic_for(Behavior::Split);
            split_stratum_of_p_rank(n + 1, m.p_rank() + e.p_rank())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitaryImageRow {
    pub n: usize,
    pub a: usize,
    pub behavior: Behavior,
    pub filtration: usize,
    pub second_route: usize,
    pub closed_form: usize,
}

impl UnitaryImageRow {
    pub fn agrees(&self) -> bool {
        self.filtration == self.closed_form && self.second_route == self.closed_form
    }
}

/// All three computations of the image for every stratum of signature (n,1).
pub fn unitary_image_rows(n: usize, behavior: Behavior) -> Result<Vec<UnitaryImageRow>> {
    (0..=n)
        .map(|a| {
            let m = standard_module(n, a, KappaTilde::new(behavior))?;
            let filtration = m.direct_sum(&elliptic_for(behavior))?.eo_invariant()?;
            Ok(UnitaryImageRow {
                n,
                a,
                behavior,
                filtration,
                second_route: second_route_image(n, a, behavior)?,
                closed_form: closed_form_image(n, a, behavior),
            })
        })
        .collect()
}

/// The pair (r, s) controlling the T-operator on the inert standard module.
pub fn t_bounds(n: usize, a: usize) -> (usize, usize) {
    (usize::min(a + 1, n + 1 - a), usize::max(a, n + 1 - a))
}
