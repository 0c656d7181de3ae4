//! EO strata of GSpin(n,2): the catalog with dimensions, a-numbers and
//! p-ranks, and the image map under SO(n-1,2) → SO(n,2), both in closed form
//! and derived from the normalized embedding ι.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gf;
use crate::sogroup::{self, GramSpec, OrthMatrix, Splitness};
use crate::weyl::{self, WeylElement, WeylGroupSpec};
use crate::zipcox::{CoxeterZipDatum, PsiKind, StratumLabel};

/// Source data for n odd. The nonsplit subcases differ in the target form:
/// (I) q = q' - x², (II) q = q' + u x².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceCase {
    Split,
    NonsplitI,
    NonsplitII,
}

impl SourceCase {
    pub fn splitness(self) -> Splitness {
        match self {
            SourceCase::Split => Splitness::Split,
            _ => Splitness::Nonsplit,
        }
    }
}

/// (c, d) for n even: q' = ... + c x_m², q = q' + d x_{m+1}², u a fixed nonsquare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CdClass {
    #[serde(rename = "(1,1)")]
    OneOne,
    #[serde(rename = "(u,u)")]
    UU,
    #[serde(rename = "(1,u)")]
    OneU,
    #[serde(rename = "(u,1)")]
    UOne,
}

impl CdClass {
    pub const ALL: [CdClass; 4] = [CdClass::OneOne, CdClass::UU, CdClass::OneU, CdClass::UOne];

    pub fn values(self, p: u32) -> (i64, i64) {
        let u = gf::smallest_nonsquare(p) as i64;
        match self {
            CdClass::OneOne => (1, 1),
            CdClass::UU => (u, u),
            CdClass::OneU => (1, u),
            CdClass::UOne => (u, 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrthCase {
    pub n: usize,
    pub p: Option<u32>,
    pub source: Option<SourceCase>,
    pub cd: Option<CdClass>,
    pub ambient: Splitness,
}

impl OrthCase {
    pub fn odd(n: usize, source: SourceCase) -> Result<Self> {
        if n.is_multiple_of(2) {
            return invalid(format!("n = {n} is not odd"));
        }
        Ok(OrthCase { n, p: None, source: Some(source), cd: None, ambient: Splitness::Split })
    }

    /// Ambient splitness from (c, d): split iff -cd is a square mod p.
    pub fn even(n: usize, p: u32, cd: CdClass) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return invalid(format!("n = {n} is not a positive even integer"));
        }
        let (c, d) = cd.values(p);
        let m = n / 2 + 1;
        let sign = if (m - 1).is_multiple_of(2) { 1 } else { -1 };
        let ambient = sogroup::splitness(n, p, sign * c * d)?;
        Ok(OrthCase { n, p: Some(p), source: None, cd: Some(cd), ambient })
    }

    /// Even n with only the ambient splitness given.
    pub fn even_ambient(n: usize, ambient: Splitness) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return invalid(format!("n = {n} is not a positive even integer"));
        }
        Ok(OrthCase { n, p: None, source: None, cd: None, ambient })
    }

    pub fn m(&self) -> usize {
        if self.n % 2 == 1 {
            self.n.div_ceil(2)
        } else {
            self.n / 2 + 1
        }
    }

    /// ψ of the ambient zip datum.
    pub fn psi_kind(&self) -> PsiKind {
        match (self.n % 2, self.source, self.ambient) {
            (1, Some(SourceCase::Split), _) => PsiKind::Identity,
            (1, _, _) => PsiKind::InnerSm,
            (_, _, Splitness::Split) => PsiKind::Identity,
            _ => PsiKind::DiagramSwap,
        }
    }

    pub fn describe(&self) -> String {
        match (self.source, self.cd) {
            (Some(s), _) => format!("n={} source {:?}", self.n, s),
            (None, Some(cd)) => format!("n={} (c,d)={:?} p={} ambient {:?}", self.n, cd, self.p.unwrap_or(0), self.ambient),
            _ => format!("n={} ambient {:?}", self.n, self.ambient),
        }
    }
}

/// Every case with n in the given range: n odd gives the three source cases,
/// n even gives the four (c,d) classes at p.
pub fn all_cases(ns: impl IntoIterator<Item = usize>, p: u32) -> Result<Vec<OrthCase>> {
    let mut out = Vec::new();
    for n in ns {
        if n % 2 == 1 {
            for s in [SourceCase::Split, SourceCase::NonsplitI, SourceCase::NonsplitII] {
                out.push(OrthCase::odd(n, s)?);
            }
        } else {
            for cd in CdClass::ALL {
                out.push(OrthCase::even(n, p, cd)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EOStratumInfo {
    pub name: String,
    pub word: Vec<usize>,
    pub dim: usize,
    pub a_number: u64,
    pub p_rank: u64,
    pub basic: bool,
}

/// The labels of ^µW in closed form, sorted as w_0, ..., w_n with w_{m-1}^† after w_{m-1}.
pub fn labels(n: usize) -> Result<Vec<(String, StratumLabel)>> {
    let group = WeylGroupSpec::orthogonal(n)?;
    weyl::closed_form_muw(n)?
        .into_iter()
        .map(|(name, word)| Ok((name, StratumLabel::new(group.from_word(&word)?))))
        .collect()
}

pub fn is_basic(case: &OrthCase, dim: usize) -> bool {
    let m = case.m();
    if case.n % 2 == 1 {
        dim < m
    } else if case.ambient == Splitness::Split {
        dim < m - 1
    } else {
        dim < m
    }
}

pub fn catalog(case: &OrthCase) -> Result<Vec<EOStratumInfo>> {
    let n = case.n;
    let group = WeylGroupSpec::orthogonal(n)?;
    let words = weyl::closed_form_muw(n)?;
    let mut out = Vec::with_capacity(words.len());
    for (name, word) in words {
        let dim = group.from_word(&word)?.length();
        let a_number = if dim == n {
            0
        } else if dim == 0 {
            1u64 << n
        } else {
            1u64 << (n - 1)
        };
        let basic = is_basic(case, dim);
        out.push(EOStratumInfo { name, word, dim, a_number, p_rank: if basic { 0 } else { 1u64 << dim }, basic });
    }
    Ok(out)
}

/// Dimension of the image stratum of a source stratum of dimension i.
pub fn embed_image_closed_form(case: &OrthCase, i: usize) -> Result<usize> {
    let n = case.n;
    if i >= n {
        return invalid(format!("i = {i} must be below n = {n}"));
    }
    if n.is_multiple_of(2) {
        return Ok(if i < n / 2 { i } else { i + 1 });
    }
    let mid = (n - 1) / 2;
    Ok(match i.cmp(&mid) {
        std::cmp::Ordering::Less => i,
        std::cmp::Ordering::Greater => i + 1,
        std::cmp::Ordering::Equal => match case.source {
            Some(SourceCase::Split) => i + 1,
            Some(_) => i,
            None => return invalid("n odd needs the source splitness"),
        },
    })
}

/// Prime used by the matrix computations when the case does not fix one.
const DEFAULT_PRIME: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedTrace {
    pub source: String,
    pub source_dim: usize,
    pub source_word: Vec<usize>,
    /// ι(P_{w'}) read back as a Weyl element, in cycle notation.
    pub image: String,
    /// g⁻¹ι(g'), identity when the frames are compatible.
    pub correction: String,
    pub target: String,
    pub target_dim: usize,
}

/// The normalized embedding for one case together with the frames and the
/// target zip datum.
pub struct Embedder {
    case: OrthCase,
    src: GramSpec,
    dst: GramSpec,
    correction: WeylElement,
    datum: CoxeterZipDatum,
}

impl Embedder {
    pub fn new(case: &OrthCase) -> Result<Self> {
        Self::with_psi(case, case.psi_kind())
    }

    /// Same embedding, with the ambient datum built from `psi`.
    pub fn with_psi(case: &OrthCase, psi: PsiKind) -> Result<Self> {
        let n = case.n;
        if n < 2 {
            return invalid("the source must have positive rank; n = 1 is the zero-dimensional case");
        }
        let p = case.p.unwrap_or(DEFAULT_PRIME);
        let u = gf::smallest_nonsquare(p) as i64;
        let (src, dst, twisted) = if n.is_multiple_of(2) {
            let (c, _) = case.cd.map(|cd| cd.values(p)).unwrap_or((1, 1));
            let src = GramSpec::odd(n - 1, p, c)?;
            match case.ambient {
                Splitness::Split => (src, GramSpec::even_split(n, p)?, false),
                Splitness::Nonsplit => (src, GramSpec::even_nonsplit(n, p, u)?, true),
            }
        } else {
            match case.source {
                Some(SourceCase::Split) => (GramSpec::even_split(n - 1, p)?, GramSpec::odd(n, p, 1)?, false),
                Some(SourceCase::NonsplitI) => (GramSpec::even_nonsplit(n - 1, p, u)?, GramSpec::odd(n, p, -1)?, true),
                Some(SourceCase::NonsplitII) => (GramSpec::even_nonsplit(n - 1, p, u)?, GramSpec::odd(n, p, u)?, true),
                None => return invalid("n odd needs the source splitness"),
            }
        };
        // the source frame uses the twisted Frobenius exactly when the source is nonsplit
        let src_twisted = n % 2 == 1 && case.source != Some(SourceCase::Split);
        let g_src = sogroup::standard_frame(&src, src_twisted)?.g;
        let g_dst = sogroup::standard_frame(&dst, twisted)?.g;
        let corr = g_dst.inverse().mul(&sogroup::embed_iota(&src, &dst, &g_src)?)?;
        let correction = corr
            .weyl_element()
            .ok_or_else(|| Error::Consistency("frames differ by a non-Weyl element".into()))?;
        let datum = CoxeterZipDatum::orthogonal(n, psi)?;
        Ok(Embedder { case: *case, src, dst, correction, datum })
    }

    pub fn datum(&self) -> &CoxeterZipDatum {
        &self.datum
    }

    pub fn correction(&self) -> &WeylElement {
        &self.correction
    }

    /// ι on Weyl elements, read off the matrix ι(P_{w'}).
    pub fn image_element(&self, w: &WeylElement) -> Result<WeylElement> {
        let pw = sogroup::word_rep(&self.src, w)?;
        let img: OrthMatrix = sogroup::embed_iota(&self.src, &self.dst, &pw)?;
        img.weyl_element().ok_or_else(|| Error::Consistency(format!("ι(P_{w}) is not monomial")))
    }

    /// ι on Weyl elements by substituting the images of the simple reflections.
    pub fn image_by_words(&self, w: &WeylElement) -> Result<WeylElement> {
        let ms = self.src.m();
        let m = self.dst.m();
        let boundary: Vec<usize> = if self.case.n.is_multiple_of(2) { vec![m - 1, m] } else { vec![m, m - 1, m] };
        let word: Vec<usize> = w
            .reduced_word()
            .into_iter()
            .flat_map(|i| if i < ms { vec![i] } else { boundary.clone() })
            .collect();
        self.dst.weyl_group().from_word(&word)
    }

    pub fn image(&self, w: &WeylElement) -> Result<(StratumLabel, EmbedTrace)> {
        let img = self.image_element(w)?;
        let by_words = self.image_by_words(w)?;
        if img != by_words {
            return Err(Error::Consistency(format!(
                "ι({w}) is {img} on matrices but {by_words} on words"
            )));
        }
        let label = self.datum.canonical_label(&self.correction.compose(&img))?;
        let trace = EmbedTrace {
            source: weyl::mu_w_name(w).unwrap_or_else(|| w.cycles()),
            source_dim: w.length(),
            source_word: w.reduced_word(),
            image: img.cycles(),
            correction: self.correction.cycles(),
            target: label.name(),
            target_dim: label.dim,
        };
        Ok((label, trace))
    }

    /// All source labels with their images, in source label order.
    pub fn image_table(&self) -> Result<Vec<EmbedTrace>> {
        labels(self.case.n - 1)?.into_iter().map(|(_, l)| Ok(self.image(&l.rep)?.1)).collect()
    }
}

pub fn embed_image_derived(case: &OrthCase, source: &StratumLabel) -> Result<StratumLabel> {
    Ok(Embedder::new(case)?.image(&source.rep)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub case: String,
    pub trace: EmbedTrace,
    pub closed_form: usize,
    pub agree: bool,
    /// n even: the target label under the other ψ, when it differs.
    pub psi_disagreement: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub p: u32,
    pub rows: Vec<SweepRow>,
    /// n = 1 is handled by the zero-dimensional case.
    pub delegated: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.agree && r.psi_disagreement.is_none())
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.agree || r.psi_disagreement.is_some())
    }
}

pub fn sweep_case(case: &OrthCase) -> Result<Vec<SweepRow>> {
    let emb = Embedder::new(case)?;
    let other = if case.n.is_multiple_of(2) {
        let alt = match case.psi_kind() {
            PsiKind::Identity => PsiKind::DiagramSwap,
            _ => PsiKind::Identity,
        };
        Some(Embedder::with_psi(case, alt)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (_, l) in labels(case.n - 1)? {
        let (label, trace) = emb.image(&l.rep)?;
        let closed = embed_image_closed_form(case, l.dim)?;
        let psi_disagreement = match &other {
            Some(o) => {
                let alt = o.image(&l.rep)?.0;
                (alt != label).then(|| alt.name())
            }
            None => None,
        };
        rows.push(SweepRow {
            case: case.describe(),
            agree: label.dim == closed,
            closed_form: closed,
            trace,
            psi_disagreement,
        });
    }
    Ok(rows)
}

pub fn consistency_sweep(n_max: usize, p: u32) -> Result<SweepReport> {
    if n_max > 8 {
        return invalid("the sweep is limited to n <= 8");
    }
    let mut rows = Vec::new();
    for case in all_cases(2..=n_max, p)? {
        rows.extend(sweep_case(&case)?);
    }
    Ok(SweepReport {
        n_max,
        p,
        rows,
        delegated: vec!["n=1: rank-0 source, see the zero-dimensional Kuga-Satake case".into()],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaFixture {
    pub setting: String,
    pub stratum: String,
    pub dim: usize,
    pub f: u64,
    pub a: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageFixture {
    pub setting: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub target_f: u64,
    pub target_a: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallRankFixtures {
    pub hilbert: Vec<FaFixture>,
    pub siegel: Vec<FaFixture>,
    pub hilbert_to_siegel: Vec<ImageFixture>,
}

/// (p-rank, a-number) tables for Hilbert modular surfaces (n = 2) and the
/// Siegel threefold (n = 3), and where the middle Hilbert strata land.
pub fn small_rank_fixtures() -> SmallRankFixtures {
    let fa = |setting: &str, stratum: &str, dim, f, a| FaFixture {
        setting: setting.into(),
        stratum: stratum.into(),
        dim,
        f,
        a,
    };
    let mut hilbert = Vec::new();
    for (setting, mid) in [("p split in F", (1, 1)), ("p inert in F", (0, 1))] {
        hilbert.push(fa(setting, "ordinary", 2, 2, 0));
        hilbert.push(fa(setting, "w_1", 1, mid.0, mid.1));
        hilbert.push(fa(setting, "w_1^†", 1, mid.0, mid.1));
        hilbert.push(fa(setting, "superspecial", 0, 0, 2));
    }
    let siegel = vec![
        fa("Siegel threefold", "ordinary", 3, 2, 0),
        fa("Siegel threefold", "w_2", 2, 1, 1),
        fa("Siegel threefold", "w_1", 1, 0, 1),
        fa("Siegel threefold", "superspecial", 0, 0, 2),
    ];
    let image = |setting: &str, s, t, f, a| ImageFixture {
        setting: setting.into(),
        source_dim: s,
        target_dim: t,
        target_f: f,
        target_a: a,
    };
    let hilbert_to_siegel = vec![
        image("p split in F", 0, 0, 0, 2),
        image("p split in F", 1, 2, 1, 1),
        image("p split in F", 2, 3, 2, 0),
        image("p inert in F", 0, 0, 0, 2),
        image("p inert in F", 1, 1, 0, 1),
        image("p inert in F", 2, 3, 2, 0),
    ];
    SmallRankFixtures { hilbert, siegel, hilbert_to_siegel }
}

/// Under the Morita reduction a Kuga-Satake abelian variety for n = 1, 2, 3 is
/// the 2^{n-1}-fold power of an elliptic curve product, an abelian surface
/// with real multiplication, or an abelian surface respectively.
pub fn morita_factor(n: usize) -> u64 {
    1u64 << n.saturating_sub(1)
}
