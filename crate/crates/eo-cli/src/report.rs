use serde::Serialize;
use serde_json::{json, Map, Value};

use eo_core::clifford_newton::{self, NewtonKind, QpCase};
use eo_core::sogroup::{self, FrameReport, GramSpec};
use eo_core::strata_orth::{self, EOStratumInfo, EmbedTrace, OrthCase};
use eo_core::unitary_dd::{self, Behavior, KappaTilde, UnitaryImageRow};
use eo_core::weyl::{self, WeylGroupSpec};
use eo_core::zipcox::CoxeterZipDatum;
use eo_core::{Error, SlopeMultiset};
use rayon::prelude::*;

pub const SCHEMA: &str = "eo-report/v1";

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::IndexOutOfRange { .. } => 2,
            _ => 4,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { code: 4, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Value,
    #[serde(skip)]
    pub view: View,
}

impl Report {
    /// Exit code implied by the report contents.
    pub fn exit_code(&self) -> u8 {
        match &self.view {
            View::Verify(v) if !v.passed => 3,
            _ => 0,
        }
    }
}

/// Typed payload kept alongside the JSON for the table and DOT renderers.
pub enum View {
    Orth(OrthView),
    EmbedOrth(EmbedOrthView),
    EmbedUnitary(EmbedUnitaryView),
    Newton(NewtonView),
    Verify(VerifyView),
}

#[derive(Clone, Serialize)]
pub struct Edge {
    pub lower: String,
    pub upper: String,
}

#[derive(Serialize)]
pub struct CatalogRow {
    #[serde(flatten)]
    pub info: EOStratumInfo,
    pub routes: Vec<&'static str>,
}

#[derive(Serialize)]
pub struct OrthView {
    pub case: String,
    pub ambient: String,
    pub strata: Vec<CatalogRow>,
    pub hasse: Vec<Edge>,
    pub convention: &'static str,
}

fn hasse_edges(datum: &CoxeterZipDatum) -> CliResult<Vec<Edge>> {
    Ok(datum
        .hasse_diagram()?
        .into_iter()
        .map(|(a, b)| Edge { lower: a.name(), upper: b.name() })
        .collect())
}

fn orth_datum(n: usize, case: &OrthCase) -> CliResult<CoxeterZipDatum> {
    Ok(CoxeterZipDatum::orthogonal(n, case.psi_kind())?)
}

fn case_inputs(case: &OrthCase) -> CliResult<Map<String, Value>> {
    match serde_json::to_value(case)? {
        Value::Object(m) => Ok(m),
        _ => Err(CliError { code: 4, message: "case did not serialize to an object".into() }),
    }
}

pub fn orth(case: &OrthCase) -> CliResult<Report> {
    let n = case.n;
    let group = WeylGroupSpec::orthogonal(n)?;
    let reps = weyl::min_coset_reps(group, &group.levi_gens())?;
    let mut strata = Vec::new();
    for info in strata_orth::catalog(case)? {
        let w = group.from_word(&info.word)?;
        if !reps.contains(&w) || w.length() != info.dim {
            return Err(Error::Consistency(format!("{} is not a minimal coset representative", info.name)).into());
        }
        strata.push(CatalogRow { info, routes: vec!["closed-form-word", "coset-minimization"] });
    }
    let view = OrthView {
        case: case.describe(),
        ambient: format!("{:?}", case.ambient).to_lowercase(),
        strata,
        hasse: hasse_edges(&orth_datum(n, case)?)?,
        convention: "a-number and p-rank of the Kuga-Satake abelian variety",
    };
    Ok(Report {
        schema: SCHEMA,
        command: "orth".into(),
        inputs: case_inputs(case)?,
        result: serde_json::to_value(&view)?,
        view: View::Orth(view),
    })
}

#[derive(Serialize)]
pub struct EmbedOrthRow {
    #[serde(flatten)]
    pub trace: EmbedTrace,
    pub closed_form: usize,
    pub agree: bool,
    pub routes: Vec<&'static str>,
}

#[derive(Serialize)]
pub struct EmbedOrthView {
    pub case: String,
    pub rows: Vec<EmbedOrthRow>,
    pub source_hasse: Vec<Edge>,
    pub target_hasse: Vec<Edge>,
    pub source_labels: Vec<String>,
    pub target_labels: Vec<String>,
}

pub fn embed_orth(case: &OrthCase) -> CliResult<Report> {
    let n = case.n;
    let mut rows = Vec::new();
    let (source_hasse, source_labels) = if n == 1 {
        // rank-0 source: a single point, handled by the A_1 datum
        let behavior = match case.source {
            Some(eo_core::SourceCase::Split) => clifford_newton::ZeroDimBehavior::Split,
            _ => clifford_newton::ZeroDimBehavior::Inert,
        };
        let z = clifford_newton::zero_dim_case(behavior)?;
        let target_dim = usize::from(z.locus == clifford_newton::ZeroDimLocus::Ordinary);
        let closed = strata_orth::embed_image_closed_form(case, 0)?;
        let target = strata_orth::labels(1)?
            .into_iter()
            .find(|(_, l)| l.dim == target_dim)
            .map(|(name, _)| name)
            .unwrap_or_default();
        rows.push(EmbedOrthRow {
            trace: EmbedTrace {
                source: "pt".into(),
                source_dim: 0,
                source_word: vec![],
                image: z.label.clone(),
                correction: z.frame.clone(),
                target,
                target_dim,
            },
            closed_form: closed,
            agree: closed == target_dim,
            routes: vec!["zero-dim-datum", "closed-form"],
        });
        (vec![], vec!["pt".to_string()])
    } else {
        let emb = strata_orth::Embedder::new(case)?;
        for trace in emb.image_table()? {
            let closed = strata_orth::embed_image_closed_form(case, trace.source_dim)?;
            rows.push(EmbedOrthRow {
                agree: trace.target_dim == closed,
                closed_form: closed,
                trace,
                routes: vec!["matrix-iota", "word-substitution", "closed-form"],
            });
        }
        let src_case = source_case(case)?;
        let src = orth_datum(n - 1, &src_case)?;
        (hasse_edges(&src)?, src.mu_w().iter().map(|l| l.name()).collect())
    };
    if let Some(bad) = rows.iter().find(|r| !r.agree) {
        return Err(Error::Consistency(format!(
            "image of {} is {} (dimension {}) but the closed form gives dimension {}",
            bad.trace.source, bad.trace.target, bad.trace.target_dim, bad.closed_form
        ))
        .into());
    }
    let dst = orth_datum(n, case)?;
    let view = EmbedOrthView {
        case: case.describe(),
        rows,
        source_hasse,
        target_hasse: hasse_edges(&dst)?,
        source_labels,
        target_labels: dst.mu_w().iter().map(|l| l.name()).collect(),
    };
    Ok(Report {
        schema: SCHEMA,
        command: "embed orth".into(),
        inputs: case_inputs(case)?,
        result: serde_json::to_value(&view)?,
        view: View::EmbedOrth(view),
    })
}

/// Only the shape of the source poset matters for the diagram.
fn source_case(case: &OrthCase) -> CliResult<OrthCase> {
    let m = case.n - 1;
    Ok(if m % 2 == 1 {
        OrthCase::odd(m, eo_core::SourceCase::Split)?
    } else {
        OrthCase::even_ambient(m, case.source.map_or(eo_core::Splitness::Split, |s| s.splitness()))?
    })
}

#[derive(Serialize)]
pub struct UnitaryRow {
    #[serde(flatten)]
    pub row: UnitaryImageRow,
    pub agree: bool,
    pub routes: Vec<&'static str>,
    pub source_p_rank: usize,
    pub source_a_number: usize,
    pub target_p_rank: usize,
    pub target_a_number: usize,
}

#[derive(Serialize)]
pub struct EmbedUnitaryView {
    pub n: usize,
    pub behavior: Behavior,
    pub rows: Vec<UnitaryRow>,
    pub convention: &'static str,
}

pub fn embed_unitary(n: usize, behavior: Behavior) -> CliResult<Report> {
    let kappa = KappaTilde::new(behavior);
    let second = match behavior {
        Behavior::Split => "p-rank",
        Behavior::Inert => "codimension",
    };
    let mut rows = Vec::new();
    for row in unitary_dd::unitary_image_rows(n, behavior)? {
        let src = unitary_dd::standard_module(n, row.a, kappa)?;
        let sum = src.direct_sum(&unitary_dd::elliptic_for(behavior))?;
        if !row.agrees() {
            return Err(Error::Consistency(format!(
                "a = {}: filtration {}, {second} {}, closed form {}\n{sum}",
                row.a, row.filtration, row.second_route, row.closed_form
            ))
            .into());
        }
        rows.push(UnitaryRow {
            agree: true,
            routes: vec!["filtration", second, "closed-form"],
            source_p_rank: src.p_rank(),
            source_a_number: src.a_number(),
            target_p_rank: sum.p_rank(),
            target_a_number: sum.a_number(),
            row,
        });
    }
    let view = EmbedUnitaryView {
        n,
        behavior,
        rows,
        convention: "strata of signature (n,1) indexed by dimension a; p-rank and a-number computed on \
                     the Dieudonne module of rank 2(n+1), and on the sum with the elliptic curve for the target",
    };
    let mut inputs = Map::new();
    inputs.insert("n".into(), json!(n));
    inputs.insert("behavior".into(), json!(behavior.to_string()));
    Ok(Report {
        schema: SCHEMA,
        command: "embed unitary".into(),
        inputs,
        result: serde_json::to_value(&view)?,
        view: View::EmbedUnitary(view),
    })
}

#[derive(Serialize)]
pub struct NewtonRow {
    pub name: String,
    pub kind: NewtonKind,
    pub j: usize,
    pub dim: Option<usize>,
    pub p_rank: u64,
    pub slopes: SlopeMultiset,
    pub closed_form: SlopeMultiset,
    pub agree: bool,
    pub routes: Vec<&'static str>,
}

#[derive(Serialize)]
pub struct NewtonView {
    pub n: usize,
    pub case: QpCase,
    pub rows: Vec<NewtonRow>,
    pub order: Vec<Edge>,
}

pub fn newton(n: usize, case: QpCase) -> CliResult<Report> {
    let strata = clifford_newton::newton_set(n, case)?;
    let mut rows = Vec::new();
    for s in &strata {
        let c = &s.cocharacter;
        let (slopes, closed, routes) = match c.kind {
            NewtonKind::Basic => {
                let b = clifford_newton::basic_slopes(n);
                (b.clone(), b, vec!["closed-form"])
            }
            kind => (
                clifford_newton::slopes_of_nu(n, c.j, kind == NewtonKind::Primed)?,
                clifford_newton::closed_form_slopes(n, c.j),
                vec!["clifford-left-multiplication", "closed-form"],
            ),
        };
        if slopes != closed {
            return Err(Error::Consistency(format!("{}: Clifford slopes {slopes}, closed form {closed}", c.name())).into());
        }
        rows.push(NewtonRow {
            name: c.name(),
            kind: c.kind,
            j: c.j,
            dim: s.dim,
            p_rank: s.p_rank,
            agree: true,
            slopes,
            closed_form: closed,
            routes,
        });
    }
    // covering relations of the Newton order
    let mut order = Vec::new();
    for a in &strata {
        for b in &strata {
            if a.cocharacter == b.cocharacter || !clifford_newton::newton_leq(&a.cocharacter, &b.cocharacter, case)? {
                continue;
            }
            let mut covered = true;
            for c in &strata {
                if c.cocharacter != a.cocharacter
                    && c.cocharacter != b.cocharacter
                    && clifford_newton::newton_leq(&a.cocharacter, &c.cocharacter, case)?
                    && clifford_newton::newton_leq(&c.cocharacter, &b.cocharacter, case)?
                {
                    covered = false;
                    break;
                }
            }
            if covered {
                order.push(Edge { lower: a.cocharacter.name(), upper: b.cocharacter.name() });
            }
        }
    }
    let view = NewtonView { n, case, rows, order };
    let mut inputs = Map::new();
    inputs.insert("n".into(), json!(n));
    inputs.insert("case".into(), serde_json::to_value(case)?);
    Ok(Report {
        schema: SCHEMA,
        command: "newton".into(),
        inputs,
        result: serde_json::to_value(&view)?,
        view: View::Newton(view),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Frames,
    Zip,
    Clifford,
    Unitary,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Frames => "frames",
            Suite::Zip => "zip",
            Suite::Clifford => "clifford",
            Suite::Unitary => "unitary",
        }
    }
}

#[derive(Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub count: usize,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyView {
    pub suites: Vec<&'static str>,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub failures: Vec<Check>,
}

pub struct VerifyOptions {
    pub seed: u64,
    pub n: Option<usize>,
    pub p: Option<u32>,
    pub c: Option<i64>,
    pub samples: usize,
}

/// Seed for shard `k`, so results do not depend on how shards are scheduled.
fn shard_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn frame_jobs(opts: &VerifyOptions) -> CliResult<Vec<(GramSpec, bool)>> {
    let ns: Vec<usize> = match opts.n {
        Some(n) => vec![n],
        None => (1..=6).collect(),
    };
    let ps: Vec<u32> = match opts.p {
        Some(p) => vec![p],
        None => vec![3, 5, 7],
    };
    let mut jobs = Vec::new();
    for &n in &ns {
        for &p in &ps {
            match opts.c {
                // explicit Gram constant: odd n untwisted and twisted, even n nonsplit twisted
                Some(c) if n % 2 == 1 => {
                    jobs.push((GramSpec::odd(n, p, c)?, false));
                    if n >= 3 {
                        jobs.push((GramSpec::odd(n, p, c)?, true));
                    }
                }
                Some(c) => jobs.push((GramSpec::even_nonsplit(n, p, c)?, true)),
                None => jobs.extend(sogroup::frame_cases(n, p)?),
            }
        }
    }
    Ok(jobs)
}

fn verify_frames(opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let jobs = frame_jobs(opts)?;
    let reports: Vec<Result<FrameReport, Error>> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (gram, twisted))| {
            let cand = sogroup::standard_frame(gram, *twisted)?;
            sogroup::frame_verify(gram, &cand, *twisted, opts.samples, shard_seed(opts.seed, k))
        })
        .collect();
    let mut checks = Vec::new();
    for r in reports {
        let r = r?;
        let detail = match r.violations.first() {
            Some(v) => format!("{} violations, first: {} at {}", r.violations.len(), v.condition, v.source),
            None => format!("g = {}, {} conditions", r.g, r.conditions.len()),
        };
        checks.push(Check {
            suite: "frames",
            name: format!("n={} p={} {:?} twisted={}", r.n, r.p, r.gram, r.twisted),
            passed: r.passed(),
            count: r.samples,
            detail,
        });
    }
    Ok(checks)
}

fn verify_zip(opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let n_max = opts.n.unwrap_or(6).min(6);
    for n in 1..=n_max {
        let kinds = match n % 2 {
            1 if n >= 3 => vec![eo_core::PsiKind::Identity, eo_core::PsiKind::InnerSm],
            1 => vec![eo_core::PsiKind::Identity],
            _ => vec![eo_core::PsiKind::Identity, eo_core::PsiKind::DiagramSwap],
        };
        for kind in kinds {
            let d = CoxeterZipDatum::orthogonal(n, kind)?;
            let reps: std::collections::BTreeSet<_> = d.mu_w().into_iter().map(|l| l.rep).collect();
            let mut seen = std::collections::BTreeSet::new();
            let mut problems = Vec::new();
            for w in d.elements() {
                let label = d.canonical_label(w)?;
                if !d.orbit_equal(w, &label.rep)? || !d.orbit_equal(&label.rep, w)? {
                    problems.push(format!("{w} and its label are not orbit-equal both ways"));
                }
                seen.insert(label.rep);
            }
            if seen != reps {
                problems.push("labels do not exhaust ^µW".into());
            }
            let m = d.order_matrix()?;
            let k = m.len();
            for i in 0..k {
                for j in 0..k {
                    if i != j && m[i][j] && m[j][i] {
                        problems.push(format!("⪯ is not antisymmetric at ({i},{j})"));
                    }
                    if (0..k).any(|l| m[i][j] && m[j][l] && !m[i][l]) {
                        problems.push(format!("⪯ is not transitive from {i} through {j}"));
                    }
                }
            }
            checks.push(Check {
                suite: "zip",
                name: format!("orbits n={n} {kind:?}"),
                passed: problems.is_empty(),
                count: d.elements().len(),
                detail: problems.first().cloned().unwrap_or_else(|| format!("{} strata", reps.len())),
            });
        }
    }
    let p = opts.p.unwrap_or(5);
    let sweep = strata_orth::consistency_sweep(8, p)?;
    let bad: Vec<String> = sweep.mismatches().map(|r| format!("{}: {}", r.case, r.trace.source)).collect();
    checks.push(Check {
        suite: "zip",
        name: format!("orthogonal embedding images n<=8 p={p}"),
        passed: bad.is_empty(),
        count: sweep.rows.len(),
        detail: bad.first().cloned().unwrap_or_else(|| "derived images match the closed form".into()),
    });
    Ok(checks)
}

fn verify_clifford(opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let ns: Vec<usize> = match opts.n {
        Some(n) => vec![n],
        None => (1..=6).collect(),
    };
    let mut checks = Vec::new();
    for n in ns {
        let case = QpCase::for_n(n, true);
        let mut bad = Vec::new();
        let mut count = 0;
        for s in clifford_newton::newton_set(n, case)? {
            let c = &s.cocharacter;
            if c.kind == NewtonKind::Basic {
                continue;
            }
            let got = clifford_newton::slopes_of_nu(n, c.j, c.kind == NewtonKind::Primed)?;
            if got != clifford_newton::closed_form_slopes(n, c.j) {
                bad.push(format!("{}: {got}", c.name()));
            }
            count += 1;
        }
        checks.push(Check {
            suite: "clifford",
            name: format!("slopes n={n}"),
            passed: bad.is_empty(),
            count,
            detail: bad.first().cloned().unwrap_or_else(|| "Clifford slopes match the closed form".into()),
        });
    }
    Ok(checks)
}

fn verify_unitary(opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let ns: Vec<usize> = match opts.n {
        Some(n) => vec![n],
        None => (1..=10).collect(),
    };
    let mut checks = Vec::new();
    for n in ns {
        for behavior in [Behavior::Split, Behavior::Inert] {
            let rows = unitary_dd::unitary_image_rows(n, behavior)?;
            let bad: Vec<String> = rows
                .iter()
                .filter(|r| !r.agrees())
                .map(|r| format!("a={}: {} / {} / {}", r.a, r.filtration, r.second_route, r.closed_form))
                .collect();
            checks.push(Check {
                suite: "unitary",
                name: format!("three routes n={n} {behavior}"),
                passed: bad.is_empty(),
                count: rows.len(),
                detail: bad.first().cloned().unwrap_or_else(|| "filtration, second route and closed form agree".into()),
            });
        }
        let codim = unitary_dd::codim_consistency(n)?;
        checks.push(Check {
            suite: "unitary",
            name: format!("codimension relation n={n}"),
            passed: codim.ok,
            count: codim.rows.len(),
            detail: codim.problems.first().cloned().unwrap_or_else(|| format!("even ρ dimensions {:?}", codim.even_rho_dims)),
        });
    }
    Ok(checks)
}

pub fn verify(suites: &[Suite], opts: &VerifyOptions) -> CliResult<Report> {
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(match s {
            Suite::Frames => verify_frames(opts)?,
            Suite::Zip => verify_zip(opts)?,
            Suite::Clifford => verify_clifford(opts)?,
            Suite::Unitary => verify_unitary(opts)?,
        });
    }
    let failures: Vec<Check> = checks.iter().filter(|c| !c.passed).cloned().collect();
    let view = VerifyView {
        suites: suites.iter().map(|s| s.name()).collect(),
        seed: opts.seed,
        passed: failures.is_empty(),
        checks,
        failures,
    };
    let mut inputs = Map::new();
    inputs.insert("suites".into(), json!(view.suites));
    inputs.insert("seed".into(), json!(opts.seed));
    inputs.insert("samples".into(), json!(opts.samples));
    if let Some(n) = opts.n {
        inputs.insert("n".into(), json!(n));
    }
    if let Some(p) = opts.p {
        inputs.insert("p".into(), json!(p));
    }
    if let Some(c) = opts.c {
        inputs.insert("c".into(), json!(c));
    }
    Ok(Report {
        schema: SCHEMA,
        command: "verify".into(),
        inputs,
        result: serde_json::to_value(&view)?,
        view: View::Verify(view),
    })
}
