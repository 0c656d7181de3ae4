//! Acceptance run: one PASS/FAIL line per criterion, with timings.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use eo_core::clifford_newton::{self, NewtonKind, QpCase, ZeroDimBehavior, ZeroDimLocus};
use eo_core::sogroup;
use eo_core::strata_orth::{self, OrthCase, SourceCase};
use eo_core::unitary_dd::{self, Behavior, KappaTilde};
use eo_core::weyl::{self, WeylElement, WeylGroupSpec};
use eo_core::zipcox::{CoxeterZipDatum, PsiKind};
use eo_core::Splitness;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn psi_kinds(n: usize) -> Vec<PsiKind> {
    match n % 2 {
        1 if n >= 3 => vec![PsiKind::Identity, PsiKind::InnerSm],
        1 => vec![PsiKind::Identity],
        _ => vec![PsiKind::Identity, PsiKind::DiagramSwap],
    }
}

/// Left cosets of the stabilizer of 1 are told apart by w⁻¹(1); a stratum of
/// dimension i has w⁻¹(1) = i+1 below the middle and i+2 above it.
fn expected_preimage_of_one(n: usize, dim: usize) -> BTreeSet<usize> {
    let m = if n % 2 == 1 { n.div_ceil(2) } else { n / 2 + 1 };
    if n % 2 == 1 {
        BTreeSet::from([if dim < m { dim + 1 } else { dim + 2 }])
    } else if dim + 1 < m {
        BTreeSet::from([dim + 1])
    } else if dim + 1 == m {
        BTreeSet::from([m, m + 1])
    } else {
        BTreeSet::from([dim + 2])
    }
}

fn c1_mu_w_enumeration() -> Outcome {
    let mut total = 0;
    for n in 1..=8 {
        let group = ok(WeylGroupSpec::orthogonal(n))?;
        let reps = ok(weyl::min_coset_reps(group, &group.levi_gens()))?;
        let expect = if n % 2 == 1 { n + 1 } else { n + 2 };
        ensure!(reps.len() == expect, "n={n}: {} representatives, expected {expect}", reps.len());
        let named = ok(weyl::closed_form_muw(n))?;
        let from_words: BTreeSet<WeylElement> =
            named.iter().map(|(_, w)| group.from_word(w)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let computed: BTreeSet<WeylElement> = reps.iter().cloned().collect();
        ensure!(from_words == computed, "n={n}: the labelled words do not give ^µW");
        for (name, word) in &named {
            let w = ok(group.from_word(word))?;
            ensure!(w.length() == word.len(), "n={n}: {name} = {word:?} is not reduced");
            let k = w.inverse().apply(1);
            ensure!(
                expected_preimage_of_one(n, word.len()).contains(&k),
                "n={n}: {name} sends {k} to 1"
            );
        }
        let dagger_pair: BTreeSet<usize> = named
            .iter()
            .filter(|(_, w)| n % 2 == 0 && w.len() + 1 == n / 2 + 1)
            .map(|(_, w)| group.from_word(w).unwrap().inverse().apply(1))
            .collect();
        ensure!(n % 2 == 1 || dagger_pair.len() == 2, "n={n}: w_(m-1) and its dagger coincide");
        total += reps.len();
    }
    Ok(format!("{total} labels for n <= 8"))
}

fn c2_partial_order() -> Outcome {
    let mut pairs = 0;
    for n in 1..=8 {
        for kind in psi_kinds(n) {
            let d = ok(CoxeterZipDatum::orthogonal(n, kind))?;
            let labels = d.mu_w();
            let mat = ok(d.order_matrix())?;
            for (i, a) in labels.iter().enumerate() {
                for (j, b) in labels.iter().enumerate() {
                    // chain by dimension; the two labels of equal dimension are incomparable
                    let expect = i == j || a.dim < b.dim;
                    ensure!(
                        mat[i][j] == expect,
                        "n={n} {kind:?}: {} ⪯ {} is {}, expected {expect}",
                        a.name(),
                        b.name(),
                        mat[i][j]
                    );
                    pairs += 1;
                }
            }
            if n % 2 == 0 {
                let m = n / 2 + 1;
                let mid: Vec<_> = labels.iter().filter(|l| l.dim == m - 1).collect();
                ensure!(mid.len() == 2, "n={n}: no diamond at dimension {}", m - 1);
                ensure!(
                    !ok(d.preceq(mid[0], mid[1]))? && !ok(d.preceq(mid[1], mid[0]))?,
                    "n={n}: w_(m-1) and w_(m-1)^† are comparable"
                );
            }
        }
    }
    Ok(format!("{pairs} pairs checked"))
}

fn c3_orth_images() -> Outcome {
    let mut rows = 0;
    let mut middle = 0;
    for p in [5u32, 7] {
        let report = ok(strata_orth::consistency_sweep(8, p))?;
        if let Some(bad) = report.mismatches().next() {
            return Err(format!("p={p}: {} at {:?}", bad.case, bad.trace));
        }
        for case in ok(strata_orth::all_cases(2..=8, p))? {
            for i in 0..case.n {
                let expect = orth_image_oracle(&case, i);
                ensure!(
                    ok(strata_orth::embed_image_closed_form(&case, i))? == expect,
                    "{}: closed form at i={i} differs from {expect}",
                    case.describe()
                );
                if case.n % 2 == 1 && 2 * i + 1 == case.n {
                    middle += 1;
                }
            }
        }
        rows += report.rows.len();
    }
    Ok(format!("{rows} derived images, {middle} middle cases, zero mismatches"))
}

fn orth_image_oracle(case: &OrthCase, i: usize) -> usize {
    let n = case.n;
    if n.is_multiple_of(2) {
        return if 2 * i < n { i } else { i + 1 };
    }
    if 2 * i + 1 < n {
        i
    } else if 2 * i + 1 > n {
        i + 1
    } else if case.source == Some(SourceCase::Split) {
        i + 1
    } else {
        i
    }
}

/// H_0 = wW_µw⁻¹, H_{k+1} = H_k ∩ θ(H_k) with θ(x) = ψ(wxw⁻¹).
fn ew_oracle(d: &CoxeterZipDatum, w: &WeylElement) -> Result<BTreeSet<WeylElement>, String> {
    let winv = w.inverse();
    let conj = |x: &WeylElement| -> Result<WeylElement, String> { ok(ok(w.mul(x))?.mul(&winv)) };
    let mut h: BTreeSet<WeylElement> = d.w_mu().iter().map(conj).collect::<Result<_, _>>()?;
    loop {
        let image: BTreeSet<WeylElement> =
            h.iter().map(|x| ok(d.psi(&conj(x)?))).collect::<Result<_, _>>()?;
        let next: BTreeSet<WeylElement> = h.intersection(&image).cloned().collect();
        if next == h {
            return Ok(h);
        }
        h = next;
    }
}

fn c4_orbit_criterion() -> Outcome {
    let mut elements = 0;
    for n in 1..=6 {
        for kind in psi_kinds(n) {
            let d = ok(CoxeterZipDatum::orthogonal(n, kind))?;
            let elems = d.elements().to_vec();
            let mut labels = Vec::with_capacity(elems.len());
            for w in &elems {
                let ew: BTreeSet<WeylElement> = ok(d.compute_ew(w))?.into_iter().collect();
                ensure!(ew == ew_oracle(&d, w)?, "n={n} {kind:?}: E_w differs from the oracle at {w}");
                labels.push(ok(d.canonical_label(w))?);
            }
            for (i, w) in elems.iter().enumerate() {
                for (j, w2) in elems.iter().enumerate() {
                    let eq = ok(d.orbit_equal(w, w2))?;
                    ensure!(
                        eq == (labels[i] == labels[j]),
                        "n={n} {kind:?}: orbit_equal({w}, {w2}) = {eq} disagrees with the labels"
                    );
                }
            }
            let seen: BTreeSet<WeylElement> = labels.iter().map(|l| l.rep.clone()).collect();
            let reps: BTreeSet<WeylElement> = d.mu_w().into_iter().map(|l| l.rep).collect();
            ensure!(seen == reps, "n={n} {kind:?}: classes do not biject with ^µW");
            for r in &reps {
                ensure!(ok(d.canonical_label(r))?.rep == *r, "n={n}: {r} is not its own label");
            }
            elements += elems.len();
        }
    }
    Ok(format!("{elements} elements, all pairs compared"))
}

fn c5_frames() -> Outcome {
    let mut runs = 0;
    let mut samples = 0;
    for n in 1..=6 {
        for p in [3u32, 5, 7] {
            let cases = ok(sogroup::frame_cases(n, p))?;
            let modes: BTreeSet<bool> = cases.iter().map(|c| c.1).collect();
            ensure!(n < 2 || modes.len() == 2, "n={n} p={p}: only one Frobenius mode covered");
            for (gram, twisted) in cases {
                let cand = ok(sogroup::standard_frame(&gram, twisted))?;
                let report = ok(sogroup::frame_verify(&gram, &cand, twisted, 1000, 0x5eed + n as u64))?;
                ensure!(
                    report.passed(),
                    "n={n} p={p} {:?} twisted={twisted}: {} violations, first {:?}",
                    gram.kind(),
                    report.violations.len(),
                    report.violations.first().map(|v| &v.condition)
                );
                let covered: BTreeSet<&str> =
                    report.conditions.iter().filter_map(|c| c.name.split(' ').next()).collect();
                ensure!(
                    covered == BTreeSet::from(["(i)", "(ii)", "(iii)", "(iv)"]),
                    "n={n}: conditions covered {covered:?}"
                );
                samples += report.samples;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} frame runs, {samples} samples per side, zero violations"))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c6_slopes() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        let case = QpCase::for_n(n, true);
        let strata = ok(clifford_newton::newton_set(n, case))?;
        for s in strata.iter().filter(|s| s.cocharacter.kind == NewtonKind::Standard) {
            let j = s.cocharacter.j;
            let got = ok(clifford_newton::slopes_of_nu(n, j, false))?;
            ensure!(got.total() == 1 << (n + 1), "n={n} j={j}: total {}", got.total());
            for i in 0..=j {
                let want = (1u64 << (n + 1 - j)) * binom(j as u64, i as u64);
                let have = got.multiplicity(&q(i as i64, j as i64));
                ensure!(have == want, "n={n} j={j}: slope {i}/{j} has multiplicity {have}, expected {want}");
            }
            ensure!(
                got.0.len() == j + 1 || j == 0,
                "n={n} j={j}: unexpected extra slopes in {got}"
            );
            checked += 1;
        }
        if case == QpCase::EvenSplit {
            let m = n / 2 + 1;
            ensure!(
                ok(clifford_newton::slopes_of_nu(n, m, true))? == ok(clifford_newton::slopes_of_nu(n, m, false))?,
                "n={n}: ν_m and ν'_m have different slopes"
            );
        }
        let basic = clifford_newton::basic_slopes(n);
        ensure!(
            basic.0.len() == 1 && basic.multiplicity(&q(1, 2)) == 1 << (n + 1),
            "n={n}: basic multiset {basic}"
        );
    }
    Ok(format!("{checked} cocharacters"))
}

fn c7_counting() -> Outcome {
    let mut cases = 0;
    for n in 1..=8 {
        let settings: Vec<(OrthCase, QpCase)> = if n % 2 == 1 {
            vec![(ok(OrthCase::odd(n, SourceCase::Split))?, QpCase::Odd)]
        } else {
            vec![
                (ok(OrthCase::even_ambient(n, Splitness::Split))?, QpCase::EvenSplit),
                (ok(OrthCase::even_ambient(n, Splitness::Nonsplit))?, QpCase::EvenNonsplit),
            ]
        };
        for (case, qp) in settings {
            let newton = ok(clifford_newton::newton_set(n, qp))?;
            let nonbasic: Vec<usize> = newton.iter().filter_map(|s| s.dim).collect();
            let d_min = *nonbasic.iter().min().ok_or("no nonbasic Newton strata")?;
            let cat = ok(strata_orth::catalog(&case))?;
            let eo_big = cat.iter().filter(|s| s.dim >= d_min).count();
            ensure!(
                eo_big == nonbasic.len(),
                "n={n} {qp:?}: {eo_big} EO strata of dimension >= {d_min}, {} nonbasic Newton strata",
                nonbasic.len()
            );
            let flagged = cat.iter().filter(|s| !s.basic).count();
            ensure!(flagged == eo_big, "n={n} {qp:?}: basic flags disagree with d_min = {d_min}");
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn c8_unitary_images() -> Outcome {
    let mut rows = 0;
    for n in 1..=10 {
        for behavior in [Behavior::Split, Behavior::Inert] {
            for row in ok(unitary_dd::unitary_image_rows(n, behavior))? {
                let oracle = match behavior {
                    Behavior::Split => row.a + 1,
                    Behavior::Inert => {
                        if 2 * row.a <= n {
                            row.a
                        } else {
                            row.a + 1
                        }
                    }
                };
                ensure!(
                    row.filtration == oracle && row.second_route == oracle && row.closed_form == oracle,
                    "n={n} a={} {behavior}: filtration {}, second route {}, closed form {}, expected {oracle}",
                    row.a,
                    row.filtration,
                    row.second_route,
                    row.closed_form
                );
                rows += 1;
            }
        }
        let report = ok(unitary_dd::codim_consistency(n))?;
        ensure!(report.ok, "n={n}: {:?}", report.problems);
    }
    Ok(format!("{rows} rows, three routes agree"))
}

fn c9_unitary_invariants() -> Outcome {
    for n in 1..=10 {
        for a in 0..=n {
            let m = ok(unitary_dd::standard_module(n, a, KappaTilde::inert()))?;
            let f = if a == n { 2 } else { 0 };
            ensure!(m.p_rank() == f, "n={n} a={a}: p-rank {}", m.p_rank());
            let an = if a == 0 { n + 1 } else { n - 1 };
            ensure!(m.a_number() == an, "n={n} a={a}: a-number {}", m.a_number());
        }
        for rho in 1..=n + 1 {
            let s = ok(unitary_dd::bw_slopes(rho, n))?;
            ensure!(s.total() == 2 * n as u64 + 2, "n={n} ρ={rho}: total {}", s.total());
            ensure!(s.is_symmetric(), "n={n} ρ={rho}: slopes not symmetric");
            if rho % 2 == 0 {
                let mm = (rho / 2) as i64;
                let mut want = clifford_newton::SlopeMultiset::default();
                want.add(q(mm - 1, 2 * mm), 2 * mm as u64);
                want.add(q(1, 2), (2 * n + 2 - 4 * mm as usize) as u64);
                want.add(q(mm + 1, 2 * mm), 2 * mm as u64);
                ensure!(s == want, "n={n} ρ={rho}: {s}");
            } else {
                ensure!(s.0.len() == 1 && s.multiplicity(&q(1, 2)) == 2 * n as u64 + 2, "n={n} ρ={rho}: {s}");
            }
            let a = ok(unitary_dd::bw_stratum(rho, n))?;
            let m = ok(unitary_dd::standard_module(n, a, KappaTilde::inert()))?;
            ensure!(
                s.p_rank() == m.p_rank() as u64,
                "n={n} ρ={rho}: slope p-rank {} but module p-rank {}",
                s.p_rank(),
                m.p_rank()
            );
        }
    }
    Ok("n <= 10".into())
}

fn c10_fixtures() -> Outcome {
    // (setting, ambient, [(dim, f, a)])
    let hilbert = [
        (Splitness::Split, [(2, 2, 0), (1, 1, 1), (0, 0, 2)]),
        (Splitness::Nonsplit, [(2, 2, 0), (1, 0, 1), (0, 0, 2)]),
    ];
    let morita = strata_orth::morita_factor(2);
    for (amb, rows) in hilbert {
        let cat = ok(strata_orth::catalog(&ok(OrthCase::even_ambient(2, amb))?))?;
        for (dim, f, a) in rows {
            for s in cat.iter().filter(|s| s.dim == dim) {
                let got = (s.p_rank / morita, s.a_number / morita);
                ensure!(got == (f, a), "Hilbert {amb:?} {}: (f,a) = {got:?}, expected ({f},{a})", s.name);
            }
        }
    }
    let siegel = [(3, 2, 0), (2, 1, 1), (1, 0, 1), (0, 0, 2)];
    let cat = ok(strata_orth::catalog(&ok(OrthCase::odd(3, SourceCase::Split))?))?;
    let morita = strata_orth::morita_factor(3);
    for (dim, f, a) in siegel {
        let s = cat.iter().find(|s| s.dim == dim).ok_or("missing Siegel stratum")?;
        let got = (s.p_rank / morita, s.a_number / morita);
        ensure!(got == (f, a), "Siegel dim {dim}: (f,a) = {got:?}");
    }
    let fx = strata_orth::small_rank_fixtures();
    ensure!(fx.hilbert.len() == 8 && fx.siegel.len() == 4, "fixture tables have the wrong shape");
    // signature (1,1), inert: the two strata are the superspecial and ordinary rows
    for (a, f, an) in [(0, 0, 2), (1, 2, 0)] {
        let m = ok(unitary_dd::standard_module(1, a, KappaTilde::inert()))?;
        ensure!((m.p_rank(), m.a_number()) == (f, an), "unitary n=1 a={a}: ({}, {})", m.p_rank(), m.a_number());
    }
    Ok("Hilbert, Siegel and unitary n=1 rows".into())
}

fn c11_zero_dim() -> Outcome {
    let split = ok(clifford_newton::zero_dim_case(ZeroDimBehavior::Split))?;
    let inert = ok(clifford_newton::zero_dim_case(ZeroDimBehavior::Inert))?;
    ensure!(split.locus == ZeroDimLocus::Ordinary, "split gives {:?}", split.locus);
    ensure!(inert.locus == ZeroDimLocus::Superspecial, "inert gives {:?}", inert.locus);
    let top = ok(strata_orth::embed_image_closed_form(&ok(OrthCase::odd(1, SourceCase::Split))?, 0))?;
    let bottom = ok(strata_orth::embed_image_closed_form(&ok(OrthCase::odd(1, SourceCase::NonsplitI))?, 0))?;
    ensure!(top == 1 && bottom == 0, "n=1 closed form gives {top} / {bottom}");
    Ok(format!("split -> ordinary (frame {}), inert -> superspecial (frame {})", split.frame, inert.frame))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "^µW enumeration", limit: secs(5), run: c1_mu_w_enumeration },
        Criterion { id: 2, name: "partial order", limit: secs(10), run: c2_partial_order },
        Criterion { id: 3, name: "embedding images, orthogonal", limit: secs(60), run: c3_orth_images },
        Criterion { id: 4, name: "orbit criterion", limit: None, run: c4_orbit_criterion },
        Criterion { id: 5, name: "frame conditions", limit: None, run: c5_frames },
        Criterion { id: 6, name: "Kuga-Satake slopes", limit: secs(30), run: c6_slopes },
        Criterion { id: 7, name: "nonbasic counting", limit: None, run: c7_counting },
        Criterion { id: 8, name: "embedding images, unitary", limit: secs(5), run: c8_unitary_images },
        Criterion { id: 9, name: "unitary invariants", limit: None, run: c9_unitary_invariants },
        Criterion { id: 10, name: "small-rank fixtures", limit: None, run: c10_fixtures },
        Criterion { id: 11, name: "zero-dimensional case", limit: None, run: c11_zero_dim },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {}: {detail} [{elapsed:.2?}{limit}]", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {}: {detail} [{elapsed:.2?}{limit}]", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
