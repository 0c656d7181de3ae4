use std::fmt::Write;

use crate::report::{CliError, CliResult, Edge, Report, View};

/// Column-aligned plain text table.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn edges_text(title: &str, edges: &[Edge]) -> String {
    let mut out = format!("{title}\n");
    for e in edges {
        let _ = writeln!(out, "  {} --> {}", e.lower, e.upper);
    }
    out
}

fn words(w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
    }
}

pub fn render_table(report: &Report) -> String {
    match &report.view {
        View::Orth(v) => {
            let rows: Vec<Vec<String>> = v
                .strata
                .iter()
                .map(|r| {
                    let i = &r.info;
                    vec![
                        i.name.clone(),
                        words(&i.word),
                        i.dim.to_string(),
                        i.a_number.to_string(),
                        i.p_rank.to_string(),
                        if i.basic { "yes" } else { "no" }.into(),
                    ]
                })
                .collect();
            format!(
                "{}\n{}\n{}",
                v.case,
                table(&["stratum", "word", "dim", "a-number", "p-rank", "basic"], &rows),
                edges_text("closure relations (covering):", &v.hasse)
            )
        }
        View::EmbedOrth(v) => {
            let rows: Vec<Vec<String>> = v
                .rows
                .iter()
                .map(|r| {
                    let t = &r.trace;
                    vec![
                        t.source.clone(),
                        t.source_dim.to_string(),
                        t.image.clone(),
                        t.correction.clone(),
                        t.target.clone(),
                        t.target_dim.to_string(),
                        r.closed_form.to_string(),
                    ]
                })
                .collect();
            format!(
                "{}\n{}",
                v.case,
                table(&["source", "dim", "ι(w)", "correction", "image", "image dim", "closed form"], &rows)
            )
        }
        View::EmbedUnitary(v) => {
            let rows: Vec<Vec<String>> = v
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.row.a.to_string(),
                        r.row.filtration.to_string(),
                        r.row.second_route.to_string(),
                        r.row.closed_form.to_string(),
                        format!("{}/{}", r.source_p_rank, r.source_a_number),
                        format!("{}/{}", r.target_p_rank, r.target_a_number),
                    ]
                })
                .collect();
            format!(
                "n={} {}\n{}",
                v.n,
                v.behavior,
                table(&["a", "filtration", "second route", "closed form", "src f/a", "dst f/a"], &rows)
            )
        }
        View::Newton(v) => {
            let rows: Vec<Vec<String>> = v
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.dim.map_or("-".into(), |d| d.to_string()),
                        r.p_rank.to_string(),
                        r.slopes.to_string(),
                    ]
                })
                .collect();
            format!(
                "n={} {:?}\n{}\n{}",
                v.n,
                v.case,
                table(&["stratum", "dim", "p-rank", "slopes"], &rows),
                edges_text("Newton order (covering):", &v.order)
            )
        }
        View::Verify(v) => {
            let rows: Vec<Vec<String>> = v
                .checks
                .iter()
                .map(|c| {
                    vec![
                        if c.passed { "PASS" } else { "FAIL" }.into(),
                        c.suite.into(),
                        c.name.clone(),
                        c.count.to_string(),
                        c.detail.clone(),
                    ]
                })
                .collect();
            format!(
                "seed {}\n{}{} checks, {} failed\n",
                v.seed,
                table(&["status", "suite", "check", "count", "detail"], &rows),
                v.checks.len(),
                v.failures.len()
            )
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn cluster(out: &mut String, id: &str, title: &str, prefix: &str, nodes: &[String], edges: &[Edge]) {
    let _ = writeln!(out, "  subgraph cluster_{id} {{");
    let _ = writeln!(out, "    label={};", quote(title));
    for n in nodes {
        let _ = writeln!(out, "    {} [label={}];", quote(&format!("{prefix}{n}")), quote(n));
    }
    for e in edges {
        let _ = writeln!(
            out,
            "    {} -> {} [style=dashed];",
            quote(&format!("{prefix}{}", e.lower)),
            quote(&format!("{prefix}{}", e.upper))
        );
    }
    out.push_str("  }\n");
}

fn chain(n: usize) -> (Vec<String>, Vec<Edge>) {
    let nodes: Vec<String> = (0..=n).map(|a| a.to_string()).collect();
    let edges = (0..n).map(|a| Edge { lower: a.to_string(), upper: (a + 1).to_string() }).collect();
    (nodes, edges)
}

/// Graphviz output: dashed edges are closure relations, solid edges are images.
pub fn render_dot(report: &Report) -> CliResult<String> {
    let mut out = String::from("digraph eo {\n  rankdir=BT;\n  node [shape=box];\n");
    match &report.view {
        View::Orth(v) => {
            let nodes: Vec<String> = v.strata.iter().map(|r| r.info.name.clone()).collect();
            cluster(&mut out, "strata", &v.case, "", &nodes, &v.hasse);
        }
        View::EmbedOrth(v) => {
            cluster(&mut out, "source", "source", "src:", &v.source_labels, &v.source_hasse);
            cluster(&mut out, "target", "target", "dst:", &v.target_labels, &v.target_hasse);
            for r in &v.rows {
                let _ = writeln!(
                    out,
                    "  {} -> {};",
                    quote(&format!("src:{}", r.trace.source)),
                    quote(&format!("dst:{}", r.trace.target))
                );
            }
        }
        View::EmbedUnitary(v) => {
            let (sn, se) = chain(v.n);
            let (tn, te) = chain(v.n + 1);
            cluster(&mut out, "source", &format!("U({},1)", v.n), "src:", &sn, &se);
            cluster(&mut out, "target", &format!("U({},1)", v.n + 1), "dst:", &tn, &te);
            for r in &v.rows {
                let _ = writeln!(out, "  \"src:{}\" -> \"dst:{}\";", r.row.a, r.row.filtration);
            }
        }
        View::Newton(v) => {
            let nodes: Vec<String> = v.rows.iter().map(|r| r.name.clone()).collect();
            cluster(&mut out, "newton", &format!("n={}", v.n), "", &nodes, &v.order);
        }
        View::Verify(_) => return Err(CliError::usage("verify has no graph output; use table or json")),
    }
    out.push_str("}\n");
    Ok(out)
}
