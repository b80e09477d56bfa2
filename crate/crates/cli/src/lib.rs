//! Command-line front end: argument types, commands and output formats.

pub mod args;
pub mod error;
pub mod records;
pub mod search;
pub mod tables;
pub mod verify;

use std::io::Write;
use std::time::Duration;

use num_bigint::BigInt;

use abvar_core::classify::{classify_with, ClassifyOptions};
use abvar_core::intpoly::{validate_weil, IntPolynomial, WeilPolynomial};
use abvar_core::newton::NPType;
use abvar_core::parallel::{map_with, Execution};
use abvar_core::w2d::{atlas, Weighting};
use abvar_core::wpr::{angle_rank, realizability_screen, Screen, WeightedPermRep};
use abvar_lmfdb::{bundled_labels, ClientConfig, LmfdbConfig, Resolver};

pub use args::{Cli, Command, Format};
pub use error::{exit, CliError};
use records::{AnalysisRecord, Record, SubgroupRecord};
use search::{run_search_for, SearchBounds};

pub struct Context {
    pub format: Format,
    pub options: ClassifyOptions,
    pub resolver: Resolver,
    pub mode: Execution,
}

impl Context {
    pub fn from_args(global: &args::GlobalArgs) -> Self {
        let config = LmfdbConfig {
            offline: global.offline,
            cache_dir: global.cache_dir.clone(),
            client: ClientConfig {
                base_url: global.base_url.clone(),
                timeout: Duration::from_secs(global.timeout.max(1)),
                ..ClientConfig::default()
            },
            max_concurrency: 4,
        };
        Context {
            format: global.format,
            options: ClassifyOptions {
                precision_bits: global.precision_bits,
                padic_precision: global.padic_precision,
                seed: global.seed,
            },
            resolver: Resolver::new(config),
            mode: if global.sequential { Execution::Sequential } else { Execution::default() },
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let ctx = Context::from_args(&cli.global);
    match &cli.command {
        Command::Analyze(a) => analyze(&ctx, a, out),
        Command::Tables(a) => tables_cmd(&ctx, a, out),
        Command::Subgroups(a) => subgroups(&ctx, a, out),
        Command::Verify(a) => verify_cmd(&ctx, a, out),
        Command::Search(a) => search_cmd(&ctx, a, out),
    }
}

fn emit(ctx: &Context, out: &mut dyn Write, record: Record, text: impl FnOnce() -> String) -> Result<(), CliError> {
    match ctx.format {
        Format::Records => writeln!(out, "{}", record.render())?,
        Format::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

/// Weil polynomial from `--coeffs` (leading term first) with shape checks.
pub fn polynomial_from_coeffs(coeffs: &[i64], p: u64, n: u32) -> Result<WeilPolynomial, CliError> {
    if coeffs.len() < 3 || coeffs.len().is_multiple_of(2) {
        return Err(CliError::Usage(format!("--coeffs needs an even degree of at least 2, got {} values", coeffs.len())));
    }
    if coeffs[0] != 1 {
        return Err(CliError::Usage("--coeffs must start with the leading coefficient 1".into()));
    }
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let g = (coeffs.len() - 1) / 2;
    let q = BigInt::from(p).pow(n);
    let constant = BigInt::from(*coeffs.last().expect("nonempty"));
    if constant != q.pow(g as u32) {
        return Err(CliError::Usage(format!("constant term must be q^{g} = {}, got {constant}", q.pow(g as u32))));
    }
    let poly = IntPolynomial::from_i64(&coeffs.iter().rev().copied().collect::<Vec<_>>());
    validate_weil(&poly, p, n).map_err(|e| CliError::NotWeil(e.to_string()))
}

fn analyze(ctx: &Context, a: &args::AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (input, weil, advisory_source) = match (&a.coeffs, a.labels.as_slice()) {
        (Some(c), []) => {
            let p = a.p.ok_or_else(|| CliError::Usage("--coeffs needs --p".into()))?;
            let text = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            (format!("coeffs {text} over p={p} n={}", a.n), polynomial_from_coeffs(c, p, a.n)?, None)
        }
        (Some(_), _) => return Err(CliError::Usage("give labels or --coeffs, not both".into())),
        (None, []) => return Err(CliError::Usage("analyze needs a label or --coeffs".into())),
        (None, labels) => {
            if labels.len() > 1 && !a.product {
                return Err(CliError::Usage("several labels need --product".into()));
            }
            let fixtures: Vec<_> = labels.iter().map(|l| ctx.resolver.fetch_class(l)).collect::<Result<_, _>>()?;
            let mut weil = fixtures[0].polynomial()?;
            for f in &fixtures[1..] {
                weil = weil
                    .product(&f.polynomial()?)
                    .map_err(|_| CliError::Usage("product factors live over different fields".into()))?;
            }
            let single = (fixtures.len() == 1).then(|| fixtures[0].clone());
            (labels.join(" * "), weil, single)
        }
    };
    let rec = classify_with(&weil, &ctx.options)?;
    let advisory = advisory_source.map(|f| verify::advisory_notes(&f, &rec)).unwrap_or_default();
    let record = AnalysisRecord::from_class(&input, &rec, &ctx.options, advisory);
    let text = render_analysis(&record);
    emit(ctx, out, Record::Analysis(record), || text)
}

fn poly_text(coeffs: &[String]) -> String {
    let ints: Vec<BigInt> = coeffs.iter().rev().map(|c| c.parse().expect("integer coefficients")).collect();
    IntPolynomial::new(ints).to_string()
}

pub fn render_analysis(r: &AnalysisRecord) -> String {
    let mut lines: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| lines.push((k.to_string(), v));
    put("input", r.input.clone());
    put("polynomial", poly_text(&r.coefficients));
    put("field", format!("q = {} = {}^{}", r.q, r.p, r.n));
    let factors: Vec<String> = r
        .factors
        .iter()
        .map(|f| {
            let label = f.label.as_ref().map(|l| format!(" [{l}]")).unwrap_or_default();
            format!("({})^{}{}", poly_text(&f.coefficients), f.multiplicity, label)
        })
        .collect();
    put("factors", factors.join(" * "));
    put(
        "simple",
        match (r.simple, r.honda_tate_index) {
            (s, Some(e)) => format!("{} (Honda-Tate index {e})", if s { "yes" } else { "no" }),
            (s, None) => (if s { "yes" } else { "no" }).to_string(),
        },
    );
    put("slopes", format!("[{}]", r.slopes.join(",")));
    let vertices: Vec<String> = r.vertices.iter().map(|(j, v)| format!("({j},{v})")).collect();
    put("vertices", vertices.join(" "));
    put("newton type", r.newton_type.clone().unwrap_or_else(|| "-".into()));
    put(
        "group",
        format!(
            "{} of order {}, {}{}",
            r.group_label.clone().unwrap_or_else(|| r.group_name.clone()),
            r.group_order,
            if r.transitive { "transitive" } else { "intransitive" },
            if r.contains_conjugation { ", contains complex conjugation" } else { "" }
        ),
    );
    put("generators", if r.generators.is_empty() { "id".into() } else { r.generators.join(", ") });
    put("weights", format!("({})", r.weights.join(",")));
    put("valuations", format!("({})", r.valuations.join(",")));
    put("angle rank", format!("{} (hyperplane matrix rank {})", r.angle_rank, r.hyperplane_rank));
    put(
        "geom. simple",
        match r.geometrically_simple {
            Some(true) => "yes".into(),
            Some(false) => "no".into(),
            None => "-".into(),
        },
    );
    put(
        "table",
        match (r.table, r.printed_angle_rank) {
            (Some(t), Some(pr)) => format!("{t}: {} (printed angle rank {pr})", r.verdict),
            _ => r.verdict.clone(),
        },
    );
    let local: Vec<String> = r
        .local_factors
        .iter()
        .map(|f| format!("deg {} slope {} (e={}, f={})", f.degree, f.slope, f.ramification, f.residue_degree))
        .collect();
    put("local factors", local.join("; "));
    put(
        "certificate",
        format!(
            "{} (splitting degree {}, {} candidates rejected, Frobenius at {:?}, {} probes)",
            r.certificate_digest, r.minimal_polynomial_degree, r.rejected_candidates, r.frobenius_primes, r.valuation_probes
        ),
    );
    put("checks", if r.checks.is_empty() { "all hold".into() } else { r.checks.join("; ") });
    for a in &r.advisory {
        put("remote", a.clone());
    }
    put("seed", format!("{} (precision {} bits)", r.seed, r.precision_bits));
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn tables_cmd(ctx: &Context, a: &args::TablesArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let which: Vec<u8> = match a.which {
        Some(t) if (1..=tables::TABLE_COUNT).contains(&t) => vec![t],
        Some(t) => return Err(CliError::Usage(format!("--which {t}: tables run from 1 to {}", tables::TABLE_COUNT))),
        None => (1..=tables::TABLE_COUNT).collect(),
    };
    let mut failures = Vec::new();
    for (i, t) in which.iter().enumerate() {
        let mut rows = tables::table_rows(*t);
        if a.verify {
            let examples: Vec<String> = rows.iter().filter_map(|r| r.example.clone()).collect();
            let checks = map_with(ctx.mode, &examples, |label| verify::check_label(&ctx.resolver, label, &ctx.options));
            for row in rows.iter_mut() {
                if let Some(gap) = tables::unexplained_rank_gap(row) {
                    failures.push(gap);
                }
                if *t == 1 && row.verification.as_deref() != Some("ok") {
                    failures.push(format!("table 1 {}: {}", row.labels[0], row.verification.clone().unwrap_or_default()));
                }
                let Some(example) = &row.example else { continue };
                let check = checks.iter().find(|c| &c.label == example).expect("checked every example");
                if verify::is_failure(check) {
                    failures.push(format!("{example}: {}", check.notes.join("; ")));
                }
                let mut summary = check.outcome.clone();
                if check.outcome != verify::AGREES && !check.notes.is_empty() {
                    summary.push_str(&format!(" ({})", check.notes.join("; ")));
                }
                row.verification = Some(summary);
            }
        }
        match ctx.format {
            Format::Records => {
                for row in rows {
                    writeln!(out, "{}", Record::TableRow(row).render())?;
                }
            }
            Format::Text => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", tables::render_text(*t, &rows))?;
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures))
    }
}

fn screen_text(s: &Screen) -> String {
    match s {
        Screen::Realizable => "realizable".into(),
        Screen::Excluded(why) => format!("excluded: {why}"),
        Screen::Unknown(why) => format!("unknown: {why}"),
    }
}

fn subgroups(ctx: &Context, a: &args::SubgroupsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let d = a.d as usize;
    let at = atlas(d).map_err(|e| CliError::Usage(e.to_string()))?;
    let weighting = match &a.np {
        None => None,
        Some(tag) => {
            let np = NPType::parse(tag).ok_or_else(|| CliError::Usage(format!("unknown Newton type {tag}")))?;
            let slopes = np
                .slopes(d)
                .ok_or_else(|| CliError::Usage(format!("Newton type {tag} does not exist in dimension {d}")))?;
            Some(Weighting::from_slopes(&slopes).map_err(|e| CliError::Usage(e.to_string()))?)
        }
    };
    let mut rows: Vec<(String, String, String)> = Vec::new();
    for (h, label) in at.subgroups.iter().zip(&at.labels) {
        if a.transitive_iota && !(h.is_transitive() && h.contains_iota()) {
            continue;
        }
        let (rank, screen) = match &weighting {
            Some(w) => {
                let rep = WeightedPermRep::new(w.clone(), h.clone()).map_err(abvar_core::classify::ClassifyError::from)?;
                let rank = angle_rank(&rep).map_err(abvar_core::classify::ClassifyError::from)?;
                (Some(rank), Some(screen_text(&realizability_screen(w, h))))
            }
            None => (None, None),
        };
        let record = SubgroupRecord {
            d,
            label: label.to_string(),
            group_name: h.iso_name(),
            order: h.order(),
            transitive: h.is_transitive(),
            contains_conjugation: h.contains_iota(),
            generators: h.generators().iter().map(|g| g.to_string()).collect(),
            angle_rank: rank,
            screen,
        };
        match ctx.format {
            Format::Records => writeln!(out, "{}", Record::Subgroup(record).render())?,
            Format::Text => rows.push((
                format!(
                    "{:<14} order {:>2}  {:<3} {:<4}",
                    record.label,
                    record.order,
                    if record.transitive { "t" } else { "nt" },
                    if record.contains_conjugation { "iota" } else { "" }
                ),
                format!("<{}>", if record.generators.is_empty() { "id".into() } else { record.generators.join(", ") }),
                match (&record.angle_rank, &record.screen) {
                    (Some(r), Some(s)) => format!("angle rank {r}  {s}"),
                    _ => String::new(),
                },
            )),
        }
    }
    let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    for (head, gens, extra) in rows {
        writeln!(out, "{}", format!("{head}  {gens:<width$}  {extra}").trim_end())?;
    }
    Ok(())
}

fn verify_cmd(ctx: &Context, a: &args::VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let labels: Vec<String> = if a.labels.is_empty() {
        bundled_labels().into_iter().map(str::to_string).collect()
    } else {
        a.labels.clone()
    };
    let checks = map_with(ctx.mode, &labels, |l| verify::check_label(&ctx.resolver, l, &ctx.options));
    let mut failures = Vec::new();
    for check in checks {
        if verify::is_failure(&check) {
            failures.push(format!("{}: {}", check.label, check.notes.join("; ")));
        }
        let text = format!(
            "{:<16} {:<8} {:<8} {:<14} rank {:<2} {}{}\n",
            check.label,
            check.outcome,
            check.newton_type.clone().unwrap_or_else(|| "-".into()),
            check.group_label.clone().unwrap_or_else(|| "-".into()),
            check.angle_rank.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
            check.table.map(|t| format!("table {t}")).unwrap_or_default(),
            check.notes.iter().map(|n| format!("\n    {n}")).collect::<String>()
        );
        emit(ctx, out, Record::Verification(check), || text)?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures))
    }
}

fn search_cmd(ctx: &Context, a: &args::SearchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bounds = SearchBounds { d: a.d as usize, p: a.p, r_max: a.r_max, height: a.height };
    let Some(report) = run_search_for(&bounds, a.batch, a.checkpoint.as_deref(), a.max_batches, &ctx.options, ctx.mode)?
    else {
        let path = a.checkpoint.as_ref().expect("clap requires a checkpoint").display();
        eprintln!("stopped after {} batches; rerun with --checkpoint {path} to continue", a.max_batches.unwrap_or(0));
        return Ok(());
    };
    match ctx.format {
        Format::Records => {
            for c in &report.classes {
                writeln!(out, "{}", Record::SearchClass(c.clone()).render())?;
            }
            writeln!(out, "{}", Record::SearchSummary(report.summary.clone()).render())?;
        }
        Format::Text => {
            let s = &report.summary;
            writeln!(
                out,
                "search d={} p={} r<={}{}: {} candidates, {} Weil, {} irreducible, {} of larger dimension, {} failures",
                s.d,
                s.p,
                s.r_max,
                s.height.map(|h| format!(" height<={h}")).unwrap_or_default(),
                s.candidates,
                s.weil,
                s.irreducible,
                s.higher_index,
                s.failures
            )?;
            for c in &report.classes {
                writeln!(
                    out,
                    "  {:<13} {:<14} angle rank {}  witness {}{}",
                    c.newton_type,
                    c.group_label,
                    c.angle_rank,
                    c.witness,
                    c.table.map(|t| format!("  (table {t})")).unwrap_or_default()
                )?;
            }
            writeln!(out, "realized classes: {}", s.realized_classes.join(", "))?;
            writeln!(
                out,
                "missing classes:  {}",
                if s.missing_classes.is_empty() { "none".into() } else { s.missing_classes.join(", ") }
            )?;
        }
    }
    Ok(())
}
