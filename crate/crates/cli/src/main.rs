//! `excess-atlas`: counts, series, asymptotics and verification suites for
//! connected labeled graphs by excess.

mod caps;
mod output;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use excess_atlas_core::asymptotics::{dominant_term_log, ratio_point, solve_saddle};
use excess_atlas_core::graph_gf::{
    connected_series, mgpos_series, sgpos_series, tree_series, unicycle_series,
    wright_polynomial, AnchoredRecurrence,
};
use excess_atlas_core::patchworks::{
    core_series, enumerate_patchworks_no_isolated, multicore_series, MAX_UNCAPPED_VERTICES,
};
use excess_atlas_core::{Error, ExactRational, TruncatedSeries};
use num_bigint::BigUint;

use caps::Caps;
use output::{Cell, Format, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or a refused cap: exit 2.
    Usage(String),
    /// Two routes disagree or a checked identity fails: exit 1.
    Violation(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::IdentityViolation(msg) => CliError::Violation(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "excess-atlas", version, about = "Exact and asymptotic counts of connected graphs by excess")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Coefficients of log of the all-graphs series.
    Gf,
    /// Big-integer recurrence anchored on the component of vertex 1.
    Recurrence,
    /// Edge-insertion recurrence modulo word primes, then CRT.
    Modular,
    /// Brute force over all graphs (n <= 8).
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Csg,
    Sgpos,
    Core,
    Mgpos,
    Multicore,
    Tree,
    Unicycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Csg,
    Core,
    Sgpos,
    Ratio,
    Wright,
    Patchwork,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of connected graphs with n vertices and excess k.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = Method::Modular)]
        method: Method,
        /// Run every method admitted by the caps and require agreement.
        #[arg(long)]
        all_methods: bool,
    },
    /// Coefficients of one generating function.
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// Saddle point and dominant term for n vertices and excess k.
    Asymptotic {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Also compute the exact count and the ratio exact / dominant.
        #[arg(long)]
        with_ratio: bool,
    },
    /// Deterministic tables over ranges such as `1..7` or `20,40,80`.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// k/n as `p/q` or an integer (ratio tables).
        #[arg(long)]
        ratio: Option<String>,
        /// Truncation order (wright tables).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

fn parse_list(raw: &str, what: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Usage(format!("--{what} {raw:?}: expected `a..b`, `a,b,c` or a single integer"));
    let raw = raw.trim();
    if let Some((a, b)) = raw.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let mut out: Vec<i64> = raw
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn require(raw: &Option<String>, what: &str) -> Result<Vec<i64>, CliError> {
    match raw {
        Some(r) => parse_list(r, what),
        None => Err(CliError::Usage(format!("--{what} is required for this table"))),
    }
}

fn parse_ratio(raw: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--ratio {raw:?}: expected a positive `p/q` or integer"));
    let (p, q) = match raw.split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (raw.trim().parse().map_err(|_| bad())?, 1u64),
    };
    if p == 0 || q == 0 {
        return Err(bad());
    }
    Ok((p, q))
}

fn non_negative(values: &[i64], what: &str, min: i64) -> Result<Vec<usize>, CliError> {
    values
        .iter()
        .map(|&v| {
            if v < min {
                Err(CliError::Usage(format!("--{what} must be at least {min} (got {v})")))
            } else {
                Ok(v.max(0) as usize)
            }
        })
        .collect()
}

fn rational_cell(r: &ExactRational) -> Cell {
    if r.is_integer() {
        Cell::Int(r.to_integer().to_string())
    } else {
        Cell::Rational(r.to_string())
    }
}

fn int_cell(v: &BigUint) -> Cell {
    Cell::Int(v.to_string())
}

fn edge_count_fits(n: usize, k: i64) -> bool {
    let m = n as i64 + k;
    m >= 0 && m as u64 <= (n * n.saturating_sub(1) / 2) as u64
}

fn count_with(method: Method, n: usize, k: i64, caps: &Caps) -> Result<BigUint, CliError> {
    if !edge_count_fits(n, k) {
        return Ok(BigUint::default());
    }
    let m = (n as i64 + k) as usize;
    match method {
        Method::Gf => {
            Caps::check("n (generating functions)", n, caps.gf_n)?;
            Caps::check("k (generating functions)", k.max(0) as usize, caps.gf_k)?;
            let value = connected_series(n, k)?.count(n, k);
            Ok(value.to_integer().to_biguint().unwrap_or_default())
        }
        Method::Recurrence => {
            Caps::check("n (big-integer recurrence)", n, caps.anchored_n)?;
            let value = AnchoredRecurrence::new(n, m).count(n, m)?;
            Ok(value.to_biguint().unwrap_or_default())
        }
        Method::Modular => {
            Caps::check("n (modular recurrence)", n, caps.recurrence_n)?;
            Ok(sweep::connected_counts(&[(n, k)])?.remove(0))
        }
        Method::Oracle => {
            Caps::check("n (brute force)", n, caps.oracle_n)?;
            Ok(sweep::oracle_connected(n, m)?)
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Gf => "gf",
        Method::Recurrence => "recurrence",
        Method::Modular => "modular",
        Method::Oracle => "oracle",
    }
}

fn admits(method: Method, n: usize, k: i64, caps: &Caps) -> bool {
    match method {
        Method::Gf => n <= caps.gf_n && k.max(0) as usize <= caps.gf_k,
        Method::Recurrence => n <= caps.anchored_n,
        Method::Modular => n <= caps.recurrence_n,
        Method::Oracle => n <= caps.oracle_n,
    }
}

fn cmd_count(n: usize, k: i64, method: Method, all: bool, caps: &Caps) -> Result<Report, CliError> {
    if n == 0 || k < -1 {
        return Err(CliError::Usage(format!("count needs n >= 1 and k >= -1 (got n={n}, k={k})")));
    }
    let methods: Vec<Method> = if all {
        [Method::Gf, Method::Recurrence, Method::Modular, Method::Oracle]
            .into_iter()
            .filter(|&m| admits(m, n, k, caps))
            .collect()
    } else {
        vec![method]
    };
    let mut report = Report::new("count", &["method", "count"]).param("n", n).param("k", k);
    let mut values = Vec::new();
    for m in methods {
        let v = count_with(m, n, k, caps)?;
        report.rows.push(vec![Cell::Text(method_name(m).into()), int_cell(&v)]);
        values.push((m, v));
    }
    if let Some((m0, v0)) = values.first() {
        if let Some((m1, v1)) = values.iter().find(|(_, v)| v != v0) {
            return Err(CliError::Violation(format!(
                "methods disagree for n={n}, k={k}: {} = {v0}, {} = {v1}",
                method_name(*m0),
                method_name(*m1)
            )));
        }
    }
    Ok(report)
}

fn series_for(kind: SeriesKind, k: i64, order: usize, caps: &Caps) -> Result<TruncatedSeries, CliError> {
    Caps::check("order", order, caps.gf_n)?;
    let need_k = |min: i64| -> Result<usize, CliError> {
        if k < min {
            return Err(CliError::Usage(format!("--k must be at least {min} for this series")));
        }
        Caps::check("k", k.max(0) as usize, caps.gf_k)?;
        Ok(k.max(0) as usize)
    };
    Ok(match kind {
        SeriesKind::Csg => {
            need_k(-1)?;
            connected_series(order.max(1), k)?.get(k).unwrap().clone()
        }
        SeriesKind::Sgpos => {
            let kk = need_k(0)?;
            sgpos_series(kk, order)?.get(k).unwrap().clone()
        }
        SeriesKind::Core => {
            let kk = need_k(0)?;
            if order > MAX_UNCAPPED_VERTICES {
                Caps::check("k (patchwork excess)", kk, caps.patchwork_excess)?;
            }
            core_series(order, kk)?.get(k).unwrap().clone()
        }
        SeriesKind::Mgpos => mgpos_series(need_k(0)?, order)?,
        SeriesKind::Multicore => multicore_series(need_k(0)?, order)?,
        SeriesKind::Tree => tree_series(order),
        SeriesKind::Unicycle => unicycle_series(order).1,
    })
}

fn cmd_series(kind: SeriesKind, k: i64, order: usize, caps: &Caps) -> Result<Report, CliError> {
    let s = series_for(kind, k, order, caps)?;
    let name = format!("{kind:?}").to_lowercase();
    let mut report = Report::new("series", &["n", "coefficient", "count"])
        .param("kind", name)
        .param("k", k)
        .param("order", order);
    for n in 0..=order {
        report.rows.push(vec![
            Cell::Int(n.to_string()),
            rational_cell(&s.coeff(n)),
            rational_cell(&s.egf_count(n)),
        ]);
    }
    Ok(report)
}

fn cmd_asymptotic(n: u64, k: i64, with_ratio: bool, caps: &Caps) -> Result<Report, CliError> {
    if n == 0 || k < 1 {
        return Err(CliError::Usage(format!(
            "the dominant term covers the positive-ratio regime only: need n >= 1 and k >= 1 (got n={n}, k={k})"
        )));
    }
    let k = k as u64;
    let s = solve_saddle(k as f64 / n as f64)?;
    let d = dominant_term_log(n, k)?;
    let mut columns = vec!["n", "k", "lambda", "zeta", "t_zeta", "log10_d"];
    let mut row = vec![
        Cell::Int(n.to_string()),
        Cell::Int(k.to_string()),
        Cell::Float(s.lambda),
        Cell::Float(s.zeta),
        Cell::Float(s.tzeta),
        Cell::Float(d.log10_abs()),
    ];
    if with_ratio {
        Caps::check("n (modular recurrence)", n as usize, caps.recurrence_n)?;
        let exact = if edge_count_fits(n as usize, k as i64) {
            sweep::connected_counts(&[(n as usize, k as i64)])?.remove(0)
        } else {
            BigUint::default()
        };
        let p = ratio_point(n, k, &exact)?;
        columns.extend(["exact", "ratio"]);
        row.extend([int_cell(&exact), Cell::Float(p.ratio)]);
    }
    let mut report = Report::new("asymptotic", &columns).param("n", n).param("k", k);
    report.rows.push(row);
    Ok(report)
}

fn wide_table(
    kind: TableKind,
    ns: &[usize],
    ks: &[i64],
    caps: &Caps,
) -> Result<Report, CliError> {
    let (n_max, k_max) = (*ns.last().unwrap(), *ks.last().unwrap());
    let header: Vec<String> = std::iter::once("n".to_string()).chain(ks.iter().map(|k| format!("k={k}"))).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut report = Report::new("table", &header_refs);
    match kind {
        TableKind::Csg => {
            Caps::check("n (modular recurrence)", n_max, caps.recurrence_n)?;
            let cells: Vec<(usize, i64)> = ns
                .iter()
                .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
                .filter(|&(n, k)| edge_count_fits(n, k))
                .collect();
            let counts = if cells.is_empty() { Vec::new() } else { sweep::connected_counts(&cells)? };
            for &n in ns {
                let mut row = vec![Cell::Int(n.to_string())];
                for &k in ks {
                    let v = cells
                        .iter()
                        .position(|&c| c == (n, k))
                        .map_or_else(BigUint::default, |i| counts[i].clone());
                    row.push(int_cell(&v));
                }
                report.rows.push(row);
            }
        }
        TableKind::Core | TableKind::Sgpos => {
            Caps::check("n (generating functions)", n_max, caps.gf_n)?;
            Caps::check("k", k_max as usize, caps.gf_k)?;
            let series = if kind == TableKind::Core {
                if n_max > MAX_UNCAPPED_VERTICES {
                    Caps::check("k (patchwork excess)", k_max as usize, caps.patchwork_excess)?;
                }
                core_series(n_max, k_max as usize)?
            } else {
                sgpos_series(k_max as usize, n_max)?
            };
            for &n in ns {
                let mut row = vec![Cell::Int(n.to_string())];
                for &k in ks {
                    row.push(rational_cell(&series.count(n, k)));
                }
                report.rows.push(row);
            }
        }
        _ => unreachable!("wide tables only"),
    }
    Ok(report)
}

fn cmd_table(
    kind: TableKind,
    n: &Option<String>,
    k: &Option<String>,
    ratio: &Option<String>,
    order: Option<usize>,
    caps: &Caps,
) -> Result<Report, CliError> {
    let name = format!("{kind:?}").to_lowercase();
    let report = match kind {
        TableKind::Csg | TableKind::Core | TableKind::Sgpos => {
            let min_k = if kind == TableKind::Csg { -1 } else { 0 };
            let ns = non_negative(&require(n, "n")?, "n", 1)?;
            let ks = require(k, "k")?;
            non_negative(&ks, "k", min_k)?;
            wide_table(kind, &ns, &ks, caps)?
                .param("n", ns.clone())
                .param("k", ks.clone())
        }
        TableKind::Ratio => {
            let (p, q) = parse_ratio(ratio.as_deref().unwrap_or("1"))?;
            let ns = non_negative(&require(n, "n")?, "n", 1)?;
            Caps::check("n (modular recurrence)", *ns.last().unwrap(), caps.recurrence_n)?;
            let mut cells = Vec::new();
            for &n in &ns {
                if (n as u64 * p) % q != 0 {
                    return Err(CliError::Usage(format!("k = {p}/{q} * {n} is not an integer")));
                }
                cells.push((n, (n as u64 * p / q) as i64));
            }
            let counts = sweep::connected_counts(&cells)?;
            let mut report = Report::new("table", &["n", "k", "exact", "log10_d", "ratio", "n_times_ratio_minus_1"])
                .param("ratio", format!("{p}/{q}"))
                .param("n", ns.clone());
            for (&(n, k), c) in cells.iter().zip(&counts) {
                let point = ratio_point(n as u64, k as u64, c)?;
                let d = dominant_term_log(n as u64, k as u64)?;
                report.rows.push(vec![
                    Cell::Int(n.to_string()),
                    Cell::Int(k.to_string()),
                    int_cell(c),
                    Cell::Float(d.log10_abs()),
                    Cell::Float(point.ratio),
                    Cell::Float(point.scaled_error()),
                ]);
            }
            report
        }
        TableKind::Wright => {
            let ks = non_negative(&require(k, "k")?, "k", 1)?;
            let order = order.unwrap_or(40);
            Caps::check("order", order, caps.gf_n)?;
            Caps::check("k", *ks.last().unwrap(), caps.gf_k)?;
            let mut report = Report::new("table", &["k", "degree", "coefficients"])
                .param("k", ks.clone())
                .param("order", order);
            for &kk in &ks {
                let w = wright_polynomial(kk, order)?;
                report.rows.push(vec![
                    Cell::Int(kk.to_string()),
                    Cell::Int(w.degree().to_string()),
                    Cell::List(w.coeffs().iter().map(|c| c.to_string()).collect()),
                ]);
            }
            report
        }
        TableKind::Patchwork => {
            let ls = non_negative(&require(k, "k")?, "k", 0)?;
            Caps::check("k (patchwork excess)", *ls.last().unwrap(), caps.patchwork_excess)?;
            let mut report = Report::new("table", &["excess", "n", "u_coefficients"]).param("k", ls.clone());
            for &l in &ls {
                let p = enumerate_patchworks_no_isolated(l)?;
                for (nn, poly) in p.coeffs().iter().enumerate() {
                    if poly.is_empty() {
                        continue;
                    }
                    report.rows.push(vec![
                        Cell::Int(l.to_string()),
                        Cell::Int(nn.to_string()),
                        Cell::List(poly.iter().map(|c| c.to_string()).collect()),
                    ]);
                }
            }
            report
        }
    };
    Ok(report.param("kind", name))
}

fn cmd_verify(suite: verify::Suite) -> (Report, bool) {
    let outcomes = verify::run(suite);
    let ok = outcomes.iter().all(|o| o.ok);
    let mut report = Report::new("verify", &["check", "status", "detail"])
        .param("suite", format!("{suite:?}").to_lowercase());
    for o in outcomes {
        report.rows.push(vec![
            Cell::Text(o.name),
            Cell::Text(if o.ok { "OK" } else { "FAIL" }.into()),
            Cell::Text(o.detail),
        ]);
    }
    (report, ok)
}

fn verify_text(report: &Report) -> String {
    let mut out = String::new();
    for row in &report.rows {
        if let [Cell::Text(name), Cell::Text(status), Cell::Text(detail)] = row.as_slice() {
            if status == "OK" {
                out.push_str(&format!("{name}: OK\n"));
            } else {
                out.push_str(&format!("{name}: FAIL ({detail})\n"));
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let caps = Caps::from_env()?;
    let report = match &cli.command {
        Command::Count { n, k, method, all_methods } => cmd_count(*n, *k, *method, *all_methods, &caps)?,
        Command::Series { kind, k, order } => cmd_series(*kind, *k, *order, &caps)?,
        Command::Asymptotic { n, k, with_ratio } => cmd_asymptotic(*n, *k, *with_ratio, &caps)?,
        Command::Table { kind, n, k, ratio, order } => cmd_table(*kind, n, k, ratio, *order, &caps)?,
        Command::Verify { suite } => {
            let (report, ok) = cmd_verify(*suite);
            let text = match cli.format {
                Format::Text => verify_text(&report),
                f => report.render(f),
            };
            return Ok((text, ok));
        }
    };
    let text = match (&cli.command, cli.format) {
        (Command::Count { all_methods: false, .. }, Format::Text) => {
            format!("{}\n", report.rows[0][1].plain())
        }
        (_, f) => report.render(f),
    };
    Ok((text, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Violation(msg)) => {
            eprintln!("identity violation: {msg}");
            ExitCode::from(1)
        }
    }
}
