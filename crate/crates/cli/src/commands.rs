//! Subcommand implementations. Each returns the process exit status and
//! writes human-readable progress to `out`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use goursat_core::boundary_data::{
    check_agreement, to_classical, to_nonclassical, AgreementReport, CornerMismatch,
};
use goursat_core::field_grid::{lp_norm, sobolev_norm_2_4, Field2D, Grid2D};
use goursat_core::mms::{
    convergence_study, error_report, manufacture, reference_solution, ConvergenceRow,
    ConvergenceTable, ErrorReport, ManufacturedSolution, StudyReference,
};
use goursat_core::schema::BoundaryDocument;
use goursat_core::solver::{
    solve, validate_coefficients, CoefficientReport, ProblemSpec, Solution,
};
use goursat_core::{Error, MixedOrder};

use crate::config::{ConfigError, LoadedConfig, ReferenceConfig, StudyConfig};
use crate::io;

pub const EXIT_OK: u8 = 0;
/// Verdict failure: agreement check or study thresholds.
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Environment variable that overrides `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "GOURSAT_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Failures of a solve, split by the status they map to.
fn classify(e: Error) -> CliError {
    match e {
        Error::InvalidParameter(_)
        | Error::InvalidGrid(_)
        | Error::GridMismatch(_)
        | Error::IncompleteJet { .. }
        | Error::InvalidCoefficient { .. }
        | Error::Study(_)
        | Error::Schema(_) => CliError::Config(e.to_string()),
        _ => CliError::Solver(e.to_string()),
    }
}

fn finish(out: &mut dyn Write, result: Result<u8, CliError>) -> u8 {
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

struct Outputs {
    dir: PathBuf,
    prefix: String,
    written: Vec<String>,
}

impl Outputs {
    fn new(cfg: &LoadedConfig, dir_override: Option<&Path>) -> Result<Self, CliError> {
        let dir = match dir_override {
            Some(d) => d.to_path_buf(),
            None => cfg.resolve(&cfg.config.output.dir),
        };
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir,
            prefix: cfg.config.output.prefix.clone(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, suffix: &str, contents: &str) -> Result<(), CliError> {
        let name = format!("{}_{suffix}", self.prefix);
        let path = self.dir.join(&name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(name);
        Ok(())
    }
}

fn e17(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_coefficients(r: &mut String, report: &CoefficientReport<f64>) {
    let _ = writeln!(r, "coefficient diagnostics (p = {}):", report.p);
    let _ = writeln!(
        r,
        "  mixed norms: L_{{inf,p}} is the sup over x1 of the L_p norm in x2; L_{{p,inf}} is the L_p norm in x1 of the sup over x2"
    );
    if report.entries.is_empty() {
        let _ = writeln!(r, "  all coefficients zero");
    }
    for d in &report.entries {
        let _ = writeln!(
            r,
            "  a_{}{}  {:<26} {}",
            d.order.i(),
            d.order.j(),
            d.class.label(),
            e17(d.norm)
        );
    }
}

fn push_warnings(r: &mut String, warnings: &[CornerMismatch<f64>]) {
    if warnings.is_empty() {
        return;
    }
    let _ = writeln!(r, "corner warnings (phi side kept):");
    for w in warnings {
        let _ = writeln!(
            r,
            "  Z_{}{}: phi side {} psi side {}",
            w.i,
            w.j,
            e17(w.phi_side),
            e17(w.psi_side)
        );
    }
}

fn push_history(r: &mut String, history: &[f64]) {
    let _ = writeln!(r, "residual history:");
    for (k, h) in history.iter().enumerate() {
        let _ = writeln!(r, "  {:>4} {}", k + 1, e17(*h));
    }
}

fn push_errors(r: &mut String, e: &ErrorReport<f64>) {
    let _ = writeln!(r, "oracle errors (p = {}):", e.p);
    let _ = writeln!(r, "  {:<10} {:<24} lp_error", "order", "sup_error");
    for o in &e.per_order {
        let _ = writeln!(
            r,
            "  {:<10} {:<24} {}",
            o.order.to_string(),
            e17(o.sup_error),
            e17(o.lp_error)
        );
    }
    let _ = writeln!(r, "  max sup error: {}", e17(e.max_sup_error()));
    let _ = writeln!(r, "  sobolev_norm_2_4 of error: {}", e17(e.sobolev_error));
}

const HEATMAP_NOTE: &str =
    "heatmaps: P2 PGM, grey = round(255 (x - min) / (max - min)) per field, constant fields map to 0; x1 to the right, x2 upwards";

fn grid_line(g: &Grid2D<f64>) -> String {
    let (n1, n2) = g.shape();
    format!(
        "grid: {n1} x {n2} nodes on [0, {}] x [0, {}]",
        g.g1.length(),
        g.g2.length()
    )
}

fn order_tag(o: MixedOrder) -> String {
    if o == MixedOrder::VALUE {
        "u".into()
    } else {
        format!("d{}{}", o.i(), o.j())
    }
}

struct Prepared {
    spec: ProblemSpec<f64>,
    warnings: Vec<CornerMismatch<f64>>,
    coeff_report: CoefficientReport<f64>,
    oracle: Option<ManufacturedSolution<f64>>,
}

fn prepare(cfg: &LoadedConfig) -> Result<Prepared, CliError> {
    let grid = cfg.grid()?;
    let coefficients = cfg.coefficients(&grid)?;
    let coeff_report =
        validate_coefficients(&coefficients, &grid, cfg.config.p).map_err(config_err)?;
    let (data, warnings) = cfg.boundary_data(&grid)?;
    let rhs = cfg.rhs(&grid, &coefficients)?;
    let spec = ProblemSpec::new(
        cfg.config.p,
        coefficients,
        data,
        rhs,
        cfg.config.solver.params(),
    )
    .map_err(config_err)?;
    Ok(Prepared {
        spec,
        warnings,
        coeff_report,
        oracle: cfg.oracle(),
    })
}

/// `solve <config>`: u and requested jet orders as CSV, a text report, and
/// optional heatmaps.
pub fn cmd_solve(config: &Path, dir_override: Option<&Path>, out: &mut dyn Write) -> u8 {
    let result = run_solve(config, dir_override, out);
    finish(out, result)
}

fn run_solve(
    config: &Path,
    dir_override: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = LoadedConfig::load(config)?;
    let prepared = prepare(&cfg)?;
    let spec = &prepared.spec;
    let mut outputs = Outputs::new(&cfg, dir_override)?;

    let mut r = String::new();
    let _ = writeln!(r, "goursat solve");
    let _ = writeln!(r, "{}", grid_line(&spec.grid));
    let _ = writeln!(r, "p: {}", spec.p);
    let _ = writeln!(r, "method: {}", spec.params.method.name());
    let _ = writeln!(r, "tolerance: {}", e17(spec.params.tolerance));
    let _ = writeln!(r, "max_iterations: {}", spec.params.max_iterations);
    push_coefficients(&mut r, &prepared.coeff_report);
    push_warnings(&mut r, &prepared.warnings);

    let sol = match solve(spec) {
        Ok(sol) => sol,
        Err(e) => {
            let _ = writeln!(r, "status: failed");
            let _ = writeln!(r, "error: {e}");
            match &e {
                Error::NotConverged { history, .. } => push_history(&mut r, history),
                _ => {
                    let _ = writeln!(r, "residual history: none");
                }
            }
            outputs.write("report.txt", &r)?;
            let err = classify(e);
            let _ = writeln!(out, "error: {err}");
            let _ = writeln!(
                out,
                "report: {}",
                outputs.dir.join(&outputs.written[0]).display()
            );
            return Ok(err.exit_code());
        }
    };

    write_solution(&cfg, &sol, &mut outputs)?;
    let d = &sol.diagnostics;
    let _ = writeln!(r, "status: ok");
    let _ = writeln!(r, "iterations: {}", d.iterations);
    let _ = writeln!(r, "pde residual: {}", e17(d.pde_residual));
    let _ = writeln!(r, "boundary residual: {}", e17(d.boundary_residual));
    push_history(&mut r, &d.residual_history);
    let p = spec.p;
    let _ = writeln!(r, "norms (p = {p}):");
    let _ = writeln!(
        r,
        "  L_p(u): {}",
        e17(lp_norm(sol.u(), p).map_err(classify)?)
    );
    let _ = writeln!(r, "  sup(u): {}", e17(sol.u().max_abs()));
    let _ = writeln!(
        r,
        "  L_p(v): {}",
        e17(lp_norm(&sol.v, p).map_err(classify)?)
    );
    let _ = writeln!(
        r,
        "  sobolev_norm_2_4(u): {}",
        e17(sobolev_norm_2_4(&sol.jet, p).map_err(classify)?)
    );
    if let Some(oracle) = &prepared.oracle {
        push_errors(&mut r, &error_report(&sol, oracle, p).map_err(classify)?);
    }
    if cfg.config.output.heatmap {
        let _ = writeln!(r, "{HEATMAP_NOTE}");
    }
    let _ = writeln!(r, "files:");
    for f in &outputs.written {
        let _ = writeln!(r, "  {f}");
    }
    outputs.write("report.txt", &r)?;
    let _ = writeln!(
        out,
        "solved in {} iteration(s), pde residual {}, outputs in {}",
        d.iterations,
        e17(d.pde_residual),
        outputs.dir.display()
    );
    Ok(EXIT_OK)
}

fn write_solution(
    cfg: &LoadedConfig,
    sol: &Solution<f64>,
    outputs: &mut Outputs,
) -> Result<(), CliError> {
    let mut orders: Vec<MixedOrder> = vec![MixedOrder::VALUE];
    for [i, j] in &cfg.config.output.jet_orders {
        let o = MixedOrder::new(*i, *j).map_err(config_err)?;
        if !orders.contains(&o) {
            orders.push(o);
        }
    }
    let mut fields: Vec<(String, &Field2D<f64>)> = orders
        .iter()
        .map(|&o| (order_tag(o), sol.jet.get(o)))
        .collect();
    fields.push(("v".into(), &sol.v));
    for (tag, field) in fields {
        outputs.write(&format!("{tag}.csv"), &io::field_csv(field))?;
        if cfg.config.output.heatmap {
            outputs.write(&format!("{tag}.pgm"), &io::heatmap_pgm(field))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertTarget {
    Classical,
    Nonclassical,
}

/// `convert --to <target> <in> <out>`.
pub fn cmd_convert(target: ConvertTarget, input: &Path, output: &Path, out: &mut dyn Write) -> u8 {
    let result = (|| -> Result<u8, CliError> {
        let text = std::fs::read_to_string(input)
            .map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
        let doc = BoundaryDocument::from_json(&text).map_err(config_err)?;
        let (converted, warnings) = match (target, doc) {
            (ConvertTarget::Classical, BoundaryDocument::Nonclassical(d)) => {
                let nc = BoundaryDocument::Nonclassical(d)
                    .into_nonclassical()
                    .map_err(config_err)?;
                (BoundaryDocument::from_classical(&to_classical(&nc)), 0)
            }
            (ConvertTarget::Nonclassical, BoundaryDocument::Classical(d)) => {
                let c = BoundaryDocument::Classical(d)
                    .into_classical()
                    .map_err(config_err)?;
                let res = to_nonclassical(&c);
                (
                    BoundaryDocument::from_nonclassical(&res.data, &res.warnings),
                    res.warnings.len(),
                )
            }
            (ConvertTarget::Classical, BoundaryDocument::Classical(_)) => {
                return Err(CliError::Config("input is already classical".into()))
            }
            (ConvertTarget::Nonclassical, BoundaryDocument::Nonclassical(_)) => {
                return Err(CliError::Config("input is already non-classical".into()))
            }
        };
        std::fs::write(output, converted.to_json())
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", output.display())))?;
        if warnings > 0 {
            let _ = writeln!(
                out,
                "warning: {warnings} corner mismatch(es) recorded in the output"
            );
        }
        let _ = writeln!(out, "wrote {}", output.display());
        Ok(EXIT_OK)
    })();
    finish(out, result)
}

/// Report text for `check-agreement`: the eight residuals in fixed order.
pub fn agreement_text(report: &AgreementReport<f64>) -> String {
    let mut r = String::new();
    for (k, (label, res)) in AgreementReport::<f64>::LABELS
        .iter()
        .zip(report.residuals)
        .enumerate()
    {
        let _ = writeln!(r, "r{} {:<22} {}", k + 1, label, e17(res));
    }
    let _ = writeln!(r, "max residual {}", e17(report.max_residual));
    let _ = writeln!(r, "tolerance {}", e17(report.tolerance));
    let _ = writeln!(r, "{}", if report.pass { "PASS" } else { "FAIL" });
    r
}

/// `check-agreement <in> [--tol T]`. Non-classical input is converted first.
pub fn cmd_check_agreement(input: &Path, tol: f64, out: &mut dyn Write) -> u8 {
    let result = (|| -> Result<u8, CliError> {
        if tol.is_nan() || tol < 0.0 {
            return Err(CliError::Config(format!(
                "tolerance must be non-negative, got {tol}"
            )));
        }
        let text = std::fs::read_to_string(input)
            .map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
        let classical = match BoundaryDocument::from_json(&text).map_err(config_err)? {
            doc @ BoundaryDocument::Classical(_) => doc.into_classical().map_err(config_err)?,
            doc @ BoundaryDocument::Nonclassical(_) => {
                to_classical(&doc.into_nonclassical().map_err(config_err)?)
            }
        };
        let report = check_agreement(&classical, tol);
        let _ = out.write_all(agreement_text(&report).as_bytes());
        Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
    })();
    finish(out, result)
}

fn study_section(cfg: &LoadedConfig) -> Result<&StudyConfig, CliError> {
    cfg.config
        .study
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `study` section".into()))
}

fn require_oracle(cfg: &LoadedConfig) -> Result<ManufacturedSolution<f64>, CliError> {
    cfg.oracle()
        .ok_or_else(|| CliError::Config("missing `oracle` section".into()))
}

/// Pass/fail lines for a finished table.
fn verdict(
    study: Option<&StudyConfig>,
    table: &ConvergenceTable,
    max_jet_error: Option<f64>,
) -> (bool, Vec<String>) {
    let mut lines = Vec::new();
    let mut pass = true;
    let orders = table.orders();
    if let Some(s) = study {
        if let Some(lo) = s.min_order {
            for q in &orders {
                let ok = *q >= lo;
                pass &= ok;
                lines.push(format!(
                    "order {} >= {lo}: {}",
                    e17(*q),
                    if ok { "pass" } else { "fail" }
                ));
            }
        }
        if let Some(hi) = s.max_order {
            for q in &orders {
                let ok = *q <= hi;
                pass &= ok;
                lines.push(format!(
                    "order {} <= {hi}: {}",
                    e17(*q),
                    if ok { "pass" } else { "fail" }
                ));
            }
        }
        if let Some(cap) = s.max_error {
            let measured = max_jet_error
                .or_else(|| table.rows.last().map(|r| r.sup_error))
                .unwrap_or(0.0);
            let ok = measured <= cap;
            pass &= ok;
            lines.push(format!(
                "max error {} <= {cap}: {}",
                e17(measured),
                if ok { "pass" } else { "fail" }
            ));
        }
    }
    if orders.is_empty() && table.rows.len() > 1 {
        lines.push("orders not applicable (errors below floor)".into());
    }
    lines.push(format!("verdict: {}", if pass { "PASS" } else { "FAIL" }));
    (pass, lines)
}

fn table_text(table: &ConvergenceTable) -> String {
    let mut r = String::new();
    let _ = writeln!(
        r,
        "{:>6} {:>24} {:>24} {:>24} {:>24} {:>6}",
        "nodes", "h", "sup_error", "lp_error", "order", "iters"
    );
    for row in &table.rows {
        let order = row.order.map(e17).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            r,
            "{:>6} {:>24} {:>24} {:>24} {:>24} {:>6}",
            row.nodes,
            e17(row.h),
            e17(row.sup_error),
            e17(row.lp_error),
            order,
            row.iterations
        );
    }
    r
}

/// `mms <config>`: manufactured solves against the exact oracle, on the
/// configured grid or on each of `study.grid_sizes`.
pub fn cmd_mms(config: &Path, dir_override: Option<&Path>, out: &mut dyn Write) -> u8 {
    let result = run_mms(config, dir_override, out);
    finish(out, result)
}

fn run_mms(
    config: &Path,
    dir_override: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = LoadedConfig::load(config)?;
    let oracle = require_oracle(&cfg)?;
    let grids: Vec<Grid2D<f64>> = match cfg.config.study.as_ref() {
        Some(s) if !s.grid_sizes.is_empty() => {
            if s.grid_sizes
                .windows(2)
                .any(|w| w[0] < 2 || w[1] + 1 != 2 * w[0])
            {
                return Err(CliError::Config(
                    "each level of `study.grid_sizes` must halve the spacing".into(),
                ));
            }
            s.grid_sizes
                .iter()
                .map(|&n| cfg.grid_with(n, n))
                .collect::<Result<_, _>>()?
        }
        _ => vec![cfg.grid()?],
    };
    let table_grid = match cfg.config.grid {
        Some(_) => cfg.grid()?,
        None => *grids.last().expect("at least one grid"),
    };
    let coefficients = cfg.coefficients(&table_grid)?;
    let p = cfg.config.p;
    let params = cfg.config.solver.params();
    let mut outputs = Outputs::new(&cfg, dir_override)?;
    let mut r = String::new();
    let _ = writeln!(r, "goursat mms");
    let _ = writeln!(r, "p: {p}");
    let _ = writeln!(r, "method: {}", params.method.name());
    let mut table = ConvergenceTable::default();
    let mut last_max = None;
    let mut failure = None;
    for grid in &grids {
        let _ = writeln!(r, "{}", grid_line(grid));
        let step = (|| -> Result<(), CliError> {
            let spec =
                manufacture(&oracle, coefficients.clone(), *grid, p, params).map_err(classify)?;
            let sol = solve(&spec).map_err(|e| {
                if let Error::NotConverged { history, .. } = &e {
                    push_history(&mut r, history);
                }
                classify(e)
            })?;
            let report = error_report(&sol, &oracle, p).map_err(classify)?;
            let u_err = report.get(MixedOrder::VALUE);
            table.push(ConvergenceRow {
                nodes: grid.g1.node_count(),
                h: grid.g1.spacing().max(grid.g2.spacing()),
                sup_error: u_err.sup_error,
                lp_error: u_err.lp_error,
                order: None,
                iterations: sol.diagnostics.iterations,
                pde_residual: sol.diagnostics.pde_residual,
            });
            let _ = writeln!(r, "iterations: {}", sol.diagnostics.iterations);
            let _ = writeln!(r, "pde residual: {}", e17(sol.diagnostics.pde_residual));
            let _ = writeln!(
                r,
                "boundary residual: {}",
                e17(sol.diagnostics.boundary_residual)
            );
            push_errors(&mut r, &report);
            last_max = Some(report.max_sup_error());
            Ok(())
        })();
        if let Err(e) = step {
            failure = Some(e);
            break;
        }
    }
    finish_study(&cfg, &mut outputs, "mms", r, &table, last_max, failure, out)
}

#[allow(clippy::too_many_arguments)]
fn finish_study(
    cfg: &LoadedConfig,
    outputs: &mut Outputs,
    name: &str,
    mut r: String,
    table: &ConvergenceTable,
    max_jet_error: Option<f64>,
    failure: Option<CliError>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    outputs.write(&format!("{name}.csv"), &table.to_csv())?;
    let _ = writeln!(r, "table:");
    r.push_str(&table_text(table));
    if let Some(e) = failure {
        let _ = writeln!(r, "status: failed");
        let _ = writeln!(r, "error: {e}");
        outputs.write(&format!("{name}_report.txt"), &r)?;
        return Err(e);
    }
    let (pass, lines) = verdict(cfg.config.study.as_ref(), table, max_jet_error);
    for l in &lines {
        let _ = writeln!(r, "{l}");
    }
    outputs.write(&format!("{name}_report.txt"), &r)?;
    let _ = out.write_all(table_text(table).as_bytes());
    for l in &lines {
        let _ = writeln!(out, "{l}");
    }
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

/// `convergence <config>`: refinement study over `study.grid_sizes`.
pub fn cmd_convergence(config: &Path, dir_override: Option<&Path>, out: &mut dyn Write) -> u8 {
    let result = run_convergence(config, dir_override, out);
    finish(out, result)
}

fn run_convergence(
    config: &Path,
    dir_override: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let cfg = LoadedConfig::load(config)?;
    let oracle = require_oracle(&cfg)?;
    let study = study_section(&cfg)?;
    let p = cfg.config.p;
    let params = cfg.config.solver.params();
    let lengths = (cfg.config.domain.h1, cfg.config.domain.h2);
    let finest = *study
        .grid_sizes
        .last()
        .ok_or_else(|| CliError::Config("empty `study.grid_sizes`".into()))?;
    // Table coefficients are read on `grid` when given, otherwise on the finest grid used.
    let table_grid = match (cfg.config.grid, &study.reference) {
        (Some(_), _) => cfg.grid()?,
        (None, ReferenceConfig::SelfConvergence { nodes }) => cfg.grid_with(*nodes, *nodes)?,
        (None, ReferenceConfig::Exact) => cfg.grid_with(finest, finest)?,
    };
    let coefficients = cfg.coefficients(&table_grid)?;
    let mut outputs = Outputs::new(&cfg, dir_override)?;

    let mut r = String::new();
    let _ = writeln!(r, "goursat convergence");
    let _ = writeln!(r, "domain: [0, {}] x [0, {}]", lengths.0, lengths.1);
    let _ = writeln!(r, "p: {p}");
    let _ = writeln!(r, "method: {}", params.method.name());
    let reference = match &study.reference {
        ReferenceConfig::Exact => {
            let _ = writeln!(r, "reference: exact oracle");
            StudyReference::Exact
        }
        ReferenceConfig::SelfConvergence { nodes } => {
            let _ = writeln!(r, "reference: marching solve on {nodes} x {nodes} nodes");
            let ref_grid = cfg.grid_with(*nodes, *nodes)?;
            let cache = study.reference_cache.as_ref().map(|c| cfg.resolve(c));
            match cache {
                Some(path) if path.is_file() => {
                    let _ = writeln!(r, "reference cache: loaded");
                    StudyReference::Given(io::read_field_csv(&path, &ref_grid).map_err(config_err)?)
                }
                cache => {
                    let u = reference_solution(&oracle, &coefficients, lengths, *nodes, p, params)
                        .map_err(classify)?;
                    if let Some(path) = cache {
                        std::fs::write(&path, io::field_csv(&u))
                            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                        let _ = writeln!(r, "reference cache: written");
                    }
                    StudyReference::Given(u)
                }
            }
        }
    };
    let (table, failure) = match convergence_study(
        &oracle,
        &coefficients,
        lengths,
        &study.grid_sizes,
        p,
        params,
        reference,
    ) {
        Ok(t) => (t, None),
        Err(f) => {
            if let Error::NotConverged { history, .. } = &f.error {
                push_history(&mut r, history);
            }
            (f.partial, Some(classify(f.error)))
        }
    };
    finish_study(
        &cfg,
        &mut outputs,
        "convergence",
        r,
        &table,
        None,
        failure,
        out,
    )
}
