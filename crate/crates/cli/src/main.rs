use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noninertial::analytic::{audit, audit_unruh_state, EntryStatus, ErrataReport};
use noninertial::entanglement::{concurrence_auto, ppt_test, PPT_TOL};
use noninertial::model::{apply_unruh, evolve_total, reduce_partition, x_state, ChannelKind, Partition, XParams};
use noninertial::qmat::CMatrix;
use noninertial::sweep::{
    find_boundary, format_sig, run_sweep, Axis, BoundaryKind, BoundaryQuery, PSchedule, SweepConfig, AXIS_TOL, ZERO_TOL,
};
use serde_json::json;

mod config;

use config::{parse_angle, ConfigFile, GridFlags};

/// Validation failures exit with 2, I/O failures with 3.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Io(String),
}

impl From<noninertial::Error> for Failure {
    fn from(e: noninertial::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "noninertial",
    version,
    about = "Entanglement of X states under Unruh acceleration and local damping"
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON
    #[arg(long, global = true)]
    json: bool,
    /// Accept correlation coefficients that do not form a state
    #[arg(long, global = true)]
    allow_nonphysical: bool,
    /// bell or werner:<c>
    #[arg(long, global = true)]
    preset: Option<String>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    /// amplitude or phase
    #[arg(long)]
    channel: Option<String>,
}

#[derive(Args)]
struct AccelArgs {
    /// Acceleration parameter in radians, or pi/4
    #[arg(long, value_parser = parse_angle)]
    r: Option<f64>,
    /// Mode frequency; with --a (and --c-light, default 1) gives r
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c_light: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_parser = parse_angle)]
    r_min: Option<f64>,
    #[arg(long, value_parser = parse_angle)]
    r_max: Option<f64>,
    #[arg(long)]
    r_steps: Option<usize>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one point and print the reduced states with their measures
    Evolve {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        accel: AccelArgs,
        /// Equal decay probability on both sides
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        p_a: Option<f64>,
        #[arg(long)]
        p_r: Option<f64>,
        /// Bipartitions (comma separated), default AR
        #[arg(long, value_delimiter = ',')]
        partition: Vec<String>,
    },
    /// Sweep the (r, p) grid and write CSV
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Bipartitions (comma separated), default all six
        #[arg(long, value_delimiter = ',')]
        partitions: Vec<String>,
        /// p_A = w_a·p
        #[arg(long)]
        w_a: Option<f64>,
        /// p_R = w_r·p
        #[arg(long)]
        w_r: Option<f64>,
    },
    /// Locate a sudden-death or sudden-birth boundary
    Boundary {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// SD or SB
        #[arg(long)]
        kind: String,
        #[arg(long)]
        partition: String,
        /// Fixed coordinate, r=<value> or p=<value>; the other axis is scanned
        #[arg(long)]
        fix: String,
        #[arg(long, default_value_t = ZERO_TOL)]
        zero_tol: f64,
        #[arg(long, default_value_t = AXIS_TOL)]
        axis_tol: f64,
    },
    /// Audit the published closed forms against numerical evolution
    Verify {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        accel: AccelArgs,
        #[arg(long)]
        p: Option<f64>,
    },
}

struct Ctx {
    cfg: ConfigFile,
    json: bool,
    allow_nonphysical: bool,
    preset: Option<String>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn params(&self, state: &StateArgs) -> Result<XParams, Failure> {
        let params = config::params(self.preset.as_deref(), [state.c1, state.c2, state.c3], &self.cfg)?;
        if !self.allow_nonphysical {
            params.validate()?;
        } else if !params.is_valid() {
            eprintln!(
                "note: parameters are not a state (minimum eigenvalue {}); results are labeled nonphysical",
                format_sig(params.min_eigenvalue())
            );
        }
        Ok(params)
    }

    fn channel(&self, state: &StateArgs) -> Result<ChannelKind, Failure> {
        Ok(config::channel(state.channel.as_deref(), &self.cfg)?.unwrap_or(ChannelKind::Amplitude))
    }

    fn sweep_config(&self, state: &StateArgs, grid: GridArgs, partitions: &[String]) -> Result<SweepConfig, Failure> {
        let params = self.params(state)?;
        let mut cfg = SweepConfig::new(params, self.channel(state)?);
        cfg.r_grid = config::grid(
            GridFlags {
                min: grid.r_min,
                max: grid.r_max,
                steps: grid.r_steps,
            },
            self.cfg.r_grid.as_ref(),
            FRAC_PI_4,
        )?;
        cfg.p_grid = config::grid(
            GridFlags {
                min: grid.p_min,
                max: grid.p_max,
                steps: grid.p_steps,
            },
            self.cfg.p_grid.as_ref(),
            1.0,
        )?;
        cfg.partitions = config::partitions(partitions, &self.cfg, &Partition::ALL)?;
        cfg.allow_nonphysical = self.allow_nonphysical;
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let part = |f: fn(&noninertial::qmat::Complex) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| f(&m.get(i, j))).collect())
            .collect()
    };
    json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

fn matrix_text(m: &CMatrix) -> String {
    let cell = |i: usize, j: usize| {
        let z = m.get(i, j);
        if z.im == 0.0 {
            format_sig(z.re)
        } else {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", format_sig(z.re), format_sig(z.im.abs()))
        }
    };
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| cell(i, j)).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  "));
    }
    out
}

fn cmd_evolve(
    ctx: &Ctx,
    state: StateArgs,
    accel: AccelArgs,
    p: (Option<f64>, Option<f64>, Option<f64>),
    partition: Vec<String>,
) -> Result<(), Failure> {
    let params = ctx.params(&state)?;
    let kind = ctx.channel(&state)?;
    let accel = config::accel(accel.r, accel.omega, accel.a, accel.c_light, &ctx.cfg)?;
    let spec = config::spec(kind, config::damping(p.0, p.1, p.2, &ctx.cfg)?)?;
    let partitions = config::partitions(&partition, &ctx.cfg, &[Partition::AR])?;

    let rho = x_state(&params, ctx.allow_nonphysical)?;
    let total = evolve_total(&apply_unruh(&rho, &accel)?, &spec)?;

    let mut text = format!(
        "params ({}, {}, {})  r {}  channel {}  p_A {}  p_R {}{}\n",
        format_sig(params.c1),
        format_sig(params.c2),
        format_sig(params.c3),
        format_sig(accel.r),
        kind,
        format_sig(spec.p_a),
        format_sig(spec.p_r),
        if total.is_nonphysical() { "  [nonphysical]" } else { "" }
    );
    let mut reductions = Vec::new();
    for part in partitions {
        let red = reduce_partition(&total, part)?;
        let c = concurrence_auto(&red)?;
        let ppt = ppt_test(&red, PPT_TOL)?;
        let (a, b) = part.labels();
        let _ = write!(
            text,
            "\n{part} (basis {a},{b})\n{}concurrence {}\nnegativity {}\n",
            matrix_text(red.matrix()),
            format_sig(c.value),
            format_sig(ppt.negativity)
        );
        reductions.push(json!({
            "partition": part,
            "basis": [a, b],
            "matrix": matrix_json(red.matrix()),
            "concurrence": c.value,
            "lambdas": c.lambdas,
            "method": c.method,
            "negativity": ppt.negativity,
            "ppt_min_eigenvalue": ppt.min_eigenvalue,
            "separable_verdict": ppt.separable_verdict,
        }));
    }
    if ctx.json {
        let doc = json!({
            "params": params,
            "r": accel.r,
            "acceleration": accel.source,
            "channel": kind,
            "p_a": spec.p_a,
            "p_r": spec.p_r,
            "nonphysical": total.is_nonphysical(),
            "reductions": reductions,
        });
        ctx.emit(&(serde_json::to_string_pretty(&doc).expect("json") + "\n"))
    } else {
        ctx.emit(&text)
    }
}

fn cmd_sweep(
    ctx: &Ctx,
    state: StateArgs,
    grid: GridArgs,
    partitions: Vec<String>,
    w: (Option<f64>, Option<f64>),
) -> Result<(), Failure> {
    let mut cfg = ctx.sweep_config(&state, grid, &partitions)?;
    cfg.schedule = PSchedule::new(w.0.unwrap_or(1.0), w.1.unwrap_or(1.0))?;
    let table = run_sweep(&cfg)?;
    let body = if ctx.json {
        serde_json::to_string_pretty(&table).expect("json") + "\n"
    } else {
        table.to_csv()
    };
    ctx.emit(&body)?;
    if let Some(out) = &ctx.out {
        let meta = json!({
            "params": table.params,
            "channel": table.channel,
            "schedule": cfg.schedule,
            "r_grid": cfg.r_grid,
            "p_grid": cfg.p_grid,
            "partitions": table.partitions,
            "rows": table.rows.len(),
            "nonphysical": table.nonphysical,
            "min_eigenvalue": table.min_eigenvalue,
            "best_over_signs": table.params.best_sign_min_eigenvalue(),
        });
        let mut path = out.clone().into_os_string();
        path.push(".meta.json");
        write_file(
            Path::new(&path),
            &(serde_json::to_string_pretty(&meta).expect("json") + "\n"),
        )?;
    }
    Ok(())
}

fn parse_fix(s: &str) -> Result<(Axis, f64), Failure> {
    let (axis, value) = s
        .split_once('=')
        .ok_or_else(|| Failure::Validation(format!("--fix expects r=<value> or p=<value>, got '{s}'")))?;
    let axis: Axis = axis.parse()?;
    Ok((axis, parse_angle(value).map_err(Failure::Validation)?))
}

#[allow(clippy::too_many_arguments)]
fn cmd_boundary(
    ctx: &Ctx,
    state: StateArgs,
    grid: GridArgs,
    kind: &str,
    partition: &str,
    fix: &str,
    zero_tol: f64,
    axis_tol: f64,
) -> Result<(), Failure> {
    let cfg = ctx.sweep_config(&state, grid, &[])?;
    let (fixed_axis, fixed_value) = parse_fix(fix)?;
    let mut q = BoundaryQuery::new(
        kind.parse::<BoundaryKind>()?,
        partition.parse()?,
        fixed_axis.other(),
        fixed_value,
    );
    q.zero_tol = zero_tol;
    q.axis_tol = axis_tol;
    let res = find_boundary(&cfg, &q)?;
    if ctx.json {
        ctx.emit(&(serde_json::to_string_pretty(&res).expect("json") + "\n"))
    } else {
        ctx.emit(&res.to_csv())
    }
}

fn summarize(out: &mut String, title: &str, report: &ErrataReport) {
    let _ = writeln!(
        out,
        "{title}: {} match, {} mismatch",
        report.count(EntryStatus::Match),
        report.count(EntryStatus::Mismatch)
    );
    for rec in report.mismatches() {
        let _ = writeln!(
            out,
            "  {} ({},{}) [{}]: printed {}  numeric {}  residual {}  {}",
            rec.equation_id,
            rec.entry[0],
            rec.entry[1],
            rec.partition,
            format_sig(rec.paper_value),
            format_sig(rec.numeric_value),
            format_sig(rec.residual),
            rec.note
        );
    }
    for claim in &report.claims {
        let _ = writeln!(
            out,
            "  claim {} {}: computed {}  ({})",
            claim.id,
            if claim.consistent { "consistent" } else { "INCONSISTENT" },
            format_sig(claim.computed_value),
            claim.claim
        );
    }
}

fn cmd_verify(ctx: &Ctx, state: StateArgs, accel: AccelArgs, p: Option<f64>) -> Result<(), Failure> {
    let params = ctx.params(&state)?;
    let kinds = match config::channel(state.channel.as_deref(), &ctx.cfg)? {
        Some(k) => vec![k],
        None => ChannelKind::ALL.to_vec(),
    };
    let accel = config::accel(accel.r, accel.omega, accel.a, accel.c_light, &ctx.cfg)?;
    let (p_a, p_r) = config::damping(p, None, None, &ctx.cfg)?;
    if p_a != p_r {
        return Err(Failure::Validation("verify needs equal damping on both sides".into()));
    }
    let reports = kinds
        .iter()
        .map(|&k| audit(&params, accel.r, p_a, k, ctx.allow_nonphysical))
        .collect::<Result<Vec<_>, _>>()?;
    let unruh = audit_unruh_state(&params, accel.r, ctx.allow_nonphysical)?;

    let matches: usize = reports.iter().map(|r| r.count(EntryStatus::Match)).sum();
    let mismatches: usize = reports.iter().map(|r| r.count(EntryStatus::Mismatch)).sum();
    let doc = json!({
        "params": params,
        "r": accel.r,
        "p": p_a,
        "records": reports.iter().flat_map(|r| &r.records).collect::<Vec<_>>(),
        "unruh_state_records": unruh.records,
        "forms": reports.iter().flat_map(|r| &r.forms).chain(&unruh.forms).collect::<Vec<_>>(),
        "claims": reports.iter().flat_map(|r| &r.claims).collect::<Vec<_>>(),
        "summary": {
            "match": matches,
            "mismatch": mismatches,
            "unruh_state_mismatch": unruh.count(EntryStatus::Mismatch),
        },
    });
    let json_text = serde_json::to_string_pretty(&doc).expect("json") + "\n";

    let mut text = format!(
        "params ({}, {}, {})  r {}  p {}\n",
        format_sig(params.c1),
        format_sig(params.c2),
        format_sig(params.c3),
        format_sig(accel.r),
        format_sig(p_a)
    );
    for (k, report) in kinds.iter().zip(&reports) {
        summarize(&mut text, &format!("{k} channel"), report);
    }
    summarize(&mut text, "Unruh state", &unruh);
    let _ = writeln!(text, "channel equations total: {matches} match, {mismatches} mismatch");

    match (&ctx.out, ctx.json) {
        (Some(path), _) => {
            write_file(path, &json_text)?;
            print!("{text}");
            Ok(())
        }
        (None, true) => ctx.emit(&json_text),
        (None, false) => ctx.emit(&text),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.shared.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let ctx = Ctx {
        json: cli.shared.json,
        allow_nonphysical: cli.shared.allow_nonphysical || cfg.allow_nonphysical.unwrap_or(false),
        preset: cli.shared.preset,
        out: cli.shared.out.or_else(|| cfg.out.clone()),
        cfg,
    };
    match cli.command {
        Command::Evolve {
            state,
            accel,
            p,
            p_a,
            p_r,
            partition,
        } => cmd_evolve(&ctx, state, accel, (p, p_a, p_r), partition),
        Command::Sweep {
            state,
            grid,
            partitions,
            w_a,
            w_r,
        } => cmd_sweep(&ctx, state, grid, partitions, (w_a, w_r)),
        Command::Boundary {
            state,
            grid,
            kind,
            partition,
            fix,
            zero_tol,
            axis_tol,
        } => cmd_boundary(&ctx, state, grid, &kind, &partition, &fix, zero_tol, axis_tol),
        Command::Verify { state, accel, p } => cmd_verify(&ctx, state, accel, p),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message().replace('\n', " "));
            ExitCode::from(f.exit_code())
        }
    }
}
