//! Grid sweeps over (r, p), sudden-death / sudden-birth boundary search and
//! CSV serialization.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence_auto, ppt_test, ConcurrenceResult, PptResult, PPT_TOL};
use crate::model::{
    apply_unruh, evolve_total, reduce_partition, x_state, AccelParams, ChannelKind, ChannelSpec, Partition, XParams,
};
use crate::qmat::DensityMatrix;
use crate::{Error, Result};

pub const ZERO_TOL: f64 = 1e-9;
pub const AXIS_TOL: f64 = 1e-6;
pub const PRESCAN_POINTS: usize = 64;
pub const DEFAULT_STEPS: usize = 65;

const EDGE_SLACK: f64 = 1e-12;

/// `%.9g`: nine significant digits, trailing zeros trimmed, scientific
/// notation outside [1e-5, 1e9).
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Inclusive uniform grid. A single step is the point `min` (and requires
/// `min == max`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn single(v: f64) -> Self {
        Self::new(v, v, 1)
    }

    pub fn full_r(steps: usize) -> Self {
        Self::new(0.0, FRAC_PI_4, steps)
    }

    pub fn full_p(steps: usize) -> Self {
        Self::new(0.0, 1.0, steps)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / last as f64
                }
            })
            .collect()
    }

    fn validate(&self, axis: &str, upper: f64) -> Result<()> {
        let Grid { min, max, steps } = *self;
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidParameter(format!("{axis} grid bounds must be finite")));
        }
        if min < -EDGE_SLACK || max > upper + EDGE_SLACK {
            return Err(Error::InvalidParameter(format!(
                "{axis} grid [{min}, {max}] outside [0, {upper}]"
            )));
        }
        if min > max {
            return Err(Error::InvalidParameter(format!(
                "{axis} grid min {min} exceeds max {max}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter(format!("{axis} grid needs at least one step")));
        }
        if steps == 1 && min != max {
            return Err(Error::InvalidParameter(format!(
                "{axis} grid with one step needs min == max"
            )));
        }
        Ok(())
    }
}

/// How the swept p is split between the two sides: p_A = w_a·p, p_R = w_r·p.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PSchedule {
    pub w_a: f64,
    pub w_r: f64,
}

impl PSchedule {
    pub const EQUAL: PSchedule = PSchedule { w_a: 1.0, w_r: 1.0 };

    pub fn new(w_a: f64, w_r: f64) -> Result<Self> {
        for (name, w) in [("w_a", w_a), ("w_r", w_r)] {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidParameter(format!(
                    "schedule weight {name} = {w} outside [0, 1]"
                )));
            }
        }
        Ok(Self { w_a, w_r })
    }

    pub fn spec(&self, kind: ChannelKind, p: f64) -> Result<ChannelSpec> {
        ChannelSpec::new(kind, (self.w_a * p).min(1.0), (self.w_r * p).min(1.0))
    }
}

impl Default for PSchedule {
    fn default() -> Self {
        Self::EQUAL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub params: XParams,
    pub channel: ChannelKind,
    pub schedule: PSchedule,
    pub r_grid: Grid,
    pub p_grid: Grid,
    pub partitions: Vec<Partition>,
    pub allow_nonphysical: bool,
}

impl SweepConfig {
    /// Full 65×65 grid over every partition.
    pub fn new(params: XParams, channel: ChannelKind) -> Self {
        Self {
            params,
            channel,
            schedule: PSchedule::EQUAL,
            r_grid: Grid::full_r(DEFAULT_STEPS),
            p_grid: Grid::full_p(DEFAULT_STEPS),
            partitions: Partition::ALL.to_vec(),
            allow_nonphysical: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.r_grid.validate("r", FRAC_PI_4)?;
        self.p_grid.validate("p", 1.0)?;
        PSchedule::new(self.schedule.w_a, self.schedule.w_r)?;
        if !self.allow_nonphysical {
            self.params.validate()?;
        }
        Ok(())
    }

    /// Requested partitions in canonical column order, duplicates removed.
    pub fn columns(&self) -> Vec<Partition> {
        Partition::ALL
            .into_iter()
            .filter(|p| self.partitions.contains(p))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: f64,
    pub p: f64,
    pub concurrence: Vec<f64>,
    pub negativity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub params: XParams,
    pub channel: ChannelKind,
    pub partitions: Vec<Partition>,
    pub rows: Vec<SweepRow>,
    pub nonphysical: bool,
    /// Minimum eigenvalue of the initial state.
    pub min_eigenvalue: f64,
}

impl SweepTable {
    pub fn column(&self, partition: Partition) -> Option<usize> {
        self.partitions.iter().position(|&p| p == partition)
    }

    pub fn concurrence(&self, row: usize, partition: Partition) -> Option<f64> {
        self.column(partition).map(|k| self.rows[row].concurrence[k])
    }

    pub fn negativity(&self, row: usize, partition: Partition) -> Option<f64> {
        self.column(partition).map(|k| self.rows[row].negativity[k])
    }

    pub fn header(&self) -> String {
        let mut cols = vec!["r".to_string(), "p".to_string()];
        cols.extend(self.partitions.iter().map(|p| format!("C_{p}")));
        cols.extend(self.partitions.iter().map(|p| format!("N_{p}")));
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = [row.r, row.p]
                .iter()
                .chain(&row.concurrence)
                .chain(&row.negativity)
                .map(|&v| format_sig(v))
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Measures of one reduced state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointMeasures {
    pub partition: Partition,
    pub concurrence: ConcurrenceResult,
    pub ppt: PptResult,
}

fn measure(total: &DensityMatrix, partition: Partition) -> Result<PointMeasures> {
    let reduced = reduce_partition(total, partition)?;
    Ok(PointMeasures {
        partition,
        concurrence: concurrence_auto(&reduced)?,
        ppt: ppt_test(&reduced, PPT_TOL)?,
    })
}

fn evolve_point(
    initial: &DensityMatrix,
    kind: ChannelKind,
    schedule: &PSchedule,
    r: f64,
    p: f64,
) -> Result<DensityMatrix> {
    let accel = AccelParams::new(r)?;
    let spec = schedule.spec(kind, p)?;
    evolve_total(&apply_unruh(initial, &accel)?, &spec)
}

/// Measures for every requested partition at one (r, p).
pub fn evaluate_point(cfg: &SweepConfig, r: f64, p: f64) -> Result<Vec<PointMeasures>> {
    let initial = x_state(&cfg.params, cfg.allow_nonphysical)?;
    let total = evolve_point(&initial, cfg.channel, &cfg.schedule, r, p)?;
    cfg.columns().into_iter().map(|part| measure(&total, part)).collect()
}

/// Evaluates the grid in parallel; rows come back r-major, both axes ascending.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let initial = x_state(&cfg.params, cfg.allow_nonphysical)?;
    let partitions = cfg.columns();
    let rs = cfg.r_grid.points();
    let ps = cfg.p_grid.points();
    let points: Vec<(f64, f64)> = rs.iter().flat_map(|&r| ps.iter().map(move |&p| (r, p))).collect();

    let rows = points
        .par_iter()
        .map(|&(r, p)| {
            let total = evolve_point(&initial, cfg.channel, &cfg.schedule, r, p)?;
            let mut concurrence = Vec::with_capacity(partitions.len());
            let mut negativity = Vec::with_capacity(partitions.len());
            for &part in &partitions {
                let m = measure(&total, part)?;
                concurrence.push(m.concurrence.value);
                negativity.push(m.ppt.negativity);
            }
            Ok(SweepRow {
                r,
                p,
                concurrence,
                negativity,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        params: cfg.params,
        channel: cfg.channel,
        partitions,
        rows,
        nonphysical: !cfg.params.is_valid(),
        min_eigenvalue: cfg.params.min_eigenvalue(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryKind {
    SD,
    SB,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::SD => "SD",
            BoundaryKind::SB => "SB",
        })
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SD" => Ok(BoundaryKind::SD),
            "SB" => Ok(BoundaryKind::SB),
            _ => Err(Error::InvalidParameter(format!(
                "unknown boundary kind '{s}' (expected SD or SB)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    R,
    P,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::R => Axis::P,
            Axis::P => Axis::R,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::R => "r",
            Axis::P => "p",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "r" | "R" => Ok(Axis::R),
            "p" | "P" => Ok(Axis::P),
            _ => Err(Error::InvalidParameter(format!("unknown axis '{s}' (expected r or p)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryQuery {
    pub kind: BoundaryKind,
    pub partition: Partition,
    pub scan_axis: Axis,
    pub fixed_value: f64,
    pub zero_tol: f64,
    pub axis_tol: f64,
}

impl BoundaryQuery {
    pub fn new(kind: BoundaryKind, partition: Partition, scan_axis: Axis, fixed_value: f64) -> Self {
        Self {
            kind,
            partition,
            scan_axis,
            fixed_value,
            zero_tol: ZERO_TOL,
            axis_tol: AXIS_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryResult {
    pub kind: BoundaryKind,
    pub partition: Partition,
    pub fixed_axis: Axis,
    pub fixed_value: f64,
    pub boundary_axis: Axis,
    /// First transition along the scan axis, if any.
    pub value: Option<f64>,
    /// Transitions of the requested kind seen in the pre-scan.
    pub multiplicity: usize,
}

impl BoundaryResult {
    pub const CSV_HEADER: &'static str = "fixed_axis,value,boundary_axis,value,kind,partition,multiplicity";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.fixed_axis,
            format_sig(self.fixed_value),
            self.boundary_axis,
            self.value.map_or_else(|| "none".to_string(), format_sig),
            self.kind,
            self.partition,
            self.multiplicity
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_line())
    }
}

/// Pre-scans the scan axis at 64 uniform points for the first transition of
/// the requested kind, then bisects the bracket down to `axis_tol`.
///
/// "Positive" means C > zero_tol. SD is the first positive → non-positive
/// step, SB the first non-positive → positive one.
pub fn find_boundary(cfg: &SweepConfig, q: &BoundaryQuery) -> Result<BoundaryResult> {
    cfg.validate()?;
    if q.zero_tol.is_nan() || q.zero_tol < 0.0 || q.axis_tol.is_nan() || q.axis_tol <= 0.0 {
        return Err(Error::InvalidParameter("boundary tolerances must be positive".into()));
    }
    let (range, fixed_upper) = match q.scan_axis {
        Axis::P => (cfg.p_grid, FRAC_PI_4),
        Axis::R => (cfg.r_grid, 1.0),
    };
    if !q.fixed_value.is_finite() || q.fixed_value < -EDGE_SLACK || q.fixed_value > fixed_upper + EDGE_SLACK {
        return Err(Error::InvalidParameter(format!(
            "fixed {} = {} outside [0, {fixed_upper}]",
            q.scan_axis.other(),
            q.fixed_value
        )));
    }
    let fixed = q.fixed_value.clamp(0.0, fixed_upper);

    let initial = x_state(&cfg.params, cfg.allow_nonphysical)?;
    let positive = |x: f64| -> Result<bool> {
        let (r, p) = match q.scan_axis {
            Axis::P => (fixed, x),
            Axis::R => (x, fixed),
        };
        let total = evolve_point(&initial, cfg.channel, &cfg.schedule, r, p)?;
        Ok(measure(&total, q.partition)?.concurrence.value > q.zero_tol)
    };
    let wanted = |before: bool, after: bool| match q.kind {
        BoundaryKind::SD => before && !after,
        BoundaryKind::SB => !before && after,
    };

    let xs = Grid::new(range.min, range.max, PRESCAN_POINTS).points();
    let signs: Vec<bool> = xs.par_iter().map(|&x| positive(x)).collect::<Result<_>>()?;
    let brackets: Vec<usize> = (1..xs.len()).filter(|&k| wanted(signs[k - 1], signs[k])).collect();

    let value = match brackets.first() {
        None => None,
        Some(&k) => {
            let (mut lo, mut hi) = (xs[k - 1], xs[k]);
            let lo_sign = signs[k - 1];
            while hi - lo > q.axis_tol {
                let mid = 0.5 * (lo + hi);
                if positive(mid)? == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
    };

    Ok(BoundaryResult {
        kind: q.kind,
        partition: q.partition,
        fixed_axis: q.scan_axis.other(),
        fixed_value: fixed,
        boundary_axis: q.scan_axis,
        value,
        multiplicity: brackets.len(),
    })
}

/// Writes the table as CSV and returns the number of bytes written.
pub fn write_csv<W: Write>(table: &SweepTable, mut dest: W) -> io::Result<usize> {
    let text = table.to_csv();
    dest.write_all(text.as_bytes())?;
    dest.flush()?;
    Ok(text.len())
}

pub fn write_csv_file(table: &SweepTable, path: &Path) -> io::Result<usize> {
    write_csv(table, BufWriter::new(File::create(path)?))
}

/// Header and numeric rows of a sweep CSV.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("row {}: bad number '{f}'", n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.len() {
            return Err(Error::InvalidParameter(format!(
                "row {} has {} fields, header has {}",
                n + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_point(kind: ChannelKind, r: f64, p: f64) -> SweepTable {
        let mut cfg = SweepConfig::new(XParams::bell(), kind);
        cfg.r_grid = Grid::single(r);
        cfg.p_grid = Grid::single(p);
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn format_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.25, "0.25"),
            (-0.05, "-0.05"),
            (0.785398163421, "0.785398163"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e9"),
            (1e-5, "0.00001"),
            (3.16227766e-6, "3.16227766e-6"),
            (0.99999999999, "1"),
            (-2.5e-11, "-2.5e-11"),
        ];
        for (v, s) in cases {
            assert_eq!(format_sig(v), s, "{v}");
        }
    }

    #[test]
    fn grid_points_inclusive() {
        assert_eq!(Grid::new(0.0, 1.0, 5).points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Grid::full_r(3).points()[2], FRAC_PI_4);
        assert_eq!(Grid::single(0.3).points(), vec![0.3]);
    }

    #[test]
    fn invalid_grids_rejected() {
        let mut cfg = SweepConfig::new(XParams::bell(), ChannelKind::Amplitude);
        cfg.p_grid = Grid::new(0.0, 1.5, 3);
        assert!(run_sweep(&cfg).is_err());
        cfg.p_grid = Grid::new(0.6, 0.4, 3);
        assert!(run_sweep(&cfg).is_err());
        cfg.p_grid = Grid::new(0.0, 1.0, 0);
        assert!(run_sweep(&cfg).is_err());
        cfg.p_grid = Grid::new(0.0, 1.0, 1);
        assert!(run_sweep(&cfg).is_err());
        cfg.p_grid = Grid::full_p(3);
        cfg.r_grid = Grid::new(0.0, 1.0, 3);
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn bell_at_rest_without_decay() {
        let t = bell_point(ChannelKind::Amplitude, 0.0, 0.0);
        assert_eq!(t.rows.len(), 1);
        assert!((t.concurrence(0, Partition::AR).unwrap() - 1.0).abs() < 1e-12);
        for part in [
            Partition::AEa,
            Partition::AEr,
            Partition::REr,
            Partition::REa,
            Partition::EaEr,
        ] {
            assert!(t.concurrence(0, part).unwrap() < 1e-12, "{part}");
            assert!(t.negativity(0, part).unwrap() < 1e-12, "{part}");
        }
    }

    #[test]
    fn bell_full_decay_moves_entanglement_to_environments() {
        let t = bell_point(ChannelKind::Amplitude, 0.0, 1.0);
        assert!(t.concurrence(0, Partition::AR).unwrap() < 1e-12);
        assert!((t.concurrence(0, Partition::EaEr).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_half_decay() {
        let t = bell_point(ChannelKind::Amplitude, 0.0, 0.5);
        for part in [Partition::AR, Partition::EaEr, Partition::REa] {
            assert!((t.concurrence(0, part).unwrap() - 0.25).abs() < 1e-12, "{part}");
        }
    }

    #[test]
    fn row_order_is_r_major() {
        let mut cfg = SweepConfig::new(XParams::bell(), ChannelKind::Phase);
        cfg.r_grid = Grid::new(0.0, 0.5, 2);
        cfg.p_grid = Grid::new(0.0, 1.0, 2);
        let t = run_sweep(&cfg).unwrap();
        let coords: Vec<_> = t.rows.iter().map(|r| (r.r, r.p)).collect();
        assert_eq!(coords, vec![(0.0, 0.0), (0.0, 1.0), (0.5, 0.0), (0.5, 1.0)]);
    }

    #[test]
    fn csv_header_restricted_and_canonical() {
        let mut cfg = SweepConfig::new(XParams::bell(), ChannelKind::Amplitude);
        cfg.r_grid = Grid::single(0.0);
        cfg.p_grid = Grid::new(0.0, 1.0, 2);
        cfg.partitions = vec![Partition::EaEr, Partition::AR, Partition::AR];
        let t = run_sweep(&cfg).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv, "r,p,C_AR,C_EaEr,N_AR,N_EaEr\n0,0,1,0,0.5,0\n0,1,0,1,0,0.5\n");

        cfg.partitions.clear();
        let t = run_sweep(&cfg).unwrap();
        assert_eq!(t.to_csv(), "r,p\n0,0\n0,1\n");
    }

    #[test]
    fn write_csv_reports_bytes() {
        let t = bell_point(ChannelKind::Amplitude, 0.0, 0.5);
        let mut buf = Vec::new();
        let n = write_csv(&t, &mut buf).unwrap();
        assert_eq!(n, buf.len());
        assert_eq!(String::from_utf8(buf).unwrap(), t.to_csv());
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(parse_csv("r,p\n0,1,2\n").is_err());
        assert!(parse_csv("r,p\n0,x\n").is_err());
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn nonphysical_requires_flag() {
        let params = XParams::new(0.7, 0.9, 0.4).unwrap();
        let mut cfg = SweepConfig::new(params, ChannelKind::Amplitude);
        cfg.r_grid = Grid::full_r(3);
        cfg.p_grid = Grid::full_p(3);
        assert!(matches!(run_sweep(&cfg), Err(Error::NonPhysicalParams { .. })));
        cfg.allow_nonphysical = true;
        let t = run_sweep(&cfg).unwrap();
        assert!(t.nonphysical);
        assert!((t.min_eigenvalue + 0.25).abs() < 1e-12);
        assert_eq!(t.rows.len(), 9);
    }

    #[test]
    fn sd_at_maximal_acceleration() {
        let cfg = SweepConfig::new(XParams::bell(), ChannelKind::Amplitude);
        let q = BoundaryQuery::new(BoundaryKind::SD, Partition::AR, Axis::P, FRAC_PI_4);
        let res = find_boundary(&cfg, &q).unwrap();
        assert!((res.value.unwrap() - 0.5).abs() < 1e-6, "{res:?}");
        assert_eq!(res.multiplicity, 1);
        assert_eq!(res.fixed_axis, Axis::R);
    }

    #[test]
    fn phase_bell_has_no_sd() {
        let cfg = SweepConfig::new(XParams::bell(), ChannelKind::Phase);
        for r in [0.0, 0.3, 0.7] {
            let q = BoundaryQuery::new(BoundaryKind::SD, Partition::AR, Axis::P, r);
            let res = find_boundary(&cfg, &q).unwrap();
            // C = (1 − p)cos r only reaches the threshold at the very edge.
            if let Some(v) = res.value {
                assert!(v > 1.0 - 2e-9 / r.cos() - 1e-6, "{r}: {res:?}");
            }
        }
    }

    #[test]
    fn sb_of_environments_at_rest() {
        // C_EaEr = p², so C crosses zero_tol at √zero_tol.
        let cfg = SweepConfig::new(XParams::bell(), ChannelKind::Amplitude);
        let q = BoundaryQuery::new(BoundaryKind::SB, Partition::EaEr, Axis::P, 0.0);
        let res = find_boundary(&cfg, &q).unwrap();
        assert!((res.value.unwrap() - ZERO_TOL.sqrt()).abs() < 1e-6, "{res:?}");
    }

    #[test]
    fn boundary_csv_line() {
        let res = BoundaryResult {
            kind: BoundaryKind::SD,
            partition: Partition::AR,
            fixed_axis: Axis::R,
            fixed_value: FRAC_PI_4,
            boundary_axis: Axis::P,
            value: None,
            multiplicity: 0,
        };
        assert_eq!(
            res.to_csv(),
            "fixed_axis,value,boundary_axis,value,kind,partition,multiplicity\nr,0.785398163,p,none,SD,AR,0\n"
        );
    }

    #[test]
    fn kinds_and_axes_parse() {
        assert_eq!("sd".parse::<BoundaryKind>().unwrap(), BoundaryKind::SD);
        assert_eq!("p".parse::<Axis>().unwrap(), Axis::P);
        assert!("x".parse::<Axis>().is_err());
    }
}
