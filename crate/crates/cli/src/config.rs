//! JSON config file and the merge of file values with command-line flags.
//! Flags always win.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use noninertial::model::{r_from_acceleration, AccelParams, ChannelKind, ChannelSpec, Partition, XParams};
use noninertial::sweep::{Grid, DEFAULT_STEPS};
use serde::Deserialize;

use crate::Failure;

/// A real number, or the literal "pi/4".
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    pub fn value(&self) -> Result<f64, Failure> {
        match self {
            Angle::Number(v) => Ok(*v),
            Angle::Text(s) => parse_angle(s).map_err(Failure::Validation),
        }
    }
}

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("pi/4") || t == "π/4" {
        return Ok(FRAC_PI_4);
    }
    t.parse::<f64>()
        .map_err(|_| format!("invalid number '{s}' (radians, or the literal pi/4)"))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: Option<Angle>,
    pub max: Option<Angle>,
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub c: Option<[f64; 3]>,
    pub channel: Option<String>,
    pub p: Option<f64>,
    pub p_a: Option<f64>,
    pub p_r: Option<f64>,
    pub r: Option<Angle>,
    pub omega: Option<f64>,
    pub a: Option<f64>,
    pub c_light: Option<f64>,
    pub r_grid: Option<GridSpec>,
    pub p_grid: Option<GridSpec>,
    pub partitions: Option<Vec<String>>,
    pub allow_nonphysical: Option<bool>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("config {}: {e}", path.display())))
    }
}

pub fn params(preset: Option<&str>, flags: [Option<f64>; 3], cfg: &ConfigFile) -> Result<XParams, Failure> {
    let any_flag = flags.iter().any(Option::is_some);
    if any_flag {
        if preset.is_some() {
            return Err(Failure::Validation("--preset conflicts with --c1/--c2/--c3".into()));
        }
        return match flags {
            [Some(c1), Some(c2), Some(c3)] => Ok(XParams::new(c1, c2, c3)?),
            _ => Err(Failure::Validation("--c1, --c2 and --c3 must be given together".into())),
        };
    }
    if let Some(name) = preset {
        return Ok(XParams::preset(name)?);
    }
    match cfg.c {
        Some([c1, c2, c3]) => Ok(XParams::new(c1, c2, c3)?),
        None => Err(Failure::Validation(
            "no initial state: pass --preset, --c1/--c2/--c3, or \"c\" in the config".into(),
        )),
    }
}

pub fn channel(flag: Option<&str>, cfg: &ConfigFile) -> Result<Option<ChannelKind>, Failure> {
    flag.or(cfg.channel.as_deref())
        .map(|s| s.parse::<ChannelKind>().map_err(Failure::from))
        .transpose()
}

/// r directly, or from (ω, a, c). Flags replace the whole group from the
/// config when any of them is present.
pub fn accel(
    r: Option<f64>,
    omega: Option<f64>,
    a: Option<f64>,
    c_light: Option<f64>,
    cfg: &ConfigFile,
) -> Result<AccelParams, Failure> {
    let (r, omega, a, c_light) = if r.is_some() || omega.is_some() || a.is_some() || c_light.is_some() {
        (r, omega, a, c_light)
    } else {
        (
            cfg.r.as_ref().map(Angle::value).transpose()?,
            cfg.omega,
            cfg.a,
            cfg.c_light,
        )
    };
    let physical = omega.is_some() || a.is_some();
    match (r, physical) {
        (Some(_), true) => Err(Failure::Validation("give either r or omega/a, not both".into())),
        (Some(r), false) => Ok(AccelParams::new(r)?),
        (None, true) => match (omega, a) {
            (Some(omega), Some(a)) => Ok(r_from_acceleration(omega, a, c_light.unwrap_or(1.0))?),
            _ => Err(Failure::Validation("omega and a must be given together".into())),
        },
        (None, false) => Ok(AccelParams::new(0.0)?),
    }
}

/// (p_A, p_R) from either p or the pair.
pub fn damping(p: Option<f64>, p_a: Option<f64>, p_r: Option<f64>, cfg: &ConfigFile) -> Result<(f64, f64), Failure> {
    let (p, p_a, p_r) = if p.is_some() || p_a.is_some() || p_r.is_some() {
        (p, p_a, p_r)
    } else {
        (cfg.p, cfg.p_a, cfg.p_r)
    };
    match (p, p_a, p_r) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(Failure::Validation("give either p or p_a/p_r, not both".into()))
        }
        (Some(p), None, None) => Ok((p, p)),
        (None, Some(a), Some(r)) => Ok((a, r)),
        (None, None, None) => Ok((0.0, 0.0)),
        _ => Err(Failure::Validation("p_a and p_r must be given together".into())),
    }
}

pub fn spec(kind: ChannelKind, (p_a, p_r): (f64, f64)) -> Result<ChannelSpec, Failure> {
    Ok(ChannelSpec::new(kind, p_a, p_r)?)
}

pub fn partitions(flag: &[String], cfg: &ConfigFile, default: &[Partition]) -> Result<Vec<Partition>, Failure> {
    let names: Vec<String> = if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(list) = &cfg.partitions {
        list.clone()
    } else {
        return Ok(default.to_vec());
    };
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Partition>().map_err(Failure::from))
        .collect()
}

pub struct GridFlags {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
}

pub fn grid(flags: GridFlags, cfg: Option<&GridSpec>, upper: f64) -> Result<Grid, Failure> {
    let from_cfg = |pick: fn(&GridSpec) -> Option<&Angle>| -> Result<Option<f64>, Failure> {
        cfg.and_then(pick).map(Angle::value).transpose()
    };
    let min = match flags.min {
        Some(v) => v,
        None => from_cfg(|g| g.min.as_ref())?.unwrap_or(0.0),
    };
    let max = match flags.max {
        Some(v) => v,
        None => from_cfg(|g| g.max.as_ref())?.unwrap_or(upper),
    };
    let steps = flags
        .steps
        .or_else(|| cfg.and_then(|g| g.steps))
        .unwrap_or(DEFAULT_STEPS);
    Ok(Grid::new(min, max, steps))
}
