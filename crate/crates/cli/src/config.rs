//! Declarative job configuration: a single TOML file plus flag overrides,
//! flags winning. Long-running jobs keep a reproducible record this way.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct JobConfig {
    pub algebra: Option<String>,
    pub max_stem: Option<u32>,
    pub max_f: Option<u32>,
    pub checkpoint: Option<String>,
    pub threads: Option<usize>,
    pub format: Option<String>,
    pub degree_cap: Option<u32>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let value: toml::Value = text.parse().context("parsing config TOML")?;
        let job = value.get("job").unwrap_or(&value);
        let get_str = |k: &str| job.get(k).and_then(|v| v.as_str()).map(str::to_string);
        let get_int = |k: &str| job.get(k).and_then(|v| v.as_integer());
        Ok(JobConfig {
            algebra: get_str("algebra"),
            max_stem: get_int("max_stem").map(|v| v as u32),
            max_f: get_int("max_f").map(|v| v as u32),
            checkpoint: get_str("checkpoint"),
            threads: get_int("threads").map(|v| v as usize),
            format: get_str("format"),
            degree_cap: get_int("degree_cap").map(|v| v as u32),
        })
    }
}

/// Resolves a checkpoint path: relative paths are rooted in
/// `MOTEX_CHECKPOINT_DIR` when that is set.
pub fn checkpoint_path(raw: &str) -> PathBuf {
    let p = PathBuf::from(raw);
    if p.is_absolute() {
        return p;
    }
    match std::env::var_os("MOTEX_CHECKPOINT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(p),
        _ => p,
    }
}

/// Parses an `--algebra` value: either a preset name or a raw profile
/// literal of the form
///
/// ```text
/// motivic:tau=2,2,2,2:xi=4,2      the subalgebra B
/// motivic:tau=*:xi=*              the full algebra (degree-capped)
/// classical:zeta=8,4,2,2          the classical analogue of B
/// ```
///
/// Heights are powers of two (`1` meaning absent; tau entries are 0 or 2);
/// a trailing `*` continues the family without bound.
pub fn parse_profile(spec: &str, degree_cap: u32) -> Result<motex::hopf::MotivicProfile> {
    use motex::hopf::{CoeffMode, Height, MotivicProfile};
    if let Some(p) = MotivicProfile::preset(spec, degree_cap) {
        return Ok(p);
    }
    let mut parts = spec.split(':');
    let mode = match parts.next() {
        Some("motivic") => CoeffMode::Motivic,
        Some("classical") => CoeffMode::Classical,
        _ => bail!(
            "unknown algebra {:?}; use a preset ({}) or a literal like \
             motivic:tau=2,2,2,2:xi=4,2 (a trailing * continues the family)",
            spec,
            motex::hopf::PRESET_NAMES.join(", ")
        ),
    };
    let mut tau_present = Vec::new();
    let mut tau_tail = false;
    let mut xi_heights = Vec::new();
    let mut xi_tail = None;
    for part in parts {
        let (family, list) = part
            .split_once('=')
            .with_context(|| format!("bad profile component {part:?}"))?;
        let entries: Vec<&str> = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',').collect()
        };
        match (family, mode) {
            ("tau", CoeffMode::Motivic) => {
                for e in &entries {
                    match e.trim() {
                        "*" => tau_tail = true,
                        "0" => tau_present.push(false),
                        "2" => tau_present.push(true),
                        other => bail!("tau heights are 0 or 2, got {other:?}"),
                    }
                }
            }
            ("xi", CoeffMode::Motivic) | ("zeta", CoeffMode::Classical) => {
                for e in &entries {
                    let e = e.trim();
                    if e == "*" {
                        xi_tail = Some(Height::Unbounded);
                        continue;
                    }
                    let h: u32 = e
                        .parse()
                        .with_context(|| format!("bad height {e:?}"))?;
                    if h != 1 && !h.is_power_of_two() || h == 0 {
                        bail!("heights are powers of two (1 = absent), got {h}");
                    }
                    xi_heights.push(Height::Bounded(h));
                }
            }
            (f, _) => bail!("family {f:?} does not fit the {mode:?} mode"),
        }
    }
    Ok(MotivicProfile {
        mode,
        tau_present,
        tau_tail,
        xi_heights,
        xi_tail,
        degree_cap,
    }
    .clamped())
}
