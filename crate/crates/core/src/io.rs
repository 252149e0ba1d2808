//! Durable interfaces: run configuration, binary field snapshots and
//! diagnostics time series.
//!
//! # Snapshot format
//!
//! All integers and floats little-endian:
//!
//! | bytes        | content                                    |
//! |--------------|--------------------------------------------|
//! | 4            | magic `GPE2`                               |
//! | 4            | format version, `u32` (currently 1)        |
//! | 8 + 8        | `nx`, `ny` as `u64`                        |
//! | 4 x 8        | `a`, `b`, `c`, `d` as `f64`                |
//! | 16 x nx x ny | samples as interleaved `(re, im)` `f64`, x fastest |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{BlowupDetector, DiagnosticsRecord, DEFAULT_BLOWUP_FACTOR};
use crate::error::{Error, Result};
use crate::grid::{Field2D, GridSpec};
use crate::model::{InitialDataSpec, ModelSpec, NonlinearitySpec, PotentialSpec, HAT_HALF_WIDTH};
use crate::stepper::{step_count, EvolutionSpec, Scheme};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"GPE2";
pub const SNAPSHOT_VERSION: u32 = 1;
const SNAPSHOT_HEADER_LEN: usize = 4 + 4 + 2 * 8 + 4 * 8;

pub const TIMESERIES_HEADER: &str = "t,mass,energy,max_density,finite";

// ---------------------------------------------------------------------------
// configuration

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub potential: PotentialConfig,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialConfig,
    pub evolution: EvolutionConfig,
    pub output: OutputConfig,
    pub blowup: BlowupConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub nx: usize,
    pub ny: usize,
    pub dealias: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            a: -8.0,
            b: 8.0,
            c: -8.0,
            d: 8.0,
            nx: 128,
            ny: 128,
            dealias: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    #[default]
    Zero,
    Quadratic,
}

/// `V = (cx x^2 + cy y^2) / (2 eps)` when `kind = "quadratic"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    pub cx: f64,
    pub cy: f64,
    pub eps: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig {
            kind: PotentialKind::Zero,
            cx: 1.0,
            cy: 1.0,
            eps: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    #[default]
    Gaussian,
    Hat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            kind: InitialKind::Gaussian,
            sigma: 1.0,
            half_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub t_final: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub sample_every: usize,
    pub snapshot_times: Vec<f64>,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            t_final: 1.0,
            dt: 0.01,
            scheme: Scheme::Strang,
            sample_every: 1,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub timeseries: bool,
    pub snapshots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            timeseries: true,
            snapshots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlowupConfig {
    pub threshold_factor: f64,
}

impl Default for BlowupConfig {
    fn default() -> Self {
        BlowupConfig {
            threshold_factor: DEFAULT_BLOWUP_FACTOR,
        }
    }
}

impl RunConfig {
    pub fn grid_spec(&self) -> Result<GridSpec> {
        let g = &self.grid;
        GridSpec::new(g.a, g.b, g.c, g.d, g.nx, g.ny)
    }

    pub fn model_spec(&self) -> ModelSpec {
        let p = &self.potential;
        let potential = match p.kind {
            PotentialKind::Zero => PotentialSpec::Zero,
            PotentialKind::Quadratic => PotentialSpec::Quadratic {
                cx: p.cx,
                cy: p.cy,
                eps: p.eps,
            },
        };
        let initial = match self.initial.kind {
            InitialKind::Gaussian => InitialDataSpec::Gaussian {
                sigma: self.initial.sigma,
            },
            InitialKind::Hat => InitialDataSpec::Hat {
                half_width: self.initial.half_width,
            },
        };
        ModelSpec {
            potential,
            nonlinearity: self.nonlinearity,
            initial,
        }
    }

    pub fn evolution_spec(&self) -> Result<EvolutionSpec> {
        let e = &self.evolution;
        EvolutionSpec::new(e.t_final, e.dt, e.scheme, e.sample_every, &e.snapshot_times)
    }

    pub fn detector(&self) -> Result<BlowupDetector> {
        BlowupDetector::new(self.blowup.threshold_factor)
    }

    /// Checks every constraint, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        for (key, v) in [("grid.a", g.a), ("grid.b", g.b), ("grid.c", g.c), ("grid.d", g.d)] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        if g.b <= g.a {
            return Err(Error::config("grid.b", "must be greater than grid.a"));
        }
        if g.d <= g.c {
            return Err(Error::config("grid.d", "must be greater than grid.c"));
        }
        for (key, n) in [("grid.nx", g.nx), ("grid.ny", g.ny)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::config(key, format!("must be even and >= 4, got {n}")));
            }
        }

        let p = &self.potential;
        for (key, v) in [("potential.cx", p.cx), ("potential.cy", p.cy)] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        if !(p.eps.is_finite() && p.eps > 0.0) {
            return Err(Error::config("potential.eps", format!("must be > 0, got {}", p.eps)));
        }

        let nl = &self.nonlinearity;
        if !nl.kappa.is_finite() {
            return Err(Error::config("nonlinearity.kappa", "must be finite"));
        }
        if !(nl.p.is_finite() && nl.p >= 1.0) {
            return Err(Error::config("nonlinearity.p", format!("must be >= 1, got {}", nl.p)));
        }

        let init = &self.initial;
        if !(init.sigma.is_finite() && init.sigma > 0.0) {
            return Err(Error::config("initial.sigma", format!("must be > 0, got {}", init.sigma)));
        }
        if let Some(l) = init.half_width {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::config("initial.half_width", format!("must be > 0, got {l}")));
            }
        }
        let h = HAT_HALF_WIDTH;
        if init.kind == InitialKind::Hat
            && init.half_width.is_none()
            && (g.a, g.b, g.c, g.d) != (-h, h, -h, h)
        {
            return Err(Error::config(
                "initial.kind",
                "hat needs grid bounds [-8,8]x[-8,8] or an explicit initial.half_width",
            ));
        }

        let e = &self.evolution;
        if !(e.t_final.is_finite() && e.t_final > 0.0) {
            return Err(Error::config("evolution.t_final", format!("must be > 0, got {}", e.t_final)));
        }
        if !(e.dt.is_finite() && e.dt > 0.0) {
            return Err(Error::config("evolution.dt", format!("must be > 0, got {}", e.dt)));
        }
        if step_count(e.t_final, e.dt).is_err() {
            return Err(Error::config(
                "evolution.dt",
                format!("t_final / dt = {} is not an integer", e.t_final / e.dt),
            ));
        }
        if e.sample_every == 0 {
            return Err(Error::config("evolution.sample_every", "must be >= 1"));
        }
        if e.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::config("evolution.snapshot_times", "must be sorted"));
        }
        if let Some(t) = e
            .snapshot_times
            .iter()
            .find(|t| !(t.is_finite() && (0.0..=e.t_final).contains(*t)))
        {
            return Err(Error::config(
                "evolution.snapshot_times",
                format!("{t} outside [0, t_final]"),
            ));
        }

        let f = self.blowup.threshold_factor;
        if !(f.is_finite() && f > 1.0) {
            return Err(Error::config("blowup.threshold_factor", format!("must be > 1, got {f}")));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    config_from_table(table)
}

/// Like [`parse_config`], then applies `section.key=value` overrides.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    // the base document must be valid on its own
    config_from_table(table.clone())?;
    for item in overrides {
        apply_override(&mut table, item)?;
    }
    config_from_table(table)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_with_overrides(&text, overrides)
}

fn config_from_table(table: toml::Table) -> Result<RunConfig> {
    let located = table.clone();
    let cfg: RunConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| {
        let msg = e.message().to_string();
        Error::config(offending_key(&located, &msg), msg)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Best-effort `section.key` for a serde message such as "unknown field `x`".
fn offending_key(table: &toml::Table, msg: &str) -> String {
    let Some(field) = msg.split('`').nth(1) else {
        return "<document>".into();
    };
    if table.contains_key(field) {
        return field.to_string();
    }
    for (section, value) in table {
        if value.as_table().is_some_and(|t| t.contains_key(field)) {
            return format!("{section}.{field}");
        }
    }
    field.to_string()
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::config(item, "override must look like section.key=value"))?;
    let key = key.trim();
    let (section, field) = key
        .split_once('.')
        .ok_or_else(|| Error::config(key, "override key must look like section.key"))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let Some(sec) = entry.as_table_mut() else {
        return Err(Error::config(section, "is not a section"));
    };
    sec.insert(field.to_string(), value);
    Ok(())
}

// ---------------------------------------------------------------------------
// snapshots

pub fn encode_snapshot(f: &Field2D) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(SNAPSHOT_HEADER_LEN + 16 * g.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.write_u32::<LittleEndian>(SNAPSHOT_VERSION).unwrap();
    out.write_u64::<LittleEndian>(g.nx() as u64).unwrap();
    out.write_u64::<LittleEndian>(g.ny() as u64).unwrap();
    let (a, b, c, d) = g.bounds();
    for v in [a, b, c, d] {
        out.write_f64::<LittleEndian>(v).unwrap();
    }
    for z in f.values() {
        out.write_f64::<LittleEndian>(z.re).unwrap();
        out.write_f64::<LittleEndian>(z.im).unwrap();
    }
    out
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<Field2D> {
    let truncated = |_| Error::Format("truncated header".into());
    if bytes.len() < 4 {
        return Err(Error::Format("truncated header".into()));
    }
    if &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
    }
    let mut rd = &bytes[4..];
    let version = rd.read_u32::<LittleEndian>().map_err(truncated)?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let nx = rd.read_u64::<LittleEndian>().map_err(truncated)?;
    let ny = rd.read_u64::<LittleEndian>().map_err(truncated)?;
    let mut bounds = [0.0; 4];
    for b in &mut bounds {
        *b = rd.read_f64::<LittleEndian>().map_err(truncated)?;
    }
    let count = usize::try_from(nx)
        .ok()
        .zip(usize::try_from(ny).ok())
        .and_then(|(x, y)| x.checked_mul(y))
        .ok_or_else(|| Error::Format(format!("grid {nx}x{ny} too large")))?;
    let grid = GridSpec::new(bounds[0], bounds[1], bounds[2], bounds[3], nx as usize, ny as usize)
        .map_err(|e| Error::Format(format!("invalid grid: {e}")))?;
    let expected = count
        .checked_mul(16)
        .ok_or_else(|| Error::Format("sample count overflows".into()))?;
    if rd.len() < expected {
        return Err(Error::Format(format!(
            "truncated samples: expected {expected} bytes, found {}",
            rd.len()
        )));
    }
    if rd.len() > expected {
        return Err(Error::Format(format!("{} trailing bytes", rd.len() - expected)));
    }
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = rd.read_f64::<LittleEndian>().map_err(truncated)?;
        let im = rd.read_f64::<LittleEndian>().map_err(truncated)?;
        values.push(Complex64::new(re, im));
    }
    Field2D::from_values(grid, values)
}

pub fn write_snapshot(f: &Field2D, path: &Path) -> Result<()> {
    fs::write(path, encode_snapshot(f)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Field2D> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}

// ---------------------------------------------------------------------------
// time series

/// CSV text; floats carry 17 significant digits so they parse back exactly.
pub fn timeseries_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.t, r.mass, r.energy, r.max_density, r.finite
        );
    }
    out
}

pub fn write_timeseries(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::spec("time series", "no records to write"));
    }
    fs::write(path, timeseries_csv(records)).map_err(|e| Error::io(path, e))
}

pub fn parse_timeseries(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(TIMESERIES_HEADER) {
        return Err(Error::Format("time series header mismatch".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::Format(format!("time series line {}: `{line}`", i + 2));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(DiagnosticsRecord {
                t: num(cols[0])?,
                mass: num(cols[1])?,
                energy: num(cols[2])?,
                max_density: num(cols[3])?,
                finite: cols[4].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn read_timeseries(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_timeseries(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let model = cfg.model_spec();
        assert_eq!(model.potential, PotentialSpec::Zero);
        assert_eq!(model.nonlinearity, NonlinearitySpec { kappa: 1.0, p: 3.0 });
        assert_eq!(model.initial, InitialDataSpec::Gaussian { sigma: 1.0 });
    }

    #[test]
    fn odd_point_count_names_key() {
        let err = parse_config("[grid]\nnx = 255\n").unwrap_err();
        let Error::Config { key, reason } = err else { panic!("{err}") };
        assert_eq!(key, "grid.nx");
        assert!(reason.contains("even"));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_config("[grid]\nnxx = 256\n").unwrap_err();
        let Error::Config { key, .. } = err else { panic!("{err}") };
        assert_eq!(key, "grid.nxx");
        let err = parse_config("[extras]\nfoo = 1\n").unwrap_err();
        let Error::Config { key, .. } = err else { panic!("{err}") };
        assert_eq!(key, "extras");
    }

    #[test]
    fn non_integer_step_count_is_rejected() {
        let err = parse_config("[evolution]\nt_final = 1.0\ndt = 0.3\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "evolution.dt"));
    }

    #[test]
    fn hat_on_wrong_domain_is_rejected() {
        let text = "[grid]\na = -4.0\nb = 4.0\n[initial]\nkind = \"hat\"\n";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "initial.kind"));
        let text = "[grid]\na = -4.0\nb = 4.0\n[initial]\nkind = \"hat\"\nhalf_width = 4.0\n";
        assert!(parse_config(text).is_ok());
    }

    #[test]
    fn overrides_are_validated() {
        let cfg = parse_config_with_overrides("", &["nonlinearity.kappa=-1.9718".into()]).unwrap();
        assert_eq!(cfg.nonlinearity.kappa, -1.9718);
        let cfg = parse_config_with_overrides("", &["evolution.scheme=lie".into()]).unwrap();
        assert_eq!(cfg.evolution.scheme, Scheme::Lie);
        let cfg =
            parse_config_with_overrides("", &["evolution.snapshot_times=[0.5, 1.0]".into()]).unwrap();
        assert_eq!(cfg.evolution.snapshot_times, vec![0.5, 1.0]);
        let err = parse_config_with_overrides("", &["grid.ny=7".into()]).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "grid.ny"));
        let err = parse_config_with_overrides("", &["grid.bogus=1".into()]).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "grid.bogus"));
        assert!(parse_config_with_overrides("", &["kappa".into()]).is_err());
    }

    #[test]
    fn anisotropic_trap_config_round_trips() {
        let text = r#"
[grid]
a = -8.0
b = 8.0
c = -8.0
d = 8.0
nx = 512
ny = 512

[potential]
kind = "quadratic"
cx = 1.0
cy = 4.0
eps = 1.0

[nonlinearity]
kappa = 1.0
p = 3.0

[evolution]
t_final = 2.0
dt = 0.01
snapshot_times = [2.0]
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.grid_spec().unwrap().dx(), 1.0 / 32.0);
        assert_eq!(cfg.evolution_spec().unwrap().steps(), 200);
        let again = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_toml(), cfg.to_toml());
    }

    #[test]
    fn snapshot_rejects_bad_input() {
        let g = GridSpec::square(1.0, 4).unwrap();
        let f = Field2D::from_fn(g, |x, y| Complex64::new(x, -y));
        let bytes = encode_snapshot(&f);
        assert_eq!(bytes.len(), SNAPSHOT_HEADER_LEN + 16 * 16);
        assert_eq!(decode_snapshot(&bytes).unwrap(), f);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_snapshot(&bad), Err(Error::Format(m)) if m.contains("magic")));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(decode_snapshot(&bad), Err(Error::Format(m)) if m.contains("version")));
        assert!(matches!(decode_snapshot(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        assert!(matches!(decode_snapshot(&bytes[..20]), Err(Error::Format(_))));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(decode_snapshot(&long), Err(Error::Format(_))));
        // nx = 0 cannot describe a field
        let mut zero = bytes.clone();
        zero[8..16].copy_from_slice(&0u64.to_le_bytes());
        assert!(matches!(decode_snapshot(&zero), Err(Error::Format(_))));
    }

    #[test]
    fn snapshot_header_layout() {
        let g = GridSpec::new(-8.0, 8.0, -4.0, 4.0, 4, 6).unwrap();
        let bytes = encode_snapshot(&Field2D::zeros(g));
        assert_eq!(&bytes[..4], b"GPE2");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..16], &4u64.to_le_bytes());
        assert_eq!(&bytes[16..24], &6u64.to_le_bytes());
        assert_eq!(&bytes[24..32], &(-8.0f64).to_le_bytes());
        assert_eq!(&bytes[48..56], &4.0f64.to_le_bytes());
    }

    #[test]
    fn timeseries_format() {
        let rec = DiagnosticsRecord {
            t: 0.0,
            mass: 1.0,
            energy: 0.1 + 0.2,
            max_density: std::f64::consts::FRAC_1_PI,
            finite: true,
        };
        let text = timeseries_csv(&[rec]);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_timeseries(&text).unwrap(), vec![rec]);
        let many: Vec<_> = (0..7).map(|i| DiagnosticsRecord { t: i as f64 * 0.1, ..rec }).collect();
        assert_eq!(timeseries_csv(&many).lines().count(), 8);
        let blown = DiagnosticsRecord::non_finite(0.3);
        let back = parse_timeseries(&timeseries_csv(&[blown])).unwrap();
        assert_eq!(back[0].max_density, f64::INFINITY);
        assert!(!back[0].finite);
        assert!(write_timeseries(&[], Path::new("/nonexistent/x.csv")).is_err());
    }
}
