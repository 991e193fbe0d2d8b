//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment. Values from `--set` flags are
//! applied after the file, so later pairs win. The coupling keys are resolved
//! together at the end: `coupling_ratio` first, then `g_cw` (which sets
//! `g_ccw = ratio · g_cw`) or `g_ccw`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use chiral_cqed::steadystate::SolveOptions;
use chiral_cqed::{Direction, Mode, ModelKind, SystemParams};

use crate::error::{CliError, Result};

pub const CONFIG_ENV: &str = "CHIRAL_CQED_CONFIG";

/// Every accepted key, in the order they are echoed into output headers.
pub const KEYS: &[&str] = &[
    "gamma_cw",
    "gamma_ccw",
    "kappa_in",
    "kappa_ex",
    "coupling_ratio",
    "g_cw",
    "g_ccw",
    "g_cw_override",
    "delta_p",
    "drive_amplitude",
    "direction",
    "forward_mode",
    "fock_cutoff",
    "model",
    "seed",
    "residual_tol",
    "hermiticity_tol",
    "trace_tol",
    "positivity_tol",
    "refinement_steps",
];

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub params: SystemParams,
    pub seed: u64,
    pub solve: SolveOptions,
}

/// Splits config text into `(key, value)` pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("line {}: expected key=value, got `{line}`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses one `--set key=value` argument.
pub fn parse_set(arg: &str) -> Result<(String, String)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("--set expects key=value, got `{arg}`")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::usage(format!("`{key}`: cannot parse `{value}`: {e}")))
}

fn parse_rate(key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse(key, value)?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("`{key}` must be finite, got `{value}`")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut merged = BTreeMap::new();
        for (k, v) in pairs {
            let k = k.as_ref();
            if !KEYS.contains(&k) {
                return Err(CliError::usage(format!(
                    "unknown config key `{k}` (known: {})",
                    KEYS.join(", ")
                )));
            }
            merged.insert(k.to_string(), v.as_ref().to_string());
        }

        let mut cfg = RunConfig::default();
        let p = &mut cfg.params;
        for (k, v) in &merged {
            let v = v.as_str();
            match k.as_str() {
                "gamma_cw" => p.gamma_cw = parse_rate(k, v)?,
                "gamma_ccw" => p.gamma_ccw = parse_rate(k, v)?,
                "kappa_in" => p.kappa_in = parse_rate(k, v)?,
                "kappa_ex" => p.kappa_ex = parse_rate(k, v)?,
                "coupling_ratio" => p.coupling_ratio = parse_rate(k, v)?,
                "g_cw_override" => p.g_cw_override = Some(parse_rate(k, v)?),
                "delta_p" => p.delta_p = parse_rate(k, v)?,
                "drive_amplitude" => p.drive_amplitude = parse_rate(k, v)?,
                "direction" => p.direction = parse::<Direction>(k, v)?,
                "forward_mode" => p.forward_mode = parse::<Mode>(k, v)?,
                "fock_cutoff" => p.fock_cutoff = parse(k, v)?,
                "model" => p.model = parse::<ModelKind>(k, v)?,
                "seed" => cfg.seed = parse(k, v)?,
                "residual_tol" => cfg.solve.residual_tol = parse_rate(k, v)?,
                "hermiticity_tol" => cfg.solve.hermiticity_tol = parse_rate(k, v)?,
                "trace_tol" => cfg.solve.trace_tol = parse_rate(k, v)?,
                "positivity_tol" => cfg.solve.positivity_tol = parse_rate(k, v)?,
                "refinement_steps" => cfg.solve.refinement_steps = parse(k, v)?,
                _ => {}
            }
        }
        match (merged.get("g_cw"), merged.get("g_ccw")) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "set either g_cw or g_ccw; the other follows from coupling_ratio",
                ))
            }
            (Some(g), None) => {
                let g = parse_rate("g_cw", g)?;
                cfg.params = cfg.params.with_g_cw(g);
            }
            (None, Some(g)) => cfg.params.g_ccw = parse_rate("g_ccw", g)?,
            (None, None) => {
                let g_cw = SystemParams::default().g_cw();
                cfg.params = cfg.params.with_g_cw(g_cw);
            }
        }
        cfg.params.validate()?;
        Ok(cfg)
    }

    /// Reads `path` (if any) and applies `sets` on top.
    pub fn load(path: Option<&Path>, sets: &[String]) -> Result<Self> {
        let mut pairs = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_pairs(&text)?
            }
            None => Vec::new(),
        };
        for s in sets {
            pairs.push(parse_set(s)?);
        }
        Self::from_pairs(pairs)
    }

    /// Resolved settings as `key=value` pairs, in [`KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        let mut out = vec![
            ("gamma_cw", p.gamma_cw.to_string()),
            ("gamma_ccw", p.gamma_ccw.to_string()),
            ("kappa_in", p.kappa_in.to_string()),
            ("kappa_ex", p.kappa_ex.to_string()),
            ("coupling_ratio", p.coupling_ratio.to_string()),
            ("g_cw", p.g_cw().to_string()),
            ("g_ccw", p.g_ccw.to_string()),
        ];
        if let Some(g) = p.g_cw_override {
            out.push(("g_cw_override", g.to_string()));
        }
        out.extend([
            ("delta_p", p.delta_p.to_string()),
            ("drive_amplitude", p.drive_amplitude.to_string()),
            ("direction", p.direction.name().to_string()),
            ("forward_mode", p.forward_mode.name().to_ascii_lowercase()),
            ("fock_cutoff", p.fock_cutoff.to_string()),
            (
                "model",
                match p.model {
                    ModelKind::Full => "full",
                    ModelKind::Reduced => "reduced",
                }
                .to_string(),
            ),
            ("seed", self.seed.to_string()),
            ("residual_tol", self.solve.residual_tol.to_string()),
            ("hermiticity_tol", self.solve.hermiticity_tol.to_string()),
            ("trace_tol", self.solve.trace_tol.to_string()),
            ("positivity_tol", self.solve.positivity_tol.to_string()),
            ("refinement_steps", self.solve.refinement_steps.to_string()),
        ]);
        out
    }

    /// True when the physical rates match the reference device, so the
    /// reference anchor values apply. Numerical settings may differ.
    pub fn is_reference_system(&self) -> bool {
        let (p, d) = (&self.params, SystemParams::default());
        p.gamma_cw == d.gamma_cw
            && p.gamma_ccw == d.gamma_ccw
            && p.kappa_in == d.kappa_in
            && p.kappa_ex == d.kappa_ex
            && p.coupling_ratio == d.coupling_ratio
            && p.g_cw_override.is_none()
            && p.forward_mode == d.forward_mode
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_overrides() {
        let text = "# device\n gamma_cw = 2 \n\nkappa_ex=2.0 # tweak\nmodel = reduced\n";
        let mut pairs = parse_pairs(text).unwrap();
        pairs.push(parse_set("gamma_cw=3").unwrap());
        let cfg = RunConfig::from_pairs(pairs).unwrap();
        assert_eq!(cfg.params.gamma_cw, 3.0);
        assert_eq!(cfg.params.kappa_ex, 2.0);
        assert_eq!(cfg.params.model, ModelKind::Reduced);
        assert!(!cfg.is_reference_system());
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(RunConfig::from_pairs([("gama_cw", "1")]).is_err());
        assert!(RunConfig::from_pairs([("gamma_cw", "fast")]).is_err());
        assert!(RunConfig::from_pairs([("gamma_cw", "-1")]).is_err());
        assert!(RunConfig::from_pairs([("fock_cutoff", "0")]).is_err());
        assert!(RunConfig::from_pairs([("direction", "sideways")]).is_err());
        assert!(parse_pairs("no equals sign").is_err());
        assert!(parse_set("novalue").is_err());
    }

    #[test]
    fn coupling_keys_resolve_through_the_ratio() {
        let cfg = RunConfig::from_pairs([("g_cw", "2"), ("coupling_ratio", "3")]).unwrap();
        assert_eq!(cfg.params.g_ccw, 6.0);
        assert_eq!(cfg.params.g_cw(), 2.0);
        let cfg = RunConfig::from_pairs([("coupling_ratio", "3")]).unwrap();
        assert!((cfg.params.g_cw() - 2.25).abs() < 1e-12);
        assert!(RunConfig::from_pairs([("g_cw", "2"), ("g_ccw", "3")]).is_err());
    }

    #[test]
    fn defaults_are_the_reference_system() {
        let cfg = RunConfig::from_pairs(Vec::<(String, String)>::new()).unwrap();
        assert!(cfg.is_reference_system());
        assert!((cfg.params.g_ccw - SystemParams::default().g_ccw).abs() < 1e-12);
        let keys: Vec<_> = cfg.to_pairs().into_iter().map(|(k, _)| k).collect();
        assert!(keys.iter().all(|k| KEYS.contains(k)));
    }
}
