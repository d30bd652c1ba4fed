//! Effective settings: command-line flags, then the config file, then
//! built-in defaults. `REPROKIT_DEPTH` replaces the built-in depth.

use std::num::NonZeroUsize;
use std::path::Path;

use reprokit::ordering::DEFAULT_RBO_P;
use reprokit::{MeasureSpec, ParseOptions, DEFAULT_DEPTH};
use serde::Deserialize;

use crate::args::CommonArgs;
use crate::error::CliError;

pub const DEPTH_ENV: &str = "REPROKIT_DEPTH";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub measures: Option<Vec<String>>,
    pub cutoffs: Option<Vec<usize>>,
    pub rbo_p: Option<f64>,
    pub welch: Option<bool>,
    pub depth: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub measures: Vec<MeasureSpec>,
    /// `None` selects the default grid clipped to run depth.
    pub cutoffs: Option<Vec<usize>>,
    pub rbo_p: f64,
    pub welch: bool,
    pub depth: usize,
    pub lenient: bool,
}

impl Settings {
    pub fn resolve(
        common: &CommonArgs,
        cutoffs: &[usize],
        rbo_p: Option<f64>,
        welch: bool,
    ) -> Result<Settings, CliError> {
        let config = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let env_depth = match std::env::var(DEPTH_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Input(format!("{DEPTH_ENV}={v:?} is not a positive integer")))?,
            ),
            Err(_) => None,
        };

        let measure_names = if !common.measures.is_empty() {
            Some(common.measures.clone())
        } else {
            config.measures
        };
        let measures = match measure_names {
            Some(names) => names
                .iter()
                .map(|m| m.parse::<MeasureSpec>())
                .collect::<Result<Vec<_>, _>>()?,
            None => MeasureSpec::defaults(),
        };
        if measures.is_empty() {
            return Err(CliError::Input("no measures requested".into()));
        }

        let cutoffs = if !cutoffs.is_empty() {
            Some(cutoffs.to_vec())
        } else {
            config.cutoffs
        };
        if let Some(c) = &cutoffs {
            if c.is_empty() || c.contains(&0) {
                return Err(CliError::Input("cutoffs must be positive integers".into()));
            }
        }

        let rbo_p = rbo_p.or(config.rbo_p).unwrap_or(DEFAULT_RBO_P);
        if !(rbo_p > 0.0 && rbo_p < 1.0) {
            return Err(CliError::Input(format!("rbo persistence must lie in (0, 1), got {rbo_p}")));
        }

        let depth = common
            .depth
            .or(config.depth)
            .or(env_depth)
            .unwrap_or(DEFAULT_DEPTH);
        if depth == 0 {
            return Err(CliError::Input("depth must be at least 1".into()));
        }

        Ok(Settings {
            measures,
            cutoffs,
            rbo_p,
            welch: welch || config.welch.unwrap_or(false),
            depth,
            lenient: common.lenient,
        })
    }

    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            lenient: self.lenient,
            depth: NonZeroUsize::new(self.depth),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Format;

    fn common() -> CommonArgs {
        CommonArgs {
            measures: vec![],
            depth: None,
            config: None,
            lenient: false,
            format: Format::Text,
        }
    }

    #[test]
    fn defaults() {
        let s = Settings::resolve(&common(), &[], None, false).unwrap();
        let names: Vec<String> = s.measures.iter().map(|m| m.name()).collect();
        assert_eq!(names, ["P_10", "map", "ndcg_cut_10"]);
        assert_eq!(s.rbo_p, 0.8);
        assert_eq!(s.cutoffs, None);
    }

    #[test]
    fn flags_beat_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(
            &path,
            "measures = [\"ap\"]\ncutoffs = [3]\nrbo_p = 0.9\nwelch = true\ndepth = 50\n",
        )
        .unwrap();
        let mut c = common();
        c.config = Some(path.clone());
        let s = Settings::resolve(&c, &[], None, false).unwrap();
        assert_eq!(s.measures, vec![MeasureSpec::average_precision()]);
        assert_eq!((s.cutoffs.clone(), s.rbo_p, s.welch, s.depth), (Some(vec![3]), 0.9, true, 50));

        c.measures = vec!["p@5".into()];
        c.depth = Some(7);
        let s = Settings::resolve(&c, &[4, 8], Some(0.5), false).unwrap();
        assert_eq!(s.measures[0].name(), "P_5");
        assert_eq!((s.cutoffs, s.rbo_p, s.depth), (Some(vec![4, 8]), 0.5, 7));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Settings::resolve(&common(), &[0], None, false).is_err());
        assert!(Settings::resolve(&common(), &[], Some(1.0), false).is_err());
        let mut c = common();
        c.measures = vec!["bpref".into()];
        assert!(Settings::resolve(&c, &[], None, false).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "unknown = 1\n").unwrap();
        c.measures.clear();
        c.config = Some(path);
        assert!(Settings::resolve(&c, &[], None, false).is_err());
    }
}
