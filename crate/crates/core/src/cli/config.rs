//! Run configuration: flat `key=value` files merged with command-line flags.

use std::path::PathBuf;

use crate::cavity::{CavityParams, TruncationChoice, DEFAULT_TRUNCATION_TOL};
use crate::error::{Error, Result};
use crate::freespace::FreeSpaceParams;
use crate::output::Format;

pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Cavity,
    Freespace,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Cavity => "cavity",
            Model::Freespace => "freespace",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cavity" => Ok(Model::Cavity),
            "freespace" => Ok(Model::Freespace),
            other => Err(format!("expected `cavity` or `freespace`, got `{other}`")),
        }
    }
}

/// Every setting a run can take. Unset fields fall back to defaults when the
/// model parameters are resolved; required ones raise a validation error.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub delta_c: Option<f64>,
    pub omega: Option<f64>,
    pub chi: Option<f64>,
    pub phi: Option<f64>,
    pub rho: Option<f64>,
    pub omega0_over_omega: Option<f64>,
    pub gamma_fs: Option<f64>,
    pub n0: Option<usize>,
    pub m0: Option<usize>,
    pub drop_four_photon: Option<bool>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub nbar: Option<usize>,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::invalid("config", format!("cannot parse value `{value}` for key `{key}`"))
    })
}

impl RunConfig {
    /// Parses `key=value` lines; `#` starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid("config", format!("line {}: expected key=value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => {
                self.model = Some(value.parse().map_err(|e: String| Error::invalid("model", e))?)
            }
            "g" => self.g = Some(parse_value(key, value)?),
            "kappa" => self.kappa = Some(parse_value(key, value)?),
            "delta_c" => self.delta_c = Some(parse_value(key, value)?),
            "omega" => self.omega = Some(parse_value(key, value)?),
            "chi" => self.chi = Some(parse_value(key, value)?),
            "phi" => self.phi = Some(parse_value(key, value)?),
            "rho" => self.rho = Some(parse_value(key, value)?),
            "omega0_over_omega" => self.omega0_over_omega = Some(parse_value(key, value)?),
            "gamma_fs" => self.gamma_fs = Some(parse_value(key, value)?),
            "n0" => self.n0 = Some(parse_value(key, value)?),
            "m0" => self.m0 = Some(parse_value(key, value)?),
            "drop_four_photon" => self.drop_four_photon = Some(parse_value(key, value)?),
            "t_max" => self.t_max = Some(parse_value(key, value)?),
            "dt" => self.dt = Some(parse_value(key, value)?),
            "nbar" => self.nbar = Some(parse_value(key, value)?),
            "tol" => self.tol = Some(parse_value(key, value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(value.parse().map_err(|e: String| Error::invalid("format", e))?)
            }
            other => {
                return Err(Error::invalid("config", format!("unknown key `{other}`")));
            }
        }
        Ok(())
    }

    /// Serializes every set field, one `key=value` per line. Floats use the
    /// shortest representation that parses back to the same value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                out.push_str(key);
                out.push('=');
                out.push_str(&v);
                out.push('\n');
            }
        };
        put("model", self.model.map(|m| m.name().to_string()));
        put("g", self.g.map(|v| v.to_string()));
        put("kappa", self.kappa.map(|v| v.to_string()));
        put("delta_c", self.delta_c.map(|v| v.to_string()));
        put("omega", self.omega.map(|v| v.to_string()));
        put("chi", self.chi.map(|v| v.to_string()));
        put("phi", self.phi.map(|v| v.to_string()));
        put("rho", self.rho.map(|v| v.to_string()));
        put("omega0_over_omega", self.omega0_over_omega.map(|v| v.to_string()));
        put("gamma_fs", self.gamma_fs.map(|v| v.to_string()));
        put("n0", self.n0.map(|v| v.to_string()));
        put("m0", self.m0.map(|v| v.to_string()));
        put("drop_four_photon", self.drop_four_photon.map(|v| v.to_string()));
        put("t_max", self.t_max.map(|v| v.to_string()));
        put("dt", self.dt.map(|v| v.to_string()));
        put("nbar", self.nbar.map(|v| v.to_string()));
        put("tol", self.tol.map(|v| v.to_string()));
        put("output", self.output.as_ref().map(|p| p.display().to_string()));
        put("format", self.format.map(|f| f.extension().to_string()));
        out
    }

    /// Field-wise merge; values set in `overrides` win.
    pub fn merged(self, overrides: RunConfig) -> RunConfig {
        RunConfig {
            model: overrides.model.or(self.model),
            g: overrides.g.or(self.g),
            kappa: overrides.kappa.or(self.kappa),
            delta_c: overrides.delta_c.or(self.delta_c),
            omega: overrides.omega.or(self.omega),
            chi: overrides.chi.or(self.chi),
            phi: overrides.phi.or(self.phi),
            rho: overrides.rho.or(self.rho),
            omega0_over_omega: overrides.omega0_over_omega.or(self.omega0_over_omega),
            gamma_fs: overrides.gamma_fs.or(self.gamma_fs),
            n0: overrides.n0.or(self.n0),
            m0: overrides.m0.or(self.m0),
            drop_four_photon: overrides.drop_four_photon.or(self.drop_four_photon),
            t_max: overrides.t_max.or(self.t_max),
            dt: overrides.dt.or(self.dt),
            nbar: overrides.nbar.or(self.nbar),
            tol: overrides.tol.or(self.tol),
            output: overrides.output.or(self.output),
            format: overrides.format.or(self.format),
        }
    }

    pub fn require_model(&self) -> Result<Model> {
        self.model
            .ok_or_else(|| Error::invalid("model", "missing required parameter"))
    }

    pub fn cavity_params(&self) -> Result<CavityParams> {
        let p = CavityParams {
            g: required("g", self.g)?,
            kappa: self.kappa.unwrap_or(1.0),
            delta_c: self.delta_c.unwrap_or(0.0),
            omega: required("omega", self.omega)?,
            chi: required("chi", self.chi)?,
            phi: self.phi.unwrap_or(0.0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn freespace_params(&self) -> Result<FreeSpaceParams> {
        let p = FreeSpaceParams {
            rho: required("rho", self.rho)?,
            omega0_over_omega: required("omega0_over_omega", self.omega0_over_omega)?,
            gamma_fs: self.gamma_fs.unwrap_or(1.0),
            omega: self.omega.unwrap_or(1.0),
            n0: required("n0", self.n0)?,
            m0: self.m0.unwrap_or(0),
            phi: self.phi.unwrap_or(0.0),
            drop_four_photon: self.drop_four_photon.unwrap_or(false),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn truncation_choice(&self) -> Result<TruncationChoice> {
        match (self.nbar, self.tol) {
            (Some(n), _) => Ok(TruncationChoice::Fixed(n)),
            (None, tol) => {
                let tol = tol.unwrap_or(DEFAULT_TRUNCATION_TOL);
                if !(tol > 0.0) || !tol.is_finite() {
                    return Err(Error::invalid("tol", "must be positive and finite"));
                }
                Ok(TruncationChoice::Auto { tol })
            }
        }
    }

    pub fn t_max(&self) -> Result<f64> {
        required("t_max", self.t_max)
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(DEFAULT_DT)
    }
}

fn required<T>(field: &'static str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| Error::invalid(field, "missing required parameter"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let cfg = RunConfig::parse(
            "# reference run\nmodel = cavity\n\ng=0.3 # coupling\nomega=0.12\nchi=50\nt_max=40\n",
        )
        .unwrap();
        assert_eq!(cfg.model, Some(Model::Cavity));
        assert_eq!(cfg.g, Some(0.3));
        assert_eq!(cfg.chi, Some(50.0));
        let p = cfg.cavity_params().unwrap();
        assert_eq!(p, CavityParams::reference(50.0, 0.0));
    }

    #[test]
    fn dump_round_trips() {
        let cfg = RunConfig {
            model: Some(Model::Freespace),
            rho: Some(0.2),
            omega0_over_omega: Some(2e4),
            n0: Some(1),
            phi: Some(std::f64::consts::FRAC_PI_2),
            drop_four_photon: Some(true),
            dt: Some(0.005),
            output: Some("out/fig5.csv".into()),
            format: Some(Format::Json),
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn flags_win_over_file() {
        let file = RunConfig::parse("chi=10\ng=0.3").unwrap();
        let flags = RunConfig {
            chi: Some(50.0),
            ..RunConfig::default()
        };
        let merged = file.merged(flags);
        assert_eq!(merged.chi, Some(50.0));
        assert_eq!(merged.g, Some(0.3));
    }

    #[test]
    fn names_missing_and_bad_fields() {
        let cfg = RunConfig::parse("g=0.3\nomega=0.12").unwrap();
        match cfg.cavity_params() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "chi"),
            other => panic!("unexpected {other:?}"),
        }
        let err = RunConfig::parse("speed=3").unwrap_err();
        assert!(err.to_string().contains("speed"));
        let err = RunConfig::parse("chi=abc").unwrap_err();
        assert!(err.to_string().contains("chi"));
        assert!(RunConfig::parse("chi").is_err());
    }
}
