//! Flat key=value configuration files. Flags always win over file values.
//!
//! ```text
//! # transmission under study
//! p = 50
//! eta = 0.37
//! a4 = 9
//! mechanism = noncoaxial3
//! ```

/// Values a config file may provide. All optional; unknown keys are errors.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub p: Option<f64>,
    pub eta: Option<f64>,
    pub a4: Option<f64>,
    pub b: Option<f64>,
    pub l: Option<f64>,
    /// Torque in N·m, as on the command line.
    pub tau: Option<f64>,
    pub e_modulus: Option<f64>,
    pub mechanism: Option<String>,
    pub samples: Option<usize>,
    pub format: Option<String>,
}

fn num<T: std::str::FromStr>(key: &str, value: &str, lineno: usize) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("config line {}: bad number for `{key}`: {e}", lineno + 1))
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                format!(
                    "config line {}: expected key=value, got `{raw}`",
                    lineno + 1
                )
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "p" => cfg.p = Some(num(key, value, lineno)?),
                "eta" => cfg.eta = Some(num(key, value, lineno)?),
                "a4" => cfg.a4 = Some(num(key, value, lineno)?),
                "b" => cfg.b = Some(num(key, value, lineno)?),
                "L" => cfg.l = Some(num(key, value, lineno)?),
                "tau" => cfg.tau = Some(num(key, value, lineno)?),
                "E" => cfg.e_modulus = Some(num(key, value, lineno)?),
                "mechanism" => cfg.mechanism = Some(value.to_string()),
                "samples" => cfg.samples = Some(num(key, value, lineno)?),
                "format" => cfg.format = Some(value.to_string()),
                other => {
                    return Err(format!("config line {}: unknown key `{other}`", lineno + 1));
                }
            }
        }
        Ok(cfg)
    }
}
