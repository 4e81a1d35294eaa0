use crate::cover_data::DEFAULT_MAX_GROUP_SIZE;

use super::CommonArgs;

/// Resource caps. Precedence: command-line flag, then the environment
/// variable, then these defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_group_size: u64,
    pub max_count: u64,
    pub max_points: u64,
    pub max_poly_terms: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_size: DEFAULT_MAX_GROUP_SIZE,
            max_count: 1_000_000,
            max_points: 1_000_000,
            max_poly_terms: 10_000_000,
        }
    }
}

impl Caps {
    /// Defaults overridden by `key=value` pairs separated by commas.
    pub fn from_env(value: Option<&str>) -> Result<Caps, String> {
        let mut caps = Caps::default();
        let Some(value) = value else {
            return Ok(caps);
        };
        for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| format!("cap override '{item}' is not key=value"))?;
            let v: u64 = raw
                .trim()
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| format!("cap '{key}' needs a positive integer, got '{raw}'"))?;
            match key.trim() {
                "max_group_size" => caps.max_group_size = v,
                "max_count" => caps.max_count = v,
                "max_points" => caps.max_points = v,
                "max_poly_terms" => caps.max_poly_terms = v,
                other => return Err(format!("unknown cap '{other}'")),
            }
        }
        Ok(caps)
    }

    pub fn with_flags(mut self, flags: &CommonArgs) -> Caps {
        if let Some(v) = flags.max_group_size {
            self.max_group_size = v;
        }
        if let Some(v) = flags.max_count {
            self.max_count = v;
        }
        if let Some(v) = flags.max_points {
            self.max_points = v;
        }
        if let Some(v) = flags.max_poly_terms {
            self.max_poly_terms = v;
        }
        self
    }
}
