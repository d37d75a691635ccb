//! `key = value` settings files. Flags given on the command line win.

use std::path::Path;
use std::time::Duration;

use ltlf_core::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub max_states: usize,
    pub max_bdd_nodes: usize,
    pub max_width: usize,
    pub max_trace_evaluations: usize,
    pub max_bruteforce_bits: usize,
    pub timeout: Option<Duration>,
    pub workers: usize,
    pub trace_len: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let l = Limits::default();
        Settings {
            max_states: l.max_states,
            max_bdd_nodes: l.max_bdd_nodes,
            max_width: l.max_width,
            max_trace_evaluations: l.max_trace_evaluations,
            max_bruteforce_bits: l.max_bruteforce_bits,
            timeout: None,
            workers: 1,
            trace_len: 4,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("line {0}: unknown key `{1}`")]
    UnknownKey(usize, String),
    #[error("line {0}: `{1}` is not a non-negative integer")]
    BadValue(usize, String),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}

impl Settings {
    /// Applies the assignments in `text` on top of `self`.
    pub fn apply(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(n))?;
            let (key, value) = (key.trim(), value.trim());
            let v: usize = value.parse().map_err(|_| ConfigError::BadValue(n, value.to_string()))?;
            match key {
                "max_states" => self.max_states = v,
                "max_bdd_nodes" => self.max_bdd_nodes = v,
                "max_width" => self.max_width = v,
                "max_trace_evaluations" => self.max_trace_evaluations = v,
                "max_bruteforce_bits" => self.max_bruteforce_bits = v,
                "timeout_ms" => self.timeout = (v > 0).then(|| Duration::from_millis(v as u64)),
                "workers" => self.workers = v.max(1),
                "trace_len" => self.trace_len = v,
                _ => return Err(ConfigError::UnknownKey(n, key.to_string())),
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        let mut s = Settings::default();
        s.apply(&text)?;
        Ok(s)
    }

    /// Budget caps without a deadline; callers attach their own interrupt.
    pub fn limits(&self) -> Limits<'static> {
        Limits {
            max_states: self.max_states,
            max_bdd_nodes: self.max_bdd_nodes,
            max_width: self.max_width,
            max_trace_evaluations: self.max_trace_evaluations,
            max_bruteforce_bits: self.max_bruteforce_bits,
            interrupt: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let mut s = Settings::default();
        s.apply("# caps\nmax_states = 10\n\ntimeout_ms=250 # short\nworkers = 0\n").unwrap();
        assert_eq!(s.max_states, 10);
        assert_eq!(s.timeout, Some(Duration::from_millis(250)));
        assert_eq!(s.workers, 1);
        assert!(matches!(s.apply("bogus = 1"), Err(ConfigError::UnknownKey(1, _))));
        assert!(matches!(s.apply("max_width = -3"), Err(ConfigError::BadValue(1, _))));
        assert!(matches!(s.apply("max_width"), Err(ConfigError::Syntax(1))));
    }
}
