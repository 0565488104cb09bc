//! Cost guards for every command, in one place.

use crate::CliError;

pub const MAX_N_ENV: &str = "EXCESS_ATLAS_MAX_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Modular edge-insertion route.
    pub recurrence_n: usize,
    /// Big-integer anchored recurrence.
    pub anchored_n: usize,
    /// Brute-force graph scan.
    pub oracle_n: usize,
    /// Generating-function pipeline: vertex order and excess.
    pub gf_n: usize,
    pub gf_k: usize,
    /// Patchwork enumeration excess.
    pub patchwork_excess: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            recurrence_n: 400,
            anchored_n: 120,
            oracle_n: 8,
            gf_n: 96,
            gf_k: 16,
            patchwork_excess: 3,
        }
    }
}

impl Caps {
    /// Defaults, with every vertex cap except the oracle's replaced by
    /// `EXCESS_ATLAS_MAX_N` when set.
    pub fn from_env() -> Result<Self, CliError> {
        let mut caps = Self::default();
        if let Ok(raw) = std::env::var(MAX_N_ENV) {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{MAX_N_ENV}={raw:?} is not a vertex count")))?;
            caps.recurrence_n = n;
            caps.anchored_n = n;
            caps.gf_n = n;
        }
        Ok(caps)
    }

    pub fn check(what: &str, value: usize, cap: usize) -> Result<(), CliError> {
        if value > cap {
            return Err(CliError::Usage(format!("{what} = {value} exceeds the cap {cap}")));
        }
        Ok(())
    }
}
