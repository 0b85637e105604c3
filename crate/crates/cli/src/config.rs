use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use wickrep::multiindex::{parse_tail, QMatrix};
use wickrep::{TailSpec, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    FockCheck,
    TailCheck,
    DualCheck,
    NormalOrder,
    #[default]
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomQ {
    pub max_modulus: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    #[serde(rename = "ref")]
    pub reference: String,
    #[serde(rename = "L")]
    pub max_head: usize,
    #[serde(rename = "M")]
    pub max_offset: usize,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            reference: ";2".into(),
            max_head: 4,
            max_offset: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Identities built without any inversion.
    pub exact: f64,
    /// Identities through the Gram inverse.
    pub metric: f64,
    /// Identities through the dual middle factors.
    pub inverted: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-12,
            metric: 1e-10,
            inverted: 1e-8,
        }
    }
}

/// A run description, read from JSON.
///
/// Exactly one of `q_entries` (a `d x d` table of `[re, im]` pairs with
/// `null` on the diagonal) and `random_q` must be given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_entries: Option<Vec<Vec<Option<[f64; 2]>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_q: Option<RandomQ>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_fock_depth")]
    pub fock_depth: usize,
    #[serde(default)]
    pub tail: TailConfig,
    /// Longest word in the normal-order sweep.
    #[serde(default = "default_sweep_length")]
    pub sweep_length: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub parallel: bool,
}

fn default_fock_depth() -> usize {
    4
}

fn default_sweep_length() -> usize {
    4
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl RunConfig {
    /// Uniform real `q` on every pair; convenient for quick runs.
    pub fn uniform(d: usize, q: [f64; 2]) -> Self {
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Equal => None,
                        std::cmp::Ordering::Less => Some(q),
                        std::cmp::Ordering::Greater => Some([q[0], 0.0 - q[1]]),
                    })
                    .collect()
            })
            .collect();
        RunConfig {
            d,
            q_entries: Some(entries),
            random_q: None,
            mode: Mode::All,
            fock_depth: default_fock_depth(),
            tail: TailConfig::default(),
            sweep_length: default_sweep_length(),
            tolerances: Tolerances::default(),
            output: None,
            parallel: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.d < 2 {
            return err(format!("d must be at least 2, got {}", self.d));
        }
        self.q_matrix()?;
        self.tail_spec()?;
        if self.tail.max_head == 0 {
            return err("tail.L must be at least 1");
        }
        let t = &self.tolerances;
        for (name, v) in [("exact", t.exact), ("metric", t.metric), ("inverted", t.inverted)] {
            if !(v > 0.0 && v.is_finite()) {
                return err(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    pub fn tail_spec(&self) -> Result<TailSpec, ConfigError> {
        parse_tail(&self.tail.reference, Some(self.d)).map_err(|e| ConfigError(format!("tail.ref {:?}: {e}", self.tail.reference)))
    }

    /// The deformation described by the config; random draws are a pure
    /// function of the seed.
    pub fn q_matrix(&self) -> Result<QMatrix<f64>, ConfigError> {
        let d = self.d;
        match (&self.q_entries, &self.random_q) {
            (Some(rows), None) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return err(format!("q_entries must be a {d} x {d} table"));
                }
                let mut flat = Vec::with_capacity(d * d);
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        flat.push(match (e, i == j) {
                            (None, true) => C64::new(0.0, 0.0),
                            (Some(_), true) => return err(format!("q_entries: q_{0}{0} is undefined and must be null", i + 1)),
                            (Some([re, im]), false) => C64::new(*re, *im),
                            (None, false) => return err(format!("q_entries: missing q_{}{}", i + 1, j + 1)),
                        });
                    }
                }
                QMatrix::new(d, flat).map_err(|e| ConfigError(format!("q_entries: {e}")))
            }
            (None, Some(r)) => {
                if !(0.0..1.0).contains(&r.max_modulus) {
                    return err(format!("random_q.max_modulus must lie in [0, 1), got {}", r.max_modulus));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
                QMatrix::from_upper(d, |_, _| {
                    let m = rng.random_range(0.0..=r.max_modulus);
                    let t = rng.random_range(0.0..std::f64::consts::TAU);
                    C64::from_polar(m, t)
                })
                .map_err(|e| ConfigError(format!("random_q: {e}")))
            }
            (Some(_), Some(_)) => err("give either q_entries or random_q, not both"),
            (None, None) => err("one of q_entries or random_q is required"),
        }
    }
}
