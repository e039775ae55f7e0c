//! Run parameters and their string form.

use core::fmt;
use core::str::FromStr;

use crate::error::ConfigError;
use crate::parallel::DEFAULT_CHUNK;

/// How an isolated vertex picks its target during refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineStrategy {
    /// Highest delta-modularity within the bound.
    #[default]
    Greedy,
    /// Random positive-gain target, chosen with probability proportional to
    /// its delta-modularity.
    Random,
}

/// Initial community labels given to super-vertices for the next pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelStrategy {
    /// Super-vertices start grouped by the local-moving communities.
    #[default]
    MoveBased,
    /// Each super-vertex starts in its own community.
    RefineBased,
}

impl RefineStrategy {
    pub const ALL: [RefineStrategy; 2] = [RefineStrategy::Greedy, RefineStrategy::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            RefineStrategy::Greedy => "greedy",
            RefineStrategy::Random => "random",
        }
    }
}

impl LabelStrategy {
    pub const ALL: [LabelStrategy; 2] = [LabelStrategy::MoveBased, LabelStrategy::RefineBased];

    pub fn as_str(self) -> &'static str {
        match self {
            LabelStrategy::MoveBased => "move",
            LabelStrategy::RefineBased => "refine",
        }
    }
}

impl fmt::Display for RefineStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for LabelStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RefineStrategy {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(RefineStrategy::Greedy),
            "random" => Ok(RefineStrategy::Random),
            _ => Err(ConfigError::InvalidValue { key: "refine" }),
        }
    }
}

impl FromStr for LabelStrategy {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "move" | "move-based" => Ok(LabelStrategy::MoveBased),
            "refine" | "refine-based" => Ok(LabelStrategy::RefineBased),
            _ => Err(ConfigError::InvalidValue { key: "label" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeidenConfig {
    /// Initial per-iteration convergence threshold on the summed
    /// delta-modularity of a local-moving iteration.
    pub tolerance: f64,
    /// The threshold is divided by this after every pass.
    pub tolerance_drop: f64,
    /// Passes stop once `communities_after / communities_before` exceeds
    /// this ratio.
    pub aggregation_tolerance: f64,
    pub max_iterations: usize,
    pub max_passes: usize,
    pub refine_strategy: RefineStrategy,
    pub label_strategy: LabelStrategy,
    pub rng_seed: u32,
    /// Worker count requested by the caller. The core uses whatever runtime
    /// it is handed; front ends build that runtime from this value.
    pub threads: usize,
    /// Skip vertices whose neighbourhood did not change since their last scan.
    pub prune: bool,
    /// Vertices (or communities) claimed per scheduling step.
    pub chunk_size: usize,
}

impl Default for LeidenConfig {
    fn default() -> Self {
        LeidenConfig {
            tolerance: 0.01,
            tolerance_drop: 10.0,
            aggregation_tolerance: 0.8,
            max_iterations: 20,
            max_passes: 10,
            refine_strategy: RefineStrategy::Greedy,
            label_strategy: LabelStrategy::MoveBased,
            rng_seed: 1,
            threads: 1,
            prune: true,
            chunk_size: DEFAULT_CHUNK,
        }
    }
}

fn parse<T: FromStr>(key: &'static str, value: &str) -> Result<T, ConfigError> {
    value
        .trim()
        .parse()
        .map_err(|_| ConfigError::InvalidValue { key })
}

impl LeidenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key, reason| Err(ConfigError::OutOfRange { key, reason });
        if !(self.tolerance > 0.0) {
            return fail("tolerance", "must be > 0");
        }
        if !(self.tolerance_drop >= 1.0) {
            return fail("tolerance_drop", "must be >= 1");
        }
        if !(self.aggregation_tolerance > 0.0 && self.aggregation_tolerance <= 1.0) {
            return fail("aggregation_tolerance", "must be in (0, 1]");
        }
        if self.max_iterations == 0 {
            return fail("max_iterations", "must be >= 1");
        }
        if self.max_passes == 0 {
            return fail("max_passes", "must be >= 1");
        }
        if self.rng_seed == 0 {
            return fail("rng_seed", "must be nonzero");
        }
        if self.threads == 0 {
            return fail("threads", "must be >= 1");
        }
        if self.chunk_size == 0 {
            return fail("chunk_size", "must be >= 1");
        }
        Ok(())
    }

    /// Sets one field from its string form. Keys use the field names; `-`
    /// is accepted in place of `_`, and `refine`, `label`, `seed` are
    /// accepted as short forms.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let mut buf = [0u8; 32];
        let key = normalize_key(key, &mut buf).ok_or(ConfigError::UnknownKey)?;
        match key {
            "tolerance" => self.tolerance = parse("tolerance", value)?,
            "tolerance_drop" => self.tolerance_drop = parse("tolerance_drop", value)?,
            "aggregation_tolerance" => {
                self.aggregation_tolerance = parse("aggregation_tolerance", value)?
            }
            "max_iterations" => self.max_iterations = parse("max_iterations", value)?,
            "max_passes" => self.max_passes = parse("max_passes", value)?,
            "refine_strategy" | "refine" => self.refine_strategy = value.trim().parse()?,
            "label_strategy" | "label" => self.label_strategy = value.trim().parse()?,
            "rng_seed" | "seed" => self.rng_seed = parse("rng_seed", value)?,
            "threads" => self.threads = parse("threads", value)?,
            "prune" => self.prune = parse("prune", value)?,
            "chunk_size" => self.chunk_size = parse("chunk_size", value)?,
            _ => return Err(ConfigError::UnknownKey),
        }
        Ok(())
    }

    /// Default config overridden by `(key, value)` pairs, then validated.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut cfg = LeidenConfig::default();
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn normalize_key<'b>(key: &str, buf: &'b mut [u8; 32]) -> Option<&'b str> {
    let key = key.trim().as_bytes();
    if key.len() > buf.len() {
        return None;
    }
    for (dst, &b) in buf.iter_mut().zip(key) {
        *dst = if b == b'-' {
            b'_'
        } else {
            b.to_ascii_lowercase()
        };
    }
    core::str::from_utf8(&buf[..key.len()]).ok()
}
