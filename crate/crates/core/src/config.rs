use serde::{Deserialize, Serialize};

use crate::combinat::DEFAULT_SIZE_CAP;
use crate::modlinalg::PrimeField;

/// Which condition matrix decides a secant dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Multigraded 2-fat point conditions on the product of projective spaces.
    Direct,
    /// Restricted monomial basis in a single projective space.
    Reduced,
    /// Both, on the same points, with the ranks required to agree.
    #[default]
    Both,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(Method::Direct),
            "reduced" => Ok(Method::Reduced),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Reduced => "reduced",
            Method::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComputeConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: u32,
    pub method: Method,
    /// Maximum number of monomials (matrix columns).
    pub size_cap: usize,
}

impl ComputeConfig {
    pub fn with_seed(seed: u64) -> Self {
        ComputeConfig {
            seed,
            ..Default::default()
        }
    }

    /// Same settings under a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        ComputeConfig { seed, ..*self }
    }
}

impl Default for ComputeConfig {
    fn default() -> Self {
        ComputeConfig {
            field: PrimeField::default(),
            seed: 0,
            trials: 2,
            method: Method::Both,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}
