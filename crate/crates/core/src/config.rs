//! Size caps for the exact (exponential-time) solvers.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// vertices for exact independence / clique numbers
    pub alpha_max_n: usize,
    /// vertices for exact chromatic numbers
    pub chromatic_max_n: usize,
    /// vertices for maximal independent set enumeration
    pub fractional_chromatic_max_n: usize,
    /// vertices for the 2^n-subset fractional invariant programs
    pub fstar_max_n: usize,
    /// free (off-diagonal adjacent) entries for exhaustive minrank search
    pub minrank_max_free: usize,
    /// ground set size for sign-pattern enumeration
    pub hemisphere_max_d: usize,
    /// resampling attempts for the randomized cover
    pub cover_retries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            alpha_max_n: 64,
            chromatic_max_n: 64,
            fractional_chromatic_max_n: 40,
            fstar_max_n: 16,
            minrank_max_free: 26,
            hemisphere_max_d: 10,
            cover_retries: 1000,
        }
    }
}

impl Limits {
    pub fn validate(&self) -> crate::Result<()> {
        let caps = [
            self.alpha_max_n,
            self.chromatic_max_n,
            self.fractional_chromatic_max_n,
            self.fstar_max_n,
            self.minrank_max_free,
            self.hemisphere_max_d,
            self.cover_retries,
        ];
        if caps.contains(&0) {
            return Err(crate::Error::InvalidParameters("caps must be positive".into()));
        }
        Ok(())
    }
}
