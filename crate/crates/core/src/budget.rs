//! Enumeration limits shared by the exhaustive verifiers and exact solvers.

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "ALPHAPACK_BUDGET";
pub const DEFAULT_ENUMERATION: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    /// Maximum number of cases an exhaustive check may enumerate.
    pub enumeration: u64,
    /// Maximum number of members a constructed family may hold.
    pub members: usize,
    /// Largest `k` accepted by the exact and randomized packing solvers.
    pub exact_k: usize,
    /// Largest universe accepted by the exact and randomized packing solvers.
    pub exact_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: DEFAULT_ENUMERATION,
            members: 2_000_000,
            exact_k: 7,
            exact_elements: 40,
        }
    }
}

impl Budget {
    /// Default limits, with the enumeration budget taken from
    /// `ALPHAPACK_BUDGET` when it is set to a positive number.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(v) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 1.0)
        {
            b.enumeration = v as u64;
        }
        b
    }

    pub fn with_enumeration(mut self, enumeration: u64) -> Self {
        self.enumeration = enumeration;
        self
    }

    pub fn allows(&self, cost: u128) -> bool {
        cost <= self.enumeration as u128
    }

    pub fn check(&self, what: &'static str, cost: u128) -> Result<()> {
        if self.allows(cost) {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                what,
                cost,
                budget: self.enumeration,
            })
        }
    }

    pub fn check_members(&self, what: &'static str, count: u128) -> Result<()> {
        if count <= self.members as u128 {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                what,
                cost: count,
                budget: self.members as u64,
            })
        }
    }

    pub fn check_exact(&self, what: &'static str, k: usize, n: usize) -> Result<()> {
        if k > self.exact_k {
            return Err(Error::BudgetExceeded {
                what,
                cost: k as u128,
                budget: self.exact_k as u64,
            });
        }
        if n > self.exact_elements {
            return Err(Error::BudgetExceeded {
                what,
                cost: n as u128,
                budget: self.exact_elements as u64,
            });
        }
        Ok(())
    }
}
