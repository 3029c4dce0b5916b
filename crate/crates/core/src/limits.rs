use crate::{Error, Result};

/// Resource guards for exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of words any single enumeration may produce.
    pub max_words: u64,
    /// Maximum number of nodes in a cylinder tree.
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_words: 5_000_000,
            max_nodes: 10_000_000,
        }
    }
}

impl Limits {
    pub const fn unbounded() -> Self {
        Limits {
            max_words: u64::MAX,
            max_nodes: u64::MAX,
        }
    }

    pub(crate) fn check_words(&self, needed: f64) -> Result<()> {
        check("words", needed, self.max_words)
    }

    pub(crate) fn check_nodes(&self, needed: f64) -> Result<()> {
        check("cylinder tree nodes", needed, self.max_nodes)
    }
}

fn check(what: &'static str, needed: f64, limit: u64) -> Result<()> {
    if needed > limit as f64 {
        let needed = if needed >= u64::MAX as f64 {
            u64::MAX
        } else {
            needed as u64
        };
        return Err(Error::GuardTripped {
            what,
            needed,
            limit,
        });
    }
    Ok(())
}
