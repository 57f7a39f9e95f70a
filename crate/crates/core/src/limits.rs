use crate::error::{Error, Result};

/// Resource caps shared by every capped operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum matrix-recursion depth, and maximum Bratteli truncation depth.
    pub depth_cap: usize,
    /// Maximum tree level for permutation-group closures (BFS over the level quotient).
    pub group_level_cap: usize,
    /// Maximum tree level for dense level matrices and orbital counts.
    pub matrix_level_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            depth_cap: 12,
            group_level_cap: 5,
            matrix_level_cap: 8,
        }
    }
}

/// Hard ceiling for group closures: level-n portraits are packed into a `u64`.
pub const MAX_GROUP_LEVEL: usize = 6;

impl Limits {
    pub(crate) fn check_depth(&self, depth: usize) -> Result<()> {
        if depth > self.depth_cap {
            return Err(Error::cap("depth", depth, self.depth_cap));
        }
        Ok(())
    }

    pub(crate) fn check_group_level(&self, level: usize) -> Result<()> {
        let cap = self.group_level_cap.min(MAX_GROUP_LEVEL);
        if level > cap {
            return Err(Error::cap("group level", level, cap));
        }
        Ok(())
    }

    pub(crate) fn check_matrix_level(&self, level: usize) -> Result<()> {
        if level > self.matrix_level_cap {
            return Err(Error::cap("matrix level", level, self.matrix_level_cap));
        }
        Ok(())
    }
}
