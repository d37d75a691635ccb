use crate::error::{Error, Result};

/// Resource caps shared by the explicit and symbolic algorithms.
///
/// `interrupt` is polled at loop heads; returning `true` aborts the current
/// algorithm with [`Error::Interrupted`].
#[derive(Clone, Copy)]
pub struct Limits<'a> {
    pub max_states: usize,
    pub max_bdd_nodes: usize,
    pub max_width: usize,
    pub max_trace_evaluations: usize,
    pub max_bruteforce_bits: usize,
    pub interrupt: Option<&'a (dyn Fn() -> bool + Sync)>,
}

impl Default for Limits<'_> {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
            max_bdd_nodes: 1 << 20,
            max_width: 4096,
            max_trace_evaluations: 2_000_000,
            max_bruteforce_bits: 20,
            interrupt: None,
        }
    }
}

impl core::fmt::Debug for Limits<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Limits")
            .field("max_states", &self.max_states)
            .field("max_bdd_nodes", &self.max_bdd_nodes)
            .field("max_width", &self.max_width)
            .field("max_trace_evaluations", &self.max_trace_evaluations)
            .field("max_bruteforce_bits", &self.max_bruteforce_bits)
            .field("interrupt", &self.interrupt.is_some())
            .finish()
    }
}

impl<'a> Limits<'a> {
    pub fn with_interrupt(mut self, interrupt: &'a (dyn Fn() -> bool + Sync)) -> Self {
        self.interrupt = Some(interrupt);
        self
    }

    #[inline]
    pub fn check(&self) -> Result<()> {
        match self.interrupt {
            Some(stop) if stop() => Err(Error::Interrupted),
            _ => Ok(()),
        }
    }

    #[inline]
    pub(crate) fn check_states(&self, count: usize) -> Result<()> {
        if count > self.max_states {
            return Err(Error::BudgetExceeded { what: "state", limit: self.max_states });
        }
        Ok(())
    }
}
