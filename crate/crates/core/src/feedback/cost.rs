use crate::error::{Error, Result};

/// Per-query feedback cost, split into human effort, system overhead and
/// opportunity cost.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostModel {
    pub c_human: f64,
    pub c_system: f64,
    pub c_opportunity: f64,
}

impl CostModel {
    pub fn new(c_human: f64, c_system: f64, c_opportunity: f64) -> Result<Self> {
        let model = Self {
            c_human,
            c_system,
            c_opportunity,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.c_human, self.c_system, self.c_opportunity];
        if parts.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::invalid(
                "cost components must be finite and non-negative",
            ));
        }
        Ok(())
    }

    pub fn per_query(&self) -> f64 {
        self.c_human + self.c_system + self.c_opportunity
    }
}

pub fn total_cost(model: &CostModel, feedback_count: u64) -> f64 {
    feedback_count as f64 * model.per_query()
}
