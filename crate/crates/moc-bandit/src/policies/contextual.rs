//! Turns any context-blind policy into a contextual one: the context set is
//! partitioned exactly like the two-objective learner's, and each cell runs
//! an independent inner instance that sees only the rounds routed to it,
//! numbered by its own local counter.

use std::collections::HashMap;

use crate::core::{locate, Context, PartitionSpec, RewardVector};
use crate::error::Result;
use crate::policies::{cell_seed, Policy};

pub struct Contextual<P: Policy> {
    spec: PartitionSpec,
    factory: Box<dyn Fn(u64) -> P + Send + Sync>,
    seed: u64,
    /// cell -> (inner instance, rounds routed there so far)
    cells: HashMap<usize, (P, u64)>,
}

impl<P: Policy> Contextual<P> {
    /// Inner instances are created lazily, seeded by (policy seed, cell), so
    /// a cell's behavior does not depend on when it is first visited.
    pub fn new(
        spec: PartitionSpec,
        factory: impl Fn(u64) -> P + Send + Sync + 'static,
        seed: u64,
    ) -> Self {
        Self {
            spec,
            factory: Box::new(factory),
            seed,
            cells: HashMap::new(),
        }
    }

    pub fn visited_cells(&self) -> usize {
        self.cells.len()
    }

    fn cell_entry(&mut self, cell: usize) -> &mut (P, u64) {
        let factory = &self.factory;
        let seed = self.seed;
        self.cells
            .entry(cell)
            .or_insert_with(|| ((factory)(cell_seed(seed, cell)), 0))
    }
}

impl<P: Policy> Policy for Contextual<P> {
    fn select(&mut self, x: &Context, _t: u64) -> usize {
        let cell = locate(x, &self.spec).expect("context does not match the wrapper's partition");
        let entry = self.cell_entry(cell.0);
        entry.1 += 1;
        let local_t = entry.1;
        entry.0.select(x, local_t)
    }

    fn update(&mut self, x: &Context, arm: usize, r: RewardVector) -> Result<()> {
        let cell = locate(x, &self.spec)?;
        let entry = self.cell_entry(cell.0);
        entry.0.update(x, arm, r)
    }

    fn reset(&mut self) {
        self.cells.clear();
    }
}
