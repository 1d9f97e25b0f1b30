//! Bounded external archive with an adaptive objective-space grid.
//!
//! The archive keeps a mutually non-dominated set. When it overflows, one
//! entry is evicted uniformly at random from the most crowded grid cell;
//! leaders are drawn by roulette weighted toward sparse cells. The grid is
//! recomputed from the current objective bounds on every use, so it adapts
//! as the front moves.

use std::collections::BTreeMap;

use rand::Rng;

use crate::num::Scalar;
use crate::pareto::{dominates, ObjectivePoint};

/// Non-dominated store of payloads (positions, designs) with their objectives.
#[derive(Debug, Clone)]
pub struct ParetoArchive<F, D> {
    entries: Vec<(D, ObjectivePoint<F>)>,
    capacity: usize,
    grid_divisions: usize,
}

impl<F: Scalar, D> ParetoArchive<F, D> {
    pub fn new(capacity: usize, grid_divisions: usize) -> Self {
        assert!(capacity > 0, "archive capacity must be positive");
        assert!(grid_divisions > 0, "grid must have at least one division");
        Self {
            entries: Vec::new(),
            capacity,
            grid_divisions,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(D, ObjectivePoint<F>)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(D, ObjectivePoint<F>)> {
        self.entries
    }

    /// Offers a candidate. Returns whether it was accepted.
    ///
    /// Candidates dominated by the archive are rejected, as are exact
    /// duplicates of a stored objective vector (the first occupant stays).
    /// An accepted candidate expels every entry it dominates; on overflow
    /// one entry leaves the most crowded cell, chosen uniformly at random.
    pub fn insert(&mut self, payload: D, point: ObjectivePoint<F>, rng: &mut impl Rng) -> bool {
        for (_, held) in &self.entries {
            if dominates(held, &point) || held.values == point.values {
                return false;
            }
        }
        self.entries.retain(|(_, held)| !dominates(&point, held));
        self.entries.push((payload, point));
        if self.entries.len() > self.capacity {
            self.evict(rng);
        }
        true
    }

    /// Roulette draw favoring entries in sparsely occupied grid cells.
    pub fn select_leader(&self, rng: &mut impl Rng) -> Option<&(D, ObjectivePoint<F>)> {
        if self.entries.len() <= 1 {
            return self.entries.first();
        }
        let cells = self.grid_cells();
        let total: f64 = cells.values().map(|m| 1.0 / m.len() as f64).sum();
        let mut draw = rng.random_range(0.0..total);
        let mut chosen = cells.values().last().unwrap();
        for members in cells.values() {
            let weight = 1.0 / members.len() as f64;
            if draw < weight {
                chosen = members;
                break;
            }
            draw -= weight;
        }
        let pick = chosen[rng.random_range(0..chosen.len())];
        self.entries.get(pick)
    }

    fn evict(&mut self, rng: &mut impl Rng) {
        let cells = self.grid_cells();
        let densest = cells.values().map(|m| m.len()).max().unwrap();
        let cell = cells.values().find(|m| m.len() == densest).unwrap();
        let victim = cell[rng.random_range(0..cell.len())];
        self.entries.remove(victim);
    }

    /// Buckets entry indices by grid cell, keyed for deterministic order.
    /// Non-finite coordinates land in the top cell of their axis.
    fn grid_cells(&self) -> BTreeMap<u64, Vec<usize>> {
        let dim = self.entries[0].1.dim();
        let mut lo = vec![F::infinity(); dim];
        let mut hi = vec![F::neg_infinity(); dim];
        for (_, p) in &self.entries {
            for k in 0..dim {
                let v = p.values[k];
                if v.is_finite() {
                    lo[k] = lo[k].min(v);
                    hi[k] = hi[k].max(v);
                }
            }
        }

        let divisions = self.grid_divisions;
        let mut cells: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, (_, p)) in self.entries.iter().enumerate() {
            let mut key = 0u64;
            for k in 0..dim {
                let v = p.values[k];
                let cell = if !v.is_finite() {
                    divisions - 1
                } else if hi[k] > lo[k] {
                    let width = (hi[k] - lo[k]) / F::of(divisions as f64);
                    (((v - lo[k]) / width).as_f64() as usize).min(divisions - 1)
                } else {
                    0
                };
                key = key * divisions as u64 + cell as u64;
            }
            cells.entry(key).or_default().push(i);
        }
        cells
    }
}
