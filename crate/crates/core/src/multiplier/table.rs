use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{multiplier, EvalPath, KernelParams};
use crate::error::{Error, Result};

/// Multiplier values over a sup-norm frequency box, keyed by ‖k‖².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierTable {
    params: KernelParams,
    box_radius: u32,
    values: BTreeMap<u64, f64>,
    paths: BTreeMap<u64, EvalPath>,
}

/// Every ‖k‖² attained by some k in [−K, K]^n.
fn attained_norms(n: u32, k: u32) -> Vec<u64> {
    // sums of n squares from {0, 1, 4, ..., K²}
    let mut reach = vec![false; (n as usize) * (k as usize).pow(2) + 1];
    reach[0] = true;
    for _ in 0..n {
        let mut next = vec![false; reach.len()];
        for (s, &ok) in reach.iter().enumerate() {
            if !ok {
                continue;
            }
            for j in 0..=k as usize {
                let t = s + j * j;
                if t < next.len() {
                    next[t] = true;
                }
            }
        }
        reach = next;
    }
    reach
        .iter()
        .enumerate()
        .filter_map(|(s, &ok)| ok.then_some(s as u64))
        .collect()
}

/// Tabulate m(‖k‖) for every distinct ‖k‖² in [−K, K]^n.
pub fn build_table(params: &KernelParams, box_radius: u32) -> Result<MultiplierTable> {
    if box_radius < 1 {
        return Err(Error::domain("box radius K must be >= 1"));
    }
    let norms = attained_norms(params.n(), box_radius);
    let workers = std::thread::available_parallelism()
        .map(|c| c.get())
        .unwrap_or(1)
        .min(norms.len().div_ceil(64).max(1));
    let chunk = norms.len().div_ceil(workers);
    let results: Vec<Result<Vec<(u64, f64, EvalPath)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = norms
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&s| {
                            let ev = multiplier(params, (s as f64).sqrt()).map_err(|e| {
                                Error::TableEntry {
                                    norm_sq: s,
                                    source: Box::new(e),
                                }
                            })?;
                            Ok((s, ev.value, ev.path))
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    });
    let mut values = BTreeMap::new();
    let mut paths = BTreeMap::new();
    for part in results {
        for (s, v, p) in part? {
            values.insert(s, v);
            paths.insert(s, p);
        }
    }
    MultiplierTable::from_parts(*params, box_radius, values, paths)
}

impl MultiplierTable {
    /// Assemble a table and check its invariants.
    pub fn from_parts(
        params: KernelParams,
        box_radius: u32,
        values: BTreeMap<u64, f64>,
        paths: BTreeMap<u64, EvalPath>,
    ) -> Result<Self> {
        let table = MultiplierTable {
            params,
            box_radius,
            values,
            paths,
        };
        table.validate()?;
        Ok(table)
    }

    /// Check m(0) = 0, m ≤ 0 and finiteness.
    pub fn validate(&self) -> Result<()> {
        match self.values.get(&0) {
            Some(&0.0) => {}
            Some(&v) => return Err(Error::CorruptedTable { norm_sq: 0, value: v }),
            None => return Err(Error::Shape("multiplier table lacks the k = 0 entry".into())),
        }
        for (&s, &v) in &self.values {
            if !(v <= 0.0) {
                return Err(Error::CorruptedTable { norm_sq: s, value: v });
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn box_radius(&self) -> u32 {
        self.box_radius
    }

    pub fn dim(&self) -> u32 {
        self.params.n()
    }

    pub fn get(&self, norm_sq: u64) -> Option<f64> {
        self.values.get(&norm_sq).copied()
    }

    pub fn path(&self, norm_sq: u64) -> Option<EvalPath> {
        self.paths.get(&norm_sq).copied()
    }

    /// Multiplier at multi-index `k`; errors when ‖k‖² is not tabulated.
    pub fn at(&self, k: &[i64]) -> Result<f64> {
        let s: u64 = k.iter().map(|&c| (c * c) as u64).sum();
        self.get(s).ok_or_else(|| {
            Error::Shape(format!("|k|^2 = {s} is outside the tabulated box"))
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().map(|(&s, &v)| (s, v))
    }

    /// The exact table of the classical Laplacian, m = −‖k‖².
    pub fn laplacian(n: u32, box_radius: u32) -> Result<Self> {
        let params = KernelParams::new(n, 1.0, n as f64 + 2.0)?;
        let norms = attained_norms(n, box_radius);
        let values = norms.iter().map(|&s| (s, -(s as f64))).collect();
        let paths = norms
            .iter()
            .map(|&s| (s, if s == 0 { EvalPath::Zero } else { EvalPath::Laplacian }))
            .collect();
        MultiplierTable::from_parts(params, box_radius, values, paths)
    }

    /// Write a value directly; no invariant check.
    #[doc(hidden)]
    pub fn set_unchecked(&mut self, norm_sq: u64, value: f64) {
        self.values.insert(norm_sq, value);
    }
}
