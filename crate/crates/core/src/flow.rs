//! Exact maximum flow over rational capacities (Edmonds-Karp).
//!
//! Shortest augmenting paths terminate for arbitrary real capacities, so
//! the computation is exact on rationals.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A dense flow network; graphs here have a handful of nodes.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    residual: Vec<Vec<BigRational>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            residual: vec![vec![BigRational::zero(); nodes]; nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: BigRational) {
        debug_assert!(!capacity.is_negative());
        self.residual[from][to] += capacity;
    }

    /// Pushes as much as possible from `source` to `sink`; consumes capacity.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> BigRational {
        let n = self.residual.len();
        let mut total = BigRational::zero();
        if source == sink {
            return total;
        }
        loop {
            let mut parent = vec![usize::MAX; n];
            parent[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for (v, p) in parent.iter_mut().enumerate() {
                    if *p == usize::MAX && self.residual[u][v].is_positive() {
                        *p = u;
                        queue.push_back(v);
                    }
                }
            }
            if parent[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck: Option<BigRational> = None;
            let mut v = sink;
            while v != source {
                let u = parent[v];
                let cap = &self.residual[u][v];
                if bottleneck.as_ref().is_none_or(|b| cap < b) {
                    bottleneck = Some(cap.clone());
                }
                v = u;
            }
            let bottleneck = bottleneck.expect("path has an edge");
            let mut v = sink;
            while v != source {
                let u = parent[v];
                self.residual[u][v] -= &bottleneck;
                self.residual[v][u] += &bottleneck;
                v = u;
            }
            total += bottleneck;
        }
    }
}
