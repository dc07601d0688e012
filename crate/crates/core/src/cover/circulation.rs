//! Integral minimum-cost circulation by negative-cycle canceling.
//!
//! Arcs are stored in pairs: arc `2k` is the forward arc and `2k + 1` its
//! residual twin. Starting from the zero circulation, Bellman–Ford finds a
//! negative residual cycle and saturates it, until none is left.

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
    flow: i64,
}

#[derive(Debug, Clone)]
pub struct Circulation {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl Circulation {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost, flow: 0 });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
            flow: 0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    pub fn flow(&self, arc: usize) -> i64 {
        self.arcs[arc].flow
    }

    fn residual(&self, a: usize) -> i64 {
        self.arcs[a].cap - self.arcs[a].flow
    }

    fn push(&mut self, a: usize, amount: i64) {
        self.arcs[a].flow += amount;
        self.arcs[a ^ 1].flow -= amount;
    }

    pub fn cost(&self) -> i64 {
        self.arcs.iter().step_by(2).map(|a| a.cost * a.flow).sum()
    }

    /// Cancels negative cycles until the circulation is optimal; returns its cost.
    pub fn solve(&mut self) -> i64 {
        while let Some(cycle) = self.negative_cycle() {
            let delta = cycle.iter().map(|&a| self.residual(a)).min().unwrap_or(0);
            debug_assert!(delta > 0);
            for a in cycle {
                self.push(a, delta);
            }
        }
        self.cost()
    }

    /// Arcs of some negative-cost residual cycle, if any.
    fn negative_cycle(&self) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist = vec![0i64; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut last = None;
        for _ in 0..n {
            last = None;
            for u in 0..n {
                for &a in &self.adj[u] {
                    if self.residual(a) <= 0 {
                        continue;
                    }
                    let v = self.arcs[a].to;
                    let nd = dist[u] + self.arcs[a].cost;
                    if nd < dist[v] {
                        dist[v] = nd;
                        pred[v] = Some(a);
                        last = Some(v);
                    }
                }
            }
            last?;
        }
        // A relaxation in the n-th round means a negative cycle; walking back
        // n predecessor steps lands inside it.
        let mut v = last?;
        for _ in 0..n {
            v = self.arcs[pred[v]? ^ 1].to;
        }
        let start = v;
        let mut cycle = Vec::new();
        loop {
            let a = pred[v]?;
            cycle.push(a);
            v = self.arcs[a ^ 1].to;
            if v == start {
                break;
            }
        }
        cycle.reverse();
        Some(cycle)
    }
}
