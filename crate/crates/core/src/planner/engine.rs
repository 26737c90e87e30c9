//! Best-first search with an optionally bounded open list.
//!
//! Nodes live in an arena; the open list is ordered by `(f, insertion)` so
//! ties go to the earlier node. A state reached again with a lower `g`
//! replaces the open entry, or is re-opened when it was already expanded.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::Hash;

use rustc_hash::FxHashMap;

/// Open-list capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beam {
    Bounded(usize),
    Unbounded,
}

impl Beam {
    pub const DEFAULT: Beam = Beam::Bounded(50);

    fn limit(self) -> usize {
        match self {
            Beam::Bounded(k) => k.max(1),
            Beam::Unbounded => usize::MAX,
        }
    }
}

impl Default for Beam {
    fn default() -> Self {
        Beam::DEFAULT
    }
}

pub struct Successor<S, A> {
    pub action: A,
    pub state: S,
    pub cost: f64,
}

pub trait SearchSpace {
    type State: Clone + Eq + Hash;
    type Action: Clone;

    fn start(&self) -> Self::State;
    fn is_goal(&self, state: &Self::State) -> bool;
    fn expand(&self, state: &Self::State, out: &mut Vec<Successor<Self::State, Self::Action>>);
    /// Lower bound on the cost to reach a goal; `f64::INFINITY` marks a
    /// state with no completion, which is never queued.
    fn heuristic(&self, state: &Self::State) -> f64;
}

#[derive(Debug, Clone)]
pub struct SearchNode<S, A> {
    pub state: S,
    pub g: f64,
    pub h: f64,
    pub f: f64,
    pub action: Option<A>,
    pub parent: Option<usize>,
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub generated: u64,
    pub dropped_by_beam: u64,
    pub max_open: usize,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome<S, A> {
    pub nodes: Vec<SearchNode<S, A>>,
    pub goal: usize,
    pub stats: SearchStats,
}

impl<S, A> SearchOutcome<S, A> {
    /// Node indices from the start node to the goal. `None` if a parent link
    /// points outside the arena or loops.
    pub fn path(&self) -> Option<Vec<usize>> {
        let mut out = vec![self.goal];
        let mut at = self.goal;
        while let Some(parent) = self.nodes.get(at)?.parent {
            if parent >= self.nodes.len() || out.len() > self.nodes.len() {
                return None;
            }
            out.push(parent);
            at = parent;
        }
        out.reverse();
        Some(out)
    }

    pub fn goal_node(&self) -> &SearchNode<S, A> {
        &self.nodes[self.goal]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFailure {
    /// The open list emptied without selecting a goal.
    Exhausted,
    /// The expansion limit was hit first.
    LimitReached { expanded: u64 },
}

/// Open and closed membership right after one expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep<S> {
    pub expanded: S,
    /// Open states in selection order.
    pub open: Vec<S>,
    /// Closed states in closing order.
    pub closed: Vec<S>,
}

#[derive(Clone, Copy)]
struct Key {
    f: f64,
    seq: u64,
    node: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.f
            .total_cmp(&other.f)
            .then(self.seq.cmp(&other.seq))
            .then(self.node.cmp(&other.node))
    }
}

enum Slot {
    Open(Key),
    Closed,
}

struct Best {
    g: f64,
    node: usize,
    slot: Slot,
}

/// Runs A* from `space.start()` until a goal is selected for expansion.
pub fn search<P: SearchSpace>(
    space: &P,
    beam: Beam,
    expansion_limit: Option<u64>,
    mut trace: Option<&mut Vec<TraceStep<P::State>>>,
) -> Result<SearchOutcome<P::State, P::Action>, SearchFailure> {
    let capacity = beam.limit();
    let mut nodes: Vec<SearchNode<P::State, P::Action>> = Vec::new();
    let mut open: BTreeSet<Key> = BTreeSet::new();
    let mut best: FxHashMap<P::State, Best> = FxHashMap::default();
    let mut closed_order: Vec<P::State> = Vec::new();
    let mut stats = SearchStats::default();
    let mut seq = 0u64;
    let mut children = Vec::new();

    let start = space.start();
    let h0 = space.heuristic(&start);
    if !h0.is_finite() {
        return Err(SearchFailure::Exhausted);
    }
    nodes.push(SearchNode {
        state: start.clone(),
        g: 0.0,
        h: h0,
        f: h0,
        action: None,
        parent: None,
        depth: 0,
    });
    let key = Key {
        f: h0,
        seq,
        node: 0,
    };
    seq += 1;
    open.insert(key);
    best.insert(
        start,
        Best {
            g: 0.0,
            node: 0,
            slot: Slot::Open(key),
        },
    );
    stats.max_open = 1;

    while let Some(key) = open.pop_first() {
        let idx = key.node;
        let state = nodes[idx].state.clone();
        if space.is_goal(&state) {
            return Ok(SearchOutcome {
                nodes,
                goal: idx,
                stats,
            });
        }
        if let Some(limit) = expansion_limit {
            if stats.expanded >= limit {
                return Err(SearchFailure::LimitReached {
                    expanded: stats.expanded,
                });
            }
        }
        stats.expanded += 1;
        if let Some(entry) = best.get_mut(&state) {
            entry.slot = Slot::Closed;
        }
        if trace.is_some() {
            closed_order.retain(|s| *s != state);
            closed_order.push(state.clone());
        }

        children.clear();
        space.expand(&state, &mut children);
        let g_parent = nodes[idx].g;
        let depth = nodes[idx].depth + 1;
        for child in children.drain(..) {
            let g = g_parent + child.cost;
            if let Some(entry) = best.get(&child.state) {
                if entry.g <= g {
                    continue;
                }
            }
            let h = space.heuristic(&child.state);
            if !h.is_finite() {
                continue;
            }
            stats.generated += 1;
            let f = g + h;
            // With the open list full and every entry ahead of this child,
            // the truncation below would drop it; skip the round trip.
            if open.len() >= capacity && open.last().is_some_and(|last| f >= last.f) {
                stats.dropped_by_beam += 1;
                best.remove(&child.state);
                continue;
            }
            let node = nodes.len();
            nodes.push(SearchNode {
                state: child.state.clone(),
                g,
                h,
                f,
                action: Some(child.action),
                parent: Some(idx),
                depth,
            });
            let key = Key { f, seq, node };
            seq += 1;
            if let Some(Best {
                slot: Slot::Open(old),
                ..
            }) = best.get(&child.state)
            {
                open.remove(old);
            }
            open.insert(key);
            best.insert(
                child.state,
                Best {
                    g,
                    node,
                    slot: Slot::Open(key),
                },
            );
        }
        while open.len() > capacity {
            let dropped = open.pop_last().expect("open list is non-empty");
            stats.dropped_by_beam += 1;
            let state = &nodes[dropped.node].state;
            if best.get(state).is_some_and(|b| b.node == dropped.node) {
                best.remove(state);
            }
        }
        stats.max_open = stats.max_open.max(open.len());

        if let Some(trace) = trace.as_deref_mut() {
            trace.push(TraceStep {
                expanded: state,
                open: open.iter().map(|k| nodes[k.node].state.clone()).collect(),
                closed: closed_order.clone(),
            });
        }
    }
    Err(SearchFailure::Exhausted)
}
