//! Stub matching with rejection of self-loops and multi-edges.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::graph::{canonical, NodeId};
use crate::rng::Rng;

/// Rewiring sweeps attempted on stubs that could not be paired directly.
pub const MAX_SWEEPS: usize = 100;

/// Placed edges tried per leftover pair and sweep.
const SWAP_TRIES: usize = 32;

/// Pairs `stubs` at random into edges accepted by `accept`.
///
/// New edges are added to `edges` (shared across calls so later pools never
/// duplicate earlier edges). Pairs that would form a self-loop, a duplicate,
/// or a rejected edge are retried by re-pairing the leftovers and by
/// swapping endpoints with already placed edges of this pool, for up to
/// [`MAX_SWEEPS`] sweeps. Returns the placed edges and the number of stubs
/// that stayed unmatched.
pub(crate) fn match_stubs<F>(
    mut stubs: Vec<NodeId>,
    accept: F,
    edges: &mut HashSet<(NodeId, NodeId)>,
    rng: &mut Rng,
) -> (Vec<(NodeId, NodeId)>, usize)
where
    F: Fn(NodeId, NodeId) -> bool,
{
    let ok = |u: NodeId, v: NodeId, edges: &HashSet<(NodeId, NodeId)>| {
        u != v && accept(u, v) && !edges.contains(&canonical(u, v))
    };

    stubs.shuffle(rng);
    if stubs.len() % 2 == 1 {
        stubs.pop();
    }
    let mut placed: Vec<(NodeId, NodeId)> = Vec::with_capacity(stubs.len() / 2);
    let mut bad: Vec<(NodeId, NodeId)> = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if ok(u, v, edges) {
            edges.insert(canonical(u, v));
            placed.push(canonical(u, v));
        } else {
            bad.push((u, v));
        }
    }

    for _ in 0..MAX_SWEEPS {
        if bad.is_empty() {
            break;
        }
        // first re-pair the leftovers among themselves
        let mut loose: Vec<NodeId> = bad.drain(..).flat_map(|(u, v)| [u, v]).collect();
        loose.shuffle(rng);
        let mut still = Vec::new();
        for pair in loose.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if ok(u, v, edges) {
                edges.insert(canonical(u, v));
                placed.push(canonical(u, v));
            } else {
                still.push((u, v));
            }
        }
        // then try double-edge swaps against random placed edges
        for (u, v) in still {
            let mut done = false;
            for _ in 0..SWAP_TRIES.min(placed.len()) {
                let idx = rng.random_range(0..placed.len());
                let (x, y) = placed[idx];
                let (x, y) = if rng.random::<bool>() { (x, y) } else { (y, x) };
                edges.remove(&canonical(x, y));
                let swap_ok = ok(u, x, edges) && {
                    edges.insert(canonical(u, x));
                    let second = ok(v, y, edges);
                    edges.remove(&canonical(u, x));
                    second
                };
                if swap_ok {
                    edges.insert(canonical(u, x));
                    edges.insert(canonical(v, y));
                    placed[idx] = canonical(u, x);
                    placed.push(canonical(v, y));
                    done = true;
                    break;
                }
                edges.insert(canonical(x, y));
            }
            if !done {
                bad.push((u, v));
            }
        }
    }
    let leftover = bad.len() * 2;
    (placed, leftover)
}
