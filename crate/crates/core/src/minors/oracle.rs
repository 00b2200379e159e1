//! Exhaustive minor test for hosts with at most a dozen vertices.

use super::{MinorError, PatternGraph};
use crate::graph::Graph;

pub const ORACLE_MAX_VERTICES: usize = 12;

/// Decides whether `pattern` is a minor of `host` by trying every
/// assignment of pairwise disjoint connected vertex subsets to the pattern
/// vertices. Deliberately naive: it shares no code with the search.
pub fn brute_force_minor_oracle(host: &Graph, pattern: &PatternGraph) -> Result<bool, MinorError> {
    let n = host.num_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(MinorError::HostTooLarge(n));
    }
    let p = pattern.order();
    if p > n {
        return Ok(false);
    }
    let nb: Vec<u32> = host
        .vertices()
        .map(|v| host.neighbors(v).fold(0u32, |acc, u| acc | 1 << u))
        .collect();
    let full = 1u32 << n;
    let mut reach = vec![0u32; full as usize];
    let mut connected = Vec::new();
    for mask in 1..full {
        let mut seen = mask & mask.wrapping_neg();
        loop {
            let mut grow = seen;
            for (v, &adj) in nb.iter().enumerate().take(n) {
                if seen >> v & 1 == 1 {
                    grow |= adj & mask;
                }
            }
            if grow == seen {
                break;
            }
            seen = grow;
        }
        if seen == mask {
            connected.push(mask);
        }
        reach[mask as usize] = (0..n).filter(|v| mask >> v & 1 == 1).fold(0, |acc, v| acc | nb[v]);
    }

    let earlier: Vec<Vec<usize>> = (0..p)
        .map(|t| pattern.graph().neighbors(t).filter(|&u| u < t).collect())
        .collect();
    let mut chosen = vec![0u32; p];

    fn place(
        t: usize,
        used: u32,
        chosen: &mut [u32],
        connected: &[u32],
        reach: &[u32],
        earlier: &[Vec<usize>],
        ordered: bool,
    ) -> bool {
        if t == chosen.len() {
            return true;
        }
        for &mask in connected {
            if mask & used != 0 {
                continue;
            }
            if ordered && t > 0 && mask.trailing_zeros() <= chosen[t - 1].trailing_zeros() {
                continue;
            }
            if earlier[t].iter().all(|&u| reach[chosen[u] as usize] & mask != 0) {
                chosen[t] = mask;
                if place(t + 1, used | mask, chosen, connected, reach, earlier, ordered) {
                    return true;
                }
            }
        }
        false
    }

    Ok(place(
        0,
        0,
        &mut chosen,
        &connected,
        &reach,
        &earlier,
        pattern.is_complete(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let k3 = PatternGraph::complete(3);
        let k4 = PatternGraph::complete(4);
        assert!(brute_force_minor_oracle(&Graph::cycle(4), &k3).unwrap());
        assert!(!brute_force_minor_oracle(&Graph::star(5), &k3).unwrap());
        assert!(!brute_force_minor_oracle(&Graph::path(12), &k3).unwrap());
        assert!(brute_force_minor_oracle(&Graph::complete(4), &k4).unwrap());
        assert!(brute_force_minor_oracle(&Graph::grid(3, 3), &k4).unwrap());
        assert!(!brute_force_minor_oracle(&Graph::grid(3, 3), &PatternGraph::complete(5)).unwrap());
        assert!(!brute_force_minor_oracle(&Graph::cycle(8), &k4).unwrap());
        assert_eq!(
            brute_force_minor_oracle(&Graph::path(13), &k3),
            Err(MinorError::HostTooLarge(13))
        );
    }

    #[test]
    fn non_complete_patterns() {
        let p3: PatternGraph = "G3:0-1,1-2".parse().unwrap();
        assert!(brute_force_minor_oracle(&Graph::path(3), &p3).unwrap());
        assert!(!brute_force_minor_oracle(&Graph::path(2), &p3).unwrap());
    }
}
