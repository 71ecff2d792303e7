//! Synthetic graphs and timing for the path engine.

use std::time::{Duration, Instant};

use crate::graph::Graph;
use crate::path::{eval_all_pairs, eval_pair, PathExpr};
use crate::term::{Term, Triple};

fn node(i: usize) -> Term {
    Term::iri(format!("n{i}"))
}

/// `n0 p n1 . n1 p n2 . …` with `n` triples.
pub fn chain(n: usize) -> Graph {
    Graph::from_triples((0..n).map(|i| Triple::new(node(i), Term::iri("p"), node(i + 1)))).expect("ground triples")
}

/// A `w`×`h` grid of nodes `gX_Y` with `right` and `down` edges.
pub fn grid(w: usize, h: usize) -> Graph {
    let cell = |x: usize, y: usize| Term::iri(format!("g{x}_{y}"));
    let mut triples = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                triples.push(Triple::new(cell(x, y), Term::iri("right"), cell(x + 1, y)));
            }
            if y + 1 < h {
                triples.push(Triple::new(cell(x, y), Term::iri("down"), cell(x, y + 1)));
            }
        }
    }
    Graph::from_triples(triples).expect("ground triples")
}

/// Number of pairs and wall time of one all-pairs evaluation.
pub fn time_all_pairs(g: &Graph, e: &PathExpr) -> (usize, Duration) {
    let start = Instant::now();
    let n = eval_all_pairs(g, e).len();
    (n, start.elapsed())
}

/// Wall time of one end-to-end query on a chain: first to last node.
pub fn time_chain_pair(g: &Graph, e: &PathExpr) -> (bool, Duration) {
    let last = g.len();
    let start = Instant::now();
    let hit = eval_pair(g, e, &node(0), &node(last));
    (hit, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{parse_path, Dialect};

    #[test]
    fn shapes() {
        assert_eq!(chain(5).len(), 5);
        assert!(chain(0).is_empty());
        assert_eq!(grid(3, 2).len(), 7);
    }

    #[test]
    fn chain_reachability() {
        let e = parse_path("(next::p)+", Dialect::Mixed).unwrap();
        let g = chain(100);
        assert!(time_chain_pair(&g, &e).0);
        assert_eq!(time_all_pairs(&g, &e).0, 100 * 101 / 2);
    }
}
