//! Branch-and-bound maximum clique over compatibility graphs.
//!
//! Vertices are candidate family members; an edge means the pair may
//! coexist. Rows are multi-word bitsets so the inner loops are AND and
//! popcount. The bound is greedy coloring: a clique can use at most one
//! vertex per color class, so coloring the candidate set bounds the best
//! possible extension.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

type Words = Vec<u64>;

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn bit_set(w: &mut Words, i: usize) {
    w[i / 64] |= 1u64 << (i % 64);
}

fn bit_get(w: &[u64], i: usize) -> bool {
    w[i / 64] >> (i % 64) & 1 == 1
}

fn bit_clear(w: &mut Words, i: usize) {
    w[i / 64] &= !(1u64 << (i % 64));
}

fn popcount(w: &[u64]) -> usize {
    w.iter().map(|x| x.count_ones() as usize).sum()
}

fn and_into(a: &[u64], b: &[u64], out: &mut Words) {
    out.clear();
    out.extend(a.iter().zip(b).map(|(x, y)| x & y));
}

fn first_bit(w: &[u64]) -> Option<usize> {
    w.iter()
        .enumerate()
        .find(|(_, &word)| word != 0)
        .map(|(wi, &word)| wi * 64 + word.trailing_zeros() as usize)
}

fn iter_bits(w: &[u64]) -> impl Iterator<Item = usize> + '_ {
    w.iter().enumerate().flat_map(|(wi, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Undirected graph on vertices 0..n with bitset adjacency rows.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Words>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![vec![0u64; words_for(n.max(1))]; n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        bit_set(&mut self.adj[a], b);
        bit_set(&mut self.adj[b], a);
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        bit_get(&self.adj[a], b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    pub size: usize,
    pub certified: bool,
    pub nodes: u64,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    out_of_time: AtomicBool,
}

/// Greedy coloring of the candidate set; returns vertices ordered by
/// ascending color together with their color numbers (1-based).
fn color_sort(g: &Graph, cand: &[u64]) -> Vec<(usize, usize)> {
    let mut uncolored: Words = cand.to_vec();
    let mut ordered: Vec<(usize, usize)> = Vec::with_capacity(popcount(cand));
    let mut color = 0usize;
    let mut class = vec![0u64; cand.len()];
    while popcount(&uncolored) > 0 {
        color += 1;
        class.copy_from_slice(&uncolored);
        while let Some(v) = first_bit(&class) {
            ordered.push((v, color));
            bit_clear(&mut uncolored, v);
            bit_clear(&mut class, v);
            for (c, a) in class.iter_mut().zip(&g.adj[v]) {
                *c &= !a;
            }
        }
    }
    ordered
}

fn expand(
    g: &Graph,
    depth: usize,
    cand: &Words,
    shared: &Shared,
    deadline: Option<Instant>,
) {
    shared.nodes.fetch_add(1, Ordering::Relaxed);
    if let Some(d) = deadline {
        if Instant::now() >= d {
            shared.out_of_time.store(true, Ordering::Relaxed);
            return;
        }
    }
    if popcount(cand) == 0 {
        shared.best.fetch_max(depth, Ordering::Relaxed);
        return;
    }
    let ordered = color_sort(g, cand);
    let mut cand = cand.clone();
    let mut next = vec![0u64; cand.len()];
    // highest color first: once depth + color <= best, every remaining
    // vertex has a smaller color and can be pruned too
    for &(v, color) in ordered.iter().rev() {
        if depth + color <= shared.best.load(Ordering::Relaxed) {
            return;
        }
        if shared.out_of_time.load(Ordering::Relaxed) {
            return;
        }
        and_into(&cand, &g.adj[v], &mut next);
        shared.best.fetch_max(depth + 1, Ordering::Relaxed);
        expand(g, depth + 1, &next, shared, deadline);
        bit_clear(&mut cand, v);
    }
}

/// Certified maximum clique size. `threads = 1` runs the plain recursion;
/// larger counts split the root vertices across workers sharing one
/// incumbent, which only ever improves, so the certified size is
/// schedule-independent.
pub fn max_clique(g: &Graph, deadline: Option<Instant>, threads: usize) -> CliqueOutcome {
    let shared = Shared {
        best: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        out_of_time: AtomicBool::new(false),
    };
    if g.n == 0 {
        return CliqueOutcome { size: 0, certified: true, nodes: 0 };
    }
    let words = words_for(g.n);
    let roots: Vec<(usize, Words)> = (0..g.n)
        .map(|v| {
            // candidates after picking v: neighbors with a larger index
            let mut cand = vec![0u64; words];
            for u in iter_bits(&g.adj[v]) {
                if u > v {
                    bit_set(&mut cand, u);
                }
            }
            (v, cand)
        })
        .collect();
    let run = |work: &[(usize, Words)]| {
        for (_, cand) in work {
            shared.best.fetch_max(1, Ordering::Relaxed);
            expand(g, 1, cand, &shared, deadline);
        }
    };
    if threads <= 1 {
        run(&roots);
    } else {
        std::thread::scope(|scope| {
            for chunk in roots.chunks(g.n.div_ceil(threads)) {
                scope.spawn(|| run(chunk));
            }
        });
    }
    CliqueOutcome {
        size: shared.best.load(Ordering::Relaxed),
        certified: !shared.out_of_time.load(Ordering::Relaxed),
        nodes: shared.nodes.load(Ordering::Relaxed),
    }
}

/// Lexicographically smallest clique of exactly `target` vertices, found by
/// a single-threaded include-first scan in ascending vertex order. Used to
/// canonicalize witnesses after the size is certified.
pub fn lex_smallest_clique(g: &Graph, target: usize) -> Option<Vec<usize>> {
    if target == 0 {
        return Some(Vec::new());
    }
    let words = words_for(g.n);
    let mut chosen = Vec::with_capacity(target);
    let full: Words = {
        let mut w = vec![0u64; words];
        for v in 0..g.n {
            bit_set(&mut w, v);
        }
        w
    };
    fn rec(
        g: &Graph,
        cand: &Words,
        from: usize,
        target: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == target {
            return true;
        }
        let need = target - chosen.len();
        let mut next = vec![0u64; cand.len()];
        for v in from..g.n {
            if g.n - v < need || !bit_get(cand, v) {
                continue;
            }
            and_into(cand, &g.adj[v], &mut next);
            if popcount(&next) + 1 < need {
                continue;
            }
            chosen.push(v);
            if rec(g, &next, v + 1, target, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if rec(g, &full, 0, target, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// Oracle-grade naive maximum clique by enumerating all vertex subsets.
/// Only usable on tiny graphs; kept for cross-checking the solver.
pub fn naive_max_clique(g: &Graph) -> usize {
    assert!(g.n <= 24, "naive enumeration is exponential");
    let mut best = 0usize;
    for mask in 0u64..(1u64 << g.n) {
        let verts: Vec<usize> = (0..g.n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts.len() <= best {
            continue;
        }
        let ok = verts
            .iter()
            .enumerate()
            .all(|(i, &a)| verts[i + 1..].iter().all(|&b| g.has_edge(a, b)));
        if ok {
            best = verts.len();
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn triangle_plus_pendant() {
        let g = graph_from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let out = max_clique(&g, None, 1);
        assert_eq!(out.size, 3);
        assert!(out.certified);
        assert_eq!(lex_smallest_clique(&g, 3), Some(vec![0, 1, 2]));
    }

    #[test]
    fn empty_and_edgeless() {
        let g = Graph::new(0);
        assert_eq!(max_clique(&g, None, 1).size, 0);
        let g = Graph::new(5);
        assert_eq!(max_clique(&g, None, 1).size, 1);
        assert_eq!(lex_smallest_clique(&g, 1), Some(vec![0]));
        assert_eq!(lex_smallest_clique(&g, 2), None);
    }

    #[test]
    fn complete_graph() {
        let mut g = Graph::new(7);
        for a in 0..7 {
            for b in a + 1..7 {
                g.add_edge(a, b);
            }
        }
        assert_eq!(max_clique(&g, None, 1).size, 7);
        assert_eq!(max_clique(&g, None, 4).size, 7);
    }

    #[test]
    fn matches_naive_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11);
        for trial in 0..60 {
            let n = rng.gen_range(1..=16);
            let p: f64 = rng.gen_range(0.1..0.9);
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(a, b);
                    }
                }
            }
            let expect = naive_max_clique(&g);
            let got = max_clique(&g, None, 1);
            assert!(got.certified);
            assert_eq!(got.size, expect, "trial {trial} n={n}");
            let gotp = max_clique(&g, None, 3);
            assert_eq!(gotp.size, expect, "parallel trial {trial}");
            if expect > 0 {
                let w = lex_smallest_clique(&g, expect).unwrap();
                assert_eq!(w.len(), expect);
                for (i, &a) in w.iter().enumerate() {
                    for &b in &w[i + 1..] {
                        assert!(g.has_edge(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn deadline_yields_uncertified_or_done() {
        let mut g = Graph::new(40);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in 0..40 {
            for b in a + 1..40 {
                if rng.gen_bool(0.8) {
                    g.add_edge(a, b);
                }
            }
        }
        let out = max_clique(&g, Some(Instant::now()), 1);
        // an already-expired deadline must not certify unless trivially done
        assert!(!out.certified || out.size == 40);
    }
}
