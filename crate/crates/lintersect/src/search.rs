//! Certified maximum-family search and the extremal constructions.
//!
//! The searcher is the ground truth: a certified maximum together with a
//! theorem's bound on the same instance either confirms the bound or, if
//! the maximum ever exceeded it, falsifies the implementation loudly.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::clique::{lex_smallest_clique, max_clique, Graph};
use crate::exact::{natural_to_u64, Natural};
use crate::family::{FamilyError, GroundSet, KSet, LSet, SetFamily};
use crate::theorems::{
    apply_theorem, thm17_bound, KwiseParams, TheoremError, TheoremId, TheoremReport,
};

pub const MAX_UNIVERSE: u64 = 1 << 24;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SearchError {
    #[error("candidate universe has {got} members, above the cap {cap}")]
    UniverseTooLarge { got: u64, cap: u64 },
    #[error("intersection arity must be at least 2, got {0}")]
    ArityTooSmall(u64),
    #[error("thread count must be positive")]
    ZeroThreads,
    #[error("l1 = {l1} exceeds n = {n}")]
    L1ExceedsN { l1: u64, n: u64 },
    #[error("r = {r} is out of range 1..={max}")]
    ROutOfRange { r: u64, max: u64 },
    #[error("construction sizes are empty: s-r+1+l1 = {lo} > s+l1 = {hi}")]
    EmptySizeRange { lo: i64, hi: u64 },
    #[error(
        "construction self-check failed: size {got} vs expected {expected}, \
         L-intersecting = {l_ok}"
    )]
    ConstructionCheck { got: usize, expected: u64, l_ok: bool },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: u32,
    pub l: LSet,
    pub k: Option<KSet>,
    pub h: u64,
    pub time_budget: Duration,
    pub thread_count: usize,
}

impl SearchSpec {
    pub fn new(n: u32, l: LSet, k: Option<KSet>, h: u64) -> Self {
        SearchSpec {
            n,
            l,
            k,
            h,
            time_budget: Duration::from_secs(60),
            thread_count: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub max_size: u64,
    pub witness: Option<SetFamily>,
    pub certified: bool,
    pub nodes_explored: u64,
}

/// All subsets of [n] with sizes in K (all sizes when K is absent), in
/// lexicographic bit-pattern order. The empty set appears only when K is
/// absent.
pub fn universe(n: u32, k: Option<&KSet>) -> Result<Vec<u64>, SearchError> {
    let ground = GroundSet::new(n)?;
    let count: u64 = match k {
        None => {
            if n >= 24 {
                return Err(SearchError::UniverseTooLarge { got: 1 << n.min(63), cap: MAX_UNIVERSE });
            }
            1u64 << n
        }
        Some(ks) => {
            let total: Natural = ks
                .values()
                .iter()
                .map(|&size| crate::exact::binom(n as u64, size as i64))
                .sum();
            natural_to_u64(&total).filter(|&c| c <= MAX_UNIVERSE).ok_or(
                SearchError::UniverseTooLarge { got: u64::MAX, cap: MAX_UNIVERSE },
            )?
        }
    };
    if count > MAX_UNIVERSE {
        return Err(SearchError::UniverseTooLarge { got: count, cap: MAX_UNIVERSE });
    }
    let full = ground.full_mask();
    let mut out = Vec::with_capacity(count as usize);
    for mask in 0..=full {
        let keep = match k {
            None => true,
            Some(ks) => ks.contains(mask.count_ones() as u64),
        };
        if keep {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Certified maximum L-intersecting (h = 2) or h-wise L-intersecting
/// (h >= 3) family over the candidate universe. The witness is the
/// lexicographically smallest maximum family, recovered by a final
/// single-threaded pass once the size is certified.
pub fn max_family(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    if spec.h < 2 {
        return Err(SearchError::ArityTooSmall(spec.h));
    }
    if spec.thread_count == 0 {
        return Err(SearchError::ZeroThreads);
    }
    let verts = universe(spec.n, spec.k.as_ref())?;
    let deadline = Instant::now() + spec.time_budget;
    let ground = GroundSet::new(spec.n)?;

    if spec.h == 2 {
        let mut g = Graph::new(verts.len());
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                if spec.l.contains((verts[i] & verts[j]).count_ones() as u64) {
                    g.add_edge(i, j);
                }
            }
        }
        let out = max_clique(&g, Some(deadline), spec.thread_count);
        let witness = if out.certified {
            lex_smallest_clique(&g, out.size).map(|idx| {
                let members: Vec<u64> = idx.iter().map(|&i| verts[i]).collect();
                SetFamily::new(ground, members).expect("universe members are valid and distinct")
            })
        } else {
            None
        };
        if let Some(w) = &witness {
            if w.len() >= 2 {
                assert!(
                    w.is_l_intersecting(&spec.l).expect("witness has >= 2 members"),
                    "witness fails its own predicate"
                );
            }
        }
        return Ok(SearchResult {
            max_size: out.size as u64,
            witness,
            certified: out.certified,
            nodes_explored: out.nodes,
        });
    }

    let out = hwise_dfs(&verts, &spec.l, spec.h as usize, ground, deadline);
    if let Some(w) = &out.witness {
        if w.len() >= spec.h as usize {
            assert!(
                w.is_hwise_l_intersecting(&spec.l, spec.h as usize)
                    .expect("witness has >= h members"),
                "witness fails its own predicate"
            );
        }
    }
    Ok(out)
}

/// Depth-first search for h >= 3. A partial family keeps, for each level
/// j <= h-1, the intersections of all its j-subsets; adding X is feasible
/// iff every (h-1)-subset intersection meets X in a size in L, and only
/// the subsets containing X need new intersections computed.
fn hwise_dfs(
    verts: &[u64],
    l: &LSet,
    h: usize,
    ground: GroundSet,
    deadline: Instant,
) -> SearchResult {
    struct State<'a> {
        verts: &'a [u64],
        l: &'a LSet,
        h: usize,
        // levels[j-1] holds intersections of all j-subsets of the partial
        // family, j = 1..=h-1
        levels: Vec<Vec<u64>>,
        chosen: Vec<usize>,
        best: usize,
        best_witness: Vec<usize>,
        nodes: u64,
        deadline: Instant,
        out_of_time: bool,
    }

    fn feasible(st: &State<'_>, x: u64) -> bool {
        let top = &st.levels[st.h - 2];
        if st.chosen.len() + 1 >= st.h {
            if !top.iter().all(|&m| st.l.contains((m & x).count_ones() as u64)) {
                return false;
            }
        }
        true
    }

    // Upper bound on how many of `cand` can still join together: color the
    // pairwise-compatibility graph (u, v conflict when some chosen member c
    // makes |c ∩ u ∩ v| leave L) greedily; any feasible extension is a
    // clique there, so the class count bounds it.
    fn extension_bound(st: &State<'_>, cand: &[usize]) -> usize {
        if st.chosen.len() < st.h - 2 || cand.len() <= 1 {
            return cand.len();
        }
        // h-tuples containing both u and v take their other h-2 members
        // from the chosen set, whose intersections are levels[h-3]
        let compatible = |u: usize, v: usize| -> bool {
            let uv = st.verts[u] & st.verts[v];
            st.levels[st.h - 3]
                .iter()
                .all(|&m| st.l.contains((m & uv).count_ones() as u64))
        };
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &u in cand {
            let slot = classes
                .iter_mut()
                .find(|class| class.iter().all(|&m| !compatible(u, m)));
            match slot {
                Some(class) => class.push(u),
                None => classes.push(vec![u]),
            }
        }
        classes.len()
    }

    fn rec(st: &mut State<'_>, cand: &[usize]) {
        st.nodes += 1;
        if st.nodes % 4096 == 0 && Instant::now() >= st.deadline {
            st.out_of_time = true;
        }
        if st.out_of_time {
            return;
        }
        if st.chosen.len() > st.best {
            st.best = st.chosen.len();
            st.best_witness = st.chosen.clone();
        }
        if st.chosen.len() + extension_bound(st, cand) <= st.best {
            return;
        }
        for (pos, &vi) in cand.iter().enumerate() {
            if st.chosen.len() + (cand.len() - pos) <= st.best {
                return;
            }
            let x = st.verts[vi];
            if !feasible(st, x) {
                continue;
            }
            // push: extend each level with the subsets that now include x,
            // from the top down so levels[j-1] is still x-free when read
            let mut added: Vec<usize> = Vec::with_capacity(st.h - 1);
            for j in (0..st.h - 1).rev() {
                let new_masks: Vec<u64> = if j == 0 {
                    vec![x]
                } else {
                    st.levels[j - 1].iter().map(|&m| m & x).collect()
                };
                added.push(new_masks.len());
                st.levels[j].extend(new_masks);
            }
            st.chosen.push(vi);
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| feasible(st, st.verts[u]))
                .collect();
            rec(st, &next);
            st.chosen.pop();
            for (offset, j) in (0..st.h - 1).rev().enumerate() {
                let keep = st.levels[j].len() - added[offset];
                st.levels[j].truncate(keep);
            }
            if st.out_of_time {
                return;
            }
        }
    }

    let mut st = State {
        verts,
        l,
        h,
        levels: vec![Vec::new(); h - 1],
        chosen: Vec::new(),
        best: 0,
        best_witness: Vec::new(),
        nodes: 0,
        deadline,
        out_of_time: false,
    };
    let all: Vec<usize> = (0..verts.len()).collect();
    rec(&mut st, &all);
    let certified = !st.out_of_time;
    // include-first order over a lexicographic universe makes the first
    // maximum found the lexicographically smallest one
    let witness = if certified {
        let members: Vec<u64> = st.best_witness.iter().map(|&i| verts[i]).collect();
        Some(SetFamily::new(ground, members).expect("universe members are distinct"))
    } else {
        None
    };
    SearchResult {
        max_size: st.best as u64,
        witness,
        certified,
        nodes_explored: st.nodes,
    }
}

/// The extremal family: all subsets of [n] with sizes between s-r+1+l1 and
/// s+l1 that contain {1, ..., l1}. Its size equals thm17_bound(n, l1, s, r)
/// and it is L-intersecting for L = {l1, ..., s+l1-1}; both facts are
/// verified before returning.
pub fn construct_extremal(n: u64, l1: u64, s: u64, r: u64) -> Result<SetFamily, SearchError> {
    if l1 > n {
        return Err(SearchError::L1ExceedsN { l1, n });
    }
    if r < 1 || r > s + 1 {
        return Err(SearchError::ROutOfRange { r, max: s + 1 });
    }
    let lo = s as i64 - r as i64 + 1 + l1 as i64;
    let hi = s + l1;
    if lo > hi as i64 {
        return Err(SearchError::EmptySizeRange { lo, hi });
    }
    let ground = GroundSet::new(n as u32)?;
    let core: u64 = if l1 == 0 { 0 } else { (1u64 << l1) - 1 };
    let rest: Vec<u32> = ((l1 as u32 + 1)..=(n as u32)).collect();
    let mut members: Vec<u64> = Vec::new();
    // enumerate tail subsets in lexicographic bit order over the non-core
    // elements
    let tail_n = rest.len();
    for tail_mask in 0u64..(1u64 << tail_n) {
        let size = l1 + tail_mask.count_ones() as u64;
        if (size as i64) < lo || size > hi {
            continue;
        }
        let mut mask = core;
        for (bit, &element) in rest.iter().enumerate() {
            if tail_mask >> bit & 1 == 1 {
                mask |= 1u64 << (element - 1);
            }
        }
        members.push(mask);
    }
    members.sort_unstable();
    let fam = SetFamily::new(ground, members)?;

    let expected = thm17_bound(n, l1, s, r).map_err(|e| match e {
        TheoremError::L1ExceedsN { l1, n } => SearchError::L1ExceedsN { l1, n },
        other => unreachable!("thm17_bound: {other}"),
    })?;
    let expected_u64 = natural_to_u64(&expected).expect("construction fits in u64 by the cap");
    let l_vals: Vec<u64> = (l1..l1 + s).collect();
    let l_ok = if fam.len() < 2 {
        true
    } else {
        let l = LSet::new(l_vals).expect("l1..l1+s is strictly increasing");
        fam.is_l_intersecting(&l)?
    };
    if fam.len() as u64 != expected_u64 || !l_ok {
        return Err(SearchError::ConstructionCheck {
            got: fam.len(),
            expected: expected_u64,
            l_ok,
        });
    }
    Ok(fam)
}

/// One cell of a tightness grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCell {
    pub n: u32,
    pub l: LSet,
    pub k: Option<KSet>,
    pub h: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub cell: GridCell,
    pub search: Result<SearchResult, SearchError>,
    pub reports: Vec<TheoremReport>,
    /// Reports whose hypotheses all passed yet the certified maximum
    /// exceeded the bound. Any entry falsifies the implementation.
    pub anomalies: Vec<TheoremReport>,
}

/// Runs max_family on every cell, applies every theorem that fits the
/// cell's parameters to the certified witness, and collects falsification
/// anomalies. Search errors are reported per cell; the scan continues.
pub fn tightness_scan(
    grid: &[GridCell],
    time_budget: Duration,
    thread_count: usize,
) -> Vec<CellOutcome> {
    grid.iter()
        .map(|cell| {
            let mut spec = SearchSpec::new(cell.n, cell.l.clone(), cell.k.clone(), cell.h);
            spec.time_budget = time_budget;
            spec.thread_count = thread_count;
            let search = max_family(&spec);
            let mut reports = Vec::new();
            let mut anomalies = Vec::new();
            if let Ok(res) = &search {
                if let (true, Some(witness)) = (res.certified, res.witness.as_ref()) {
                    if witness.len() >= 2 {
                        let kwise = KwiseParams::new(cell.h);
                        for id in TheoremId::ALL {
                            let rep = apply_theorem(
                                id,
                                witness,
                                &cell.l,
                                cell.k.as_ref(),
                                Some(&kwise),
                            );
                            if let Ok(rep) = rep {
                                if rep.applicable && !rep.within_bound {
                                    anomalies.push(rep.clone());
                                }
                                reports.push(rep);
                            }
                        }
                    }
                }
            }
            CellOutcome { cell: cell.clone(), search, reports, anomalies }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::mask_from_elements;

    fn lset(vals: &[u64]) -> LSet {
        LSet::new(vals.to_vec()).unwrap()
    }

    fn spec(n: u32, l: &[u64], k: Option<&[u64]>, h: u64) -> SearchSpec {
        SearchSpec::new(
            n,
            lset(l),
            k.map(|v| KSet::new(v.to_vec()).unwrap()),
            h,
        )
    }

    // Independent oracle: enumerate every subfamily of the universe and
    // test the predicate directly. Exponential, so only for tiny universes.
    fn naive_max_family(n: u32, l: &LSet, k: Option<&KSet>, h: usize) -> usize {
        let verts = universe(n, k).unwrap();
        assert!(verts.len() <= 18);
        let ground = GroundSet::new(n).unwrap();
        let mut best = 0usize;
        for mask in 0u64..(1u64 << verts.len()) {
            let members: Vec<u64> = (0..verts.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| verts[i])
                .collect();
            if members.len() <= best {
                continue;
            }
            let fam = SetFamily::new(ground, members).unwrap();
            let ok = if fam.len() < h {
                true
            } else if h == 2 {
                fam.is_l_intersecting(l).unwrap()
            } else {
                fam.is_hwise_l_intersecting(l, h).unwrap()
            };
            if ok {
                best = fam.len();
            }
        }
        best
    }

    #[test]
    fn singleton_universe_examples() {
        // frozen oracle: 5 = ∅ plus the four singletons
        let res = max_family(&spec(4, &[0], None, 2)).unwrap();
        assert_eq!(res.max_size, 5);
        assert!(res.certified);
        let w = res.witness.unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.is_l_intersecting(&lset(&[0])).unwrap());
    }

    #[test]
    fn star_on_seven() {
        // frozen oracle: certified clique over the 21 two-subsets of [7]
        let res = max_family(&spec(7, &[1], Some(&[2]), 2)).unwrap();
        assert_eq!(res.max_size, 6);
        assert!(res.certified);
    }

    #[test]
    fn powerset_of_two_threewise() {
        // frozen oracle: all four subsets of [2]; every triple intersects emptily
        let res = max_family(&spec(2, &[0], None, 3)).unwrap();
        assert_eq!(res.max_size, 4);
        assert!(res.certified);
        assert_eq!(res.witness.unwrap().len(), 4);
    }

    #[test]
    fn matches_naive_enumeration() {
        for (n, l, k, h) in [
            (3u32, vec![0u64], None, 2u64),
            (3, vec![1], None, 2),
            (3, vec![0, 1], None, 2),
            (4, vec![1], Some(vec![2u64]), 2),
            (4, vec![0, 1], Some(vec![1, 2]), 2),
            (3, vec![0], None, 3),
            (3, vec![1], None, 3),
            (3, vec![0, 1], None, 3),
            (4, vec![1, 2], Some(vec![2, 3]), 2),
            (4, vec![1], Some(vec![2]), 3),
        ] {
            let ks = k.clone().map(|v| KSet::new(v).unwrap());
            let expect = naive_max_family(n, &lset(&l), ks.as_ref(), h as usize);
            let res = max_family(&spec(n, &l, k.as_deref(), h)).unwrap();
            assert!(res.certified);
            assert_eq!(res.max_size as usize, expect, "n={n} l={l:?} k={k:?} h={h}");
        }
    }

    #[test]
    fn thread_counts_agree() {
        for threads in [1usize, 2, 8] {
            let mut s = spec(6, &[0, 1], None, 2);
            s.thread_count = threads;
            let res = max_family(&s).unwrap();
            assert!(res.certified);
            assert_eq!(res.max_size, {
                let base = max_family(&spec(6, &[0, 1], None, 2)).unwrap();
                base.max_size
            });
        }
    }

    #[test]
    fn universe_respects_k_and_cap() {
        let u = universe(3, None).unwrap();
        assert_eq!(u.len(), 8);
        assert_eq!(u[0], 0);
        let ks = KSet::new(vec![2]).unwrap();
        let u = universe(4, Some(&ks)).unwrap();
        assert_eq!(u.len(), 6);
        assert!(u.iter().all(|m| m.count_ones() == 2));
        assert!(matches!(
            universe(30, None),
            Err(SearchError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn construct_extremal_examples() {
        // frozen oracle: 10 three-subsets of [6] through element 1
        let f = construct_extremal(6, 1, 2, 1).unwrap();
        assert_eq!(f.len(), 10);
        assert!(f.members().iter().all(|m| m & 1 == 1 && m.count_ones() == 3));

        let f = construct_extremal(4, 0, 1, 1).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.members().iter().all(|m| m.count_ones() == 1));

        // frozen oracle: subsets of size 3 or 4 of [5] containing {1,2}
        let f = construct_extremal(5, 2, 2, 2).unwrap();
        assert_eq!(f.len(), 6);
        let core = mask_from_elements(&[1, 2]);
        assert!(f.members().iter().all(|m| m & core == core));

        assert!(matches!(
            construct_extremal(3, 4, 1, 1),
            Err(SearchError::L1ExceedsN { .. })
        ));
        assert!(matches!(
            construct_extremal(5, 1, 1, 3),
            Err(SearchError::ROutOfRange { .. })
        ));
    }

    #[test]
    fn construct_extremal_contains_core_and_matches_bound() {
        for n in 1..=8u64 {
            for l1 in 0..=2u64.min(n) {
                for s in 1..=3u64 {
                    for r in 1..=s {
                        let f = match construct_extremal(n, l1, s, r) {
                            Ok(f) => f,
                            Err(_) => continue,
                        };
                        let expected = thm17_bound(n, l1, s, r).unwrap();
                        assert_eq!(Natural::from(f.len()), expected);
                        if l1 > 0 && !f.is_empty() {
                            let core = (1u64 << l1) - 1;
                            assert!(f.members().iter().all(|m| m & core == core));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tightness_scan_basics() {
        let grid = vec![
            GridCell { n: 4, l: lset(&[0]), k: None, h: 2 },
            GridCell { n: 4, l: lset(&[1]), k: None, h: 2 },
        ];
        let out = tightness_scan(&grid, Duration::from_secs(30), 1);
        assert_eq!(out.len(), 2);
        let first = out[0].search.as_ref().unwrap();
        assert_eq!(first.max_size, 5);
        let fw = out[0]
            .reports
            .iter()
            .find(|r| r.theorem == TheoremId::Fw13)
            .unwrap();
        assert!(fw.tight);

        let second = out[1].search.as_ref().unwrap();
        assert_eq!(second.max_size, 4);
        let sn = out[1]
            .reports
            .iter()
            .find(|r| r.theorem == TheoremId::Snevily15)
            .unwrap();
        assert!(sn.tight);
        assert!(out.iter().all(|c| c.anomalies.is_empty()));
    }

    #[test]
    fn tightness_scan_star_vs_triangle() {
        let grid = vec![GridCell {
            n: 5,
            l: lset(&[1]),
            k: Some(KSet::new(vec![2]).unwrap()),
            h: 2,
        }];
        let out = tightness_scan(&grid, Duration::from_secs(30), 1);
        assert_eq!(out[0].search.as_ref().unwrap().max_size, 4);
        assert!(out[0].anomalies.is_empty());
    }
}
