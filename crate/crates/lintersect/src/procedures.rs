//! Constructive procedures extracted from the proofs: Helly-type witness
//! extraction, the union and cross-intersecting lemma checks, pair-family
//! condition validation, the k-wise partition construction, and common-core
//! extraction.
//!
//! The check_* operations separate precondition violations (errors) from
//! lemma conclusions (reported booleans). The lemmas are theorems, so a
//! false conclusion on a precondition-satisfying instance indicates a bug
//! and must surface loudly.

use thiserror::Error;

use crate::exact::{binom_sum, Natural};
use crate::family::{FamilyError, GroundSet, LSet, SetFamily};
use crate::theorems::{
    lemma32_bound, prop33_threshold, BoundValue, HypothesisVerdict, TheoremId, TheoremReport,
    Verdict,
};

/// Cap on (h-1)-tuple scans inside the partition procedure; exceeding it is
/// an error, never a silent truncation.
pub const TUPLE_SCAN_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum ProcedureError {
    #[error("family intersection {actual:?} does not equal the requested target {target:?}")]
    TargetMismatch { target: Vec<u32>, actual: Vec<u32> },
    #[error("family intersection must be empty")]
    NonEmptyIntersection,
    #[error("F must not be a member of the family")]
    MemberPresent,
    #[error("|F ∩ H_{index}| = {got} is below l1 = {l1}")]
    IntersectionBelowL1 { index: usize, got: u64, l1: u64 },
    #[error("l1 must be positive")]
    ZeroL1,
    #[error("members {i} and {j} are disjoint; family is not intersecting")]
    NotIntersecting { i: usize, j: usize },
    #[error("member {index} has size {got}, above the stated maximum {k}")]
    MemberTooLarge { index: usize, got: u32, k: u64 },
    #[error("family is not {h}-wise L-intersecting")]
    NotHwise { h: u64 },
    #[error("family intersection has size {got}, not below min(L) = {min_l}")]
    CoreTooLarge { got: u32, min_l: u64 },
    #[error("tuple scan exceeded the cap of {0} combinations")]
    TupleBudget(u64),
    #[error("pair instance: families have lengths {a} and {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("min(L) must be positive for this check")]
    MinLZero,
    #[error(
        "anomaly: candidate core {core:?} is not contained in member {index}; \
         this contradicts the corollary"
    )]
    CoreAnomaly { core: Vec<u32>, index: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A small subfamily whose intersection equals the whole family's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HellyWitness {
    pub indices: Vec<usize>,
    pub achieved_intersection: u64,
}

/// Greedy witness extraction: starting from the first member, repeatedly add
/// the first member that strictly shrinks the running intersection. Each
/// step removes at least one element of an at-most-k-element set, so at most
/// k+1 members are used, matching the Helly-type lemmas.
pub fn helly_witness(fam: &SetFamily, target: u64) -> Result<HellyWitness, ProcedureError> {
    let full = fam.common_intersection()?;
    if full != target {
        return Err(ProcedureError::TargetMismatch {
            target: crate::family::elements_from_mask(target),
            actual: crate::family::elements_from_mask(full),
        });
    }
    let members = fam.members();
    let mut running = members[0];
    let mut indices = vec![0usize];
    while running != target {
        let j = members
            .iter()
            .position(|&m| (running & m) != running)
            .expect("full intersection equals target, so a shrinking member exists");
        running &= members[j];
        indices.push(j);
    }
    Ok(HellyWitness { indices, achieved_intersection: running })
}

/// Union lemma: with the whole family intersecting F in at least l1 elements
/// and an empty total intersection, the union Q must meet F in at least
/// l1+1 elements. `ok = false` is a bug detector, not a data verdict.
pub fn check_lemma22(
    h_fam: &SetFamily,
    f: u64,
    l1: u64,
) -> Result<(u64, bool), ProcedureError> {
    if l1 == 0 {
        return Err(ProcedureError::ZeroL1);
    }
    if h_fam.common_intersection()? != 0 {
        return Err(ProcedureError::NonEmptyIntersection);
    }
    if h_fam.members().contains(&f) {
        return Err(ProcedureError::MemberPresent);
    }
    for (index, &m) in h_fam.members().iter().enumerate() {
        let got = (f & m).count_ones() as u64;
        if got < l1 {
            return Err(ProcedureError::IntersectionBelowL1 { index, got, l1 });
        }
    }
    let q = h_fam.members().iter().fold(0u64, |a, &m| a | m);
    let ok = (q & f).count_ones() as u64 >= l1 + 1;
    Ok((q, ok))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionBoundCheck {
    pub union_size: Natural,
    pub bound: Natural,
    pub ok: bool,
}

/// |∪H| <= k + (t-1)(k-1) for an intersecting family of t members with
/// maximum size k.
pub fn check_union_bound(h_fam: &SetFamily, k: u64) -> Result<UnionBoundCheck, ProcedureError> {
    let t = h_fam.len();
    if t < 2 {
        return Err(ProcedureError::Family(FamilyError::TooFewMembers { needed: 2, got: t }));
    }
    let members = h_fam.members();
    for (index, &m) in members.iter().enumerate() {
        let size = m.count_ones();
        if size as u64 > k {
            return Err(ProcedureError::MemberTooLarge { index, got: size, k });
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            if members[i] & members[j] == 0 {
                return Err(ProcedureError::NotIntersecting { i, j });
            }
        }
    }
    let union = members.iter().fold(0u64, |a, &m| a | m);
    let union_size = Natural::from(union.count_ones());
    let bound = Natural::from(k + (t as u64 - 1) * (k - 1));
    let ok = union_size <= bound;
    Ok(UnionBoundCheck { union_size, bound, ok })
}

/// A pair of equally long member lists over one ground set, as used by the
/// cross-intersecting lemma and the partition validation. The companion
/// list may repeat masks, so it is held as raw members rather than a
/// SetFamily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFamilyInstance {
    pub ground: GroundSet,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub l: LSet,
}

impl PairFamilyInstance {
    pub fn new(
        ground: GroundSet,
        a: Vec<u64>,
        b: Vec<u64>,
        l: LSet,
    ) -> Result<Self, ProcedureError> {
        if a.len() != b.len() {
            return Err(ProcedureError::LengthMismatch { a: a.len(), b: b.len() });
        }
        let full = ground.full_mask();
        for (index, &m) in a.iter().chain(b.iter()).enumerate() {
            if m & !full != 0 {
                return Err(ProcedureError::Family(FamilyError::MemberOutOfRange {
                    index: index % a.len().max(1),
                    n: ground.n(),
                }));
            }
        }
        Ok(PairFamilyInstance { ground, a, b, l })
    }

    pub fn from_families(a: &SetFamily, b: &SetFamily, l: LSet) -> Result<Self, ProcedureError> {
        PairFamilyInstance::new(a.ground(), a.members().to_vec(), b.members().to_vec(), l)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Cross-intersecting pair check: (i) |A_i ∩ B_j| ∈ L for i < j and
/// (ii) |A_i ∩ B_i| ∉ L for all i; reports m against the pair bound.
pub fn check_lemma32_instance(inst: &PairFamilyInstance) -> TheoremReport {
    let m = inst.len();
    let cond_i = (0..m).all(|i| {
        (i + 1..m).all(|j| inst.l.contains((inst.a[i] & inst.b[j]).count_ones() as u64))
    });
    let cond_ii = (0..m).all(|i| !inst.l.contains((inst.a[i] & inst.b[i]).count_ones() as u64));
    let hyps = vec![
        HypothesisVerdict {
            description: "(i) |A_i ∩ B_j| ∈ L for all i < j".into(),
            verdict: if cond_i { Verdict::Pass } else { Verdict::Fail },
        },
        HypothesisVerdict {
            description: "(ii) |A_i ∩ B_i| ∉ L for all i".into(),
            verdict: if cond_ii { Verdict::Pass } else { Verdict::Fail },
        },
    ];
    let bound = lemma32_bound(inst.ground.n() as u64, inst.l.s());
    TheoremReport::from_bound(TheoremId::Lemma32, hyps, BoundValue::Integer(bound), m)
}

/// Pair-family validation with the nested-companion conditions (i)-(iii) and
/// the n-threshold; reports m against the full generalized sum.
pub fn check_prop33_instance(
    inst: &PairFamilyInstance,
    k: u64,
) -> Result<TheoremReport, ProcedureError> {
    if inst.l.min() == 0 {
        return Err(ProcedureError::MinLZero);
    }
    let m = inst.len();
    let n = inst.ground.n() as u64;
    let l1 = inst.l.min();
    let s = inst.l.s();
    let kb = inst.b.iter().map(|m| m.count_ones() as u64).max().unwrap_or(0);
    let prefix = ((k + 1) as usize).min(m);

    let mut hyps = Vec::new();
    let push = |desc: &str, ok: bool, hyps: &mut Vec<HypothesisVerdict>| {
        hyps.push(HypothesisVerdict {
            description: desc.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        });
    };

    push("k equals the maximum member size in B", k == kb, &mut hyps);

    let cond_i = (0..m).all(|i| {
        (i + 1..m).all(|j| inst.l.contains((inst.a[i] & inst.b[j]).count_ones() as u64))
    });
    push("(i) |A_i ∩ B_j| ∈ L for all i < j", cond_i, &mut hyps);

    let nested = (0..m).all(|i| inst.b[i] & !inst.a[i] == 0);
    let diag = (prefix..m).all(|i| !inst.l.contains((inst.a[i] & inst.b[i]).count_ones() as u64));
    push(
        "(ii) B_i ⊆ A_i for all i and |A_i ∩ B_i| ∉ L for i ≥ k+2",
        nested && diag,
        &mut hyps,
    );

    let full = inst.ground.full_mask();
    let all_core = inst.b.iter().fold(full, |a, &m| a & m);
    let prefix_core = inst.b[..prefix].iter().fold(full, |a, &m| a & m);
    let prefix_eq = inst.a[..prefix] == inst.b[..prefix];
    let cond_iii =
        prefix_core == all_core && (all_core.count_ones() as u64) < l1 && prefix_eq;
    push(
        "(iii) ∩_{j≤k+1} B_j = ∩ B with size < l1, and A_i = B_i for i ≤ k+1",
        cond_iii,
        &mut hyps,
    );

    let threshold = prop33_threshold(k, l1, s);
    push(
        &format!("n >= [C(k^2+k, l1+1)+1]s + l1 ({n} >= {threshold})"),
        Natural::from(n) >= threshold,
        &mut hyps,
    );

    let bound = binom_sum(n - l1.min(n), 0, s as i64).expect("0 <= s");
    Ok(TheoremReport::from_bound(TheoremId::Prop33, hyps, BoundValue::Integer(bound), m))
}

/// Result of the k-wise partition construction. After applying `reorder` to
/// the input indices, `b` followed by `f` is the input family; `c` is the
/// companion list for `b` with `c[i] ⊆ b[i]`, equal on the first k+1 entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub b: SetFamily,
    pub c: Vec<u64>,
    pub f: SetFamily,
    pub reorder: Vec<usize>,
}

/// The partition procedure from the k-wise bound proof: reorder so a Helly
/// witness prefix of k+1 members achieves the full intersection, seed B = C
/// with that prefix, then repeatedly extract the smallest-index member of
/// the lexicographically first (h-1)-tuple of remaining members whose
/// intersection size is not in L, recording that intersection as the
/// companion. F is what remains.
pub fn kwise_partition(
    fam: &SetFamily,
    l: &LSet,
    h: u64,
) -> Result<PartitionResult, ProcedureError> {
    if h < 3 {
        return Err(ProcedureError::Family(FamilyError::ArityTooSmall(h as usize)));
    }
    if !fam.is_hwise_l_intersecting(l, h as usize)? {
        return Err(ProcedureError::NotHwise { h });
    }
    let core = fam.common_intersection()?;
    let core_size = core.count_ones();
    // With min(L) = 0 the strict inequality is unsatisfiable; the procedure
    // then requires an empty total intersection.
    if (l.min() == 0 && core != 0) || (l.min() > 0 && core_size as u64 >= l.min()) {
        return Err(ProcedureError::CoreTooLarge { got: core_size, min_l: l.min() });
    }

    let m = fam.len();
    let k = fam.max_member_size() as usize;
    let prefix_len = (k + 1).min(m);

    // reorder: helly witness indices first, then the rest in input order
    let witness = helly_witness(fam, core)?;
    let mut reorder: Vec<usize> = witness.indices.clone();
    for i in 0..m {
        if !reorder.contains(&i) {
            reorder.push(i);
        }
    }
    let ordered: Vec<u64> = reorder.iter().map(|&i| fam.members()[i]).collect();

    let mut b: Vec<u64> = ordered[..prefix_len].to_vec();
    let mut c: Vec<u64> = b.clone();
    let mut remaining: Vec<u64> = ordered[prefix_len..].to_vec();
    let mut remaining_orig: Vec<usize> = reorder[prefix_len..].to_vec();

    let tuple_size = (h - 1) as usize;
    let mut scanned: u64 = 0;
    loop {
        if remaining.len() < tuple_size {
            break;
        }
        // lexicographically first violating (h-1)-tuple over the remaining
        // members in their current order
        let violation = first_violating_tuple(&remaining, l, tuple_size, &mut scanned)?;
        match violation {
            Some((first_index, intersection)) => {
                b.push(remaining.remove(first_index));
                c.push(intersection);
                let orig = remaining_orig.remove(first_index);
                // keep reorder consistent: move this original index to the
                // position right after the current B block
                let pos = reorder.iter().position(|&x| x == orig).unwrap();
                let val = reorder.remove(pos);
                reorder.insert(b.len() - 1, val);
            }
            None => break,
        }
    }

    let b_fam = SetFamily::new(fam.ground(), b)?;
    let f_fam = SetFamily::new(fam.ground(), remaining)?;
    Ok(PartitionResult { b: b_fam, c, f: f_fam, reorder })
}

/// Scans (h-1)-tuples in lexicographic index order; returns the index of the
/// smallest member of the first tuple whose intersection size is not in L,
/// together with that intersection.
fn first_violating_tuple(
    members: &[u64],
    l: &LSet,
    tuple_size: usize,
    scanned: &mut u64,
) -> Result<Option<(usize, u64)>, ProcedureError> {
    fn rec(
        members: &[u64],
        l: &LSet,
        left: usize,
        start: usize,
        running: u64,
        first: usize,
        scanned: &mut u64,
    ) -> Result<Option<(usize, u64)>, ProcedureError> {
        if left == 0 {
            *scanned += 1;
            if *scanned > TUPLE_SCAN_CAP {
                return Err(ProcedureError::TupleBudget(TUPLE_SCAN_CAP));
            }
            if !l.contains(running.count_ones() as u64) {
                return Ok(Some((first, running)));
            }
            return Ok(None);
        }
        for i in start..=members.len() - left {
            let f = if first == usize::MAX { i } else { first };
            if let Some(hit) = rec(members, l, left - 1, i + 1, running & members[i], f, scanned)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }
    if members.len() < tuple_size {
        return Ok(None);
    }
    rec(members, l, tuple_size, 0, u64::MAX, usize::MAX, scanned)
}

/// Common-core extraction: if some h-1 distinct members intersect in exactly
/// min(L) elements, that intersection is contained in every member and is
/// returned. Absent when no such tuple exists.
pub fn find_common_core(
    fam: &SetFamily,
    l: &LSet,
    h: u64,
) -> Result<Option<u64>, ProcedureError> {
    if h < 3 {
        return Err(ProcedureError::Family(FamilyError::ArityTooSmall(h as usize)));
    }
    if l.min() == 0 {
        return Err(ProcedureError::MinLZero);
    }
    if !fam.is_hwise_l_intersecting(l, h as usize)? {
        return Err(ProcedureError::NotHwise { h });
    }
    let l1 = l.min();
    let tuple_size = (h - 1) as usize;
    let members = fam.members();
    if members.len() < tuple_size {
        return Ok(None);
    }
    let mut found: Option<u64> = None;
    let mut stack = Vec::new();
    fn rec(
        members: &[u64],
        l1: u64,
        left: usize,
        start: usize,
        running: u64,
        stack: &mut Vec<usize>,
        found: &mut Option<u64>,
    ) {
        if found.is_some() {
            return;
        }
        if left == 0 {
            if running.count_ones() as u64 == l1 {
                *found = Some(running);
            }
            return;
        }
        for i in start..=members.len() - left {
            stack.push(i);
            rec(members, l1, left - 1, i + 1, running & members[i], stack, found);
            stack.pop();
            if found.is_some() {
                return;
            }
        }
    }
    rec(members, l1, tuple_size, 0, u64::MAX, &mut stack, &mut found);
    if let Some(core) = found {
        for (index, &m) in members.iter().enumerate() {
            if core & !m != 0 {
                return Err(ProcedureError::CoreAnomaly {
                    core: crate::family::elements_from_mask(core),
                    index,
                });
            }
        }
        return Ok(Some(core));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::nat;
    use crate::family::mask_from_elements;

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        let sets: Vec<Vec<u32>> = sets.iter().map(|s| s.to_vec()).collect();
        SetFamily::from_sets(n, &sets).unwrap()
    }

    fn lset(vals: &[u64]) -> LSet {
        LSet::new(vals.to_vec()).unwrap()
    }

    #[test]
    fn helly_witness_triangle() {
        let f = fam(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        let w = helly_witness(&f, 0).unwrap();
        assert_eq!(w.achieved_intersection, 0);
        assert_eq!(w.indices.len(), 3);
    }

    #[test]
    fn helly_witness_pair_suffices() {
        let f = fam(2, &[&[1], &[2], &[1, 2]]);
        let w = helly_witness(&f, 0).unwrap();
        assert_eq!(w.indices, vec![0, 1]);
        assert_eq!(w.achieved_intersection, 0);
    }

    #[test]
    fn helly_witness_nonempty_target() {
        // frozen oracle: the first three members already meet the target at size 3
        let f = fam(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[1, 2, 5]]);
        let w = helly_witness(&f, mask_from_elements(&[1])).unwrap();
        assert!(w.indices.len() <= 4);
        assert_eq!(w.achieved_intersection, mask_from_elements(&[1]));
    }

    #[test]
    fn helly_witness_target_mismatch() {
        let f = fam(3, &[&[1, 2], &[1, 3]]);
        assert!(matches!(
            helly_witness(&f, 0),
            Err(ProcedureError::TargetMismatch { .. })
        ));
    }

    #[test]
    fn lemma22_examples() {
        let h = fam(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        let (q, ok) = check_lemma22(&h, mask_from_elements(&[1, 2, 3]), 1).unwrap();
        assert_eq!(q, 0b111);
        assert!(ok);

        let h_bad = fam(4, &[&[1, 2], &[1, 3]]);
        assert_eq!(
            check_lemma22(&h_bad, mask_from_elements(&[1, 4]), 1),
            Err(ProcedureError::NonEmptyIntersection)
        );

        let h = fam(4, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(
            check_lemma22(&h, mask_from_elements(&[1, 4]), 1),
            Err(ProcedureError::IntersectionBelowL1 { index: 1, got: 0, l1: 1 })
        );
    }

    #[test]
    fn union_bound_examples() {
        let h = fam(3, &[&[1, 2], &[1, 3]]);
        let c = check_union_bound(&h, 2).unwrap();
        assert_eq!((c.union_size, c.bound, c.ok), (nat(3), nat(3), true));

        let h = fam(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        let c = check_union_bound(&h, 2).unwrap();
        assert_eq!((c.union_size, c.bound, c.ok), (nat(3), nat(4), true));

        let h = fam(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            check_union_bound(&h, 2),
            Err(ProcedureError::NotIntersecting { i: 0, j: 1 })
        );
    }

    #[test]
    fn lemma32_instance_examples() {
        let g = GroundSet::new(2).unwrap();
        let a = vec![0b01u64, 0b10];
        let inst = PairFamilyInstance::new(g, a.clone(), a, lset(&[0])).unwrap();
        let rep = check_lemma32_instance(&inst);
        assert!(rep.applicable);
        assert!(rep.within_bound);
        assert_eq!(rep.effective_bound, nat(3));

        let g = GroundSet::new(3).unwrap();
        let a = vec![0b011u64, 0b101];
        let inst = PairFamilyInstance::new(g, a.clone(), a, lset(&[1])).unwrap();
        let rep = check_lemma32_instance(&inst);
        assert!(rep.applicable);

        let g = GroundSet::new(1).unwrap();
        let a = vec![0b1u64];
        let inst = PairFamilyInstance::new(g, a.clone(), a, lset(&[1])).unwrap();
        let rep = check_lemma32_instance(&inst);
        assert!(!rep.applicable);
    }

    #[test]
    fn prop33_condition_verdicts() {
        // hand-built instance: prefix of 3 mutually edge-sharing pairs, then
        // a nested companion with out-of-L self-intersection
        let g = GroundSet::new(4).unwrap();
        let a = vec![
            mask_from_elements(&[1, 2]),
            mask_from_elements(&[2, 3]),
            mask_from_elements(&[1, 3]),
            mask_from_elements(&[1, 2, 4]),
        ];
        let b = vec![a[0], a[1], a[2], mask_from_elements(&[1, 2])];
        let inst = PairFamilyInstance::new(g, a, b, lset(&[1])).unwrap();
        let rep = check_prop33_instance(&inst, 2).unwrap();
        // every condition is individually reported
        assert_eq!(rep.hypotheses.len(), 5);
        let get = |needle: &str| {
            rep.hypotheses
                .iter()
                .find(|h| h.description.contains(needle))
                .unwrap()
                .verdict
        };
        assert_eq!(get("(ii)"), Verdict::Pass);
        assert_eq!(get("(iii)"), Verdict::Pass);

        // B_i not nested in A_i fails (ii)
        let g = GroundSet::new(4).unwrap();
        let a = vec![mask_from_elements(&[1, 2]), mask_from_elements(&[2, 3])];
        let b = vec![mask_from_elements(&[1, 2]), mask_from_elements(&[1, 4])];
        let inst = PairFamilyInstance::new(g, a, b, lset(&[2])).unwrap();
        let rep = check_prop33_instance(&inst, 2).unwrap();
        let ii = rep.hypotheses.iter().find(|h| h.description.contains("(ii)")).unwrap();
        assert_eq!(ii.verdict, Verdict::Fail);

        // |∩B| >= l1 fails (iii)
        let g = GroundSet::new(4).unwrap();
        let a = vec![mask_from_elements(&[1, 2]), mask_from_elements(&[1, 3])];
        let inst = PairFamilyInstance::new(g, a.clone(), a, lset(&[1])).unwrap();
        let rep = check_prop33_instance(&inst, 2).unwrap();
        let iii = rep.hypotheses.iter().find(|h| h.description.contains("(iii)")).unwrap();
        assert_eq!(iii.verdict, Verdict::Fail);

        // min(L) = 0 is rejected outright
        let g = GroundSet::new(2).unwrap();
        let a = vec![0b01u64];
        let inst = PairFamilyInstance::new(g, a.clone(), a, lset(&[0])).unwrap();
        assert_eq!(check_prop33_instance(&inst, 1), Err(ProcedureError::MinLZero));
    }

    #[test]
    fn partition_example_from_powerset() {
        // frozen oracle: {1},{2},{1,2},∅ on [2] is 3-wise {0}-intersecting; pairs
        // with intersection size 1 exist, so the loop extracts at least one
        // member, and the remainder is 2-wise {0}-intersecting
        let f = fam(2, &[&[1], &[2], &[1, 2], &[]]);
        let l = lset(&[0]);
        let part = kwise_partition(&f, &l, 3).unwrap();
        assert_eq!(part.b.len() + part.f.len(), 4);
        assert_eq!(part.c.len(), part.b.len());
        for (bi, ci) in part.b.members().iter().zip(&part.c) {
            assert_eq!(ci & !bi, 0, "companion not nested");
        }
        // k+1 = 3 members seed B; only the empty set remains, so no pair
        // can be extracted and F = {∅}
        assert_eq!(part.b.len(), 3);
        assert_eq!(part.f.members(), &[0]);
        if part.f.len() >= 2 {
            assert!(part.f.is_l_intersecting(&l).unwrap());
        }
    }

    #[test]
    fn partition_trivial_when_no_violations() {
        // a near-matching on [6]: no element lies in three members, so every
        // triple intersection is empty and every pair intersection has size
        // 0 or 1; the extraction loop never fires
        let f = fam(6, &[&[1, 2], &[3, 4], &[5, 6], &[1, 3], &[2, 5]]);
        let l = lset(&[0, 1]);
        let part = kwise_partition(&f, &l, 3).unwrap();
        let k = f.max_member_size() as usize;
        assert_eq!(part.b.len(), k + 1);
        assert_eq!(part.f.len(), f.len() - (k + 1));
        assert!(part.f.is_l_intersecting(&l).unwrap());
    }

    #[test]
    fn partition_rejects_large_core() {
        let f = fam(4, &[&[1, 2], &[1, 3], &[1, 4]]);
        assert!(matches!(
            kwise_partition(&f, &lset(&[1, 2]), 3),
            Err(ProcedureError::CoreTooLarge { .. })
        ));
    }

    #[test]
    fn common_core_star() {
        // frozen oracle: some pair of members intersects in exactly {1}
        let sets: Vec<Vec<u32>> = vec![
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![1, 5, 6],
        ];
        let f = SetFamily::from_sets(6, &sets).unwrap();
        let l = lset(&[1, 2]);
        let core = find_common_core(&f, &l, 3).unwrap();
        assert_eq!(core, Some(mask_from_elements(&[1])));
    }

    #[test]
    fn common_core_absent() {
        // all pairwise intersections have size 2 > min(L) = 1
        let f = fam(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let l = lset(&[1, 2]);
        let core = find_common_core(&f, &l, 3).unwrap();
        assert_eq!(core, None);
    }
}
