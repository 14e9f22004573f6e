//! Finite set systems on a ground set [n], stored as single-word bitsets.
//!
//! Members are u64 masks with element i in 1..=n mapped to bit i-1, so an
//! intersection size is one AND plus a popcount. The search engine relies
//! on this being cheap; the ground set is therefore capped at 64 elements.

use std::fmt::Write as _;

use thiserror::Error;

pub const MAX_GROUND: u32 = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("ground set size must be between 1 and {MAX_GROUND}, got {0}")]
    GroundSetSize(u64),
    #[error("member {index} contains elements outside 1..={n}")]
    MemberOutOfRange { index: usize, n: u32 },
    #[error("duplicate member at position {index}")]
    DuplicateMember { index: usize },
    #[error("family has {got} members but at least {needed} are required")]
    TooFewMembers { needed: usize, got: usize },
    #[error("intersection arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("values must be strictly increasing: {0:?}")]
    NotStrictlyIncreasing(Vec<u64>),
    #[error("member sizes must be positive: {0:?}")]
    NonPositiveSize(Vec<u64>),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: element {element} out of range 1..={n}")]
    ElementOutOfRange { line: usize, element: u64, n: u32 },
    #[error("line {line}: duplicate member")]
    DuplicateMemberLine { line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self, FamilyError> {
        if n == 0 || n > MAX_GROUND {
            return Err(FamilyError::GroundSetSize(n as u64));
        }
        Ok(GroundSet { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

/// An ordered family of distinct subsets of [n]. Order is significant:
/// several checkers impose conditions indexed by i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<u64>,
}

pub fn mask_from_elements(elements: &[u32]) -> u64 {
    elements.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
}

pub fn elements_from_mask(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let b = mask.trailing_zeros();
        out.push(b + 1);
        mask &= mask - 1;
    }
    out
}

impl SetFamily {
    pub fn new(ground: GroundSet, members: Vec<u64>) -> Result<Self, FamilyError> {
        let full = ground.full_mask();
        for (index, &m) in members.iter().enumerate() {
            if m & !full != 0 {
                return Err(FamilyError::MemberOutOfRange { index, n: ground.n });
            }
            if members[..index].contains(&m) {
                return Err(FamilyError::DuplicateMember { index });
            }
        }
        Ok(SetFamily { ground, members })
    }

    pub fn from_sets(n: u32, sets: &[Vec<u32>]) -> Result<Self, FamilyError> {
        let ground = GroundSet::new(n)?;
        let mut members = Vec::with_capacity(sets.len());
        for (index, s) in sets.iter().enumerate() {
            if s.iter().any(|&e| e == 0 || e > n) {
                return Err(FamilyError::MemberOutOfRange { index, n });
            }
            members.push(mask_from_elements(s));
        }
        SetFamily::new(ground, members)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> u32 {
        self.ground.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn member_elements(&self, i: usize) -> Vec<u32> {
        elements_from_mask(self.members[i])
    }

    pub fn max_member_size(&self) -> u32 {
        self.members.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// True iff |A_i ∩ A_j| ∈ L for every pair i != j. Errors on families
    /// with fewer than two members; the degenerate case must be handled by
    /// the caller explicitly.
    pub fn is_l_intersecting(&self, l: &LSet) -> Result<bool, FamilyError> {
        if self.members.len() < 2 {
            return Err(FamilyError::TooFewMembers { needed: 2, got: self.members.len() });
        }
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                let size = (self.members[i] & self.members[j]).count_ones() as u64;
                if !l.contains(size) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True iff every h distinct members intersect in a size belonging to L.
    pub fn is_hwise_l_intersecting(&self, l: &LSet, h: usize) -> Result<bool, FamilyError> {
        if h < 2 {
            return Err(FamilyError::ArityTooSmall(h));
        }
        if self.members.len() < h {
            return Err(FamilyError::TooFewMembers { needed: h, got: self.members.len() });
        }
        fn rec(members: &[u64], l: &LSet, left: usize, start: usize, running: u64) -> bool {
            if left == 0 {
                return l.contains(running.count_ones() as u64);
            }
            // a partial intersection already below min(L) can only shrink
            if (running.count_ones() as u64) < l.min() {
                return false;
            }
            for i in start..=members.len() - left {
                if !rec(members, l, left - 1, i + 1, running & members[i]) {
                    return false;
                }
            }
            true
        }
        let full = self.ground.full_mask();
        Ok(rec(&self.members, l, h, 0, full))
    }

    /// True iff every member size belongs to K (vacuously true when empty).
    pub fn sizes_in(&self, k: &KSet) -> bool {
        self.members.iter().all(|m| k.contains(m.count_ones() as u64))
    }

    /// Intersection of all members. Errors on the empty family.
    pub fn common_intersection(&self) -> Result<u64, FamilyError> {
        if self.members.is_empty() {
            return Err(FamilyError::TooFewMembers { needed: 1, got: 0 });
        }
        Ok(self.members.iter().fold(self.ground.full_mask(), |a, &m| a & m))
    }

    /// Multiset of pairwise intersection sizes over i < j, sorted.
    pub fn pair_profile(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                out.push((self.members[i] & self.members[j]).count_ones());
            }
        }
        out.sort_unstable();
        out
    }

    /// Multiset of |A_{i1} ∩ ... ∩ A_{ih}| over all h-subsets of indices, sorted.
    pub fn hwise_profile(&self, h: usize) -> Result<Vec<u32>, FamilyError> {
        if h < 2 {
            return Err(FamilyError::ArityTooSmall(h));
        }
        if self.members.len() < h {
            return Err(FamilyError::TooFewMembers { needed: h, got: self.members.len() });
        }
        let mut out = Vec::new();
        fn rec(members: &[u64], left: usize, start: usize, running: u64, out: &mut Vec<u32>) {
            if left == 0 {
                out.push(running.count_ones());
                return;
            }
            for i in start..=members.len() - left {
                rec(members, left - 1, i + 1, running & members[i], out);
            }
        }
        rec(&self.members, h, 0, self.ground.full_mask(), &mut out);
        out.sort_unstable();
        Ok(out)
    }
}

/// Intersection profile of a family: the pairwise multiset plus h-wise
/// multisets on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub pair_sizes: Vec<u32>,
}

impl IntersectionProfile {
    pub fn of(fam: &SetFamily) -> Self {
        IntersectionProfile { pair_sizes: fam.pair_profile() }
    }

    pub fn hwise_sizes(fam: &SetFamily, h: usize) -> Result<Vec<u32>, FamilyError> {
        fam.hwise_profile(h)
    }
}

/// Strictly increasing set of permitted intersection sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSet {
    values: Vec<u64>,
}

impl LSet {
    pub fn new(values: Vec<u64>) -> Result<Self, FamilyError> {
        if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FamilyError::NotStrictlyIncreasing(values));
        }
        Ok(LSet { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// s, the number of permitted sizes.
    pub fn s(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn min(&self) -> u64 {
        self.values[0]
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

/// Strictly increasing set of permitted member sizes (all positive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSet {
    values: Vec<u64>,
}

impl KSet {
    pub fn new(values: Vec<u64>) -> Result<Self, FamilyError> {
        if values.iter().any(|&v| v == 0) {
            return Err(FamilyError::NonPositiveSize(values));
        }
        if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FamilyError::NotStrictlyIncreasing(values));
        }
        Ok(KSet { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// r, the number of permitted sizes.
    pub fn r(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn max(&self) -> u64 {
        *self.values.last().unwrap()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

/// Parse the family file format: first line "n=<int>", then one member per
/// line as "{a,b,c}" with ascending distinct elements ("{}" for the empty
/// set). "#" starts a comment; blank lines are ignored.
pub fn parse_family(text: &str) -> Result<SetFamily, FamilyError> {
    let mut ground: Option<GroundSet> = None;
    let mut members: Vec<u64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match ground {
            None => {
                let n = content
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse::<u32>().ok())
                    .ok_or_else(|| FamilyError::Parse {
                        line,
                        msg: format!("expected header \"n=<int>\", got {content:?}"),
                    })?;
                ground = Some(GroundSet::new(n)?);
            }
            Some(g) => {
                let body = content
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| FamilyError::Parse {
                        line,
                        msg: format!("expected member line \"{{a,b,c}}\", got {content:?}"),
                    })?;
                let mut mask = 0u64;
                let mut prev: Option<u64> = None;
                if !body.trim().is_empty() {
                    for part in body.split(',') {
                        let element =
                            part.trim().parse::<u64>().map_err(|_| FamilyError::Parse {
                                line,
                                msg: format!("bad element {:?}", part.trim()),
                            })?;
                        if element == 0 || element > g.n() as u64 {
                            return Err(FamilyError::ElementOutOfRange { line, element, n: g.n() });
                        }
                        if let Some(p) = prev {
                            if element <= p {
                                return Err(FamilyError::Parse {
                                    line,
                                    msg: format!(
                                        "elements must be ascending and distinct ({p} then {element})"
                                    ),
                                });
                            }
                        }
                        prev = Some(element);
                        mask |= 1u64 << (element - 1);
                    }
                }
                if members.contains(&mask) {
                    return Err(FamilyError::DuplicateMemberLine { line });
                }
                members.push(mask);
            }
        }
    }
    let ground = ground.ok_or_else(|| FamilyError::Parse {
        line: text.lines().count() + 1,
        msg: "missing header \"n=<int>\"".to_string(),
    })?;
    SetFamily::new(ground, members)
}

pub fn serialize_family(fam: &SetFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n={}", fam.n());
    for i in 0..fam.len() {
        let elems = fam.member_elements(i);
        let parts: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{{{}}}", parts.join(","));
    }
    out
}
