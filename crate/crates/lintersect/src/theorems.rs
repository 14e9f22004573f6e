//! Bound formulas and hypothesis checking for the intersection theorems.
//!
//! Every bound is computed even when a hypothesis fails; the report then
//! carries the failed verdicts and is flagged non-applicable, so users can
//! explore where a theorem breaks.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exact::{
    binom, binom_sum, rational_floor, ArithError, ExactRational, Natural,
};
use crate::family::{FamilyError, KSet, LSet, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Ekr11,
    Tint12,
    Fw13,
    Abs14,
    Snevily15,
    Conj16,
    Thm17,
    Cor18,
    Fs19,
    Fs110,
    Lemma32,
    Prop33,
    Gs34,
    Thm35,
    Lemma36,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::Ekr11,
        TheoremId::Tint12,
        TheoremId::Fw13,
        TheoremId::Abs14,
        TheoremId::Snevily15,
        TheoremId::Conj16,
        TheoremId::Thm17,
        TheoremId::Cor18,
        TheoremId::Fs19,
        TheoremId::Fs110,
        TheoremId::Lemma32,
        TheoremId::Prop33,
        TheoremId::Gs34,
        TheoremId::Thm35,
        TheoremId::Lemma36,
    ];
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::Ekr11 => "EKR_1_1",
            TheoremId::Tint12 => "TINT_1_2",
            TheoremId::Fw13 => "FW_1_3",
            TheoremId::Abs14 => "ABS_1_4",
            TheoremId::Snevily15 => "SNEVILY_1_5",
            TheoremId::Conj16 => "CONJ_1_6",
            TheoremId::Thm17 => "THM_1_7",
            TheoremId::Cor18 => "COR_1_8",
            TheoremId::Fs19 => "FS_1_9",
            TheoremId::Fs110 => "FS_1_10",
            TheoremId::Lemma32 => "LEMMA_3_2",
            TheoremId::Prop33 => "PROP_3_3",
            TheoremId::Gs34 => "GS_3_4",
            TheoremId::Thm35 => "THM_3_5",
            TheoremId::Lemma36 => "LEMMA_3_6",
        };
        f.write_str(s)
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ekr" | "ekr_1_1" => Ok(TheoremId::Ekr11),
            "tint" | "tint_1_2" => Ok(TheoremId::Tint12),
            "fw" | "fw_1_3" => Ok(TheoremId::Fw13),
            "abs" | "abs_1_4" => Ok(TheoremId::Abs14),
            "snevily" | "snevily_1_5" => Ok(TheoremId::Snevily15),
            "conj16" | "conj_1_6" => Ok(TheoremId::Conj16),
            "thm17" | "thm_1_7" => Ok(TheoremId::Thm17),
            "cor18" | "cor_1_8" => Ok(TheoremId::Cor18),
            "fs9" | "fs_1_9" => Ok(TheoremId::Fs19),
            "fs10" | "fs_1_10" => Ok(TheoremId::Fs110),
            "lemma32" | "lemma_3_2" => Ok(TheoremId::Lemma32),
            "prop33" | "prop_3_3" => Ok(TheoremId::Prop33),
            "gs34" | "gs_3_4" => Ok(TheoremId::Gs34),
            "thm35" | "thm_3_5" => Ok(TheoremId::Thm35),
            "lemma36" | "lemma_3_6" => Ok(TheoremId::Lemma36),
            other => Err(format!("unknown theorem id {other:?}")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TheoremError {
    #[error("{theorem} requires parameter {param}")]
    MissingParameter { theorem: TheoremId, param: &'static str },
    #[error("{theorem}: {msg}")]
    Mismatch { theorem: TheoremId, msg: String },
    #[error("t = {t} exceeds k = {k}")]
    TExceedsK { t: u64, k: u64 },
    #[error("l1 = {l1} exceeds n = {n}")]
    L1ExceedsN { l1: u64, n: u64 },
    #[error("intersection arity must be at least {min}, got {got}")]
    ArityTooSmall { min: u64, got: u64 },
    #[error("n must be positive")]
    ZeroN,
    #[error("l1 must be positive")]
    ZeroL1,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// C(n-1, k-1): the Erdos-Ko-Rado bound for k-uniform intersecting families.
pub fn ekr_bound(n: u64, k: u64) -> Natural {
    binom(n - 1, k as i64 - 1)
}

/// C(n-t, k-t): the t-intersecting bound.
pub fn t_intersecting_bound(n: u64, k: u64, t: u64) -> Result<Natural, TheoremError> {
    if t > k {
        return Err(TheoremError::TExceedsK { t, k });
    }
    Ok(binom(n - t.min(n), (k - t) as i64))
}

/// Sum of C(n, i) for 0 <= i <= s: the Frankl-Wilson bound.
pub fn frankl_wilson_bound(n: u64, s: u64) -> Natural {
    binom_sum(n, 0, s as i64).expect("0 <= s")
}

/// Sum of C(n, i) for s-r+1 <= i <= s: the Alon-Babai-Suzuki bound.
pub fn abs_bound(n: u64, s: u64, r: u64) -> Natural {
    binom_sum(n, s as i64 - r as i64 + 1, s as i64).expect("r >= 1")
}

/// Sum of C(n-1, i) for 0 <= i <= s: the Snevily bound.
pub fn snevily_bound(n: u64, s: u64) -> Result<Natural, TheoremError> {
    if n == 0 {
        return Err(TheoremError::ZeroN);
    }
    Ok(binom_sum(n - 1, 0, s as i64).expect("0 <= s"))
}

/// Sum of C(n-l1, i) for s-r+1 <= i <= s.
pub fn thm17_bound(n: u64, l1: u64, s: u64, r: u64) -> Result<Natural, TheoremError> {
    if l1 > n {
        return Err(TheoremError::L1ExceedsN { l1, n });
    }
    Ok(binom_sum(n - l1, s as i64 - r as i64 + 1, s as i64).expect("r >= 1"))
}

/// C(k^2, l1+1) * s + l1: the smallest n for which the generalized bound is
/// asserted, with k the maximum member size.
pub fn thm17_threshold(k: u64, l1: u64, s: u64) -> Natural {
    binom(k * k, l1 as i64 + 1) * s + Natural::from(l1)
}

/// [C(k^2+k, l1+1) + 1] * s + l1: the pair-family threshold.
pub fn prop33_threshold(k: u64, l1: u64, s: u64) -> Natural {
    (binom(k * k + k, l1 as i64 + 1) + Natural::from(1u32)) * s + Natural::from(l1)
}

/// C(k^2+k, l1+1) * s + l1: the threshold used by the k-wise size-exclusion
/// bound.
pub fn lemma36_threshold(k: u64, l1: u64, s: u64) -> Natural {
    binom(k * k + k, l1 as i64 + 1) * s + Natural::from(l1)
}

/// Default k when none is supplied: the smallest member size permitted by
/// the hypothesis k_i > s - r + l1.
pub fn default_thm17_k(l1: u64, s: u64, r: u64) -> u64 {
    (s + l1 + 1).saturating_sub(r).max(1)
}

/// Default k for the full-sum corollary: the largest member size of the
/// extremal construction.
pub fn cor18_threshold_k(l1: u64, s: u64) -> u64 {
    (s + l1).max(1)
}

/// (h+s-1)/(s+1) * C(n-l1, s) + sum_{i<=s-1} C(n-l1, i), as an exact
/// rational. The integer bound on a family size is its floor.
pub fn fs_kwise_bound(h: u64, n: u64, s: u64, l1: u64) -> Result<ExactRational, TheoremError> {
    if h < 3 {
        return Err(TheoremError::ArityTooSmall { min: 3, got: h });
    }
    if l1 > n {
        return Err(TheoremError::L1ExceedsN { l1, n });
    }
    let lead = ExactRational::new(BigInt::from(h + s - 1), BigInt::from(s + 1));
    let top = ExactRational::from_integer(BigInt::from(binom(n - l1, s as i64)));
    let tail = ExactRational::from_integer(BigInt::from(
        binom_sum(n - l1, 0, s as i64 - 1).expect("s >= 1"),
    ));
    Ok(lead * top + tail)
}

/// (h-1) * sum_{i<=s} C(n-l1, i): the k-wise union-of-stars bound.
pub fn gs_kwise_bound(h: u64, n: u64, s: u64, l1: u64) -> Result<Natural, TheoremError> {
    if h < 2 {
        return Err(TheoremError::ArityTooSmall { min: 2, got: h });
    }
    if l1 > n {
        return Err(TheoremError::L1ExceedsN { l1, n });
    }
    Ok(binom_sum(n - l1, 0, s as i64).expect("0 <= s") * (h - 1))
}

/// C(n-l1, s) + (h-1) * sum_{i<=s-1} C(n-l1, i): the size-exclusion bound.
pub fn lemma36_bound(h: u64, n: u64, s: u64, l1: u64) -> Result<Natural, TheoremError> {
    if h < 3 {
        return Err(TheoremError::ArityTooSmall { min: 3, got: h });
    }
    if l1 == 0 {
        return Err(TheoremError::ZeroL1);
    }
    if l1 > n {
        return Err(TheoremError::L1ExceedsN { l1, n });
    }
    Ok(binom(n - l1, s as i64)
        + binom_sum(n - l1, 0, s as i64 - 1).expect("s >= 1") * (h - 1))
}

/// Sum of C(n, i) for 0 <= i <= s: the cross-intersecting pair bound.
pub fn lemma32_bound(n: u64, s: u64) -> Natural {
    binom_sum(n, 0, s as i64).expect("0 <= s")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisVerdict {
    pub description: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Integer(Natural),
    Rational(ExactRational),
}

impl BoundValue {
    pub fn effective(&self) -> Natural {
        match self {
            BoundValue::Integer(n) => n.clone(),
            BoundValue::Rational(r) => rational_floor(r),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Integer(n) => write!(f, "{n}"),
            BoundValue::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// Per-theorem report: hypothesis verdicts, the exact bound, and how the
/// observed family compares against it.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<HypothesisVerdict>,
    pub bound: BoundValue,
    pub effective_bound: Natural,
    pub family_size: usize,
    pub within_bound: bool,
    pub tight: bool,
    /// All hypotheses passed; bound verdicts only certify anything when true.
    pub applicable: bool,
    /// For the equality clauses: when tight above the strict threshold, did
    /// the family contain a common l1-subset?
    pub common_core: Option<bool>,
}

impl TheoremReport {
    pub fn from_bound(
        theorem: TheoremId,
        hypotheses: Vec<HypothesisVerdict>,
        bound: BoundValue,
        family_size: usize,
    ) -> Self {
        let effective_bound = bound.effective();
        let within_bound = Natural::from(family_size) <= effective_bound;
        let tight = within_bound && Natural::from(family_size) == effective_bound;
        let applicable = hypotheses.iter().all(|h| h.verdict == Verdict::Pass);
        TheoremReport {
            theorem,
            hypotheses,
            bound,
            effective_bound,
            family_size,
            within_bound,
            tight,
            applicable,
            common_core: None,
        }
    }
}

/// Options for the k-wise theorems: the intersection arity and whether the
/// user asserts the unspecified n >= n0(k, s) threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KwiseParams {
    pub h: u64,
    pub assert_n0: bool,
}

impl KwiseParams {
    pub fn new(h: u64) -> Self {
        KwiseParams { h, assert_n0: false }
    }
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn pairwise_min_intersection(fam: &SetFamily) -> Option<u64> {
    let m = fam.members();
    let mut min = None;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let size = (m[i] & m[j]).count_ones() as u64;
            min = Some(min.map_or(size, |v: u64| v.min(size)));
        }
    }
    min
}

fn uniform_size(fam: &SetFamily) -> Option<u64> {
    let sizes: Vec<u64> = fam.members().iter().map(|m| m.count_ones() as u64).collect();
    match sizes.split_first() {
        Some((&first, rest)) if rest.iter().all(|&s| s == first) => Some(first),
        _ => None,
    }
}

/// Check every hypothesis of theorem `t` against a concrete instance and
/// report the exact bound. K is required for the size-restricted theorems,
/// `kwise` for the k-wise ones.
pub fn apply_theorem(
    t: TheoremId,
    fam: &SetFamily,
    l: &LSet,
    k_set: Option<&KSet>,
    kwise: Option<&KwiseParams>,
) -> Result<TheoremReport, TheoremError> {
    let n = fam.n() as u64;
    let m = fam.len();
    let s = l.s();
    let l1 = l.min();
    let kmax = fam.max_member_size() as u64;
    let mut hyps: Vec<HypothesisVerdict> = Vec::new();
    let hyp = |desc: String, v: Verdict, hyps: &mut Vec<HypothesisVerdict>| {
        hyps.push(HypothesisVerdict { description: desc, verdict: v });
    };

    let l_intersecting = fam.is_l_intersecting(l)?;

    let require_kset = |t: TheoremId| {
        k_set.ok_or(TheoremError::MissingParameter { theorem: t, param: "K" })
    };
    let require_kwise = |t: TheoremId| {
        kwise.ok_or(TheoremError::MissingParameter { theorem: t, param: "kwise" })
    };

    let mut report = match t {
        TheoremId::Ekr11 => {
            let uk = uniform_size(fam);
            let k = uk.unwrap_or(kmax).max(1);
            hyp("family is k-uniform".into(), verdict(uk.is_some()), &mut hyps);
            hyp(format!("n >= 2k ({n} >= {})", 2 * k), verdict(n >= 2 * k), &mut hyps);
            let intersecting = pairwise_min_intersection(fam).map_or(true, |v| v >= 1);
            hyp("family is intersecting".into(), verdict(intersecting), &mut hyps);
            TheoremReport::from_bound(t, hyps, BoundValue::Integer(ekr_bound(n, k)), m)
        }
        TheoremId::Tint12 => {
            // t is taken as min(L): an L-intersecting family with minimum
            // permitted size l1 is l1-intersecting.
            let t_val = l1;
            let uk = uniform_size(fam);
            let k = uk.unwrap_or(kmax).max(1);
            hyp("family is k-uniform".into(), verdict(uk.is_some()), &mut hyps);
            hyp(format!("t <= k ({t_val} <= {k})"), verdict(t_val <= k), &mut hyps);
            let t_int = pairwise_min_intersection(fam).map_or(true, |v| v >= t_val);
            hyp(format!("family is {t_val}-intersecting"), verdict(t_int), &mut hyps);
            let threshold = (t_val + 1) * (k.saturating_sub(t_val) + 1);
            hyp(
                format!("n >= (t+1)(k-t+1) ({n} >= {threshold})"),
                verdict(n >= threshold),
                &mut hyps,
            );
            let bound = binom(n - t_val.min(n), k as i64 - t_val as i64);
            TheoremReport::from_bound(t, hyps, BoundValue::Integer(bound), m)
        }
        TheoremId::Fw13 => {
            hyp("family is L-intersecting".into(), verdict(l_intersecting), &mut hyps);
            TheoremReport::from_bound(t, hyps, BoundValue::Integer(frankl_wilson_bound(n, s)), m)
        }
        TheoremId::Abs14 => {
            let kk = require_kset(t)?;
            let r = kk.r();
            let ki_ok = kk.values().iter().all(|&ki| ki as i64 > s as i64 - r as i64);
            hyp(format!("k_i > s - r for every i (s={s}, r={r})"), verdict(ki_ok), &mut hyps);
            hyp("every member size lies in K".into(), verdict(fam.sizes_in(kk)), &mut hyps);
            hyp("family is L-intersecting".into(), verdict(l_intersecting), &mut hyps);
            TheoremReport::from_bound(t, hyps, BoundValue::Integer(abs_bound(n, s, r)), m)
        }
        TheoremId::Snevily15 => {
            hyp("L consists of positive integers".into(), verdict(l1 >= 1), &mut hyps);
            hyp("family is L-intersecting".into(), verdict(l_intersecting), &mut hyps);
            TheoremReport::from_bound(t, hyps, BoundValue::Integer(snevily_bound(n, s)?), m)
        }
        TheoremId::Conj16 | TheoremId::Thm17 => {
            let kk = require_kset(t)?;
            let r = kk.r();
            let slack = if t == TheoremId::Thm17 { l1 as i64 } else { 0 };
            let ki_ok = kk
                .values()
                .iter()
                .all(|&ki| ki as i64 > s as i64 - r as i64 + slack);
            let what = if t == TheoremId::Thm17 { "s - r + l1" } else { "s - r" };
            hyp(format!("k_i > {what} for every i"), verdict(ki_ok), &mut hyps);
            hyp("every member size lies in K".into(), verdict(fam.sizes_in(kk)), &mut hyps);
            hyp("family is L-intersecting".into(), verdict(l_intersecting), &mut hyps);
            let threshold = thm17_threshold(kmax, l1, s);
            if t == TheoremId::Thm17 {
                hyp(
                    format!("n >= C(k^2, l1+1)s + l1 ({n} >= {threshold})"),
                    verdict(Natural::from(n) >= threshold),
                    &mut hyps,
                );
            }
            let mut rep = TheoremReport::from_bound(
                t,
                hyps,
                BoundValue::Integer(thm17_bound(n, l1, s, r)?),
                m,
            );
            if t == TheoremId::Thm17 && rep.tight && Natural::from(n) > threshold {
                let core = fam.common_intersection()?;
                rep.common_core = Some(core.count_ones() as u64 >= l1);
            }
            rep
        }
        TheoremId::Cor18 => {
            hyp("family is L-intersecting".into(), verdict(l_intersecting), &mut hyps);
            let threshold = thm17_threshold(kmax, l1, s);
            hyp(
                format!("n >= C(k^2, l1+1)s + l1 ({n} >= {threshold})"),
                verdict(Natural::from(n) >= threshold),
                &mut hyps,
            );
            let bound = binom_sum(n - l1.min(n), 0, s as i64)?;
            let mut rep = TheoremReport::from_bound(t, hyps, BoundValue::Integer(bound), m);
            if rep.tight && Natural::from(n) > threshold {
                let core = fam.common_intersection()?;
                rep.common_core = Some(core.count_ones() as u64 >= l1);
            }
            rep
        }
        TheoremId::Fs19 | TheoremId::Fs110 => {
            let kw = require_kwise(t)?;
            if kw.h < 3 {
                return Err(TheoremError::ArityTooSmall { min: 3, got: kw.h });
            }
            let hwise = fam.is_hwise_l_intersecting(l, kw.h as usize)?;
            hyp(format!("family is {}-wise L-intersecting", kw.h), verdict(hwise), &mut hyps);
            hyp(
                "n >= n0(k, s)".into(),
                if kw.assert_n0 { Verdict::Pass } else { Verdict::Unknown },
                &mut hyps,
            );
            let eff_l1 = if t == TheoremId::Fs110 { l1 } else { 0 };
            let bound = fs_kwise_bound(kw.h, n, s, eff_l1)?;
            TheoremReport::from_bound(t, hyps, BoundValue::Rational(bound), m)
        }
        TheoremId::Gs34 => {
            let kw = require_kwise(t)?;
            let hwise = fam.is_hwise_l_intersecting(l, kw.h as usize)?;
            hyp(format!("family is {}-wise L-intersecting", kw.h), verdict(hwise), &mut hyps);
            TheoremReport::from_bound(
                t,
                hyps,
                BoundValue::Integer(gs_kwise_bound(kw.h, n, s, 0)?),
                m,
            )
        }
        TheoremId::Thm35 => {
            let kw = require_kwise(t)?;
            let hwise = fam.is_hwise_l_intersecting(l, kw.h as usize)?;
            hyp(format!("family is {}-wise L-intersecting", kw.h), verdict(hwise), &mut hyps);
            let threshold = prop33_threshold(kmax, l1, s);
            hyp(
                format!("n >= [C(h^2+h, l1+1)+1]s + l1 ({n} >= {threshold})"),
                verdict(Natural::from(n) >= threshold),
                &mut hyps,
            );
            TheoremReport::from_bound(
                t,
                hyps,
                BoundValue::Integer(gs_kwise_bound(kw.h, n, s, l1)?),
                m,
            )
        }
        TheoremId::Lemma36 => {
            let kw = require_kwise(t)?;
            if kw.h < 3 {
                return Err(TheoremError::ArityTooSmall { min: 3, got: kw.h });
            }
            if l1 == 0 {
                return Err(TheoremError::ZeroL1);
            }
            let hwise = fam.is_hwise_l_intersecting(l, kw.h as usize)?;
            hyp(format!("family is {}-wise L-intersecting", kw.h), verdict(hwise), &mut hyps);
            let threshold = lemma36_threshold(kmax, l1, s);
            hyp(
                format!("n >= C(h^2+h, l1+1)s + l1 ({n} >= {threshold})"),
                verdict(Natural::from(n) >= threshold),
                &mut hyps,
            );
            // some l_r is missed by every (h-1)-wise intersection
            let profile = fam.hwise_profile(kw.h as usize - 1)?;
            let excluded = l.values().iter().any(|&lr| !profile.contains(&(lr as u32)));
            hyp(
                "some l_r is attained by no (k-1)-wise intersection".into(),
                verdict(excluded),
                &mut hyps,
            );
            TheoremReport::from_bound(
                t,
                hyps,
                BoundValue::Integer(lemma36_bound(kw.h, n, s, l1)?),
                m,
            )
        }
        TheoremId::Lemma32 | TheoremId::Prop33 => {
            return Err(TheoremError::Mismatch {
                theorem: t,
                msg: "requires a pair-family instance; use the pair checkers".into(),
            });
        }
    };

    report.hypotheses.retain(|h| !h.description.is_empty());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::nat;

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        let sets: Vec<Vec<u32>> = sets.iter().map(|s| s.to_vec()).collect();
        SetFamily::from_sets(n, &sets).unwrap()
    }

    fn lset(vals: &[u64]) -> LSet {
        LSet::new(vals.to_vec()).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(ekr_bound(4, 2), nat(3));
        assert_eq!(ekr_bound(6, 3), nat(10));
        assert_eq!(ekr_bound(2, 1), nat(1));

        assert_eq!(t_intersecting_bound(9, 4, 2).unwrap(), nat(21));
        assert_eq!(t_intersecting_bound(8, 4, 2).unwrap(), nat(15));
        assert_eq!(t_intersecting_bound(5, 2, 1).unwrap(), nat(4));
        assert!(t_intersecting_bound(5, 2, 3).is_err());

        assert_eq!(frankl_wilson_bound(5, 2), nat(16));
        assert_eq!(frankl_wilson_bound(4, 1), nat(5));
        assert_eq!(frankl_wilson_bound(3, 0), nat(1));

        assert_eq!(abs_bound(6, 2, 2), nat(21));
        assert_eq!(abs_bound(6, 2, 1), nat(15));
        assert_eq!(abs_bound(5, 1, 3), nat(6));

        assert_eq!(snevily_bound(5, 2).unwrap(), nat(11));
        assert_eq!(snevily_bound(4, 1).unwrap(), nat(4));
        assert_eq!(snevily_bound(2, 1).unwrap(), nat(2));

        assert_eq!(thm17_bound(7, 1, 1, 1).unwrap(), nat(6));
        assert_eq!(thm17_bound(6, 1, 2, 1).unwrap(), nat(10));
        assert_eq!(thm17_bound(10, 2, 3, 2).unwrap(), nat(84));
        assert!(thm17_bound(3, 4, 1, 1).is_err());

        assert_eq!(thm17_threshold(2, 1, 1), nat(7));
        assert_eq!(thm17_threshold(3, 1, 2), nat(73));
        assert_eq!(thm17_threshold(2, 0, 1), nat(4));

        assert_eq!(gs_kwise_bound(3, 5, 1, 0).unwrap(), nat(12));
        assert_eq!(gs_kwise_bound(2, 5, 2, 0).unwrap(), nat(16));
        assert_eq!(gs_kwise_bound(3, 6, 1, 1).unwrap(), nat(12));
        assert!(gs_kwise_bound(1, 5, 1, 0).is_err());

        assert_eq!(lemma36_bound(3, 8, 2, 1).unwrap(), nat(37));
        assert_eq!(lemma36_bound(3, 6, 1, 1).unwrap(), nat(7));
        assert_eq!(lemma36_bound(4, 8, 2, 1).unwrap(), nat(45));
        assert!(lemma36_bound(3, 8, 2, 0).is_err());

        assert_eq!(lemma32_bound(5, 2), nat(16));
        assert_eq!(lemma32_bound(4, 0), nat(1));
        assert_eq!(lemma32_bound(7, 3), nat(64));
    }

    #[test]
    fn fs_bound_values() {
        let b = fs_kwise_bound(3, 10, 2, 0).unwrap();
        assert_eq!(rational_floor(&b), nat(71));
        assert_eq!(b, crate::exact::rational_from_natural(&nat(71)));
        let b = fs_kwise_bound(3, 11, 2, 1).unwrap();
        assert_eq!(rational_floor(&b), nat(71));
        let b = fs_kwise_bound(4, 6, 1, 0).unwrap();
        assert_eq!(rational_floor(&b), nat(13));
        assert!(fs_kwise_bound(2, 10, 2, 0).is_err());
    }

    #[test]
    fn thm17_monotone_in_n() {
        for s in 1..=3u64 {
            for r in 1..=s {
                for l1 in 0..=2u64 {
                    let mut prev = Natural::from(0u32);
                    for n in l1..=20 {
                        let b = thm17_bound(n, l1, s, r).unwrap();
                        assert!(b >= prev);
                        prev = b;
                    }
                }
            }
        }
    }

    #[test]
    fn bound_nesting() {
        for n in 1..=20u64 {
            for s in 1..=4u64 {
                assert!(snevily_bound(n, s).unwrap() <= frankl_wilson_bound(n, s));
                // full-sum generalized bound with l1 >= 1 sits below Snevily
                for l1 in 1..=2u64.min(n) {
                    let full = binom_sum(n - l1, 0, s as i64).unwrap();
                    assert!(full <= snevily_bound(n, s).unwrap());
                }
                // h = 2, l1 = 0 reduces to Frankl-Wilson
                assert_eq!(gs_kwise_bound(2, n, s, 0).unwrap(), frankl_wilson_bound(n, s));
            }
        }
    }

    #[test]
    fn apply_ekr_star() {
        // frozen oracle: brute-force maximum intersecting 2-uniform family on [4] is 3
        let star = fam(4, &[&[1, 2], &[1, 3], &[1, 4]]);
        let rep = apply_theorem(
            TheoremId::Ekr11,
            &star,
            &lset(&[1]),
            Some(&KSet::new(vec![2]).unwrap()),
            None,
        )
        .unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.effective_bound, nat(3));
        assert_eq!(rep.family_size, 3);
        assert!(rep.tight);
    }

    #[test]
    fn apply_thm17_star() {
        // frozen oracle: certified clique search over 2-subsets of [7] yields 6
        let sets: Vec<Vec<u32>> = (2..=7).map(|e| vec![1, e]).collect();
        let star = SetFamily::from_sets(7, &sets).unwrap();
        let rep = apply_theorem(
            TheoremId::Thm17,
            &star,
            &lset(&[1]),
            Some(&KSet::new(vec![2]).unwrap()),
            None,
        )
        .unwrap();
        assert!(rep.applicable, "hypotheses: {:?}", rep.hypotheses);
        assert_eq!(rep.effective_bound, nat(6));
        assert!(rep.tight);
        // n = 7 equals the threshold, so the strict equality clause is not
        // triggered
        assert_eq!(rep.common_core, None);
    }

    #[test]
    fn apply_snevily_tight() {
        // frozen oracle: exhaustive search over families on [4] with pairwise
        // intersection size exactly 1 attains 4
        let f = fam(4, &[&[1], &[1, 2], &[1, 3], &[1, 4]]);
        let rep = apply_theorem(TheoremId::Snevily15, &f, &lset(&[1]), None, None).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.effective_bound, nat(4));
        assert!(rep.tight);
    }

    #[test]
    fn apply_reports_failed_hypotheses() {
        // 8 < (t+1)(k-t+1) = 9: bound still computed, flagged inapplicable
        let f = fam(8, &[&[1, 2, 3, 4], &[1, 2, 5, 6]]);
        let rep = apply_theorem(TheoremId::Tint12, &f, &lset(&[2, 3]), None, None).unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.effective_bound, nat(15));
    }

    #[test]
    fn apply_requires_parameters() {
        let f = fam(4, &[&[1, 2], &[1, 3]]);
        assert_eq!(
            apply_theorem(TheoremId::Abs14, &f, &lset(&[1]), None, None),
            Err(TheoremError::MissingParameter { theorem: TheoremId::Abs14, param: "K" })
        );
        assert_eq!(
            apply_theorem(TheoremId::Gs34, &f, &lset(&[1]), None, None),
            Err(TheoremError::MissingParameter { theorem: TheoremId::Gs34, param: "kwise" })
        );
        assert!(apply_theorem(TheoremId::Lemma32, &f, &lset(&[1]), None, None).is_err());
    }

    #[test]
    fn theorem_id_roundtrip() {
        for id in TheoremId::ALL {
            let s = id.to_string();
            assert_eq!(s.parse::<TheoremId>().unwrap(), id);
        }
        assert!("bogus".parse::<TheoremId>().is_err());
    }

    #[test]
    fn never_tight_without_within() {
        let f = fam(6, &[&[1, 2], &[1, 3], &[1, 4], &[1, 5], &[1, 6], &[2, 3]]);
        for id in [TheoremId::Fw13, TheoremId::Snevily15, TheoremId::Cor18] {
            if let Ok(rep) = apply_theorem(id, &f, &lset(&[1]), None, None) {
                assert!(!rep.tight || rep.within_bound);
            }
        }
    }
}
