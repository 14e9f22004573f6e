//! Subspaces of F_q^n: canonical forms, enumeration, lattice operations,
//! the q-analogue bounds, and the subspace versions of the witness and
//! span lemmas.
//!
//! A subspace is identified with the reduced row echelon form of any basis
//! matrix; RREF is unique, so equality is plain matrix equality.

use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::clique::{lex_smallest_clique, max_clique, Graph};
use crate::exact::{qbinom, ArithError, Natural, QBinomParams};
use crate::family::LSet;
use crate::gf::{FieldError, FieldSpec};

/// Cap on how many subspaces one enumeration call may produce.
pub const MAX_SUBSPACE_UNIVERSE: u64 = 1 << 20;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QspaceError {
    #[error("ambient spaces differ: ({qa}, {na}) vs ({qb}, {nb})")]
    AmbientMismatch { qa: u64, na: usize, qb: u64, nb: usize },
    #[error("row {row} has length {got}, expected {n}")]
    RowLength { row: usize, got: usize, n: usize },
    #[error("entry {value} at row {row} is not a GF({q}) digit")]
    BadDigit { row: usize, value: u8, q: u64 },
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("family has {got} members but at least {needed} are required")]
    TooFewMembers { needed: usize, got: usize },
    #[error("duplicate subspace at position {index}")]
    DuplicateMember { index: usize },
    #[error("full intersection has dimension {0}, expected 0")]
    IntersectionNotZero(usize),
    #[error("V must not be a member of the family")]
    MemberPresent,
    #[error("dim(V ∩ G_{index}) = {got} is below l1 = {l1}")]
    IntersectionBelowL1 { index: usize, got: usize, l1: u64 },
    #[error("l1 must be positive")]
    ZeroL1,
    #[error("members {i} and {j} intersect in dimension 0; family is not intersecting")]
    NotIntersecting { i: usize, j: usize },
    #[error("member {index} has dimension {got}, above the stated maximum {k}")]
    MemberTooLarge { index: usize, got: usize, k: u64 },
    #[error("T is not contained in member {index}")]
    NotContained { index: usize },
    #[error("dimension {k} exceeds the ambient dimension {n}")]
    DimTooLarge { k: usize, n: usize },
    #[error("subspace universe would have {got} members, above the cap {cap}")]
    UniverseTooLarge { got: u64, cap: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A subspace of F_q^n, stored as its canonical RREF basis matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    n: usize,
    rows: Vec<Vec<u8>>,
}

/// Reduced row echelon form over the given field; zero rows are dropped.
fn rref(field: &FieldSpec, mut rows: Vec<Vec<u8>>, ncols: usize) -> Vec<Vec<u8>> {
    let mut r = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let scale = field.inv(rows[r][col]);
        for cell in rows[r].iter_mut() {
            *cell = field.mul(*cell, scale);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in 0..ncols {
                    let sub = field.mul(factor, rows[r][c]);
                    rows[i][c] = field.sub(rows[i][c], sub);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

impl Subspace {
    pub fn new(field: FieldSpec, n: usize, rows: Vec<Vec<u8>>) -> Result<Self, QspaceError> {
        let q = field.order();
        for (row, data) in rows.iter().enumerate() {
            if data.len() != n {
                return Err(QspaceError::RowLength { row, got: data.len(), n });
            }
            if let Some(&value) = data.iter().find(|&&v| v as u64 >= q) {
                return Err(QspaceError::BadDigit { row, value, q });
            }
        }
        let rows = rref(&field, rows, n);
        Ok(Subspace { field, n, rows })
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Subspace { field, n, rows: Vec::new() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), QspaceError> {
        if self.field.order() != other.field.order() || self.n != other.n {
            return Err(QspaceError::AmbientMismatch {
                qa: self.field.order(),
                na: self.n,
                qb: other.field.order(),
                nb: other.n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, QspaceError> {
        self.same_ambient(other)?;
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        Ok(rref(&self.field, stacked, self.n).len() == self.dim())
    }
}

/// An ordered family of distinct subspaces sharing one ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceFamily {
    field: FieldSpec,
    n: usize,
    members: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(field: FieldSpec, n: usize, members: Vec<Subspace>) -> Result<Self, QspaceError> {
        for (index, m) in members.iter().enumerate() {
            if m.field.order() != field.order() || m.n != n {
                return Err(QspaceError::AmbientMismatch {
                    qa: field.order(),
                    na: n,
                    qb: m.field.order(),
                    nb: m.n,
                });
            }
            if members[..index].contains(m) {
                return Err(QspaceError::DuplicateMember { index });
            }
        }
        Ok(SubspaceFamily { field, n, members })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn max_dim(&self) -> usize {
        self.members.iter().map(|m| m.dim()).max().unwrap_or(0)
    }
}

/// All k-dimensional subspaces of F_q^n in canonical RREF, generated
/// directly from pivot-column patterns with an odometer over the free
/// cells. The count always equals qbinom(n, k, q).
pub fn enumerate_subspaces(
    field: &FieldSpec,
    n: usize,
    k: usize,
) -> Result<Vec<Subspace>, QspaceError> {
    if k > n {
        return Err(QspaceError::DimTooLarge { k, n });
    }
    let q = field.order();
    let expected = qbinom(&QBinomParams { n: n as u64, k: k as u64, q })?;
    if expected > Natural::from(MAX_SUBSPACE_UNIVERSE) {
        return Err(QspaceError::UniverseTooLarge {
            got: u64::MAX,
            cap: MAX_SUBSPACE_UNIVERSE,
        });
    }
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free cells: (row i, col j) with j > pivots[i] and j not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..n)
                    .filter(move |j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let mut values = vec![0u8; free.len()];
        loop {
            let mut rows = vec![vec![0u8; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for (&(i, j), &v) in free.iter().zip(&values) {
                rows[i][j] = v;
            }
            out.push(Subspace { field: field.clone(), n, rows });
            // odometer over the free cells
            let mut carry = true;
            for v in values.iter_mut() {
                if !carry {
                    break;
                }
                *v += 1;
                if *v as u64 == q {
                    *v = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        // next pivot-column combination in lexicographic order
        let mut advanced = false;
        for idx in (0..k).rev() {
            if pivots[idx] < n - k + idx {
                pivots[idx] += 1;
                for later in idx + 1..k {
                    pivots[later] = pivots[later - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    assert_eq!(
        Natural::from(out.len()),
        expected,
        "enumeration count disagrees with qbinom"
    );
    Ok(out)
}

/// dim(U ∩ V) via the rank formula: dim U + dim V - rank[U; V].
pub fn intersection_dim(u: &Subspace, v: &Subspace) -> Result<usize, QspaceError> {
    u.same_ambient(v)?;
    let mut stacked = u.rows.clone();
    stacked.extend(v.rows.iter().cloned());
    let rank = rref(&u.field, stacked, u.n).len();
    Ok(u.dim() + v.dim() - rank)
}

/// U ∩ V by the Zassenhaus construction: row reduce [U|U; V|0] and read
/// the right halves of the rows whose left halves vanished.
pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace, QspaceError> {
    u.same_ambient(v)?;
    let n = u.n;
    let mut block: Vec<Vec<u8>> = Vec::with_capacity(u.dim() + v.dim());
    for row in &u.rows {
        let mut wide = row.clone();
        wide.extend(row.iter().copied());
        block.push(wide);
    }
    for row in &v.rows {
        let mut wide = row.clone();
        wide.extend(std::iter::repeat(0u8).take(n));
        block.push(wide);
    }
    let reduced = rref(&u.field, block, 2 * n);
    let inter_rows: Vec<Vec<u8>> = reduced
        .into_iter()
        .filter(|r| r[..n].iter().all(|&c| c == 0))
        .map(|r| r[n..].to_vec())
        .collect();
    Subspace::new(u.field.clone(), n, inter_rows)
}

/// RREF of the stacked bases of all members.
pub fn span_of(family: &SubspaceFamily) -> Result<Subspace, QspaceError> {
    if family.is_empty() {
        return Err(QspaceError::EmptyFamily);
    }
    let stacked: Vec<Vec<u8>> = family
        .members
        .iter()
        .flat_map(|m| m.rows.iter().cloned())
        .collect();
    Subspace::new(family.field.clone(), family.n, stacked)
}

/// n x n identity-seeded Gauss-Jordan inverse.
fn invert_matrix(field: &FieldSpec, m: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = m.len();
    let mut aug: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut wide = row.clone();
            wide.extend((0..n).map(|j| u8::from(i == j)));
            wide
        })
        .collect();
    aug = rref(field, aug, 2 * n);
    assert_eq!(aug.len(), n, "matrix is singular");
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// The family {V/T}: T's basis is extended to an ambient basis E, every
/// member is rewritten in E-coordinates, and T's coordinates are dropped.
/// Intersection dimensions drop by exactly dim T.
pub fn quotient_family(
    family: &SubspaceFamily,
    t: &Subspace,
) -> Result<SubspaceFamily, QspaceError> {
    let field = &family.field;
    let n = family.n;
    if t.field.order() != field.order() || t.n != n {
        return Err(QspaceError::AmbientMismatch {
            qa: field.order(),
            na: n,
            qb: t.field.order(),
            nb: t.n,
        });
    }
    for (index, v) in family.members.iter().enumerate() {
        if !v.contains(t)? {
            return Err(QspaceError::NotContained { index });
        }
    }
    let d = t.dim();
    // extend T's basis greedily with standard vectors
    let mut ext: Vec<Vec<u8>> = t.rows.clone();
    for j in 0..n {
        if ext.len() == n {
            break;
        }
        let mut candidate = ext.clone();
        let mut e = vec![0u8; n];
        e[j] = 1;
        candidate.push(e.clone());
        if rref(field, candidate, n).len() > rref(field, ext.clone(), n).len() {
            ext.push(e);
        }
    }
    assert_eq!(ext.len(), n, "basis extension failed");
    let inv = invert_matrix(field, &ext);
    let to_coords = |w: &[u8]| -> Vec<u8> {
        // row vector times matrix: c_j = sum_i w_i * inv[i][j]
        (0..n)
            .map(|j| {
                (0..n).fold(0u8, |acc, i| field.add(acc, field.mul(w[i], inv[i][j])))
            })
            .collect()
    };
    let mut quotients = Vec::with_capacity(family.len());
    let mut seen: Vec<Subspace> = Vec::new();
    for v in &family.members {
        let rows: Vec<Vec<u8>> = v.rows.iter().map(|w| to_coords(w)[d..].to_vec()).collect();
        let qv = Subspace::new(field.clone(), n - d, rows)?;
        assert_eq!(qv.dim(), v.dim() - d, "quotient dimension mismatch");
        if !seen.contains(&qv) {
            seen.push(qv.clone());
        }
        quotients.push(qv);
    }
    // distinct members can collapse in the quotient only if they coincide,
    // which the containment precondition rules out for distinct inputs of
    // equal dimension; still, the family constructor re-checks
    SubspaceFamily::new(field.clone(), n - d, quotients)
}

/// Index form of a Helly witness for subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHellyWitness {
    pub indices: Vec<usize>,
}

/// Greedy witness: members are added while they strictly decrease the
/// running intersection dimension, reaching 0 in at most (max dim)+1 steps.
pub fn helly_witness_q(family: &SubspaceFamily) -> Result<QHellyWitness, QspaceError> {
    if family.is_empty() {
        return Err(QspaceError::EmptyFamily);
    }
    let mut running = family.members[0].clone();
    let mut full = running.clone();
    for m in &family.members[1..] {
        full = intersect(&full, m)?;
    }
    if full.dim() != 0 {
        return Err(QspaceError::IntersectionNotZero(full.dim()));
    }
    let mut indices = vec![0usize];
    while running.dim() > 0 {
        let mut advanced = false;
        for (j, m) in family.members.iter().enumerate() {
            let next = intersect(&running, m)?;
            if next.dim() < running.dim() {
                running = next;
                indices.push(j);
                advanced = true;
                break;
            }
        }
        assert!(advanced, "zero full intersection guarantees a shrinking member");
    }
    Ok(QHellyWitness { indices })
}

/// Span lemma for subspaces: with dim(∩G) = 0 and dim(V ∩ G_i) >= l1 for
/// every member, the span P of G satisfies dim(P ∩ V) >= l1+1. A false
/// `ok` is a bug detector.
pub fn check_lemma42(
    g: &SubspaceFamily,
    v: &Subspace,
    l1: u64,
) -> Result<(Subspace, bool), QspaceError> {
    if l1 == 0 {
        return Err(QspaceError::ZeroL1);
    }
    if g.is_empty() {
        return Err(QspaceError::EmptyFamily);
    }
    let mut full = g.members[0].clone();
    for m in &g.members[1..] {
        full = intersect(&full, m)?;
    }
    if full.dim() != 0 {
        return Err(QspaceError::IntersectionNotZero(full.dim()));
    }
    if g.members.contains(v) {
        return Err(QspaceError::MemberPresent);
    }
    for (index, m) in g.members.iter().enumerate() {
        let got = intersection_dim(v, m)?;
        if (got as u64) < l1 {
            return Err(QspaceError::IntersectionBelowL1 { index, got, l1 });
        }
    }
    let p = span_of(g)?;
    let ok = intersection_dim(&p, v)? as u64 >= l1 + 1;
    Ok((p, ok))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBoundCheck {
    pub span_dim: usize,
    pub bound: Natural,
    pub ok: bool,
}

/// dim(span H) <= k + (t-1)(k-1) for a pairwise intersecting family of t
/// subspaces of dimension at most k.
pub fn check_span_bound(h: &SubspaceFamily, k: u64) -> Result<SpanBoundCheck, QspaceError> {
    let t = h.len();
    if t < 2 {
        return Err(QspaceError::TooFewMembers { needed: 2, got: t });
    }
    for (index, m) in h.members.iter().enumerate() {
        if m.dim() as u64 > k {
            return Err(QspaceError::MemberTooLarge { index, got: m.dim(), k });
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            if intersection_dim(&h.members[i], &h.members[j])? == 0 {
                return Err(QspaceError::NotIntersecting { i, j });
            }
        }
    }
    let span_dim = span_of(h)?.dim();
    let bound = Natural::from(k + (t as u64 - 1) * (k - 1));
    let ok = Natural::from(span_dim) <= bound;
    Ok(SpanBoundCheck { span_dim, bound, ok })
}

/// The q-analogue bounds, with the parameters each one needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QBoundSpec {
    /// Intersecting k-dim subspaces: qbinom(n-1, k-1).
    T1_11 { q: u64, n: u64, k: u64 },
    /// L-intersecting by dimension: qbinom(n, s).
    T1_12 { q: u64, n: u64, s: u64 },
    /// Full sum qbinom(n, 0..=s).
    T1_13 { q: u64, n: u64, s: u64 },
    /// Partial sum qbinom(n, s-t+1..=s).
    T1_14 { q: u64, n: u64, s: u64, t: u64 },
    /// Full sum over n-l1 with a threshold on n.
    T1_15 { q: u64, n: u64, s: u64, l1: u64, k: u64 },
    /// Partial sum over n-l1 with the same threshold.
    T1_16 { q: u64, n: u64, s: u64, l1: u64, r: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBoundReport {
    pub bound: Natural,
    /// For T1_15/T1_16: the threshold verdict; absent for the others.
    pub threshold_pass: Option<bool>,
}

/// Threshold n >= log_q((q^s - 1) qbinom(k^2, l1+1) + 1) + l1, evaluated
/// without logarithms via q^(n-l1) >= (q^s - 1) qbinom(k^2, l1+1) + 1.
pub fn q_threshold_holds(q: u64, n: u64, s: u64, l1: u64, k: u64) -> Result<bool, QspaceError> {
    if l1 > n {
        return Ok(false);
    }
    let lhs = Natural::from(q).pow((n - l1) as u32);
    let rhs = (Natural::from(q).pow(s as u32) - Natural::from(1u32))
        * qbinom(&QBinomParams { n: k * k, k: l1 + 1, q })?
        + Natural::from(1u32);
    Ok(lhs >= rhs)
}

pub fn q_bound(spec: &QBoundSpec) -> Result<QBoundReport, QspaceError> {
    let report = match *spec {
        QBoundSpec::T1_11 { q, n, k } => QBoundReport {
            bound: qbinom(&QBinomParams {
                n: n.saturating_sub(1),
                k: k.saturating_sub(1),
                q,
            })?,
            threshold_pass: None,
        },
        QBoundSpec::T1_12 { q, n, s } => QBoundReport {
            bound: qbinom(&QBinomParams { n, k: s, q })?,
            threshold_pass: None,
        },
        QBoundSpec::T1_13 { q, n, s } => QBoundReport {
            bound: crate::exact::qbinom_sum(n, 0, s as i64, q)?,
            threshold_pass: None,
        },
        QBoundSpec::T1_14 { q, n, s, t } => QBoundReport {
            bound: crate::exact::qbinom_sum(n, s as i64 - t as i64 + 1, s as i64, q)?,
            threshold_pass: None,
        },
        QBoundSpec::T1_15 { q, n, s, l1, k } => QBoundReport {
            bound: crate::exact::qbinom_sum(n.saturating_sub(l1), 0, s as i64, q)?,
            threshold_pass: Some(q_threshold_holds(q, n, s, l1, k)?),
        },
        QBoundSpec::T1_16 { q, n, s, l1, r, k } => QBoundReport {
            bound: crate::exact::qbinom_sum(
                n.saturating_sub(l1),
                s as i64 - r as i64 + 1,
                s as i64,
                q,
            )?,
            threshold_pass: Some(q_threshold_holds(q, n, s, l1, k)?),
        },
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSearchResult {
    pub max_size: u64,
    pub witness: Option<SubspaceFamily>,
    pub certified: bool,
    pub nodes_explored: u64,
}

/// Certified maximum family of subspaces whose pairwise intersection
/// dimensions all lie in L, over the universe of subspaces with dimension
/// in `dims` (all dimensions when absent). Reuses the clique engine.
pub fn max_subspace_family(
    field: &FieldSpec,
    n: usize,
    dims: Option<&[u64]>,
    l: &LSet,
    deadline: Option<Instant>,
    threads: usize,
) -> Result<QSearchResult, QspaceError> {
    let wanted: Vec<usize> = match dims {
        Some(ds) => ds.iter().map(|&d| d as usize).collect(),
        None => (0..=n).collect(),
    };
    let mut verts: Vec<Subspace> = Vec::new();
    for &k in &wanted {
        verts.extend(enumerate_subspaces(field, n, k)?);
    }
    if verts.len() as u64 > MAX_SUBSPACE_UNIVERSE {
        return Err(QspaceError::UniverseTooLarge {
            got: verts.len() as u64,
            cap: MAX_SUBSPACE_UNIVERSE,
        });
    }
    let mut g = Graph::new(verts.len());
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if l.contains(intersection_dim(&verts[i], &verts[j])? as u64) {
                g.add_edge(i, j);
            }
        }
    }
    let out = max_clique(&g, deadline, threads.max(1));
    let witness = if out.certified {
        lex_smallest_clique(&g, out.size).map(|idx| {
            let members: Vec<Subspace> = idx.iter().map(|&i| verts[i].clone()).collect();
            SubspaceFamily::new(field.clone(), n, members)
                .expect("enumerated subspaces are distinct")
        })
    } else {
        None
    };
    Ok(QSearchResult {
        max_size: out.size as u64,
        witness,
        certified: out.certified,
        nodes_explored: out.nodes,
    })
}

fn digit_to_char(d: u8) -> char {
    char::from_digit(d as u32, 16).expect("field digit < 16")
}

fn char_to_digit(c: char) -> Option<u8> {
    c.to_digit(16).map(|d| d as u8)
}

/// Parse the subspace family format: header "q=<int> n=<int>", then per
/// subspace a "k=<int>" line followed by k rows of n field digits
/// (hex digits for q > 10). "#" comments and blank lines between blocks
/// are ignored.
pub fn parse_subspace_family(text: &str) -> Result<SubspaceFamily, QspaceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, s)| !s.is_empty());
    let (line, header) = lines.next().ok_or(QspaceError::Parse {
        line: 1,
        msg: "missing header \"q=<int> n=<int>\"".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let parse_kv = |part: Option<&&str>, key: &str| -> Result<u64, QspaceError> {
        part.and_then(|p| p.strip_prefix(key))
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| QspaceError::Parse {
                line,
                msg: format!("expected header \"q=<int> n=<int>\", got {header:?}"),
            })
    };
    let q = parse_kv(parts.first(), "q=")?;
    let n = parse_kv(parts.get(1), "n=")? as usize;
    let field = FieldSpec::new(q)?;
    let mut members: Vec<Subspace> = Vec::new();
    while let Some((line, content)) = lines.next() {
        let k = content
            .strip_prefix("k=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| QspaceError::Parse {
                line,
                msg: format!("expected \"k=<int>\", got {content:?}"),
            })?;
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (rline, row) = lines.next().ok_or(QspaceError::Parse {
                line,
                msg: format!("expected {k} basis rows"),
            })?;
            let digits: Vec<u8> = row
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    char_to_digit(c).ok_or(QspaceError::Parse {
                        line: rline,
                        msg: format!("bad field digit {c:?}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            rows.push(digits);
        }
        let sub = Subspace::new(field.clone(), n, rows)?;
        if sub.dim() != k {
            return Err(QspaceError::Parse {
                line,
                msg: format!("rows are dependent: rank {} < k = {k}", sub.dim()),
            });
        }
        if members.contains(&sub) {
            return Err(QspaceError::DuplicateMember { index: members.len() });
        }
        members.push(sub);
    }
    SubspaceFamily::new(field, n, members)
}

pub fn serialize_subspace_family(family: &SubspaceFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q={} n={}", family.field.order(), family.n);
    for m in &family.members {
        let _ = writeln!(out);
        let _ = writeln!(out, "k={}", m.dim());
        for row in m.basis() {
            let text: String = row.iter().map(|&d| digit_to_char(d)).collect();
            let _ = writeln!(out, "{text}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn sub(field: &FieldSpec, n: usize, rows: &[&[u8]]) -> Subspace {
        Subspace::new(field.clone(), n, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn enumerate_counts() {
        let lines = enumerate_subspaces(&f2(), 2, 1).unwrap();
        assert_eq!(lines.len(), 3);
        let planes = enumerate_subspaces(&f2(), 4, 2).unwrap();
        assert_eq!(planes.len(), 35);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(enumerate_subspaces(&f3, 2, 1).unwrap().len(), 4);
        // canonical-form uniqueness across n <= 5, q in {2, 3}
        for q in [2u64, 3] {
            let field = FieldSpec::new(q).unwrap();
            for n in 0..=5usize {
                for k in 0..=n {
                    let subs = enumerate_subspaces(&field, n, k).unwrap();
                    for (i, a) in subs.iter().enumerate() {
                        assert!(!subs[i + 1..].contains(a), "duplicate at n={n} k={k} q={q}");
                    }
                    let expect =
                        qbinom(&QBinomParams { n: n as u64, k: k as u64, q }).unwrap();
                    assert_eq!(Natural::from(subs.len()), expect);
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let field = f2();
        let u = sub(&field, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let v = sub(&field, 4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(intersection_dim(&u, &v).unwrap(), 1);
        assert_eq!(intersection_dim(&u, &u).unwrap(), 2);
        let a = sub(&field, 2, &[&[1, 0]]);
        let b = sub(&field, 2, &[&[0, 1]]);
        assert_eq!(intersection_dim(&a, &b).unwrap(), 0);
        // Zassenhaus agrees with the rank formula
        let w = intersect(&u, &v).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(w.basis(), &[vec![0, 1, 0, 0]]);
    }

    #[test]
    fn span_examples() {
        let field = f2();
        let e1 = sub(&field, 2, &[&[1, 0]]);
        let e2 = sub(&field, 2, &[&[0, 1]]);
        let fam = SubspaceFamily::new(field.clone(), 2, vec![e1.clone(), e2]).unwrap();
        assert_eq!(span_of(&fam).unwrap().dim(), 2);
        let solo = SubspaceFamily::new(field.clone(), 2, vec![e1.clone()]).unwrap();
        assert_eq!(span_of(&solo).unwrap(), e1);
        let diag = sub(&field, 2, &[&[1, 1]]);
        let fam = SubspaceFamily::new(field.clone(), 2, vec![e1, diag]).unwrap();
        assert_eq!(span_of(&fam).unwrap().dim(), 2);
    }

    #[test]
    fn dimension_formula_random() {
        let field = f2();
        let all: Vec<Subspace> = (0..=3)
            .flat_map(|k| enumerate_subspaces(&field, 3, k).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = &all[rng.gen_range(0..all.len())];
            let v = &all[rng.gen_range(0..all.len())];
            let fam =
                SubspaceFamily::new(field.clone(), 3, vec![u.clone()]).unwrap();
            let mut both = fam.members().to_vec();
            if u != v {
                both.push(v.clone());
            }
            let span = span_of(&SubspaceFamily::new(field.clone(), 3, both).unwrap())
                .unwrap()
                .dim();
            assert_eq!(
                intersection_dim(u, v).unwrap() + span,
                u.dim() + v.dim()
            );
        }
    }

    #[test]
    fn quotient_examples() {
        let field = f2();
        let t = sub(&field, 3, &[&[1, 0, 0]]);
        let members: Vec<Subspace> = enumerate_subspaces(&field, 3, 2)
            .unwrap()
            .into_iter()
            .filter(|v| v.contains(&t).unwrap())
            .collect();
        assert_eq!(members.len(), 3);
        let fam = SubspaceFamily::new(field.clone(), 3, members).unwrap();
        let quot = quotient_family(&fam, &t).unwrap();
        assert_eq!(quot.ambient_dim(), 2);
        assert!(quot.members().iter().all(|m| m.dim() == 1));

        let solo = SubspaceFamily::new(field.clone(), 3, vec![t.clone()]).unwrap();
        let quot = quotient_family(&solo, &t).unwrap();
        assert_eq!(quot.members()[0].dim(), 0);
    }

    #[test]
    fn quotient_preserves_shifted_intersections() {
        let field = f2();
        let t = sub(&field, 4, &[&[1, 1, 0, 0]]);
        let containing: Vec<Subspace> = (1..=4)
            .flat_map(|k| enumerate_subspaces(&field, 4, k).unwrap())
            .filter(|v| v.contains(&t).unwrap())
            .collect();
        let fam = SubspaceFamily::new(field.clone(), 4, containing).unwrap();
        let quot = quotient_family(&fam, &t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let i = rng.gen_range(0..fam.len());
            let j = rng.gen_range(0..fam.len());
            let before = intersection_dim(&fam.members()[i], &fam.members()[j]).unwrap();
            let after = intersection_dim(&quot.members()[i], &quot.members()[j]).unwrap();
            assert_eq!(after, before - t.dim());
        }
    }

    #[test]
    fn helly_witness_q_examples() {
        let field = f2();
        let lines = enumerate_subspaces(&field, 2, 1).unwrap();
        let fam = SubspaceFamily::new(field.clone(), 2, lines).unwrap();
        let w = helly_witness_q(&fam).unwrap();
        assert_eq!(w.indices.len(), 2);

        let planes = vec![
            sub(&field, 3, &[&[1, 0, 0], &[0, 1, 0]]),
            sub(&field, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            sub(&field, 3, &[&[1, 0, 0], &[0, 0, 1]]),
        ];
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                assert_eq!(intersection_dim(&planes[i], &planes[j]).unwrap(), 1);
            }
        }
        let fam = SubspaceFamily::new(field.clone(), 3, planes).unwrap();
        let w = helly_witness_q(&fam).unwrap();
        assert_eq!(w.indices.len(), 3);

        let t = sub(&field, 3, &[&[1, 0, 0]]);
        let through: Vec<Subspace> = enumerate_subspaces(&field, 3, 2)
            .unwrap()
            .into_iter()
            .filter(|v| v.contains(&t).unwrap())
            .collect();
        let fam = SubspaceFamily::new(field.clone(), 3, through).unwrap();
        assert_eq!(
            helly_witness_q(&fam),
            Err(QspaceError::IntersectionNotZero(1))
        );
    }

    #[test]
    fn lemma42_instance() {
        let field = f2();
        // G: two planes of F_2^3 meeting only in a line each, total
        // intersection a line? need dim(cap G) = 0: planes span{e1,e2} and
        // span{e2,e3} meet in span{e2}: nonzero. Use three planes with zero
        // common intersection plus V a plane meeting each in >= 1 dim.
        let g = SubspaceFamily::new(
            field.clone(),
            3,
            vec![
                sub(&field, 3, &[&[1, 0, 0], &[0, 1, 0]]),
                sub(&field, 3, &[&[0, 1, 0], &[0, 0, 1]]),
                sub(&field, 3, &[&[1, 0, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        let v = sub(&field, 3, &[&[1, 1, 0], &[0, 0, 1]]);
        let (p, ok) = check_lemma42(&g, &v, 1).unwrap();
        assert_eq!(p.dim(), 3);
        assert!(ok);

        // nonzero total intersection is rejected
        let bad = SubspaceFamily::new(
            field.clone(),
            3,
            vec![
                sub(&field, 3, &[&[1, 0, 0], &[0, 1, 0]]),
                sub(&field, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        assert!(matches!(
            check_lemma42(&bad, &v, 1),
            Err(QspaceError::IntersectionNotZero(_))
        ));

        // V in G is rejected
        let v_in = sub(&field, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(check_lemma42(&g, &v_in, 1), Err(QspaceError::MemberPresent));
    }

    #[test]
    fn span_bound_examples() {
        let field = f2();
        let h = SubspaceFamily::new(
            field.clone(),
            3,
            vec![
                sub(&field, 3, &[&[1, 0, 0], &[0, 1, 0]]),
                sub(&field, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        let c = check_span_bound(&h, 2).unwrap();
        assert_eq!((c.span_dim, c.bound.clone(), c.ok), (3, Natural::from(3u32), true));

        let line = sub(&f2(), 4, &[&[1, 0, 0, 0]]);
        let through: Vec<Subspace> = enumerate_subspaces(&f2(), 4, 2)
            .unwrap()
            .into_iter()
            .filter(|v| v.contains(&line).unwrap())
            .take(3)
            .collect();
        let h = SubspaceFamily::new(f2(), 4, through).unwrap();
        let c = check_span_bound(&h, 2).unwrap();
        assert!(c.span_dim <= 4);
        // t = 3, k = 2: bound k + (t-1)(k-1) = 4
        assert_eq!(c.bound, Natural::from(4u32));
        assert!(c.ok);

        let h = SubspaceFamily::new(
            f2(),
            2,
            vec![sub(&f2(), 2, &[&[1, 0]]), sub(&f2(), 2, &[&[0, 1]])],
        )
        .unwrap();
        assert!(matches!(
            check_span_bound(&h, 1),
            Err(QspaceError::NotIntersecting { .. })
        ));
    }

    #[test]
    fn q_bound_values() {
        let r = q_bound(&QBoundSpec::T1_11 { q: 2, n: 4, k: 2 }).unwrap();
        assert_eq!(r.bound, Natural::from(7u32));
        assert_eq!(r.threshold_pass, None);

        let r = q_bound(&QBoundSpec::T1_13 { q: 2, n: 4, s: 2 }).unwrap();
        assert_eq!(r.bound, Natural::from(51u32));

        let r = q_bound(&QBoundSpec::T1_15 { q: 2, n: 7, s: 1, l1: 1, k: 2 }).unwrap();
        assert_eq!(r.bound, Natural::from(64u32));
        assert_eq!(r.threshold_pass, Some(true));

        let r = q_bound(&QBoundSpec::T1_15 { q: 2, n: 6, s: 1, l1: 1, k: 2 }).unwrap();
        assert_eq!(r.threshold_pass, Some(false));

        let r = q_bound(&QBoundSpec::T1_12 { q: 3, n: 2, s: 1 }).unwrap();
        assert_eq!(r.bound, Natural::from(4u32));

        let r = q_bound(&QBoundSpec::T1_14 { q: 2, n: 4, s: 2, t: 2 }).unwrap();
        assert_eq!(r.bound, Natural::from(50u32));
    }

    #[test]
    fn max_subspace_family_examples() {
        let field = f2();
        // all lines of F_2^3 meet pairwise in dimension 0
        let res = max_subspace_family(
            &field,
            3,
            Some(&[1]),
            &LSet::new(vec![0]).unwrap(),
            None,
            1,
        )
        .unwrap();
        assert_eq!(res.max_size, 7);
        assert!(res.certified);

        // no two distinct lines of F_2^2 share a line
        let res = max_subspace_family(
            &field,
            2,
            Some(&[1]),
            &LSet::new(vec![1]).unwrap(),
            None,
            1,
        )
        .unwrap();
        assert_eq!(res.max_size, 1);
    }

    #[test]
    fn subspace_roundtrip() {
        let field = f2();
        let members = vec![
            Subspace::zero(field.clone(), 3),
            sub(&field, 3, &[&[1, 0, 1]]),
            sub(&field, 3, &[&[1, 0, 0], &[0, 1, 1]]),
        ];
        let fam = SubspaceFamily::new(field, 3, members).unwrap();
        let text = serialize_subspace_family(&fam);
        assert_eq!(parse_subspace_family(&text).unwrap(), fam);

        let parsed = parse_subspace_family("q=3 n=2\nk=1\n12\n").unwrap();
        assert_eq!(parsed.members()[0].basis(), &[vec![1, 2]]);
        assert!(parse_subspace_family("n=2 q=3\n").is_err());
        assert!(parse_subspace_family("q=2 n=2\nk=2\n10\n10\n").is_err());
    }
}
