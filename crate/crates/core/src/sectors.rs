//! Parents, g-components and the sector decomposition of `G_L(2Λ_0, Λ_k)`.
//!
//! Removing or attaching a g-component moves one node of the profile by `n`
//! steps along the boundary. Positions along the boundary count plain steps
//! and cliff steps from the bottom-left corner; the cliff steps of cliff `c`
//! occupy `bottom(c) ..= top(c)`. Removal at cliff `c` moves the step at
//! `top(c)` down to `top(c) − n`; attachment at a vacancy moves the step at
//! `bottom(c)` up to `bottom(c) + n`. Both are implemented directly on the
//! interpolating matrix.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kgraphs::{graph_from_path, InterpolatingMatrix, KGraph, KGraphError, KViolation};
use crate::paths::{enumerate_paths, PathClass};
use crate::qseries::{gaussian, QPoly};
use crate::weights::CartanData;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectorError {
    #[error(transparent)]
    KGraph(#[from] KGraphError),
    #[error("label needs n - 1 = {expected} multiplicities, got {got}")]
    LabelLength { expected: usize, got: usize },
    #[error("k + Σ i·m_i = {residue} (mod {n}) must vanish")]
    LabelResidue { residue: usize, n: usize },
    #[error("parent has W = {width} > L = {length}")]
    ParentDoesNotFit { width: usize, length: usize },
    #[error("not a removable candidate")]
    NotACandidate,
    #[error("not a vacancy")]
    NotAVacancy,
    #[error("attachment rejected: {0}")]
    AttachRejected(AttachRejection),
    #[error("fill matrix has {got} parts for i = {i}, expected {expected}")]
    FillShape {
        i: usize,
        expected: usize,
        got: usize,
    },
    #[error("fill parts for i = {i} must be weakly decreasing and within 0..={bound}")]
    FillOutOfBox { i: usize, bound: i64 },
    #[error("ℓ_{index} = {value} is not an integer")]
    NonIntegralEll { index: usize, value: Rat },
    #[error("reduction stopped at a non-parent graph {0}")]
    NotAParent(KGraph),
    #[error("removals at i = {i} could not be assigned to a vacancy chain")]
    UnassignedRemoval { i: usize },
    #[error("no usable {i}-vacancy left for chain {chain}")]
    NoUsableVacancy { i: usize, chain: usize },
    #[error("regenerating {graph} from its reduction gave {regenerated}")]
    ReplayMismatch { graph: KGraph, regenerated: KGraph },
}

/// Why an attachment was refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttachRejection {
    /// The moved boundary step leaves the profile malformed.
    Malformed,
    /// The result violates an admissibility condition.
    Inadmissible(KViolation),
    /// The result has a removable `i'`-candidate with `i' > i`.
    HigherCandidate { i: usize, i_prime: usize },
}

impl fmt::Display for AttachRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed => f.write_str("profile would be malformed"),
            Self::Inadmissible(v) => write!(f, "{v}"),
            Self::HigherCandidate { i, i_prime } => {
                write!(
                    f,
                    "creates a {i_prime}-candidate while attaching at i = {i}"
                )
            }
        }
    }
}

/// The sector label `m = (m_1, …, m_{n−1})`, stored at indices `0..n−1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParentLabel {
    n: usize,
    m: Vec<usize>,
    k: usize,
}

impl ParentLabel {
    pub fn new(n: usize, m: Vec<usize>, k: usize) -> Result<Self, SectorError> {
        if m.len() + 1 != n {
            return Err(SectorError::LabelLength {
                expected: n.saturating_sub(1),
                got: m.len(),
            });
        }
        let residue = (k + weighted_sum(&m)) % n;
        if residue != 0 {
            return Err(SectorError::LabelResidue { residue, n });
        }
        Ok(Self { n, m, k: k % n })
    }

    /// The label with `k` fixed by `k + Σ i·m_i ≡ 0 (mod n)`.
    pub fn from_multiplicities(n: usize, m: Vec<usize>) -> Result<Self, SectorError> {
        let k = (n - weighted_sum(&m) % n) % n;
        Self::new(n, m, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    /// `m_i` for `1 <= i <= n − 1`.
    pub fn m_i(&self, i: usize) -> usize {
        self.m[i - 1]
    }

    /// `mᵗ C⁻¹ m`.
    pub fn quadratic_form(&self) -> Rat {
        let cd = CartanData::new(self.n).expect("n >= 2");
        let m: Vec<i64> = self.m.iter().map(|&x| x as i64).collect();
        cd.form(&m, &m)
    }
}

impl fmt::Display for ParentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn weighted_sum(m: &[usize]) -> usize {
    m.iter().enumerate().map(|(a, &x)| (a + 1) * x).sum()
}

/// An `(i, j)`-component: `n` nodes of total height `i` whose upper cliff has
/// height `j`. `anchor` is the boundary position of the step that moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GComponent {
    pub i: usize,
    pub j: usize,
    pub anchor: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandidateKind {
    /// `h_{c−1} + w_c + h_c = n` with `w_{c−1} > 1`.
    Merge,
    /// `h_{c−1} + w_c + h_c = 2n` with `w_c > 2(n − h_c)`.
    Wide,
    /// `h_{c−1} + w_c + h_c >= 3n`.
    Deep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    /// Cliff index, counted from the bottom starting at 0.
    pub cliff: usize,
    pub kind: CandidateKind,
    pub component: GComponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VacancyKind {
    /// Cliffs `c`, `c+1` with `h_c + w_{c+1} + h_{c+1} = n`.
    Pair,
    /// A single cliff `c` with `h_c + w_{c+1} + h_{c+1} >= 2n`, or the top cliff.
    Single,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vacancy {
    /// Lower cliff index.
    pub cliff: usize,
    pub kind: VacancyKind,
    pub component: GComponent,
}

/// Per-`i` partitions `k_1^{(i)} >= … >= k_{m_i}^{(i)}`, stored at index `i − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillMatrix(Vec<Vec<usize>>);

impl FillMatrix {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        Self(parts)
    }

    pub fn zero(label: &ParentLabel) -> Self {
        Self(label.m.iter().map(|&mi| vec![0; mi]).collect())
    }

    /// The partition for `i`, `1 <= i <= n − 1`.
    pub fn parts(&self, i: usize) -> &[usize] {
        &self.0[i - 1]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.0
    }

    /// `Σ k_j^{(i)}`, the number of attached components.
    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }
}

impl fmt::Display for FillMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| {
                let p: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("({})", p.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}

/// Boundary position of the lowest cliff step of every cliff.
fn bottoms(m: &InterpolatingMatrix) -> Vec<usize> {
    let mut pos = 0;
    m.columns()
        .iter()
        .map(|c| {
            pos += c.width;
            let b = pos;
            pos += c.height;
            b
        })
        .collect()
}

/// Rebuilds a matrix from raw `(w, h)` runs, merging runs emptied by a move.
/// Fails if a run is negative, the profile starts with a cliff, or a merged
/// cliff reaches height `n`.
fn rebuild(n: usize, raw: &[(i64, i64)]) -> Option<InterpolatingMatrix> {
    let mut runs: Vec<(bool, i64)> = Vec::new();
    for &(w, h) in raw {
        for (is_cliff, len) in [(false, w), (true, h)] {
            if len < 0 {
                return None;
            }
            if len == 0 {
                continue;
            }
            match runs.last_mut() {
                Some(last) if last.0 == is_cliff => last.1 += len,
                _ => runs.push((is_cliff, len)),
            }
        }
    }
    while runs.last().is_some_and(|r| !r.0) {
        runs.pop();
    }
    if runs.first().is_some_and(|r| r.0) {
        return None;
    }
    let pairs: Vec<(usize, usize)> = runs
        .chunks(2)
        .map(|c| (c[0].1 as usize, c[1].1 as usize))
        .collect();
    InterpolatingMatrix::new(n, &pairs).ok()
}

fn raw_columns(m: &InterpolatingMatrix) -> Vec<(i64, i64)> {
    m.columns()
        .iter()
        .map(|c| (c.width as i64, c.height as i64))
        .collect()
}

fn adjust_width(raw: &mut [(i64, i64)], index: usize, by: i64) {
    if let Some(col) = raw.get_mut(index) {
        col.0 += by;
    }
}

fn removal_surgery(m: &InterpolatingMatrix, c: &Candidate) -> Option<InterpolatingMatrix> {
    let n = m.n() as i64;
    let j = c.cliff;
    let mut raw = raw_columns(m);
    match c.kind {
        CandidateKind::Merge => {
            raw[j - 1].0 -= 1;
            raw[j - 1].1 += 1;
            raw[j].1 -= 1;
            adjust_width(&mut raw, j + 1, 1);
        }
        CandidateKind::Wide | CandidateKind::Deep => {
            let (w, h) = raw[j];
            raw.splice(j..=j, [(w - (n - h + 1), 1), (n - h, h - 1)]);
            adjust_width(&mut raw, j + 2, 1);
        }
    }
    rebuild(m.n(), &raw)
}

fn attach_surgery(m: &InterpolatingMatrix, v: &Vacancy) -> Option<InterpolatingMatrix> {
    let n = m.n() as i64;
    let c = v.cliff;
    let mut raw = raw_columns(m);
    match v.kind {
        VacancyKind::Pair => {
            raw[c].0 += 1;
            raw[c].1 -= 1;
            raw[c + 1].1 += 1;
            adjust_width(&mut raw, c + 2, -1);
        }
        VacancyKind::Single => {
            let (w, h) = raw[c];
            raw.splice(c..=c, [(w + 1, h - 1), (n - h, 1)]);
            adjust_width(&mut raw, c + 2, -(n - h + 1));
        }
    }
    rebuild(m.n(), &raw)
}

/// Returns the label iff `g` is a parent: cliff heights weakly decreasing
/// upwards and `h_{t−1} + w_t + h_t = 2n` for every column.
pub fn is_parent(g: &KGraph) -> Option<ParentLabel> {
    let n = g.n();
    let m = g.matrix();
    if m.sums().iter().any(|&s| s != 2 * n) {
        return None;
    }
    let heights: Vec<usize> = m.columns().iter().map(|c| c.height).collect();
    if heights.windows(2).any(|w| w[1] > w[0]) {
        return None;
    }
    let mut mult = vec![0; n - 1];
    for h in heights {
        mult[h - 1] += 1;
    }
    ParentLabel::new(n, mult, g.k()).ok()
}

/// The parent with cliff heights `(n−1)^{m_{n−1}}, …, 1^{m_1}` and widths
/// forced by `h_{t−1} + w_t + h_t = 2n`.
pub fn parent_from_label(label: &ParentLabel, length: usize) -> Result<KGraph, SectorError> {
    let n = label.n;
    let mut pairs = Vec::new();
    let mut prev = n;
    for i in (1..n).rev() {
        for _ in 0..label.m_i(i) {
            pairs.push((2 * n - prev - i, i));
            prev = i;
        }
    }
    let matrix = InterpolatingMatrix::new(n, &pairs)?;
    let width = matrix.total_width();
    if width > length {
        return Err(SectorError::ParentDoesNotFit { width, length });
    }
    Ok(KGraph::new(matrix, length, label.k))
}

/// `n · mᵗ C⁻¹ m`.
pub fn parent_node_count(label: &ParentLabel) -> i64 {
    let v = label.quadratic_form() * Rat::from_integer(label.n as i64);
    assert!(v.is_integer(), "n·mᵗC⁻¹m is an integer");
    v.to_integer()
}

fn candidates_unfiltered(m: &InterpolatingMatrix) -> Vec<Candidate> {
    let n = m.n();
    let cols = m.columns();
    let b = bottoms(m);
    let mut out = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let hp = m.height_before(j);
        let s = hp + col.width + col.height;
        let top = b[j] + col.height - 1;
        let (kind, i) = if s == n {
            if j == 0 || cols[j - 1].width <= 1 {
                continue;
            }
            (CandidateKind::Merge, hp + col.height)
        } else if s == 2 * n {
            if col.width <= 2 * (n - col.height) {
                continue;
            }
            (CandidateKind::Wide, col.height)
        } else if s >= 3 * n {
            (CandidateKind::Deep, col.height)
        } else {
            continue;
        };
        out.push(Candidate {
            cliff: j,
            kind,
            component: GComponent {
                i,
                j: col.height,
                anchor: top,
            },
        });
    }
    out
}

/// Removable `i`-candidates in bottom-to-top order, restricted to those whose
/// removal leaves an admissible graph.
pub fn find_candidates(g: &KGraph, i: usize) -> Vec<Candidate> {
    candidates_unfiltered(g.matrix())
        .into_iter()
        .filter(|c| c.component.i == i)
        .filter(|c| {
            removal_surgery(g.matrix(), c)
                .is_some_and(|m| KGraph::new(m, g.length(), g.k()).is_admissible())
        })
        .collect()
}

/// The down- and left-most `i`-candidate.
pub fn leading_candidate(g: &KGraph, i: usize) -> Option<Candidate> {
    find_candidates(g, i).into_iter().next()
}

/// Removes the component of an `i`-candidate; `|G|` drops by `n`.
pub fn remove_component(g: &KGraph, c: &Candidate) -> Result<KGraph, SectorError> {
    if !find_candidates(g, c.component.i).contains(c) {
        return Err(SectorError::NotACandidate);
    }
    Ok(remove_unchecked(g, c))
}

fn remove_unchecked(g: &KGraph, c: &Candidate) -> KGraph {
    let m = removal_surgery(g.matrix(), c).expect("candidate removal is well formed");
    KGraph::new(m, g.length(), g.k())
}

/// Shape-level `i`-vacancies ordered by the position of the step that moves.
///
/// Whether a vacancy can be used right now (A1, A2) is decided by
/// [`attach_component`].
pub fn find_vacancies(g: &KGraph, i: usize) -> Vec<Vacancy> {
    let n = g.n();
    let cols = g.matrix().columns();
    let b = bottoms(g.matrix());
    let count = cols.len();
    let mut out = Vec::new();
    for c in 0..count {
        let h = cols[c].height;
        let anchor = b[c];
        if c + 1 < count {
            let next = cols[c + 1];
            let s = h + next.width + next.height;
            let annihilated = c + 2 < count && cols[c + 2].width + i == n;
            if s == n && h + next.height == i && !annihilated {
                out.push(Vacancy {
                    cliff: c,
                    kind: VacancyKind::Pair,
                    component: GComponent {
                        i,
                        j: next.height + 1,
                        anchor,
                    },
                });
            }
            if h == i && s >= 2 * n {
                out.push(Vacancy {
                    cliff: c,
                    kind: VacancyKind::Single,
                    component: GComponent { i, j: 1, anchor },
                });
            }
        } else if h == i {
            out.push(Vacancy {
                cliff: c,
                kind: VacancyKind::Single,
                component: GComponent { i, j: 1, anchor },
            });
        }
    }
    out
}

/// Attaches an `i`-component at a vacancy, enforcing A1 (the result is an
/// admissible K-graph of the same budget) and A2 (no `i'`-candidate with
/// `i' > i` appears).
pub fn attach_component(g: &KGraph, v: &Vacancy) -> Result<KGraph, SectorError> {
    if !find_vacancies(g, v.component.i).contains(v) {
        return Err(SectorError::NotAVacancy);
    }
    attach_unchecked(g, v).map_err(SectorError::AttachRejected)
}

fn attach_unchecked(g: &KGraph, v: &Vacancy) -> Result<KGraph, AttachRejection> {
    let m = attach_surgery(g.matrix(), v).ok_or(AttachRejection::Malformed)?;
    let out = KGraph::new(m, g.length(), g.k());
    out.check_k_conditions()
        .map_err(AttachRejection::Inadmissible)?;
    let i = v.component.i;
    if let Some(c) = candidates_unfiltered(out.matrix())
        .into_iter()
        .find(|c| c.component.i > i)
    {
        return Err(AttachRejection::HigherCandidate {
            i,
            i_prime: c.component.i,
        });
    }
    Ok(out)
}

/// Bottom positions of the height-`i` cliffs, topmost first.
fn chain_anchors(g: &KGraph, i: usize) -> Vec<usize> {
    let b = bottoms(g.matrix());
    let mut out: Vec<usize> = g
        .matrix()
        .columns()
        .iter()
        .zip(b)
        .filter(|(c, _)| c.height == i)
        .map(|(_, pos)| pos)
        .collect();
    out.reverse();
    out
}

/// The outcome of [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub label: ParentLabel,
    pub fill: FillMatrix,
    pub parent: KGraph,
}

/// Strips components for `i = n−1, …, 1`, always removing the leading
/// `i`-candidate, and records how many components each vacancy chain held.
pub fn reduce(g: &KGraph) -> Result<Reduction, SectorError> {
    let n = g.n();
    let mut cur = g.clone();
    let mut rows = vec![Vec::new(); n - 1];
    for i in (1..n).rev() {
        let mut sources = Vec::new();
        while let Some(c) = leading_candidate(&cur, i) {
            sources.push(c.component.anchor - n);
            cur = remove_unchecked(&cur, &c);
        }
        sources.reverse();
        let anchors = chain_anchors(&cur, i);
        let mut counts = vec![0; anchors.len()];
        let mut chain = 0;
        for src in sources {
            if let Some(next) = (chain + 1..anchors.len()).find(|&c2| anchors[c2] == src) {
                chain = next;
            }
            *counts
                .get_mut(chain)
                .ok_or(SectorError::UnassignedRemoval { i })? += 1;
        }
        rows[i - 1] = counts;
    }
    let label = is_parent(&cur).ok_or_else(|| SectorError::NotAParent(cur.clone()))?;
    Ok(Reduction {
        label,
        fill: FillMatrix(rows),
        parent: cur,
    })
}

/// Builds the graph of a sector: starting from the parent, for `i = 1, …,
/// n−1` and each height-`i` cliff from the top, attaches `k_j^{(i)}`
/// components along that cliff's vacancy chain.
pub fn generate(
    label: &ParentLabel,
    fill: &FillMatrix,
    length: usize,
) -> Result<KGraph, SectorError> {
    let n = label.n;
    let mut g = parent_from_label(label, length)?;
    let ell = ell_vector(label, length, 0)?;
    for i in 1..n {
        let parts = fill.0.get(i - 1).map_or(&[][..], |r| &r[..]);
        if parts.len() != label.m_i(i) {
            return Err(SectorError::FillShape {
                i,
                expected: label.m_i(i),
                got: parts.len(),
            });
        }
        let bound = ell[i - 1];
        let decreasing = parts.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || parts.first().is_some_and(|&p| p as i64 > bound) {
            return Err(SectorError::FillOutOfBox { i, bound });
        }
    }
    if fill.0.len() != n - 1 {
        return Err(SectorError::FillShape {
            i: n,
            expected: 0,
            got: fill.0.len(),
        });
    }
    for i in 1..n {
        let anchors = chain_anchors(&g, i);
        for (chain, &start) in anchors.iter().enumerate() {
            let mut floor = start;
            for _ in 0..fill.0[i - 1][chain] {
                let (pos, next) = find_vacancies(&g, i)
                    .into_iter()
                    .filter(|v| v.component.anchor >= floor)
                    .find_map(|v| {
                        attach_unchecked(&g, &v)
                            .ok()
                            .map(|r| (v.component.anchor, r))
                    })
                    .ok_or(SectorError::NoUsableVacancy { i, chain })?;
                floor = pos;
                g = next;
            }
        }
    }
    Ok(g)
}

/// `ℓ = C⁻¹(L e_{n−1} + e_r + e_{n−j} − 2m)` with `L + j − 2k ≡ r`,
/// `0 < r <= n`; `e_n` (and `e_{n−j}` at `j = 0`) is the zero vector.
pub fn ell_vector(label: &ParentLabel, length: usize, j: usize) -> Result<Vec<i64>, SectorError> {
    let n = label.n;
    let d = n - 1;
    let r = (length + j + 2 * n - 2 * label.k).rem_euclid(n);
    let r = if r == 0 { n } else { r };
    let mut v: Vec<i64> = label.m.iter().map(|&x| -2 * x as i64).collect();
    v[d - 1] += length as i64;
    for idx in [r, n - j % n] {
        if (1..=d).contains(&idx) {
            v[idx - 1] += 1;
        }
    }
    let cd = CartanData::new(n)?;
    cd.cinv_apply(&v)
        .into_iter()
        .enumerate()
        .map(|(a, x)| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(SectorError::NonIntegralEll {
                    index: a + 1,
                    value: x,
                })
            }
        })
        .collect()
}

impl From<crate::weights::WeightError> for SectorError {
    fn from(e: crate::weights::WeightError) -> Self {
        SectorError::KGraph(e.into())
    }
}

/// `q^{mᵗC⁻¹m} Π_i [ℓ_i + m_i choose m_i]`.
pub fn sector_generating_function(label: &ParentLabel, ell: &[i64]) -> QPoly {
    let mut acc = QPoly::q_pow(label.quadratic_form());
    for (a, &mi) in label.m.iter().enumerate() {
        acc = &acc * &gaussian(ell[a] + mi as i64, mi as i64);
    }
    acc
}

/// Every fill matrix in the `ℓ_i × m_i` boxes.
pub fn fills_in_box(label: &ParentLabel, ell: &[i64]) -> Vec<FillMatrix> {
    let per_i: Vec<Vec<Vec<usize>>> = label
        .m
        .iter()
        .zip(ell)
        .map(|(&mi, &l)| partitions_in_box(mi, l.max(0) as usize))
        .collect();
    let mut out = vec![Vec::new()];
    for options in per_i {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                options.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(FillMatrix).collect()
}

fn partitions_in_box(parts: usize, bound: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == parts {
            out.push(prefix.clone());
            return;
        }
        for x in (0..=cap).rev() {
            prefix.push(x);
            rec(parts, x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, bound, &mut Vec::new(), &mut out);
    out
}

/// All labels of boundary index `k` whose parent fits in length `L`.
pub fn parent_labels(n: usize, k: usize, length: usize) -> Vec<ParentLabel> {
    let mut out = Vec::new();
    let mut m = vec![0; n - 1];
    loop {
        if let Ok(lbl) = ParentLabel::new(n, m.clone(), k) {
            if parent_from_label(&lbl, length).is_ok() {
                out.push(lbl);
            }
        }
        // each cliff has width >= 1, so at most L cliffs fit
        let mut a = 0;
        loop {
            if a == m.len() {
                return out;
            }
            m[a] += 1;
            if m.iter().sum::<usize>() <= length {
                break;
            }
            m[a] = 0;
            a += 1;
        }
    }
}

/// One sector of a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorRow {
    pub label: ParentLabel,
    pub ell: Vec<i64>,
    pub count: usize,
    /// `Σ q^{|G|/n}` over the graphs that reduce to this parent.
    pub observed: QPoly,
    /// `q^{mᵗC⁻¹m} Π [ℓ_i + m_i choose m_i]`.
    pub predicted: QPoly,
}

impl SectorRow {
    pub fn holds(&self) -> bool {
        self.observed == self.predicted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub length: usize,
    pub k: usize,
    pub rows: Vec<SectorRow>,
    pub path_count: usize,
    /// Sum of the observed sector functions; equals `F_L(2Λ_0, Λ_k)`.
    pub total: QPoly,
}

impl Census {
    /// Every sector matches its Gaussian law and the sectors cover all graphs.
    pub fn holds(&self) -> bool {
        self.rows.iter().all(SectorRow::holds)
            && self.rows.iter().map(|r| r.count).sum::<usize>() == self.path_count
    }
}

/// Groups `G_L(2Λ_0, Λ_k)` by parent. Every graph's reduction is replayed
/// through [`generate`] and must reproduce the graph.
pub fn sector_census(n: usize, length: usize, k: usize) -> Result<Census, SectorError> {
    let class = PathClass::new(n, 0, 0, k as i64).map_err(KGraphError::from)?;
    let paths = enumerate_paths(&class, length);
    let mut groups: BTreeMap<ParentLabel, (usize, QPoly)> = BTreeMap::new();
    let mut total = QPoly::zero();
    for p in &paths {
        let g = graph_from_path(p);
        let red = reduce(&g)?;
        let regenerated = generate(&red.label, &red.fill, length)?;
        if regenerated != g {
            return Err(SectorError::ReplayMismatch {
                graph: g,
                regenerated,
            });
        }
        let e = Rat::new(g.node_count() as i64, n as i64);
        let entry = groups
            .entry(red.label)
            .or_insert_with(|| (0, QPoly::zero()));
        entry.0 += 1;
        entry.1.add_term(e, 1.into());
        total.add_term(e, 1.into());
    }
    let mut rows = Vec::with_capacity(groups.len());
    for (label, (count, observed)) in groups {
        let ell = ell_vector(&label, length, 0)?;
        let predicted = sector_generating_function(&label, &ell);
        rows.push(SectorRow {
            label,
            ell,
            count,
            observed,
            predicted,
        });
    }
    Ok(Census {
        n,
        length,
        k: k % n,
        rows,
        path_count: paths.len(),
        total,
    })
}

/// `w_1 >= j` test on the fill matrix: for `n−j+1 <= i <= n−1` with
/// `m_i > 0`, the smallest part of the `i`-th partition is at least `i+j−n`.
pub fn smallest_parts_condition(fill: &FillMatrix, j: usize, n: usize) -> bool {
    (n + 1 - j.min(n)..n).all(|i| {
        fill.parts(i)
            .last()
            .is_none_or(|&smallest| smallest + n >= i + j)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n: usize, m: &[usize]) -> ParentLabel {
        ParentLabel::from_multiplicities(n, m.to_vec()).unwrap()
    }

    #[test]
    fn example_parent() {
        let lbl = label(4, &[0, 1, 2]);
        assert_eq!(lbl.k(), 0);
        let g = parent_from_label(&lbl, 6).unwrap();
        assert_eq!(g.matrix().pairs(), vec![(1, 3), (2, 3), (3, 2)]);
        assert_eq!(is_parent(&g), Some(lbl.clone()));
        assert_eq!(parent_node_count(&lbl), 24);
        assert!(matches!(
            parent_from_label(&lbl, 5),
            Err(SectorError::ParentDoesNotFit {
                width: 6,
                length: 5
            })
        ));
    }

    #[test]
    fn empty_parent() {
        let lbl = label(3, &[0, 0]);
        let g = parent_from_label(&lbl, 4).unwrap();
        assert!(g.matrix().is_empty());
        assert_eq!(is_parent(&g), Some(lbl.clone()));
        assert_eq!(parent_node_count(&lbl), 0);
    }

    #[test]
    fn label_invariant() {
        assert!(ParentLabel::new(4, vec![0, 1, 2], 1).is_err());
        assert!(ParentLabel::new(4, vec![0, 1], 0).is_err());
    }

    #[test]
    fn ell_example() {
        assert_eq!(
            ell_vector(&label(4, &[0, 1, 2]), 6, 0).unwrap(),
            vec![0, 0, 1]
        );
        // L ≡ 0: r = n, so only the L·e_{n−1} term survives
        assert_eq!(ell_vector(&label(3, &[0, 0]), 6, 0).unwrap(), vec![2, 4]);
    }

    #[test]
    fn example_sector() {
        let lbl = label(4, &[0, 1, 2]);
        let ell = ell_vector(&lbl, 6, 0).unwrap();
        let fills = fills_in_box(&lbl, &ell);
        assert_eq!(fills.len(), 3);
        let mut graphs = Vec::new();
        for f in &fills {
            let g = generate(&lbl, f, 6).unwrap();
            assert!(g.is_admissible());
            let red = reduce(&g).unwrap();
            assert_eq!((&red.label, &red.fill), (&lbl, f));
            graphs.push(g);
        }
        graphs.sort();
        graphs.dedup();
        assert_eq!(graphs.len(), 3);
        let expected = QPoly::from_terms([
            (Rat::from_integer(6), 1),
            (Rat::from_integer(7), 1),
            (Rat::from_integer(8), 1),
        ]);
        assert_eq!(sector_generating_function(&lbl, &ell), expected);
    }

    #[test]
    fn parents_have_no_candidates() {
        for lbl in parent_labels(4, 0, 8) {
            let g = parent_from_label(&lbl, 8).unwrap();
            for i in 1..4 {
                assert!(find_candidates(&g, i).is_empty());
            }
            let red = reduce(&g).unwrap();
            assert_eq!(red.fill, FillMatrix::zero(&lbl));
        }
    }

    #[test]
    fn wide_candidate_needs_strict_inequality() {
        // n = 3, column (2, 1): the sum is 2n but w = 2 is not above 2(n − h) = 4
        let g = KGraph::new(InterpolatingMatrix::new(3, &[(2, 1)]).unwrap(), 5, 2);
        assert!(find_candidates(&g, 1).is_empty());
        let g = KGraph::new(InterpolatingMatrix::new(3, &[(5, 1)]).unwrap(), 5, 2);
        let cs = find_candidates(&g, 1);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, CandidateKind::Deep);
    }

    #[test]
    fn smallest_parts_examples() {
        let f = FillMatrix::new(vec![vec![0], vec![1, 1]]);
        assert!(smallest_parts_condition(&f, 0, 3));
        assert!(smallest_parts_condition(&f, 1, 3));
        assert!(smallest_parts_condition(&f, 2, 3));
        let f2 = FillMatrix::new(vec![vec![0], vec![1, 0]]);
        assert!(!smallest_parts_condition(&f2, 2, 3));
        let f = FillMatrix::new(vec![vec![], vec![]]);
        assert!(smallest_parts_condition(&f, 2, 3));
    }

    #[test]
    fn census_example() {
        let c = sector_census(4, 6, 0).unwrap();
        assert!(c.holds());
        let row = c.rows.iter().find(|r| r.label.m() == [0, 1, 2]).unwrap();
        assert_eq!(row.count, 3);
    }

    #[test]
    fn rejects_foreign_moves() {
        let lbl = label(3, &[1, 1]);
        let g = parent_from_label(&lbl, 6).unwrap();
        let fake = Candidate {
            cliff: 0,
            kind: CandidateKind::Deep,
            component: GComponent {
                i: 2,
                j: 2,
                anchor: 0,
            },
        };
        assert_eq!(remove_component(&g, &fake), Err(SectorError::NotACandidate));
        let fake = Vacancy {
            cliff: 5,
            kind: VacancyKind::Single,
            component: GComponent {
                i: 1,
                j: 1,
                anchor: 0,
            },
        };
        assert_eq!(attach_component(&g, &fake), Err(SectorError::NotAVacancy));
    }
}
