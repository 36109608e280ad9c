//! K-graphs: Ferrers graphs whose profile is encoded by an interpolating
//! matrix of plain widths and cliff heights.
//!
//! Columns are indexed from the bottom-left of the profile. Column `t` holds
//! the plain width `w_t` followed by the cliff height `h_t`, so the first row
//! has `W = Σ w_t` nodes and the leftmost node column has height `H = Σ h_t`.

use std::fmt;

use thiserror::Error;

use crate::paths::{enumerate_paths, IntegerSequence, Path, PathClass, PathError};
use crate::qseries::QPoly;
use crate::weights::{self, WeightError};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KGraphError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("column {index} = ({width}, {height}) needs width >= 1 and 0 < height < n")]
    BadColumn {
        index: usize,
        width: usize,
        height: usize,
    },
    #[error("graph is not admissible: {0}")]
    NotAdmissible(KViolation),
    #[error("weight multiplicity m_{index} = {value} is not an integer")]
    NonIntegralMultiplicity { index: usize, value: Rat },
    #[error("no rectangle of width {j} embeds a graph of height {height} with k = {k}")]
    EmbeddingImpossible { height: usize, j: usize, k: usize },
}

/// The first violated admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KViolation {
    /// `W <= L` fails.
    K1 { width: usize, length: usize },
    /// `H + k ≡ 0 (mod n)` fails.
    K2 { height: usize, k: usize },
    /// `h_{t−1} + w_t + h_t ≡ 0 (mod n)` fails at column `t` (0-based).
    K3 { column: usize, sum: usize },
}

impl fmt::Display for KViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::K1 { width, length } => write!(f, "K1: W = {width} exceeds L = {length}"),
            Self::K2 { height, k } => write!(f, "K2: H + k = {height} + {k} is not divisible by n"),
            Self::K3 { column, sum } => {
                write!(
                    f,
                    "K3: h + w + h' = {sum} at column {column} is not divisible by n"
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    pub width: usize,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterpolatingMatrix {
    n: usize,
    columns: Vec<Column>,
}

impl InterpolatingMatrix {
    pub fn new(n: usize, columns: &[(usize, usize)]) -> Result<Self, KGraphError> {
        if n < 2 {
            return Err(WeightError::RankTooSmall(n).into());
        }
        let columns: Vec<Column> = columns
            .iter()
            .map(|&(width, height)| Column { width, height })
            .collect();
        for (index, c) in columns.iter().enumerate() {
            if c.width == 0 || c.height == 0 || c.height >= n {
                return Err(KGraphError::BadColumn {
                    index,
                    width: c.width,
                    height: c.height,
                });
            }
        }
        Ok(Self { n, columns })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            columns: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.columns.iter().map(|c| (c.width, c.height)).collect()
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// `W`, the number of nodes in the first row.
    pub fn total_width(&self) -> usize {
        self.columns.iter().map(|c| c.width).sum()
    }

    /// `H`, the height of the leftmost node column.
    pub fn total_height(&self) -> usize {
        self.columns.iter().map(|c| c.height).sum()
    }

    /// Height of the cliff below column `t`, with `h_{−1} = n`.
    pub fn height_before(&self, t: usize) -> usize {
        if t == 0 {
            self.n
        } else {
            self.columns[t - 1].height
        }
    }

    /// `h_{t−1} + w_t + h_t` for every column.
    pub fn sums(&self) -> Vec<usize> {
        (0..self.columns.len())
            .map(|t| self.height_before(t) + self.columns[t].width + self.columns[t].height)
            .collect()
    }

    /// Heights of the node columns, left to right.
    pub fn column_heights(&self) -> Vec<usize> {
        let mut remaining = self.total_height();
        let mut out = Vec::with_capacity(self.total_width());
        for c in &self.columns {
            out.extend(std::iter::repeat_n(remaining, c.width));
            remaining -= c.height;
        }
        out
    }

    /// `Σ_t w_t (h_t + … + h_N)`.
    pub fn node_count(&self) -> usize {
        let mut remaining = self.total_height();
        let mut area = 0;
        for c in &self.columns {
            area += c.width * remaining;
            remaining -= c.height;
        }
        area
    }
}

/// A graph of the class `G_L(2Λ_0, Λ_k)`; admissibility is checked separately.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KGraph {
    matrix: InterpolatingMatrix,
    length: usize,
    k: usize,
}

impl KGraph {
    /// Wraps a matrix without checking admissibility; `k` is reduced mod `n`.
    pub fn new(matrix: InterpolatingMatrix, length: usize, k: usize) -> Self {
        let k = k % matrix.n;
        Self { matrix, length, k }
    }

    /// Wraps a matrix, rejecting graphs that violate K1 to K3.
    pub fn admissible(
        matrix: InterpolatingMatrix,
        length: usize,
        k: usize,
    ) -> Result<Self, KGraphError> {
        let g = Self::new(matrix, length, k);
        g.check_k_conditions().map_err(KGraphError::NotAdmissible)?;
        Ok(g)
    }

    pub fn matrix(&self) -> &InterpolatingMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.matrix.node_count()
    }

    /// Width of the lowest plain; the empty graph's lowest plain spans the
    /// whole budget `L + 1`.
    pub fn lowest_plain_width(&self) -> usize {
        self.matrix
            .columns
            .first()
            .map_or(self.length + 1, |c| c.width)
    }

    /// `Ok(())` iff K1, K2 and K3 hold; otherwise the first violation.
    pub fn check_k_conditions(&self) -> Result<(), KViolation> {
        let n = self.n();
        let width = self.matrix.total_width();
        if width > self.length {
            return Err(KViolation::K1 {
                width,
                length: self.length,
            });
        }
        let height = self.matrix.total_height();
        if !(height + self.k).is_multiple_of(n) {
            return Err(KViolation::K2 { height, k: self.k });
        }
        if let Some((column, &sum)) = self
            .matrix
            .sums()
            .iter()
            .enumerate()
            .find(|(_, s)| *s % n != 0)
        {
            return Err(KViolation::K3 { column, sum });
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_k_conditions().is_ok()
    }

    /// Row-major ASCII rendering with columns hanging from a common top edge,
    /// so row `r` shows every column of height `> r` and the leftmost column is
    /// the tallest. The first row of every cliff is tagged with its height.
    pub fn render_ascii(&self) -> String {
        if self.matrix.is_empty() {
            return "(empty)\n".to_string();
        }
        let cols = &self.matrix.columns;
        let mut out = String::new();
        let mut right = self.matrix.total_width();
        for t in (0..cols.len()).rev() {
            for row in 0..cols[t].height {
                out.push_str(&"#".repeat(right));
                if row == 0 {
                    out.push_str(&format!("  |h={}", cols[t].height));
                }
                out.push('\n');
            }
            right -= cols[t].width;
        }
        out
    }
}

impl fmt::Display for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .matrix
            .columns
            .iter()
            .map(|c| format!("({},{})", c.width, c.height))
            .collect();
        write!(f, "[{}] L={} k={}", cols.join(","), self.length, self.k)
    }
}

/// A domain wall of a step sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wall {
    pub position: usize,
    pub height: usize,
}

/// Walls at `ℓ >= 1` where `μ_ℓ − μ_{ℓ−1} ≡ h + 1 (mod n)` with `0 < h < n`.
pub fn domain_walls(seq: &IntegerSequence) -> Vec<Wall> {
    let n = seq.n();
    seq.entries()
        .windows(2)
        .enumerate()
        .filter_map(|(idx, w)| {
            let height = (w[1] + 2 * n - w[0] - 1) % n;
            (height > 0).then_some(Wall {
                position: idx + 1,
                height,
            })
        })
        .collect()
}

pub fn matrix_from_sequence(seq: &IntegerSequence) -> InterpolatingMatrix {
    let mut prev = 0;
    let columns = domain_walls(seq)
        .into_iter()
        .map(|w| {
            let c = Column {
                width: w.position - prev,
                height: w.height,
            };
            prev = w.position;
            c
        })
        .collect();
    InterpolatingMatrix {
        n: seq.n(),
        columns,
    }
}

pub fn matrix_from_path(p: &Path) -> InterpolatingMatrix {
    matrix_from_sequence(p.iota())
}

/// The K-graph of a path, with the path's length and boundary index.
pub fn graph_from_path(p: &Path) -> KGraph {
    KGraph::new(matrix_from_path(p), p.length(), p.class().k())
}

/// Recovers `ι` from `(0, 1, …, n−1, 0, 1, …)` by keeping `w_1` entries,
/// dropping `h_1`, keeping `w_2`, and so on.
///
/// # Panics
/// If the graph violates K1 (the source runs out of entries).
pub fn sequence_from_graph(g: &KGraph) -> IntegerSequence {
    let n = g.n();
    let total = g.matrix.total_height() + g.length + 1;
    assert!(
        g.matrix.total_width() <= g.length,
        "sequence_from_graph needs W <= L"
    );
    let mut entries = Vec::with_capacity(g.length + 1);
    let mut src = 0;
    for c in &g.matrix.columns {
        entries.extend((src..src + c.width).map(|x| x % n));
        src += c.width + c.height;
    }
    entries.extend((src..total).map(|x| x % n));
    IntegerSequence::new(n, entries).expect("entries reduced mod n")
}

/// `Σ_ℓ m_ℓ` where `(Λ_k + Λ_{i+j−k}) − wt(p) = Σ m_ℓ α_ℓ`.
pub fn node_count_via_weights(p: &Path) -> Result<i64, KGraphError> {
    let class = p.class();
    let n = class.n();
    let top = &weights::fundamental(n, class.k() as i64)?
        + &weights::fundamental(n, class.shifted_index() as i64)?;
    let diff = &top - &p.weight();
    let mut total = 0;
    for index in 0..n {
        let value = weights::bilinear(&weights::fundamental(n, index as i64)?, &diff);
        if !value.is_integer() {
            return Err(KGraphError::NonIntegralMultiplicity { index, value });
        }
        total += value.to_integer();
    }
    Ok(total)
}

/// `F_L = Σ_G q^{|G|/n}` over the K-graphs of the class, by path enumeration.
pub fn brute_f(class: &PathClass, length: usize) -> QPoly {
    let n = class.n() as i64;
    let mut acc = QPoly::zero();
    for p in enumerate_paths(class, length) {
        let area = matrix_from_path(&p).node_count() as i64;
        acc.add_term(Rat::new(area, n), 1.into());
    }
    acc
}

/// `(i, j, k) ↦ (i+s, j+s, k+s) mod n`.
pub fn dynkin_rotate(class: &PathClass, s: i64) -> PathClass {
    class.rotate(s)
}

/// Injects a graph of the class `(Λ_0+Λ_j, Λ_k)` with budget `L` into
/// `G_{L+j}(2Λ_0, Λ_k)` by prefixing a width-`j` rectangle whose height `H'`
/// satisfies `H' ∈ {H, H+n−j}` and `H' + k ≡ 0 (mod n)`.
pub fn embed_graph(
    matrix: &InterpolatingMatrix,
    length: usize,
    j: usize,
    k: usize,
) -> Result<KGraph, KGraphError> {
    let n = matrix.n;
    let (j, k) = (j % n, k % n);
    if j == 0 {
        return Ok(KGraph::new(matrix.clone(), length, k));
    }
    let h = matrix.total_height();
    let mut columns = matrix.columns.clone();
    if (h + k).is_multiple_of(n) {
        if let Some(first) = columns.first_mut() {
            first.width += j;
        }
    } else if (h + n - j + k).is_multiple_of(n) {
        columns.insert(
            0,
            Column {
                width: j,
                height: n - j,
            },
        );
    } else {
        return Err(KGraphError::EmbeddingImpossible { height: h, j, k });
    }
    Ok(KGraph::new(
        InterpolatingMatrix { n, columns },
        length + j,
        k,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staircase() -> KGraph {
        KGraph::new(
            InterpolatingMatrix::new(4, &[(1, 3), (2, 3), (3, 2)]).unwrap(),
            6,
            0,
        )
    }

    #[test]
    fn walls_of_example() {
        let s = IntegerSequence::new(4, vec![0, 0, 1, 1, 2, 3, 2]).unwrap();
        let w: Vec<(usize, usize)> = domain_walls(&s)
            .iter()
            .map(|w| (w.position, w.height))
            .collect();
        assert_eq!(w, vec![(1, 3), (3, 3), (6, 2)]);
        assert_eq!(
            matrix_from_sequence(&s).pairs(),
            vec![(1, 3), (2, 3), (3, 2)]
        );
        let flat = IntegerSequence::new(4, vec![0, 1, 2, 3, 0]).unwrap();
        assert!(domain_walls(&flat).is_empty());
        assert!(domain_walls(&IntegerSequence::new(4, vec![2]).unwrap()).is_empty());
    }

    #[test]
    fn sequence_round_trip_examples() {
        let g = staircase();
        assert_eq!(sequence_from_graph(&g).entries(), &[0, 0, 1, 1, 2, 3, 2]);
        let empty = KGraph::new(InterpolatingMatrix::empty(3), 6, 0);
        assert_eq!(
            sequence_from_graph(&empty).entries(),
            &[0, 1, 2, 0, 1, 2, 0]
        );
    }

    #[test]
    fn admissibility_diagnostics() {
        let g = staircase();
        assert_eq!(g.check_k_conditions(), Ok(()));
        assert_eq!(g.matrix().sums(), vec![8, 8, 8]);
        let k1 = KGraph::new(g.matrix().clone(), 6, 1);
        assert_eq!(
            k1.check_k_conditions(),
            Err(KViolation::K2 { height: 8, k: 1 })
        );
        let short = KGraph::new(g.matrix().clone(), 5, 0);
        assert_eq!(
            short.check_k_conditions(),
            Err(KViolation::K1 {
                width: 6,
                length: 5
            })
        );
        let bad = KGraph::new(
            InterpolatingMatrix::new(4, &[(1, 3), (1, 2)]).unwrap(),
            6,
            3,
        );
        assert_eq!(
            bad.check_k_conditions(),
            Err(KViolation::K3 { column: 1, sum: 6 })
        );
    }

    #[test]
    fn area_of_example() {
        let g = staircase();
        assert_eq!(g.node_count(), 24);
        assert_eq!(g.matrix().column_heights(), vec![8, 5, 5, 2, 2, 2]);
        assert_eq!(InterpolatingMatrix::empty(3).node_count(), 0);
    }

    #[test]
    fn malformed_columns_rejected() {
        assert!(InterpolatingMatrix::new(3, &[(0, 1)]).is_err());
        assert!(InterpolatingMatrix::new(3, &[(1, 3)]).is_err());
        assert!(InterpolatingMatrix::new(3, &[(1, 0)]).is_err());
    }

    #[test]
    fn rendering() {
        let text = staircase().render_ascii();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0], "######  |h=2");
        assert_eq!(rows[2], "###  |h=3");
        assert_eq!(rows[5], "#  |h=3");
        assert_eq!(rows[7], "#");
        assert_eq!(
            KGraph::new(InterpolatingMatrix::empty(2), 3, 0).render_ascii(),
            "(empty)\n"
        );
    }

    #[test]
    fn example_path_node_count() {
        let class = PathClass::new(4, 0, 0, 0).unwrap();
        let iota = IntegerSequence::new(4, vec![0, 0, 1, 1, 2, 3, 2]).unwrap();
        let p = Path::from_iota(class, iota).unwrap();
        assert_eq!(node_count_via_weights(&p).unwrap(), 24);
        assert_eq!(graph_from_path(&p), staircase());
    }

    #[test]
    fn embedding_examples() {
        let m = InterpolatingMatrix::new(3, &[(2, 1)]).unwrap();
        assert_eq!(embed_graph(&m, 4, 0, 2).unwrap().matrix(), &m);
        let e = embed_graph(&InterpolatingMatrix::empty(3), 4, 2, 0).unwrap();
        assert!(e.matrix().is_empty());
        assert_eq!(e.length(), 6);
        let e = embed_graph(&InterpolatingMatrix::empty(3), 4, 2, 2).unwrap();
        assert_eq!(e.matrix().pairs(), vec![(2, 1)]);
    }
}
