//! Weighted paths on level-2 dominant weights.
//!
//! A path of length `L` in `P_L(Λ_i+Λ_j, Λ_k)` starts at `Λ_i+Λ_j`, moves by
//! `hat(μ)` where `μ` is one of the two fundamental indices of the current
//! point, and ends at `Λ_k+Λ_{i+j−k+L}`. Paths are stored by their step
//! sequence `ι(p)`; the points are recomputed on demand.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::qseries::QPoly;
use crate::weights::{self, AffineWeight, WeightError};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("entry {entry} at position {position} is not below n = {n}")]
    EntryOutOfRange {
        position: usize,
        entry: usize,
        n: usize,
    },
    #[error("a step sequence needs at least one entry")]
    EmptySequence,
    #[error("step {entry} at position {position} is not allowed from {from}")]
    IllegalStep {
        position: usize,
        entry: usize,
        from: Level2Weight,
    },
    #[error("path ends at {reached}, expected {expected}")]
    WrongEndpoint {
        reached: Level2Weight,
        expected: Level2Weight,
    },
    #[error("final entry {got} must equal {expected}")]
    WrongFinalEntry { got: usize, expected: usize },
    #[error("point sequence does not start at the class's initial point")]
    WrongInitialPoint,
}

/// `Λ_lo + Λ_hi` with `0 <= lo <= hi < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level2Weight {
    n: usize,
    lo: usize,
    hi: usize,
}

impl Level2Weight {
    pub fn new(n: usize, i: i64, j: i64) -> Result<Self, PathError> {
        if n < 2 {
            return Err(WeightError::RankTooSmall(n).into());
        }
        let a = i.rem_euclid(n as i64) as usize;
        let b = j.rem_euclid(n as i64) as usize;
        Ok(Self {
            n,
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    /// The point reached by the step `hat(mu)`, if `mu` is allowed here.
    pub fn step(&self, mu: usize) -> Option<Self> {
        let next = |x: usize| (x + 1) % self.n;
        if mu == self.lo {
            Some(self.with(next(self.lo), self.hi))
        } else if mu == self.hi {
            Some(self.with(self.lo, next(self.hi)))
        } else {
            None
        }
    }

    fn with(&self, a: usize, b: usize) -> Self {
        Self {
            n: self.n,
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn to_affine(&self) -> AffineWeight {
        let f = |i: usize| weights::fundamental(self.n, i as i64).expect("rank checked");
        &f(self.lo) + &f(self.hi)
    }
}

impl fmt::Display for Level2Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "2Λ{}", self.lo)
        } else {
            write!(f, "Λ{}+Λ{}", self.lo, self.hi)
        }
    }
}

/// The path space `P_L(Λ_i+Λ_j, Λ_k)` for every `L`; indices are taken mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathClass {
    n: usize,
    i: usize,
    j: usize,
    k: usize,
}

impl PathClass {
    pub fn new(n: usize, i: i64, j: i64, k: i64) -> Result<Self, PathError> {
        let init = Level2Weight::new(n, i, j)?;
        Ok(Self {
            n,
            i: init.lo,
            j: init.hi,
            k: k.rem_euclid(n as i64) as usize,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn modn(&self, x: i64) -> usize {
        x.rem_euclid(self.n as i64) as usize
    }

    /// `(i + j − k) mod n`.
    pub fn shifted_index(&self) -> usize {
        self.modn(self.i as i64 + self.j as i64 - self.k as i64)
    }

    pub fn initial(&self) -> Level2Weight {
        Level2Weight::new(self.n, self.i as i64, self.j as i64).expect("valid class")
    }

    /// `Λ_k + Λ_{i+j−k+L}`.
    pub fn endpoint(&self, length: usize) -> Level2Weight {
        let far = (self.shifted_index() + length) as i64;
        Level2Weight::new(self.n, self.k as i64, far).expect("valid class")
    }

    /// `ι(p̄)_ℓ = i + j − k + ℓ mod n`.
    pub fn ground_entry(&self, position: usize) -> usize {
        (self.shifted_index() + position) % self.n
    }

    /// `(i+s, j+s, k+s) mod n`.
    pub fn rotate(&self, s: i64) -> Self {
        Self::new(
            self.n,
            self.i as i64 + s,
            self.j as i64 + s,
            self.k as i64 + s,
        )
        .expect("rank already validated")
    }
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P(n={}; {}, Λ{})", self.n, self.initial(), self.k)
    }
}

/// The step sequence `ι(p) = (μ_0, …, μ_L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSequence {
    n: usize,
    entries: Vec<usize>,
}

impl IntegerSequence {
    pub fn new(n: usize, entries: Vec<usize>) -> Result<Self, PathError> {
        if entries.is_empty() {
            return Err(PathError::EmptySequence);
        }
        if let Some((position, &entry)) = entries.iter().enumerate().find(|(_, &e)| e >= n) {
            return Err(PathError::EntryOutOfRange { position, entry, n });
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `L`, one less than the number of entries.
    pub fn length(&self) -> usize {
        self.entries.len() - 1
    }
}

impl fmt::Display for IntegerSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    class: PathClass,
    iota: IntegerSequence,
}

impl Path {
    /// Rebuilds a path from its step sequence, validating every step, the
    /// endpoint and the forced final entry.
    pub fn from_iota(class: PathClass, iota: IntegerSequence) -> Result<Self, PathError> {
        let length = iota.length();
        let mut at = class.initial();
        for (position, &entry) in iota.entries[..length].iter().enumerate() {
            at = at.step(entry).ok_or(PathError::IllegalStep {
                position,
                entry,
                from: at,
            })?;
        }
        let expected = class.endpoint(length);
        if at != expected {
            return Err(PathError::WrongEndpoint {
                reached: at,
                expected,
            });
        }
        let last = iota.entries[length];
        let want = class.ground_entry(length);
        if last != want {
            return Err(PathError::WrongFinalEntry {
                got: last,
                expected: want,
            });
        }
        Ok(Self { class, iota })
    }

    /// Rebuilds a path from its points `(λ_0, …, λ_L)`.
    pub fn from_points(class: PathClass, points: &[Level2Weight]) -> Result<Self, PathError> {
        let first = points.first().ok_or(PathError::EmptySequence)?;
        if *first != class.initial() {
            return Err(PathError::WrongInitialPoint);
        }
        let length = points.len() - 1;
        let mut entries = Vec::with_capacity(points.len());
        for (position, pair) in points.windows(2).enumerate() {
            let (a, b) = pair[0].indices();
            let entry = [a, b]
                .into_iter()
                .find(|&mu| pair[0].step(mu) == Some(pair[1]))
                .ok_or(PathError::IllegalStep {
                    position,
                    entry: a,
                    from: pair[0],
                })?;
            entries.push(entry);
        }
        entries.push(class.ground_entry(length));
        Self::from_iota(class, IntegerSequence::new(class.n, entries)?)
    }

    pub fn class(&self) -> &PathClass {
        &self.class
    }

    pub fn iota(&self) -> &IntegerSequence {
        &self.iota
    }

    pub fn length(&self) -> usize {
        self.iota.length()
    }

    /// `(λ_0, …, λ_L)`.
    pub fn points(&self) -> Vec<Level2Weight> {
        let mut at = self.class.initial();
        let mut out = vec![at];
        for &mu in &self.iota.entries[..self.length()] {
            at = at.step(mu).expect("validated on construction");
            out.push(at);
        }
        out
    }

    /// `E(p) = Σ_{ℓ=1}^{L} ℓ (θ(μ_{ℓ−1} − μ_ℓ) − θ(μ̄_{ℓ−1} − μ̄_ℓ))`, `θ(x) = [x >= 0]`.
    pub fn energy(&self) -> i64 {
        let mu = &self.iota.entries;
        let theta = |a: usize, b: usize| i64::from(a >= b);
        (1..mu.len())
            .map(|l| {
                let g0 = self.class.ground_entry(l - 1);
                let g1 = self.class.ground_entry(l);
                l as i64 * (theta(mu[l - 1], mu[l]) - theta(g0, g1))
            })
            .sum()
    }

    /// `wt(p) = Λ_i + Λ_j − E(p)·δ`.
    pub fn weight(&self) -> AffineWeight {
        self.class
            .initial()
            .to_affine()
            .shift_delta(-Rat::from_integer(self.energy()))
    }
}

/// `p̄ = (Λ_k+Λ_{i+j−k}, …, Λ_k+Λ_{i+j−k+L})`; it lives in the class with
/// initial point `Λ_k + Λ_{i+j−k}`.
pub fn ground_state_path(class: &PathClass, length: usize) -> Path {
    let own = PathClass::new(
        class.n,
        class.k as i64,
        class.shifted_index() as i64,
        class.k as i64,
    )
    .expect("valid class");
    let entries = (0..=length).map(|l| class.ground_entry(l)).collect();
    let iota = IntegerSequence::new(class.n, entries).expect("entries reduced mod n");
    Path::from_iota(own, iota).expect("ground-state steps are always allowed")
}

/// `P_L(Λ_i+Λ_j, Λ_k)` in lexicographic order of `ι`.
pub fn enumerate_paths(class: &PathClass, length: usize) -> Vec<Path> {
    let target = class.endpoint(length);
    let (t1, t2) = target.indices();
    let n = class.n;
    // With s steps left from {a, b}, a target {t1, t2} is reachable iff one of
    // the coordinates can be advanced onto t1 or t2 within s steps.
    let reachable = |at: Level2Weight, left: usize| {
        let (a, _) = at.indices();
        let gap = |t: usize| (t + n - a) % n;
        gap(t1) <= left || gap(t2) <= left
    };
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(length + 1);
    dfs(
        class,
        length,
        class.initial(),
        &mut steps,
        &reachable,
        &mut out,
    );
    out
}

fn dfs(
    class: &PathClass,
    length: usize,
    at: Level2Weight,
    steps: &mut Vec<usize>,
    reachable: &dyn Fn(Level2Weight, usize) -> bool,
    out: &mut Vec<Path>,
) {
    let left = length - steps.len();
    if !reachable(at, left) {
        return;
    }
    if left == 0 {
        if at == class.endpoint(length) {
            let mut entries = steps.clone();
            entries.push(class.ground_entry(length));
            out.push(Path {
                class: *class,
                iota: IntegerSequence {
                    n: class.n,
                    entries,
                },
            });
        }
        return;
    }
    let (a, b) = at.indices();
    for mu in if a == b { vec![a] } else { vec![a, b] } {
        steps.push(mu);
        dfs(class, length, at.step(mu).unwrap(), steps, reachable, out);
        steps.pop();
    }
}

/// `B_L = Σ_{p ∈ P_L} q^{E(p)}` by enumeration.
pub fn brute_b(class: &PathClass, length: usize) -> QPoly {
    let mut acc = QPoly::zero();
    for p in enumerate_paths(class, length) {
        acc.add_term(Rat::from_integer(p.energy()), 1.into());
    }
    acc
}

/// Lowest exponent of `B_L`, or zero for an empty class.
pub fn min_energy(class: &PathClass, length: usize) -> Rat {
    brute_b(class, length)
        .min_exponent()
        .unwrap_or_else(Rat::zero)
}
