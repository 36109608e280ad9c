//! The weight lattice of affine sl(n): fundamental weights, simple roots, the
//! invariant form, translations by the classical root lattice and the finite
//! Weyl group acting on epsilon coordinates.
//!
//! A weight is stored as `(classical, level, δ-coefficient)`. The classical
//! part lives in the traceless hyperplane of `Q^n`, so the invariant form is
//! a dot product plus the two level/δ cross terms.

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("rank parameter n = {0} is below 2")]
    RankTooSmall(usize),
    #[error("classical coordinates must sum to zero")]
    NotTraceless,
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
}

fn check_rank(n: usize) -> Result<(), WeightError> {
    if n < 2 {
        Err(WeightError::RankTooSmall(n))
    } else {
        Ok(())
    }
}

fn reduce_index(n: usize, i: i64) -> usize {
    i.rem_euclid(n as i64) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineWeight {
    n: usize,
    classical: Vec<Rat>,
    level: Rat,
    delta: Rat,
}

impl AffineWeight {
    pub fn new(classical: Vec<Rat>, level: Rat, delta: Rat) -> Result<Self, WeightError> {
        check_rank(classical.len())?;
        if classical.iter().copied().sum::<Rat>() != Rat::zero() {
            return Err(WeightError::NotTraceless);
        }
        Ok(Self {
            n: classical.len(),
            classical,
            level,
            delta,
        })
    }

    pub fn zero(n: usize) -> Result<Self, WeightError> {
        check_rank(n)?;
        Ok(Self {
            n,
            classical: vec![Rat::zero(); n],
            level: Rat::zero(),
            delta: Rat::zero(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classical(&self) -> &[Rat] {
        &self.classical
    }

    pub fn level(&self) -> Rat {
        self.level
    }

    pub fn delta_coeff(&self) -> Rat {
        self.delta
    }

    pub fn scaled(&self, c: Rat) -> Self {
        Self {
            n: self.n,
            classical: self.classical.iter().map(|x| x * c).collect(),
            level: self.level * c,
            delta: self.delta * c,
        }
    }

    /// Adds `c·δ`.
    pub fn shift_delta(&self, c: Rat) -> Self {
        Self {
            delta: self.delta + c,
            ..self.clone()
        }
    }

    /// Drops the δ-coefficient.
    pub fn without_delta(&self) -> Self {
        Self {
            delta: Rat::zero(),
            ..self.clone()
        }
    }

    pub fn norm_sq(&self) -> Rat {
        bilinear(self, self)
    }

    /// Solves `Σ λ_t·hat(t) = classical part` with `Σ λ_t = total`. Returns
    /// `None` when the solution is not integral. Parts may be negative.
    ///
    /// # Panics
    /// If the weight has nonzero level.
    pub fn decompose_over_hats(&self, total: i64) -> Option<Vec<i64>> {
        assert!(
            self.level.is_zero(),
            "decompose_over_hats needs a level-0 weight"
        );
        let shift = Rat::new(total, self.n as i64);
        self.classical
            .iter()
            .map(|c| {
                let x = c + shift;
                x.is_integer().then(|| x.to_integer())
            })
            .collect()
    }
}

impl Add<&AffineWeight> for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: &AffineWeight) -> AffineWeight {
        assert_eq!(self.n, rhs.n, "rank mismatch");
        AffineWeight {
            n: self.n,
            classical: self
                .classical
                .iter()
                .zip(&rhs.classical)
                .map(|(a, b)| a + b)
                .collect(),
            level: self.level + rhs.level,
            delta: self.delta + rhs.delta,
        }
    }
}

impl Sub<&AffineWeight> for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: &AffineWeight) -> AffineWeight {
        self + &(-rhs)
    }
}

impl Add for AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: AffineWeight) -> AffineWeight {
        &self + &rhs
    }
}

impl Sub for AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: AffineWeight) -> AffineWeight {
        &self - &rhs
    }
}

impl Neg for &AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        self.scaled(-Rat::one())
    }
}

impl Neg for AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        -&self
    }
}

/// Classical part of `Λ_i`: `1 − i/n` on the first `i` coordinates, `−i/n` after.
pub fn classical_fundamental(n: usize, i: i64) -> Vec<Rat> {
    let i = reduce_index(n, i);
    let n_i = n as i64;
    (0..n)
        .map(|a| {
            if a < i {
                Rat::one() - Rat::new(i as i64, n_i)
            } else {
                Rat::new(-(i as i64), n_i)
            }
        })
        .collect()
}

/// `Λ_{i mod n}`, level 1, δ-coefficient 0.
pub fn fundamental(n: usize, i: i64) -> Result<AffineWeight, WeightError> {
    check_rank(n)?;
    Ok(AffineWeight {
        n,
        classical: classical_fundamental(n, i),
        level: Rat::one(),
        delta: Rat::zero(),
    })
}

/// `hat(i) = Λ_{i+1} − Λ_i`, the weight of the i-th vector-representation state.
pub fn hat(n: usize, i: i64) -> Result<AffineWeight, WeightError> {
    Ok(&fundamental(n, i + 1)? - &fundamental(n, i)?)
}

/// `ρ = Σ Λ_i`.
pub fn rho(n: usize) -> Result<AffineWeight, WeightError> {
    let mut acc = AffineWeight::zero(n)?;
    for i in 0..n as i64 {
        acc = &acc + &fundamental(n, i)?;
    }
    Ok(acc)
}

pub fn delta(n: usize) -> Result<AffineWeight, WeightError> {
    Ok(AffineWeight::zero(n)?.shift_delta(Rat::one()))
}

/// `α_i = 2Λ_i − Λ_{i−1} − Λ_{i+1} + [i ≡ 0]·δ`.
pub fn simple_root(n: usize, i: i64) -> Result<AffineWeight, WeightError> {
    let two = Rat::from_integer(2);
    let mut a =
        &(&fundamental(n, i)?.scaled(two) - &fundamental(n, i - 1)?) - &fundamental(n, i + 1)?;
    if reduce_index(n, i) == 0 {
        a = a.shift_delta(Rat::one());
    }
    Ok(a)
}

/// The invariant form: `(λ|μ) = λ̄·μ̄ + lev(λ)·δ(μ) + lev(μ)·δ(λ)`.
///
/// # Panics
/// On mismatched ranks.
pub fn bilinear(a: &AffineWeight, b: &AffineWeight) -> Rat {
    assert_eq!(a.n, b.n, "rank mismatch");
    let dot: Rat = a
        .classical
        .iter()
        .zip(&b.classical)
        .map(|(x, y)| x * y)
        .sum();
    dot + a.level * b.delta + b.level * a.delta
}

/// An element of the classical root lattice, in epsilon coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Result<Self, WeightError> {
        check_rank(coords.len())?;
        if coords.iter().sum::<i64>() != 0 {
            return Err(WeightError::NotTraceless);
        }
        Ok(Self(coords))
    }

    /// `Σ c_i ᾱ_i` for `c = (c_1, …, c_{n−1})`.
    pub fn from_simple_roots(coeffs: &[i64]) -> Result<Self, WeightError> {
        let n = coeffs.len() + 1;
        check_rank(n)?;
        let c = |t: usize| if t == 0 || t == n { 0 } else { coeffs[t - 1] };
        Ok(Self((0..n).map(|a| c(a + 1) - c(a)).collect()))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// The level-0, δ-free weight with these classical coordinates.
    pub fn as_weight(&self) -> AffineWeight {
        AffineWeight {
            n: self.0.len(),
            classical: self.0.iter().map(|&x| Rat::from_integer(x)).collect(),
            level: Rat::zero(),
            delta: Rat::zero(),
        }
    }
}

/// `t_β(λ) = λ + lev(λ)·β − ((λ|β) + lev(λ)·|β|²/2)·δ`.
pub fn translation(beta: &RootVector, lam: &AffineWeight) -> AffineWeight {
    let b = beta.as_weight();
    let lv = lam.level;
    let shift = bilinear(lam, &b) + lv * b.norm_sq() / Rat::from_integer(2);
    (lam + &b.scaled(lv)).shift_delta(-shift)
}

/// A permutation of `0..n`, acting on epsilon coordinates by sending
/// coordinate `a` to position `perm[a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, WeightError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(WeightError::NotAPermutation(images));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Self(v)
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Self(cur.clone())];
        loop {
            let Some(p) = (1..n).rev().find(|&p| cur[p - 1] < cur[p]) else {
                return out;
            };
            let s = (p..n).rev().find(|&s| cur[s] > cur[p - 1]).unwrap();
            cur.swap(p - 1, s);
            cur[p..].reverse();
            out.push(Self(cur.clone()));
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `det w̄ = ±1`.
    pub fn sign(&self) -> i64 {
        let mut visited = vec![false; self.0.len()];
        let mut sign = 1;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                x = self.0[x];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (a, &b) in self.0.iter().enumerate() {
            inv[b] = a;
        }
        Self(inv)
    }

    /// Moves entry `a` of `v` to position `perm[a]`.
    pub fn permute<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.0.len(), "permutation size mismatch");
        let mut out = v.to_vec();
        for (a, &b) in self.0.iter().enumerate() {
            out[b] = v[a].clone();
        }
        out
    }
}

/// The finite Weyl group element `w̄` acting on `λ`; level and δ are fixed.
pub fn finite_weyl_apply(perm: &Permutation, lam: &AffineWeight) -> AffineWeight {
    AffineWeight {
        classical: perm.permute(&lam.classical),
        ..lam.clone()
    }
}

/// The sl(n) Cartan matrix and its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    n: usize,
    c: Vec<Vec<i64>>,
    cinv: Vec<Vec<Rat>>,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self, WeightError> {
        check_rank(n)?;
        let d = n - 1;
        let c = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| match a.abs_diff(b) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let n_i = n as i64;
        let cinv = (1..=d as i64)
            .map(|i| {
                (1..=d as i64)
                    .map(|j| {
                        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                        Rat::new(lo * (n_i - hi), n_i)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, c, cinv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the matrices, `n − 1`.
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    pub fn c(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn cinv(&self) -> &[Vec<Rat>] {
        &self.cinv
    }

    /// `C⁻¹ v` for an integer vector.
    pub fn cinv_apply(&self, v: &[i64]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim(), "vector length must be n - 1");
        self.cinv
            .iter()
            .map(|row| row.iter().zip(v).map(|(x, &y)| x * y).sum())
            .collect()
    }

    /// `aᵗ C⁻¹ b`.
    pub fn form(&self, a: &[i64], b: &[i64]) -> Rat {
        self.cinv_apply(b).iter().zip(a).map(|(x, &y)| x * y).sum()
    }
}
