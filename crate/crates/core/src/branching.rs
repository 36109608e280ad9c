//! Closed forms of the finitized branching functions.
//!
//! * [`bosonic_b`] is the alternating sum over the affine Weyl group of
//!   q-multinomials.
//! * [`fermionic_f`] is the positive sum over occupation vectors `m` of
//!   Gaussian products.
//! * [`verify_identity`] compares the two, and [`corollary_check`] compares
//!   their `L → ∞` limits to a finite order in `q`.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::{PathClass, PathError};
use crate::qseries::{gaussian, inv_q_pochhammer, multinomial, QPoly};
use crate::sectors::{ell_vector, ParentLabel, SectorError};
use crate::weights::{
    self, finite_weyl_apply, translation, AffineWeight, CartanData, Permutation, RootVector,
    WeightError,
};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchingError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Sector(#[from] SectorError),
    #[error(
        "Weyl enumeration bound {bound} too small: {terms} supported terms on the outer shell"
    )]
    BoundExhausted { bound: i64, terms: usize },
    #[error("fermionic sum did not stabilize to order {order} below L = {ceiling}")]
    NotStabilized { order: Rat, ceiling: usize },
}

/// Outcome of comparing the two sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "offset")]
pub enum Verdict {
    Equal,
    /// `lhs = q^a · rhs` for the stored `a`, stored as `[num, den]`.
    OffsetByMonomial((i64, i64)),
    Mismatch,
}

impl Verdict {
    pub fn classify(lhs: &QPoly, rhs: &QPoly) -> Self {
        if lhs == rhs {
            Self::Equal
        } else if let Some(a) = lhs.monomial_ratio(rhs) {
            Self::OffsetByMonomial((*a.numer(), *a.denom()))
        } else {
            Self::Mismatch
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Equal => f.write_str("equal"),
            Self::OffsetByMonomial((a, b)) => write!(f, "offset q^({a}/{b})"),
            Self::Mismatch => f.write_str("mismatch"),
        }
    }
}

/// One term `det(w) · q^{exponent} · [L; parts]_q` of a Weyl sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylTerm {
    pub sign: i64,
    pub exponent: Rat,
    pub parts: Vec<i64>,
}

/// Terms of `Σ_w det(w) q^{|λ_w − target|²/2} [L; λ_w]_q` with
/// `λ_w = base − w(top)`, over `w = w̄·t_β` with `|β_a| <= bound`.
/// Also returns how many terms with `max |β_a| = bound + 1` would be supported.
fn weyl_terms(
    length: usize,
    top: &AffineWeight,
    base: &AffineWeight,
    target: &AffineWeight,
    bound: i64,
) -> (Vec<WeylTerm>, usize) {
    let n = top.n();
    let n_i = n as i64;
    let lv = top.level().to_integer();
    let length_i = length as i64;
    let mut terms = Vec::new();
    let mut shell = 0;
    for perm in Permutation::all(n) {
        let wtop = perm.permute(top.classical());
        // n·(part_t) = d_t − n·lv·(w̄β)_t must lie in [0, nL] and be divisible by n
        let d: Vec<i64> = base
            .classical()
            .iter()
            .zip(&wtop)
            .map(|(b, w)| ((b - w) * Rat::from_integer(n_i)).to_integer() + length_i)
            .collect();
        if d.iter().any(|x| x.rem_euclid(n_i) != 0) {
            continue;
        }
        let inv = perm.inverse();
        let outer = bound + 1;
        let (lo, hi) = (vec![-outer; n - 1], vec![outer; n - 1]);
        let mut beta = lo.clone();
        loop {
            let last = -beta.iter().sum::<i64>();
            let radius = beta
                .iter()
                .map(|x| x.abs())
                .max()
                .unwrap_or(0)
                .max(last.abs());
            let supported = radius <= outer
                && (0..n).all(|t| {
                    let a = inv.images()[t];
                    let b = if a + 1 == n { last } else { beta[a] };
                    (0..=n_i * length_i).contains(&(d[t] - n_i * lv * b))
                });
            if supported && radius == outer {
                shell += 1;
            } else if supported {
                let mut coords = beta.clone();
                coords.push(last);
                let rv = RootVector::new(coords).expect("traceless by construction");
                let w = finite_weyl_apply(&perm, &translation(&rv, top));
                let lam = base - &w;
                let parts = lam
                    .decompose_over_hats(length_i)
                    .expect("integrality checked above");
                let exponent = (&lam - target).norm_sq() / Rat::from_integer(2);
                terms.push(WeylTerm {
                    sign: perm.sign(),
                    exponent,
                    parts,
                });
            }
            if !odometer_step(&mut beta, &lo, &hi) {
                break;
            }
        }
    }
    (terms, shell)
}

/// Advances `v` through the box `lo <= v <= hi`; false once it wraps around.
fn odometer_step(v: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for ((x, &l), &h) in v.iter_mut().zip(lo).zip(hi) {
        if *x < h {
            *x += 1;
            return true;
        }
        *x = l;
    }
    false
}

/// `Σ_w det(w) b_{L,a}(Λ_k + Λ_{a+L} + ρ − w(Λ_i + Λ_j + ρ))` with
/// `a = i + j − k` and `b_{L,a}(λ) = q^{|λ − Λ_{a+L}|²/2} [L; λ]_q`.
pub fn weyl_sum(class: &PathClass, length: usize) -> Result<QPoly, BranchingError> {
    let n = class.n();
    let f = |i: usize| weights::fundamental(n, i as i64);
    let rho = weights::rho(n)?;
    let a = class.shifted_index();
    let top = &(&f(class.i())? + &f(class.j())?) + &rho;
    let target = f(a + length)?;
    let base = &(&f(class.k())? + &target) + &rho;
    let bound = (length + n) as i64;
    let (terms, shell) = weyl_terms(length, &top, &base, &target, bound);
    if shell > 0 {
        return Err(BranchingError::BoundExhausted {
            bound,
            terms: shell,
        });
    }
    let mut acc = QPoly::zero();
    for t in terms {
        let piece = multinomial(length as i64, &t.parts).scale_by_monomial(t.exponent);
        if t.sign > 0 {
            acc += &piece;
        } else {
            acc -= &piece;
        }
    }
    Ok(acc)
}

/// `B_L(Λ_i+Λ_j, Λ_k) = q^{−|Λ_{i+j−k}|²/2} · weyl_sum`.
pub fn bosonic_b(class: &PathClass, length: usize) -> Result<QPoly, BranchingError> {
    let lam = weights::fundamental(class.n(), class.shifted_index() as i64)?;
    Ok(weyl_sum(class, length)?.scale_by_monomial(-lam.norm_sq() / Rat::from_integer(2)))
}

/// Vectors `m` with `Σ a·m_a <= cap`.
fn occupation_vectors(d: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let a = prefix.len() + 1;
        if a > d {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=cap / a {
            prefix.push(x);
            rec(d, cap - a * x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, cap, &mut Vec::new(), &mut out);
    out
}

/// `e_{n−j}` as an integer vector, zero when `j = 0`.
fn unit_n_minus_j(n: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0; n - 1];
    let idx = n - j % n;
    if idx < n {
        e[idx - 1] = 1;
    }
    e
}

/// Fermionic form of `F_L(Λ_0+Λ_j, Λ_k)`:
/// `Σ_m q^{mᵗC⁻¹m − mᵗC⁻¹e_{n−j}} Π_i [ℓ_i + m_i; m_i]_q` over `m` with
/// `k + Σ i·m_i ≡ 0 (mod n)`.
pub fn fermionic_f(n: usize, length: usize, j: usize, k: usize) -> Result<QPoly, BranchingError> {
    let cd = CartanData::new(n)?;
    let (j, k) = (j % n, k % n);
    let e = unit_n_minus_j(n, j);
    // ℓ_{n−1} >= 0 forces 2 Σ i·m_i <= (n−1)L + r + (n−j)
    let cap = ((n - 1) * length + 2 * n) / 2;
    let mut acc = QPoly::zero();
    for m in occupation_vectors(n - 1, cap) {
        let Ok(label) = ParentLabel::new(n, m.clone(), k) else {
            continue;
        };
        let ell = ell_vector(&label, length, j)?;
        let mut term = QPoly::one();
        for (a, &mi) in m.iter().enumerate() {
            term = &term * &gaussian(ell[a] + mi as i64, mi as i64);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        let mv: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        acc += &term.scale_by_monomial(cd.form(&mv, &mv) - cd.form(&mv, &e));
    }
    Ok(acc)
}

/// `(|Λ_k|² + |Λ_{j−k}|² − |Λ_j|²)/2`.
pub fn bf_prefactor(n: usize, j: usize, k: usize) -> Result<Rat, BranchingError> {
    let nsq = |i: i64| weights::fundamental(n, i).map(|w| w.norm_sq());
    let (j, k) = (j as i64, k as i64);
    Ok((nsq(k)? + nsq(j - k)? - nsq(j)?) / Rat::from_integer(2))
}

/// Multiplies a bosonic `B_L(Λ_0+Λ_j, Λ_k)` by the prefactor that turns it
/// into the fermionic `F_L`.
pub fn b_to_f(n: usize, j: usize, k: usize, b: &QPoly) -> Result<QPoly, BranchingError> {
    Ok(b.scale_by_monomial(bf_prefactor(n, j, k)?))
}

/// Both sides of the polynomial identity for one `(n, L, j, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCell {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub length: usize,
    /// Fermionic side.
    pub lhs: QPoly,
    /// Prefactored Weyl sum.
    pub rhs: QPoly,
    pub verdict: Verdict,
}

/// Compares `F_L(Λ_0+Λ_j, Λ_k)` with `q^{(|Λ_k|² − |Λ_j|²)/2}` times the Weyl sum.
pub fn verify_identity(
    n: usize,
    length: usize,
    j: usize,
    k: usize,
) -> Result<IdentityCell, BranchingError> {
    let (j, k) = (j % n, k % n);
    let lhs = fermionic_f(n, length, j, k)?;
    let class = PathClass::new(n, 0, j as i64, k as i64)?;
    let nsq = |i: usize| weights::fundamental(n, i as i64).map(|w| w.norm_sq());
    let pre = (nsq(k)? - nsq(j)?) / Rat::from_integer(2);
    let rhs = weyl_sum(&class, length)?.scale_by_monomial(pre);
    let verdict = Verdict::classify(&lhs, &rhs);
    Ok(IdentityCell {
        n,
        j,
        k,
        length,
        lhs,
        rhs,
        verdict,
    })
}

/// `Θ_{λ,ℓ} = Σ_{α ∈ Q} q^{ℓ|α − λ/ℓ|²/2}` truncated to exponents `<= order`.
///
/// # Panics
/// If `ell <= 0` or `lambda` has fewer than two coordinates.
pub fn theta_truncated(lambda: &[Rat], ell: i64, order: Rat) -> QPoly {
    assert!(ell > 0, "theta level must be positive");
    let n = lambda.len();
    assert!(n >= 2, "theta needs rank n >= 2");
    if order < Rat::zero() {
        return QPoly::zero();
    }
    let ell_r = Rat::from_integer(ell);
    let centre: Vec<Rat> = lambda.iter().map(|x| x / ell_r).collect();
    let radius_sq = Rat::from_integer(2) * order / ell_r;
    let mut radius = 0i64;
    while Rat::from_integer(radius * radius) < radius_sq {
        radius += 1;
    }
    let lo: Vec<i64> = centre[..n - 1]
        .iter()
        .map(|c| (c - Rat::from_integer(radius)).ceil().to_integer())
        .collect();
    let hi: Vec<i64> = centre[..n - 1]
        .iter()
        .map(|c| (c + Rat::from_integer(radius)).floor().to_integer())
        .collect();
    let mut acc = QPoly::zero();
    let mut alpha = lo.clone();
    loop {
        let last = -alpha.iter().sum::<i64>();
        let norm: Rat = alpha
            .iter()
            .chain(std::iter::once(&last))
            .zip(&centre)
            .map(|(&a, c)| {
                let x = Rat::from_integer(a) - c;
                x * x
            })
            .sum();
        let e = ell_r * norm / Rat::from_integer(2);
        if e <= order {
            acc.add_term(e, 1.into());
        }
        if !odometer_step(&mut alpha, &lo, &hi) {
            return acc;
        }
    }
}

/// `Σ_m q^{mᵗC⁻¹m − mᵗC⁻¹e_{n−j}} / Π (q)_{m_i}` truncated at `order`.
pub fn fermionic_series(n: usize, j: usize, k: usize, order: Rat) -> Result<QPoly, BranchingError> {
    let cd = CartanData::new(n)?;
    let (j, k) = (j % n, k % n);
    let e = unit_n_minus_j(n, j);
    // exponent >= S²/n − S·M with S = Σ m_a and M the largest entry of C⁻¹e
    let big_m = cd
        .cinv_apply(&e)
        .into_iter()
        .max()
        .unwrap_or_else(Rat::zero);
    let n_r = Rat::from_integer(n as i64);
    let mut s_max = 0i64;
    loop {
        let s = Rat::from_integer(s_max);
        if s > n_r * big_m && s * s / n_r - s * big_m > order {
            break;
        }
        s_max += 1;
    }
    let cap = (s_max as usize) * (n - 1);
    let mut acc = QPoly::zero();
    for m in occupation_vectors(n - 1, cap) {
        if m.iter().sum::<usize>() as i64 >= s_max || ParentLabel::new(n, m.clone(), k).is_err() {
            continue;
        }
        let mv: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        let ex = cd.form(&mv, &mv) - cd.form(&mv, &e);
        if ex > order {
            continue;
        }
        let mut term = QPoly::q_pow(ex);
        for &mi in &m {
            term = term.mul_truncated(&inv_q_pochhammer(mi as i64, order - ex), order);
        }
        acc += &term;
    }
    Ok(acc)
}

/// The theta-function side, normalized to be comparable with
/// [`fermionic_series`]: `q^{s} (q)_∞^{1−n} Σ_{w̄} det(w̄) Θ_{λ_w̄, (n+1)(n+2)}`
/// with `λ_w̄ = (n+2)(Λ̄_k+ρ̄) − (n+1) w̄(Λ̄_j+ρ̄)` and
/// `s = |Λ_j+ρ|²/(2(n+2)) − |Λ_k+ρ|²/(2(n+1)) − (|Λ_j|² − |Λ_k|²)/2`.
pub fn theta_side(n: usize, j: usize, k: usize, order: Rat) -> Result<QPoly, BranchingError> {
    let rho = weights::rho(n)?;
    let lj = weights::fundamental(n, j as i64)?;
    let lk = weights::fundamental(n, k as i64)?;
    let jr = &lj + &rho;
    let kr = &lk + &rho;
    let two = Rat::from_integer(2);
    let n1 = Rat::from_integer(n as i64 + 1);
    let n2 = Rat::from_integer(n as i64 + 2);
    let shift =
        jr.norm_sq() / (two * n2) - kr.norm_sq() / (two * n1) - (lj.norm_sq() - lk.norm_sq()) / two;
    let inner = order - shift;
    let ell = (n as i64 + 1) * (n as i64 + 2);
    let thetas: Vec<QPoly> = Permutation::all(n)
        .par_iter()
        .map(|perm| {
            let w = finite_weyl_apply(perm, &jr);
            let lam: Vec<Rat> = kr
                .classical()
                .iter()
                .zip(w.classical())
                .map(|(a, b)| n2 * a - n1 * b)
                .collect();
            let th = theta_truncated(&lam, ell, inner);
            if perm.sign() > 0 {
                th
            } else {
                -th
            }
        })
        .collect();
    let theta_sum: QPoly = thetas.into_iter().sum();
    let partitions = inv_q_pochhammer(i64::MAX, inner);
    let mut series = theta_sum;
    for _ in 0..n - 1 {
        series = series.mul_truncated(&partitions, inner);
    }
    Ok(series.scale_by_monomial(shift).truncate(order))
}

/// Result of a truncated check of the `L → ∞` identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryOutcome {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    /// Compared exponents run up to this order.
    pub order: (i64, i64),
    /// Smallest `L` at which `F_L` and `F_{L+n}` agree up to `order`.
    pub stable_length: usize,
    pub fermionic: QPoly,
    pub theta: QPoly,
    /// The stabilized `F_L` equals the `1/(q)_m` series up to `order`.
    pub limit_agrees: bool,
    pub verdict: Verdict,
}

impl CorollaryOutcome {
    pub fn holds(&self) -> bool {
        self.limit_agrees && self.verdict.is_equal()
    }
}

/// Checks the `q`-series identity to `order`: stabilizes `F_L` in `L`
/// (comparing `L` with `L + n`, up to `ceiling`), checks that the limit is the
/// `1/(q)_m` series, and compares that series with the theta-function side.
pub fn corollary_check(
    n: usize,
    j: usize,
    k: usize,
    order: Rat,
    ceiling: usize,
) -> Result<CorollaryOutcome, BranchingError> {
    let (j, k) = (j % n, k % n);
    let mut length = n;
    let stable = loop {
        if length + n > ceiling {
            return Err(BranchingError::NotStabilized { order, ceiling });
        }
        let a = fermionic_f(n, length, j, k)?.truncate(order);
        let b = fermionic_f(n, length + n, j, k)?.truncate(order);
        if a == b {
            break a;
        }
        length += 1;
    };
    let fermionic = fermionic_series(n, j, k, order)?;
    let theta = theta_side(n, j, k, order)?;
    Ok(CorollaryOutcome {
        n,
        j,
        k,
        order: (*order.numer(), *order.denom()),
        stable_length: length,
        limit_agrees: stable == fermionic,
        verdict: Verdict::classify(&fermionic, &theta),
        fermionic,
        theta,
    })
}

impl From<crate::kgraphs::KGraphError> for BranchingError {
    fn from(e: crate::kgraphs::KGraphError) -> Self {
        BranchingError::Sector(e.into())
    }
}
