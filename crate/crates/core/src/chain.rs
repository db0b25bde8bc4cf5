//! Sparse Hochschild chains `C_n(A) = A^⊗(n+1)` over the standard tensor basis.
//!
//! A chain of degree `n` maps index tuples of length `n + 1` (split-basis
//! indices of the owning [`Extension`]) to nonzero rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Extension};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar, SparseVector};

pub type Tuple = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Tuple, Scalar>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// A single pure tensor with coefficient one.
    pub fn pure(tuple: Tuple) -> Self {
        assert!(!tuple.is_empty(), "a tensor needs at least one slot");
        let mut c = Self::zero(tuple.len() - 1);
        c.terms.insert(tuple, Scalar::one());
        c
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Tuple, Scalar)>) -> Result<Self> {
        let mut c = Self::zero(degree);
        for (t, x) in terms {
            if t.len() != degree + 1 {
                return Err(Error::DegreeMismatch { expected: degree, found: t.len().saturating_sub(1) });
            }
            c.add_term(t, &x);
        }
        Ok(c)
    }

    /// `coeff · slots[0] ⊗ … ⊗ slots[n]` expanded over the basis.
    pub fn tensor(slots: &[SparseVector], coeff: &Scalar) -> Self {
        assert!(!slots.is_empty());
        let mut out = Self::zero(slots.len() - 1);
        if coeff.is_zero() {
            return out;
        }
        let mut partial: Vec<(Tuple, Scalar)> = vec![(Vec::with_capacity(slots.len()), coeff.clone())];
        for v in slots {
            let mut next = Vec::with_capacity(partial.len() * v.nnz());
            for (t, x) in &partial {
                for (i, y) in v.iter() {
                    let mut t = t.clone();
                    t.push(i);
                    next.push((t, x * y));
                }
            }
            partial = next;
        }
        for (t, x) in partial {
            out.add_term(t, &x);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, tuple: &[usize]) -> Scalar {
        self.terms.get(tuple).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, tuple: Tuple, coeff: &Scalar) {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor · other`.
    pub fn axpy(&mut self, factor: &Scalar, other: &Chain) {
        assert_eq!(self.degree, other.degree, "adding chains of different degrees");
        for (t, x) in &other.terms {
            self.add_term(t.clone(), &(factor * x));
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Chain {
        let mut out = Chain::zero(self.degree);
        out.axpy(factor, self);
        out
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other);
        out
    }

    pub fn minus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other);
        out
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().flat_map(|t| t.iter().copied()).max()
    }

    /// Human-readable form such as `E11⊗E12 - 2 E22⊗E11`.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (n, (t, x)) in self.terms.iter().enumerate() {
            let negative = *x < Scalar::zero();
            let magnitude = if negative { -x.clone() } else { x.clone() };
            match (n, negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if !magnitude.is_one() {
                let _ = write!(s, "{} ", linalg::format_scalar(&magnitude));
            }
            let slots: Vec<&str> = t.iter().map(|&i| labels.get(i).map_or("?", String::as_str)).collect();
            s.push_str(&slots.join("⊗"));
        }
        s
    }
}

fn sign(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn boundary_impl(algebra: &Algebra, c: &Chain, wrap: bool) -> Result<Chain> {
    let n = c.degree;
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let mut out = Chain::zero(n - 1);
    for (t, x) in &c.terms {
        for i in 0..n {
            let coeff = if i % 2 == 1 { -x.clone() } else { x.clone() };
            for (k, y) in algebra.product(t[i], t[i + 1]).iter() {
                let mut u = Vec::with_capacity(n);
                u.extend_from_slice(&t[..i]);
                u.push(k);
                u.extend_from_slice(&t[i + 2..]);
                out.add_term(u, &(&coeff * y));
            }
        }
        if wrap {
            let coeff = if n % 2 == 1 { -x.clone() } else { x.clone() };
            for (k, y) in algebra.product(t[n], t[0]).iter() {
                let mut u = Vec::with_capacity(n);
                u.push(k);
                u.extend_from_slice(&t[1..n]);
                out.add_term(u, &(&coeff * y));
            }
        }
    }
    Ok(out)
}

/// Hochschild differential
/// `b(f₀⊗…⊗fₙ) = Σ_{i<n} (−1)^i f₀⊗…⊗f_i f_{i+1}⊗…⊗fₙ + (−1)^n fₙf₀⊗f₁⊗…⊗f_{n−1}`.
pub fn boundary_b(ext: &Extension, c: &Chain) -> Result<Chain> {
    boundary_impl(ext.algebra(), c, true)
}

/// Bar differential `b′`: `b` without the wrap-around term.
pub fn bar_boundary(ext: &Extension, c: &Chain) -> Result<Chain> {
    boundary_impl(ext.algebra(), c, false)
}

/// `t(f₀⊗…⊗fₙ) = (−1)^n fₙ⊗f₀⊗…⊗f_{n−1}`.
pub fn cyclic_t(c: &Chain) -> Chain {
    let n = c.degree;
    let s = sign(n % 2 == 1);
    let mut out = Chain::zero(n);
    for (t, x) in &c.terms {
        let mut u = Vec::with_capacity(n + 1);
        u.push(t[n]);
        u.extend_from_slice(&t[..n]);
        out.add_term(u, &(&s * x));
    }
    out
}

/// `(1 − t)c`.
pub fn one_minus_t(c: &Chain) -> Chain {
    c.minus(&cyclic_t(c))
}

/// The lexicographically smallest rotation of `tuple` and the sign relating
/// the two classes in the coinvariants, or `None` when the class of `tuple`
/// is zero (a self-rotation with sign −1).
pub fn canonical_rotation(tuple: &[usize]) -> Option<(Tuple, bool)> {
    let len = tuple.len();
    let n = len - 1;
    // rot^k moves the last k slots to the front; t^k τ = (−1)^{nk} rot^k τ.
    let rotation = |k: usize| -> Tuple { tuple[len - k..].iter().chain(&tuple[..len - k]).copied().collect() };
    let period = (1..=len).find(|&d| len.is_multiple_of(d) && (0..len).all(|i| tuple[i] == tuple[(i + d) % len])).unwrap();
    if period < len && (n * period) % 2 == 1 {
        return None;
    }
    let (k, best) = (0..len).map(|k| (k, rotation(k))).min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))).unwrap();
    Some((best, (n * k) % 2 == 1))
}

/// A chain in canonical form for the coinvariants `CC_n = C_n/(1 − t)`.
///
/// Every stored tuple is the minimal rotation of its orbit, and orbits that
/// vanish in the coinvariants are absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicChain(Chain);

impl CyclicChain {
    pub fn as_chain(&self) -> &Chain {
        &self.0
    }

    pub fn into_chain(self) -> Chain {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn zero(degree: usize) -> Self {
        CyclicChain(Chain::zero(degree))
    }

    pub fn minus(&self, other: &CyclicChain) -> CyclicChain {
        CyclicChain(self.0.minus(&other.0))
    }

    pub fn plus(&self, other: &CyclicChain) -> CyclicChain {
        CyclicChain(self.0.plus(&other.0))
    }
}

pub fn canonicalize_cyclic(c: &Chain) -> CyclicChain {
    let mut out = Chain::zero(c.degree);
    for (t, x) in &c.terms {
        if let Some((u, negative)) = canonical_rotation(t) {
            if negative {
                out.add_term(u, &-x.clone());
            } else {
                out.add_term(u, x);
            }
        }
    }
    CyclicChain(out)
}

/// Smallest `p` with `c ∈ F_p C_n(A)`: the first `n − p + 1` slots of every
/// term lie in the ideal.
pub fn filtration_level(ext: &Extension, c: &Chain) -> usize {
    let n = c.degree;
    c.terms
        .keys()
        .map(|t| {
            let leading = t.iter().take_while(|&&i| ext.is_ideal_index(i)).count();
            n + 1 - leading
        })
        .max()
        .unwrap_or(0)
}

/// Smallest `p` with `c ∈ F̃_p C_n(A)`: every term has `n − p + 1` cyclically
/// successive slots in the ideal.
pub fn cyclic_filtration_level(ext: &Extension, c: &Chain) -> usize {
    let n = c.degree;
    c.terms.keys().map(|t| n + 1 - longest_cyclic_run(ext, t)).max().unwrap_or(0)
}

fn longest_cyclic_run(ext: &Extension, t: &[usize]) -> usize {
    let len = t.len();
    if t.iter().all(|&i| ext.is_ideal_index(i)) {
        return len;
    }
    // Start scanning right after a non-ideal slot so runs never wrap mid-count.
    let start = t.iter().position(|&i| !ext.is_ideal_index(i)).unwrap();
    let (mut best, mut run) = (0, 0);
    for step in 1..=len {
        if ext.is_ideal_index(t[(start + step) % len]) {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// True iff every term has at least one slot in the ideal, i.e. `c` lies in
/// `C_n(A, I) = ker(C_n(A) → C_n(A/I))`.
pub fn relative_membership(ext: &Extension, c: &Chain) -> bool {
    c.terms.keys().all(|t| t.iter().any(|&i| ext.is_ideal_index(i)))
}

/// True iff every slot of every term lies in the ideal: `c ∈ C_n(I)`.
pub fn in_ideal_complex(ext: &Extension, c: &Chain) -> bool {
    c.terms.keys().all(|t| t.iter().all(|&i| ext.is_ideal_index(i)))
}

/// `e ⊗ c`, raising the degree by one.
pub fn prepend(e: &SparseVector, c: &Chain) -> Chain {
    let mut out = Chain::zero(c.degree + 1);
    for (i, y) in e.iter() {
        for (t, x) in &c.terms {
            let mut u = Vec::with_capacity(t.len() + 1);
            u.push(i);
            u.extend_from_slice(t);
            out.add_term(u, &(x * y));
        }
    }
    out
}

/// Applies left multiplication by `e` to the initial slot of every term.
pub fn left_multiply_initial(ext: &Extension, e: &SparseVector, c: &Chain) -> Chain {
    let mut out = Chain::zero(c.degree);
    for (t, x) in &c.terms {
        let v = ext.algebra().mul(e, &ext.basis_vector(t[0]));
        for (k, y) in v.iter() {
            let mut u = t.clone();
            u[0] = k;
            out.add_term(u, &(x * y));
        }
    }
    out
}
