//! Homology of the Hochschild, cyclic and bar complexes of `A`, of `I`, and
//! of the pair `(A, I)`, computed by exact elimination on sparse boundary
//! matrices.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::Extension;
use crate::chain::{self, canonical_rotation, Chain, Tuple};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis, SolveOutcome, SparseMatrix, SparseVector};

pub const DEFAULT_MAX_DEGREE: usize = 4;
pub const MAX_DEGREE_ENV: &str = "EXCISIONLAB_MAX_DEGREE";

/// The degree cap, honoring `EXCISIONLAB_MAX_DEGREE` when it parses.
pub fn max_degree_from_env() -> usize {
    std::env::var(MAX_DEGREE_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEGREE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Complex {
    /// `(C_•, b)`
    Hochschild,
    /// `(C_•/(1 − t), b)`
    Cyclic,
    /// `(C_•, b′)`
    Bar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// The whole algebra `A`.
    Algebra,
    /// The ideal `I` as an algebra in its own right.
    Ideal,
    /// The relative complex `ker(C_•(A) → C_•(A/I))`.
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub complex: Complex,
    pub space: Space,
}

impl Variant {
    pub const fn new(complex: Complex, space: Space) -> Self {
        Self { complex, space }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Complex::Hochschild => "hh",
            Complex::Cyclic => "hc",
            Complex::Bar => "bar",
        })
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Algebra => "A",
            Space::Ideal => "I",
            Space::Relative => "relative",
        })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.complex, self.space)
    }
}

impl FromStr for Complex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hh" => Ok(Complex::Hochschild),
            "hc" => Ok(Complex::Cyclic),
            "bar" => Ok(Complex::Bar),
            other => Err(Error::invalid(format!("unknown complex {other:?} (expected hh, hc or bar)"))),
        }
    }
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" | "algebra" => Ok(Space::Algebra),
            "I" | "i" | "ideal" => Ok(Space::Ideal),
            "relative" | "rel" => Ok(Space::Relative),
            other => Err(Error::invalid(format!("unknown space {other:?} (expected A, I or relative)"))),
        }
    }
}

/// The basis of one chain group of a complex variant: index tuples for the
/// Hochschild and bar complexes, canonical rotation representatives for the
/// cyclic one.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    variant: Variant,
    degree: usize,
    tuples: Vec<Tuple>,
    index: HashMap<Tuple, usize>,
}

impl ChainBasis {
    pub fn new(ext: &Extension, variant: Variant, degree: usize) -> Self {
        let range = match variant.space {
            Space::Ideal => ext.ideal_count(),
            Space::Algebra | Space::Relative => ext.dim(),
        };
        let len = degree + 1;
        let mut tuples = Vec::new();
        if range > 0 {
            let mut t = vec![0usize; len];
            loop {
                let keep = (variant.space != Space::Relative || t.iter().any(|&i| ext.is_ideal_index(i)))
                    && (variant.complex != Complex::Cyclic
                        || canonical_rotation(&t).is_some_and(|(best, _)| best == t));
                if keep {
                    tuples.push(t.clone());
                }
                // Odometer, last slot fastest, so tuples come out sorted.
                let Some(pos) = (0..len).rev().find(|&p| t[p] + 1 < range) else { break };
                t[pos] += 1;
                for x in &mut t[pos + 1..] {
                    *x = 0;
                }
            }
        }
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { variant, degree, tuples, index }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Coordinates of `c` in this basis; cyclic chains are canonicalized
    /// first. Fails if `c` has a term outside the space.
    pub fn coordinates(&self, c: &Chain) -> Result<SparseVector> {
        if c.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: c.degree() });
        }
        let canonical;
        let c = if self.variant.complex == Complex::Cyclic {
            canonical = chain::canonicalize_cyclic(c).into_chain();
            &canonical
        } else {
            c
        };
        let mut v = SparseVector::zeros(self.len());
        for (t, x) in c.terms() {
            let &i = self.index.get(t).ok_or_else(|| {
                Error::invalid(format!("term {t:?} lies outside the {} chain group in degree {}", self.variant, self.degree))
            })?;
            v.add_at(i, x);
        }
        Ok(v)
    }

    pub fn chain(&self, v: &SparseVector) -> Chain {
        Chain::from_terms(self.degree, v.iter().map(|(i, x)| (self.tuples[i].clone(), x.clone()))).expect("basis tuples have the right length")
    }
}

/// Applies the differential of `complex` to a chain.
pub fn differential(ext: &Extension, complex: Complex, c: &Chain) -> Result<Chain> {
    match complex {
        Complex::Hochschild => chain::boundary_b(ext, c),
        Complex::Cyclic => Ok(chain::canonicalize_cyclic(&chain::boundary_b(ext, c)?).into_chain()),
        Complex::Bar => chain::bar_boundary(ext, c),
    }
}

/// Matrix of the differential `C_n → C_{n−1}` of `variant` in the bases
/// `ChainBasis::new(.., n)` and `ChainBasis::new(.., n − 1)`. In degree 0 the
/// target is the zero space.
pub fn boundary_matrix(ext: &Extension, variant: Variant, source: &ChainBasis) -> Result<SparseMatrix> {
    let n = source.degree();
    if n == 0 {
        return Ok(SparseMatrix::zeros(0, source.len()));
    }
    let target = ChainBasis::new(ext, variant, n - 1);
    boundary_matrix_between(ext, variant, source, &target)
}

fn boundary_matrix_between(ext: &Extension, variant: Variant, source: &ChainBasis, target: &ChainBasis) -> Result<SparseMatrix> {
    let mut triplets = Vec::new();
    for (j, t) in source.tuples().iter().enumerate() {
        let image = differential(ext, variant.complex, &Chain::pure(t.clone()))?;
        for (i, x) in target.coordinates(&image)?.iter() {
            triplets.push((i, j, x.clone()));
        }
    }
    Ok(SparseMatrix::from_triplets(target.len(), source.len(), triplets)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub variant: Variant,
    pub degree: usize,
    pub dimension: usize,
    /// Dimension of the cycles in degree `n`.
    pub cycles: usize,
    /// Rank of the incoming boundary map.
    pub boundaries: usize,
    /// Cycles whose classes form a basis of the homology, in canonical form
    /// for the cyclic complex.
    pub representatives: Vec<Chain>,
}

/// `H_n` of the requested complex, with deterministic representative cycles.
pub fn homology(ext: &Extension, variant: Variant, degree: usize, max_degree: usize) -> Result<HomologyReport> {
    if degree > max_degree {
        return Err(Error::DegreeTooLarge { requested: degree, max: max_degree });
    }
    let here = ChainBasis::new(ext, variant, degree);
    let above = ChainBasis::new(ext, variant, degree + 1);
    let outgoing = boundary_matrix(ext, variant, &here)?;
    let incoming = boundary_matrix_between(ext, variant, &above, &here)?;

    let (kernel, _) = linalg::kernel_and_rank(&outgoing);
    let image = linalg::image_basis(&incoming);
    let mut span = EchelonBasis::new(here.len());
    for v in &image {
        span.insert(v)?;
    }
    let mut representatives = Vec::new();
    for k in &kernel {
        if span.insert(k)? {
            representatives.push(here.chain(k));
        }
    }
    Ok(HomologyReport {
        variant,
        degree,
        dimension: kernel.len() - image.len(),
        cycles: kernel.len(),
        boundaries: image.len(),
        representatives,
    })
}

/// Finds `η` in degree `n + 1` of `variant` with `d(η) = target`, choosing
/// free variables as zero. If none exists the error carries the full linear
/// system and an inconsistency witness.
pub fn bounding_chain(ext: &Extension, variant: Variant, target: &Chain) -> Result<Chain> {
    let n = target.degree();
    let here = ChainBasis::new(ext, variant, n);
    let above = ChainBasis::new(ext, variant, n + 1);
    let m = boundary_matrix_between(ext, variant, &above, &here)?;
    let rhs = here.coordinates(target)?;
    match linalg::solve(&m, &rhs)? {
        SolveOutcome::Solved(x) => Ok(above.chain(&x)),
        SolveOutcome::Unsolvable(w) => Err(Error::CertificateUnsolvable { dump: dump_system(&m, &rhs, &here, &above, &w) }),
    }
}

fn dump_system(m: &SparseMatrix, rhs: &SparseVector, rows: &ChainBasis, cols: &ChainBasis, w: &linalg::Inconsistency) -> String {
    use std::fmt::Write as _;
    let mut s = format!(
        "system: {} equations (degree-{} basis of {}) in {} unknowns (degree-{} basis)\n",
        m.rows(),
        rows.degree(),
        rows.variant(),
        m.cols(),
        cols.degree()
    );
    for i in 0..m.rows() {
        let row = m.row(i);
        let lhs: Vec<String> = row.iter().map(|(j, x)| format!("{}*x{:?}", linalg::format_scalar(x), cols.tuples()[j])).collect();
        let _ = writeln!(s, "  {:?}: {} = {}", rows.tuples()[i], if lhs.is_empty() { "0".into() } else { lhs.join(" + ") }, linalg::format_scalar(&rhs.get(i)));
    }
    let _ = writeln!(s, "inconsistency witness (row combination): {}", w.combination);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_matrices, upper_triangular_2x2, Algebra};
    use crate::linalg::SpanMembership;

    fn t2_corner() -> Extension {
        let t2 = upper_triangular_2x2();
        Extension::from_parts(t2, vec![SparseVector::unit(3, 0), SparseVector::unit(3, 1)], None).unwrap()
    }

    fn dims(ext: &Extension, v: Variant, up_to: usize) -> Vec<usize> {
        (0..=up_to).map(|n| homology(ext, v, n, 4).unwrap().dimension).collect()
    }

    #[test]
    fn corner_ideal_in_degree_zero() {
        let ext = t2_corner();
        let hc_i = homology(&ext, Variant::new(Complex::Cyclic, Space::Ideal), 0, 4).unwrap();
        assert_eq!(hc_i.dimension, 1);
        assert_eq!(hc_i.representatives, vec![Chain::pure(vec![0])]);
        let hc_rel = homology(&ext, Variant::new(Complex::Cyclic, Space::Relative), 0, 4).unwrap();
        assert_eq!(hc_rel.dimension, 1);
    }

    #[test]
    fn zero_algebra_has_no_homology() {
        let ext = Extension::whole(Algebra::zero_product(vec![])).unwrap();
        for complex in [Complex::Hochschild, Complex::Cyclic, Complex::Bar] {
            assert_eq!(dims(&ext, Variant::new(complex, Space::Algebra), 3), vec![0; 4]);
        }
    }

    #[test]
    fn matrix_algebra_cyclic_homology() {
        let ext = Extension::whole(full_matrices(2)).unwrap();
        assert_eq!(dims(&ext, Variant::new(Complex::Cyclic, Space::Algebra), 3), vec![1, 0, 1, 0]);
        assert_eq!(dims(&ext, Variant::new(Complex::Hochschild, Space::Algebra), 2), vec![1, 0, 0]);
    }

    #[test]
    fn degree_cap() {
        let ext = t2_corner();
        assert_eq!(
            homology(&ext, Variant::new(Complex::Cyclic, Space::Algebra), 5, 4).unwrap_err(),
            Error::DegreeTooLarge { requested: 5, max: 4 }
        );
    }

    #[test]
    fn representatives_are_independent_cycles() {
        let ext = Extension::whole(full_matrices(2)).unwrap();
        for complex in [Complex::Hochschild, Complex::Cyclic] {
            let v = Variant::new(complex, Space::Algebra);
            for n in 0..3 {
                let report = homology(&ext, v, n, 4).unwrap();
                assert_eq!(report.representatives.len(), report.dimension);
                let here = ChainBasis::new(&ext, v, n);
                let above = ChainBasis::new(&ext, v, n + 1);
                let mut image = linalg::image_basis(&boundary_matrix_between(&ext, v, &above, &here).unwrap());
                for r in &report.representatives {
                    if n > 0 {
                        assert!(differential(&ext, complex, r).unwrap().is_zero());
                    }
                    let coords = here.coordinates(r).unwrap();
                    assert_eq!(linalg::in_span(&coords, &image).unwrap(), SpanMembership::NotInSpan);
                    image.push(coords);
                }
            }
        }
    }

    #[test]
    fn bounding_chains() {
        let ext = t2_corner();
        let v = Variant::new(Complex::Cyclic, Space::Relative);
        // E12 = b(E11⊗E12) is a boundary; E11 is not.
        let eta = bounding_chain(&ext, v, &Chain::pure(vec![1])).unwrap();
        assert_eq!(differential(&ext, Complex::Cyclic, &eta).unwrap(), Chain::pure(vec![1]));
        assert!(matches!(bounding_chain(&ext, v, &Chain::pure(vec![0])), Err(Error::CertificateUnsolvable { .. })));
    }

    #[test]
    fn cyclic_basis_skips_vanishing_orbits() {
        let ext = Extension::whole(full_matrices(2)).unwrap();
        let b = ChainBasis::new(&ext, Variant::new(Complex::Cyclic, Space::Algebra), 1);
        // 16 tuples, 4 diagonal ones vanish, the other 12 pair up.
        assert_eq!(b.len(), 6);
        let b = ChainBasis::new(&ext, Variant::new(Complex::Cyclic, Space::Algebra), 2);
        // (64 - 4) / 3 + 4 constant tuples
        assert_eq!(b.len(), 24);
    }
}
