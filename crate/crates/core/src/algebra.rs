//! Finite-dimensional associative algebras given by structure constants,
//! two-sided ideals, splittings `A ≅ I ⊕ A/I` and quotients.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis, Scalar, SparseMatrix, SparseVector};

/// Structure constants: `products[i * dim + j]` is `e_i · e_j` in coordinates.
/// No unit is assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    labels: Vec<String>,
    products: Vec<SparseVector>,
}

impl Algebra {
    /// The algebra with all products zero.
    pub fn zero_product(labels: Vec<String>) -> Self {
        let dim = labels.len();
        Self { labels, products: vec![SparseVector::zeros(dim); dim * dim] }
    }

    /// Builds an algebra from `(left, right, product)` records. Pairs that are
    /// not listed multiply to zero.
    pub fn from_products(
        labels: Vec<String>,
        products: impl IntoIterator<Item = (usize, usize, SparseVector)>,
    ) -> Result<Self> {
        let mut a = Self::zero_product(labels);
        let dim = a.dim();
        for (i, j, v) in products {
            if i >= dim || j >= dim {
                return Err(Error::invalid(format!("product ({i}, {j}) out of range for dimension {dim}")));
            }
            if v.dim() != dim {
                return Err(Error::Linalg(linalg::LinalgError::DimensionMismatch { expected: dim, found: v.dim() }));
            }
            a.products[i * dim + j] = v;
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// `e_i · e_j`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVector {
        &self.products[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.dim(), i)
    }

    pub fn mul(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::zeros(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.axpy(&(a * b), self.product(i, j));
            }
        }
        out
    }

    /// `x · e_j`.
    pub fn mul_basis_right(&self, x: &SparseVector, j: usize) -> SparseVector {
        let mut out = SparseVector::zeros(self.dim());
        for (i, a) in x.iter() {
            out.axpy(a, self.product(i, j));
        }
        out
    }

    /// `e_i · x`.
    pub fn mul_basis_left(&self, i: usize, x: &SparseVector) -> SparseVector {
        let mut out = SparseVector::zeros(self.dim());
        for (j, b) in x.iter() {
            out.axpy(b, self.product(i, j));
        }
        out
    }

    /// Checks `(e_i e_j) e_k = e_i (e_j e_k)` for every triple.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.product(i, j);
                for k in 0..d {
                    let left = self.mul_basis_right(ij, k);
                    let right = self.mul_basis_left(i, self.product(j, k));
                    if left != right {
                        return Err(Error::AssociativityFailure { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let products = (0..d * d).map(|ij| self.products[(ij % d) * d + ij / d].clone()).collect();
        Algebra { labels: self.labels.clone(), products }
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Nonzero `(left, right, product)` records, in index order.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &SparseVector)> + '_ {
        let d = self.dim();
        self.products.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(ij, v)| (ij / d, ij % d, v))
    }
}

/// Which side of a product left the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `a · x`
    Left,
    /// `x · a`
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "a·x",
            Side::Right => "x·a",
        })
    }
}

/// A two-sided ideal, given by a basis in the parent's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    parent: Algebra,
    basis: Vec<SparseVector>,
}

impl Ideal {
    pub fn new(parent: Algebra, basis: Vec<SparseVector>) -> Result<Self> {
        for v in &basis {
            if v.dim() != parent.dim() {
                return Err(Error::Linalg(linalg::LinalgError::DimensionMismatch {
                    expected: parent.dim(),
                    found: v.dim(),
                }));
            }
        }
        Ok(Self { parent, basis })
    }

    pub fn zero(parent: Algebra) -> Self {
        Self { parent, basis: Vec::new() }
    }

    pub fn whole(parent: Algebra) -> Self {
        let basis = (0..parent.dim()).map(|i| parent.basis_vector(i)).collect();
        Self { parent, basis }
    }

    /// The ideal spanned by the given standard basis vectors.
    pub fn spanned_by_indices(parent: Algebra, indices: &[usize]) -> Result<Self> {
        let basis = indices
            .iter()
            .map(|&i| {
                if i < parent.dim() {
                    Ok(parent.basis_vector(i))
                } else {
                    Err(Error::invalid(format!("ideal index {i} out of range")))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { parent, basis })
    }

    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn basis(&self) -> &[SparseVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn span(&self) -> Result<EchelonBasis> {
        let mut span = EchelonBasis::new(self.parent.dim());
        for (idx, v) in self.basis.iter().enumerate() {
            if !span.insert(v)? {
                return Err(Error::DependentVectors { what: "ideal basis", index: idx });
            }
        }
        Ok(span)
    }

    pub fn contains(&self, v: &SparseVector) -> Result<bool> {
        Ok(self.span()?.contains(v))
    }

    /// Linear independence plus `a·x, x·a ∈ I` for every parent basis element
    /// `a` and ideal basis vector `x`.
    pub fn validate(&self) -> Result<()> {
        let span = self.span()?;
        for (xi, x) in self.basis.iter().enumerate() {
            for a in 0..self.parent.dim() {
                for side in [Side::Left, Side::Right] {
                    let product = match side {
                        Side::Left => self.parent.mul_basis_left(a, x),
                        Side::Right => self.parent.mul_basis_right(x, a),
                    };
                    if !span.contains(&product) {
                        return Err(Error::NotTwoSided { side, algebra_index: a, ideal_index: xi, product });
                    }
                }
            }
        }
        Ok(())
    }

    /// The same subspace inside the opposite algebra.
    pub fn opposite(&self) -> Ideal {
        Ideal { parent: self.parent.opposite(), basis: self.basis.clone() }
    }
}

/// An ordered basis of the parent algebra whose first `ideal_count` vectors
/// are the ideal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBasis {
    ideal: Ideal,
    ordered: Vec<SparseVector>,
}

impl SplitBasis {
    /// Completes the ideal basis to a basis of the parent. Without a hint the
    /// complement is the first standard basis vectors that raise the rank.
    pub fn new(ideal: Ideal, complement_hint: Option<&[SparseVector]>) -> Result<Self> {
        let d = ideal.parent.dim();
        let mut span = ideal.span()?;
        let mut ordered = ideal.basis.clone();
        match complement_hint {
            Some(hint) => {
                for (idx, v) in hint.iter().enumerate() {
                    if v.dim() != d {
                        return Err(Error::Linalg(linalg::LinalgError::DimensionMismatch { expected: d, found: v.dim() }));
                    }
                    if !span.insert(v)? {
                        return Err(Error::DependentVectors { what: "complement hint", index: idx });
                    }
                    ordered.push(v.clone());
                }
                if ordered.len() != d {
                    return Err(Error::invalid(format!(
                        "complement has {} vectors; {} are needed to complete the ideal basis",
                        hint.len(),
                        d - ideal.dim()
                    )));
                }
            }
            None => {
                for i in 0..d {
                    let e = SparseVector::unit(d, i);
                    if span.insert(&e)? {
                        ordered.push(e);
                    }
                }
            }
        }
        Ok(Self { ideal, ordered })
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn parent(&self) -> &Algebra {
        &self.ideal.parent
    }

    pub fn ordered_basis(&self) -> &[SparseVector] {
        &self.ordered
    }

    pub fn ideal_count(&self) -> usize {
        self.ideal.dim()
    }

    pub fn complement(&self) -> &[SparseVector] {
        &self.ordered[self.ideal_count()..]
    }
}

/// An algebra extension `I ↪ A ↠ A/I` together with a fixed splitting.
///
/// Chains are written over the split basis, so ideal elements are exactly the
/// vectors supported on indices `< ideal_count`.
#[derive(Clone, Debug)]
pub struct Extension {
    split: SplitBasis,
    /// Structure constants with respect to the split basis.
    algebra: Algebra,
    /// Parent coordinates → split coordinates.
    to_split: SparseMatrix,
}

impl Extension {
    pub fn new(split: SplitBasis) -> Result<Self> {
        split.ideal.validate()?;
        let parent = split.parent();
        let d = parent.dim();
        let basis_matrix = SparseMatrix::from_columns(d, &split.ordered)?;
        let to_split = linalg::invert(&basis_matrix).ok_or(Error::DependentVectors { what: "split basis", index: 0 })?;
        let labels = split.ordered.iter().map(|v| describe_vector(parent, v)).collect();
        let mut products = Vec::new();
        for (i, u) in split.ordered.iter().enumerate() {
            for (j, w) in split.ordered.iter().enumerate() {
                let p = to_split.mul_vec(&parent.mul(u, w))?;
                if !p.is_zero() {
                    products.push((i, j, p));
                }
            }
        }
        let algebra = Algebra::from_products(labels, products)?;
        Ok(Self { split, algebra, to_split })
    }

    /// Validates `algebra` and `ideal`, then splits with the default rule.
    pub fn from_parts(algebra: Algebra, ideal_basis: Vec<SparseVector>, complement: Option<&[SparseVector]>) -> Result<Self> {
        algebra.validate()?;
        let ideal = Ideal::new(algebra, ideal_basis)?;
        ideal.validate()?;
        Self::new(SplitBasis::new(ideal, complement)?)
    }

    /// `I = A`.
    pub fn whole(algebra: Algebra) -> Result<Self> {
        algebra.validate()?;
        Self::new(SplitBasis::new(Ideal::whole(algebra), None)?)
    }

    pub fn split(&self) -> &SplitBasis {
        &self.split
    }

    pub fn parent(&self) -> &Algebra {
        self.split.parent()
    }

    /// The algebra in split coordinates.
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn ideal_count(&self) -> usize {
        self.split.ideal_count()
    }

    pub fn is_ideal_index(&self, i: usize) -> bool {
        i < self.ideal_count()
    }

    /// True when `v` (split coordinates) lies in the ideal.
    pub fn in_ideal(&self, v: &SparseVector) -> bool {
        v.iter().all(|(i, _)| self.is_ideal_index(i))
    }

    pub fn mul(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.algebra.mul(x, y)
    }

    pub fn basis_vector(&self, i: usize) -> SparseVector {
        self.algebra.basis_vector(i)
    }

    pub fn to_split_coords(&self, parent: &SparseVector) -> Result<SparseVector> {
        Ok(self.to_split.mul_vec(parent)?)
    }

    pub fn to_parent_coords(&self, split: &SparseVector) -> Result<SparseVector> {
        if split.dim() != self.dim() {
            return Err(Error::Linalg(linalg::LinalgError::DimensionMismatch { expected: self.dim(), found: split.dim() }));
        }
        let mut out = SparseVector::zeros(self.dim());
        for (i, x) in split.iter() {
            out.axpy(x, &self.split.ordered[i]);
        }
        Ok(out)
    }

    /// The same extension with every product reversed. Local right units of
    /// `I` become local left units of the result.
    pub fn opposite(&self) -> Result<Extension> {
        let ideal = self.split.ideal.opposite();
        let complement = self.split.complement().to_vec();
        Self::new(SplitBasis::new(ideal, Some(&complement))?)
    }

    /// The extension `I ↪ I ↠ 0` of the ideal by itself, with the same basis.
    pub fn ideal_algebra(&self) -> Algebra {
        let k = self.ideal_count();
        let labels = self.algebra.labels[..k].to_vec();
        let products = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| {
                let p = self.algebra.product(i, j);
                (i, j, SparseVector::from_entries(k, p.iter().map(|(l, x)| (l, x.clone()))).expect("ideal is closed"))
            })
            .collect::<Vec<_>>();
        Algebra::from_products(labels, products).expect("in range")
    }
}

fn describe_vector(a: &Algebra, v: &SparseVector) -> String {
    if v.nnz() == 1 {
        let (i, x) = v.leading().unwrap();
        if x.is_one() {
            return a.label(i).to_string();
        }
    }
    let mut s = String::from("(");
    for (n, (i, x)) in v.iter().enumerate() {
        let term = if x.is_one() {
            a.label(i).to_string()
        } else if *x == -Scalar::one() {
            format!("-{}", a.label(i))
        } else {
            format!("{}*{}", linalg::format_scalar(x), a.label(i))
        };
        if n > 0 && !term.starts_with('-') {
            s.push('+');
        }
        s.push_str(&term);
    }
    s.push(')');
    s
}

/// `A/I` with the basis given by the images of the complement vectors.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    source: Extension,
    algebra: Algebra,
}

impl QuotientAlgebra {
    pub fn new(source: &Extension) -> Result<Self> {
        let k = source.ideal_count();
        let d = source.dim();
        let labels = source.algebra.labels[k..].to_vec();
        let project = |v: &SparseVector| {
            SparseVector::from_entries(d - k, v.iter().filter(|(i, _)| *i >= k).map(|(i, x)| (i - k, x.clone())))
        };
        let mut products = Vec::new();
        for a in k..d {
            for b in k..d {
                products.push((a - k, b - k, project(source.algebra.product(a, b))?));
            }
        }
        let algebra = Algebra::from_products(labels, products)?;
        // π(u_i u_j) = π(u_i) π(u_j) on every pair of split basis vectors.
        for i in 0..d {
            for j in 0..d {
                let lhs = project(source.algebra.product(i, j))?;
                let rhs = if i < k || j < k { SparseVector::zeros(d - k) } else { algebra.product(i - k, j - k).clone() };
                if lhs != rhs {
                    return Err(Error::invalid(format!("projection is not multiplicative on ({i}, {j})")));
                }
            }
        }
        Ok(Self { source: source.clone(), algebra })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn source(&self) -> &Extension {
        &self.source
    }

    /// Projection of a split-coordinate vector onto `A/I`.
    pub fn project(&self, v: &SparseVector) -> SparseVector {
        let k = self.source.ideal_count();
        let mut out = SparseVector::zeros(self.algebra.dim());
        for (i, x) in v.iter().filter(|(i, _)| *i >= k) {
            out.add_at(i - k, x);
        }
        out
    }
}

pub fn quotient(source: &Extension) -> Result<QuotientAlgebra> {
    QuotientAlgebra::new(source)
}

/// Upper-triangular 2×2 matrices with basis `E11, E12, E22`.
pub fn upper_triangular_2x2() -> Algebra {
    matrix_subalgebra(2, &[(0, 0), (0, 1), (1, 1)])
}

/// Full `n×n` matrices with basis `E_ij` in row-major order.
pub fn full_matrices(n: usize) -> Algebra {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    matrix_subalgebra(n, &units)
}

/// The span of the given matrix units, which must be closed under
/// multiplication.
pub fn matrix_subalgebra(n: usize, units: &[(usize, usize)]) -> Algebra {
    let labels = units.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    let d = units.len();
    let index = |u: (usize, usize)| units.iter().position(|&w| w == u);
    let mut products = Vec::new();
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(k, l)) in units.iter().enumerate() {
            if j == k {
                let c = index((i, l)).unwrap_or_else(|| panic!("E{}{} missing from the subalgebra", i + 1, l + 1));
                products.push((a, b, SparseVector::unit(d, c)));
            }
        }
    }
    debug_assert!(n > 0 || units.is_empty());
    Algebra::from_products(labels, products).expect("matrix units are in range")
}

/// Componentwise product algebra `A ⊕ B`.
pub fn direct_sum(a: &Algebra, b: &Algebra) -> Algebra {
    let (da, db) = (a.dim(), b.dim());
    let labels = a.labels.iter().chain(b.labels.iter()).cloned().collect();
    let embed = |v: &SparseVector, offset: usize| {
        SparseVector::from_entries(da + db, v.iter().map(|(i, x)| (i + offset, x.clone()))).unwrap()
    };
    let mut products = Vec::new();
    for (i, j, v) in a.nonzero_products() {
        products.push((i, j, embed(v, 0)));
    }
    for (i, j, v) in b.nonzero_products() {
        products.push((i + da, j + da, embed(v, da)));
    }
    Algebra::from_products(labels, products).unwrap()
}

/// The one-dimensional algebra `ℚ` with basis `u`, `u·u = u`.
pub fn rationals(label: &str) -> Algebra {
    Algebra::from_products(vec![label.to_string()], [(0, 0, SparseVector::unit(1, 0))]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    fn e(d: usize, i: usize) -> SparseVector {
        SparseVector::unit(d, i)
    }

    #[test]
    fn associativity_checks() {
        assert!(rationals("e").validate().is_ok());
        let bad = Algebra::from_products(vec!["e0".into(), "e1".into()], [(0, 0, e(2, 1)), (0, 1, e(2, 0))]).unwrap();
        assert_eq!(bad.validate().unwrap_err(), Error::AssociativityFailure { i: 0, j: 0, k: 0 });
        assert!(upper_triangular_2x2().validate().is_ok());
        assert!(full_matrices(2).validate().is_ok());
        assert!(direct_sum(&full_matrices(2), &rationals("u")).validate().is_ok());
        assert!(Algebra::zero_product(vec!["x".into(), "y".into()]).validate().is_ok());
    }

    #[test]
    fn ideal_checks() {
        let t2 = upper_triangular_2x2();
        assert!(Ideal::spanned_by_indices(t2.clone(), &[0, 1]).unwrap().validate().is_ok());
        // E12 · E22 = E12 leaves span{E22}.
        assert_eq!(
            Ideal::spanned_by_indices(t2.clone(), &[2]).unwrap().validate().unwrap_err(),
            Error::NotTwoSided { side: Side::Left, algebra_index: 1, ideal_index: 0, product: e(3, 1) }
        );
        assert!(Ideal::whole(t2.clone()).validate().is_ok());
        let dependent = Ideal::new(t2, vec![e(3, 0), e(3, 0)]).unwrap();
        assert!(matches!(dependent.validate(), Err(Error::DependentVectors { .. })));
    }

    #[test]
    fn split_basis_completion() {
        let t2 = upper_triangular_2x2();
        let s = SplitBasis::new(Ideal::spanned_by_indices(t2.clone(), &[0, 1]).unwrap(), None).unwrap();
        assert_eq!(s.ordered_basis(), &[e(3, 0), e(3, 1), e(3, 2)]);
        assert_eq!(s.ideal_count(), 2);

        let s = SplitBasis::new(Ideal::zero(t2.clone()), None).unwrap();
        assert_eq!(s.ideal_count(), 0);
        assert_eq!(s.ordered_basis().len(), 3);

        let s = SplitBasis::new(Ideal::whole(t2.clone()), None).unwrap();
        assert_eq!(s.ideal_count(), 3);
        assert_eq!(s.ordered_basis(), Ideal::whole(t2.clone()).basis());

        let ideal = Ideal::spanned_by_indices(t2, &[0, 1]).unwrap();
        let bad_hint = [e(3, 0).add(&e(3, 1))];
        assert!(matches!(SplitBasis::new(ideal.clone(), Some(&bad_hint)), Err(Error::DependentVectors { .. })));
        let hint = [e(3, 2).add(&e(3, 0))];
        let s = SplitBasis::new(ideal, Some(&hint)).unwrap();
        assert_eq!(s.complement(), &hint);
    }

    #[test]
    fn quotients() {
        let t2 = upper_triangular_2x2();
        let ext = Extension::from_parts(t2.clone(), vec![e(3, 0), e(3, 1)], None).unwrap();
        let q = quotient(&ext).unwrap();
        assert_eq!(q.algebra().dim(), 1);
        assert_eq!(q.algebra().product(0, 0), &e(1, 0));
        assert_eq!(q.algebra().label(0), "E22");

        let trivial = Extension::from_parts(t2.clone(), vec![], None).unwrap();
        assert_eq!(quotient(&trivial).unwrap().algebra(), &t2);

        let whole = Extension::whole(t2).unwrap();
        assert_eq!(quotient(&whole).unwrap().algebra().dim(), 0);
    }

    #[test]
    fn quotient_with_a_skew_complement() {
        // Complement E22 + E11 instead of E22: the quotient is still ℚ.
        let t2 = upper_triangular_2x2();
        let hint = [e(3, 2).add(&e(3, 0))];
        let ext = Extension::from_parts(t2, vec![e(3, 0), e(3, 1)], Some(&hint)).unwrap();
        let q = quotient(&ext).unwrap();
        assert_eq!(q.algebra().product(0, 0), &e(1, 0));
        assert_eq!(ext.ideal_count() + q.algebra().dim(), ext.dim());
    }

    #[test]
    fn opposite_algebra() {
        let t2 = upper_triangular_2x2();
        let op = t2.opposite();
        assert_eq!(op.opposite(), t2);
        assert_eq!(t2.product(0, 1), &e(3, 1));
        assert_eq!(op.product(1, 0), &e(3, 1));
        assert!(op.product(0, 1).is_zero());
        assert!(op.validate().is_ok());
        let q = rationals("u");
        assert_eq!(q.opposite(), q);
        assert!(q.is_commutative());
    }

    #[test]
    fn split_coordinates_round_trip() {
        let t2 = upper_triangular_2x2();
        let hint = [e(3, 2).add(&e(3, 0)).add(&e(3, 1).scaled(&scalar(3)))];
        let ext = Extension::from_parts(t2, vec![e(3, 0), e(3, 1)], Some(&hint)).unwrap();
        for i in 0..3 {
            let v = ext.basis_vector(i);
            assert_eq!(ext.to_split_coords(&ext.to_parent_coords(&v).unwrap()).unwrap(), v);
        }
        assert!(ext.algebra().validate().is_ok());
        // The ideal is closed in split coordinates.
        for i in 0..2 {
            for j in 0..3 {
                assert!(ext.in_ideal(ext.algebra().product(i, j)));
                assert!(ext.in_ideal(ext.algebra().product(j, i)));
            }
        }
    }
}
