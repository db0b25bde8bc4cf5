//! Built-in extensions with local left units.

use crate::algebra::{direct_sum, full_matrices, rationals, upper_triangular_2x2, Extension};
use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::units::find_local_left_unit;

pub const DEMO_NAMES: [&str; 3] = ["t2-corner", "matrix2", "direct-sum"];

#[derive(Clone, Debug)]
pub struct DemoExtension {
    pub name: &'static str,
    pub extension: Extension,
    pub description: &'static str,
}

fn standard_ideal(algebra: crate::algebra::Algebra, indices: &[usize]) -> Result<Extension> {
    let d = algebra.dim();
    Extension::from_parts(algebra, indices.iter().map(|&i| SparseVector::unit(d, i)).collect(), None)
}

fn build(name: &str) -> Result<DemoExtension> {
    let (name, extension, description) = match name {
        "t2-corner" => (
            "t2-corner",
            standard_ideal(upper_triangular_2x2(), &[0, 1])?,
            "Upper-triangular 2x2 matrices with I = span{E11, E12}. E11 is a left unit of I \
             (E11*E11 = E11, E11*E12 = E12) but I has no right unit since E12*E11 = 0.",
        ),
        "matrix2" => (
            "matrix2",
            Extension::whole(full_matrices(2))?,
            "Full 2x2 matrices with I = A. The identity is a unit, and the relative theory is the absolute one.",
        ),
        "direct-sum" => (
            "direct-sum",
            standard_ideal(direct_sum(&full_matrices(2), &rationals("u")), &[0, 1, 2, 3])?,
            "M2 + Q with I = M2. Products are componentwise, so the identity of M2 is a left unit of I.",
        ),
        other => return Err(Error::invalid(format!("unknown demo {other:?} (available: {})", DEMO_NAMES.join(", ")))),
    };
    let demo = DemoExtension { name, extension, description };
    demo.check_hypotheses()?;
    Ok(demo)
}

impl DemoExtension {
    /// The algebra is associative, the ideal two-sided, and the full ideal
    /// basis has a common left unit.
    pub fn check_hypotheses(&self) -> Result<()> {
        let ext = &self.extension;
        ext.parent().validate()?;
        ext.split().ideal().validate()?;
        let basis: Vec<SparseVector> = (0..ext.ideal_count()).map(|i| ext.basis_vector(i)).collect();
        find_local_left_unit(ext, &basis).map(|_| ())
    }
}

pub fn demo(name: &str) -> Result<DemoExtension> {
    build(name)
}

pub fn demo_corpus() -> Vec<DemoExtension> {
    DEMO_NAMES.iter().map(|n| build(n).expect("built-in demos satisfy their hypotheses")).collect()
}

/// `I = span{E12}` in the upper-triangular 2x2 matrices: a nilpotent ideal
/// with no local units.
pub fn t2_radical() -> Extension {
    standard_ideal(upper_triangular_2x2(), &[1]).expect("E12 spans a two-sided ideal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let corpus = demo_corpus();
        assert_eq!(corpus.iter().map(|d| d.name).collect::<Vec<_>>(), DEMO_NAMES);
        assert_eq!(corpus[0].extension.ideal_count(), 2);
        assert_eq!(corpus[1].extension.ideal_count(), 4);
        assert_eq!(corpus[2].extension.ideal_count(), 4);
        assert_eq!(corpus[2].extension.dim(), 5);
    }

    #[test]
    fn corner_unit_is_e11() {
        let ext = demo("t2-corner").unwrap().extension;
        let e = find_local_left_unit(&ext, &[ext.basis_vector(0), ext.basis_vector(1)]).unwrap();
        assert_eq!(e, SparseVector::unit(3, 0));
    }

    #[test]
    fn unknown_names_and_the_radical() {
        assert!(demo("nope").is_err());
        let ext = t2_radical();
        let demo = DemoExtension { name: "t2-radical", extension: ext, description: "" };
        assert!(matches!(demo.check_hypotheses(), Err(Error::NoLocalUnit { .. })));
    }
}
