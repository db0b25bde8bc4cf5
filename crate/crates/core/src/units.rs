//! Local left units: elements `e ∈ I` with `e·s = s` for a finite target set,
//! found by exact linear solving, and the descending unit schedule
//! `e_n, e_{n−1}, …, e_1` used by the inverse excision formula.

use std::collections::BTreeSet;

use crate::algebra::Extension;
use crate::chain::Tuple;
use crate::error::{Error, Result};
use crate::linalg::{self, SolveOutcome, SparseMatrix, SparseVector};

/// Solves `e·s = s` for all targets with `e` in the span of the ideal basis.
/// Free coefficients are set to zero, so the answer is deterministic.
///
/// Targets and the result are in split coordinates.
pub fn find_local_left_unit(ext: &Extension, targets: &[SparseVector]) -> Result<SparseVector> {
    let d = ext.dim();
    let k = ext.ideal_count();
    for s in targets {
        if s.dim() != d {
            return Err(linalg::LinalgError::DimensionMismatch { expected: d, found: s.dim() }.into());
        }
        if !ext.in_ideal(s) {
            return Err(Error::NotInIdeal(s.clone()));
        }
    }
    // Row (t, r): Σ_j c_j (b_j · s_t)_r = (s_t)_r.
    let mut triplets = Vec::new();
    let mut rhs = SparseVector::zeros(targets.len() * d);
    for (t, s) in targets.iter().enumerate() {
        for j in 0..k {
            for (r, x) in ext.algebra().mul_basis_left(j, s).iter() {
                triplets.push((t * d + r, j, x.clone()));
            }
        }
        for (r, x) in s.iter() {
            rhs.set(t * d + r, x.clone());
        }
    }
    let system = SparseMatrix::from_triplets(targets.len() * d, k, triplets)?;
    match linalg::solve(&system, &rhs)? {
        SolveOutcome::Solved(coeffs) => {
            let e = SparseVector::from_entries(d, coeffs.iter().map(|(j, x)| (j, x.clone())))?;
            for s in targets {
                assert_eq!(&ext.mul(&e, s), s, "solver returned a non-unit");
            }
            Ok(e)
        }
        SolveOutcome::Unsolvable(w) => {
            let row = w.combination.leading().map_or(0, |(r, _)| r);
            let target_index = row / d.max(1);
            Err(Error::NoLocalUnit {
                level: None,
                target_index,
                target: targets[target_index].clone(),
                targets: targets.to_vec(),
                witness: w.combination,
            })
        }
    }
}

/// Same as [`find_local_left_unit`] with everything in the parent algebra's
/// own coordinates.
pub fn find_local_left_unit_in_parent(ext: &Extension, targets: &[SparseVector]) -> Result<SparseVector> {
    let split = targets.iter().map(|s| ext.to_split_coords(s)).collect::<Result<Vec<_>>>()?;
    let e = find_local_left_unit(ext, &split)?;
    ext.to_parent_coords(&e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledUnit {
    /// `i` in `e_i`, counting from 1.
    pub level: usize,
    pub element: SparseVector,
    /// The set `e_i` was solved against.
    pub targets: Vec<SparseVector>,
}

/// Units `(e_1, …, e_n)` with the target sets they were solved against.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitSchedule {
    units: Vec<ScheduledUnit>,
}

impl UnitSchedule {
    pub fn new(mut units: Vec<ScheduledUnit>) -> Result<Self> {
        units.sort_by_key(|u| u.level);
        if units.iter().enumerate().any(|(i, u)| u.level != i + 1) {
            return Err(Error::ScheduleMismatch("unit levels must be exactly 1..=n".into()));
        }
        Ok(Self { units })
    }

    pub fn degree(&self) -> usize {
        self.units.len()
    }

    /// `e_i`, for `1 ≤ i ≤ n`.
    pub fn unit(&self, i: usize) -> &SparseVector {
        &self.units[i - 1].element
    }

    pub fn units(&self) -> &[ScheduledUnit] {
        &self.units
    }

    /// Every unit fixes every target it records.
    pub fn verify_targets(&self, ext: &Extension) -> Result<()> {
        for u in &self.units {
            for (t, s) in u.targets.iter().enumerate() {
                if &ext.mul(&u.element, s) != s {
                    return Err(Error::ScheduleMismatch(format!("e{} does not fix its recorded target {t}", u.level)));
                }
            }
        }
        Ok(())
    }

    /// Checks the conditions the inverse formula needs for these tensors:
    /// `e_n f₀ = f₀`, and `e_{i−1} e_i = e_i`, `e_{i−1}(f_i e_i) = f_i e_i`.
    pub fn check_against(&self, ext: &Extension, tensors: &[Tuple]) -> Result<()> {
        let n = self.degree();
        for t in tensors {
            if t.len() != n + 1 {
                return Err(Error::ScheduleMismatch(format!("tensor {t:?} has degree {}, schedule has {n}", t.len() - 1)));
            }
        }
        if n == 0 {
            return Ok(());
        }
        for t in tensors {
            let f0 = ext.basis_vector(t[0]);
            if !ext.in_ideal(&f0) {
                return Err(Error::NotInitialInIdeal { tuple: t.clone() });
            }
            if ext.mul(self.unit(n), &f0) != f0 {
                return Err(Error::ScheduleMismatch(format!("e{n} does not fix the initial slot of {t:?}")));
            }
        }
        for i in (2..=n).rev() {
            let targets = level_targets(ext, tensors, i, self.unit(i));
            for s in &targets {
                if &ext.mul(self.unit(i - 1), s) != s {
                    return Err(Error::ScheduleMismatch(format!("e{} does not fix a product f{i}·e{i} or e{i}", i - 1)));
                }
            }
        }
        Ok(())
    }
}

/// `{e_i} ∪ {f_i e_i}` over the distinct `f_i`-slots of `tensors`, zero
/// products and duplicates dropped.
fn level_targets(ext: &Extension, tensors: &[Tuple], i: usize, e_i: &SparseVector) -> Vec<SparseVector> {
    let slots: BTreeSet<usize> = tensors.iter().map(|t| t[i]).collect();
    let mut targets = vec![e_i.clone()];
    for f in slots {
        let p = ext.algebra().mul_basis_left(f, e_i);
        if !p.is_zero() && !targets.contains(&p) {
            targets.push(p);
        }
    }
    targets
}

/// Builds `e_n` as a local left unit for all initial slots, then for
/// `i = n, …, 2` builds `e_{i−1}` as a local left unit for
/// `{e_i} ∪ {f_i e_i}`, with one uniform choice across all tensors.
pub fn build_unit_schedule(ext: &Extension, tensors: &[Tuple], n: usize) -> Result<UnitSchedule> {
    for t in tensors {
        if t.len() != n + 1 {
            return Err(Error::DegreeMismatch { expected: n, found: t.len() - 1 });
        }
        if !ext.is_ideal_index(t[0]) {
            return Err(Error::NotInitialInIdeal { tuple: t.clone() });
        }
    }
    if n == 0 {
        return Ok(UnitSchedule::default());
    }
    let initial: BTreeSet<usize> = tensors.iter().map(|t| t[0]).collect();
    let targets: Vec<SparseVector> = initial.into_iter().map(|i| ext.basis_vector(i)).collect();
    let at_level = |level: usize, targets: Vec<SparseVector>| -> Result<ScheduledUnit> {
        match find_local_left_unit(ext, &targets) {
            Ok(element) => Ok(ScheduledUnit { level, element, targets }),
            Err(Error::NoLocalUnit { target_index, target, targets, witness, .. }) => {
                Err(Error::NoLocalUnit { level: Some(level), target_index, target, targets, witness })
            }
            Err(e) => Err(e),
        }
    };
    let mut units = vec![at_level(n, targets)?];
    for i in (2..=n).rev() {
        let e_i = &units.last().unwrap().element;
        let targets = level_targets(ext, tensors, i, e_i);
        units.push(at_level(i - 1, targets)?);
    }
    UnitSchedule::new(units)
}
