//! The excision map `ρ: CC_n(I) → CC_n(A, I)` and its explicit inverse for
//! ideals with local left units.
//!
//! The inverse is built from a descent step that trades the last slot of a
//! tensor for a local unit in front, lowering the filtration level by one.
//! After `n` steps every slot lies in the ideal. Each equality of classes is
//! backed by a certificate; see [`certificate`].

pub mod certificate;
pub mod formula;

use std::collections::BTreeSet;

use num_traits::One;

use crate::algebra::Extension;
use crate::chain::{self, canonicalize_cyclic, Chain, CyclicChain, Tuple};
use crate::error::{Error, Result};
use crate::homology::{self, Complex, Space, Variant};
use crate::linalg::{Scalar, SparseVector};
use crate::units::{build_unit_schedule, UnitSchedule};

pub use certificate::{verify_certificate, BoundaryCertificate, Certificate, DescentCertificate, InverseResult};

/// Includes a chain of `C_n(I)` into `C_n(A, I)`. In split coordinates the
/// ideal basis is an initial segment of the basis of `A`, so tuples map to
/// themselves.
pub fn rho(ext: &Extension, c: &CyclicChain) -> Result<CyclicChain> {
    for (t, _) in c.as_chain().terms() {
        if let Some(&i) = t.iter().find(|&&i| !ext.is_ideal_index(i)) {
            return Err(Error::NotInIdeal(ext.basis_vector(i)));
        }
    }
    Ok(c.clone())
}

/// Rotates every term by the power of `t` that brings its first ideal slot
/// to position 0. The result lies in `F_n C_n(A, I)` and has the same class
/// in the coinvariants.
pub fn rotate_to_ideal_initial(ext: &Extension, c: &Chain) -> Result<Chain> {
    let n = c.degree();
    let len = n + 1;
    let mut out = Chain::zero(n);
    for (t, x) in c.terms() {
        let j = t.iter().position(|&i| ext.is_ideal_index(i)).ok_or_else(|| Error::NotRelative { tuple: t.clone() })?;
        // t^k = (−1)^{nk} rot^k with rot^k moving the last k slots to the front.
        let k = (len - j) % len;
        let rotated: Tuple = t[j..].iter().chain(&t[..j]).copied().collect();
        if (n * k) % 2 == 1 {
            out.add_term(rotated, &-x.clone());
        } else {
            out.add_term(rotated, x);
        }
    }
    Ok(out)
}

/// `φ′ = (−1)^{n+1} Σ λ (e ⊗ fₙf₀ ⊗ f₁ ⊗ … ⊗ f_{n−1} − fₙe ⊗ f₀ ⊗ … ⊗ f_{n−1})`.
pub(crate) fn descent_output(ext: &Extension, phi: &Chain, e: &SparseVector) -> Chain {
    let n = phi.degree();
    let outer = if n.is_multiple_of(2) { -Scalar::one() } else { Scalar::one() };
    let mut out = Chain::zero(n);
    for (t, x) in phi.terms() {
        let f = |i: usize| ext.basis_vector(t[i]);
        let coeff = &outer * x;
        let mut plus = vec![e.clone(), ext.mul(&f(n), &f(0))];
        plus.extend((1..n).map(f));
        out.axpy(&Scalar::one(), &Chain::tensor(&plus, &coeff));
        let mut minus = vec![ext.mul(&f(n), e)];
        minus.extend((0..n).map(f));
        out.axpy(&Scalar::one(), &Chain::tensor(&minus, &-coeff));
    }
    out
}

/// One descent step. `e` must act as the identity on the initial slots of
/// `φ`, in the sense `(L_e ⊗ id)φ = φ`, which is exactly what the homotopy
/// identity needs and holds along the whole iterated chain.
///
/// The identity `φ − φ′ = b(e⊗φ) + e⊗bφ` holds for any such `φ`; for a
/// Hochschild cycle the last term vanishes.
pub fn descent_step(ext: &Extension, phi: &Chain, e: &SparseVector) -> Result<DescentCertificate> {
    if phi.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if !ext.in_ideal(e) {
        return Err(Error::NotInIdeal(e.clone()));
    }
    let fixed = chain::left_multiply_initial(ext, e, phi);
    let diff = fixed.minus(phi);
    if let Some((t, _)) = diff.terms().next() {
        return Err(Error::UnitPrecondition { slot: t[0] });
    }
    Ok(DescentCertificate {
        input: phi.clone(),
        output: descent_output(ext, phi, e),
        homotopy: chain::prepend(e, phi),
        unit: e.clone(),
    })
}

/// Applies [`descent_step`] with `e_n, e_{n−1}, …, e_1`.
pub fn iterated_descent(ext: &Extension, phi: &Chain, schedule: &UnitSchedule) -> Result<Vec<DescentCertificate>> {
    let n = phi.degree();
    if schedule.degree() != n {
        return Err(Error::ScheduleMismatch(format!("schedule has {} units for a degree-{n} chain", schedule.degree())));
    }
    let mut current = phi.clone();
    let mut certs = Vec::with_capacity(n);
    for i in (1..=n).rev() {
        let cert = descent_step(ext, &current, schedule.unit(i))?;
        current = cert.output.clone();
        certs.push(cert);
    }
    Ok(certs)
}

/// Concatenates chained descent certificates for a Hochschild cycle into
/// one certificate `b(−ΣG) = φ_last − φ_first` in the relative Hochschild
/// complex.
pub fn compose_descents(ext: &Extension, certs: &[DescentCertificate]) -> Result<BoundaryCertificate> {
    let (first, last) = match (certs.first(), certs.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::invalid("no descent certificates to compose")),
    };
    for pair in certs.windows(2) {
        if pair[0].output != pair[1].input {
            return Err(Error::invalid("descent certificates do not chain"));
        }
    }
    if !chain::boundary_b(ext, &first.input)?.is_zero() {
        return Err(Error::NotACycle("Hochschild"));
    }
    let mut witness = Chain::zero(first.input.degree() + 1);
    for c in certs {
        witness.axpy(&-Scalar::one(), &c.homotopy);
    }
    Ok(BoundaryCertificate {
        context: Variant::new(Complex::Hochschild, Space::Relative),
        left: last.output.clone(),
        right: first.input.clone(),
        witness,
    })
}

/// Solves for `η` with `d(η) = left − right` in the given complex.
pub fn certify_homologous(ext: &Extension, context: Variant, left: &Chain, right: &Chain) -> Result<BoundaryCertificate> {
    let target = left.minus(right);
    let witness = homology::bounding_chain(ext, context, &target)?;
    Ok(BoundaryCertificate { context, left: left.clone(), right: right.clone(), witness })
}

/// The closed formula applied term by term: each pure tensor expands into
/// the `2ⁿ` terms of [`formula::symbolic_inverse`] evaluated with the
/// schedule's units.
pub fn apply_inverse_formula(ext: &Extension, phi: &Chain, schedule: &UnitSchedule) -> Result<Chain> {
    let n = phi.degree();
    if schedule.degree() != n {
        return Err(Error::ScheduleMismatch(format!("schedule has {} units for a degree-{n} chain", schedule.degree())));
    }
    let terms = formula::symbolic_inverse(n);
    let mut out = Chain::zero(n);
    for (t, x) in phi.terms() {
        if !ext.is_ideal_index(t[0]) {
            return Err(Error::NotInitialInIdeal { tuple: t.clone() });
        }
        for term in &terms {
            out.axpy(&Scalar::one(), &formula::evaluate(ext, term, t, schedule, x));
        }
    }
    Ok(out)
}

fn ensure_cyclic_cycle(ext: &Extension, phi: &Chain) -> Result<()> {
    if phi.degree() > 0 && !canonicalize_cyclic(&chain::boundary_b(ext, phi)?).is_zero() {
        return Err(Error::NotACycle("relative cyclic"));
    }
    Ok(())
}

/// `ψ = ρ⁻¹(φ)` for a relative cyclic cycle `φ ∈ F_n C_n(A, I)`, with a
/// certificate for `ρ(ψ) ≡ φ` found by exact solving. An unsolvable system
/// is reported as [`Error::CertificateUnsolvable`].
pub fn inverse_excision(ext: &Extension, phi: &Chain, schedule: &UnitSchedule) -> Result<InverseResult> {
    let tuples: Vec<Tuple> = phi.terms().map(|(t, _)| t.clone()).collect();
    if let Some(t) = tuples.iter().find(|t| !ext.is_ideal_index(t[0])) {
        return Err(Error::NotInitialInIdeal { tuple: t.clone() });
    }
    ensure_cyclic_cycle(ext, phi)?;
    schedule.check_against(ext, &tuples)?;
    let output = apply_inverse_formula(ext, phi, schedule)?;
    debug_assert!(chain::in_ideal_complex(ext, &output));
    let certificate = certify_homologous(ext, Variant::new(Complex::Cyclic, Space::Relative), &output, phi)?;
    let strict_boundary = if output.degree() > 0 { Some(chain::boundary_b(ext, &output)?) } else { None };
    Ok(InverseResult { input: phi.clone(), schedule: schedule.clone(), output, certificate, strict_boundary })
}

/// Hochschild variant: `φ` must already lie in `F_n C_n(A, I)` and satisfy
/// `bφ = 0`; no rotation is applied. The certificate is the composition of
/// the descent homotopies.
pub fn inverse_excision_hochschild(ext: &Extension, phi: &Chain) -> Result<(Chain, UnitSchedule, BoundaryCertificate)> {
    let n = phi.degree();
    let tuples: Vec<Tuple> = phi.terms().map(|(t, _)| t.clone()).collect();
    if n > 0 && !chain::boundary_b(ext, phi)?.is_zero() {
        return Err(Error::NotACycle("Hochschild"));
    }
    let schedule = build_unit_schedule(ext, &tuples, n)?;
    let psi = apply_inverse_formula(ext, phi, &schedule)?;
    let cert = if n == 0 {
        BoundaryCertificate {
            context: Variant::new(Complex::Hochschild, Space::Relative),
            left: psi.clone(),
            right: phi.clone(),
            witness: Chain::zero(1),
        }
    } else {
        compose_descents(ext, &iterated_descent(ext, phi, &schedule)?)?
    };
    Ok((psi, schedule, cert))
}

/// Full pipeline for classes of `HC_n(A, I)`: rotate each to `F_n`, build
/// one schedule over all resulting pure tensors, then invert each class.
pub fn inverse_excision_class(ext: &Extension, classes: &[CyclicChain]) -> Result<Vec<InverseResult>> {
    let Some(n) = classes.first().map(|c| c.degree()) else {
        return Ok(Vec::new());
    };
    let mut lifts = Vec::with_capacity(classes.len());
    for c in classes {
        if c.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, found: c.degree() });
        }
        lifts.push(rotate_to_ideal_initial(ext, c.as_chain())?);
    }
    let tuples: BTreeSet<Tuple> = lifts.iter().flat_map(|c| c.terms().map(|(t, _)| t.clone())).collect();
    let tuples: Vec<Tuple> = tuples.into_iter().collect();
    let schedule = build_unit_schedule(ext, &tuples, n)?;
    lifts.iter().map(|phi| inverse_excision(ext, phi, &schedule)).collect()
}

/// `f₀⊗f₁⊗…⊗fₙ ↦ (−1)^{n(n+1)/2} f₀⊗fₙ⊗…⊗f₁`, a chain isomorphism
/// `C_•(A) → C_•(A^op)` compatible with `1 − t`. Used to reduce local right
/// units to local left units of the opposite algebra.
pub fn reverse_chain(c: &Chain) -> Chain {
    let n = c.degree();
    let negative = (n * (n + 1) / 2) % 2 == 1;
    let mut out = Chain::zero(n);
    for (t, x) in c.terms() {
        let mut u = vec![t[0]];
        u.extend(t[1..].iter().rev());
        out.add_term(u, &if negative { -x.clone() } else { x.clone() });
    }
    out
}

/// [`inverse_excision_class`] for an ideal with local right units: runs the
/// pipeline in the opposite extension and maps results back. The returned
/// certificates live in `ext` itself.
pub fn inverse_excision_class_right(ext: &Extension, classes: &[CyclicChain]) -> Result<Vec<(Chain, BoundaryCertificate)>> {
    let op = ext.opposite()?;
    let reversed: Vec<CyclicChain> = classes.iter().map(|c| canonicalize_cyclic(&reverse_chain(c.as_chain()))).collect();
    let results = inverse_excision_class(&op, &reversed)?;
    classes
        .iter()
        .zip(results)
        .map(|(c, r)| {
            let psi = reverse_chain(&r.output);
            let cert = certify_homologous(ext, Variant::new(Complex::Cyclic, Space::Relative), &psi, c.as_chain())?;
            Ok((psi, cert))
        })
        .collect()
}
