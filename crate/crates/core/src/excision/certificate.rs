//! Certificates for claimed homology equalities, and their re-verification.
//!
//! Verification deliberately avoids the producers' code: boundaries are
//! re-expanded slot by slot through [`Chain::tensor`] instead of the shared
//! differential, so a bug in one path does not silently confirm itself.

use num_traits::One;

use crate::algebra::Extension;
use crate::chain::{self, canonicalize_cyclic, Chain};
use crate::error::{Error, Result};
use crate::homology::{Complex, Space, Variant};
use crate::linalg::{Scalar, SparseVector};
use crate::units::UnitSchedule;

/// One descent step `φ ↦ φ′` with its homotopy:
/// `φ − φ′ = b(G) + e⊗b(φ)`, where `G = e⊗φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentCertificate {
    pub input: Chain,
    pub output: Chain,
    pub homotopy: Chain,
    pub unit: SparseVector,
}

/// Claims `d(witness) = left − right` in the complex named by `context`
/// (modulo `1 − t` for the cyclic complex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCertificate {
    pub context: Variant,
    pub left: Chain,
    pub right: Chain,
    pub witness: Chain,
}

/// `ψ = ρ⁻¹(φ)` together with the units used and a certificate for
/// `ρ(ψ) ≡ φ` in `CC_n(A, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseResult {
    pub input: Chain,
    pub schedule: UnitSchedule,
    pub output: Chain,
    pub certificate: BoundaryCertificate,
    /// `b(ψ)` in `C_{n−1}(I)`, kept as a diagnostic: `ψ` is only claimed to
    /// be a cycle modulo `1 − t`.
    pub strict_boundary: Option<Chain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Boundary(BoundaryCertificate),
    Descent(DescentCertificate),
    Inverse(InverseResult),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Boundary(_) => "boundary",
            Certificate::Descent(_) => "descent",
            Certificate::Inverse(_) => "inverse",
        }
    }
}

/// `b` or `b′`, expanded independently of [`chain::boundary_b`].
fn reexpand(ext: &Extension, c: &Chain, wrap: bool) -> Result<Chain> {
    let n = c.degree();
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let v = |i: usize| ext.basis_vector(i);
    let mut out = Chain::zero(n - 1);
    for (t, x) in c.terms() {
        for i in 0..n {
            let mut slots: Vec<SparseVector> = t[..i].iter().map(|&k| v(k)).collect();
            slots.push(ext.mul(&v(t[i]), &v(t[i + 1])));
            slots.extend(t[i + 2..].iter().map(|&k| v(k)));
            let sign = if i % 2 == 0 { x.clone() } else { -x.clone() };
            out.axpy(&Scalar::one(), &Chain::tensor(&slots, &sign));
        }
        if wrap {
            let mut slots = vec![ext.mul(&v(t[n]), &v(t[0]))];
            slots.extend(t[1..n].iter().map(|&k| v(k)));
            let sign = if n.is_multiple_of(2) { x.clone() } else { -x.clone() };
            out.axpy(&Scalar::one(), &Chain::tensor(&slots, &sign));
        }
    }
    Ok(out)
}

fn in_space(ext: &Extension, space: Space, c: &Chain) -> bool {
    match space {
        Space::Algebra => true,
        Space::Ideal => chain::in_ideal_complex(ext, c),
        Space::Relative => chain::relative_membership(ext, c),
    }
}

fn mismatch(ext: &Extension, residual: &Chain) -> Error {
    Error::Mismatch { residual: residual.render(ext.algebra().labels()) }
}

fn ensure_zero(ext: &Extension, residual: Chain) -> Result<()> {
    if residual.is_zero() {
        Ok(())
    } else {
        Err(mismatch(ext, &residual))
    }
}

/// `d(η) − (left − right)`, reduced to canonical form for the cyclic complex.
pub fn boundary_residual(ext: &Extension, cert: &BoundaryCertificate) -> Result<Chain> {
    let n = cert.left.degree();
    if cert.right.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: cert.right.degree() });
    }
    if cert.witness.degree() != n + 1 {
        return Err(Error::DegreeMismatch { expected: n + 1, found: cert.witness.degree() });
    }
    for (what, c) in [("left", &cert.left), ("right", &cert.right), ("witness", &cert.witness)] {
        if !in_space(ext, cert.context.space, c) {
            return Err(Error::invalid(format!("certificate {what} chain leaves the {} complex", cert.context.space)));
        }
    }
    let d = reexpand(ext, &cert.witness, cert.context.complex != Complex::Bar)?;
    let residual = d.minus(&cert.left.minus(&cert.right));
    Ok(match cert.context.complex {
        Complex::Cyclic => canonicalize_cyclic(&residual).into_chain(),
        Complex::Hochschild | Complex::Bar => residual,
    })
}

/// `φ − φ′ − b(G) − e⊗b(φ)`.
pub fn descent_residual(ext: &Extension, cert: &DescentCertificate) -> Result<Chain> {
    let n = cert.input.degree();
    if !ext.in_ideal(&cert.unit) {
        return Err(Error::NotInIdeal(cert.unit.clone()));
    }
    let bg = reexpand(ext, &cert.homotopy, true)?;
    let correction = chain::prepend(&cert.unit, &reexpand(ext, &cert.input, true)?);
    if cert.output.degree() != n || bg.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: cert.output.degree() });
    }
    Ok(cert.input.minus(&cert.output).minus(&bg).minus(&correction))
}

pub fn verify_boundary(ext: &Extension, cert: &BoundaryCertificate) -> Result<()> {
    ensure_zero(ext, boundary_residual(ext, cert)?)
}

/// Checks the homotopy identity and that the output dropped one filtration
/// level.
pub fn verify_descent(ext: &Extension, cert: &DescentCertificate) -> Result<()> {
    ensure_zero(ext, descent_residual(ext, cert)?)?;
    let before = chain::filtration_level(ext, &cert.input);
    let after = chain::filtration_level(ext, &cert.output);
    if before > 0 && after >= before {
        return Err(Error::invalid(format!("descent did not lower the filtration level ({before} -> {after})")));
    }
    Ok(())
}

/// Re-derives `ψ` by chained descent steps, then checks `ψ ∈ C_n(I)`, that
/// `ψ` is a cycle modulo `1 − t`, the unit schedule, and the boundary
/// certificate for `ρ(ψ) ≡ φ`.
pub fn verify_inverse(ext: &Extension, result: &InverseResult) -> Result<()> {
    let n = result.input.degree();
    result.schedule.verify_targets(ext)?;
    let tuples: Vec<_> = result.input.terms().map(|(t, _)| t.clone()).collect();
    result.schedule.check_against(ext, &tuples)?;
    if !chain::in_ideal_complex(ext, &result.output) {
        return Err(Error::invalid("inverse output has a slot outside the ideal"));
    }
    let mut descended = result.input.clone();
    for i in (1..=n).rev() {
        descended = super::descent_output(ext, &descended, result.schedule.unit(i));
    }
    ensure_zero(ext, descended.minus(&result.output))?;
    if n > 0 {
        ensure_zero(ext, canonicalize_cyclic(&reexpand(ext, &result.output, true)?).into_chain())?;
    }
    let cert = &result.certificate;
    if cert.context != Variant::new(Complex::Cyclic, Space::Relative) {
        return Err(Error::invalid("inverse certificate must live in the relative cyclic complex"));
    }
    if cert.left != result.output || cert.right != result.input {
        return Err(Error::invalid("inverse certificate does not claim rho(output) = input"));
    }
    verify_boundary(ext, cert)
}

pub fn verify_certificate(ext: &Extension, cert: &Certificate) -> Result<()> {
    match cert {
        Certificate::Boundary(c) => verify_boundary(ext, c),
        Certificate::Descent(c) => verify_descent(ext, c),
        Certificate::Inverse(c) => verify_inverse(ext, c),
    }
}
