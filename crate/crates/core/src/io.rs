//! JSON documents for algebras, chains, unit schedules, certificates and
//! reports. Every coefficient is an exact rational string (`"-3/2"`);
//! numbers in coefficient positions are rejected.
//!
//! Chains and vectors are written in the parent algebra's own coordinates.
//! Internally they are re-expressed over the split basis of the extension.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Extension, Ideal, SplitBasis};
use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::excision::{BoundaryCertificate, Certificate, DescentCertificate, InverseResult};
use crate::homology::{Complex, HomologyReport, Space, Variant};
use crate::linalg::{self, SparseVector};
use crate::units::{ScheduledUnit, UnitSchedule};

pub type Coords = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub field: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub products: Vec<ProductDoc>,
    pub ideal: IdealDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<Coords>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: usize,
    pub right: usize,
    pub result: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub index: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDoc {
    pub basis_vectors: Vec<Coords>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    pub slots: Vec<Coords>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub degree: usize,
    pub units: Vec<UnitDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitDoc {
    pub level: usize,
    pub element: Coords,
    pub targets: Vec<Coords>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantDoc {
    pub complex: String,
    pub space: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDoc {
    pub context: VariantDoc,
    pub left: ChainDoc,
    pub right: ChainDoc,
    pub witness: ChainDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentDoc {
    pub input: ChainDoc,
    pub output: ChainDoc,
    pub homotopy: ChainDoc,
    pub unit: Coords,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseDoc {
    pub input: ChainDoc,
    pub output: ChainDoc,
    pub schedule: ScheduleDoc,
    pub certificate: BoundaryDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_boundary: Option<ChainDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateBody {
    Boundary(BoundaryDoc),
    Descent(DescentDoc),
    Inverse(InverseDoc),
}

/// A certificate bundled with the algebra it refers to, so it can be
/// verified without any other input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub algebra: AlgebraDoc,
    pub certificate: CertificateBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyDoc {
    pub complex: String,
    pub space: String,
    pub degree: usize,
    pub dimension: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub representatives: Vec<ChainDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsDoc {
    pub targets: Vec<Coords>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitFileDoc {
    pub unit: Coords,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedChain {
    pub name: String,
    pub chain: ChainDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub kind: String,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

/// Machine-readable summary of one CLI invocation. `success` is true only
/// when no step failed and every listed certificate verified.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<HomologyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<NamedChain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub success: bool,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, ..Self::default() }
    }

    /// Sets `success` from the recorded errors and verdicts.
    pub fn finish(&mut self, elapsed: std::time::Duration) {
        self.success = self.errors.is_empty() && self.certificates.iter().all(|v| v.verified);
        self.elapsed_ms = elapsed.as_millis() as u64;
    }
}

/// Reads a JSON document, reporting syntax and shape errors with their line
/// and column.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn parse_vector(coords: &[String], dim: usize, path: &str) -> Result<SparseVector> {
    if coords.len() != dim {
        return Err(Error::parse(path, format!("expected {dim} coordinates, found {}", coords.len())));
    }
    let mut v = SparseVector::zeros(dim);
    for (i, s) in coords.iter().enumerate() {
        let x = linalg::parse_scalar(s).map_err(|e| Error::parse(format!("{path}[{i}]"), e))?;
        v.set(i, x);
    }
    Ok(v)
}

pub fn format_vector(v: &SparseVector) -> Coords {
    v.to_dense().iter().map(linalg::format_scalar).collect()
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<Extension> {
    if doc.field != "rational" {
        return Err(Error::parse("field", format!("unsupported field {:?}; only \"rational\" is available", doc.field)));
    }
    let d = doc.dimension;
    if doc.basis.len() != d {
        return Err(Error::parse("basis", format!("{} labels for dimension {d}", doc.basis.len())));
    }
    let mut products = Vec::with_capacity(doc.products.len());
    let mut seen = std::collections::BTreeSet::new();
    for (k, p) in doc.products.iter().enumerate() {
        let path = format!("products[{k}]");
        for (what, i) in [("left", p.left), ("right", p.right)] {
            if i >= d {
                return Err(Error::parse(format!("{path}.{what}"), format!("index {i} out of range for dimension {d}")));
            }
        }
        if !seen.insert((p.left, p.right)) {
            return Err(Error::parse(&path, format!("duplicate product e{} * e{}", p.left, p.right)));
        }
        let mut v = SparseVector::zeros(d);
        for (r, entry) in p.result.iter().enumerate() {
            let epath = format!("{path}.result[{r}]");
            if entry.index >= d {
                return Err(Error::parse(format!("{epath}.index"), format!("index {} out of range for dimension {d}", entry.index)));
            }
            let x = linalg::parse_scalar(&entry.coeff).map_err(|e| Error::parse(format!("{epath}.coeff"), e))?;
            v.add_at(entry.index, &x);
        }
        products.push((p.left, p.right, v));
    }
    let algebra = Algebra::from_products(doc.basis.clone(), products)?;
    algebra.validate()?;
    let ideal_basis = doc
        .ideal
        .basis_vectors
        .iter()
        .enumerate()
        .map(|(i, c)| parse_vector(c, d, &format!("ideal.basis_vectors[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let complement = doc
        .complement
        .as_ref()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| parse_vector(c, d, &format!("complement[{i}]"))).collect::<Result<Vec<_>>>())
        .transpose()?;
    let ideal = Ideal::new(algebra, ideal_basis)?;
    Extension::new(SplitBasis::new(ideal, complement.as_deref())?)
}

/// Serializes the parent algebra, the ideal basis and the complement.
pub fn algebra_to_doc(ext: &Extension) -> AlgebraDoc {
    let parent = ext.parent();
    AlgebraDoc {
        field: "rational".into(),
        dimension: parent.dim(),
        basis: parent.labels().to_vec(),
        products: parent
            .nonzero_products()
            .map(|(i, j, v)| ProductDoc {
                left: i,
                right: j,
                result: v.iter().map(|(index, x)| EntryDoc { index, coeff: linalg::format_scalar(x) }).collect(),
            })
            .collect(),
        ideal: IdealDoc { basis_vectors: ext.split().ideal().basis().iter().map(format_vector).collect() },
        complement: Some(ext.split().complement().iter().map(format_vector).collect()),
        description: None,
    }
}

pub fn parse_algebra(text: &str) -> Result<Extension> {
    algebra_from_doc(&from_json(text)?)
}

/// A vector given in parent coordinates, as split coordinates.
pub fn split_vector(ext: &Extension, coords: &[String], path: &str) -> Result<SparseVector> {
    ext.to_split_coords(&parse_vector(coords, ext.dim(), path)?)
}

pub fn parent_vector(ext: &Extension, split: &SparseVector) -> Coords {
    format_vector(&ext.to_parent_coords(split).expect("dimension matches"))
}

pub fn chain_from_doc(ext: &Extension, doc: &ChainDoc, path: &str) -> Result<Chain> {
    let mut c = Chain::zero(doc.degree);
    for (k, term) in doc.terms.iter().enumerate() {
        let tpath = format!("{path}terms[{k}]");
        if term.slots.len() != doc.degree + 1 {
            return Err(Error::parse(format!("{tpath}.slots"), format!("degree {} needs {} slots, found {}", doc.degree, doc.degree + 1, term.slots.len())));
        }
        let coeff = linalg::parse_scalar(&term.coeff).map_err(|e| Error::parse(format!("{tpath}.coeff"), e))?;
        let slots = term
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| split_vector(ext, s, &format!("{tpath}.slots[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        c.axpy(&num_traits::One::one(), &Chain::tensor(&slots, &coeff));
    }
    Ok(c)
}

pub fn chain_to_doc(ext: &Extension, c: &Chain) -> ChainDoc {
    ChainDoc {
        degree: c.degree(),
        terms: c
            .terms()
            .map(|(t, x)| TermDoc {
                coeff: linalg::format_scalar(x),
                slots: t.iter().map(|&i| parent_vector(ext, &ext.basis_vector(i))).collect(),
            })
            .collect(),
    }
}

pub fn parse_chain(text: &str, ext: &Extension) -> Result<Chain> {
    chain_from_doc(ext, &from_json(text)?, "")
}

pub fn schedule_to_doc(ext: &Extension, s: &UnitSchedule) -> ScheduleDoc {
    ScheduleDoc {
        degree: s.degree(),
        units: s
            .units()
            .iter()
            .map(|u| UnitDoc {
                level: u.level,
                element: parent_vector(ext, &u.element),
                targets: u.targets.iter().map(|t| parent_vector(ext, t)).collect(),
            })
            .collect(),
    }
}

pub fn schedule_from_doc(ext: &Extension, doc: &ScheduleDoc, path: &str) -> Result<UnitSchedule> {
    let units = doc
        .units
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let upath = format!("{path}units[{k}]");
            Ok(ScheduledUnit {
                level: u.level,
                element: split_vector(ext, &u.element, &format!("{upath}.element"))?,
                targets: u
                    .targets
                    .iter()
                    .enumerate()
                    .map(|(i, t)| split_vector(ext, t, &format!("{upath}.targets[{i}]")))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = UnitSchedule::new(units)?;
    if s.degree() != doc.degree {
        return Err(Error::parse(format!("{path}degree"), format!("{} units listed for degree {}", s.degree(), doc.degree)));
    }
    Ok(s)
}

fn variant_to_doc(v: Variant) -> VariantDoc {
    VariantDoc { complex: v.complex.to_string(), space: v.space.to_string() }
}

fn variant_from_doc(doc: &VariantDoc, path: &str) -> Result<Variant> {
    let complex: Complex = doc.complex.parse().map_err(|e| Error::parse(format!("{path}.complex"), e))?;
    let space: Space = doc.space.parse().map_err(|e| Error::parse(format!("{path}.space"), e))?;
    Ok(Variant::new(complex, space))
}

fn boundary_to_doc(ext: &Extension, c: &BoundaryCertificate) -> BoundaryDoc {
    BoundaryDoc {
        context: variant_to_doc(c.context),
        left: chain_to_doc(ext, &c.left),
        right: chain_to_doc(ext, &c.right),
        witness: chain_to_doc(ext, &c.witness),
    }
}

fn boundary_from_doc(ext: &Extension, d: &BoundaryDoc, path: &str) -> Result<BoundaryCertificate> {
    Ok(BoundaryCertificate {
        context: variant_from_doc(&d.context, &format!("{path}context"))?,
        left: chain_from_doc(ext, &d.left, &format!("{path}left."))?,
        right: chain_from_doc(ext, &d.right, &format!("{path}right."))?,
        witness: chain_from_doc(ext, &d.witness, &format!("{path}witness."))?,
    })
}

pub fn certificate_to_doc(ext: &Extension, cert: &Certificate) -> CertificateDoc {
    let certificate = match cert {
        Certificate::Boundary(c) => CertificateBody::Boundary(boundary_to_doc(ext, c)),
        Certificate::Descent(c) => CertificateBody::Descent(DescentDoc {
            input: chain_to_doc(ext, &c.input),
            output: chain_to_doc(ext, &c.output),
            homotopy: chain_to_doc(ext, &c.homotopy),
            unit: parent_vector(ext, &c.unit),
        }),
        Certificate::Inverse(r) => CertificateBody::Inverse(InverseDoc {
            input: chain_to_doc(ext, &r.input),
            output: chain_to_doc(ext, &r.output),
            schedule: schedule_to_doc(ext, &r.schedule),
            certificate: boundary_to_doc(ext, &r.certificate),
            strict_boundary: r.strict_boundary.as_ref().map(|c| chain_to_doc(ext, c)),
        }),
    };
    CertificateDoc { algebra: algebra_to_doc(ext), certificate }
}

pub fn certificate_from_doc(doc: &CertificateDoc) -> Result<(Extension, Certificate)> {
    let ext = algebra_from_doc(&doc.algebra)?;
    let cert = match &doc.certificate {
        CertificateBody::Boundary(d) => Certificate::Boundary(boundary_from_doc(&ext, d, "certificate.")?),
        CertificateBody::Descent(d) => Certificate::Descent(DescentCertificate {
            input: chain_from_doc(&ext, &d.input, "certificate.input.")?,
            output: chain_from_doc(&ext, &d.output, "certificate.output.")?,
            homotopy: chain_from_doc(&ext, &d.homotopy, "certificate.homotopy.")?,
            unit: split_vector(&ext, &d.unit, "certificate.unit")?,
        }),
        CertificateBody::Inverse(d) => Certificate::Inverse(InverseResult {
            input: chain_from_doc(&ext, &d.input, "certificate.input.")?,
            output: chain_from_doc(&ext, &d.output, "certificate.output.")?,
            schedule: schedule_from_doc(&ext, &d.schedule, "certificate.schedule.")?,
            certificate: boundary_from_doc(&ext, &d.certificate, "certificate.certificate.")?,
            strict_boundary: d
                .strict_boundary
                .as_ref()
                .map(|c| chain_from_doc(&ext, c, "certificate.strict_boundary."))
                .transpose()?,
        }),
    };
    Ok((ext, cert))
}

pub fn parse_certificate(text: &str) -> Result<(Extension, Certificate)> {
    certificate_from_doc(&from_json(text)?)
}

pub fn homology_to_doc(ext: &Extension, r: &HomologyReport) -> HomologyDoc {
    HomologyDoc {
        complex: r.variant.complex.to_string(),
        space: r.variant.space.to_string(),
        degree: r.degree,
        dimension: r.dimension,
        cycles: r.cycles,
        boundaries: r.boundaries,
        representatives: r.representatives.iter().map(|c| chain_to_doc(ext, c)).collect(),
    }
}

pub fn parse_targets(text: &str, ext: &Extension) -> Result<Vec<SparseVector>> {
    let doc: TargetsDoc = from_json(text)?;
    doc.targets.iter().enumerate().map(|(i, t)| split_vector(ext, t, &format!("targets[{i}]"))).collect()
}

pub fn parse_unit(text: &str, ext: &Extension) -> Result<SparseVector> {
    let doc: UnitFileDoc = from_json(text)?;
    split_vector(ext, &doc.unit, "unit")
}
