use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use excisionlab::algebra::Extension;
use excisionlab::chain::{canonicalize_cyclic, filtration_level, Chain};
use excisionlab::demo::{demo, DEMO_NAMES};
use excisionlab::excision::{self, Certificate};
use excisionlab::homology::{homology, max_degree_from_env, Complex, Space, Variant};
use excisionlab::io::{self, NamedChain, RunReport, Verdict};
use excisionlab::linalg::SparseVector;
use excisionlab::units::find_local_left_unit;
use excisionlab::{Error, Result};

#[derive(Parser)]
#[command(name = "excisionlab", version, about = "Exact Hochschild and cyclic homology with certified inverse excision")]
struct Cli {
    /// Report style: human-readable text or a JSON run report.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of one complex in one degree.
    Homology {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value = "hc")]
        variant: Complex,
        #[arg(long, default_value = "A")]
        space: Space,
        #[arg(long)]
        degree: usize,
    },
    /// Maps a relative cyclic cycle to a cycle of the ideal with a certificate.
    ExciseInverse {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
        /// The ideal has local right units; work in the opposite algebra.
        #[arg(long)]
        right_units: bool,
        /// Treat the input as a Hochschild cycle with initial slots in the ideal.
        #[arg(long)]
        hochschild: bool,
    },
    /// One descent step lowering the filtration level.
    Descend {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        chain: PathBuf,
        /// `auto` or a JSON file `{"unit": [...]}`.
        #[arg(long, default_value = "auto")]
        unit: String,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Re-checks a certificate file.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Solves for a common local left unit of the given targets.
    LocalUnit {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        targets: PathBuf,
    },
    /// Runs the built-in corpus.
    Demo {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(DEMO_NAMES))]
        name: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Also write the demo algebra as a JSON document.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

struct Run {
    report: RunReport,
    text: Vec<String>,
}

impl Run {
    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn chain(&mut self, ext: &Extension, name: &str, c: &Chain) {
        self.line(format!("{name} = {}", c.render(ext.algebra().labels())));
        self.report.chains.push(NamedChain { name: name.into(), chain: io::chain_to_doc(ext, c) });
    }

    fn verdict(&mut self, ext: &Extension, cert: &Certificate, file: Option<&Path>) -> Result<()> {
        let outcome = excision::verify_certificate(ext, cert);
        let verdict = Verdict {
            kind: cert.kind().into(),
            verified: outcome.is_ok(),
            detail: outcome.as_ref().err().map(|e| e.to_string()),
            file: file.map(|p| p.display().to_string()),
        };
        self.line(match &verdict.detail {
            None => format!("{} certificate: verified", verdict.kind),
            Some(d) => format!("{} certificate: FAILED ({d})", verdict.kind),
        });
        self.report.certificates.push(verdict);
        if let Some(path) = file {
            write(path, &io::to_json(&io::certificate_to_doc(ext, cert)))?;
            self.line(format!("certificate written to {}", path.display()));
        }
        Ok(())
    }

    fn homology(&mut self, ext: &Extension, variant: Variant, degree: usize) -> Result<usize> {
        let r = homology(ext, variant, degree, max_degree_from_env())?;
        self.line(format!(
            "{} {}_{degree}: dimension {} (cycles {}, boundaries {})",
            variant.space,
            match variant.complex {
                Complex::Hochschild => "HH",
                Complex::Cyclic => "HC",
                Complex::Bar => "H^bar",
            },
            r.dimension,
            r.cycles,
            r.boundaries
        ));
        for (i, c) in r.representatives.iter().enumerate() {
            self.line(format!("  [{i}] {}", c.render(ext.algebra().labels())));
        }
        self.report.homology.push(io::homology_to_doc(ext, &r));
        Ok(r.dimension)
    }
}

fn render_vector(ext: &Extension, v: &SparseVector) -> String {
    Chain::tensor(std::slice::from_ref(v), &num_traits::One::one()).render(ext.algebra().labels())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_chain(ext: &Extension, path: &Path) -> Result<Chain> {
    io::parse_chain(&read(path)?, ext).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        e => e,
    })
}

fn load_algebra(path: &Path) -> Result<Extension> {
    io::parse_algebra(&read(path)?).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        e => e,
    })
}

fn excise(run: &mut Run, ext: &Extension, phi: &Chain, right_units: bool, hochschild: bool, out: Option<&Path>) -> Result<()> {
    if hochschild {
        let (psi, schedule, cert) = excision::inverse_excision_hochschild(ext, phi)?;
        run.report.schedule = Some(io::schedule_to_doc(ext, &schedule));
        run.chain(ext, "psi", &psi);
        return run.verdict(ext, &Certificate::Boundary(cert), out);
    }
    let class = canonicalize_cyclic(phi);
    if right_units {
        let (psi, cert) = excision::inverse_excision_class_right(ext, &[class])?.remove(0);
        run.chain(ext, "psi", &psi);
        return run.verdict(ext, &Certificate::Boundary(cert), out);
    }
    let result = excision::inverse_excision_class(ext, &[class])?.remove(0);
    run.report.schedule = Some(io::schedule_to_doc(ext, &result.schedule));
    for u in result.schedule.units() {
        run.line(format!("e{} = {}", u.level, render_vector(ext, &u.element)));
    }
    run.chain(ext, "lift", &result.input);
    run.chain(ext, "psi", &result.output);
    if let Some(b) = &result.strict_boundary {
        run.line(format!("b(psi) {} in C(I)", if b.is_zero() { "vanishes" } else { "is nonzero (psi is a cycle modulo 1 - t)" }));
    }
    run.verdict(ext, &Certificate::Inverse(result), out)
}

fn execute(cli: &Cli, run: &mut Run) -> Result<()> {
    match &cli.command {
        Command::Homology { algebra, variant, space, degree } => {
            let ext = load_algebra(algebra)?;
            run.homology(&ext, Variant::new(*variant, *space), *degree)?;
        }
        Command::ExciseInverse { algebra, chain, degree, emit_certificate, right_units, hochschild } => {
            let ext = load_algebra(algebra)?;
            let phi = load_chain(&ext, chain)?;
            if phi.degree() != *degree {
                return Err(Error::DegreeMismatch { expected: *degree, found: phi.degree() });
            }
            excise(run, &ext, &phi, *right_units, *hochschild, emit_certificate.as_deref())?;
        }
        Command::Descend { algebra, chain, unit, emit_certificate } => {
            let ext = load_algebra(algebra)?;
            let phi = load_chain(&ext, chain)?;
            let e = if unit == "auto" {
                let initial: std::collections::BTreeSet<usize> = phi.terms().map(|(t, _)| t[0]).collect();
                let targets: Vec<_> = initial.into_iter().map(|i| ext.basis_vector(i)).collect();
                find_local_left_unit(&ext, &targets)?
            } else {
                io::parse_unit(&read(Path::new(unit))?, &ext)?
            };
            let cert = excision::descent_step(&ext, &phi, &e)?;
            run.line(format!("filtration level {} -> {}", filtration_level(&ext, &phi), filtration_level(&ext, &cert.output)));
            run.chain(&ext, "output", &cert.output);
            run.verdict(&ext, &Certificate::Descent(cert), emit_certificate.as_deref())?;
        }
        Command::Verify { certificate } => {
            let (ext, cert) = io::parse_certificate(&read(certificate)?)?;
            run.verdict(&ext, &cert, None)?;
        }
        Command::LocalUnit { algebra, targets } => {
            let ext = load_algebra(algebra)?;
            let targets = io::parse_targets(&read(targets)?, &ext)?;
            let e = find_local_left_unit(&ext, &targets)?;
            run.line(format!("unit = {}", render_vector(&ext, &e)));
            run.report.chains.push(NamedChain { name: "unit".into(), chain: io::chain_to_doc(&ext, &Chain::tensor(&[e], &num_traits::One::one())) });
        }
        Command::Demo { name, degree, export } => {
            let d = demo(name)?;
            let ext = &d.extension;
            run.line(format!("{}: {}", d.name, d.description));
            if let Some(path) = export {
                let mut doc = io::algebra_to_doc(ext);
                doc.description = Some(d.description.into());
                write(path, &io::to_json(&doc))?;
                run.line(format!("algebra written to {}", path.display()));
            }
            let hc = |space| Variant::new(Complex::Cyclic, space);
            let ideal = run.homology(ext, hc(Space::Ideal), *degree)?;
            let relative = run.homology(ext, hc(Space::Relative), *degree)?;
            if ideal != relative {
                run.report.errors.push(format!("dimension mismatch: HC_{degree}(I) = {ideal}, HC_{degree}(A, I) = {relative}"));
            }
            let reps = run.report.homology.last().map(|h| h.representatives.clone()).unwrap_or_default();
            for (i, r) in reps.iter().enumerate() {
                let phi = io::chain_from_doc(ext, r, "")?;
                run.line(format!("inverse of class [{i}]:"));
                if let Err(e) = excise(run, ext, &phi, false, false, None) {
                    let first = e.to_string().lines().next().unwrap_or_default().to_string();
                    run.line(format!("  FAILED: {first}"));
                    run.report.errors.push(format!("class {i}: {first}"));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut run = Run { report: RunReport::new(std::env::args().collect()), text: Vec::new() };
    if let Err(e) = execute(&cli, &mut run) {
        run.report.errors.push(e.to_string());
        run.text.push(format!("error: {e}"));
    }
    run.report.finish(start.elapsed());
    match cli.format {
        Format::Text => {
            for l in &run.text {
                if l.starts_with("error: ") {
                    eprintln!("{l}");
                } else {
                    println!("{l}");
                }
            }
        }
        Format::Structured => println!("{}", io::to_json(&run.report)),
    }
    if run.report.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
