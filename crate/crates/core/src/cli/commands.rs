//! One function per subcommand. Each returns a JSON report and the exit code
//! of its claim; errors that prevent a verdict are returned as `CliError`.

use num_traits::Signed;
use serde_json::{json, Map, Value};

use super::problem::Problem;
use super::{Basis, CliError, EXIT_FAILURE, EXIT_HYPOTHESIS, EXIT_OK};
use crate::field::{Scalar, Spectrum};
use crate::ideals::{
    extract_semiinvariants, is_invariant, is_semiinvariant, lf_extract_semiinvariants, single_resonance_primes,
    Extraction, ExtractionCertificate, IdealError, IdealHandle,
};
use crate::normalform::{is_pdnf, normalize};
use crate::poly::{is_weight_homogeneous, weight_decompose, PolyError, Series};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub exit_code: i32,
    /// One-paragraph human-readable summary.
    pub summary: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExtractOptions {
    pub ideal: Option<String>,
    pub certificate: bool,
    pub close: bool,
}

fn header(p: &Problem, command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("trunc_order".into(), json!(p.trunc_order));
    m.insert(
        "modulo".into(),
        json!(format!("<{}>^{}", p.variables.join(", "), p.trunc_order)),
    );
    m.insert("field_mode".into(), json!(p.mode.name()));
    m.insert("problem".into(), serde_json::to_value(&p.file).expect("problem files are plain JSON"));
    m
}

fn finish(m: Map<String, Value>, exit_code: i32, summary: String) -> Report {
    Report {
        value: Value::Object(m),
        exit_code,
        summary,
    }
}

fn all_zero(v: &[Series]) -> bool {
    v.iter().all(Series::is_zero)
}

fn eigenvalue_labels(p: &Problem, spectrum: &Spectrum) -> Vec<String> {
    spectrum.eigenvalues().iter().map(|w| p.weight_label(w)).collect()
}

/// Fails unless the field's semisimple part is diagonal in the input
/// coordinates, which every weight-based command presupposes.
fn require_diagonal(p: &Problem) -> Result<(), CliError> {
    match &p.field {
        Some(f) if !f.has_diagonal_semisimple() => Err(CliError::Hypothesis(
            "the semisimple part is not diagonal in these coordinates; normalize first".into(),
        )),
        _ => Ok(()),
    }
}

pub fn cmd_normalize(p: &Problem, basis: Basis) -> Result<Report, CliError> {
    let f = p.require_field()?;
    let n = p.trunc_order;
    let res = normalize(f, n)?;
    let conjugacy = res.conjugacy_residual()?;
    let pdnf = is_pdnf(&res.normalized, n)?;
    let (fstar, h) = match basis {
        Basis::Diagonal => (res.normalized.components()?.to_vec(), res.transformation.clone()),
        Basis::Original => res.in_original_basis()?,
    };
    let holds = pdnf.pdnf && all_zero(&conjugacy);

    let mut m = header(p, "normalize");
    m.insert(
        "basis".into(),
        json!(match basis {
            Basis::Diagonal => "diagonal",
            Basis::Original => "original",
        }),
    );
    m.insert("eigenvalues".into(), json!(eigenvalue_labels(p, f.spectrum())));
    m.insert("normalized".into(), json!(p.print_all(&fstar)));
    m.insert("transformation".into(), json!(p.print_all(&h)));
    m.insert("linear_change".into(), serde_json::to_value(&res.linear_change).expect("matrix"));
    m.insert(
        "linear_change_inverse".into(),
        serde_json::to_value(&res.linear_change_inverse).expect("matrix"),
    );
    m.insert("pdnf".into(), json!(pdnf.pdnf));
    m.insert("conjugacy_verified".into(), json!(all_zero(&conjugacy)));
    m.insert("metadata".into(), serde_json::to_value(&res.metadata).expect("metadata"));
    let summary = format!(
        "normal form modulo degree {}: {}; conjugacy {}",
        n + 1,
        p.print_all(&fstar).join(", "),
        if all_zero(&conjugacy) { "verified" } else { "FAILED" }
    );
    Ok(finish(m, if holds { EXIT_OK } else { EXIT_FAILURE }, summary))
}

pub fn cmd_check_pdnf(p: &Problem) -> Result<Report, CliError> {
    let f = p.require_field()?;
    let check = is_pdnf(f, p.trunc_order)?;
    let mut m = header(p, "check-pdnf");
    m.insert("checked_modulo_degree".into(), json!(p.trunc_order + 1));
    m.insert("pdnf".into(), json!(check.pdnf));
    let residual = if all_zero(&check.residual) {
        json!("0")
    } else {
        json!(p.print_all(&check.residual))
    };
    m.insert("residual".into(), residual);
    let summary = format!(
        "{} in PDNF modulo degree {}",
        if check.pdnf { "is" } else { "is not" },
        p.trunc_order + 1
    );
    Ok(finish(m, if check.pdnf { EXIT_OK } else { EXIT_FAILURE }, summary))
}

pub fn cmd_weights(p: &Problem, ideal: Option<&str>) -> Result<Report, CliError> {
    let spectrum = p.require_spectrum()?;
    require_diagonal(p)?;
    let n = p.trunc_order;
    let mut ideals = Map::new();
    let mut count = 0;
    for (name, gens) in p.select_ideals(ideal)? {
        let mut entries = Vec::new();
        for g in gens {
            let parts = weight_decompose(&g.truncated(n), spectrum.eigenvalues())?;
            let components: Map<String, Value> = parts
                .components()
                .iter()
                .map(|(w, c)| (p.weight_label(w), json!(p.print(c))))
                .collect();
            count += components.len();
            entries.push(json!({ "generator": p.print(g), "components": components }));
        }
        ideals.insert(name.clone(), json!(entries));
    }
    let mut m = header(p, "weights");
    m.insert("eigenvalues".into(), json!(eigenvalue_labels(p, spectrum)));
    m.insert("ideals".into(), Value::Object(ideals));
    Ok(finish(m, EXIT_OK, format!("{count} weight components modulo degree {n}")))
}

pub fn cmd_invariance(p: &Problem, ideal: Option<&str>) -> Result<Report, CliError> {
    let f = p.require_field()?;
    let field = f.components()?;
    let n = p.trunc_order;
    let mut ideals = Map::new();
    let mut failed = Vec::new();
    for (name, gens) in p.select_ideals(ideal)? {
        let handle = IdealHandle::new(p.nvars(), gens.clone(), n)?;
        let check = is_invariant(&handle, field)?;
        let mut entry = Map::new();
        entry.insert("generators".into(), json!(p.print_all(gens)));
        entry.insert("invariant".into(), json!(check.invariant));
        entry.insert(
            "witness".into(),
            match &check.witness {
                Some((g, image)) => json!({ "generator": p.print(g), "image": p.print(image) }),
                None => Value::Null,
            },
        );
        if let [g] = gens.as_slice() {
            let cofactor = is_semiinvariant(g, field, n)?;
            entry.insert(
                "cofactor".into(),
                cofactor.map_or(Value::Null, |c| json!(p.print(&c))),
            );
        }
        if !check.invariant {
            failed.push(name.clone());
        }
        ideals.insert(name.clone(), Value::Object(entry));
    }
    let mut m = header(p, "invariance");
    m.insert("ideals".into(), Value::Object(ideals));
    let summary = if failed.is_empty() {
        format!("all ideals invariant modulo degree {n}")
    } else {
        format!("not invariant modulo degree {n}: {}", failed.join(", "))
    };
    Ok(finish(m, if failed.is_empty() { EXIT_OK } else { EXIT_FAILURE }, summary))
}

/// The smallest `L_{B_s}`-invariant ideal containing `base`: every weight
/// component of every generator is adjoined.
fn weight_closure(base: &IdealHandle, spectrum: &Spectrum) -> Result<IdealHandle, CliError> {
    let mut gens = base.generators().to_vec();
    for g in base.generators() {
        for c in weight_decompose(g, spectrum.eigenvalues())?.components().values() {
            gens.push(c.clone());
        }
    }
    Ok(IdealHandle::new(base.nvars(), gens, base.trunc_order())?)
}

fn merge(into: &mut Extraction, more: Extraction) {
    for (g, w) in more.generators.into_iter().zip(more.weights) {
        if !into.generators.contains(&g) {
            into.generators.push(g);
            into.weights.push(w);
        }
    }
    into.certificates.extend(more.certificates);
}

fn certificate_json(p: &Problem, cert: &ExtractionCertificate, full: bool) -> Value {
    let mut c = Map::new();
    c.insert("source".into(), json!(p.print(&cert.source)));
    c.insert("size".into(), json!(cert.matrix.rows()));
    c.insert("blocks".into(), json!(cert.blocks));
    c.insert(
        "weights".into(),
        json!(cert.weights.iter().map(|w| p.weight_label(w)).collect::<Vec<_>>()),
    );
    c.insert(
        "nodes".into(),
        json!(cert.nodes.iter().map(Scalar::to_string).collect::<Vec<_>>()),
    );
    c.insert("matrix".into(), serde_json::to_value(&cert.matrix).expect("matrix"));
    c.insert("determinant".into(), json!(cert.determinant.to_string()));
    match cert.determinant.as_rational() {
        Some(q) => c.insert("abs_determinant".into(), json!(Scalar::from_rational(q.abs()).to_string())),
        None => c.insert(
            "determinant_norm_squared".into(),
            json!(Scalar::from_rational(cert.determinant.norm_sqr()).to_string()),
        ),
    };
    c.insert("trunc_order".into(), json!(cert.trunc_order));
    if full {
        c.insert("rhs".into(), json!(p.print_all(&cert.rhs)));
        c.insert("solution".into(), json!(p.print_all(&cert.solution)));
    }
    Value::Object(c)
}

enum Route<'a> {
    /// `L_f`-invariance and the confluent system.
    Field(&'a [Series]),
    /// `L_{B_s}`-invariance; certified when the spectrum is embedded.
    Semisimple(&'a Spectrum),
}

pub fn cmd_extract(p: &Problem, opts: &ExtractOptions) -> Result<Report, CliError> {
    let n = p.trunc_order;
    require_diagonal(p)?;
    let route = match &p.field {
        Some(f) => match f.components() {
            Ok(c) => Route::Field(c),
            Err(PolyError::NoEmbedding) => Route::Semisimple(f.spectrum()),
            Err(e) => return Err(e.into()),
        },
        None => Route::Semisimple(p.require_spectrum()?),
    };
    let eigenvalues = match &route {
        Route::Field(_) => p.require_field()?.eigenvalues(),
        Route::Semisimple(s) => s.eigenvalues(),
    };

    let mut ideals = Map::new();
    let mut exit = EXIT_OK;
    let mut lines = Vec::new();
    for (name, gens) in p.select_ideals(opts.ideal.as_deref())? {
        let base = IdealHandle::new(p.nvars(), gens.clone(), n)?;
        let ambient = match (&route, opts.close) {
            (_, false) => base.clone(),
            (Route::Field(field), true) => base.invariant_closure(field)?,
            (Route::Semisimple(s), true) => weight_closure(&base, s)?,
        };
        let run = |handle: &IdealHandle| -> Result<Extraction, IdealError> {
            match &route {
                Route::Field(_) => lf_extract_semiinvariants(handle, p.require_field().expect("field route")),
                Route::Semisimple(s) => extract_semiinvariants(handle, s),
            }
        };

        let mut entry = Map::new();
        entry.insert("generators_in".into(), json!(p.print_all(gens)));
        entry.insert("closed".into(), json!(opts.close));
        if opts.close {
            entry.insert("closure".into(), json!(p.print_all(ambient.generators())));
        }
        // semi-invariants split off the declared generators, then, when the
        // closure is larger, those needed from the generators it adjoined
        let outcome = run(&ambient.with_generators(gens.clone())?).and_then(|out| {
            let mut completion = Extraction {
                generators: Vec::new(),
                weights: Vec::new(),
                certificates: Vec::new(),
                trunc_order: n,
            };
            for g in &ambient.generators()[gens.len()..] {
                let mut known = out.generators.clone();
                known.extend(completion.generators.iter().cloned());
                if IdealHandle::new(p.nvars(), known, n)?.member(g) {
                    continue;
                }
                merge(&mut completion, run(&ambient.with_generators(vec![g.clone()])?)?);
            }
            Ok((out, completion))
        });
        match outcome {
            Ok((out, completion)) => {
                let mut all = out.generators.clone();
                all.extend(completion.generators.iter().cloned());
                let homogeneous = all
                    .iter()
                    .map(|g| is_weight_homogeneous(g, eigenvalues))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .all(|b| b);
                let generates = ambient.same_as(&all)?;
                if !(homogeneous && generates) {
                    exit = exit.max(EXIT_FAILURE);
                }
                lines.push(format!("{name}: {}", p.print_all(&all).join(", ")));
                let labels = |e: &Extraction| e.weights.iter().map(|w| p.weight_label(w)).collect::<Vec<_>>();
                let certs = |e: &Extraction| {
                    e.certificates
                        .iter()
                        .map(|c| certificate_json(p, c, opts.certificate))
                        .collect::<Vec<_>>()
                };
                entry.insert("status".into(), json!("extracted"));
                entry.insert("generators".into(), json!(p.print_all(&out.generators)));
                entry.insert("weights".into(), json!(labels(&out)));
                entry.insert("certificates".into(), json!(certs(&out)));
                if opts.close {
                    entry.insert(
                        "completion".into(),
                        json!({
                            "generators": p.print_all(&completion.generators),
                            "weights": labels(&completion),
                            "certificates": certs(&completion),
                        }),
                    );
                }
                entry.insert("weight_homogeneous".into(), json!(homogeneous));
                entry.insert("generates_ideal".into(), json!(generates));
                entry.insert(
                    "invariance".into(),
                    json!(match route {
                        Route::Field(_) => "L_f",
                        Route::Semisimple(_) => "L_Bs",
                    }),
                );
            }
            Err(IdealError::NotInvariant { generator, image }) => {
                exit = exit.max(EXIT_FAILURE);
                lines.push(format!("{name}: not invariant"));
                entry.insert("status".into(), json!("not-invariant"));
                entry.insert(
                    "witness".into(),
                    json!({ "generator": p.print(&generator), "image": p.print(&image) }),
                );
            }
            Err(IdealError::NotPdnf { residual }) => {
                exit = exit.max(EXIT_HYPOTHESIS);
                lines.push(format!("{name}: field not in PDNF"));
                entry.insert("status".into(), json!("not-pdnf"));
                entry.insert("residual".into(), json!(p.print_all(&residual)));
            }
            Err(e) => return Err(e.into()),
        }
        ideals.insert(name.clone(), Value::Object(entry));
    }
    let mut m = header(p, "extract");
    if let Some(s) = &p.spectrum {
        m.insert("eigenvalues".into(), json!(eigenvalue_labels(p, s)));
    }
    m.insert("ideals".into(), Value::Object(ideals));
    Ok(finish(m, exit, format!("modulo degree {n}: {}", lines.join("; "))))
}

pub fn cmd_resonance(p: &Problem) -> Result<Report, CliError> {
    let spectrum = p.require_spectrum()?;
    let alpha = p
        .resonance
        .as_ref()
        .ok_or_else(|| CliError::Invalid("resonance requires the coefficients 'resonance'".into()))?;
    let out = single_resonance_primes(spectrum.eigenvalues(), alpha)?;
    if out.nvars != p.nvars() {
        return Err(CliError::Invalid(format!(
            "{} resonance coefficients for {} variables",
            alpha.len(),
            p.nvars()
        )));
    }
    let n = p.trunc_order;
    let mut candidates = Vec::new();
    for set in &out.candidates {
        let names: Vec<&str> = set.iter().map(|&i| p.variables[i].as_str()).collect();
        let mut c = Map::new();
        c.insert("variables".into(), json!(names));
        c.insert("prime".into(), json!(format!("<{}>", names.join(", "))));
        // L_f(x_i) = λ_i·x_i + g_i, so the prime is invariant iff each g_i lies in it
        if let Some(f) = &p.field {
            if f.has_diagonal_semisimple() {
                let gens: Vec<Series> = set.iter().map(|&i| Series::var(p.nvars(), i)).collect();
                let prime = IdealHandle::new(p.nvars(), gens, n)?;
                let invariant = set.iter().all(|&i| prime.member(&f.perturbation()[i]));
                c.insert("invariant".into(), json!(invariant));
            }
        }
        candidates.push(Value::Object(c));
    }
    let mut m = header(p, "resonance");
    m.insert("eigenvalues".into(), json!(eigenvalue_labels(p, spectrum)));
    m.insert("resonant_eigenvalue".into(), json!(p.weight_label(&out.resonant_eigenvalue)));
    m.insert("hypotheses".into(), json!(out.hypotheses));
    m.insert("candidates".into(), json!(candidates));
    let summary = format!("{} candidate monomial primes", out.candidates.len());
    Ok(finish(m, EXIT_OK, summary))
}
