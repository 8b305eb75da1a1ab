//! The JSON problem file and its validation into library objects.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::parser::{parse_expression, Context};
use super::CliError;
use crate::field::{Scalar, Spectrum, Weight};
use crate::poly::{Series, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    /// Coefficients in `Q`; eigenvalues may still be Gaussian.
    Rational,
    /// Coefficients in `Q(i)`.
    Gaussian,
    /// Eigenvalues are weights over an abstract basis; `vector_field` lists
    /// the perturbation `g = f − diag(λ)·x`.
    Symbolic,
}

impl FieldMode {
    pub fn name(self) -> &'static str {
        match self {
            FieldMode::Rational => "rational",
            FieldMode::Gaussian => "gaussian",
            FieldMode::Symbolic => "symbolic",
        }
    }
}

/// Numbers may be given as JSON integers or as strings such as `"1/2"`,
/// `"1+2*i"` or `"-i"`; weights as arrays of those.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub field_mode: FieldMode,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vector_field: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance: Option<Vec<Value>>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub mode: FieldMode,
    pub variables: Vec<String>,
    pub trunc_order: u32,
    /// `None` when the file gives no vector field outside symbolic mode.
    pub field: Option<VectorField>,
    /// From the field when there is one, else from `eigenvalues`.
    pub spectrum: Option<Spectrum>,
    pub ideals: BTreeMap<String, Vec<Series>>,
    pub resonance: Option<Vec<BigRational>>,
}

fn scalar(value: &Value, what: &str) -> Result<Scalar, CliError> {
    let bad = || CliError::Invalid(format!("{what}: expected a number, found {value}"));
    match value {
        Value::Number(n) => match n.as_i64() {
            Some(v) => Ok(Scalar::from_int(v)),
            None => Err(bad()),
        },
        Value::String(s) => Scalar::from_str(s).map_err(|e| CliError::Invalid(format!("{what}: {e}"))),
        _ => Err(bad()),
    }
}

fn rational(value: &Value, what: &str) -> Result<BigRational, CliError> {
    let s = scalar(value, what)?;
    match s.as_rational() {
        Some(q) => Ok(q.clone()),
        None => Err(CliError::Invalid(format!("{what}: expected a rational number, found {s}"))),
    }
}

fn weight(value: &Value, what: &str) -> Result<Weight, CliError> {
    match value {
        Value::Array(items) => {
            let coords = items
                .iter()
                .enumerate()
                .map(|(k, v)| rational(v, &format!("{what}[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Weight::new(coords))
        }
        other => Ok(Weight::new(vec![rational(other, what)?])),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Eigenvalue multisets agree up to order.
fn same_multiset(a: &[Scalar], b: &[Scalar]) -> bool {
    let key = |s: &Scalar| s.to_string();
    let mut a: Vec<String> = a.iter().map(key).collect();
    let mut b: Vec<String> = b.iter().map(key).collect();
    a.sort();
    b.sort();
    a == b
}

impl Problem {
    /// Reads and validates a problem file; `trunc_order` overrides the file.
    pub fn from_json(src: &str, trunc_order: Option<u32>) -> Result<Problem, CliError> {
        let file: ProblemFile =
            serde_json::from_str(src).map_err(|e| CliError::Json(e.to_string()))?;
        Problem::from_file(file, trunc_order)
    }

    pub fn from_file(file: ProblemFile, trunc_order: Option<u32>) -> Result<Problem, CliError> {
        let mode = file.field_mode;
        let variables = file.variables.clone();
        let n = variables.len();
        if n == 0 {
            return Err(CliError::Invalid("at least one variable is required".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !is_identifier(v) {
                return Err(CliError::Invalid(format!("'{v}' is not an identifier")));
            }
            if v == "i" {
                return Err(CliError::Invalid("'i' is reserved for the imaginary unit".into()));
            }
            if !seen.insert(v.as_str()) {
                return Err(CliError::Invalid(format!("variable '{v}' is declared twice")));
            }
        }

        let trunc_order = trunc_order
            .or(file.trunc_order)
            .ok_or_else(|| CliError::Usage("no truncation order: set trunc_order or pass --trunc-order".into()))?;
        if trunc_order == 0 {
            return Err(CliError::Usage("the truncation order must be positive".into()));
        }

        let mut ctx = Context::new(&variables);
        ctx.gaussian = mode != FieldMode::Rational;
        for (name, value) in &file.parameters {
            if !is_identifier(name) || name == "i" || seen.contains(name.as_str()) {
                return Err(CliError::Invalid(format!("'{name}' cannot name a parameter")));
            }
            let s = scalar(value, &format!("parameters.{name}"))?;
            if mode == FieldMode::Rational && !s.is_real() {
                return Err(CliError::ModeMismatch(format!(
                    "parameter {name} = {s} is not rational in rational mode"
                )));
            }
            ctx.parameters.insert(name.clone(), s);
        }

        let parse = |src: &str, what: String| -> Result<Series, CliError> {
            parse_expression(src, &ctx).map_err(|error| CliError::Parse { context: what, error })
        };

        let components = file
            .vector_field
            .iter()
            .enumerate()
            .map(|(k, src)| parse(src, format!("vector_field[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if !components.is_empty() && components.len() != n {
            return Err(CliError::Invalid(format!(
                "vector_field has {} components for {n} variables",
                components.len()
            )));
        }

        let mut ideals = BTreeMap::new();
        for (name, gens) in &file.ideals {
            let parsed = gens
                .iter()
                .enumerate()
                .map(|(k, src)| parse(src, format!("ideals.{name}[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ideals.insert(name.clone(), parsed);
        }

        let resonance = file
            .resonance
            .as_ref()
            .map(|alpha| {
                alpha
                    .iter()
                    .enumerate()
                    .map(|(k, v)| rational(v, &format!("resonance[{k}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;

        let (field, spectrum) = match mode {
            FieldMode::Symbolic => {
                let eigs = file
                    .eigenvalues
                    .as_ref()
                    .ok_or_else(|| CliError::Invalid("symbolic mode requires eigenvalues given as weights".into()))?;
                let weights = eigs
                    .iter()
                    .enumerate()
                    .map(|(k, v)| weight(v, &format!("eigenvalues[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let embedding = file
                    .embedding
                    .as_ref()
                    .map(|b| {
                        b.iter()
                            .enumerate()
                            .map(|(k, v)| scalar(v, &format!("embedding[{k}]")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .transpose()?;
                let spectrum =
                    Spectrum::symbolic(weights, embedding).map_err(|e| CliError::Invalid(format!("eigenvalues: {e}")))?;
                if spectrum.len() != n {
                    return Err(CliError::Invalid(format!(
                        "{} eigenvalues for {n} variables",
                        spectrum.len()
                    )));
                }
                let g = if components.is_empty() {
                    vec![Series::zero(n); n]
                } else {
                    components
                };
                let field = VectorField::symbolic(spectrum.clone(), g)?;
                (Some(field), Some(spectrum))
            }
            FieldMode::Rational | FieldMode::Gaussian => {
                if file.embedding.is_some() {
                    return Err(CliError::ModeMismatch(
                        "an embedding is only meaningful in symbolic mode".into(),
                    ));
                }
                let declared = file
                    .eigenvalues
                    .as_ref()
                    .map(|eigs| {
                        eigs.iter()
                            .enumerate()
                            .map(|(k, v)| scalar(v, &format!("eigenvalues[{k}]")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .transpose()?;
                if let Some(d) = &declared {
                    if d.len() != n {
                        return Err(CliError::Invalid(format!("{} eigenvalues for {n} variables", d.len())));
                    }
                }
                if components.is_empty() {
                    (None, declared.as_deref().map(Spectrum::concrete))
                } else {
                    let field = VectorField::new(components)?;
                    if let Some(d) = &declared {
                        let computed = field.eigenvalue_values().unwrap_or_default();
                        let agrees = if field.has_diagonal_semisimple() {
                            *d == computed
                        } else {
                            same_multiset(d, &computed)
                        };
                        if !agrees {
                            let shown: Vec<String> = computed.iter().map(Scalar::to_string).collect();
                            return Err(CliError::Hypothesis(format!(
                                "declared eigenvalues differ from those of the linear part: [{}]",
                                shown.join(", ")
                            )));
                        }
                    }
                    let spectrum = field.spectrum().clone();
                    (Some(field), Some(spectrum))
                }
            }
        };

        Ok(Problem {
            file,
            mode,
            variables,
            trunc_order,
            field,
            spectrum,
            ideals,
            resonance,
        })
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn print(&self, s: &Series) -> String {
        s.to_string_with(&self.variables)
    }

    pub fn print_all(&self, v: &[Series]) -> Vec<String> {
        v.iter().map(|s| self.print(s)).collect()
    }

    pub fn require_field(&self) -> Result<&VectorField, CliError> {
        self.field
            .as_ref()
            .ok_or_else(|| CliError::Invalid("this command needs a vector_field".into()))
    }

    pub fn require_spectrum(&self) -> Result<&Spectrum, CliError> {
        self.spectrum
            .as_ref()
            .ok_or_else(|| CliError::Invalid("this command needs a vector_field or eigenvalues".into()))
    }

    /// Selected ideals: one by name, or all of them.
    pub fn select_ideals(&self, name: Option<&str>) -> Result<Vec<(&String, &Vec<Series>)>, CliError> {
        match name {
            Some(n) => self
                .ideals
                .get_key_value(n)
                .map(|kv| vec![kv])
                .ok_or_else(|| CliError::Invalid(format!("no ideal named '{n}'"))),
            None if self.ideals.is_empty() => Err(CliError::Invalid("the problem declares no ideals".into())),
            None => Ok(self.ideals.iter().collect()),
        }
    }

    /// Label of a weight: its concrete value outside symbolic mode.
    pub fn weight_label(&self, w: &Weight) -> String {
        match (&self.mode, &self.spectrum) {
            (FieldMode::Symbolic, _) | (_, None) => w.to_string(),
            (_, Some(s)) => s.embed(w).map_or_else(|| w.to_string(), |v| v.to_string()),
        }
    }
}
