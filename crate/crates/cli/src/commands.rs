use std::fmt;
use std::path::Path;

use krull_core::cone::strong_atoms_affine;
use krull_core::decay::{format_ratio, AtomExponent, DecayJson};
use krull_core::factorization::{atoms_up_to, factorizations, is_strong_atom, StrongVerdict};
use krull_core::numberfield::FieldPresentation;
use krull_core::selfcheck::{run_all, SuiteConfig};
use krull_core::specfile::load_scale;
use krull_core::zeta::{
    atoms_by_value, check_euler_identity, euler_product_exact, euler_product_truncated, infinitude_report,
    zeta_estimate, zeta_upper_bound, InfinitudeParams, ZetaEstimate,
};
use krull_core::{
    load_spec, ExponentVector, KrullError, KrullPresentation, LoadedSpec, MonoidElement, MonoidSpec, Scale, ScaleValue,
    StrongAtom,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::render::Rendered;
use crate::Options;

/// Products with more atoms than this are not computed exactly.
const EXACT_PRODUCT_ATOMS: usize = 32;
const DEFAULT_TERMS: u64 = 1000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(KrullError),
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Core(e) if e.is_bound_exceeded() => 3,
            CliError::Core(_) => 2,
            CliError::Failed => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Failed => write!(f, "verification failed"),
        }
    }
}

impl From<KrullError> for CliError {
    fn from(e: KrullError) -> Self {
        CliError::Core(e)
    }
}

/// Rendered output plus whether the command reports a failed check.
pub type Outcome = Result<(Rendered, bool), CliError>;

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

fn load(opts: &Options) -> Result<LoadedSpec, CliError> {
    let path = opts.spec.as_deref().ok_or_else(|| usage("--spec is required"))?;
    Ok(load_spec(path, opts.bound)?)
}

fn krull(spec: &LoadedSpec) -> Result<&KrullPresentation, CliError> {
    spec.presentation().ok_or_else(|| {
        KrullError::Unsupported(format!("{} monoids have no divisor presentation", spec.monoid.family_name())).into()
    })
}

fn field(spec: &LoadedSpec) -> Option<&FieldPresentation> {
    spec.field.as_ref().map(|(_, fp)| fp)
}

fn bound_or_truncation(opts: &Options, spec: &LoadedSpec) -> Result<u64, CliError> {
    opts.bound
        .or_else(|| spec.presentation().and_then(|p| p.truncation()))
        .ok_or_else(|| usage("--bound is required for this monoid"))
}

fn field_label(fp: &FieldPresentation, v: &ExponentVector) -> String {
    if v.is_identity() {
        return "1".into();
    }
    let parts: Vec<String> = v
        .entries()
        .iter()
        .map(|&(id, e)| {
            let base = fp.ideal(id).map_or_else(|| id.to_string(), |i| i.label());
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

fn element_text(spec: &LoadedSpec, e: &MonoidElement) -> String {
    match (field(spec), e) {
        (Some(fp), MonoidElement::Exponents(v)) => field_label(fp, v),
        _ => spec.monoid.display(e),
    }
}

/// Integers for integer-labelled presentations and numerical monoids,
/// arrays for vectors, strings otherwise.
fn element_json(spec: &LoadedSpec, e: &MonoidElement) -> Value {
    match (&spec.monoid, e) {
        (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) if field(spec).is_none() => match p.to_integer(v) {
            Some(n) => json!(n),
            None => json!(p.display(v)),
        },
        (_, MonoidElement::IntVector(v)) => json!(v),
        (_, MonoidElement::Natural(n)) | (_, MonoidElement::Numerical(n)) => json!(n),
        _ => json!(element_text(spec, e)),
    }
}

fn atom_label(spec: &LoadedSpec, pres: &KrullPresentation, a: &StrongAtom) -> String {
    match field(spec) {
        Some(fp) => fp.atom_label(a),
        None => pres.strong_atom_label(a),
    }
}

fn parse_element(opts: &Options, spec: &LoadedSpec) -> Result<MonoidElement, CliError> {
    let text = opts.element.as_deref().ok_or_else(|| usage("--element is required"))?;
    if let Some((k, _)) = &spec.field {
        if !text.contains(':') && text.contains(',') {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            let (u, v) = match parts.as_slice() {
                [u, v] => (u.parse::<i64>(), v.parse::<i64>()),
                _ => return Err(KrullError::InvalidParameter(format!("expected u,v for u + v·ω, got `{text}`")).into()),
            };
            let (Ok(u), Ok(v)) = (u, v) else {
                return Err(KrullError::InvalidParameter(format!("expected integers u,v, got `{text}`")).into());
            };
            let factors = k.factor_element(u, v)?;
            let x = ExponentVector::from_pairs(factors.iter().map(|(ideal, e)| (ideal.id(), *e)));
            return Ok(MonoidElement::Exponents(x));
        }
    }
    Ok(spec.monoid.parse_element(text)?)
}

fn parse_scale_value(text: &str) -> Result<ScaleValue, CliError> {
    if let Some(r) = krull_core::decay::parse_ratio(text) {
        return Ok(ScaleValue::Rational(r));
    }
    if let Ok(n) = text.trim().parse::<u128>() {
        return Ok(ScaleValue::integer(n));
    }
    text.trim()
        .parse::<f64>()
        .map(ScaleValue::Real)
        .map_err(|_| KrullError::InvalidParameter(format!("bad scale constant `{text}`")).into())
}

fn parse_scale(opts: &Options, pres: &KrullPresentation, default: &str) -> Result<Scale, CliError> {
    let text = opts.scale.as_deref().unwrap_or(default);
    let scale = match text.split_once(':') {
        None if text == "wallis" => Scale::wallis(pres)?,
        None if text == "identity" => Scale::identity(pres)?,
        Some(("power", s)) => {
            let s = s
                .trim()
                .parse::<f64>()
                .map_err(|_| KrullError::InvalidParameter(format!("bad exponent in `{text}`")))?;
            Scale::power(pres, s)?
        }
        Some(("decay", c)) => Scale::decay(pres, parse_scale_value(c)?)?,
        Some(("file", path)) => load_scale(pres, Path::new(path))?,
        _ => return Err(KrullError::InvalidParameter(format!("unknown scale `{text}`")).into()),
    };
    Ok(scale)
}

fn flatten(prefix: &str, v: &Value, out: &mut Rendered) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::String(s) => out.row([prefix.to_string(), s.clone()]),
        other => out.row([prefix.to_string(), other.to_string()]),
    }
}

/// Key/value table and CSV for a JSON object.
fn key_value<T: Serialize>(value: &T) -> Rendered {
    let json = serde_json::to_value(value).expect("serializable output");
    let mut r = Rendered::new(Value::Null, &["key", "value"]);
    flatten("", &json, &mut r);
    r.json = json;
    r
}

#[derive(Serialize)]
struct FieldInfo {
    d: i64,
    discriminant: i64,
    class_number: u8,
    validated: bool,
}

#[derive(Serialize)]
struct KrullInfo {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<u64>,
    class_group: Vec<u64>,
    class_group_order: u64,
    divisors: usize,
    strong_atoms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldInfo>,
}

pub fn info(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let rendered = match &spec.monoid {
        MonoidSpec::Krull(p) => key_value(&KrullInfo {
            family: spec.source.family.clone(),
            truncation: p.truncation(),
            class_group: p.group().moduli().to_vec(),
            class_group_order: p.group().order(),
            divisors: p.divisors().len(),
            strong_atoms: p.strong_atoms().len(),
            field: spec.field.as_ref().map(|(k, _)| FieldInfo {
                d: k.d(),
                discriminant: k.discriminant(),
                class_number: k.class_number(),
                validated: k.is_validated(),
            }),
        }),
        MonoidSpec::Affine(a) => key_value(&json!({
            "family": spec.source.family,
            "dim": a.dim(),
            "generators": a.generators(),
            "grading": a.grading(),
            "strong_atoms": strong_atoms_affine(a.generators())?,
        })),
        MonoidSpec::Numerical(m) => key_value(&json!({
            "family": spec.source.family,
            "generators": m.generators(),
        })),
    };
    Ok((rendered, false))
}

fn grade_text(spec: &LoadedSpec, e: &MonoidElement) -> String {
    spec.monoid.grade(e).map(|g| g.to_string()).unwrap_or_default()
}

pub fn atoms(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let bound = bound_or_truncation(opts, &spec)?;
    let atoms = atoms_up_to(&spec.monoid, bound)?;
    let json = Value::Array(atoms.iter().map(|a| element_json(&spec, a)).collect());
    let mut r = Rendered::new(json, &["atom", "grade"]);
    for a in &atoms {
        r.row([element_text(&spec, a), grade_text(&spec, a)]);
    }
    Ok((r, false))
}

pub fn strong_atoms(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let r = match &spec.monoid {
        MonoidSpec::Krull(p) => {
            let bound = opts.bound.map(u128::from);
            let atoms: Vec<StrongAtom> =
                p.strong_atoms().into_iter().filter(|a| bound.is_none_or(|b| p.grade(&a.element()) <= b)).collect();
            let mut sorted: Vec<(u128, StrongAtom)> = atoms.into_iter().map(|a| (p.grade(&a.element()), a)).collect();
            sorted.sort();
            let elements: Vec<MonoidElement> =
                sorted.iter().map(|(_, a)| MonoidElement::Exponents(a.element())).collect();
            let mut r = Rendered::new(
                Value::Array(elements.iter().map(|e| element_json(&spec, e)).collect()),
                &["atom", "divisor", "k", "grade"],
            );
            for ((g, a), e) in sorted.iter().zip(&elements) {
                let divisor = p.divisor(a.divisor)?;
                let divisor_label = match field(&spec) {
                    Some(fp) => fp.atom_label(&StrongAtom { divisor: a.divisor, power: 1 }),
                    None => divisor.label.clone(),
                };
                r.row([element_text(&spec, e), divisor_label, a.power.to_string(), g.to_string()]);
            }
            r
        }
        MonoidSpec::Affine(a) => {
            let atoms = strong_atoms_affine(a.generators())?;
            let mut r = Rendered::new(json!(atoms), &["atom"]);
            for v in &atoms {
                r.row([spec.monoid.display(&MonoidElement::IntVector(v.clone()))]);
            }
            r
        }
        MonoidSpec::Numerical(_) => {
            let bound = bound_or_truncation(opts, &spec)?;
            let power_bound = spec.monoid.default_power_bound();
            let mut json = Vec::new();
            let mut r = Rendered::new(Value::Null, &["atom", "status"]);
            for a in atoms_up_to(&spec.monoid, bound)? {
                let verdict = is_strong_atom(&spec.monoid, &a, power_bound, bound)?;
                if !verdict.possibly_strong() {
                    continue;
                }
                let status = match verdict {
                    StrongVerdict::Exact(_) => "strong".to_string(),
                    StrongVerdict::Bounded(v) => format!("unrefuted up to power {}", v.bound()),
                };
                json.push(json!({"atom": element_json(&spec, &a), "status": status}));
                r.row([element_text(&spec, &a), status]);
            }
            r.json = Value::Array(json);
            r
        }
    };
    Ok((r, false))
}

pub fn factorize(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let x = parse_element(opts, &spec)?;
    let grade = spec.monoid.grade(&x)?;
    let bound = opts.bound.unwrap_or(u64::try_from(grade).map_err(|_| KrullError::Overflow("element grade"))?);
    let z = factorizations(&spec.monoid, &x, bound)?;
    let json = json!({
        "element": element_json(&spec, &x),
        "factorizations": z.factorizations.iter()
            .map(|f| f.iter().map(|a| element_json(&spec, a)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "lengths": z.lengths(),
    });
    let mut r = Rendered::new(json, &["length", "factorization"]);
    r.note(format!("{}: {} factorizations", element_text(&spec, &x), z.len()));
    for f in &z.factorizations {
        let parts: Vec<String> = f.iter().map(|a| element_text(&spec, a)).collect();
        r.row([f.len().to_string(), parts.join(" * ")]);
    }
    Ok((r, false))
}

pub fn decay(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let pres = krull(&spec)?;
    let x = parse_element(opts, &spec)?;
    let v = x.as_exponents().ok_or_else(|| usage("decay needs an element of a divisor presentation"))?;
    let d = krull_core::decay::decay(pres, v)?;
    let wire = DecayJson {
        m: d.m,
        exponents: d.exponents.iter().map(|(a, e)| AtomExponent { atom: atom_label(&spec, pres, a), e: *e }).collect(),
        delta: format_ratio(&d.delta),
    };
    let mut r = Rendered::new(serde_json::to_value(&wire).expect("serializable output"), &["atom", "e", "lambda"]);
    r.note(format!("x = {}", element_text(&spec, &x)));
    r.note(format!("m = {}", d.m));
    r.note(format!("delta = {}", wire.delta));
    for (a, e) in &d.exponents {
        r.row([atom_label(&spec, pres, a), e.to_string(), format_ratio(&d.lambda_of(a))]);
    }
    Ok((r, false))
}

fn estimate_rendered(est: &ZetaEstimate) -> Rendered {
    let mut r = Rendered::new(serde_json::to_value(est).expect("serializable output"), &[]);
    r.header = ZetaEstimate::CSV_HEADER.split(',').map(str::to_string).collect();
    r.rows.push(est.csv_row().split(',').map(str::to_string).collect());
    if est.conditional {
        r.note("upper bracket is conditional: tail bound >= 1/2");
    }
    r
}

pub fn zeta(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let pres = krull(&spec)?;
    let scale = parse_scale(opts, pres, "power:2")?;
    if let Some(c) = opts.infinitude {
        let n_max = bound_or_truncation(opts, &spec)?;
        let report = infinitude_report(pres, &scale, InfinitudeParams { c, n_max })?;
        return Ok((key_value(&report), false));
    }
    let est = zeta_estimate(pres, &scale, opts.terms.unwrap_or(DEFAULT_TERMS), opts.atoms, opts.tail)?;
    Ok((estimate_rendered(&est), false))
}

#[derive(Serialize)]
struct EulerOutput {
    scale: String,
    atoms: usize,
    product: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditional: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity: Option<krull_core::zeta::EulerIdentityReport>,
}

pub fn euler(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let pres = krull(&spec)?;
    let scale = parse_scale(opts, pres, "power:2")?;
    let ordered = atoms_by_value(&scale);
    let n = opts.atoms.unwrap_or(ordered.len());
    if n > ordered.len() {
        return Err(
            KrullError::SizeLimit(format!("{n} atoms requested, the presentation has {}", ordered.len())).into()
        );
    }
    let atoms: Vec<StrongAtom> = ordered.into_iter().take(n).map(|(a, _)| a).collect();
    let product = euler_product_truncated(&scale, &atoms)?;
    let exact =
        if n <= EXACT_PRODUCT_ATOMS { euler_product_exact(&scale, &atoms)?.map(|r| format_ratio(&r)) } else { None };
    let upper = opts.tail.map(|t| zeta_upper_bound(&scale, &atoms, t)).transpose()?;
    let identity = match opts.terms {
        Some(budget) => Some(check_euler_identity(pres, &scale, budget, opts.tolerance, opts.tail, opts.bound)?),
        None => None,
    };
    let out = EulerOutput {
        scale: scale.name().to_string(),
        atoms: n,
        product,
        exact,
        upper: upper.map(|u| u.value),
        conditional: upper.map(|u| u.conditional),
        identity,
    };
    Ok((key_value(&out), false))
}

#[derive(Serialize)]
struct DedekindOutput {
    d: i64,
    class_number: u8,
    s: f64,
    bound: u64,
    estimate: ZetaEstimate,
    counts_match_oracle: bool,
    strong_atoms: usize,
}

pub fn dedekind(opts: &Options) -> Outcome {
    let spec = load(opts)?;
    let (k, _) =
        spec.field.as_ref().ok_or_else(|| KrullError::Unsupported("dedekind needs a quadratic_field spec".into()))?;
    let s = match opts.scale.as_deref().unwrap_or("power:2").split_once(':') {
        Some(("power", s)) => {
            s.trim().parse::<f64>().map_err(|_| KrullError::InvalidParameter(format!("bad exponent `{s}`")))?
        }
        _ => return Err(KrullError::InvalidParameter("dedekind takes --scale power:s".into()).into()),
    };
    let bound = opts.bound.or(spec.source.norm_bound).ok_or_else(|| usage("--bound is required"))?;
    let estimate = k.dedekind_zeta(s, bound)?;
    let counts = k.ideal_counts_by_enumeration(bound);
    let counts_match_oracle = (1..=bound).all(|n| counts[n as usize] == k.ideal_count_oracle(n));
    let out = DedekindOutput {
        d: k.d(),
        class_number: k.class_number(),
        s,
        bound,
        estimate,
        counts_match_oracle,
        strong_atoms: k.principal_monoid_strong_atoms(bound).len(),
    };
    let failed = !out.counts_match_oracle;
    Ok((key_value(&out), failed))
}

pub fn verify(opts: &Options) -> Outcome {
    let outcomes = run_all(&SuiteConfig { seed: opts.seed, pairs: opts.pairs });
    let failed = outcomes.iter().any(|o| !o.passed);
    let mut r =
        Rendered::new(serde_json::to_value(&outcomes).expect("serializable output"), &["check", "status", "detail"]);
    for o in &outcomes {
        r.row([o.name.to_string(), if o.passed { "PASS" } else { "FAIL" }.to_string(), o.detail.clone()]);
    }
    Ok((r, failed))
}
