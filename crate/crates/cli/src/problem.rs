//! The `godex/1` problem file: a field, a poset given by covering relations,
//! a sheaf given on covers, and optional filtration, second sheaf with a map,
//! and monotone map blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use godex::complexes::{ChainMap, CochainComplex, Degree};
use godex::exactlin::{Field, Matrix, Scalar};
use godex::filtered::FilteredComplex;
use godex::site::{MonotoneMap, Poset, Sheaf, SheafMap};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const FORMAT: &str = "godex/1";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn semantic(msg: impl Into<String>) -> InputError {
    InputError::Semantic(msg.into())
}

type RawMatrix = Vec<Vec<Value>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoset {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComplex {
    pub lo: Degree,
    pub dims: Vec<usize>,
    pub differentials: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStalk {
    pub at: String,
    pub lo: Degree,
    pub dims: Vec<usize>,
    pub differentials: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRestriction {
    pub from: String,
    pub to: String,
    pub lo: Degree,
    pub components: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSheaf {
    pub stalks: Vec<RawStalk>,
    pub restrictions: Vec<RawRestriction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFiltration {
    pub complex: RawComplex,
    /// Per degree, the weight of each standard basis vector.
    pub weights: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub at: String,
    pub lo: Degree,
    pub components: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSecond {
    pub sheaf: RawSheaf,
    pub map: Vec<RawComponent>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMonotone {
    pub target: RawPoset,
    /// `[source element, target element]`.
    pub values: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFile {
    pub format: String,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<RawPoset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheaf: Option<RawSheaf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<RawFiltration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<RawSecond>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone_map: Option<RawMonotone>,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    pub complex: Arc<CochainComplex>,
    pub weights: Vec<Vec<i32>>,
    pub filtered: FilteredComplex,
}

/// A monotone map whose source is resolved against another file's poset.
#[derive(Clone, Debug)]
pub struct PendingMap {
    pub target: Arc<Poset>,
    pub values: Vec<(String, String)>,
}

impl PendingMap {
    pub fn resolve(&self, source: &Arc<Poset>) -> Result<MonotoneMap, InputError> {
        let mut values = vec![None; source.len()];
        for (x, y) in &self.values {
            let xi = source.index(x).map_err(|_| semantic(format!("monotone_map: unknown source element {x:?}")))?;
            let yi = self.target.index(y).map_err(|_| semantic(format!("monotone_map: unknown target element {y:?}")))?;
            if values[xi].replace(yi).is_some() {
                return Err(semantic(format!("monotone_map: {x:?} is assigned twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(x, v)| v.ok_or_else(|| semantic(format!("monotone_map: no value for {:?}", source.name(x)))))
            .collect::<Result<Vec<_>, _>>()?;
        MonotoneMap::new(source.clone(), self.target.clone(), values).map_err(|e| semantic(format!("monotone_map: {e}")))
    }
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub field: Field,
    pub poset: Option<Arc<Poset>>,
    pub sheaf: Option<Arc<Sheaf>>,
    pub filtration: Option<Filtration>,
    pub second: Option<(Arc<Sheaf>, SheafMap)>,
    pub monotone_map: Option<PendingMap>,
}

pub fn parse_field(text: &str) -> Result<Field, InputError> {
    match text {
        "Q" => Ok(Field::Rationals),
        _ => {
            let p = text
                .strip_prefix('F')
                .and_then(|p| p.parse::<u32>().ok())
                .ok_or_else(|| semantic(format!("field {text:?} is neither \"Q\" nor \"F<p>\"")))?;
            Field::prime(p).map_err(|e| semantic(format!("field: {e}")))
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) if n.is_i64() => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn parse_matrix(field: Field, raw: &RawMatrix, rows: usize, cols: usize, what: &str) -> Result<Matrix, InputError> {
    if raw.len() != rows {
        return Err(semantic(format!("{what}: expected {rows} rows, found {}", raw.len())));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            return Err(semantic(format!("{what}: row {i} has {} entries, expected {cols}", row.len())));
        }
        for v in row {
            let text = scalar_text(v).ok_or_else(|| semantic(format!("{what}: entry {v} is not a field element")))?;
            if matches!(field, Field::Prime(_)) && !v.is_number() {
                return Err(semantic(format!("{what}: entries over {field} are integers, found {v}")));
            }
            values.push(field.parse_scalar(&text).map_err(|e| semantic(format!("{what}: {e}")))?);
        }
    }
    Ok(Matrix::from_scalars(field, rows, cols, &values))
}

fn matrix_json(m: &Matrix) -> RawMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|s| match s {
                    Scalar::Modular(v) => Value::from(v),
                    q @ Scalar::Rational(_) => Value::String(q.to_string()),
                })
                .collect()
        })
        .collect()
}

fn parse_complex(field: Field, lo: Degree, dims: &[usize], diffs: &[RawMatrix], what: &str) -> Result<CochainComplex, InputError> {
    if diffs.len() != dims.len().saturating_sub(1) {
        return Err(semantic(format!("{what}: {} degrees need {} differentials, found {}", dims.len(), dims.len().saturating_sub(1), diffs.len())));
    }
    let ms = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| parse_matrix(field, d, dims[k + 1], dims[k], &format!("{what}, d^{}", lo + k as Degree)))
        .collect::<Result<Vec<_>, _>>()?;
    for k in 1..ms.len() {
        if !ms[k].mul(&ms[k - 1]).is_zero() {
            return Err(semantic(format!("{what}: d∘d ≠ 0 in degree {}", lo + k as Degree - 1)));
        }
    }
    CochainComplex::new(field, lo, dims.to_vec(), ms).map_err(|e| semantic(format!("{what}: {e}")))
}

fn complex_parts(c: &CochainComplex) -> (Degree, Vec<usize>, Vec<RawMatrix>) {
    if c.is_empty_range() {
        return (c.lo(), Vec::new(), Vec::new());
    }
    let dims = c.degrees().map(|n| c.dim(n)).collect();
    let diffs = (c.lo()..c.hi()).map(|n| matrix_json(&c.diff(n))).collect();
    (c.lo(), dims, diffs)
}

fn parse_map(
    field: Field,
    source: &Arc<CochainComplex>,
    target: &Arc<CochainComplex>,
    lo: Degree,
    comps: &[RawMatrix],
    what: &str,
) -> Result<ChainMap, InputError> {
    let ms = comps
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let n = lo + k as Degree;
            parse_matrix(field, m, target.dim(n), source.dim(n), &format!("{what}, degree {n}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChainMap::new(source.clone(), target.clone(), lo, ms).map_err(|e| semantic(format!("{what}: {e}")))
}

/// Components over the degrees where source or target is nonzero.
fn map_parts(m: &ChainMap) -> (Degree, Vec<RawMatrix>) {
    let (s, t) = (m.source(), m.target());
    let live: Vec<Degree> = s.degrees().chain(t.degrees()).filter(|&n| s.dim(n) > 0 || t.dim(n) > 0).collect();
    match (live.iter().min(), live.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, (lo..=hi).map(|n| matrix_json(&m.component(n))).collect()),
        _ => (0, Vec::new()),
    }
}

fn parse_poset(raw: &RawPoset, what: &str) -> Result<Poset, InputError> {
    let index: BTreeMap<&str, usize> = raw.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != raw.elements.len() {
        return Err(semantic(format!("{what}: element names repeat")));
    }
    let look = |s: &String| index.get(s.as_str()).copied().ok_or_else(|| semantic(format!("{what}: unknown element {s:?}")));
    let covers = raw.covers.iter().map(|[a, b]| Ok((look(a)?, look(b)?))).collect::<Result<Vec<_>, InputError>>()?;
    let p = Poset::from_covers(raw.elements.clone(), &covers).map_err(|e| semantic(format!("{what}: {e}")))?;
    let actual = p.covers();
    if let Some(&(x, y)) = covers.iter().find(|c| !actual.contains(c)) {
        return Err(semantic(format!("{what}: {} < {} is not a covering relation", p.name(x), p.name(y))));
    }
    Ok(p)
}

fn poset_json(p: &Poset) -> RawPoset {
    RawPoset {
        elements: p.names().to_vec(),
        covers: p.covers().into_iter().map(|(x, y)| [p.name(x).to_string(), p.name(y).to_string()]).collect(),
    }
}

fn parse_sheaf(field: Field, poset: &Arc<Poset>, raw: &RawSheaf, what: &str) -> Result<Sheaf, InputError> {
    let mut stalks: Vec<Option<Arc<CochainComplex>>> = vec![None; poset.len()];
    for s in &raw.stalks {
        let x = poset.index(&s.at).map_err(|_| semantic(format!("{what}: stalk at unknown element {:?}", s.at)))?;
        let c = parse_complex(field, s.lo, &s.dims, &s.differentials, &format!("{what}, stalk at {}", s.at))?;
        if stalks[x].replace(Arc::new(c)).is_some() {
            return Err(semantic(format!("{what}: two stalks at {}", s.at)));
        }
    }
    let stalks: Vec<Arc<CochainComplex>> = stalks
        .into_iter()
        .enumerate()
        .map(|(x, s)| s.ok_or_else(|| semantic(format!("{what}: no stalk at {}", poset.name(x)))))
        .collect::<Result<_, _>>()?;
    let mut covers = BTreeMap::new();
    for r in &raw.restrictions {
        let x = poset.index(&r.from).map_err(|_| semantic(format!("{what}: restriction from unknown element {:?}", r.from)))?;
        let y = poset.index(&r.to).map_err(|_| semantic(format!("{what}: restriction to unknown element {:?}", r.to)))?;
        let m = parse_map(field, &stalks[x], &stalks[y], r.lo, &r.components, &format!("{what}, restriction {} → {}", r.from, r.to))?;
        if covers.insert((x, y), m).is_some() {
            return Err(semantic(format!("{what}: two restrictions {} → {}", r.from, r.to)));
        }
    }
    Sheaf::from_covers(poset.clone(), stalks, covers).map_err(|e| semantic(format!("{what}: {e}")))
}

fn sheaf_json(f: &Sheaf) -> RawSheaf {
    let p = f.poset();
    let stalks = p
        .elements()
        .map(|x| {
            let (lo, dims, differentials) = complex_parts(f.stalk(x));
            RawStalk { at: p.name(x).to_string(), lo, dims, differentials }
        })
        .collect();
    let restrictions = p
        .covers()
        .into_iter()
        .map(|(x, y)| {
            let (lo, components) = map_parts(&f.restriction(x, y));
            RawRestriction { from: p.name(x).to_string(), to: p.name(y).to_string(), lo, components }
        })
        .collect();
    RawSheaf { stalks, restrictions }
}

fn parse_filtration(field: Field, raw: &RawFiltration) -> Result<Filtration, InputError> {
    let c = &raw.complex;
    let complex = Arc::new(parse_complex(field, c.lo, &c.dims, &c.differentials, "filtration complex")?);
    if raw.weights.len() != c.dims.len() {
        return Err(semantic(format!("filtration: {} weight lists for {} degrees", raw.weights.len(), c.dims.len())));
    }
    let lo = c.lo;
    let filtered = FilteredComplex::from_weights(complex.clone(), |n| raw.weights[(n - lo) as usize].clone())
        .map_err(|e| semantic(format!("filtration: {e}")))?;
    Ok(Filtration { complex, weights: raw.weights.clone(), filtered })
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, InputError> {
        let raw: RawFile = serde_json::from_str(text)
            .map_err(|e| {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
                InputError::Parse { line: e.line(), column: e.column(), message }
            })?;
        Problem::from_raw(&raw)
    }

    pub fn load(path: &str) -> Result<Problem, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io { path: path.to_string(), message: e.to_string() })?;
        Problem::parse(&text)
    }

    pub fn from_raw(raw: &RawFile) -> Result<Problem, InputError> {
        if raw.format != FORMAT {
            return Err(semantic(format!("format is {:?}, expected {FORMAT:?}", raw.format)));
        }
        let field = parse_field(&raw.field)?;
        let poset = raw.poset.as_ref().map(|p| parse_poset(p, "poset")).transpose()?.map(Arc::new);
        let need_poset = |block: &str| poset.clone().ok_or_else(|| semantic(format!("{block} needs a poset block")));
        let sheaf = match &raw.sheaf {
            Some(s) => Some(Arc::new(parse_sheaf(field, &need_poset("sheaf")?, s, "sheaf")?)),
            None => None,
        };
        let second = match &raw.second {
            Some(sec) => {
                let f = sheaf.clone().ok_or_else(|| semantic("second needs a sheaf block"))?;
                let p = need_poset("second")?;
                let g = Arc::new(parse_sheaf(field, &p, &sec.sheaf, "second sheaf")?);
                let mut comps: Vec<Option<ChainMap>> = vec![None; p.len()];
                for c in &sec.map {
                    let x = p.index(&c.at).map_err(|_| semantic(format!("second map: unknown element {:?}", c.at)))?;
                    let m = parse_map(field, f.stalk(x), g.stalk(x), c.lo, &c.components, &format!("second map at {}", c.at))?;
                    if comps[x].replace(m).is_some() {
                        return Err(semantic(format!("second map: two components at {}", c.at)));
                    }
                }
                let comps = comps
                    .into_iter()
                    .enumerate()
                    .map(|(x, m)| m.ok_or_else(|| semantic(format!("second map: no component at {}", p.name(x)))))
                    .collect::<Result<Vec<_>, _>>()?;
                let map = SheafMap::new(f, g.clone(), comps).map_err(|e| semantic(format!("second map: {e}")))?;
                Some((g, map))
            }
            None => None,
        };
        let filtration = raw.filtration.as_ref().map(|f| parse_filtration(field, f)).transpose()?;
        let monotone_map = match &raw.monotone_map {
            Some(m) => Some(PendingMap {
                target: Arc::new(parse_poset(&m.target, "monotone_map target")?),
                values: m.values.iter().map(|[a, b]| (a.clone(), b.clone())).collect(),
            }),
            None => None,
        };
        if let (Some(p), Some(m)) = (&poset, &monotone_map) {
            m.resolve(p)?;
        }
        Ok(Problem { field, poset, sheaf, filtration, second, monotone_map })
    }

    pub fn to_raw(&self) -> RawFile {
        let second = self.second.as_ref().map(|(g, m)| RawSecond {
            sheaf: sheaf_json(g),
            map: g
                .poset()
                .elements()
                .map(|x| {
                    let (lo, components) = map_parts(m.component(x));
                    RawComponent { at: g.poset().name(x).to_string(), lo, components }
                })
                .collect(),
        });
        let filtration = self.filtration.as_ref().map(|f| {
            let (lo, dims, differentials) = complex_parts(&f.complex);
            RawFiltration { complex: RawComplex { lo, dims, differentials }, weights: f.weights.clone() }
        });
        let monotone_map = self.monotone_map.as_ref().map(|m| {
            let mut values: Vec<[String; 2]> = m.values.iter().map(|(a, b)| [a.clone(), b.clone()]).collect();
            if let Some(p) = &self.poset {
                values.sort_by_key(|[a, _]| p.index(a).unwrap_or(usize::MAX));
            }
            RawMonotone { target: poset_json(&m.target), values }
        });
        RawFile {
            format: FORMAT.to_string(),
            field: self.field.to_string(),
            poset: self.poset.as_deref().map(poset_json),
            sheaf: self.sheaf.as_deref().map(sheaf_json),
            filtration,
            second,
            monotone_map,
        }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("problem files serialize");
        s.push('\n');
        s
    }

    /// A file holding one sheaf.
    pub fn of_sheaf(f: Arc<Sheaf>) -> Problem {
        Problem { field: f.field(), poset: Some(f.poset().clone()), sheaf: Some(f), filtration: None, second: None, monotone_map: None }
    }

    pub fn require_sheaf(&self) -> Result<&Arc<Sheaf>, InputError> {
        self.sheaf.as_ref().ok_or_else(|| semantic("this command needs a sheaf block"))
    }
}
