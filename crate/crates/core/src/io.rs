//! JSON input schema and deterministic JSON output.
//!
//! Objects are emitted through `serde_json::Value`, whose maps keep keys
//! sorted, and scalars are printed in the canonical grammar.

use serde_json::{json, Map, Value};

use crate::action::{isotypic_basis, regrade_presentation, validate_action, GGrading, HomogBasis};
use crate::cyclo::{lcm, CycNum};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::freealg::{eval_poly, GenMap, GeneratorInfo, NcPoly, Presentation};
use crate::gbasis::{HilbertPrefix, TruncGB};
use crate::grp::{AbGroup, Cocycle, Duality, GroupElem};
use crate::linalg::Matrix;
use crate::presets;
use crate::twist::TwistSpec;

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| input(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| input(format!("{what} must be an array")))
}

/// A scalar given as a string in the expression grammar or as a JSON integer.
fn scalar_expr(v: &Value) -> Result<Expr> {
    match v {
        Value::String(s) => expr::parse(s),
        Value::Number(n) => expr::parse(&n.to_string()),
        _ => Err(input("scalar must be a string or an integer")),
    }
}

fn matrix_exprs(v: &Value, what: &str) -> Result<Vec<Vec<Expr>>> {
    as_array(v, what)?
        .iter()
        .map(|row| as_array(row, what)?.iter().map(scalar_expr).collect())
        .collect()
}

fn eval_matrix(rows: &[Vec<Expr>], conductor: u32) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| e.eval_scalar(conductor, &|_| None))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(conductor, 0, 0));
    }
    Matrix::from_rows(conductor, rows)
}

fn exprs_conductor<'a>(es: impl IntoIterator<Item = &'a Expr>) -> u32 {
    es.into_iter().fold(1, |acc, e| lcm(acc, e.required_conductor()))
}

fn parse_generators(v: &Value) -> Result<Vec<GeneratorInfo>> {
    as_array(v, "generators")?
        .iter()
        .map(|g| match g {
            Value::String(s) => Ok(GeneratorInfo::new(s.clone(), 1)),
            Value::Object(_) => {
                let name = as_str(
                    field(g, "name").ok_or_else(|| input("generator without a name"))?,
                    "name",
                )?;
                let degree = match field(g, "degree") {
                    None => 1,
                    Some(d) => d
                        .as_u64()
                        .and_then(|d| u32::try_from(d).ok())
                        .ok_or_else(|| input(format!("degree of `{name}` must be a positive integer")))?,
                };
                Ok(GeneratorInfo::new(name, degree))
            }
            _ => Err(input("generator must be a name or an object")),
        })
        .collect()
}

/// Parsed but not yet evaluated presentation data.
struct RawPresentation {
    generators: Vec<GeneratorInfo>,
    relations: Vec<Expr>,
    conductor: Option<u32>,
}

fn raw_presentation(v: &Value) -> Result<RawPresentation> {
    let generators = parse_generators(field(v, "generators").ok_or_else(|| input("missing `generators`"))?)?;
    let relations = match field(v, "relations") {
        None => Vec::new(),
        Some(r) => as_array(r, "relations")?
            .iter()
            .map(|s| expr::parse(as_str(s, "relation")?))
            .collect::<Result<_>>()?,
    };
    let conductor = match field(v, "conductor") {
        None => None,
        Some(c) => Some(
            c.as_u64()
                .and_then(|c| u32::try_from(c).ok())
                .filter(|&c| c > 0)
                .ok_or_else(|| input("conductor must be a positive integer"))?,
        ),
    };
    Ok(RawPresentation {
        generators,
        relations,
        conductor,
    })
}

impl RawPresentation {
    fn build(&self, conductor: u32) -> Result<Presentation> {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let rels = self
            .relations
            .iter()
            .map(|e| eval_poly(e, conductor, &|n| names.iter().position(|g| g == n)))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(conductor, self.generators.clone(), rels)
    }
}

fn resolve_conductor(declared: Option<u32>, cli: Option<u32>, needed: u32) -> Result<u32> {
    let base = cli.or(declared);
    match base {
        Some(c) if c % needed != 0 => Err(Error::NotDivisible { from: needed, to: c }),
        Some(c) => Ok(c),
        None => Ok(needed),
    }
}

/// Reads `{conductor?, generators, relations}` or `{preset: name}`.
pub fn parse_presentation(v: &Value, conductor: Option<u32>) -> Result<Presentation> {
    if let Some(name) = field(v, "preset") {
        let name = as_str(name, "preset")?;
        let p = if name == "A(1,-1)-x" {
            presets::preset_in_x_basis("A(1,-1)")?
        } else {
            presets::preset(name)?.presentation
        };
        return match conductor {
            Some(c) if c != p.conductor() => p.embed(c),
            _ => Ok(p),
        };
    }
    let raw = raw_presentation(v)?;
    let need = exprs_conductor(&raw.relations);
    raw.build(resolve_conductor(raw.conductor, conductor, need)?)
}

/// `[2, 2]` or `"2,2"`.
pub fn parse_group(v: &Value) -> Result<AbGroup> {
    let factors: Vec<u32> = match v {
        Value::String(s) => parse_group_str(s)?,
        Value::Array(a) => a
            .iter()
            .map(|f| {
                f.as_u64()
                    .and_then(|f| u32::try_from(f).ok())
                    .ok_or_else(|| input("group factors must be integers"))
            })
            .collect::<Result<_>>()?,
        _ => return Err(input("group must be an array of cyclic orders")),
    };
    AbGroup::new(factors)
}

pub fn parse_group_str(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| input(format!("bad group factor `{t}`")))
        })
        .collect()
}

/// Everything needed to twist: presentation, group data and a grading source.
pub struct SpecInput {
    pub presentation: Presentation,
    pub group: AbGroup,
    pub duality: Duality,
    pub cocycle: Cocycle,
    pub action: Option<Vec<Matrix>>,
    pub g_degrees: Option<Vec<GroupElem>>,
}

enum DualitySrc {
    Standard,
    Klein,
    Table(Vec<Vec<Expr>>),
}

enum CocycleSrc {
    Formula(Expr),
    Table(Vec<Vec<Expr>>),
}

/// Reads a full twist specification. A `preset` key supplies the Klein data
/// for a built-in algebra.
pub fn parse_spec(v: &Value, conductor: Option<u32>) -> Result<SpecInput> {
    if let Some(name) = field(v, "preset") {
        let name = as_str(name, "preset")?;
        if name == "A(1,-1)-x" {
            let p = presets::preset_in_x_basis("A(1,-1)")?;
            return Ok(SpecInput {
                presentation: p,
                group: presets::klein_group(),
                duality: presets::klein_duality(),
                cocycle: presets::klein_mu(),
                action: Some(presets::klein_action_x()),
                g_degrees: None,
            });
        }
        let p = presets::preset(name)?;
        return Ok(SpecInput {
            presentation: p.presentation,
            group: p.grading.group().clone(),
            duality: p.duality,
            cocycle: p.cocycle,
            action: None,
            g_degrees: Some(p.grading.g_degrees().to_vec()),
        });
    }
    let raw = raw_presentation(v)?;
    let group = parse_group(field(v, "group").ok_or_else(|| input("missing `group`"))?)?;
    let duality_src = match field(v, "duality") {
        None => DualitySrc::Standard,
        Some(Value::String(s)) if s == "standard" => DualitySrc::Standard,
        Some(Value::String(s)) if s == "klein" => DualitySrc::Klein,
        Some(t) => DualitySrc::Table(matrix_exprs(t, "duality")?),
    };
    let cocycle_src = match field(v, "cocycle") {
        None => return Err(input("missing `cocycle`")),
        Some(c) => {
            if let Some(f) = field(c, "formula") {
                CocycleSrc::Formula(expr::parse(as_str(f, "formula")?)?)
            } else if let Some(t) = field(c, "table") {
                CocycleSrc::Table(matrix_exprs(t, "cocycle table")?)
            } else {
                return Err(input("cocycle needs `formula` or `table`"));
            }
        }
    };
    let action_src = match field(v, "action") {
        None => None,
        Some(a) => {
            let mut mats: Vec<Option<Vec<Vec<Expr>>>> = vec![None; group.rank()];
            for entry in as_array(a, "action")? {
                let g = as_str(
                    field(entry, "generator").ok_or_else(|| input("action entry without `generator`"))?,
                    "generator",
                )?;
                let j = g
                    .strip_prefix('g')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1 && k <= group.rank())
                    .ok_or_else(|| input(format!("unknown group generator `{g}`")))?;
                let m = matrix_exprs(
                    field(entry, "matrix").ok_or_else(|| input("action entry without `matrix`"))?,
                    "matrix",
                )?;
                mats[j - 1] = Some(m);
            }
            let n = raw.generators.len();
            let ident = |k: usize| -> Vec<Vec<Expr>> {
                (0..k)
                    .map(|r| {
                        (0..k)
                            .map(|c| expr::parse(if r == c { "1" } else { "0" }).expect("literal"))
                            .collect()
                    })
                    .collect()
            };
            Some(
                mats.into_iter()
                    .map(|m| m.unwrap_or_else(|| ident(n)))
                    .collect::<Vec<_>>(),
            )
        }
    };
    let g_degrees = match field(v, "grading") {
        None => None,
        Some(gs) => Some(
            as_array(gs, "grading")?
                .iter()
                .map(|g| group.parse_element(as_str(g, "group element")?))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let mut need = exprs_conductor(&raw.relations);
    match &duality_src {
        DualitySrc::Standard => {
            for &f in group.factors() {
                need = lcm(need, f);
            }
        }
        DualitySrc::Klein => {}
        DualitySrc::Table(t) => need = lcm(need, exprs_conductor(t.iter().flatten())),
    }
    need = lcm(
        need,
        match &cocycle_src {
            CocycleSrc::Formula(e) => e.required_conductor(),
            CocycleSrc::Table(t) => exprs_conductor(t.iter().flatten()),
        },
    );
    if let Some(a) = &action_src {
        need = lcm(need, exprs_conductor(a.iter().flatten().flatten()));
    }
    let conductor = resolve_conductor(raw.conductor, conductor, need)?;
    let presentation = raw.build(conductor)?;
    let duality = match duality_src {
        DualitySrc::Standard => Duality::standard(&group, conductor)?,
        DualitySrc::Klein => {
            if group != AbGroup::klein() {
                return Err(Error::Duality("the `klein` pairing needs the group [2, 2]".into()));
            }
            Duality::klein(conductor)
        }
        DualitySrc::Table(t) => Duality::new(group.clone(), eval_matrix(&t, conductor)?.rows().to_vec())?,
    };
    let cocycle = match cocycle_src {
        CocycleSrc::Formula(e) => Cocycle::from_formula(&group, &e, conductor)?,
        CocycleSrc::Table(t) => {
            let m = eval_matrix(&t, conductor)?;
            Cocycle::new(group.clone(), m.rows().iter().flatten().cloned().collect())?
        }
    };
    let action = action_src
        .map(|a| a.iter().map(|m| eval_matrix(m, conductor)).collect::<Result<Vec<_>>>())
        .transpose()?;
    Ok(SpecInput {
        presentation,
        group,
        duality,
        cocycle,
        action,
        g_degrees,
    })
}

impl SpecInput {
    /// Validates the action (or the given grading) and assembles the twist data.
    pub fn twist_spec(&self) -> Result<(TwistSpec, Option<HomogBasis>)> {
        match (&self.action, &self.g_degrees) {
            (Some(mats), _) => {
                let act = validate_action(&self.presentation, &self.group, mats.clone())?;
                let basis = isotypic_basis(&self.presentation, &act, &self.duality)?;
                let grading = regrade_presentation(&self.presentation, &basis, &self.group)?;
                Ok((
                    TwistSpec::new(grading, self.duality.clone(), self.cocycle.clone())?,
                    Some(basis),
                ))
            }
            (None, Some(degs)) => {
                let grading = GGrading::new(self.presentation.clone(), self.group.clone(), degs.clone())?;
                Ok((
                    TwistSpec::new(grading, self.duality.clone(), self.cocycle.clone())?,
                    None,
                ))
            }
            (None, None) => Err(input("spec needs an `action` or a `grading`")),
        }
    }
}

/// `{images: [...]}` polynomials in the target alphabet, or `{matrix: rows}`.
pub fn parse_map(v: &Value, source: &Presentation, target: &Presentation) -> Result<(GenMap, Option<GenMap>)> {
    let conductor = target.conductor();
    let names = target.names();
    let read = |v: &Value, names: &[String], n: usize| -> Result<GenMap> {
        if let Some(imgs) = field(v, "images") {
            let imgs = as_array(imgs, "images")?
                .iter()
                .map(|s| {
                    let e = expr::parse(as_str(s, "image")?)?;
                    eval_poly(&e, conductor, &|x| names.iter().position(|g| g == x))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(GenMap::new(imgs))
        } else if let Some(m) = field(v, "matrix") {
            let m = eval_matrix(&matrix_exprs(m, "matrix")?, conductor)?;
            if m.nrows() != n {
                return Err(Error::DimensionMismatch(
                    "map matrix needs one row per generator".into(),
                ));
            }
            Ok(GenMap::from_matrix(&m))
        } else {
            Err(input("map needs `images` or `matrix`"))
        }
    };
    let forward = read(v, &names, source.num_generators())?;
    let inverse = match field(v, "inverse") {
        None => None,
        Some(inv) => Some(read(inv, &source.names(), target.num_generators())?),
    };
    Ok((forward, inverse))
}

pub fn scalar_json(c: &CycNum) -> Value {
    Value::String(c.to_string())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
            .collect(),
    )
}

pub fn poly_strings(ps: &[NcPoly], names: &[String]) -> Vec<String> {
    ps.iter().map(|p| p.display(names).to_string()).collect()
}

pub fn presentation_json(p: &Presentation) -> Value {
    json!({
        "conductor": p.conductor(),
        "generators": p.generators().iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
        "relations": poly_strings(p.relations(), &p.names()),
    })
}

pub fn grading_json(g: &GGrading) -> Value {
    let p = g.presentation();
    let group = g.group();
    let mut v = presentation_json(p);
    let gens = p
        .generators()
        .iter()
        .zip(g.g_degrees())
        .map(|(gi, d)| json!({"name": gi.name, "degree": gi.degree, "g_degree": group.display(d)}))
        .collect::<Vec<_>>();
    v["generators"] = Value::Array(gens);
    v["relation_g_degrees"] = Value::Array(
        p.relations()
            .iter()
            .map(|r| {
                g.g_degree_of(r)
                    .map_or(Value::Null, |d| Value::String(group.display(&d)))
            })
            .collect(),
    );
    v
}

pub fn cocycle_json(mu: &Cocycle) -> Value {
    let n = mu.group().order();
    Value::Array(
        (0..n)
            .map(|a| Value::Array((0..n).map(|b| scalar_json(mu.value_at(a, b))).collect()))
            .collect(),
    )
}

pub fn group_json(g: &AbGroup) -> Value {
    json!({
        "factors": g.factors(),
        "elements": g.elements().iter().map(|e| g.display(e)).collect::<Vec<_>>(),
    })
}

pub fn basis_json(b: &HomogBasis, old_names: &[String], group: &AbGroup) -> Value {
    let gens = b
        .names
        .iter()
        .zip(b.matrix.rows())
        .zip(&b.g_degree)
        .map(|((n, row), g)| {
            let terms = row
                .iter()
                .enumerate()
                .map(|(k, c)| (crate::freealg::Word::letter(k), c.clone()));
            let p = NcPoly::from_terms(terms);
            json!({"name": n, "in_original": p.display(old_names).to_string(), "g_degree": group.display(g)})
        })
        .collect::<Vec<_>>();
    json!({
        "generators": gens,
        "matrix": matrix_json(&b.matrix),
        "inverse": matrix_json(&b.inverse),
    })
}

pub fn hilbert_json(h: &HilbertPrefix) -> Value {
    json!(h.dims)
}

pub fn gb_json(gb: &TruncGB, names: &[String]) -> Value {
    json!({
        "bound": gb.bound(),
        "order": "deglex",
        "elements": poly_strings(gb.elements(), names),
        "hilbert": gb.hilbert().dims,
    })
}

/// Serializes with sorted keys; compact unless `pretty`.
pub fn render(v: &Value, pretty: bool) -> String {
    let sorted = sort_keys(v);
    if pretty {
        serde_json::to_string_pretty(&sorted).expect("serializable")
    } else {
        serde_json::to_string(&sorted).expect("serializable")
    }
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), sort_keys(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}
