//! Built-in Klein-four twist data for eight three-generator cubic algebras,
//! written in the diagonal generators `w1 = x1 + x2`, `w2 = x1 - x2`, `w3 = x3`.

use crate::action::{validate_action, GGrading, GradedAction};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::freealg::{change_basis, eval_poly, GeneratorInfo, NcPoly, Presentation};
use crate::grp::{AbGroup, Cocycle, Duality};
use crate::linalg::Matrix;
use crate::twist::TwistSpec;

pub const CONDUCTOR: u32 = 4;

const QUADRATICS: [&str; 2] = ["w1^2 - w2^2", "w3*w1 - w1*w3"];
const CUBIC_ABCD: &str = "w3^2*w2 - w2*w3^2";
const CUBIC_EG: &str = "w3^2*w2 + w2*w3^2";

/// Names of the algebra presets, in catalog order.
pub const ALGEBRAS: [&str; 8] = [
    "A(1,-1)",
    "B(1)",
    "C(1)",
    "D(1,1)",
    "E(1,i)",
    "E(1,-i)",
    "G(1,(1+i)/2)",
    "G(1,(1-i)/2)",
];

/// Source/target pairs related by the Klein-four twist.
pub const TWIST_PAIRS: [(&str, &str); 4] = [
    ("A(1,-1)", "D(1,1)"),
    ("B(1)", "C(1)"),
    ("E(1,i)", "E(1,-i)"),
    ("G(1,(1+i)/2)", "G(1,(1-i)/2)"),
];

/// A presentation together with the Klein-four twist data.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    /// Canonical (monic) relations.
    pub presentation: Presentation,
    /// Relations with the signs and scalings of their printed form.
    pub displayed: Vec<NcPoly>,
    pub action: GradedAction,
    pub grading: GGrading,
    pub duality: Duality,
    pub cocycle: Cocycle,
    pub target: String,
    /// `twist(displayed_k) = scalar_k * target.displayed_k`.
    pub expected_scalars: Vec<CycNum>,
}

impl Preset {
    pub fn spec(&self) -> Result<TwistSpec> {
        TwistSpec::new(self.grading.clone(), self.duality.clone(), self.cocycle.clone())
    }
}

fn fourth_relation(name: &str) -> Option<(&'static str, &'static str, &'static str, [i64; 4])> {
    // (cubic block, fourth relation, target, expected scalars)
    Some(match name {
        "A(1,-1)" => (
            CUBIC_ABCD,
            "w3*w1*w2 + w3*w2*w1 - w1*w2*w3 - w2*w1*w3",
            "D(1,1)",
            [1, 1, 1, -1],
        ),
        "D(1,1)" => (
            CUBIC_ABCD,
            "w3*w1*w2 + w3*w2*w1 + w1*w2*w3 + w2*w1*w3",
            "A(1,-1)",
            [1, 1, 1, -1],
        ),
        "B(1)" => (
            CUBIC_ABCD,
            "w3*w2*w1 - w3*w1*w2 + w2*w1*w3 - w1*w2*w3",
            "C(1)",
            [1, 1, 1, 1],
        ),
        "C(1)" => (
            CUBIC_ABCD,
            "w3*w1*w2 - w3*w2*w1 - w1*w2*w3 + w2*w1*w3",
            "B(1)",
            [1, 1, 1, 1],
        ),
        "E(1,i)" => (
            CUBIC_EG,
            "w3*w2*w1 - w1*w3*w2 + i*w1*w2*w3 - i*w2*w1*w3",
            "E(1,-i)",
            [1, 1, 1, -1],
        ),
        "E(1,-i)" => (
            CUBIC_EG,
            "w3*w2*w1 - w1*w3*w2 - i*w1*w2*w3 + i*w2*w1*w3",
            "E(1,i)",
            [1, 1, 1, -1],
        ),
        // the coefficient of the last two words is 2*gamma - 1
        "G(1,(1+i)/2)" => (
            CUBIC_EG,
            "w3*w1*w2 + w3*w2*w1 + i*w1*w2*w3 + i*w2*w1*w3",
            "G(1,(1-i)/2)",
            [1, 1, 1, -1],
        ),
        "G(1,(1-i)/2)" => (
            CUBIC_EG,
            "w3*w1*w2 + w3*w2*w1 - i*w1*w2*w3 - i*w2*w1*w3",
            "G(1,(1+i)/2)",
            [1, 1, 1, -1],
        ),
        _ => return None,
    })
}

fn w_generators() -> Vec<GeneratorInfo> {
    ["w1", "w2", "w3"].iter().map(|n| GeneratorInfo::new(*n, 1)).collect()
}

fn parse_w(s: &str) -> Result<NcPoly> {
    let e = crate::expr::parse(s)?;
    eval_poly(&e, CONDUCTOR, &|n| ["w1", "w2", "w3"].iter().position(|g| *g == n))
}

fn ints(rows: &[[i64; 3]; 3]) -> Matrix {
    Matrix::from_rows(
        CONDUCTOR,
        rows.iter()
            .map(|r| r.iter().map(|&v| CycNum::from_int(CONDUCTOR, v)).collect())
            .collect(),
    )
    .expect("3x3")
}

/// `w_j` in terms of `x_i`: row `j` holds the coordinates.
pub fn w_basis_matrix() -> Matrix {
    ints(&[[1, 1, 0], [1, -1, 0], [0, 0, 1]])
}

/// Swap `x1 <-> x2` for `g1` and negate `x3` for `g2`, on the `x` generators.
pub fn klein_action_x() -> Vec<Matrix> {
    vec![
        ints(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        ints(&[[1, 0, 0], [0, 1, 0], [0, 0, -1]]),
    ]
}

/// The same action on the `w` generators, where it is diagonal.
pub fn klein_action_w() -> Vec<Matrix> {
    vec![
        ints(&[[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
        ints(&[[1, 0, 0], [0, 1, 0], [0, 0, -1]]),
    ]
}

pub fn klein_group() -> AbGroup {
    AbGroup::klein()
}

/// `mu(g1^p g2^q, g1^r g2^s) = (-1)^(p s)`.
pub fn klein_mu() -> Cocycle {
    Cocycle::klein(CONDUCTOR)
}

pub fn klein_duality() -> Duality {
    Duality::klein(CONDUCTOR)
}

pub fn preset(name: &str) -> Result<Preset> {
    let (cubic, fourth, target, scalars) =
        fourth_relation(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    let displayed: Vec<NcPoly> = QUADRATICS
        .iter()
        .chain([cubic, fourth].iter())
        .map(|s| parse_w(s))
        .collect::<Result<_>>()?;
    let presentation = Presentation::new(CONDUCTOR, w_generators(), displayed.clone())?;
    let group = klein_group();
    let action = validate_action(&presentation, &group, klein_action_w())?;
    let grading = GGrading::new(
        presentation.clone(),
        group.clone(),
        vec![group.identity(), group.gen(1), group.gen(0)],
    )?;
    Ok(Preset {
        name: name.to_string(),
        presentation,
        displayed,
        action,
        grading,
        duality: klein_duality(),
        cocycle: klein_mu(),
        target: target.to_string(),
        expected_scalars: scalars.iter().map(|&s| CycNum::from_int(CONDUCTOR, s)).collect(),
    })
}

/// A preset rewritten in the generators `x1, x2, x3`.
pub fn preset_in_x_basis(name: &str) -> Result<Presentation> {
    let p = preset(name)?;
    let b = w_basis_matrix();
    let rels = p
        .presentation
        .relations()
        .iter()
        .map(|r| change_basis(r, &b, &[1, 1, 1]))
        .collect::<Result<Vec<_>>>()?;
    let gens = ["x1", "x2", "x3"].iter().map(|n| GeneratorInfo::new(*n, 1)).collect();
    Presentation::new(CONDUCTOR, gens, rels)
}

/// Every preset name accepted by [`preset`] and the non-algebra entries.
pub fn catalog() -> Vec<&'static str> {
    let mut v: Vec<&str> = ALGEBRAS.to_vec();
    v.extend(["A(1,-1)-x", "klein-mu", "klein-action", "klein-duality"]);
    v
}
