//! Scenario files: the known terms of a Mayer–Vietoris sequence with named
//! bases, the induced maps between them, Bockstein data, an optional integral
//! version, and an optional wedge decomposition applied to the answer.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bockstein::{beta_squared_zero, bockstein_check, integral_from_bockstein, BocksteinData};
use super::f2::{GradedF2Space, NamedMap};
use super::graded::{assemble_decomposition, suspension_shift, GradedGroup};
use super::mv::{alternating_sum, solve_piece_f2, solve_union_f2, solve_union_z, ExtensionStep, F2Solution, IntegralUnion};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Unknown {
    /// H*(U ∪ V) from U, V and U ∩ V.
    #[default]
    #[serde(rename = "union")]
    Union,
    /// H*(U) from the union X, the other piece V and U ∩ V.
    #[serde(rename = "U")]
    Piece,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Mv,
    Bockstein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralMap {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub matrices: BTreeMap<usize, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub route: Route,
    #[serde(default)]
    pub spaces: BTreeMap<String, Vec<Vec<u64>>>,
    #[serde(default)]
    pub maps: BTreeMap<String, IntegralMap>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Summand {
    Sphere { sphere: usize },
    Suspension { suspend: usize, of: GradedGroup },
}

impl Summand {
    pub fn reduced(&self) -> GradedGroup {
        match self {
            Summand::Sphere { sphere } => GradedGroup::sphere_reduced(*sphere),
            Summand::Suspension { suspend, of } => suspension_shift(of, *suspend),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub wedge: Vec<Summand>,
    pub copies: usize,
    pub range: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub unknown: Unknown,
    #[serde(default)]
    pub spaces: BTreeMap<String, GradedF2Space>,
    #[serde(default)]
    pub maps: BTreeMap<String, NamedMap>,
    #[serde(default)]
    pub bockstein: BTreeMap<String, BocksteinData>,
    #[serde(default)]
    pub result_bockstein: BocksteinData,
    #[serde(default)]
    pub unknown_labels: Option<GradedF2Space>,
    #[serde(default)]
    pub integral: Option<IntegralSpec>,
    #[serde(default)]
    pub core: Option<String>,
    #[serde(default)]
    pub decomposition: Option<Decomposition>,
    /// Final integral table.
    #[serde(default)]
    pub expected: Option<GradedGroup>,
    /// F₂ dimensions of the solved sequence's unknown term.
    #[serde(default)]
    pub expected_f2: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub exactness: Option<bool>,
    pub beta_squared: Option<bool>,
    pub bockstein: Option<bool>,
    pub uct: Option<bool>,
    pub expected_match: Option<bool>,
    pub expected_f2_match: Option<bool>,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        [self.exactness, self.beta_squared, self.bockstein, self.uct, self.expected_match, self.expected_f2_match]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub solved: Option<GradedGroup>,
    pub table: Vec<String>,
    pub f2: Option<F2Solution>,
    pub core: Option<GradedGroup>,
    pub extensions: Vec<ExtensionStep>,
    pub checks: Checks,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.all_pass()
    }
}

const BUNDLED: &[(&str, &str)] = &[
    ("commuting_pairs", include_str!("../../scenarios/commuting_pairs.json")),
    ("atiyah_A", include_str!("../../scenarios/atiyah_A.json")),
    ("atiyah_bar_A", include_str!("../../scenarios/atiyah_bar_A.json")),
    ("nine_manifold_check_M", include_str!("../../scenarios/nine_manifold_check_M.json")),
    ("nine_manifold_M", include_str!("../../scenarios/nine_manifold_M.json")),
    ("line_bundle_E", include_str!("../../scenarios/line_bundle_E.json")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn parse(text: &str) -> Result<Scenario> {
    serde_json::from_str(text)
        .map_err(|e| Error::Malformed(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn bundled(name: &str) -> Result<Scenario> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == key)
        .ok_or_else(|| Error::Malformed(format!("no bundled scenario named {name:?}")))?;
    parse(text)
}

/// A file path if one exists, otherwise a bundled scenario name.
pub fn load(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{spec}: {e}")))?;
        return parse(&text).map_err(|e| match e {
            Error::Malformed(m) => Error::Malformed(format!("{spec}: {m}")),
            other => other,
        });
    }
    let file_name = path.file_name().and_then(|s| s.to_str()).unwrap_or(spec);
    bundled(file_name).map_err(|_| Error::Malformed(format!("{spec}: no such file or bundled scenario")))
}

impl Scenario {
    fn space(&self, role: &str) -> Result<&GradedF2Space> {
        self.spaces
            .get(role)
            .ok_or_else(|| Error::InconsistentScenario(format!("scenario {} lacks space {role}", self.name)))
    }

    fn map_between(&self, from: &str, to: &str) -> Result<&NamedMap> {
        let mut found = self.maps.values().filter(|m| m.from == from && m.to == to);
        match (found.next(), found.next()) {
            (Some(m), None) => Ok(m),
            (None, _) => Err(Error::InconsistentScenario(format!("no map {from} → {to}"))),
            _ => Err(Error::InconsistentScenario(format!("several maps {from} → {to}"))),
        }
    }

    fn integral_map(&self, spec: &IntegralSpec, from: &str, to: &str) -> Result<BTreeMap<usize, Vec<Vec<i64>>>> {
        spec.maps
            .values()
            .find(|m| m.from == from && m.to == to)
            .map(|m| m.matrices.clone())
            .ok_or_else(|| Error::InconsistentScenario(format!("no integral map {from} → {to}")))
    }

    fn integral_space<'a>(&self, spec: &'a IntegralSpec, role: &str) -> Result<&'a [Vec<u64>]> {
        spec.spaces
            .get(role)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InconsistentScenario(format!("no integral space {role}")))
    }
}

fn dims_equal(a: &[usize], b: &[usize]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|q| a.get(q).copied().unwrap_or(0) == b.get(q).copied().unwrap_or(0))
}

fn and(slot: &mut Option<bool>, x: bool) {
    *slot = Some(slot.unwrap_or(true) && x);
}

fn solve_sequence(sc: &Scenario, checks: &mut Checks) -> Result<(F2Solution, Option<GradedGroup>, Vec<ExtensionStep>)> {
    for sp in sc.spaces.values() {
        sp.validate()?;
    }
    for (role, data) in &sc.bockstein {
        let sp = sc.space(role)?;
        and(&mut checks.beta_squared, beta_squared_zero(sp, data)?);
        if let Some(groups) = sc.integral.as_ref().and_then(|i| i.spaces.get(role)) {
            and(&mut checks.bockstein, bockstein_check(sp, data, &GradedGroup::new(groups.clone()))?);
        }
    }
    if let Some(spec) = &sc.integral {
        for (role, groups) in &spec.spaces {
            let g = GradedGroup::new(groups.clone());
            and(&mut checks.uct, dims_equal(&g.f2_dims(), &sc.space(role)?.dims()));
        }
    }
    let sol = match sc.unknown {
        Unknown::Union => {
            let (u, v, b) = (sc.space("U")?, sc.space("V")?, sc.space("B")?);
            solve_union_f2(u, v, b, sc.map_between("U", "B")?, sc.map_between("V", "B")?)?
        }
        Unknown::Piece => {
            let (x, v, b) = (sc.space("X")?, sc.space("V")?, sc.space("B")?);
            let labels = sc.unknown_labels.as_ref();
            if let Some(l) = labels {
                l.validate()?;
            }
            for m in sc.maps.values() {
                if let Some(src) = sc.spaces.get(&m.from) {
                    m.validate(src)?;
                }
            }
            solve_piece_f2(x, v, b, sc.map_between("B", "X")?, labels)?
        }
    };
    and(&mut checks.exactness, alternating_sum(&sol.sequence) == 0);
    let result_space = sol.space();
    and(&mut checks.beta_squared, beta_squared_zero(&result_space, &sc.result_bockstein)?);

    let Some(spec) = &sc.integral else { return Ok((sol, None, Vec::new())) };
    let (group, steps) = match spec.route {
        Route::Bockstein => (integral_from_bockstein(&result_space, &sc.result_bockstein)?, Vec::new()),
        Route::Mv => {
            if sc.unknown != Unknown::Union {
                return Err(Error::InconsistentScenario("the integral MV route solves for the union".into()));
            }
            let (u, v, b) = (sc.integral_space(spec, "U")?, sc.integral_space(spec, "V")?, sc.integral_space(spec, "B")?);
            let j = sc.integral_map(spec, "U", "B")?;
            let jp = sc.integral_map(spec, "V", "B")?;
            let data = IntegralUnion { u, v, b, j: &j, jp: &jp };
            let (g, steps) = solve_union_z(&data, Some(&sol.dims))?;
            let rank = |s: &[Vec<u64>], q: usize| s.get(q).map_or(0, |d| d.iter().filter(|&&o| o == 0).count());
            let top = g.len().max(b.len());
            let ranks: Vec<usize> =
                (0..top).flat_map(|q| [g.rank(q), rank(u, q) + rank(v, q), rank(b, q)]).collect();
            and(&mut checks.exactness, alternating_sum(&ranks) == 0);
            (g, steps)
        }
    };
    and(&mut checks.uct, dims_equal(&group.f2_dims(), &sol.dims));
    and(&mut checks.bockstein, bockstein_check(&result_space, &sc.result_bockstein, &group)?);
    Ok((sol, Some(group), steps))
}

pub fn solve(sc: &Scenario) -> Result<ScenarioReport> {
    let mut checks = Checks::default();
    let (f2, core, extensions) = match &sc.core {
        Some(name) => {
            if !sc.spaces.is_empty() {
                return Err(Error::InconsistentScenario("a scenario either names a core or lists spaces".into()));
            }
            let inner = solve(&bundled(name)?)?;
            and(&mut checks.exactness, inner.checks.exactness.unwrap_or(true));
            (None, inner.solved, Vec::new())
        }
        None => {
            let (sol, g, steps) = solve_sequence(sc, &mut checks)?;
            (Some(sol), g, steps)
        }
    };
    let solved = match (&sc.decomposition, &core) {
        (Some(d), Some(c)) => {
            let summands: Vec<GradedGroup> =
                d.wedge.iter().map(Summand::reduced).flat_map(|g| std::iter::repeat_n(g, d.copies)).collect();
            Some(assemble_decomposition(c, &summands, d.range))
        }
        (Some(_), None) => return Err(Error::InconsistentScenario("decomposition needs an integral core".into())),
        (None, c) => c.clone(),
    };
    if let (Some(e), Some(s)) = (&sc.expected, &solved) {
        checks.expected_match = Some(e == s);
    }
    if let (Some(e), Some(s)) = (&sc.expected_f2, &f2) {
        checks.expected_f2_match = Some(dims_equal(e, &s.dims));
    }
    let table = solved.as_ref().map_or_else(Vec::new, |g| (0..g.trimmed().len()).map(|q| g.label(q)).collect());
    Ok(ScenarioReport {
        scenario: sc.name.clone(),
        core: if sc.decomposition.is_some() { core } else { None },
        solved,
        table,
        f2,
        extensions,
        checks,
    })
}

pub fn solve_bundled(name: &str) -> Result<ScenarioReport> {
    solve(&bundled(name)?)
}
