//! Shipped data: the five systems, their charts, the chart Hamiltonians
//! printed alongside them, the Nagoya forms with their parameter maps, and
//! the generator tables for the affine Weyl group actions.
//!
//! Each system lives in its own TOML file under `catalog/`. The files are
//! compiled in; setting `QPAINLEVE_CATALOG_DIR` reads them from a directory
//! instead. Every expression is parsed, evaluated, printed and parsed again
//! at load time, and the load fails unless that is a fixed point.

mod file;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::coeff::{ParamPoly, ParamRat, Symbol};
use crate::expr::{eval, eval_scalar, parse, Env, Expr};
use crate::weyl::{Layout, Slot, Vars, WeylExpr};
use file::CatalogFile;

pub const CATALOG_DIR_ENV: &str = "QPAINLEVE_CATALOG_DIR";

const BUILTIN: [(Label, &str); 5] = [
    (Label::II, include_str!("../../catalog/II.toml")),
    (Label::III, include_str!("../../catalog/III.toml")),
    (Label::IV, include_str!("../../catalog/IV.toml")),
    (Label::V, include_str!("../../catalog/V.toml")),
    (Label::VI, include_str!("../../catalog/VI.toml")),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown system label `{0}`")]
    UnknownLabel(String),
    #[error("malformed catalog file {file}: {msg}")]
    Malformed { file: String, msg: String },
    #[error("{0}: no such entry")]
    Missing(String),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Label {
    II,
    III,
    IV,
    V,
    VI,
}

impl Label {
    pub const ALL: [Label; 5] = [Label::II, Label::III, Label::IV, Label::V, Label::VI];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::II => "II",
            Label::III => "III",
            Label::IV => "IV",
            Label::V => "V",
            Label::VI => "VI",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Label, CatalogError> {
        let upper = s.trim().to_ascii_uppercase();
        let bare = upper.trim_start_matches("P_").trim_start_matches('P');
        Label::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(bare))
            .ok_or_else(|| CatalogError::UnknownLabel(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct PainleveSystem {
    pub label: Label,
    pub vars: Vars,
    pub hamiltonian: WeylExpr,
    /// `g` in `g·d/dt`.
    pub time_weight: ParamPoly,
    pub params: Vec<Symbol>,
    /// Vanishes on admissible parameters.
    pub constraint: ParamPoly,
    /// The constraint solved for one parameter.
    pub normalization: (Symbol, ParamRat),
    /// The normalized parameter is shorthand for the others rather than a
    /// choice of time scale, so it is eliminated before characterization.
    pub normalize_before_solve: bool,
}

impl PainleveSystem {
    pub fn normalize_coeff(&self, c: &ParamRat) -> ParamRat {
        let (s, v) = &self.normalization;
        if !c.contains(*s) {
            return c.clone();
        }
        let bind = BTreeMap::from([(*s, v.clone())]);
        c.specialize(&bind)
            .expect("normalization value has no poles")
    }

    pub fn normalize(&self, e: &WeylExpr) -> WeylExpr {
        e.map_coeffs(|c| self.normalize_coeff(c))
    }

    /// Like [`Self::normalize`], for elements whose coefficients may have a
    /// pole on the constraint.
    pub fn try_normalize(&self, e: &WeylExpr) -> Result<WeylExpr, crate::coeff::CoeffError> {
        let (s, v) = &self.normalization;
        let bind = BTreeMap::from([(*s, v.clone())]);
        e.try_map_coeffs(|c| c.specialize(&bind))
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalChart {
    pub system: Label,
    pub index: usize,
    pub vars: Vars,
    /// Algebra of the chart variables.
    pub layout: Layout,
    /// `None` means the chart is attached to `(q, p)` directly.
    pub base: Option<usize>,
    pub base_vars: Vars,
    pub base_layout: Layout,
    /// Base generators written in chart variables.
    pub forward: [WeylExpr; 2],
    /// Chart generators written in base variables.
    pub backward: [WeylExpr; 2],
    /// The map exactly as printed, where that differs from `forward`.
    pub as_printed: Option<[WeylExpr; 2]>,
}

impl CanonicalChart {
    pub fn laurent_side(&self) -> Slot {
        self.layout.laurent.expect("charts are localized")
    }
}

#[derive(Clone, Debug)]
pub struct GoldenChartHamiltonian {
    pub system: Label,
    pub index: usize,
    pub source: String,
    /// In the chart variables, unnormalized.
    pub hamiltonian: WeylExpr,
}

#[derive(Clone, Debug)]
pub struct ParamMap {
    pub name: String,
    pub assign: BTreeMap<Symbol, ParamRat>,
}

#[derive(Clone, Debug)]
pub struct NagoyaSystem {
    pub label: Label,
    pub vars: Vars,
    /// Normal-ordered from the text as written. For VI this is the
    /// left-hand side `t(t-1)Ĥ`.
    pub hamiltonian: WeylExpr,
    pub source: String,
    pub prefactor: ParamPoly,
    pub alpha_constraint: ParamPoly,
    /// The constraint solved for one root variable.
    pub dependent: (Symbol, ParamRat),
    pub maps: Vec<ParamMap>,
}

impl NagoyaSystem {
    pub fn reduce_coeff(&self, c: &ParamRat) -> ParamRat {
        let (s, v) = &self.dependent;
        if !c.contains(*s) {
            return c.clone();
        }
        c.specialize(&BTreeMap::from([(*s, v.clone())]))
            .expect("polynomial value")
    }
}

/// Variables of a generator table expressed in ours (`table`), and ours in
/// the table's (`inverse`).
#[derive(Clone, Debug)]
pub struct Frame {
    pub table: [Expr; 2],
    pub inverse: [Expr; 2],
}

/// An affine canonical change `(q, p) -> (u, v)` under which the element
/// inverted by a generator becomes a multiple of `u` or `v`.
#[derive(Clone, Debug)]
pub struct Straightening {
    pub vars: Vars,
    /// `q, p` in terms of `u, v`.
    pub forward: [Expr; 2],
    /// `u, v` in terms of `q, p`.
    pub backward: [Expr; 2],
}

#[derive(Clone, Debug)]
pub struct SymmetryGenerator {
    pub system: Label,
    pub name: String,
    pub alpha_map: BTreeMap<Symbol, ParamRat>,
    pub t_map: ParamRat,
    /// Images of `q, p`, in the table's variables.
    pub q: Expr,
    pub p: Expr,
    /// Generator of the (straightened) algebra that must be inverted.
    pub laurent: Option<Slot>,
    pub straighten: Option<Straightening>,
    pub frame: Option<Frame>,
}

#[derive(Clone, Debug)]
struct Entry {
    system: PainleveSystem,
    charts: Vec<CanonicalChart>,
    goldens: Vec<GoldenChartHamiltonian>,
    nagoya: NagoyaSystem,
    symmetries: Vec<SymmetryGenerator>,
    printed_solution: BTreeMap<Symbol, ParamRat>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: BTreeMap<Label, Entry>,
}

impl Catalog {
    /// The compiled-in data, or the directory named by
    /// [`CATALOG_DIR_ENV`] when that is set.
    pub fn load() -> Result<Catalog, CatalogError> {
        match std::env::var_os(CATALOG_DIR_ENV) {
            Some(dir) => Catalog::from_dir(Path::new(&dir)),
            None => Catalog::from_sources(BUILTIN.iter().map(|(l, s)| (*l, s.to_string()))),
        }
    }

    /// Shared compiled-in catalog. Panics if the shipped files are broken.
    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| {
            Catalog::from_sources(BUILTIN.iter().map(|(l, s)| (*l, s.to_string())))
                .unwrap_or_else(|e| panic!("shipped catalog: {e}"))
        })
    }

    pub fn from_dir(dir: &Path) -> Result<Catalog, CatalogError> {
        let mut sources = Vec::new();
        for label in Label::ALL {
            let path = dir.join(format!("{label}.toml"));
            let text = std::fs::read_to_string(&path).map_err(|e| CatalogError::Malformed {
                file: path.display().to_string(),
                msg: e.to_string(),
            })?;
            sources.push((label, text));
        }
        Catalog::from_sources(sources)
    }

    pub fn from_sources(
        sources: impl IntoIterator<Item = (Label, String)>,
    ) -> Result<Catalog, CatalogError> {
        let mut entries = BTreeMap::new();
        for (label, text) in sources {
            let entry = load_entry(label, &text).map_err(|msg| CatalogError::Malformed {
                file: format!("{label}.toml"),
                msg,
            })?;
            entries.insert(label, entry);
        }
        Ok(Catalog { entries })
    }

    fn entry(&self, label: Label) -> Result<&Entry, CatalogError> {
        self.entries
            .get(&label)
            .ok_or_else(|| CatalogError::Missing(label.to_string()))
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.entries.keys().copied()
    }

    pub fn get_system(&self, label: Label) -> Result<&PainleveSystem, CatalogError> {
        Ok(&self.entry(label)?.system)
    }

    pub fn get_charts(&self, label: Label) -> Result<&[CanonicalChart], CatalogError> {
        Ok(&self.entry(label)?.charts)
    }

    pub fn get_chart(&self, label: Label, index: usize) -> Result<&CanonicalChart, CatalogError> {
        self.get_charts(label)?
            .iter()
            .find(|c| c.index == index)
            .ok_or_else(|| CatalogError::Missing(format!("{label} chart {index}")))
    }

    pub fn get_golden(
        &self,
        label: Label,
        index: usize,
    ) -> Result<&GoldenChartHamiltonian, CatalogError> {
        self.entry(label)?
            .goldens
            .iter()
            .find(|g| g.index == index)
            .ok_or_else(|| CatalogError::Missing(format!("{label} golden {index}")))
    }

    pub fn get_nagoya(&self, label: Label) -> Result<&NagoyaSystem, CatalogError> {
        Ok(&self.entry(label)?.nagoya)
    }

    pub fn get_symmetries(&self, label: Label) -> Result<&[SymmetryGenerator], CatalogError> {
        Ok(&self.entry(label)?.symmetries)
    }

    pub fn get_symmetry(
        &self,
        label: Label,
        name: &str,
    ) -> Result<&SymmetryGenerator, CatalogError> {
        self.get_symmetries(label)?
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CatalogError::Missing(format!("{label} {name}")))
    }

    /// Unknown values as printed next to the characterization result, where
    /// the text gives them.
    pub fn printed_solution(
        &self,
        label: Label,
    ) -> Result<&BTreeMap<Symbol, ParamRat>, CatalogError> {
        Ok(&self.entry(label)?.printed_solution)
    }
}

fn slot(s: &str) -> Result<Option<Slot>, String> {
    match s {
        "first" => Ok(Some(Slot::First)),
        "second" => Ok(Some(Slot::Second)),
        "none" => Ok(None),
        other => Err(format!("bad laurent side `{other}`")),
    }
}

fn symbol(s: &str) -> Result<Symbol, String> {
    Symbol::from_name(s).ok_or_else(|| format!("unknown symbol `{s}`"))
}

/// Parses `src` and checks that printing the tree gives the same tree.
fn expr(src: &str) -> Result<Expr, String> {
    let e = parse(src).map_err(|e| format!("`{src}`: {e}"))?;
    let again = parse(&e.to_string()).map_err(|err| format!("`{e}` does not reparse: {err}"))?;
    if again != e {
        return Err(format!("`{src}` is not a printer fixed point"));
    }
    Ok(e)
}

/// Evaluates `src` and checks that its printed normal form evaluates back
/// to the same element.
fn element(src: &str, vars: &Vars, layout: Layout) -> Result<WeylExpr, String> {
    let env = Env::new(vars, layout);
    let v = eval(&expr(src)?, &env).map_err(|e| format!("`{src}`: {e}"))?;
    let printed = v.to_string();
    let back = eval(&expr(&printed)?, &env).map_err(|e| format!("`{printed}`: {e}"))?;
    if back != v {
        return Err(format!("`{src}` does not survive printing as `{printed}`"));
    }
    Ok(v)
}

fn scalar(src: &str) -> Result<ParamRat, String> {
    let v = eval_scalar(&expr(src)?).map_err(|e| format!("`{src}`: {e}"))?;
    let printed = v.to_string();
    let back = eval_scalar(&expr(&printed)?).map_err(|e| format!("`{printed}`: {e}"))?;
    if back != v {
        return Err(format!("`{src}` does not survive printing as `{printed}`"));
    }
    Ok(v)
}

fn poly(src: &str) -> Result<ParamPoly, String> {
    scalar(src)?
        .as_poly()
        .cloned()
        .ok_or_else(|| format!("`{src}` is not a polynomial"))
}

fn pair(srcs: &[String; 2], vars: &Vars, layout: Layout) -> Result<[WeylExpr; 2], String> {
    Ok([
        element(&srcs[0], vars, layout)?,
        element(&srcs[1], vars, layout)?,
    ])
}

fn expr_pair(srcs: &[String; 2]) -> Result<[Expr; 2], String> {
    Ok([expr(&srcs[0])?, expr(&srcs[1])?])
}

fn load_entry(label: Label, text: &str) -> Result<Entry, String> {
    let f: CatalogFile = toml::from_str(text).map_err(|e| e.to_string())?;
    if f.format != file::FORMAT {
        return Err(format!(
            "format `{}`, expected `{}`",
            f.format,
            file::FORMAT
        ));
    }
    if f.version != file::VERSION {
        return Err(format!("version {}, expected {}", f.version, file::VERSION));
    }
    if f.label.parse::<Label>().map_err(|e| e.to_string())? != label {
        return Err(format!("file declares label {}", f.label));
    }

    let qp = Vars::new("q", "p");
    let s = &f.system;
    let hamiltonian = element(&s.hamiltonian, &qp, Layout::POLY)?;
    if !hamiltonian.is_polynomial() {
        return Err("hamiltonian must be polynomial in q, p".into());
    }
    let system = PainleveSystem {
        label,
        vars: qp.clone(),
        hamiltonian,
        time_weight: poly(&s.time_weight)?,
        params: s
            .params
            .iter()
            .map(|p| symbol(p))
            .collect::<Result<_, _>>()?,
        constraint: poly(&s.constraint)?,
        normalization: (symbol(&s.normalize.symbol)?, scalar(&s.normalize.value)?),
        normalize_before_solve: s.normalize_before_solve,
    };

    let xy = Vars::new("x", "y");
    let mut charts: Vec<CanonicalChart> = Vec::new();
    let mut goldens = Vec::new();
    for c in &f.charts {
        let laurent = slot(&c.laurent)?.ok_or("charts need a Laurent side")?;
        let vars = Vars::new(&c.vars[0], &c.vars[1]);
        let layout = Layout::laurent_in(laurent);
        let (base_vars, base_layout) = match c.base {
            None => (qp.clone(), layout),
            Some(b) => {
                let base = charts
                    .iter()
                    .find(|x| x.index == b)
                    .ok_or(format!("chart {} has unknown base {b}", c.index))?;
                (base.vars.clone(), layout)
            }
        };
        let as_printed = c
            .as_printed
            .as_ref()
            .map(|p| pair(p, &vars, layout))
            .transpose()?;
        charts.push(CanonicalChart {
            system: label,
            index: c.index,
            forward: pair(&c.forward, &vars, layout)?,
            backward: pair(&c.backward, &base_vars, base_layout)?,
            vars: vars.clone(),
            layout,
            base: c.base,
            base_vars,
            base_layout,
            as_printed,
        });
        let golden = element(&c.golden, &xy, Layout::POLY)?;
        goldens.push(GoldenChartHamiltonian {
            system: label,
            index: c.index,
            source: c.golden.clone(),
            hamiltonian: golden.renamed(&vars),
        });
    }

    let n = &f.nagoya;
    let nagoya = NagoyaSystem {
        label,
        vars: qp.clone(),
        hamiltonian: element(&n.hamiltonian, &qp, Layout::POLY)?,
        source: n.hamiltonian.clone(),
        prefactor: poly(&n.prefactor)?,
        alpha_constraint: poly(&n.alpha_constraint)?,
        dependent: (symbol(&n.dependent.symbol)?, scalar(&n.dependent.value)?),
        maps: n
            .maps
            .iter()
            .map(|m| {
                let assign = m
                    .assign
                    .iter()
                    .map(|(k, v)| Ok((symbol(k)?, scalar(v)?)))
                    .collect::<Result<_, String>>()?;
                Ok(ParamMap {
                    name: m.name.clone(),
                    assign,
                })
            })
            .collect::<Result<_, String>>()?,
    };

    let frame = f
        .frame
        .as_ref()
        .map(|fr| {
            Ok::<_, String>(Frame {
                table: expr_pair(&fr.table)?,
                inverse: expr_pair(&fr.inverse)?,
            })
        })
        .transpose()?;
    let mut symmetries = Vec::new();
    for g in &f.symmetries {
        let alpha_map = g
            .alpha
            .iter()
            .map(|(k, v)| Ok((symbol(k)?, scalar(v)?)))
            .collect::<Result<BTreeMap<_, _>, String>>()?;
        let straighten = g
            .straighten
            .as_ref()
            .map(|st| {
                Ok::<_, String>(Straightening {
                    vars: Vars::new(&st.vars[0], &st.vars[1]),
                    forward: expr_pair(&st.forward)?,
                    backward: expr_pair(&st.backward)?,
                })
            })
            .transpose()?;
        symmetries.push(SymmetryGenerator {
            system: label,
            name: g.name.clone(),
            alpha_map,
            t_map: scalar(&g.t)?,
            q: expr(&g.q)?,
            p: expr(&g.p)?,
            laurent: slot(&g.laurent)?,
            straighten,
            frame: frame.clone(),
        });
    }

    let printed_solution = match &f.characterization {
        None => BTreeMap::new(),
        Some(c) => c
            .printed
            .iter()
            .map(|(k, v)| Ok((symbol(k)?, scalar(v)?)))
            .collect::<Result<_, String>>()?,
    };

    Ok(Entry {
        system,
        charts,
        goldens,
        nagoya,
        symmetries,
        printed_solution,
    })
}
