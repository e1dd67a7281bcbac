//! The `equihom` command line.
//!
//! Every command builds a result file and prints it as text or JSON.
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::check;
use crate::coefficients::{point_homology, CoeffRing, MackeyTable, PointMonomial, PointRingC2};
use crate::error::Error;
use crate::freebasis::{
    box_product, dual_basis, generalized_isotropic, geometric_fixed_basis, homology_of_pure, isotropy_witness,
    norm_basis, Basis,
};
use crate::grading::{DegreeC2, RepDegree};
use crate::groups::{coinduce, product, restrict_gset, subgroups, CyclicGroup, GSet, Subgroup};
use crate::io::{self, emit_result, OutputFormat, ResultFile, Section};
use crate::purering::{
    bur_model, conorm_element, dual_steenrod_model, dyer_lashof, expand_basis, fixed_point_operations, lift_product,
    norm_element, ConormTarget, Monomial, PureRingModel,
};
use crate::specseq::{
    bar_e2, coinduce_result, collapse_and_extend, em_e2, phi_presentation, tor_koszul, twisted_bar_e2,
    GradedPolyAlgebra, Module, RingPresentation, SideInput, TorPage,
};

pub const DEFAULT_TRUNCATION: i64 = 12;
pub const TRUNCATION_ENV: &str = "EQUIHOM_TRUNC";
const E2_ONLY: &str = "E2 page, no convergence asserted";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "equihom", version, about = "Equivariant homology of free and homologically pure spectra")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json"])]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite G-sets.
    #[command(subcommand)]
    Gset(GsetCmd),
    /// The Mackey functor H_{a+bσ}(pt) for C2.
    PointHomology {
        /// `a,b` for the degree a+bσ.
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
        #[arg(long, default_value = "f2")]
        coeff: String,
    },
    /// Free bases.
    #[command(subcommand)]
    Basis(BasisCmd),
    /// Pure ring models.
    #[command(subcommand)]
    Pure(PureCmd),
    /// E₂ pages of the bar, twisted bar and Eilenberg–Moore spectral sequences.
    #[command(subcommand)]
    Ss(SsCmd),
    /// Worked examples.
    #[command(subcommand)]
    Demo(DemoCmd),
    /// Runs the self-checks.
    Check,
}

#[derive(Subcommand, Debug)]
enum GsetCmd {
    /// Product of the orbits G/H for the listed H.
    Prod {
        #[arg(long)]
        group: String,
        #[arg(long)]
        orbits: String,
    },
    /// Restriction of a disjoint union of orbits to a subgroup.
    Res {
        #[arg(long)]
        group: String,
        #[arg(long)]
        orbits: String,
        #[arg(long)]
        to: String,
    },
    /// Coinduction Map^H(G, T) of an H-set given by its orbits.
    Coind {
        #[arg(long)]
        group: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        orbits: String,
    },
}

#[derive(Args, Debug)]
struct BasisSource {
    /// A basis file.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// A model file (or `builtin:bur`, `builtin:dual-steenrod`), expanded to `--trunc`.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    trunc: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum BasisCmd {
    /// Box product of two bases.
    Box {
        /// Exactly two basis files.
        #[arg(long, required = true)]
        basis: Vec<PathBuf>,
    },
    /// Norm of a basis up to a larger group.
    Norm {
        #[command(flatten)]
        source: BasisSource,
        /// The group to norm up to.
        #[arg(long)]
        to: String,
    },
    /// Spanier–Whitehead dual basis.
    Dual {
        #[command(flatten)]
        source: BasisSource,
    },
    /// Homology in degree kρ_K − ε of a homologically pure basis.
    Homology {
        #[command(flatten)]
        source: BasisSource,
        /// The subgroup K.
        #[arg(long)]
        level: String,
        /// The multiple k of ρ_K.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 0)]
        eps: u8,
        /// Constant coefficients; defaults to the basis coefficients.
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Generalized isotropy test.
    Isotropic {
        #[command(flatten)]
        source: BasisSource,
    },
    /// Cells surviving geometric fixed points.
    Phi {
        #[command(flatten)]
        source: BasisSource,
    },
}

#[derive(Subcommand, Debug)]
enum PureCmd {
    /// Product of two classes.
    Mult {
        #[arg(long)]
        model: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "top", value_parser = ["top", "bottom"])]
        level: String,
    },
    /// Norm of an underlying class.
    Norm {
        #[arg(long)]
        model: String,
        /// An underlying class.
        #[arg(long)]
        x: String,
    },
    /// Conorm (co-Tambara structure map) of a class.
    Conorm {
        #[arg(long)]
        model: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "diagonal")]
        target: String,
        #[arg(long, default_value = "top", value_parser = ["top", "bottom"])]
        level: String,
    },
    /// Dyer–Lashof operation Q^{iρ−ε}.
    Dl {
        #[arg(long)]
        model: String,
        #[arg(long)]
        i: i64,
        #[arg(long, default_value_t = 0)]
        eps: u8,
        #[arg(long)]
        x: String,
    },
    /// Monomial basis up to an underlying degree.
    Expand {
        #[arg(long)]
        model: String,
        #[arg(long)]
        trunc: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum SsCmd {
    /// Bar spectral sequence E₂ = Tor.
    Bar {
        #[arg(long)]
        model: String,
        #[arg(long)]
        trunc: Option<i64>,
        #[arg(long, default_value = "point")]
        left: String,
        #[arg(long, default_value = "point")]
        right: String,
    },
    /// Twisted bar spectral sequence E₂ over the normed underlying ring.
    Twisted {
        #[arg(long)]
        model: String,
        #[arg(long)]
        trunc: Option<i64>,
        /// The space X of Map(C2, X): `point` or `free`.
        #[arg(long, default_value = "point")]
        module: String,
    },
    /// Eilenberg–Moore spectral sequence E₂.
    Em {
        #[arg(long)]
        model: String,
        #[arg(long)]
        trunc: Option<i64>,
        /// The second module: `point` or `free`.
        #[arg(long, default_value = "point")]
        module: String,
    },
}

#[derive(Subcommand, Debug)]
enum DemoCmd {
    /// Real BU: ranks, norms and operations.
    Bur {
        #[arg(long)]
        trunc: Option<i64>,
    },
    /// Homology of BBU_ℝ from the bar spectral sequence.
    Bbur {
        #[arg(long, default_value = "z")]
        coeff: String,
        #[arg(long)]
        trunc: Option<i64>,
    },
    /// Homology of Map^{C2}(C4, BBU_ℝ).
    #[command(name = "coinduced-c4")]
    CoinducedC4 {
        #[arg(long, default_value_t = 6)]
        trunc: i64,
    },
    /// Norm of the dual Steenrod basis.
    DualSteenrod {
        #[arg(long, default_value_t = 4)]
        trunc: i64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage<T>(r: crate::error::Result<T>) -> Run<T> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_group(s: &str) -> Run<CyclicGroup> {
    usage(CyclicGroup::parse(s))
}

fn parse_subgroup(g: CyclicGroup, s: &str) -> Run<Subgroup> {
    usage(g.parse_subgroup(s))
}

fn parse_coeff(s: &str) -> Run<CoeffRing> {
    usage(CoeffRing::parse(s))
}

fn parse_side(s: &str) -> Run<SideInput> {
    usage(SideInput::parse(s))
}

fn truncation(flag: Option<i64>) -> Run<i64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TRUNCATION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{TRUNCATION_ENV}={v} is not an integer"))),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

/// A model from a file or a builtin name, with a description for digests.
fn load_model(name: &str) -> Run<(PureRingModel, String)> {
    match name {
        "builtin:bur" => Ok((bur_model(), name.to_string())),
        "builtin:dual-steenrod" => Ok((dual_steenrod_model(), name.to_string())),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::MissingData(format!("{path}: {e}")))?;
            let model = io::parse_model(&text)?;
            Ok((model, io::result_file::digest(&text)))
        }
    }
}

fn load_basis(source: &BasisSource) -> Run<(Basis, String)> {
    match (&source.basis, &source.model) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::MissingData(format!("{}: {e}", path.display())))?;
            Ok((io::parse_basis(&text)?, io::result_file::digest(&text)))
        }
        (None, Some(name)) => {
            let (model, id) = load_model(name)?;
            let t = truncation(source.trunc)?;
            Ok((expand_basis(&model, t)?, format!("{id} trunc={t}")))
        }
        _ => Err(Failure::Usage("give exactly one of --basis or --model".into())),
    }
}

fn gset_result(r: &mut ResultFile, t: &GSet) {
    let mut s = Section::new("gset", &["decomposition", "cardinality"]);
    s.push(vec![t.to_string(), t.cardinality().to_string()]);
    r.sections.push(s);
    let mut o = Section::new("orbits", &["stabilizer", "multiplicity"]);
    for (h, m) in t.orbits() {
        o.push(vec![h.to_string(), m.to_string()]);
    }
    r.sections.push(o);
}

fn orbit_list(g: CyclicGroup, list: &str) -> Run<Vec<Subgroup>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_subgroup(g, s))
        .collect()
}

fn mackey_section(name: &str, m: &MackeyTable, class: impl Fn(Subgroup) -> String) -> Section {
    let mut s = Section::new(name, &["level", "group", "class"]);
    for h in subgroups(m.group()).into_iter().rev() {
        let group = m.level(h);
        let c = if group.is_zero() { String::new() } else { class(h) };
        s.push(vec![h.to_string(), group.to_string(), c]);
    }
    s
}

fn page_result(r: &mut ResultFile, page: &TorPage) {
    r.sections.push(Section::from_page("page", page));
    let mut s = Section::new("summary", &["key", "value"]);
    s.push(vec!["kind".into(), page.kind.tag().into()]);
    s.push(vec!["truncation".into(), page.truncation.to_string()]);
    s.push(vec!["exterior".into(), page.is_exterior().to_string()]);
    s.push(vec!["euler".into(), page.euler_consistent().to_string()]);
    if page.kind.e2_only() {
        s.push(vec!["note".into(), E2_ONLY.into()]);
    }
    r.sections.push(s);
}

fn ranks_section(b: &Basis) -> Section {
    let mut counts: BTreeMap<(i64, String), usize> = BTreeMap::new();
    for c in b.cells() {
        *counts.entry((c.underlying_dim(), c.degree.to_string())).or_insert(0) += 1;
    }
    let mut s = Section::new("ranks", &["underlying", "degree", "cells"]);
    for ((u, d), n) in counts {
        s.push(vec![u.to_string(), d, n.to_string()]);
    }
    s
}

fn model_with_coeff(model: PureRingModel, coeff: CoeffRing) -> Run<PureRingModel> {
    if model.coeff == coeff {
        return Ok(model);
    }
    let text = io::emit_model(&model).replace(
        &format!("\ncoeff: {}\n", model.coeff.tag()),
        &format!("\ncoeff: {}\n", coeff.tag()),
    );
    Ok(io::parse_model(&text)?)
}

/// The BBU_ℝ presentation from the bar spectral sequence of the BU_ℝ model.
pub fn bbur_presentation(coeff: CoeffRing, t: i64) -> crate::error::Result<(TorPage, RingPresentation)> {
    let model = match model_with_coeff(bur_model(), coeff) {
        Ok(m) => m,
        Err(Failure::Domain(e)) => return Err(e),
        Err(Failure::Usage(m)) => return Err(Error::Model(m)),
    };
    let a = GradedPolyAlgebra::from_model(&model, t)?;
    let k = Module::trivial(&a);
    let page = bar_e2(&a, &k, &k, t)?;
    let pres = collapse_and_extend(&page, &model)?;
    Ok((page, pres))
}

fn execute(cli: Cli) -> Run<ResultFile> {
    match cli.command {
        Command::Gset(cmd) => match cmd {
            GsetCmd::Prod { group, orbits } => {
                let g = parse_group(&group)?;
                let hs = orbit_list(g, &orbits)?;
                let mut t = GSet::orbit(g, g.full());
                for h in &hs {
                    t = product(&t, &GSet::orbit(g, *h))?;
                }
                let mut r = ResultFile::new("gset prod", &format!("gset prod group={g} orbits={orbits}"));
                gset_result(&mut r, &t);
                Ok(r)
            }
            GsetCmd::Res { group, orbits, to } => {
                let g = parse_group(&group)?;
                let k = parse_subgroup(g, &to)?;
                let mut t = GSet::empty(g);
                for h in orbit_list(g, &orbits)? {
                    t.add_orbits(h, 1);
                }
                let out = restrict_gset(g, k, &t)?;
                let mut r = ResultFile::new("gset res", &format!("gset res group={g} orbits={orbits} to={k}"));
                gset_result(&mut r, &out);
                Ok(r)
            }
            GsetCmd::Coind { group, from, orbits } => {
                let g = parse_group(&group)?;
                let h = parse_subgroup(g, &from)?;
                let hg = g.as_group(h);
                let mut t = GSet::empty(hg);
                for l in orbit_list(hg, &orbits)? {
                    t.add_orbits(l, 1);
                }
                let out = coinduce(g, h, &t)?;
                let mut r = ResultFile::new("gset coind", &format!("gset coind group={g} from={h} orbits={orbits}"));
                gset_result(&mut r, &out);
                Ok(r)
            }
        },
        Command::PointHomology { deg, coeff } => {
            let coeff = parse_coeff(&coeff)?;
            let parts: Vec<&str> = deg.split(',').collect();
            let (a, b) = match parts.as_slice() {
                [a, b] => match (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return Err(Failure::Usage(format!("--deg `{deg}`: expected two integers a,b"))),
                },
                _ => return Err(Failure::Usage(format!("--deg `{deg}`: expected a,b"))),
            };
            let d = DegreeC2::new(a, b);
            let table = point_homology(coeff, d)?;
            let mut r = ResultFile::new("point-homology", &format!("point-homology deg={a},{b} coeff={}", coeff.tag()));
            let mut info = Section::new("degree", &["degree", "pretty"]);
            info.push(vec![d.to_string(), d.pretty()]);
            r.sections.push(info);
            // a_σ^i u_σ^j sits in degree j − (i+j)σ
            let (j, i) = (a, -b - a);
            let ring = PointRingC2::new(coeff);
            let class = (i >= 0 && j >= 0)
                .then(|| PointMonomial::new(i as u32, j as u32))
                .filter(|m| ring.is_nonzero(m).unwrap_or(false));
            r.sections.push(mackey_section("levels", &table, |h| match class {
                Some(m) if !h.is_trivial() => m.to_string(),
                Some(m) if m.a == 0 => format!("res({m})"),
                _ => String::new(),
            }));
            Ok(r)
        }
        Command::Basis(cmd) => basis_command(cmd),
        Command::Pure(cmd) => pure_command(cmd),
        Command::Ss(cmd) => ss_command(cmd),
        Command::Demo(cmd) => demo_command(cmd),
        Command::Check => {
            let results = check::run_all();
            let mut r = ResultFile::new("check", "check");
            let mut s = Section::new("checks", &["id", "name", "status", "detail"]);
            for c in &results {
                s.push(vec![
                    c.id.clone(),
                    c.name.clone(),
                    if c.passed { "pass" } else { "FAIL" }.into(),
                    c.detail.clone(),
                ]);
            }
            r.sections.push(s);
            if results.iter().all(|c| c.passed) {
                Ok(r)
            } else {
                Err(Failure::Domain(Error::Model(format!(
                    "{} check(s) failed\n{}",
                    results.iter().filter(|c| !c.passed).count(),
                    emit_result(&r, OutputFormat::Text)
                ))))
            }
        }
    }
}

fn basis_command(cmd: BasisCmd) -> Run<ResultFile> {
    match cmd {
        BasisCmd::Box { basis } => {
            if basis.len() != 2 {
                return Err(Failure::Usage(format!("box takes two --basis files, got {}", basis.len())));
            }
            let mut loaded = Vec::new();
            let mut ids = Vec::new();
            for path in &basis {
                let (b, id) = load_basis(&BasisSource {
                    basis: Some(path.clone()),
                    model: None,
                    trunc: None,
                })?;
                loaded.push(b);
                ids.push(id);
            }
            let out = box_product(&loaded[0], &loaded[1])?;
            let mut r = ResultFile::new("basis box", &format!("basis box {}", ids.join(" ")));
            r.sections.push(Section::from_basis("basis", &out));
            Ok(r)
        }
        BasisCmd::Norm { source, to } => {
            let (b, id) = load_basis(&source)?;
            let g = parse_group(&to)?;
            let h = Subgroup::of_order(b.group().order());
            let out = norm_basis(h, g, &b)?;
            let mut r = ResultFile::new("basis norm", &format!("basis norm {id} to={g}"));
            r.sections.push(Section::from_basis("basis", &out));
            Ok(r)
        }
        BasisCmd::Dual { source } => {
            let (b, id) = load_basis(&source)?;
            let mut r = ResultFile::new("basis dual", &format!("basis dual {id}"));
            r.sections.push(Section::from_basis("basis", &dual_basis(&b)));
            Ok(r)
        }
        BasisCmd::Homology {
            source,
            level,
            k,
            eps,
            coeff,
        } => {
            let (b, id) = load_basis(&source)?;
            let kk = parse_subgroup(b.group(), &level)?;
            let coeff = match coeff {
                Some(c) => parse_coeff(&c)?,
                None => b.coeff(),
            };
            let m = match coeff {
                CoeffRing::Z => MackeyTable::constant_z(b.group()),
                CoeffRing::F2 => MackeyTable::constant_f2(b.group()),
            };
            let h = homology_of_pure(&b, kk, k, eps, &m)?;
            let degree = RepDegree::regular(kk, k, eps);
            let mut r = ResultFile::new(
                "basis homology",
                &format!("basis homology {id} level={kk} k={k} eps={eps} coeff={}", coeff.tag()),
            );
            let mut info = Section::new("degree", &["degree", "pretty"]);
            info.push(vec![degree.to_string(), degree.pretty()]);
            r.sections.push(info);
            r.sections.push(mackey_section("levels", &h, |_| String::new()));
            Ok(r)
        }
        BasisCmd::Isotropic { source } => {
            let (b, id) = load_basis(&source)?;
            let mut r = ResultFile::new("basis isotropic", &format!("basis isotropic {id}"));
            let mut s = Section::new("isotropy", &["generalized_isotropic", "witness"]);
            let witness = isotropy_witness(&b).map(|(x, y)| format!("{x}, {y}")).unwrap_or_default();
            s.push(vec![generalized_isotropic(&b).to_string(), witness]);
            r.sections.push(s);
            Ok(r)
        }
        BasisCmd::Phi { source } => {
            let (b, id) = load_basis(&source)?;
            let mut r = ResultFile::new("basis phi", &format!("basis phi {id}"));
            let mut s = Section::new("fixed cells", &["label", "degree", "odd"]);
            for c in geometric_fixed_basis(&b) {
                s.push(vec![c.label, c.degree.to_string(), c.odd.to_string()]);
            }
            r.sections.push(s);
            Ok(r)
        }
    }
}

fn element_section(model: &PureRingModel, name: &str, x: &crate::purering::Element) -> crate::error::Result<Section> {
    let mut s = Section::new(name, &["value", "degree"]);
    let degree = model.element_degree(x)?.map(|d| d.pretty()).unwrap_or_default();
    s.push(vec![model.format_element(x), degree]);
    Ok(s)
}

fn pure_command(cmd: PureCmd) -> Run<ResultFile> {
    match cmd {
        PureCmd::Mult { model, x, y, level } => {
            let (m, id) = load_model(&model)?;
            let lv = if level == "top" { m.top() } else { m.bottom() };
            let a = m.parse_element(&x, lv)?;
            let b = m.parse_element(&y, lv)?;
            let p = lift_product(&m, &a, &b)?;
            let mut r = ResultFile::new("pure mult", &format!("pure mult {id} x={x} y={y} level={level}"));
            r.sections.push(element_section(&m, "product", &p)?);
            Ok(r)
        }
        PureCmd::Norm { model, x } => {
            let (m, id) = load_model(&model)?;
            let a = m.parse_element(&x, m.bottom())?;
            let n = norm_element(&m, &a)?;
            let mut r = ResultFile::new("pure norm", &format!("pure norm {id} x={x}"));
            r.sections.push(element_section(&m, "norm", &n)?);
            Ok(r)
        }
        PureCmd::Conorm {
            model,
            x,
            target,
            level,
        } => {
            let (m, id) = load_model(&model)?;
            let t = usage(ConormTarget::parse(&target))?;
            let lv = if level == "top" { m.top() } else { m.bottom() };
            let a = m.parse_element(&x, lv)?;
            let c = conorm_element(&m, &a, t)?;
            let mut r = ResultFile::new("pure conorm", &format!("pure conorm {id} x={x} target={target} level={level}"));
            let mut s = Section::new("conorm", &["value"]);
            s.push(vec![m.format_tensor(&c)]);
            r.sections.push(s);
            Ok(r)
        }
        PureCmd::Dl { model, i, eps, x } => {
            let (m, id) = load_model(&model)?;
            let a = m.parse_element(&x, m.top())?;
            let q = dyer_lashof(&m, i, eps, &a)?;
            let mut r = ResultFile::new("pure dl", &format!("pure dl {id} i={i} eps={eps} x={x}"));
            let mut s = Section::new("operation", &["value", "mod_decomposables"]);
            s.push(vec![m.format_element(&q.value), q.mod_decomposables.to_string()]);
            r.sections.push(s);
            Ok(r)
        }
        PureCmd::Expand { model, trunc } => {
            let (m, id) = load_model(&model)?;
            let t = truncation(trunc)?;
            let b = expand_basis(&m, t)?;
            let mut r = ResultFile::new("pure expand", &format!("pure expand {id} trunc={t}"));
            r.sections.push(ranks_section(&b));
            r.sections.push(Section::from_basis("basis", &b));
            Ok(r)
        }
    }
}

fn ss_command(cmd: SsCmd) -> Run<ResultFile> {
    match cmd {
        SsCmd::Bar {
            model,
            trunc,
            left,
            right,
        } => {
            let (m, id) = load_model(&model)?;
            let t = truncation(trunc)?;
            let (l, rt) = (parse_side(&left)?, parse_side(&right)?);
            let a = GradedPolyAlgebra::from_model(&m, t)?;
            let module = |s: SideInput| -> crate::error::Result<Module> {
                match s {
                    SideInput::Point => Ok(Module::trivial(&a)),
                    SideInput::Free => Module::free(&a, t),
                }
            };
            let page = bar_e2(&a, &module(l)?, &module(rt)?, t)?;
            let mut r = ResultFile::new("ss bar", &format!("ss bar {id} trunc={t} left={left} right={right}"));
            page_result(&mut r, &page);
            if l == SideInput::Point && rt == SideInput::Point {
                let check = tor_koszul(&a, t)?;
                r.sections
                    .last_mut()
                    .expect("summary")
                    .push(vec!["closed form".into(), check.agree().to_string()]);
            }
            Ok(r)
        }
        SsCmd::Twisted { model, trunc, module } => {
            let (m, id) = load_model(&model)?;
            let t = truncation(trunc)?;
            let page = twisted_bar_e2(&m, parse_side(&module)?, t)?;
            let mut r = ResultFile::new("ss twisted", &format!("ss twisted {id} trunc={t} module={module}"));
            page_result(&mut r, &page);
            Ok(r)
        }
        SsCmd::Em { model, trunc, module } => {
            let (m, id) = load_model(&model)?;
            let t = truncation(trunc)?;
            let page = em_e2(&m, parse_side(&module)?, t)?;
            let mut r = ResultFile::new("ss em", &format!("ss em {id} trunc={t} module={module}"));
            page_result(&mut r, &page);
            Ok(r)
        }
    }
}

fn demo_command(cmd: DemoCmd) -> Run<ResultFile> {
    match cmd {
        DemoCmd::Bur { trunc } => {
            let t = truncation(trunc)?;
            let m = bur_model();
            let b = expand_basis(&m, t)?;
            let mut r = ResultFile::new("demo bur", &format!("demo bur trunc={t}"));
            r.sections.push(ranks_section(&b));
            let mut norms = Section::new("norms", &["class", "norm"]);
            for (i, g) in m.generators.iter().enumerate().filter(|(_, g)| 2 * g.under <= t.max(0) * 2 && g.under <= t) {
                let x = crate::purering::Element::monomial(m.bottom(), Monomial::generator(i));
                let n = norm_element(&m, &x)?;
                norms.push(vec![format!("N({})", g.name), m.format_element(&n)]);
            }
            r.sections.push(norms);
            let mut dl = Section::new("dyer-lashof", &["operation", "value", "mod_decomposables"]);
            for (i, g) in m.generators.iter().enumerate() {
                let n = m.weight(&Monomial::generator(i))?;
                if 2 * (2 * n + 1) > t {
                    continue;
                }
                let x = crate::purering::Element::monomial(m.top(), Monomial::generator(i));
                let q = dyer_lashof(&m, n + 1, 0, &x)?;
                dl.push(vec![
                    format!("Q^{{{}rho}}({})", n + 1, g.name),
                    m.format_element(&q.value),
                    q.mod_decomposables.to_string(),
                ]);
            }
            r.sections.push(dl);
            let mut phi = Section::new("fixed point operations", &["operation", "value"]);
            let max = (t / 2).min(6);
            for op in fixed_point_operations(&m, max, max)? {
                let value: Vec<&str> = op.value.iter().map(|c| c.label.as_str()).collect();
                phi.push(vec![
                    format!("Q^{}({})", op.r, op.source.label),
                    if value.is_empty() { "0".into() } else { value.join(" + ") },
                ]);
            }
            r.sections.push(phi);
            Ok(r)
        }
        DemoCmd::Bbur { coeff, trunc } => {
            let coeff = parse_coeff(&coeff)?;
            let t = truncation(trunc)?;
            crate::specseq::check_truncation(t)?;
            let (page, pres) = bbur_presentation(coeff, t)?;
            let mut r = ResultFile::new("demo bbur", &format!("demo bbur coeff={} trunc={t}", coeff.tag()));
            r.add_presentation(&pres);
            r.sections.push(Section::from_page("e2", &page));
            if let Ok(phi) = phi_presentation(&pres) {
                let mut s = Section::new("geometric fixed points", &["relation"]);
                for (lhs, rhs) in &phi.relations {
                    s.push(vec![format!("{lhs} = {rhs}")]);
                }
                s.push(vec![format!("polynomial on {}", phi.polynomial.join(", "))]);
                r.sections.push(s);
            }
            Ok(r)
        }
        DemoCmd::CoinducedC4 { trunc } => {
            crate::specseq::check_truncation(trunc)?;
            let (_, pres) = bbur_presentation(CoeffRing::Z, trunc)?;
            let c4 = CyclicGroup::two_power(2);
            let b = coinduce_result(&pres, c4, trunc)?;
            let mut r = ResultFile::new("demo coinduced-c4", &format!("demo coinduced-c4 trunc={trunc}"));
            r.sections.push(Section::from_basis("basis", &b));
            Ok(r)
        }
        DemoCmd::DualSteenrod { trunc } => {
            let m = dual_steenrod_model();
            let b = expand_basis(&m, trunc)?;
            let normed = norm_basis(Subgroup::of_order(1), CyclicGroup::c2(), &b)?;
            let mut r = ResultFile::new("demo dual-steenrod", &format!("demo dual-steenrod trunc={trunc}"));
            r.sections.push(Section::from_basis("input", &b));
            let mut s = Section::new("norm", &["label", "stabilizer", "degree", "expected"]);
            for c in normed.cells() {
                // ‖f‖ = (|f|/|H_f|) ρ_{H_f}
                let h = c.stabilizer();
                let expected = RepDegree::regular(h, c.underlying_dim() / h.order() as i64, 0);
                s.push(vec![
                    c.label.clone(),
                    h.to_string(),
                    c.degree.to_string(),
                    (expected == c.degree).to_string(),
                ]);
            }
            r.sections.push(s);
            Ok(r)
        }
    }
}

/// Runs the command line on `argv` (program name first).
pub fn run<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let args: Vec<&str> = argv.iter().map(|s| s.as_ref()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let format = if cli.format == "json" {
        OutputFormat::Json
    } else {
        OutputFormat::Text
    };
    match execute(cli) {
        Ok(r) => Outcome {
            code: 0,
            stdout: emit_result(&r, format),
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("usage error: {m}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
