//! Command-line front end: load assembler documents, run the analyses and
//! print human-readable or JSON reports.
//!
//! Exit codes: 0 success, 1 validation or hypothesis failure, 2 budget
//! exhausted, 3 I/O or format error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use assemblers::assembler::Assembler;
use assemblers::budget::Budget;
use assemblers::document::AssemblerDocument;
use assemblers::fixtures::{self, FiniteGroup, FiniteSpace, IntervalVariant};
use assemblers::kzero::{devissage_check, k0, localization_check, scissors_congruent};
use assemblers::nerve::diagonal_level_space;
use assemblers::ops::{full_subassembler, quotient};
use assemblers::sink::sink_group;
use assemblers::wcat::{build_w, check_w_properties, pi0_wcat};
use assemblers::{Error, ObjId};

#[derive(Parser, Debug)]
#[command(name = "assemblers", version, about = "Finite assemblers and their K₀")]
struct Cli {
    /// Step budget for searches (overrides ASSEMBLERS_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; has no effect on results.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Category laws and assembler axioms.
    Validate { file: PathBuf },
    /// K₀ presentation, invariants and class table.
    K0 { file: PathBuf },
    /// Search for a scissors-congruence witness between two objects.
    Sc {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// The quotient assembler by a named sieve.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        sieve: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Dévissage hypothesis and π₀ conclusion for a named subassembler.
    Devissage {
        file: PathBuf,
        #[arg(long)]
        sub: String,
    },
    /// Localization hypotheses and π₀ exactness for a named sieve.
    Localize {
        file: PathBuf,
        #[arg(long)]
        sieve: String,
    },
    /// The span group at the sink.
    SinkGroup { file: PathBuf },
    /// Properties of the truncated W-category.
    Wcat {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_tuple: usize,
    },
    /// Homology of a truncated level space.
    Homology {
        file: PathBuf,
        #[arg(long, default_value = "level1")]
        space: String,
        /// Highest simplex degree; homology is reported below it.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        max_tuple: usize,
    },
    /// Emit a built-in fixture as a document.
    Fixture {
        name: String,
        params: Vec<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

/// A report: text lines, a JSON object and an exit code.
struct Report {
    lines: Vec<String>,
    data: Map<String, Value>,
    code: u8,
}

impl Report {
    fn new() -> Self {
        Report { lines: Vec::new(), data: Map::new(), code: 0 }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, v: Value) {
        self.data.insert(key.to_string(), v);
    }

    fn fail(&mut self) {
        self.code = self.code.max(1);
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "FAIL"
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted { .. } => 2,
        Error::Format(_) => 3,
        _ => 1,
    }
}

fn load(path: &Path) -> Result<(AssemblerDocument, Arc<Assembler>), Error> {
    let doc = AssemblerDocument::load(path)?;
    let asm = doc.to_assembler()?;
    Ok((doc, asm))
}

fn names(asm: &Assembler, objs: &[ObjId]) -> Vec<String> {
    objs.iter().map(|&o| asm.object_name(o).to_string()).collect()
}

fn run(cli: &Cli, budget: &Budget) -> Result<Report, Error> {
    let mut r = Report::new();
    match &cli.command {
        Command::Validate { file } => {
            let (_, asm) = load(file)?;
            let laws = asm.category().validate();
            r.line(format!("{asm}"));
            r.line(format!("category laws: {}", flag(laws.is_valid())));
            for v in laws.violations.iter().take(10) {
                r.line(format!("  {v}"));
            }
            let axioms = asm.check_axioms(budget.limit());
            r.line(axioms.render(&asm).trim_end().to_string());
            r.set("category_laws", json!(laws.is_valid()));
            r.set("violations", json!(laws.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
            r.set(
                "axioms",
                json!({"initial": axioms.initial_ok, "I": axioms.holds_i, "M": axioms.holds_m, "R": axioms.holds_r, "R_inconclusive": axioms.r_inconclusive}),
            );
            if axioms.r_inconclusive {
                r.code = 2;
            } else if !laws.is_valid() || !axioms.all_hold() {
                r.fail();
            }
        }
        Command::K0 { file } => {
            let (_, asm) = load(file)?;
            let k = k0(&asm, budget)?;
            let inv = k.invariants();
            r.line(format!("K₀ = {inv}"));
            r.line(format!("rank: {}", k.rank()));
            let torsion: Vec<String> = k.torsion().iter().map(|t| t.to_string()).collect();
            r.line(format!("torsion: {}", if torsion.is_empty() { "none".to_string() } else { torsion.join(", ") }));
            let relations: Vec<String> = k.relations().iter().map(|rel| k.describe_relation(rel)).collect();
            r.line("relations:");
            for rel in &relations {
                r.line(format!("  {rel}"));
            }
            r.line("classes:");
            let mut classes = Map::new();
            for o in asm.noninitial_objects() {
                let c = k.class_of(o)?;
                r.line(format!("  [{}] = {c}", asm.object_name(o)));
                classes.insert(
                    asm.object_name(o).to_string(),
                    json!(c.coordinates.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                );
            }
            r.set("group", json!(inv.to_string()));
            r.set("rank", json!(k.rank()));
            r.set("torsion", json!(torsion));
            r.set("relations", json!(relations));
            r.set("classes", Value::Object(classes));
        }
        Command::Sc { file, a, b, depth } => {
            let (_, asm) = load(file)?;
            let (x, y) = (asm.object_id(a)?, asm.object_id(b)?);
            match scissors_congruent(&asm, x, y, *depth, budget)? {
                Some(w) => {
                    let cat = asm.category();
                    r.line(format!("{a} and {b} are scissors congruent"));
                    r.line(format!("  {}", w.left.describe(cat)));
                    r.line(format!("  {}", w.right.describe(cat)));
                    let pieces: Vec<Value> = w
                        .pieces
                        .iter()
                        .map(|&(p, q, i)| {
                            r.line(format!("  {} ≅ {} via {}", cat.morphism_name(p), cat.morphism_name(q), cat.morphism_name(i)));
                            json!([cat.morphism_name(p), cat.morphism_name(q), cat.morphism_name(i)])
                        })
                        .collect();
                    r.set("congruent", json!(true));
                    r.set("pieces", json!(pieces));
                }
                None => {
                    r.line(format!("no witness with at most {depth} pieces"));
                    r.set("congruent", json!(false));
                    r.fail();
                }
            }
        }
        Command::Quotient { file, sieve, emit } => {
            let (doc, asm) = load(file)?;
            let objs = doc.sieve(&asm, sieve)?;
            let q = quotient(&asm, &objs)?;
            let k = k0(&q.asm, budget)?;
            let kept = names(&q.asm, &q.asm.noninitial_objects());
            r.line(format!("quotient by {sieve}: {}", q.asm));
            r.line(format!("objects: {}", kept.join(", ")));
            r.line(format!("K₀ = {}", k.invariants()));
            r.set("objects", json!(kept));
            r.set("k0", json!(k.invariants().to_string()));
            if let Some(path) = emit {
                AssemblerDocument::from_assembler(&q.asm, budget)?.save(path)?;
                r.line(format!("written to {}", path.display()));
            }
        }
        Command::Devissage { file, sub } => {
            let (doc, asm) = load(file)?;
            let objs = doc.sieve(&asm, sub)?;
            let s = full_subassembler(&asm, &objs)?;
            let rep = devissage_check(&s, budget)?;
            r.line(format!("hypothesis: {}", flag(rep.hypothesis_holds())));
            for &o in &rep.failures {
                r.line(format!("  {} is not covered by objects of {sub}", asm.object_name(o)));
            }
            let pi0 = if rep.conclusion_holds() {
                format!("iso {}→{}", rep.sub, rep.ambient)
            } else {
                format!("not iso {}→{} (kernel {}, cokernel {})", rep.sub, rep.ambient, rep.kernel, rep.cokernel)
            };
            r.line(format!("π₀: {pi0}"));
            r.set("hypothesis", json!(rep.hypothesis_holds()));
            r.set("witnesses", json!(rep.witnesses.len()));
            r.set("conclusion", json!(rep.conclusion_holds()));
            r.set("k0_sub", json!(rep.sub.to_string()));
            r.set("k0_ambient", json!(rep.ambient.to_string()));
            if !rep.hypothesis_holds() || !rep.conclusion_holds() {
                r.fail();
            }
        }
        Command::Localize { file, sieve } => {
            let (doc, asm) = load(file)?;
            let objs = doc.sieve(&asm, sieve)?;
            let rep = localization_check(&asm, &objs, budget)?;
            r.line("sieve hypothesis: OK");
            r.line(format!("complements hypothesis: {}", flag(rep.complements_hold())));
            let witness = rep.complement_failure().map(|f| asm.morphism_name(f).to_string());
            if let Some(w) = &witness {
                r.line(format!("  {w} lies in no finite disjoint covering family"));
            }
            r.line(format!("K₀({sieve}) = {}", rep.k0_sieve));
            r.line(format!("K₀(C) = {}", rep.k0_ambient));
            r.line(format!("K₀(C∖{sieve}) = {}", rep.k0_quotient));
            r.line(format!("coker = {}", rep.cokernel));
            r.line(format!("π₀ exactness: {}", flag(rep.exact)));
            r.set("complements", json!(rep.complements_hold()));
            r.set("complement_witness", json!(witness));
            r.set("k0_sieve", json!(rep.k0_sieve.to_string()));
            r.set("k0_ambient", json!(rep.k0_ambient.to_string()));
            r.set("k0_quotient", json!(rep.k0_quotient.to_string()));
            r.set("cokernel", json!(rep.cokernel.to_string()));
            r.set("exact", json!(rep.exact));
            if !rep.complements_hold() || !rep.exact {
                r.fail();
            }
        }
        Command::SinkGroup { file } => {
            let (_, asm) = load(file)?;
            let sg = sink_group(&asm, budget)?;
            r.line(format!("{sg}"));
            let labels: Vec<String> = (0..sg.order())
                .map(|k| {
                    let (a, f, g) = sg.representatives[k];
                    format!("[{}, {}, {}]", asm.object_name(a), asm.morphism_name(f), asm.morphism_name(g))
                })
                .collect();
            for (k, l) in labels.iter().enumerate() {
                r.line(format!("  {k}: {l}"));
            }
            r.line("table:");
            for row in &sg.group.table {
                r.line(format!("  {}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
            }
            let valid = sg.projection(&sg.default_family())?.check(budget).is_valid();
            r.line(format!("projection to the group sphere: {}", flag(valid)));
            r.set("sink", json!(asm.object_name(sg.sink)));
            r.set("order", json!(sg.order()));
            r.set("elements", json!(labels));
            r.set("table", json!(sg.group.table));
            r.set("projection_valid", json!(valid));
            if !valid {
                r.fail();
            }
        }
        Command::Wcat { file, max_tuple } => {
            let (_, asm) = load(file)?;
            let w = build_w(&asm, *max_tuple, budget)?;
            let props = check_w_properties(&w, budget)?;
            let pi0 = pi0_wcat(&w, budget)?;
            r.line(format!("objects: {}", w.objects().len()));
            r.line(props.to_string());
            r.line(format!("components: {}", pi0.count()));
            r.set("objects", json!(w.objects().len()));
            r.set("morphisms", json!(props.morphisms));
            r.set("monic", json!(props.all_monic()));
            r.set("squares_complete", json!(props.squares_complete()));
            r.set("uncompleted_cospans", json!(props.uncompleted.len()));
            r.set("components", json!(pi0.count()));
            if !props.all_monic() {
                r.fail();
            }
        }
        Command::Homology { file, space, degree, max_tuple } => {
            let (_, asm) = load(file)?;
            let k = match space.as_str() {
                "level0" => 0,
                "level1" => 1,
                other => return Err(Error::Parameter(format!("unknown space `{other}`; use level0 or level1"))),
            };
            if *degree == 0 {
                return Err(Error::Parameter("degree must be at least 1".into()));
            }
            let x = diagonal_level_space(&asm, k, *degree, *max_tuple, budget)?;
            let cc = x.chain_complex();
            r.line(format!("simplices per degree: {:?}", x.counts()));
            r.line(format!("∂∂ = 0: {}", flag(cc.is_complex())));
            let mut groups = Vec::new();
            for i in 0..*degree {
                let h = cc.homology(i, budget)?;
                r.line(format!("H_{i} = {h}"));
                groups.push(h.to_string());
            }
            r.set("simplices", json!(x.counts()));
            r.set("boundary_squares_vanish", json!(cc.is_complex()));
            r.set("homology", json!(groups));
            if !cc.is_complex() {
                r.fail();
            }
        }
        Command::Fixture { name, params, emit } => {
            let doc = fixture(name, params, budget)?;
            let asm = doc.to_assembler()?;
            r.line(format!("{name}: {asm}"));
            for (s, objs) in &doc.sieves {
                r.line(format!("sieve {s}: {}", objs.join(", ")));
            }
            r.set("objects", json!(asm.category().object_count()));
            r.set("morphisms", json!(asm.category().morphism_count()));
            match emit {
                Some(path) => {
                    doc.save(path)?;
                    r.line(format!("written to {}", path.display()));
                }
                None if !cli.json => r.line(doc.to_json()),
                None => r.set("document", serde_json::to_value(&doc).expect("documents serialize")),
            }
        }
    }
    Ok(r)
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, Error> {
    let raw = params.get(i).ok_or_else(|| Error::Parameter(format!("missing parameter {what}")))?;
    raw.parse().map_err(|_| Error::Parameter(format!("bad {what}: {raw}")))
}

fn fixture(name: &str, params: &[String], budget: &Budget) -> Result<AssemblerDocument, Error> {
    let plain = |asm: &Arc<Assembler>| AssemblerDocument::from_assembler(asm, budget);
    match name {
        "trivial" => plain(&fixtures::trivial()),
        "sphere_group" => {
            let group = match params.first().map(String::as_str).unwrap_or("1") {
                "1" | "trivial" => FiniteGroup::trivial(),
                "S3" | "symmetric3" => FiniteGroup::symmetric3(),
                other => match other.strip_prefix('Z').or_else(|| other.strip_prefix("cyclic")) {
                    Some(n) => FiniteGroup::cyclic(n.trim_start_matches(':').parse().map_err(|_| Error::Parameter(format!("bad group {other}")))?),
                    None => return Err(Error::Parameter(format!("unknown group `{other}`; use 1, Z<n> or S3"))),
                },
            };
            plain(&fixtures::sphere_group(&group)?)
        }
        "finite_sets" => {
            let n = param(params, 0, "N")?;
            let asm = fixtures::finite_sets(n)?;
            let mut sub = fixtures::singleton_objects(&asm);
            sub.push(asm.initial());
            Ok(plain(&asm)?.with_sieve("S", &asm, &sub))
        }
        "open_sets" => {
            let space = match params.first().map(String::as_str).unwrap_or("sierpinski") {
                "sierpinski" => FiniteSpace::sierpinski(),
                other => match other.strip_prefix("discrete") {
                    Some(n) => FiniteSpace::discrete(n.trim_start_matches(':').parse().map_err(|_| Error::Parameter(format!("bad space {other}")))?)?,
                    None => return Err(Error::Parameter(format!("unknown space `{other}`; use sierpinski or discrete:<n>"))),
                },
            };
            plain(&fixtures::open_sets(&space)?)
        }
        "preorder5" => {
            let (asm, sieve) = fixtures::preorder5()?;
            Ok(plain(&asm)?.with_sieve("D", &asm, &sieve))
        }
        "poset_sink" => plain(&fixtures::poset_sink()?),
        "intervals" => {
            let (n, m) = (param(params, 0, "N")?, param(params, 1, "M")?);
            let variant: IntervalVariant = params.get(2).map_or(Ok(IntervalVariant::Classical), |v| v.parse())?;
            let fx = fixtures::intervals(n, m, variant, false)?;
            let doc = plain(&fx.asm)?;
            Ok(match &fx.points {
                Some(points) => doc.with_sieve("points", &fx.asm, points),
                None => doc,
            })
        }
        other => Err(Error::Parameter(format!(
            "unknown fixture `{other}`; known: trivial, sphere_group, finite_sets, open_sets, preorder5, poset_sink, intervals"
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match cli.budget {
        Some(n) => Budget::new(n),
        None => Budget::from_env(),
    };
    let (report, code) = match run(&cli, &budget) {
        Ok(r) => {
            let code = r.code;
            (r, code)
        }
        Err(e) => {
            let mut r = Report::new();
            r.line(format!("error: {e}"));
            r.set("error", json!(e.to_string()));
            let code = exit_code(&e);
            (r, code)
        }
    };
    if cli.json {
        let mut data = report.data;
        data.insert("exit_code".into(), json!(code));
        println!("{}", serde_json::to_string_pretty(&Value::Object(data)).expect("reports serialize"));
    } else if code == 0 || report.lines.iter().all(|l| !l.starts_with("error:")) {
        for l in &report.lines {
            println!("{l}");
        }
    } else {
        for l in &report.lines {
            eprintln!("{l}");
        }
    }
    ExitCode::from(code)
}
