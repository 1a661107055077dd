//! The `godex` command line: problem files in, betti tables, page tables and
//! check reports out.

pub mod problem;
mod render;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use godex::complexes::{betti, certified_betti, CochainComplex, Degree};
use godex::cosimplicial::{check_descent_axioms, Axiom, AxiomParams, DescentReport};
use godex::exec::Exec;
use godex::filtered::{check_filtered_axioms, spectral_sequence, FilteredAxiomParams, SpectralPage};
use godex::godement::{
    derived_direct_image, derived_sections, descent_check, descent_e2_from_cohomology_sheaves, descent_spectral_sequence,
    godement_resolution, hypercohomology_sheaf, localeq_reports, suite_posets, theorem_instance_of,
    thomason_check_of, TheoremInstance,
};
use godex::oracle::{constant_cohomology, holim_replacement, holim_replacement_normalized};
use godex::random::trial_seed;
use godex::site::{random_sheaf, OpenSet, Poset, Sheaf, SheafBounds};
use serde_json::{json, Value};

use problem::{InputError, Problem, FORMAT};
use render::{betti_json, betti_text, report_json, table, verdict};

#[derive(Parser, Debug)]
#[command(name = "godex", version, about = "Godement resolutions and derived functors on finite posets")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Style::Human, global = true)]
    pub format: Style,
    /// Run every kernel sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Human,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Truncation {
    /// Truncation degree N; defaults to the top degree of the input plus 4.
    #[arg(long)]
    pub max_degree: Option<Degree>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ℝΓ(U, F).
    Cohomology {
        file: String,
        /// `ALL` or comma-separated element names of an up-set.
        #[arg(long, default_value = "ALL")]
        open: String,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// ℍ_X(F) stalk by stalk.
    Hyper {
        file: String,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// The Godement resolution G•F up to a level.
    Resolve {
        file: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Thomason descent of F and of ℍ_X(F).
    CheckThomason {
        file: String,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Conditions (2)–(4) of the main theorem on a file or on random sheaves.
    CheckTheorem {
        file: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random posets of this size; the five suite posets otherwise.
        #[arg(long)]
        poset_size: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Random sheaves (per suite poset when no size is given).
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Descent axioms (S1)–(S5) for cosimplicial complexes, or their filtered form.
    CheckAxioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Filtered complexes with E_r-quasi-isomorphisms.
        #[arg(long)]
        filtered: bool,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Largest normalized cosimplicial level.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        max_dim: Option<usize>,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Spectral sequence pages E_0 … E_r.
    Spectral {
        file: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Source::Filtered)]
        source: Source,
        /// Open set for the descent spectral sequence.
        #[arg(long, default_value = "ALL")]
        open: String,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// ℝf⁎F along a monotone map given in a second file.
    Pushforward {
        file: String,
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Independent routes: cosimplicial replacement and nerve cohomology.
    Oracle {
        file: String,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Canonicalize a problem file.
    Fmt {
        file: String,
        /// Rewrite the file instead of printing.
        #[arg(long)]
        in_place: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Filtered,
    Descent,
}

/// A finished command: its document, its table, and whether a check failed.
pub struct Report {
    pub doc: Value,
    pub human: String,
    pub failed: bool,
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn default_top(f: &Sheaf, t: &Truncation) -> Degree {
    t.max_degree.unwrap_or_else(|| f.degree_range().1.max(0) + 4)
}

fn bad(msg: impl Into<String>) -> InputError {
    InputError::Semantic(msg.into())
}

fn parse_open(p: &Poset, text: &str) -> Result<OpenSet, InputError> {
    if text == "ALL" {
        return Ok(OpenSet::whole(p));
    }
    let members = text
        .split(',')
        .map(|s| p.index(s.trim()).map_err(|_| bad(format!("open: unknown element {:?}", s.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    OpenSet::new(p, members).map_err(|e| bad(format!("open: {e}")))
}

fn core(e: impl std::fmt::Display) -> InputError {
    InputError::Semantic(e.to_string())
}

fn complex_dims(c: &CochainComplex, top: Degree) -> Value {
    Value::Object(c.degrees().filter(|&n| n <= top && c.dim(n) > 0).map(|n| (n.to_string(), json!(c.dim(n)))).collect())
}

fn cohomology(file: &str, open: &str, t: &Truncation, ex: Exec) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let top = default_top(&f, t);
    let u = parse_open(f.poset(), open)?;
    let d = derived_sections(&f, &u, top, ex).map_err(core)?;
    let label = u.label(f.poset());
    let doc = json!({"open": label, "betti": betti_json(&d.betti), "max_degree": top, "certified_degree": d.certified_degree});
    let human = format!("RΓ({label}, F)  betti {}  certified through degree {}\n", betti_text(&d.betti), d.certified_degree);
    Ok(Report { doc, human, failed: false })
}

fn hyper(file: &str, t: &Truncation, ex: Exec) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let top = default_top(&f, t);
    let h = hypercohomology_sheaf(&f, top, ex).map_err(core)?;
    let p = f.poset();
    let cert = h.certified_degree();
    let mut stalks = Vec::new();
    let mut rows = Vec::new();
    for x in p.elements() {
        let s = h.h.stalk(x);
        let b = certified_betti(s);
        stalks.push(json!({"at": p.name(x), "dims": complex_dims(s, top), "betti": betti_json(&b)}));
        let dims: Vec<String> = (s.lo()..=top).map(|n| s.dim(n).to_string()).collect();
        rows.push(vec![p.name(x).to_string(), dims.join(" "), betti_text(&b)]);
    }
    let doc = json!({"max_degree": top, "certified_degree": cert, "stalks": stalks});
    let human = format!("ℍ_X(F), N = {top}, certified through degree {cert}\n{}", table(&["point", "dims", "betti"], &rows));
    Ok(Report { doc, human, failed: false })
}

fn resolve(file: &str, level: usize) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let r = godement_resolution(&f, level);
    let identities = r.check().is_ok();
    let p = f.poset();
    let mut levels = Vec::new();
    let mut rows = Vec::new();
    for q in 0..=level {
        let g = r.g.level(q);
        let mut at = Vec::new();
        for x in p.elements() {
            let s = g.stalk(x);
            at.push(json!({"at": p.name(x), "chains": r.g.chains(x, q).len(), "dims": complex_dims(s, s.hi())}));
            let dims: Vec<String> = s.degrees().map(|n| s.dim(n).to_string()).collect();
            rows.push(vec![q.to_string(), p.name(x).to_string(), r.g.chains(x, q).len().to_string(), dims.join(" ")]);
        }
        levels.push(json!({"level": q, "stalks": at}));
    }
    let doc = json!({"levels": levels, "cosimplicial_identities": identities});
    let human = format!(
        "G^p F for p ≤ {level}; cosimplicial identities {}\n{}",
        verdict(identities),
        table(&["p", "point", "chains", "dims"], &rows)
    );
    Ok(Report { doc, human, failed: !identities })
}

fn check_thomason(file: &str, t: &Truncation, ex: Exec) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let top = default_top(&f, t);
    let own = descent_check(&f, top, None, ex).map_err(core)?;
    let h = hypercohomology_sheaf(&f, top, ex).map_err(core)?;
    let hyper = thomason_check_of(&h, ex).map_err(core)?;
    let doc = json!({"max_degree": top, "sheaf": report_json(&own), "hypercohomology_sheaf": report_json(&hyper)});
    let wit = |r: &godex::godement::EquivalenceReport| {
        r.witnesses.iter().map(|w| format!("{}@{}", w.place, w.degree)).collect::<Vec<_>>().join(" ")
    };
    let rows = vec![
        vec!["F".to_string(), verdict(own.verdict).to_string(), wit(&own)],
        vec!["ℍ_X(F)".to_string(), verdict(hyper.verdict).to_string(), wit(&hyper)],
    ];
    let human = format!(
        "Thomason descent, certified through degree {}\n{}",
        top - 1,
        table(&["sheaf", "descent", "witnesses (open@degree)"], &rows)
    );
    Ok(Report { doc, human, failed: !hyper.verdict })
}

fn theorem_row(i: &TheoremInstance) -> Value {
    json!({
        "poset": i.poset,
        "seed": i.seed,
        "rho_local": report_json(&i.rho_local),
        "theta": report_json(&i.theta),
        "thomason": report_json(&i.thomason),
        "global_betti": betti_json(&i.global_betti),
        "certified_degree": i.certified_degree,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_theorem(
    file: Option<&str>,
    seed: u64,
    poset_size: Option<usize>,
    max_dim: usize,
    trials: usize,
    t: &Truncation,
    ex: Exec,
) -> Result<Report, InputError> {
    let mut localeq = None;
    let instances: Vec<TheoremInstance> = match file {
        Some(path) => {
            let pr = Problem::load(path)?;
            let f = pr.require_sheaf()?.clone();
            let top = default_top(&f, t);
            if let Some((_, m)) = &pr.second {
                localeq = Some(localeq_reports(m, top).map_err(core)?);
            }
            vec![theorem_instance_of(path, f, seed, top).map_err(core)?]
        }
        None => {
            let bounds = SheafBounds { max_dim, ..SheafBounds::default() };
            let top = t.max_degree.unwrap_or(bounds.hi + 4);
            let jobs: Vec<(String, Arc<Poset>, u64)> = match poset_size {
                Some(n) => (0..trials)
                    .map(|i| {
                        let s = trial_seed(seed, i as u64);
                        let p = Poset::random(n, s);
                        (format!("{:?}", p.covers()), Arc::new(p), s)
                    })
                    .collect(),
                None => suite_posets()
                    .into_iter()
                    .enumerate()
                    .flat_map(|(k, (name, p))| (0..trials).map(move |i| (name.clone(), p.clone(), trial_seed(seed, (k * 1000 + i) as u64))))
                    .collect(),
            };
            ex.map(jobs, |(name, p, s)| {
                let f = Arc::new(random_sheaf(p, &bounds, s));
                theorem_instance_of(&name, f, s, top)
            })
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map_err(core)?
        }
    };
    let mut failed = instances.iter().any(|i| !i.holds());
    let rows: Vec<Vec<String>> = instances
        .iter()
        .enumerate()
        .map(|(k, i)| {
            vec![
                k.to_string(),
                i.seed.to_string(),
                i.poset.clone(),
                verdict(i.rho_local.verdict).into(),
                verdict(i.theta.verdict).into(),
                verdict(i.thomason.verdict).into(),
                betti_text(&i.global_betti),
            ]
        })
        .collect();
    let mut human = format!(
        "Theorem conditions: (2) ρ_F ∈ W, (3) θ = id, (4) ρ_ℍ ∈ S; {} instance(s)\n{}",
        instances.len(),
        table(&["#", "seed", "poset", "(2)", "(3)", "(4)", "RΓ(X, F)"], &rows)
    );
    let mut doc = json!({
        "seed": seed,
        "instances": instances.iter().map(theorem_row).collect::<Vec<_>>(),
        "all_pass": !failed,
    });
    if let Some([local, tg, hg]) = localeq {
        let agree = local.verdict == tg.verdict && tg.verdict == hg.verdict;
        failed |= !agree;
        doc["second_map"] = json!({"local": report_json(&local), "t_global": report_json(&tg), "h_global": report_json(&hg), "agree": agree});
        writeln!(
            human,
            "second map: f ∈ W {}, T(f) ∈ S {}, ℍ_X(f) ∈ S {}; predicates agree {}",
            local.verdict,
            tg.verdict,
            hg.verdict,
            verdict(agree)
        )
        .unwrap();
    }
    Ok(Report { doc, human, failed })
}

fn axioms_doc(report: &DescentReport) -> (Value, String) {
    let counts: Vec<Value> = Axiom::ALL.iter().map(|a| json!({"axiom": a.to_string(), "passed": report.passes(*a)})).collect();
    let failures: Vec<Value> =
        report.failures().into_iter().map(|(s, a, m)| json!({"seed": s, "axiom": a.to_string(), "reason": m})).collect();
    let rows: Vec<Vec<String>> = Axiom::ALL
        .iter()
        .map(|a| vec![a.to_string(), format!("{}/{}", report.passes(*a), report.trials.len())])
        .collect();
    let mut human = table(&["axiom", "passed"], &rows);
    for (s, a, m) in report.failures() {
        writeln!(human, "failure: {a} at trial seed {s}: {m}").unwrap();
    }
    (
        json!({"seed": report.seed, "trials": report.trials.len(), "certified_degree": report.certified_degree, "passes": counts, "failures": failures}),
        human,
    )
}

#[allow(clippy::too_many_arguments)]
fn check_axioms(
    seed: u64,
    trials: usize,
    filtered: bool,
    r: usize,
    levels: Option<usize>,
    max_dim: Option<usize>,
    t: &Truncation,
    ex: Exec,
) -> Result<Report, InputError> {
    let report = if filtered {
        let mut fp = FilteredAxiomParams { r, ..FilteredAxiomParams::default() };
        fp.base.trials = trials;
        if let Some(l) = levels {
            fp.base.max_level = l;
            fp.base.max_bi_level = l;
        }
        if let Some(d) = max_dim {
            fp.base.max_dim = d;
        }
        if let Some(n) = t.max_degree {
            fp.base.top = n;
        }
        check_filtered_axioms(seed, &fp, ex)
    } else {
        let mut params = AxiomParams { trials, ..AxiomParams::default() };
        if let Some(l) = levels {
            params.max_level = l;
            params.max_bi_level = l;
        }
        if let Some(d) = max_dim {
            params.max_dim = d;
        }
        if let Some(n) = t.max_degree {
            params.top = n;
        }
        check_descent_axioms(seed, &params, ex)
    };
    let (mut doc, table_text) = axioms_doc(&report);
    doc["mode"] = json!(if filtered { format!("filtered E_{r}") } else { "plain".to_string() });
    let title = if filtered { format!("Descent axioms for (FC, E_{r})") } else { "Descent axioms for cochain complexes".to_string() };
    let human = format!("{title}, certified through degree {}\n{table_text}", report.certified_degree);
    Ok(Report { doc, human, failed: !report.all_pass() })
}

fn pages_doc(pages: &[SpectralPage], cert: Option<Degree>) -> (Value, String) {
    let keep = |p: i32, q: Degree| cert.map_or(true, |c| p + q <= c);
    let mut docs = Vec::new();
    let mut human = String::new();
    for page in pages {
        let terms: Vec<(i32, Degree, usize)> = page.terms().into_iter().filter(|((p, q), _)| keep(*p, *q)).map(|((p, q), d)| (p, q, d)).collect();
        docs.push(json!({"r": page.r, "terms": terms.iter().map(|(p, q, d)| json!([p, q, d])).collect::<Vec<_>>()}));
        let rows: Vec<Vec<String>> = terms.iter().map(|(p, q, d)| vec![p.to_string(), q.to_string(), d.to_string()]).collect();
        writeln!(human, "E_{}", page.r).unwrap();
        human.push_str(&table(&["p", "q", "dim"], &rows));
    }
    (Value::Array(docs), human)
}

fn spectral(file: &str, r: usize, source: Source, open: &str, t: &Truncation) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    match source {
        Source::Filtered => {
            let f = pr.filtration.as_ref().ok_or_else(|| bad("spectral --source filtered needs a filtration block"))?;
            let pages = spectral_sequence(&f.filtered, r);
            let (pages_doc, human) = pages_doc(&pages, None);
            let doc = json!({"source": "filtered", "pages": pages_doc});
            Ok(Report { doc, human, failed: false })
        }
        Source::Descent => {
            let f = pr.require_sheaf()?.clone();
            let top = default_top(&f, t);
            let u = parse_open(f.poset(), open)?;
            let ss = descent_spectral_sequence(&f, &u, r, top).map_err(core)?;
            let (pages_doc, mut human) = pages_doc(&ss.pages, Some(ss.certified_degree));
            let mut doc = json!({"source": "descent", "open": u.label(f.poset()), "certified_degree": ss.certified_degree, "pages": pages_doc});
            let mut failed = false;
            if r >= 2 {
                let independent = descent_e2_from_cohomology_sheaves(&f, &u, top).map_err(core)?;
                let agree = independent == ss.certified_terms(2);
                failed = !agree;
                doc["e2_matches_cohomology_sheaves"] = json!(agree);
                writeln!(human, "E_2 against H^p(U, ℋ^q F): {}", verdict(agree)).unwrap();
            }
            Ok(Report { doc, human, failed })
        }
    }
}

fn pushforward(file: &str, map: Option<&str>, t: &Truncation, ex: Exec) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let pending = match map {
        Some(path) => Problem::load(path)?.monotone_map,
        None => pr.monotone_map.clone(),
    }
    .ok_or_else(|| bad("pushforward needs a monotone_map block (in --map or in the file)"))?;
    let m = pending.resolve(f.poset())?;
    let top = default_top(&f, t);
    let g = derived_direct_image(&m, &f, top, ex).map_err(core)?;
    let q = m.target();
    let mut stalks = Vec::new();
    let mut rows = Vec::new();
    for y in q.elements() {
        let b = certified_betti(g.stalk(y));
        stalks.push(json!({"at": q.name(y), "betti": betti_json(&b)}));
        rows.push(vec![q.name(y).to_string(), betti_text(&b)]);
    }
    let doc = json!({"max_degree": top, "certified_degree": top - 1, "stalks": stalks});
    let human = format!("Rf⁎F stalk cohomology, certified through degree {}\n{}", top - 1, table(&["point", "betti"], &rows));
    Ok(Report { doc, human, failed: false })
}

fn upto(b: BTreeMap<Degree, usize>, top: Degree) -> BTreeMap<Degree, usize> {
    b.into_iter().filter(|(n, v)| *v > 0 && *n <= top).collect()
}

fn oracle(file: &str, t: &Truncation, ex: Exec) -> Result<Report, InputError> {
    let pr = Problem::load(file)?;
    let f = pr.require_sheaf()?.clone();
    let top = default_top(&f, t);
    let whole = OpenSet::whole(f.poset());
    let replacement = upto(certified_betti(&holim_replacement(&f, top)), top - 1);
    let normalized = upto(betti(&holim_replacement_normalized(&f, &whole)), top - 1);
    let godement = upto(derived_sections(&f, &whole, top, ex).map_err(core)?.betti, top - 1);
    let unit = CochainComplex::concentrated(f.field(), 0, 1);
    let nerve = constant_cohomology(f.poset(), f.field(), &unit, top);
    let agree = replacement == normalized && normalized == godement;
    let doc = json!({
        "max_degree": top,
        "certified_degree": top - 1,
        "holim_replacement": betti_json(&replacement),
        "holim_normalized": betti_json(&normalized),
        "godement": betti_json(&godement),
        "nerve_constant": betti_json(&nerve),
        "agree": agree,
    });
    let rows = vec![
        vec!["cosimplicial replacement (weak chains)".to_string(), betti_text(&replacement)],
        vec!["cosimplicial replacement (strict chains)".to_string(), betti_text(&normalized)],
        vec!["Godement".to_string(), betti_text(&godement)],
        vec!["nerve, constant coefficients".to_string(), betti_text(&nerve)],
    ];
    let human = format!(
        "RΓ(X, F) by independent routes, certified through degree {}; agreement {}\n{}",
        top - 1,
        verdict(agree),
        table(&["route", "betti"], &rows)
    );
    Ok(Report { doc, human, failed: !agree })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cohomology { .. } => "cohomology",
        Command::Hyper { .. } => "hyper",
        Command::Resolve { .. } => "resolve",
        Command::CheckThomason { .. } => "check-thomason",
        Command::CheckTheorem { .. } => "check-theorem",
        Command::CheckAxioms { .. } => "check-axioms",
        Command::Spectral { .. } => "spectral",
        Command::Pushforward { .. } => "pushforward",
        Command::Oracle { .. } => "oracle",
        Command::Fmt { .. } => "fmt",
    }
}

fn dispatch(cli: &Cli) -> Result<Report, InputError> {
    let ex = exec(cli);
    match &cli.command {
        Command::Cohomology { file, open, trunc } => cohomology(file, open, trunc, ex),
        Command::Hyper { file, trunc } => hyper(file, trunc, ex),
        Command::Resolve { file, level } => resolve(file, *level),
        Command::CheckThomason { file, trunc } => check_thomason(file, trunc, ex),
        Command::CheckTheorem { file, seed, poset_size, max_dim, trials, trunc } => {
            check_theorem(file.as_deref(), *seed, *poset_size, *max_dim, *trials, trunc, ex)
        }
        Command::CheckAxioms { seed, trials, filtered, r, levels, max_dim, trunc } => {
            check_axioms(*seed, *trials, *filtered, *r, *levels, *max_dim, trunc, ex)
        }
        Command::Spectral { file, r, source, open, trunc } => spectral(file, *r, *source, open, trunc),
        Command::Pushforward { file, map, trunc } => pushforward(file, map.as_deref(), trunc, ex),
        Command::Oracle { file, trunc } => oracle(file, trunc, ex),
        Command::Fmt { .. } => unreachable!("fmt is handled before dispatch"),
    }
}

/// Run a parsed command line. Exit codes: 0 pass, 1 counterexample, 2 invalid input.
pub fn run(cli: &Cli) -> Outcome {
    if let Command::Fmt { file, in_place } = &cli.command {
        return match Problem::load(file) {
            Ok(p) => {
                let text = p.to_text();
                if *in_place {
                    match std::fs::write(file, &text) {
                        Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code: 0 },
                        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: cannot write {file}: {e}\n"), code: 2 },
                    }
                } else {
                    Outcome { stdout: text, stderr: String::new(), code: 0 }
                }
            }
            Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
        };
    }
    match dispatch(cli) {
        Ok(r) => {
            let code = i32::from(r.failed);
            let stdout = match cli.format {
                Style::Human => r.human,
                Style::Json => {
                    let mut doc = json!({"format": FORMAT, "command": command_name(&cli.command)});
                    doc["result"] = r.doc;
                    doc["status"] = json!(if r.failed { "counterexample" } else { "pass" });
                    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
                    s.push('\n');
                    s
                }
            };
            Outcome { stdout, stderr: String::new(), code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}
