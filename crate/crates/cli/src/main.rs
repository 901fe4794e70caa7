//! `freelat`: command-line front end for the free lattice kernel.
//!
//! Exit status: 0 when the property holds or every check passes, 1 when a
//! checked property fails, 2 on usage or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freelat::bipartite::eval_ae_sentence;
use freelat::reduction::phi_star::translate_phi_star;
use freelat::reduction::{build_wq, term_json, verify_counterexample, verify_lemma_wq, xi_embed};
use freelat::whitman_embed::{GeneratorChain, DEFAULT_VERIFY_BOUND};
use freelat::{
    parse_raw, parse_term, AESentence, BipartiteStructure, Conclusion, Mode, PrintStyle,
    ReductionReport, Sampler, TermArena, TermId, VarNames,
};

#[derive(Parser)]
#[command(
    name = "freelat",
    version,
    about = "Decide and explore free lattice terms"
)]
struct Cli {
    /// Output format; `tptp` and `sexp` apply to `phistar` only
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Work in F_m directly or push into F_3 along Whitman's embedding
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Direct)]
    mode: ModeArg,

    /// Comma separated generator names; the i-th name denotes x_i
    #[arg(long, global = true)]
    vars: Option<String>,

    /// Give up with exit status 2 after this many seconds
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: Option<u64>,

    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of sampled term pairs on which zeta is checked to be an order
    /// embedding (f3 mode, `whitman-gens`, `verify-f3`)
    #[arg(long, global = true, default_value_t = 0)]
    samples: usize,

    /// Largest chain stage certified independent
    #[arg(long, global = true, default_value_t = DEFAULT_VERIFY_BOUND)]
    verify_bound: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tptp,
    Sexp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    F3,
}

#[derive(Subcommand)]
enum Command {
    /// Decide s <= t
    Le { s: String, t: String },
    /// Decide s = t in the free lattice
    Equiv { s: String, t: String },
    /// Print the canonical form
    Canon { t: String },
    /// Check that a term is written in canonical form, exactly as given
    IsCanon { t: String },
    /// Canonical joinands (empty unless the canonical form is a proper join)
    Joinands { t: String },
    /// Decide whether the given terms form an independent set
    Indep {
        #[arg(required = true)]
        terms: Vec<String>,
    },
    /// The set { u : t E u }
    Eset { t: String },
    /// Doubly minimal nontrivial join covers
    Covers { t: String },
    /// Evaluate Psi on an element
    Psi {
        t: String,
        /// Print every condition, not only the outcome
        #[arg(long)]
        report: bool,
    },
    /// Check that a bipartite structure is nice
    Nice { structure: PathBuf },
    /// Evaluate an exists-forall sentence on a structure
    Eval {
        sentence: PathBuf,
        structure: PathBuf,
    },
    /// Print the images of the standard poset embedding
    EmbedPoset { structure: PathBuf },
    /// Print the word w_Q
    Wq { structure: PathBuf },
    /// Translate a sentence into its free lattice counterpart
    Phistar { sentence: PathBuf },
    /// Check the w_Q lemma items on a structure
    VerifyLemma { structure: PathBuf },
    /// Run the full counterexample pipeline for a sentence on a structure
    CheckCounterexample {
        sentence: PathBuf,
        structure: PathBuf,
    },
    /// Print Whitman's generators z_1..z_n of F_3
    WhitmanGens {
        n: usize,
        /// Print per-stage sizes instead of the terms
        #[arg(long)]
        stats: bool,
    },
    /// Check the w_Q lemma items for zeta(w_Q) in F_3
    VerifyF3 { structure: PathBuf },
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value, ok: bool) -> Self {
        Output {
            text: text.into(),
            json,
            ok,
        }
    }

    fn verdict(holds: bool, json: Value) -> Self {
        Output::new(holds.to_string(), json, holds)
    }
}

struct Ctx {
    arena: TermArena,
    names: VarNames,
    var_list: Option<Vec<String>>,
    format: Format,
    mode: Mode,
    seed: u64,
    samples: usize,
    verify_bound: usize,
}

impl Ctx {
    fn term(&mut self, text: &str) -> Result<TermId> {
        parse_term(&mut self.arena, text, &self.names)
            .with_context(|| format!("cannot parse '{text}'"))
    }

    fn show(&self, t: TermId) -> String {
        let text = self.arena.print(t, PrintStyle::Ascii);
        match &self.var_list {
            Some(names) => rename(&text, names),
            None => text,
        }
    }

    fn show_all(&self, ts: &[TermId]) -> Vec<String> {
        ts.iter().map(|&t| self.show(t)).collect()
    }
}

/// Replace each `xN` token by the N-th name, when there is one.
fn rename(text: &str, names: &[String]) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    let mut prev_word = false;
    while let Some((i, c)) = chars.next() {
        if c == 'x' && !prev_word {
            let digits: String = text[i + 1..]
                .chars()
                .take_while(char::is_ascii_digit)
                .collect();
            let name = digits
                .parse::<usize>()
                .ok()
                .and_then(|n| n.checked_sub(1))
                .and_then(|k| names.get(k));
            if let Some(name) = name {
                out.push_str(name);
                for _ in 0..digits.len() {
                    chars.next();
                }
                prev_word = true;
                continue;
            }
        }
        prev_word = c.is_alphanumeric() || c == '_';
        out.push(c);
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn structure(path: &Path) -> Result<BipartiteStructure> {
    BipartiteStructure::from_json(&read(path)?)
        .with_context(|| format!("invalid structure in {}", path.display()))
}

fn sentence(path: &Path) -> Result<AESentence> {
    AESentence::from_json(&read(path)?)
        .with_context(|| format!("invalid sentence in {}", path.display()))
}

fn lines(items: &[String]) -> String {
    items.join("\n")
}

fn run(cmd: Command, cx: &mut Ctx) -> Result<Output> {
    if matches!(cx.format, Format::Tptp | Format::Sexp) && !matches!(cmd, Command::Phistar { .. }) {
        bail!("--format tptp|sexp only applies to phistar");
    }
    let out = match cmd {
        Command::Le { s, t } => {
            let (s, t) = (cx.term(&s)?, cx.term(&t)?);
            let holds = cx.arena.leq(s, t);
            Output::verdict(holds, json!({ "le": holds }))
        }
        Command::Equiv { s, t } => {
            let (s, t) = (cx.term(&s)?, cx.term(&t)?);
            let holds = cx.arena.equiv(s, t);
            Output::verdict(holds, json!({ "equiv": holds }))
        }
        Command::Canon { t } => {
            let t = cx.term(&t)?;
            let c = cx.arena.canonical_form(t);
            let shown = cx.show(c);
            Output::new(shown.clone(), json!({ "canonical": shown }), true)
        }
        Command::IsCanon { t } => {
            let raw = parse_raw(&t, &cx.names).with_context(|| format!("cannot parse '{t}'"))?;
            let holds = cx.arena.is_canonical_raw(&raw);
            Output::verdict(holds, json!({ "lemma": "3.1", "canonical": holds }))
        }
        Command::Joinands { t } => {
            let t = cx.term(&t)?;
            let js = cx.arena.canonical_joinands(t);
            let shown = cx.show_all(&js);
            Output::new(lines(&shown), json!({ "joinands": shown }), true)
        }
        Command::Indep { terms } => {
            let ts = terms
                .iter()
                .map(|s| cx.term(s))
                .collect::<Result<Vec<_>>>()?;
            let holds = cx.arena.is_independent(&ts);
            Output::verdict(holds, json!({ "independent": holds }))
        }
        Command::Eset { t } => {
            let t = cx.term(&t)?;
            let es = cx.arena.e_set(t)?;
            let shown = cx.show_all(&es);
            Output::new(lines(&shown), json!({ "eset": shown }), true)
        }
        Command::Covers { t } => {
            let t = cx.term(&t)?;
            let covers = cx.arena.doubly_minimal_join_covers(t)?;
            let shown: Vec<Vec<String>> = covers.iter().map(|c| cx.show_all(&c.elements)).collect();
            let text = shown
                .iter()
                .map(|c| format!("{{{}}}", c.join(", ")))
                .collect::<Vec<_>>();
            Output::new(lines(&text), json!({ "covers": shown }), true)
        }
        Command::Psi { t, report } => {
            let t = cx.term(&t)?;
            let r = cx.arena.psi_check(t);
            let mut text = r.outcome.to_string();
            if report {
                for c in freelat::PsiCondition::ALL {
                    let v = match r.condition(c) {
                        Some(b) => b.to_string(),
                        None => "not reached".into(),
                    };
                    text.push_str(&format!("\n({}) {}: {v}", c.label(), c.describe()));
                }
                if let Some(f) = &r.failure {
                    text.push_str(&format!(
                        "\nwitnesses: {}",
                        cx.show_all(&f.witnesses).join(", ")
                    ));
                }
            }
            Output::new(text, r.to_json(&cx.arena), r.outcome)
        }
        Command::Nice { structure: path } => {
            let q = structure(&path)?;
            let r = q.is_nice();
            let mut text = r.nice.to_string();
            for (name, ok) in [
                ("at least three up elements", r.up_size),
                ("at least three down elements", r.down_size),
                ("up degrees", r.up_degrees),
                ("down degrees", r.down_degrees),
            ] {
                text.push_str(&format!("\n{name}: {ok}"));
            }
            for f in &r.failures {
                text.push_str(&format!("\n  {f}"));
            }
            Output::new(text, r.to_json(), r.nice)
        }
        Command::Eval {
            sentence: sp,
            structure: qp,
        } => {
            let (phi, q) = (sentence(&sp)?, structure(&qp)?);
            let ev = eval_ae_sentence(&phi, &q);
            let mut text = ev.holds.to_string();
            if let Some(w) = &ev.witness {
                let names: Vec<&str> = w.iter().map(|&i| q.name(i)).collect();
                text.push_str(&format!("\nwitness: {}", names.join(", ")));
            }
            Output::new(text, ev.to_json(&q), ev.holds)
        }
        Command::EmbedPoset { structure: path } => {
            let q = structure(&path)?;
            let xi = xi_embed(&mut cx.arena, &q);
            let pairs: Vec<(String, String)> = q
                .elements()
                .map(str::to_string)
                .zip(cx.show_all(&xi))
                .collect();
            let text = pairs
                .iter()
                .map(|(n, t)| format!("{n} -> {t}"))
                .collect::<Vec<_>>();
            let map: serde_json::Map<String, Value> =
                pairs.into_iter().map(|(n, t)| (n, json!(t))).collect();
            Output::new(lines(&text), json!({ "xi": map }), true)
        }
        Command::Wq { structure: path } => {
            let q = structure(&path)?;
            let w = build_wq(&mut cx.arena, &q)?;
            let w = match cx.mode {
                Mode::Direct => w,
                Mode::F3 => {
                    let chain = GeneratorChain::build(&mut cx.arena, q.len(), cx.verify_bound)?;
                    chain.zeta(&mut cx.arena, w)?
                }
            };
            let shown = term_json(&cx.arena, w);
            let text = match &shown {
                Value::String(s) => s.clone(),
                _ => cx.arena.print_dag(w).join("\n"),
            };
            Output::new(text, json!({ "mode": cx.mode.label(), "wq": shown }), true)
        }
        Command::Phistar { sentence: path } => {
            let star = translate_phi_star(&sentence(&path)?);
            let (tptp, sexp) = (star.to_tptp(), star.to_sexp());
            let text = if cx.format == Format::Sexp {
                sexp.clone()
            } else {
                tptp.clone()
            };
            Output::new(text, json!({ "tptp": tptp, "sexp": sexp }), true)
        }
        Command::VerifyLemma { structure: path } => {
            let q = structure(&path)?;
            let r = verify_lemma_wq(&mut cx.arena, &q, cx.mode)?;
            let samples = sample_zeta(cx, &q)?;
            let ok = r.items_ok() && samples.as_ref().is_none_or(|s| s.ok);
            lemma_output(cx, &q, &r, samples, ok)
        }
        Command::VerifyF3 { structure: path } => {
            let q = structure(&path)?;
            let nice = q.is_nice();
            if !nice.nice {
                bail!("structure is not nice: {}", nice.failures.join("; "));
            }
            cx.mode = Mode::F3;
            let r = verify_lemma_wq(&mut cx.arena, &q, Mode::F3)?;
            let samples = sample_zeta(cx, &q)?;
            let ok = r.items_ok() && samples.as_ref().is_none_or(|s| s.ok);
            lemma_output(cx, &q, &r, samples, ok)
        }
        Command::CheckCounterexample {
            sentence: sp,
            structure: qp,
        } => {
            let (phi, q) = (sentence(&sp)?, structure(&qp)?);
            let r = verify_counterexample(&mut cx.arena, &phi, &q, cx.mode)?;
            let conclusion = r.conclusion.unwrap_or(Conclusion::Inconclusive);
            let mut text = format!("conclusion: {}", conclusion.label());
            text.push('\n');
            text.push_str(&item_lines(&r));
            if let Some(phi_check) = &r.phi {
                for o in &phi_check.on_q.outcomes {
                    if let Some(y) = &o.refuted_by {
                        let xs: Vec<&str> = o.x.iter().map(|&i| q.name(i)).collect();
                        let ys: Vec<&str> = y.iter().map(|&i| q.name(i)).collect();
                        text.push_str(&format!(
                            "\nx = ({}) refuted by y = ({})",
                            xs.join(", "),
                            ys.join(", ")
                        ));
                    }
                }
            }
            Output::new(
                text,
                r.to_json(&cx.arena, &q),
                conclusion == Conclusion::PhiHoldsOnInstance,
            )
        }
        Command::WhitmanGens { n, stats } => {
            if n == 0 {
                bail!("n must be at least 1");
            }
            let chain = GeneratorChain::build(&mut cx.arena, n, cx.verify_bound)?;
            let samples = sample_chain(cx, &chain, 3.min(n) as u32);
            let ok = samples.as_ref().is_none_or(|s| s.ok);
            let mut out = if stats {
                chain_stats(cx, &chain)
            } else {
                let zs: Vec<Value> = chain.z.iter().map(|&z| term_json(&cx.arena, z)).collect();
                let text = chain
                    .z
                    .iter()
                    .enumerate()
                    .map(|(k, &z)| match &zs[k] {
                        Value::String(s) => format!("z{} = {s}", k + 1),
                        _ => format!("z{} =\n{}", k + 1, cx.arena.print_dag(z).join("\n")),
                    })
                    .collect::<Vec<_>>();
                Output::new(
                    lines(&text),
                    json!({ "z": zs, "verified_stages": chain.verified_stages }),
                    true,
                )
            };
            attach_samples(&mut out, samples);
            out.ok = ok;
            out
        }
    };
    Ok(out)
}

fn item_lines(r: &ReductionReport) -> String {
    let mut text = format!(
        "(1) canonical form: {}\n(2) E-set equals image set: {}\n(2) E-set order isomorphic to Q: {}\n(3) Psi holds: {}",
        r.canonical_ok, r.eset_ok, r.iso_ok, r.psi.outcome
    );
    if let Some(c) = r.psi.failed_at() {
        text.push_str(&format!(" (fails at ({}): {})", c.label(), c.describe()));
    }
    if let Err(e) = &r.eset_terms {
        text.push_str(&format!("\nE-set: {e}"));
    }
    text
}

fn lemma_output(
    cx: &Ctx,
    q: &BipartiteStructure,
    r: &ReductionReport,
    samples: Option<SampleCheck>,
    ok: bool,
) -> Output {
    let text = format!("mode: {}\n{}", cx.mode.label(), item_lines(r));
    let mut out = Output::new(text, r.to_json(&cx.arena, q), ok);
    attach_samples(&mut out, samples);
    out
}

struct SampleCheck {
    pairs: usize,
    ok: bool,
    counterexample: Option<(String, String)>,
}

fn attach_samples(out: &mut Output, samples: Option<SampleCheck>) {
    if let Some(s) = samples {
        out.text.push_str(&format!(
            "\nzeta order embedding on {} sampled pairs: {}",
            s.pairs, s.ok
        ));
        out.json["zeta_samples"] = json!({
            "pairs": s.pairs,
            "ok": s.ok,
            "counterexample": s.counterexample,
        });
    }
}

fn sample_zeta(cx: &mut Ctx, q: &BipartiteStructure) -> Result<Option<SampleCheck>> {
    if cx.mode != Mode::F3 || cx.samples == 0 {
        return Ok(None);
    }
    let chain = GeneratorChain::build(&mut cx.arena, q.len(), cx.verify_bound)?;
    Ok(sample_chain(cx, &chain, q.len().min(4) as u32))
}

/// Check `s <= t iff zeta(s) <= zeta(t)` on seeded random pairs over
/// `x1..x{gens}`.
fn sample_chain(cx: &mut Ctx, chain: &GeneratorChain, gens: u32) -> Option<SampleCheck> {
    if cx.samples == 0 {
        return None;
    }
    let mut sampler = Sampler::new(cx.seed);
    for _ in 0..cx.samples {
        let s = sampler.term(&mut cx.arena, gens, 3);
        let t = sampler.term(&mut cx.arena, gens, 3);
        let zs = chain
            .zeta(&mut cx.arena, s)
            .expect("chain covers the sampled generators");
        let zt = chain
            .zeta(&mut cx.arena, t)
            .expect("chain covers the sampled generators");
        if cx.arena.leq(s, t) != cx.arena.leq(zs, zt) {
            return Some(SampleCheck {
                pairs: cx.samples,
                ok: false,
                counterexample: Some((cx.show(s), cx.show(t))),
            });
        }
    }
    Some(SampleCheck {
        pairs: cx.samples,
        ok: true,
        counterexample: None,
    })
}

fn chain_stats(cx: &Ctx, chain: &GeneratorChain) -> Output {
    let mut rows = Vec::new();
    let mut text = vec!["stage  members  dag_nodes  certified".to_string()];
    for (i, stage) in chain.stages.iter().enumerate() {
        let dag = cx.arena.shared_dag_size(stage);
        let certified = i < chain.verified_stages;
        text.push(format!(
            "X{:<5} {:>7}  {:>9}  {}",
            i + 3,
            stage.len(),
            dag,
            certified
        ));
        rows.push(json!({ "stage": i + 3, "members": stage.len(), "dag_nodes": dag, "certified": certified }));
    }
    text.push("k  dag_nodes  tree_size".to_string());
    let mut zs = Vec::new();
    for (k, &z) in chain.z.iter().enumerate() {
        let (dag, tree) = (cx.arena.dag_size(z), cx.arena.tree_size(z));
        text.push(format!("z{:<2} {:>8}  {:>9}", k + 1, dag, tree));
        zs.push(json!({ "k": k + 1, "dag_nodes": dag, "tree_size": tree }));
    }
    Output::new(lines(&text), json!({ "stages": rows, "z": zs }), true)
}

fn execute(cli: Cli) -> Result<Output> {
    let var_list: Option<Vec<String>> = cli.vars.as_ref().map(|list| {
        list.split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect()
    });
    let names = match &var_list {
        Some(list) => VarNames::explicit(list.clone()),
        None => VarNames::auto(),
    };
    let mut cx = Ctx {
        arena: TermArena::new(),
        names,
        var_list,
        format: cli.format,
        mode: match cli.mode {
            ModeArg::Direct => Mode::Direct,
            ModeArg::F3 => Mode::F3,
        },
        seed: cli.seed,
        samples: cli.samples,
        verify_bound: cli.verify_bound,
    };
    run(cli.command, &mut cx)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let budget = cli.budget_secs.map(Duration::from_secs);

    let result = match budget {
        None => execute(cli),
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            thread::spawn(move || {
                let _ = tx.send(execute(cli));
            });
            match rx.recv_timeout(limit) {
                Ok(r) => r,
                Err(_) => Err(anyhow::anyhow!(
                    "time budget of {}s exceeded",
                    limit.as_secs()
                )),
            }
        }
    };

    match result {
        Ok(out) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("report serializes"),
                _ => out.text,
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(io::stdout().lock(), "{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
