//! `jdc`: command-line front end for the diagram groups, gropes and towers.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use jdc_core::io::{
    attached_element_from_json, attached_element_to_json, diagram_from_json, element_from_json, element_to_json, generators_csv,
    grope_from_json, grope_to_json, parse_json, tower_from_json, tower_to_json,
};
use jdc_core::notation::{format_attached, parse_attached, parse_diagram};
use jdc_core::selfcheck;
use jdc_core::skeleton::{pull_off, Skeleton};
use jdc_core::spaces::{compute_space, generate_graphs, generate_trees, numeric_alphabet, reduce_ihx};
use jdc_core::tower::{push_in, tau_hat, tau_hat_total, theorem1_witness};
use jdc_core::witness::{builtin_witness, WitnessKind};
use jdc_core::{
    grope::{psi_capped, psi_uncapped, psi_uncapped_graded},
    AttachedElement, Element, Error, Grading, Label, LabelMode, SpaceReport,
};

#[derive(Parser)]
#[command(name = "jdc", version, about = "Exact computations with Jacobi diagrams, gropes and Whitney towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Clone)]
struct Options {
    /// Degree (Vassiliev or grope, depending on --grading).
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Use the labels 1..=L.
    #[arg(long, global = true, conflicts_with = "label_set")]
    labels: Option<usize>,
    /// Comma-separated label alphabet.
    #[arg(long, global = true, value_delimiter = ',')]
    label_set: Option<Vec<String>>,
    /// Require pairwise distinct leaf labels.
    #[arg(long, global = true)]
    distinct: bool,
    #[arg(long, global = true, value_enum, default_value_t = GradingArg::Vassiliev)]
    grading: GradingArg,
    /// Quotient by IHX as well as AS.
    #[arg(long, global = true)]
    mod_ihx: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Read input from FILE instead of stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write output to FILE instead of stdout.
    #[arg(long = "out", global = true, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Vassiliev,
    Grope,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List AS generators of unitrivalent trees.
    GenTrees,
    /// List AS generators of connected unitrivalent graphs by grope degree.
    GenGraphs,
    /// Rank and torsion of a diagram group.
    Rank,
    /// Reduce an element modulo IHX.
    Reduce,
    /// Forget the strand order of an attached element.
    PullOff,
    /// Tree element of a grope encoding.
    Psi,
    /// Intersection tree element of a tower.
    Tau {
        /// Reduce the result modulo IHX.
        #[arg(long)]
        reduce_ihx: bool,
    },
    /// Transcribe a capped grope into a tower.
    PushIn,
    /// Print a built-in witness encoding.
    Witness {
        #[arg(value_enum)]
        name: WitnessName,
    },
    /// Run the built-in verifications.
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessName {
    Theorem1,
    #[value(name = "construction-4.1")]
    Construction41,
    #[value(name = "theorem-3")]
    Theorem3,
    #[value(name = "theorem-ihxn")]
    TheoremIhxn,
    #[value(name = "theorem-genihx-graph")]
    TheoremGenihxGraph,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = validate(&cli).and_then(|()| dispatch(&cli.command, &cli.opts));
    match result {
        Ok((mut text, ok)) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            if let Err(e) = emit(&cli.opts, &text) {
                eprintln!("jdc: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("jdc: usage: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("jdc: {m}");
            ExitCode::from(1)
        }
    }
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    let o = &cli.opts;
    let usage = |m: &str| Err(Failure::Usage(m.into()));
    match &cli.command {
        Command::GenTrees | Command::GenGraphs | Command::Rank => {
            if o.degree.is_none() {
                return usage("--degree is required");
            }
            if o.labels.is_none() && o.label_set.is_none() {
                return usage("--labels or --label-set is required");
            }
        }
        Command::Witness { name: WitnessName::TheoremIhxn } => match o.degree {
            Some(n) if n >= 3 => {}
            _ => return usage("theorem-ihxn needs --degree N with N >= 3"),
        },
        _ => {}
    }
    if let Some(set) = &o.label_set {
        if let Some(bad) = set.iter().find(|s| !jdc_core::notation::is_label(s)) {
            return usage(&format!("invalid label '{bad}'"));
        }
    }
    if matches!(cli.command, Command::GenGraphs) && o.distinct {
        return usage("--distinct applies to trees only");
    }
    Ok(())
}

fn emit(o: &Options, text: &str) -> io::Result<()> {
    match &o.output {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn read_input(o: &Options) -> Result<String, Failure> {
    match &o.input {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn alphabet(o: &Options) -> Vec<Label> {
    match (&o.label_set, o.labels) {
        (Some(set), _) => set.iter().map(|s| Label::new(s).expect("validated")).collect(),
        (None, Some(l)) => numeric_alphabet(l),
        (None, None) => Vec::new(),
    }
}

fn grading(o: &Options) -> Grading {
    match o.grading {
        GradingArg::Vassiliev => Grading::Vassiliev,
        GradingArg::Grope => Grading::Grope,
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn dispatch(cmd: &Command, o: &Options) -> Outcome {
    let out = match cmd {
        Command::GenTrees | Command::GenGraphs => {
            let n = o.degree.expect("validated");
            let labels = alphabet(o);
            let keys = if matches!(cmd, Command::GenTrees) {
                let mode = if o.distinct { LabelMode::Distinct } else { LabelMode::RepeatsAllowed };
                generate_trees(n, &labels, mode)?
            } else {
                generate_graphs(n, &labels)?
            };
            match o.format {
                Format::Csv => generators_csv(&keys),
                Format::Json => {
                    let gens: Vec<Value> = keys
                        .iter()
                        .map(|k| serde_json::json!({"diagram": jdc_core::notation::format_diagram(k.representative()), "mod2": k.is_two_torsion()}))
                        .collect();
                    pretty(&serde_json::json!({"degree": n, "generators": gens}))
                }
                Format::Text => keys
                    .iter()
                    .map(|k| {
                        let d = jdc_core::notation::format_diagram(k.representative());
                        if k.is_two_torsion() {
                            format!("{d} (mod 2)")
                        } else {
                            d
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            }
        }
        Command::Rank => {
            let mode = if o.distinct { LabelMode::Distinct } else { LabelMode::RepeatsAllowed };
            let (_, _, report) = compute_space(o.degree.expect("validated"), &alphabet(o), mode, grading(o), o.mod_ihx)?;
            format_report(&report, o.format)
        }
        Command::Reduce => format_element(&reduce_ihx(&read_element(&read_input(o)?)?)?, o.format),
        Command::PullOff => {
            let (skel, e) = read_attached(&read_input(o)?)?;
            format_element(&pull_off(&e, &skel)?, o.format)
        }
        Command::Psi => {
            let g = grope_from_json(&parse_json(&read_input(o)?)?)?;
            if g.capped() {
                format_attached_element(&psi_capped(&g)?, g.skeleton(), o.format)?
            } else {
                let e = match o.degree {
                    Some(n) => psi_uncapped_graded(&g, n)?,
                    None => psi_uncapped(&g)?,
                };
                format_element(&e, o.format)
            }
        }
        Command::Tau { reduce_ihx: reduce } => {
            let t = tower_from_json(&parse_json(&read_input(o)?)?)?;
            let e = match o.degree {
                Some(n) => tau_hat(&t, n)?,
                None => tau_hat_total(&t)?,
            };
            let e = if *reduce { reduce_ihx(&e)? } else { e };
            format_element(&e, o.format)
        }
        Command::PushIn => {
            let g = grope_from_json(&parse_json(&read_input(o)?)?)?;
            pretty(&tower_to_json(&push_in(&g)?))
        }
        Command::Witness { name } => {
            let kind = match name {
                WitnessName::Theorem1 => return Ok((pretty(&tower_to_json(&theorem1_witness())), true)),
                WitnessName::Construction41 => WitnessKind::Construction41,
                WitnessName::Theorem3 => WitnessKind::Theorem3,
                WitnessName::TheoremIhxn => WitnessKind::TheoremIhxn(o.degree.expect("validated")),
                WitnessName::TheoremGenihxGraph => WitnessKind::TheoremGenIhxGraph,
            };
            pretty(&grope_to_json(&builtin_witness(kind)?))
        }
        Command::Selfcheck => {
            let items = selfcheck::run();
            let ok = items.iter().all(|i| i.passed);
            let text = match o.format {
                Format::Json => pretty(&Value::Array(
                    items.iter().map(|i| serde_json::json!({"name": i.name, "passed": i.passed, "detail": i.detail})).collect(),
                )),
                Format::Csv => {
                    let mut s = String::from("name,passed,detail\n");
                    for i in &items {
                        s.push_str(&format!("{},{},\"{}\"\n", i.name, i.passed, i.detail.replace('"', "\"\"")));
                    }
                    s
                }
                Format::Text => items
                    .iter()
                    .map(|i| format!("{} {} ({})", if i.passed { "PASS" } else { "FAIL" }, i.name, i.detail))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            return Ok((text, ok));
        }
    };
    Ok((out, true))
}

fn format_report(r: &SpaceReport, f: Format) -> String {
    match f {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes"),
        Format::Csv => format!("{}\n{}", SpaceReport::CSV_HEADER, r.csv_row()),
        Format::Text => {
            let torsion: Vec<String> = r.torsion.iter().map(|t| format!("Z/{t}")).collect();
            let torsion = if torsion.is_empty() { "none".to_string() } else { torsion.join(" + ") };
            format!("degree {} ({}) generators {} rank {} torsion {}", r.degree, r.grading, r.generators, r.rank, torsion)
        }
    }
}

fn format_element(e: &Element, f: Format) -> String {
    match f {
        Format::Json => pretty(&element_to_json(e)),
        Format::Csv => {
            let mut s = String::from("diagram,coefficient,mod2\n");
            for (k, c) in e.terms() {
                s.push_str(&format!("\"{}\",{c},{}\n", jdc_core::Generator::describe(k).replace('"', "\"\""), k.is_two_torsion()));
            }
            s
        }
        Format::Text => e.to_string(),
    }
}

fn format_attached_element(e: &AttachedElement, skel: &Skeleton, f: Format) -> Result<String, Failure> {
    Ok(match f {
        Format::Json => pretty(&attached_element_to_json(e, skel)?),
        Format::Csv | Format::Text => {
            let sep = if f == Format::Csv { "," } else { " " };
            let mut lines = Vec::new();
            if f == Format::Csv {
                lines.push("coefficient,atree".to_string());
            }
            for (k, c) in e.terms() {
                lines.push(format!("{c}{sep}{}", format_attached(skel, &k.to_attached_tree())?));
            }
            if lines.is_empty() {
                lines.push("0".into());
            }
            lines.join("\n")
        }
    })
}

/// An element or a single diagram as JSON, or one diagram per line with an optional
/// integer coefficient in front.
fn read_element(text: &str) -> Result<Element, Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v = parse_json(trimmed)?;
        if v.get("terms").is_some() {
            return Ok(element_from_json(&v)?);
        }
        return Ok(Element::from_diagram(&diagram_from_json(&v)?)?);
    }
    let mut e = Element::zero();
    for line in trimmed.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (c, body) = split_coefficient(line);
        let d = if body.starts_with('{') { diagram_from_json(&parse_json(body)?)? } else { parse_diagram(body)? };
        e.add_diagram(&d, &c.into())?;
    }
    Ok(e)
}

/// An attached element as JSON, or one `atree` line per term with an
/// optional integer coefficient in front.
fn read_attached(text: &str) -> Result<(Skeleton, AttachedElement), Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return Ok(attached_element_from_json(&parse_json(trimmed)?)?);
    }
    let mut skel: Option<Skeleton> = None;
    let mut e = AttachedElement::zero();
    for line in trimmed.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (c, body) = split_coefficient(line);
        let (s, t) = parse_attached(body)?;
        if skel.as_ref().is_some_and(|k| *k != s) {
            return Err(Failure::Domain("terms use different skeletons".into()));
        }
        let term = AttachedElement::from_attached(&t, &s)?;
        e = e.add(&term.scalar_mul(&c.into()));
        skel = Some(s);
    }
    let skel = skel.ok_or_else(|| Failure::Domain("empty input".into()))?;
    Ok((skel, e))
}

fn split_coefficient(line: &str) -> (i64, &str) {
    if let Some((head, rest)) = line.split_once(char::is_whitespace) {
        if let Ok(c) = head.trim_start_matches('+').parse::<i64>() {
            return (c, rest.trim());
        }
    }
    (1, line)
}
