use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use et0l_core::coword::{apply_generator_map, build_coword_machine, crosscheck_oracle, CowordOptions};
use et0l_core::cspd::{check_normalized, normalize, Caps, CspdMachine, Order};
use et0l_core::equivalence::{cross_check, cspd_to_grammar, grammar_to_cspd, CrossCheckOptions};
use et0l_core::et0l::{reduce_extended, Bounds, Et0lGrammar};
use et0l_core::io;
use et0l_core::report::RunReport;
use et0l_core::trees::{Classification, Group};
use et0l_core::{Error, Result};

/// ET0L grammars, check-stack pushdown machines and co-word problems.
#[derive(Parser)]
#[command(name = "et0l", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Options {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Longest sentential form kept while deriving.
    #[arg(long, global = true, default_value_t = 64)]
    max_form: usize,
    /// Longest control word searched.
    #[arg(long, global = true, default_value_t = 8)]
    max_control: usize,
    /// Longest check-stack tried.
    #[arg(long = "max-cs", global = true, default_value_t = 8)]
    max_cs: usize,
    /// Pushdown height allowed above the check-stack.
    #[arg(long, global = true, default_value_t = 4)]
    slack: usize,
    /// Search machine runs depth-first.
    #[arg(long, global = true)]
    depth_first: bool,
    /// Leave timing out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
}

impl Options {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_control: self.max_control,
            max_form: self.max_form,
        }
    }

    fn caps(&self) -> Caps {
        Caps {
            slack: Some(self.slack),
            order: if self.depth_first {
                Order::DepthFirst
            } else {
                Order::BreadthFirst
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Derivation, enumeration and membership for grammars.
    #[command(subcommand)]
    Grammar(GrammarCmd),
    /// Simulation, validation and normalization of machines.
    #[command(subcommand)]
    Machine(MachineCmd),
    /// Translation between grammars and machines.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Compare a grammar and a machine on all words up to a length.
    Crosscheck {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Evaluation and structure of tree automorphisms.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Machines for the co-word problem of a group.
    #[command(subcommand)]
    Coword(CowordCmd),
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Every sentential form reachable under a fixed control word.
    Derive {
        #[arg(long)]
        grammar: PathBuf,
        /// Space-separated table names.
        #[arg(long)]
        control: String,
    },
    /// Terminal words up to a length.
    Enum {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_word: usize,
    },
    /// Membership of one word.
    Check {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum MachineCmd {
    /// Acceptance of one word.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        word: String,
        /// Fix the check-stack instead of searching over the language.
        #[arg(long)]
        check_stack: Option<String>,
    },
    /// Structural checks.
    Validate {
        #[arg(long)]
        machine: PathBuf,
    },
    /// Rewrite into the single-push, single-pop form.
    Normalize {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Grammar to machine.
    G2m {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Machine to grammar (normalizing first when needed).
    M2g {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Image of a vertex under a word; the first generator acts first.
    Eval {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        vertex: String,
    },
    /// Whether a word acts trivially.
    Trivial {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// The shortlex-least vertex moved by a word.
    Witness {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 16)]
        max_depth: usize,
    },
    /// Finitary, directed or neither, for each generator.
    Classify {
        #[arg(long)]
        group: PathBuf,
    },
    /// Spine of a directed generator.
    Spine {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        generator: String,
    },
}

#[derive(Subcommand)]
enum CowordCmd {
    /// Compile the co-word machine.
    Build {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Read words through the group's generator map.
        #[arg(long)]
        use_map: bool,
    },
    /// Run a co-word machine on a word of generator names.
    Check {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compare the machine with the restriction-tuple oracle.
    Crosscheck {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        use_map: bool,
    },
}

struct Session {
    report: RunReport,
    text: Vec<String>,
}

impl Session {
    fn new(verb: &str) -> Self {
        Session {
            report: RunReport::new(verb),
            text: Vec::new(),
        }
    }

    fn read(&mut self, role: &str, path: &Path) -> Result<String> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.report.input(role, s.as_bytes());
        Ok(s)
    }

    fn grammar(&mut self, path: &Path) -> Result<Et0lGrammar> {
        io::parse_grammar(&self.read("grammar", path)?)
    }

    fn machine(&mut self, path: &Path) -> Result<CspdMachine> {
        io::parse_machine(&self.read("machine", path)?)
    }

    fn group(&mut self, path: &Path) -> Result<Group> {
        io::parse_group(&self.read("group", path)?)
    }

    fn say(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    fn emit(&mut self, out: &Option<PathBuf>, contents: &str) -> Result<()> {
        match out {
            Some(p) => {
                std::fs::write(p, contents).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                self.report.verdict("written", p.display().to_string());
                self.say(format!("wrote {}", p.display()));
            }
            None => {
                self.report
                    .verdict("output", serde_json::from_str::<serde_json::Value>(contents).expect("json"));
                self.say(contents.trim_end());
            }
        }
        Ok(())
    }
}

fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Grammar(GrammarCmd::Derive { .. }) => "grammar derive",
        Command::Grammar(GrammarCmd::Enum { .. }) => "grammar enum",
        Command::Grammar(GrammarCmd::Check { .. }) => "grammar check",
        Command::Machine(MachineCmd::Run { .. }) => "machine run",
        Command::Machine(MachineCmd::Validate { .. }) => "machine validate",
        Command::Machine(MachineCmd::Normalize { .. }) => "machine normalize",
        Command::Convert(ConvertCmd::G2m { .. }) => "convert g2m",
        Command::Convert(ConvertCmd::M2g { .. }) => "convert m2g",
        Command::Crosscheck { .. } => "crosscheck",
        Command::Group(GroupCmd::Eval { .. }) => "group eval",
        Command::Group(GroupCmd::Trivial { .. }) => "group trivial",
        Command::Group(GroupCmd::Witness { .. }) => "group witness",
        Command::Group(GroupCmd::Classify { .. }) => "group classify",
        Command::Group(GroupCmd::Spine { .. }) => "group spine",
        Command::Coword(CowordCmd::Build { .. }) => "coword build",
        Command::Coword(CowordCmd::Check { .. }) => "coword check",
        Command::Coword(CowordCmd::Crosscheck { .. }) => "coword crosscheck",
    }
}

fn run(cmd: &Command, o: Options, s: &mut Session) -> Result<()> {
    match cmd {
        Command::Grammar(c) => grammar(c, o, s),
        Command::Machine(c) => machine(c, o, s),
        Command::Convert(c) => convert(c, s),
        Command::Crosscheck {
            grammar,
            machine,
            max_len,
        } => {
            let g = s.grammar(grammar)?;
            let m = s.machine(machine)?;
            let options = CrossCheckOptions {
                bounds: o.bounds(),
                max_check: o.max_cs,
                caps: o.caps(),
            };
            let r = cross_check(&g, &m, *max_len, options)?;
            s.say(format!(
                "{} words checked, {} accepted by both, {} disagreements",
                r.words_checked,
                r.accepted_by_both,
                r.disagreements.len()
            ));
            for d in &r.disagreements {
                s.say(format!("  {:?}: grammar {} machine {}", d.word, d.grammar, d.machine));
                s.report.disagreement(d);
            }
            if !r.inconclusive.is_empty() {
                s.say(format!("inconclusive: {:?}", r.inconclusive));
            }
            s.report.verdict("words_checked", r.words_checked);
            s.report.verdict("accepted_by_both", r.accepted_by_both);
            s.report.verdict("inconclusive", &r.inconclusive);
            s.report.verdict("machine_capped", r.machine_capped);
            Ok(())
        }
        Command::Group(c) => group(c, s),
        Command::Coword(c) => coword(c, o, s),
    }
}

fn grammar(c: &GrammarCmd, o: Options, s: &mut Session) -> Result<()> {
    match c {
        GrammarCmd::Derive { grammar, control } => {
            let g = s.grammar(grammar)?;
            let tables: Vec<&str> = control.split_whitespace().collect();
            let d = g.derive_all(&tables, o.max_form)?;
            let forms: Vec<String> = d.forms.iter().map(|f| g.render(f)).collect();
            for f in &forms {
                s.say(if f.is_empty() { "ε".to_string() } else { f.clone() });
            }
            s.report.verdict("forms", &forms);
            s.report.verdict("pruned", d.pruned);
        }
        GrammarCmd::Enum { grammar, max_word } => {
            let g = s.grammar(grammar)?;
            let sample = g.enumerate_language(*max_word, o.bounds());
            let mut words: Vec<Vec<u32>> = sample.words.into_iter().collect();
            words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            let words: Vec<String> = words.iter().map(|w| g.render(w)).collect();
            for w in &words {
                s.say(if w.is_empty() { "ε".to_string() } else { w.clone() });
            }
            if sample.pruned {
                s.say("(search stopped early; the list may be incomplete)");
            }
            s.report.verdict("words", &words);
            s.report.verdict("pruned", sample.pruned);
        }
        GrammarCmd::Check { grammar, word } => {
            let g = s.grammar(grammar)?;
            let w = g.word(word)?;
            let m = g.contains(&w, o.bounds())?;
            s.say(serde_json::to_string(&m).expect("json"));
            s.report.verdict("membership", &m);
        }
    }
    Ok(())
}

fn machine(c: &MachineCmd, o: Options, s: &mut Session) -> Result<()> {
    match c {
        MachineCmd::Run {
            machine,
            word,
            check_stack,
        } => {
            let m = s.machine(machine)?;
            let input = m.word(word)?;
            let r = match check_stack {
                Some(cs) => m.accepts_with(&m.word(cs)?, &input, o.caps())?,
                None => m.accepts_any(&input, o.max_cs, o.caps())?,
            };
            let witness = r.witness.as_ref().map(|w| m.render(w));
            s.say(if r.accepted { "accepted" } else { "rejected" });
            if let Some(w) = &witness {
                s.say(format!("check-stack: {w}"));
            }
            if r.capped {
                s.say("some runs hit the height cap");
            }
            s.report.verdict("accepted", r.accepted);
            s.report.verdict("witness", &witness);
            s.report.verdict("trace", &r.trace);
            s.report.verdict("capped", r.capped);
            s.report.verdict("above_check_stack", r.above_check_stack);
        }
        MachineCmd::Validate { machine } => {
            let m = s.machine(machine)?;
            let v = m.validate();
            for x in &v {
                s.say(x.to_string());
                s.report.violations.push(x.to_string());
            }
            let normalized = check_normalized(&m).is_ok();
            s.say(format!(
                "{} violations; {}",
                v.len(),
                if normalized { "normalized" } else { "not normalized" }
            ));
            s.report.verdict("normalized", normalized);
        }
        MachineCmd::Normalize { machine, out } => {
            let m = s.machine(machine)?;
            let n = normalize(&m)?;
            s.report.verdict("states", n.states.len());
            s.report.verdict("transitions", n.transitions.len());
            s.emit(out, &io::serialize_machine(&n))?;
        }
    }
    Ok(())
}

fn convert(c: &ConvertCmd, s: &mut Session) -> Result<()> {
    match c {
        ConvertCmd::G2m { grammar, out } => {
            let g = s.grammar(grammar)?;
            let m = grammar_to_cspd(&g)?;
            s.report.verdict("states", m.states.len());
            s.report.verdict("transitions", m.transitions.len());
            s.emit(out, &io::serialize_machine(&m))
        }
        ConvertCmd::M2g { machine, out } => {
            let m = s.machine(machine)?;
            let m = match check_normalized(&m) {
                Ok(_) => m,
                Err(_) => normalize(&m)?,
            };
            let g = reduce_extended(&cspd_to_grammar(&m)?)?;
            s.report.verdict("nonterminals", g.nonterminals().len());
            s.report.verdict("tables", g.tables().len());
            s.emit(out, &io::serialize_grammar(&g)?)
        }
    }
}

fn group(c: &GroupCmd, s: &mut Session) -> Result<()> {
    match c {
        GroupCmd::Eval { group, word, vertex } => {
            let g = s.group(group)?;
            let t = g.automaton();
            let v = t.vertex(vertex)?;
            let image = t.render(&t.eval_vertex(&g.word(word)?, &v));
            s.say(image.clone());
            s.report.verdict("image", image);
        }
        GroupCmd::Trivial { group, word } => {
            let g = s.group(group)?;
            let space = g.automaton().tuple_space(&g.word(word)?);
            s.say(if space.trivial { "trivial" } else { "nontrivial" });
            s.report.verdict("trivial", space.trivial);
            s.report.verdict("tuples", space.tuples);
            s.report.verdict("diameter", space.diameter);
        }
        GroupCmd::Witness {
            group,
            word,
            max_depth,
        } => {
            let g = s.group(group)?;
            let t = g.automaton();
            let w = t.find_witness(&g.word(word)?, *max_depth).map(|v| t.render(&v));
            s.say(w.clone().unwrap_or_else(|| "no moved vertex within the depth bound".into()));
            s.report.verdict("witness", w);
        }
        GroupCmd::Classify { group } => {
            let g = s.group(group)?;
            let t = g.automaton();
            for (name, &v) in g.generators() {
                let c = t.classify(v);
                let detail = match c {
                    Classification::Finitary { depth } => format!("finitary, depth {depth}"),
                    Classification::Directed { direction } => {
                        format!("directed towards {}", t.alphabet()[direction])
                    }
                    Classification::Neither => "neither".into(),
                };
                s.say(format!("{name}: {detail}"));
                s.report.verdict(name, c);
            }
        }
        GroupCmd::Spine { group, generator } => {
            let g = s.group(group)?;
            let t = g.automaton();
            let d = t.spine_decompose(g.generator(generator)?)?;
            let line = json!({
                "iota": t.render(&d.iota),
                "pi": t.render(&d.pi),
                "iota_image": t.render(&d.iota_image),
                "pi_image": t.render(&d.pi_image),
                "iota_restrictions": d.iota_restrictions.iter().map(|&q| t.state_name(q)).collect::<Vec<_>>(),
                "pi_restrictions": d.pi_restrictions.iter().map(|&q| t.state_name(q)).collect::<Vec<_>>(),
            });
            let show = |k: &str| match line[k].as_str() {
                Some("") | None => "ε".to_string(),
                Some(x) => x.to_string(),
            };
            s.say(format!(
                "ι = {}, π = {}, I = {}, Π = {}",
                show("iota"),
                show("pi"),
                show("iota_image"),
                show("pi_image")
            ));
            s.report.verdict("spine", line);
        }
    }
    Ok(())
}

fn coword(c: &CowordCmd, o: Options, s: &mut Session) -> Result<()> {
    let compile = |g: &Group, use_map: bool| match (use_map, g.map()) {
        (true, Some(map)) => apply_generator_map(g, map),
        (true, None) => Err(Error::schema("group.map", "the group file has no map")),
        (false, _) => build_coword_machine(g),
    };
    match c {
        CowordCmd::Build { group, out, use_map } => {
            let g = s.group(group)?;
            let cm = compile(&g, *use_map)?;
            s.report.verdict("states", cm.machine.states.len());
            s.report.verdict("transitions", cm.machine.transitions.len());
            s.emit(out, &io::serialize_machine(&cm.machine))?;
        }
        CowordCmd::Check { machine, word } => {
            let m = s.machine(machine)?;
            let input = m.word(word)?;
            let r = m.accepts_any(&input, o.max_cs, o.caps())?;
            let witness = r.witness.as_ref().map(|w| m.symbols.render_compact(w));
            s.say(if r.accepted {
                "nontrivial"
            } else {
                "no moved vertex within the check-stack bound"
            });
            if let Some(w) = &witness {
                s.say(format!("check-stack: {w}"));
            }
            s.report.verdict("accepted", r.accepted);
            s.report.verdict("witness", witness);
        }
        CowordCmd::Crosscheck {
            group,
            max_len,
            use_map,
        } => {
            let g = s.group(group)?;
            let cm = compile(&g, *use_map)?;
            let options = CowordOptions {
                max_len: *max_len,
                max_check: 2,
                caps: o.caps(),
            };
            let r = crosscheck_oracle(&g, &cm, options)?;
            s.say(format!(
                "{} words checked, {} nontrivial, {} disagreements, {} invalid witnesses",
                r.words_checked,
                r.nontrivial,
                r.disagreements.len(),
                r.invalid_witnesses.len()
            ));
            for d in r.disagreements.iter().chain(&r.invalid_witnesses) {
                s.say(format!("  {}: oracle trivial {} machine {}", d.word.join(" "), d.trivial, d.accepted));
                s.report.disagreement(d);
            }
            s.report.verdict("words_checked", r.words_checked);
            s.report.verdict("nontrivial", r.nontrivial);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut s = Session::new(verb_name(&cli.command));
    let start = Instant::now();
    let result = run(&cli.command, cli.opts, &mut s);
    if !cli.opts.no_timing {
        s.report.timing_ms = Some(start.elapsed().as_millis());
    }
    if let Err(e) = result {
        if cli.opts.json {
            s.report.violations.push(e.to_string());
            println!("{}", s.report.to_json());
        }
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if cli.opts.json {
        println!("{}", s.report.to_json());
    } else {
        for line in &s.text {
            println!("{line}");
        }
    }
    if s.report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
