//! Command-line dispatch. `run` is the whole program minus process I/O.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::garside::{CatElement, GarsideEntry, Structure};
use crate::groupoid;
use crate::heap::{self, check_heap, check_prebraiding};
use crate::io::{self, Document, IoError};
use crate::oracle::{oracle_check, DEFAULT_CAP};
use crate::presentation::{check_conditions, extract_solution, roundtrip_check, ConditionReport};
use crate::quiver::{PathWord, Quiver};
use crate::rc::{derive_bullet, derive_star};
use crate::ybm::{BraidedQuiver, ViolationReport, DEFAULT_MAX_VIOLATIONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gq", version, about = "Braided quivers, their structure categories and groupoids")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum violations listed per check.
    #[arg(long, global = true, env = "GQ_MAX_VIOLATIONS", default_value_t = DEFAULT_MAX_VIOLATIONS)]
    max_violations: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Side {
    #[arg(long)]
    right: bool,
    #[arg(long)]
    left: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GridKind {
    #[arg(long)]
    star: bool,
    #[arg(long)]
    bullet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the braid relation, involutivity and non-degeneracy.
    Validate { file: String },
    /// Print the derived ⋆ table (or • with --co).
    DeriveRc {
        file: String,
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        co: bool,
    },
    /// Fill a complement grid for two paths.
    Grid {
        file: String,
        #[command(flatten)]
        kind: GridKind,
        p: String,
        q: String,
    },
    /// List the finite Garside family.
    GarsideFamily { file: String },
    /// Strict greedy normal form of a path.
    NormalForm { file: String, path: String },
    /// Decide equality in the structure category, or the groupoid with --groupoid.
    Equal {
        file: String,
        p: String,
        q: String,
        #[arg(long)]
        groupoid: bool,
    },
    /// Right-lcm of paths with a common source, or left-lcm of paths with a common target.
    Lcm {
        file: String,
        #[command(flatten)]
        side: Side,
        p: String,
        q: String,
    },
    /// Compare normal forms with breadth-first equivalence classes.
    OracleCheck {
        file: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Check a presentation and extract its solution.
    FromPresentation {
        file: String,
        /// Where to write the solution ("-" for stdout).
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
    },
    /// Build the solution of a braided ternary operation.
    FromHeap {
        file: String,
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
    },
    /// Build the solution of a group's heap.
    FromGroup {
        file: String,
        /// Largest group order accepted.
        #[arg(long, default_value_t = io::DEFAULT_MAX_GROUP_ORDER)]
        max_order: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
    },
    /// Check the heap axioms of a ternary operation.
    CheckHeap { file: String },
    /// Print a built-in example document.
    Example {
        name: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Io(IoError),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e)
    }
}

macro_rules! usage {
    ($e:expr) => {
        $e.map_err(|e| Failure::Usage(e.to_string()))
    };
}

struct Ctx<'a> {
    json: bool,
    cap: usize,
    stdin: &'a mut dyn Read,
    out: String,
    err: String,
}

impl Ctx<'_> {
    fn read(&mut self, file: &str) -> Result<Document, Failure> {
        let text = if file == "-" {
            let mut s = String::new();
            usage!(self.stdin.read_to_string(&mut s))?;
            s
        } else {
            usage!(std::fs::read_to_string(PathBuf::from(file)).map_err(|e| format!("{file}: {e}")))?
        };
        Ok(io::parse(&text)?)
    }

    fn solution(&mut self, file: &str) -> Result<BraidedQuiver, Failure> {
        let doc = self.read(file)?;
        Ok(io::load_solution(&doc)?)
    }

    fn structure(&mut self, file: &str) -> Result<Structure, Failure> {
        let s = self.solution(file)?;
        Structure::new(s).map_err(|e| Failure::Io(IoError::Schema(e.to_string())))
    }

    /// Emits `value` under --json, `text` otherwise.
    fn emit(&mut self, value: Value, text: String) {
        if self.json {
            self.out.push_str(&serde_json::to_string_pretty(&value).expect("json"));
            self.out.push('\n');
        } else {
            self.out.push_str(&text);
        }
    }

    fn write_solution(&mut self, s: &BraidedQuiver, output: Option<&str>) -> Result<(), Failure> {
        let text = io::serialize(&io::solution_document(s));
        match output {
            None => {}
            Some("-") => {
                // Report moves to stderr so stdout stays a clean document.
                self.err.push_str(&std::mem::take(&mut self.out));
                self.out = text;
            }
            Some(path) => usage!(std::fs::write(path, text).map_err(|e| format!("{path}: {e}")))?,
        }
        Ok(())
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, cap: cli.max_violations, stdin, out: String::new(), err: String::new() };
    let code = match dispatch(&mut ctx, cli.command) {
        Ok(pass) => {
            if pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(ctx.err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_USAGE
        }
    };
    Outcome { code, stdout: ctx.out, stderr: ctx.err }
}

fn parse_in(q: &Quiver, text: &str) -> Result<PathWord, Failure> {
    usage!(q.parse_path(text))
}

fn ids(q: &Quiver, atoms: &[usize]) -> Vec<String> {
    atoms.iter().map(|&a| q.arrow_id(a).to_string()).collect()
}

fn report_text(name: &str, r: &ViolationReport) -> String {
    let mut s = String::new();
    if r.is_empty() {
        let _ = writeln!(s, "{name}: ok");
        return s;
    }
    let _ = writeln!(s, "{name}: {} violation(s)", r.total);
    for v in &r.violations {
        let _ = writeln!(s, "  {} ({}): {}", v.kind, v.witness.join(", "), v.detail);
    }
    if r.truncated() {
        let _ = writeln!(s, "  ... {} more", r.total - r.violations.len());
    }
    s
}

fn entry_json(q: &Quiver, e: &GarsideEntry) -> Value {
    json!({
        "source": q.vertex_name(e.source),
        "target": q.vertex_name(e.target),
        "atoms": ids(q, &e.atoms),
        "representative": q.format_path(&e.repr),
        "length": e.len(),
    })
}

fn nf_text(q: &Quiver, x: &CatElement) -> String {
    if x.nf.is_empty() {
        return format!("{}{}", crate::quiver::UNIT_PREFIX, q.vertex_name(x.source));
    }
    x.nf.iter().map(|e| format!("({})", q.format_path(&e.repr))).collect::<Vec<_>>().join(" | ")
}

fn nf_json(q: &Quiver, x: &CatElement) -> Value {
    json!({
        "source": q.vertex_name(x.source),
        "target": q.vertex_name(x.target),
        "length": x.length,
        "entries": x.nf.iter().map(|e| entry_json(q, e)).collect::<Vec<_>>(),
    })
}

fn check_text<T: Serialize>(report: &T) -> String {
    // Reports are flat maps of {holds, witness(es)}; print one line per check.
    let mut s = String::new();
    let Value::Object(map) = serde_json::to_value(report).expect("json") else { return s };
    for (k, v) in map {
        match v.get("holds").and_then(Value::as_bool) {
            Some(true) => {
                let _ = writeln!(s, "{k}: holds");
            }
            Some(false) => {
                let w = v.get("witness").or_else(|| v.get("witnesses")).cloned().unwrap_or(Value::Null);
                let _ = writeln!(s, "{k}: fails {w}");
            }
            None => {
                let _ = writeln!(s, "{k}: {v}");
            }
        }
    }
    s
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<bool, Failure> {
    match command {
        Command::Validate { file } => {
            let s = ctx.solution(&file)?;
            let (ybe, inv, nd) =
                (s.check_ybe_capped(ctx.cap), s.check_involutive_capped(ctx.cap), s.check_nondegenerate_capped(ctx.cap));
            let pass = ybe.is_empty() && inv.is_empty() && nd.is_empty();
            let text = [("braid", &ybe), ("involutive", &inv), ("nondegenerate", &nd)]
                .iter()
                .map(|(n, r)| report_text(n, r))
                .collect::<String>()
                + if pass { "valid\n" } else { "invalid\n" };
            ctx.emit(json!({ "braid": ybe, "involutive": inv, "nondegenerate": nd, "valid": pass }), text);
            Ok(pass)
        }
        Command::DeriveRc { file, complete, co } => {
            let s = ctx.solution(&file)?;
            let failed = |e: crate::rc::RcError| Failure::Io(IoError::Schema(e.to_string()));
            let (table, q, op) = if co {
                let mut c = derive_bullet(&s).map_err(failed)?;
                if complete {
                    c = c.complete().map_err(failed)?;
                }
                let q = c.completed_quiver().unwrap_or(c.quiver()).clone();
                (c.table(), q, "•")
            } else {
                let mut r = derive_star(&s).map_err(failed)?;
                if complete {
                    r = r.complete().map_err(failed)?;
                }
                let q = r.completed_quiver().unwrap_or(r.quiver()).clone();
                (r.table(), q, "⋆")
            };
            let rows: Vec<[&str; 3]> = table.iter().map(|&(x, y, z)| [q.arrow_id(x), q.arrow_id(y), q.arrow_id(z)]).collect();
            let text = rows.iter().map(|[x, y, z]| format!("{x} {op} {y} = {z}\n")).collect();
            ctx.emit(json!({ "op": op, "table": rows }), text);
            Ok(true)
        }
        Command::Grid { file, kind, p, q } => {
            let st = ctx.structure(&file)?;
            let cq = st.completed_quiver();
            let (p, q) = (parse_in(cq, &p)?, parse_in(cq, &q)?);
            let (a, b) = if kind.star {
                usage!(st.rc().grid_star(&p, &q))?
            } else {
                usage!(st.co().grid_bullet(&p, &q))?
            };
            let op = if kind.star { "⋆" } else { "•" };
            let (pq, qp) = (cq.format_path(&a), cq.format_path(&b));
            let text = format!("p {op} q = {pq}\nq {op} p = {qp}\n");
            ctx.emit(json!({ "p_q": pq, "q_p": qp }), text);
            Ok(true)
        }
        Command::GarsideFamily { file } => {
            let st = ctx.structure(&file)?;
            let fam = st.garside_family();
            let q = st.quiver();
            let mut text = String::new();
            for e in &fam.entries {
                let _ = writeln!(
                    text,
                    "{} -> {}  {{{}}}  {}  len {}",
                    q.vertex_name(e.source),
                    q.vertex_name(e.target),
                    ids(q, &e.atoms).join(","),
                    q.format_path(&e.repr),
                    e.len()
                );
            }
            let non_identity = fam.entries.iter().filter(|e| !e.is_identity()).count();
            let _ = writeln!(text, "{} elements ({} non-identity), max length {}", fam.len(), non_identity, fam.max_length());
            let entries: Vec<Value> = fam.entries.iter().map(|e| entry_json(q, e)).collect();
            ctx.emit(
                json!({ "entries": entries, "count": fam.len(), "non_identity": non_identity, "max_length": fam.max_length() }),
                text,
            );
            Ok(true)
        }
        Command::NormalForm { file, path } => {
            let st = ctx.structure(&file)?;
            let q = st.quiver();
            let p = parse_in(q, &path)?;
            let x = usage!(st.normal_form(&p))?;
            let text = format!("{}\n", nf_text(q, &x));
            ctx.emit(nf_json(q, &x), text);
            Ok(true)
        }
        Command::Equal { file, p, q, groupoid } => {
            let st = ctx.structure(&file)?;
            let eq = if groupoid {
                let a = usage!(groupoid::parse_word(&st, &p))?;
                let b = usage!(groupoid::parse_word(&st, &q))?;
                usage!(groupoid::equal_g(&st, &a, &b))?
            } else {
                let quiver = st.quiver();
                let (a, b) = (parse_in(quiver, &p)?, parse_in(quiver, &q)?);
                usage!(st.equal_cat(&a, &b))?
            };
            let text = if eq { "equal\n" } else { "not equal\n" };
            ctx.emit(json!({ "equal": eq }), text.to_string());
            Ok(eq)
        }
        Command::Lcm { file, side, p, q } => {
            let st = ctx.structure(&file)?;
            let quiver = st.quiver();
            let (a, b) = (parse_in(quiver, &p)?, parse_in(quiver, &q)?);
            let m = if side.right { usage!(st.right_lcm(&a, &b))? } else { usage!(st.left_lcm(&a, &b))? };
            let shown = quiver.format_path(&m);
            ctx.emit(json!({ "lcm": shown, "length": m.len() }), format!("{shown}\n"));
            Ok(true)
        }
        Command::OracleCheck { file, max_len } => {
            let st = ctx.structure(&file)?;
            let r = usage!(oracle_check(&st, max_len, DEFAULT_CAP))?;
            let mut text = format!(
                "max length {}: {} paths, {} classes, {} same-endpoint pairs\n",
                r.max_len, r.paths, r.classes, r.same_endpoint_pairs
            );
            for m in r.mismatches.iter().take(ctx.cap) {
                let _ = writeln!(text, "  mismatch: {m}");
            }
            text.push_str(if r.agrees() { "agree\n" } else { "disagree\n" });
            let pass = r.agrees();
            ctx.emit(json!({ "report": r, "agree": pass }), text);
            Ok(pass)
        }
        Command::FromPresentation { file, output } => {
            let doc = ctx.read(&file)?;
            let Document::Presentation(d) = &doc else {
                return Err(IoError::WrongKind { expected: "presentation", found: doc.kind() }.into());
            };
            let p = io::to_presentation(d)?;
            let report: ConditionReport = check_conditions(&p);
            let solution = if report.all_pass() { extract_solution(&p).ok() } else { None };
            let roundtrip = solution.as_ref().is_some_and(|s| roundtrip_check(&p, s));
            let mut text = check_text(&report);
            let _ = writeln!(text, "round trip: {}", if roundtrip { "ok" } else { "failed" });
            ctx.emit(json!({ "conditions": report, "all_pass": report.all_pass(), "roundtrip": roundtrip }), text);
            let pass = report.all_pass() && roundtrip;
            if let (true, Some(s)) = (pass, solution) {
                ctx.write_solution(&s, output.as_deref())?;
            }
            Ok(pass)
        }
        Command::FromHeap { file, output } => {
            let doc = ctx.read(&file)?;
            let Document::Heap(d) = &doc else {
                return Err(IoError::WrongKind { expected: "heap", found: doc.kind() }.into());
            };
            let t = io::to_ternary(d)?;
            let heap_report = check_heap(&t);
            let built = heap::solution_from_ternary(&t);
            let braided = built.is_ok();
            let prebraiding = check_prebraiding(&heap::ph_sigma(&t)).ok();
            let mut text = check_text(&heap_report);
            if let Some(pb) = &prebraiding {
                text.push_str(&check_text(pb));
            }
            match &built {
                Ok(_) => text.push_str("braided: yes\n"),
                Err(e) => {
                    let _ = writeln!(text, "braided: no ({e})");
                }
            }
            ctx.emit(
                json!({ "heap": heap_report, "is_heap": heap_report.is_heap(), "prebraiding": prebraiding, "braided": braided }),
                text,
            );
            if let Ok(s) = built {
                ctx.write_solution(&s, output.as_deref())?;
            }
            Ok(braided)
        }
        Command::FromGroup { file, max_order, output } => {
            let doc = ctx.read(&file)?;
            let Document::Group(d) = &doc else {
                return Err(IoError::WrongKind { expected: "group", found: doc.kind() }.into());
            };
            let g = io::to_group_bounded(d, max_order)?;
            let h = heap::heap_from_group(&g);
            let s = heap::ph_sigma(h.op());
            let involutive = s.check_involutive_capped(0).is_empty();
            let text = format!(
                "order {}\nabelian: {}\ninvolutive: {}\n",
                g.order(),
                if g.is_abelian() { "yes" } else { "no" },
                if involutive { "yes" } else { "no" }
            );
            ctx.emit(json!({ "order": g.order(), "abelian": g.is_abelian(), "involutive": involutive }), text);
            ctx.write_solution(&s, output.as_deref())?;
            Ok(true)
        }
        Command::CheckHeap { file } => {
            let doc = ctx.read(&file)?;
            let t = match &doc {
                Document::Heap(d) => io::to_ternary(d)?,
                Document::Group(d) => heap::heap_from_group(&io::to_group(d)?).op().clone(),
                other => return Err(IoError::WrongKind { expected: "heap", found: other.kind() }.into()),
            };
            let r = check_heap(&t);
            let mut text = check_text(&r);
            text.push_str(if r.is_heap() { "heap\n" } else { "not a heap\n" });
            ctx.emit(json!({ "report": r, "is_heap": r.is_heap() }), text);
            Ok(r.is_heap())
        }
        Command::Example { name, n } => {
            let doc = io::builtin_example(&name, n).map_err(|e| Failure::Usage(e.to_string()))?;
            ctx.out.push_str(&io::serialize(&doc));
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> Outcome {
        let mut input = stdin.as_bytes();
        run(std::iter::once("gq").chain(args.iter().copied()), &mut input)
    }

    #[test]
    fn example_pipes_into_validate() {
        let ex = run_str(&["example", "z3"], "");
        assert_eq!(ex.code, 0);
        let v = run_str(&["validate", "-"], &ex.stdout);
        assert_eq!(v.code, 0, "{}", v.stderr);
        assert!(v.stdout.ends_with("valid\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["frobnicate"], "").code, EXIT_USAGE);
        assert_eq!(run_str(&["validate", "-"], "{").code, EXIT_USAGE);
        assert_eq!(run_str(&["grid", "-", "a", "b"], "").code, EXIT_USAGE);
    }

    #[test]
    fn equal_and_not_equal() {
        let pres1 = run_str(&["example", "pres1"], "").stdout;
        let yes = run_str(&["equal", "-", "[1,2] [2,1]", "[1,3] [3,1]"], &pres1);
        assert_eq!((yes.code, yes.stdout.as_str()), (0, "equal\n"));
        let no = run_str(&["equal", "-", "[1,2] [2,1]", "[1,2] [2,3]"], &pres1);
        assert_eq!(no.code, EXIT_FAIL);
    }
}
