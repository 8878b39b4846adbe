//! Command-line surface: every library operation as a subcommand, with JSON
//! output by default and `--format=text` for human-readable tables.
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use clap::{Parser, Subcommand, ValueEnum};
use kodaira::abelian::FgAbelianGroup;
use kodaira::action::{CurveModel, DiagonalAutomorphism, JTag};
use kodaira::base_change::{
    base_change, classify_pullback, multiple_fiber_types, semistable_reduction, LinearPart,
};
use kodaira::catalog::{emit_table, recipe_by_id, recipes, run_recipe, TABLE_IDS};
use kodaira::config::{classify_config, enumerate_balanced, FiberConfiguration};
use kodaira::types::{
    dual_component_check, dual_pairs, neron_component_group, untangle, validate, KodairaType,
    MultipleSubtype,
};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "kodaira", about = "Exact calculus of Kodaira-type fibers of abelian fibrations", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a fiber configuration given as JSON
    /// {"multiplicities":[...],"pairing":[[...]]}.
    Classify {
        /// Configuration JSON (or "-" to read standard input).
        config: String,
    },
    /// Enumerate all balanced fiber configurations with at most N components.
    Enumerate {
        /// Maximum number of components (<= 12).
        max_components: usize,
    },
    /// Néron component group of a fiber type.
    Pi0 {
        /// Canonical type string, e.g. "I3*" or "IV/3".
        r#type: String,
    },
    /// The stated duality pairs up to a subscript bound, with their common
    /// component group.
    DualPairs {
        #[arg(long, default_value = "5")]
        max_r: u32,
    },
    /// Canonical stabilizer-free cover of a tangled unstable type.
    Untangle {
        r#type: String,
    },
    /// Degree-d base change of a semistable or unstable type.
    BaseChange {
        r#type: String,
        degree: u32,
    },
    /// Minimal semistable reduction of an unstable type.
    Reduce {
        r#type: String,
    },
    /// All admissible multiplicity-m fibers over a t-automorphism type, or
    /// the pullback case of a pair of linear parts (--pullback P Q).
    MultipleTypes {
        r#type: String,
        multiplicity: u32,
    },
    /// Classify the quotient of a curve model by a free diagonal action.
    Quotient {
        /// Curve model: Cycle(N), Star(r), Elliptic(0|1728|generic), or an
        /// unstable shape name (II, IV*, ...).
        model: String,
        /// Fiber multiplicity.
        multiplicity: u32,
        /// Generators in coordinate notation; the first is the inertia
        /// generator, e.g. "(i,z,y) -> (i+0, e(0)*e(1/2)^i*z, y+(1/2))".
        generators: Vec<String>,
    },
    /// Check freeness of the cyclic action generated by one automorphism.
    FreeCheck {
        model: String,
        generator: String,
    },
    /// Classify a (special fiber, pullback) pair of Néron linear parts.
    Pullback {
        /// Linear part of P: 0, Gm, or Ga.
        p_linear: String,
        /// Linear part of the pullback Q.
        q_linear: String,
    },
    /// Emit a classification table as structured rows.
    Table {
        /// One of: T1-nonmultiple, T2-multiple, T3-pi0, T4-exceptional,
        /// TG-stabilizers, T-reduction; or "list".
        id: String,
    },
    /// Run an example recipe (or all of them with "all").
    Recipe {
        id: String,
    },
    /// Parse a canonical type string or automorphism formula and echo its
    /// canonical form.
    Parse {
        input: String,
    },
}

fn parse_type(s: &str) -> Result<KodairaType, kodaira::Error> {
    s.parse()
}

fn parse_model(s: &str) -> Result<CurveModel, kodaira::Error> {
    let err = || kodaira::Error::Parse(format!("unknown curve model {s:?}"));
    if let Some(inner) = s.strip_prefix("Cycle(").and_then(|r| r.strip_suffix(')')) {
        return Ok(CurveModel::Cycle { len: inner.parse().map_err(|_| err())? });
    }
    if let Some(inner) = s.strip_prefix("Star(").and_then(|r| r.strip_suffix(')')) {
        return Ok(CurveModel::Star { r: inner.parse().map_err(|_| err())? });
    }
    if let Some(inner) = s.strip_prefix("Elliptic(").and_then(|r| r.strip_suffix(')')) {
        let j = match inner {
            "0" => JTag::Zero,
            "1728" => JTag::J1728,
            "generic" => JTag::Generic,
            _ => return Err(err()),
        };
        return Ok(CurveModel::SmoothElliptic { j });
    }
    let shape: kodaira::config::KodairaCurveType = s.parse()?;
    Ok(CurveModel::PointedShape { shape })
}

fn group_json(g: &FgAbelianGroup) -> Value {
    json!(g.to_string())
}

/// Human text for the congruence that admits a multiple subtype.
fn constraint_note(subtype: &MultipleSubtype) -> String {
    match subtype {
        MultipleSubtype::I0 => "any m".into(),
        MultipleSubtype::I0Plus { d } => format!("{d} | m"),
        MultipleSubtype::IRk { k, .. } => format!("k = {k} | m, R = k r"),
        MultipleSubtype::IRPlus { .. } | MultipleSubtype::IRMinus { .. } => {
            "m = 2k, R = k r".into()
        }
        MultipleSubtype::UnstableLike { base, .. } => {
            use kodaira::config::KodairaCurveType::*;
            match base {
                II | IIStar => "gcd(6, m) = 1".into(),
                III | IIIStar => "m odd".into(),
                IV | IVStar => "3 does not divide m".into(),
                IStar(0) => "m odd".into(),
                IStar(_) => "m odd, R = m r".into(),
                I(_) => String::new(),
            }
        }
        MultipleSubtype::Exceptional { tag } => match tag {
            kodaira::types::ExceptionalTag::I0StarA
            | kodaira::types::ExceptionalTag::I0StarAHalf
            | kodaira::types::ExceptionalTag::I0StarB => "m = 2 mod 4".into(),
            kodaira::types::ExceptionalTag::I0StarC => "m = 3 mod 6".into(),
            kodaira::types::ExceptionalTag::IVA | kodaira::types::ExceptionalTag::IVStarA => {
                "m = +/-2 mod 6".into()
            }
        },
    }
}

fn run(cli: &Cli) -> Result<Value, kodaira::Error> {
    match &cli.command {
        Command::Classify { config } => {
            let text = if config == "-" {
                std::io::read_to_string(std::io::stdin())
                    .map_err(|e| kodaira::Error::Parse(e.to_string()))?
            } else {
                config.clone()
            };
            let c: FiberConfiguration = serde_json::from_str(&text)
                .map_err(|e| kodaira::Error::Parse(format!("bad configuration JSON: {e}")))?;
            let t = classify_config(&c)?;
            Ok(json!({ "type": t.to_string() }))
        }
        Command::Enumerate { max_components } => {
            let configs = enumerate_balanced(*max_components)?;
            let rows: Result<Vec<Value>, kodaira::Error> = configs
                .iter()
                .map(|c| {
                    let t = classify_config(c)?;
                    Ok(json!({
                        "type": t.to_string(),
                        "components": c.len(),
                        "multiplicities": c.multiplicities,
                    }))
                })
                .collect();
            Ok(json!({ "count": configs.len(), "configurations": rows? }))
        }
        Command::Pi0 { r#type } => {
            let t = parse_type(r#type)?;
            Ok(json!({ "group": group_json(&neron_component_group(&t)?) }))
        }
        Command::DualPairs { max_r } => {
            let rows: Result<Vec<Value>, kodaira::Error> = dual_pairs(*max_r)
                .iter()
                .map(|pair| {
                    let equal = dual_component_check(pair)?;
                    Ok(json!({
                        "fiber": pair.0.to_string(),
                        "dual": pair.1.to_string(),
                        "pi0": group_json(&neron_component_group(&pair.0)?),
                        "pi0_equal": equal,
                    }))
                })
                .collect();
            Ok(json!({ "pairs": rows? }))
        }
        Command::Untangle { r#type } => {
            let t = parse_type(r#type)?;
            let (cover, seq) = untangle(&t)?;
            Ok(json!({
                "cover": cover.to_string(),
                "stabilizer": group_json(&seq.stabilizer),
                "pi0_cover": group_json(&seq.pi0_cover),
                "pi0": group_json(&seq.pi0),
            }))
        }
        Command::BaseChange { r#type, degree } => {
            let t = parse_type(r#type)?;
            let r = base_change(&t, *degree)?;
            Ok(json!({
                "type": r.resulting_type.to_string(),
                "inertia_order": r.inertia_order,
                "notes": r.notes,
            }))
        }
        Command::Reduce { r#type } => {
            let t = parse_type(r#type)?;
            let r = semistable_reduction(&t)?;
            Ok(json!({
                "minimal_degree": r.minimal_degree,
                "reduced": r.reduced_type.to_string(),
                "g_twist": r.g_twist.as_ref().map(group_json),
                "inertia": r.inertia_formula,
            }))
        }
        Command::MultipleTypes { r#type, multiplicity } => {
            let p = parse_type(r#type)?;
            let types = multiple_fiber_types(&p, *multiplicity)?;
            let constraints: Vec<Value> = types
                .iter()
                .map(|t| {
                    let KodairaType::Multiple { subtype, .. } = t else { unreachable!() };
                    json!({ "type": t.to_string(), "constraint": constraint_note(subtype) })
                })
                .collect();
            Ok(json!({
                "types": types.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "constraints": constraints,
            }))
        }
        Command::Quotient { model, multiplicity, generators } => {
            let m = parse_model(model)?;
            let gens: Result<Vec<DiagonalAutomorphism>, kodaira::Error> =
                generators.iter().map(|g| g.parse()).collect();
            let t = kodaira::action::quotient_type(&m, &gens?, *multiplicity)?;
            Ok(json!({ "type": t.to_string() }))
        }
        Command::FreeCheck { model, generator } => {
            let m = parse_model(model)?;
            let a: DiagonalAutomorphism = generator.parse()?;
            Ok(json!({
                "free": kodaira::action::is_free(&a, &m)?,
                "order": kodaira::action::order(&a, &m)?,
            }))
        }
        Command::Pullback { p_linear, q_linear } => {
            let p: LinearPart = p_linear.parse()?;
            let q: LinearPart = q_linear.parse()?;
            let case = classify_pullback(p, q)?;
            Ok(json!({
                "case": case.case.as_str(),
                "p_linear": p.to_string(),
                "q_linear": q.to_string(),
            }))
        }
        Command::Table { id } => {
            if id == "list" {
                return Ok(json!({ "tables": TABLE_IDS }));
            }
            let entries = emit_table(id)?;
            Ok(json!({
                "table_id": id,
                "rows": entries.iter().map(|e| e.row.clone()).collect::<Vec<_>>(),
            }))
        }
        Command::Recipe { id } => {
            let selected = if id == "all" { recipes() } else { vec![recipe_by_id(id)?] };
            let rows: Result<Vec<Value>, kodaira::Error> = selected
                .iter()
                .map(|r| {
                    let (computed, pass) = run_recipe(r)?;
                    Ok(json!({
                        "id": r.id,
                        "description": r.description,
                        "p": r.p_type.to_string(),
                        "m": r.multiplicity,
                        "computed": computed.to_string(),
                        "expected": r.expected.to_string(),
                        "pass": pass,
                    }))
                })
                .collect();
            Ok(json!({ "recipes": rows? }))
        }
        Command::Parse { input } => {
            if let Ok(t) = parse_type(input) {
                return Ok(json!({
                    "kind": "type",
                    "canonical": t.to_string(),
                    "issues": validate(&t),
                }));
            }
            let a: DiagonalAutomorphism = input
                .parse()
                .map_err(|_| kodaira::Error::Parse(format!("unparseable input {input:?}")))?;
            Ok(json!({ "kind": "automorphism", "canonical": a.to_string() }))
        }
    }
}

/// Flatten a JSON value into indented key/value lines for --format=text.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
                Format::Text => {
                    let mut out = String::new();
                    render_text(&value, 0, &mut out);
                    print!("{out}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
