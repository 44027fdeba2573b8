use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use groupdet::parity::{known_m, FailureKind};
use groupdet::{
    check_even_divisibility, check_membership, dedekind_product, find_witness, group_determinant,
    laquer_split, laquer_vs_theorem1, search_values, theorem1_factors, verify_theorem2,
    AbelianGroup, Assignment, CyclotomicInt, FactorizationReport, MembershipSpec, RunOptions,
    SearchOptions, SearchReport, DEFAULT_BUDGET,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

const ORDERING: &str = "\
Groups are written as factor orders joined by 'x', e.g. 4x2 for Z/4 x Z/2.

Assignments list one integer x_g per element g, in mixed-radix order with the
last factor varying fastest: for 4x2 the order is (0,0), (0,1), (1,0), (1,1),
(2,0), ... For a cyclic group Z/n the i-th value is the variable at residue i,
so x_{i+1} in 1-based circulant notation is the value at position i.

Output: `det` prints the bare integer. Every other command prints one JSON
object with a \"status\" field (pass, fail, value or error); determinant values
are decimal strings. Exit status is 0 for pass/value, 1 for fail, 2 for usage
errors and invalid input.";

#[derive(Parser)]
#[command(
    name = "groupdet",
    version,
    about = "Exact integer group determinants of finite abelian groups"
)]
#[command(long_about = None, after_long_help = ORDERING)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Run {
    /// Worker threads [default: available parallelism]
    #[arg(long)]
    jobs: Option<usize>,
    /// Maximum number of box points to evaluate
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Run even if the box exceeds the budget
    #[arg(long)]
    force: bool,
}

impl Run {
    fn options(&self) -> RunOptions {
        RunOptions {
            budget: self.budget,
            allow_over_budget: self.force,
            jobs: self.jobs,
        }
    }
}

#[derive(Args)]
struct GroupAssign {
    /// Group, e.g. 2x2
    #[arg(long)]
    group: AbelianGroup,
    /// Comma-separated integers, one per element
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    assign: Vec<BigInt>,
}

impl GroupAssign {
    fn assignment(&self) -> anyhow::Result<Assignment> {
        Ok(Assignment::new(&self.group, self.assign.clone())?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Group determinant at an integer assignment
    Det(GroupAssign),
    /// Product over all characters, cross-checked against `det`
    Dedekind(GroupAssign),
    /// Factor over the split G = H x K at factor position `cut`
    Factor {
        #[command(flatten)]
        input: GroupAssign,
        /// Number of leading factors that form H
        #[arg(long)]
        cut: usize,
    },
    /// Split the circulant of order r*s, gcd(r, s) = 1, into s factors
    Laquer {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Comma-separated integers x_1, ..., x_{rs}
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        assign: Vec<BigInt>,
    },
    /// Exhaustive 2-adic divisibility check over a box
    Verify {
        #[arg(long, value_parser = ["theorem2"])]
        suite: String,
        /// The group H in G = H x (Z/2)^l
        #[arg(long = "H")]
        h: AbelianGroup,
        #[arg(long)]
        l: u32,
        /// Assignments range over [-B, B]
        #[arg(long = "box")]
        bound: i64,
        /// Use this M instead of the tabulated one
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        run: Run,
    },
    /// Collect every determinant value over a box
    Search {
        #[arg(long)]
        group: AbelianGroup,
        #[arg(long = "box")]
        bound: i64,
        /// Keep only values with |v| <= CAP
        #[arg(long, allow_hyphen_values = true)]
        cap: Option<BigInt>,
        /// Evaluate one assignment per translation orbit
        #[arg(long)]
        prune: bool,
        /// Where to write the report [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: Run,
    },
    /// Check a search report against a value-set description
    Check {
        #[arg(long)]
        report: PathBuf,
        /// Z2Z2, Z2Z2Z2, Z4Z2 or S2p(p)
        #[arg(long)]
        spec: Option<MembershipSpec>,
        /// Require every even value to be divisible by 2^E
        #[arg(long)]
        even_exponent: Option<u64>,
    },
    /// Lexicographically first assignment in a box with a given determinant
    Witness {
        #[arg(long)]
        group: AbelianGroup,
        #[arg(long = "box")]
        bound: i64,
        #[arg(long, allow_hyphen_values = true)]
        target: BigInt,
        #[command(flatten)]
        run: Run,
    },
}

enum Status {
    Pass,
    Fail,
    Value,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Value => "value",
        }
    }

    fn code(&self) -> u8 {
        match self {
            Status::Pass | Status::Value => 0,
            Status::Fail => 1,
        }
    }
}

enum Output {
    Plain(String),
    Json(Status, Value),
}

fn render_factor(f: &CyclotomicInt) -> String {
    f.to_integer()
        .map_or_else(|_| f.to_string(), |v| v.to_string())
}

fn factorization_json(rep: &FactorizationReport) -> Output {
    let payload = json!({
        "split": rep.split.to_string(),
        "factors": rep.factors.iter().map(render_factor).collect::<Vec<_>>(),
        "product": rep.product.to_string(),
        "direct_det": rep.direct_det.to_string(),
        "match": rep.matched,
    });
    Output::Json(Status::of(rep.matched), payload)
}

fn check_bound(bound: i64) -> anyhow::Result<()> {
    if bound < 0 {
        bail!("box bound must be non-negative, got {bound}");
    }
    Ok(())
}

fn run(command: Command) -> anyhow::Result<Output> {
    Ok(match command {
        Command::Det(input) => {
            let det = group_determinant(&input.group, &input.assignment()?)?;
            Output::Plain(det.to_string())
        }
        Command::Dedekind(input) => {
            let x = input.assignment()?;
            let product = dedekind_product(&input.group, &x)?;
            let direct = group_determinant(&input.group, &x)?;
            let matched = product == direct;
            Output::Json(
                Status::of(matched),
                json!({
                    "group": input.group.to_string(),
                    "product": product.to_string(),
                    "direct_det": direct.to_string(),
                    "match": matched,
                }),
            )
        }
        Command::Factor { input, cut } => {
            let (h, k) = input.group.split(cut)?;
            factorization_json(&theorem1_factors(&h, &k, &input.assignment()?)?)
        }
        Command::Laquer { r, s, assign } => {
            let rep = laquer_split(r, s, &assign)?;
            let agrees = laquer_vs_theorem1(r, s, &assign)?;
            let Output::Json(_, mut payload) = factorization_json(&rep) else {
                unreachable!()
            };
            payload["matches_product_split"] = json!(agrees);
            Output::Json(Status::of(rep.matched && agrees), payload)
        }
        Command::Verify {
            suite: _,
            h,
            l,
            bound,
            m,
            run,
        } => {
            check_bound(bound)?;
            let table = known_m(&h);
            let s = verify_theorem2(&h, l, bound, m, &run.options())?;
            let failures: Vec<Value> = s
                .failures
                .iter()
                .map(|f| {
                    json!({
                        "kind": match f.kind {
                            FailureKind::Divisibility => "divisibility",
                            FailureKind::Congruence => "congruence",
                            FailureKind::FactorProduct => "factor-product",
                        },
                        "witness": f.witness,
                        "determinant": f.determinant.to_string(),
                    })
                })
                .collect();
            let m_source = match (m, &table) {
                (Some(_), _) => "override".to_string(),
                (None, Some(entry)) => entry.provenance.to_string(),
                (None, None) => unreachable!("verify_theorem2 rejects unknown M"),
            };
            Output::Json(
                Status::of(s.passed()),
                json!({
                    "suite": "theorem2",
                    "group": s.group.to_string(),
                    "box": s.bound,
                    "m": s.bound_exponent >> l,
                    "m_source": m_source,
                    "assignments_checked": s.assignments_checked,
                    "even_count": s.even_count,
                    "min_even_valuation": s.min_even_valuation,
                    "bound_exponent": s.bound_exponent,
                    "failures": failures,
                }),
            )
        }
        Command::Search {
            group,
            bound,
            cap,
            prune,
            out,
            run,
        } => {
            check_bound(bound)?;
            let opts = SearchOptions {
                run: run.options(),
                value_cap: cap,
                prune_translations: prune,
            };
            let rep = search_values(&group, bound, &opts)?;
            let text = serde_json::to_string_pretty(&rep)?;
            match out {
                None => Output::Plain(text),
                Some(path) => {
                    fs::write(&path, text + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                    Output::Json(
                        Status::Value,
                        json!({
                            "out": path.display().to_string(),
                            "group": group.to_string(),
                            "box": bound,
                            "counts": rep.counts(),
                            "even_valuation_min": rep.even_valuation_min(),
                        }),
                    )
                }
            }
        }
        Command::Check {
            report,
            spec,
            even_exponent,
        } => {
            if spec.is_none() && even_exponent.is_none() {
                bail!("nothing to check: pass --spec and/or --even-exponent");
            }
            let text = fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))?;
            let rep: SearchReport = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", report.display()))?;
            let unsound = rep.first_unsound()?;
            let mut violations = Vec::new();
            if let Some(spec) = spec {
                violations.extend(check_membership(&rep, spec).violations);
            }
            if let Some(e) = even_exponent {
                for v in check_even_divisibility(&rep, e).violations {
                    if !violations.contains(&v) {
                        violations.push(v);
                    }
                }
            }
            violations.sort();
            let ok = violations.is_empty() && unsound.is_none();
            Output::Json(
                Status::of(ok),
                json!({
                    "group": rep.group().to_string(),
                    "box": rep.bound(),
                    "spec": spec.map(|s| s.to_string()),
                    "even_exponent": even_exponent,
                    "values_checked": rep.achieved().len(),
                    "unsound_witness": unsound.map(|v| v.to_string()),
                    "violations": violations
                        .iter()
                        .map(|(v, w)| json!({"v": v.to_string(), "witness": w}))
                        .collect::<Vec<_>>(),
                }),
            )
        }
        Command::Witness {
            group,
            bound,
            target,
            run,
        } => {
            check_bound(bound)?;
            let w = find_witness(&group, bound, &target, &run.options())?;
            let status = if w.is_some() {
                Status::Value
            } else {
                Status::Fail
            };
            Output::Json(
                status,
                json!({
                    "group": group.to_string(),
                    "box": bound,
                    "target": target.to_string(),
                    "witness": w,
                }),
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Output::Plain(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Json(status, mut payload)) => {
            let mut obj = serde_json::Map::new();
            obj.insert("status".into(), status.name().into());
            if let Value::Object(fields) = payload.take() {
                obj.extend(fields);
            }
            println!("{}", Value::Object(obj));
            ExitCode::from(status.code())
        }
        Err(e) => {
            println!(
                "{}",
                json!({"status": "error", "message": format!("{e:#}")})
            );
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
