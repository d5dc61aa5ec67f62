mod board;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dtgame::criteria::{beck_maker_on_parity, bias_lower_bound, bias_upper_bound_glazik, erdos_selfridge_breaker};
use dtgame::flip::{
    block_decomposition, build_flip_plan, kappa_lower_exact, kappa_lower_paper_asymptotic, kappa_upper_exact,
    kappa_upper_paper,
};
use dtgame::random::{count_embeddings, find_embedding, mc_embedding_probability, mc_maker_win, DEFAULT_TRIAL_BUDGET};
use dtgame::solver::{solve, threshold_bias_exact, Outcome, SolverConfig, DEFAULT_SOLVE_BUDGET};
use dtgame::strategies::{play_game, StrategyScript};
use dtgame::tournament::{binomial, w_closed_form};
use dtgame::transcript::{replay, Transcript};
use dtgame::verify::{verify_strategy, Verdict, VerifyConfig, DEFAULT_VERIFY_BUDGET};
use dtgame::{Exec, GameState, Player, WinningSetSystem};

use board::{parse_range, Bias, BoardSpec};
use output::{Format, Header, Sink};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dtgame", version, about = "Maker-Breaker directed triangle games on tournaments")]
struct Cli {
    /// Master seed for randomised scripts and Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for searches (per trial for `mc`).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Run every search on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a tournament in the text board format.
    Gen {
        #[arg(long)]
        board: BoardSpec,
    },
    /// Count directed triangles.
    Triangles {
        #[arg(long)]
        board: BoardSpec,
        /// List every triangle instead of the summary.
        #[arg(long)]
        list: bool,
    },
    /// Solve the (1:b) game exactly.
    Solve {
        #[arg(long)]
        board: BoardSpec,
        /// Breaker bias.
        #[arg(long, default_value_t = 1)]
        b: u32,
        /// Find the smallest Breaker bias that wins instead.
        #[arg(long)]
        threshold: bool,
        #[arg(long)]
        no_symmetry: bool,
        /// Shuffle move ordering with this seed.
        #[arg(long)]
        ordering_seed: Option<u64>,
        /// Save the principal line as a transcript.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Certify a scripted strategy against every opponent line.
    Verify {
        #[arg(long)]
        board: BoardSpec,
        /// pairing, pi6 (Breaker) or pi7, pin (Maker).
        #[arg(long)]
        script: String,
        #[arg(long, default_value = "1:1")]
        bias: Bias,
        /// Where a counterexample transcript is written.
        #[arg(long, default_value = "counterexample.json")]
        counterexample: PathBuf,
    },
    /// Play two scripts against each other and emit the transcript.
    Play {
        #[arg(long)]
        board: BoardSpec,
        #[arg(long, default_value = "random")]
        maker: String,
        #[arg(long, default_value = "random")]
        breaker: String,
        #[arg(long, default_value = "1:1")]
        bias: Bias,
    },
    /// Check a transcript move by move.
    Replay { file: PathBuf },
    /// Flip ledger for the parity tournament on odd n.
    Flip {
        #[arg(long)]
        n: usize,
    },
    /// Flip thresholds.
    Kappa {
        #[arg(long, num_args = 1..)]
        n: Vec<usize>,
        /// Every odd n in LO:HI.
        #[arg(long)]
        range: Option<String>,
    },
    /// Bias-threshold bounds and criteria.
    Bias {
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<usize>,
        /// Breaker bias tested against the Maker criterion.
        #[arg(long, default_value_t = 1)]
        b: u64,
    },
    /// Look for an induced copy of the 7-vertex parity tournament.
    Embed {
        #[arg(long)]
        board: BoardSpec,
        /// Also count all copies.
        #[arg(long)]
        count: bool,
    },
    /// Monte Carlo estimates on random tournaments.
    Mc {
        #[arg(long, value_enum, default_value_t = McKind::Embed)]
        kind: McKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum McKind {
    /// Probability that a copy exists.
    Embed,
    /// Probability of a certified Maker win through a copy.
    Maker,
}

struct Ctx {
    sink: Sink,
    exec: Exec,
    seed: u64,
    budget: Option<u64>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let budget = cli.budget.or(match &cli.command {
        Command::Solve { .. } => Some(DEFAULT_SOLVE_BUDGET),
        Command::Verify { .. } => Some(DEFAULT_VERIFY_BUDGET),
        Command::Mc { kind: McKind::Maker, .. } => Some(DEFAULT_TRIAL_BUDGET),
        _ => None,
    });
    let ctx = Ctx {
        sink: Sink { format: cli.format, out: cli.out, header: Header::new(argv, cli.seed, budget) },
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
        seed: cli.seed,
        budget,
    };
    match run(&ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn system(board: &BoardSpec) -> anyhow::Result<Arc<WinningSetSystem>> {
    Ok(Arc::new(WinningSetSystem::new(&board.load()?)))
}

fn line_text(sys: &WinningSetSystem, line: &[(Player, usize)]) -> String {
    line.iter().map(|&(p, e)| format!("{p}{}", sys.element(e))).collect::<Vec<_>>().join(" ")
}

fn write_transcript(ctx: &Ctx, tr: &mut Transcript, path: Option<&PathBuf>) -> anyhow::Result<()> {
    let mut meta = ctx.sink.header.to_json();
    if let Some(serde_json::Value::Object(extra)) = tr.meta.take() {
        meta.as_object_mut().expect("header is an object").extend(extra);
    }
    tr.meta = Some(meta);
    let json = tr.to_json();
    match path {
        Some(p) => std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct TriangleSummary {
    n: usize,
    triangles: u64,
    moon: u64,
    closed_form: Option<u64>,
}

#[derive(Serialize)]
struct TriangleRow {
    a: u32,
    b: u32,
    c: u32,
}

#[derive(Serialize)]
struct SolveRow {
    board: String,
    b: u32,
    winner: String,
    nodes: u64,
    budget: u64,
    line: String,
}

#[derive(Serialize)]
struct ThresholdRow {
    board: String,
    threshold: u32,
    winners: String,
    nodes: u64,
}

#[derive(Serialize)]
struct VerifyRow {
    board: String,
    script: String,
    role: String,
    verdict: String,
    lines: u64,
    nodes: u64,
    budget: u64,
    counterexample: Option<String>,
}

#[derive(Serialize)]
struct ReplayRow {
    file: String,
    turns: usize,
    winner: Option<String>,
}

#[derive(Serialize)]
struct LedgerCsv {
    step: usize,
    phase: usize,
    flip: String,
    delta: u64,
    remaining: u64,
    deviances: String,
}

#[derive(Serialize)]
struct KappaRow {
    n: usize,
    total_flips: usize,
    kappa_upper_paper: i64,
    kappa_upper_exact: usize,
    kappa_lower_exact: usize,
    kappa_lower_paper_asymptotic: f64,
    x: Option<u64>,
    #[serde(rename = "K")]
    k: u64,
}

#[derive(Serialize)]
struct BiasRow {
    n: usize,
    w: u64,
    #[serde(rename = "|X|")]
    board_size: u64,
    lower_bound: f64,
    upper_bound_asymptotic: f64,
    es_guarantee: bool,
    b: u64,
    beck_guarantee: bool,
}

#[derive(Serialize)]
struct EmbedRow {
    n: usize,
    found: bool,
    copy: Option<String>,
    copies: Option<u64>,
}

fn run(ctx: &Ctx, command: Command) -> anyhow::Result<ExitCode> {
    let ok = ExitCode::SUCCESS;
    match command {
        Command::Gen { board } => {
            ctx.sink.text(&board.load()?.to_text())?;
        }
        Command::Triangles { board, list } => {
            let t = board.load()?;
            let tri = t.enumerate_triangles();
            if list {
                let rows: Vec<TriangleRow> = tri.iter().map(|&[a, b, c]| TriangleRow { a, b, c }).collect();
                ctx.sink.rows(&rows)?;
            } else {
                let closed_form = matches!(board, BoardSpec::Parity(_)).then(|| w_closed_form(t.n()));
                ctx.sink.rows(&[TriangleSummary {
                    n: t.n(),
                    triangles: tri.len() as u64,
                    moon: t.count_triangles_moon(),
                    closed_form,
                }])?;
            }
        }
        Command::Solve { board, b, threshold, no_symmetry, ordering_seed, transcript } => {
            let sys = system(&board)?;
            let cfg = SolverConfig {
                budget: ctx.budget.unwrap_or(DEFAULT_SOLVE_BUDGET),
                symmetry: !no_symmetry,
                exec: ctx.exec,
                ordering_seed,
            };
            if threshold {
                let th = match threshold_bias_exact(&sys, &cfg) {
                    Ok(th) => th,
                    Err(dtgame::Error::BudgetExhausted(_)) => {
                        eprintln!("unknown: budget of {} nodes exhausted", cfg.budget);
                        return Ok(ExitCode::from(EXIT_UNKNOWN));
                    }
                    Err(e) => return Err(e.into()),
                };
                let winners = th.winners.iter().map(Player::to_string).collect::<Vec<_>>().join(" ");
                ctx.sink.rows(&[ThresholdRow { board: board.to_string(), threshold: th.threshold, winners, nodes: th.nodes }])?;
                return Ok(ok);
            }
            let start = GameState::new(sys.clone(), 1, b);
            let res = solve(&start, &cfg)?;
            let winner = res.winner().map_or_else(|| "unknown".to_string(), |w| w.to_string());
            ctx.sink.rows(&[SolveRow {
                board: board.to_string(),
                b,
                winner,
                nodes: res.nodes,
                budget: res.budget,
                line: line_text(&sys, &res.line),
            }])?;
            if let Some(path) = transcript {
                if res.outcome != Outcome::Unknown {
                    write_transcript(ctx, &mut res.transcript(&start)?, Some(&path))?;
                }
            }
            if res.outcome == Outcome::Unknown {
                return Ok(ExitCode::from(EXIT_UNKNOWN));
            }
        }
        Command::Verify { board, script, bias, counterexample } => {
            let sys = system(&board)?;
            let role = match script.as_str() {
                "pairing" | "pi6" => Player::Breaker,
                "pi7" | "pin" => Player::Maker,
                other => bail!("unknown script {other:?}; expected pairing, pi6, pi7 or pin"),
            };
            let s = StrategyScript::by_name(&script, role, &sys, ctx.seed)?;
            let cfg = VerifyConfig { budget: ctx.budget.unwrap_or(DEFAULT_VERIFY_BUDGET), exec: ctx.exec };
            let rep = verify_strategy(&s, &sys, (bias.0, bias.1), &cfg)?;
            let (verdict, code) = match &rep.verdict {
                Verdict::Verified => ("verified", ok),
                Verdict::Refuted(_) => ("refuted", ExitCode::from(EXIT_FAILED)),
                Verdict::Unknown => ("unknown", ExitCode::from(EXIT_UNKNOWN)),
            };
            let mut dumped = None;
            if let Verdict::Refuted(tr) = &rep.verdict {
                let mut tr = (**tr).clone();
                write_transcript(ctx, &mut tr, Some(&counterexample))?;
                eprintln!("counterexample written to {}", counterexample.display());
                dumped = Some(counterexample.display().to_string());
            }
            ctx.sink.rows(&[VerifyRow {
                board: board.to_string(),
                script,
                role: role.to_string(),
                verdict: verdict.to_string(),
                lines: rep.lines,
                nodes: rep.nodes,
                budget: rep.budget,
                counterexample: dumped,
            }])?;
            return Ok(code);
        }
        Command::Play { board, maker, breaker, bias } => {
            let sys = system(&board)?;
            let mut m = StrategyScript::by_name(&maker, Player::Maker, &sys, ctx.seed)?;
            let mut b = StrategyScript::by_name(&breaker, Player::Breaker, &sys, ctx.seed.wrapping_add(1))?;
            let mut tr = play_game(&sys, (bias.0, bias.1), &mut m, &mut b)?;
            tr.seed = Some(ctx.seed);
            tr.meta = Some(serde_json::json!({ "maker": maker, "breaker": breaker }));
            write_transcript(ctx, &mut tr, ctx.sink.out.as_ref())?;
        }
        Command::Replay { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let tr = Transcript::from_json(&text)?;
            match replay(&tr) {
                Ok(state) => ctx.sink.rows(&[ReplayRow {
                    file: file.display().to_string(),
                    turns: tr.moves.len(),
                    winner: state.winner_if_terminal().map(|w| w.to_string()),
                }])?,
                Err(e) => {
                    eprintln!("replay failed at ply {}: {}", e.ply, e.message);
                    return Ok(ExitCode::from(EXIT_FAILED));
                }
            }
        }
        Command::Flip { n } => {
            let plan = build_flip_plan(n)?;
            let rows: Vec<LedgerCsv> = plan
                .ledger()?
                .into_iter()
                .map(|r| LedgerCsv {
                    step: r.step,
                    phase: r.phase,
                    flip: r.flip.to_string(),
                    delta: r.delta,
                    remaining: r.remaining,
                    deviances: r.deviances.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                })
                .collect();
            ctx.sink.rows(&rows)?;
        }
        Command::Kappa { mut n, range } => {
            if let Some(r) = range {
                let (lo, hi) = parse_range(&r)?;
                n.extend((lo..=hi).filter(|v| v % 2 == 1));
            }
            if n.is_empty() {
                bail!("give --n or --range");
            }
            let rows = n
                .into_iter()
                .map(|n| {
                    let blocks = block_decomposition(n)?;
                    Ok(KappaRow {
                        n,
                        total_flips: blocks.reverse.len(),
                        kappa_upper_paper: kappa_upper_paper(n)?,
                        kappa_upper_exact: kappa_upper_exact(n)?,
                        kappa_lower_exact: kappa_lower_exact(n)?,
                        kappa_lower_paper_asymptotic: kappa_lower_paper_asymptotic(n)?,
                        x: blocks.x,
                        k: blocks.k,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            ctx.sink.rows(&rows)?;
        }
        Command::Bias { n, b } => {
            if let Some(&bad) = n.iter().find(|&&v| v < 3) {
                bail!("n must be at least 3, got {bad}");
            }
            let rows: Vec<BiasRow> = n
                .into_iter()
                .map(|n| {
                    let w = w_closed_form(n);
                    BiasRow {
                        n,
                        w,
                        board_size: binomial(n as u64, 2),
                        lower_bound: bias_lower_bound(n),
                        upper_bound_asymptotic: bias_upper_bound_glazik(n),
                        es_guarantee: erdos_selfridge_breaker(w, 3),
                        b,
                        beck_guarantee: beck_maker_on_parity(n, b),
                    }
                })
                .collect();
            ctx.sink.rows(&rows)?;
        }
        Command::Embed { board, count } => {
            let t = board.load()?;
            let copy = find_embedding(&t);
            ctx.sink.rows(&[EmbedRow {
                n: t.n(),
                found: copy.is_some(),
                copy: copy.map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")),
                copies: count.then(|| count_embeddings(&t)),
            }])?;
        }
        Command::Mc { kind, n, p, trials } => {
            let est = match kind {
                McKind::Embed => mc_embedding_probability(n, p, trials, ctx.seed, ctx.exec)?,
                McKind::Maker => {
                    mc_maker_win(n, p, trials, ctx.seed, ctx.budget.unwrap_or(DEFAULT_TRIAL_BUDGET), ctx.exec)?
                }
            };
            ctx.sink.rows(&[est])?;
        }
    }
    Ok(ok)
}
