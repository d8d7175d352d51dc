use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use daybound_core::analysis::{
    all_layer_matchings, chain_division, check_symmetry, stratify, width_certificate, ChainDivision,
};
use daybound_core::bounds::{classical_lower, classical_upper, BoundReport, Direction};
use daybound_core::enumeration::{enumerate_day, GameSet};
use daybound_core::fixtures::Fixtures;
use daybound_core::game::GameArena;
use daybound_core::notation::{print, read_game};
use daybound_core::report::{day4_report, verify_day3};
use daybound_core::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "daybound",
    version,
    about = "Canonical games born by day n and bounds on day n+1"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the parallel stages. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the canonical forms born by a day and write a game-set file.
    Gen {
        #[arg(long)]
        day: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a game set into layers of successive maximal elements.
    Stratify(SetInput),
    /// Chain division through the largest layer.
    Chains(SetInput),
    #[command(subcommand)]
    Bounds(BoundsCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Print the canonical form of a game.
    Canon { expr: String },
    /// Compare two games.
    Cmp { left: String, right: String },
}

#[derive(Args, Debug)]
struct SetInput {
    /// Game-set file written by `gen`.
    #[arg(
        long = "in",
        value_name = "FILE",
        conflicts_with = "day",
        required_unless_present = "day"
    )]
    input: Option<PathBuf>,
    /// Enumerate this day instead of reading a file.
    #[arg(long)]
    day: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Lower and upper bounds on the number of games born by day 4.
    Day4 {
        /// `auto` or a JSON file of chains given by game names.
        #[arg(long, default_value = "auto")]
        chains: String,
        /// Also evaluate the published day-3 tables.
        #[arg(long)]
        fixtures: bool,
        /// Read the tables from this directory instead of the built-in copies.
        #[arg(long, value_name = "DIR")]
        fixtures_dir: Option<PathBuf>,
    },
    /// The classical recurrences from |G_n| and |G_{n-1}|.
    Classical {
        #[arg(long)]
        gn: u64,
        #[arg(long)]
        gn1: u64,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Bounds on day 3 from day-2 data against the enumerated count.
    Day3,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    File(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<daybound_core::notation::ParseError> for Failure {
    fn from(e: daybound_core::notation::ParseError) -> Self {
        Failure::Core(e.into())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::File(..) => 3,
            Failure::Core(e) => match e {
                Error::Invariant(_) | Error::Unsaturated { .. } | Error::NotAntichain(..) => 2,
                Error::Io(_) => 3,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::File(path, e) => format!("{}: {e}", path.display()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let mut arena = GameArena::new();
    let value = match &cli.command {
        Command::Gen { day, out } => {
            let set = enumerate_day(&mut arena, *day)?;
            if let Some(path) = out {
                std::fs::write(path, set.to_file_string())
                    .map_err(|e| Failure::File(path.clone(), e))?;
            } else if !cli.json {
                return Ok(set.to_file_string());
            }
            if !cli.json {
                return Ok(format!(
                    "day {}: {} games written to {}\n",
                    day,
                    set.len(),
                    out.as_ref().unwrap().display()
                ));
            }
            json!({
                "command": "gen",
                "day": day,
                "count": set.len(),
                "out": out.as_ref().map(|p| p.display().to_string()),
                "games": set.names(),
            })
        }
        Command::Stratify(input) => {
            let set = load_set(input, &mut arena)?;
            let strat = stratify(set.poset());
            let symmetric = set.negation().map(|neg| check_symmetry(&strat, neg));
            if symmetric == Some(false) {
                return Err(
                    Error::Invariant("layers are not symmetric under negation".into()).into(),
                );
            }
            let layers: Vec<Value> = strat
                .layers()
                .iter()
                .enumerate()
                .map(|(i, layer)| {
                    json!({
                        "index": i + 1,
                        "size": layer.len(),
                        "games": layer.iter().map(|&g| set.name(g)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            if !cli.json {
                let mut s = String::from("layer\tsize\n");
                for (i, size) in strat.sizes().iter().enumerate() {
                    s.push_str(&format!("{}\t{}\n", i + 1, size));
                }
                s.push_str(&format!("total\t{}\n", set.len()));
                s.push_str(&format!("middle\t{}\n", strat.middle() + 1));
                if let Some(sym) = symmetric {
                    s.push_str(&format!("symmetric\t{}\n", if sym { "yes" } else { "no" }));
                }
                return Ok(s);
            }
            json!({
                "command": "stratify",
                "day": set.day(),
                "count": set.len(),
                "middle": strat.middle() + 1,
                "symmetric": symmetric,
                "layers": layers,
            })
        }
        Command::Chains(input) => {
            let set = load_set(input, &mut arena)?;
            let strat = stratify(set.poset());
            let matchings = all_layer_matchings(set.poset(), &strat);
            if matchings
                .iter()
                .any(|m| !m.certified_maximum || m.size() != m.smaller_side())
            {
                return Err(Error::Invariant(
                    "a layer matching does not saturate its smaller side".into(),
                )
                .into());
            }
            let division = chain_division(set.poset(), &strat)?;
            let cert = width_certificate(set.poset(), &strat, &division)?;
            let mut multiset = division.lengths();
            multiset.sort_unstable_by(|a, b| b.cmp(a));
            if !cli.json {
                let mut s = String::from("chain\tlength\tgames\n");
                for (i, chain) in division.chains().iter().enumerate() {
                    let names: Vec<&str> = chain.iter().map(|&g| set.name(g)).collect();
                    s.push_str(&format!(
                        "{}\t{}\t{}\n",
                        i + 1,
                        chain.len(),
                        names.join(" ")
                    ));
                }
                s.push_str(&format!("width\t{}\n", cert.width));
                return Ok(s);
            }
            json!({
                "command": "chains",
                "day": set.day(),
                "count": set.len(),
                "width": cert.width,
                "length_multiset": multiset,
                "chains": chains_json(&set, &division),
            })
        }
        Command::Bounds(BoundsCommand::Day4 {
            chains,
            fixtures,
            fixtures_dir,
        }) => {
            let day2_len = enumerate_day(&mut arena, 2)?.len();
            let day3 = enumerate_day(&mut arena, 3)?;
            let division = match chains.as_str() {
                "auto" => None,
                path => Some(read_chain_file(Path::new(path), &day3)?),
            };
            let tables = match fixtures_dir {
                Some(dir) => Some(Fixtures::load_dir(dir).map_err(|e| match e {
                    Error::Io(io) => Failure::File(dir.clone(), io),
                    other => Failure::Core(other),
                })?),
                None if *fixtures => Some(Fixtures::builtin()),
                None => None,
            };
            let report = day4_report(&day3, day2_len, division, tables.as_ref())?;
            if !cli.json {
                let mut s = report_text(&report.report);
                s.push_str(&format!("\n{}\n", report.headline));
                return Ok(s);
            }
            let mut v = serde_json::to_value(&report).map_err(Error::from)?;
            v["command"] = json!("bounds day4");
            v
        }
        Command::Bounds(BoundsCommand::Classical { gn, gn1 }) => {
            let upper = classical_upper(*gn, *gn1)?;
            let lower = classical_lower(*gn, *gn1)?;
            let mut report = BoundReport::new(format!("classical ({gn}, {gn1})"));
            let src = "classical formulas";
            use daybound_core::bounds::BoundEntry;
            for (id, v) in [
                ("upper.1", upper.first),
                ("upper.2", upper.second),
                ("upper.3", upper.third),
            ] {
                report.push(BoundEntry::new(id, Direction::Upper, v, src));
            }
            for (id, v) in [
                ("lower.1", lower.first),
                ("lower.2", lower.second),
                ("lower.1.floor_exponent", lower.first_floor_exponent),
                ("lower.2.floor_exponent", lower.second_floor_exponent),
            ] {
                report.push(BoundEntry::new(id, Direction::Lower, v, src));
            }
            if !cli.json {
                return Ok(report_text(&report));
            }
            json!({"command": "bounds classical", "gn": gn, "gn1": gn1, "report": report})
        }
        Command::Verify(VerifyCommand::Day3) => {
            let v = verify_day3(&mut arena, &Fixtures::builtin())?;
            if !cli.json {
                let mut s = report_text(&v.report);
                s.push_str(&format!(
                    "\nfixture chain lengths {:?}; own chain lengths {:?}\n",
                    v.fixture_lengths, v.own_lengths
                ));
                return Ok(s);
            }
            let mut out = serde_json::to_value(&v).map_err(Error::from)?;
            out["command"] = json!("verify day3");
            out
        }
        Command::Canon { expr } => {
            let g = read_game(expr, &mut arena)?;
            let text = print(&arena, g);
            if !cli.json {
                return Ok(format!("{text}\n"));
            }
            json!({
                "command": "canon",
                "input": expr,
                "canonical": text,
                "birthday": arena.birthday(g),
            })
        }
        Command::Cmp { left, right } => {
            let g = read_game(left, &mut arena)?;
            let h = read_game(right, &mut arena)?;
            let relation = arena.compare(g, h).to_string();
            if !cli.json {
                return Ok(format!("{relation}\n"));
            }
            json!({"command": "cmp", "left": left, "right": right, "relation": relation})
        }
    };
    let mut value = value;
    value["schema_version"] = json!(SCHEMA_VERSION);
    let mut s = serde_json::to_string_pretty(&value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn load_set(input: &SetInput, arena: &mut GameArena) -> Result<GameSet, Failure> {
    match (&input.input, input.day) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::File(path.clone(), e))?;
            Ok(GameSet::from_file_str(&text, arena)?)
        }
        (None, Some(day)) => Ok(enumerate_day(arena, day)?),
        (None, None) => Err(Failure::Usage("one of --in or --day is required".into())),
    }
}

fn chains_json(set: &GameSet, division: &ChainDivision) -> Vec<Value> {
    division
        .chains()
        .iter()
        .map(|chain| {
            json!({
                "length": chain.len(),
                "games": chain.iter().map(|&g| set.name(g)).collect::<Vec<_>>(),
            })
        })
        .collect()
}

/// Either `[["2", "1*"], ...]` or the `chains` array printed by `chains --json`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ChainSpec {
    Names(Vec<String>),
    Listed { games: Vec<String> },
}

#[derive(Deserialize)]
struct ChainFile {
    chains: Vec<ChainSpec>,
}

fn read_chain_file(path: &Path, set: &GameSet) -> Result<ChainDivision, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::File(path.to_path_buf(), e))?;
    let file: ChainFile = serde_json::from_str(&text).map_err(Error::from)?;
    let chains = file
        .chains
        .into_iter()
        .map(|spec| {
            let names = match spec {
                ChainSpec::Names(n) | ChainSpec::Listed { games: n } => n,
            };
            names
                .iter()
                .map(|n| {
                    set.index_of_name(n).ok_or_else(|| {
                        Error::Format(format!("{n:?} is not a day-{} game", set.day()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let division = ChainDivision::new(chains);
    division.validate(set.poset())?;
    Ok(division)
}

fn report_text(report: &BoundReport) -> String {
    let mut s = format!("# {}\n", report.subject);
    for e in &report.entries {
        let digits = e.value.to_string();
        let shown = if digits.len() <= 24 {
            digits
        } else {
            e.value.to_scientific_string(6)
        };
        let dir = match e.direction {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Exact => "exact",
        };
        s.push_str(&format!(
            "{:<34} {:<5} {:>24}  log10={:.6}  ({})\n",
            e.id, dir, shown, e.log10, e.source
        ));
    }
    s
}
