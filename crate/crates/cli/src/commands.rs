use std::io::Write;
use std::path::{Path, PathBuf};

use active_sites::complexity::CostReport;
use active_sites::experiments::{run_grid, sweep_csv, trials_csv, ExperimentConfig, SweepRow};
use active_sites::retrieval::{retrieve, RetrievalResult, Strategy};
use active_sites::sites::{identify_sites, ActiveSiteMap};
use active_sites::training::{build_proximity, train_hebbian, Geometry, ProximityModel};
use active_sites::{Error, MemorySet, Spin, WeightMatrix};
use clap::Parser;
use serde::Serialize;

use crate::args::{
    Cli, Command, ComplexityArgs, ExperimentArgs, RetrieveArgs, SitemapArgs, TrainArgs,
};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::svg;

pub const WEIGHTS_FILE: &str = "weights.csv";
pub const SITES_FILE: &str = "sites.csv";
pub const POSITIONS_FILE: &str = "positions.csv";
pub const MEMORIES_FILE: &str = "memories.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn print(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// `file.csv` → `file.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

/// Runs a parsed command. `args` are the raw arguments (after the program
/// name) recorded in manifests.
pub fn run(cli: Cli, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Train(a) => cmd_train(&a, args, out),
        Command::Retrieve(a) => cmd_retrieve(&a, args, out),
        Command::Experiment(a) => cmd_experiment(&a, args, out),
        Command::Complexity(a) => cmd_complexity(&a, args, out),
        Command::Sitemap(a) => cmd_sitemap(&a, args, out),
        Command::Replay(a) => {
            let manifest = RunManifest::read(&a.manifest)?;
            let argv = std::iter::once(manifest.tool.clone()).chain(manifest.args.iter().cloned());
            let replayed = Cli::try_parse_from(argv)
                .map_err(|e| CliError::Manifest(format!("stored arguments: {e}")))?;
            if matches!(replayed.command, Command::Replay(_)) {
                return Err(CliError::Manifest("refusing to replay a replay".into()));
            }
            run(replayed, &manifest.args, out)
        }
    }
}

pub fn cmd_train(a: &TrainArgs, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    let memories = MemorySet::parse(&read(&a.memories)?)?;
    let geometry = Geometry::new(a.geometry.into(), a.seed);
    let prox = build_proximity(memories.n(), geometry)?;
    let t = train_hebbian(&memories);
    let map = identify_sites(&memories, a.r as usize)?;

    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    write(&a.out.join(WEIGHTS_FILE), &t.to_csv())?;
    write(&a.out.join(SITES_FILE), &map.to_csv())?;
    write(&a.out.join(POSITIONS_FILE), &prox.positions_csv())?;
    write(&a.out.join(MEMORIES_FILE), &memories.to_text())?;
    RunManifest::new("train", args, a, a.seed).write(&a.out.join(MANIFEST_FILE))?;

    let mut text = format!(
        "trained {} memories over {} neurons ({} geometry)\n",
        memories.m(),
        memories.n(),
        geometry.kind
    );
    for (i, entry) in map.entries().iter().enumerate() {
        let sites: Vec<String> = entry.sites.iter().map(|s| s.neuron.to_string()).collect();
        let strict = if map.fully_strict(i) { " (strict)" } else { "" };
        text.push_str(&format!(
            "memory {i}: level {} sites {}{strict}\n",
            entry.level,
            sites.join(",")
        ));
    }
    text.push_str(&format!("artifacts written to {}\n", a.out.display()));
    print(out, &text)
}

/// Artifacts written by `train`.
pub struct Trained {
    pub memories: MemorySet,
    pub weights: WeightMatrix,
    pub prox: ProximityModel,
    pub sites: ActiveSiteMap,
}

pub fn load_trained(dir: &Path) -> CliResult<Trained> {
    let memories = MemorySet::parse(&read(&dir.join(MEMORIES_FILE))?)?;
    let weights = WeightMatrix::from_csv(&read(&dir.join(WEIGHTS_FILE))?)?;
    let prox = ProximityModel::from_positions_csv(&read(&dir.join(POSITIONS_FILE))?)?;
    let sites = ActiveSiteMap::from_csv(&read(&dir.join(SITES_FILE))?)?;
    for actual in [weights.n(), prox.n()] {
        if actual != memories.n() {
            return Err(Error::Dimension {
                expected: memories.n(),
                actual,
            }
            .into());
        }
    }
    if train_hebbian(&memories) != weights {
        return Err(Error::Validation("weights do not match the stored memories".into()).into());
    }
    Ok(Trained {
        memories,
        weights,
        prox,
        sites,
    })
}

fn parse_spin(text: &str) -> CliResult<Spin> {
    match text.trim() {
        "1" | "+1" => Ok(1),
        "0" | "-1" => Ok(-1),
        other => Err(Error::Validation(format!("clamp value {other:?} is not 1 or 0")).into()),
    }
}

pub const RETRIEVE_CSV_HEADER: &str = "strategy,clamped_sites,values,output,matched,orders";

pub fn retrieval_csv(result: &RetrievalResult) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let values: String = result
        .clamped_sites
        .iter()
        .map(|&s| if result.output[s] > 0 { '1' } else { '0' })
        .collect();
    let orders: Vec<String> = result.orders.iter().map(|o| join(o.as_slice())).collect();
    format!(
        "{RETRIEVE_CSV_HEADER}\n{},{},{values},{},{},{}\n",
        result.strategy.kind(),
        join(&result.clamped_sites),
        result.output,
        result
            .matched
            .map_or_else(|| "none".to_string(), |m| m.to_string()),
        orders.join(";")
    )
}

pub fn cmd_retrieve(a: &RetrieveArgs, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    if a.sites.len() != a.values.len() {
        return Err(Error::Validation(format!(
            "{} sites but {} values",
            a.sites.len(),
            a.values.len()
        ))
        .into());
    }
    let values = a
        .values
        .iter()
        .map(|v| parse_spin(v))
        .collect::<CliResult<Vec<_>>>()?;
    let trained = load_trained(&a.trained)?;
    let strategy = Strategy::from_kind(a.strategy.into(), a.seed, a.combine.into());
    let result = retrieve(
        &trained.weights,
        &trained.prox,
        &a.sites,
        &values,
        strategy,
        &trained.memories,
    )?;

    let matched = result
        .matched
        .map_or_else(|| "none".to_string(), |m| m.to_string());
    let mut text = format!(
        "strategy: {}\nclamped: {:?}\noutput: {}\nmatched: {matched}\n",
        result.strategy.kind(),
        result.clamped_sites,
        result.output
    );
    for order in &result.orders {
        text.push_str(&format!("order: {order}\n"));
    }
    print(out, &text)?;

    if let Some(path) = &a.out {
        write(path, &retrieval_csv(&result))?;
        RunManifest::new("retrieve", args, a, a.seed).write(&sibling(path, "manifest.json"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ExperimentManifestConfig<'a> {
    args: &'a ExperimentArgs,
    base: &'a ExperimentConfig,
}

pub fn summary_table(rows: &[SweepRow]) -> String {
    let mut text = format!(
        "{:<12} {:>4} {:>4} {:>3} {:>6} {:>12} {:>8} {:>11} {:>9}\n",
        "strategy", "n", "m", "r", "trials", "mean_success", "stddev", "strict_rate", "any_match"
    );
    for row in rows {
        let c = &row.config;
        let s = &row.stats;
        text.push_str(&format!(
            "{:<12} {:>4} {:>4} {:>3} {:>6} {:>12.3} {:>8.3} {:>11.3} {:>9.3}\n",
            c.strategy.name(),
            c.n,
            c.m,
            c.r,
            c.trials,
            s.mean_success,
            s.stddev,
            s.strict_site_rate,
            s.mean_any_match
        ));
    }
    text
}

pub fn cmd_experiment(a: &ExperimentArgs, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    let min_n = a.n_list.iter().copied().min().unwrap_or(0);
    if a.r > min_n {
        return Err(Error::Domain(format!(
            "r = {} exceeds the smallest network size {min_n}",
            a.r
        ))
        .into());
    }
    let strategies: Vec<_> = a.strategies.iter().map(|&s| s.into()).collect();
    let base = ExperimentConfig {
        n: min_n,
        m: a.m.first().copied().unwrap_or(0),
        r: a.r,
        trials: a.trials,
        strategy: strategies
            .first()
            .copied()
            .ok_or_else(|| Error::Validation("no strategies given".into()))?,
        combine: a.combine.into(),
        geometry: a.geometry.into(),
        master_seed: a.seed,
        selection: Default::default(),
    };
    let rows = run_grid(&base, &a.n_list, &a.m, &strategies)?;
    print(out, &summary_table(&rows))?;

    if let Some(path) = &a.out {
        write(path, &sweep_csv(&rows))?;
        write(&sibling(path, "trials.csv"), &trials_csv(&rows))?;
        let config = ExperimentManifestConfig { args: a, base: &base };
        RunManifest::new("experiment", args, config, a.seed)
            .write(&sibling(path, "manifest.json"))?;
    }
    Ok(())
}

pub fn cmd_complexity(a: &ComplexityArgs, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    let report = CostReport::new(a.n, a.r)?;
    print(out, &report.to_text())?;
    if let Some(path) = &a.csv {
        write(path, &report.to_csv())?;
        RunManifest::new("complexity", args, a, 0).write(&sibling(path, "manifest.json"))?;
    }
    Ok(())
}

pub fn cmd_sitemap(a: &SitemapArgs, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    let prox = ProximityModel::from_positions_csv(&read(&a.trained.join(POSITIONS_FILE))?)?;
    let map = ActiveSiteMap::from_csv(&read(&a.trained.join(SITES_FILE))?)?;
    let svg = svg::render(&prox, &map)?;
    write(&a.out, &svg)?;
    RunManifest::new("sitemap", args, a, 0).write(&sibling(&a.out, "manifest.json"))?;
    print(
        out,
        &format!(
            "site map for {} neurons and {} memories written to {}\n",
            prox.n(),
            map.m(),
            a.out.display()
        ),
    )
}
