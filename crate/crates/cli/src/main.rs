use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilcayley_core::distortion::{full_synthesize, synthesize_layer_word, word_eval};
use nilcayley_core::harness::{
    compare_experiment, filtration_scaling_experiment, rank_warning, run_trials, summarize, write_cdf_tsv,
    write_summary_csv, Config, Source,
};
use nilcayley_core::lattice::{rescale, torus_diameter_l1_with, IntegerLattice, DEFAULT_CELL_BUDGET};
use nilcayley_core::metrics::{bfs_distance_map_with, fast_diameter, BfsConfig, FiltrationReport};
use nilcayley_core::{Error, GeneratingSet, GroupSpec, Result};

/// Cayley graph diameters of finite nilpotent groups.
#[derive(Parser)]
#[command(name = "nilcayley", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Group descriptor: `ut:q,d` or `abelian:m1,m2,...`.
    spec: GroupSpec,
    /// Positive generators as entry vectors, `;`-separated, e.g. `1,0,0;0,1,0`.
    #[arg(short, long)]
    gens: String,
    /// BFS memory cap in bytes.
    #[arg(long, default_value_t = BfsConfig::default().memory_cap)]
    memory_cap: u64,
}

impl GraphArgs {
    fn load(&self) -> Result<(GeneratingSet, BfsConfig)> {
        let gens = GeneratingSet::parse(&self.spec, &self.gens)?;
        Ok((gens, BfsConfig { memory_cap: self.memory_cap, ..BfsConfig::default() }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Diameter of Γ(G, S) and of its abelianisation.
    Diam(GraphArgs),
    /// Subgroup and quotient diameters along the lower central series, as JSON.
    Filtration(GraphArgs),
    /// A word for `target`, checked by evaluation.
    Synth {
        #[command(flatten)]
        graph: GraphArgs,
        /// Target entry vector, e.g. `3,1,4`.
        #[arg(short, long)]
        target: String,
        /// Target lies in the last lower central series term; use the
        /// distortion construction directly.
        #[arg(long)]
        top_layer: bool,
    },
    /// Coset diameter and rescaled ℓ¹ torus diameter of a congruence lattice.
    Lattice {
        /// `lat:k=K;mod=m1,...;g=...` with the `r × k` residues row by row.
        descriptor: IntegerLattice,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        max_cells: u64,
        /// Skip the exact coset diameter above this covolume.
        #[arg(long, default_value_t = 1 << 30)]
        covolume_cap: u64,
    },
    /// Monte Carlo trials from a config file; JSON lines to stdout or `--out`.
    Montecarlo {
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// CSV summary of the batch.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Run the per-layer scaling experiment over `q_grid` instead and
        /// write its table here.
        #[arg(long)]
        filtration_table: Option<PathBuf>,
    },
    /// Two configs: KS report as JSON, CDF tables as TSV.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Writes `<prefix>.a.tsv` and `<prefix>.b.tsv`.
        #[arg(long)]
        cdf_prefix: Option<PathBuf>,
        /// Trial records of both sides.
        #[arg(long)]
        records: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn warn_rank(config: &Config) {
    if let Source::Group(spec) = &config.source {
        if let Some(w) = rank_warning(spec, config.k) {
            eprintln!("warning: {w}");
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Diam(args) => {
            let (gens, bfs) = args.load()?;
            let diam = fast_diameter(&args.spec, &gens, &bfs)?;
            let ab = args.spec.abelianisation();
            let diam_ab = fast_diameter(&ab, &gens.abelianised(&args.spec)?, &bfs)?;
            writeln!(out, "diam {diam}\ndiam_ab {diam_ab}")?;
        }
        Command::Filtration(args) => {
            let (gens, bfs) = args.load()?;
            let report = FiltrationReport::for_generators(&args.spec, &gens, &bfs)?;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Command::Synth { graph, target, top_layer } => {
            let (gens, bfs) = graph.load()?;
            let spec = &graph.spec;
            let digits = target
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            let target = spec.encode(&digits)?;
            let abmap = bfs_distance_map_with(&spec.abelianisation(), &gens.abelianised(spec)?, &bfs)?;
            let word = if top_layer {
                synthesize_layer_word(spec, &gens, target, &abmap)?
            } else {
                full_synthesize(spec, &gens, target, &abmap)?
            };
            if word_eval(spec, &gens, &word)? != target {
                return Err(Error::Precondition("synthesized word does not evaluate to the target".into()));
            }
            writeln!(out, "length {}\n{word}", word.len())?;
        }
        Command::Lattice { descriptor, eps, max_cells, covolume_cap } => {
            writeln!(out, "covolume {}", descriptor.covolume())?;
            if descriptor.covolume() <= covolume_cap {
                writeln!(out, "coset_diameter {}", descriptor.coset_diameter_exact(covolume_cap)?)?;
            }
            let e = torus_diameter_l1_with(&rescale(&descriptor), eps, max_cells)?;
            writeln!(out, "torus_diameter {e}")?;
        }
        Command::Montecarlo { config, out: path, summary, filtration_table } => {
            let config = Config::load(config)?;
            warn_rank(&config);
            if let Some(table_path) = filtration_table {
                let table = filtration_scaling_experiment(&config)?;
                table.write_tsv(create(&table_path)?)?;
                for (i, slope) in &table.slopes {
                    match slope {
                        Some(s) => writeln!(out, "slope i={i} {s}")?,
                        None => writeln!(out, "slope i={i} n/a")?,
                    }
                }
                return Ok(());
            }
            let records = match path {
                Some(p) => {
                    let mut w = create(&p)?;
                    let r = run_trials(&config, Some(&mut w))?;
                    w.flush()?;
                    r
                }
                None => run_trials(&config, Some(&mut out))?,
            };
            if let Some(p) = summary {
                write_summary_csv(create(&p)?, &[summarize(&config, &records)?])?;
            }
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                eprintln!("{failed} of {} trials failed", records.len());
            }
        }
        Command::Compare { a, b, cdf_prefix, records } => {
            let (ca, cb) = (Config::load(a)?, Config::load(b)?);
            warn_rank(&ca);
            warn_rank(&cb);
            let (report, ra, rb) = compare_experiment(&ca, &cb)?;
            if let Some(prefix) = cdf_prefix {
                let name = |side: &str| {
                    let mut p = prefix.clone().into_os_string();
                    p.push(format!(".{side}.tsv"));
                    PathBuf::from(p)
                };
                write_cdf_tsv(create(&name("a"))?, &report.cdf_a)?;
                write_cdf_tsv(create(&name("b"))?, &report.cdf_b)?;
            }
            if let Some(p) = records {
                let mut w = create(&p)?;
                for r in ra.iter().chain(&rb) {
                    nilcayley_core::harness::write_record(&mut w, r)?;
                }
                w.flush()?;
            }
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
