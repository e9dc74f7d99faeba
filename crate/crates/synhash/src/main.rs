use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use synhash::config::Overrides;
use synhash::pipeline::{self, QueryTarget};
use synhash::{Error, Result, RunConfig};
use synhash_core::Scheme;

/// Cross-lingual document retrieval with synset hash-expressions.
#[derive(Debug, Parser)]
#[command(name = "synhash", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "synhash.toml")]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one topic model per scheme and language.
    Train,
    /// Label every topic of the trained models.
    Annotate,
    /// Flatten the taxonomy into categories and write mapping.json.
    Flatten {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Hash every document and write the index files.
    Index,
    /// Rank indexed documents against a document or raw text.
    Query {
        /// Id of an indexed document.
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        doc: Option<String>,
        /// Raw query text; needs --lang.
        #[arg(long, requires = "lang")]
        text: Option<String>,
        #[arg(long)]
        lang: Option<String>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Defaults to the first configured scheme.
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Run the precision@k experiments and write the reports.
    Eval {
        #[arg(long)]
        query_count: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let mut overrides = Overrides {
        seed: cli.seed,
        out_dir: cli.out_dir.clone(),
        ..Default::default()
    };
    match &cli.command {
        Command::Flatten { depth } => overrides.depth = *depth,
        Command::Eval { query_count, depth } => {
            overrides.query_count = *query_count;
            overrides.depth = *depth;
        }
        _ => {}
    }
    let mut cfg = RunConfig::load(&cli.config)?;
    cfg.apply(&overrides);
    cfg.validate()?;

    let report_written = |paths: Vec<PathBuf>| {
        for p in paths {
            println!("{}", p.display());
        }
    };
    match cli.command {
        Command::Train => report_written(pipeline::cmd_train(&cfg)?),
        Command::Annotate => report_written(pipeline::cmd_annotate(&cfg)?),
        Command::Flatten { .. } => report_written(vec![pipeline::cmd_flatten(&cfg)?]),
        Command::Index => report_written(pipeline::cmd_index(&cfg)?),
        Command::Query {
            doc,
            text,
            lang,
            k,
            scheme,
        } => {
            if k == 0 {
                return Err(Error::Usage("--k must be >= 1".into()));
            }
            let scheme: Scheme = match scheme {
                Some(s) => s.parse().map_err(|e: synhash_core::Error| Error::Usage(e.to_string()))?,
                None => cfg.schemes()?[0],
            };
            let target = match (doc, text, lang) {
                (Some(id), _, _) => QueryTarget::Doc(id),
                (None, Some(text), Some(lang)) => QueryTarget::Text { lang, text },
                _ => return Err(Error::Usage("give --doc, or --text with --lang".into())),
            };
            let result = pipeline::cmd_query(&cfg, scheme, &target, k)?;
            println!("rank\tdoc\tscore");
            for (i, (id, score)) in result.ranked.iter().enumerate() {
                println!("{}\t{id}\t{score:.6}", i + 1);
            }
        }
        Command::Eval { .. } => {
            pipeline::cmd_eval(&cfg)?;
            print!("{}", std::fs::read_to_string(cfg.out_dir.join("results.tsv")).unwrap_or_default());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("synhash: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
