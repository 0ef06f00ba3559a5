//! Command-line pipeline over the `eegtf` library: corpus ingestion, feature
//! CSV extraction, classifier evaluation, feature ranking, greyscale
//! rendering, and per-feature histogram reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod matrix_io;
pub mod pipeline;
pub mod report;

use args::Command;

pub fn run(cli: args::Cli) -> anyhow::Result<()> {
    let config = config::RunConfig::resolve(&cli)?;
    match &cli.command {
        Command::Synth { per_class, dir } => commands::cmd_synth(&config, *per_class, dir.as_deref()),
        Command::Extract => commands::cmd_extract(&config),
        Command::Evaluate { features } => commands::cmd_evaluate(&config, features.as_deref()),
        Command::Rank { features } => commands::cmd_rank(&config, features.as_deref()),
        Command::Render { segments } => commands::cmd_render(&config, segments),
        Command::Histogram { feature, features } => {
            commands::cmd_histogram(&config, feature, features.as_deref())
        }
    }
}
