use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Analyses of groups acting on CAT(0) cube complexes.
///
/// Every run prints one JSON report on stdout. Exit codes: 0 pass, 1 fail or
/// counterexample, 2 inconclusive within the resource bounds, 3 input error.
#[derive(Parser, Debug)]
#[command(name = "cubegirth", version)]
pub struct Cli {
    /// Seed for every random sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Radius budget for questions asked of infinite spaces.
    #[arg(long, global = true, default_value_t = 24)]
    pub radius: usize,
    /// Longest word tried by word searches.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_word_len: usize,
    /// Replay a saved report and check that a fresh run reproduces it.
    #[arg(long, value_name = "REPORT")]
    pub verify_report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Check that a cubegraph is a connected median graph with flag links.
    Validate { file: PathBuf },
    /// List the hyperplanes of a cubegraph.
    Hyperplanes { file: PathBuf },
    /// Classify every pair of hyperplanes of a cubegraph.
    Relations { file: PathBuf },
    /// Build the cube complex dual to a pocset.
    Dual { file: PathBuf },
    /// Girth of a Cayley graph.
    Girth(GirthArgs),
    /// Largest girth over small generating sets of a permutation group.
    GirthSup {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_gens: usize,
    },
    /// Check a group law on a permutation group.
    LawCheck {
        file: PathBuf,
        /// The law, a word in a, b, c, ... (capitals are inverses).
        #[arg(long)]
        word: String,
        /// Number of random tuples; 0 checks every tuple.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Search for a word flipping a halfspace.
    FlipSearch {
        #[command(flatten)]
        space: SpaceArgs,
        /// Halfspace `u|v`: the side of the edge u-v containing v.
        #[arg(long)]
        half: String,
    },
    /// Search for a word double skewering a nested pair of halfspaces.
    SkewerSearch {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        inner: String,
        #[arg(long)]
        outer: String,
        /// Also require the pair to be strongly separated.
        #[arg(long)]
        strong: bool,
    },
    /// Grow a facing triple into a family of strongly separated facing pairs.
    Amplify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Three comma-separated halfspaces `a,b,c`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        triple: Vec<String>,
        /// Number of pairs to produce.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Longest flip searched for; defaults to `--max-word-len`.
        #[arg(long)]
        flip_len: Option<usize>,
    },
    /// Build or check ping-pong certificates on products of trees.
    #[command(subcommand)]
    GirthCert(CertCommand),
    /// The fixing group of a pair of opposite corners of the n-cube and its wreath action.
    WreathDemo {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Support window `[-w, w]` of sampled elements.
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Hyperplanes { .. } => "hyperplanes",
            Command::Relations { .. } => "relations",
            Command::Dual { .. } => "dual",
            Command::Girth(_) => "girth",
            Command::GirthSup { .. } => "girth-sup",
            Command::LawCheck { .. } => "law-check",
            Command::FlipSearch { .. } => "flip-search",
            Command::SkewerSearch { .. } => "skewer-search",
            Command::Amplify { .. } => "amplify",
            Command::GirthCert(CertCommand::Build { .. }) => "girth-cert build",
            Command::GirthCert(CertCommand::Check { .. }) => "girth-cert check",
            Command::WreathDemo { .. } => "wreath-demo",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct GirthArgs {
    /// A permgrp file; its generators form the generating set.
    #[arg(required_unless_present = "tree")]
    pub file: Option<PathBuf>,
    /// A free product tree instead: `free:K` or `inv:K`.
    #[arg(long, conflicts_with = "file", requires = "gens")]
    pub tree: Option<String>,
    /// Comma-separated generating words for `--tree`.
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<String>,
}

/// Exactly one of `--tree`, `--complex` with `--aut`, or `--line`.
#[derive(Args, Debug, Serialize)]
pub struct SpaceArgs {
    /// Regular tree of a free product: `free:K` (rank K) or `inv:K` (K involutions).
    #[arg(long)]
    pub tree: Option<String>,
    /// A finite cubegraph, acted on by the automorphisms of `--aut`.
    #[arg(long, requires = "aut")]
    pub complex: Option<PathBuf>,
    /// An autperm file for `--complex`.
    #[arg(long, requires = "complex")]
    pub aut: Option<PathBuf>,
    /// The line of copies of the n-cube, acted on by the shift `a` and the fixing group.
    #[arg(long)]
    pub line: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertCommand {
    /// Search for a certificate from pole halfspaces and check it.
    Build {
        /// One tree per factor: `free:K` or `inv:K`.
        #[arg(long = "tree", required = true)]
        trees: Vec<String>,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
        /// Comma-separated generators; defaults to sigma and tau.
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        /// Pole halfspaces `h,h'` of sigma and tau, one per factor.
        #[arg(long = "poles", required = true)]
        poles: Vec<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        /// Length of the cycle-free range checked.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Random reduced words tested against the free subgroup.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also write the certificate to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate (a ppcert file or a report from `build`).
    Check {
        file: PathBuf,
        #[arg(long = "tree", required = true)]
        trees: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}
