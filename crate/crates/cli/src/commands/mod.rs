//! The four subcommands. Each instance is processed independently (in
//! parallel when more than one job is allowed) and results are merged in
//! configuration order.

mod certify;
mod derive;
mod run;
mod verify;

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cat0_core::sampling::SampleScale;

use crate::config::{ExperimentConfig, InstanceSpec};
use crate::error::CliError;
use crate::report::{self, InstanceOutput, Outcome};
use crate::setup;

pub use certify::certify_instance;
pub use derive::{derive_targets, fixed_point_of, Targets};
pub use run::run_instance;
pub use verify::{verify_mapping_instance, verify_space, verify_space_instance, SpaceCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    VerifySpace,
    VerifyMapping,
    Run,
    Certify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifySpace => "verify-space",
            Command::VerifyMapping => "verify-mapping",
            Command::Run => "run",
            Command::Certify => "certify",
        }
    }

    fn notes(self) -> &'static [&'static str] {
        match self {
            Command::VerifySpace | Command::VerifyMapping => &[
                "residuals are lhs - rhs of each inequality; a sample passes when its residual is at most the tolerance",
            ],
            Command::Run => &[
                "delta-limit verdicts use a finite-dimensional proxy: the last iterate and the asymptotic center of the tail window must lie within tolerance of the claimed limit",
            ],
            Command::Certify => &[
                "certificates check every recorded index at or beyond the bound; `complete` means the iteration became stationary, so all later indices are covered as well",
                "`hypothesis-unsatisfied` means the start point violates the rate's assumptions, so the rate makes no claim",
            ],
        }
    }
}

/// Per-instance inputs shared by all commands.
pub struct Context<'a> {
    pub config: &'a ExperimentConfig,
    pub spec: &'a InstanceSpec,
    pub scale: SampleScale,
    pub rng: ChaCha8Rng,
}

/// Seed of the `index`-th instance, derived from the run seed.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn scale_of(config: &ExperimentConfig) -> SampleScale {
    let mut s = SampleScale::default();
    if let Some(doc) = config.sample_scale {
        if let Some(r) = doc.euclid_radius {
            s.euclid_radius = r;
        }
        if let Some(r) = doc.disk_radius {
            s.disk_radius = r;
        }
    }
    s
}

pub fn run_instance_command(cmd: Command, ctx: Context<'_>) -> Result<(Outcome, serde_json::Value, report::Files), CliError> {
    let inst = setup::instance(ctx.spec).map_err(|e| CliError::Config(format!("instance `{}`: {e}", ctx.spec.name)))?;
    let wrap = |source| CliError::Core {
        instance: ctx.spec.name.clone(),
        source,
    };
    match cmd {
        Command::VerifySpace => verify_space_instance(&inst, ctx).map_err(wrap),
        Command::VerifyMapping => verify_mapping_instance(&inst, ctx).map_err(wrap),
        Command::Run => run_instance(&inst, ctx).map_err(wrap),
        Command::Certify => certify_instance(&inst, ctx).map_err(wrap),
    }
}

/// Runs `cmd` over every configured instance and writes the outputs.
pub fn execute(cmd: Command, config: &ExperimentConfig, seed: u64, jobs: usize, out: &Path) -> Result<Outcome, CliError> {
    let scale = scale_of(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let outputs: Vec<Result<InstanceOutput, CliError>> = pool.install(|| {
        config
            .instances
            .par_iter()
            .enumerate()
            .map(|(i, spec)| {
                let started = Instant::now();
                let ctx = Context {
                    config,
                    spec,
                    scale,
                    rng: ChaCha8Rng::seed_from_u64(instance_seed(seed, i)),
                };
                let (outcome, body, files) = run_instance_command(cmd, ctx)?;
                Ok(InstanceOutput {
                    name: spec.name.clone(),
                    outcome,
                    body,
                    files,
                    millis: started.elapsed().as_secs_f64() * 1e3,
                })
            })
            .collect()
    });
    let outputs = outputs.into_iter().collect::<Result<Vec<_>, _>>()?;
    report::write(out, cmd.name(), seed, cmd.notes(), &outputs)
}
