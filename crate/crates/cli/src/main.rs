use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lc_kernel::herbrand::{herbrand_pipeline, HerbrandError};
use lc_kernel::normalize::{normalize, NormalizeOptions, TraceStatus};
use lc_kernel::parallel::parallel_normalize;
use lc_kernel::parse::{parse_signature, parse_term};
use lc_kernel::reduction::{path_display, ReduceEnv};
use lc_kernel::simulate::{build_instance, check_simulation, BranchSide};
use lc_kernel::typecheck::{typecheck, Context, SystemFlavor};
use lc_kernel::{ProofTerm, Signature};

/// Exit codes: 1 for user errors (syntax, typing, unmet preconditions),
/// 3 for internal invariant violations (kernel bugs). Clap reserves 2 for
/// usage errors.
const USER_ERROR: u8 = 1;
const KERNEL_BUG: u8 = 3;

#[derive(Parser)]
#[command(name = "lct", about = "Proof-term kernel for Dummett logic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Proof-term file (.lct)
    file: PathBuf,
    /// System flavor
    #[arg(long, default_value = "lc")]
    flavor: SystemFlavor,
    /// Signature file extending the default signature
    #[arg(long)]
    signature: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a proof term and print its formula
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Head-normalize a proof term
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Print one line per reduction step
        #[arg(long)]
        trace: bool,
        /// Maximum number of head steps
        #[arg(long, default_value_t = 1_000_000)]
        fuel: usize,
        /// Skip type checking and run the untyped calculus
        #[arg(long)]
        untyped: bool,
        /// Reduction strategy
        #[arg(long, default_value = "head", value_parser = ["head", "parallel"])]
        strategy: String,
    },
    /// Extract the Herbrand witnesses of a closed existential proof
    Herbrand {
        #[command(flatten)]
        common: CommonArgs,
        /// Maximum number of head steps
        #[arg(long, default_value_t = 1_000_000)]
        fuel: usize,
    },
    /// Check local simulation on a top-level parallel composition
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Budget for subject steps and for each simulated run
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&CommonArgs, fn(&Cli, &ProofTerm, SystemFlavor) -> ExitCode) =
        match &cli.command {
            Command::Check { common } => (common, run_check),
            Command::Reduce { common, .. } => (common, run_reduce),
            Command::Herbrand { common, .. } => (common, run_herbrand),
            Command::Simulate { common, .. } => (common, run_simulate),
        };

    let sig = match load_signature(common) {
        Ok(sig) => sig,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(USER_ERROR);
        }
    };
    let source = match fs::read_to_string(&common.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.file.display());
            return ExitCode::from(USER_ERROR);
        }
    };
    let term = match parse_term(&source, &sig) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", common.file.display());
            return ExitCode::from(USER_ERROR);
        }
    };
    run(&cli, &term, common.flavor)
}

fn load_signature(common: &CommonArgs) -> Result<Signature, String> {
    let base = Signature::standard();
    match &common.signature {
        None => Ok(base),
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_signature(&src, base).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}

fn run_check(_cli: &Cli, term: &ProofTerm, flavor: SystemFlavor) -> ExitCode {
    match typecheck(&Context::empty(), term, flavor) {
        Ok(formula) => {
            println!("{formula}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("type error: {e}");
            ExitCode::from(USER_ERROR)
        }
    }
}

fn run_reduce(cli: &Cli, term: &ProofTerm, flavor: SystemFlavor) -> ExitCode {
    let Command::Reduce {
        trace,
        fuel,
        untyped,
        strategy,
        ..
    } = &cli.command
    else {
        unreachable!()
    };
    let env = if *untyped {
        ReduceEnv::untyped()
    } else {
        if let Err(e) = typecheck(&Context::empty(), term, flavor) {
            eprintln!("type error: {e}");
            return ExitCode::from(USER_ERROR);
        }
        ReduceEnv::typed(flavor, Context::empty())
    };
    let opts = NormalizeOptions {
        fuel: *fuel,
        ..Default::default()
    };

    if strategy == "parallel" {
        return match parallel_normalize(term, &env, &opts) {
            Ok(outcome) => {
                if *trace {
                    for (i, site) in outcome
                        .left_steps
                        .iter()
                        .map(|s| ("left", s))
                        .chain(outcome.right_steps.iter().map(|s| ("right", s)))
                        .enumerate()
                    {
                        let (phase, site) = site;
                        println!(
                            "step={} phase={phase} kind={} path={}",
                            i + 1,
                            site.kind,
                            path_display(&site.path)
                        );
                    }
                }
                println!("{}", outcome.normal_form);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(KERNEL_BUG)
            }
        };
    }

    let result = normalize(term, &env, &opts);
    if *trace {
        for step in &result.steps {
            match &step.after {
                Some(after) => println!(
                    "step={} kind={} path={} term={after}",
                    step.index,
                    step.site.kind,
                    path_display(&step.site.path)
                ),
                None => println!(
                    "step={} kind={} path={}",
                    step.index,
                    step.site.kind,
                    path_display(&step.site.path)
                ),
            }
        }
    }
    match result.status {
        TraceStatus::Normalized => {
            println!("{}", result.final_term);
            ExitCode::SUCCESS
        }
        TraceStatus::FuelExhausted => {
            eprintln!("fuel exhausted after {} steps", result.fuel_used);
            if *untyped {
                // Untyped input may legitimately diverge.
                ExitCode::from(USER_ERROR)
            } else {
                // Typed terms normalize; running out of fuel is a bug.
                ExitCode::from(KERNEL_BUG)
            }
        }
    }
}

fn run_herbrand(cli: &Cli, term: &ProofTerm, flavor: SystemFlavor) -> ExitCode {
    let Command::Herbrand { fuel, .. } = &cli.command else {
        unreachable!()
    };
    let opts = NormalizeOptions {
        fuel: *fuel,
        ..Default::default()
    };
    match herbrand_pipeline(term, flavor, &opts) {
        Ok(result) => {
            let witnesses = result
                .witnesses
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            println!("witnesses: {witnesses}");
            println!("disjunction: {}", result.disjunction);
            println!("proof: {}", result.proof);
            ExitCode::SUCCESS
        }
        Err(e @ HerbrandError::KernelBug(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(KERNEL_BUG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USER_ERROR)
        }
    }
}

fn run_simulate(cli: &Cli, term: &ProofTerm, flavor: SystemFlavor) -> ExitCode {
    let Command::Simulate { max_steps, .. } = &cli.command else {
        unreachable!()
    };
    let ctx = Context::empty();
    let instance = match build_instance(term, &ctx, flavor) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USER_ERROR);
        }
    };
    println!("left-sim: {}", instance.left_sim);
    println!("right-sim: {}", instance.right_sim);
    match check_simulation(&instance, *max_steps, &ctx, flavor) {
        Ok(report) => {
            for step in &report.steps {
                let branch = match step.branch {
                    BranchSide::Left => "left",
                    BranchSide::Right => "right",
                };
                println!(
                    "step={} branch={branch} kind={} sim-steps={} abort-steps={}",
                    step.subject_step, step.kind, step.sim_steps, step.abort_steps
                );
            }
            println!("simulated {} subject steps: ok", report.subject_steps);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(KERNEL_BUG)
        }
    }
}
