//! Command-line experiment harness.
//!
//! ```text
//! labcli gen    --config <path> --out <dir>
//! labcli run    --config <path> --problems <dir> --out <dir> [--strict]
//! labcli verify [--quick] --out <dir>
//! labcli report --in <dir> --out <path>
//! ```
//!
//! Exit codes: 0 ok, 1 usage, 2 validation, 3 invariant violation (strict
//! mode), 4 I/O. `LAB_THREADS` bounds the worker count of `run`.

use labcli::config::ExperimentConfig;
use labcli::runner::{build_job, execute, generate_instance, load_instance};
use labcli::telemetry::write_csv;
use labcli::verify;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_IO: u8 = 4;

fn usage() -> String {
    "usage:\n  labcli gen    --config <path> --out <dir>\n  labcli run    --config <path> --problems <dir> --out <dir> [--strict]\n  labcli verify [--quick] --out <dir>\n  labcli report --in <dir> --out <path>\n".to_string()
}

struct Flags {
    named: HashMap<String, String>,
    switches: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut named = HashMap::new();
    let mut switches = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if !a.starts_with("--") {
            return Err(format!("unexpected argument {a:?}"));
        }
        let key = a.trim_start_matches("--").to_string();
        match key.as_str() {
            "strict" | "quick" => {
                switches.push(key);
                i += 1;
            }
            "config" | "out" | "problems" | "in" => {
                let val = args
                    .get(i + 1)
                    .ok_or_else(|| format!("flag --{key} needs a value"))?;
                named.insert(key, val.clone());
                i += 2;
            }
            other => return Err(format!("unknown flag --{other}")),
        }
    }
    Ok(Flags { named, switches })
}

fn require<'a>(flags: &'a Flags, key: &str) -> Result<&'a str, String> {
    flags
        .named
        .get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| format!("missing required flag --{key}"))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = args.first() else {
        eprintln!("{}", usage());
        return ExitCode::from(EXIT_USAGE);
    };
    let flags = match parse_flags(&args[1..]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}\n{}", usage());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match cmd.as_str() {
        "gen" => cmd_gen(&flags),
        "run" => cmd_run(&flags),
        "verify" => cmd_verify(&flags),
        "report" => cmd_report(&flags),
        other => {
            eprintln!("unknown command {other:?}\n{}", usage());
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load_config(path: &str) -> Result<ExperimentConfig, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_IO, format!("reading {path}: {e}")))?;
    ExperimentConfig::from_json(&text).map_err(|e| (EXIT_VALIDATION, format!("{e:#}")))
}

fn fail(code: u8, msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn cmd_gen(flags: &Flags) -> ExitCode {
    let (config_path, out_dir) = match (require(flags, "config"), require(flags, "out")) {
        (Ok(c), Ok(o)) => (c, o),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}\n{}", usage());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cfg = match load_config(config_path) {
        Ok(c) => c,
        Err((code, msg)) => return fail(code, msg),
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return fail(EXIT_IO, format!("creating {out_dir}: {e}"));
    }
    for (index, spec) in cfg.problems.iter().enumerate() {
        let inst = match generate_instance(spec, cfg.seed, index as u64) {
            Ok(i) => i,
            Err(e) => return fail(EXIT_VALIDATION, format!("{:#}", e)),
        };
        let path = Path::new(out_dir).join(format!("{}.json", spec.id));
        let json = match serde_json::to_string_pretty(&inst) {
            Ok(j) => j,
            Err(e) => return fail(EXIT_IO, e.to_string()),
        };
        if let Err(e) = std::fs::write(&path, json) {
            return fail(EXIT_IO, format!("writing {}: {e}", path.display()));
        }
        eprintln!("gen: wrote {}", path.display());
    }
    ExitCode::SUCCESS
}

fn cmd_run(flags: &Flags) -> ExitCode {
    let (config_path, problems_dir, out_dir) = match (
        require(flags, "config"),
        require(flags, "problems"),
        require(flags, "out"),
    ) {
        (Ok(c), Ok(p), Ok(o)) => (c, p, o),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            eprintln!("error: {e}\n{}", usage());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let strict = flags.switches.iter().any(|s| s == "strict");
    let cfg = match load_config(config_path) {
        Ok(c) => c,
        Err((code, msg)) => return fail(code, msg),
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return fail(EXIT_IO, format!("creating {out_dir}: {e}"));
    }

    // assemble jobs up front so validation failures surface before any run
    let mut jobs = Vec::new();
    for run in &cfg.runs {
        for pid in &run.problems {
            let path = Path::new(problems_dir).join(format!("{pid}.json"));
            let inst = match load_instance(&path) {
                Ok(i) => i,
                Err(e) => return fail(EXIT_IO, format!("{e:#}")),
            };
            let job = match build_job(run, &inst, strict) {
                Ok(j) => j,
                Err(e) => return fail(EXIT_VALIDATION, format!("{e:#}")),
            };
            jobs.push(job);
        }
    }

    let workers = std::env::var("LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .min(jobs.len().max(1));

    let queue = Mutex::new(jobs);
    let failures: Mutex<Vec<(u8, String)>> = Mutex::new(Vec::new());
    let outputs: Mutex<Vec<(PathBuf, String)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let Some(job) = queue.lock().unwrap().pop() else {
                    return;
                };
                let start = std::time::Instant::now();
                match execute(&job) {
                    Ok((rows, trace)) => {
                        let path = Path::new(out_dir).join(format!("{}.csv", job.experiment));
                        outputs.lock().unwrap().push((path, write_csv(&rows)));
                        eprintln!(
                            "run: {} ({} rows, {} violations, {:.1} ms)",
                            job.experiment,
                            rows.len(),
                            trace.violations.len(),
                            start.elapsed().as_secs_f64() * 1e3
                        );
                    }
                    Err(e) => {
                        let code = match e.downcast_ref::<proxgrad::Error>() {
                            Some(proxgrad::Error::InvariantViolated { .. }) => EXIT_INVARIANT,
                            _ => EXIT_VALIDATION,
                        };
                        failures.lock().unwrap().push((code, format!("{e:#}")));
                    }
                }
            });
        }
    });

    let failures = failures.into_inner().unwrap();
    if let Some((code, msg)) = failures.first() {
        return fail(*code, msg.clone());
    }
    for (path, text) in outputs.into_inner().unwrap() {
        if let Err(e) = std::fs::write(&path, text) {
            return fail(EXIT_IO, format!("writing {}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(flags: &Flags) -> ExitCode {
    let out_dir = match require(flags, "out") {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}\n{}", usage());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let quick = flags.switches.iter().any(|s| s == "quick");
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return fail(EXIT_IO, format!("creating {out_dir}: {e}"));
    }
    let results = verify::run_all(quick);
    print!("{}", verify::render(&results));
    let json = serde_json::to_string_pretty(&results).expect("serializable results");
    let path = Path::new(out_dir).join("verify.json");
    if let Err(e) = std::fs::write(&path, json) {
        return fail(EXIT_IO, format!("writing {}: {e}", path.display()));
    }
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVARIANT)
    }
}

fn cmd_report(flags: &Flags) -> ExitCode {
    let (in_dir, out_path) = match (require(flags, "in"), require(flags, "out")) {
        (Ok(i), Ok(o)) => (i, o),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}\n{}", usage());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let report = match labcli::report::build_report(Path::new(in_dir)) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_IO, format!("{e:#}")),
    };
    let json = serde_json::to_string_pretty(&report).expect("serializable report");
    if let Err(e) = std::fs::write(out_path, json) {
        return fail(EXIT_IO, format!("writing {out_path}: {e}"));
    }
    ExitCode::SUCCESS
}
