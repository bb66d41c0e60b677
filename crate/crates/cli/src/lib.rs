//! Experiment driver for the `coorbit` binary.
//!
//! Each subcommand resolves its parameters (built-in defaults, then an
//! optional `key=value` file, then flags), runs one experiment and writes a
//! CSV table whose `#` header lines record every resolved parameter.

pub mod commands;
pub mod config;
pub mod families;

use clap::{Arg, ArgAction, ArgMatches};
use commands::{execute, Command, Outcome, Status};
use config::{read_config_file, Config, UNRECORDED, VALUE_FLAGS};
use coorbit_core::CoorbitError;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVALID: i32 = 1;
    pub const CONVERGENCE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// Exit code for a library error.
pub fn exit_code(e: &CoorbitError) -> i32 {
    match e {
        CoorbitError::NotConverged(_)
        | CoorbitError::Diverged(_)
        | CoorbitError::OscillationTooLarge(_)
        | CoorbitError::NotIdempotent(_) => exit::CONVERGENCE,
        CoorbitError::NonFinite(_) => exit::NUMERICAL,
        _ => exit::INVALID,
    }
}

pub fn cli() -> clap::Command {
    let mut app = clap::Command::new("coorbit")
        .about("Coorbit-space experiments on the ax+b group and on commutative spaces")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("key=value file; flags override it"))
        .arg(Arg::new("out").long("out").global(true).value_name("FILE").help("output CSV path (default stdout)"))
        .arg(Arg::new("tile").long("tile").global(true).action(ArgAction::SetTrue).help("require the band to tile"));
    for (name, help) in VALUE_FLAGS {
        app = app.arg(Arg::new(*name).long(*name).global(true).value_name("VALUE").allow_hyphen_values(true).help(*help));
    }
    for c in Command::ALL {
        app = app.subcommand(clap::Command::new(c.name()).about(c.about()));
    }
    app
}

/// A parsed invocation: subcommand, resolved configuration and output path.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: Command,
    pub config: Config,
    pub out: Option<PathBuf>,
}

fn flag_values(m: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for (name, _) in VALUE_FLAGS {
        if let Some(v) = m.get_one::<String>(name) {
            out.insert(name.to_string(), v.clone());
        }
    }
    if m.get_flag("tile") {
        out.insert("tile".into(), "true".into());
    }
    out
}

/// Resolves defaults, the config file and flags into one configuration.
pub fn resolve(matches: &ArgMatches) -> Result<Invocation, CoorbitError> {
    let (name, sub) = matches.subcommand().ok_or_else(|| CoorbitError::InvalidParameter("missing subcommand".into()))?;
    let command = Command::from_name(name).ok_or_else(|| CoorbitError::InvalidParameter(format!("unknown subcommand {name}")))?;
    let mut config = Config::with_defaults(command.defaults());
    if let Some(path) = sub.get_one::<String>("config") {
        config.merge(&read_config_file(path.as_ref())?);
    }
    config.merge(&flag_values(sub));
    command.derive(&mut config)?;
    Ok(Invocation { command, config, out: sub.get_one::<String>("out").map(PathBuf::from) })
}

/// Runs an invocation and renders its CSV, header included.
pub fn render(inv: &Invocation) -> Result<(String, Status), CoorbitError> {
    let Outcome { mut table, status } = execute(inv.command, &inv.config)?;
    let mut header = vec![format!("coorbit {} {}", inv.command.name(), env!("CARGO_PKG_VERSION"))];
    header.extend(inv.config.entries().filter(|(k, _)| !UNRECORDED.contains(&k.as_str())).map(|(k, v)| format!("{k}={v}")));
    header.append(&mut table.comments);
    table.comments = header;
    Ok((table.to_string_lossless(), status))
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID } else { exit::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    let result = resolve(&matches).and_then(|inv| {
        let (text, status) = render(&inv)?;
        match &inv.out {
            Some(p) => std::fs::write(p, text.as_bytes()).map_err(|e| CoorbitError::Io(format!("{}: {e}", p.display())))?,
            None => {
                let mut so = std::io::stdout().lock();
                so.write_all(text.as_bytes())?;
                so.flush()?;
            }
        }
        Ok(status)
    });
    match result {
        Ok(Status::Success) => exit::SUCCESS,
        Ok(Status::NotConverged) => {
            eprintln!("coorbit: iteration stopped before reaching the tolerance");
            exit::CONVERGENCE
        }
        Err(e) => {
            eprintln!("coorbit: {e}");
            exit_code(&e)
        }
    }
}
