mod commands;
mod params;

use clap::{Arg, ArgMatches, Command};
use commands::COMMANDS;
use params::Params;
use std::path::PathBuf;
use std::process::ExitCode;

fn cli() -> Command {
    let mut cmd = Command::new("fracsol")
        .about("Evaluators for space-time fractional reaction-diffusion equations")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for (name, about, keys) in COMMANDS {
        let mut sub = Command::new(*name)
            .about(*about)
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .help("TOML file; flags override it"),
            )
            .arg(
                Arg::new("output")
                    .long("output")
                    .short('o')
                    .value_name("FILE")
                    .help("write CSV here instead of stdout"),
            );
        for key in *keys {
            sub = sub.arg(Arg::new(*key).long(*key).allow_hyphen_values(true));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn collect(name: &str, m: &ArgMatches) -> fracsol::Result<Params> {
    let keys = COMMANDS
        .iter()
        .find(|c| c.0 == name)
        .map_or(&[][..], |c| c.2);
    let mut flags = Params::default();
    for key in keys {
        if let Some(v) = m.get_one::<String>(key) {
            flags.insert(key, v.clone());
        }
    }
    let file = match m.get_one::<String>("config") {
        Some(path) => Params::from_toml(&PathBuf::from(path), name)?,
        None => Params::default(),
    };
    Ok(file.merged(flags))
}

fn fail(e: &fracsol::Error) -> ExitCode {
    let msg = e.to_string().replace('\n', " ");
    eprintln!("error: kind={} message={}", e.kind(), msg);
    ExitCode::from(if e.is_invalid_params() { 2 } else { 3 })
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, m) = matches.subcommand().expect("subcommand is required");
    let out = match collect(name, m).and_then(|p| commands::run(name, &p)) {
        Ok(out) => out.render(),
        Err(e) => return fail(&e),
    };
    match m.get_one::<String>("output") {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: kind=io message=cannot write {path}: {e}");
                return ExitCode::from(3);
            }
        }
        None => print!("{out}"),
    }
    ExitCode::SUCCESS
}
