use clap::Parser;

use orthocyc::cli::{self, Cli};

fn main() {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() {
                cli::EXIT_USAGE
            } else {
                cli::EXIT_OK
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!(
                "{}",
                serde_json::json!({"error": e.to_string(), "reason_code": "thread-pool"})
            );
            std::process::exit(cli::EXIT_USAGE);
        }
    }
    match cli::run(args) {
        Ok(out) => {
            print!("{}", out.stdout);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("{}", cli::error_json(&e));
            std::process::exit(cli::error_code(&e));
        }
    }
}
