use std::process::ExitCode;

use wehrl_lab::cli::{parse_config, run};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = match parse_config(&argv, None) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            if e.code == 0 {
                print!("{}", e.message);
            } else {
                eprint!("{}", e.message);
                if !e.message.ends_with('\n') {
                    eprintln!();
                }
            }
            e.code
        }
    };
    ExitCode::from(code as u8)
}
