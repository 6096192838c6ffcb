use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(k) = std::env::var("EBERLEIN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if k > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    ExitCode::from(eberlein_cli::run(std::env::args_os()))
}
