use wpflow_core::config::Config;
use wpflow_core::suite::{run_suite, SUITES};

fn main() {
    let cfg = Config::default();
    for s in SUITES {
        let t0 = std::time::Instant::now();
        match run_suite(s, &cfg) {
            Ok(rows) => {
                for r in &rows {
                    println!("{}", r.summary_line());
                }
                eprintln!("-- suite {s}: {:.2}s", t0.elapsed().as_secs_f64());
            }
            Err(e) => eprintln!("-- suite {s} ERROR: {e}"),
        }
    }
}
