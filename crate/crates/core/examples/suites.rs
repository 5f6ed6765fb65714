//! Runs every built-in verification suite and prints the reports.

use hypsum::verify::{run_suite, SuiteOptions, SUITES};

fn main() {
    let opts = SuiteOptions::default();
    for name in SUITES {
        let t = std::time::Instant::now();
        match run_suite(name, &opts) {
            Ok(reports) => {
                for r in reports {
                    print!("{r}");
                }
            }
            Err(e) => println!("FAIL {name}: {e}"),
        }
        eprintln!("  [{name}: {:.2?}]", t.elapsed());
    }
}
