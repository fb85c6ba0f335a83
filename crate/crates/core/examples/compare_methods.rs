//! Runs the `compare` subcommand in-process and prints its table.
//!
//! cargo run --release --example compare_methods

fn main() {
    let dir = std::env::temp_dir().join("svim-compare-example");
    let config = dir.join("graph.toml");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        &config,
        "family = \"weakly_connected\"\nsizes = [100, 40, 160, 60, 540]\nbridge_edges = 600\nseed = 1\n",
    )
    .unwrap();
    let code = signed_voter::cli::run([
        "svim",
        "compare",
        "--generate",
        config.to_str().unwrap(),
        "--objective",
        "longterm",
        "--k",
        "50",
        "--t",
        "30",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    print!(
        "{}",
        std::fs::read_to_string(dir.join("compare.csv")).unwrap()
    );
    println!(
        "{}",
        std::fs::read_to_string(dir.join("compare_summary.json")).unwrap()
    );
}
