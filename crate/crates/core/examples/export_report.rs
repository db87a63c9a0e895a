//! Writes a JSON report, trace CSV and SVG plot through the command-line layer.

use sostiae::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("sostiae-example");
    std::fs::create_dir_all(&dir).expect("create output directory");
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (json, csv, svg) = (path("report.json"), path("trace.csv"), path("plot.svg"));

    let argv = [
        "sostiae", "tune", "--num", "1", "--den", "1,2,1", "--ts", "2.5", "--po", "1",
        "--out", &json, "--csv", &csv, "--svg", &svg,
    ];
    let code = run(argv, &mut std::io::stdout(), &mut std::io::stderr());
    println!("exit {code}; wrote {json}, {csv}, {svg}");
}
