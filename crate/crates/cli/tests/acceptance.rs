//! Acceptance: the plotting pipeline reproduces the three reference figures
//! structurally — sample counts, knot values sitting on the curve, and
//! sample-by-sample mirror symmetry between an instance and its flip.
//!
//! * figure 1: germ x^3 + x with its rough interpolant on [0, 1]
//! * figure 2: germ sqrt(x) and the mirrored germ on [-1, 0]
//! * figure 3: the sqrt interpolant and its mirrored interpolant

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const CERT_TOL: f64 = 1e-8;

fn afif(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_afif"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "afif {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn config(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("afif-accept-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

struct Csv {
    xs: Vec<f64>,
    germ: Vec<f64>,
    fractal: Vec<f64>,
}

fn read_csv(path: &PathBuf) -> Csv {
    let text = fs::read_to_string(path).expect("csv exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f,f_alpha"), "csv header");
    let mut csv = Csv {
        xs: Vec::new(),
        germ: Vec::new(),
        fractal: Vec::new(),
    };
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().expect("float cell")).collect();
        assert_eq!(cols.len(), 3, "three columns in `{line}`");
        csv.xs.push(cols[0]);
        csv.germ.push(cols[1]);
        csv.fractal.push(cols[2]);
    }
    csv
}

#[test]
fn criterion_8_figure_reproduction() {
    // Figure 1: sample count chosen so the five knots land on the grid.
    let fig1 = scratch("figure1.csv");
    afif(&[
        "plot",
        &config("example32.json"),
        "--samples",
        "2046",
        "--out",
        fig1.to_str().unwrap(),
    ]);
    let csv = read_csv(&fig1);
    assert_eq!(csv.xs.len(), 2046, "figure 1 sample count");
    let germ = afif_core::FunctionExpr::parse("x^3 + x").unwrap();
    for k in 0..=5 {
        let j = 409 * k;
        let x = csv.xs[j];
        assert!((x - k as f64 / 5.0).abs() < 1e-15, "knot {k} abscissa: {x}");
        let want = germ.eval(x).unwrap();
        assert!(
            (csv.fractal[j] - want).abs() <= CERT_TOL,
            "knot {k}: interpolant {} vs data {want}",
            csv.fractal[j]
        );
    }
    println!("  figure 1: 2046 samples, all 6 knot values on the curve");

    // Figures 2 and 3: mirrored germ and mirrored interpolant. A dyadic
    // sample count makes flipped abscissae exact negations of the originals.
    let flipped_config = scratch("sqrt_flipped.json");
    afif(&["flip", &config("sqrt.json"), "--out", flipped_config.to_str().unwrap()]);

    let fig3 = scratch("figure3.csv");
    let fig3_flipped = scratch("figure3_flipped.csv");
    afif(&[
        "plot",
        &config("sqrt.json"),
        "--samples",
        "2049",
        "--out",
        fig3.to_str().unwrap(),
    ]);
    afif(&[
        "plot",
        flipped_config.to_str().unwrap(),
        "--samples",
        "2049",
        "--out",
        fig3_flipped.to_str().unwrap(),
    ]);
    let orig = read_csv(&fig3);
    let mirr = read_csv(&fig3_flipped);
    assert_eq!(orig.xs.len(), 2049);
    assert_eq!(mirr.xs.len(), 2049);

    let n = orig.xs.len();
    let mut worst_germ = 0.0f64;
    let mut worst_fractal = 0.0f64;
    for j in 0..n {
        let twin = n - 1 - j;
        assert_eq!(
            mirr.xs[j], -orig.xs[twin],
            "abscissae are not exact mirror images at {j}"
        );
        worst_germ = worst_germ.max((mirr.germ[j] - orig.germ[twin]).abs());
        worst_fractal = worst_fractal.max((mirr.fractal[j] - orig.fractal[twin]).abs());
    }
    // Germ mirror (figure 2) is a plain change of sign in the argument.
    assert!(worst_germ <= 1e-15, "mirrored germ deviates by {worst_germ:e}");
    // Interpolant mirror (figure 3) within twice the certified bound.
    assert!(
        worst_fractal <= 2.0 * CERT_TOL,
        "mirrored interpolant deviates by {worst_fractal:e}"
    );
    println!("  figures 2-3: mirrored germ within 1e-15, mirrored interpolant within 2e-8");

    // SVG output for the same figures stays well-formed.
    let fig1_svg = scratch("figure1.svg");
    afif(&[
        "plot",
        &config("example32.json"),
        "--samples",
        "2048",
        "--out",
        fig1_svg.to_str().unwrap(),
        "--overlay-germ",
    ]);
    let svg = fs::read_to_string(&fig1_svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);

    println!("PASS criterion 8: figure outputs structurally correct (counts, knots, mirror symmetry)");
}
