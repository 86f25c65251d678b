//! Command-line front end: sample surfaces to OBJ meshes, export
//! rotational profile curves, run the verification suite, and scan for
//! singularities. Runs are reproducible: defaults are echoed into report
//! headers, sampling is seeded, and no output contains timestamps, so
//! identical invocations produce identical bytes.

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use hsurf::mesh::{export_obj, export_profile_csv, sample_surface, GridSpec, MeshTarget};
use hsurf::rotational::{
    profile_range, singularity_scan, RotH1Params, RotH2Params, RotParams, ScanTarget,
};
use hsurf::verify::{full_suite, Rect};
use hsurf::{parse_expr, Field, HoloData, SurfaceClass};
use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "hsurf",
    version,
    about = "Surfaces from holomorphic data: meshes, profile curves, and identity verification"
)]
struct Cli {
    /// File with `key = value` lines supplying defaults for any flag of
    /// the chosen subcommand; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a surface over a (u, v) grid and write an OBJ mesh.
    Surface(SurfaceArgs),
    /// Evaluate a rotational profile curve to CSV, optionally with a mesh.
    Rotational(RotationalArgs),
    /// Run the verification suite for a field and report pass/fail.
    Verify(VerifyArgs),
    /// Locate singularities of a rotational family on a u interval.
    Scan(ScanArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    /// Surface family: h1 or h2.
    #[arg(long)]
    class: Option<String>,
    /// Holomorphic g(z), e.g. "z" or "e^z".
    #[arg(long)]
    g: Option<String>,
    /// Holomorphic A(z).
    #[arg(long = "A")]
    a_expr: Option<String>,
    /// Holomorphic B(z) (h2 class only).
    #[arg(long = "B")]
    b_expr: Option<String>,
    /// Generating function f(z) for the single-function h1 construction.
    #[arg(long)]
    f: Option<String>,
    /// Envelope offset constant (nonzero, default 1).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Imaginary integration constant of the h1 construction (default 0).
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    /// What to sample: x, eta, n, or sphere (default x).
    #[arg(long)]
    target: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    u_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_max: Option<f64>,
    /// Grid resolution in u (default 129).
    #[arg(long)]
    nu: Option<usize>,
    /// Grid resolution in v (default 129).
    #[arg(long)]
    nv: Option<usize>,
    /// Output OBJ path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RotationalArgs {
    /// Rotational family: h1 or h2.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    /// Envelope offset constant (nonzero, default 1).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_max: Option<f64>,
    /// Number of profile samples (default 401).
    #[arg(long)]
    samples: Option<usize>,
    /// Output CSV path for the profile.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a revolution mesh of the given target here.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Mesh target: x, eta, n, or sphere (default x).
    #[arg(long)]
    target: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family to verify: h1 or h2.
    #[arg(long)]
    class: Option<String>,
    /// Holomorphic g(z); omit for the rotational families.
    #[arg(long)]
    g: Option<String>,
    #[arg(long = "A")]
    a_expr: Option<String>,
    #[arg(long = "B")]
    b_expr: Option<String>,
    #[arg(long)]
    f: Option<String>,
    /// Rotational parameters (alternative to --g/--A/--B).
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_max: Option<f64>,
    /// Number of regular sample points (default 200).
    #[arg(long)]
    points: Option<usize>,
    /// Sampling seed (default 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the machine-readable key=value block instead of the table.
    #[arg(long)]
    kv: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Rotational family: h1 or h2.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    /// Envelope offset constant (nonzero, default 1).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Scan interval (default -6 6).
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["U_MIN", "U_MAX"])]
    u_range: Option<Vec<f64>>,
    /// Sample count for the sign-change sweep (default 20001).
    #[arg(long)]
    resolution: Option<usize>,
    /// What to scan: x, eta, or both (default both).
    #[arg(long)]
    target: Option<String>,
}

fn main() {
    // Die quietly on a closed pipe (`hsurf scan ... | head`) instead of
    // panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run(std::env::args_os().collect()));
}

fn run(argv: Vec<std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let conf = match Conf::load(cli.config.as_deref()) {
        Ok(conf) => conf,
        Err(err) => {
            eprintln!("error: {err:#}");
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Surface(args) => cmd_surface(args, &conf),
        Command::Rotational(args) => cmd_rotational(args, &conf),
        Command::Verify(args) => cmd_verify(args, &conf),
        Command::Scan(args) => cmd_scan(args, &conf),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

/// `key = value` defaults from --config; explicit flags always win.
#[derive(Default)]
struct Conf(HashMap<String, String>);

impl Conf {
    fn load(path: Option<&Path>) -> Result<Conf> {
        let Some(path) = path else {
            return Ok(Conf::default());
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config {}:{}: expected `key = value`", path.display(), i + 1);
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Conf(map))
    }

    /// Flag value if given, else the parsed config value under `key`.
    fn get<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("config key `{key}` = `{raw}`: {e}")),
        }
    }
}

fn parse_class(value: Option<String>) -> Result<SurfaceClass> {
    match value.as_deref() {
        Some("h1") => Ok(SurfaceClass::H1),
        Some("h2") => Ok(SurfaceClass::H2),
        Some(other) => bail!("unknown class `{other}` (expected h1 or h2)"),
        None => bail!("missing --class (h1 or h2)"),
    }
}

fn parse_target(value: Option<String>) -> Result<MeshTarget> {
    match value {
        None => Ok(MeshTarget::X),
        Some(raw) => raw.parse().map_err(|e: String| anyhow!("--target: {e}")),
    }
}

struct FieldSetup {
    field: Field,
    c: f64,
    echo: Vec<(String, String)>,
}

#[allow(clippy::too_many_arguments)]
fn build_field(
    conf: &Conf,
    class: Option<String>,
    g: Option<String>,
    a: Option<String>,
    b: Option<String>,
    f: Option<String>,
    c: Option<f64>,
    c1: Option<f64>,
) -> Result<FieldSetup> {
    let class = parse_class(conf.get("class", class)?)?;
    let mut data = HoloData::new(class);
    // expressions echoed here; class, c, seed, window come from the suite header
    let mut echo = Vec::new();
    let mut expr = |key: &str, flag: Option<String>| -> Result<Option<hsurf::HoloExpr>> {
        match conf.get::<String>(key, flag)? {
            None => Ok(None),
            Some(src) => {
                let parsed = parse_expr(&src).map_err(|e| anyhow!("--{key} \"{src}\": {e}"))?;
                echo.push((key.to_string(), src));
                Ok(Some(parsed))
            }
        }
    };
    data.g = expr("g", g)?;
    data.a = expr("A", a)?;
    data.b = expr("B", b)?;
    data.f = expr("f", f)?;
    if let Some(x) = conf.get("c", c)? {
        data.c = x;
    }
    if let Some(x) = conf.get("c1", c1)? {
        data.c1 = x;
    }
    if class == SurfaceClass::H1 && data.f.is_none() {
        echo.push(("c1".to_string(), format!("{}", data.c1)));
    }
    let field = data.build()?;
    Ok(FieldSetup { field, c: data.c, echo })
}

#[allow(clippy::too_many_arguments)]
fn resolve_grid(
    conf: &Conf,
    u_min: Option<f64>,
    u_max: Option<f64>,
    v_min: Option<f64>,
    v_max: Option<f64>,
    nu: Option<usize>,
    nv: Option<usize>,
    target: Option<String>,
) -> Result<GridSpec> {
    let mut grid = GridSpec::default();
    if let Some(x) = conf.get("u-min", u_min)? {
        grid.u_min = x;
    }
    if let Some(x) = conf.get("u-max", u_max)? {
        grid.u_max = x;
    }
    if let Some(x) = conf.get("v-min", v_min)? {
        grid.v_min = x;
    }
    if let Some(x) = conf.get("v-max", v_max)? {
        grid.v_max = x;
    }
    if let Some(x) = conf.get("nu", nu)? {
        grid.nu = x;
    }
    if let Some(x) = conf.get("nv", nv)? {
        grid.nv = x;
    }
    grid.target = parse_target(conf.get("target", target)?)?;
    Ok(grid)
}

fn rot_params(
    conf: &Conf,
    class: Option<String>,
    a1: Option<f64>,
    a2: Option<f64>,
    a3: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    c: Option<f64>,
) -> Result<RotParams> {
    let class = parse_class(conf.get("class", class)?)?;
    let c = conf.get("c", c)?.unwrap_or(1.0);
    if c == 0.0 || !c.is_finite() {
        bail!("c must be finite and nonzero");
    }
    match class {
        SurfaceClass::H1 => {
            let a1 = conf.get("a1", a1)?.ok_or_else(|| anyhow!("missing --a1"))?;
            let a2 = conf.get("a2", a2)?.ok_or_else(|| anyhow!("missing --a2"))?;
            if a1 == 0.0 && a2 == 0.0 {
                bail!("a1 and a2 must not both be zero");
            }
            Ok(RotParams::H1(RotH1Params { a1, a2, c }))
        }
        SurfaceClass::H2 => {
            let a2 = conf.get("a2", a2)?.ok_or_else(|| anyhow!("missing --a2"))?;
            let a3 = conf.get("a3", a3)?.ok_or_else(|| anyhow!("missing --a3"))?;
            let c1 = conf.get("c1", c1)?.unwrap_or(0.0);
            let c2 = conf.get("c2", c2)?.unwrap_or(0.0);
            Ok(RotParams::H2(RotH2Params { a2, a3, c1, c2, c }))
        }
    }
}

fn cmd_surface(args: SurfaceArgs, conf: &Conf) -> Result<i32> {
    let setup = build_field(
        conf,
        args.class,
        args.g,
        args.a_expr,
        args.b_expr,
        args.f,
        args.c,
        args.c1,
    )?;
    let grid = resolve_grid(
        conf, args.u_min, args.u_max, args.v_min, args.v_max, args.nu, args.nv, args.target,
    )?;
    let out: PathBuf = conf
        .get("out", args.out)?
        .ok_or_else(|| anyhow!("missing --out (OBJ path)"))?;
    let mesh = sample_surface(&setup.field, setup.c, &grid)?;
    let mut sink = std::io::BufWriter::new(
        fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?,
    );
    let bytes = export_obj(&mesh, &mut sink)?;
    sink.flush()?;
    let masked = mesh.singular.iter().filter(|&&s| s).count();
    println!(
        "wrote {} ({} bytes): target {}, {}x{} vertices, {} faces, {} masked",
        out.display(),
        bytes,
        grid.target,
        mesh.nu,
        mesh.nv,
        mesh.quads.len(),
        masked
    );
    Ok(0)
}

fn cmd_rotational(args: RotationalArgs, conf: &Conf) -> Result<i32> {
    let params = rot_params(conf, args.class, args.a1, args.a2, args.a3, args.c1, args.c2, args.c)?;
    let u_min = conf.get("u-min", args.u_min)?.unwrap_or(-2.0);
    let u_max = conf.get("u-max", args.u_max)?.unwrap_or(2.0);
    if !(u_min < u_max) {
        bail!("u range is empty or reversed");
    }
    let samples = conf.get("samples", args.samples)?.unwrap_or(401);
    let out: PathBuf = conf
        .get("out", args.out)?
        .ok_or_else(|| anyhow!("missing --out (CSV path)"))?;

    let profile = profile_range(&params, u_min, u_max, samples);
    let mut sink = std::io::BufWriter::new(
        fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?,
    );
    let bytes = export_profile_csv(&profile, &mut sink)?;
    sink.flush()?;
    let singular = profile.iter().filter(|s| s.singular_x).count();
    println!(
        "wrote {} ({} bytes): {} samples on [{}, {}], {} flagged singular for X",
        out.display(),
        bytes,
        profile.len(),
        u_min,
        u_max,
        singular
    );

    if let Some(mesh_path) = conf.get::<PathBuf>("mesh", args.mesh)? {
        let target = parse_target(conf.get("target", args.target)?)?;
        let grid = GridSpec { u_min, u_max, target, ..GridSpec::default() };
        let mesh = sample_surface(&params.field(), params.c(), &grid)?;
        let mut sink = std::io::BufWriter::new(
            fs::File::create(&mesh_path)
                .with_context(|| format!("creating {}", mesh_path.display()))?,
        );
        let bytes = export_obj(&mesh, &mut sink)?;
        sink.flush()?;
        println!(
            "wrote {} ({} bytes): target {}, {}x{} vertices, {} faces",
            mesh_path.display(),
            bytes,
            target,
            mesh.nu,
            mesh.nv,
            mesh.quads.len()
        );
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, conf: &Conf) -> Result<i32> {
    let radial = args.a1.is_some()
        || args.a2.is_some()
        || args.a3.is_some()
        || ["a1", "a2", "a3"].iter().any(|k| conf.0.contains_key(*k));
    let has_exprs = args.g.is_some() || conf.0.contains_key("g");
    let (field, c, mut echo) = if radial && !has_exprs {
        let params = rot_params(
            conf,
            args.class,
            args.a1,
            args.a2,
            args.a3,
            args.c1,
            args.c2,
            args.c,
        )?;
        let echo = vec![
            ("data".to_string(), "rotational".to_string()),
            ("params".to_string(), format!("{params:?}")),
        ];
        (params.field(), params.c(), echo)
    } else {
        let setup = build_field(
            conf,
            args.class,
            args.g,
            args.a_expr,
            args.b_expr,
            args.f,
            args.c,
            args.c1,
        )?;
        (setup.field, setup.c, setup.echo)
    };

    let mut rect = Rect::standard();
    if let Some(x) = conf.get("u-min", args.u_min)? {
        rect.u_min = x;
    }
    if let Some(x) = conf.get("u-max", args.u_max)? {
        rect.u_max = x;
    }
    if let Some(x) = conf.get("v-min", args.v_min)? {
        rect.v_min = x;
    }
    if let Some(x) = conf.get("v-max", args.v_max)? {
        rect.v_max = x;
    }
    let points = conf.get("points", args.points)?.unwrap_or(200);
    let seed = conf.get("seed", args.seed)?.unwrap_or(42);

    let mut set = full_suite(&field, c, &rect, points, seed)?;
    echo.reverse();
    for kv in echo {
        set.header.insert(0, kv);
    }
    let text = if args.kv { set.to_kv() } else { set.to_table() };
    print!("{text}");
    if let Some(path) = conf.get::<PathBuf>("report", args.report)? {
        fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if set.passed() { 0 } else { 2 })
}

fn cmd_scan(args: ScanArgs, conf: &Conf) -> Result<i32> {
    let params = rot_params(conf, args.class, args.a1, args.a2, args.a3, args.c1, args.c2, args.c)?;
    let (u_min, u_max) = match args.u_range {
        Some(r) => (r[0], r[1]),
        None => match conf.0.get("u-range") {
            Some(raw) => {
                let parts: Vec<f64> = raw
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|e| anyhow!("config key `u-range`: {e}")))
                    .collect::<Result<_>>()?;
                if parts.len() != 2 {
                    bail!("config key `u-range` needs two numbers");
                }
                (parts[0], parts[1])
            }
            None => (-6.0, 6.0),
        },
    };
    if !(u_min < u_max) {
        bail!("u range is empty or reversed");
    }
    let resolution = conf.get("resolution", args.resolution)?.unwrap_or(20001);
    let which = conf
        .get::<String>("target", args.target)?
        .unwrap_or_else(|| "both".to_string());
    let targets: Vec<(&str, ScanTarget)> = match which.as_str() {
        "x" => vec![("X", ScanTarget::Surface)],
        "eta" => vec![("eta", ScanTarget::Envelope)],
        "both" => vec![("X", ScanTarget::Surface), ("eta", ScanTarget::Envelope)],
        other => bail!("unknown scan target `{other}` (expected x, eta, or both)"),
    };

    for (label, target) in targets {
        let found = singularity_scan(&params, target, u_min, u_max, resolution);
        let isolated = found
            .iter()
            .filter(|s| s.kind == hsurf::rotational::SingularKind::Isolated)
            .count();
        println!(
            "singularities of {label} on [{u_min}, {u_max}] (resolution {resolution}): {} total, {} isolated, {} circles",
            found.len(),
            isolated,
            found.len() - isolated
        );
        for s in &found {
            println!(
                "  u = {:+.9}   kind = {:<8}   axis_distance = {:.3e}",
                s.u,
                s.kind.to_string(),
                s.axis_distance
            );
        }
    }
    Ok(0)
}
