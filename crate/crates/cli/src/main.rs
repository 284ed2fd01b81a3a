mod figure;
mod report;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use flipspine::arith::{
    continued_fraction, convergent_sum_identity_holds, euclid_subtractive, euclid_trace, gcd, mod_inverse,
    remainder_bounds_hold, rotation_congruences_hold,
};
use flipspine::bounds::{certify, extremal_profile, lemma9_oracle_min_with_cap, target, DEFAULT_ORACLE_CAP};
use flipspine::checks::{run_all, SuiteConfig};
use flipspine::construct::{optimal_triangulation, Method};
use flipspine::farey::{crossing_count, crossing_count_geodesic, crossing_count_tree_walk, farey_neighbors, ExtendedRational};
use flipspine::flipdist::{distance_bfs_with_cap, distance_bounded, min_rotation_distance_with_cap};
use flipspine::spinehull::{
    basepoint_invariance_seeded, convex_hull_4d, orbit_csv, orbit_points, spine_summary, spine_summary_generic,
    OrbitConfig,
};
use flipspine::triangulation::Triangulation;
use flipspine::Error;

use report::RunReport;

#[derive(Parser)]
#[command(name = "flipspine", version, about = "Rotation distance of polygon triangulations and lens-space spines")]
struct Cli {
    /// Print the structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subtractive Euclid complexity, continued fraction and identities.
    Euclid { p: u64, q: u64 },
    /// Farey tessellation edges crossed by the geodesic from 0 to a/b.
    Farey { a: i64, b: u64 },
    /// Rotation distance d(T, rot_q T).
    Distance {
        p: usize,
        q: usize,
        /// Minimise over every triangulation of the p-gon.
        #[arg(long, conflicts_with = "triangulation")]
        exhaustive: bool,
        /// Triangulation file (`p=<n>` then `a-b` lines).
        #[arg(long)]
        triangulation: Option<PathBuf>,
        /// Largest polygon searched by breadth-first search.
        #[arg(long, env = "FLIPSPINE_MAX_P", default_value_t = 12)]
        max_p: usize,
        /// Search bound for polygons above the cap.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Length profile bound and its certificate.
    Bound {
        p: usize,
        q: usize,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// Triangulation whose rotation by q costs E(p,q) - 3 flips.
    Construct {
        p: usize,
        q: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the triangulation in text format.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the eccentric circle points as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Convex hull of a cyclic orbit on the 3-sphere and its spine count.
    Spine {
        p: usize,
        q: usize,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        phi1: f64,
        #[arg(long, default_value_t = 0.2)]
        phi2: f64,
        /// Random base points compared for invariance.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the facets as CSV.
        #[arg(long)]
        facets: Option<PathBuf>,
        /// Write the orbit as CSV.
        #[arg(long)]
        orbit: Option<PathBuf>,
    },
    /// Draw a triangulation file as SVG.
    Render {
        #[arg(long)]
        triangulation: PathBuf,
        /// Vertex coordinates as `k,x,y` CSV; a regular polygon otherwise.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        voronoi: bool,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, env = "FLIPSPINE_MAX_P", default_value_t = 12)]
        max_p: usize,
    },
}

fn read_triangulation(path: &Path) -> Result<Triangulation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn read_points(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 || fields[0].parse::<usize>().is_err() {
            continue;
        }
        let x: f64 = fields[1].parse().with_context(|| format!("line {}", i + 1))?;
        let y: f64 = fields[2].parse().with_context(|| format!("line {}", i + 1))?;
        rows.push([x, y]);
    }
    Ok(rows)
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn euclid(p: u64, q: u64) -> Result<RunReport> {
    let mut r = RunReport::new("euclid", json!({ "p": p, "q": q }));
    let e = euclid_subtractive(p, q)?;
    r.output("E", e).output("gcd", gcd(p, q));
    if p == 0 || q == 0 {
        return Ok(r);
    }
    if gcd(p, q) != 1 {
        r.output("note", "not coprime: the subtraction run ends at (gcd, 0)");
        return Ok(r);
    }
    let (big, small) = (p.max(q), p.min(q));
    r.output("continued_fraction", continued_fraction(p, q)?.coefficients());
    let trace = euclid_trace(p, q)?;
    r.output("convergent_numerators", &trace.numerators)
        .output("convergent_denominators", &trace.denominators)
        .output("remainders", &trace.remainders);
    if big > 1 && big == p {
        let inv = mod_inverse(q % p, p)?;
        r.output("monodromy_r", inv);
        if small < big {
            r.check("E(p,q) = E(p,p-q)", e == euclid_subtractive(p, p - q % p)?);
        }
        r.check("E(p,q) = E(p,r)", e == euclid_subtractive(p, inv)?);
    }
    r.check("p_i q = (-1)^i r_(i+1) mod p", rotation_congruences_hold(&trace))
        .check("sum p_(i-1) n_i = p_j + p_(j-1) - 1", convergent_sum_identity_holds(&trace))
        .check("p = p_i r_i + p_(i-1) r_(i+1)", remainder_bounds_hold(&trace));
    Ok(r)
}

fn farey(a: i64, b: u64) -> Result<RunReport> {
    let mut r = RunReport::new("farey", json!({ "a": a, "b": b }));
    let x = ExtendedRational::new(a, b as i64).context("a/b must have a nonzero denominator")?;
    let tree = crossing_count_tree_walk(x);
    r.output("fraction", x.to_string()).output("crossings_tree_walk", tree);
    if let Some(g) = crossing_count_geodesic(x) {
        r.output("crossings_geodesic", g);
        r.check("tree walk and geodesic agree", g == tree);
    }
    let e = euclid_subtractive(a.unsigned_abs(), b)?;
    r.output("E", e);
    r.check("crossings = E", crossing_count(a, b)? == e);
    if gcd(a.unsigned_abs(), b) == 1 {
        let (m, d) = farey_neighbors(ExtendedRational::ZERO, x).map_or((None, None), |(m, d)| (Some(m), Some(d)));
        if let (Some(m), Some(d)) = (m, d) {
            r.output("neighbors_of_edge_0_x", [m.to_string(), d.to_string()]);
        }
    }
    Ok(r)
}

fn distance(
    p: usize,
    q: usize,
    exhaustive: bool,
    file: Option<PathBuf>,
    max_p: usize,
    budget: Option<usize>,
) -> Result<RunReport> {
    let mut r = RunReport::new(
        "distance",
        json!({ "p": p, "q": q, "exhaustive": exhaustive, "triangulation": file, "max_p": max_p, "budget": budget }),
    );
    let expected = target(p, q).max(0) as usize;
    if let Some(path) = file {
        let t = read_triangulation(&path)?;
        if t.p() != p {
            bail!("file describes a {}-gon, not a {p}-gon", t.p());
        }
        let rotated = t.rotate(q as i64);
        let (d, witness) = if p <= max_p {
            distance_bfs_with_cap(&t, &rotated, max_p)?
        } else if let Some(b) = budget {
            distance_bounded(&t, &rotated, b)?.with_context(|| format!("distance exceeds the budget {b}"))?
        } else {
            bail!("p = {p} is above the search cap {max_p}; raise --max-p (or FLIPSPINE_MAX_P) or pass --budget");
        };
        r.output("distance", d)
            .output("witness", witness.flips.iter().map(ToString::to_string).collect::<Vec<_>>())
            .output("lower_bound", expected);
        r.check("witness ends at the rotated triangulation", witness.end()? == rotated)
            .check("distance >= max(0, E - 3)", d >= expected);
    } else if exhaustive {
        let (d, t) = min_rotation_distance_with_cap(p, q, max_p).map_err(|e| match e {
            Error::AboveCap { .. } => anyhow::anyhow!("{e}; raise --max-p or FLIPSPINE_MAX_P (memory grows as Catalan(p-2))"),
            other => other.into(),
        })?;
        r.output("min_distance", d).output("expected", expected).output("minimizer", t.to_text());
        r.check("min distance = max(0, E - 3)", d == expected);
    } else {
        bail!("pass --exhaustive or --triangulation FILE");
    }
    Ok(r)
}

fn bound(p: usize, q: usize, file: Option<PathBuf>) -> Result<RunReport> {
    let mut r = RunReport::new("bound", json!({ "p": p, "q": q, "triangulation": file }));
    let qn = if 2 * q > p { p - q } else { q };
    let trace = euclid_trace(p as u64, qn as u64)?;
    r.output("target", target(p, q)).output("coefficients", &trace.coefficients);
    if trace.k() >= 2 && trace.n(1) >= 2 {
        r.output("extremal_profile", extremal_profile(&trace)?.counts);
    }
    if trace.complexity() <= DEFAULT_ORACLE_CAP && p >= 3 {
        let oracle = lemma9_oracle_min_with_cap(&trace, DEFAULT_ORACLE_CAP)?;
        r.output("oracle_minimum", oracle.minimum).output("oracle_minimizers", oracle.minimizers.to_string());
        r.check("oracle minimum = E - 3", oracle.minimum as i64 == target(p, q));
    }
    if let Some(path) = file {
        let t = read_triangulation(&path)?;
        let cert = certify(&t, q)?;
        r.check("certificate sound", cert.is_sound());
        r.output("tight", cert.is_tight()).output("certificate", cert);
    }
    Ok(r)
}

fn construct(p: usize, q: usize, svg: Option<PathBuf>, output: Option<PathBuf>, points: Option<PathBuf>) -> Result<RunReport> {
    let mut r = RunReport::new("construct", json!({ "p": p, "q": q, "svg": svg }));
    let c = optimal_triangulation(p, q)?;
    let rotated = c.triangulation.rotate(q as i64);
    let expected = target(p, q).max(0) as usize;
    r.output("method", &c.method)
        .output("triangulation", c.triangulation.to_text())
        .output("witness", c.witness.flips.iter().map(ToString::to_string).collect::<Vec<_>>())
        .output("witness_length", c.witness.len());
    r.check("witness ends at the rotated triangulation", c.witness.end()? == rotated)
        .check("witness length = max(0, E - 3)", c.witness.len() == expected);
    if let Some(cert) = &c.certificate {
        r.output("destroyed_count", cert.destroyed_count).output("length_profile", &cert.profile.counts);
        r.check("certificate sound", cert.is_sound()).check("certificate tight", cert.is_tight());
        r.output("certificate", cert);
    }
    if let Some(path) = &output {
        write(path, c.triangulation.to_text())?;
    }
    if let (Some(path), Some(pts)) = (&points, &c.points) {
        write(path, pts.to_csv())?;
    }
    if let Some(path) = &svg {
        let coords = match (&c.points, &c.method) {
            (Some(pts), Method::Delaunay { .. }) => pts.points.clone(),
            _ => figure::regular_polygon(p),
        };
        write(path, figure::render(&coords, &c.triangulation, true).to_string())?;
        r.output("svg", path.display().to_string());
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn spine(
    p: usize,
    q: usize,
    theta: Option<f64>,
    phi1: f64,
    phi2: f64,
    trials: usize,
    seed: u64,
    facets: Option<PathBuf>,
    orbit: Option<PathBuf>,
) -> Result<RunReport> {
    let mut r = RunReport::new(
        "spine",
        json!({ "p": p, "q": q, "theta": theta, "phi1": phi1, "phi2": phi2, "trials": trials, "seed": seed }),
    );
    if p >= 3 && gcd(p as u64, q as u64) == 1 && (q % p == 1 || q % p == p - 1) {
        r.output("degenerate", true).output(
            "message",
            "q = ±1 mod p: every orbit is a flat regular p-gon, so the cut locus cannot be a simple spine",
        );
        return Ok(r);
    }
    let summary = match theta {
        Some(t) => spine_summary(&OrbitConfig::new(p, q).with_angles(t, phi1, phi2))?,
        None => spine_summary_generic(p, q)?,
    };
    let config = OrbitConfig::new(p, q).with_angles(summary.theta, phi1, phi2);
    let points = orbit_points(&config)?;
    if let Some(path) = &orbit {
        write(path, orbit_csv(&points))?;
    }
    if let Some(path) = &facets {
        write(path, convex_hull_4d(&points)?.to_csv())?;
    }
    r.output("facet_count", summary.facet_count)
        .output("all_facets_simplicial", summary.all_facets_simplicial)
        .output("spine_vertex_count", summary.spine_vertex_count)
        .output("expected_vertex_count", summary.expected_vertex_count)
        .output("monodromy_r", summary.monodromy_r)
        .output("theta", summary.theta);
    r.check("Euler characteristic V - E + F - C = 0", summary.euler_characteristic == 0)
        .check("monodromy r q = 1 mod p", (summary.monodromy_r * q) % p == 1);
    match summary.count_matches() {
        Some(ok) => {
            r.check("spine vertices = E - 3", ok);
        }
        None => {
            r.output("note", "facets not simplicial or action not free; count law not asserted");
        }
    }
    if trials >= 2 {
        let inv = basepoint_invariance_seeded(p, q, trials, seed)?;
        r.check(format!("combinatorics independent of base point ({trials} samples)"), inv.invariant());
        r.output("invariance", inv);
    }
    Ok(r)
}

fn render(file: PathBuf, points: Option<PathBuf>, voronoi: bool, svg: PathBuf) -> Result<RunReport> {
    let mut r = RunReport::new("render", json!({ "triangulation": file, "points": points, "voronoi": voronoi }));
    let t = read_triangulation(&file)?;
    let coords = match &points {
        Some(path) => read_points(path)?,
        None => figure::regular_polygon(t.p()),
    };
    if coords.len() != t.p() {
        bail!("{} points for a {}-gon", coords.len(), t.p());
    }
    write(&svg, figure::render(&coords, &t, voronoi).to_string())?;
    r.output("svg", svg.display().to_string()).output("diagonals", t.diagonals().len());
    Ok(r)
}

fn selftest(max_p: usize) -> Result<RunReport> {
    let mut r = RunReport::new("selftest", json!({ "max_p": max_p }));
    let cfg = SuiteConfig::with_max_p(max_p);
    let results = run_all(&cfg);
    for c in &results {
        r.check(format!("criterion {}: {} ({})", c.id, c.name, c.detail), c.passed);
    }
    r.output("config", cfg).output("results", results);
    Ok(r)
}

fn run(cli: Cli) -> Result<RunReport> {
    match cli.command {
        Command::Euclid { p, q } => euclid(p, q),
        Command::Farey { a, b } => farey(a, b),
        Command::Distance { p, q, exhaustive, triangulation, max_p, budget } => {
            distance(p, q, exhaustive, triangulation, max_p, budget)
        }
        Command::Bound { p, q, triangulation } => bound(p, q, triangulation),
        Command::Construct { p, q, svg, output, points } => construct(p, q, svg, output, points),
        Command::Spine { p, q, theta, phi1, phi2, trials, seed, facets, orbit } => {
            spine(p, q, theta, phi1, phi2, trials, seed, facets, orbit)
        }
        Command::Render { triangulation, points, voronoi, svg } => render(triangulation, points, voronoi, svg),
        Command::Selftest { max_p } => selftest(max_p),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let start = Instant::now();
    match run(cli) {
        Ok(mut report) => {
            report.timing_seconds = start.elapsed().as_secs_f64();
            let text = if json {
                serde_json::to_string_pretty(&report).expect("serialisable report") + "\n"
            } else {
                report.to_text()
            };
            // A closed pipe (for example `| head`) is not an error.
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
