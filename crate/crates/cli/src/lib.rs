//! The `qhom` command line.

pub mod cache;
pub mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qhom_core::cocycle::MochizukiCocycle;
use qhom_core::ops::induced_map;
use qhom_core::verify::{Suite, Verdict, VerificationReport, Verifier};
use qhom_core::{Chain, ChainMapSpec, GroupSummary, Int, MapName, Theory};
use serde::Serialize;

use cache::DiskCache;
use output::{render_reports, render_rows, Format, Row};

#[derive(Parser, Debug)]
#[command(name = "qhom", version, about = "Rack, degenerate and quandle homology of finite racks")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Results cache directory [default: ./.qhom-cache].
    #[arg(long, global = true, env = cache::ENV)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integral or mod-m homology groups.
    Homology(HomologyArgs),
    /// Cohomology from homology by universal coefficients.
    Cohomology(CohomologyArgs),
    /// Apply a named chain map to a chain, or check the chain-map identity.
    Operation(OperationArgs),
    /// The map a chain map induces on homology.
    Induced(InducedArgs),
    /// The 3-cocycle θ over Z_p.
    #[command(subcommand)]
    Cocycle(CocycleCommand),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Inspect or clear the results cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

/// Degrees given as `N` or `A..B` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees(pub Vec<usize>);

impl std::str::FromStr for Degrees {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree `{t}`"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if a > b {
            return Err(format!("empty degree range `{s}`"));
        }
        Ok(Degrees((a..=b).collect()))
    }
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    /// `dihedral:k`, `trivial:k`, `alexander:m:t` or `file:PATH`.
    pub rack: String,
    /// `rack` (R), `degenerate` (D) or `quandle` (Q).
    #[arg(long, default_value = "rack")]
    pub theory: Theory,
    /// Degree `N` or inclusive range `A..B`.
    #[arg(long)]
    pub n: Degrees,
    /// Coefficients in Z_m (0 for the integers).
    #[arg(long, default_value_t = 0)]
    pub modulus: u64,
    /// Also print generator cycles (text format only).
    #[arg(long)]
    pub generators: bool,
    /// Print the boundary matrix out of each degree in dump format instead.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// Rack spec, as for `homology`.
    pub rack: String,
    /// `rack` (R), `degenerate` (D) or `quandle` (Q).
    #[arg(long, default_value = "rack")]
    pub theory: Theory,
    /// Degree `N` or inclusive range `A..B`.
    #[arg(long)]
    pub n: Degrees,
    /// Prime coefficients; integral cohomology when absent.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Args, Debug)]
pub struct OperationArgs {
    /// Rack spec, as for `homology`.
    pub rack: String,
    /// Map name, e.g. `hprime:0` or `compose(psi,pi)`.
    #[arg(long)]
    pub map: String,
    /// `rack` (R), `degenerate` (D) or `quandle` (Q).
    #[arg(long, default_value = "rack")]
    pub theory: Theory,
    /// Chain literal such as `+1*(0,1,2) -1*(0,0,2)`.
    #[arg(long, conflicts_with = "check", required_unless_present = "check")]
    pub chain: Option<String>,
    /// Check `∂F = ±F∂` on every basis tuple in degrees 1 through N.
    #[arg(long)]
    pub check: Option<usize>,
}

#[derive(Args, Debug)]
pub struct InducedArgs {
    /// Rack spec, as for `homology`.
    pub rack: String,
    /// Map name, as for `operation`.
    #[arg(long)]
    pub map: String,
    /// `rack` (R), `degenerate` (D) or `quandle` (Q).
    #[arg(long, default_value = "rack")]
    pub theory: Theory,
    /// Source degree.
    #[arg(long)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum CocycleCommand {
    /// Evaluate θ on a triple or a degree-3 chain.
    Theta {
        /// Odd prime.
        #[arg(long)]
        p: u64,
        /// A triple `(x,y,z)` or a chain literal.
        #[arg(long)]
        eval: String,
    },
    /// Check δθ = 0 on every generator of C_4^Q(R_p).
    Check {
        /// Odd prime.
        #[arg(long)]
        p: u64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A suite (thm12, thm13, frs, sec2, sec4, sec5, sec6, app1, app2, all),
    /// `fibonacci` or `appendix2`.
    pub target: String,
    /// Rack size for `fibonacci` and `appendix2`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Highest degree for `fibonacci`.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Element of the rack for `appendix2`.
    #[arg(long)]
    pub a: Option<usize>,
    /// Degree for `appendix2`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Checks run at once (defaults to the number of cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CacheCommand {
    /// List stored results.
    List,
    /// Remove stored results.
    Clear,
    /// Print the cache directory.
    Path,
}

/// What a command printed and how the process should exit.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let cache = Arc::new(DiskCache::new(DiskCache::locate(cli.cache_dir.as_deref())));
    let verifier = Verifier::new().with_cache(cache.clone());
    let format = cli.format;
    match cli.command {
        Command::Homology(a) => homology(&verifier, a, format),
        Command::Cohomology(a) => cohomology(&verifier, a, format),
        Command::Operation(a) => operation(&verifier, a, format),
        Command::Induced(a) => induced(&verifier, a, format),
        Command::Cocycle(c) => cocycle(c, format),
        Command::Verify(a) => verify(verifier, a, format),
        Command::Cache(c) => cache_command(&cache, c, format),
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn homology(v: &Verifier, a: HomologyArgs, format: Format) -> Result<Outcome> {
    let rack = v.rack(&a.rack)?;
    if a.dump {
        let engine = v.engine(&rack, a.theory)?;
        let mut s = String::new();
        for &n in &a.n.0 {
            s.push_str(&engine.boundary_matrix(n).to_string());
        }
        return Ok(Outcome::ok(s));
    }
    let mut rows = Vec::new();
    for &n in &a.n.0 {
        let start = Instant::now();
        let g = v.homology(&rack, a.theory, n, a.modulus)?;
        rows.push(Row::new(rack.name(), a.theory.name(), n, &g, elapsed_ms(start)));
    }
    let mut s = render_rows(&rows, format, "H")?;
    if a.generators && format == Format::Text && a.modulus == 0 {
        let engine = v.engine(&rack, a.theory)?;
        for &n in &a.n.0 {
            for g in engine.generator_chains(n) {
                let _ = writeln!(s, "  generator H_{n}: {g}");
            }
        }
    }
    Ok(Outcome::ok(s))
}

fn cohomology(v: &Verifier, a: CohomologyArgs, format: Format) -> Result<Outcome> {
    let rack = v.rack(&a.rack)?;
    let mut rows = Vec::new();
    for &n in &a.n.0 {
        let start = Instant::now();
        let h = v.group(&rack, a.theory, n)?;
        let below = if n == 0 { GroupSummary::trivial() } else { v.group(&rack, a.theory, n - 1)? };
        let g = match a.p {
            Some(p) => {
                if !qhom_core::abelian::is_prime(p) {
                    bail!("--p {p} is not prime");
                }
                let dim = h.free_rank + h.p_rank(p) + below.p_rank(p);
                GroupSummary::from_cyclic(0, &vec![Int::from(p); dim])
            }
            // Hom(H_n, Z) + Ext(H_{n-1}, Z)
            None => GroupSummary::from_cyclic(h.free_rank, &below.torsion),
        };
        rows.push(Row::new(rack.name(), a.theory.name(), n, &g, elapsed_ms(start)));
    }
    Ok(Outcome::ok(render_rows(&rows, format, "H^")?.replace("H^_", "H^")))
}

#[derive(Serialize)]
struct ImageRecord {
    map: String,
    rack: String,
    theory: String,
    input: String,
    image: String,
}

#[derive(Serialize)]
struct IdentityRecord {
    map: String,
    rack: String,
    theory: String,
    n: usize,
    chain_map: bool,
    sign: i64,
    detail: String,
}

fn map_spec(v: &Verifier, rack: &str, map: &str, theory: Theory) -> Result<ChainMapSpec> {
    let name: MapName = map.parse().with_context(|| format!("map `{map}`"))?;
    Ok(ChainMapSpec::named(&name, &v.rack(rack)?, theory)?)
}

fn operation(v: &Verifier, a: OperationArgs, format: Format) -> Result<Outcome> {
    let f = map_spec(v, &a.rack, &a.map, a.theory)?;
    let rack = v.rack(&a.rack)?;
    if let Some(text) = &a.chain {
        let c = Chain::parse(text, rack.size(), f.source_theory(), None)?;
        let image = f.apply(&c)?;
        let rec = ImageRecord {
            map: a.map.clone(),
            rack: rack.name().to_string(),
            theory: a.theory.name().to_string(),
            input: c.to_string(),
            image: image.to_string(),
        };
        let s = match format {
            Format::Text => format!("{image}\n"),
            Format::Json => serde_json::to_string_pretty(&[rec])? + "\n",
            Format::Csv => csv_records(&[rec])?,
        };
        return Ok(Outcome::ok(s));
    }
    let top = a.check.unwrap_or(1);
    let mut recs = Vec::new();
    for n in 1..=top {
        let (chain_map, sign, detail) = match f.verify(n) {
            Ok(s) => (true, s, String::new()),
            Err(e) => (false, 0, e.to_string()),
        };
        recs.push(IdentityRecord {
            map: a.map.clone(),
            rack: rack.name().to_string(),
            theory: a.theory.name().to_string(),
            n,
            chain_map,
            sign,
            detail,
        });
    }
    let failed = recs.iter().any(|r| !r.chain_map);
    let s = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &recs {
                if r.chain_map {
                    let e = if r.sign >= 0 { "" } else { "-" };
                    let _ = writeln!(s, "n={}: chain map (∂F = {e}F∂)", r.n);
                } else {
                    let _ = writeln!(s, "n={}: not a chain map: {}", r.n, r.detail);
                }
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&recs)? + "\n",
        Format::Csv => csv_records(&recs)?,
    };
    Ok(Outcome { stdout: s, code: i32::from(failed) })
}

#[derive(Serialize)]
struct InducedRecord {
    map: String,
    rack: String,
    theory: String,
    n: usize,
    source: Vec<Int>,
    target: Vec<Int>,
    matrix: Vec<Vec<Int>>,
    kernel: String,
    cokernel: String,
    injective: bool,
    surjective: bool,
}

fn induced(v: &Verifier, a: InducedArgs, format: Format) -> Result<Outcome> {
    let f = map_spec(v, &a.rack, &a.map, a.theory)?;
    let source = v.engine(f.source(), f.source_theory())?;
    let target = v.engine(f.target(), f.target_theory())?;
    let h = induced_map(&f, a.n, &source, &target)?;
    let m = &h.matrix;
    let matrix: Vec<Vec<Int>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect();
    let rec = InducedRecord {
        map: a.map.clone(),
        rack: f.source().name().to_string(),
        theory: a.theory.name().to_string(),
        n: a.n,
        source: h.source.clone(),
        target: h.target.clone(),
        matrix,
        kernel: h.kernel().to_string(),
        cokernel: h.cokernel().to_string(),
        injective: h.is_injective(),
        surjective: h.is_surjective(),
    };
    let s = match format {
        Format::Text => {
            let target_degree = f.target_degree(a.n).unwrap_or(a.n);
            let mut s = format!(
                "{}: H_{} = {} -> H_{} = {}\n",
                a.map,
                a.n,
                GroupSummary::from_cyclic(0, &h.source),
                target_degree,
                GroupSummary::from_cyclic(0, &h.target)
            );
            for row in &rec.matrix {
                let cells: Vec<String> = row.iter().map(Int::to_string).collect();
                let _ = writeln!(s, "  [{}]", cells.join(" "));
            }
            let _ = writeln!(s, "kernel {}, cokernel {}", rec.kernel, rec.cokernel);
            s
        }
        Format::Json => serde_json::to_string_pretty(&[&rec])? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["map", "rack", "theory", "n", "source", "target", "kernel", "cokernel", "injective", "surjective"])?;
            let join = |v: &[Int]| v.iter().map(Int::to_string).collect::<Vec<_>>().join(" ");
            w.write_record([
                rec.map.clone(),
                rec.rack.clone(),
                rec.theory.clone(),
                rec.n.to_string(),
                join(&rec.source),
                join(&rec.target),
                rec.kernel.clone(),
                rec.cokernel.clone(),
                rec.injective.to_string(),
                rec.surjective.to_string(),
            ])?;
            String::from_utf8(w.into_inner()?)?
        }
    };
    Ok(Outcome::ok(s))
}

fn csv_records<T: Serialize>(recs: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in recs {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct ThetaRecord {
    p: u64,
    chain: String,
    value: u64,
}

#[derive(Serialize)]
struct CocycleCheckRecord {
    p: u64,
    generators: usize,
    cocycle: bool,
    vanishes_on_degenerate: bool,
    witness: String,
}

fn cocycle(c: CocycleCommand, format: Format) -> Result<Outcome> {
    match c {
        CocycleCommand::Theta { p, eval } => {
            let theta = MochizukiCocycle::new(p)?;
            let text = eval.trim();
            // a bare tuple is shorthand for the chain `+1*tuple`
            let literal = if text.starts_with('(') { format!("+1*{text}") } else { text.to_string() };
            let chain = Chain::parse(&literal, p as usize, Theory::Rack, Some(3))?;
            let value = theta.evaluate(&chain)?;
            let rec = ThetaRecord { p, chain: chain.to_string(), value };
            let s = match format {
                Format::Text => format!("{value}\n"),
                Format::Json => serde_json::to_string_pretty(&[rec])? + "\n",
                Format::Csv => csv_records(&[rec])?,
            };
            Ok(Outcome::ok(s))
        }
        CocycleCommand::Check { p } => {
            let theta = MochizukiCocycle::new(p)?;
            let witness = theta.coboundary_witness();
            let rec = CocycleCheckRecord {
                p,
                generators: qhom_core::complex::basis_size(p as usize, 4, Theory::Quandle),
                cocycle: witness.is_none(),
                vanishes_on_degenerate: theta.vanishes_on_degenerate(),
                witness: witness.map(|w| format!("{w:?}")).unwrap_or_default(),
            };
            let ok = rec.cocycle && rec.vanishes_on_degenerate;
            let s = match format {
                Format::Text if rec.cocycle => format!(
                    "δθ = 0 on all {} generators of C_4^Q(R_{p}); θ vanishes on degenerate triples: {}\n",
                    rec.generators, rec.vanishes_on_degenerate
                ),
                Format::Text => format!("δθ ≠ 0: θ(∂w) ≠ 0 for w = {}\n", rec.witness),
                Format::Json => serde_json::to_string_pretty(&[rec])? + "\n",
                Format::Csv => csv_records(&[rec])?,
            };
            Ok(Outcome { stdout: s, code: i32::from(!ok) })
        }
    }
}

fn verify(v: Verifier, a: VerifyArgs, format: Format) -> Result<Outcome> {
    let v = match a.threads {
        Some(t) => v.with_threads(t),
        None => v,
    };
    let need = |x: Option<usize>, flag: &str| x.with_context(|| format!("`verify {}` needs --{flag}", a.target));
    let reports: Vec<VerificationReport> = match a.target.as_str() {
        "fibonacci" => v.fibonacci(need(a.k, "k")?, need(a.n_max, "n-max")?)?,
        "appendix2" => vec![v.appendix2(need(a.k, "k")?, a.a.unwrap_or(0), need(a.n, "n")?)?],
        suite => v.run_suite(suite.parse::<Suite>()?),
    };
    let code = i32::from(reports.iter().any(|r| r.verdict == Verdict::Mismatch));
    Ok(Outcome { stdout: render_reports(&reports, format)?, code })
}

#[derive(Serialize)]
struct CacheRecord {
    digest: String,
    theory: String,
    n: usize,
    modulus: u64,
    group: String,
    generators: usize,
}

fn cache_command(cache: &DiskCache, c: CacheCommand, format: Format) -> Result<Outcome> {
    match c {
        CacheCommand::Path => Ok(Outcome::ok(format!("{}\n", cache.dir().display()))),
        CacheCommand::Clear => {
            let n = cache.clear()?;
            Ok(Outcome::ok(format!("removed {n} entries from {}\n", cache.dir().display())))
        }
        CacheCommand::List => {
            let recs: Vec<CacheRecord> = cache
                .entries()?
                .into_iter()
                .map(|e| CacheRecord {
                    digest: e.key.digest,
                    theory: e.key.theory.name().to_string(),
                    n: e.key.n,
                    modulus: e.key.modulus,
                    group: e.group.to_string(),
                    generators: e.generators.len(),
                })
                .collect();
            let s = match format {
                Format::Text => {
                    let mut s = String::new();
                    for r in &recs {
                        let _ = writeln!(s, "{} {} n={} m={}: {}", &r.digest[..r.digest.len().min(12)], r.theory, r.n, r.modulus, r.group);
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&recs)? + "\n",
                Format::Csv => csv_records(&recs)?,
            };
            Ok(Outcome::ok(s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!("3".parse::<Degrees>().unwrap().0, vec![3]);
        assert_eq!("1..4".parse::<Degrees>().unwrap().0, vec![1, 2, 3, 4]);
        assert_eq!("2..=3".parse::<Degrees>().unwrap().0, vec![2, 3]);
        assert!("4..1".parse::<Degrees>().is_err());
        assert!("x".parse::<Degrees>().is_err());
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["qhom", "--format", "json", "homology", "dihedral:3", "--theory", "rack", "--n", "3"]).unwrap();
        assert_eq!(cli.format, Format::Json);
        assert!(matches!(cli.command, Command::Homology(HomologyArgs { n: Degrees(ref d), .. }) if d == &[3]));
    }
}
