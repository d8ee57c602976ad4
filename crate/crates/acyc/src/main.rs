use std::path::PathBuf;
use std::process::ExitCode;

use acyc::cache::Cache;
use acyc::newform::NewformFile;
use acyc::pipeline::{self, Eigen, RunConfig};
use acyc::report::{Report, Table};
use acyc::sampling::congruence_batch;
use acyc::CliError;
use acyc_core::classfield::{ClassEval, RayClassGroup, RingClassGroup};
use acyc_core::heckechar::characters_mod;
use acyc_core::quadfield::{class_group, QuadField, QuadIdeal, QuadInt};
use acyc_core::quatgross::{inversion_symmetry, theta_element};
use acyc_core::thetamods::theta_series;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "acyc", version, about = "Anticyclotomic theta elements, Brandt matrices and central L-values")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cache directory; overrides ACYC_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Also write `<command>.txt` and CSV tables here.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class, ray class and ring class groups.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = 1)]
        modulus: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// q-expansion of the theta series of a Hecke character.
    Theta {
        /// Character file: `d_k`, `modulus`, `infinity a b`, `index i` lines.
        #[arg(long = "char")]
        character: PathBuf,
        #[arg(long, default_value_t = 100)]
        prec: usize,
        /// Output file (default: theta-<index>.txt in the output directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized batch of norm-relation congruences.
    NormCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ideal classes, mass and Brandt matrices of an Eichler order.
    Brandt {
        #[arg(long)]
        n_minus: u64,
        #[arg(long, default_value_t = 1)]
        n_plus: u64,
        #[arg(long, default_value_t = 13)]
        q_max: u64,
        /// Match the eigenvector against this newform.
        #[arg(long)]
        newform: Option<PathBuf>,
    },
    /// Coefficients of the theta element at one level.
    ThetaElem(Run),
    /// Central values L(f/K, χ, 1) over Pic(O_m), or the ratio table with --ratios.
    Lvalue {
        #[command(flatten)]
        run: Run,
        /// Ring class conductor m (ignored with --ratios).
        #[arg(long, default_value_t = 1)]
        conductor: u64,
        /// Compare with |χ(Θ_n)|² over characters of conductor c·p^n.
        #[arg(long)]
        ratios: bool,
    },
    /// Check every hypothesis and evaluate Θ_n at (χ_t, χ^-).
    BkCriterion(Run),
}

#[derive(Args, Clone)]
struct Run {
    #[arg(long)]
    newform: PathBuf,
    #[arg(long, default_value_t = 7)]
    d_k: u64,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// χ_t exponents on Pic(O_c), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tame: Vec<i64>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    wild: i64,
    #[arg(long, default_value_t = 1)]
    j: i64,
    #[arg(long, default_value_t = 13)]
    q_max: u64,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Use the Eisenstein vector instead of the newform's eigenvector.
    #[arg(long)]
    eisenstein: bool,
    /// Continue past failed non-structural hypotheses.
    #[arg(long)]
    force: bool,
}

impl Run {
    fn config(&self, cache: Cache) -> RunConfig {
        RunConfig {
            newform: self.newform.clone(),
            d_k: self.d_k,
            p: self.p,
            c: self.c,
            tame: self.tame.clone(),
            wild: self.wild,
            level: self.level,
            j: self.j,
            q_max: self.q_max,
            l_tolerance: self.tolerance,
            eigen: if self.eisenstein { Eigen::Eisenstein } else { Eigen::Newform },
            force: self.force,
            cache,
        }
    }
}

fn classgroup(disc: i64, modulus: u64, p: Option<u64>) -> Result<Report, CliError> {
    if disc >= 0 {
        return Err(CliError::Input(format!("discriminant {disc} is not negative")));
    }
    let d_k = disc.unsigned_abs();
    let field = QuadField::new(d_k)?;
    let mut r = Report::new("classgroup");
    r.fact("discriminant", disc);
    r.fact("h_K", class_group(field.maximal_order())?.class_number());
    let ray = RayClassGroup::of_integer(field, modulus, None)?;
    r.fact("ray class group mod m", format!("{:?}", ray.full_group().invariants()));
    let ring = RingClassGroup::new(field, modulus, None)?;
    r.fact("Pic(O_m)", format!("{:?}", ring.full_group().invariants()));
    if let Some(p) = p {
        let ray_p = RayClassGroup::of_integer(field, modulus, Some(p))?;
        let ring_p = RingClassGroup::new(field, modulus, Some(p))?;
        r.fact("ray class group p-quotient", format!("{:?}", ray_p.group().invariants()));
        r.fact("Pic(O_m) p-quotient", format!("{:?}", ring_p.group().invariants()));
    }
    r.fact("m", modulus);
    Ok(r)
}

struct CharFile {
    d_k: u64,
    modulus: u64,
    infinity: (i64, i64),
    index: usize,
}

fn read_char_file(path: &PathBuf) -> Result<CharFile, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut f = CharFile { d_k: 0, modulus: 1, infinity: (0, 0), index: 0 };
    let bad = |l: &str| CliError::Input(format!("{}: cannot read `{l}`", path.display()));
    for line in text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| parts.get(i).and_then(|s| s.parse::<i64>().ok()).ok_or_else(|| bad(line));
        match parts[0] {
            "d_k" => f.d_k = num(1)? as u64,
            "modulus" => f.modulus = num(1)? as u64,
            "infinity" => f.infinity = (num(1)?, num(2)?),
            "index" => f.index = num(1)? as usize,
            _ => return Err(bad(line)),
        }
    }
    Ok(f)
}

fn theta(path: &PathBuf, prec: usize, out: Option<PathBuf>, out_dir: Option<&PathBuf>) -> Result<Report, CliError> {
    let cf = read_char_file(path)?;
    let field = QuadField::new(cf.d_k)?;
    let modulus = QuadIdeal::principal(field.maximal_order(), QuadInt::int(cf.modulus as i64));
    let chars = characters_mod(field, cf.infinity, &modulus)?;
    let psi = chars
        .get(cf.index)
        .ok_or_else(|| CliError::Input(format!("only {} characters modulo {}", chars.len(), cf.modulus)))?;
    let q = theta_series(psi, prec)?;
    let mut body = format!("weight {}\nlevel {}\n", q.weight, q.level);
    if let Some(neb) = &q.nebentypus {
        body.push_str(&format!("nebentypus-conductor {}\n", neb.conductor()));
    }
    for (n, c) in q.coeffs().iter().enumerate().skip(1) {
        body.push_str(&format!("{n} {c}\n"));
    }
    let dir = out_dir.cloned().unwrap_or_else(|| PathBuf::from("."));
    let path = out.unwrap_or_else(|| dir.join(format!("theta-{}.txt", cf.index)));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(&path, body)?;
    let mut r = Report::new("theta");
    r.fact("characters modulo m", chars.len());
    r.fact("index", cf.index);
    r.fact("level", q.level);
    r.fact("precision", prec);
    r.fact("written", path.display());
    Ok(r)
}

fn norm_check(samples: usize, seed: u64) -> Result<Report, CliError> {
    let out = congruence_batch(samples, seed);
    let mut r = Report::new("norm-check");
    r.fact("seed", seed);
    r.fact("split", format!("{}/{}", out.split_ok, out.split_total));
    r.fact("inert", format!("{}/{}", out.inert_ok, out.inert_total));
    r.fact("result", format!("{}/{} congruences certified", out.certified(), out.total()));
    if !out.failures.is_empty() {
        let mut t = Table::new("failures", &["sample", "error"]);
        for (i, e) in &out.failures {
            t.push([i.to_string(), e.clone()]);
        }
        r.tables.push(t);
    }
    Ok(r)
}

fn brandt(n_minus: u64, n_plus: u64, q_max: u64, newform: Option<PathBuf>) -> Result<Report, CliError> {
    let form = newform.map(|p| NewformFile::load(&p)).transpose()?;
    let a = form.as_ref().map(|f| f.rational()).transpose()?;
    let p = 1;
    let (sys, v) = pipeline::brandt_and_eigenvector(n_minus, n_plus, q_max, a.as_deref(), p)?;
    let mut r = Report::new("brandt");
    r.fact("N^-", n_minus);
    r.fact("N^+", n_plus);
    r.fact("class number", sys.class_number());
    r.fact("weights", format!("{:?}", sys.weights()));
    r.fact("mass", sys.mass());
    r.fact("expected mass", sys.expected_mass());
    let label = if form.is_some() { "eigenvector" } else { "Eisenstein vector" };
    r.fact(label, format!("{:?}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
    let mut t = Table::new("matrices", &["q", "B(q)"]);
    for q in sys.primes() {
        t.push([q.to_string(), format!("{:?}", sys.brandt_matrix(q).expect("computed"))]);
    }
    r.tables.push(t);
    Ok(r)
}

fn theta_elem(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = pipeline::prepare(cfg)?;
    let theta = theta_element(&prep.tower, &prep.v, cfg.level, 0)?;
    let mut r = Report::new("theta-elem");
    r.fact("newform", &prep.form.label);
    r.fact("level n", cfg.level);
    r.fact("group", format!("{:?}", theta.group().invariants()));
    r.fact("alpha exponent", theta.alpha_exponent());
    r.fact(
        "inversion symmetry",
        inversion_symmetry(&theta).map_or("none".to_string(), |(s, g)| format!("sign {s}, shift {g:?}")),
    );
    let mut t = Table::new("coefficients", &["sigma", "coefficient"]);
    for (g, c) in theta.coeffs().terms() {
        t.push([format!("{g:?}"), c.to_string()]);
    }
    r.tables.push(t);
    Ok(r)
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let cache = Cache::resolve(cli.cache_dir.clone());
    match cli.cmd {
        Command::Classgroup { disc, modulus, p } => classgroup(disc, modulus, p),
        Command::Theta { character, prec, out } => theta(&character, prec, out, cli.out_dir.as_ref()),
        Command::NormCheck { samples, seed } => {
            let r = norm_check(samples, seed)?;
            if r.tables.is_empty() {
                Ok(r)
            } else {
                print!("{}", r.to_text());
                Err(CliError::Input("some congruences failed".into()))
            }
        }
        Command::Brandt { n_minus, n_plus, q_max, newform } => brandt(n_minus, n_plus, q_max, newform),
        Command::ThetaElem(run) => theta_elem(&run.config(cache)),
        Command::Lvalue { run, conductor, ratios } => {
            let cfg = run.config(cache);
            if ratios {
                pipeline::interpolation_ratios(&cfg)
            } else {
                let form = NewformFile::load(&cfg.newform)?;
                form.validate(2000)?;
                pipeline::lvalue_table(&form, cfg.d_k, conductor, cfg.l_tolerance)
            }
        }
        Command::BkCriterion(run) => pipeline::bk_criterion(&run.config(cache)),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classgroup { .. } => "classgroup",
        Command::Theta { .. } => "theta",
        Command::NormCheck { .. } => "norm-check",
        Command::Brandt { .. } => "brandt",
        Command::ThetaElem(_) => "theta-elem",
        Command::Lvalue { .. } => "lvalue",
        Command::BkCriterion(_) => "bk-criterion",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let name = command_name(&cli.cmd);
    let out_dir = cli.out_dir.clone();
    match pool.install(|| run(cli)) {
        Ok(report) => {
            print!("{}", report.to_text());
            if let Some(dir) = out_dir {
                if let Err(e) = report.write(&dir, name) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
