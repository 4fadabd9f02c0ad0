//! Command-line orchestration: long-running resolution jobs with
//! checkpointing, Ext queries, chart emission, and the verification
//! harness. All outputs are deterministic for fixed inputs.

mod chart;
mod config;

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{checkpoint_path, parse_profile, JobConfig};
use motex::hopf::Algebra;
use motex::naming::{AlgebraKey, Namer};
use motex::resolution::{
    checkpoint_load, checkpoint_save, ExtTable, Resolution, SolveStrategy, SolverCache,
};
use motex::verify::Harness;
use motex::yoneda::{
    class_is_zero, ext_product, mahowald, massey, restrict, restriction_map, ExtClass,
};

#[derive(Parser)]
#[command(
    name = "motex",
    about = "Trigraded Ext over quotients of the C-motivic Steenrod algebra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Declarative job configuration file (TOML); flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Checkpoint file (relative paths are rooted in MOTEX_CHECKPOINT_DIR).
    #[arg(long, short = 'c', global = true)]
    checkpoint: Option<String>,
    /// Worker thread count. Cells are currently processed sequentially;
    /// results are schedule-independent by construction.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format where applicable: text, tsv or svg.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build or extend a resolution and write a checkpoint.
    Resolve {
        #[command(flatten)]
        common: Common,
        /// Algebra preset: A, A2, B, E-tau3, B-classical, A-classical.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        max_stem: Option<u32>,
        #[arg(long)]
        max_f: Option<u32>,
        /// Hard bound on internal degrees of algebra monomials (required
        /// for the unbounded presets A and A-classical).
        #[arg(long)]
        degree_cap: Option<u32>,
    },
    /// Print Ext dimensions from a checkpoint.
    Ext {
        #[command(flatten)]
        common: Common,
        /// Restrict to one tridegree "s,f,w".
        #[arg(long)]
        tridegree: Option<String>,
        #[arg(long)]
        max_stem: Option<u32>,
        #[arg(long)]
        max_f: Option<u32>,
    },
    /// Multiply name expressions, e.g. `motex product "h0^3" "g2"`.
    Product {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// Triple Massey product of name expressions.
    Massey {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
        c: String,
    },
    /// Restriction p* of a class along a subalgebra inclusion.
    Restrict {
        #[command(flatten)]
        common: Common,
        expr: String,
        /// Checkpoint of the subalgebra resolution.
        #[arg(long)]
        sub: String,
    },
    /// The Mahowald operator M x = <g2, h0^3, x> and its iterates.
    Mahowald {
        #[command(flatten)]
        common: Common,
        expr: String,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
        /// Verify p*(M x) = (e0 v3^2 + h1^3 v3^3) p*(x) against this
        /// subalgebra checkpoint.
        #[arg(long)]
        sub: Option<String>,
        #[arg(long, default_value_t = false)]
        check_prop42: bool,
    },
    /// Emit SVG and TSV charts from a checkpoint.
    Chart {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        max_stem: Option<u32>,
        #[arg(long)]
        max_f: Option<u32>,
    },
    /// Run the verification harness.
    Verify {
        #[command(flatten)]
        common: Common,
        /// quick, paper, or extended.
        #[arg(long, default_value = "quick")]
        suite: String,
        /// Fixture cache directory.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn merged_config(common: &Common) -> Result<JobConfig> {
    let mut cfg = match &common.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    if let Some(c) = &common.checkpoint {
        cfg.checkpoint = Some(c.clone());
    }
    if let Some(t) = common.threads {
        cfg.threads = Some(t);
    }
    if let Some(f) = &common.format {
        cfg.format = Some(f.clone());
    }
    Ok(cfg)
}

fn load_resolution(cfg: &JobConfig) -> Result<Resolution> {
    let raw = cfg
        .checkpoint
        .as_ref()
        .ok_or_else(|| anyhow!("a --checkpoint is required"))?;
    let path = checkpoint_path(raw);
    let blob =
        std::fs::read(&path).with_context(|| format!("reading checkpoint {}", path.display()))?;
    let res = checkpoint_load(&blob)
        .with_context(|| format!("loading checkpoint {}", path.display()))?;
    Ok(res)
}

/// Largest (f, t) region with a valid Ext table for this resolution.
fn table_region(res: &Resolution) -> (u32, u32) {
    let mut max_f = 0;
    while res.frontier(max_f + 1) >= 0 {
        max_f += 1;
    }
    let t = (1..=max_f)
        .map(|f| res.frontier(f))
        .min()
        .unwrap_or(0)
        .max(0) as u32;
    (max_f.saturating_sub(1), t)
}

fn namer_key(res: &Resolution) -> Result<AlgebraKey> {
    AlgebraKey::of_profile(res.algebra().profile())
        .ok_or_else(|| anyhow!("no naming table for this algebra (use A, A2 or B)"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Resolve {
            common,
            algebra,
            max_stem,
            max_f,
            degree_cap,
        } => {
            let mut cfg = merged_config(&common)?;
            if let Some(a) = algebra {
                cfg.algebra = Some(a);
            }
            if let Some(v) = max_stem {
                cfg.max_stem = Some(v);
            }
            if let Some(v) = max_f {
                cfg.max_f = Some(v);
            }
            if let Some(v) = degree_cap {
                cfg.degree_cap = Some(v);
            }
            cmd_resolve(&cfg)
        }
        Command::Ext {
            common,
            tridegree,
            max_stem,
            max_f,
        } => {
            let cfg = merged_config(&common)?;
            cmd_ext(&cfg, tridegree, max_stem, max_f)
        }
        Command::Product {
            common,
            left,
            right,
        } => {
            let cfg = merged_config(&common)?;
            cmd_product(&cfg, &left, &right)
        }
        Command::Massey { common, a, b, c } => {
            let cfg = merged_config(&common)?;
            cmd_massey(&cfg, &a, &b, &c)
        }
        Command::Restrict { common, expr, sub } => {
            let cfg = merged_config(&common)?;
            cmd_restrict(&cfg, &expr, &sub)
        }
        Command::Mahowald {
            common,
            expr,
            iterate,
            sub,
            check_prop42,
        } => {
            let cfg = merged_config(&common)?;
            cmd_mahowald(&cfg, &expr, iterate, sub.as_deref(), check_prop42)
        }
        Command::Chart {
            common,
            out,
            max_stem,
            max_f,
        } => {
            let cfg = merged_config(&common)?;
            cmd_chart(&cfg, &out, max_stem, max_f)
        }
        Command::Verify {
            common,
            suite,
            cache,
        } => {
            let cfg = merged_config(&common)?;
            let _ = cfg;
            cmd_verify(&suite, cache)
        }
    }
}

fn cmd_resolve(cfg: &JobConfig) -> Result<()> {
    let algebra = cfg
        .algebra
        .as_ref()
        .ok_or_else(|| anyhow!("--algebra is required"))?;
    let max_stem = cfg.max_stem.ok_or_else(|| anyhow!("--max-stem required"))?;
    let max_f = cfg.max_f.unwrap_or(max_stem / 2 + 2);
    let cap = cfg.degree_cap.unwrap_or(max_stem + max_f);
    let profile = parse_profile(algebra, cap)?;

    let path = cfg.checkpoint.as_ref().map(|c| checkpoint_path(c));
    let mut res = match &path {
        Some(p) if p.exists() => {
            let blob = std::fs::read(p)?;
            let res = checkpoint_load(&blob)?;
            if res.algebra().profile() != &profile {
                bail!(
                    "checkpoint {} holds a different algebra; refusing to mix",
                    p.display()
                );
            }
            res
        }
        _ => Resolution::new(Algebra::new(profile)),
    };
    if let Some(t) = cfg.threads {
        if t > 1 {
            eprintln!("note: cells are processed sequentially; output is identical for any thread count");
        }
    }
    res.extend(max_stem, max_f)
        .map_err(|e| anyhow!(e.to_string()))?;

    // Per (s, f) generator counts.
    println!("algebra {algebra}, stems <= {max_stem}, filtrations <= {max_f}");
    println!("s\tf\tgenerators");
    let mut rows = Vec::new();
    for (&(f, t), gens) in res.cells() {
        if f == 0 {
            continue;
        }
        rows.push((t as i64 - f as i64, f, gens.len()));
    }
    rows.sort();
    for (s, f, n) in rows {
        println!("{s}\t{f}\t{n}");
    }
    println!("total generators: {}", res.gen_count());

    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(p, checkpoint_save(&res))
            .with_context(|| format!("writing checkpoint {}", p.display()))?;
        println!("checkpoint written to {}", p.display());
    }
    Ok(())
}

fn cmd_ext(
    cfg: &JobConfig,
    tridegree: Option<String>,
    max_stem: Option<u32>,
    max_f: Option<u32>,
) -> Result<()> {
    let res = load_resolution(cfg)?;
    let (region_f, region_t) = table_region(&res);
    let f_max = max_f.unwrap_or(region_f).min(region_f);
    let t_max = max_stem
        .map(|s| s + f_max)
        .unwrap_or(region_t)
        .min(region_t);
    let table = ExtTable::new(&res, f_max, t_max).map_err(|e| anyhow!(e.to_string()))?;
    match tridegree {
        Some(spec) => {
            let parts: Vec<i64> = spec
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .context("tridegree must be s,f,w")?;
            if parts.len() != 3 {
                bail!("tridegree must be s,f,w");
            }
            let (s, f, w) = (parts[0], parts[1] as u32, parts[2]);
            let dim = table.dim(s, f, w).map_err(|e| anyhow!(e.to_string()))?;
            let tau = table.tau_rank(s, f, w).map_err(|e| anyhow!(e.to_string()))?;
            println!("s\tf\tw\tdim\ttau_rank");
            println!("{s}\t{f}\t{w}\t{dim}\t{tau}");
        }
        None => print!("{}", chart::chart_tsv(&table)),
    }
    Ok(())
}

struct Session {
    res: Resolution,
    table: ExtTable,
    cache: SolverCache,
    key: AlgebraKey,
}

impl Session {
    fn open(cfg: &JobConfig) -> Result<Session> {
        let res = load_resolution(cfg)?;
        let (f_max, t_max) = table_region(&res);
        let table = ExtTable::new(&res, f_max, t_max).map_err(|e| anyhow!(e.to_string()))?;
        let key = namer_key(&res)?;
        Ok(Session {
            res,
            table,
            cache: SolverCache::default(),
            key,
        })
    }

    fn eval(&mut self, expr: &str) -> Result<ExtClass> {
        let mut namer = Namer::new(&self.res, &self.table, &mut self.cache, self.key);
        namer
            .eval(expr)?
            .ok_or_else(|| anyhow!("empty expression"))
    }

    fn describe(&mut self, x: &ExtClass) -> String {
        if class_is_zero(&self.res, x) {
            return "0".to_string();
        }
        let mut namer = Namer::new(&self.res, &self.table, &mut self.cache, self.key);
        match namer.express(x) {
            Ok(Some(s)) => s,
            _ => format!("[unnamed class at ({}, {}, {})]", x.s, x.f, x.w),
        }
    }
}

fn cmd_product(cfg: &JobConfig, left: &str, right: &str) -> Result<()> {
    let mut session = Session::open(cfg)?;
    let l = session.eval(left)?;
    let r = session.eval(right)?;
    let p = ext_product(
        &session.res,
        &mut session.cache,
        &l,
        &r,
        SolveStrategy::Canonical,
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    let desc = session.describe(&p);
    if cfg.format.as_deref() == Some("tsv") {
        println!("s\tf\tw\tvalue");
        println!("{}\t{}\t{}\t{}", p.s, p.f, p.w, desc);
    } else {
        println!("({left}) * ({right}) = {desc}  at ({}, {}, {})", p.s, p.f, p.w);
    }
    Ok(())
}

fn cmd_massey(cfg: &JobConfig, a: &str, b: &str, c: &str) -> Result<()> {
    let mut session = Session::open(cfg)?;
    let (ca, cb, cc) = (session.eval(a)?, session.eval(b)?, session.eval(c)?);
    let coset = massey(
        &session.res,
        &mut session.cache,
        &session.table,
        &ca,
        &cb,
        &cc,
        SolveStrategy::Canonical,
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    let desc = session.describe(&coset.rep);
    let indet_dim = {
        let (_, ech) = coset.reduced(&session.table);
        ech.rank()
    };
    if cfg.format.as_deref() == Some("tsv") {
        println!("s\tf\tw\trepresentative\tindeterminacy_dim");
        println!(
            "{}\t{}\t{}\t{}\t{}",
            coset.rep.s, coset.rep.f, coset.rep.w, desc, indet_dim
        );
    } else {
        println!(
            "<{a}, {b}, {c}> = {desc}  at ({}, {}, {}), indeterminacy dimension {indet_dim}",
            coset.rep.s, coset.rep.f, coset.rep.w
        );
    }
    Ok(())
}

fn open_pair(cfg: &JobConfig, sub_raw: &str) -> Result<(Session, Session)> {
    let amb = Session::open(cfg)?;
    let sub_cfg = JobConfig {
        checkpoint: Some(sub_raw.to_string()),
        ..Default::default()
    };
    let sub = Session::open(&sub_cfg)?;
    Ok((amb, sub))
}

fn cmd_restrict(cfg: &JobConfig, expr: &str, sub_raw: &str) -> Result<()> {
    let (mut amb, mut sub) = open_pair(cfg, sub_raw)?;
    let x = amb.eval(expr)?;
    let t = x.t();
    let map = restriction_map(
        &amb.res,
        &mut amb.cache,
        &sub.res,
        x.f,
        t,
        SolveStrategy::Canonical,
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    let r = restrict(&amb.res, &sub.res, &map, &x).map_err(|e| anyhow!(e.to_string()))?;
    let desc = sub.describe(&r);
    if cfg.format.as_deref() == Some("tsv") {
        println!("s\tf\tw\tvalue");
        println!("{}\t{}\t{}\t{}", r.s, r.f, r.w, desc);
    } else {
        println!("p*({expr}) = {desc}");
    }
    Ok(())
}

fn cmd_mahowald(
    cfg: &JobConfig,
    expr: &str,
    iterate: u32,
    sub_raw: Option<&str>,
    check_prop42: bool,
) -> Result<()> {
    let mut session = Session::open(cfg)?;
    if session.key != AlgebraKey::A {
        bail!("the Mahowald operator lives over the full algebra A");
    }
    let x = session.eval(expr)?;
    let (g2, h0cubed) = {
        let mut namer = Namer::new(
            &session.res,
            &session.table,
            &mut session.cache,
            session.key,
        );
        (namer.resolve("g2")?, namer.eval("h0^3")?.unwrap())
    };
    let coset = mahowald(
        &session.res,
        &mut session.cache,
        &session.table,
        &g2,
        &h0cubed,
        &x,
        iterate,
        SolveStrategy::Canonical,
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    let desc = session.describe(&coset.rep);
    println!(
        "M^{iterate} ({expr}) = {desc}  at ({}, {}, {}), indeterminacy spanned by {} classes",
        coset.rep.s,
        coset.rep.f,
        coset.rep.w,
        coset.indet.len()
    );

    if check_prop42 || sub_raw.is_some() {
        let sub_raw = sub_raw.ok_or_else(|| anyhow!("--sub checkpoint required for p* checks"))?;
        let sub_cfg = JobConfig {
            checkpoint: Some(sub_raw.to_string()),
            ..Default::default()
        };
        let mut sub = Session::open(&sub_cfg)?;
        let t = coset.rep.t();
        let map = restriction_map(
            &session.res,
            &mut session.cache,
            &sub.res,
            coset.rep.f,
            t,
            SolveStrategy::Canonical,
        )
        .map_err(|e| anyhow!(e.to_string()))?;
        let r = restrict(&session.res, &sub.res, &map, &coset.rep)
            .map_err(|e| anyhow!(e.to_string()))?;
        println!("p*(M^{iterate} {expr}) = {}", sub.describe(&r));
        if check_prop42 {
            if iterate != 1 {
                bail!("the restriction identity check applies to a single application");
            }
            let rx = restrict(
                &session.res,
                &sub.res,
                &map,
                &x,
            )
            .map_err(|e| anyhow!(e.to_string()))?;
            let factor = {
                let mut namer =
                    Namer::new(&sub.res, &sub.table, &mut sub.cache, sub.key);
                namer
                    .eval("e0 v3^2 + h1^3 v3^3")?
                    .ok_or_else(|| anyhow!("factor evaluates to zero"))?
            };
            let expected = ext_product(
                &sub.res,
                &mut sub.cache,
                &factor,
                &rx,
                SolveStrategy::Canonical,
            )
            .map_err(|e| anyhow!(e.to_string()))?;
            let ok = motex::yoneda::classes_equal(&sub.res, &r, &expected);
            let mut killed = true;
            for d in &coset.indet {
                let rd = restrict(&session.res, &sub.res, &map, d)
                    .map_err(|e| anyhow!(e.to_string()))?;
                if !class_is_zero(&sub.res, &rd) {
                    killed = false;
                }
            }
            println!(
                "p*(M x) = (e0 v3^2 + h1^3 v3^3) p*(x): {}",
                if ok { "pass" } else { "FAIL" }
            );
            println!(
                "p* kills the indeterminacy: {}",
                if killed { "pass" } else { "FAIL" }
            );
            if !ok || !killed {
                bail!("restriction identity check failed");
            }
        }
    }
    Ok(())
}

fn cmd_chart(
    cfg: &JobConfig,
    out: &PathBuf,
    max_stem: Option<u32>,
    max_f: Option<u32>,
) -> Result<()> {
    let res = load_resolution(cfg)?;
    let (region_f, region_t) = table_region(&res);
    let f_max = max_f.unwrap_or(region_f).min(region_f);
    let s_max = max_stem
        .map(|s| s as i64)
        .unwrap_or(region_t as i64 - f_max as i64);
    let t_max = ((s_max + f_max as i64) as u32).min(region_t);
    let table = ExtTable::new(&res, f_max, t_max).map_err(|e| anyhow!(e.to_string()))?;
    std::fs::create_dir_all(out)?;
    let formats = cfg.format.clone().unwrap_or_else(|| "svg,tsv".to_string());
    for fmt in formats.split(',') {
        match fmt.trim() {
            "tsv" => {
                let path = out.join("chart.tsv");
                std::fs::write(&path, chart::chart_tsv(&table))?;
                println!("wrote {}", path.display());
            }
            "svg" => {
                let path = out.join("chart.svg");
                std::fs::write(&path, chart::chart_svg(&table, s_max, f_max))?;
                println!("wrote {}", path.display());
            }
            other => bail!("unknown chart format {other:?}"),
        }
    }
    Ok(())
}

fn cmd_verify(suite: &str, cache: Option<PathBuf>) -> Result<()> {
    let cache = cache.or_else(|| std::env::var_os("MOTEX_FIXTURE_DIR").map(PathBuf::from));
    let mut harness = Harness::new(cache);
    let reports = match suite {
        "quick" => harness.quick_suite(),
        "paper" => harness.paper_suite(),
        "extended" => {
            harness.extended_a = true;
            vec![harness.extended_rows()]
        }
        other => bail!("unknown suite {other:?} (quick, paper, extended)"),
    };
    let mut all = true;
    for r in &reports {
        print!("{}", r.render());
        all &= r.pass;
    }
    println!("overall: {}", if all { "PASS" } else { "FAIL" });
    if !all {
        bail!("verification failed");
    }
    Ok(())
}

