use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use mflab_core::ct::{self, witness_for_omega, witness_non_ct};
use mflab_core::endo::{construction_resolution, end_ring, pd_probe, EndoConfig};
use mflab_core::modspec::resolve_pair;
use mflab_core::suite;
use mflab_core::tools::{iso_test, pushforward};
use mflab_core::{
    ct_check, CtConfig, CtOverall, Engine, EngineConfig, Envelope, FactoredEquation, IsoVerdict, MatrixFactorization,
    ModuleSpec, PdResult, PresentedModule, Schedule, StableDim, SuiteConfig, ToolConfig, DEFAULT_PRIME,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_REFUTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mflab",
    version,
    about = "Matrix factorizations, Ext/Tor and cluster tilting checks over F_p"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Factored equation, e.g. "x*y*(x+y)".
    #[arg(long = "f")]
    f: String,
    /// Prime modulus.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    p: u32,
    /// Comma-separated variable names; inferred from the equation when omitted.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Comma-separated truncation orders; defaults depend on the number of variables.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ext^i(M, N) by the periodic engine, optionally cross-checked by cocycles.
    Ext {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Also run the cocycle engine (only for i = 1).
        #[arg(long)]
        cocycle: bool,
    },
    /// Tor_i(M, N).
    Tor {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
    /// Knörrer image of M over f + uv.
    Knoerrer {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
        #[arg(long, default_value = "u")]
        u: String,
        #[arg(long, default_value = "v")]
        v: String,
    },
    /// Syzygy of M.
    Syzygy {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
    },
    /// Dual of M.
    Dual {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
    },
    /// Isomorphism test with fingerprints and explicit maps.
    Iso {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// The sequence 0 → M → R^λ → M₁ → 0 on a ring of dimension at least 2.
    Pushforward {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
    },
    /// Rigidity and catalog cluster tilting of S^ω.
    CtCheck {
        #[command(flatten)]
        common: Common,
        /// Comma-separated permutation; identity when omitted.
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<usize>>,
    },
    /// Non-rigid witness for a singular factor.
    Witness {
        #[command(flatten)]
        common: Common,
        /// 1-based index of the singular factor; the first singular one when omitted.
        #[arg(long)]
        bad: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<usize>>,
    },
    /// End(M), the add(M)-resolution of N and pd of Hom(M, N).
    EndoProbe {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Run a JSON-configured battery of checks.
    Suite {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the per-check summary on stderr.
        #[arg(long)]
        quiet: bool,
    },
}

struct Session {
    engine: Engine,
    eq: FactoredEquation,
    common: Common,
}

impl Session {
    fn new(common: &Common) -> Result<Self> {
        let eq = FactoredEquation::parse(&common.f, common.vars.as_deref(), common.p as u64)
            .with_context(|| format!("cannot parse equation `{}`", common.f))?;
        Ok(Self {
            engine: Engine::new(EngineConfig::from_env()),
            eq,
            common: common.clone(),
        })
    }

    fn module(&self, spec: &str) -> Result<MatrixFactorization> {
        let s = ModuleSpec::parse(spec)?;
        s.resolve(&self.eq)
            .with_context(|| format!("cannot build module `{spec}`"))
    }

    fn pair(&self, a: &str, b: &str) -> Result<(MatrixFactorization, MatrixFactorization)> {
        Ok(resolve_pair(&self.eq, &ModuleSpec::parse(a)?, &ModuleSpec::parse(b)?)?)
    }

    fn schedule(&self, nvars: usize) -> Result<Schedule> {
        Ok(match &self.common.schedule {
            Some(l) => Schedule::new(l.clone())?,
            None => Schedule::for_vars(nvars),
        })
    }

    fn tools(&self, mf: &MatrixFactorization) -> ToolConfig {
        let eq = (mf.ctx() == self.eq.ctx()).then_some(&self.eq);
        ToolConfig::new(eq, self.common.seed)
    }

    fn emit<T: Serialize>(&self, vars: &[String], schedule: &Schedule, body: &T) -> Result<()> {
        let env = Envelope::new(self.common.p, vars, schedule, self.common.seed);
        write_json(
            self.common.out.as_ref(),
            &serde_json::to_string_pretty(&env.wrap(body)?)?,
        )
    }
}

fn write_json(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn stable_code(d: StableDim) -> u8 {
    match d {
        StableDim::Stable(_) => EXIT_OK,
        StableDim::Unstable => EXIT_INCONCLUSIVE,
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Ext {
            common,
            m,
            n,
            i,
            cocycle,
        } => {
            let s = Session::new(&common)?;
            let (a, b) = s.pair(&m, &n)?;
            let sched = s.schedule(a.ctx().nvars())?;
            let (pa, pb) = (PresentedModule::from_mf(&a), PresentedModule::from_mf(&b));
            let periodic = s.engine.ext_periodic(&pa, &pb, i, &sched)?;
            let mut code = stable_code(periodic.stable_dim);
            let mut body = serde_json::to_value(&periodic)?;
            if cocycle {
                if i != 1 {
                    bail!("the cocycle engine computes Ext^1 only");
                }
                let c = s.engine.ext1_cocycle_schedule(&a, &b, &sched)?;
                let agree = c.stable_dim == periodic.stable_dim;
                if !agree || c.stable_dim == StableDim::Unstable {
                    code = EXIT_INCONCLUSIVE;
                }
                body["cocycle"] = serde_json::to_value(&c)?;
                body["engines_agree"] = json!(agree);
            }
            body["M"] = json!(m);
            body["N"] = json!(n);
            s.emit(a.ctx().vars(), &sched, &body)?;
            Ok(code)
        }
        Cmd::Tor { common, m, n, i } => {
            let s = Session::new(&common)?;
            let (a, b) = s.pair(&m, &n)?;
            let sched = s.schedule(a.ctx().nvars())?;
            let r = s
                .engine
                .tor_periodic(&PresentedModule::from_mf(&a), &PresentedModule::from_mf(&b), i, &sched)?;
            let mut body = serde_json::to_value(&r)?;
            body["M"] = json!(m);
            body["N"] = json!(n);
            s.emit(a.ctx().vars(), &sched, &body)?;
            Ok(stable_code(r.stable_dim))
        }
        Cmd::Knoerrer { common, m, u, v } => {
            let s = Session::new(&common)?;
            let k = s.module(&m)?.knoerrer(&u, &v)?;
            let valid = k.validate().is_valid();
            let sched = s.schedule(k.ctx().nvars())?;
            s.emit(
                k.ctx().vars(),
                &sched,
                &json!({ "module": k.to_json(), "valid": valid }),
            )?;
            Ok(if valid { EXIT_OK } else { EXIT_REFUTED })
        }
        Cmd::Syzygy { common, m } => unary(&common, &m, MatrixFactorization::syzygy),
        Cmd::Dual { common, m } => unary(&common, &m, MatrixFactorization::dual),
        Cmd::Iso { common, m, n, trials } => {
            let s = Session::new(&common)?;
            let (a, b) = s.pair(&m, &n)?;
            let mut cfg = s.tools(&a);
            cfg.trials = trials;
            let w = iso_test(
                &s.engine,
                &PresentedModule::from_mf(&a),
                &PresentedModule::from_mf(&b),
                &cfg,
            )?;
            let sched = s.schedule(a.ctx().nvars())?;
            s.emit(a.ctx().vars(), &sched, &w)?;
            Ok(match w.verdict {
                IsoVerdict::Isomorphic | IsoVerdict::NotIsomorphic => EXIT_OK,
                IsoVerdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Cmd::Pushforward { common, m } => {
            let s = Session::new(&common)?;
            let a = s.module(&m)?;
            let sched = s.schedule(a.ctx().nvars())?;
            let r = pushforward(&s.engine, &PresentedModule::from_mf(&a), &sched, &s.tools(&a))?;
            let ok = r.rank_accounting.holds && r.exactness.iter().all(|e| e.1 && e.2);
            s.emit(a.ctx().vars(), &sched, &r)?;
            Ok(if ok { EXIT_OK } else { EXIT_REFUTED })
        }
        Cmd::CtCheck { common, omega } => {
            let s = Session::new(&common)?;
            let omega = omega.unwrap_or_else(|| (1..=s.eq.len()).collect());
            let sched = s.schedule(s.eq.ctx().nvars())?;
            let cfg = CtConfig {
                schedule: sched.clone(),
                two_engines: true,
                tools: ToolConfig::new(Some(&s.eq), common.seed),
            };
            let rep = ct_check(&s.engine, &s.eq, &omega, &cfg)?;
            s.emit(s.eq.ctx().vars(), &sched, &rep)?;
            Ok(match rep.overall {
                CtOverall::ClusterTiltingOnCatalog => EXIT_OK,
                CtOverall::Refuted => EXIT_REFUTED,
                CtOverall::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Cmd::Witness { common, bad, omega } => {
            let s = Session::new(&common)?;
            let smooth = ct::check_factor_smooth(&s.eq)?;
            let bad = match bad {
                Some(b) => b,
                None => match smooth.iter().position(|&ok| !ok) {
                    Some(i) => i + 1,
                    None => bail!("every factor of `{}` is smooth; no witness exists", common.f),
                },
            };
            let w = match &omega {
                Some(o) => witness_for_omega(&s.eq, o, bad)?,
                None => witness_non_ct(&s.eq, bad)?,
            };
            let sched = s.schedule(s.eq.ctx().nvars())?;
            let body = json!({
                "bad_index": bad,
                "omega": omega,
                "factor_smoothness": smooth,
                "module": w.require_mf()?.to_json(),
            });
            s.emit(s.eq.ctx().vars(), &sched, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::EndoProbe { common, m, n, depth } => {
            let s = Session::new(&common)?;
            let (a, b) = s.pair(&m, &n)?;
            let nvars = a.ctx().nvars();
            let mut cfg = EndoConfig::new(nvars, common.seed);
            cfg.depth = depth;
            cfg.tools = s.tools(&a);
            let (pm, pn) = (PresentedModule::from_mf(&a), PresentedModule::from_mf(&b));
            let (ring, _) = end_ring(&s.engine, &pm, cfg.level)?;
            let (pd, res) = if depth > 8 {
                (
                    PdResult::Exceeds(depth),
                    construction_resolution(&s.engine, &pm, &pn, &cfg)?,
                )
            } else {
                pd_probe(&s.engine, &pm, &pn, &cfg)?
            };
            let sched = s.schedule(nvars)?;
            let body = json!({
                "M": m,
                "N": n,
                "end_ring": ring,
                "pd": pd,
                "resolution": res,
                "note": "truncated evidence, not a proof of any global dimension statement",
            });
            s.emit(a.ctx().vars(), &sched, &body)?;
            Ok(match pd {
                PdResult::Finite(_) if !res.flagged => EXIT_OK,
                _ => EXIT_INCONCLUSIVE,
            })
        }
        Cmd::Suite { config, out, quiet } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            let cfg = SuiteConfig::from_json_str(&text)
                .with_context(|| format!("invalid suite config {}", config.display()))?;
            let engine = Engine::new(EngineConfig::from_env());
            let total = cfg.checks.len();
            let mut k = 0;
            let report = suite::run_suite(&engine, &cfg, |c| {
                k += 1;
                if !quiet {
                    let drift = c.hygiene.as_ref().map_or(0, |h| h.drift.len());
                    eprintln!(
                        "[{k}/{total}] {} {}  D={:?}  {}  (drift {drift})",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.d_schedule.levels(),
                        c.summary
                    );
                }
            })?;
            if !quiet {
                eprintln!("{} passed, {} failed", report.passed, report.failed);
            }
            write_json(out.as_ref(), &suite::suite_json(&cfg, &report)?)?;
            Ok(if report.all_pass { EXIT_OK } else { EXIT_REFUTED })
        }
    }
}

fn unary(common: &Common, spec: &str, op: fn(&MatrixFactorization) -> MatrixFactorization) -> Result<u8> {
    let s = Session::new(common)?;
    let r = op(&s.module(spec)?);
    let sched = s.schedule(r.ctx().nvars())?;
    s.emit(
        r.ctx().vars(),
        &sched,
        &json!({ "module": r.to_json(), "valid": r.validate().is_valid() }),
    )?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
