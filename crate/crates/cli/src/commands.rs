use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};

use pellforge::builder::{appendix_case1_derivation, equate_coefficients, make_template, EpzFamily, Signature};
use pellforge::elim::{self, reduce, PolySystem, ReduceOptions};
use pellforge::known;
use pellforge::padic::{newton_lift, residual_valuation, scan_local, ScanOptions};
use pellforge::pell;
use pellforge::recog::{algdep, algdep_adaptive};
use pellforge::ring::Rationals;
use pellforge::verify::{verify_corpus, verify_identity, Certificate};

use crate::{AlgdepArgs, Cli, Command, PellArgs, ReduceArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn math(e: impl ToString) -> CliError {
    CliError::Math(e.to_string())
}

/// Rendered output and whether the run counts as a success.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

fn out(cli: &Cli, j: Value, text: impl FnOnce() -> String, pass: bool) -> Output {
    let json_mode = cli.json || cli.output.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    let text = if json_mode { serde_json::to_string_pretty(&j).expect("json value") + "\n" } else { text() };
    Output { text, pass }
}

pub fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn jobs(cli: &Cli) -> Result<Option<usize>, CliError> {
    if let Some(n) = cli.jobs {
        return if n == 0 { Err(usage("--jobs must be at least 1")) } else { Ok(Some(n)) };
    }
    match std::env::var("PELLFORGE_JOBS") {
        Ok(s) => s.trim().parse::<usize>().ok().filter(|&n| n > 0).map(Some).ok_or_else(|| usage(format!("PELLFORGE_JOBS={s} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Some(n) = jobs(cli)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(math)?;
    }
    match &cli.command {
        Command::Build { sig } => build(cli, sig),
        Command::Reduce(args) => reduce_cmd(cli, args),
        Command::SolveCase1 => solve_case1(cli),
        Command::Appendix => appendix(cli),
        Command::Scan { system, prime, fix, serial } => scan(cli, system, *prime, fix, *serial),
        Command::Lift { system, seed, prime, precision } => lift(cli, system, seed, *prime, *precision),
        Command::Algdep(args) => algdep_cmd(cli, args),
        Command::Pell(args) => pell_cmd(cli, args),
        Command::Verify { corpus, family } => verify(cli, *corpus, family.as_deref()),
        Command::Rho { x, a, b } => rho(cli, x, a, b),
    }
}

fn parse_sig(s: &str) -> Result<Signature, CliError> {
    s.parse::<Signature>().map_err(usage)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_system(path: &Path) -> Result<PolySystem, CliError> {
    PolySystem::from_json_str(&read(path)?).map_err(usage)
}

fn int(s: &str, what: &str) -> Result<BigInt, CliError> {
    s.trim().parse::<BigInt>().map_err(|_| usage(format!("{what}: {s:?} is not an integer")))
}

fn build(cli: &Cli, sig: &str) -> Result<Output, CliError> {
    let sig = parse_sig(sig)?;
    let tpl = make_template(sig).map_err(usage)?;
    let sys = equate_coefficients(&tpl).map_err(math)?;
    let unknowns = tpl.unknowns().names().to_vec();
    let polys = [("X", &tpl.x), ("A", &tpl.a), ("B", &tpl.b), ("Q", &tpl.q), ("Y", &tpl.y)];
    let j = json!({
        "signature": sig,
        "unknowns": unknowns,
        "template": polys.iter().map(|(n, p)| (n.to_string(), Value::from(p.to_string()))).collect::<serde_json::Map<_, _>>(),
        "system": sys.to_json(),
    });
    let text = || {
        let mut s = format!("signature {sig}: {} unknowns, {} equations\n", unknowns.len(), sys.len());
        for (n, p) in polys {
            s += &format!("{n} = {p}\n");
        }
        s
    };
    Ok(out(cli, j, text, true))
}

fn preset(sig: Signature) -> Result<Option<PolySystem>, CliError> {
    let r = if sig == elim::case1_signature() {
        elim::reduce_case1()
    } else if sig == elim::case2_signature() {
        elim::reduce_case2()
    } else if sig == elim::case3_signature() {
        elim::reduce_case3()
    } else {
        return Ok(None);
    };
    r.map(|(_, _, red)| Some(red)).map_err(math)
}

fn reduce_cmd(cli: &Cli, args: &ReduceArgs) -> Result<Output, CliError> {
    let sig = parse_sig(&args.sig)?;
    let tpl = make_template(sig).map_err(usage)?;
    let mut sys = match (&args.protected, preset(sig)?) {
        (None, Some(red)) => red,
        _ => {
            let sys = equate_coefficients(&tpl).map_err(math)?;
            let opts = ReduceOptions {
                protected: args.protected.clone().unwrap_or_default(),
                target_vars: None,
                permissive_steps: 0,
            };
            reduce(&sys, &opts).map_err(math)?
        }
    };
    if let Some(target) = args.target_vars {
        if sys.vars().len() > target {
            let opts = ReduceOptions { protected: Vec::new(), target_vars: Some(target), permissive_steps: args.permissive };
            sys = reduce(&sys, &opts).map_err(math)?;
        }
    }
    let text = || {
        let mut s = format!("{} equations in {}\n", sys.len(), sys.vars().names().join(", "));
        for (i, e) in sys.eqs().iter().enumerate() {
            s += &format!("eq{i}: {} terms, total degree {}\n", e.len(), e.total_degree());
        }
        s
    };
    Ok(out(cli, sys.to_json(), text, true))
}

fn solve_case1(cli: &Cli) -> Result<Output, CliError> {
    let s = elim::solve_case1().map_err(math)?;
    let vars = s.reduced.vars().names().to_vec();
    let isolated: Vec<Vec<String>> = s.solutions.isolated.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect();
    let parametric: Vec<Value> = s
        .solutions
        .parametric
        .iter()
        .map(|f| json!({ "params": f.params.names(), "coords": f.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>() }))
        .collect();
    let full: Vec<Value> = s
        .full
        .iter()
        .map(|vals| Value::Object(vals.iter().map(|(n, v)| (n.clone(), Value::from(v.to_string()))).collect()))
        .collect();
    let families: Vec<Value> = s.families.iter().map(|f| f.to_json()).collect();
    let j = json!({ "vars": vars, "isolated": isolated, "parametric": parametric, "values": full, "families": families });
    let text = || {
        let mut t = format!("variables: {}\n", vars.join(", "));
        for p in &isolated {
            t += &format!("isolated: ({})\n", p.join(", "));
        }
        for f in &s.solutions.parametric {
            let cs: Vec<String> = f.coords.iter().map(|c| c.to_string()).collect();
            t += &format!("family in {}: ({})\n", f.params.names().join(", "), cs.join(", "));
        }
        for f in &s.families {
            t += &f.display();
            t.push('\n');
        }
        t
    };
    Ok(out(cli, j, text, true))
}

fn appendix(cli: &Cli) -> Result<Output, CliError> {
    let trace = appendix_case1_derivation();
    let pass = trace.mismatches().is_empty();
    Ok(out(cli, trace.to_json(), || trace.to_string(), pass))
}

fn scan(cli: &Cli, path: &Path, p: u64, fix: &[String], serial: bool) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let fixed = fix
        .iter()
        .map(|f| {
            let (v, r) = f.split_once('=').ok_or_else(|| usage(format!("--fix {f:?}: expected VAR=VAL")))?;
            let r = r.trim().parse::<u64>().map_err(|_| usage(format!("--fix {f:?}: bad residue")))?;
            Ok((v.trim().to_string(), r % p.max(1)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let sols = scan_local(&sys, p, &ScanOptions { fixed, parallel: !serial }).map_err(usage)?;
    let j = serde_json::to_value(&sols).expect("plain data");
    let text = || {
        let mut s = format!("{} solutions mod {p} in ({})\n", sols.len(), sys.vars().names().join(", "));
        for l in &sols {
            let cs: Vec<String> = l.coords.iter().map(|c| c.to_string()).collect();
            s += &format!("({}) {} det {}\n", cs.join(", "), l.status, l.det);
        }
        s
    };
    Ok(out(cli, j, text, true))
}

fn lift(cli: &Cli, path: &Path, seed: &str, p: u64, k: u32) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let seed = parse_seed(seed)?;
    let pt = newton_lift(&sys, &seed, p, k).map_err(math)?;
    let v = residual_valuation(&sys, &pt);
    let j = json!({ "point": pt, "residual_valuation": v });
    let text = || {
        let mut s = format!("lifted to {p}^{k}, residual valuation {v}\n");
        for (n, c) in sys.vars().names().iter().zip(&pt.coords) {
            s += &format!("{n} = {c}\n");
        }
        s
    };
    Ok(out(cli, j, text, v >= k))
}

fn parse_seed(seed: &str) -> Result<Vec<u64>, CliError> {
    seed.split(',')
        .map(|r| r.trim().parse::<u64>().map_err(|_| usage(format!("--seed: bad residue {r:?}"))))
        .collect()
}

fn algdep_cmd(cli: &Cli, args: &AlgdepArgs) -> Result<Output, CliError> {
    let (p, k, dmax) = (args.prime, args.precision, args.dmax);
    if !pellforge::arith::is_prime_u64(p) {
        return Err(usage(format!("{p} is not prime")));
    }
    if k == 0 || dmax == 0 {
        return Err(usage("precision and --dmax must be positive"));
    }
    let cands = match (&args.value, &args.system) {
        (Some(v), _) => algdep(&int(v, "--value")?, p, k, dmax),
        (None, Some(path)) => {
            let sys = load_system(path)?;
            let seed = parse_seed(args.seed.as_deref().unwrap_or_default())?;
            let var = args.var.as_deref().unwrap_or_default();
            let i = sys.vars().index_of(var).ok_or_else(|| usage(format!("--var: {var} is not a system variable")))?;
            newton_lift(&sys, &seed, p, 1).map_err(math)?;
            let relift = |kk: u32| newton_lift(&sys, &seed, p, kk).expect("seed lifted at precision 1").coords[i].clone();
            algdep_adaptive(&relift, p, k, args.max_precision, dmax)
        }
        (None, None) => return Err(usage("algdep needs --value or --system")),
    };
    let pass = cands.first().is_some_and(|c| c.verified);
    let j = serde_json::to_value(&cands).expect("plain data");
    let text = || {
        cands
            .iter()
            .map(|c| {
                let coeffs: Vec<String> = c.poly.iter().map(|x| x.to_string()).collect();
                format!("[{}] degree {} verified {}\n", coeffs.join(", "), c.degree(), c.verified)
            })
            .collect()
    };
    Ok(out(cli, j, text, pass))
}

fn load_family(path: &Path) -> Result<EpzFamily<Rationals>, CliError> {
    let j: Value = serde_json::from_str(&read(path)?).map_err(usage)?;
    EpzFamily::from_json(&j).map_err(usage)
}

fn pell_cmd(cli: &Cli, args: &PellArgs) -> Result<Output, CliError> {
    let (fam, default_kappa) = match args.family.as_str() {
        "caseI" | "case1" => (known::case1_final_model(), 1),
        "letter" => (known::letter_model(), known::LETTER_KAPPA as u64),
        path => (load_family(Path::new(path))?, 1),
    };
    let kappa = BigInt::from(args.kappa.unwrap_or(default_kappa));
    if kappa == BigInt::from(0) {
        return Err(usage("--kappa must be positive"));
    }
    let pts = pell::integral_points(&fam, &kappa, args.count).map_err(math)?;
    let j = serde_json::to_value(&pts).expect("plain data");
    let text = || {
        pts.iter()
            .map(|r| {
                let rho = r.rho.map_or("-".to_string(), |v| format!("{v:.6}"));
                format!("t = {}  x = {}  A = {}  B = {}  rho = {rho}  ({} digits)\n", r.t, r.x, r.a, r.b, r.digits_x)
            })
            .collect()
    };
    Ok(out(cli, j, text, true))
}

fn cert_text(c: &Certificate) -> String {
    let mut s = String::new();
    for ch in &c.checks {
        s += &format!("{} {}", if ch.pass { "PASS" } else { "FAIL" }, ch.name);
        if let Some(w) = &ch.witness {
            s += &format!(" [{w}]");
        }
        s.push('\n');
    }
    s += &format!("{}: {}\n", c.subject, if c.pass { "all checks pass" } else { "FAILED" });
    s
}

fn verify(cli: &Cli, corpus: bool, family: Option<&Path>) -> Result<Output, CliError> {
    let cert = match (corpus, family) {
        (true, _) => verify_corpus(),
        (false, Some(p)) => verify_identity(&load_family(p)?),
        (false, None) => return Err(usage("verify needs --corpus or --family FILE")),
    };
    let j = serde_json::to_value(&cert).expect("plain data");
    Ok(out(cli, j, || cert_text(&cert), cert.pass))
}

fn rho(cli: &Cli, x: &str, a: &str, b: &str) -> Result<Output, CliError> {
    let (x, a, b) = (int(x, "x")?, int(a, "A")?, int(b, "B")?);
    let r = pell::rho(&x, &a, &b).map_err(math)?;
    Ok(out(cli, json!({ "rho": r }), || format!("{r:.6}\n"), true))
}
