use codimlab_core::algebra::AlgebraModel;
use codimlab_core::asymptotics::{self, ScanOutcome, UpperKind};
use codimlab_core::codim::{self, CodimConfig, CodimReport, Mode};
use codimlab_core::multilinear::free_dimension;
use codimlab_core::multilinear::witness::build_witness;
use codimlab_core::repr::{self, DEFAULT_PREC};
use codimlab_core::{ModelDescriptor, Partition, Rational, WordSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use serde_json::{json, Value};

use crate::config::{parse_rational, FileConfig, ModelArgs};
use crate::output::{float, interval, Header, Sink, Table};
use crate::{AlgebraAction, Cli, CliError, Command, Lemma};

struct Ctx<'a> {
    cli: &'a Cli,
    file: &'a FileConfig,
    seed: u64,
    prec: u32,
    sink: Sink,
}

impl Ctx<'_> {
    fn header(&self, command: &str, model: Option<&ModelDescriptor>, params: Value) -> Header {
        Header {
            command: command.into(),
            model: model.cloned(),
            params,
            seed: self.seed,
        }
    }

    fn codim_config(&self, mode: Option<Mode>) -> CodimConfig {
        let mut c = CodimConfig::with_mode(mode.or(self.file.mode).unwrap_or_default());
        if let Some(p) = self.cli.primes.clone().or_else(|| self.file.primes.clone()) {
            c.primes = p;
        }
        c
    }

    fn model(&self, args: &ModelArgs) -> Result<ModelDescriptor, CliError> {
        args.resolve(self.file)
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing --{name}")))
}

pub fn dispatch(cli: &Cli, file: &FileConfig) -> Result<(), CliError> {
    let ctx = Ctx {
        cli,
        file,
        seed: cli.seed.or(file.seed).unwrap_or(0),
        prec: cli.precision.or(file.precision).unwrap_or(DEFAULT_PREC),
        sink: Sink {
            csv: cli.csv.clone().or_else(|| file.csv.clone()),
            json: cli.json.clone().or_else(|| file.json.clone()),
        },
    };
    if !(16..=4096).contains(&ctx.prec) {
        return Err(CliError::Input(format!("precision {} outside 16..=4096", ctx.prec)));
    }
    match &cli.command {
        Command::Words { word, n_max } => words(&ctx, word, *n_max),
        Command::Algebra {
            action: AlgebraAction::Check { model, n },
        } => algebra_check(&ctx, model, *n),
        Command::Codim {
            model,
            n,
            mode,
            cocharacter,
        } => codim_cmd(&ctx, model, *n, *mode, *cocharacter),
        Command::Cocharacter { model, n, mode } => cocharacter_cmd(&ctx, model, *n, *mode),
        Command::Witness { model, t, polynomial } => witness(&ctx, model, *t, polynomial.as_ref()),
        Command::Phi {
            point,
            partition,
            gamma,
            d,
        } => phi(&ctx, point, partition, gamma, *d),
        Command::LemmaCheck { lemma, n, h, moves, a } => lemma_check(&ctx, *lemma, *n, *h, *moves, a),
        Command::Trajectory { model, n_max, mode } => trajectory_cmd(&ctx, model, *n_max, *mode),
        Command::Scan { gamma, eps } => scan(&ctx, gamma, eps),
    }
}

fn words(ctx: &Ctx, word: &Option<String>, n_max: Option<usize>) -> Result<(), CliError> {
    let spec: WordSpec = need(word.as_ref().or(ctx.file.word.as_ref()), "word")?.parse()?;
    let n_max = n_max.or(ctx.file.n_max).unwrap_or(12);
    let mut table = Table::new(vec!["n", "complexity", "balance", "height_deviation"]);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let c = spec.complexity(n)?;
        let b = spec.balance_constant(n)?;
        let dev = spec.factor_height_deviation(n)?;
        table.push(vec![n.to_string(), c.to_string(), b.to_string(), dev.to_string()]);
        rows.push(json!({ "n": n, "complexity": c, "balance": b, "height_deviation": dev.to_string() }));
    }
    let params = json!({ "word": spec.to_string(), "n_max": n_max, "slope": spec.slope().to_string() });
    let header = ctx.header("words", None, params.clone());
    ctx.sink.table(&header, &table, &json!({ "params": params, "seed": ctx.seed, "rows": rows }))
}

fn algebra_check(ctx: &Ctx, args: &ModelArgs, n: Option<usize>) -> Result<(), CliError> {
    let desc = ctx.model(args)?;
    let n = n.or(ctx.file.n).unwrap_or(4);
    let model: AlgebraModel = desc.build_for_degree(n)?;
    let left = model.verify_left_annihilator_identity();
    let ideal = model.verify_z_ideal();
    let report = json!({
        "model": desc,
        "seed": ctx.seed,
        "degree": n,
        "flavor": model.flavor().kind().to_string(),
        "positions": model.flavor().positions(),
        "basis_size": model.basis().len(),
        "z_starts": model.z_starts(),
        "left_annihilator_identity": left,
        "z_ideal_null": ideal,
    });
    ctx.sink.record(&report)?;
    // x(yz) = 0 is expected to fail only in unital models
    if !ideal || (left == model.is_unital()) {
        return Err(CliError::Invariant("structural check failed".into()));
    }
    Ok(())
}

fn check_primes(config: &CodimConfig, n: usize) -> Result<(), CliError> {
    let dim = free_dimension(n);
    if let Some(p) = config.primes.iter().find(|&&p| (p as u128) <= dim) {
        return Err(CliError::Input(format!("prime {p} does not exceed dim P_{n} = {dim}")));
    }
    Ok(())
}

fn ranks(r: &CodimReport) -> String {
    r.certificate
        .ranks
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

const CODIM_COLUMNS: [&str; 10] = [
    "n", "c_n", "l_n", "mode", "prime_ranks", "exact", "lambda", "m_lambda", "d_lambda", "phi_lambda",
];

fn push_report(table: &mut Table, r: &CodimReport, prec: u32) -> Result<(), CliError> {
    let opt = |x: Option<String>| x.unwrap_or_default();
    table.push(vec![
        r.n.to_string(),
        r.c_n.to_string(),
        opt(r.l_n.map(|x| x.to_string())),
        r.mode.to_string(),
        ranks(r),
        opt(r.certificate.exact.map(|x| x.to_string())),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
    ]);
    for m in r.multiplicities.iter().flatten() {
        let phi = repr::phi_of_partition(&m.lambda, m.lambda.height(), prec)?;
        table.push(vec![
            r.n.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            m.lambda.to_string(),
            m.m.to_string(),
            m.dim.to_string(),
            interval(&phi),
        ]);
    }
    Ok(())
}

fn codim_cmd(ctx: &Ctx, args: &ModelArgs, n: Option<usize>, mode: Option<Mode>, co: bool) -> Result<(), CliError> {
    let desc = ctx.model(args)?;
    let n = need(n.or(ctx.file.n), "n")?;
    let config = ctx.codim_config(mode);
    check_primes(&config, n)?;
    let mut table = Table::new(CODIM_COLUMNS.to_vec());
    let mut reports = Vec::new();
    for k in 1..=n {
        let r = if co {
            codim::cocharacter_of(&desc, k, &config)?
        } else {
            codim::codimension_of(&desc, k, &config)?
        };
        push_report(&mut table, &r, ctx.prec)?;
        reports.push(r);
    }
    let params = json!({ "n": n, "mode": config.mode, "primes": config.primes, "cocharacter": co });
    let header = ctx.header("codim", Some(&desc), params.clone());
    let monotone = codim::is_nondecreasing(&reports);
    let body = json!({ "model": desc, "params": params, "seed": ctx.seed, "nondecreasing": monotone, "reports": reports });
    ctx.sink.table(&header, &table, &body)
}

fn cocharacter_cmd(ctx: &Ctx, args: &ModelArgs, n: Option<usize>, mode: Option<Mode>) -> Result<(), CliError> {
    let desc = ctx.model(args)?;
    let n = need(n.or(ctx.file.n), "n")?;
    let config = ctx.codim_config(mode);
    check_primes(&config, n)?;
    let r = codim::cocharacter_of(&desc, n, &config)?;
    let params_core = desc.params()?;
    let shapes = codim::verify_shape_bounds(&r, desc.d);
    let colength = codim::verify_colength_bound(&r, &params_core);
    let mut table = Table::new(CODIM_COLUMNS.to_vec());
    push_report(&mut table, &r, ctx.prec)?;
    let params = json!({ "n": n, "mode": config.mode, "primes": config.primes });
    let header = ctx.header("cocharacter", Some(&desc), params.clone());
    let body = json!({
        "model": desc, "params": params, "seed": ctx.seed, "report": r,
        "shape_bounds": shapes, "colength_bound": colength,
    });
    ctx.sink.table(&header, &table, &body)?;
    if shapes != Some(true) || colength != Some(true) {
        return Err(CliError::Invariant("shape or colength bound violated".into()));
    }
    Ok(())
}

fn witness(ctx: &Ctx, args: &ModelArgs, t: Option<usize>, poly: Option<&std::path::PathBuf>) -> Result<(), CliError> {
    let desc = ctx.model(args)?;
    let t = t.or(ctx.file.t).unwrap_or(1);
    let params = desc.params()?;
    let w = build_witness(&params, t)?;
    let model = w.windowed_model()?;
    let coefficient = w.image_coefficient(&model)?;
    let wp = asymptotics::witness_partition(&params, t)?;
    if let Some(path) = poly {
        let text = serde_json::to_string_pretty(&w.polynomial).expect("polynomial serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let sign = if coefficient > 0 { "+" } else { "-" };
    let report = json!({
        "model": desc,
        "seed": ctx.seed,
        "t": t,
        "degree": w.degree(),
        "terms": w.polynomial.len(),
        "image": w.expected_image(&model).to_string(),
        "coefficient": coefficient.to_string(),
        "sign": sign,
        "symmetrization_factor": w.symmetrization_factor().to_string(),
        "alternation_sets": w.alternation_sets,
        "partition": wp.lambda.to_string(),
        "beta": wp.beta.to_string(),
    });
    ctx.sink.record(&report)
}

fn parse_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

fn phi(
    ctx: &Ctx,
    point: &Option<String>,
    partition: &Option<String>,
    gamma: &Option<String>,
    d: Option<u32>,
) -> Result<(), CliError> {
    let (input, value) = if let Some(p) = point {
        let pt = parse_list(p)?;
        let shown: Vec<String> = pt.iter().map(|x| x.to_string()).collect();
        (json!({ "point": shown }), repr::phi(&pt, ctx.prec)?)
    } else if let Some(p) = partition {
        let lambda: Partition = p.parse()?;
        let v = repr::phi_of_partition(&lambda, lambda.height(), ctx.prec)?;
        (json!({ "partition": lambda.to_string() }), v)
    } else if let Some(g) = gamma {
        let g = parse_rational(g)?;
        let d = need(d, "d")?;
        (json!({ "gamma": g.to_string(), "d": d }), repr::phi_d(&g, d, ctx.prec)?)
    } else {
        return Err(CliError::Input("give --point, --partition or --gamma with --d".into()));
    };
    ctx.sink.record(&json!({
        "input": input,
        "seed": ctx.seed,
        "value": interval(&value),
        "lo": float(value.lo()),
        "hi": float(value.hi()),
    }))
}

fn lemma_check(
    ctx: &Ctx,
    lemma: Lemma,
    n: Option<usize>,
    h: Option<usize>,
    moves: Option<usize>,
    a: &Option<String>,
) -> Result<(), CliError> {
    let (report, pass) = match lemma {
        Lemma::L1 => {
            let n = n.or(ctx.file.n).unwrap_or(100);
            let h = h.or(ctx.file.h).unwrap_or(3);
            let parts = Partition::with_max_height(n, h);
            let mut failures = Vec::new();
            let mut min_lower: Option<Float> = None;
            let mut min_upper: Option<Float> = None;
            for l in &parts {
                let c = repr::check_l1(l, h, ctx.prec)?;
                if !c.holds {
                    failures.push(l.to_string());
                }
                let lo = c.lower_margin.lo().clone();
                let up = c.upper_margin.lo().clone();
                if min_lower.as_ref().map_or(true, |x| lo < *x) {
                    min_lower = Some(lo);
                }
                if min_upper.as_ref().map_or(true, |x| up < *x) {
                    min_upper = Some(up);
                }
            }
            let pass = failures.is_empty();
            (
                json!({
                    "lemma": "L1", "n": n, "h": h, "partitions": parts.len(),
                    "hypothesis_met": n >= 100,
                    "min_lower_margin": min_lower.as_ref().map(float),
                    "min_upper_margin": min_upper.as_ref().map(float),
                    "failures": failures, "pass": pass,
                }),
                pass,
            )
        }
        Lemma::L2 => {
            let moves = moves.or(ctx.file.moves).unwrap_or(1000);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let (mut done, mut proven, mut violations) = (0usize, 0usize, Vec::new());
            while done < moves {
                let h = rng.gen_range(2..8);
                let mut parts: Vec<u32> = (0..h).map(|_| rng.gen_range(1..30)).collect();
                parts.sort_unstable_by(|a, b| b.cmp(a));
                let lambda = Partition::new(parts)?;
                let i = rng.gen_range(1..=lambda.height());
                let j = rng.gen_range(i + 1..=lambda.height() + 1);
                let Ok(c) = repr::check_push_down(&lambda, i, j, ctx.prec) else {
                    continue;
                };
                if c.violated {
                    violations.push(format!("{} -> {}", c.lambda, c.mu));
                }
                proven += usize::from(c.proven);
                done += 1;
            }
            let pass = violations.is_empty();
            (
                json!({ "lemma": "L2", "moves": moves, "proven": proven, "violations": violations, "pass": pass }),
                pass,
            )
        }
        Lemma::L3 => {
            let a_q = parse_rational(need(a.as_ref().or(ctx.file.a.as_ref()), "a")?)?;
            let a_f = Float::with_val(ctx.prec, &a_q);
            let r = repr::maximize_added_row(&a_f)?;
            let t_star = Rational::from(&a_q / Rational::from(&a_q + 1u32));
            let tol = Float::with_val(ctx.prec, 1e-9);
            let pass = r.discrepancy() <= tol;
            (
                json!({
                    "lemma": "L3", "a": a_q.to_string(), "t_star": t_star.to_string(),
                    "max": Rational::from(&a_q + 1u32).to_string(),
                    "numeric_t": float(&r.numeric_t), "numeric_max": float(&r.numeric_value),
                    "discrepancy": float(&r.discrepancy()), "pass": pass,
                }),
                pass,
            )
        }
    };
    let mut report = report;
    report["seed"] = json!(ctx.seed);
    ctx.sink.record(&report)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Invariant("lemma check failed".into()))
    }
}

fn trajectory_cmd(ctx: &Ctx, args: &ModelArgs, n_max: Option<usize>, mode: Option<Mode>) -> Result<(), CliError> {
    let desc = ctx.model(args)?;
    let n_max = need(n_max.or(ctx.file.n_max), "n-max")?;
    let config = ctx.codim_config(mode);
    check_primes(&config, n_max)?;
    let t = asymptotics::trajectory(&desc, n_max, &config, ctx.prec)?;
    let mut table = Table::new(vec!["n", "c_n", "root", "lower", "upper", "target", "unital_target"]);
    let mut rows = Vec::new();
    for r in &t.rows {
        let lower = r.lower.as_ref().map(|x| x.to_string()).unwrap_or_default();
        table.push(vec![
            r.n.to_string(),
            r.c_n.to_string(),
            interval(&r.root),
            lower.clone(),
            r.upper.to_string(),
            interval(&t.target.value),
            interval(&t.target.unital_value),
        ]);
        rows.push(json!({
            "n": r.n, "c_n": r.c_n, "root": interval(&r.root), "lower": lower,
            "upper": r.upper.to_string(),
            "upper_kind": match r.upper_kind { UpperKind::Colength => "colength", UpperKind::Dimension => "dimension" },
        }));
    }
    let params = json!({ "n_max": n_max, "mode": config.mode, "primes": config.primes, "precision": ctx.prec });
    let header = ctx.header("trajectory", Some(&desc), params.clone());
    let body = json!({
        "model": desc, "params": params, "seed": ctx.seed, "rows": rows,
        "target": interval(&t.target.value), "unital_target": interval(&t.target.unital_value),
        "nondecreasing": t.monotone, "sandwich": t.sandwich_holds(),
    });
    ctx.sink.table(&header, &table, &body)?;
    if !t.sandwich_holds() {
        return Err(CliError::Invariant("lower <= c_n <= upper fails".into()));
    }
    Ok(())
}

fn scan(ctx: &Ctx, gamma: &Option<Vec<String>>, eps: &Option<String>) -> Result<(), CliError> {
    let gammas: Vec<Rational> = need(gamma.clone().or_else(|| ctx.file.gamma.clone()), "gamma")?
        .iter()
        .map(|g| parse_rational(g))
        .collect::<Result<_, _>>()?;
    let eps = parse_rational(eps.as_deref().or(ctx.file.eps.as_deref()).unwrap_or("1e-4"))?;
    let outcomes = asymptotics::density_scan_many(&gammas, &eps, ctx.prec);
    let mut table = Table::new(vec!["gamma", "outcome", "m", "d", "q", "word", "achieved", "error", "note"]);
    let mut rows = Vec::new();
    for (g, outcome) in gammas.iter().zip(outcomes) {
        match outcome? {
            ScanOutcome::Found(s) => {
                table.push(vec![
                    g.to_string(),
                    "found".into(),
                    s.m.to_string(),
                    s.d.to_string(),
                    s.q.to_string(),
                    s.word.to_string(),
                    interval(&s.achieved),
                    float(&s.error),
                    String::new(),
                ]);
                rows.push(json!({
                    "gamma": g.to_string(), "outcome": "found", "m": s.m, "d": s.d,
                    "q": s.q.to_string(), "word": s.word, "achieved": interval(&s.achieved),
                    "error": float(&s.error),
                }));
            }
            ScanOutcome::Boundary { note, .. } => {
                let mut row = vec![g.to_string(), "boundary".into()];
                row.extend(std::iter::repeat(String::new()).take(6));
                row.push(note.clone());
                table.push(row);
                rows.push(json!({ "gamma": g.to_string(), "outcome": "boundary", "note": note }));
            }
        }
    }
    let params = json!({ "gamma": gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "eps": eps.to_string(), "precision": ctx.prec });
    let header = ctx.header("scan", None, params.clone());
    ctx.sink.table(&header, &table, &json!({ "params": params, "seed": ctx.seed, "rows": rows }))
}
