use crate::output::{config_hash, write_artifacts};
use crate::*;
use anyhow::{anyhow, bail, Context, Result};
use pgcone::cone::{self, cone_constraints, PseudoCodeword};
use pgcone::construct::{self, ConstructionTrace, Ex5Switch};
use pgcone::decode::{self, SweepMode};
use pgcone::effect::{self, Cor8};
use pgcone::plane::{self, ParityCheck, Plane};
use pgcone::rational::{self, Rational};
use pgcone::rays::{self, Budget, InsertionOrder, RaySet};
use pgcone::weights::{self, BoundReport, WeightKind};
use serde_json::{json, Value};
use std::fs::File;
use std::io::BufReader;
use std::sync::OnceLock;
use std::time::Duration;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn r(x: &Rational) -> String {
    rational::to_string(x)
}

fn dec(x: &Rational) -> String {
    rational::to_decimal(x, 4)
}

static MATRIX_ID: OnceLock<String> = OnceLock::new();

fn note_matrix(id: String) {
    let _ = MATRIX_ID.set(id);
}

/// Prints the human summary, or `value` with a `provenance` object added.
fn emit(cli: &Cli, human: String, mut value: Value) {
    if cli.json {
        let prov = json!({
            "tool": "pgcone",
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": config_hash(cli),
            "matrix_id": MATRIX_ID.get(),
        });
        value.as_object_mut().expect("results are JSON objects").insert("provenance".into(), prov);
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        print!("{human}");
    }
}

fn build(p: &PlaneArgs) -> Result<Plane> {
    let plane = plane::build_plane_with(p.q, p.small_poly, p.big_poly).map_err(|e| match e {
        plane::PlaneError::UnsupportedQ(_) => usage(e.to_string()),
        _ => anyhow::Error::from(e),
    })?;
    note_matrix(plane.incidence_matrix().matrix_id());
    Ok(plane)
}

fn plane_args(m: &MatrixArgs) -> Option<PlaneArgs> {
    m.q.map(|q| PlaneArgs { q, small_poly: m.small_poly, big_poly: m.big_poly })
}

/// Parity-check matrix and, when built from `--q`, the plane order.
fn load_matrix(m: &MatrixArgs) -> Result<(ParityCheck, Option<u64>)> {
    match (&m.alist, plane_args(m)) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let h = ParityCheck::from_alist(&text)?;
            note_matrix(h.matrix_id());
            Ok((h, None))
        }
        (None, Some(p)) => Ok((build(&p)?.incidence_matrix(), Some(p.q))),
        (None, None) => Err(usage("one of --q or --alist is required")),
    }
}

fn parse_vector(v: &VectorArg) -> Result<Vec<Rational>> {
    v.vector
        .split(',')
        .map(|s| rational::parse(s).ok_or_else(|| usage(format!("bad vector entry {:?}", s.trim()))))
        .collect()
}

fn parse_rational(s: &str, what: &str) -> Result<Rational> {
    rational::parse(s).ok_or_else(|| usage(format!("bad {what} {s:?}")))
}

fn pcw(v: &VectorArg) -> Result<PseudoCodeword> {
    Ok(PseudoCodeword::new(parse_vector(v)?)?)
}

fn budget(b: &BudgetArgs) -> Result<(Budget, InsertionOrder)> {
    let max_time = match b.max_seconds {
        Some(s) if !(s.is_finite() && s >= 0.0) => return Err(usage("--max-seconds must be a nonnegative number")),
        s => s.map(Duration::from_secs_f64),
    };
    let order = b.seed.map_or(InsertionOrder::Lexicographic, InsertionOrder::Shuffled);
    Ok((Budget { max_time, max_rays: b.max_rays }, order))
}

fn read_rays(path: &std::path::Path) -> Result<RaySet> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let set = RaySet::read_jsonl(BufReader::new(f))?;
    note_matrix(set.h_matrix_id.clone());
    Ok(set)
}

fn kind(k: Kind) -> WeightKind {
    match k {
        Kind::Awgnc => WeightKind::Awgnc,
        Kind::Bsc => WeightKind::Bsc,
        Kind::Bec => WeightKind::Bec,
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Awgnc => "awgnc",
        Kind::Bsc => "bsc",
        Kind::Bec => "bec",
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Plane(c) => plane_cmd(cli, c),
        Command::Codewords(CodewordsCmd::Min { plane, w_max, limit }) => codewords(cli, plane, *w_max, *limit),
        Command::Cone(c) => cone_cmd(cli, c),
        Command::Weights(c) => weights_cmd(cli, c),
        Command::Rays(c) => rays_cmd(cli, c),
        Command::Decode(c) => decode_cmd(cli, c),
        Command::Effective(c) => effective_cmd(cli, c),
        Command::Construct(c) => construct_cmd(cli, c),
    }
}

fn plane_cmd(cli: &Cli, c: &PlaneCmd) -> Result<()> {
    match c {
        PlaneCmd::Build(p) => {
            let plane = build(p)?;
            let h = plane.incidence_matrix();
            let id = h.matrix_id();
            let stem = format!("pg2_q{}", p.q);
            let meta = json!({
                "q": p.q,
                "n": plane.n(),
                "difference_set": plane.difference_set(),
                "matrix_id": id,
                "gf2_rank": plane::gf2_rank(&h),
            });
            write_artifacts(
                cli,
                &stem,
                Some(&id),
                &[
                    (format!("{stem}.alist"), h.to_alist()),
                    (format!("{stem}.json"), serde_json::to_string_pretty(&meta)? + "\n"),
                ],
            )?;
            let human = format!(
                "PG(2,{}): n = {}, difference set {:?}, GF(2) rank {}, matrix id {}\n",
                p.q,
                plane.n(),
                plane.difference_set(),
                meta["gf2_rank"],
                id
            );
            emit(cli, human, meta);
            Ok(())
        }
        PlaneCmd::Check(p) => {
            let plane = build(p)?;
            let axioms = plane.verify_axioms();
            let h = plane.incidence_matrix();
            let pds = plane.is_perfect_difference_set();
            let circ = h.is_circulant();
            let regular = h.max_row_weight() == p.q as usize + 1 && h.max_col_weight() == p.q as usize + 1;
            let ok = axioms.passed && pds && circ && regular;
            let value = json!({
                "q": p.q,
                "axioms": axioms,
                "perfect_difference_set": pds,
                "circulant": circ,
                "regular": regular,
                "passed": ok,
            });
            let human = format!(
                "axioms: {}\nperfect difference set: {pds}\ncirculant: {circ}\n(q+1)-regular: {regular}\n",
                if axioms.passed { "ok".to_string() } else { format!("{:?}", axioms.violation) }
            );
            emit(cli, human, value);
            if ok {
                Ok(())
            } else {
                bail!("PG(2,{}) failed its checks", p.q)
            }
        }
        PlaneCmd::Export { plane, format } => {
            let pl = build(plane)?;
            let h = pl.incidence_matrix();
            match format {
                ExportFormat::Alist => print!("{}", h.to_alist()),
                ExportFormat::Dense => print!("{}", h.to_dense()),
                ExportFormat::Json => println!("{}", serde_json::to_string_pretty(&pl)?),
            }
            Ok(())
        }
    }
}

fn codewords(cli: &Cli, p: &PlaneArgs, w_max: Option<usize>, limit: usize) -> Result<()> {
    let plane = build(p)?;
    let h = plane.incidence_matrix();
    let min = plane.q() + 2;
    let w_max = w_max.unwrap_or(min);
    let (supports, exhaustive) = match plane::min_weight_codewords(&h, w_max) {
        Ok(cws) => (cws.iter().map(|c| c.support()).collect::<Vec<_>>(), true),
        Err(e) if w_max == min => {
            eprintln!("note: {e}; listing hyperovals instead");
            (plane.hyperovals(Some(limit)), false)
        }
        Err(e) => return Err(e.into()),
    };
    let stem = format!("codewords_q{}", p.q);
    let body: String =
        supports.iter().map(|s| format!("{}\n", serde_json::to_string(s).expect("serializable"))).collect();
    write_artifacts(cli, &stem, Some(&h.matrix_id()), &[(format!("{stem}.jsonl"), body)])?;
    let mut by_weight = std::collections::BTreeMap::<usize, usize>::new();
    supports.iter().for_each(|s| *by_weight.entry(s.len()).or_default() += 1);
    let human = by_weight.iter().map(|(w, c)| format!("weight {w}: {c}\n")).collect::<String>()
        + if exhaustive { "" } else { "(hyperovals only, possibly truncated)\n" };
    emit(cli, human, json!({ "exhaustive": exhaustive, "counts": by_weight }));
    Ok(())
}

fn cone_cmd(cli: &Cli, c: &ConeCmd) -> Result<()> {
    match c {
        ConeCmd::Member { matrix, vector } => {
            let (h, _) = load_matrix(matrix)?;
            let v = parse_vector(vector)?;
            if v.len() != h.n_cols() {
                bail!("vector has {} entries, matrix has {} columns", v.len(), h.n_cols());
            }
            let cs = cone_constraints(&h);
            // evaluated on the raw entries so negative inputs are reported too
            let first = cs.iter().position(|k| k.eval(&v) < Rational::from_integer(0.into()));
            let kind = first.map(|k| cs.get(k).kind);
            let human = match kind {
                None => "member: yes\n".to_string(),
                Some(k) => format!("member: no (constraint {} {:?})\n", first.unwrap(), k),
            };
            emit(cli, human, json!({ "member": first.is_none(), "first_violated": first, "violated_kind": kind }));
            Ok(())
        }
        ConeCmd::Minimal { matrix, vector } => {
            let (h, _) = load_matrix(matrix)?;
            let w = pcw(vector)?;
            let m = cone::is_member(&h, &w)?;
            if !m.member {
                bail!("vector is not in the cone (constraint {:?})", m.violated_kind.expect("violated"));
            }
            let rank = cone::active_rank(&h, &w)?;
            let minimal = cone::is_minimal(&h, &w)?;
            let human =
                format!("minimal: {}\nactive rank: {rank} of {}\n", if minimal { "yes" } else { "no" }, h.n_cols() - 1);
            emit(cli, human, json!({ "minimal": minimal, "active_rank": rank, "n": h.n_cols() }));
            Ok(())
        }
        ConeCmd::Type { vector } => {
            let t = cone::type_of(&pcw(vector)?);
            let counts: Vec<(String, usize)> =
                std::iter::once(("0".to_string(), t.t0())).chain(t.positive().map(|(v, c)| (r(v), c))).collect();
            let human = counts.iter().map(|(v, c)| format!("t[{v}] = {c}\n")).collect();
            emit(cli, human, json!({ "n": t.n(), "counts": counts }));
            Ok(())
        }
    }
}

fn bound_json(b: &BoundReport) -> Value {
    json!({
        "name": b.name,
        "value": r(&b.value),
        "params": b.params.iter().map(|(k, v)| (k.clone(), Value::from(r(v)))).collect::<serde_json::Map<_, _>>(),
        "applicable": b.applicable,
        "reason": b.reason,
        "equality": b.equality,
    })
}

fn bound_line(b: &BoundReport) -> String {
    let params: Vec<String> = b.params.iter().map(|(k, v)| format!("{k}={}", r(v))).collect();
    let status = match (&b.reason, b.applicable) {
        (_, true) => "applies".to_string(),
        (Some(why), false) => format!("n/a: {why}"),
        (None, false) => "n/a".to_string(),
    };
    format!(
        "{:<12} {:>10} ({:>8})  [{}]  {status}\n",
        format!("{:?}", b.name),
        r(&b.value),
        dec(&b.value),
        params.join(" ")
    )
}

fn weights_cmd(cli: &Cli, c: &WeightsCmd) -> Result<()> {
    match c {
        WeightsCmd::Compute { vector } => {
            let w = pcw(vector)?;
            let a = weights::awgnc_pw(&w);
            let b = weights::bsc_pw(&w)?;
            let e = weights::bec_pw(&w);
            let human = format!("awgnc: {} ({})\nbsc: {b}\nbec: {e}\n", r(&a), dec(&a));
            emit(cli, human, json!({ "awgnc": r(&a), "bsc": b, "bec": e }));
            Ok(())
        }
        WeightsCmd::Bounds { q, vector, eta } => {
            let w = pcw(vector)?;
            if w.is_zero() {
                bail!("the zero vector has no pseudo-weight");
            }
            let mut reports = weights::all_bounds(&w, *q).map_err(|e| match e {
                weights::WeightError::UnsupportedQ(_) => usage(e.to_string()),
                _ => e.into(),
            })?;
            let t = cone::type_of(&w);
            for s in eta {
                let e = parse_rational(s, "eta")?;
                reports.push(weights::bound_lemma2(&w, &e)?);
                reports.push(weights::bound_cor3(&t, &e)?);
            }
            let a = weights::awgnc_pw(&w);
            let human = format!("awgnc pseudo-weight: {} ({})\n", r(&a), dec(&a))
                + &reports.iter().map(bound_line).collect::<String>();
            emit(cli, human, json!({ "awgnc": r(&a), "bounds": reports.iter().map(bound_json).collect::<Vec<_>>() }));
            Ok(())
        }
    }
}

fn enumerate(h: &ParityCheck, b: &BudgetArgs) -> Result<rays::Enumeration> {
    let (budget, order) = budget(b)?;
    let e = rays::enumerate_rays(h, budget, order)?;
    if let Some(why) = &e.stop_reason {
        eprintln!("note: budget reached ({why}); the ray set is a certified partial set");
    }
    Ok(e)
}

fn rays_cmd(cli: &Cli, c: &RaysCmd) -> Result<()> {
    match c {
        RaysCmd::Enumerate { matrix, budget } => {
            let (h, q) = load_matrix(matrix)?;
            let e = enumerate(&h, budget)?;
            let stem = match q {
                Some(q) => format!("rays_q{q}"),
                None => format!("rays_{}", h.matrix_id()),
            };
            let mut body = Vec::new();
            e.set.write_jsonl(&mut body)?;
            write_artifacts(
                cli,
                &stem,
                Some(&e.set.h_matrix_id),
                &[(format!("{stem}.jsonl"), String::from_utf8(body)?)],
            )?;
            let min = rays::min_weight(&e.set, WeightKind::Awgnc);
            let s = &e.stats;
            let human = format!(
                "rays: {} ({})\ninserted constraints: {}\npeak rays: {}\npairs tested: {}, adjacent: {}\nelapsed: {:.3} s\nmin awgnc weight: {}\n",
                e.set.len(),
                if e.set.complete { "complete" } else { "partial" },
                s.inserted,
                s.peak_rays,
                s.pairs_tested,
                s.adjacent_pairs,
                s.elapsed.as_secs_f64(),
                min.as_ref().map_or("-".into(), |m| format!("{} ({})", r(m), dec(m))),
            );
            emit(
                cli,
                human,
                json!({
                    "count": e.set.len(),
                    "complete": e.set.complete,
                    "stop_reason": e.stop_reason,
                    "min_awgnc": min.as_ref().map(r),
                    "peak_rays": s.peak_rays,
                    "elapsed_seconds": s.elapsed.as_secs_f64(),
                }),
            );
            Ok(())
        }
        RaysCmd::Histogram { rays: path, q, budget, kind: k, bin_width } => {
            let width = parse_rational(bin_width, "bin width")?;
            if width <= Rational::from_integer(0.into()) {
                return Err(usage("--bin-width must be positive"));
            }
            let set = match (path, q) {
                (Some(p), _) => read_rays(p)?,
                (None, Some(q)) => {
                    let h = build(&PlaneArgs { q: *q, small_poly: None, big_poly: None })?.incidence_matrix();
                    enumerate(&h, budget)?.set
                }
                (None, None) => return Err(usage("one of --rays or --q is required")),
            };
            let bins = rays::histogram(&set, kind(*k), &width);
            let csv = rays::histogram_csv(&bins);
            let stem = format!("histogram_{}", kind_name(*k));
            write_artifacts(cli, &stem, Some(&set.h_matrix_id), &[(format!("{stem}.csv"), csv.clone())])?;
            let value = json!({
                "complete": set.complete,
                "bins": bins.iter().map(|b| json!({"low": r(&b.low), "high": r(&b.high), "count": b.count})).collect::<Vec<_>>(),
            });
            emit(cli, csv, value);
            Ok(())
        }
    }
}

fn flips_setup(f: &FlipArgs) -> Result<(ParityCheck, decode::Llr)> {
    let h = build(&PlaneArgs { q: f.q, small_poly: None, big_poly: None })?.incidence_matrix();
    let l = parse_rational(&f.l, "reliability")?;
    if l <= Rational::from_integer(0.into()) {
        return Err(usage("--l must be positive"));
    }
    if let Some(&i) = f.flips.iter().find(|&&i| i >= h.n_cols()) {
        return Err(usage(format!("flip position {i} out of range 0..{}", h.n_cols())));
    }
    let llr = decode::llr_from_flips(h.n_cols(), &f.flips, &l)?;
    Ok((h, llr))
}

fn decode_cmd(cli: &Cli, c: &DecodeCmd) -> Result<()> {
    match c {
        DecodeCmd::ZeroOpt(f) => {
            let (h, llr) = flips_setup(f)?;
            let out = decode::zero_optimal(&h, &llr)?;
            let cert = out.certificate.as_ref().map(|w| w.to_json());
            let human = format!(
                "status: {:?}\nmin objective on the mass-one slice: {} ({})\n{}",
                out.status,
                r(&out.objective),
                dec(&out.objective),
                cert.as_ref().map_or(String::new(), |c| format!("certificate: {:?}\n", c.canonical)),
            );
            emit(cli, human, json!({ "status": out.status, "objective": r(&out.objective), "certificate": cert }));
            Ok(())
        }
        DecodeCmd::Feldman(f) => {
            let (h, llr) = flips_setup(f)?;
            let out = decode::feldman_lp_decode(&h, &llr)?;
            let sol: Vec<String> = out.solution.iter().map(r).collect();
            let human = format!(
                "objective: {} ({})\nintegral: {}\nzero optimal: {}\nsolution: [{}]\n",
                r(&out.objective),
                dec(&out.objective),
                out.integral,
                out.zero_optimal(),
                sol.join(", ")
            );
            emit(
                cli,
                human,
                json!({ "objective": r(&out.objective), "integral": out.integral, "zero_optimal": out.zero_optimal(), "solution": sol }),
            );
            Ok(())
        }
        DecodeCmd::Sweep { q, e, l, samples, seed } => {
            let h = build(&PlaneArgs { q: *q, small_poly: None, big_poly: None })?.incidence_matrix();
            let l = parse_rational(l, "reliability")?;
            let mode = samples.map_or(SweepMode::Exhaustive, |count| SweepMode::Sampled { count, seed: *seed });
            let rows = e.iter().map(|&e| decode::bsc_sweep(&h, e, &l, mode)).collect::<Result<Vec<_>, _>>()?;
            let csv = decode::sweep_csv(&rows);
            let stem = format!("sweep_q{q}");
            write_artifacts(cli, &stem, Some(&h.matrix_id()), &[(format!("{stem}.csv"), csv.clone())])?;
            let human = rows
                .iter()
                .map(|s| {
                    format!(
                        "e={}: patterns={} corrected={} ties={} failures={}\n",
                        s.e, s.patterns, s.corrected, s.ties, s.failures
                    )
                })
                .collect();
            emit(cli, human, json!({ "rows": rows }));
            Ok(())
        }
    }
}

fn effect_set(a: &EffectArgs) -> Result<(RaySet, Option<u64>)> {
    match (&a.rays, a.q) {
        (Some(p), q) => Ok((read_rays(p)?, q)),
        (None, Some(q)) => {
            let h = build(&PlaneArgs { q, small_poly: None, big_poly: None })?.incidence_matrix();
            Ok((rays::enumerate_rays(&h, Budget::unlimited(), InsertionOrder::Lexicographic)?.set, Some(q)))
        }
        (None, None) => Err(usage("one of --rays or --q is required")),
    }
}

fn effective_cmd(cli: &Cli, c: &EffectiveCmd) -> Result<()> {
    let (a, name) = match c {
        EffectiveCmd::Awgnc(a) => (a, "awgnc"),
        EffectiveCmd::Bsc(a) => (a, "bsc"),
    };
    let (set, q) = effect_set(a)?;
    let reports = match c {
        EffectiveCmd::Awgnc(_) => {
            (0..set.len()).map(|k| effect::awgnc_first_kind(&set, k)).collect::<Result<Vec<_>, _>>()?
        }
        EffectiveCmd::Bsc(_) => effect::bsc_effectiveness_all(&set)?,
    };
    let screens: Vec<Option<Cor8>> = match (c, q) {
        (EffectiveCmd::Bsc(_), Some(q)) => {
            set.rays.iter().map(|w| effect::cor8_screen(w, q).map(Some)).collect::<Result<_, _>>()?
        }
        _ => vec![None; set.len()],
    };
    let body: String = reports.iter().map(|rep| rep.to_json_line(&set) + "\n").collect();
    let stem = format!("effective_{name}");
    write_artifacts(cli, &stem, Some(&set.h_matrix_id), &[(format!("{stem}.jsonl"), body)])?;
    let mut human = String::new();
    for (rep, screen) in reports.iter().zip(&screens) {
        let w = &set.rays[rep.ray];
        human += &format!("{:>4} {:?} {:?}", rep.ray, w.canonical_i64(), rep.kind);
        if let Some(s) = screen {
            human += &format!(" [{s:?}]");
        }
        human.push('\n');
    }
    let rows: Vec<Value> =
        reports.iter().zip(&screens).map(|(rep, s)| json!({ "ray": rep.ray, "kind": rep.kind, "screen": s })).collect();
    let value = json!({ "complete": set.complete, "rays": rows });
    emit(cli, human, value);
    Ok(())
}

fn trace_summary(t: &ConstructionTrace) -> String {
    let mut s = format!("q = {}, n = {}\n", t.q, t.n);
    s += &format!("generators: {:?} and {:?} (overlap {})\n", t.generators[0], t.generators[1], t.overlap);
    s += &format!("switched: {:?}\n", t.switched);
    for st in &t.stages {
        s += &format!("stage {:<9} active rank {}\n", st.label, st.active_rank);
    }
    s += &format!("minimal: {}\n", if t.minimal { "yes" } else { "no" });
    s += &format!("type: {:?}\n", t.type_counts);
    let a = rational::parse(&t.awgnc_pw).expect("rendered rational");
    let b = rational::parse(&t.thm5_bound).expect("rendered rational");
    s += &format!("awgnc pseudo-weight: {} ({})\n", t.awgnc_pw, dec(&a));
    s += &format!("bsc: {}, bec: {}\n", t.bsc_pw, t.bec_pw);
    s += &format!("bound 4(q+2)/3: {} ({})\n", t.thm5_bound, dec(&b));
    for (k, v) in &t.notes {
        s += &format!("{k}: {v}\n");
    }
    s
}

fn census(cli: &Cli, plane: &Plane, stem: &str, pair_limit: usize, accept: &construct::SwitchPredicate) -> Result<()> {
    let c = construct::switch_census(plane, pair_limit, accept);
    let value = json!({ "q": plane.q(), "pairs": c.pairs, "candidates": c.candidates, "certified": c.certified });
    let id = plane.incidence_matrix().matrix_id();
    let body = serde_json::to_string_pretty(&value)? + "\n";
    write_artifacts(cli, &format!("{stem}_census"), Some(&id), &[(format!("{stem}_census.json"), body)])?;
    let human = format!("pairs: {}\ncandidates: {}\ncertified minimal: {}\n", c.pairs, c.candidates, c.certified);
    emit(cli, human, value);
    Ok(())
}

fn construct_cmd(cli: &Cli, c: &ConstructCmd) -> Result<()> {
    let (trace, stem, plane) = match c {
        ConstructCmd::Ex3 { plane: p, count_all, pair_limit } => {
            let plane = build(p)?;
            let stem = format!("ex3_q{}", p.q);
            if *count_all {
                return census(cli, &plane, &stem, pair_limit.unwrap_or(usize::MAX), &|_, _| true);
            }
            (construct::ex3_minimal_pcw(&plane)?, stem, plane)
        }
        ConstructCmd::Ex5 { pair_only } => {
            let switch = if *pair_only { Ex5Switch::Pair } else { Ex5Switch::PairAndIntersection };
            let plane = build(&PlaneArgs { q: 4, small_poly: None, big_poly: None })?;
            (construct::ex5_procedure(&plane, switch)?, "ex5_q4".to_string(), plane)
        }
        ConstructCmd::Conjecture { plane: p, pair_limit, count_all } => {
            if *pair_limit == 0 {
                return Err(usage("--pair-limit must be positive"));
            }
            let plane = build(p)?;
            let stem = format!("conjecture_q{}", p.q);
            if *count_all {
                return census(cli, &plane, &stem, *pair_limit, &construct::simplex_predicate);
            }
            let t = construct::conjectured_family_search(&plane, *pair_limit, &construct::simplex_predicate)?;
            (t, stem, plane)
        }
    };
    let id = Some(plane.incidence_matrix().matrix_id());
    write_artifacts(cli, &stem, id.as_deref(), &[(format!("{stem}.json"), trace.to_json() + "\n")])?;
    let value: Value = serde_json::from_str(&trace.to_json())?;
    emit(cli, trace_summary(&trace), value);
    if !trace.minimal {
        return Err(anyhow!("construction did not produce a minimal pseudo-codeword"));
    }
    Ok(())
}
