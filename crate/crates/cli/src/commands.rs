use std::fs::File;

use anyhow::Context;
use num_bigint::BigUint;
use serde_json::{json, Value};

use drinfeld::bounds::{dd_log_degree_bound, irreducibility_threshold, BoundParams, BoundReport};
use drinfeld::drinfeld::{quotient_by_poly, Isogeny};
use drinfeld::factor::is_irreducible;
use drinfeld::heights::{format_rational, heights, heights_from_data, read_height_table, HeightReport};
use drinfeld::modfile::{render_module_file, ModuleSpec};
use drinfeld::parse::{parse_poly_a, parse_twisted};
use drinfeld::polya::{format_poly, monic_irreducibles};
use drinfeld::probe::{frobenius_data, verdict_from_data, FrobeniusData, ProbeConfig, Verdict};
use drinfeld::{Error, FqContext, PolyA};

use crate::output::{columns, csv_doc, json_doc, table_doc};
use crate::{load_module, parse_degree_list, BoundArgs, Cli, Command, Format, IsogenyArgs, ModuleArgs, PhiAtArgs, ProbeArgs};

pub fn run(cli: &Cli) -> anyhow::Result<String> {
    match &cli.command {
        Command::Heights(args) => cmd_heights(cli, args),
        Command::Bound(args) => cmd_bound(cli, args),
        Command::Probe(args) => cmd_probe(cli, args),
        Command::PhiAt(args) => cmd_phi_at(cli, args),
        Command::CheckIsogeny(args) => cmd_check_isogeny(cli, args),
    }
}

fn module_text(spec: &ModuleSpec) -> Option<String> {
    spec.module.as_ref().map(|m| format!("phi_T = {}", m.format()))
}

fn height_report(args: &ModuleArgs) -> anyhow::Result<(ModuleSpec, HeightReport)> {
    let spec = load_module(&args.module)?;
    let report = if let Some(path) = &args.height_table {
        let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
        let data = read_height_table(file, spec.rank)
            .with_context(|| format!("in height table {}", path.display()))?;
        heights_from_data(spec.fq.q(), spec.rank, spec.d, &data, true)?
    } else if spec.d > 1 {
        return Err(Error::InvalidParams(format!(
            "d = {} needs valuation data: pass --height-table",
            spec.d
        ))
        .into());
    } else {
        heights(spec.module()?)?
    };
    Ok((spec, report))
}

fn valuations_cell(v: &[Option<i64>]) -> String {
    let cells: Vec<String> = v
        .iter()
        .map(|x| x.map_or_else(|| "inf".to_string(), |n| n.to_string()))
        .collect();
    format!("[{}]", cells.join(", "))
}

fn rationals_cell(v: &[num_rational::BigRational]) -> String {
    let cells: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", cells.join(", "))
}

fn cmd_heights(cli: &Cli, args: &ModuleArgs) -> anyhow::Result<String> {
    let (spec, rep) = height_report(args)?;
    let header = ["place", "deg", "n_nu", "valuations", "naive", "graded", "graded_unclamped"];
    let mut rows: Vec<Vec<String>> = rep
        .places
        .iter()
        .map(|c| {
            vec![
                c.place.clone(),
                c.deg.to_string(),
                c.n_nu.to_string(),
                valuations_cell(&c.valuations),
                rationals_cell(&c.naive),
                format_rational(&c.graded),
                format_rational(&c.graded_unclamped),
            ]
        })
        .collect();
    Ok(match cli.format {
        Format::Json => json_doc(
            cli,
            "heights",
            json!({
                "module": module_text(&spec),
                "heights": rep,
                "height_inequality_holds": rep.slack >= num_rational::BigRational::default(),
            }),
        ),
        Format::Csv => {
            rows.push(vec![
                "total".into(),
                String::new(),
                String::new(),
                String::new(),
                format_rational(&rep.naive),
                format_rational(&rep.graded),
                format_rational(&rep.graded_unclamped),
            ]);
            let notes = [
                format!("q = {}, rank = {}, d = {}", rep.q, rep.rank, rep.d),
                format!("slack (q^r-1) h_G - h = {}", format_rational(&rep.slack)),
            ];
            csv_doc(cli, "heights", &notes, &header, &rows)
        }
        Format::Table => {
            let mut body = String::new();
            if let Some(m) = module_text(&spec) {
                body.push_str(&format!("module: {m}\n"));
            }
            body.push_str(&format!("q = {}, rank = {}, d = {}", rep.q, rep.rank, rep.d));
            if rep.from_table {
                body.push_str(" (valuations from table)");
            }
            body.push_str(&format!("\n{rep}\n\n"));
            body.push_str(&columns(&header, &rows));
            table_doc(cli, "heights", &body)
        }
    })
}

fn case_rows(rep: &BoundReport) -> Vec<Vec<String>> {
    rep.cases
        .iter()
        .map(|(c1, c2)| {
            vec![
                c1.deg_ell.to_string(),
                c1.lhs.to_string(),
                c1.rhs.to_string(),
                c1.holds.to_string(),
                c2.lhs.to_string(),
                c2.rhs.to_string(),
                c2.holds.to_string(),
                (!c1.holds && !c2.holds).to_string(),
            ]
        })
        .collect()
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> anyhow::Result<String> {
    let (spec, heights) = height_report(&args.module)?;
    let mut params = BoundParams::new(
        spec.fq.q(),
        spec.d,
        spec.rank as u64,
        heights.naive.clone(),
        heights.graded.clone(),
    );
    params.log_c2 = cli.log_c2;
    params.exp_base = cli.exp_base.into();
    let degs = match &args.deg_ell {
        Some(s) => parse_degree_list(s)?,
        None => Vec::new(),
    };
    let rep = irreducibility_threshold(&params, &degs)?;
    let dd = dd_log_degree_bound(&params, &heights.naive);
    let header = [
        "deg_ell", "case1_lhs", "case1_rhs", "case1_holds", "case2_lhs", "case2_rhs", "case2_holds",
        "excluded",
    ];
    let summary = [
        ("q", spec.fq.q().to_string()),
        ("d", spec.d.to_string()),
        ("r", spec.rank.to_string()),
        ("h", format_rational(&heights.naive)),
        ("h_G", format_rational(&heights.graded)),
        ("N_d", rep.n_d.to_string()),
        ("ineq1_rhs (log q)", rep.ineq1_rhs.to_string()),
        ("ineq2_rhs (log q)", rep.ineq2_rhs.to_string()),
        ("ineq2_rhs_alt (log q)", rep.ineq2_rhs_alt.to_string()),
        ("omega (log q)", rep.omega.to_string()),
        ("degree_bound_log (log q)", dd.to_string()),
        ("lambert_arg", rep.lambert_arg.to_string()),
        ("C", rep.c_threshold.to_string()),
        ("threshold", rep.threshold.to_string()),
    ];
    let rows = case_rows(&rep);
    Ok(match cli.format {
        Format::Json => {
            let cases: Vec<Value> = rep
                .cases
                .iter()
                .map(|(c1, c2)| {
                    json!({
                        "deg_ell": c1.deg_ell,
                        "case1": c1,
                        "case2": c2,
                        "excluded": !c1.holds && !c2.holds,
                    })
                })
                .collect();
            json_doc(
                cli,
                "bound",
                json!({
                    "module": module_text(&spec),
                    "q": spec.fq.q(),
                    "d": spec.d,
                    "r": spec.rank,
                    "h": format_rational(&heights.naive),
                    "h_G": format_rational(&heights.graded),
                    "n_d": rep.n_d.to_string(),
                    "ineq1_rhs": rep.ineq1_rhs,
                    "ineq2_rhs": rep.ineq2_rhs,
                    "ineq2_rhs_alt": rep.ineq2_rhs_alt,
                    "omega": rep.omega,
                    "degree_bound_log": dd,
                    "lambert_arg": rep.lambert_arg,
                    "c_threshold": rep.c_threshold,
                    "threshold": rep.threshold,
                    "cases": cases,
                }),
            )
        }
        Format::Csv => {
            let notes: Vec<String> = summary.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            csv_doc(cli, "bound", &notes, &header, &rows)
        }
        Format::Table => {
            let mut body = String::new();
            if let Some(m) = module_text(&spec) {
                body.push_str(&format!("module: {m}\n"));
            }
            let w = summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &summary {
                body.push_str(&format!("{k:<w$} = {v}\n"));
            }
            if !rows.is_empty() {
                body.push('\n');
                body.push_str(&columns(&header, &rows));
            }
            table_doc(cli, "bound", &body)
        }
    })
}

fn irreducible_list(fq: &FqContext, src: &str, what: &str) -> anyhow::Result<Vec<PolyA>> {
    let ring = fq.poly_ring();
    let mut out = Vec::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f = parse_poly_a(fq, item).with_context(|| format!("in {what} `{item}`"))?;
        if f.is_zero() || !is_irreducible(fq, &f)? {
            return Err(Error::NotIrreducible(item.to_string())).with_context(|| format!("in {what}"));
        }
        let f = ring.monic(&f);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        anyhow::bail!("empty {what} list");
    }
    Ok(out)
}

fn all_irreducibles(fq: &FqContext, max_deg: usize) -> Vec<PolyA> {
    (1..=max_deg).flat_map(|d| monic_irreducibles(fq, d)).collect()
}

struct EllResult {
    ell: String,
    data: Vec<FrobeniusData>,
    skipped: Vec<(String, String)>,
    verdict: Verdict,
}

fn set_cell<T: std::fmt::Display>(s: impl IntoIterator<Item = T>) -> String {
    let cells: Vec<String> = s.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", cells.join(", "))
}

fn list_cell(v: &[usize]) -> String {
    let cells: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", cells.join(", "))
}

fn cmd_probe(cli: &Cli, args: &ProbeArgs) -> anyhow::Result<String> {
    let spec = load_module(&args.module)?;
    let phi = spec.module()?;
    let fq = &spec.fq;
    let ells = match (&args.ell, args.ell_deg_max) {
        (Some(e), _) => irreducible_list(fq, e, "ell")?,
        (None, Some(n)) => all_irreducibles(fq, n),
        (None, None) => unreachable!("clap enforces one of --ell, --ell-deg-max"),
    };
    let places = match (&args.places, args.place_deg_max) {
        (Some(p), _) => irreducible_list(fq, p, "places")?,
        (None, Some(n)) => all_irreducibles(fq, n),
        (None, None) => unreachable!("clap enforces one of --places, --place-deg-max"),
    };
    let cfg = ProbeConfig {
        max_tower_degree: args.max_tower_degree,
        seed: cli.seed,
    };
    let mut results = Vec::new();
    for ell in &ells {
        let ell_label = format_poly(fq, ell.coeffs(), "T");
        let mut data = Vec::new();
        let mut skipped = Vec::new();
        for p in &places {
            match frobenius_data(phi, p, ell, &cfg) {
                Ok(fd) => data.push(fd),
                Err(
                    e @ (Error::NotCoprime(_)
                    | Error::BadReduction { .. }
                    | Error::SplittingFieldTooLarge { .. }),
                ) => {
                    let place = format_poly(fq, p.coeffs(), "T");
                    eprintln!("warning: ell = {ell_label}: skipping place {place}: {e}");
                    skipped.push((place, e.to_string()));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let verdict = verdict_from_data(phi.rank(), &data)
            .with_context(|| format!("no usable places for ell = {ell_label}"))?;
        results.push(EllResult {
            ell: ell_label,
            data,
            skipped,
            verdict,
        });
    }

    let header = ["ell", "place", "deg_p", "char_poly", "factor_degrees", "dim_set"];
    let mut rows = Vec::new();
    for res in &results {
        for fd in &res.data {
            rows.push(vec![
                res.ell.clone(),
                fd.place.clone(),
                fd.deg_p.to_string(),
                fd.format_char_poly(),
                list_cell(&fd.factor_degrees),
                set_cell(fd.dim_set()),
            ]);
        }
        rows.push(vec![
            res.ell.clone(),
            "verdict".into(),
            String::new(),
            res.verdict.status().into(),
            String::new(),
            set_cell(&res.verdict.surviving),
        ]);
    }
    Ok(match cli.format {
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|res| {
                    let places: Vec<Value> = res
                        .data
                        .iter()
                        .map(|fd| {
                            json!({
                                "place": fd.place,
                                "deg_p": fd.deg_p,
                                "matrix": fd.format_matrix(),
                                "char_poly": fd.format_char_poly(),
                                "factor_degrees": fd.factor_degrees,
                                "dim_set": fd.dim_set(),
                            })
                        })
                        .collect();
                    let skipped: Vec<Value> = res
                        .skipped
                        .iter()
                        .map(|(p, why)| json!({"place": p, "reason": why}))
                        .collect();
                    json!({
                        "ell": res.ell,
                        "places": places,
                        "skipped": skipped,
                        "verdict": res.verdict.status(),
                        "surviving": res.verdict.surviving,
                    })
                })
                .collect();
            json_doc(
                cli,
                "probe",
                json!({
                    "module": module_text(&spec),
                    "q": fq.q(),
                    "rank": phi.rank(),
                    "results": items,
                }),
            )
        }
        Format::Csv => {
            let notes: Vec<String> = results
                .iter()
                .flat_map(|r| {
                    r.skipped
                        .iter()
                        .map(move |(p, why)| format!("skipped ell = {}, place {p}: {why}", r.ell))
                })
                .collect();
            csv_doc(cli, "probe", &notes, &header, &rows)
        }
        Format::Table => {
            let mut body = format!("module: phi_T = {}\n\n", phi.format());
            let mut table_rows = Vec::new();
            for res in &results {
                for fd in &res.data {
                    table_rows.push(vec![
                        res.ell.clone(),
                        fd.place.clone(),
                        fd.deg_p.to_string(),
                        fd.format_matrix(),
                        fd.format_char_poly(),
                        list_cell(&fd.factor_degrees),
                        set_cell(fd.dim_set()),
                    ]);
                }
            }
            body.push_str(&columns(
                &["ell", "place", "deg_p", "matrix", "char_poly", "factor_degrees", "dim_set"],
                &table_rows,
            ));
            body.push('\n');
            for res in &results {
                for (p, why) in &res.skipped {
                    body.push_str(&format!("skipped: ell = {}, place {p}: {why}\n", res.ell));
                }
                body.push_str(&format!(
                    "ell = {}: {} (surviving dimensions {})\n",
                    res.ell,
                    res.verdict.status(),
                    set_cell(&res.verdict.surviving)
                ));
            }
            table_doc(cli, "probe", &body)
        }
    })
}

fn cmd_phi_at(cli: &Cli, args: &PhiAtArgs) -> anyhow::Result<String> {
    let spec = load_module(&args.module)?;
    let phi = spec.module()?;
    let a = parse_poly_a(&spec.fq, &args.a).context("in --a")?;
    let phi_a = phi.phi_at(&a);
    let a_text = format_poly(&spec.fq, a.coeffs(), "T");
    let text = phi.ring().format(&phi_a);
    let tau_deg = phi_a.degree();
    Ok(match cli.format {
        Format::Json => json_doc(
            cli,
            "phi-at",
            json!({"module": module_text(&spec), "a": a_text, "phi_a": text, "tau_degree": tau_deg}),
        ),
        Format::Csv => csv_doc(
            cli,
            "phi-at",
            &[],
            &["a", "tau_degree", "phi_a"],
            &[vec![a_text, tau_deg.map_or("-".into(), |d| d.to_string()), text]],
        ),
        Format::Table => table_doc(
            cli,
            "phi-at",
            &format!("module: phi_T = {}\nphi_({a_text}) = {text}\n", phi.format()),
        ),
    })
}

fn cmd_check_isogeny(cli: &Cli, args: &IsogenyArgs) -> anyhow::Result<String> {
    let spec = load_module(&args.module)?;
    let phi = spec.module()?;
    let u = parse_twisted(&spec.field, &args.isogeny).context("in --isogeny")?;
    let (iso, constructed) = match &args.target {
        Some(path) => {
            let tspec = load_module(path)?;
            if tspec.fq != spec.fq {
                return Err(Error::FieldMismatch.into());
            }
            let iso = Isogeny::new(phi.clone(), tspec.module()?.clone(), u)?;
            (iso, false)
        }
        None => (quotient_by_poly(phi, &u)?.1, true),
    };
    let target = ModuleSpec {
        fq: spec.fq.clone(),
        field: spec.field.clone(),
        d: spec.d,
        rank: iso.target().rank(),
        module: Some(iso.target().clone()),
    };
    let target_file = render_module_file(&target);
    let ring = phi.ring();
    let mut fields: Vec<(&str, String)> = vec![
        ("source", phi.format()),
        ("isogeny", ring.format(iso.poly())),
        ("target", iso.target().format()),
        ("target_constructed", constructed.to_string()),
        ("degree_exponent", iso.degree_exponent().to_string()),
        ("degree", iso.degree().to_string()),
    ];
    if let Some(a_src) = &args.a {
        let a = parse_poly_a(&spec.fq, a_src).context("in --a")?;
        let dual = iso.dual(&a)?;
        let product_ok = ring.mul(dual.poly(), iso.poly()) == phi.phi_at(&a);
        let expected = BigUint::from(spec.fq.q()).pow((phi.rank() * a.degree().unwrap_or(0)) as u32);
        if !product_ok || &iso.degree() * &dual.degree() != expected {
            return Err(Error::Internal("dual isogeny identities fail".into()).into());
        }
        fields.push(("a", format_poly(&spec.fq, a.coeffs(), "T")));
        fields.push(("dual", ring.format(dual.poly())));
        fields.push(("dual_degree", dual.degree().to_string()));
        fields.push(("degree_product", expected.to_string()));
    }
    Ok(match cli.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in &fields {
                obj.insert(k.to_string(), Value::String(v.clone()));
            }
            obj.insert("target_module_file".into(), Value::String(target_file));
            json_doc(cli, "check-isogeny", Value::Object(obj))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
            csv_doc(cli, "check-isogeny", &[], &["key", "value"], &rows)
        }
        Format::Table => {
            let w = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut body: String = fields.iter().map(|(k, v)| format!("{k:<w$} = {v}\n")).collect();
            body.push_str("\ntarget module file:\n");
            body.push_str(&target_file);
            table_doc(cli, "check-isogeny", &body)
        }
    })
}
