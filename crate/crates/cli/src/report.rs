//! Report assembly. JSON objects use sorted keys, so identical inputs give
//! byte-identical output.

use serde_json::{json, Map, Value};
use splice_quotient::arith::q_to_string;
use splice_quotient::discriminant::Character;
use splice_quotient::genus::{self, GenusOptions, GenusReport};
use splice_quotient::graph::{fundamental_cycle, parse_graph, QCycle};
use splice_quotient::hilbert::{self, node_constants};
use splice_quotient::oracle::{artin_rational, compare_with_molien};
use splice_quotient::singularity::Singularity;
use splice_quotient::splice::{check_monomial_condition, system_from_report, verify_equivariance, Verdict, DEFAULT_BOUND};
use splice_quotient::{Error, ResolutionGraph};

use crate::{Failure, Format, Options, Outcome};

const DEFAULT_MAX_DEGREE: u64 = 30;
const ORACLE_MAX_DEGREE: u64 = 15;
const EQUIVARIANCE_CAP: u64 = 10_000;

fn load(opts: &Options) -> Result<ResolutionGraph, Failure> {
    let text = std::fs::read_to_string(&opts.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", opts.input.display())))?;
    Ok(parse_graph(&text)?)
}

fn header(command: &str, g: &ResolutionGraph) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), command.into());
    m.insert("fingerprint".into(), g.fingerprint().into());
    m.insert("tool".into(), "spq".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m
}

fn finish(opts: &Options, command: &str, g: &ResolutionGraph, body: Value, text: String, warnings: Vec<String>, code: u8) -> Outcome {
    let stdout = match opts.format {
        Format::Json => {
            let mut m = header(command, g);
            if let Value::Object(b) = body {
                m.extend(b);
            }
            if !warnings.is_empty() {
                m.insert("warnings".into(), json!(warnings));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Outcome { stdout, warnings, code }
}

fn labeled(c: &QCycle, g: &ResolutionGraph) -> Value {
    Value::Object(c.labeled(g).into_iter().map(|(k, v)| (k, Value::String(v))).collect())
}

fn node_of(s: &Singularity, opts: &Options) -> Result<usize, Failure> {
    match &opts.node {
        Some(id) => Ok(s.require_node(id)?),
        None => s.default_node().ok_or_else(|| Failure::Input("the graph has no node".into())),
    }
}

fn characters(s: &Singularity, opts: &Options) -> Result<Vec<Character>, Failure> {
    match &opts.character {
        Some(text) => Ok(vec![s.group.parse_character(text)?]),
        None => Ok(s.group.characters()),
    }
}

fn singularity(g: ResolutionGraph) -> Result<Singularity, Failure> {
    Ok(Singularity::new(g)?)
}

pub fn run(command: &str, opts: &Options) -> Result<Outcome, Failure> {
    let g = load(opts)?;
    match command {
        "validate" => validate(opts, g),
        "invariants" => invariants(opts, g),
        "hilbert" => hilbert_cmd(opts, g),
        "cv" => cv(opts, g),
        "pg" | "pg-uac" | "h1" => genus_cmd(command, opts, g),
        "monomial-check" => monomial_check(opts, g),
        "emit-equations" => emit(opts, g),
        "oracle-verify" => oracle_verify(opts, g),
        "fundamental-cycle" => fundamental(opts, g),
        _ => Err(Failure::Input(format!("unknown command {command}"))),
    }
}

fn validate(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let r = g.validate()?;
    let text = format!(
        "valid: {} vertices, {} nodes, {} ends, det {}\n",
        r.vertices,
        r.nodes.len(),
        r.ends.len(),
        r.determinant
    );
    let warnings = r.warnings.clone();
    let mut body = serde_json::to_value(&r).expect("report serializes");
    if let Value::Object(m) = &mut body {
        m.remove("warnings");
    }
    Ok(finish(opts, "validate", &g, body, text, warnings, 0))
}

fn invariants(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let g = &s.graph;
    let mut nodes = Vec::new();
    let mut text = format!(
        "det {}  H = {:?}  |H| = {}  exponent {}\n",
        s.matrix.determinant(),
        s.group.invariant_factors,
        s.group.order,
        s.group.exponent
    );
    text.push_str(&format!(
        "K = {}  (numerically Gorenstein: {})\n",
        s.canonical.cycle.render(g),
        s.canonical.numerically_gorenstein
    ));
    for v in s.graph.nodes() {
        let w = s.weights(v)?;
        let a = hilbert::a_invariant(&s, &w);
        let m: Map<String, Value> = s.graph.ends().iter().map(|&u| (g.id(u).to_string(), json!(w.m[u]))).collect();
        text.push_str(&format!("node {}: e = {}, m_vv = {}, a_v = {}, a = {}\n", g.id(v), w.e, w.m[v], w.a_v, a));
        nodes.push(json!({
            "id": g.id(v),
            "e": w.e,
            "mvv": w.m[v],
            "av": w.a_v,
            "aInvariant": a,
            "endWeights": m,
        }));
    }
    let duals: Map<String, Value> = (0..s.len()).map(|v| (g.id(v).to_string(), labeled(s.dual.dual(v), g))).collect();
    let body = json!({
        "determinant": s.matrix.determinant().to_string(),
        "group": {
            "invariantFactors": s.group.invariant_factors,
            "order": s.group.order,
            "exponent": s.group.exponent,
        },
        "canonical": {
            "cycle": labeled(&s.canonical.cycle, g),
            "numericallyGorenstein": s.canonical.numerically_gorenstein,
        },
        "nodes": nodes,
        "dualCycles": duals,
    });
    Ok(finish(opts, "invariants", g, body, text, vec![], 0))
}

fn hilbert_cmd(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let v = node_of(&s, opts)?;
    let chars = characters(&s, opts)?;
    let max = opts.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let data = hilbert::molien_coeffs_for(&s, v, max as usize + 1, &chars, opts.exec)?;
    let closed = hilbert::molien_closed(&s, v, &chars, opts.exec)?;
    let mut text = format!("node {}\n", s.graph.id(v));
    let mut items = Vec::new();
    for (k, chi) in chars.iter().enumerate() {
        let f = &closed[k];
        let coeffs = &data.coeffs[k];
        text.push_str(&format!(
            "{chi}: ({}) / ({})\n  {}\n",
            f.numerator(),
            f.denominator(),
            coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        ));
        let pp = f.polynomial_part();
        items.push(json!({
            "char": chi,
            "coefficients": coeffs,
            "numerator": f.numerator().to_strings(),
            "denominator": f.denominator().to_strings(),
            "rendered": format!("({}) / ({})", f.numerator(), f.denominator()),
            "polynomialPart": pp.poly.to_string(),
        }));
    }
    let body = json!({ "node": s.graph.id(v), "aInvariant": data.a_invariant, "maxDegree": max, "series": items });
    Ok(finish(opts, "hilbert", &s.graph, body, text, vec![], 0))
}

fn cv(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let nodes = if opts.all_nodes { s.graph.nodes() } else { vec![node_of(&s, opts)?] };
    let chars = characters(&s, opts)?;
    let mut text = String::new();
    let mut out = Vec::new();
    for v in nodes {
        let nc = node_constants(&s, v, Some(&chars), true, opts.exec)?;
        let mut items = Vec::new();
        for c in &nc.constants {
            let b = c.route_b.as_ref().map(q_to_string);
            text.push_str(&format!(
                "{} {}: c = {}  (route A at m = {}..{}, route B {})\n",
                s.graph.id(v),
                c.character,
                q_to_string(c.value()),
                c.m,
                c.m + 2,
                b.as_deref().unwrap_or("-")
            ));
            items.push(json!({
                "char": c.character,
                "value": q_to_string(c.value()),
                "m": c.m,
                "routeA": c.route_a.iter().map(q_to_string).collect::<Vec<_>>(),
                "routeB": b,
            }));
        }
        out.push(json!({ "node": s.graph.id(v), "constants": items }));
    }
    Ok(finish(opts, "cv", &s.graph, json!({ "nodes": out }), text, vec![], 0))
}

fn genus_json(r: &GenusReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn genus_cmd(command: &str, opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let gopts = GenusOptions { exec: opts.exec, root: opts.node.clone(), check_polynomial_part: false };
    if let Some(id) = &opts.node {
        s.require_node(id)?;
    }
    let chi = match command {
        "h1" => {
            let text = opts.character.as_deref().ok_or_else(|| Failure::Input("h1 needs --char".into()))?;
            Some(s.group.parse_character(text)?)
        }
        _ => None,
    };
    let compute = |o: GenusOptions| -> Result<GenusReport, Error> {
        match (command, &chi) {
            ("pg", _) => genus::pg(&s, o),
            ("pg-uac", _) => genus::pg_uac(&s, o),
            (_, Some(c)) => genus::h1_eigensheaf(&s, c, o),
            _ => unreachable!("h1 always has a character"),
        }
    };
    let (report, roots) = if opts.all_nodes && !s.graph.is_chain() {
        let reports = match command {
            "pg-uac" => genus::all_nodes(&s, true, gopts.clone())?,
            _ => genus::all_nodes(&s, false, gopts.clone())?,
        };
        let roots: Vec<String> = reports.iter().map(|(id, _)| id.clone()).collect();
        // the per-root tables agree; report the requested quantity from the first root
        let first = GenusOptions { root: Some(roots[0].clone()), ..gopts };
        (compute(first)?, Some(roots))
    } else {
        (compute(gopts)?, None)
    };
    let warnings = report.warnings.clone();
    let value = match command {
        "pg" => report.pg,
        "pg-uac" => report.pg_uac.unwrap_or(0),
        _ => report.h1.last().map_or(0, |e| e.value),
    };
    let mut text = format!("{value}\n");
    if command == "pg-uac" {
        for e in &report.h1 {
            text.push_str(&format!("{} {}\n", e.character, e.value));
        }
    }
    let mut body = genus_json(&report);
    if let (Value::Object(m), Some(r)) = (&mut body, roots) {
        m.insert("roots".into(), json!(r));
    }
    if let Value::Object(m) = &mut body {
        m.remove("warnings");
        m.insert("artinRational".into(), json!(artin_rational(&s.graph)?));
    }
    Ok(finish(opts, command, &s.graph, body, text, warnings, 0))
}

fn monomial_check(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    if s.graph.is_chain() {
        return Err(Failure::Input("a chain has no nodes".into()));
    }
    let bound = opts.bound.unwrap_or(DEFAULT_BOUND);
    let r = check_monomial_condition(&s, bound, opts.exec)?;
    let mut text = format!("{:?} (bound {bound})\n", r.verdict);
    for b in &r.branches {
        let w = b.witness.as_ref().map_or("not found".to_string(), |w| w.monomial.render(&s.graph));
        text.push_str(&format!("{} / {}: {w}\n", s.graph.id(b.node), s.graph.id(b.attaching)));
    }
    let code = if r.verdict == Verdict::Satisfied { 0 } else { 3 };
    Ok(finish(opts, "monomial-check", &s.graph, r.to_json(&s.graph), text, vec![], code))
}

fn emit(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let bound = opts.bound.unwrap_or(DEFAULT_BOUND);
    let r = check_monomial_condition(&s, bound, opts.exec)?;
    if r.verdict != Verdict::Satisfied {
        return Err(Failure::Unknown(format!("monomial condition unknown within bound {bound}")));
    }
    let sys = system_from_report(&s, &r, opts.seed.unwrap_or(0))?;
    let eq = verify_equivariance(&s, &sys, EQUIVARIANCE_CAP);
    if !eq.ok {
        let (h, v, m) = eq.violation.expect("failure carries a witness");
        return Err(Failure::Internal(format!("equation at {} is not equivariant: h = {h:?}, {m}", s.graph.id(v))));
    }
    let mut text = String::new();
    for n in &sys.nodes {
        for e in n.render(&s.graph) {
            text.push_str(&format!("{} (v-degree {}): {e}\n", s.graph.id(n.node), n.v_degree));
        }
    }
    let mut body = sys.to_json(&s.graph);
    body["equivariant"] = json!(true);
    Ok(finish(opts, "emit-equations", &s.graph, body, text, vec![], 0))
}

fn oracle_verify(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    let s = singularity(g)?;
    let bound = opts.bound.unwrap_or(DEFAULT_BOUND);
    let r = check_monomial_condition(&s, bound, opts.exec)?;
    if r.verdict != Verdict::Satisfied {
        return Err(Failure::Unknown(format!("monomial condition unknown within bound {bound}")));
    }
    let sys = system_from_report(&s, &r, opts.seed.unwrap_or(0))?;
    let max = opts.max_degree.unwrap_or(ORACLE_MAX_DEGREE);
    let nodes = match &opts.node {
        Some(id) => vec![s.require_node(id)?],
        None => s.graph.nodes(),
    };
    let mut reports = Vec::new();
    for v in nodes {
        reports.push(compare_with_molien(&s, v, &sys, max, opts.exec)?);
    }
    let agree = reports.iter().all(|r| r.agrees());
    let mut text = String::new();
    if agree {
        text.push_str("all characters agree\n");
    } else {
        for r in &reports {
            for m in &r.mismatches {
                text.push_str(&format!("{} {} degree {}: oracle {} molien {}\n", r.node, m.character, m.degree, m.oracle, m.molien));
            }
        }
    }
    let body = json!({ "agree": agree, "nodes": reports });
    Ok(finish(opts, "oracle-verify", &s.graph, body, text, vec![], if agree { 0 } else { 2 }))
}

fn fundamental(opts: &Options, g: ResolutionGraph) -> Result<Outcome, Failure> {
    g.validate()?;
    let z = fundamental_cycle(&g)?;
    let text = format!("Z = {}\np_a(Z) = {}\n", z.cycle.render(&g), z.arithmetic_genus);
    let cycle: Map<String, Value> = (0..g.len()).map(|i| (g.id(i).to_string(), json!(z.cycle.0[i]))).collect();
    let body = json!({
        "cycle": cycle,
        "arithmeticGenus": z.arithmetic_genus,
        "steps": z.steps,
        "rational": z.arithmetic_genus == 0,
    });
    Ok(finish(opts, "fundamental-cycle", &g, body, text, vec![], 0))
}
