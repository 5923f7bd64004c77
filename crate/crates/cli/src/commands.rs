use std::fs;
use std::path::Path;

use cubegirth::actions::{find_flipper, find_skewerer, Action, FiniteAction, TreeAction, WreathAction};
use cubegirth::amplify::{amplify_facing, verify_family};
use cubegirth::build;
use cubegirth::constructions::{find_diametric_pair, wreath_demo, WreathGroup};
use cubegirth::families::FreeProductTree;
use cubegirth::format::{parse_autperm, parse_cubegraph, parse_permgrp, parse_pocset, write_cubegraph};
use cubegirth::girth::{check_law, girth_cayley, girth_free_product, girth_sup_bounded, Girth, LawPolicy};
use cubegirth::groups::FiniteGroup;
use cubegirth::halfspaces::engine::Probe;
use cubegirth::halfspaces::{dual_complex, Halfspace, HyperplaneSystem, Pocset};
use cubegirth::pingpong::{
    build_cert_from_poles, check_girth_cert, decode_cert, encode_cert, free_sanity, BuildParams, Built, Outcome, PpCertV1,
};
use cubegirth::space::MedianSpace;
use cubegirth::{CubeComplexGraph, Half, Word};
use serde_json::{json, Value};

use crate::cli::{CertCommand, Cli, Command, GirthArgs, SpaceArgs};
use crate::report::{Done, Failure, Loader, Status};

type Run = Result<Done, Failure>;

pub fn run(cli: &Cli, command: &Command, files: &mut Loader) -> Run {
    match command {
        Command::Validate { file } => validate(&cubegraph(files, file)?),
        Command::Hyperplanes { file } => hyperplanes(&cubegraph(files, file)?),
        Command::Relations { file } => relations(&cubegraph(files, file)?),
        Command::Dual { file } => dual(files, file),
        Command::Girth(args) => girth(cli, args, files),
        Command::GirthSup { file, max_gens } => {
            let g = permgrp(files, file)?;
            let sup = girth_sup_bounded(&g, *max_gens)?;
            Ok(Done::new(Status::Pass, json!({ "order": g.order(), "girth_sup": sup })))
        }
        Command::LawCheck { file, word, samples } => {
            let g = permgrp(files, file)?;
            let w = parse_word(word)?;
            let policy = match samples {
                0 => LawPolicy::Exhaustive,
                &count => LawPolicy::Samples { count, seed: cli.seed },
            };
            let r = check_law(&g, &w, policy)?;
            let status = if r.holds { Status::Pass } else { Status::Fail };
            Ok(Done::new(status, json!({ "order": g.order(), "law": r })))
        }
        Command::FlipSearch { space, half } => {
            let s = load_space(space, files)?;
            with_action!(&s, a => flip_search(cli, a, half))
        }
        Command::SkewerSearch { space, inner, outer, strong } => {
            let s = load_space(space, files)?;
            with_action!(&s, a => skewer_search(cli, a, inner, outer, *strong))
        }
        Command::Amplify { space, triple, n, flip_len } => {
            let s = load_space(space, files)?;
            let flip_len = flip_len.unwrap_or(cli.max_word_len);
            with_action!(&s, a => amplify(cli, a, triple, *n, flip_len))
        }
        Command::GirthCert(CertCommand::Build {
            trees,
            sigma,
            tau,
            gens,
            poles,
            depth,
            n_max,
            m_max,
            k,
            samples,
            out,
        }) => {
            let factors = load_trees(trees)?;
            let (sigma, tau) = (parse_word(sigma)?, parse_word(tau)?);
            let gens = if gens.is_empty() {
                vec![sigma.clone(), tau.clone()]
            } else {
                gens.iter().map(|g| parse_word(g)).collect::<Result<_, _>>()?
            };
            for w in [&sigma, &tau].into_iter().chain(&gens) {
                check_letters(&factors[0], w)?;
            }
            if poles.len() != factors.len() {
                return Err(Failure::input(format!(
                    "{} `--poles` given for {} factor(s)",
                    poles.len(),
                    factors.len()
                )));
            }
            let mut halves = Vec::new();
            for (a, p) in factors.iter().zip(poles) {
                let (h, h2) = p
                    .split_once(',')
                    .ok_or_else(|| Failure::input(format!("`{p}`: expected two halfspaces `h,h'`")))?;
                halves.push((parse_half(a, h)?, parse_half(a, h2)?));
            }
            let params = BuildParams {
                depth: *depth,
                n_max: *n_max,
                m_max: *m_max,
                radius: cli.radius,
            };
            let cert = match build_cert_from_poles(&factors, &sigma, &tau, &gens, &halves, &params)? {
                Built::Cert(c) => c,
                Built::NotFound { reason } => {
                    return Ok(Done::new(Status::Fail, json!({ "found": false, "reason": reason })));
                }
            };
            let verdict = check_girth_cert(&factors, &cert, *k, cli.radius)?;
            let sanity = free_sanity(&factors, &cert, *samples, cli.max_word_len, cli.seed);
            let encoded = encode_cert(&factors, &cert);
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&encoded).expect("certificates serialize");
                fs::write(path, text + "\n")
                    .map_err(|e| Failure::input(format!("cannot write `{}`: {e}", path.display())))?;
            }
            let mut status = outcome_status(verdict.outcome);
            if sanity.is_some() {
                status = Status::Fail;
            }
            let consumed = verdict.consumed;
            Ok(Done::new(
                status,
                json!({
                    "found": true,
                    "n": cert.n,
                    "m": cert.m,
                    "verdict": verdict,
                    "free_sanity": { "samples": samples, "counterexample": sanity },
                    "certificate": encoded,
                }),
            )
            .consumed(consumed))
        }
        Command::GirthCert(CertCommand::Check { file, trees, k }) => {
            let factors = load_trees(trees)?;
            let name = file.display().to_string();
            let text = files.read(file)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::parse(&name, e.line(), e.column(), e.to_string()))?;
            let cert_value = match value.get("format") {
                Some(_) => value,
                None => value
                    .pointer("/result/certificate")
                    .cloned()
                    .ok_or_else(|| Failure::input(format!("`{name}` holds neither a certificate nor a build report")))?,
            };
            let enc: PpCertV1 = serde_json::from_value(cert_value)
                .map_err(|e| Failure::input(format!("`{name}`: malformed certificate: {e}")))?;
            let cert = decode_cert(&factors, &enc)?;
            let verdict = check_girth_cert(&factors, &cert, *k, cli.radius)?;
            let consumed = verdict.consumed;
            Ok(Done::new(outcome_status(verdict.outcome), json!({ "verdict": verdict })).consumed(consumed))
        }
        Command::WreathDemo { n, trials, window } => {
            let r = wreath_demo(*n, *trials, *window, cli.seed)?;
            let status = if r.chain_established() { Status::Pass } else { Status::Fail };
            Ok(Done::new(
                status,
                json!({
                    "fixing_group_order": r.coordinate_action.group_order,
                    "symmetric_on_hyperplanes": r.coordinate_action.is_isomorphism_onto_symmetric(),
                    "law_holds": r.law.passed(),
                    "nonsolvable": r.nonsolvability.nonsolvable,
                    "chain_established": r.chain_established(),
                    "details": r,
                }),
            ))
        }
    }
}

fn outcome_status(o: Outcome) -> Status {
    match o {
        Outcome::Pass => Status::Pass,
        Outcome::Fail => Status::Fail,
        Outcome::Inconclusive => Status::Inconclusive,
    }
}

fn cubegraph(files: &mut Loader, path: &Path) -> Result<CubeComplexGraph, Failure> {
    let text = files.read(path)?;
    parse_cubegraph(&text).map_err(|e| Failure::core(e, Some(&path.display().to_string())))
}

fn permgrp(files: &mut Loader, path: &Path) -> Result<FiniteGroup, Failure> {
    let text = files.read(path)?;
    let spec = parse_permgrp(&text).map_err(|e| Failure::core(e, Some(&path.display().to_string())))?;
    let (labels, perms) = spec.generators.into_iter().unzip();
    Ok(FiniteGroup::generate(spec.degree, perms, labels)?)
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse().map_err(|e| Failure::input(format!("bad word `{s}`: {e}")))
}

fn check_letters<A: Action>(a: &A, w: &Word) -> Result<(), Failure> {
    match w.max_generator() {
        Some(g) if g >= a.generator_count() => Err(Failure::input(format!(
            "word `{w}` uses a letter beyond the {} generator(s)",
            a.generator_count()
        ))),
        _ => Ok(()),
    }
}

fn parse_half<A: Action>(a: &A, s: &str) -> Result<Half<<A::S as MedianSpace>::V>, Failure> {
    Probe::unbounded(a.space())
        .parse(s.trim())
        .ok_or_else(|| Failure::input(format!("`{s}` is not an edge `u|v` of the space")))
}

fn parse_tree(spec: &str) -> Result<TreeAction, Failure> {
    let bad = || Failure::input(format!("bad tree `{spec}`: expected `free:K` or `inv:K`"));
    let (kind, k) = spec.split_once(':').ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    if k == 0 || k > cubegirth::word::MAX_GENERATORS {
        return Err(bad());
    }
    match kind {
        "free" => Ok(TreeAction::new(FreeProductTree::free(k))),
        "inv" => Ok(TreeAction::new(FreeProductTree::involutions(k))),
        _ => Err(bad()),
    }
}

fn load_trees(specs: &[String]) -> Result<Vec<TreeAction>, Failure> {
    let trees = specs.iter().map(|s| parse_tree(s)).collect::<Result<Vec<_>, _>>()?;
    if trees.iter().any(|t| t.generator_count() != trees[0].generator_count()) {
        return Err(Failure::input("every factor must have the same number of generators"));
    }
    Ok(trees)
}

pub enum Space {
    Tree(TreeAction),
    Finite(FiniteAction),
    Line(WreathAction),
}

macro_rules! with_action {
    ($space:expr, $a:ident => $body:expr) => {
        match $space {
            Space::Tree($a) => $body,
            Space::Finite($a) => $body,
            Space::Line($a) => $body,
        }
    };
}
use with_action;

fn load_space(args: &SpaceArgs, files: &mut Loader) -> Result<Space, Failure> {
    match (&args.tree, &args.complex, &args.aut, args.line) {
        (Some(t), None, None, None) => Ok(Space::Tree(parse_tree(t)?)),
        (None, Some(c), Some(a), None) => {
            let g = cubegraph(files, c)?;
            let text = files.read(a)?;
            let auts = parse_autperm(&text, &g).map_err(|e| Failure::core(e, Some(&a.display().to_string())))?;
            Ok(Space::Finite(FiniteAction::from_named(g, &auts)?))
        }
        (None, None, None, Some(n)) => {
            if n == 0 {
                return Err(Failure::input("`--line` needs a positive cube dimension"));
            }
            let x = build::hypercube(n);
            let pair = find_diametric_pair(&x)?.expect("cubes have diametric pairs");
            Ok(Space::Line(WreathAction::new(WreathGroup::new(&x, &pair, 3)?)))
        }
        _ => Err(Failure::input("give exactly one of `--tree`, `--complex` with `--aut`, or `--line`")),
    }
}

fn validate(g: &CubeComplexGraph) -> Run {
    let report = g.validate_median()?;
    let mut result = json!({
        "vertices": report.vertices,
        "edges": report.edges,
        "median": report.is_median,
    });
    if let Some(t) = report.counterexample {
        result["counterexample"] = json!(t.map(|v| g.name(v).to_string()));
        return Ok(Done::new(Status::Fail, result));
    }
    let non_flag: Vec<&str> = g.vertices().filter(|&v| !g.link_is_flag(v)).map(|v| g.name(v)).collect();
    result["flag_links"] = json!(non_flag.is_empty());
    result["dimension"] = json!(g.max_cube_dimension());
    let status = if non_flag.is_empty() { Status::Pass } else { Status::Fail };
    result["non_flag_vertices"] = json!(non_flag);
    Ok(Done::new(status, result))
}

fn hyperplanes(g: &CubeComplexGraph) -> Run {
    let sys = HyperplaneSystem::new(g)?;
    let list: Vec<Value> = sys
        .hyperplanes()
        .iter()
        .map(|h| {
            let (s0, s1) = sys.halfspace_pair(h.id);
            json!({
                "id": h.id,
                "roots": h.roots.map(|v| g.name(v).to_string()),
                "edges": h.edges.iter().map(|e| [g.name(e.0), g.name(e.1)]).collect::<Vec<_>>(),
                "sides": [s0.len(), s1.len()],
            })
        })
        .collect();
    Ok(Done::new(Status::Pass, json!({ "count": sys.len(), "hyperplanes": list })))
}

fn relations(g: &CubeComplexGraph) -> Run {
    let sys = HyperplaneSystem::new(g)?;
    let mut pairs = Vec::new();
    let mut strong = 0;
    for i in 0..sys.len() {
        for j in i + 1..sys.len() {
            let (h, k) = (Halfspace::new(i, 0), Halfspace::new(j, 0));
            let r = sys.pair_relation(h, k);
            strong += usize::from(r.strongly_separated);
            pairs.push(json!({ "pair": [i, j], "sides_0": sys.relation(h, k), "relation": r }));
        }
    }
    Ok(Done::new(
        Status::Pass,
        json!({ "hyperplanes": sys.len(), "strongly_separated_pairs": strong, "pairs": pairs }),
    ))
}

fn dual(files: &mut Loader, path: &Path) -> Run {
    let text = files.read(path)?;
    let spec = parse_pocset(&text).map_err(|e| Failure::core(e, Some(&path.display().to_string())))?;
    let p = Pocset::from_spec(&spec)?;
    let g = dual_complex(&p)?;
    Ok(Done::new(
        Status::Pass,
        json!({
            "pairs": p.pairs(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "dimension": g.max_cube_dimension(),
            "cubegraph": write_cubegraph(&g),
        }),
    ))
}

fn girth(cli: &Cli, args: &GirthArgs, files: &mut Loader) -> Run {
    if let Some(t) = &args.tree {
        let action = parse_tree(t)?;
        let gens = args.gens.iter().map(|g| parse_word(g)).collect::<Result<Vec<_>, _>>()?;
        for w in &gens {
            check_letters(&action, w)?;
        }
        let radius = ball_radius(&action.tree, &gens, cli.radius);
        if radius < cli.radius {
            log::warn!("radius lowered from {} to {radius} to keep the ball under {BALL_CAP} vertices", cli.radius);
        }
        let g = girth_free_product(&action.tree, &gens, radius);
        let status = match g {
            Girth::InfiniteWithin { .. } => Status::Inconclusive,
            _ => Status::Pass,
        };
        return Ok(Done::new(status, json!({ "girth": g, "radius_used": radius })).consumed(radius));
    }
    let file = args.file.as_ref().expect("clap requires a file without --tree");
    let g = permgrp(files, file)?;
    let gens = g.generator_indices();
    let girth = girth_cayley(&g, &gens)?;
    Ok(Done::new(
        Status::Pass,
        json!({ "order": g.order(), "generators": g.labels(), "girth": girth }),
    ))
}

/// Most vertices a breadth-first girth search may visit.
const BALL_CAP: usize = 100_000;

/// Largest radius, up to `radius`, whose Cayley ball stays under [`BALL_CAP`].
fn ball_radius(tree: &FreeProductTree, gens: &[Word], radius: usize) -> usize {
    let degree: usize = gens
        .iter()
        .map(|w| if tree.reduce(&w.concat(w)).is_empty() { 1 } else { 2 })
        .sum();
    let (mut size, mut sphere) = (1usize, 1usize);
    for r in 0..radius {
        sphere = sphere.saturating_mul(if r == 0 { degree } else { degree.saturating_sub(1) });
        size = size.saturating_add(sphere);
        if size > BALL_CAP {
            return r;
        }
    }
    radius
}

fn flip_search<A: Action>(cli: &Cli, a: &A, half: &str) -> Run {
    let h = parse_half(a, half)?;
    let probe = Probe::new(a.space(), cli.radius);
    let found = find_flipper(a, &probe, &h, cli.max_word_len);
    let consumed = probe.consumed();
    let status = match found? {
        Some(cert) => return Ok(Done::new(Status::Pass, json!({ "flip": cert })).consumed(consumed)),
        None => Status::Fail,
    };
    Ok(Done::new(status, json!({ "flip": null, "searched_up_to": cli.max_word_len })).consumed(consumed))
}

fn skewer_search<A: Action>(cli: &Cli, a: &A, inner: &str, outer: &str, strong: bool) -> Run {
    let (i, o) = (parse_half(a, inner)?, parse_half(a, outer)?);
    let probe = Probe::new(a.space(), cli.radius);
    let found = find_skewerer(a, &probe, &i, &o, cli.max_word_len, strong)?;
    let consumed = probe.consumed();
    let status = if found.is_some() { Status::Pass } else { Status::Fail };
    Ok(Done::new(
        status,
        json!({ "strong": strong, "skewer": found, "searched_up_to": cli.max_word_len }),
    )
    .consumed(consumed))
}

fn amplify<A: Action>(cli: &Cli, a: &A, triple: &[String], n: usize, flip_len: usize) -> Run {
    let [x, y, z] = triple else {
        return Err(Failure::input(format!("`--triple` needs three halfspaces, found {}", triple.len())));
    };
    let (x, y, z) = (parse_half(a, x)?, parse_half(a, y)?, parse_half(a, z)?);
    let probe = Probe::new(a.space(), cli.radius);
    let fam = amplify_facing(a, &probe, [&x, &y, &z], n, flip_len)?;
    let family = verify_family(&probe, &fam.halves)?;
    let claims = fam.transcript.iter().flat_map(|s| &s.claims).all(|c| c.holds);
    let pass = fam.len() == n && fam.complete() && family.all_green() && claims;
    let status = if pass { Status::Pass } else { Status::Fail };
    Ok(Done::new(status, json!({ "family": fam, "check": family })).consumed(probe.consumed()))
}
