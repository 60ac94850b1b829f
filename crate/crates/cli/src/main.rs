use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use crossratio_core::chowrings::{b0_check, c3_check, inv_ring, riemann_roch, ring_by_name, todd4, RING_NAMES};
use crossratio_core::fgeom::{enumerate_points, perp_profile, ProjectivePoint, QClass};
use crossratio_core::gram::{to_csv, GramData, TripleChoice};
use crossratio_core::ledger::{run_pipeline, Step};
use crossratio_core::orthgroup::{class_orbits, full_orthogonal_group, incidence_rank, pair_orbits, reflection_group};
use crossratio_core::report::{checks, summarize, CheckResult, Context, Status};
use crossratio_core::roots::tables::{render, TableKind};
use crossratio_core::roots::RootSystem;
use crossratio_core::toricfan::{build_weyl_fan, character_divisor, star_fan, subtorus_closure_fan, CharacterMonomial};
use serde_json::json;
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "crossratio", version, about = "Exact computations on the compactified cross-ratio variety")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum GramWhich {
    B2,
    Full,
    Cusp,
    Relations,
    Decomposition,
}

#[derive(Subcommand)]
enum Command {
    /// Point classes of F3^5 and their perpendicular profiles.
    Geometry {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The reflection group and its orbits.
    Group {
        #[arg(long)]
        order: bool,
        #[arg(long)]
        orbits: bool,
        #[arg(long)]
        pair_orbits: bool,
        #[arg(long)]
        incidence_ranks: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Label tables.
    Tables {
        #[arg(long, default_value = "bd")]
        which: TableKind,
    },
    /// The Weyl chamber fan.
    Fan {
        #[arg(long)]
        f_vector: bool,
        #[arg(long)]
        chow_ranks: bool,
        /// A ray such as e1, e1+e3 or (+-+-).
        #[arg(long)]
        star: Option<String>,
        /// Index 0..16 of a surface in table order.
        #[arg(long)]
        surface: Option<usize>,
        /// lambda, rho, nu or mu.
        #[arg(long)]
        character: Option<String>,
    },
    /// Chow ranks through the blow-ups and the contraction.
    Ledger {
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate an expression in one of the rings.
    Chow {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        eval: Option<String>,
    },
    /// chi(O(nH)) for n in an inclusive range A..B.
    RiemannRoch {
        #[arg(long, default_value = "0..5")]
        n_range: String,
    },
    /// Chern numbers of the compactification and of the boundary divisor.
    Chern {
        #[arg(long)]
        verify: bool,
    },
    /// Gram matrices of degree-two classes.
    Gram {
        #[arg(long, value_enum, default_value = "full")]
        which: GramWhich,
        /// Write the integer matrix as CSV.
        #[arg(long)]
        dump_matrix: Option<String>,
        /// Rank of the pairing of divisors with cubic monomials.
        #[arg(long)]
        pairing_rank: bool,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        explain: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Geometry { format } => geometry(format)?,
        Command::Group { order, orbits, pair_orbits, incidence_ranks, format } => {
            let none = !(order || orbits || pair_orbits || incidence_ranks);
            group(order || none, orbits || none, pair_orbits || none, incidence_ranks || none, format)?
        }
        Command::Tables { which } => {
            let rs = RootSystem::new()?;
            let w = build_weyl_fan()?;
            print!("{}", render(&rs, &w, which)?);
        }
        Command::Fan { f_vector, chow_ranks, star, surface, character } => fan(f_vector, chow_ranks, star, surface, character)?,
        Command::Ledger { trace } => ledger(trace)?,
        Command::Chow { ring, eval } => chow(&ring, eval.as_deref())?,
        Command::RiemannRoch { n_range } => rr(&n_range)?,
        Command::Chern { verify } => return chern(verify),
        Command::Gram { which, dump_matrix, pairing_rank } => gram(which, dump_matrix.as_deref(), pairing_rank)?,
        Command::Verify { format, only, explain } => return verify(format, only.as_deref(), explain),
    }
    Ok(ExitCode::SUCCESS)
}

fn geometry(format: Format) -> Result<()> {
    let sets = enumerate_points();
    let mut rows = Vec::new();
    for c in QClass::ALL {
        let v = sets.get(c)[0];
        let p = perp_profile(&sets, &ProjectivePoint::new(v)?);
        rows.push((c, sets.get(c).len(), p));
    }
    if format == Format::Json {
        let out: Vec<_> = rows
            .iter()
            .map(|(c, n, p)| json!({"class": c.name(), "q": c.value(), "count": n, "perp": {"cusp": p.cusp, "tritangent": p.tritangent, "boundary": p.boundary}}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("class       q   count  perp: cusp  tritangent  boundary");
    for (c, n, p) in rows {
        println!("{:<10}  {:>2}  {:>5}        {:>4}  {:>10}  {:>8}", c.name(), c.value(), n, p.cusp, p.tritangent, p.boundary);
    }
    Ok(())
}

fn group(order: bool, orbits: bool, pairs: bool, incidence: bool, format: Format) -> Result<()> {
    let sets = enumerate_points();
    let g = reflection_group(&sets);
    let mut out = serde_json::Map::new();
    if order {
        let full = full_orthogonal_group(&sets);
        out.insert("order".into(), json!(g.order()));
        out.insert("order_with_minus_identity".into(), json!(full.order()));
        out.insert("generators".into(), json!(g.generators().len()));
    }
    if orbits {
        let o = class_orbits(&g, &sets)?;
        out.insert("orbits".into(), json!(o.iter().map(|c| (c.class.name(), c.sizes.clone())).collect::<BTreeMap<_, _>>()));
    }
    if pairs {
        let (b, c, t) = (sets.boundaries(), sets.cusps(), sets.tritangents());
        let mut m = serde_json::Map::new();
        for (name, x, y) in [("BB", b, b), ("CC", c, c), ("TT", t, t), ("BC", b, c), ("BT", b, t), ("CT", c, t)] {
            let mut sizes: Vec<usize> = pair_orbits(&g, x, y)?.iter().map(Vec::len).collect();
            sizes.sort();
            m.insert(name.into(), json!(sizes));
        }
        out.insert("pair_orbit_sizes".into(), serde_json::Value::Object(m));
    }
    if incidence {
        let r = json!({
            "BC": incidence_rank(sets.boundaries(), sets.cusps()),
            "BT": incidence_rank(sets.boundaries(), sets.tritangents()),
            "CT": incidence_rank(sets.cusps(), sets.tritangents()),
        });
        out.insert("incidence_ranks".into(), r);
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for (k, v) in &out {
            println!("{k}: {v}");
        }
    }
    Ok(())
}

fn fan(f_vector: bool, chow_ranks: bool, star: Option<String>, surface: Option<usize>, character: Option<String>) -> Result<()> {
    let w = build_weyl_fan()?;
    let f = w.fan();
    let none = !f_vector && !chow_ranks && star.is_none() && surface.is_none() && character.is_none();
    if f_vector || none {
        println!("f-vector: {:?}", f.f_vector());
    }
    if chow_ranks || none {
        println!("chow ranks: {:?}", f.chow_ranks()?);
    }
    if let Some(s) = star {
        let i = w.points().iter().position(|p| p.to_string() == s).ok_or_else(|| anyhow!("{s} is not a ray of the fan"))?;
        let st = star_fan(f, i)?;
        println!("star of {s}: {} rays, {} cones, chow ranks {:?}, euler {}", st.rays().len(), st.max_cones().len(), st.chow_ranks()?, st.euler());
    }
    if let Some(k) = surface {
        let rs = RootSystem::new()?;
        let surfaces = rs.surfaces()?;
        let s = surfaces.get(k).ok_or_else(|| anyhow!("surface index must be below {}", surfaces.len()))?;
        let sf = subtorus_closure_fan(f, &s.plane()?)?;
        println!("{} {} cusp {}: {} rays, chow ranks {:?}, euler {}", s.equation(), s.label, s.cusp, sf.rays().len(), sf.chow_ranks()?, sf.euler());
    }
    if let Some(name) = character {
        let m = CharacterMonomial::from_name(&name)?;
        let rs = RootSystem::new()?;
        let d = character_divisor(&w, &m);
        println!("divisor of {m}:");
        for (i, &k) in d.iter().enumerate().filter(|(_, &k)| k != 0) {
            let div = rs.divisor_of_ray(&w, i)?;
            println!("  {:>2}  {:<8} {} {}", k, w.points()[i].to_string(), div.class().name(), div.index());
        }
    }
    Ok(())
}

fn ledger(trace: bool) -> Result<()> {
    let stages = run_pipeline()?;
    let show = |name: &str, s: &crossratio_core::ledger::VarietyState| println!("{:<16} ranks {:?} euler {}", name, s.chow_ranks, s.euler);
    if trace {
        for st in &stages {
            let how = match &st.step {
                Step::Start => String::new(),
                Step::BlowUp(c) => format!("  (blow up {} x {})", c.count, c.name),
                Step::Contract(c) => format!("  (contract {} x P1 x {})", c.count, c.name),
            };
            show(&st.name, &st.state);
            if !how.is_empty() {
                println!("{how}");
            }
        }
    } else if let Some(last) = stages.last() {
        show(&last.name, &last.state);
    }
    Ok(())
}

fn chow(ring: &str, expr: Option<&str>) -> Result<()> {
    let r = ring_by_name(ring).map_err(|e| anyhow!("{e}; known rings: {}", RING_NAMES.join(", ")))?;
    match expr {
        None => print!("{r}"),
        Some(e) => {
            let p = r.parse(e)?;
            match r.eval(&p) {
                Ok(v) => println!("{v}"),
                Err(_) => println!("{}", r.display(&r.reduce(&p))),
            }
        }
    }
    Ok(())
}

fn rr(range: &str) -> Result<()> {
    let (a, b) = range.split_once("..").ok_or_else(|| anyhow!("range must look like A..B"))?;
    let (a, b): (i64, i64) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {range}");
    }
    let r = riemann_roch(&inv_ring())?;
    let terms: Vec<String> = r.coefficients.iter().zip(["n^4", "n^3", "n^2", "n", ""]).map(|(c, m)| format!("{c}{}{m}", if m.is_empty() { "" } else { " " })).collect();
    println!("chi(O(nH)) = {}", terms.join(" + "));
    for n in a..=b {
        println!("{n:>4}  {}", r.at(n));
    }
    Ok(())
}

fn chern(verify: bool) -> Result<ExitCode> {
    let inv = inv_ring();
    for name in ["c1", "c2", "c3"] {
        println!("{name} = {}", inv.display(inv.def(name).expect("defined")));
    }
    let t = todd4(&inv)?;
    println!("c4 = {}", t.c4);
    println!("c1^4 = {}, c1^2c2 = {}, c2^2 = {}, c1c3 = {}, td4 = {}", t.c1_4, t.c1sq_c2, t.c2_2, t.c1c3, t.td4);
    let b = b0_check()?;
    let r = ring_by_name("b0")?;
    let c2 = r.var("Bb").pow(2).scale(&b.c2.0).add(&r.var("Cb").pow(2).scale(&b.c2.1));
    println!("c2(B0) = {}, c1c2(B0) = {}", r.display(&c2), b.c1c2);
    let c = c3_check()?;
    println!("c3 B0 = {}, c3 C0 = {}", c.on_b0, c.on_c0);
    if !verify {
        return Ok(ExitCode::SUCCESS);
    }
    let ctx = Context::new();
    let ids = ["chow.todd", "chow.b0_chern", "chow.b0_euler", "chow.c3_coefficients", "ledger.final"];
    let mut ok = true;
    for c in checks().iter().filter(|c| ids.contains(&c.id)) {
        let r = c.run(&ctx);
        println!("{}  {}", r.status.label(), r.id);
        ok &= r.status != Status::Fail;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn gram(which: GramWhich, dump: Option<&str>, pairing: bool) -> Result<()> {
    let d = GramData::new()?;
    if pairing {
        println!("pairing rank: {} (not asserted)", d.pairing_rank());
        return Ok(());
    }
    let g = reflection_group(d.sets());
    let matrix = match which {
        GramWhich::B2 => {
            println!("rank (Bi^2 Bj^2): {}", d.rank_b2());
            Some(d.b2_matrix())
        }
        GramWhich::Full => {
            let r = d.rank_306();
            println!("rank of 306 classes: {}; of the 270 products: {}", r.full, r.pairs_only);
            Some(d.matrix_306())
        }
        GramWhich::Cusp => {
            let r = d.rank_cusp_classes();
            println!("rank of 120 cusp classes: {} (last root of each triple: {})", r.rank, r.rank_last_root);
            Some(d.cusp_matrix(TripleChoice::First))
        }
        GramWhich::Relations => {
            let (r, n) = d.relation_space_rank(&g)?;
            println!("relation orbit: {n} vectors, rank {r}");
            None
        }
        GramWhich::Decomposition => {
            let x = d.decomposition(&g)?;
            println!("{} + {} + {} = {}", x.cusp, x.squares_increase, x.s_h_increase, x.total);
            println!("cusp classes orthogonal to squares: {}", x.orthogonal);
            println!("S_h: {} + {} terms, orbit {}", x.s_h_plus_terms, x.s_h_minus_terms, x.s_h_orbit);
            None
        }
    };
    if let Some(path) = dump {
        let m = matrix.ok_or_else(|| anyhow!("no single matrix for this selection"))?;
        std::fs::write(path, to_csv(&m)).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn text_line(r: &CheckResult) -> String {
    match r.status {
        Status::Pass => format!("{}  {:<34} {}", r.status.label(), r.id, r.computed),
        _ => format!("{}  {:<34} expected {} computed {}", r.status.label(), r.id, r.expected, r.computed),
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn verify(format: Format, only: Option<&str>, explain: bool) -> Result<ExitCode> {
    let all = checks();
    if let Some(id) = only {
        if !all.iter().any(|c| c.id == id) {
            bail!("unknown check {id}");
        }
    }
    let ctx = Context::new();
    if format == Format::Markdown {
        println!("| id | status | expected | computed | provenance |");
        println!("|---|---|---|---|---|");
    }
    let mut results = Vec::new();
    for c in all.iter().filter(|c| only.is_none_or(|id| c.id == id)) {
        let r = c.run(&ctx);
        match format {
            Format::Text => {
                println!("{}", text_line(&r));
                if explain {
                    println!("      {}: {}", r.description, c.explain);
                }
            }
            Format::Json => {
                let mut v = serde_json::to_value(&r)?;
                if explain {
                    v["explain"] = json!(c.explain);
                }
                println!("{}", serde_json::to_string(&v)?);
            }
            Format::Markdown => {
                let computed = if explain { format!("{} ({})", r.computed, c.explain) } else { r.computed.clone() };
                println!(
                    "| {} | {} | {} | {} | {} |",
                    r.id,
                    r.status.label(),
                    md_cell(&r.expected),
                    md_cell(&computed),
                    serde_json::to_value(r.provenance)?.as_str().unwrap_or_default()
                );
            }
        }
        results.push(r);
    }
    let s = summarize(&results);
    if format == Format::Text {
        println!();
        println!("{:<10} {:>5} {:>5} {:>5}", "stage", "pass", "fail", "flag");
        let mut stages: Vec<&str> = Vec::new();
        for r in &results {
            let st = r.id.split('.').next().unwrap_or(r.id);
            if !stages.contains(&st) {
                stages.push(st);
            }
        }
        for st in stages {
            let of = |x: Status| results.iter().filter(|r| r.id.starts_with(st) && r.id[st.len()..].starts_with('.') && r.status == x).count();
            println!("{:<10} {:>5} {:>5} {:>5}", st, of(Status::Pass), of(Status::Fail), of(Status::Flagged));
        }
        println!("{} checks: {} passed, {} failed, {} flagged", s.total, s.passed, s.failed, s.flagged);
    }
    Ok(if s.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
