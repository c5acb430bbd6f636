use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use toric_core::chow::{chow_groups, chow_ring_stack, verify_vanishing_for, VanishingReport};
use toric_core::cox::{chow_ideals, cox, global_power, strong_divisor_check, ChartReport};
use toric_core::fan::{
    primitive_collections, star_subdivision, validate_fan, Fan, FanJson, FanViolation,
};
use toric_core::graded::{GradedRing, PieceSummary, Poly};
use toric_core::ktheory::{
    boxed_quotient, k_ring_stack, verify_k_vanishing, BoxedQuotient, KVanishingReport, LaurentElem,
};
use toric_core::lattice::{GroupSummary, IntMatrix};

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Exact Chow and K-theory computations for toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check that the input is a fan.
    Validate(Common),
    /// Star subdivision of a maximal cone.
    Subdivide {
        #[command(flatten)]
        common: Common,
        /// Index of the maximal cone to subdivide (default: the only one).
        #[arg(long)]
        cone: Option<usize>,
    },
    /// Cox data: character group, weights, kernel lattice, primitive collections.
    Cox {
        #[command(flatten)]
        common: Common,
        /// Also report strongness of the divisor of this ray (0-based).
        #[arg(long)]
        ray: Option<usize>,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Chow ring of the canonical stack.
    ChowStack {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
    },
    /// Chow groups A_k from orbit closures.
    ChowGroups {
        #[command(flatten)]
        common: Common,
        /// Dimension k; all dimensions when omitted.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Grothendieck ring of the canonical stack, truncated to a box.
    KtheoryStack {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", default_value_t = 3)]
        radius: i64,
    },
    /// Certify vanishing of the operational Chow ring of an affine toric variety.
    VerifyVanishing {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
    },
    /// Certify vanishing of operational K-theory of an affine toric variety.
    VerifyKVanishing {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", default_value_t = 3)]
        radius: i64,
    },
    /// Per-chart strongness of a toric divisor.
    Strongness {
        #[command(flatten)]
        common: Common,
        /// Ray whose divisor is tested (default: the last ray).
        #[arg(long)]
        ray: Option<usize>,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Fan JSON file.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Fan interchange JSON, optionally carrying a weight matrix for `strongness`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Input {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    weights: Option<Vec<Vec<i64>>>,
}

struct Report {
    text: String,
    code: u8,
}

fn load(path: &Path) -> Result<(Fan, Option<Vec<Vec<i64>>>)> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let input: Input = serde_json::from_str(&raw)
        .with_context(|| format!("malformed fan JSON in {}", path.display()))?;
    let fan = Fan::from_json(&FanJson {
        rank: input.rank,
        rays: input.rays,
        max_cones: input.max_cones,
    })
    .context("input is not a fan")?;
    Ok((fan, input.weights))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn chart_name(invertible: &[usize]) -> String {
    let vars: String = invertible.iter().map(|i| format!("x{}", i + 1)).collect();
    format!("D({vars})")
}

fn ring_text(n_vars: usize, linear: &[Vec<i64>], monomials: &[Vec<usize>]) -> String {
    let vars = if n_vars == 0 {
        String::new()
    } else {
        format!("s1..s{n_vars}")
    };
    let gens: Vec<String> = linear
        .iter()
        .map(|l| Poly::linear(l).render("s"))
        .chain(
            monomials
                .iter()
                .map(|m| Poly::product_of_vars(n_vars, m).render("s")),
        )
        .collect();
    format!("Z[{vars}]/({})", gens.join(", "))
}

fn pieces_text(out: &mut String, pieces: &[PieceSummary]) {
    for p in pieces {
        let g = GroupSummary {
            free_rank: p.free_rank,
            torsion: p.torsion.clone(),
        };
        let _ = writeln!(out, "  degree {}: {g}", p.degree);
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct ValidateReport {
    ok: bool,
    n_rays: usize,
    n_maximal_cones: usize,
    simplicial: bool,
    smooth: bool,
    violation: Option<FanViolation>,
}

fn validate(common: &Common) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let violation = validate_fan(&f).err();
    let r = ValidateReport {
        ok: violation.is_none(),
        n_rays: f.n_rays(),
        n_maximal_cones: f.maximal_cones().len(),
        simplicial: f.is_simplicial(),
        smooth: f.is_smooth(),
        violation,
    };
    let code = if r.ok { 0 } else { 2 };
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => match &r.violation {
            None => format!(
                "fan ok: {} rays, {} maximal cones, simplicial {}, smooth {}\n",
                r.n_rays,
                r.n_maximal_cones,
                yes(r.simplicial),
                yes(r.smooth)
            ),
            Some(v) => format!("not a fan: {v}\n"),
        },
    };
    Ok(Report { text, code })
}

fn subdivide(common: &Common, cone: Option<usize>) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let idx = match (cone, f.maximal_cones().len()) {
        (Some(i), n) if i < n => i,
        (Some(i), n) => bail!("cone index {i} out of range: the fan has {n} maximal cones"),
        (None, 1) => 0,
        (None, n) => bail!("the fan has {n} maximal cones; choose one with --cone"),
    };
    let c = f.cone(&f.maximal_cones()[idx]);
    let s = star_subdivision(&f, &c)?;
    let text = match common.format {
        Format::Json => json(&s.to_json())?,
        Format::Text => {
            let mut out = String::new();
            let v = c.star_vector()?;
            let _ = writeln!(out, "star vector {} (ray {})", vector(&v), s.n_rays());
            for (i, r) in s.rays().iter().enumerate() {
                let _ = writeln!(out, "  ray {}: {}", i + 1, vector(r));
            }
            for m in s.maximal_cones() {
                let one_based: Vec<String> = m.iter().map(|i| (i + 1).to_string()).collect();
                let _ = writeln!(out, "  cone {{{}}}", one_based.join(","));
            }
            let pcs: Vec<String> = primitive_collections(&s)
                .iter()
                .map(|p| {
                    let v: Vec<String> = p.iter().map(|i| format!("x{}", i + 1)).collect();
                    format!("{{{}}}", v.join(","))
                })
                .collect();
            let _ = writeln!(out, "primitive collections: {}", pcs.join(" "));
            out
        }
    };
    Ok(Report { text, code: 0 })
}

#[derive(Serialize)]
struct CoxReport {
    rank: usize,
    rays: Vec<Vec<i64>>,
    char_group: GroupSummary,
    /// One row per normal-form coordinate of `X(G)`, torsion coordinates first.
    weights: Vec<Vec<i64>>,
    kernel: Vec<Vec<i64>>,
    primitive_collections: Vec<Vec<usize>>,
    ideals: Vec<Vec<usize>>,
    strongness: Option<Vec<ChartReport>>,
}

fn cox_report(common: &Common, ray: Option<usize>, bound: u64) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let cd = cox(&f)?;
    let strongness = ray.map(|m| cd.strongness(m, bound)).transpose()?;
    let r = CoxReport {
        rank: f.ambient_rank(),
        rays: f.rays().to_vec(),
        char_group: cd.char_group.summary(),
        weights: cd.weights.to_i64_rows(),
        kernel: cd.kernel.to_i64_rows(),
        primitive_collections: cd.primitive_collections.clone(),
        ideals: chow_ideals(&cd).monomial_gens,
        strongness,
    };
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "X(G) = {}", r.char_group);
            let t = r.char_group.torsion.len();
            for (row, d) in r.weights.iter().zip(&r.char_group.torsion) {
                let _ = writeln!(out, "weights mod {d} {}", vector(row));
            }
            for row in &r.weights[t..] {
                let _ = writeln!(out, "weights {}", vector(row));
            }
            let _ = writeln!(out, "kernel lattice (HNF):");
            for row in &r.kernel {
                let _ = writeln!(out, "  {}", vector(row));
            }
            let pcs: Vec<String> = r
                .primitive_collections
                .iter()
                .map(|p| {
                    let v: Vec<String> = p.iter().map(|i| format!("x{}", i + 1)).collect();
                    format!("{{{}}}", v.join(","))
                })
                .collect();
            let _ = writeln!(
                out,
                "primitive collections: {}",
                if pcs.is_empty() {
                    "none".into()
                } else {
                    pcs.join(" ")
                }
            );
            if let (Some(m), Some(reports)) = (ray, &r.strongness) {
                strongness_text(&mut out, m, reports);
            }
            out
        }
    };
    Ok(Report { text, code: 0 })
}

#[derive(Serialize)]
struct ChowStackReport {
    n_vars: usize,
    linear_gens: Vec<Vec<i64>>,
    monomial_gens: Vec<Vec<usize>>,
    pieces: Vec<PieceSummary>,
}

fn chow_stack(common: &Common, max_deg: usize) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let cd = cox(&f)?;
    let ideals = chow_ideals(&cd);
    let pieces = GradedRing::new(&chow_ring_stack(&f)?).summaries(max_deg);
    let r = ChowStackReport {
        n_vars: ideals.n_vars,
        linear_gens: ideals.linear_gens,
        monomial_gens: ideals.monomial_gens,
        pieces,
    };
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => {
            let mut out = format!(
                "A*(X) = {}\n",
                ring_text(r.n_vars, &r.linear_gens, &r.monomial_gens)
            );
            pieces_text(&mut out, &r.pieces);
            out
        }
    };
    Ok(Report { text, code: 0 })
}

#[derive(Serialize)]
struct ChowGroup {
    k: usize,
    group: GroupSummary,
}

fn chow_groups_report(common: &Common, k: Option<usize>) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=f.ambient_rank()).collect(),
    };
    let groups = ks
        .into_iter()
        .map(|k| {
            Ok(ChowGroup {
                k,
                group: chow_groups(&f, k)?.summary(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match common.format {
        Format::Json => json(&groups)?,
        Format::Text => groups
            .iter()
            .map(|g| format!("A_{} = {}\n", g.k, g.group))
            .collect(),
    };
    Ok(Report { text, code: 0 })
}

#[derive(Serialize)]
struct KStackReport {
    group: GroupSummary,
    generator_images: Vec<Vec<i64>>,
    primitive_collections: Vec<Vec<usize>>,
    ideal_gens: Vec<LaurentElem>,
    boxed: BoxedQuotient,
}

fn ktheory_stack(common: &Common, radius: i64) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let cd = cox(&f)?;
    let p = k_ring_stack(&f)?;
    let boxed = boxed_quotient(&p, radius)?;
    let r = KStackReport {
        group: p.group.summary(),
        generator_images: p.generator_images.clone(),
        primitive_collections: cd.primitive_collections.clone(),
        ideal_gens: p.ideal_gens.clone(),
        boxed,
    };
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => {
            let mut out = format!("X(G) = {}\n", r.group);
            for (i, img) in r.generator_images.iter().enumerate() {
                let class = LaurentElem {
                    terms: vec![(img.clone(), 1)],
                };
                let _ = writeln!(out, "  e{} -> {}", i + 1, class.render("x"));
            }
            let _ = writeln!(out, "relations:");
            for (pc, g) in r.primitive_collections.iter().zip(&r.ideal_gens) {
                let factors: String = pc.iter().map(|i| format!("(1 - e{}^-1)", i + 1)).collect();
                let _ = writeln!(out, "  {factors} = {}", g.render("x"));
            }
            boxed_text(&mut out, &r.boxed);
            out
        }
    };
    Ok(Report { text, code: 0 })
}

fn boxed_text(out: &mut String, b: &BoxedQuotient) {
    let torsion = if b.torsion.is_empty() {
        "none".to_string()
    } else {
        format!("{:?}", b.torsion)
    };
    let _ = writeln!(
        out,
        "box {}: {} monomials, {} relations, window rank {}, torsion {torsion}, stabilized {}",
        b.radius,
        b.n_monomials,
        b.n_relations,
        b.window_rank,
        yes(b.stabilized)
    );
}

fn vanishing_text(r: &VanishingReport) -> String {
    let mut out = String::new();
    let cmp = &r.comparison;
    let v = cmp.star_ray;
    let rays: Vec<String> = cmp
        .subdivision
        .rays
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != v)
        .map(|(_, r)| vector(r))
        .collect();
    let _ = writeln!(out, "cone: {}", rays.join(" "));
    let _ = writeln!(
        out,
        "star vector: {} (ray {})",
        vector(&cmp.subdivision.rays[v]),
        v + 1
    );
    let sp = &r.subdivision_presentation;
    let ep = &r.exceptional_presentation;
    let _ = writeln!(
        out,
        "A*(X(sigma*)) = {}",
        ring_text(sp.n_vars, &sp.linear_gens, &sp.monomial_gens)
    );
    let _ = writeln!(
        out,
        "A*(E) = {}",
        ring_text(ep.n_vars, &ep.linear_gens, &ep.monomial_gens)
    );
    match cmp.extra_form_text() {
        Some(t) => {
            let _ = writeln!(out, "s{} -> {t}", v + 1);
        }
        None => {
            let _ = writeln!(
                out,
                "s{} has no integral expression in the other classes",
                v + 1
            );
        }
    }
    if !cmp.well_defined {
        let _ = writeln!(out, "restriction map is not well defined");
    }
    for d in &cmp.verdicts {
        let _ = writeln!(
            out,
            "  degree {}: {} -> {} {}",
            d.degree,
            d.source,
            d.target,
            if d.iso { "iso" } else { "not iso" }
        );
    }
    let _ = writeln!(
        out,
        "preimage of V(sigma) is V(rho_v): {}",
        yes(r.preimage_ok)
    );
    let _ = writeln!(
        out,
        "A*(X(sigma*)) torsion-free through degree {}: {}",
        r.max_deg,
        yes(r.torsion_free())
    );
    if r.conclusion {
        let _ = writeln!(out, "A^k_op vanishes for k=1..{} (checked)", r.max_deg);
    } else {
        let _ = writeln!(
            out,
            "vanishing of A^k_op for k=1..{} not certified",
            r.max_deg
        );
    }
    out
}

fn verify(common: &Common, max_deg: usize) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let r = verify_vanishing_for(&f, max_deg)?;
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => vanishing_text(&r),
    };
    Ok(Report {
        text,
        code: if r.conclusion { 0 } else { 1 },
    })
}

fn k_vanishing_text(r: &KVanishingReport) -> String {
    let c = &r.comparison;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "characters X(G') -> X(G) iso: {}",
        yes(c.characters_iso)
    );
    let _ = writeln!(
        out,
        "relation generators match: {}",
        yes(c.generators_match)
    );
    out.push_str("subdivision ");
    boxed_text(&mut out, &c.subdivision);
    out.push_str("exceptional ");
    boxed_text(&mut out, &c.exceptional);
    let _ = match r.conclusion {
        Some(true) => writeln!(
            out,
            "K^k_op vanishes in positive degrees (checked, box {})",
            c.radius
        ),
        Some(false) => writeln!(out, "vanishing of K_op not certified (box {})", c.radius),
        None => writeln!(out, "inconclusive: box {} did not stabilize", c.radius),
    };
    out
}

fn verify_k(common: &Common, radius: i64) -> Result<Report> {
    let (f, _) = load(&common.input)?;
    let r = verify_k_vanishing(&f, radius)?;
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => k_vanishing_text(&r),
    };
    Ok(Report {
        text,
        code: if r.conclusion == Some(true) { 0 } else { 1 },
    })
}

fn strongness_text(out: &mut String, m: usize, reports: &[ChartReport]) {
    for r in reports {
        let power = r
            .min_power
            .map_or_else(|| "none within bound".to_string(), |k| k.to_string());
        let _ = writeln!(
            out,
            "{}: weight of x{} in span {}, least power {power}",
            chart_name(&r.invertible),
            m + 1,
            yes(r.in_span)
        );
    }
    match global_power(reports) {
        Some(k) => {
            let _ = writeln!(out, "(x{}^{k}) is locally generated", m + 1);
        }
        None => {
            let _ = writeln!(out, "no common power within the bound");
        }
    }
}

#[derive(Serialize)]
struct StrongnessReport {
    ray: usize,
    charts: Vec<ChartReport>,
    global_power: Option<u64>,
}

fn strongness(common: &Common, ray: Option<usize>, bound: u64) -> Result<Report> {
    let (f, weights) = load(&common.input)?;
    let m = ray.unwrap_or(f.n_rays().saturating_sub(1));
    let charts = match weights {
        Some(rows) => {
            if rows.iter().any(|r| r.len() != f.n_rays()) {
                bail!("weights must have one column per ray ({} rays)", f.n_rays());
            }
            let w = IntMatrix::from_rows(f.n_rays(), &rows);
            strong_divisor_check(&w, &f, m, bound)?
        }
        None => cox(&f)?.strongness(m, bound)?,
    };
    let r = StrongnessReport {
        ray: m,
        global_power: global_power(&charts),
        charts,
    };
    let text = match common.format {
        Format::Json => json(&r)?,
        Format::Text => {
            let mut out = String::new();
            strongness_text(&mut out, m, &r.charts);
            out
        }
    };
    Ok(Report { text, code: 0 })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.verb {
        Verb::Validate(c) => validate(c),
        Verb::Subdivide { common, cone } => subdivide(common, *cone),
        Verb::Cox { common, ray, bound } => cox_report(common, *ray, *bound),
        Verb::ChowStack { common, max_deg } => chow_stack(common, *max_deg),
        Verb::ChowGroups { common, k } => chow_groups_report(common, *k),
        Verb::KtheoryStack { common, radius } => ktheory_stack(common, *radius),
        Verb::VerifyVanishing { common, max_deg } => verify(common, *max_deg),
        Verb::VerifyKVanishing { common, radius } => verify_k(common, *radius),
        Verb::Strongness { common, ray, bound } => strongness(common, *ray, *bound),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.text);
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
