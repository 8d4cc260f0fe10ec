use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;
use udesign_core::chartheory::{
    close_group, CharacterTable, GeneratorsJson, GroupInput, TheoremReport, DEFAULT_GROUP_CAP,
};
use udesign_core::designs::{
    frame_potential, verify_design_moment, verify_design_sectors, MomentReport, SectorReport,
    VerifyOptions, WeightedUnitarySet,
};
use udesign_core::groups;
use udesign_core::ortho_lift::{epsilon_propagate, estimate_epsilon, lift_design, LiftParameters};
use udesign_core::rotation::{
    construct_2design, gauss_cosine_double_sum, gauss_sine_sum, RotationParameters,
};

use crate::args::*;
use crate::output::{finite, read_file, sci, to_json, write_file};

/// Largest design whose frame potential `verify` reports.
const FRAME_POTENTIAL_CAP: u128 = 5000;
/// Sector reports are produced up to this order.
const SECTOR_MAX_T: usize = 4;
/// Largest dimension `construct-2design --verify` accepts.
const VERIFY_MAX_DIM: usize = 6;

pub fn run(cli: Cli) -> anyhow::Result<bool> {
    let ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
    };
    match cli.command {
        Command::Construct2Design(a) => construct(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Gauss(a) => gauss(&ctx, a),
        Command::CheckGroup(a) => check_group(&ctx, a),
        Command::Lift(a) => lift(&ctx, a),
        Command::Epsilon(a) => epsilon(&ctx, a),
        Command::ExportGroup(a) => export_group(&ctx, a),
    }
}

struct Ctx {
    json: bool,
    seed: u64,
}

impl Ctx {
    fn options(&self, tol: f64, probes: Option<usize>) -> VerifyOptions {
        VerifyOptions {
            tol,
            probes,
            seed: self.seed,
        }
    }

    fn emit<T: Serialize>(&self, report: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
        if self.json {
            print!("{}", to_json(report)?);
        } else {
            print!("{}", text());
        }
        Ok(())
    }
}

fn load_design(path: &Path) -> anyhow::Result<WeightedUnitarySet> {
    let text = read_file(path)?;
    WeightedUnitarySet::from_json_str(&text)
        .with_context(|| format!("invalid design file {}", path.display()))
}

fn check_parent(path: &Path) -> anyhow::Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            bail!("output directory {} does not exist", p.display())
        }
        _ => Ok(()),
    }
}

fn sector_lines(report: &SectorReport) -> String {
    let mut s = String::new();
    for dev in &report.sectors {
        let flag = if dev.max_deviation > report.tolerance {
            "  FAIL"
        } else {
            ""
        };
        s += &format!(
            "  sector ({}, {}): {}{flag}\n",
            dev.gamma,
            dev.eta,
            sci(dev.max_deviation)
        );
    }
    s
}

fn worst_pair(report: &SectorReport) -> String {
    report
        .worst
        .as_ref()
        .map_or_else(|| "none".to_string(), |(g, e)| format!("({g}, {e})"))
}

#[derive(Serialize)]
struct ConstructReport {
    command: &'static str,
    dimension: usize,
    parameters: RotationParameters,
    cardinality: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moment: Option<MomentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sectors: Option<SectorReport>,
    pass: bool,
}

fn construct(ctx: &Ctx, a: ConstructArgs) -> anyhow::Result<bool> {
    let d = a.dim as usize;
    if a.verify && d > VERIFY_MAX_DIM {
        bail!("--verify supports d ≤ {VERIFY_MAX_DIM}, got {d}");
    }
    if let Some(out) = &a.out {
        check_parent(out)?;
    }
    let (design, params) = construct_2design(d)?;
    let (mut moment, mut sectors) = (None, None);
    if a.verify {
        moment = Some(verify_design_moment(&design, 2, ctx.options(a.tol, None))?);
        sectors = Some(verify_design_sectors(&design, 2, ctx.options(a.tol, None))?);
    }
    let pass = moment.as_ref().is_none_or(|m| m.pass) && sectors.as_ref().is_none_or(|s| s.pass);
    let serialized = design.to_json_string();
    match &a.out {
        Some(out) => write_file(out, &serialized)?,
        None if !a.verify && !ctx.json => {
            print!("{serialized}");
            return Ok(true);
        }
        None => {}
    }
    let report = ConstructReport {
        command: "construct-2design",
        dimension: d,
        parameters: params,
        cardinality: design.cardinality().to_string(),
        output: a.out.as_ref().map(|p| p.display().to_string()),
        moment,
        sectors,
        pass,
    };
    ctx.emit(&report, || {
        let p = &report.parameters;
        let mut s = format!(
            "d = {d}: q(d) = {}, x* = {}, t* = {}, overlap residual {}\n|design| = {}\n",
            p.q_d,
            p.x_star,
            p.t_star,
            sci(p.residual),
            report.cardinality
        );
        if let Some(out) = &report.output {
            s += &format!("wrote {out}\n");
        }
        if let (Some(m), Some(sec)) = (&report.moment, &report.sectors) {
            s += &format!(
                "moment path: max deviation {} over {} probes (tol {})\n",
                sci(m.max_deviation),
                m.probes,
                sci(m.tolerance)
            );
            s += &format!(
                "sector path: max deviation {} (worst pair {})\n",
                sci(sec.max_deviation),
                worst_pair(sec)
            );
            if !report.pass {
                s += &format!("FAIL: sector pair {} exceeds tolerance\n", worst_pair(sec));
            } else {
                s += "PASS\n";
            }
        }
        s
    })?;
    Ok(pass)
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    design: String,
    dimension: usize,
    t: usize,
    cardinality: String,
    moment: MomentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    sectors: Option<SectorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame_potential: Option<f64>,
    pass: bool,
}

fn verify(ctx: &Ctx, a: VerifyArgs) -> anyhow::Result<bool> {
    let design = load_design(&a.design)?;
    let t = a.t as usize;
    let opts = ctx.options(a.tol, a.probes);
    let moment = verify_design_moment(&design, t, opts)?;
    let sectors = if t <= SECTOR_MAX_T {
        Some(verify_design_sectors(&design, t, opts)?)
    } else {
        None
    };
    let frame = if design.cardinality() <= FRAME_POTENTIAL_CAP && t <= 4 {
        Some(frame_potential(&design, t)?)
    } else {
        None
    };
    let pass = moment.pass && sectors.as_ref().is_none_or(|s| s.pass);
    let report = VerifyReport {
        command: "verify",
        design: a.design.display().to_string(),
        dimension: design.dim(),
        t,
        cardinality: design.cardinality().to_string(),
        moment,
        sectors,
        frame_potential: frame,
        pass,
    };
    ctx.emit(&report, || {
        let m = &report.moment;
        let mut s = format!(
            "{} (d = {}, |design| = {}), t = {t}\nmoment path: max deviation {} over {} probes (tol {})\n",
            report.design,
            report.dimension,
            report.cardinality,
            sci(m.max_deviation),
            m.probes,
            sci(m.tolerance)
        );
        if let Some(sec) = &report.sectors {
            s += &format!("sector path: max deviation {} (worst pair {})\n", sci(sec.max_deviation), worst_pair(sec));
            s += &sector_lines(sec);
        }
        if let Some(fp) = report.frame_potential {
            s += &format!("frame potential: {fp}\n");
        }
        s += if report.pass { "PASS\n" } else { "FAIL\n" };
        s
    })?;
    Ok(pass)
}

#[derive(Serialize)]
struct GaussRow {
    d: usize,
    q_closed: f64,
    q_brute: f64,
    cosine_closed: f64,
    cosine_brute: f64,
    q_diff: f64,
    cosine_diff: f64,
}

#[derive(Serialize)]
struct GaussReport {
    command: &'static str,
    rows: Vec<GaussRow>,
    pass: bool,
}

fn gauss_row(d: usize) -> GaussRow {
    use std::f64::consts::PI;
    let df = d as f64;
    // Reduce the phase modulo d before converting to keep the arguments small.
    let q_brute: f64 = (0..d)
        .map(|j| (4.0 * PI * ((j * j) % d) as f64 / df).sin())
        .sum();
    let mut cosine_brute = 0.0;
    for j in 0..d {
        for k in 0..d {
            cosine_brute += (8.0 * PI * ((j * k) % d) as f64 / df).cos();
        }
    }
    let (q_closed, cosine_closed) = (gauss_sine_sum(d), gauss_cosine_double_sum(d));
    GaussRow {
        d,
        q_closed,
        q_brute,
        cosine_closed,
        cosine_brute,
        q_diff: (q_closed - q_brute).abs(),
        cosine_diff: (cosine_closed - cosine_brute).abs(),
    }
}

fn gauss(ctx: &Ctx, a: GaussArgs) -> anyhow::Result<bool> {
    if a.from > a.to {
        bail!("--from ({}) exceeds --to ({})", a.from, a.to);
    }
    let rows: Vec<GaussRow> = (a.from as usize..=a.to as usize).map(gauss_row).collect();
    let pass = rows
        .iter()
        .all(|r| r.q_diff <= 1e-9 && r.cosine_diff <= 1e-8);
    let report = GaussReport {
        command: "gauss",
        rows,
        pass,
    };
    ctx.emit(&report, || {
        let mut s = format!(
            "{:>4} {:>22} {:>22} {:>10} {:>22} {:>10}\n",
            "d", "q(d) closed", "q(d) brute", "cos closed", "cos brute", "max |diff|"
        );
        for r in &report.rows {
            s += &format!(
                "{:>4} {:>22.15} {:>22.15} {:>10} {:>22.15} {:>10}\n",
                r.d,
                r.q_closed,
                r.q_brute,
                r.cosine_closed,
                r.cosine_brute,
                sci(r.q_diff.max(r.cosine_diff))
            );
        }
        s
    })?;
    Ok(pass)
}

fn check_group(ctx: &Ctx, a: CheckGroupArgs) -> anyhow::Result<bool> {
    let d = a.dim as usize;
    let mut inputs = Vec::new();
    for path in &a.tables {
        let table = CharacterTable::from_json_str(&read_file(path)?)
            .with_context(|| format!("invalid character table {}", path.display()))?;
        let rep = table
            .default_rep(d)
            .with_context(|| format!("no degree-{d} representation in {}", path.display()))?;
        inputs.push(GroupInput::Table { table, rep });
    }
    for path in &a.generators {
        let gens: GeneratorsJson = serde_json::from_str(&read_file(path)?)
            .with_context(|| format!("invalid generator file {}", path.display()))?;
        inputs.push(GroupInput::Matrix(gens.close(DEFAULT_GROUP_CAP)?));
    }
    for name in &a.names {
        inputs.push(GroupInput::Matrix(
            close_group(&groups::named_generators(name)?, DEFAULT_GROUP_CAP)?
                .with_name(name.clone()),
        ));
    }
    if inputs.is_empty() {
        bail!("give at least one --table, --generators or --name");
    }
    for g in &inputs {
        if g.dim() != d {
            bail!(
                "group {} acts in dimension {}, expected {d}",
                g.name(),
                g.dim()
            );
        }
    }
    let report: TheoremReport =
        udesign_core::chartheory::check_theorem_conditions(&inputs, a.t as usize, d)?;
    ctx.emit(&report, || {
        let mut s = format!(
            "t = {}, d = {}, groups: {}\n",
            report.t,
            report.dimension,
            report.groups.join(", ")
        );
        for dg in &report.diagrams {
            s += &format!(
                "  {}: norms {:?}, irreducible in {:?}\n",
                dg.gamma, dg.norms, dg.covered_by
            );
        }
        for p in &report.pairs {
            s += &format!(
                "  ({}, {}): overlaps {:?}, separated in {:?}\n",
                p.gamma, p.eta, p.overlaps, p.covered_by
            );
        }
        for g in &report.uncovered_diagrams {
            s += &format!("uncovered diagram {g}\n");
        }
        for (g, e) in &report.uncovered_pairs {
            s += &format!("uncovered pair ({g}, {e})\n");
        }
        if let Some(m) = &report.numerical {
            s += &format!(
                "numerical check: max deviation {} ({})\n",
                sci(m.max_deviation),
                if m.pass { "pass" } else { "fail" }
            );
        }
        s += if report.pass { "PASS\n" } else { "FAIL\n" };
        s
    })?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct LiftReport {
    command: &'static str,
    design: String,
    t: usize,
    lift: LiftParameters,
    cardinality: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
}

fn lift(ctx: &Ctx, a: LiftArgs) -> anyhow::Result<bool> {
    if let Some(out) = &a.out {
        check_parent(out)?;
    }
    let design = load_design(&a.design)?;
    let (lifted, params) = lift_design(&design, a.t as usize)?;
    let serialized = lifted.to_json_string();
    match &a.out {
        Some(out) => write_file(out, &serialized)?,
        None if !ctx.json => {
            print!("{serialized}");
            return Ok(true);
        }
        None => {}
    }
    let report = LiftReport {
        command: "lift",
        design: a.design.display().to_string(),
        t: a.t as usize,
        lift: params,
        cardinality: lifted.cardinality().to_string(),
        output: a.out.as_ref().map(|p| p.display().to_string()),
    };
    ctx.emit(&report, || {
        format!(
            "α = {} (residual {}), |lifted| = {}{}\n",
            report.lift.alpha,
            sci(report.lift.residual),
            report.cardinality,
            report
                .output
                .as_ref()
                .map_or(String::new(), |o| format!(", wrote {o}"))
        )
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct EpsilonReport {
    command: &'static str,
    design: String,
    t: usize,
    /// `null` when the design's twirl is not dominated by any multiple of the Haar twirl.
    epsilon: Option<f64>,
    /// `2ε + ε²`: the bound after one lift.
    propagated: Option<f64>,
    tolerance: f64,
    pass: bool,
}

fn epsilon(ctx: &Ctx, a: EpsilonArgs) -> anyhow::Result<bool> {
    let design = load_design(&a.design)?;
    let eps = estimate_epsilon(&design, a.t as usize)?;
    let propagated = if eps.is_finite() {
        Some(epsilon_propagate(eps)?)
    } else {
        None
    };
    let report = EpsilonReport {
        command: "epsilon",
        design: a.design.display().to_string(),
        t: a.t as usize,
        epsilon: finite(eps),
        propagated,
        tolerance: a.tol,
        pass: eps <= a.tol,
    };
    ctx.emit(&report, || {
        format!(
            "ε = {} (after lift: {}) {}\n",
            sci(eps),
            propagated.map_or("inf".to_string(), sci),
            if report.pass { "PASS" } else { "FAIL" }
        )
    })?;
    Ok(report.pass)
}

fn export_group(ctx: &Ctx, a: ExportArgs) -> anyhow::Result<bool> {
    if let Some(out) = &a.out {
        check_parent(out)?;
    }
    let gens = groups::named_generators(&a.name)?;
    let serialized = match a.format {
        ExportFormat::Generators => to_json(&GeneratorsJson::new(&a.name, &gens))?,
        ExportFormat::Design => {
            let group = close_group(&gens, DEFAULT_GROUP_CAP)?;
            let elements = if a.mod_phase {
                groups::modulo_phase(group.elements())
            } else {
                group.elements().to_vec()
            };
            WeightedUnitarySet::group(elements)?.to_json_string()
        }
    };
    match &a.out {
        Some(out) => {
            write_file(out, &serialized)?;
            if ctx.json {
                print!(
                    "{}",
                    to_json(
                        &serde_json::json!({ "command": "export-group", "name": a.name, "output": out.display().to_string() })
                    )?
                );
            } else {
                println!("wrote {}", out.display());
            }
        }
        None => print!("{serialized}"),
    }
    Ok(true)
}
