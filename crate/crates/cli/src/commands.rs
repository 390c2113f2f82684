use std::f64::consts::TAU;
use std::io::Write;

use wavefront_core::fronts::polyline::distance_to_polylines;
use wavefront_core::fronts::seeding::SheetSamples;
use wavefront_core::fronts::{
    big_front, caustic, discriminant, front_cusps, front_self_intersections, maxwell_set, momentary_front,
    DiscriminantDecomposition, DiscriminantInput, FrontCurve, TraceOptions,
};
use wavefront_core::genfam::{
    morse_family_check, morse_hypersurface_check, nondegeneracy_check, GeneratingFamily, GraphLikeFamily,
};
use wavefront_core::geomapps::surface::ParametricHypersurface;
use wavefront_core::geomapps::{curve_params, evolute, evolute_cusps, parallel_cusps, parallels};
use wavefront_core::numcore::{parse, Grid, Linspace, Polynomial, VarSet};
use wavefront_core::odegallery::{gallery_discriminant, gallery_family, gallery_front, AlphaChoice};
use wavefront_core::pdechar::{breaking_time_within, burgers, integrate_characteristics, multivalued_count};
use wavefront_core::versality::{
    default_jet_degree, k_determinacy_dimension_with_tol, lagrangian_stability_check_with_tol,
    sp_plus_versality_check_with_tol,
};

use crate::config::{check_output, load_family, Overlay};
use crate::emit::{self, csv_string, fmt_num, svg_string, table_string, Layer, Row, Viewport};
use crate::{CliError, Command, Common, CurveArgs, FamilyArgs};

/// Resolved shared settings of one invocation.
struct Ctx<'a> {
    cfg: Overlay,
    common: &'a Common,
    viewport: Option<Viewport>,
}

impl Ctx<'_> {
    fn density(&self, default: usize) -> Result<usize, CliError> {
        let d = self.cfg.or(self.common.seed_density, "seed-density", default)?;
        if d < 2 {
            return Err(CliError::Validation("--seed-density must be at least 2".into()));
        }
        Ok(d)
    }

    fn tol(&self, default: f64) -> Result<f64, CliError> {
        let t = self.cfg.or(self.common.tol, "tol", default)?;
        if !(t > 0.0) {
            return Err(CliError::Validation("--tol must be positive".into()));
        }
        Ok(t)
    }

    fn write(&self, n: usize, k: usize, rows: &[Row], layers: &[Layer]) -> Result<(), CliError> {
        if let Some(p) = self.cfg.pick(self.common.csv.clone(), "csv")? {
            emit::write(&p, &csv_string(n, k, rows))?;
        }
        if let Some(p) = self.cfg.pick(self.common.svg.clone(), "svg")? {
            emit::write(&p, &svg_string(layers, self.viewport))?;
        }
        Ok(())
    }
}

pub(crate) fn dispatch(cmd: Command, common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = Overlay::load(common.config.as_deref())?;
    check_output(cfg.pick(common.csv.clone(), "csv")?.as_ref())?;
    check_output(cfg.pick(common.svg.clone(), "svg")?.as_ref())?;
    let viewport = match cfg.pick(common.viewport.clone(), "viewport")? {
        Some(text) => Some(
            Viewport::parse(&text)
                .ok_or_else(|| CliError::Validation(format!("--viewport expects xmin:xmax:ymin:ymax, got `{text}`")))?,
        ),
        None => None,
    };
    let ctx = Ctx { cfg, common, viewport };
    match cmd {
        Command::Verify { family } => verify(&ctx, &family, out),
        Command::Front { family, t } => front(&ctx, &family, t, out),
        Command::BigFront { family, t } => big(&ctx, &family, t, out),
        Command::Caustic { family } => caustic_cmd(&ctx, &family, out),
        Command::Maxwell { family } => maxwell_cmd(&ctx, &family, out),
        Command::Discriminant { family, t } => discriminant_cmd(&ctx, &family, t, out),
        Command::Evolute { curve } => evolute_cmd(&ctx, &curve, out),
        Command::Parallels { curve, r } => parallels_cmd(&ctx, &curve, r, out),
        Command::Burgers {
            t,
            report_breaking,
            negate,
            count_at,
            csv3d,
        } => burgers_cmd(&ctx, t, report_breaking, negate, count_at, csv3d, out),
        Command::OdeGallery { germ, t, alpha } => gallery_cmd(&ctx, germ, t, alpha, out),
        Command::Versal { f, dfdx, jet, k } => versal_cmd(&ctx, f, dfdx, jet, k, out),
    }
}

struct FamilyCtx {
    label: String,
    expr: String,
    fam: GeneratingFamily<f64>,
    q_seeds: Vec<Vec<f64>>,
    grid: Grid<f64>,
    opts: TraceOptions<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Sampling {
    /// Every space axis is gridded.
    FullBox,
    /// `x1, x2` are gridded and `x3` is held fixed.
    Slice,
    /// As `Slice`, for commands that trace plane curves.
    Trace,
}

/// Offset of the default `x3` from the middle of its range, as a fraction of
/// the width; symmetric families are often degenerate on the middle plane.
const X3_OFFSET: f64 = 0.05;

fn family_ctx(ctx: &Ctx, args: &FamilyArgs, density: usize, sampling: Sampling) -> Result<FamilyCtx, CliError> {
    let path = ctx.cfg.pick(args.family.clone(), "family")?;
    let name: Option<String> = ctx.cfg.pick(args.catalog.clone(), "catalog")?;
    let loaded = load_family(path.as_deref(), name.as_deref())?;
    let fam = loaded.family;
    let (k, n) = (fam.k(), fam.n());
    if sampling == Sampling::Trace && n < 2 {
        return Err(CliError::Validation("tracing needs at least two space variables".into()));
    }
    let dom = fam.domain().clone();
    let mut axes = Vec::new();
    for i in 0..n {
        let (lo, hi) = (dom.lo()[k + i], dom.hi()[k + i]);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::Validation("the family box must be bounded in x".into()));
        }
        if i < 2 || sampling == Sampling::FullBox {
            axes.push(Linspace::new(lo, hi, density));
        } else {
            let v = ctx.cfg.or(args.x3, "x3", 0.5 * (lo + hi) + X3_OFFSET * (hi - lo))?;
            if v < lo || v > hi {
                return Err(CliError::Validation(format!("--x3 {v} is outside [{lo}, {hi}]")));
            }
            axes.push(Linspace::new(v, v, 1));
        }
    }
    let step = ctx.cfg.or(args.step, "step", 0.02)?;
    if !(step > 0.0) {
        return Err(CliError::Validation("--step must be positive".into()));
    }
    Ok(FamilyCtx {
        label: loaded.label,
        expr: loaded.expr,
        fam,
        q_seeds: loaded.q_seeds,
        grid: Grid::new(axes),
        opts: TraceOptions {
            step,
            ..TraceOptions::default()
        },
    })
}

fn planar(v: &[f64]) -> [f64; 2] {
    [v[0], v.get(1).copied().unwrap_or(0.0)]
}

fn front_layer(curves: &[FrontCurve<f64>]) -> Layer {
    let mut l = Layer::new("front");
    l.curves = curves.iter().map(|c| c.points.iter().map(|p| planar(&p.x)).collect()).collect();
    l
}

/// Keeps front points with `|F - t|` and `|dF/dq|` below `tol`; returns the number dropped.
fn filter_fronts(fam: &GeneratingFamily<f64>, curves: &mut [FrontCurve<f64>], tol: f64) -> Result<usize, CliError> {
    let mut dropped = 0;
    for c in curves.iter_mut() {
        let before = c.points.len();
        let mut kept = Vec::with_capacity(before);
        for p in c.points.drain(..) {
            let z = fam.join(&p.q, &p.x);
            let r = (fam.value(&z)? - c.t).abs().max(fam.dq(&z)?.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            if r <= tol {
                kept.push(p);
            }
        }
        dropped += before - kept.len();
        c.points = kept;
    }
    Ok(dropped)
}

fn front_rows(curves: &[FrontCurve<f64>]) -> Vec<Row> {
    curves
        .iter()
        .flat_map(|c| {
            c.points.iter().map(move |p| Row {
                t: c.t,
                x: p.x.clone(),
                q: p.q.clone(),
                label: "front",
            })
        })
        .collect()
}

fn verify(ctx: &Ctx, args: &FamilyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(12)?;
    let tol = ctx.tol(1e-8)?;
    let fc = family_ctx(ctx, args, density, Sampling::FullBox)?;
    let fam = &fc.fam;
    let gl = GraphLikeFamily::new(fam.clone());
    writeln!(out, "family {}: {} (k = {}, n = {})", fc.label, fc.expr, fam.k(), fam.n())?;
    let samples = SheetSamples::new(fam, &fc.grid, &fc.q_seeds)?;
    let points: Vec<_> = samples.points().filter(|cp| cp.residual <= tol).cloned().collect();
    let base = match fam.base_point() {
        Some(b) => Some(("base point", b.to_vec())),
        None => points.first().map(|cp| ("first sampled critical point", cp.point())),
    };
    match base {
        Some((what, z)) => {
            let m = morse_family_check(fam, &z)?;
            writeln!(out, "morse family at {what}: {} (rank {} of {})", verdict(m.pass), m.rank, fam.k())?;
        }
        None => writeln!(out, "morse family: fail (no critical point found)")?,
    }
    writeln!(out, "graph-like (dF/dt = {}): pass", fmt_num(gl.dt()))?;
    let mut nondeg = 0;
    let mut agree = 0;
    for cp in &points {
        let t = fam.value(&cp.point())?;
        let mut z = cp.point();
        z.push(t);
        let nd = nondegeneracy_check(&gl, &z)?;
        let hs = morse_hypersurface_check(&fam.shifted(t), &cp.point())?;
        nondeg += usize::from(nd);
        agree += usize::from(nd == hs.pass);
    }
    let m = points.len();
    writeln!(
        out,
        "non-degenerate: {} ({nondeg} of {m} sampled critical points)",
        verdict(m > 0 && nondeg == m)
    )?;
    writeln!(
        out,
        "morse hypersurface on the shifted family: {} (agrees at {agree} of {m})",
        verdict(m > 0 && agree == m)
    )?;
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn front(ctx: &Ctx, args: &FamilyArgs, t: Option<f64>, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(40)?;
    let tol = ctx.tol(1e-8)?;
    let t: f64 = ctx.cfg.pick(t, "t")?.ok_or_else(|| CliError::Validation("--t is required".into()))?;
    let fc = family_ctx(ctx, args, density, Sampling::Trace)?;
    let gl = GraphLikeFamily::new(fc.fam.clone());
    let samples = SheetSamples::new(&fc.fam, &fc.grid, &fc.q_seeds)?;
    let mut set = momentary_front(&gl, t, &samples.level_seeds(t), &fc.opts)?;
    let dropped = filter_fronts(&fc.fam, &mut set.curves, tol)?;
    let mut cusps = 0;
    for c in &set.curves {
        cusps += front_cusps(&gl, c)?.len();
    }
    let crossings = front_self_intersections(&set.curves).len();
    let points: usize = set.curves.iter().map(|c| c.points.len()).sum();
    writeln!(
        out,
        "front t = {}: {} curves, {points} points, {cusps} cusps, {crossings} self-intersections",
        fmt_num(t),
        set.curves.len()
    )?;
    report_losses(out, set.failures.len(), dropped)?;
    ctx.write(fc.fam.n(), fc.fam.k(), &front_rows(&set.curves), &[front_layer(&set.curves)])
}

fn report_losses(out: &mut dyn Write, failed: usize, dropped: usize) -> Result<(), CliError> {
    if failed > 0 {
        writeln!(out, "seeds that failed to project: {failed}")?;
    }
    if dropped > 0 {
        writeln!(out, "points dropped by --tol: {dropped}")?;
    }
    Ok(())
}

fn big(ctx: &Ctx, args: &FamilyArgs, t: Option<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(40)?;
    let tol = ctx.tol(1e-8)?;
    let range = ctx.cfg.range(t, "t", None)?;
    let fc = family_ctx(ctx, args, density, Sampling::Trace)?;
    let gl = GraphLikeFamily::new(fc.fam.clone());
    let samples = SheetSamples::new(&fc.fam, &fc.grid, &fc.q_seeds)?;
    let mut set = big_front(&gl, &range, |t| samples.level_seeds(t), &fc.opts)?;
    let dropped = filter_fronts(&fc.fam, &mut set.curves, tol)?;
    let points: usize = set.curves.iter().map(|c| c.points.len()).sum();
    writeln!(
        out,
        "big front: {} levels, {} curves, {points} points",
        range.values().len(),
        set.curves.len()
    )?;
    report_losses(out, set.failures.len(), dropped)?;
    ctx.write(fc.fam.n(), fc.fam.k(), &front_rows(&set.curves), &[front_layer(&set.curves)])
}

fn discriminant_rows(fam: &GeneratingFamily<f64>, d: &DiscriminantDecomposition<f64>) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for p in d.caustic_points() {
        rows.push(Row {
            t: fam.value(&fam.join(&p.q, &p.x))?,
            x: p.x,
            q: p.q,
            label: "caustic",
        });
    }
    for p in &d.maxwell {
        rows.push(Row {
            t: fam.value(&fam.join(&p.q, &p.x))?,
            x: p.x.clone(),
            q: p.q.clone(),
            label: "maxwell",
        });
    }
    for p in &d.delta {
        rows.push(Row {
            t: p.t,
            x: p.x.clone(),
            q: p.q.clone(),
            label: "delta",
        });
    }
    Ok(rows)
}

fn discriminant_layers(d: &DiscriminantDecomposition<f64>) -> Vec<Layer> {
    let mut c = Layer::new("caustic");
    for curve in &d.caustic {
        let pts: Vec<[f64; 2]> = curve.points.iter().map(|p| planar(&p.x)).collect();
        if pts.len() == 1 {
            c.points.extend(pts);
        } else {
            c.curves.push(pts);
        }
    }
    let mut m = Layer::new("maxwell");
    m.points = d.maxwell.iter().map(|p| planar(&p.x)).collect();
    let mut dl = Layer::new("delta");
    dl.points = d.delta.iter().map(|p| planar(&p.x)).collect();
    vec![c, m, dl]
}

fn residual_ok(fam: &GeneratingFamily<f64>, q: &[f64], x: &[f64], tol: f64) -> Result<bool, CliError> {
    Ok(fam.dq(&fam.join(q, x))?.iter().all(|v| v.abs() <= tol))
}

fn caustic_cmd(ctx: &Ctx, args: &FamilyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(40)?;
    let tol = ctx.tol(1e-8)?;
    let fc = family_ctx(ctx, args, density, Sampling::Trace)?;
    let samples = SheetSamples::new(&fc.fam, &fc.grid, &fc.q_seeds)?;
    let (mut curves, failures) = caustic(&fc.fam, &samples.caustic_seeds(), &fc.opts)?;
    let mut dropped = 0;
    for c in &mut curves {
        let before = c.points.len();
        let mut kept = Vec::new();
        for p in c.points.drain(..) {
            if residual_ok(&fc.fam, &p.q, &p.x, tol)? {
                kept.push(p);
            }
        }
        dropped += before - kept.len();
        c.points = kept;
    }
    let d = DiscriminantDecomposition {
        caustic: curves,
        ..Default::default()
    };
    writeln!(out, "caustic: {} curves, {} points", d.caustic.len(), d.caustic_points().len())?;
    report_losses(out, failures.len(), dropped)?;
    ctx.write(fc.fam.n(), fc.fam.k(), &discriminant_rows(&fc.fam, &d)?, &discriminant_layers(&d))
}

fn maxwell_cmd(ctx: &Ctx, args: &FamilyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(40)?;
    let tol = ctx.tol(1e-8)?;
    let fc = family_ctx(ctx, args, density, Sampling::Slice)?;
    let mut points = maxwell_set(&fc.fam, &fc.q_seeds, &fc.grid)?;
    let before = points.len();
    let mut kept = Vec::new();
    for p in points.drain(..) {
        if residual_ok(&fc.fam, &p.q, &p.x, tol)? && residual_ok(&fc.fam, &p.q_prime, &p.x, tol)? {
            kept.push(p);
        }
    }
    let d = DiscriminantDecomposition {
        maxwell: kept,
        ..Default::default()
    };
    writeln!(out, "maxwell: {} points", d.maxwell.len())?;
    report_losses(out, 0, before - d.maxwell.len())?;
    ctx.write(fc.fam.n(), fc.fam.k(), &discriminant_rows(&fc.fam, &d)?, &discriminant_layers(&d))
}

fn discriminant_cmd(ctx: &Ctx, args: &FamilyArgs, t: Option<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(40)?;
    let tol = ctx.tol(1e-6)?;
    let range = ctx.cfg.range(t, "t", None)?;
    let fc = family_ctx(ctx, args, density, Sampling::Trace)?;
    let gl = GraphLikeFamily::new(fc.fam.clone());
    let samples = SheetSamples::new(&fc.fam, &fc.grid, &fc.q_seeds)?;
    let fronts = big_front(&gl, &range, |t| samples.level_seeds(t), &fc.opts)?;
    let caustic_seeds = samples.caustic_seeds();
    let input = DiscriminantInput {
        caustic_seeds: &caustic_seeds,
        q_seeds: &fc.q_seeds,
        x_grid: &fc.grid,
        fronts: &fronts.curves,
        delta_tol: tol,
        trace: fc.opts,
    };
    let d = discriminant(&gl, &input)?;
    writeln!(
        out,
        "discriminant: caustic {} points in {} curves, maxwell {} points, delta {} points",
        d.caustic_points().len(),
        d.caustic.len(),
        d.maxwell.len(),
        d.delta.len()
    )?;
    let mut layers = vec![front_layer(&fronts.curves)];
    layers.extend(discriminant_layers(&d));
    ctx.write(fc.fam.n(), fc.fam.k(), &discriminant_rows(&fc.fam, &d)?, &layers)
}

fn curve(ctx: &Ctx, args: &CurveArgs) -> Result<ParametricHypersurface<f64>, CliError> {
    let kind: String = ctx.cfg.or(args.curve.clone(), "curve", "ellipse".to_string())?;
    let a = ctx.cfg.pick(args.a, "a")?;
    let b = ctx.cfg.pick(args.b, "b")?;
    let positive = |v: f64, what: &str| {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Validation(format!("{what} must be positive")))
        }
    };
    match kind.as_str() {
        "circle" => Ok(ParametricHypersurface::circle(positive(a.unwrap_or(1.0), "--a")?)),
        "ellipse" => Ok(ParametricHypersurface::ellipse(
            positive(a.unwrap_or(2.0), "--a")?,
            positive(b.unwrap_or(1.0), "--b")?,
        )),
        "parabola" => {
            let hw = ctx.cfg.or(args.half_width, "half-width", 2.0)?;
            Ok(ParametricHypersurface::parabola(a.unwrap_or(0.5), positive(hw, "--half-width")?))
        }
        other => Err(CliError::Validation(format!(
            "unknown curve `{other}` (circle, ellipse or parabola)"
        ))),
    }
}

/// `|dD/du|` at `(u, x)`, scaled by `|x - X(u)| |X'(u)|`.
fn criticality(surface: &ParametricHypersurface<f64>, u: &[f64], x: &[f64]) -> Result<f64, CliError> {
    let jet = surface.jet(u)?;
    let d: Vec<f64> = x.iter().zip(&jet.x).map(|(a, b)| a - b).collect();
    let tangent: Vec<f64> = jet.d1[0].clone();
    let dot: f64 = d.iter().zip(&tangent).map(|(a, b)| a * b).sum();
    let scale = d.iter().map(|v| v * v).sum::<f64>().sqrt() * tangent.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(if scale > 0.0 { dot.abs() / scale } else { 0.0 })
}

fn point_text(p: &[f64]) -> String {
    format!("({:.6}, {:.6})", p[0] + 0.0, p[1] + 0.0)
}

fn evolute_rows(
    surface: &ParametricHypersurface<f64>,
    density: usize,
    tol: f64,
) -> Result<(Vec<Row>, Vec<Vec<[f64; 2]>>, usize), CliError> {
    let params = curve_params(surface, density);
    let ev = evolute(surface, &params, 0)?;
    let mut rows = Vec::new();
    let mut pieces = vec![Vec::new()];
    let mut dropped = 0;
    for (u, x) in ev.params.iter().zip(&ev.points) {
        if criticality(surface, u, x)? > tol {
            dropped += 1;
            continue;
        }
        let base = surface.point(u)?;
        let t: f64 = x.iter().zip(&base).map(|(a, b)| (a - b) * (a - b)).sum();
        rows.push(Row {
            t,
            x: x.clone(),
            q: u.clone(),
            label: "caustic",
        });
        pieces.last_mut().expect("non-empty").push(planar(x));
    }
    if ev.closed {
        if let Some(first) = pieces[0].first().copied() {
            pieces[0].push(first);
        }
    }
    Ok((rows, pieces, dropped))
}

fn evolute_cmd(ctx: &Ctx, args: &CurveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(2000)?;
    let tol = ctx.tol(1e-8)?;
    let surface = curve(ctx, args)?;
    let (rows, pieces, dropped) = evolute_rows(&surface, density, tol)?;
    let cusps = evolute_cusps(&surface, &curve_params(&surface, density))?;
    writeln!(out, "evolute: {} points, {} cusps", rows.len(), cusps.len())?;
    for c in &cusps {
        writeln!(out, "cusp {}", point_text(c))?;
    }
    report_losses(out, 0, dropped)?;
    let mut layer = Layer::new("caustic");
    layer.curves = pieces;
    ctx.write(2, 1, &rows, &[layer])
}

fn parallels_cmd(ctx: &Ctx, args: &CurveArgs, r: Option<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let density = ctx.density(2000)?;
    let tol = ctx.tol(1e-8)?;
    let range = ctx.cfg.range(r, "r", None)?;
    let surface = curve(ctx, args)?;
    let params = curve_params(&surface, density);
    let r_values: Vec<f64> = range.values().into_iter().filter(|r| r.abs() > 1e-12).collect();
    let list = parallels(&surface, &r_values, &params)?;
    let (mut rows, ev_pieces, _) = evolute_rows(&surface, density, tol)?;
    let ev_lines: Vec<Vec<Vec<f64>>> = ev_pieces
        .iter()
        .map(|p| p.iter().map(|q| q.to_vec()).collect())
        .collect();
    let mut fronts = Layer::new("front");
    let mut worst: f64 = 0.0;
    let mut dropped = 0;
    for par in &list {
        let cusps = parallel_cusps(&surface, par)?;
        for c in &cusps {
            worst = worst.max(distance_to_polylines(c, &ev_lines));
        }
        writeln!(out, "r = {}: {} cusps", fmt_num(par.r), cusps.len())?;
        let mut line = Vec::new();
        for (u, x) in par.params.iter().zip(&par.points) {
            if criticality(&surface, u, x)? > tol {
                dropped += 1;
                continue;
            }
            rows.push(Row {
                t: par.r * par.r,
                x: x.clone(),
                q: u.clone(),
                label: "front",
            });
            line.push(planar(x));
        }
        if par.closed {
            if let Some(first) = line.first().copied() {
                line.push(first);
            }
        }
        fronts.curves.push(line);
    }
    writeln!(out, "largest cusp distance to the evolute: {:.3e}", worst)?;
    report_losses(out, 0, dropped)?;
    let mut ev = Layer::new("caustic");
    ev.curves = ev_pieces;
    ctx.write(2, 1, &rows, &[fronts, ev])
}

fn burgers_cmd(
    ctx: &Ctx,
    t: Option<String>,
    report_breaking: bool,
    negate: bool,
    count_at: Option<String>,
    csv3d: Option<std::path::PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let strips = ctx.density(400)?;
    let tol = ctx.tol(1e-6)?;
    let range = ctx.cfg.range(t, "t", Some("0:1:0.001"))?;
    let report_breaking = report_breaking || ctx.cfg.or(None, "report-breaking", false)?;
    let negate = negate || ctx.cfg.or(None, "negate", false)?;
    let csv3d = ctx.cfg.pick(csv3d, "csv3d")?;
    check_output(csv3d.as_ref())?;
    let count_at = match ctx.cfg.pick(count_at, "count-at")? {
        Some(text) => {
            let v: Option<Vec<f64>> = text.split(',').map(|s| s.trim().parse().ok()).collect();
            match v.as_deref() {
                Some(&[x, t]) => Some((x, t)),
                _ => return Err(CliError::Validation(format!("--count-at expects x,t, got `{text}`"))),
            }
        }
        None => None,
    };
    let pde = burgers::<f64>(negate);
    let grid: Vec<Vec<f64>> = Linspace::new(0.0, TAU, strips).values().into_iter().map(|x| vec![x]).collect();
    let sheet = integrate_characteristics(&pde, &grid, range.lo, range.hi, range.step)?;
    writeln!(out, "strips: {strips}, steps: {}", sheet.times.len() - 1)?;
    if report_breaking {
        match breaking_time_within(&pde, &sheet, tol)? {
            Some(t) => writeln!(out, "t* = {t:.4}")?,
            None => writeln!(out, "t* = none")?,
        }
    }
    if let Some((x, t)) = count_at {
        let n = multivalued_count(&sheet, x, t)?;
        writeln!(out, "branches at x = {}, t = {}: {n}", fmt_num(x), fmt_num(t))?;
    }
    if let Some(p) = ctx.cfg.pick(ctx.common.csv.clone(), "csv")? {
        let mut rows = Vec::new();
        for s in &sheet.strips {
            for (t, st) in sheet.times.iter().zip(&s.states) {
                rows.push(vec![s.x0[0], *t, st.x[0], st.y, st.jac[0]]);
            }
        }
        emit::write(&p, &table_string(&["x0", "t", "x", "y", "dxdx0"], &rows))?;
    }
    if let Some(p) = csv3d {
        let mut rows = Vec::new();
        for s in &sheet.strips {
            for (t, st) in sheet.times.iter().zip(&s.states) {
                rows.push(vec![st.x[0], *t, st.y]);
            }
        }
        emit::write(&p, &table_string(&["x", "t", "y"], &rows))?;
    }
    if let Some(p) = ctx.cfg.pick(ctx.common.svg.clone(), "svg")? {
        // profiles y(x) at the sampled times, one polyline each
        let mut layer = Layer::new("front");
        let every = (sheet.times.len() / 10).max(1);
        for i in (0..sheet.times.len()).step_by(every) {
            layer.curves.push(sheet.strips.iter().map(|s| [s.states[i].x[0], s.states[i].y]).collect());
        }
        emit::write(&p, &svg_string(&[layer], ctx.viewport))?;
    }
    Ok(())
}

fn gallery_cmd(
    ctx: &Ctx,
    germ: Option<usize>,
    t: Option<String>,
    alpha: Option<String>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let density = ctx.density(41)?;
    let tol = ctx.tol(1e-10)?;
    let germ: usize = ctx.cfg.pick(germ, "germ")?.ok_or_else(|| CliError::Validation("--germ is required".into()))?;
    let range = ctx.cfg.range(t, "t", Some("-1:1:0.1"))?;
    let alpha_text: String = ctx.cfg.or(alpha, "alpha", "0".to_string())?;
    let alpha = AlphaChoice::parse(&alpha_text).map_err(CliError::input)?;
    let d = gallery_family::<f64>(germ, &alpha)?;
    writeln!(out, "germ {germ} ({})", d.kind().label())?;
    let params = d.default_params(density * 10);
    let mut rows = Vec::new();
    let mut fronts = Layer::new("front");
    let mut cusps = Vec::new();
    for t in range.values() {
        let f = gallery_front(&d, t, &params);
        cusps.push(f.cusp_count().to_string());
        for piece in &f.pieces {
            let kept: Vec<_> = piece.iter().filter(|p| (d.mu(&p.u) - t).abs() <= tol).collect();
            rows.extend(kept.iter().map(|p| Row {
                t,
                x: p.xy.to_vec(),
                q: p.u.to_vec(),
                label: "front",
            }));
            fronts.curves.push(kept.iter().map(|p| p.xy).collect());
        }
    }
    writeln!(out, "fronts: {} levels, {} points", cusps.len(), rows.len())?;
    writeln!(out, "cusps per level: {}", cusps.join(" "))?;
    let disc = gallery_discriminant(&d, &range, density);
    writeln!(
        out,
        "caustic: {} points, maxwell: {} points, delta: {} points",
        disc.caustic_points().len(),
        disc.maxwell.len(),
        disc.delta.len()
    )?;
    for p in disc.caustic_points() {
        rows.push(Row {
            t: d.mu(&p.q),
            x: p.x,
            q: p.q,
            label: "caustic",
        });
    }
    for p in &disc.maxwell {
        rows.push(Row {
            t: d.mu(&p.q),
            x: p.x.clone(),
            q: p.q.clone(),
            label: "maxwell",
        });
    }
    for p in &disc.delta {
        rows.push(Row {
            t: p.t,
            x: p.x.clone(),
            q: p.q.clone(),
            label: "delta",
        });
    }
    let mut layers = vec![fronts];
    layers.extend(discriminant_layers(&disc));
    // the envelope is a curve here, so draw it as one
    if let Some(delta) = layers.last_mut() {
        if !delta.points.is_empty() {
            let pts = std::mem::take(&mut delta.points);
            delta.curves.push(pts);
        }
    }
    ctx.write(2, 2, &rows, &layers)
}

/// Largest `n` in any `q<n>` token.
fn infer_k(texts: &[&str]) -> usize {
    let mut k = 0;
    for text in texts {
        let b = text.as_bytes();
        for i in 0..b.len() {
            let starts = b[i] == b'q' && (i == 0 || !b[i - 1].is_ascii_alphanumeric());
            if starts {
                let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(n) = digits.parse::<usize>() {
                    k = k.max(n);
                }
            }
        }
    }
    k.max(1)
}

fn versal_cmd(
    ctx: &Ctx,
    f: Option<String>,
    dfdx: Option<String>,
    jet: Option<u32>,
    k: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let tol = ctx.tol(1e-8)?;
    let f_text: String = ctx.cfg.pick(f, "f")?.ok_or_else(|| CliError::Validation("--f is required".into()))?;
    let dfdx_text: String = ctx.cfg.or(dfdx, "dfdx", String::new())?;
    let parts: Vec<&str> = dfdx_text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    let mut all = vec![f_text.as_str()];
    all.extend(&parts);
    let k = ctx.cfg.or(k, "k", infer_k(&all))?;
    let vars = VarSet::indexed("q", k);
    let poly = |s: &str| -> Result<Polynomial, CliError> {
        Ok(parse(s, &vars).map_err(CliError::input)?.to_polynomial(k))
    };
    let fp = poly(&f_text)?;
    let velocities = parts.iter().map(|s| poly(s)).collect::<Result<Vec<_>, _>>()?;
    let l = ctx.cfg.or(jet, "jet", default_jet_degree(&fp))?;
    writeln!(out, "f = {f_text} (k = {k}, jet degree {l})")?;
    let lag = lagrangian_stability_check_with_tol(&fp, &velocities, l, tol)?;
    writeln!(
        out,
        "lagrangian stability: {} (defect {})",
        verdict(lag.passes),
        lag.codimension_defect
    )?;
    if !lag.passes {
        writeln!(out, "witnesses: {}", lag.witness_text(&vars).join(", "))?;
    }
    let sp = sp_plus_versality_check_with_tol(&fp, &velocities, l, tol)?;
    writeln!(out, "S.P+ versality: {} (defect {})", verdict(sp.passes), sp.codimension_defect)?;
    if !sp.passes {
        let mut tvars: Vec<String> = vars.names().to_vec();
        tvars.push("t".into());
        writeln!(out, "witnesses: {}", sp.witness_text(&VarSet::new(tvars)).join(", "))?;
    }
    let det = k_determinacy_dimension_with_tol(&fp, l, tol)?;
    writeln!(out, "determinacy dimension: {det}")?;
    Ok(())
}
