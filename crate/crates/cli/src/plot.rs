//! SVG pictures of planar arrangements with their central curves.

use std::fmt::Write as _;

use central_curve::arrangement::{analytic_centers, enumerate_regions_with, vertices, RegionOptions};
use central_curve::catalog::format_signs;
use central_curve::centralpath::Tracer;
use central_curve::exactlin::to_f64;
use central_curve::LpInstance;
use nalgebra::{DMatrix, DVector, Vector2};

use crate::{load_instance, write_output, CliResult, Common, Failure, SideArg, EXIT_OK};

const SIZE: f64 = 800.0;
const SAMPLES: usize = 1000;
const MARGIN: f64 = 1.2;
/// Traces are cut where they leave this multiple of the viewport.
const KEEP: f64 = 3.0;

/// Affine map from the traced program's x to plane coordinates, and the
/// arrangement lines alpha . p + beta = 0 in the plane.
struct Plane {
    m: DMatrix<f64>,
    t: Vector2<f64>,
    lines: Vec<(Vector2<f64>, f64)>,
}

impl Plane {
    fn map(&self, x: &[f64]) -> Vector2<f64> {
        let p = &self.m * DVector::from_column_slice(x);
        Vector2::new(p[0], p[1]) + self.t
    }
}

fn f64_matrix(inst: &LpInstance) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>, DVector<f64>) {
    let a = inst.a().to_f64();
    let k = inst.kernel().to_f64();
    let g = DVector::from_iterator(inst.n(), inst.g().iter().map(to_f64));
    let c = DVector::from_iterator(inst.n(), inst.c().iter().map(to_f64));
    (a, k, g, c)
}

/// Primal picture: x = g + B^T z, plotted in z.
fn primal_plane(inst: &LpInstance) -> Plane {
    let (_, k, g, _) = f64_matrix(inst);
    let bbt = &k * k.transpose();
    let m = bbt.try_inverse().expect("kernel basis has full rank") * &k;
    let t = -(&m * &g);
    let lines = (0..inst.n()).map(|i| (Vector2::new(k[(0, i)], k[(1, i)]), g[i])).collect();
    Plane { m, t: Vector2::new(t[0], t[1]), lines }
}

/// Dual picture: the slacks s = A^T y - c of the original program, plotted in y.
fn dual_plane(inst: &LpInstance) -> Plane {
    let (a, _, _, c) = f64_matrix(inst);
    let m = inst.y_map().to_f64();
    let t = &m * &c;
    let lines = (0..inst.n()).map(|i| (Vector2::new(a[(0, i)], a[(1, i)]), -c[i])).collect();
    Plane { m, t: Vector2::new(t[0], t[1]), lines }
}

struct View {
    lo: Vector2<f64>,
    hi: Vector2<f64>,
}

impl View {
    fn around(points: &[Vector2<f64>]) -> View {
        let mut lo = Vector2::repeat(f64::INFINITY);
        let mut hi = Vector2::repeat(f64::NEG_INFINITY);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if points.is_empty() {
            lo = Vector2::repeat(-1.0);
            hi = Vector2::repeat(1.0);
        }
        let span = hi - lo;
        let fallback = span.max().max(1.0);
        let half = Vector2::new(
            if span[0] > 0.0 { span[0] } else { fallback },
            if span[1] > 0.0 { span[1] } else { fallback },
        ) * (MARGIN / 2.0);
        let mid = (lo + hi) / 2.0;
        View { lo: mid - half, hi: mid + half }
    }

    fn scaled(&self, f: f64) -> View {
        let mid = (self.lo + self.hi) / 2.0;
        let half = (self.hi - self.lo) * (f / 2.0);
        View { lo: mid - half, hi: mid + half }
    }

    fn contains(&self, p: &Vector2<f64>) -> bool {
        (0..2).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }

    fn px(&self, p: &Vector2<f64>) -> (f64, f64) {
        let w = self.hi - self.lo;
        ((p[0] - self.lo[0]) / w[0] * SIZE, SIZE - (p[1] - self.lo[1]) / w[1] * SIZE)
    }

    /// The visible segment of alpha . p + beta = 0, if any.
    fn clip(&self, alpha: &Vector2<f64>, beta: f64) -> Option<(Vector2<f64>, Vector2<f64>)> {
        let mut hits: Vec<Vector2<f64>> = Vec::new();
        for k in 0..2 {
            let o = 1 - k;
            if alpha[o] == 0.0 {
                continue;
            }
            for v in [self.lo[k], self.hi[k]] {
                let w = -(beta + alpha[k] * v) / alpha[o];
                if w >= self.lo[o] && w <= self.hi[o] {
                    let mut p = Vector2::zeros();
                    p[k] = v;
                    p[o] = w;
                    hits.push(p);
                }
            }
        }
        let first = *hits.first()?;
        let far = hits.iter().copied().max_by(|a, b| (a - first).norm().total_cmp(&(b - first).norm()))?;
        ((far - first).norm() > 0.0).then_some((first, far))
    }
}

/// `SAMPLES` points spaced evenly by arc length in pixel space.
fn resample(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        let d = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
        cum.push(cum.last().unwrap() + d);
    }
    let total = *cum.last().unwrap();
    if total == 0.0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(SAMPLES);
    let mut j = 0;
    for k in 0..SAMPLES {
        let target = total * k as f64 / (SAMPLES - 1) as f64;
        while j + 2 < cum.len() && cum[j + 1] < target {
            j += 1;
        }
        let seg = cum[j + 1] - cum[j];
        let f = if seg > 0.0 { ((target - cum[j]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        out.push((pts[j].0 + f * (pts[j + 1].0 - pts[j].0), pts[j].1 + f * (pts[j + 1].1 - pts[j].1)));
    }
    out
}

pub fn plot(c: &Common) -> CliResult<i32> {
    let (file, inst) = load_instance(&c.instance)?;
    let side = c.side.unwrap_or(SideArg::Primal);
    let (plane_inst, plane) = match side {
        SideArg::Primal if inst.kernel().rows() == 2 => (inst.clone(), primal_plane(&inst)),
        SideArg::Dual if inst.d() == 2 => (inst.dual()?, dual_plane(&inst)),
        SideArg::Primal => {
            return Err(Failure::unsupported(format!(
                "primal curve lives in dimension n - d = {}; plotting needs 2 (try --side dual)",
                inst.kernel().rows()
            )))
        }
        SideArg::Dual => return Err(Failure::unsupported(format!("dual curve lives in dimension d = {}; plotting needs 2", inst.d()))),
    };
    c.check_limit(&plane_inst)?;
    let verts: Vec<Vector2<f64>> = vertices(&plane_inst)
        .values()
        .map(|x| plane.map(&x.iter().map(to_f64).collect::<Vec<_>>()))
        .collect();
    let view = View::around(&verts);
    let keep = view.scaled(KEEP);
    let mut regions = enumerate_regions_with(&plane_inst, RegionOptions { limit_n: c.limit_n, full_scan: false })?;
    let centers = analytic_centers(&plane_inst, &mut regions);
    let mut opts = c.trace_options();
    opts.include_unbounded = true;
    let outcomes = Tracer::new(&plane_inst, opts).trace_all_regions()?;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(svg, "<title>{} ({} side)</title>", file.name, if side == SideArg::Primal { "primal" } else { "dual" }).unwrap();
    writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    writeln!(svg, r##"<g id="lines" stroke="#999999" stroke-width="1">"##).unwrap();
    for (i, (alpha, beta)) in plane.lines.iter().enumerate() {
        if let Some((p, q)) = view.clip(alpha, *beta) {
            let ((x1, y1), (x2, y2)) = (view.px(&p), view.px(&q));
            writeln!(svg, r#"<line data-index="{i}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#).unwrap();
        }
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, r#"<g id="curves" fill="none" stroke-width="1.5">"#).unwrap();
    let mut failed = 0;
    for o in &outcomes {
        let trace = match &o.result {
            Ok(t) => t,
            Err(e) => {
                eprintln!("warning: {}: {e}", format_signs(&o.region_sign));
                failed += 1;
                continue;
            }
        };
        let color = match (o.bounded, o.lambda_sign > 0) {
            (true, true) => "#cc0000",
            (true, false) => "#0044cc",
            (false, true) => "#e08080",
            (false, false) => "#80a0e0",
        };
        let mut pieces: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for p in &trace.points {
            let q = plane.map(&p.x);
            if keep.contains(&q) {
                pieces.last_mut().unwrap().push(view.px(&q));
            } else if !pieces.last().unwrap().is_empty() {
                pieces.push(Vec::new());
            }
        }
        for piece in pieces.iter().filter(|p| p.len() >= 2) {
            let pts = resample(piece);
            if pts.is_empty() {
                continue;
            }
            write!(
                svg,
                r#"<polyline data-region="{}" data-direction="{}" stroke="{color}" points=""#,
                format_signs(&o.region_sign),
                if o.lambda_sign > 0 { "max" } else { "min" }
            )
            .unwrap();
            let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            svg.push_str(&coords.join(" "));
            svg.push_str("\"/>\n");
        }
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, r#"<g id="vertices" fill="black">"#).unwrap();
    for v in &verts {
        let (x, y) = view.px(v);
        writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#).unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, r##"<g id="centers" stroke="#008800" stroke-width="2">"##).unwrap();
    for (r, res) in regions.iter().zip(&centers) {
        if let Ok(center) = res {
            let (x, y) = view.px(&plane.map(&center.x));
            writeln!(
                svg,
                r#"<path data-region="{}" d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}"/>"#,
                r.label(),
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            )
            .unwrap();
        }
    }
    writeln!(svg, "</g>").unwrap();
    if failed > 0 {
        writeln!(svg, "<!-- {failed} traces failed -->").unwrap();
        eprintln!("warning: {failed} traces failed and are not drawn");
    }
    writeln!(svg, "</svg>").unwrap();
    write_output(c.out.as_deref(), &svg)?;
    Ok(EXIT_OK)
}
