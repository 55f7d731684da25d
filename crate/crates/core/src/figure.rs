//! Standalone SVG rendering of a scene.
//!
//! Each element class is drawn as a single `<path>`. Hyperbola branches are
//! sampled separately by the hyperbolic parameter and clipped to the
//! viewport, so no segment ever joins the two branches across an asymptote.

use std::fmt::Write as _;

use crate::conics::{radical_axis, Circle, Conic};
use crate::numeric::{Scalar, Sqrt3, Tolerance};
use crate::projective::{Line, Point};
use crate::scene::Scene;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let ok = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) && xmax > xmin && ymax > ymin;
        if !ok {
            return Err(Error::InvalidInput("viewport must be finite and nonempty".into()));
        }
        Ok(Viewport { xmin, xmax, ymin, ymax })
    }

    /// Smallest box around `points`, padded by `margin` of its larger side.
    pub fn around(points: &[(f64, f64)], margin: f64) -> Result<Self> {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        let side = (xmax - xmin).max(ymax - ymin).max(1e-9);
        let pad = margin * side;
        Viewport::new(xmin - pad, xmax + pad, ymin - pad, ymax + pad)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }

    fn expanded(&self, f: f64) -> Viewport {
        let (dx, dy) = (f * self.width(), f * self.height());
        Viewport { xmin: self.xmin - dx, xmax: self.xmax + dx, ymin: self.ymin - dy, ymax: self.ymax + dy }
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [(self.xmin, self.ymin), (self.xmax, self.ymin), (self.xmax, self.ymax), (self.xmin, self.ymax)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementClass {
    Conic,
    FermatCircles,
    Reference,
    Pqr,
    PqrPrime,
    RadicalAxis,
    PerspectorAxis,
    Points,
}

impl ElementClass {
    pub const ALL: [ElementClass; 8] = [
        ElementClass::Conic,
        ElementClass::FermatCircles,
        ElementClass::Reference,
        ElementClass::Pqr,
        ElementClass::PqrPrime,
        ElementClass::RadicalAxis,
        ElementClass::PerspectorAxis,
        ElementClass::Points,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementClass::Conic => "conic",
            ElementClass::FermatCircles => "fermat-circles",
            ElementClass::Reference => "reference",
            ElementClass::Pqr => "pqr",
            ElementClass::PqrPrime => "pqr-prime",
            ElementClass::RadicalAxis => "radical-axis",
            ElementClass::PerspectorAxis => "perspector-axis",
            ElementClass::Points => "points",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub width: f64,
    pub fill: String,
    pub dash: Option<String>,
}

impl Style {
    fn stroke(color: &str, width: f64) -> Self {
        Style { stroke: color.into(), width, fill: "none".into(), dash: None }
    }

    fn dashed(mut self, dash: &str) -> Self {
        self.dash = Some(dash.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub viewport: Viewport,
    /// Output width in pixels; the height follows the viewport aspect.
    pub width_px: f64,
    /// Declared element classes, drawn in this order.
    pub styles: Vec<(ElementClass, Style)>,
    pub labels: bool,
}

impl FigureSpec {
    /// All element classes, with a viewport fitted to the scene.
    pub fn for_scene<S: Sqrt3>(scene: &Scene<S>) -> Result<Self> {
        let mut pts = scene.to_f64_points()?;
        let f1 = scene.fermat.f1.to_f64().xy()?;
        let f2 = scene.fermat.f2.to_f64().xy()?;
        let r = ((f1.0 - f2.0).powi(2) + (f1.1 - f2.1).powi(2)).sqrt();
        for c in [f1, f2] {
            pts.extend([(c.0 - r, c.1 - r), (c.0 + r, c.1 + r)]);
        }
        let styles = vec![
            (ElementClass::FermatCircles, Style::stroke("#7a7a7a", 1.0)),
            (ElementClass::RadicalAxis, Style::stroke("#7a7a7a", 1.0).dashed("6 4")),
            (ElementClass::PerspectorAxis, Style::stroke("#2a9d8f", 1.5).dashed("2 3")),
            (ElementClass::Conic, Style::stroke("#1d3557", 2.0)),
            (ElementClass::Reference, Style::stroke("#000000", 1.5)),
            (ElementClass::Pqr, Style::stroke("#e63946", 1.5)),
            (ElementClass::PqrPrime, Style::stroke("#f4a261", 1.5)),
            (ElementClass::Points, Style { fill: "#000000".into(), ..Style::stroke("none", 0.0) }),
        ];
        Ok(FigureSpec { viewport: Viewport::around(&pts, 0.08)?, width_px: 800.0, styles, labels: true })
    }
}

/// One sampled piece of a hyperbola branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPolyline {
    /// `+1` or `−1`: which branch the samples lie on.
    pub branch: i8,
    pub points: Vec<(f64, f64)>,
}

struct Principal {
    center: (f64, f64),
    transverse: (f64, f64),
    conjugate: (f64, f64),
    a: f64,
    b: f64,
}

impl Principal {
    fn at(&self, branch: f64, s: f64) -> (f64, f64) {
        let (u, v) = (branch * self.a * s.cosh(), self.b * s.sinh());
        (
            self.center.0 + u * self.transverse.0 + v * self.conjugate.0,
            self.center.1 + u * self.transverse.1 + v * self.conjugate.1,
        )
    }
}

fn principal_axes(k: &Conic<f64>, tol: &Tolerance) -> Result<Principal> {
    let [a, b, c, ..] = k.coeffs;
    let center = k.center(tol)?.xy()?;
    let k0 = k.eval(&Point::affine(center.0, center.1));
    let th = 0.5 * b.atan2(a - c);
    let (cs, sn) = (th.cos(), th.sin());
    let l1 = a * cs * cs + b * cs * sn + c * sn * sn;
    let l2 = a * sn * sn - b * sn * cs + c * cs * cs;
    let scale = k.scale();
    if l1 * l2 >= 0.0 || k0.abs() <= tol.eps * scale {
        return Err(Error::InvalidInput("conic is not a nondegenerate hyperbola".into()));
    }
    let e1 = (cs, sn);
    let e2 = (-sn, cs);
    let (transverse, conjugate, lt, lc) = if l1 * k0 < 0.0 { (e1, e2, l1, l2) } else { (e2, e1, l2, l1) };
    Ok(Principal { center, transverse, conjugate, a: (-k0 / lt).sqrt(), b: (k0 / lc).sqrt() })
}

fn chord_deviation(p: (f64, f64), q: (f64, f64), m: (f64, f64)) -> f64 {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return (m.0 - p.0).hypot(m.1 - p.1);
    }
    ((m.0 - p.0) * dy - (m.1 - p.1) * dx).abs() / len
}

fn refine(
    h: &Principal,
    branch: f64,
    (s0, p0): (f64, (f64, f64)),
    (s1, p1): (f64, (f64, f64)),
    flat: f64,
    depth: u32,
    out: &mut Vec<(f64, f64)>,
) {
    let sm = 0.5 * (s0 + s1);
    let pm = h.at(branch, sm);
    if depth > 0 && chord_deviation(p0, p1, pm) > flat {
        refine(h, branch, (s0, p0), (sm, pm), flat, depth - 1, out);
        refine(h, branch, (sm, pm), (s1, p1), flat, depth - 1, out);
    } else {
        out.push(p1);
    }
}

/// Samples both branches of a hyperbola inside `view`.
///
/// Sampling is adaptive in the hyperbolic parameter until chords deviate
/// from the curve by less than `flat` world units; each branch is then cut
/// into the runs that lie in a slightly enlarged viewport.
pub fn hyperbola_branches(k: &Conic<f64>, view: &Viewport, flat: f64, tol: &Tolerance) -> Result<Vec<BranchPolyline>> {
    let h = principal_axes(k, tol)?;
    let reach = view.corners().iter().map(|&(x, y)| (x - h.center.0).hypot(y - h.center.1)).fold(0.0, f64::max);
    let smax = (reach / h.a.min(h.b)).max(1.0).acosh() + 0.5;
    let keep = view.expanded(0.02);
    let mut out = Vec::new();
    for branch in [1.0, -1.0] {
        let n = 64;
        let mut samples = vec![h.at(branch, -smax)];
        for i in 0..n {
            let s0 = -smax + 2.0 * smax * i as f64 / n as f64;
            let s1 = -smax + 2.0 * smax * (i + 1) as f64 / n as f64;
            refine(&h, branch, (s0, h.at(branch, s0)), (s1, h.at(branch, s1)), flat, 14, &mut samples);
        }
        let mut run: Vec<(f64, f64)> = Vec::new();
        for (i, &p) in samples.iter().enumerate() {
            if keep.contains(p) {
                if run.is_empty() && i > 0 {
                    run.push(samples[i - 1]);
                }
                run.push(p);
            } else if !run.is_empty() {
                run.push(p);
                out.push(BranchPolyline { branch: branch as i8, points: std::mem::take(&mut run) });
            }
        }
        if run.len() > 1 {
            out.push(BranchPolyline { branch: branch as i8, points: run });
        }
    }
    Ok(out)
}

/// The segment of `l` inside `view`, if any.
pub fn clip_line(l: &Line<f64>, view: &Viewport) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l.coords();
    let norm = a.hypot(b);
    if norm == 0.0 || norm <= 1e-12 * c.abs() {
        return None;
    }
    let slack = 1e-12 * view.width().max(view.height());
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if b != 0.0 {
        for x in [view.xmin, view.xmax] {
            hits.push((x, -(a * x + c) / b));
        }
    }
    if a != 0.0 {
        for y in [view.ymin, view.ymax] {
            hits.push((-(b * y + c) / a, y));
        }
    }
    hits.retain(|&(x, y)| {
        x >= view.xmin - slack && x <= view.xmax + slack && y >= view.ymin - slack && y <= view.ymax + slack
    });
    let dir = (-b / norm, a / norm);
    let key = |p: &(f64, f64)| p.0 * dir.0 + p.1 * dir.1;
    let lo = hits.iter().copied().min_by(|p, q| key(p).total_cmp(&key(q)))?;
    let hi = hits.iter().copied().max_by(|p, q| key(p).total_cmp(&key(q)))?;
    (key(&hi) - key(&lo) > slack).then_some((lo, hi))
}

struct Canvas {
    view: Viewport,
    w: f64,
    h: f64,
}

impl Canvas {
    fn px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.view.xmin) / self.view.width() * self.w, (self.view.ymax - y) / self.view.height() * self.h)
    }

    fn moveto(&self, d: &mut String, p: (f64, f64)) {
        let (x, y) = self.px(p);
        let _ = write!(d, "M{x:.3} {y:.3}");
    }

    fn lineto(&self, d: &mut String, p: (f64, f64)) {
        let (x, y) = self.px(p);
        let _ = write!(d, "L{x:.3} {y:.3}");
    }

    fn polyline(&self, d: &mut String, pts: &[(f64, f64)], closed: bool) {
        for (i, &p) in pts.iter().enumerate() {
            if i == 0 {
                self.moveto(d, p);
            } else {
                self.lineto(d, p);
            }
        }
        if closed {
            d.push('Z');
        }
    }

    fn circle(&self, d: &mut String, c: (f64, f64), r_px: f64) {
        let (x, y) = self.px(c);
        let _ = write!(
            d,
            "M{:.3} {y:.3}A{r_px:.3} {r_px:.3} 0 1 0 {:.3} {y:.3}A{r_px:.3} {r_px:.3} 0 1 0 {:.3} {y:.3}Z",
            x - r_px,
            x + r_px,
            x - r_px
        );
    }
}

fn xy<S: Scalar>(p: &Point<S>) -> Result<(f64, f64)> {
    p.to_f64().xy()
}

fn triangle_xy<S: Scalar>(t: &crate::centers::Triangle<S>) -> Result<Vec<(f64, f64)>> {
    t.vertices.iter().map(xy).collect()
}

impl<S: Sqrt3> Scene<S> {
    /// Affine positions of the reference and both equilateral triangles.
    pub fn to_f64_points(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = triangle_xy(&self.triangle)?;
        out.extend(triangle_xy(&self.yiu.pqr)?);
        out.extend(triangle_xy(&self.yiu.pqr_prime)?);
        Ok(out)
    }
}

/// Renders `scene` as an SVG 1.1 document.
pub fn render<S: Sqrt3>(scene: &Scene<S>, spec: &FigureSpec, tol: &Tolerance) -> Result<String> {
    let view = spec.viewport;
    if !(spec.width_px.is_finite() && spec.width_px > 0.0) {
        return Err(Error::InvalidInput("figure width must be positive".into()));
    }
    let canvas = Canvas { view, w: spec.width_px, h: spec.width_px * view.height() / view.width() };
    let f1 = xy(&scene.fermat.f1)?;
    let f2 = xy(&scene.fermat.f2)?;
    let fp1 = Point::affine(f1.0, f1.1);
    let fp2 = Point::affine(f2.0, f2.1);
    let c1 = Circle::through(&fp2, &fp1)?;
    let c2 = Circle::through(&fp1, &fp2)?;
    let r_px = c1.radius_sq.sqrt() / view.width() * canvas.w;

    let mut body = String::new();
    for (class, style) in &spec.styles {
        let mut d = String::new();
        match class {
            ElementClass::Conic => {
                let flat = 0.25 * view.width() / canvas.w;
                for piece in hyperbola_branches(&scene.conic.to_f64(), &view, flat, tol)? {
                    canvas.polyline(&mut d, &piece.points, false);
                }
            }
            ElementClass::FermatCircles => {
                canvas.circle(&mut d, f2, r_px);
                canvas.circle(&mut d, f1, r_px);
            }
            ElementClass::Reference => canvas.polyline(&mut d, &triangle_xy(&scene.triangle)?, true),
            ElementClass::Pqr => canvas.polyline(&mut d, &triangle_xy(&scene.yiu.pqr)?, true),
            ElementClass::PqrPrime => canvas.polyline(&mut d, &triangle_xy(&scene.yiu.pqr_prime)?, true),
            ElementClass::RadicalAxis => {
                if let Some((p, q)) = clip_line(&radical_axis(&c1, &c2)?, &view) {
                    canvas.polyline(&mut d, &[p, q], false);
                }
            }
            ElementClass::PerspectorAxis => {
                if let Some((p, q)) = clip_line(&scene.axes.pqr.to_f64(), &view) {
                    canvas.polyline(&mut d, &[p, q], false);
                }
            }
            ElementClass::Points => {
                for p in [&scene.fermat.f1, &scene.fermat.f2, &scene.center] {
                    canvas.circle(&mut d, xy(p)?, 3.0);
                }
                for p in scene.perspectors.pqr.iter().filter(|p| p.is_affine()) {
                    let q = xy(p)?;
                    if view.contains(q) {
                        canvas.circle(&mut d, q, 2.0);
                    }
                }
            }
        }
        let dash = style.dash.as_ref().map(|s| format!(" stroke-dasharray=\"{s}\"")).unwrap_or_default();
        let _ = writeln!(
            body,
            "  <path class=\"{}\" d=\"{d}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"{}\"{dash}/>",
            class.name(),
            style.stroke,
            style.width,
            style.fill
        );
    }
    if spec.labels {
        let _ = writeln!(body, "  <g class=\"labels\" font-family=\"serif\" font-size=\"14\">");
        let mut label = |name: &str, p: (f64, f64)| {
            if view.contains(p) {
                let (x, y) = canvas.px(p);
                let _ = writeln!(body, "    <text x=\"{:.3}\" y=\"{:.3}\">{name}</text>", x + 4.0, y - 4.0);
            }
        };
        for (name, p) in ["A", "B", "C"].iter().zip(triangle_xy(&scene.triangle)?) {
            label(name, p);
        }
        for (name, p) in ["P", "Q", "R"].iter().zip(triangle_xy(&scene.yiu.pqr)?) {
            label(name, p);
        }
        for (name, p) in ["P′", "Q′", "R′"].iter().zip(triangle_xy(&scene.yiu.pqr_prime)?) {
            label(name, p);
        }
        label("F₁", f1);
        label("F₂", f2);
        label("O", xy(&scene.center)?);
        let _ = writeln!(body, "  </g>");
    }
    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.3} {:.3}\">",
        canvas.w, canvas.h, canvas.w, canvas.h
    );
    let _ = writeln!(
        svg,
        "  <defs><clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"{:.3}\" height=\"{:.3}\"/></clipPath></defs>",
        canvas.w, canvas.h
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#ffffff\"/>",
        canvas.w, canvas.h
    );
    let _ = writeln!(svg, "<g clip-path=\"url(#view)\">");
    svg.push_str(&body);
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
