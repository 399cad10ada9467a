//! Deterministic SVG rendering of multiple sets: the physical scatter with
//! a color legend, and optionally the internal picture — star images of the
//! plotted points drawn inside the window regions, fiber by fiber.
//!
//! Exactness stops at the door: all geometry arrives as field elements and
//! is converted to floating point only for the final coordinate strings,
//! which use a fixed precision so identical inputs give identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cps::{CpsError, CutProjectScheme};
use crate::fingroup::FinElem;
use crate::modelset::WindowFamily;
use crate::numeric::QuadExt;
use crate::pointset::MultiPointSet;
use crate::region::RBox;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("can only draw 1- or 2-dimensional point sets, not {0}-dimensional")]
    UnsupportedDim(usize),
    #[error("internal picture supports m in {{1, 2}}, not {0}")]
    UnsupportedInternalDim(usize),
    #[error(transparent)]
    Cps(#[from] CpsError),
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#bcbd22",
    "#e377c2", "#7f7f7f",
];

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 42.0;

/// The physical scatter alone.
pub fn render_points(set: &MultiPointSet) -> Result<String, SvgError> {
    render(set, None)
}

/// The physical scatter plus the internal picture: every point's lattice
/// lifts are starred into the internal space and drawn inside the window
/// family, one panel row per finite fiber.
pub fn render_with_internal(
    set: &MultiPointSet,
    scheme: &CutProjectScheme,
    family: &WindowFamily,
) -> Result<String, SvgError> {
    render(set, Some((scheme, family)))
}

/// Two sets stacked vertically with captions — the before/after figure.
pub fn render_comparison(
    top: (&str, &MultiPointSet),
    bottom: (&str, &MultiPointSet),
) -> Result<String, SvgError> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    names.extend(top.1.color_names().into_iter().map(String::from));
    names.extend(bottom.1.color_names().into_iter().map(String::from));
    let palette = Palette::new(names);
    let h_top = scatter_height(top.1)?;
    let h_bottom = scatter_height(bottom.1)?;
    let total = h_top + h_bottom + 40.0;
    let mut s = header(total);
    caption(&mut s, 20.0, top.0);
    scatter(&mut s, top.1, &palette, 28.0, h_top - 28.0);
    caption(&mut s, h_top + 20.0, bottom.0);
    scatter(&mut s, bottom.1, &palette, h_top + 28.0, h_bottom - 28.0);
    legend(&mut s, &palette);
    s.push_str("</svg>\n");
    Ok(s)
}

fn render(
    set: &MultiPointSet,
    internal: Option<(&CutProjectScheme, &WindowFamily)>,
) -> Result<String, SvgError> {
    let mut names: BTreeSet<String> = set.color_names().into_iter().map(String::from).collect();
    if let Some((_, family)) = internal {
        names.extend(family.iter().map(|w| w.color.clone()));
    }
    let palette = Palette::new(names);
    let h_scatter = scatter_height(set)?;
    let panel = match internal {
        Some((scheme, family)) => Some(internal_panel(set, scheme, family, &palette)?),
        None => None,
    };
    let total = h_scatter + panel.as_ref().map_or(0.0, |p| p.height);
    let mut s = header(total);
    scatter(&mut s, set, &palette, 0.0, h_scatter);
    if let Some(p) = panel {
        let _ = write!(s, "<g transform=\"translate(0 {})\">", fmt(h_scatter));
        s.push_str(&p.body);
        s.push_str("</g>");
    }
    legend(&mut s, &palette);
    s.push_str("</svg>\n");
    Ok(s)
}

struct Palette {
    names: Vec<String>,
}

impl Palette {
    fn new(names: BTreeSet<String>) -> Self {
        Palette { names: names.into_iter().collect() }
    }

    fn color(&self, name: &str) -> &'static str {
        let i = self.names.iter().position(|n| n == name).unwrap_or(0);
        PALETTE[i % PALETTE.len()]
    }
}

fn scatter_height(set: &MultiPointSet) -> Result<f64, SvgError> {
    match set.dim() {
        1 => Ok(150.0),
        2 => Ok(520.0),
        d => Err(SvgError::UnsupportedDim(d)),
    }
}

fn header(height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"11\">\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>",
        w = fmt(WIDTH),
        h = fmt(height)
    )
}

fn caption(s: &mut String, y: f64, text: &str) {
    let _ = write!(
        s,
        "<text x=\"{}\" y=\"{}\" fill=\"#333\">{}</text>",
        fmt(MARGIN),
        fmt(y),
        escape(text)
    );
}

/// Maps `[lo, hi]` onto `[out_lo, out_lo + span]`, guarding zero width.
struct Scale {
    lo: f64,
    factor: f64,
    out_lo: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, out_lo: f64, span: f64) -> Self {
        let width = if hi - lo > 1e-12 { hi - lo } else { 1.0 };
        Scale { lo, factor: span / width, out_lo }
    }

    fn map(&self, v: f64) -> f64 {
        self.out_lo + (v - self.lo) * self.factor
    }
}

fn scatter(s: &mut String, set: &MultiPointSet, palette: &Palette, y0: f64, height: f64) {
    let iv = set.carrier().intervals();
    let sx = Scale::new(iv[0].0.to_f64(), iv[0].1.to_f64(), MARGIN, WIDTH - 2.0 * MARGIN);
    match set.dim() {
        1 => {
            let axis_y = y0 + height / 2.0;
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbb\"/>",
                fmt(MARGIN),
                fmt(axis_y),
                fmt(WIDTH - MARGIN),
                fmt(axis_y)
            );
            for (color, points) in set.colors() {
                let fill = palette.color(color);
                for p in points {
                    dot(s, sx.map(p[0].to_f64()), axis_y, fill);
                }
            }
        }
        2 => {
            // SVG y grows downward; flip the second coordinate.
            let sy = Scale::new(
                -iv[1].1.to_f64(),
                -iv[1].0.to_f64(),
                y0 + 18.0,
                height - 36.0,
            );
            let _ = write!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#bbb\"/>",
                fmt(MARGIN),
                fmt(y0 + 18.0),
                fmt(WIDTH - 2.0 * MARGIN),
                fmt(height - 36.0)
            );
            for (color, points) in set.colors() {
                let fill = palette.color(color);
                for p in points {
                    dot(s, sx.map(p[0].to_f64()), sy.map(-p[1].to_f64()), fill);
                }
            }
        }
        _ => unreachable!("dimension checked by scatter_height"),
    }
}

fn dot(s: &mut String, x: f64, y: f64, fill: &str) {
    let _ = write!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.85\"/>",
        fmt(x),
        fmt(y),
        fill
    );
}

fn legend(s: &mut String, palette: &Palette) {
    for (i, name) in palette.names.iter().enumerate() {
        let y = 14.0 + 16.0 * i as f64;
        let _ = write!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\
             <text x=\"{}\" y=\"{}\" fill=\"#333\">{}</text>",
            fmt(WIDTH - 130.0),
            fmt(y - 9.0),
            palette.color(name),
            fmt(WIDTH - 115.0),
            fmt(y),
            escape(name)
        );
    }
}

struct Panel {
    body: String,
    height: f64,
}

/// One row per finite fiber: window boxes as outlined rectangles, star
/// images of the set's lattice lifts as dots in their set color.
fn internal_panel(
    set: &MultiPointSet,
    scheme: &CutProjectScheme,
    family: &WindowFamily,
    palette: &Palette,
) -> Result<Panel, SvgError> {
    let m = scheme.internal_real_dim();
    if m == 0 || m > 2 {
        return Err(SvgError::UnsupportedInternalDim(m));
    }
    // Stars of every lift of every plotted point, tagged by set color.
    let bbox = family.bounding_box();
    let mut stars: Vec<(String, FinElem, Vec<QuadExt>)> = Vec::new();
    for (color, points) in set.colors() {
        for p in points {
            let lifts = if scheme.is_a_injective() {
                scheme.coordinates_in_lattice(p, None)?
            } else {
                match &bbox {
                    Some(bx) => scheme.coordinates_in_lattice(p, Some(bx))?,
                    None => Vec::new(),
                }
            };
            for z in lifts {
                let star = scheme.star(&z);
                stars.push((color.to_string(), star.fin, star.real));
            }
        }
    }
    // Fibers worth a row: any with window boxes, plus any with stars.
    let mut fibers: BTreeSet<FinElem> = stars.iter().map(|(_, f, _)| f.clone()).collect();
    for w in family.iter() {
        fibers.extend(w.region.fibers().map(|(f, _)| f.clone()));
    }
    // The drawing range must cover windows and stars alike.
    let mut range = bbox;
    for (_, _, real) in &stars {
        let point_box = RBox::new(real.iter().map(|v| (v.clone(), v.clone())).collect())
            .expect("degenerate box");
        range = Some(match range {
            None => point_box,
            Some(r) => hull(&r, &point_box),
        });
    }
    let Some(range) = range else {
        return Ok(Panel { body: String::new(), height: 0.0 });
    };

    let row_h = if m == 1 { 72.0 } else { 240.0 };
    let mut body = String::new();
    caption(&mut body, 14.0, "internal picture");
    for (row, fiber) in fibers.iter().enumerate() {
        let top = 22.0 + row_h * row as f64;
        let label = if fiber.0.is_empty() {
            "f = 0".to_string()
        } else {
            let parts: Vec<String> = fiber.0.iter().map(u64::to_string).collect();
            format!("f = ({})", parts.join(", "))
        };
        caption(&mut body, top + 12.0, &label);
        let iv = range.intervals();
        let sx = Scale::new(iv[0].0.to_f64(), iv[0].1.to_f64(), MARGIN, WIDTH - 2.0 * MARGIN);
        let sy = if m == 2 {
            Scale::new(-iv[1].1.to_f64(), -iv[1].0.to_f64(), top + 18.0, row_h - 28.0)
        } else {
            // All of the 1-dimensional row maps to one axis line.
            Scale::new(0.0, 1.0, top + row_h / 2.0 + 6.0, 0.0)
        };
        if m == 1 {
            let axis_y = sy.map(0.0);
            let _ = write!(
                body,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>",
                fmt(MARGIN),
                fmt(axis_y),
                fmt(WIDTH - MARGIN),
                fmt(axis_y)
            );
        }
        for w in family.iter() {
            let stroke = palette.color(&w.color);
            for bx in w.region.boxes_at(fiber) {
                let b = bx.intervals();
                let (x1, x2) = (sx.map(b[0].0.to_f64()), sx.map(b[0].1.to_f64()));
                let (y1, y2) = if m == 2 {
                    (sy.map(-b[1].1.to_f64()), sy.map(-b[1].0.to_f64()))
                } else {
                    (sy.map(0.0) - 10.0, sy.map(0.0) + 10.0)
                };
                let _ = write!(
                    body,
                    "<rect class=\"window\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" \
                     fill=\"{}\" fill-opacity=\"0.12\" stroke=\"{}\"/>",
                    fmt(x1),
                    fmt(y1),
                    fmt(x2 - x1),
                    fmt(y2 - y1),
                    stroke,
                    stroke
                );
            }
        }
        for (color, f, real) in &stars {
            if f != fiber {
                continue;
            }
            let x = sx.map(real[0].to_f64());
            let y = if m == 2 { sy.map(-real[1].to_f64()) } else { sy.map(0.0) };
            let _ = write!(
                body,
                "<circle class=\"star\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>",
                fmt(x),
                fmt(y),
                palette.color(color)
            );
        }
    }
    Ok(Panel { body, height: 30.0 + row_h * fibers.len() as f64 })
}

fn hull(a: &RBox, b: &RBox) -> RBox {
    let iv = a
        .intervals()
        .iter()
        .zip(b.intervals())
        .map(|((alo, ahi), (blo, bhi))| (alo.min_of(blo), ahi.max_of(bhi)))
        .collect();
    RBox::new(iv).expect("hull of boxes")
}

/// Fixed-precision coordinate text — the only place exact values become
/// floating point.
fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    // Trim trailing zeros for compactness, keeping at least one digit.
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::modelset::{generate, WindowMode};

    fn q(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    #[test]
    fn one_dimensional_scatter_draws_every_point() {
        let scheme = fixtures::fibonacci();
        let family = fixtures::fibonacci_window();
        let view = RBox::interval(q(0), q(12)).unwrap();
        let set = generate(&scheme, &family, &view, WindowMode::Closed).unwrap();
        let svg = render_points(&set).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), set.len());
        assert!(svg.contains("tile"), "legend must name the color");
    }

    #[test]
    fn internal_panel_plots_windows_and_stars() {
        let scheme = fixtures::two_color();
        let family = fixtures::two_color_split_windows();
        let view = RBox::interval(q(0), q(10)).unwrap();
        let set = generate(&scheme, &family, &view, WindowMode::Closed).unwrap();
        let svg = render_with_internal(&set, &scheme, &family).unwrap();
        // Two fibers, one window box each.
        assert_eq!(svg.matches("class=\"window\"").count(), 2);
        // Every plotted point has exactly one lift (A injective), and its
        // star is drawn once.
        assert_eq!(svg.matches("class=\"star\"").count(), set.len());
        assert!(svg.contains("internal picture"));
        assert!(svg.contains("f = (0)") && svg.contains("f = (1)"));
    }

    #[test]
    fn two_dimensional_scatter_renders() {
        let carrier = RBox::new(vec![(q(0), q(4)), (q(-1), q(3))]).unwrap();
        let mut set = MultiPointSet::new(2, carrier).unwrap();
        set.add("a", vec![q(0), q(0)]).unwrap();
        set.add("b", vec![q(3), q(2)]).unwrap();
        let svg = render_points(&set).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn rejects_unplottable_dimension() {
        let carrier = RBox::new(vec![(q(0), q(1)); 3]).unwrap();
        let set = MultiPointSet::new(3, carrier).unwrap();
        assert!(matches!(render_points(&set), Err(SvgError::UnsupportedDim(3))));
    }

    #[test]
    fn rendering_is_deterministic() {
        let scheme = fixtures::fibonacci();
        let family = fixtures::fibonacci_window();
        let view = RBox::interval(q(-8), q(8)).unwrap();
        let set = generate(&scheme, &family, &view, WindowMode::Closed).unwrap();
        let a = render_with_internal(&set, &scheme, &family).unwrap();
        let b = render_with_internal(&set, &scheme, &family).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn comparison_stacks_two_captioned_rows() {
        let scheme = fixtures::fibonacci();
        let family = fixtures::fibonacci_window();
        let view = RBox::interval(q(0), q(6)).unwrap();
        let set = generate(&scheme, &family, &view, WindowMode::Closed).unwrap();
        let svg = render_comparison(("before", &set), ("after", &set)).unwrap();
        assert!(svg.contains("before") && svg.contains("after"));
        assert_eq!(svg.matches("<circle").count(), 2 * set.len());
    }
}
