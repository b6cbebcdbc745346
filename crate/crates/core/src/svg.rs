//! Deterministic SVG pictures of point sets, partitions and gadgets. Coordinates
//! are printed for display only.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cycle_partition::CyclePartition;
use crate::geom_core::{PointSet, Rational};
use crate::sat_gadget::{Gadget, Role};

/// Decimal expansion of `r` truncated after 12 fractional digits, trailing zeros dropped.
pub fn decimal(r: &Rational) -> String {
    let neg = r.is_negative();
    let (num, den) = (r.numer().abs(), r.denom().clone());
    let (int, mut rem) = num.div_rem(&den);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    let mut digits = String::new();
    let ten = BigInt::from(10);
    for _ in 0..12 {
        if rem.is_zero() {
            break;
        }
        rem *= &ten;
        let (d, r2) = rem.div_rem(&den);
        digits.push_str(&d.to_string());
        rem = r2;
    }
    let digits = digits.trim_end_matches('0');
    if !digits.is_empty() {
        s.push('.');
        s.push_str(digits);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn hue(i: usize) -> f64 {
    (i as f64 * 137.507_764) % 360.0
}

struct Frame {
    min_x: Rational,
    max_y: Rational,
    width: Rational,
    height: Rational,
    unit: Rational,
}

impl Frame {
    fn new(ps: &PointSet) -> Frame {
        let pts = ps.points();
        let min = |f: fn(&crate::Point) -> &Rational| pts.iter().map(f).min().cloned().unwrap_or_default();
        let max = |f: fn(&crate::Point) -> &Rational| pts.iter().map(f).max().cloned().unwrap_or_default();
        let (x0, x1) = (min(|p| &p.x), max(|p| &p.x));
        let (y0, y1) = (min(|p| &p.y), max(|p| &p.y));
        let span = (&x1 - &x0).max(&y1 - &y0);
        let span = if span.is_zero() { Rational::from_integer(1.into()) } else { span };
        let margin = &span / Rational::from_integer(20.into());
        // circle radius of 3px on a 600px wide picture
        let unit = &span / Rational::from_integer(600.into());
        Frame {
            min_x: &x0 - &margin,
            max_y: &y1 + &margin,
            width: &x1 - &x0 + &margin * Rational::from_integer(2.into()),
            height: &y1 - &y0 + &margin * Rational::from_integer(2.into()),
            unit,
        }
    }

    fn open(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
            decimal(&self.min_x),
            decimal(&-&self.max_y),
            decimal(&self.width),
            decimal(&self.height)
        )
    }

    fn xy(&self, p: &crate::Point) -> (String, String) {
        (decimal(&p.x), decimal(&-&p.y))
    }

    fn radius(&self) -> String {
        decimal(&(&self.unit * Rational::from_integer(3.into())))
    }
}

fn polygons_svg(out: &mut String, f: &Frame, ps: &PointSet, polys: &[Vec<usize>]) {
    for (i, poly) in polys.iter().enumerate() {
        let pts: Vec<String> = poly
            .iter()
            .map(|&j| {
                let (x, y) = f.xy(ps.get(j));
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"hsl({:.1},70%,50%)\" fill-opacity=\"0.3\" stroke=\"hsl({:.1},70%,35%)\" stroke-width=\"{}\"/>",
            pts.join(" "),
            hue(i),
            hue(i),
            decimal(&f.unit)
        );
    }
}

/// Points as small circles; each polygon filled with its own hue at 30% opacity.
pub fn render_svg(ps: &PointSet, cp: Option<&CyclePartition>) -> String {
    let polys: Vec<Vec<usize>> = cp.map(|c| c.polygons.iter().map(|p| p.indices.clone()).collect()).unwrap_or_default();
    render_polygons(ps, &polys)
}

/// Like [`render_svg`] for bare index lists, e.g. triangles or cliques.
pub fn render_polygons(ps: &PointSet, polys: &[Vec<usize>]) -> String {
    let f = Frame::new(ps);
    let mut out = f.open();
    polygons_svg(&mut out, &f, ps, polys);
    let r = f.radius();
    for p in ps.points() {
        let (x, y) = f.xy(p);
        let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"black\"/>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn role_colour(r: Role) -> &'static str {
    match r {
        Role::Clause => "red",
        Role::Blocking => "gray",
        Role::Variable => "blue",
        Role::VariableBlocker => "purple",
        Role::Extra => "green",
        Role::Padding => "black",
        Role::Auxiliary => "orange",
    }
}

/// Gadget points coloured by role, with optional groups drawn as polygons.
pub fn render_gadget(g: &Gadget, groups: Option<&[Vec<usize>]>) -> String {
    let f = Frame::new(&g.points);
    let mut out = f.open();
    if let Some(groups) = groups {
        polygons_svg(&mut out, &f, &g.points, groups);
    }
    let r = f.radius();
    for (p, role) in g.points.points().iter().zip(&g.roles) {
        let (x, y) = f.xy(p);
        let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{}\"/>", role_colour(*role));
    }
    out.push_str("</svg>\n");
    out
}
