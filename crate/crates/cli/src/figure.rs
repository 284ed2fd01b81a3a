use std::f64::consts::TAU;

use flipspine::construct::voronoi_overlay;
use flipspine::triangulation::Triangulation;
use svg::node::element::{Circle, Group, Line, Polygon};
use svg::Document;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

pub fn regular_polygon(p: usize) -> Vec<[f64; 2]> {
    (0..p).map(|k| TAU * k as f64 / p as f64).map(|a| [a.cos(), a.sin()]).collect()
}

/// Polygon, diagonals and (optionally) the Voronoi diagram of the vertices.
pub fn render(points: &[[f64; 2]], t: &Triangulation, voronoi: bool) -> Document {
    let extent = points.iter().map(|[x, y]| x.abs().max(y.abs())).fold(0.0, f64::max).max(1e-9);
    let scale = (SIZE / 2.0 - MARGIN) / extent;
    let map = |[x, y]: [f64; 2]| (SIZE / 2.0 + scale * x, SIZE / 2.0 - scale * y);
    let line = |a: [f64; 2], b: [f64; 2]| {
        let (x1, y1) = map(a);
        let (x2, y2) = map(b);
        Line::new().set("x1", x1).set("y1", y1).set("x2", x2).set("y2", y2)
    };

    let outline: Vec<String> = points.iter().map(|&pt| map(pt)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let boundary = Polygon::new()
        .set("class", "boundary")
        .set("points", outline.join(" "))
        .set("fill", "none")
        .set("stroke", "black")
        .set("stroke-width", 1.5);

    let mut diagonals = Group::new().set("id", "diagonals").set("stroke", "#1f4e9c").set("stroke-width", 1.2);
    for d in t.diagonals() {
        diagonals = diagonals.add(line(points[d.lo()], points[d.hi()]).set("class", "diagonal"));
    }

    let mut vertices = Group::new().set("id", "vertices").set("fill", "black");
    for &pt in points {
        let (cx, cy) = map(pt);
        vertices = vertices.add(Circle::new().set("class", "vertex").set("cx", cx).set("cy", cy).set("r", 3));
    }

    let mut doc = Document::new()
        .set("viewBox", (0, 0, SIZE, SIZE))
        .set("width", SIZE)
        .set("height", SIZE)
        .add(boundary)
        .add(diagonals);
    if voronoi {
        let mut layer = Group::new()
            .set("id", "voronoi")
            .set("stroke", "#c0392b")
            .set("stroke-width", 0.8)
            .set("stroke-dasharray", "4 3");
        for (a, b) in voronoi_overlay(points, t, extent * 1.15) {
            layer = layer.add(line(a, b).set("class", "voronoi-edge"));
        }
        doc = doc.add(layer);
    }
    doc.add(vertices)
}
