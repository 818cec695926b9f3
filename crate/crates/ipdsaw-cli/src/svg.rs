//! Hand-rolled SVG rendering of a sampled path: unit grid, the walk as a
//! polyline with start/end markers, and a caption line.

use ipdsaw::lattice::{stretches_to_path, StretchConfig};

const UNIT: f64 = 16.0;
const MARGIN: f64 = 28.0;
const CAPTION_SPACE: f64 = 34.0;

pub fn render(config: &StretchConfig, caption: &str) -> String {
    let path = stretches_to_path(config);
    let vertices = path.vertices();
    let (lo, hi) = config.vertical_span();
    let cols = config.horizontal_extension() as f64;
    let rows = (hi - lo) as f64;
    let width = 2.0 * MARGIN + cols * UNIT;
    let height = 2.0 * MARGIN + rows * UNIT + CAPTION_SPACE;
    let place = |x: i64, y: i64| -> (f64, f64) {
        (
            MARGIN + x as f64 * UNIT,
            MARGIN + (hi - y) as f64 * UNIT,
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Light lattice grid over the bounding box.
    for col in 0..=config.horizontal_extension() {
        let (x, y0) = place(col as i64, hi);
        let (_, y1) = place(col as i64, lo);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        ));
    }
    for row in lo..=hi {
        let (x0, y) = place(0, row);
        let (x1, _) = place(config.horizontal_extension() as i64, row);
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        ));
    }

    let points: Vec<String> = vertices
        .iter()
        .map(|&(x, y)| {
            let (px, py) = place(x, y);
            format!("{px},{py}")
        })
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"3\" \
         stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n",
        points.join(" ")
    ));

    let (sx, sy) = place(vertices[0].0, vertices[0].1);
    let last = vertices[vertices.len() - 1];
    let (ex, ey) = place(last.0, last.1);
    svg.push_str(&format!(
        "<circle cx=\"{sx}\" cy=\"{sy}\" r=\"4.5\" fill=\"#2a9d3a\"/>\n"
    ));
    svg.push_str(&format!(
        "<circle cx=\"{ex}\" cy=\"{ey}\" r=\"4.5\" fill=\"#c23b22\"/>\n"
    ));

    let ty = height - 12.0;
    svg.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{ty}\" font-family=\"monospace\" font-size=\"13\" \
         fill=\"#333333\">{}</text>\n",
        escape(caption)
    ));
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
