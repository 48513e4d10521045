//! Minimal line-plot emitter. Fixed 960x540 canvas, legend, tick labels;
//! no plotting dependency, deterministic output for byte-identical reruns.

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// (series name, (x, y) points); all series share the x grid.
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

fn nice_ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    if max <= min {
        return vec![min];
    }
    let raw_step = (max - min) / target as f64;
    let mag = 10f64.powf(raw_step.abs().log10().floor());
    let norm = raw_step / mag;
    let step = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    } * mag;
    let start = (min / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut v = start;
    while v <= max + step * 1e-9 {
        ticks.push(v);
        v += step;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 100_000.0 {
        format!(
            "{:.1}e{}",
            v / 10f64.powf(a.log10().floor()),
            a.log10().floor()
        )
    } else if a >= 10.0 {
        format!("{v:.0}")
    } else if a >= 0.1 {
        format!("{v:.2}")
    } else {
        format!("{v:.3}")
    }
}

impl LinePlot {
    pub fn render(&self) -> String {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

        let xs = self.series.iter().flat_map(|s| s.1.iter().map(|p| p.0));
        let ys = self.series.iter().flat_map(|s| s.1.iter().map(|p| p.1));
        let x_max = xs.fold(1.0f64, f64::max);
        let (mut y_min, mut y_max) =
            ys.fold((0.0f64, 0.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
        if y_max == y_min {
            y_max = y_min + 1.0;
        }
        let y_pad = 0.04 * (y_max - y_min);
        y_max += y_pad;
        if y_min < 0.0 {
            y_min -= y_pad;
        }

        let sx = |x: f64| MARGIN_LEFT + (x / x_max) * plot_w;
        let sy = |y: f64| MARGIN_TOP + plot_h - ((y - y_min) / (y_max - y_min)) * plot_h;

        let mut out = String::with_capacity(16 * 1024);
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"26\" font-family=\"sans-serif\" font-size=\"17\" \
             text-anchor=\"middle\" font-weight=\"bold\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            xml_escape(&self.title)
        ));

        // frame
        out.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
             fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n"
        ));

        // x ticks on the shared checkpoint grid
        let x_ticks = nice_ticks(0.0, x_max, 6);
        for &t in &x_ticks {
            let px = sx(t);
            out.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>\n",
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 6.0
            ));
            out.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"middle\">{}</text>\n",
                MARGIN_TOP + plot_h + 22.0,
                fmt_tick(t)
            ));
        }
        // y ticks
        for &t in &nice_ticks(y_min, y_max, 5) {
            let py = sy(t);
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{py:.2}\" stroke=\"#333\"/>\n",
                MARGIN_LEFT - 6.0
            ));
            out.push_str(&format!(
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
                 stroke=\"#ddd\" stroke-dasharray=\"2,4\"/>\n",
                MARGIN_LEFT + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"end\">{}</text>\n",
                MARGIN_LEFT - 10.0,
                py + 4.0,
                fmt_tick(t)
            ));
        }

        // axis labels
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            xml_escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"20\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            xml_escape(&self.y_label)
        ));

        // series
        for (i, (name, pts)) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
                path.join(" ")
            ));
            // legend
            let ly = MARGIN_TOP + 14.0 + i as f64 * 20.0;
            let lx = MARGIN_LEFT + plot_w + 14.0;
            out.push_str(&format!(
                "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
                 stroke=\"{color}\" stroke-width=\"2.5\"/>\n",
                lx + 26.0
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                lx + 32.0,
                ly + 4.5,
                xml_escape(name)
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
