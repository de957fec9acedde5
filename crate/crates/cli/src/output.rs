use std::io::Write;
use std::path::Path;

use anyhow::Context;
use knotflow::flow::FlowRun;

/// Writes through a temporary file in the same directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// σ/T² and the first σ_ω/σ ratio against T, as a self-contained SVG.
pub fn svg_plot(run: &FlowRun) -> String {
    let (w, h, pad) = (640.0, 360.0, 48.0);
    let series: [(&str, &str, Vec<(f64, f64)>); 2] = [
        ("σ/T²", "#1f77b4", run.knots().map(|(t, k)| (t, k.sigma_over_t2)).collect()),
        ("σ_ω/σ", "#d62728", run.knots().filter_map(|(t, k)| k.omega.first().and_then(|o| o.ratio).map(|r| (t, r))).collect()),
    ];
    let mut svg = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n");
    svg.push_str(&format!("<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"));
    svg.push_str(&format!("<line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", h - pad, w - pad, h - pad));
    let ts: Vec<f64> = run.records.iter().map(|r| r.horizon).collect();
    let (t0, t1) = (ts.first().copied().unwrap_or(0.0), ts.last().copied().unwrap_or(1.0));
    let tx = |t: f64| pad + (t - t0) / (t1 - t0).max(f64::MIN_POSITIVE) * (w - 2.0 * pad);
    for (i, (label, color, pts)) in series.iter().enumerate() {
        let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let ty = |v: f64| h - pad - (v - lo) / span * (h - 2.0 * pad);
        let path: Vec<String> = pts.iter().map(|&(t, v)| format!("{:.2},{:.2}", tx(t), ty(v))).collect();
        svg.push_str(&format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n", path.join(" ")));
        let y = 20.0 + 18.0 * i as f64;
        let range = if pts.is_empty() { String::from("no data") } else { format!("{lo:.4} to {hi:.4}") };
        svg.push_str(&format!("<text x=\"{pad}\" y=\"{y}\" fill=\"{color}\" font-family=\"sans-serif\" font-size=\"13\">{label}: {range}</text>\n"));
    }
    svg.push_str(&format!("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">T from {t0:.3} to {t1:.3}</text>\n", w / 2.0 - 60.0, h - 14.0));
    svg.push_str("</svg>\n");
    svg
}
