//! Self-contained HTML report of an evaluation history.
//!
//! The records are embedded verbatim as a JSON array inside
//! `<script type="application/json" id="ss3-history">`. When a prebuilt plot
//! bundle is supplied it is inlined after the data and renders the
//! interactive view from it; otherwise the page shows a notice and a plain
//! table. Either way the file references nothing outside itself.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::history::{record_to_line, EvaluationRecord};
use crate::error::{Error, Result};

/// `id` of the element holding the embedded history.
pub const PLOT_DATA_ELEMENT_ID: &str = "ss3-history";

const STYLE: &str = "body{font-family:system-ui,sans-serif;margin:2rem;color:#222}\
table{border-collapse:collapse;font-size:.85rem}\
td,th{border:1px solid #ccc;padding:.2rem .5rem;text-align:right}\
tr.best{background:#ffd6ec}\
.notice{padding:.75rem 1rem;border:1px solid #e0b000;background:#fff8db}";

fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Keeps `</script` and `<!--` from terminating or confusing the script
/// element.
fn escape_script(text: &str) -> String {
    text.replace("</", "<\\/").replace("<!--", "<\\!--")
}

fn fallback_table(history: &[EvaluationRecord]) -> String {
    let best = history
        .iter()
        .map(|r| r.metrics.macro_f1)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = String::from(
        "<table>\n<thead><tr><th>#</th><th>kind</th><th>s</th><th>l</th><th>p</th>\
         <th>accuracy</th><th>macro-precision</th><th>macro-recall</th><th>macro-f1</th></tr></thead>\n<tbody>\n",
    );
    for (i, r) in history.iter().enumerate() {
        let class = if r.metrics.macro_f1 == best { " class=\"best\"" } else { "" };
        let kind = serde_json::to_value(r.kind).expect("kind serializes");
        let _ = writeln!(
            out,
            "<tr{class}><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td>\
             <td>{:.4}</td><td>{:.4}</td><td>{:.4}</td><td>{:.4}</td></tr>",
            i + 1,
            escape_html(kind.as_str().unwrap_or_default()),
            r.hyperparameters.s,
            r.hyperparameters.l,
            r.hyperparameters.p,
            r.metrics.accuracy,
            r.metrics.macro_precision,
            r.metrics.macro_recall,
            r.metrics.macro_f1,
        );
    }
    out.push_str("</tbody>\n</table>\n");
    out
}

/// Renders the report. `bundle` is the JavaScript of the prebuilt plot view,
/// if available.
pub fn render_plot(history: &[EvaluationRecord], bundle: Option<&str>) -> Result<String> {
    if history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut data = String::from("[\n");
    for (i, record) in history.iter().enumerate() {
        data.push_str(&record_to_line(record));
        data.push_str(if i + 1 < history.len() { ",\n" } else { "\n" });
    }
    data.push(']');

    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    html.push_str("<title>SS3 evaluation plot</title>\n");
    let _ = writeln!(html, "<style>{STYLE}</style>\n</head>\n<body>");
    let _ = writeln!(html, "<h1>Evaluation plot</h1>\n<p>{} evaluations</p>", history.len());
    html.push_str("<div id=\"ss3-plot\"></div>\n");
    if bundle.is_none() {
        html.push_str(
            "<div id=\"ss3-plot-placeholder\" class=\"notice\">The interactive 3D plot was not \
             built into this file. The evaluation data is embedded below and listed in the table; \
             regenerate the file with the plot bundle available to get the interactive view.</div>\n",
        );
        html.push_str(&fallback_table(history));
    }
    let _ = writeln!(
        html,
        "<script type=\"application/json\" id=\"{PLOT_DATA_ELEMENT_ID}\">\n{}\n</script>",
        escape_script(&data)
    );
    if let Some(js) = bundle {
        let _ = writeln!(html, "<script>\n{}\n</script>", escape_script(js));
    }
    html.push_str("</body>\n</html>\n");
    Ok(html)
}

/// Writes the report to `path`.
pub fn emit_plot(history: &[EvaluationRecord], path: impl AsRef<Path>, bundle: Option<&str>) -> Result<()> {
    let path = path.as_ref();
    let html = render_plot(history, bundle)?;
    fs::write(path, html).map_err(|e| Error::io(path, e))
}

/// Pulls the embedded records back out of a rendered report.
pub fn extract_plot_data(html: &str) -> Option<Vec<EvaluationRecord>> {
    let open = format!("<script type=\"application/json\" id=\"{PLOT_DATA_ELEMENT_ID}\">");
    let start = html.find(&open)? + open.len();
    let end = start + html[start..].find("</script>")?;
    serde_json::from_str(&html[start..end]).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{ConfusionMatrix, Metrics, RecordKind};
    use crate::model::Hyperparameters;

    fn history(n: usize) -> Vec<EvaluationRecord> {
        (0..n)
            .map(|i| {
                let confusion = ConfusionMatrix {
                    labels: vec!["</script>".into(), "b".into()],
                    counts: vec![vec![i as u64, 1], vec![0, 1]],
                };
                EvaluationRecord {
                    kind: RecordKind::GridPoint,
                    hyperparameters: Hyperparameters { s: 0.1 * (i + 1) as f64, l: 1.0, p: 1.0 },
                    metrics: Metrics::from_confusion(&confusion),
                    confusion,
                    data_fingerprint: "f".into(),
                    timestamp: "t".into(),
                    k: None,
                    fold: None,
                }
            })
            .collect()
    }

    #[test]
    fn embeds_every_record() {
        let h = history(5);
        let html = render_plot(&h, None).unwrap();
        assert_eq!(extract_plot_data(&html).unwrap(), h);
        assert!(html.contains("ss3-plot-placeholder"));
        assert_eq!(html.matches("</script>").count(), 1);
    }

    #[test]
    fn inlines_bundle() {
        let html = render_plot(&history(2), Some("console.log('</script>')")).unwrap();
        assert!(!html.contains("ss3-plot-placeholder"));
        assert!(html.contains("console.log('<\\/script>')"));
        assert_eq!(extract_plot_data(&html).unwrap().len(), 2);
    }

    #[test]
    fn deterministic_and_self_contained() {
        let h = history(3);
        let a = render_plot(&h, None).unwrap();
        assert_eq!(a, render_plot(&h, None).unwrap());
        for needle in ["src=", "href=", "http://", "https://", "@import", "url("] {
            assert!(!a.contains(needle), "{needle}");
        }
    }

    #[test]
    fn empty_history_is_an_error() {
        assert!(matches!(render_plot(&[], None), Err(Error::EmptyHistory)));
        assert!(matches!(emit_plot(&[], "/tmp/never-written.html", None), Err(Error::EmptyHistory)));
    }
}
