// SPDX-License-Identifier: Apache-2.0

//! Standalone SVG output for a treebar map.
//!
//! Page layout, top to bottom: bar chart (40% of the page height), treemap
//! (50%), label strip (10%). Treemap rectangles are emitted in pre-order so
//! parents are painted before the children nested inside them.

use std::fmt::Write as _;

use thiserror::Error;

use crate::layout::{RenderConfig, TreebarLayout};

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("layout has no nodes")]
    EmptyLayout,
    #[error("invalid render config: {0}")]
    InvalidConfig(String),
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
}

const BAR_SHARE: f64 = 0.4;
const TREEMAP_SHARE: f64 = 0.5;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const BAR_TOP_PAD: f64 = 12.0;
const FONT_FAMILY: &str = "sans-serif";

#[derive(Debug, Clone, PartialEq)]
pub enum SvgElement {
    Rect {
        class: &'static str,
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        fill: String,
        stroke: Option<&'static str>,
        data: Vec<(&'static str, String)>,
    },
    Line {
        class: &'static str,
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: &'static str,
    },
    Text {
        class: &'static str,
        x: f64,
        y: f64,
        anchor: &'static str,
        size: f64,
        content: String,
    },
}

impl SvgElement {
    pub fn class(&self) -> &'static str {
        match self {
            SvgElement::Rect { class, .. } | SvgElement::Line { class, .. } | SvgElement::Text { class, .. } => class,
        }
    }

    fn coords(&self) -> Vec<f64> {
        match self {
            SvgElement::Rect {
                x, y, width, height, ..
            } => vec![*x, *y, *width, *height],
            SvgElement::Line { x1, y1, x2, y2, .. } => vec![*x1, *y1, *x2, *y2],
            SvgElement::Text { x, y, size, .. } => vec![*x, *y, *size],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    pub elements: Vec<SvgElement>,
}

/// Three decimals, trailing zeros trimmed; `-0` printed as `0`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

impl SvgDocument {
    pub fn count_class(&self, class: &str) -> usize {
        self.elements.iter().filter(|e| e.class() == class).count()
    }

    pub fn to_xml(&self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"{FONT_FAMILY}\">",
            w = num(self.width),
            h = num(self.height)
        );
        for e in &self.elements {
            match e {
                SvgElement::Rect {
                    class,
                    x,
                    y,
                    width,
                    height,
                    fill,
                    stroke,
                    data,
                } => {
                    let _ = write!(
                        out,
                        "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"",
                        num(*x),
                        num(*y),
                        num(*width),
                        num(*height)
                    );
                    if let Some(s) = stroke {
                        let _ = write!(out, " stroke=\"{s}\" stroke-width=\"0.75\"");
                    }
                    for (k, v) in data {
                        let _ = write!(out, " data-{k}=\"{}\"", escape(v));
                    }
                    out.push_str("/>\n");
                }
                SvgElement::Line {
                    class,
                    x1,
                    y1,
                    x2,
                    y2,
                    stroke,
                } => {
                    let _ = writeln!(
                        out,
                        "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"0.5\"/>",
                        num(*x1),
                        num(*y1),
                        num(*x2),
                        num(*y2)
                    );
                }
                SvgElement::Text {
                    class,
                    x,
                    y,
                    anchor,
                    size,
                    content,
                } => {
                    let _ = writeln!(
                        out,
                        "<text class=\"{class}\" x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"{}\">{}</text>",
                        num(*x),
                        num(*y),
                        num(*size),
                        escape(content)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

pub fn emit_svg(layout: &TreebarLayout, cfg: &RenderConfig) -> Result<SvgDocument, RenderError> {
    cfg.validate().map_err(RenderError::InvalidConfig)?;
    if layout.squares.is_empty() {
        return Err(RenderError::EmptyLayout);
    }
    let unit = cfg.unit_px;
    let height = cfg.page_height_px;
    let content_w = layout.total_width * unit;
    // Landscape: never narrower than 4:3.
    let width = (content_w + MARGIN_LEFT + MARGIN_RIGHT).max(height * 4.0 / 3.0);
    let x0 = MARGIN_LEFT + (width - MARGIN_LEFT - MARGIN_RIGHT - content_w) / 2.0;

    let bar_bottom = height * BAR_SHARE;
    let bar_span = bar_bottom - BAR_TOP_PAD;
    let tree_top = bar_bottom;
    let tree_h = height * TREEMAP_SHARE;
    let label_y = tree_top + tree_h + (height - tree_top - tree_h) * 0.6;
    let px = |ux: f64| x0 + ux * unit;

    let mut elements = Vec::new();

    // Gridlines at integer bar heights, i.e. at set sizes 10^(h-1).
    let axis_max = layout.bar_axis_max;
    for h in 0..=axis_max as u32 {
        let y = bar_bottom - h as f64 / axis_max * bar_span;
        elements.push(SvgElement::Line {
            class: "grid",
            x1: px(0.0),
            y1: y,
            x2: px(layout.total_width),
            y2: y,
            stroke: if h == 0 { "#444444" } else { "#cccccc" },
        });
        if h > 0 {
            elements.push(SvgElement::Text {
                class: "axis-label",
                x: px(0.0) - 6.0,
                y: y + cfg.font_size * 0.35,
                anchor: "end",
                size: cfg.font_size,
                content: format!("10{}", superscript(h - 1)),
            });
        }
    }

    for sq in layout.squares.iter().filter(|s| s.bar_set_size > 0) {
        let h = sq.bar_height / axis_max * bar_span;
        elements.push(SvgElement::Rect {
            class: "bar",
            x: px(sq.x),
            y: bar_bottom - h,
            width: sq.width * unit,
            height: h,
            fill: sq.fill.to_hex(),
            stroke: Some("#ffffff"),
            data: vec![
                ("node", sq.node.to_string()),
                ("size", sq.bar_set_size.to_string()),
                ("height", format!("{}", sq.bar_height)),
            ],
        });
    }

    // Treemap in pre-order: a node's container, then its own square.
    let mut rects = layout.rects.iter().peekable();
    for sq in &layout.squares {
        if let Some(r) = rects.next_if(|r| r.node == sq.node) {
            elements.push(SvgElement::Rect {
                class: "container",
                x: px(r.x + r.inset),
                y: tree_top + r.y * tree_h,
                width: (r.width - 2.0 * r.inset) * unit,
                height: r.height * tree_h,
                fill: r.fill.to_hex(),
                stroke: Some("#333333"),
                data: vec![("node", r.node.to_string())],
            });
        }
        let right = if sq.childless {
            sq.x + sq.width - sq.inset
        } else {
            sq.x + sq.width
        };
        elements.push(SvgElement::Rect {
            class: "square",
            x: px(sq.x + sq.inset),
            y: tree_top + sq.inset * tree_h,
            width: (right - sq.x - sq.inset) * unit,
            height: (1.0 - sq.inset) * tree_h,
            fill: sq.fill.to_hex(),
            stroke: sq.childless.then_some("#333333"),
            data: vec![("node", sq.node.to_string())],
        });
    }

    if cfg.show_labels {
        for sq in &layout.squares {
            if let Some(label) = &sq.label {
                elements.push(SvgElement::Text {
                    class: "label",
                    x: px(sq.x + sq.width / 2.0),
                    y: label_y,
                    anchor: "middle",
                    size: cfg.font_size,
                    content: label.clone(),
                });
            }
        }
    }

    let doc = SvgDocument {
        width,
        height,
        elements,
    };
    if !(width.is_finite() && height.is_finite()) {
        return Err(RenderError::NonFinite("page size"));
    }
    for e in &doc.elements {
        if e.coords().iter().any(|c| !c.is_finite()) {
            return Err(RenderError::NonFinite(e.class()));
        }
    }
    Ok(doc)
}
