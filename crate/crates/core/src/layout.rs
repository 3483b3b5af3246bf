// SPDX-License-Identifier: Apache-2.0

//! Treebar map geometry.
//!
//! The horizontal treemap is built recursively: a node is drawn as a unit
//! square for V⁻(μ) followed by the rectangles of its children, left to
//! right in tree order, so the total width equals the node count. Every
//! square is topped by a bar whose height is logarithmic in the size of the
//! set it stands for. Horizontal positions are in unit-square widths;
//! vertical positions are fractions of the treemap height.

use serde::{Serialize, Serializer};

use crate::coretree::{CoreTree, NodeId};

/// Color with channels in `0.0..=255.0`. Kept fractional so interpolated
/// ramps stay strictly ordered by luminance before rounding to hex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Rgb {
    pub const fn from_u8(r: u8, g: u8, b: u8) -> Self {
        Rgb {
            r: r as f64,
            g: g as f64,
            b: b as f64,
        }
    }

    pub fn from_hex(hex: &str) -> Option<Self> {
        let hex = hex.strip_prefix('#').unwrap_or(hex);
        if hex.len() != 6 {
            return None;
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).ok();
        Some(Rgb::from_u8(channel(0)?, channel(2)?, channel(4)?))
    }

    pub fn to_hex(self) -> String {
        let q = |x: f64| x.round().clamp(0.0, 255.0) as u8;
        format!("#{:02x}{:02x}{:02x}", q(self.r), q(self.g), q(self.b))
    }

    /// WCAG relative luminance.
    pub fn luminance(self) -> f64 {
        let lin = |c: f64| {
            let c = c / 255.0;
            if c <= 0.04045 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        };
        0.2126 * lin(self.r) + 0.7152 * lin(self.g) + 0.0722 * lin(self.b)
    }

    fn lerp(self, other: Rgb, f: f64) -> Rgb {
        Rgb {
            r: self.r + (other.r - self.r) * f,
            g: self.g + (other.g - self.g) * f,
            b: self.b + (other.b - self.b) * f,
        }
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Sequential blue ramp, light to dark. Every channel decreases strictly
/// from stop to stop, so luminance does too.
pub const DEFAULT_PALETTE: [Rgb; 8] = [
    Rgb::from_u8(0xf7, 0xfb, 0xff),
    Rgb::from_u8(0xde, 0xeb, 0xf7),
    Rgb::from_u8(0xc6, 0xdb, 0xef),
    Rgb::from_u8(0x9e, 0xca, 0xe1),
    Rgb::from_u8(0x6b, 0xae, 0xd6),
    Rgb::from_u8(0x42, 0x92, 0xc6),
    Rgb::from_u8(0x21, 0x71, 0xb5),
    Rgb::from_u8(0x08, 0x45, 0x94),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderConfig {
    /// Pixels per unit square.
    pub unit_px: f64,
    /// Nesting inset, as a fraction of a unit, for the first nesting level.
    pub inset_frac: f64,
    pub palette: Vec<Rgb>,
    pub font_size: f64,
    pub show_labels: bool,
    pub page_height_px: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            unit_px: 40.0,
            inset_frac: 0.04,
            palette: DEFAULT_PALETTE.to_vec(),
            font_size: 11.0,
            show_labels: true,
            page_height_px: 480.0,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.unit_px.is_finite() && self.unit_px > 0.0) {
            return Err(format!("unit_px must be positive, got {}", self.unit_px));
        }
        if !(0.0..0.5).contains(&self.inset_frac) {
            return Err(format!("inset_frac must be in [0, 0.5), got {}", self.inset_frac));
        }
        if self.palette.is_empty() {
            return Err("palette is empty".into());
        }
        if !(self.font_size.is_finite() && self.font_size > 0.0) {
            return Err(format!("font_size must be positive, got {}", self.font_size));
        }
        if !(self.page_height_px.is_finite() && self.page_height_px > 0.0) {
            return Err(format!("page_height_px must be positive, got {}", self.page_height_px));
        }
        Ok(())
    }
}

/// Bar height for a set of `size` vertices: 0 for an empty set, otherwise
/// `1 + log10(size)`.
pub fn bar_height(size: usize) -> f64 {
    if size == 0 {
        0.0
    } else {
        1.0 + (size as f64).log10()
    }
}

/// Palette position `max_c / max(degeneracy, 1)`, linearly interpolated
/// between neighboring stops.
pub fn color_for(max_c: u32, degeneracy: u32, palette: &[Rgb]) -> Rgb {
    assert!(!palette.is_empty(), "palette must not be empty");
    if palette.len() == 1 {
        return palette[0];
    }
    let p = (max_c as f64 / degeneracy.max(1) as f64).clamp(0.0, 1.0);
    let pos = p * (palette.len() - 1) as f64;
    let i = (pos.floor() as usize).min(palette.len() - 2);
    palette[i].lerp(palette[i + 1], pos - i as f64)
}

/// Cumulative inset at nesting depth `d`: `0.5 * (1 - (1 - 2f)^d)`.
/// The first level is inset by exactly `f` and the total approaches but
/// never exceeds 0.5, so deep nestings never invert a rectangle.
pub fn nesting_inset(depth: usize, inset_frac: f64) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * inset_frac).powi(depth as i32))
}

/// Container rectangle of a node with at least one child.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreemapRect {
    pub node: NodeId,
    pub x: f64,
    /// Number of squares in the node's subtree.
    pub width: f64,
    /// Top edge, as a fraction of the treemap height (bottom is at 1).
    pub y: f64,
    pub height: f64,
    pub depth: usize,
    pub inset: f64,
    pub fill: Rgb,
}

/// Unit square for V⁻(μ), or for the whole node when it is childless.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitSquare {
    pub node: NodeId,
    pub x: f64,
    pub width: f64,
    pub depth: usize,
    pub inset: f64,
    pub childless: bool,
    pub fill: Rgb,
    /// "lo–hi" coreness range present in the set; absent for empty sets.
    pub label: Option<String>,
    pub bar_height: f64,
    pub bar_set_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreebarLayout {
    pub rects: Vec<TreemapRect>,
    pub squares: Vec<UnitSquare>,
    pub total_width: f64,
    /// Top of the bar axis: the tallest bar rounded up, at least 1.
    pub bar_axis_max: f64,
    pub degeneracy: u32,
}

impl TreebarLayout {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }
}

pub fn compute_layout(tree: &CoreTree) -> TreebarLayout {
    compute_layout_with(tree, &RenderConfig::default())
}

pub fn compute_layout_with(tree: &CoreTree, cfg: &RenderConfig) -> TreebarLayout {
    let count = tree.len();
    let degeneracy = tree.max_coreness();

    // Pre-order ids: children always have larger ids than their parent.
    let mut width = vec![1usize; count];
    for id in (0..count).rev() {
        width[id] += tree.node(id).children.iter().map(|&c| width[c]).sum::<usize>();
    }
    let mut x = vec![0usize; count];
    let mut depth = vec![0usize; count];
    for id in 0..count {
        let mut cursor = x[id] + 1;
        for &c in &tree.node(id).children {
            x[c] = cursor;
            depth[c] = depth[id] + 1;
            cursor += width[c];
        }
    }

    let mut rects = Vec::new();
    let mut squares = Vec::with_capacity(count);
    for (id, node) in tree.nodes().iter().enumerate() {
        let fill = color_for(node.max_c, degeneracy, &cfg.palette);
        let inset = nesting_inset(depth[id], cfg.inset_frac);
        let childless = node.children.is_empty();
        if !childless {
            rects.push(TreemapRect {
                node: id,
                x: x[id] as f64,
                width: width[id] as f64,
                y: inset,
                height: 1.0 - inset,
                depth: depth[id],
                inset,
                fill,
            });
        }
        let set_size = if childless { node.n } else { node.n_minus };
        let label = match (set_size, node.actual_min, node.actual_max) {
            (s, Some(lo), Some(hi)) if s > 0 => Some(format!("{lo}\u{2013}{hi}")),
            _ => None,
        };
        squares.push(UnitSquare {
            node: id,
            x: x[id] as f64,
            width: 1.0,
            depth: depth[id],
            inset,
            childless,
            fill,
            label,
            bar_height: bar_height(set_size),
            bar_set_size: set_size,
        });
    }

    let tallest = squares.iter().map(|s| s.bar_height).fold(0.0, f64::max);
    TreebarLayout {
        rects,
        squares,
        total_width: width.first().copied().unwrap_or(0) as f64,
        bar_axis_max: tallest.ceil().max(1.0),
        degeneracy,
    }
}
