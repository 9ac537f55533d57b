//! Deterministic ASCII and SVG window renderings: a grid with one glyph or
//! color per set, later layers drawn over earlier ones. Output is pure text,
//! byte-identical across runs.

use crate::error::{Error, Result};
use crate::group::{GroupElement, Window};
use crate::jsonutil;
use crate::sets::SymbolicSet;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

const GLYPHS: [char; 6] = ['#', '*', '+', 'o', 'x', '@'];
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Which two free coordinates to draw, and fixed values for the rest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceSpec {
    pub axes: (usize, usize),
    #[serde(default, with = "jsonutil::bigint_vec")]
    pub fixed: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderFormat {
    Ascii,
    Svg,
}

struct Grid {
    x_lo: i64,
    x_hi: i64,
    y_lo: i64,
    y_hi: i64,
    /// cells[row][col] = layer index or None; row 0 is the top (largest y).
    cells: Vec<Vec<Option<usize>>>,
}

fn build_grid(sets: &[(&str, &SymbolicSet)], window: &Window, slice: Option<&SliceSpec>) -> Result<Grid> {
    if sets.is_empty() {
        return Err(Error::Render("nothing to draw".into()));
    }
    let ambient = &sets[0].1.ambient;
    for (_, s) in sets {
        if &s.ambient != ambient {
            return Err(Error::Render("sets live in different groups".into()));
        }
    }
    if !ambient.is_free() {
        return Err(Error::Render("rendering draws free groups only".into()));
    }
    let (ax, ay, fixed) = match (ambient.rank, slice) {
        (2, None) => (0usize, 1usize, vec![]),
        (r, Some(sl)) => {
            if sl.axes.0 >= r || sl.axes.1 >= r || sl.axes.0 == sl.axes.1 {
                return Err(Error::Render("bad slice axes".into()));
            }
            if sl.fixed.len() + 2 != r {
                return Err(Error::Render(format!(
                    "slice must fix {} coordinates",
                    r - 2
                )));
            }
            (sl.axes.0, sl.axes.1, sl.fixed.clone())
        }
        (r, None) => {
            return Err(Error::Render(format!(
                "rank {r} needs an explicit 2-D slice"
            )))
        }
    };
    if window.dim() != 2 {
        return Err(Error::Render("render windows are two-dimensional".into()));
    }
    let lohi = |i: usize| -> Result<(i64, i64)> {
        let (lo, hi) = &window.ranges[i];
        Ok((
            lo.to_i64().ok_or_else(|| Error::Render("window too large".into()))?,
            hi.to_i64().ok_or_else(|| Error::Render("window too large".into()))?,
        ))
    };
    let (x_lo, x_hi) = lohi(0)?;
    let (y_lo, y_hi) = lohi(1)?;
    let cols = (x_hi - x_lo + 1) as usize;
    let rows = (y_hi - y_lo + 1) as usize;
    if cols * rows > 1_000_000 {
        return Err(Error::Render("window too large to draw".into()));
    }
    let mut cells = vec![vec![None; cols]; rows];
    let make_point = |x: i64, y: i64| -> GroupElement {
        let mut free = vec![BigInt::from(0); ambient.rank];
        let mut fixed_iter = fixed.iter();
        for (i, slot) in free.iter_mut().enumerate() {
            if i == ax {
                *slot = BigInt::from(x);
            } else if i == ay {
                *slot = BigInt::from(y);
            } else {
                *slot = fixed_iter.next().expect("fixed count checked").clone();
            }
        }
        GroupElement::from_free(free)
    };
    for (li, (_, s)) in sets.iter().enumerate() {
        for y in y_lo..=y_hi {
            for x in x_lo..=x_hi {
                if s.contains(&make_point(x, y))? {
                    let row = (y_hi - y) as usize;
                    let col = (x - x_lo) as usize;
                    cells[row][col] = Some(li);
                }
            }
        }
    }
    Ok(Grid { x_lo, x_hi, y_lo, y_hi, cells })
}

/// Text grid; the y axis grows upward, layers listed in the legend.
pub fn render_ascii(
    sets: &[(&str, &SymbolicSet)],
    window: &Window,
    slice: Option<&SliceSpec>,
) -> Result<String> {
    let grid = build_grid(sets, window, slice)?;
    let mut out = String::new();
    for (i, (name, _)) in sets.iter().enumerate() {
        writeln!(out, "{} {}", GLYPHS[i % GLYPHS.len()], name).unwrap();
    }
    writeln!(
        out,
        "x: {}..{}  y: {}..{} (top row is y = {})",
        grid.x_lo, grid.x_hi, grid.y_lo, grid.y_hi, grid.y_hi
    )
    .unwrap();
    for row in &grid.cells {
        let line: String = row
            .iter()
            .map(|c| match c {
                Some(li) => GLYPHS[*li % GLYPHS.len()],
                None => '.',
            })
            .collect();
        writeln!(out, "{line}").unwrap();
    }
    Ok(out)
}

/// SVG grid of unit cells; pure string output, byte-stable across runs.
pub fn render_svg(
    sets: &[(&str, &SymbolicSet)],
    window: &Window,
    slice: Option<&SliceSpec>,
) -> Result<String> {
    let grid = build_grid(sets, window, slice)?;
    let cell = 12i64;
    let margin = 4i64;
    let cols = grid.x_hi - grid.x_lo + 1;
    let rows = grid.y_hi - grid.y_lo + 1;
    let width = cols * cell + 2 * margin;
    let height = rows * cell + 2 * margin;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    )
    .unwrap();
    // Axes through the origin, when visible.
    if grid.x_lo <= 0 && 0 <= grid.x_hi {
        let x = margin + (0 - grid.x_lo) * cell + cell / 2;
        writeln!(
            out,
            "  <line x1=\"{x}\" y1=\"{margin}\" x2=\"{x}\" y2=\"{}\" stroke=\"#cccccc\" stroke-width=\"1\"/>",
            height - margin
        )
        .unwrap();
    }
    if grid.y_lo <= 0 && 0 <= grid.y_hi {
        let y = margin + (grid.y_hi - 0) * cell + cell / 2;
        writeln!(
            out,
            "  <line x1=\"{margin}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#cccccc\" stroke-width=\"1\"/>",
            width - margin
        )
        .unwrap();
    }
    for (ri, row) in grid.cells.iter().enumerate() {
        for (ci, cellv) in row.iter().enumerate() {
            if let Some(li) = cellv {
                let x = margin + ci as i64 * cell + 1;
                let y = margin + ri as i64 * cell + 1;
                writeln!(
                    out,
                    "  <rect x=\"{x}\" y=\"{y}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                    cell - 2,
                    cell - 2,
                    COLORS[*li % COLORS.len()]
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
