//! Static SVG 1.1 drawings: an exchange as two rows of matching colors, and
//! the nested levels of a Cantor construction.
//!
//! Coordinates go through `f64` only for placement; every label is printed
//! exactly. Output is a pure function of the input, so it is byte-stable.

use std::fmt::Write as _;

use crate::cantor::CantorSpec;
use crate::error::Result;
use crate::iet::Piece;
use crate::interval::HalfOpenInterval;
use crate::map::IntervalMap;
use crate::reversal::ReversalMap;
use crate::scalar::{format_rat, Scalar};

const WIDTH: f64 = 960.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 36.0;

/// Golden-angle hues keep neighbors distinguishable for any piece count.
fn color(i: usize) -> String {
    let hue = (i as f64 * 137.507_764) % 360.0;
    format!("hsl({hue:.1},65%,55%)")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Canvas {
    lo: f64,
    scale: f64,
    body: String,
}

impl Canvas {
    fn new<S: Scalar>(domain: &HalfOpenInterval<S>) -> Self {
        let lo = domain.lo().to_f64_lossy();
        let span = domain.hi().to_f64_lossy() - lo;
        Self {
            lo,
            scale: (WIDTH - 2.0 * MARGIN) / span,
            body: String::new(),
        }
    }

    fn x<S: Scalar>(&self, v: &S) -> f64 {
        MARGIN + (v.to_f64_lossy() - self.lo) * self.scale
    }

    fn rect<S: Scalar>(
        &mut self,
        iv: &HalfOpenInterval<S>,
        y: f64,
        h: f64,
        fill: &str,
        title: &str,
    ) {
        let (x0, x1) = (self.x(iv.lo()), self.x(iv.hi()));
        let _ = writeln!(
            self.body,
            r#"  <rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{h:.3}" fill="{fill}" stroke="black" stroke-width="0.5"><title>{}</title></rect>"#,
            (x1 - x0).max(0.0),
            escape(title)
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, text: &str) {
        let _ = writeln!(
            self.body,
            r#"  <text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            escape(text)
        );
    }

    fn finish(self, height: f64) -> String {
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
                "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                "{body}</svg>\n"
            ),
            w = WIDTH,
            h = height,
            body = self.body
        )
    }
}

/// Draws `pieces` of an exchange on `domain`: each piece above, its image
/// below, in the same color. Parts of the domain and range not covered by
/// the pieces (a truncated tail) are drawn hatched grey.
pub fn exchange_svg<S: Scalar>(
    domain: &HalfOpenInterval<S>,
    pieces: &[Piece<S>],
    caption: &str,
) -> String {
    let mut c = Canvas::new(domain);
    let (top, bottom) = (MARGIN, MARGIN + 2.5 * ROW);
    let _ = writeln!(
        c.body,
        r#"  <defs><pattern id="rest" width="6" height="6" patternUnits="userSpaceOnUse"><path d="M0,6 L6,0" stroke="grey" stroke-width="1"/></pattern></defs>"#
    );
    for (row, y) in [(false, top), (true, bottom)] {
        let mut covered: Vec<HalfOpenInterval<S>> = pieces
            .iter()
            .map(|p| if row { p.image() } else { p.interval.clone() })
            .collect();
        covered.sort_by(|a, b| a.lo().cmp(b.lo()));
        let mut cursor = domain.lo().clone();
        for iv in covered.iter().chain(std::iter::once(
            &HalfOpenInterval::new(domain.hi().clone(), domain.hi().clone() + S::one())
                .expect("nonempty"),
        )) {
            if &cursor < iv.lo() {
                let gap = HalfOpenInterval::new(cursor.clone(), iv.lo().clone()).expect("nonempty");
                let title = format!(
                    "not drawn: [{}, {})",
                    format_rat(gap.lo()),
                    format_rat(gap.hi())
                );
                c.rect(&gap, y, ROW, "url(#rest)", &title);
            }
            if iv.hi() > &cursor {
                cursor = iv.hi().clone();
            }
        }
    }
    for (i, p) in pieces.iter().enumerate() {
        let fill = color(i);
        let shift = format_rat(&p.translation);
        let src = &p.interval;
        let dst = p.image();
        let title = |iv: &HalfOpenInterval<S>| {
            format!(
                "piece {i}: [{}, {}) shift {shift}",
                format_rat(iv.lo()),
                format_rat(iv.hi())
            )
        };
        c.rect(src, top, ROW, &fill, &title(src));
        c.rect(&dst, bottom, ROW, &fill, &title(&dst));
    }
    c.text(MARGIN - 6.0, top + ROW * 0.65, "end", "x");
    c.text(MARGIN - 6.0, bottom + ROW * 0.65, "end", "T(x)");
    let axis = bottom + ROW + 18.0;
    c.text(MARGIN, axis, "middle", &format_rat(domain.lo()));
    c.text(WIDTH - MARGIN, axis, "middle", &format_rat(domain.hi()));
    c.text(WIDTH / 2.0, axis + 20.0, "middle", caption);
    c.finish(axis + 40.0)
}

/// The first `count` pieces of `T_N`, which accumulate at the right end of
/// the domain while their images accumulate at the left end.
pub fn tn_svg<S: Scalar>(map: &ReversalMap<S>, count: usize) -> Result<String> {
    let pieces = map.pieces_truncated(count)?;
    let caption = format!("T_{} on [0, 1/{}): first {count} pieces", map.n(), map.n());
    Ok(exchange_svg(map.domain(), &pieces, &caption))
}

/// Rows `0..=levels` of the construction: row `k` holds the `2^k` intervals
/// `I_w` with `|w| = k`. Words are printed inside intervals that are wide
/// enough.
pub fn cantor_svg<S: Scalar>(spec: &CantorSpec<S>, levels: usize) -> Result<String> {
    let domain = HalfOpenInterval::new(spec.a0().clone(), spec.b0().clone())?;
    let mut c = Canvas::new(&domain);
    for k in 0..=levels {
        let y = MARGIN + k as f64 * (ROW + 8.0);
        for (i, wi) in spec.level(k)?.into_iter().enumerate() {
            let iv = HalfOpenInterval::new(wi.lo.clone(), wi.hi.clone())?;
            let title = format!(
                "I_{} = [{}, {}]",
                wi.word,
                format_rat(&wi.lo),
                format_rat(&wi.hi)
            );
            let fill = if i % 2 == 0 { "#4a7ab8" } else { "#b8574a" };
            c.rect(&iv, y, ROW, fill, &title);
            let (x0, x1) = (c.x(&wi.lo), c.x(&wi.hi));
            let label = wi.word.to_string();
            if x1 - x0 > 8.0 * label.chars().count() as f64 {
                c.text((x0 + x1) / 2.0, y + ROW * 0.65, "middle", &label);
            }
        }
        c.text(MARGIN - 6.0, y + ROW * 0.65, "end", &format!("k={k}"));
    }
    let axis = MARGIN + (levels + 1) as f64 * (ROW + 8.0) + 10.0;
    c.text(MARGIN, axis, "middle", &format_rat(spec.a0()));
    c.text(WIDTH - MARGIN, axis, "middle", &format_rat(spec.b0()));
    Ok(c.finish(axis + 20.0))
}
