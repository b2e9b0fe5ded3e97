//! Sign-change isolation of zeros of `Z` on Gram blocks.
//!
//! The search range is widened to the nearest "good" Gram points
//! (`(−1)^n Z(g_n) > 0`) on both sides. Between consecutive good Gram points
//! `g_a < g_b` Rosser's rule predicts `b − a` zeros. A block that shows fewer
//! sign changes is resampled by repeated midpoint insertion, up to
//! [`MAX_SUBDIVISION`] samples per Gram interval, and then probed at local
//! minima of `|Z|`. Blocks that stay short are reported, never padded.

use rayon::prelude::*;

use super::hardy::hardy_z_unchecked;
use super::table::{ZeroSource, ZeroTable};
use super::theta::{
    check_height, gram_index_below, gram_point_from, theta_prime, MAX_HEIGHT, MIN_HEIGHT,
};
use crate::error::{Error, Result};
use crate::predictor::{main_term, COUNTING_CONSTANT};

/// Bracket width at which refinement stops.
pub const REFINE_WIDTH: f64 = 1e-9;
/// Maximum samples per Gram interval during adaptive subdivision.
pub const MAX_SUBDIVISION: usize = 64;
/// Allowed gap between found zeros and the main-term prediction.
pub const COUNT_SLACK: f64 = 2.0;

const MAX_GRAM_WALK: usize = 64;

/// A run of Gram intervals between consecutive good Gram points.
#[derive(Clone, Debug, PartialEq)]
pub struct GramBlock {
    pub lo: f64,
    pub hi: f64,
    pub expected_sign_changes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchDiagnostic {
    /// A block yielded fewer sign changes than Rosser's rule predicts.
    DeficientBlock { block: GramBlock, found: usize },
    /// Zeros found in `(t_lo, t_hi)` differ from `M(t_hi) − M(t_lo)` by more
    /// than [`COUNT_SLACK`].
    CountMismatch { predicted: f64, found: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSearch {
    pub zeros: Vec<f64>,
    pub blocks: Vec<GramBlock>,
    pub diagnostics: Vec<SearchDiagnostic>,
}

impl ZeroSearch {
    pub fn suspected_missed_zeros(&self) -> bool {
        !self.diagnostics.is_empty()
    }
}

#[derive(Clone, Copy)]
struct Sample {
    t: f64,
    z: f64,
}

impl Sample {
    fn at(t: f64) -> Self {
        Self {
            t,
            z: hardy_z_unchecked(t),
        }
    }

    fn positive(&self) -> bool {
        self.z >= 0.0
    }
}

/// Anchor for a block boundary: a Gram point `(g_n, n)`, or the lower edge
/// of the domain, which plays the role of index `−1` (no zeros lie below
/// `g_0` other than those counted from there).
#[derive(Clone, Copy)]
struct Anchor {
    t: f64,
    index: i64,
}

fn is_good(index: i64, z: f64) -> bool {
    let parity = if index.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    parity * z > 0.0
}

fn gram_near(n: i64, hint: f64) -> f64 {
    gram_point_from(n, hint)
}

fn lower_anchor(t_lo: f64) -> Anchor {
    let mut n = gram_index_below(t_lo);
    let mut hint = t_lo;
    for _ in 0..MAX_GRAM_WALK {
        if n < 0 {
            break;
        }
        let g = gram_near(n, hint);
        if g < MIN_HEIGHT {
            break;
        }
        if is_good(n, hardy_z_unchecked(g)) {
            return Anchor { t: g, index: n };
        }
        hint = g - std::f64::consts::PI / theta_prime(g);
        n -= 1;
    }
    Anchor {
        t: MIN_HEIGHT,
        index: -1,
    }
}

fn upper_anchor(t_hi: f64) -> Result<Anchor> {
    let mut hint = t_hi;
    for n in (gram_index_below(t_hi) + 1..).take(MAX_GRAM_WALK) {
        let g = gram_near(n, hint);
        if g > MAX_HEIGHT {
            break;
        }
        if is_good(n, hardy_z_unchecked(g)) {
            return Ok(Anchor { t: g, index: n });
        }
        hint = g + std::f64::consts::PI / theta_prime(g);
    }
    Err(Error::Domain(format!(
        "no good Gram point found above {t_hi} within the supported range"
    )))
}

/// All sign-change zeros of `Z` in `(t_lo, t_hi)`, ascending.
pub fn find_zeros(t_lo: f64, t_hi: f64) -> Result<ZeroSearch> {
    check_height(t_lo)?;
    check_height(t_hi)?;
    if !(t_lo < t_hi) {
        return Err(Error::InvalidParameter(format!(
            "empty search range ({t_lo}, {t_hi})"
        )));
    }

    let lo = lower_anchor(t_lo);
    let hi = upper_anchor(t_hi)?;

    // Boundary points of the Gram grid from lo to hi inclusive.
    let first_gram = lo.index.max(-1) + 1;
    let mut points = Vec::with_capacity((hi.index - lo.index + 1) as usize);
    points.push(Anchor {
        t: lo.t,
        index: lo.index,
    });
    let mut prev = lo.t.max(MIN_HEIGHT);
    for n in first_gram.max(lo.index + 1)..=hi.index {
        let hint = if n == 0 {
            17.8
        } else {
            prev + std::f64::consts::PI / theta_prime(prev.max(MIN_HEIGHT))
        };
        let g = if n == hi.index {
            hi.t
        } else {
            gram_near(n, hint)
        };
        points.push(Anchor { t: g, index: n });
        prev = g;
    }

    let samples: Vec<Sample> = points.par_iter().map(|a| Sample::at(a.t)).collect();

    // Split at good Gram points; the lower domain edge always splits.
    let mut cuts = vec![0usize];
    for i in 1..points.len() {
        if i == points.len() - 1 || is_good(points[i].index, samples[i].z) {
            cuts.push(i);
        }
    }

    let spans: Vec<(usize, usize)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let results: Vec<(Vec<f64>, GramBlock, usize)> = spans
        .par_iter()
        .map(|&(a, b)| {
            let block = GramBlock {
                lo: points[a].t,
                hi: points[b].t,
                expected_sign_changes: (points[b].index - points[a].index) as usize,
            };
            let (zeros, found) = process_block(&samples[a..=b], block.expected_sign_changes);
            (zeros, block, found)
        })
        .collect();

    let mut zeros = Vec::new();
    let mut blocks = Vec::with_capacity(results.len());
    let mut diagnostics = Vec::new();
    for (z, block, found) in results {
        if found < block.expected_sign_changes && block.hi > t_lo && block.lo < t_hi {
            diagnostics.push(SearchDiagnostic::DeficientBlock {
                block: block.clone(),
                found,
            });
        }
        zeros.extend(z.into_iter().filter(|&g| g > t_lo && g < t_hi));
        blocks.push(block);
    }

    let predicted = main_term(t_hi, COUNTING_CONSTANT) - main_term(t_lo, COUNTING_CONSTANT);
    if (zeros.len() as f64 - predicted).abs() > COUNT_SLACK {
        diagnostics.push(SearchDiagnostic::CountMismatch {
            predicted,
            found: zeros.len(),
        });
    }

    Ok(ZeroSearch {
        zeros,
        blocks,
        diagnostics,
    })
}

/// Zeros on `(10, t_max)` as a computed table covering `t_max`.
pub fn compute_table(t_max: f64) -> Result<(ZeroTable, Vec<SearchDiagnostic>)> {
    let search = find_zeros(MIN_HEIGHT, t_max)?;
    let table = ZeroTable::new(search.zeros, ZeroSource::Computed, t_max)?;
    Ok((table, search.diagnostics))
}

fn sign_changes(samples: &[Sample]) -> usize {
    samples
        .windows(2)
        .filter(|w| w[0].positive() != w[1].positive())
        .count()
}

fn process_block(boundary: &[Sample], expected: usize) -> (Vec<f64>, usize) {
    let mut samples = boundary.to_vec();
    let mut per_interval = 1;
    while sign_changes(&samples) < expected && per_interval < MAX_SUBDIVISION {
        samples = insert_midpoints(&samples);
        per_interval *= 2;
    }
    if sign_changes(&samples) < expected {
        probe_minima(&mut samples);
    }
    let found = sign_changes(&samples);
    let zeros = samples
        .windows(2)
        .filter(|w| w[0].positive() != w[1].positive())
        .map(|w| refine(w[0], w[1]))
        .collect();
    (zeros, found)
}

fn insert_midpoints(samples: &[Sample]) -> Vec<Sample> {
    let mids: Vec<Sample> = samples
        .windows(2)
        .map(|w| Sample::at(0.5 * (w[0].t + w[1].t)))
        .collect();
    let mut out = Vec::with_capacity(samples.len() + mids.len());
    for (i, s) in samples.iter().enumerate() {
        out.push(*s);
        if let Some(m) = mids.get(i) {
            out.push(*m);
        }
    }
    out
}

/// Golden-section search at every interior local minimum of `|Z|` between
/// same-signed neighbours; a sign flip found there splits the interval.
fn probe_minima(samples: &mut Vec<Sample>) {
    let mut inserted = Vec::new();
    for i in 1..samples.len().saturating_sub(1) {
        let (l, m, r) = (samples[i - 1], samples[i], samples[i + 1]);
        if l.positive() != m.positive() || m.positive() != r.positive() {
            continue;
        }
        if m.z.abs() > l.z.abs() || m.z.abs() > r.z.abs() {
            continue;
        }
        let s = if m.positive() { 1.0 } else { -1.0 };
        if let Some(hit) = golden_flip(l.t, r.t, s) {
            inserted.push(hit);
        }
    }
    if inserted.is_empty() {
        return;
    }
    samples.extend(inserted);
    samples.sort_by(|a, b| a.t.total_cmp(&b.t));
    samples.dedup_by(|a, b| a.t == b.t);
}

fn golden_flip(mut a: f64, mut b: f64, sign: f64) -> Option<Sample> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = sign * hardy_z_unchecked(c);
    let mut fd = sign * hardy_z_unchecked(d);
    for _ in 0..60 {
        if fc < 0.0 {
            return Some(Sample::at(c));
        }
        if fd < 0.0 {
            return Some(Sample::at(d));
        }
        if b - a < REFINE_WIDTH {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = sign * hardy_z_unchecked(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = sign * hardy_z_unchecked(d);
        }
    }
    None
}

/// Illinois regula falsi with a bisection step whenever two iterations fail
/// to halve the bracket.
fn refine(left: Sample, right: Sample) -> f64 {
    let (mut a, mut fa) = (left.t, left.z);
    let (mut b, mut fb) = (right.t, right.z);
    if fa == 0.0 {
        return a;
    }
    let mut retained = 0i8;
    let mut width_two_ago = f64::INFINITY;
    let mut width_one_ago = b - a;
    for _ in 0..300 {
        if b - a < REFINE_WIDTH {
            break;
        }
        let bisect = b - a > 0.5 * width_two_ago;
        let mut c = if bisect {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = hardy_z_unchecked(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
            if retained == 1 {
                fb *= 0.5;
            }
            retained = 1;
        } else {
            b = c;
            fb = fc;
            if retained == -1 {
                fa *= 0.5;
            }
            retained = -1;
        }
        width_two_ago = width_one_ago;
        width_one_ago = b - a;
    }
    0.5 * (a + b)
}
