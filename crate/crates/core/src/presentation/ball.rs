use std::collections::HashMap;

use super::{Presentation, Word};
use crate::error::{Error, Result};
use crate::linalg2::Sl2Element;
use crate::repvar::Representation;

/// Default cap on the number of distinct elements an enumeration may produce.
pub const DEFAULT_ELEMENT_BUDGET: usize = 200_000;

/// Relative tolerance for identifying two reference images.
pub const DEDUP_TOL: f64 = 1e-6;

const BUCKET_WIDTH: f64 = 1e-2;

/// A group element of the ball: a shortest word found for it and its reference image.
#[derive(Debug, Clone, PartialEq)]
pub struct BallElement {
    pub word: Word,
    pub length: usize,
    pub image: Sl2Element,
}

fn same_element(g: &Sl2Element, h: &Sl2Element) -> bool {
    let scale = g.matrix().max_abs().max(h.matrix().max_abs()).max(1.0);
    (*g.matrix() - *h.matrix()).max_abs() < DEDUP_TOL * scale
}

/// Elements of word length ≤ `radius`, deduplicated through their images under
/// `dedup_rep`, in breadth-first order.
///
/// Only survivors are extended, so each group element is recorded once with the
/// length of its shortest word. Images are bucketed on the real part of the top-left
/// entry.
pub fn enumerate_ball(
    p: &Presentation,
    dedup_rep: &Representation,
    radius: usize,
    budget: Option<usize>,
) -> Result<Vec<BallElement>> {
    if dedup_rep.generator_count() != p.generator_count() {
        return Err(Error::PresentationMismatch);
    }
    let budget = budget.unwrap_or(DEFAULT_ELEMENT_BUDGET);
    let n = p.generator_count() as i32;
    let mut out = vec![BallElement { word: Word::identity(), length: 0, image: Sl2Element::identity() }];
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    let key = |g: &Sl2Element| (g.matrix().a.re / BUCKET_WIDTH).floor() as i64;
    buckets.entry(key(&Sl2Element::identity())).or_default().push(0);

    let mut frontier = vec![0usize];
    for length in 1..=radius {
        let mut next = Vec::new();
        for &idx in &frontier {
            let last = out[idx].word.letters().last().copied();
            for x in (1..=n).flat_map(|i| [i, -i]) {
                if last == Some(-x) {
                    continue;
                }
                let g = dedup_rep.image(x.unsigned_abs() as usize);
                let step = if x > 0 { *g } else { g.inv() };
                let image = out[idx].image * step;
                let scale = image.matrix().max_abs().max(1.0);
                let reach = ((DEDUP_TOL * scale) / BUCKET_WIDTH).ceil() as i64;
                let k = key(&image);
                let seen = (k - reach..=k + reach)
                    .filter_map(|b| buckets.get(&b))
                    .flatten()
                    .any(|&j| same_element(&out[j].image, &image));
                if seen {
                    continue;
                }
                let mut letters = out[idx].word.letters().to_vec();
                letters.push(x);
                out.push(BallElement { word: Word::from_raw(letters), length, image });
                if out.len() > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                let j = out.len() - 1;
                buckets.entry(k).or_default().push(j);
                next.push(j);
            }
        }
        frontier = next;
    }
    Ok(out)
}
