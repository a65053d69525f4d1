//! String-based phrase similarity used for semantic edges.
//!
//! Word pairs are scored by their longest common substring. Phrases are
//! scored by greedily matching their words, aggregating the matched scores
//! over both phrase lengths, and discounting for word-order inversions.

use crate::extract::KnowledgeElement;

/// Length in characters of the longest common contiguous substring.
pub fn longest_common_substring(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    let mut best = 0;
    for &ca in &a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] + 1 } else { 0 };
            best = best.max(cur[j + 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// `|lcs|² / (|w1|·|w2|)`, or 1 for identical words.
pub fn word_similarity(w1: &str, w2: &str) -> f64 {
    if w1 == w2 {
        return 1.0;
    }
    let (n1, n2) = (w1.chars().count(), w2.chars().count());
    if n1 == 0 || n2 == 0 {
        return 0.0;
    }
    let l = longest_common_substring(w1, w2) as f64;
    l * l / (n1 as f64 * n2 as f64)
}

/// Similarity of two normalized phrase keys.
pub fn key_similarity(k1: &str, k2: &str) -> f64 {
    if k1 == k2 {
        return 1.0;
    }
    // Canonical argument order makes the greedy tie-break symmetric.
    let (k1, k2) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
    let a: Vec<&str> = k1.split_whitespace().collect();
    let b: Vec<&str> = k2.split_whitespace().collect();
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return 0.0;
    }

    let scores: Vec<Vec<f64>> = a
        .iter()
        .map(|wa| b.iter().map(|wb| word_similarity(wa, wb)).collect())
        .collect();

    let mut row_used = vec![false; m];
    let mut col_used = vec![false; n];
    let mut selected: Vec<(usize, usize, f64)> = Vec::with_capacity(m.min(n));
    for _ in 0..m.min(n) {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, row) in scores.iter().enumerate() {
            if row_used[i] {
                continue;
            }
            for (j, &v) in row.iter().enumerate() {
                // strict comparison keeps the smallest (i, j) among ties
                if !col_used[j] && best.is_none_or(|(_, _, bv)| v > bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let (i, j, v) = best.expect("rows and columns remain");
        row_used[i] = true;
        col_used[j] = true;
        selected.push((i, j, v));
    }

    selected.retain(|&(_, _, v)| v > 0.0);
    let delta: f64 = selected.iter().map(|&(_, _, v)| v).sum();
    let t = selected.len();
    let base = delta * (m + n) as f64 / (2.0 * m as f64 * n as f64);

    let order = if t < 2 {
        1.0
    } else {
        selected.sort_by_key(|&(i, _, _)| i);
        let mut inversions = 0usize;
        for x in 0..t {
            for y in x + 1..t {
                if selected[x].1 > selected[y].1 {
                    inversions += 1;
                }
            }
        }
        1.0 - inversions as f64 / (t * (t - 1) / 2) as f64
    };

    (base * (0.5 + 0.5 * order)).clamp(0.0, 1.0)
}

pub fn phrase_similarity(p1: &KnowledgeElement, p2: &KnowledgeElement) -> f64 {
    key_similarity(&p1.key, &p2.key)
}
