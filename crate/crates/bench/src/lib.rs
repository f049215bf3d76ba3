//! Synthetic inputs shared by the benchmarks.

use commit_density::{Column, ColumnRole, Dataset, Label, LabeledSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CODE: &[&str] = &[
    "    let x = compute(a, b);",
    "    if (ready) { start(); }",
    "    return total / count;",
    "}",
    "int main(void) {",
];
const COMMENT: &[&str] = &["    // TODO: tidy up", "    /* single-line block */", " * continued block line"];

/// C-family source lines: mostly code, some comments (including multi-line
/// blocks), some blank lines.
pub fn c_lines(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        match rng.gen_range(0..10) {
            0..=5 => out.push(CODE[rng.gen_range(0..CODE.len())].to_string()),
            6 | 7 => out.push(COMMENT[rng.gen_range(0..COMMENT.len())].to_string()),
            8 => out.push(String::new()),
            _ => {
                out.push("/*".to_string());
                for _ in 0..rng.gen_range(1..4) {
                    out.push(" * explanation".to_string());
                }
                out.push(" */".to_string());
            }
        }
    }
    out.truncate(n);
    out
}

/// Three classes; the label is the argmax of the first three of `p`
/// uniform features, the rest are noise.
pub fn three_class(n: usize, p: usize, seed: u64) -> Dataset {
    assert!(p >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..p).map(|j| Column::new(format!("x{j}"), ColumnRole::Size)).collect();
    let rows = (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..p).map(|_| rng.gen::<f64>()).collect();
            let k = (0..3).max_by(|&a, &b| x[a].total_cmp(&x[b])).unwrap();
            LabeledSample::new(x, Label::from_index(k))
        })
        .collect();
    Dataset::new(columns, rows, "synthetic").unwrap()
}
