#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CATEGORIES: [&str; 4] = ["business", "food", "sports", "tech"];
const SHARED: [&str; 6] = ["the", "a", "and", "of", "to", "in"];

/// Documents for a corpus whose categories use disjoint topical vocabularies
/// plus a handful of shared function words.
pub fn separable_docs(per_category: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for category in CATEGORIES {
        let vocabulary: Vec<String> = (0..30).map(|j| format!("{category}{j}")).collect();
        for _ in 0..per_category {
            let len = rng.random_range(8..25);
            let mut words = Vec::with_capacity(len);
            for _ in 0..len {
                if rng.random_bool(0.3) {
                    words.push(SHARED.choose(&mut rng).unwrap().to_string());
                } else {
                    words.push(vocabulary.choose(&mut rng).unwrap().clone());
                }
            }
            let mut text = String::new();
            for (i, w) in words.iter().enumerate() {
                text.push_str(w);
                text.push(if i % 7 == 6 { '.' } else { ' ' });
                if i % 7 == 6 {
                    text.push(' ');
                }
            }
            docs.push((text, category.to_string()));
        }
    }
    docs
}

pub fn write_corpus(dir: &Path, docs: &[(String, String)]) {
    for (i, (text, label)) in docs.iter().enumerate() {
        let category = dir.join(label);
        fs::create_dir_all(&category).unwrap();
        fs::write(category.join(format!("{i:04}.txt")), text).unwrap();
    }
}
