//! Euclidean helpers shared by the tutor and the prototype learners.
//!
//! Every argmin/argmax here resolves ties towards the earliest candidate, so
//! callers control tie-breaking by the order in which they yield candidates.

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Component-wise arithmetic mean of a non-empty set of points.
pub fn centroid<'a>(points: impl IntoIterator<Item = &'a [f64]>, dims: usize) -> Vec<f64> {
    let mut sum = vec![0.0; dims];
    let mut count = 0usize;
    for p in points {
        for (s, x) in sum.iter_mut().zip(p) {
            *s += x;
        }
        count += 1;
    }
    debug_assert!(count > 0, "centroid of an empty set");
    let n = count as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    sum
}

/// Index of the candidate nearest to `target`; first candidate wins ties.
pub fn nearest<'a, K>(
    candidates: impl IntoIterator<Item = (K, &'a [f64])>,
    target: &[f64],
) -> Option<K> {
    let mut best: Option<(K, f64)> = None;
    for (key, point) in candidates {
        let d = distance(point, target);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((key, d)),
        }
    }
    best.map(|(k, _)| k)
}

/// Discriminative score of a prototype: the distance to the closest
/// distractor minus the distance to the topic. `None` without distractors.
pub fn discrimination_score<'a>(
    prototype: &[f64],
    topic: &[f64],
    distractors: impl IntoIterator<Item = &'a [f64]>,
) -> Option<f64> {
    distractors
        .into_iter()
        .map(|o| distance(prototype, o))
        .min_by(f64::total_cmp)
        .map(|closest| closest - distance(prototype, topic))
}

/// Candidate with the maximal discriminative score and that score. With no
/// distractors the nearest candidate to the topic is returned instead, with
/// no score.
pub fn most_discriminative<'a, K>(
    candidates: impl IntoIterator<Item = (K, &'a [f64])>,
    topic: &[f64],
    distractors: &[&[f64]],
) -> Option<(K, Option<f64>)> {
    if distractors.is_empty() {
        return nearest(candidates, topic).map(|k| (k, None));
    }
    let mut best: Option<(K, f64)> = None;
    for (key, proto) in candidates {
        let score = discrimination_score(proto, topic, distractors.iter().copied())
            .expect("distractors are non-empty");
        match best {
            Some((_, bs)) if score <= bs => {}
            _ => best = Some((key, score)),
        }
    }
    best.map(|(k, s)| (k, Some(s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_euclidean() {
        assert_eq!(distance(&[0.0, 0.0, 0.0], &[3.0, 4.0, 0.0]), 5.0);
        assert_eq!(distance(&[0.5; 3], &[0.5; 3]), 0.0);
    }

    #[test]
    fn nearest_prefers_first_on_tie() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let got = nearest([(0, &a[..]), (1, &b[..])], &[1.0, 0.0]);
        assert_eq!(got, Some(0));
        assert_eq!(nearest::<usize>(std::iter::empty(), &[1.0, 0.0]), None);
    }

    #[test]
    fn centroid_of_two_points() {
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0];
        assert_eq!(centroid([&a[..], &b[..]], 3), vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn discriminative_without_distractors_falls_back_to_nearest() {
        let p1 = [0.0; 3];
        let p2 = [1.0; 3];
        let got = most_discriminative([(0, &p1[..]), (1, &p2[..])], &[0.9; 3], &[]);
        assert_eq!(got, Some((1, None)));
    }
}
