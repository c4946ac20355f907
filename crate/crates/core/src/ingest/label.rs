//! The fixed gesture vocabulary. Labels in every conforming stream come
//! from this 18-entry list; its order is the tie-breaking order used by
//! classifiers ("class-vocabulary order").

pub const GESTURE_VOCABULARY: [&str; 18] = [
    "HELLO",
    "YOU",
    "ME",
    "NAME",
    "SORRY",
    "GOOD",
    "BAD",
    "EXCUSE_ME",
    "THANKS",
    "TIME",
    "AIRPORT",
    "BUS",
    "CAR",
    "AEROPLANE",
    "TAXI",
    "RESTAURANT",
    "DRINK",
    "FOOD",
];

/// Position of a label in the vocabulary, if it is a valid gesture.
pub fn gesture_index(label: &str) -> Option<usize> {
    GESTURE_VOCABULARY.iter().position(|g| *g == label)
}

/// Sort key that puts vocabulary labels first, in vocabulary order, and
/// any other label after them alphabetically. Test fixtures sometimes use
/// ad-hoc labels; pipelines parsed from disk never do.
pub fn vocabulary_rank(label: &str) -> (usize, &str) {
    match gesture_index(label) {
        Some(i) => (i, ""),
        None => (GESTURE_VOCABULARY.len(), label),
    }
}
