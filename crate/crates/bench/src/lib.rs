//! Criterion benches for the svxnfa core; see `benches/`.
