//! Gesture classification pipeline for multi-channel hand-tracking
//! streams sampled at 5 Hz.
//!
//! The library covers the full path from raw frame CSVs to evaluated
//! models: ingestion and channel naming ([`ingest`]), windowed
//! statistical and spatio-temporal feature extraction ([`features`]),
//! one-way F-test scoring and filtering ([`select`]), a seeded
//! random-forest classifier with stratified cross-validation
//! ([`classify`]), early-fusion sweep experiments and a synthetic data
//! generator ([`experiment`]), and batch orchestration of all stages
//! ([`pipeline`]).
//!
//! Everything is deterministic for a fixed seed: each randomized
//! component draws from its own counter-derived substream ([`seed`]),
//! and all numeric text I/O round-trips bit for bit ([`text`]).

pub mod classify;
pub mod experiment;
pub mod features;
pub mod ingest;
pub mod pipeline;
pub mod seed;
pub mod select;
pub mod text;
