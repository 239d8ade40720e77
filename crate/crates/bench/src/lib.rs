// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks (`benches/`) and the acceptance suite (`tests/acceptance.rs`).
