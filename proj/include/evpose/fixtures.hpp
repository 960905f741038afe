// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "evpose/event_core.hpp"

namespace evpose {

/// `count` events with uniform pixels and polarities and sorted timestamps drawn
/// uniformly from [start_us, start_us + duration_us). Same seed, same stream.
EventStream random_stream(SensorGeometry geometry, std::size_t count, std::uint64_t duration_us,
                          std::uint64_t seed, std::uint64_t start_us = 0);

}  // namespace evpose
