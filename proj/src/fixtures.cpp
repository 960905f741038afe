// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/fixtures.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "evpose/error.hpp"

namespace evpose {

EventStream random_stream(SensorGeometry geometry, std::size_t count, std::uint64_t duration_us,
                          std::uint64_t seed, std::uint64_t start_us) {
  geometry.validate();
  if (duration_us == 0) throw Error(Errc::ZeroWindow, "fixture duration must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> when(start_us, start_us + duration_us - 1);
  std::uniform_int_distribution<int> col(0, geometry.width - 1);
  std::uniform_int_distribution<int> row(0, geometry.height - 1);
  std::bernoulli_distribution on(0.5);
  std::vector<std::uint64_t> stamps(count);
  for (auto& t : stamps) t = when(rng);
  std::sort(stamps.begin(), stamps.end());
  std::vector<Event> events(count);
  for (std::size_t i = 0; i < count; ++i) {
    events[i] = Event{stamps[i], static_cast<std::uint16_t>(col(rng)), static_cast<std::uint16_t>(row(rng)),
                      on(rng) ? Polarity::Positive : Polarity::Negative};
  }
  return EventStream(geometry, std::move(events));
}

}  // namespace evpose
