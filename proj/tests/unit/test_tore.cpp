// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>

#include "../support/oracles.hpp"
#include "evpose/error.hpp"
#include "evpose/fixtures.hpp"
#include "evpose/tore.hpp"

using namespace evpose;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an evpose::Error");
  return Errc::Io;
}

const SensorGeometry kSmall{8, 6};

}  // namespace

TEST_CASE("fifo semantics") {
  ToreState state(kSmall, ToreParams{4, 5'000'000});
  CHECK(state.empty());
  state.ingest(Event{10, 2, 3, Polarity::Positive});
  CHECK(state.fifo(2, 3, Polarity::Positive).size() == 1);
  CHECK(state.fifo(2, 3, Polarity::Negative).empty());
  for (std::uint64_t t = 11; t <= 14; ++t) state.ingest(Event{t, 2, 3, Polarity::Positive});
  const auto f = state.fifo(2, 3, Polarity::Positive);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == 14);
  CHECK(f[3] == 11);
}

TEST_CASE("ingest errors") {
  ToreState state(kSmall);
  CHECK(code_of([&] { state.ingest(Event{1, 8, 0, Polarity::Positive}); }) == Errc::OutOfBounds);
  state.ingest(Event{100, 0, 0, Polarity::Positive});
  CHECK(code_of([&] { state.ingest(Event{99, 0, 0, Polarity::Positive}); }) == Errc::TimeRegression);
  CHECK_NOTHROW(state.ingest(Event{100, 1, 0, Polarity::Negative}));
  CHECK(code_of([&] { ToreState(kSmall, ToreParams{4, 1}); }) == Errc::InvalidTau);
  CHECK(code_of([&] { tore_materialize(state, 50); }) == Errc::TimeRegression);
}

TEST_CASE("random fifos equal replayed history") {
  const EventStream s = random_stream(kSmall, 10'000, 200'000, 21);
  ToreState state(kSmall, ToreParams{4, 5'000'000});
  state.ingest(s);
  std::map<std::tuple<int, int, int>, std::vector<std::uint64_t>> history;
  for (const Event& e : s) history[{e.x, e.y, polarity_index(e.polarity)}].push_back(e.t);
  for (std::uint16_t y = 0; y < kSmall.height; ++y) {
    for (std::uint16_t x = 0; x < kSmall.width; ++x) {
      for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        auto h = history[{x, y, polarity_index(p)}];
        std::vector<std::uint64_t> expected(h.rbegin(), h.rbegin() + std::min<std::size_t>(4, h.size()));
        const auto f = state.fifo(x, y, p);
        CHECK(std::vector<std::uint64_t>(f.begin(), f.end()) == expected);
      }
    }
  }
}

TEST_CASE("value boundaries") {
  const double tau = 5e6;
  CHECK(tore_value(1.0, tau) == 1.0);
  CHECK(tore_value(0.0, tau) == 1.0);
  CHECK(tore_value(tau, tau) == 0.0);
  CHECK(tore_value(10 * tau, tau) == 0.0);
  const double edge = std::exp(0.3 * std::log(tau));
  CHECK(tore_value(edge, tau) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tore_value(edge * 1.5, tau) < 1.0);
  CHECK(0.3 * std::log(tau) == doctest::Approx(4.63).epsilon(1e-3));
}

TEST_CASE("materialize: empty pixels, channel layout and expiry") {
  ToreState state(kSmall, ToreParams{2, 5'000'000});
  state.ingest(Event{1'000, 1, 1, Polarity::Negative});
  state.ingest(Event{2'000, 1, 1, Polarity::Negative});
  const ToreVolume v = tore_materialize(state, 2'000);
  CHECK(v.channels() == 4);
  CHECK(v.at(2, 1, 1) == 1.0f);  // newest negative
  CHECK(v.at(3, 1, 1) == static_cast<float>(tore_value(1'000, 5e6)));
  CHECK(v.at(0, 1, 1) == 0.0f);
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (i != v.index(2, 1, 1) && i != v.index(3, 1, 1)) CHECK(v.values[i] == 0.0f);
  }
  const ToreVolume later = tore_materialize(state, 2'000 + 5'000'000);
  for (float x : later.values) CHECK(x == 0.0f);
}

TEST_CASE("streaming equals batch and brute force") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const EventStream s = random_stream(kSmall, 2'000, 3'000'000 * seed, seed);
    ToreParams params{seed % 5 + 1, 5'000'000};
    ToreState state(kSmall, params);
    state.ingest(s);
    const std::uint64_t tq = s.events().back().t + seed * 1'000;
    const ToreVolume a = tore_materialize(state, tq);
    const ToreVolume b = build_tore(s, params, tq);
    CHECK(oracle::same_bits(a.values, b.values));
    CHECK(oracle::same_bits(a.values, oracle::tore_brute_force(s, params.depth, 5e6, tq)));
  }
}

TEST_CASE("range, zero support and channel ordering") {
  const EventStream s = random_stream(kSmall, 3'000, 8'000'000, 99);
  ToreState state(kSmall);
  state.ingest(s);
  const std::uint64_t tq = s.events().back().t;
  const ToreVolume v = tore_materialize(state, tq);
  for (std::uint16_t y = 0; y < kSmall.height; ++y) {
    for (std::uint16_t x = 0; x < kSmall.width; ++x) {
      for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        const auto f = state.fifo(x, y, p);
        float previous = 1.0f;
        for (std::size_t k = 0; k < v.depth; ++k) {
          const float value = v.at(polarity_index(p) * v.depth + k, y, x);
          CHECK(value >= 0.0f);
          CHECK(value <= previous);
          const bool expect_zero = k >= f.size() || tq - f[k] >= 5'000'000;
          CHECK((value == 0.0f) == expect_zero);
          previous = value;
        }
      }
    }
  }
}

TEST_CASE("monotone decay") {
  ToreState one(kSmall);
  one.ingest(Event{0, 0, 0, Polarity::Positive});
  CHECK(tore_materialize(one, 10).at(0, 0, 0) >= tore_materialize(one, 100'000).at(0, 0, 0));
  const auto w = tore_monotone_check(one, 10, 100'000);
  CHECK(w.holds);

  const EventStream s = random_stream(kSmall, 4'000, 6'000'000, 5);
  ToreState state(kSmall);
  state.ingest(s);
  const std::uint64_t t = s.events().back().t;
  CHECK(tore_monotone_check(state, t, t + 1'000).holds);
  CHECK(tore_monotone_check(state, t + 10, t + 2'000'000).violations == 0);
  for (float x : tore_materialize(state, t + 5'000'000).values) CHECK(x == 0.0f);
}

TEST_CASE("tensor conversion") {
  const EventStream s = random_stream(kSmall, 100, 1'000, 2);
  const ToreVolume v = build_tore(s, ToreParams{}, 1'000);
  const Tensor3 t = v.to_tensor();
  CHECK(t.channels == 8);
  CHECK(t.height == 6);
  CHECK(t.width == 8);
  CHECK(ToreVolume::from_tensor(t, 1'000) == v);
}
