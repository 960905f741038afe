// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace evpose {

enum class Polarity : std::int8_t { Negative = -1, Positive = 1 };

/// 0 for positive, 1 for negative; the channel-block index used by every representation.
constexpr int polarity_index(Polarity p) noexcept { return p == Polarity::Positive ? 0 : 1; }

struct Event {
  std::uint64_t t = 0;  // microseconds
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity polarity = Polarity::Positive;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  std::uint16_t width = 0;
  std::uint16_t height = 0;

  std::size_t pixel_count() const noexcept { return std::size_t{width} * height; }
  bool contains(std::uint32_t x, std::uint32_t y) const noexcept { return x < width && y < height; }
  void validate() const;

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

/// DAVIS346 frame: 346 columns by 260 rows.
inline constexpr SensorGeometry kDavis346{346, 260};

struct TimeSlice;
struct CountChunk;

/// Immutable, validated sequence of events on one sensor.
class EventStream {
 public:
  EventStream() = default;

  /// Validates bounds and time order. A timestamp may regress by at most
  /// `regression_tolerance_us` relative to the running maximum.
  EventStream(SensorGeometry geometry, std::vector<Event> events,
              std::uint64_t regression_tolerance_us = 0);

  const SensorGeometry& geometry() const noexcept { return geometry_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const noexcept { return events_[i]; }
  auto begin() const noexcept { return events_.begin(); }
  auto end() const noexcept { return events_.end(); }

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  struct Unchecked {};
  EventStream(Unchecked, SensorGeometry geometry, std::vector<Event> events)
      : geometry_(geometry), events_(std::move(events)) {}

  friend std::vector<TimeSlice> slice_constant_time(const EventStream&, std::uint64_t,
                                                           std::uint64_t);
  friend std::vector<CountChunk> slice_constant_count(const EventStream&, std::size_t);
  friend EventStream subrange(const EventStream&, std::size_t, std::size_t);

  SensorGeometry geometry_{};
  std::vector<Event> events_;
};

/// Events [first, last) of a valid stream, without re-validation.
EventStream subrange(const EventStream& s, std::size_t first, std::size_t last);

// ---------------------------------------------------------------------------
// EVT1 binary format
//
//   header (18 bytes): "EVT1", version u16 = 1, width u16, height u16, event_count u64
//   record (16 bytes): t u64, x u16, y u16, polarity i8, 3 zero pad bytes
//
// All integers little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kEvt1HeaderSize = 18;
inline constexpr std::size_t kEvt1RecordSize = 16;
inline constexpr std::uint16_t kEvt1Version = 1;

struct ParseOptions {
  std::uint64_t regression_tolerance_us = 0;
};

EventStream parse_stream(std::span<const std::uint8_t> blob, ParseOptions options = {});
std::vector<std::uint8_t> serialize_stream(const EventStream& s);

EventStream read_stream_file(const std::filesystem::path& path, ParseOptions options = {});
void write_stream_file(const std::filesystem::path& path, const EventStream& s);

/// Text form: header line `t_us,x,y,p`, then one event per line with p in {1,-1}.
EventStream read_events_csv(std::istream& in, SensorGeometry geometry, ParseOptions options = {});
void write_events_csv(std::ostream& out, const EventStream& s);

// ---------------------------------------------------------------------------
// Slicing
// ---------------------------------------------------------------------------

struct TimeSlice {
  std::uint64_t begin_us = 0;  // inclusive
  std::uint64_t end_us = 0;    // exclusive
  EventStream events;
};

/// Buckets events into consecutive half-open windows [origin + k*w, origin + (k+1)*w),
/// from k = 0 up to the window holding the last event. Events before `origin_us` are
/// dropped. Empty windows in between are kept so slice k always starts at origin + k*w.
std::vector<TimeSlice> slice_constant_time(const EventStream& s, std::uint64_t window_us,
                                           std::uint64_t origin_us = 0);

struct CountChunk {
  EventStream events;
  bool partial = false;
};

std::vector<CountChunk> slice_constant_count(const EventStream& s, std::size_t n);

}  // namespace evpose
