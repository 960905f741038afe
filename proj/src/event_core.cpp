// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/event_core.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "evpose/error.hpp"

namespace evpose {
namespace {

constexpr char kMagic[4] = {'E', 'V', 'T', '1'};

template <typename T>
T load_le(const std::uint8_t* p) noexcept {
  std::make_unsigned_t<T> v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::make_unsigned_t<T>>(p[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

template <typename T>
void store_le(std::uint8_t* p, T value) noexcept {
  auto v = static_cast<std::make_unsigned_t<T>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    p[i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

std::string describe(const Event& e) {
  std::ostringstream os;
  os << "(t=" << e.t << ", x=" << e.x << ", y=" << e.y
     << ", p=" << static_cast<int>(e.polarity) << ")";
  return os.str();
}

}  // namespace

void SensorGeometry::validate() const {
  if (width == 0 || height == 0) {
    throw Error(Errc::InvalidArgument, "sensor geometry must be non-empty");
  }
}

EventStream::EventStream(SensorGeometry geometry, std::vector<Event> events,
                         std::uint64_t regression_tolerance_us)
    : geometry_(geometry), events_(std::move(events)) {
  geometry_.validate();
  std::uint64_t latest = 0;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    if (!geometry_.contains(e.x, e.y)) {
      throw Error(Errc::OutOfBounds, "event " + std::to_string(i) + " " + describe(e));
    }
    if (e.polarity != Polarity::Positive && e.polarity != Polarity::Negative) {
      throw Error(Errc::InvalidPolarity, "event " + std::to_string(i) + " " + describe(e));
    }
    if (e.t + regression_tolerance_us < latest) {
      throw Error(Errc::NonMonotonic, "event " + std::to_string(i) + " " + describe(e) +
                                          " precedes t=" + std::to_string(latest));
    }
    latest = std::max(latest, e.t);
  }
}

EventStream subrange(const EventStream& s, std::size_t first, std::size_t last) {
  last = std::min(last, s.size());
  first = std::min(first, last);
  return EventStream(EventStream::Unchecked{}, s.geometry(),
                     std::vector<Event>(s.events_.begin() + static_cast<std::ptrdiff_t>(first),
                                        s.events_.begin() + static_cast<std::ptrdiff_t>(last)));
}

EventStream parse_stream(std::span<const std::uint8_t> blob, ParseOptions options) {
  if (blob.size() < sizeof(kMagic) || std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(Errc::BadMagic, "missing EVT1 magic");
  }
  if (blob.size() < kEvt1HeaderSize) {
    throw Error(Errc::TruncatedRecord, "header shorter than 18 bytes");
  }
  const std::uint8_t* p = blob.data();
  const auto version = load_le<std::uint16_t>(p + 4);
  if (version != kEvt1Version) {
    throw Error(Errc::BadMagic, "unsupported EVT1 version " + std::to_string(version));
  }
  SensorGeometry geometry{load_le<std::uint16_t>(p + 6), load_le<std::uint16_t>(p + 8)};
  geometry.validate();
  const auto declared = load_le<std::uint64_t>(p + 10);

  const std::size_t body = blob.size() - kEvt1HeaderSize;
  if (body % kEvt1RecordSize != 0) {
    throw Error(Errc::TruncatedRecord, "record section of " + std::to_string(body) +
                                           " bytes is not a multiple of 16");
  }
  if (body / kEvt1RecordSize != declared) {
    throw Error(Errc::TruncatedRecord, "header declares " + std::to_string(declared) +
                                           " events, file holds " +
                                           std::to_string(body / kEvt1RecordSize));
  }

  std::vector<Event> events(static_cast<std::size_t>(declared));
  const std::uint8_t* r = p + kEvt1HeaderSize;
  for (std::size_t i = 0; i < events.size(); ++i, r += kEvt1RecordSize) {
    Event& e = events[i];
    e.t = load_le<std::uint64_t>(r);
    e.x = load_le<std::uint16_t>(r + 8);
    e.y = load_le<std::uint16_t>(r + 10);
    const auto pol = static_cast<std::int8_t>(r[12]);
    if ((pol != 1 && pol != -1) || r[13] != 0 || r[14] != 0 || r[15] != 0) {
      throw Error(Errc::InvalidPolarity, "record " + std::to_string(i) +
                                             " has polarity " + std::to_string(pol) +
                                             " or non-zero padding");
    }
    e.polarity = static_cast<Polarity>(pol);
  }
  return EventStream(geometry, std::move(events), options.regression_tolerance_us);
}

std::vector<std::uint8_t> serialize_stream(const EventStream& s) {
  std::vector<std::uint8_t> out(kEvt1HeaderSize + s.size() * kEvt1RecordSize, 0);
  std::uint8_t* p = out.data();
  std::memcpy(p, kMagic, sizeof(kMagic));
  store_le<std::uint16_t>(p + 4, kEvt1Version);
  store_le<std::uint16_t>(p + 6, s.geometry().width);
  store_le<std::uint16_t>(p + 8, s.geometry().height);
  store_le<std::uint64_t>(p + 10, s.size());
  std::uint8_t* r = p + kEvt1HeaderSize;
  for (const Event& e : s) {
    store_le<std::uint64_t>(r, e.t);
    store_le<std::uint16_t>(r + 8, e.x);
    store_le<std::uint16_t>(r + 10, e.y);
    r[12] = static_cast<std::uint8_t>(static_cast<std::int8_t>(e.polarity));
    r += kEvt1RecordSize;
  }
  return out;
}

EventStream read_stream_file(const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  try {
    return parse_stream(blob, options);
  } catch (const Error& err) {
    throw Error(err.code(), path.string() + ": " + err.what());
  }
}

void write_stream_file(const std::filesystem::path& path, const EventStream& s) {
  const auto blob = serialize_stream(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

EventStream read_events_csv(std::istream& in, SensorGeometry geometry, ParseOptions options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<Event> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("t_us", 0) == 0) continue;
    std::istringstream fields(line);
    long long t = -1;
    long x = -1, y = -1, p = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> t >> c1 >> x >> c2 >> y >> c3 >> p) || c1 != ',' || c2 != ',' || c3 != ',' ||
        t < 0 || x < 0 || y < 0 || x > 0xFFFF || y > 0xFFFF) {
      throw Error(Errc::Parse, "csv line " + std::to_string(line_no) + ": '" + line + "'");
    }
    if (p != 1 && p != -1) {
      throw Error(Errc::InvalidPolarity, "csv line " + std::to_string(line_no));
    }
    events.push_back(Event{static_cast<std::uint64_t>(t), static_cast<std::uint16_t>(x),
                           static_cast<std::uint16_t>(y), static_cast<Polarity>(p)});
  }
  return EventStream(geometry, std::move(events), options.regression_tolerance_us);
}

void write_events_csv(std::ostream& out, const EventStream& s) {
  out << "t_us,x,y,p\n";
  for (const Event& e : s) {
    out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<int>(e.polarity) << '\n';
  }
}

std::vector<TimeSlice> slice_constant_time(const EventStream& s, std::uint64_t window_us,
                                           std::uint64_t origin_us) {
  if (window_us == 0) throw Error(Errc::ZeroWindow, "time window must be positive");
  std::vector<TimeSlice> slices;
  std::uint64_t last = 0;
  bool any = false;
  for (const Event& e : s) {
    if (e.t >= origin_us) {
      last = std::max(last, e.t);
      any = true;
    }
  }
  if (!any) return slices;

  const std::uint64_t count = (last - origin_us) / window_us + 1;
  std::vector<std::vector<Event>> buckets(static_cast<std::size_t>(count));
  for (const Event& e : s) {
    if (e.t < origin_us) continue;
    buckets[static_cast<std::size_t>((e.t - origin_us) / window_us)].push_back(e);
  }
  slices.reserve(buckets.size());
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    const std::uint64_t begin = origin_us + k * window_us;
    slices.push_back(TimeSlice{begin, begin + window_us,
                               EventStream(EventStream::Unchecked{}, s.geometry(),
                                           std::move(buckets[k]))});
  }
  return slices;
}

std::vector<CountChunk> slice_constant_count(const EventStream& s, std::size_t n) {
  if (n == 0) throw Error(Errc::ZeroCount, "chunk size must be positive");
  std::vector<CountChunk> chunks;
  chunks.reserve((s.size() + n - 1) / n);
  for (std::size_t first = 0; first < s.size(); first += n) {
    const std::size_t last = std::min(first + n, s.size());
    chunks.push_back(CountChunk{subrange(s, first, last), last - first < n});
  }
  return chunks;
}

}  // namespace evpose
