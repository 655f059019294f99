// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "settlesim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "settlesim/hash.hpp"

namespace settlesim {

std::string_view to_string(Direction d) {
  return d == Direction::kEmit ? "emit" : "consume";
}

std::string_view to_string(ItemKind k) {
  return k == ItemKind::kPayload ? "payload" : "hiaton";
}

Direction parse_direction(std::string_view s) {
  if (s == "emit") return Direction::kEmit;
  if (s == "consume") return Direction::kConsume;
  throw std::invalid_argument("unknown direction '" + std::string(s) + "'");
}

ItemKind parse_item_kind(std::string_view s) {
  if (s == "payload") return ItemKind::kPayload;
  if (s == "hiaton") return ItemKind::kHiaton;
  throw std::invalid_argument("unknown item kind '" + std::string(s) + "'");
}

std::uint64_t payload_digest(const Value& v) { return fnv1a(v.dump()); }

TraceEvent make_event(std::uint64_t tick, const std::string& component,
                      std::uint32_t port, Direction dir, const TimedItem& item,
                      bool inline_payload) {
  TraceEvent e;
  e.tick = tick;
  e.component = component;
  e.port = port;
  e.dir = dir;
  if (item.is_payload()) {
    e.kind = ItemKind::kPayload;
    e.digest = payload_digest(item.value());
    if (inline_payload) e.payload = item.value();
  } else {
    e.kind = ItemKind::kHiaton;
  }
  return e;
}

TraceOrderError::TraceOrderError(std::size_t index)
    : std::invalid_argument("trace event " + std::to_string(index) +
                            " is out of order"),
      index_(index) {}

namespace {

auto order_key(const TraceEvent& e) {
  return std::tie(e.tick, e.component, e.port, e.dir);
}

}  // namespace

void Trace::record(TraceEvent e) {
  if (!events_.empty() && !(order_key(events_.back()) < order_key(e))) {
    throw TraceOrderError(events_.size());
  }
  events_.push_back(std::move(e));
}

// --- export ----------------------------------------------------------------

std::string_view to_string(TraceFormat f) {
  return f == TraceFormat::kCsv ? "csv" : "ndjson";
}

TraceFormat parse_trace_format(std::string_view s) {
  if (s == "ndjson") return TraceFormat::kNdjson;
  if (s == "csv") return TraceFormat::kCsv;
  throw std::invalid_argument("unknown trace format '" + std::string(s) +
                              "' (expected ndjson or csv)");
}

namespace {

constexpr std::string_view kCsvHeader = "tick,comp,port,dir,kind,digest,payload";

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_ndjson(const TraceEvent& e, std::ostream& out) {
  out << "{\"tick\":" << e.tick << ",\"comp\":" << Value(e.component).dump()
      << ",\"port\":" << e.port << ",\"dir\":\"" << to_string(e.dir)
      << "\",\"kind\":\"" << to_string(e.kind) << "\",\"digest\":\""
      << to_hex(e.digest) << '"';
  if (e.payload) out << ",\"payload\":" << e.payload->dump();
  out << "}\n";
}

void write_csv(const TraceEvent& e, std::ostream& out) {
  out << e.tick << ',' << csv_field(e.component) << ',' << e.port << ','
      << to_string(e.dir) << ',' << to_string(e.kind) << ',' << to_hex(e.digest)
      << ',' << (e.payload ? csv_field(e.payload->dump()) : std::string())
      << "\r\n";
}

}  // namespace

void export_trace(const Trace& trace, TraceFormat format, std::ostream& out) {
  if (format == TraceFormat::kCsv) {
    out << kCsvHeader << "\r\n";
    for (const auto& e : trace.events()) write_csv(e, out);
  } else {
    for (const auto& e : trace.events()) write_ndjson(e, out);
  }
}

std::string export_trace(const Trace& trace, TraceFormat format) {
  std::ostringstream out;
  export_trace(trace, format, out);
  return std::move(out).str();
}

void export_trace(const Trace& trace, TraceFormat format,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  export_trace(trace, format, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// --- import ----------------------------------------------------------------

namespace {

[[noreturn]] void bad_record(std::size_t line, const std::string& what) {
  throw std::invalid_argument("trace line " + std::to_string(line) + ": " + what);
}

template <typename Int>
Int parse_uint(std::string_view s, std::size_t line, const char* field) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad_record(line, std::string("bad ") + field + " '" + std::string(s) + "'");
  }
  return v;
}

TraceEvent parse_ndjson_record(const std::string& text, std::size_t line) {
  Value obj;
  try {
    obj = Value::parse(text);
  } catch (const Value::parse_error& err) {
    bad_record(line, err.what());
  }
  if (!obj.is_object()) bad_record(line, "record is not an object");
  static const char* kRequired[] = {"tick", "comp", "port", "dir", "kind", "digest"};
  for (const char* key : kRequired) {
    if (!obj.contains(key)) bad_record(line, std::string("missing key '") + key + "'");
  }
  for (const auto& [key, _] : obj.items()) {
    if (key != "payload" &&
        std::find(std::begin(kRequired), std::end(kRequired), key) == std::end(kRequired)) {
      bad_record(line, "unexpected key '" + key + "'");
    }
  }
  if (!obj["tick"].is_number_unsigned() || !obj["port"].is_number_unsigned()) {
    bad_record(line, "tick and port must be non-negative integers");
  }
  TraceEvent e;
  try {
    e.tick = obj["tick"].get<std::uint64_t>();
    e.component = obj["comp"].get<std::string>();
    e.port = obj["port"].get<std::uint32_t>();
    e.dir = parse_direction(obj["dir"].get<std::string>());
    e.kind = parse_item_kind(obj["kind"].get<std::string>());
    e.digest = from_hex(obj["digest"].get<std::string>());
  } catch (const Value::exception& err) {
    bad_record(line, err.what());
  } catch (const std::invalid_argument& err) {
    bad_record(line, err.what());
  }
  if (obj.contains("payload")) e.payload = obj["payload"];
  return e;
}

// Splits one CSV record starting at `pos`; advances `pos` and `line` past
// it. Quoted fields may span lines.
std::vector<std::string> next_csv_record(std::string_view text, std::size_t& pos,
                                         std::size_t& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  bool was_quoted = false;
  const std::size_t start_line = line;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          fields.back() += '"';
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      if (c == '\n') ++line;
      fields.back() += c;
      ++pos;
      continue;
    }
    if (c == '"') {
      if (!fields.back().empty() || was_quoted) {
        bad_record(start_line, "stray quote inside unquoted field");
      }
      quoted = true;
      was_quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.emplace_back();
      was_quoted = false;
      ++pos;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      ++line;
      return fields;
    } else {
      if (was_quoted) bad_record(start_line, "characters after closing quote");
      fields.back() += c;
      ++pos;
    }
  }
  if (quoted) bad_record(start_line, "unterminated quoted field");
  ++line;
  return fields;
}

TraceEvent parse_csv_record(const std::vector<std::string>& f, std::size_t line) {
  if (f.size() != 7) {
    bad_record(line, "expected 7 fields, got " + std::to_string(f.size()));
  }
  TraceEvent e;
  e.tick = parse_uint<std::uint64_t>(f[0], line, "tick");
  e.component = f[1];
  e.port = parse_uint<std::uint32_t>(f[2], line, "port");
  try {
    e.dir = parse_direction(f[3]);
    e.kind = parse_item_kind(f[4]);
    e.digest = from_hex(f[5]);
    if (!f[6].empty()) e.payload = Value::parse(f[6]);
  } catch (const Value::parse_error& err) {
    bad_record(line, std::string("bad payload: ") + err.what());
  } catch (const std::invalid_argument& err) {
    bad_record(line, err.what());
  }
  return e;
}

}  // namespace

Trace import_trace(std::string_view text, TraceFormat format) {
  Trace trace;
  std::size_t line = 1;
  if (format == TraceFormat::kNdjson) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string record(text.substr(pos, end - pos));
      if (!record.empty() && record.back() == '\r') record.pop_back();
      if (!record.empty()) trace.record(parse_ndjson_record(record, line));
      pos = end + 1;
      ++line;
    }
    return trace;
  }

  std::size_t pos = 0;
  if (text.empty()) bad_record(1, "missing CSV header");
  auto header = next_csv_record(text, pos, line);
  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) joined += ',';
    joined += header[i];
  }
  if (joined != kCsvHeader) bad_record(1, "unexpected CSV header '" + joined + "'");
  while (pos < text.size()) {
    const std::size_t record_line = line;
    auto fields = next_csv_record(text, pos, line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    trace.record(parse_csv_record(fields, record_line));
  }
  return trace;
}

Trace import_trace(std::istream& in, TraceFormat format) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_trace(std::string_view(buf.str()), format);
}

}  // namespace settlesim
