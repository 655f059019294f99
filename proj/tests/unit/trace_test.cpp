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

#include <doctest.h>

#include <sstream>

#include "settlesim/components.hpp"
#include "settlesim/hash.hpp"
#include "settlesim/network.hpp"
#include "settlesim/trace.hpp"
#include "test_support.hpp"

using namespace settlesim;
namespace comps = settlesim::components;

namespace {

TraceEvent ev(std::uint64_t tick, std::string comp, std::uint32_t port, Direction dir,
              std::optional<Value> payload) {
  TraceEvent e;
  e.tick = tick;
  e.component = std::move(comp);
  e.port = port;
  e.dir = dir;
  if (payload) {
    e.kind = ItemKind::kPayload;
    e.digest = payload_digest(*payload);
  }
  return e;
}

constexpr auto kIn = Direction::kConsume;
constexpr auto kOut = Direction::kEmit;

Network ring(std::size_t n, std::uint64_t delay) {
  Network net;
  add_component(net, comps::pulse("n0"));
  for (std::size_t i = 1; i < n; ++i) add_component(net, comps::identity("n" + std::to_string(i)));
  for (std::size_t i = 0; i < n; ++i) {
    connect(net, {"n" + std::to_string(i), 0}, {"n" + std::to_string((i + 1) % n), 0},
            delay + i % 2);
  }
  return net;
}

}  // namespace

TEST_CASE("record_event ordering") {
  Trace t;
  record_event(t, ev(0, "a", 0, kIn, std::nullopt));
  CHECK(t.size() == 1);
  record_event(t, ev(0, "a", 0, kOut, std::nullopt));
  record_event(t, ev(0, "b", 0, kIn, std::nullopt));
  CHECK_THROWS_AS(record_event(t, ev(0, "b", 0, kIn, std::nullopt)), TraceOrderError);
  CHECK_THROWS_AS(record_event(t, ev(0, "a", 1, kIn, std::nullopt)), TraceOrderError);
  record_event(t, ev(3, "a", 0, kIn, std::nullopt));
  try {
    record_event(t, ev(2, "z", 0, kIn, std::nullopt));
    FAIL("expected TraceOrderError");
  } catch (const TraceOrderError& e) {
    CHECK(e.index() == 4);
  }
  CHECK(t.size() == 4);
}

TEST_CASE("payload digests") {
  CHECK(payload_digest(Value{{"a", 1}}) == fnv1a(R"({"a":1})"));
  CHECK(payload_digest(Value{{"b", 1}, {"a", 2}}) == payload_digest(Value{{"a", 2}, {"b", 1}}));
  CHECK(to_hex(0xabcULL) == "0000000000000abc");
  CHECK(from_hex("0000000000000abc") == 0xabcULL);
  CHECK_THROWS_AS(from_hex("xyz"), std::invalid_argument);
}

TEST_CASE("trace event count of a two-component cycle") {
  const Network net = ring(2, 1);
  const RunResult r = run_realtime(net, TimeTag{100});
  std::size_t ports = 0;
  for (const auto& c : net.components) ports += c.in_ports + c.out_ports;
  CHECK(r.trace.size() == ports * 101);
  CHECK(r.trace.size() == 2 * 2 * 101);
}

TEST_CASE("export formats") {
  const Trace empty;
  CHECK(export_trace(empty, TraceFormat::kNdjson).empty());
  CHECK(export_trace(empty, TraceFormat::kCsv) == "tick,comp,port,dir,kind,digest,payload\r\n");

  Trace t;
  TraceEvent e = ev(2, "q,1", 0, kOut, Value{{"s", "a\"b"}});
  e.payload = Value{{"s", "a\"b"}};
  t.record(e);
  t.record(ev(3, "q", 1, kIn, std::nullopt));
  const std::string nd = export_trace(t, TraceFormat::kNdjson);
  const std::string hex = to_hex(payload_digest(Value{{"s", "a\"b"}}));
  CHECK(nd ==
        R"({"tick":2,"comp":"q,1","port":0,"dir":"emit","kind":"payload","digest":")" + hex +
            R"(","payload":{"s":"a\"b"}})" + "\n" +
            R"({"tick":3,"comp":"q","port":1,"dir":"consume","kind":"hiaton","digest":"0000000000000000"})" +
            "\n");
  const std::string csv = export_trace(t, TraceFormat::kCsv);
  CHECK(csv == "tick,comp,port,dir,kind,digest,payload\r\n"
               "2,\"q,1\",0,emit,payload," + hex + ",\"{\"\"s\"\":\"\"a\\\"\"b\"\"}\"\r\n"
               "3,q,1,consume,hiaton,0000000000000000,\r\n");
}

TEST_CASE("export then import is the identity") {
  testsupport::Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const Trace t = testsupport::random_trace(rng, 12);
    for (TraceFormat f : {TraceFormat::kNdjson, TraceFormat::kCsv}) {
      const std::string text = export_trace(t, f);
      const Trace back = import_trace(text, f);
      REQUIRE(back == t);
      CHECK(export_trace(back, f) == text);
    }
  }
}

TEST_CASE("import rejects malformed input with a line number") {
  auto message = [](const std::string& text, TraceFormat f) -> std::string {
    try {
      import_trace(text, f);
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  const std::string good =
      R"({"tick":0,"comp":"a","port":0,"dir":"emit","kind":"hiaton","digest":"0000000000000000"})";
  CHECK(message(good + "\n" + R"({"tick":1,"comp":"a"})", TraceFormat::kNdjson).find("line 2") !=
        std::string::npos);
  CHECK(message(good + "\n" + good + "\n", TraceFormat::kNdjson) != "");
  CHECK(message(R"({"tick":0,"comp":"a","port":0,"dir":"emit","kind":"hiaton","digest":"0000000000000000","extra":1})",
                TraceFormat::kNdjson)
            .find("extra") != std::string::npos);
  CHECK(message("tick,comp\r\n", TraceFormat::kCsv) != "");
  CHECK(message("tick,comp,port,dir,kind,digest,payload\r\n0,a,0,sideways,hiaton,0000000000000000,\r\n",
                TraceFormat::kCsv)
            .find("line 2") != std::string::npos);
}

TEST_CASE("identical runs export identical bytes") {
  const Network net = ring(4, 1);
  const RunResult a = run_realtime(net, TimeTag{500});
  const RunResult b = run_realtime(net, TimeTag{500});
  for (TraceFormat f : {TraceFormat::kNdjson, TraceFormat::kCsv}) {
    CHECK(fnv1a(export_trace(a.trace, f)) == fnv1a(export_trace(b.trace, f)));
  }
}

TEST_CASE("summarize a hand-built trace") {
  const Value x{{"x", 1}};
  Trace t;
  t.record(ev(0, "a", 0, kIn, x));
  t.record(ev(0, "a", 0, kOut, x));
  t.record(ev(0, "b", 0, kIn, std::nullopt));
  t.record(ev(0, "b", 0, kOut, std::nullopt));
  t.record(ev(1, "b", 0, kOut, x));
  const Summary s = summarize(t);
  CHECK(s.ticks == 2);
  CHECK(s.output_ports == 2);
  CHECK(s.components.at("a") == ComponentCounts{1, 0, 1, 0});
  CHECK(s.components.at("b") == ComponentCounts{1, 1, 0, 1});
  CHECK(s.throughput.at(PortRef{"a", 0}) == PortThroughput{1, 0, {1, 0}});
  CHECK(s.throughput.at(PortRef{"b", 0}) == PortThroughput{1, 1, {0, 1}});
  CHECK(s.queue_depth.at("a") == std::vector<std::int64_t>{0, 0});
  CHECK(s.queue_depth.at("b") == std::vector<std::int64_t>{0, -1});
  CHECK(s.latency_histogram == std::map<std::uint64_t, std::uint64_t>{{1, 1}});
  CHECK(s.total_emitted_payloads() == 2);
  CHECK(s.total_emitted_hiatons() == 1);
}

TEST_CASE("summaries reconcile with raw recounts") {
  Network silent;
  add_component(silent, comps::identity("a"));
  bind_source(silent, {"a", 0}, {});
  const Summary quiet = summarize(run_realtime(silent, TimeTag{20}).trace);
  CHECK(quiet.total_emitted_payloads() == 0);
  CHECK(quiet.components.at("a").consumed_payloads == 0);

  testsupport::Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const Trace t = testsupport::random_trace(rng, 15);
    const Summary s = summarize(t);
    std::map<std::string, ComponentCounts> recount;
    std::uint64_t emits = 0;
    std::uint64_t payload_emits = 0;
    for (const auto& e : t.events()) {
      auto& c = recount[e.component];
      const bool p = e.kind == ItemKind::kPayload;
      if (e.dir == kOut) {
        ++emits;
        payload_emits += p;
        (p ? c.emitted_payloads : c.emitted_hiatons)++;
      } else {
        (p ? c.consumed_payloads : c.consumed_hiatons)++;
      }
    }
    CHECK(s.components == recount);
    if (emits > 0) {
      const double payload_ratio = static_cast<double>(s.total_emitted_payloads()) / emits;
      const double hiaton_ratio = static_cast<double>(s.total_emitted_hiatons()) / emits;
      CHECK(hiaton_ratio == doctest::Approx(1.0 - payload_ratio));
      CHECK(s.total_emitted_payloads() == payload_emits);
    }
  }

  // A full run emits exactly one item per output port per tick.
  const Network net = ring(3, 2);
  const RunResult r = run_realtime(net, TimeTag{99});
  const Summary s = summarize(r.trace);
  CHECK(s.ticks == 100);
  CHECK(s.total_emitted_payloads() + s.total_emitted_hiatons() == s.ticks * s.output_ports);
  CHECK(s.output_ports == net.channels.size());
}

TEST_CASE("animation frames") {
  Network one;
  add_component(one, comps::identity("a"));
  bind_source(one, {"a", 0}, {});
  const RunResult r0 = run_realtime(one, TimeTag{0});
  CHECK(animation_frames(r0.trace, one.channels, one.sinks).size() == 1);

  const Network net = ring(4, 1);
  Network with_sink = net;
  expose_sink(with_sink, "tap", {"n2", 0}, 3);
  for (std::uint64_t t_end : {5ULL, 37ULL, 200ULL}) {
    const RunResult r = run_realtime(with_sink, TimeTag{t_end});
    const auto frames = animation_frames(r.trace, with_sink.channels, with_sink.sinks);
    REQUIRE(frames.size() == t_end + 1);
    for (const auto& f : frames) {
      REQUIRE(f.occupancy.size() == with_sink.channels.size() + 1);
      std::uint64_t total = 0;
      std::uint64_t expected = 0;
      for (std::size_t i = 0; i < with_sink.channels.size(); ++i) {
        CHECK(f.occupancy[i].channel ==
              to_string(with_sink.channels[i].from) + "->" + to_string(with_sink.channels[i].to));
        // Emitted through tick t minus delivered through tick t.
        expected += std::min<std::uint64_t>(with_sink.channels[i].delay, f.tick + 1);
        total += f.occupancy[i].in_flight;
      }
      CHECK(total == expected);
      CHECK(f.occupancy.back().channel == "sink:tap");
      CHECK(f.occupancy.back().in_flight == std::min<std::uint64_t>(3, f.tick + 1));
      CHECK(f.state_digest.size() == with_sink.components.size());
    }
    std::uint64_t final_in_flight = 0;
    for (auto n : r.in_flight) final_in_flight += n;
    std::uint64_t last = 0;
    for (std::size_t i = 0; i < with_sink.channels.size(); ++i) {
      last += frames.back().occupancy[i].in_flight;
    }
    CHECK(last == final_in_flight);
  }
}

TEST_CASE("state digests track input histories") {
  // Two identical counters fed the same stream carry equal digests; a third
  // fed a different stream diverges once its input does.
  Network net;
  add_component(net, comps::counter("a"));
  add_component(net, comps::counter("b"));
  add_component(net, comps::counter("c"));
  const TimedStream s1{TimedItem::payload(TimeTag{0}, 1), make_hiaton(TimeTag{1}),
                       TimedItem::payload(TimeTag{2}, 2)};
  TimedStream s2 = s1;
  s2[2] = TimedItem::payload(TimeTag{2}, 3);
  bind_source(net, {"a", 0}, s1);
  bind_source(net, {"b", 0}, s1);
  bind_source(net, {"c", 0}, s2);
  const RunResult r = run_realtime(net, TimeTag{4});
  const auto frames = animation_frames(r.trace, net.channels, net.sinks);
  for (const auto& f : frames) {
    CHECK(f.state_digest.at("a") == f.state_digest.at("b"));
    CHECK((f.state_digest.at("a") == f.state_digest.at("c")) == (f.tick < 2));
  }
}
