#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <vector>

#include "channel.hpp"
#include "packet.hpp"
#include "router.hpp"
#include "stats.hpp"

using namespace nocsim;

namespace {

// Streams a flit list over a channel back to back, one send per completed
// handshake, the way an adapter's transmitter does.
struct FlitSource {
  Channel* ch = nullptr;
  std::vector<Flit> flits;
  std::size_t next = 0;

  void attach(Channel* c) {
    ch = c;
    ch->set_on_complete([this] { pump(); });
  }
  void start(std::vector<Flit> fs) {
    flits = std::move(fs);
    next = 0;
    pump();
  }
  void pump() {
    if (next < flits.size() && ch->idle()) ch->send(flits[next++]);
  }
};

struct RecordingSink : FlitSink {
  struct Rec {
    SimTime t;
    Flit flit;
  };
  std::vector<Rec> recs;
  Scheduler* sched = nullptr;
  Channel* ch = nullptr;
  bool accept = true;

  bool offer(const Flit& f) override {
    if (!accept) return false;
    recs.push_back({sched->now(), f});
    return true;
  }
  void open() {
    accept = true;
    if (ch && ch->stalled()) ch->unstall();
  }
};

std::vector<Flit> make_packet(const std::vector<Direction>& route, std::uint32_t adr = 0x1234,
                              std::uint32_t data = 0xABCD, std::uint8_t tag = 1) {
  Packet p;
  p.route = encode_route(route);
  p.txn.adr = adr;
  p.txn.data = data;
  p.txn.sel = 0xF;
  p.txn.tag = tag;
  FlitArray a = serialize(p);
  return {a.begin(), a.end()};
}


std::vector<Flit> flits_of(const std::vector<RecordingSink::Rec>& recs, std::size_t from,
                           std::size_t n) {
  std::vector<Flit> out;
  for (std::size_t i = from; i < from + n; ++i) out.push_back(recs[i].flit);
  return out;
}

// One router with driveable input channels and recording output sinks.
struct Harness {
  Scheduler sched;
  Tracer tracer;
  Stats stats;
  RouterConfig cfg;
  std::unique_ptr<Router> router;
  std::array<std::unique_ptr<Channel>, kPortCount> in_ch;
  std::array<FlitSource, kPortCount> sources;
  std::array<std::unique_ptr<Channel>, kPortCount> out_ch;
  std::array<RecordingSink, kPortCount> sinks;

  explicit Harness(RouterConfig c = {}) : cfg(c) {
    router = std::make_unique<Router>(sched, tracer, NodeCoord{1, 1}, cfg, &stats);
    for (int p = 0; p < kPortCount; ++p) {
      auto d = static_cast<Direction>(p);
      in_ch[p] = std::make_unique<Channel>(sched, tracer,
                                           std::string("in.") + direction_name(d),
                                           cfg.channel_delay);
      in_ch[p]->bind_sink(router->input(d));
      router->bind_input_channel(d, in_ch[p].get());
      sources[p].attach(in_ch[p].get());

      out_ch[p] = std::make_unique<Channel>(sched, tracer,
                                            std::string("out.") + direction_name(d),
                                            cfg.channel_delay);
      sinks[p].sched = &sched;
      sinks[p].ch = out_ch[p].get();
      out_ch[p]->bind_sink(&sinks[p]);
      router->connect_output(d, out_ch[p].get());
    }
  }

  void send_at(SimTime t, Direction port, std::vector<Flit> flits) {
    auto* src = &sources[static_cast<int>(port)];
    sched.schedule(t, [src, flits] { src->start(flits); });
  }
  RecordingSink& sink(Direction d) { return sinks[static_cast<int>(d)]; }
};

}  // namespace

TEST_CASE("head decode forwards along the remaining route and rewrites the header") {
  Harness h;
  // Route [E, W-as-local] arriving on the West port: decode gives East.
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}));
  h.sched.run_until(1'000'000);

  auto& out = h.sink(Direction::East).recs;
  REQUIRE(out.size() == 5);
  CHECK(out[0].flit.kind == FlitKind::Head);
  CHECK(out[0].flit.payload == encode_route({Direction::West}).packed);
  CHECK(out[0].flit.head_hops == 1);
  CHECK(out[4].flit.kind == FlitKind::Tail);
  CHECK(h.router->counters().forwarded_packets == 1);
  CHECK(h.router->counters().drops == 0);
}

TEST_CASE("a route code equal to the arrival port delivers locally") {
  Harness h;
  h.send_at(0, Direction::West, make_packet({Direction::West}));
  h.sched.run_until(1'000'000);
  CHECK(h.sink(Direction::Local).recs.size() == 5);
  CHECK(h.sink(Direction::West).recs.empty());
}

TEST_CASE("source-injected packets decode from the Local port") {
  Harness h;
  h.send_at(0, Direction::Local, make_packet({Direction::East, Direction::West}));
  h.sched.run_until(1'000'000);
  CHECK(h.sink(Direction::East).recs.size() == 5);
}

TEST_CASE("arbitration is first-come-first-served across distinct times") {
  Harness h;
  // South's packet arrives first even though North has higher tie priority.
  h.send_at(0, Direction::South, make_packet({Direction::East, Direction::West}, 0x1, 0x1, 1));
  h.send_at(2000, Direction::North, make_packet({Direction::East, Direction::West}, 0x2, 0x2, 2));
  h.sched.run_until(1'000'000);

  auto& out = h.sink(Direction::East).recs;
  REQUIRE(out.size() == 10);
  CHECK(out[2].flit.payload == 0x1);  // adr body of the South packet
  CHECK(out[7].flit.payload == 0x2);
}

TEST_CASE("simultaneous requests fall back to fixed port priority: N beats S") {
  for (bool south_first : {false, true}) {
    Harness h;
    SimTime t0 = 1000;
    if (south_first) {
      h.send_at(t0, Direction::South, make_packet({Direction::East, Direction::West}, 0, 0, 2));
      h.send_at(t0, Direction::North, make_packet({Direction::East, Direction::West}, 0, 0, 1));
    } else {
      h.send_at(t0, Direction::North, make_packet({Direction::East, Direction::West}, 0, 0, 1));
      h.send_at(t0, Direction::South, make_packet({Direction::East, Direction::West}, 0, 0, 2));
    }
    h.sched.run_until(1'000'000);
    auto& out = h.sink(Direction::East).recs;
    REQUIRE(out.size() == 10);
    // The tail flit carries the tag; the North packet (tag 1) must be first.
    auto first = deserialize(flits_of(out, 0, 5));
    REQUIRE(first);
    CHECK(first->txn.tag == 1);
  }
}

TEST_CASE("DropOnFull discards the whole packet when the head meets a full FIFO") {
  Harness h;  // depth 8, output stalled so the FIFO backs up
  h.sink(Direction::East).accept = false;
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}, 0xA));
  // Second packet arrives long after the first finished streaming in:
  // 1 flit sits on the stalled output wire, 4 occupy the FIFO -> space 4 < 5.
  h.send_at(100'000, Direction::North, make_packet({Direction::East, Direction::West}, 0xB));
  h.sched.run_until(400'000);

  CHECK(h.router->counters().drops == 1);
  CHECK(h.stats.drops() == 1);
  // all five of A's flits still occupy the FIFO (the front one is also out
  // on the stalled wire), so the head saw space 3 < 5
  CHECK(h.router->fifo_size(Direction::East) == 5);

  // The dropped packet's link is not wedged: a later local-delivery packet
  // from the same port still goes through.
  h.send_at(500'000, Direction::North, make_packet({Direction::North}));
  h.sched.run_until(1'000'000);
  CHECK(h.sink(Direction::Local).recs.size() == 5);
}

TEST_CASE("space at exactly one packet admits the head") {
  RouterConfig cfg;
  cfg.fifo_depth = 10;
  Harness h(cfg);
  h.sink(Direction::East).accept = false;
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}, 0xA));
  h.send_at(100'000, Direction::North, make_packet({Direction::East, Direction::West}, 0xB));
  h.sched.run_until(400'000);
  CHECK(h.router->counters().drops == 0);
  CHECK(h.router->fifo_size(Direction::East) == 10);  // 5 + 5, exactly full
}

TEST_CASE("Backpressure stalls instead of dropping and delivers everything") {
  RouterConfig cfg;
  cfg.drop_policy = DropPolicy::Backpressure;
  cfg.fifo_depth = 5;
  Harness h(cfg);
  h.sink(Direction::East).accept = false;
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}, 0xA, 1, 1));
  h.send_at(100'000, Direction::North, make_packet({Direction::East, Direction::West}, 0xB, 2, 2));
  h.sched.run_until(400'000);
  CHECK(h.router->counters().drops == 0);

  h.sched.schedule(400'000, [&] { h.sink(Direction::East).open(); });
  h.sched.run_until(2'000'000);
  auto& out = h.sink(Direction::East).recs;
  REQUIRE(out.size() == 10);
  auto first = deserialize(flits_of(out, 0, 5));
  auto second = deserialize(flits_of(out, 5, 5));
  REQUIRE(first);
  REQUIRE(second);
  CHECK(first->txn.tag == 1);
  CHECK(second->txn.tag == 2);
  CHECK(h.router->counters().forwarded_packets == 2);
}

TEST_CASE("a zero-hop header is malformed: packet dropped and counted") {
  Harness h;
  Flit bad_head{FlitKind::Head, 0, 0};
  std::vector<Flit> flits = make_packet({Direction::East, Direction::West});
  flits[0] = bad_head;
  h.send_at(0, Direction::West, flits);
  h.sched.run_until(1'000'000);
  CHECK(h.router->counters().malformed == 1);
  for (int p = 0; p < kPortCount; ++p)
    CHECK(h.sinks[p].recs.empty());

  // the port recovers for the next packet
  h.send_at(1'000'000, Direction::West, make_packet({Direction::East, Direction::West}));
  h.sched.run_until(2'000'000);
  CHECK(h.sink(Direction::East).recs.size() == 5);
}

TEST_CASE("a body flit with no held grant is a model bug") {
  Harness h;
  Flit body{FlitKind::Body, 42, 0};
  CHECK_THROWS_AS(h.router->input(Direction::North)->offer(body), ModelBugError);
}

TEST_CASE("output pacing: one flit per completed 4-phase handshake") {
  Harness h;
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}));
  h.sched.run_until(1'000'000);
  auto& out = h.sink(Direction::East).recs;
  REQUIRE(out.size() == 5);
  // accept-to-accept spacing is 4 phases x 1000 ps
  for (int i = 1; i < 5; ++i) CHECK(out[i].t - out[i - 1].t == 4000);
  // last flit completes (3 more phases) well beyond 2 phases per handshake
  SimTime first_begin = out[0].t - h.cfg.channel_delay;
  SimTime last_complete = out[4].t + 3 * h.cfg.channel_delay;
  CHECK(last_complete - first_begin >= 10'000);
}

TEST_CASE("FIFO law: all of A leaves before any of B") {
  Harness h;
  h.send_at(0, Direction::West, make_packet({Direction::East, Direction::West}, 0xA, 0, 1));
  h.send_at(100, Direction::South, make_packet({Direction::East, Direction::West}, 0xB, 0, 2));
  h.sched.run_until(1'000'000);
  auto& out = h.sink(Direction::East).recs;
  REQUIRE(out.size() == 10);
  for (int i = 0; i < 5; ++i) CHECK(out[i].flit.kind == serialize(Packet{}).at(i).kind);
  auto first = deserialize(flits_of(out, 0, 5));
  auto second = deserialize(flits_of(out, 5, 5));
  REQUIRE(first);
  REQUIRE(second);
  CHECK(first->txn.adr == 0xA);
  CHECK(second->txn.adr == 0xB);
}

TEST_CASE("routers never read body flits: corrupting them changes nothing about routing") {
  auto run = [](std::uint32_t body_word) {
    Harness h;
    std::vector<Flit> flits = make_packet({Direction::East, Direction::West});
    flits[1].payload = body_word;
    flits[2].payload = body_word ^ 0x5555;
    flits[3].payload = ~body_word;
    h.send_at(0, Direction::West, flits);
    h.sched.run_until(1'000'000);
    std::vector<std::pair<int, SimTime>> shape;
    for (int p = 0; p < kPortCount; ++p)
      for (auto& r : h.sinks[p].recs) shape.emplace_back(p, r.t);
    return shape;
  };
  CHECK(run(0x00000000) == run(0xDEADBEEF));
}
