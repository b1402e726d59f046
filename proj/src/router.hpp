#pragma once
// Five-port asynchronous router. Input ports are combinational decoders: a
// Head flit picks the output, requests that output's mutex, and the port
// stays locked to its grant until the Tail passes. Output FIFOs drain one
// flit per 4-phase handshake through the outgoing channel. Under DropOnFull
// a Head that finds fewer than 5 free slots discards the whole packet; under
// Backpressure the incoming channel stalls instead.

#include <array>
#include <deque>
#include <optional>
#include <vector>

#include "channel.hpp"
#include "kernel.hpp"
#include "packet.hpp"
#include "topology.hpp"

namespace nocsim {

enum class DropPolicy : std::uint8_t { DropOnFull, Backpressure };

struct RouterConfig {
  int fifo_depth = 8;           // flits; >= 5 under DropOnFull
  SimTime channel_delay = 1000;  // ps per handshake phase
  DropPolicy drop_policy = DropPolicy::DropOnFull;
};

struct RouterCounters {
  std::uint64_t forwarded_packets = 0;
  std::uint64_t drops = 0;
  std::uint64_t malformed = 0;
};

class Stats;

class Router {
 public:
  Router(Scheduler& sched, Tracer& tracer, NodeCoord at, const RouterConfig& cfg, Stats* stats);

  FlitSink* input(Direction port);
  // The router drives the sender side of each outgoing channel.
  void connect_output(Direction port, Channel* ch);
  // Lets the router stall the incoming link (needed for arbitration and
  // backpressure); the channel's sink must already be input(port).
  void bind_input_channel(Direction port, Channel* ch);

  const RouterCounters& counters() const { return counters_; }
  NodeCoord coord() const { return at_; }

  // test access
  std::size_t fifo_size(Direction out) const;
  std::optional<Direction> grant_holder(Direction out) const;

 private:
  enum class InMode { Idle, AwaitGrant, HeadReady, Stream, Swallow };

  struct InputPort : FlitSink {
    Router* router = nullptr;
    Direction port = Direction::Local;
    InMode mode = InMode::Idle;
    Direction out = Direction::Local;
    SourceRoute remaining;
    Channel* ch = nullptr;
    bool offer(const Flit& f) override { return router->on_offer(*this, f); }
  };

  struct Output {
    Channel* ch = nullptr;
    std::deque<Flit> fifo;
    std::optional<Direction> holder;
    std::vector<std::pair<SimTime, Direction>> waiters;
    bool resolve_pending = false;
    bool sending = false;
    std::optional<Direction> space_waiter;
  };

  bool on_offer(InputPort& in, const Flit& f);
  bool handle_head(InputPort& in, const Flit& f);
  bool forward_flit(InputPort& in, const Flit& f);
  void drop_packet(InputPort& in, const char* reason);

  void request_grant(Direction out, Direction requester);
  void release_grant(Direction out);
  void schedule_resolve(Direction out);
  void resolve(Direction out);

  int free_space(const Output& o) const;
  void enqueue(Direction out, const Flit& f);
  void on_send_complete(Direction out);

  Output& output(Direction d) { return outputs_[static_cast<int>(d)]; }
  InputPort& in_port(Direction d) { return inputs_[static_cast<int>(d)]; }

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId id_;
  NodeCoord at_;
  RouterConfig cfg_;
  Stats* stats_;
  RouterCounters counters_;
  std::array<InputPort, kPortCount> inputs_;
  std::array<Output, kPortCount> outputs_;
};

}  // namespace nocsim
