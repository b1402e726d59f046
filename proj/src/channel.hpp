#pragma once
// Point-to-point asynchronous link carrying one flit per 4-phase req/ack
// handshake. Each phase costs one channel delay, so an unstalled transfer
// completes 4 delays after it starts: req+ at t, ack+ at t+d, req- at t+2d,
// ack- at t+3d, sender idle again at t+4d. A receiver may stall by refusing
// the offer; ack then rises when it calls unstall().

#include <functional>
#include <string>

#include "kernel.hpp"
#include "packet.hpp"

namespace nocsim {

class FlitSink {
 public:
  virtual ~FlitSink() = default;
  // Called when req reaches the receiving end. Return true to accept the
  // flit now (ack rises); false stalls the channel until unstall().
  virtual bool offer(const Flit& flit) = 0;
};

class Channel {
 public:
  Channel(Scheduler& sched, Tracer& tracer, const std::string& name, SimTime phase_delay);

  void bind_sink(FlitSink* sink) { sink_ = sink; }
  void set_on_complete(std::function<void()> cb) { on_complete_ = std::move(cb); }

  bool idle() const { return state_ == State::Idle; }
  bool stalled() const { return state_ == State::Pending; }

  void send(const Flit& f);  // initiator; ModelBugError unless idle
  void unstall();            // receiver side accepts the pending flit now

 private:
  enum class State { Idle, Offered, Pending, Closing };

  void deliver();
  void accept(SimTime t);
  void edge(SimTime t, const char* sig, int level);

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId id_;
  SimTime delay_;
  FlitSink* sink_ = nullptr;
  std::function<void()> on_complete_;
  State state_ = State::Idle;
  Flit current_{};
};

}  // namespace nocsim
