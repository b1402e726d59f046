#include "channel.hpp"

#include <cstdio>

namespace nocsim {

Channel::Channel(Scheduler& sched, Tracer& tracer, const std::string& name, SimTime phase_delay)
    : sched_(sched), tracer_(tracer), id_(tracer.register_component(name)), delay_(phase_delay) {
  if (phase_delay == 0) throw std::invalid_argument("channel delay must be positive");
}

void Channel::edge(SimTime t, const char* sig, int level) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sig=%s level=%d", sig, level);
  tracer_.emit(t, id_, TraceKind::HandshakeEdge, buf);
}

void Channel::send(const Flit& f) {
  if (state_ != State::Idle) throw ModelBugError("channel send while transfer in progress");
  if (!sink_) throw ModelBugError("channel has no receiver");
  current_ = f;
  state_ = State::Offered;
  SimTime now = sched_.now();
  edge(now, "req", 1);
  sched_.schedule(now + delay_, [this] { deliver(); });
}

void Channel::deliver() {
  if (state_ != State::Offered) throw ModelBugError("channel delivery in wrong state");
  if (sink_->offer(current_)) {
    accept(sched_.now());
  } else {
    state_ = State::Pending;
  }
}

void Channel::unstall() {
  if (state_ != State::Pending) throw ModelBugError("unstall on channel that is not stalled");
  // The receiver may still refuse (e.g. granted but the output is full);
  // the channel then simply stays pending until the next unstall.
  if (sink_->offer(current_)) accept(sched_.now());
}

void Channel::accept(SimTime t) {
  state_ = State::Closing;
  edge(t, "ack", 1);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "kind=%s payload=0x%08x", flit_kind_name(current_.kind),
                current_.payload);
  tracer_.emit(t, id_, TraceKind::FlitTransfer, buf);
  sched_.schedule(t + delay_, [this] { edge(sched_.now(), "req", 0); });
  sched_.schedule(t + 2 * delay_, [this] { edge(sched_.now(), "ack", 0); });
  sched_.schedule(t + 3 * delay_, [this] {
    state_ = State::Idle;
    if (on_complete_) on_complete_();
  });
}

}  // namespace nocsim
