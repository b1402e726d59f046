#include "kernel.hpp"

#include <charconv>
#include <cstdio>
#include <memory>
#include <ostream>

namespace nocsim {

namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
}  // namespace

SimTime ClockDomain::next_edge_after(SimTime t) const {
  if (period == 0) throw ModelBugError("clock domain with zero period");
  if (t < phase) return phase;
  std::uint64_t k = (t - phase) / period + 1;
  return phase + k * period;
}

SimTime ClockDomain::second_edge_after(SimTime t) const {
  return next_edge_after(next_edge_after(t));
}

SimTime cdc_synchronize(const ClockDomain& dest, SimTime changed_at) {
  return dest.second_edge_after(changed_at);
}

const char* trace_kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::StateChange: return "state-change";
    case TraceKind::FlitTransfer: return "flit-transfer";
    case TraceKind::HandshakeEdge: return "handshake-edge";
    case TraceKind::WbEdge: return "wb-edge";
    case TraceKind::Drop: return "drop";
    case TraceKind::Retransmit: return "retransmit";
  }
  return "?";
}

Tracer::Tracer() : hash_(kFnvOffset) {}

ComponentId Tracer::register_component(std::string name) {
  names_.push_back(std::move(name));
  return static_cast<ComponentId>(names_.size() - 1);
}

const std::string& Tracer::component_name(ComponentId id) const {
  return names_.at(id);
}

std::string Tracer::format_line(const TraceRecord& r) const {
  char num[24];
  auto res = std::to_chars(num, num + sizeof(num), r.time);
  std::string line;
  line.reserve(48 + r.detail.size());
  line.append(num, res.ptr);
  line.push_back('\t');
  line.append(component_name(r.component));
  line.push_back('\t');
  line.append(trace_kind_name(r.kind));
  line.push_back('\t');
  line.append(r.detail);
  line.push_back('\n');
  return line;
}

void Tracer::emit(SimTime t, ComponentId c, TraceKind k, std::string detail) {
  if (t < last_time_) throw ModelBugError("trace record out of order");
  last_time_ = t;
  TraceRecord rec{t, c, k, std::move(detail)};
  std::string line = format_line(rec);
  for (unsigned char ch : line) {
    hash_ ^= ch;
    hash_ *= kFnvPrime;
  }
  ++count_;
  if (stream_) (*stream_) << line;
  if (sink_) sink_(rec);
  if (store_on_) store_.push_back(std::move(rec));
}

Scheduler::Handle Scheduler::schedule(SimTime fire_at, Callback cb) {
  if (fire_at < now_) throw ModelBugError("event scheduled in the past");
  std::uint64_t seq = next_seq_++;
  queue_.push(Event{fire_at, seq, std::make_shared<Callback>(std::move(cb))});
  ++live_;
  return Handle{seq, true};
}

void Scheduler::cancel(Handle h) {
  if (!h.valid) return;
  cancelled_.insert(h.seq);
}

std::size_t Scheduler::run_until(SimTime t_end) {
  std::size_t fired = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    --live_;
    auto it = cancelled_.find(ev.seq);
    if (it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    now_ = ev.fire_at;
    (*ev.cb)();
    ++fired;
  }
  return fired;
}

SyncSignal::SyncSignal(Scheduler& sched, Tracer& tracer, ComponentId id, ClockDomain dest,
                       bool initial)
    : sched_(sched), tracer_(tracer), id_(id), dest_(std::move(dest)), input_(initial),
      output_(initial) {}

void SyncSignal::input_change(bool level) {
  if (level == input_) throw ModelBugError("synchronizer input did not toggle");
  input_ = level;
  SimTime now = sched_.now();
  SimTime at = dest_.second_edge_after(now);
  if (!timeline_.empty()) {
    // Queued changes land on consecutive destination edges, in order.
    SimTime after_prev = dest_.next_edge_after(timeline_.back().at);
    if (after_prev > at) at = after_prev;
  }
  timeline_.push_back({at, level});
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sync=in level=%d", level ? 1 : 0);
  tracer_.emit(now, id_, TraceKind::StateChange, buf);
  sched_.schedule(at, [this, at, level] {
    char out[64];
    std::snprintf(out, sizeof(out), "sync=out level=%d", level ? 1 : 0);
    tracer_.emit(at, id_, TraceKind::StateChange, out);
  });
}

bool SyncSignal::sample(SimTime t) {
  while (cursor_ < timeline_.size() && timeline_[cursor_].at <= t) {
    output_ = timeline_[cursor_].level;
    ++cursor_;
  }
  return output_;
}

}  // namespace nocsim
