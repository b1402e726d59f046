#include "router.hpp"

#include <algorithm>
#include <cstdio>

#include "stats.hpp"

namespace nocsim {

Router::Router(Scheduler& sched, Tracer& tracer, NodeCoord at, const RouterConfig& cfg,
               Stats* stats)
    : sched_(sched), tracer_(tracer), at_(at), cfg_(cfg), stats_(stats) {
  if (cfg.fifo_depth < 1) throw std::invalid_argument("fifo depth must be positive");
  if (cfg.drop_policy == DropPolicy::DropOnFull && cfg.fifo_depth < int(kFlitsPerPacket))
    throw std::invalid_argument("DropOnFull needs fifo depth >= one packet (5 flits)");
  char name[32];
  std::snprintf(name, sizeof(name), "router.%d.%d", at.x, at.y);
  id_ = tracer.register_component(name);
  for (int p = 0; p < kPortCount; ++p) {
    inputs_[p].router = this;
    inputs_[p].port = static_cast<Direction>(p);
  }
}

FlitSink* Router::input(Direction port) { return &in_port(port); }

void Router::connect_output(Direction port, Channel* ch) {
  Output& o = output(port);
  o.ch = ch;
  ch->set_on_complete([this, port] { on_send_complete(port); });
}

void Router::bind_input_channel(Direction port, Channel* ch) { in_port(port).ch = ch; }

std::size_t Router::fifo_size(Direction out) const {
  return outputs_[static_cast<int>(out)].fifo.size();
}

std::optional<Direction> Router::grant_holder(Direction out) const {
  return outputs_[static_cast<int>(out)].holder;
}

int Router::free_space(const Output& o) const {
  return cfg_.fifo_depth - static_cast<int>(o.fifo.size());
}

bool Router::on_offer(InputPort& in, const Flit& f) {
  switch (in.mode) {
    case InMode::Idle:
      if (f.kind != FlitKind::Head)
        throw ModelBugError("body/tail flit arrived with no grant held");
      return handle_head(in, f);
    case InMode::AwaitGrant:
      throw ModelBugError("flit offered while waiting for a grant");
    case InMode::HeadReady:
      return forward_flit(in, f);
    case InMode::Stream:
      if (f.kind == FlitKind::Head)
        throw ModelBugError("head flit interleaved into an open packet");
      return forward_flit(in, f);
    case InMode::Swallow:
      if (f.kind == FlitKind::Tail) in.mode = InMode::Idle;
      return true;
  }
  return true;
}

bool Router::handle_head(InputPort& in, const Flit& f) {
  auto nh = decode_next_hop(SourceRoute{f.payload, f.head_hops}, in.port);
  if (!nh) {
    drop_packet(in, "malformed");
    counters_.malformed++;
    if (stats_) stats_->record_malformed_drop();
    return true;
  }
  if (output(nh->out_port).ch == nullptr) {
    // No link on the requested side (mesh edge or unattached local port).
    drop_packet(in, "unrouted");
    counters_.malformed++;
    if (stats_) stats_->record_malformed_drop();
    return true;
  }
  in.out = nh->out_port;
  in.remaining = nh->remaining;
  in.mode = InMode::AwaitGrant;
  request_grant(in.out, in.port);
  return false;  // channel stalls until the grant resolves
}

bool Router::forward_flit(InputPort& in, const Flit& f) {
  Output& o = output(in.out);
  bool is_head = in.mode == InMode::HeadReady;
  if (is_head && cfg_.drop_policy == DropPolicy::DropOnFull &&
      free_space(o) < int(kFlitsPerPacket)) {
    // Whole-packet drop, decided when the Head meets the full FIFO.
    counters_.drops++;
    if (stats_) stats_->record_drop();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "reason=fifo_full in=%s out=%s", direction_name(in.port),
                  direction_name(in.out));
    tracer_.emit(sched_.now(), id_, TraceKind::Drop, buf);
    release_grant(in.out);
    drop_packet(in, nullptr);
    return true;
  }
  if (free_space(o) < 1) {
    if (cfg_.drop_policy == DropPolicy::DropOnFull)
      throw ModelBugError("mid-packet overflow under DropOnFull");
    o.space_waiter = in.port;
    return false;  // backpressure: stall until the FIFO drains
  }
  Flit out = f;
  if (is_head) {
    out.payload = in.remaining.packed;
    out.head_hops = in.remaining.hops;
    in.mode = InMode::Stream;
  }
  enqueue(in.out, out);
  if (f.kind == FlitKind::Tail) {
    counters_.forwarded_packets++;
    release_grant(in.out);
    in.mode = InMode::Idle;
  }
  return true;
}

void Router::drop_packet(InputPort& in, const char* reason) {
  if (reason) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "reason=%s in=%s", reason, direction_name(in.port));
    tracer_.emit(sched_.now(), id_, TraceKind::Drop, buf);
  }
  // Swallow the rest of the packet; a lone Head still has 4 flits behind it.
  in.mode = InMode::Swallow;
}

void Router::request_grant(Direction out, Direction requester) {
  Output& o = output(out);
  if (o.holder == requester) throw ModelBugError("double mutex request (already holding)");
  for (const auto& w : o.waiters)
    if (w.second == requester) throw ModelBugError("double mutex request (already queued)");
  o.waiters.emplace_back(sched_.now(), requester);
  schedule_resolve(out);
}

void Router::schedule_resolve(Direction out) {
  Output& o = output(out);
  if (o.resolve_pending || o.holder.has_value() || o.waiters.empty()) return;
  o.resolve_pending = true;
  sched_.schedule(sched_.now(), [this, out] { resolve(out); });
}

void Router::resolve(Direction out) {
  Output& o = output(out);
  o.resolve_pending = false;
  if (o.holder.has_value() || o.waiters.empty()) return;
  // FCFS; identical request times fall back to fixed port priority N,E,S,W,L.
  auto best = std::min_element(o.waiters.begin(), o.waiters.end(),
                               [](const auto& a, const auto& b) {
                                 if (a.first != b.first) return a.first < b.first;
                                 return static_cast<int>(a.second) < static_cast<int>(b.second);
                               });
  Direction port = best->second;
  o.waiters.erase(best);
  o.holder = port;
  InputPort& in = in_port(port);
  if (in.mode != InMode::AwaitGrant) throw ModelBugError("grant given to idle port");
  in.mode = InMode::HeadReady;
  if (!in.ch) throw ModelBugError("granted input port has no bound channel");
  in.ch->unstall();  // re-offers the pended Head
}

void Router::release_grant(Direction out) {
  Output& o = output(out);
  o.holder.reset();
  schedule_resolve(out);
}

void Router::enqueue(Direction out, const Flit& f) {
  Output& o = output(out);
  if (free_space(o) < 1) throw ModelBugError("fifo overflow");
  o.fifo.push_back(f);
  if (!o.sending) {
    o.sending = true;
    o.ch->send(o.fifo.front());
  }
}

void Router::on_send_complete(Direction out) {
  Output& o = output(out);
  o.fifo.pop_front();
  if (o.space_waiter) {
    Direction w = *o.space_waiter;
    o.space_waiter.reset();
    in_port(w).ch->unstall();
  }
  if (!o.fifo.empty()) {
    o.ch->send(o.fifo.front());
  } else {
    o.sending = false;
  }
}

}  // namespace nocsim
