#include "adapter.hpp"

#include <cstdio>

namespace nocsim {

const char* na_state_name(NaFsmState s) {
  switch (s) {
    case NaFsmState::Wait: return "Wait";
    case NaFsmState::StorePacket: return "StorePacket";
    case NaFsmState::RouteLookup: return "RouteLookup";
    case NaFsmState::Req: return "Req";
    case NaFsmState::Ack: return "Ack";
  }
  return "?";
}

void RouteLut::map(int prefix, int node, SourceRoute route) {
  if (prefix < 0 || prefix > 15) throw std::invalid_argument("lut prefix outside 0..15");
  entries_[prefix] = RouteLutEntry{node, route};
}

AsyncTransmitter::AsyncTransmitter(Channel* ch) : ch_(ch) {
  if (ch_)
    ch_->set_on_complete([this] { advance(); });
}

void AsyncTransmitter::set_req(bool level) {
  if (level == req_) return;
  req_ = level;
  if (level) {
    if (ack_) throw ModelBugError("transmitter req raised while ack still high");
    if (!ch_) throw ModelBugError("transmitter has no channel");
    next_ = 0;
    active_ = true;
    if (on_stream_start) on_stream_start();
    if (ch_->idle()) advance();
  } else {
    if (ack_) {
      ack_ = false;
      if (on_ack_change) on_ack_change(false);
    }
  }
}

void AsyncTransmitter::advance() {
  if (!active_) return;
  if (next_ < kFlitsPerPacket) {
    ch_->send(flits_[next_]);
    ++next_;
  } else {
    active_ = false;
    ack_ = true;
    if (on_ack_change) on_ack_change(true);
  }
}

bool AsyncReceiver::offer(const Flit& f) {
  if (full_) {
    stalled_ = true;
    return false;  // single packet buffer still owned by the controller
  }
  if (fill_ == 0) {
    if (f.kind != FlitKind::Head) {
      ++malformed_flits;
      return true;
    }
  } else if (fill_ < kFlitsPerPacket - 1) {
    if (f.kind != FlitKind::Body) {
      ++malformed_flits;
      if (f.kind == FlitKind::Head) {
        buf_[0] = f;
        fill_ = 1;
      } else {
        fill_ = 0;
      }
      return true;
    }
  } else {
    if (f.kind != FlitKind::Tail) {
      ++malformed_flits;
      if (f.kind == FlitKind::Head) {
        buf_[0] = f;
        fill_ = 1;
      } else {
        fill_ = 0;
      }
      return true;
    }
  }
  buf_[fill_++] = f;
  if (fill_ == kFlitsPerPacket) {
    if (on_packet) on_packet();
    raise();
  }
  return true;
}

void AsyncReceiver::raise() {
  full_ = true;
  req_ = true;
  if (on_req_change) on_req_change(true);
}

void AsyncReceiver::inject(const FlitArray& flits) {
  if (!full_ && fill_ == 0) {
    buf_ = flits;
    fill_ = kFlitsPerPacket;
    raise();
  } else {
    injected_.push_back(flits);
  }
}

void AsyncReceiver::set_ack(bool level) {
  if (level == ack_) return;
  ack_ = level;
  if (!level) return;
  if (!full_) throw ModelBugError("receiver ack with no packet pending");
  full_ = false;
  fill_ = 0;
  req_ = false;
  if (on_req_change) on_req_change(false);
  if (!injected_.empty()) {
    FlitArray next = injected_.front();
    injected_.pop_front();
    buf_ = next;
    fill_ = kFlitsPerPacket;
    raise();  // queued toggle lands on the following destination edge
  } else if (stalled_) {
    stalled_ = false;
    ch_->unstall();
  }
}

MasterNa::MasterNa(Scheduler& sched, Tracer& tracer, int node_index, MeshDims dims,
                   ClockDomain domain, RouteLut lut, Channel* tx_ch, Stats* stats)
    : sched_(sched), tracer_(tracer), node_(node_index), dims_(dims), domain_(domain),
      lut_(std::move(lut)), stats_(stats), tx_(tx_ch),
      tx_ack_sync_(sched, tracer,
                   tracer.register_component("na" + std::to_string(node_index) + ".mtx.ack_sync"),
                   domain),
      rx_req_sync_(sched, tracer,
                   tracer.register_component("na" + std::to_string(node_index) + ".mrx.req_sync"),
                   domain) {
  tx_id_ = tracer.register_component("na" + std::to_string(node_index) + ".mtx");
  rx_id_ = tracer.register_component("na" + std::to_string(node_index) + ".mrx");
  tx_.on_ack_change = [this](bool v) { tx_ack_sync_.input_change(v); };
  tx_.on_stream_start = [this] {
    if (stats_) stats_->record_injection();
  };
  receiver_.on_req_change = [this](bool v) { rx_req_sync_.input_change(v); };
  receiver_.on_packet = [this] {
    if (stats_) stats_->record_delivery();
  };
  tracer_.emit(0, tx_id_, TraceKind::StateChange, "from=none to=Wait");
  tracer_.emit(0, rx_id_, TraceKind::StateChange, "from=none to=Wait");
}

void MasterNa::bind_rx_channel(Channel* ch) {
  ch->bind_sink(&receiver_);
  receiver_.bind_channel(ch);
}

void MasterNa::request_retransmit() { retransmit_pending_ = true; }

void MasterNa::abort_transaction() {
  in_flight_ = false;
  retransmit_pending_ = false;
}

void MasterNa::tx_enter(NaFsmState s, SimTime t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "from=%s to=%s", na_state_name(tx_state_), na_state_name(s));
  tx_state_ = s;
  tracer_.emit(t, tx_id_, TraceKind::StateChange, buf);

  switch (s) {
    case NaFsmState::RouteLookup:
      do_route_lookup();
      break;
    case NaFsmState::Req:
      tx_.load(tx_flits_);
      counters_.sent++;
      tx_.set_req(true);
      if (cb_.on_sent) cb_.on_sent(tag_);
      break;
    case NaFsmState::Ack:
      tx_.set_req(false);
      break;
    default:
      break;
  }
}

void MasterNa::do_route_lookup() {
  const auto& entry = lut_.lookup(latched_.adr);
  if (!entry) {
    lookup_failed_ = true;
    return;
  }
  lookup_failed_ = false;
  NodeCoord self = coord_of(node_, dims_);
  NodeCoord target = coord_of(entry->node, dims_);
  if (fresh_) tag_ = tag_seq_++;
  if (cb_.on_lookup)
    cb_.on_lookup(entry->node, std::abs(target.x - self.x) + std::abs(target.y - self.y));

  Packet p;
  p.txn.kind = latched_.we ? TxnKind::WriteRequest : TxnKind::ReadRequest;
  p.txn.adr = latched_.adr;
  p.txn.data = latched_.we ? latched_.dat_w : 0;
  p.txn.sel = latched_.sel;
  p.txn.tag = tag_;
  loopback_ = entry->node == node_;
  if (!loopback_) {
    p.route = entry->route;
    p.return_route = encode_route(compute_route(target, self));
  }
  tx_flits_ = serialize(p);
}

void MasterNa::tx_step(SimTime t, const WbSignals& snap) {
  // A cycle start is a strobe rising edge; a held strobe after completion or
  // during the response wait must not re-trigger the controller.
  bool cycle_start = snap.cyc && snap.stb && !prev_stb_;
  switch (tx_state_) {
    case NaFsmState::Wait:
      if (retransmit_pending_ || (cycle_start && !in_flight_)) {
        fresh_ = !retransmit_pending_;
        retransmit_pending_ = false;
        if (fresh_) in_flight_ = true;
        latched_ = {snap.adr, snap.dat_w, snap.sel, snap.we};
        tx_enter(NaFsmState::StorePacket, t);
      }
      break;
    case NaFsmState::StorePacket:
      tx_enter(NaFsmState::RouteLookup, t);
      break;
    case NaFsmState::RouteLookup:
      if (lookup_failed_) {
        counters_.unmapped_prefix++;
        in_flight_ = false;
        tx_enter(NaFsmState::Wait, t);
        if (cb_.on_unmapped) cb_.on_unmapped();
      } else if (loopback_) {
        if (!loopback_peer_) throw ModelBugError("loopback prefix with no local slave attached");
        counters_.sent++;
        loopback_peer_->deliver_request(tx_flits_);
        tx_enter(NaFsmState::Wait, t);
        if (cb_.on_sent) cb_.on_sent(tag_);
      } else {
        tx_enter(NaFsmState::Req, t);
      }
      break;
    case NaFsmState::Req:
      if (tx_ack_sync_.sample(t)) tx_enter(NaFsmState::Ack, t);
      break;
    case NaFsmState::Ack:
      if (!tx_ack_sync_.sample(t)) tx_enter(NaFsmState::Wait, t);
      break;
  }
  prev_stb_ = snap.stb;
}

void MasterNa::rx_enter(NaFsmState s, SimTime t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "from=%s to=%s", na_state_name(rx_state_), na_state_name(s));
  rx_state_ = s;
  tracer_.emit(t, rx_id_, TraceKind::StateChange, buf);
}

void MasterNa::rx_step(SimTime t, WbSignals& drive) {
  if (ack_pulse_) {  // one-cycle completion pulse toward the core
    drive.ack = false;
    ack_pulse_ = false;
  }
  switch (rx_state_) {
    case NaFsmState::Wait:
      if (rx_req_sync_.sample(t)) {
        rx_flits_ = receiver_.packet();
        rx_enter(NaFsmState::StorePacket, t);
      }
      break;
    case NaFsmState::StorePacket:
      rx_enter(NaFsmState::Req, t);
      {
        auto parsed = deserialize(rx_flits_);
        if (!parsed) {
          counters_.discarded_malformed++;
        } else {
          counters_.received++;
          FlowAction act = cb_.on_response ? cb_.on_response(parsed->txn) : FlowAction::None;
          if (act == FlowAction::Complete) {
            drive.ack = true;
            drive.dat_r = parsed->txn.data;
            ack_pulse_ = true;
            in_flight_ = false;
          } else if (in_flight_) {
            counters_.stale_tag++;
          }
        }
        receiver_.set_ack(true);
      }
      break;
    case NaFsmState::Req:
      rx_enter(NaFsmState::Ack, t);
      break;
    case NaFsmState::Ack:
      if (!rx_req_sync_.sample(t)) {
        receiver_.set_ack(false);
        rx_enter(NaFsmState::Wait, t);
      }
      break;
    case NaFsmState::RouteLookup:
      throw ModelBugError("receive controller has no RouteLookup state");
  }
}

void MasterNa::step(SimTime t, const WbSignals& snap, WbSignals& drive) {
  tx_step(t, snap);
  rx_step(t, drive);
}

SlaveNa::SlaveNa(Scheduler& sched, Tracer& tracer, int node_index, ClockDomain domain,
                 Channel* tx_ch, Stats* stats)
    : sched_(sched), tracer_(tracer), node_(node_index), domain_(domain), stats_(stats),
      tx_(tx_ch),
      tx_ack_sync_(sched, tracer,
                   tracer.register_component("na" + std::to_string(node_index) + ".stx.ack_sync"),
                   domain),
      rx_req_sync_(sched, tracer,
                   tracer.register_component("na" + std::to_string(node_index) + ".srx.req_sync"),
                   domain) {
  rx_id_ = tracer.register_component("na" + std::to_string(node_index) + ".srx");
  tx_id_ = tracer.register_component("na" + std::to_string(node_index) + ".stx");
  tx_.on_ack_change = [this](bool v) { tx_ack_sync_.input_change(v); };
  tx_.on_stream_start = [this] {
    if (stats_) stats_->record_injection();
  };
  receiver_.on_req_change = [this](bool v) { rx_req_sync_.input_change(v); };
  receiver_.on_packet = [this] {
    if (stats_) stats_->record_delivery();
  };
  tracer_.emit(0, rx_id_, TraceKind::StateChange, "from=none to=Wait");
  tracer_.emit(0, tx_id_, TraceKind::StateChange, "from=none to=Wait");
}

void SlaveNa::bind_rx_channel(Channel* ch) {
  ch->bind_sink(&receiver_);
  receiver_.bind_channel(ch);
}

void SlaveNa::rx_enter(NaFsmState s, SimTime t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "from=%s to=%s", na_state_name(rx_state_), na_state_name(s));
  rx_state_ = s;
  tracer_.emit(t, rx_id_, TraceKind::StateChange, buf);
}

void SlaveNa::tx_enter(NaFsmState s, SimTime t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "from=%s to=%s", na_state_name(tx_state_), na_state_name(s));
  tx_state_ = s;
  tracer_.emit(t, tx_id_, TraceKind::StateChange, buf);
}

void SlaveNa::rx_step(SimTime t, const WbSignals& snap, WbSignals& drive) {
  switch (rx_state_) {
    case NaFsmState::Wait:
      if (rx_req_sync_.sample(t)) {
        auto parsed = deserialize(receiver_.packet());
        if (!parsed) {
          counters_.discarded_malformed++;
          request_.reset();
        } else {
          counters_.received++;
          request_ = *parsed;
        }
        rx_enter(NaFsmState::StorePacket, t);
      }
      break;
    case NaFsmState::StorePacket:
      rx_enter(NaFsmState::Req, t);
      if (request_) {
        // Drive one WISHBONE master cycle into the slave core.
        drive.cyc = true;
        drive.stb = true;
        drive.we = request_->txn.kind == TxnKind::WriteRequest;
        drive.adr = request_->txn.adr;
        drive.dat_w = drive.we ? request_->txn.data : 0;
        drive.sel = request_->txn.sel;
        bus_driven_ = true;
      }
      break;
    case NaFsmState::Req: {
      bool cycle_done = false;
      if (!request_) {
        cycle_done = true;  // malformed packet: nothing to execute
      } else if (bus_driven_ && snap.ack) {
        bool write = request_->txn.kind == TxnKind::WriteRequest;
        response_.txn.kind = write ? TxnKind::WriteAck : TxnKind::ReadResponse;
        response_.txn.adr = request_->txn.adr;
        response_.txn.data = write ? 0 : snap.dat_r;
        response_.txn.sel = request_->txn.sel;
        response_.txn.tag = request_->txn.tag;
        response_.txn.status = TxnStatus::Ok;
        response_.route = request_->return_route;
        response_.return_route = SourceRoute{};
        drive.cyc = false;
        drive.stb = false;
        drive.we = false;
        drive.adr = 0;
        drive.dat_w = 0;
        drive.sel = 0;
        bus_driven_ = false;
        handoff_wait_ = true;
      }
      if (handoff_wait_) {
        if (!tx_pending_ && tx_state_ == NaFsmState::Wait) {
          tx_packet_ = response_;
          tx_pending_ = true;
          handoff_wait_ = false;
          cycle_done = true;
        }
      }
      if (cycle_done) {
        receiver_.set_ack(true);
        rx_enter(NaFsmState::Ack, t);
      }
      break;
    }
    case NaFsmState::Ack:
      if (!rx_req_sync_.sample(t)) {
        receiver_.set_ack(false);
        request_.reset();
        rx_enter(NaFsmState::Wait, t);
      }
      break;
    case NaFsmState::RouteLookup:
      throw ModelBugError("slave receive controller has no RouteLookup state");
  }
}

void SlaveNa::tx_step(SimTime t) {
  switch (tx_state_) {
    case NaFsmState::Wait:
      if (tx_pending_) {
        tx_pending_ = false;
        tx_enter(NaFsmState::StorePacket, t);
      }
      break;
    case NaFsmState::StorePacket:
      if (tx_packet_.route.hops == 0) {
        // Loopback response: the request never crossed the network.
        if (!loopback_peer_) throw ModelBugError("loopback response with no local master");
        counters_.sent++;
        loopback_peer_->deliver_response(serialize(tx_packet_));
        tx_enter(NaFsmState::Wait, t);
      } else {
        tx_.load(serialize(tx_packet_));
        counters_.sent++;
        tx_enter(NaFsmState::Req, t);
        tx_.set_req(true);
      }
      break;
    case NaFsmState::Req:
      if (tx_ack_sync_.sample(t)) {
        tx_enter(NaFsmState::Ack, t);
        tx_.set_req(false);
      }
      break;
    case NaFsmState::Ack:
      if (!tx_ack_sync_.sample(t)) tx_enter(NaFsmState::Wait, t);
      break;
    case NaFsmState::RouteLookup:
      throw ModelBugError("slave transmit controller has no RouteLookup state");
  }
}

void SlaveNa::step(SimTime t, const WbSignals& snap, WbSignals& drive) {
  rx_step(t, snap, drive);
  tx_step(t);
}

}  // namespace nocsim
