#include "wishbone.hpp"

#include <cstdio>

#include "adapter.hpp"

namespace nocsim {

void SlaveMemory::step(SimTime, const WbSignals& snap, WbSignals& drive) {
  drive.ack = false;  // ack is a one-cycle pulse
  if (!snap.stb || !snap.cyc) {
    waited_ = 0;
    served_ = false;
    return;
  }
  if (served_) return;  // hold off until the master drops stb
  if (waited_ < wait_states_) {
    ++waited_;
    return;
  }
  if (snap.we) {
    std::uint32_t mask = 0;
    for (int lane = 0; lane < 4; ++lane)
      if (snap.sel & (1u << lane)) mask |= 0xFFu << (8 * lane);
    std::uint32_t old = peek(snap.adr);
    words_[snap.adr] = (old & ~mask) | (snap.dat_w & mask);
  } else {
    drive.dat_r = peek(snap.adr);
  }
  drive.ack = true;
  served_ = true;
  waited_ = 0;
}

std::uint32_t SlaveMemory::peek(std::uint32_t adr) const {
  auto it = words_.find(adr);
  return it == words_.end() ? 0 : it->second;
}

void WbChecker::report(SimTime t, const char* rule) {
  violations_.push_back({t, rule});
  if (stats_) stats_->record_violation();
  if (tracer_) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "violation=%s", rule);
    tracer_->emit(t, id_, TraceKind::WbEdge, buf);
  }
}

void WbChecker::observe(SimTime t, const WbSignals& s) {
  if (s.stb && !s.cyc) report(t, "stb-without-cyc");
  if (s.ack && !s.stb) report(t, "ack-without-stb");
  if (s.stb) {
    if (!prev_stb_) {
      held_ = s;
      got_ack_ = false;
    } else if (!got_ack_) {
      if (s.adr != held_.adr || s.dat_w != held_.dat_w || s.sel != held_.sel ||
          s.we != held_.we)
        report(t, "unstable-address");
    }
    if (s.ack) got_ack_ = true;
  }
  prev_stb_ = s.stb;
}

FlowAction FlowControl::step(const FlowEvent& ev) {
  switch (ev.type) {
    case FlowEvent::Type::Sent:
      if (!outstanding_) {
        outstanding_ = true;
        tag_ = ev.tag;
        retries_ = 0;
      }
      // a retransmitted send keeps the open attempt record
      return FlowAction::None;
    case FlowEvent::Type::Response:
      if (!outstanding_) {
        counters_.spurious++;
        return FlowAction::None;
      }
      if (ev.tag != tag_) {
        counters_.stale++;
        return FlowAction::None;
      }
      outstanding_ = false;
      return FlowAction::Complete;
    case FlowEvent::Type::Timer:
      if (!outstanding_) return FlowAction::None;
      if (retries_ >= max_retries_) {
        counters_.failures++;
        outstanding_ = false;
        return FlowAction::Fail;
      }
      ++retries_;
      counters_.retransmits++;
      return FlowAction::Retransmit;
  }
  return FlowAction::None;
}

MasterCore::MasterCore(Scheduler& sched, Tracer& tracer, int node_index,
                       std::vector<WorkloadOp> ops, const FlowControlConfig& fc, Stats* stats)
    : sched_(sched), tracer_(tracer), node_(node_index), ops_(std::move(ops)), fc_cfg_(fc),
      flow_(fc.max_retries), stats_(stats) {
  char name[24];
  std::snprintf(name, sizeof(name), "core%d", node_index);
  id_ = tracer.register_component(name);
}

void MasterCore::step(SimTime t, const WbSignals& snap, WbSignals& drive) {
  switch (state_) {
    case State::Idle:
      if (next_op_ < ops_.size()) {
        const WorkloadOp& op = ops_[next_op_];
        drive.cyc = true;
        drive.stb = true;
        drive.we = op.write;
        drive.adr = op.adr;
        drive.dat_w = op.write ? op.data : 0;
        drive.sel = op.sel;
        state_ = State::Driving;
        cur_retransmits_ = 0;
        cur_txn_ = stats_->txn_issued(node_, op.write, t);
        char buf[48];
        std::snprintf(buf, sizeof(buf), "sig=stb level=1 op=%s", op.write ? "write" : "read");
        tracer_.emit(t, id_, TraceKind::WbEdge, buf);
      }
      break;
    case State::Driving:
      if (snap.ack) {
        // ack observation edge: the cycle terminates here.
        stats_->txn_completed(cur_txn_, t, ops_[next_op_].write ? ops_[next_op_].data : snap.dat_r);
        tracer_.emit(t, id_, TraceKind::WbEdge, "sig=ack level=1");
        drive.cyc = false;
        drive.stb = false;
        drive.we = false;
        drive.adr = 0;
        drive.dat_w = 0;
        drive.sel = 0;
        ++next_op_;
        state_ = State::Cooldown;
      } else if (fail_pending_) {
        fail_pending_ = false;
        stats_->txn_failed(cur_txn_, t);
        drive.cyc = false;
        drive.stb = false;
        drive.we = false;
        drive.adr = 0;
        drive.dat_w = 0;
        drive.sel = 0;
        ++next_op_;
        state_ = State::Cooldown;
      }
      break;
    case State::Cooldown:  // stb stays negated for at least one cycle
      state_ = State::Idle;
      break;
  }
}

void MasterCore::on_na_lookup(int slave_node, int hops) {
  if (cur_txn_ >= 0) stats_->txn_target(cur_txn_, slave_node, hops);
}

void MasterCore::on_na_sent(std::uint8_t tag) {
  flow_.step({FlowEvent::Type::Sent, tag});
  arm_timer(sched_.now());
}

FlowAction MasterCore::on_na_response(const TransactionPayload& txn) {
  FlowAction act = flow_.step({FlowEvent::Type::Response, txn.tag});
  if (act == FlowAction::Complete) {
    disarm_timer();
  } else if (stats_) {
    if (flow_.outstanding())
      stats_->record_stale();
    else
      stats_->record_spurious();
  }
  return act;
}

void MasterCore::on_na_unmapped() {
  // Local failure: no packet left the adapter, nothing to wait for.
  disarm_timer();
  fail_pending_ = true;
}

void MasterCore::arm_timer(SimTime now) {
  disarm_timer();
  timer_ = sched_.schedule(now + fc_cfg_.timeout, [this] { on_timer(); });
}

void MasterCore::disarm_timer() {
  if (timer_.valid) {
    sched_.cancel(timer_);
    timer_ = {};
  }
}

void MasterCore::on_timer() {
  timer_ = {};
  FlowAction act = flow_.step({FlowEvent::Type::Timer, 0});
  switch (act) {
    case FlowAction::Retransmit: {
      ++cur_retransmits_;
      if (stats_) {
        stats_->record_retransmit();
        stats_->txn_retransmitted(cur_txn_);
      }
      char buf[48];
      std::snprintf(buf, sizeof(buf), "tag=%u attempt=%d", flow_.tag(), cur_retransmits_);
      tracer_.emit(sched_.now(), id_, TraceKind::Retransmit, buf);
      if (na_) na_->request_retransmit();
      // keep the clock running even if the adapter cannot re-send yet
      arm_timer(sched_.now());
      break;
    }
    case FlowAction::Fail:
      fail_pending_ = true;
      if (na_) na_->abort_transaction();
      break;
    default:
      break;
  }
}

void MasterCore::abandon(SimTime t) {
  if (state_ != State::Idle && cur_txn_ >= 0) {
    disarm_timer();
    stats_->txn_failed(cur_txn_, t);
    state_ = State::Idle;
    next_op_ = ops_.size();
  }
}

}  // namespace nocsim
