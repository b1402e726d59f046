#pragma once
// WISHBONE classic single read/write bus-functional models, a protocol rule
// checker, and the end-to-end flow-control engine (timeout + retransmit)
// that lives in the master processing element. Components step once per
// rising clock edge of their node: they read the pre-edge bus snapshot and
// commit new levels onto the live bus.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kernel.hpp"
#include "packet.hpp"
#include "stats.hpp"

namespace nocsim {

struct WbSignals {
  bool cyc = false;
  bool stb = false;
  bool we = false;
  bool ack = false;
  std::uint32_t adr = 0;
  std::uint32_t dat_w = 0;
  std::uint32_t dat_r = 0;
  std::uint8_t sel = 0;
};

// Memory-mapped slave IP core stand-in: sparse 32-bit word store, byte-lane
// masked writes, reads of never-written words return 0, ack after the
// configured number of wait-state cycles.
class SlaveMemory {
 public:
  explicit SlaveMemory(int wait_states = 0) : wait_states_(wait_states) {}

  void step(SimTime t, const WbSignals& snap, WbSignals& drive);

  std::uint32_t peek(std::uint32_t adr) const;
  void poke(std::uint32_t adr, std::uint32_t word) { words_[adr] = word; }
  const std::map<std::uint32_t, std::uint32_t>& words() const { return words_; }

 private:
  std::map<std::uint32_t, std::uint32_t> words_;
  int wait_states_;
  int waited_ = 0;
  bool served_ = false;
};

struct WbViolation {
  SimTime time = 0;
  std::string rule;
};

// Observes one bus at every clock edge. Rules: stb-without-cyc,
// ack-without-stb, and unstable-address (adr/dat_w/sel/we must hold from stb
// assertion until ack). Never halts the simulation.
class WbChecker {
 public:
  WbChecker(Tracer* tracer, ComponentId id, Stats* stats)
      : tracer_(tracer), id_(id), stats_(stats) {}

  void observe(SimTime t, const WbSignals& s);

  const std::vector<WbViolation>& violations() const { return violations_; }

 private:
  void report(SimTime t, const char* rule);

  Tracer* tracer_;
  ComponentId id_;
  Stats* stats_;
  std::vector<WbViolation> violations_;
  bool prev_stb_ = false;
  bool got_ack_ = false;
  WbSignals held_{};
};

enum class FlowAction : std::uint8_t { None, Complete, Retransmit, Fail };

struct FlowEvent {
  enum class Type : std::uint8_t { Sent, Response, Timer } type;
  std::uint8_t tag = 0;
};

struct FlowControlConfig {
  SimTime timeout = 1'000'000;  // ps
  int max_retries = 8;
};

struct FlowCounters {
  std::uint64_t retransmits = 0;
  std::uint64_t failures = 0;
  std::uint64_t stale = 0;
  std::uint64_t spurious = 0;
};

// Transition core of the end-to-end flow control: one outstanding
// transaction, retransmission reuses the tag, stale and spurious responses
// are counted and otherwise ignored. Timers are scheduled by the caller.
class FlowControl {
 public:
  explicit FlowControl(int max_retries) : max_retries_(max_retries) {}

  FlowAction step(const FlowEvent& ev);

  bool outstanding() const { return outstanding_; }
  std::uint8_t tag() const { return tag_; }
  int retries_used() const { return retries_; }
  const FlowCounters& counters() const { return counters_; }

 private:
  int max_retries_;
  bool outstanding_ = false;
  std::uint8_t tag_ = 0;
  int retries_ = 0;
  FlowCounters counters_;
};

struct WorkloadOp {
  bool write = false;
  std::uint32_t adr = 0;
  std::uint32_t data = 0;
  std::uint8_t sel = 0xF;
};

class MasterNa;

// Scripted WISHBONE master: issues classic single cycles back to back,
// holds each cycle until its ack (or until flow control gives up), and owns
// the timeout/retransmission engine for the requests its adapter sends.
class MasterCore {
 public:
  MasterCore(Scheduler& sched, Tracer& tracer, int node_index, std::vector<WorkloadOp> ops,
             const FlowControlConfig& fc, Stats* stats);

  void attach_na(MasterNa* na) { na_ = na; }

  void step(SimTime t, const WbSignals& snap, WbSignals& drive);
  bool done() const { return next_op_ >= ops_.size() && state_ == State::Idle; }

  // adapter callbacks
  void on_na_lookup(int slave_node, int hops);
  void on_na_sent(std::uint8_t tag);
  FlowAction on_na_response(const TransactionPayload& txn);
  void on_na_unmapped();

  const FlowCounters& flow_counters() const { return flow_.counters(); }
  std::uint64_t unanswered() const { return state_ != State::Idle ? 1 : 0; }
  void abandon(SimTime t);  // run cut short; settle the open transaction

 private:
  enum class State { Idle, Driving, Cooldown };

  void arm_timer(SimTime now);
  void disarm_timer();
  void on_timer();

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId id_;
  int node_;
  std::vector<WorkloadOp> ops_;
  FlowControlConfig fc_cfg_;
  FlowControl flow_;
  Stats* stats_;
  MasterNa* na_ = nullptr;

  State state_ = State::Idle;
  std::size_t next_op_ = 0;
  int cur_txn_ = -1;
  int cur_retransmits_ = 0;
  bool fail_pending_ = false;
  Scheduler::Handle timer_{};
};

}  // namespace nocsim
