#pragma once
// Per-run measurement collection and the final report: transaction records,
// packet conservation counters, per-component counters, CSV/summary export.

#include <cstdint>
#include <string>
#include <vector>

#include "kernel.hpp"

namespace nocsim {

struct RouterCountersSnapshot {
  std::uint64_t forwarded_packets = 0;
  std::uint64_t drops = 0;
  std::uint64_t malformed = 0;
};

struct AdapterCounters {
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  std::uint64_t discarded_malformed = 0;
  std::uint64_t stale_tag = 0;
  std::uint64_t unmapped_prefix = 0;
};

enum class TxnOutcome : std::uint8_t { Completed, Failed };

struct TxnRecord {
  int id = 0;
  int master = -1;
  int slave = -1;  // -1 until the route lookup names the target
  bool write = false;
  SimTime issued_at = 0;
  SimTime completed_at = 0;
  int retransmits = 0;
  int hops = 0;
  TxnOutcome outcome = TxnOutcome::Completed;
  std::uint32_t data = 0;  // read data observed / write data sent (not exported)
};

struct RunReport {
  std::vector<TxnRecord> txns;
  std::vector<std::pair<std::string, RouterCountersSnapshot>> routers;
  std::vector<std::pair<std::string, AdapterCounters>> adapters;

  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t drops = 0;
  std::uint64_t malformed_drops = 0;
  std::uint64_t retransmits = 0;
  std::uint64_t violations = 0;
  std::uint64_t stale_responses = 0;
  std::uint64_t spurious_responses = 0;

  std::uint64_t completed_txns = 0;
  std::uint64_t failed_txns = 0;
  SimTime mean_latency = 0;
  SimTime median_latency = 0;
  SimTime max_latency = 0;
  SimTime end_time = 0;
  std::uint64_t trace_hash = 0;

  bool ok() const { return failed_txns == 0 && violations == 0; }

  // header: txn_id,master,slave,kind,issued_ps,completed_ps,latency_ps,hops,
  //         retransmits,outcome — one row per transaction in issue order.
  std::string to_csv() const;
  std::string summary() const;  // key: value lines
};

class Stats {
 public:
  // packet-level events
  void record_injection() { ++injected_; }
  void record_delivery();
  void record_drop() { ++drops_; }
  void record_malformed_drop() { ++malformed_drops_; }
  void record_retransmit() { ++retransmits_; }
  void record_violation() { ++violations_; }
  void record_stale() { ++stale_; }
  void record_spurious() { ++spurious_; }

  std::uint64_t injected() const { return injected_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t drops() const { return drops_; }
  std::uint64_t in_flight() const { return injected_ - delivered_ - drops_ - malformed_drops_; }

  // transaction records
  int txn_issued(int master, bool write, SimTime t);
  void txn_target(int id, int slave, int hops);
  void txn_retransmitted(int id);
  void txn_completed(int id, SimTime t, std::uint32_t data);
  void txn_failed(int id, SimTime t);
  bool all_txns_settled() const { return settled_ == txns_.size(); }
  const std::vector<TxnRecord>& txns() const { return txns_; }

  void add_router(std::string name, const RouterCountersSnapshot& c);
  void add_adapter(std::string name, const AdapterCounters& c);

  RunReport finalize(std::uint64_t trace_hash, SimTime end_time) const;

 private:
  std::vector<TxnRecord> txns_;
  std::size_t settled_ = 0;
  std::vector<std::pair<std::string, RouterCountersSnapshot>> routers_;
  std::vector<std::pair<std::string, AdapterCounters>> adapters_;
  std::uint64_t injected_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t drops_ = 0;
  std::uint64_t malformed_drops_ = 0;
  std::uint64_t retransmits_ = 0;
  std::uint64_t violations_ = 0;
  std::uint64_t stale_ = 0;
  std::uint64_t spurious_ = 0;
};

}  // namespace nocsim
