#include "stats.hpp"

#include <algorithm>
#include <cstdio>

namespace nocsim {

void Stats::record_delivery() {
  ++delivered_;
  if (delivered_ + drops_ + malformed_drops_ > injected_)
    throw ModelBugError("delivery without matching injection");
}

int Stats::txn_issued(int master, bool write, SimTime t) {
  TxnRecord r;
  r.id = static_cast<int>(txns_.size());
  r.master = master;
  r.write = write;
  r.issued_at = t;
  txns_.push_back(r);
  return r.id;
}

void Stats::txn_target(int id, int slave, int hops) {
  txns_.at(id).slave = slave;
  txns_.at(id).hops = hops;
}

void Stats::txn_retransmitted(int id) { txns_.at(id).retransmits++; }

void Stats::txn_completed(int id, SimTime t, std::uint32_t data) {
  TxnRecord& r = txns_.at(id);
  r.completed_at = t;
  r.data = data;
  r.outcome = TxnOutcome::Completed;
  ++settled_;
}

void Stats::txn_failed(int id, SimTime t) {
  TxnRecord& r = txns_.at(id);
  r.completed_at = t;
  r.outcome = TxnOutcome::Failed;
  ++settled_;
}

void Stats::add_router(std::string name, const RouterCountersSnapshot& c) {
  routers_.emplace_back(std::move(name), c);
}

void Stats::add_adapter(std::string name, const AdapterCounters& c) {
  adapters_.emplace_back(std::move(name), c);
}

RunReport Stats::finalize(std::uint64_t trace_hash, SimTime end_time) const {
  RunReport rep;
  rep.txns = txns_;
  rep.routers = routers_;
  rep.adapters = adapters_;
  rep.injected = injected_;
  rep.delivered = delivered_;
  rep.drops = drops_;
  rep.malformed_drops = malformed_drops_;
  rep.retransmits = retransmits_;
  rep.violations = violations_;
  rep.stale_responses = stale_;
  rep.spurious_responses = spurious_;
  rep.end_time = end_time;
  rep.trace_hash = trace_hash;

  std::vector<SimTime> latencies;
  for (const auto& t : rep.txns) {
    if (t.outcome == TxnOutcome::Completed) {
      rep.completed_txns++;
      latencies.push_back(t.completed_at - t.issued_at);
    } else {
      rep.failed_txns++;
    }
  }
  if (!latencies.empty()) {
    SimTime total = 0;
    for (SimTime l : latencies) {
      total += l;
      rep.max_latency = std::max(rep.max_latency, l);
    }
    rep.mean_latency = total / latencies.size();
    std::sort(latencies.begin(), latencies.end());
    rep.median_latency = latencies[latencies.size() / 2];
  }
  return rep;
}

std::string RunReport::to_csv() const {
  std::string csv =
      "txn_id,master,slave,kind,issued_ps,completed_ps,latency_ps,hops,retransmits,outcome\n";
  char row[192];
  for (const auto& t : txns) {
    std::snprintf(row, sizeof(row), "%d,%d,%d,%s,%llu,%llu,%llu,%d,%d,%s\n", t.id, t.master,
                  t.slave, t.write ? "write" : "read",
                  static_cast<unsigned long long>(t.issued_at),
                  static_cast<unsigned long long>(t.completed_at),
                  static_cast<unsigned long long>(t.completed_at - t.issued_at), t.hops,
                  t.retransmits, t.outcome == TxnOutcome::Completed ? "completed" : "failed");
    csv += row;
  }
  return csv;
}

std::string RunReport::summary() const {
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "transactions_issued: %zu\n"
                "transactions_completed: %llu\n"
                "transactions_failed: %llu\n"
                "packets_injected: %llu\n"
                "packets_delivered: %llu\n"
                "packets_dropped: %llu\n"
                "packets_discarded_malformed: %llu\n"
                "retransmits: %llu\n"
                "stale_responses: %llu\n"
                "spurious_responses: %llu\n"
                "checker_violations: %llu\n"
                "mean_latency_ps: %llu\n"
                "median_latency_ps: %llu\n"
                "max_latency_ps: %llu\n"
                "end_time_ps: %llu\n"
                "trace_hash: %016llx\n",
                txns.size(), static_cast<unsigned long long>(completed_txns),
                static_cast<unsigned long long>(failed_txns),
                static_cast<unsigned long long>(injected),
                static_cast<unsigned long long>(delivered),
                static_cast<unsigned long long>(drops),
                static_cast<unsigned long long>(malformed_drops),
                static_cast<unsigned long long>(retransmits),
                static_cast<unsigned long long>(stale_responses),
                static_cast<unsigned long long>(spurious_responses),
                static_cast<unsigned long long>(violations),
                static_cast<unsigned long long>(mean_latency),
                static_cast<unsigned long long>(median_latency),
                static_cast<unsigned long long>(max_latency),
                static_cast<unsigned long long>(end_time),
                static_cast<unsigned long long>(trace_hash));
  return buf;
}

}  // namespace nocsim
