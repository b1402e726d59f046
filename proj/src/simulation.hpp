#pragma once
// Scenario assembly and execution: builds the mesh of routers and channels,
// attaches master/slave nodes per the configuration, clocks every node until
// the workload drains (or the run-until cap hits), and produces the report.

#include <memory>
#include <optional>
#include <vector>

#include "adapter.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "kernel.hpp"
#include "router.hpp"
#include "stats.hpp"
#include "wishbone.hpp"

namespace nocsim {

struct ExitStatus {
  enum class Kind : std::uint8_t { Ok, ConfigError, RunFailed } kind = Kind::Ok;
  std::uint64_t failed_txns = 0;
  int code() const {
    switch (kind) {
      case Kind::Ok: return 0;
      case Kind::ConfigError: return 1;
      case Kind::RunFailed: return 2;
    }
    return 2;
  }
};

class Simulation {
 public:
  // Sink and stream, when given, are installed before any component is
  // built, so they also see the construction-time records (initial FSM
  // states); a stream attached later would miss them and dump a file that no
  // longer matches the trace hash.
  explicit Simulation(SimConfig cfg, std::function<void(const TraceRecord&)> sink = nullptr,
                      std::ostream* trace_stream = nullptr);

  RunReport run();  // single use
  ExitStatus status() const;

  // component access for tests
  Scheduler& scheduler() { return sched_; }
  Tracer& tracer() { return tracer_; }
  Stats& stats() { return stats_; }
  Router& router_at(int node);
  SlaveMemory* memory_at(int node);
  MasterNa* master_na_at(int node);
  const SimConfig& config() const { return cfg_; }

 private:
  struct MasterNode {
    int index;
    ClockDomain domain;
    WbSignals bus;
    std::unique_ptr<MasterCore> core;
    std::unique_ptr<MasterNa> na;
    std::unique_ptr<WbChecker> checker;
  };
  struct SlaveNode {
    int index;
    ClockDomain domain;
    WbSignals bus;
    std::unique_ptr<SlaveMemory> mem;
    std::unique_ptr<SlaveNa> na;
    std::unique_ptr<WbChecker> checker;
  };

  void build();
  std::vector<WorkloadOp> realize_workload(int node, const WorkloadConfig& wc) const;
  void on_master_edge(MasterNode& n);
  void on_slave_edge(SlaveNode& n);
  bool drained() const;

  SimConfig cfg_;
  Scheduler sched_;
  Tracer tracer_;
  Stats stats_;

  std::vector<std::unique_ptr<Router>> routers_;       // one per node index
  std::vector<std::unique_ptr<Channel>> channels_;
  std::vector<std::unique_ptr<MasterNode>> masters_;
  std::vector<std::unique_ptr<SlaveNode>> slaves_;

  bool ran_ = false;
  std::optional<RunReport> report_;
};

// Convenience used by the C API and the CLI.
std::pair<RunReport, ExitStatus> run_scenario(const SimConfig& cfg, std::ostream* trace_stream);

}  // namespace nocsim
