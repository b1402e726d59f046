#pragma once
// Scenario configuration: a single JSON document naming the mesh, per-node
// roles and clocks, the address-prefix lookup table, router and flow-control
// parameters, and per-master workloads. Parsing validates every cross-field
// invariant and reports the offending field.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "router.hpp"
#include "topology.hpp"
#include "wishbone.hpp"

namespace nocsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeRole : std::uint8_t { Idle, Master, Slave };

struct NodeConfig {
  NodeRole role = NodeRole::Idle;
  std::uint64_t period = 40000;  // ps; 25 MHz default
  std::uint64_t phase = 0;
  int wait_states = 0;  // slave cores only
};

enum class WorkloadMode : std::uint8_t { Scripted, RandomUniform };

struct WorkloadConfig {
  WorkloadMode mode = WorkloadMode::Scripted;
  std::vector<WorkloadOp> ops;  // scripted
  int count = 0;                // random_uniform
  std::uint64_t seed = 0;       // 0: derive from the global seed
  std::vector<int> slaves;      // random_uniform target set
};

struct SimConfig {
  MeshDims mesh;
  std::vector<NodeConfig> nodes;      // one per node index
  std::map<int, int> lut;             // address prefix -> slave node
  RouterConfig router;
  FlowControlConfig flow;
  std::map<int, WorkloadConfig> workloads;  // master node -> workload
  SimTime run_until = 1'000'000'000'000;    // ps
  std::uint64_t seed = 0;
};

SimConfig parse_config(const std::string& json_text);
void validate_config(const SimConfig& cfg);  // throws ConfigError

}  // namespace nocsim
