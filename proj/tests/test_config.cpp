#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"

using namespace nocsim;

namespace {

const char* kMinimal = R"({
  "mesh": {"cols": 2, "rows": 2},
  "nodes": {
    "0": {"role": "master"},
    "3": {"role": "slave"}
  },
  "lut": {"3": 3},
  "workloads": {
    "0": {"mode": "scripted", "ops": [
      {"op": "write", "adr": "0x30000010", "data": "0xDEADBEEF", "sel": 15},
      {"op": "read", "adr": "0x30000010"}
    ]}
  }
})";

std::string expect_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal 2x2 config parses with defaults filled in") {
  SimConfig cfg = parse_config(kMinimal);
  CHECK(cfg.mesh.cols == 2);
  CHECK(cfg.nodes[0].role == NodeRole::Master);
  CHECK(cfg.nodes[0].period == 40000);  // 25 MHz default
  CHECK(cfg.nodes[1].role == NodeRole::Idle);
  CHECK(cfg.nodes[3].role == NodeRole::Slave);
  CHECK(cfg.router.fifo_depth == 8);
  CHECK(cfg.router.channel_delay == 1000);
  CHECK(cfg.router.drop_policy == DropPolicy::DropOnFull);
  CHECK(cfg.flow.timeout == 1'000'000);
  CHECK(cfg.flow.max_retries == 8);
  REQUIRE(cfg.workloads.count(0));
  REQUIRE(cfg.workloads.at(0).ops.size() == 2);
  CHECK(cfg.workloads.at(0).ops[0].adr == 0x30000010);
  CHECK(cfg.workloads.at(0).ops[0].data == 0xDEADBEEF);
  CHECK(cfg.workloads.at(0).ops[1].write == false);
}

TEST_CASE("lut targets must be slave nodes") {
  std::string bad = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
    "lut": {"3": 1},
    "workloads": {"0": {"mode": "scripted", "ops": []}}
  })";
  std::string err = expect_error(bad);
  CHECK(err.find("lut target not a slave") != std::string::npos);
  CHECK(err.find("lut.3") != std::string::npos);
}

TEST_CASE("meshes beyond 16 nodes are rejected") {
  std::string bad = R"({"mesh": {"cols": 5, "rows": 4}})";
  CHECK(expect_error(bad).find("exceeds 16 nodes") != std::string::npos);
}

TEST_CASE("unknown fields are named in the diagnostic") {
  std::string bad = R"({"mesh": {"cols": 2, "rows": 2}, "typo_field": 1})";
  std::string err = expect_error(bad);
  CHECK(err.find("unknown field") != std::string::npos);
  CHECK(err.find("typo_field") != std::string::npos);
}

TEST_CASE("broken JSON reports a parse diagnostic") {
  CHECK(!expect_error("{mesh:").empty());
}

TEST_CASE("workload addresses must resolve through the lut") {
  std::string bad = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
    "lut": {"3": 3},
    "workloads": {"0": {"mode": "scripted", "ops": [{"op": "read", "adr": "0x70000000"}]}}
  })";
  std::string err = expect_error(bad);
  CHECK(err.find("prefix not present in lut") != std::string::npos);
}

TEST_CASE("drop_on_full requires room for one whole packet") {
  std::string bad = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"3": {"role": "slave"}},
    "lut": {"3": 3},
    "router": {"fifo_depth": 4}
  })";
  CHECK(expect_error(bad).find("fifo_depth") != std::string::npos);
}

TEST_CASE("masters need workloads and phases must fit the period") {
  std::string no_wl = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
    "lut": {"3": 3}
  })";
  CHECK(expect_error(no_wl).find("master has no workload") != std::string::npos);

  std::string bad_phase = R"({
    "mesh": {"cols": 1, "rows": 1},
    "nodes": {"0": {"role": "slave", "period_ps": 40000, "phase_ps": 40000}}
  })";
  CHECK(expect_error(bad_phase).find("phase") != std::string::npos);
}

TEST_CASE("random workloads validate their slave sets") {
  std::string bad = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
    "lut": {"3": 3},
    "workloads": {"0": {"mode": "random_uniform", "count": 10, "slaves": [1]}}
  })";
  CHECK(expect_error(bad).find("not a slave") != std::string::npos);

  std::string good = R"({
    "mesh": {"cols": 2, "rows": 2},
    "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
    "lut": {"3": 3},
    "workloads": {"0": {"mode": "random_uniform", "count": 10, "slaves": [3]}},
    "seed": 42
  })";
  SimConfig cfg = parse_config(good);
  CHECK(cfg.workloads.at(0).mode == WorkloadMode::RandomUniform);
  CHECK(cfg.seed == 42);
}
