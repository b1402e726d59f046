#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "nocsim.h"

namespace {

const char* kConfig = R"({
  "mesh": {"cols": 2, "rows": 2},
  "nodes": {"0": {"role": "master"}, "3": {"role": "slave"}},
  "lut": {"3": 3},
  "workloads": {"0": {"mode": "scripted", "ops": [
    {"op": "write", "adr": "0x30000010", "data": "0xDEADBEEF", "sel": 15},
    {"op": "read", "adr": "0x30000010"}
  ]}},
  "seed": 1
})";

}  // namespace

TEST_CASE("create, run, inspect, destroy") {
  char err[256] = {0};
  nocsim_sim* sim = nocsim_create(kConfig, err, sizeof(err));
  REQUIRE(sim != nullptr);
  CHECK(nocsim_run(sim) == NOCSIM_OK);
  CHECK(nocsim_counter(sim, "transactions_issued") == 2);
  CHECK(nocsim_counter(sim, "transactions_completed") == 2);
  CHECK(nocsim_counter(sim, "transactions_failed") == 0);
  CHECK(nocsim_counter(sim, "packets_injected") == 4);
  CHECK(nocsim_counter(sim, "packets_delivered") == 4);
  CHECK(nocsim_counter(sim, "checker_violations") == 0);
  CHECK(nocsim_counter(sim, "no_such_counter") == 0);
  CHECK(nocsim_trace_hash(sim) != 0);

  char* csv = nocsim_report_csv(sim);
  REQUIRE(csv != nullptr);
  CHECK(std::string(csv).find("txn_id,master,slave,kind") == 0);
  CHECK(std::string(csv).find("completed") != std::string::npos);
  nocsim_string_free(csv);

  char* summary = nocsim_report_summary(sim);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("transactions_completed: 2") != std::string::npos);
  nocsim_string_free(summary);

  nocsim_destroy(sim);
}

TEST_CASE("a bad config yields a null handle and a diagnostic") {
  char err[256] = {0};
  nocsim_sim* sim = nocsim_create(R"({"mesh": {"cols": 5, "rows": 4}})", err, sizeof(err));
  CHECK(sim == nullptr);
  CHECK(std::strstr(err, "exceeds 16 nodes") != nullptr);

  sim = nocsim_create("not json", err, sizeof(err));
  CHECK(sim == nullptr);

  sim = nocsim_create_from_file("/no/such/file.json", err, sizeof(err));
  CHECK(sim == nullptr);
  CHECK(std::strstr(err, "cannot open") != nullptr);
}

TEST_CASE("two instances with the same seed agree bit for bit") {
  auto run_once = [](uint64_t seed) {
    char err[256];
    nocsim_sim* sim = nocsim_create(kConfig, err, sizeof(err));
    REQUIRE(sim != nullptr);
    CHECK(nocsim_override_seed(sim, seed) == NOCSIM_OK);
    CHECK(nocsim_run(sim) == NOCSIM_OK);
    uint64_t hash = nocsim_trace_hash(sim);
    char* csv = nocsim_report_csv(sim);
    std::string text = csv;
    nocsim_string_free(csv);
    nocsim_destroy(sim);
    return std::make_pair(hash, text);
  };
  auto a = run_once(7);
  auto b = run_once(7);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("post-run overrides are rejected; trace capture works when enabled") {
  char err[256];
  nocsim_sim* sim = nocsim_create(kConfig, err, sizeof(err));
  REQUIRE(sim != nullptr);
  CHECK(nocsim_set_trace_enabled(sim, 1) == NOCSIM_OK);
  CHECK(nocsim_run(sim) == NOCSIM_OK);
  CHECK(nocsim_run(sim) == NOCSIM_ERR_INVALID);
  CHECK(nocsim_override_seed(sim, 1) == NOCSIM_ERR_INVALID);

  char* trace = nocsim_trace_text(sim);
  REQUIRE(trace != nullptr);
  std::string t = trace;
  nocsim_string_free(trace);
  CHECK(t.find("state-change") != std::string::npos);
  CHECK(t.find("flit-transfer") != std::string::npos);
  CHECK(t.find("handshake-edge") != std::string::npos);
  CHECK(t.find('\t') != std::string::npos);
  nocsim_destroy(sim);
}

TEST_CASE("a run with failures reports NOCSIM_ERR_RUN_FAILED but still yields results") {
  std::string cfg = kConfig;
  cfg.insert(cfg.rfind('}'), R"(, "run_until_ps": 100000)");
  char err[256];
  nocsim_sim* sim = nocsim_create(cfg.c_str(), err, sizeof(err));
  REQUIRE(sim != nullptr);
  CHECK(nocsim_run(sim) == NOCSIM_ERR_RUN_FAILED);
  CHECK(nocsim_failed_transactions(sim) > 0);
  char* csv = nocsim_report_csv(sim);
  CHECK(csv != nullptr);
  nocsim_string_free(csv);
  nocsim_destroy(sim);
}

TEST_CASE("status names") {
  CHECK(std::string(nocsim_status_name(NOCSIM_OK)) == "ok");
  CHECK(std::string(nocsim_status_name(NOCSIM_ERR_RUN_FAILED)) == "run-failed");
}
