#include "nocsim.h"

#include <cstdlib>
#include <memory>
#include <cstring>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "simulation.hpp"

using nocsim::ConfigError;
using nocsim::RunReport;
using nocsim::SimConfig;

struct nocsim_sim {
  SimConfig cfg;
  bool trace_enabled = false;
  bool ran = false;
  RunReport report;
  nocsim::ExitStatus exit{};
  std::string trace_text;
  std::string last_error;
};

namespace {

void write_err(char* errbuf, size_t len, const std::string& msg) {
  if (!errbuf || len == 0) return;
  std::strncpy(errbuf, msg.c_str(), len - 1);
  errbuf[len - 1] = '\0';
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

nocsim_sim* nocsim_create(const char* config_json, char* errbuf, size_t errbuf_len) {
  if (!config_json) {
    write_err(errbuf, errbuf_len, "config text is null");
    return nullptr;
  }
  try {
    auto sim = std::make_unique<nocsim_sim>();
    sim->cfg = nocsim::parse_config(config_json);
    return sim.release();
  } catch (const ConfigError& e) {
    write_err(errbuf, errbuf_len, e.what());
  } catch (const std::exception& e) {
    write_err(errbuf, errbuf_len, std::string("internal: ") + e.what());
  }
  return nullptr;
}

nocsim_sim* nocsim_create_from_file(const char* path, char* errbuf, size_t errbuf_len) {
  if (!path) {
    write_err(errbuf, errbuf_len, "path is null");
    return nullptr;
  }
  std::ifstream in(path);
  if (!in) {
    write_err(errbuf, errbuf_len, std::string("cannot open ") + path);
    return nullptr;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return nocsim_create(ss.str().c_str(), errbuf, errbuf_len);
}

void nocsim_destroy(nocsim_sim* sim) { delete sim; }

nocsim_status nocsim_override_seed(nocsim_sim* sim, uint64_t seed) {
  if (!sim || sim->ran) return NOCSIM_ERR_INVALID;
  sim->cfg.seed = seed;
  return NOCSIM_OK;
}

nocsim_status nocsim_override_run_until(nocsim_sim* sim, uint64_t ps) {
  if (!sim || sim->ran || ps == 0) return NOCSIM_ERR_INVALID;
  sim->cfg.run_until = ps;
  return NOCSIM_OK;
}

nocsim_status nocsim_set_trace_enabled(nocsim_sim* sim, int enabled) {
  if (!sim || sim->ran) return NOCSIM_ERR_INVALID;
  sim->trace_enabled = enabled != 0;
  return NOCSIM_OK;
}

nocsim_status nocsim_run(nocsim_sim* sim) {
  if (!sim || sim->ran) return NOCSIM_ERR_INVALID;
  try {
    std::ostringstream trace;
    auto [report, status] = nocsim::run_scenario(sim->cfg, sim->trace_enabled ? &trace : nullptr);
    sim->report = std::move(report);
    sim->exit = status;
    sim->trace_text = trace.str();
    sim->ran = true;
    return sim->exit.kind == nocsim::ExitStatus::Kind::Ok ? NOCSIM_OK : NOCSIM_ERR_RUN_FAILED;
  } catch (const ConfigError& e) {
    sim->last_error = e.what();
    return NOCSIM_ERR_CONFIG;
  } catch (const std::exception& e) {
    sim->last_error = e.what();
    return NOCSIM_ERR_INTERNAL;
  }
}

uint64_t nocsim_trace_hash(const nocsim_sim* sim) {
  return sim && sim->ran ? sim->report.trace_hash : 0;
}

uint64_t nocsim_failed_transactions(const nocsim_sim* sim) {
  return sim && sim->ran ? sim->report.failed_txns : 0;
}

uint64_t nocsim_counter(const nocsim_sim* sim, const char* name) {
  if (!sim || !sim->ran || !name) return 0;
  const RunReport& r = sim->report;
  std::string n = name;
  if (n == "transactions_issued") return r.txns.size();
  if (n == "transactions_completed") return r.completed_txns;
  if (n == "transactions_failed") return r.failed_txns;
  if (n == "packets_injected") return r.injected;
  if (n == "packets_delivered") return r.delivered;
  if (n == "packets_dropped") return r.drops;
  if (n == "packets_discarded_malformed") return r.malformed_drops;
  if (n == "retransmits") return r.retransmits;
  if (n == "stale_responses") return r.stale_responses;
  if (n == "spurious_responses") return r.spurious_responses;
  if (n == "checker_violations") return r.violations;
  if (n == "mean_latency_ps") return r.mean_latency;
  if (n == "median_latency_ps") return r.median_latency;
  if (n == "max_latency_ps") return r.max_latency;
  if (n == "end_time_ps") return r.end_time;
  return 0;
}

char* nocsim_report_csv(const nocsim_sim* sim) {
  if (!sim || !sim->ran) return nullptr;
  return dup_string(sim->report.to_csv());
}

char* nocsim_report_summary(const nocsim_sim* sim) {
  if (!sim || !sim->ran) return nullptr;
  return dup_string(sim->report.summary());
}

char* nocsim_trace_text(const nocsim_sim* sim) {
  if (!sim || !sim->ran) return nullptr;
  return dup_string(sim->trace_text);
}

void nocsim_string_free(char* s) { std::free(s); }

const char* nocsim_last_error(const nocsim_sim* sim) {
  return sim ? sim->last_error.c_str() : "";
}

const char* nocsim_status_name(nocsim_status status) {
  switch (status) {
    case NOCSIM_OK: return "ok";
    case NOCSIM_ERR_CONFIG: return "config-error";
    case NOCSIM_ERR_RUN_FAILED: return "run-failed";
    case NOCSIM_ERR_INVALID: return "invalid";
    case NOCSIM_ERR_IO: return "io-error";
    case NOCSIM_ERR_INTERNAL: return "internal-error";
  }
  return "?";
}

}  // extern "C"
