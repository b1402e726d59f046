#include "config.hpp"

#include <json.hpp>

namespace nocsim {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown field '" + it.key() + "'");
  }
}

std::uint64_t get_u64(const json& obj, const std::string& where, const char* key,
                      std::uint64_t def, bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(where, std::string("missing field '") + key + "'");
    return def;
  }
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    auto s = v.get<std::int64_t>();
    if (s < 0) fail(where + "." + key, "value must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    try {
      return std::stoull(s, nullptr, 0);  // accepts 0x...
    } catch (const std::exception&) {
      fail(where + "." + key, "unparseable number '" + s + "'");
    }
  }
  fail(where + "." + key, "expected a number");
}

int parse_index(const std::string& key, const std::string& where, int limit) {
  int idx = -1;
  try {
    std::size_t pos = 0;
    idx = std::stoi(key, &pos, 10);
    if (pos != key.size()) idx = -1;
  } catch (const std::exception&) {
    idx = -1;
  }
  if (idx < 0 || idx >= limit) fail(where, "bad index '" + key + "'");
  return idx;
}

WorkloadOp parse_op(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  check_keys(j, where, {"op", "adr", "data", "sel"});
  if (!j.contains("op")) fail(where, "missing field 'op'");
  std::string op = j.at("op").get<std::string>();
  WorkloadOp w;
  if (op == "write")
    w.write = true;
  else if (op == "read")
    w.write = false;
  else
    fail(where + ".op", "expected 'read' or 'write'");
  w.adr = static_cast<std::uint32_t>(get_u64(j, where, "adr", 0, true));
  w.data = static_cast<std::uint32_t>(get_u64(j, where, "data", 0));
  w.sel = static_cast<std::uint8_t>(get_u64(j, where, "sel", 0xF));
  if (w.sel == 0 || w.sel > 0xF) fail(where + ".sel", "byte select must be 1..15");
  return w;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "config",
             {"mesh", "nodes", "lut", "router", "flow_control", "workloads", "run_until_ps",
              "seed"});

  SimConfig cfg;

  if (!root.contains("mesh")) throw ConfigError("config: missing field 'mesh'");
  const json& mesh = root.at("mesh");
  check_keys(mesh, "mesh", {"cols", "rows"});
  cfg.mesh.cols = static_cast<int>(get_u64(mesh, "mesh", "cols", 0, true));
  cfg.mesh.rows = static_cast<int>(get_u64(mesh, "mesh", "rows", 0, true));
  if (cfg.mesh.cols < 1 || cfg.mesh.rows < 1) fail("mesh", "cols and rows must be positive");
  if (cfg.mesh.node_count() > 16)
    fail("mesh", "mesh exceeds 16 nodes (node index must fit a 4-bit prefix)");

  cfg.nodes.assign(cfg.mesh.node_count(), NodeConfig{});

  if (root.contains("nodes")) {
    const json& nodes = root.at("nodes");
    if (!nodes.is_object()) fail("nodes", "expected an object keyed by node index");
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
      int idx = parse_index(it.key(), "nodes", cfg.mesh.node_count());
      std::string where = "nodes." + it.key();
      const json& n = it.value();
      check_keys(n, where, {"role", "period_ps", "phase_ps", "wait_states"});
      NodeConfig nc;
      std::string role = n.value("role", "idle");
      if (role == "master")
        nc.role = NodeRole::Master;
      else if (role == "slave")
        nc.role = NodeRole::Slave;
      else if (role == "idle")
        nc.role = NodeRole::Idle;
      else
        fail(where + ".role", "expected master|slave|idle");
      nc.period = get_u64(n, where, "period_ps", 40000);
      nc.phase = get_u64(n, where, "phase_ps", 0);
      nc.wait_states = static_cast<int>(get_u64(n, where, "wait_states", 0));
      if (nc.period == 0) fail(where + ".period_ps", "period must be positive");
      if (nc.phase >= nc.period) fail(where + ".phase_ps", "phase must be below the period");
      cfg.nodes[idx] = nc;
    }
  }

  if (root.contains("lut")) {
    const json& lut = root.at("lut");
    if (!lut.is_object()) fail("lut", "expected an object keyed by address prefix");
    for (auto it = lut.begin(); it != lut.end(); ++it) {
      int prefix = parse_index(it.key(), "lut", 16);
      const json& v = it.value();
      if (!v.is_number_integer() && !v.is_number_unsigned())
        fail("lut." + it.key(), "expected a node index");
      cfg.lut[prefix] = v.get<int>();
    }
  }

  if (root.contains("router")) {
    const json& r = root.at("router");
    check_keys(r, "router", {"fifo_depth", "channel_delay_ps", "drop_policy"});
    cfg.router.fifo_depth = static_cast<int>(get_u64(r, "router", "fifo_depth", 8));
    cfg.router.channel_delay = get_u64(r, "router", "channel_delay_ps", 1000);
    std::string policy = r.value("drop_policy", "drop_on_full");
    if (policy == "drop_on_full")
      cfg.router.drop_policy = DropPolicy::DropOnFull;
    else if (policy == "backpressure")
      cfg.router.drop_policy = DropPolicy::Backpressure;
    else
      fail("router.drop_policy", "expected drop_on_full|backpressure");
  }

  if (root.contains("flow_control")) {
    const json& f = root.at("flow_control");
    check_keys(f, "flow_control", {"timeout_ps", "max_retries"});
    cfg.flow.timeout = get_u64(f, "flow_control", "timeout_ps", 1'000'000);
    cfg.flow.max_retries = static_cast<int>(get_u64(f, "flow_control", "max_retries", 8));
  }

  if (root.contains("workloads")) {
    const json& wl = root.at("workloads");
    if (!wl.is_object()) fail("workloads", "expected an object keyed by master node index");
    for (auto it = wl.begin(); it != wl.end(); ++it) {
      int idx = parse_index(it.key(), "workloads", cfg.mesh.node_count());
      std::string where = "workloads." + it.key();
      const json& w = it.value();
      check_keys(w, where, {"mode", "ops", "count", "seed", "slaves"});
      WorkloadConfig wc;
      std::string mode = w.value("mode", "scripted");
      if (mode == "scripted") {
        wc.mode = WorkloadMode::Scripted;
        if (!w.contains("ops")) fail(where, "scripted workload needs 'ops'");
        const json& ops = w.at("ops");
        if (!ops.is_array()) fail(where + ".ops", "expected an array");
        for (std::size_t i = 0; i < ops.size(); ++i)
          wc.ops.push_back(parse_op(ops[i], where + ".ops[" + std::to_string(i) + "]"));
      } else if (mode == "random_uniform") {
        wc.mode = WorkloadMode::RandomUniform;
        wc.count = static_cast<int>(get_u64(w, where, "count", 0, true));
        wc.seed = get_u64(w, where, "seed", 0);
        if (!w.contains("slaves")) fail(where, "random workload needs 'slaves'");
        const json& slaves = w.at("slaves");
        if (!slaves.is_array() || slaves.empty())
          fail(where + ".slaves", "expected a non-empty array");
        for (const auto& s : slaves) wc.slaves.push_back(s.get<int>());
      } else {
        fail(where + ".mode", "expected scripted|random_uniform");
      }
      cfg.workloads[idx] = wc;
    }
  }

  cfg.run_until = get_u64(root, "config", "run_until_ps", cfg.run_until);
  cfg.seed = get_u64(root, "config", "seed", 0);

  validate_config(cfg);
  return cfg;
}

void validate_config(const SimConfig& cfg) {
  if (!cfg.mesh.valid()) throw ConfigError("mesh: invalid dimensions");
  if (static_cast<int>(cfg.nodes.size()) != cfg.mesh.node_count())
    throw ConfigError("nodes: entry count must match the mesh");
  if (cfg.router.fifo_depth < 1) throw ConfigError("router.fifo_depth: must be positive");
  if (cfg.router.drop_policy == DropPolicy::DropOnFull &&
      cfg.router.fifo_depth < static_cast<int>(kFlitsPerPacket))
    throw ConfigError("router.fifo_depth: drop_on_full needs at least 5 flits (one packet)");
  if (cfg.router.channel_delay < 1)
    throw ConfigError("router.channel_delay_ps: must be positive");
  if (cfg.flow.timeout < 1) throw ConfigError("flow_control.timeout_ps: must be positive");
  if (cfg.flow.max_retries < 0) throw ConfigError("flow_control.max_retries: must be >= 0");
  if (cfg.run_until < 1) throw ConfigError("run_until_ps: must be positive");

  for (const auto& [prefix, node] : cfg.lut) {
    std::string where = "lut." + std::to_string(prefix);
    if (node < 0 || node >= cfg.mesh.node_count())
      throw ConfigError(where + ": target node outside the mesh");
    if (cfg.nodes[node].role != NodeRole::Slave)
      throw ConfigError(where + ": lut target not a slave");
  }

  for (const auto& [idx, wl] : cfg.workloads) {
    std::string where = "workloads." + std::to_string(idx);
    if (idx < 0 || idx >= cfg.mesh.node_count())
      throw ConfigError(where + ": node outside the mesh");
    if (cfg.nodes[idx].role != NodeRole::Master)
      throw ConfigError(where + ": workload assigned to a non-master node");
    if (wl.mode == WorkloadMode::Scripted) {
      for (std::size_t i = 0; i < wl.ops.size(); ++i) {
        int prefix = static_cast<int>(wl.ops[i].adr >> 28);
        if (!cfg.lut.count(prefix))
          throw ConfigError(where + ".ops[" + std::to_string(i) +
                            "]: address prefix not present in lut");
      }
    } else {
      for (int s : wl.slaves) {
        if (s < 0 || s >= cfg.mesh.node_count())
          throw ConfigError(where + ".slaves: node outside the mesh");
        if (cfg.nodes[s].role != NodeRole::Slave)
          throw ConfigError(where + ".slaves: target not a slave");
        bool mapped = false;
        for (const auto& [prefix, node] : cfg.lut)
          if (node == s) mapped = true;
        if (!mapped)
          throw ConfigError(where + ".slaves: slave " + std::to_string(s) + " has no lut prefix");
      }
    }
  }

  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    if (cfg.nodes[i].role == NodeRole::Master && !cfg.workloads.count(static_cast<int>(i)))
      throw ConfigError("nodes." + std::to_string(i) + ": master has no workload");
  }
}

}  // namespace nocsim
