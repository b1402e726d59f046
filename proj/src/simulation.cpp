#include "simulation.hpp"

#include <cstdio>
#include <random>

namespace nocsim {

namespace {

std::string port_name(NodeCoord c, Direction d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "r%d.%d.%s", c.x, c.y, direction_name(d));
  return buf;
}

// Bounded draw that does not depend on std::uniform_int_distribution, whose
// output sequence is not pinned down by the standard.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

Simulation::Simulation(SimConfig cfg, std::function<void(const TraceRecord&)> sink,
                       std::ostream* trace_stream)
    : cfg_(std::move(cfg)) {
  if (sink) tracer_.set_sink(std::move(sink));
  if (trace_stream) tracer_.set_stream(trace_stream);
  validate_config(cfg_);
  build();
}

std::vector<WorkloadOp> Simulation::realize_workload(int node, const WorkloadConfig& wc) const {
  if (wc.mode == WorkloadMode::Scripted) return wc.ops;

  std::uint64_t seed = wc.seed ? wc.seed : cfg_.seed ^ (0x9E3779B97F4A7C15ULL * (node + 1));
  std::mt19937_64 rng(seed);
  // prefix for each target slave
  std::vector<std::uint32_t> prefixes;
  for (int s : wc.slaves)
    for (const auto& [prefix, target] : cfg_.lut)
      if (target == s) {
        prefixes.push_back(static_cast<std::uint32_t>(prefix));
        break;
      }
  std::vector<WorkloadOp> ops;
  ops.reserve(wc.count);
  for (int i = 0; i < wc.count; ++i) {
    WorkloadOp op;
    std::uint32_t prefix = prefixes[draw(rng, prefixes.size())];
    op.write = (rng() & 1) != 0;
    op.adr = (prefix << 28) | (static_cast<std::uint32_t>(draw(rng, 1u << 26)) << 2);
    op.data = static_cast<std::uint32_t>(rng());
    op.sel = 0xF;
    ops.push_back(op);
  }
  return ops;
}

void Simulation::build() {
  const MeshDims dims = cfg_.mesh;
  routers_.resize(dims.node_count());
  for (int i = 0; i < dims.node_count(); ++i)
    routers_[i] = std::make_unique<Router>(sched_, tracer_, coord_of(i, dims), cfg_.router,
                                           &stats_);

  // Inter-router links: one channel per direction per adjacent pair.
  for (int i = 0; i < dims.node_count(); ++i) {
    NodeCoord c = coord_of(i, dims);
    for (Direction d : {Direction::East, Direction::South}) {
      NodeCoord n = neighbor(c, d);
      if (n.x >= dims.cols || n.y >= dims.rows) continue;
      int j = index_of(n, dims);
      Direction back = opposite(d);
      auto fwd = std::make_unique<Channel>(
          sched_, tracer_, "ch." + port_name(c, d) + "--" + port_name(n, back),
          cfg_.router.channel_delay);
      fwd->bind_sink(routers_[j]->input(back));
      routers_[j]->bind_input_channel(back, fwd.get());
      routers_[i]->connect_output(d, fwd.get());
      channels_.push_back(std::move(fwd));
      auto rev = std::make_unique<Channel>(
          sched_, tracer_, "ch." + port_name(n, back) + "--" + port_name(c, d),
          cfg_.router.channel_delay);
      rev->bind_sink(routers_[i]->input(d));
      routers_[i]->bind_input_channel(d, rev.get());
      routers_[j]->connect_output(back, rev.get());
      channels_.push_back(std::move(rev));
    }
  }

  for (int i = 0; i < dims.node_count(); ++i) {
    const NodeConfig& nc = cfg_.nodes[i];
    if (nc.role == NodeRole::Idle) continue;
    ClockDomain domain{"node" + std::to_string(i), nc.period, nc.phase};
    std::string idx = std::to_string(i);

    auto inj = std::make_unique<Channel>(sched_, tracer_,
                                         "ch.na" + idx + ".tx--" + port_name(coord_of(i, dims),
                                                                             Direction::Local),
                                         cfg_.router.channel_delay);
    auto eje = std::make_unique<Channel>(sched_, tracer_,
                                         "ch." + port_name(coord_of(i, dims), Direction::Local) +
                                             "--na" + idx + ".rx",
                                         cfg_.router.channel_delay);
    inj->bind_sink(routers_[i]->input(Direction::Local));
    routers_[i]->bind_input_channel(Direction::Local, inj.get());
    routers_[i]->connect_output(Direction::Local, eje.get());

    if (nc.role == NodeRole::Master) {
      auto node = std::make_unique<MasterNode>();
      node->index = i;
      node->domain = domain;

      RouteLut lut;
      NodeCoord self = coord_of(i, dims);
      for (const auto& [prefix, target] : cfg_.lut) {
        SourceRoute route{};
        if (target != i)
          route = encode_route(compute_route(self, coord_of(target, dims)));
        lut.map(prefix, target, route);
      }

      auto wl = cfg_.workloads.find(i);
      node->core = std::make_unique<MasterCore>(
          sched_, tracer_, i,
          wl != cfg_.workloads.end() ? realize_workload(i, wl->second)
                                     : std::vector<WorkloadOp>{},
          cfg_.flow, &stats_);
      node->na = std::make_unique<MasterNa>(sched_, tracer_, i, dims, domain, lut, inj.get(),
                                            &stats_);
      node->na->bind_rx_channel(eje.get());
      node->checker = std::make_unique<WbChecker>(
          &tracer_, tracer_.register_component("wb" + idx), &stats_);

      MasterCore* core = node->core.get();
      core->attach_na(node->na.get());
      MasterNa::Callbacks cb;
      cb.on_lookup = [core](int slave, int hops) { core->on_na_lookup(slave, hops); };
      cb.on_sent = [core](std::uint8_t tag) { core->on_na_sent(tag); };
      cb.on_response = [core](const TransactionPayload& txn) { return core->on_na_response(txn); };
      cb.on_unmapped = [core] { core->on_na_unmapped(); };
      node->na->set_callbacks(std::move(cb));
      masters_.push_back(std::move(node));
    } else {
      auto node = std::make_unique<SlaveNode>();
      node->index = i;
      node->domain = domain;
      node->mem = std::make_unique<SlaveMemory>(nc.wait_states);
      node->na = std::make_unique<SlaveNa>(sched_, tracer_, i, domain, inj.get(), &stats_);
      node->na->bind_rx_channel(eje.get());
      node->checker = std::make_unique<WbChecker>(
          &tracer_, tracer_.register_component("wb" + idx), &stats_);
      slaves_.push_back(std::move(node));
    }

    channels_.push_back(std::move(inj));
    channels_.push_back(std::move(eje));
  }
}

bool Simulation::drained() const {
  for (const auto& m : masters_)
    if (!m->core->done()) return false;
  return stats_.in_flight() == 0;
}

void Simulation::on_master_edge(MasterNode& n) {
  SimTime t = sched_.now();
  WbSignals snap = n.bus;
  n.checker->observe(t, snap);
  n.core->step(t, snap, n.bus);
  n.na->step(t, snap, n.bus);
  if (!drained())
    sched_.schedule(n.domain.next_edge_after(t), [this, &n] { on_master_edge(n); });
}

void Simulation::on_slave_edge(SlaveNode& n) {
  SimTime t = sched_.now();
  WbSignals snap = n.bus;
  n.checker->observe(t, snap);
  n.na->step(t, snap, n.bus);
  n.mem->step(t, snap, n.bus);
  if (!drained())
    sched_.schedule(n.domain.next_edge_after(t), [this, &n] { on_slave_edge(n); });
}

RunReport Simulation::run() {
  if (ran_) throw ModelBugError("simulation instances are single use");
  ran_ = true;

  for (auto& m : masters_) {
    MasterNode* n = m.get();
    SimTime first = n->domain.phase > 0 ? n->domain.phase : 0;
    sched_.schedule(first, [this, n] { on_master_edge(*n); });
  }
  for (auto& s : slaves_) {
    SlaveNode* n = s.get();
    SimTime first = n->domain.phase > 0 ? n->domain.phase : 0;
    sched_.schedule(first, [this, n] { on_slave_edge(*n); });
  }

  sched_.run_until(cfg_.run_until);

  // Run cut short: settle whatever is still open so accounting stays whole.
  for (auto& m : masters_)
    if (!m->core->done()) m->core->abandon(sched_.now());

  for (int i = 0; i < cfg_.mesh.node_count(); ++i) {
    const RouterCounters& rc = routers_[i]->counters();
    char name[24];
    std::snprintf(name, sizeof(name), "router.%d.%d", routers_[i]->coord().x,
                  routers_[i]->coord().y);
    stats_.add_router(name, {rc.forwarded_packets, rc.drops, rc.malformed});
  }
  for (const auto& m : masters_)
    stats_.add_adapter("na" + std::to_string(m->index) + ".m", m->na->counters());
  for (const auto& s : slaves_)
    stats_.add_adapter("na" + std::to_string(s->index) + ".s", s->na->counters());

  report_ = stats_.finalize(tracer_.hash(), sched_.now());
  return *report_;
}

ExitStatus Simulation::status() const {
  if (!report_) return {ExitStatus::Kind::ConfigError, 0};
  if (report_->ok()) return {ExitStatus::Kind::Ok, 0};
  return {ExitStatus::Kind::RunFailed, report_->failed_txns};
}

Router& Simulation::router_at(int node) { return *routers_.at(node); }

SlaveMemory* Simulation::memory_at(int node) {
  for (const auto& s : slaves_)
    if (s->index == node) return s->mem.get();
  return nullptr;
}

MasterNa* Simulation::master_na_at(int node) {
  for (const auto& m : masters_)
    if (m->index == node) return m->na.get();
  return nullptr;
}

std::pair<RunReport, ExitStatus> run_scenario(const SimConfig& cfg, std::ostream* trace_stream) {
  Simulation sim(cfg, nullptr, trace_stream);
  RunReport rep = sim.run();
  return {rep, sim.status()};
}

}  // namespace nocsim
