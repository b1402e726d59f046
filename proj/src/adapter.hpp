#pragma once
// Master and slave network adapters. Each NA splits into a synchronous core
// interface (the transmit/receive controllers below, stepped once per node
// clock edge) and an asynchronous network interface (flit transmitter and
// receiver driving 4-phase channels). The two levels that cross back from
// the asynchronous side — transmitter ack and receiver req — pass through
// two-flop synchronizers; nothing else crosses the boundary.
//
// Master transmit controller: Wait -> StorePacket -> RouteLookup -> Req ->
// Ack -> Wait, one cycle each in StorePacket and RouteLookup. Receive and
// slave controllers run the same cycle without RouteLookup.

#include <array>
#include <deque>
#include <functional>
#include <optional>
#include <string>

#include "channel.hpp"
#include "kernel.hpp"
#include "packet.hpp"
#include "stats.hpp"
#include "topology.hpp"
#include "wishbone.hpp"

namespace nocsim {

enum class NaFsmState : std::uint8_t { Wait, StorePacket, RouteLookup, Req, Ack };
const char* na_state_name(NaFsmState s);

struct RouteLutEntry {
  int node = -1;
  SourceRoute route;  // precomputed so the lookup fits one clock cycle
};

// 16 entries indexed by the top 4 bits of the WISHBONE address.
class RouteLut {
 public:
  void map(int prefix, int node, SourceRoute route);
  const std::optional<RouteLutEntry>& lookup(std::uint32_t adr) const {
    return entries_[adr >> 28];
  }

 private:
  std::array<std::optional<RouteLutEntry>, 16> entries_;
};

// Asynchronous side of an NA output: streams a 5-flit packet over the
// channel, one handshake per flit, then raises ack until req drops.
class AsyncTransmitter {
 public:
  explicit AsyncTransmitter(Channel* ch);

  void load(const FlitArray& flits) { flits_ = flits; }
  void set_req(bool level);  // controller output; the async side reacts now
  bool ack_level() const { return ack_; }

  std::function<void(bool)> on_ack_change;  // wired into a SyncSignal
  std::function<void()> on_stream_start;    // packet-injection accounting

 private:
  void advance();

  Channel* ch_;
  FlitArray flits_{};
  std::size_t next_ = 0;
  bool req_ = false;
  bool ack_ = false;
  bool active_ = false;
};

// Asynchronous side of an NA input: reassembles 5 flits into the single
// packet buffer, raises req, and stalls the channel until the controller
// has consumed the buffer. Broken kind sequences are discarded and counted.
class AsyncReceiver : public FlitSink {
 public:
  void bind_channel(Channel* ch) { ch_ = ch; }

  bool offer(const Flit& f) override;
  void inject(const FlitArray& flits);  // loopback path, no channel involved

  bool req_level() const { return req_; }
  const FlitArray& packet() const { return buf_; }
  void set_ack(bool level);  // controller output

  std::function<void(bool)> on_req_change;  // wired into a SyncSignal
  std::function<void()> on_packet;          // packet-delivery accounting
  std::uint64_t malformed_flits = 0;

 private:
  void raise();

  FlitArray buf_{};
  std::size_t fill_ = 0;
  bool full_ = false;
  bool req_ = false;
  bool ack_ = false;
  Channel* ch_ = nullptr;
  bool stalled_ = false;
  std::deque<FlitArray> injected_;
};

class SlaveNa;

// Bridges a WISHBONE master core onto the network: transmit controller
// (Fig-4 cycle), receive controller, route lookup table, async units, and
// the pair of boundary synchronizers.
class MasterNa {
 public:
  struct Callbacks {
    std::function<void(int slave_node, int hops)> on_lookup;
    std::function<void(std::uint8_t tag)> on_sent;
    std::function<FlowAction(const TransactionPayload&)> on_response;
    std::function<void()> on_unmapped;
  };

  MasterNa(Scheduler& sched, Tracer& tracer, int node_index, MeshDims dims, ClockDomain domain,
           RouteLut lut, Channel* tx_ch, Stats* stats);

  FlitSink* rx_sink() { return &receiver_; }
  void bind_rx_channel(Channel* ch);
  void set_callbacks(Callbacks cb) { cb_ = std::move(cb); }
  void set_loopback_peer(SlaveNa* peer) { loopback_peer_ = peer; }

  void request_retransmit();
  void abort_transaction();
  void deliver_response(const FlitArray& flits) { receiver_.inject(flits); }

  void step(SimTime t, const WbSignals& snap, WbSignals& drive);

  NaFsmState tx_state() const { return tx_state_; }
  NaFsmState rx_state() const { return rx_state_; }
  bool transaction_open() const { return in_flight_; }
  const AdapterCounters& counters() const { return counters_; }

 private:
  void tx_step(SimTime t, const WbSignals& snap);
  void rx_step(SimTime t, WbSignals& drive);
  void tx_enter(NaFsmState s, SimTime t);
  void rx_enter(NaFsmState s, SimTime t);
  void do_route_lookup();

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId tx_id_;
  ComponentId rx_id_;
  int node_;
  MeshDims dims_;
  ClockDomain domain_;
  RouteLut lut_;
  Stats* stats_;
  Callbacks cb_;
  SlaveNa* loopback_peer_ = nullptr;
  AdapterCounters counters_;

  AsyncTransmitter tx_;
  AsyncReceiver receiver_;
  SyncSignal tx_ack_sync_;
  SyncSignal rx_req_sync_;

  // transmit controller
  NaFsmState tx_state_ = NaFsmState::Wait;
  struct {
    std::uint32_t adr = 0;
    std::uint32_t dat_w = 0;
    std::uint8_t sel = 0;
    bool we = false;
  } latched_;
  FlitArray tx_flits_{};
  std::uint8_t tag_seq_ = 0;
  std::uint8_t tag_ = 0;
  bool in_flight_ = false;
  bool fresh_ = false;
  bool prev_stb_ = false;
  bool retransmit_pending_ = false;
  bool lookup_failed_ = false;
  bool loopback_ = false;

  // receive controller
  NaFsmState rx_state_ = NaFsmState::Wait;
  FlitArray rx_flits_{};
  bool ack_pulse_ = false;
};

class SlaveMemory;

// Bridges the network onto a WISHBONE slave core: the receive controller
// reassembles a request and drives one compliant master cycle into the
// core; the transmit controller streams the response along the request's
// embedded return route with the same tag. One request in flight.
class SlaveNa {
 public:
  SlaveNa(Scheduler& sched, Tracer& tracer, int node_index, ClockDomain domain, Channel* tx_ch,
          Stats* stats);

  FlitSink* rx_sink() { return &receiver_; }
  void bind_rx_channel(Channel* ch);
  void set_loopback_peer(MasterNa* peer) { loopback_peer_ = peer; }
  void deliver_request(const FlitArray& flits) { receiver_.inject(flits); }

  void step(SimTime t, const WbSignals& snap, WbSignals& drive);

  NaFsmState rx_state() const { return rx_state_; }
  NaFsmState tx_state() const { return tx_state_; }
  const AdapterCounters& counters() const { return counters_; }

 private:
  void rx_step(SimTime t, const WbSignals& snap, WbSignals& drive);
  void tx_step(SimTime t);
  void rx_enter(NaFsmState s, SimTime t);
  void tx_enter(NaFsmState s, SimTime t);

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId rx_id_;
  ComponentId tx_id_;
  int node_;
  ClockDomain domain_;
  Stats* stats_;
  MasterNa* loopback_peer_ = nullptr;
  AdapterCounters counters_;

  AsyncTransmitter tx_;
  AsyncReceiver receiver_;
  SyncSignal tx_ack_sync_;
  SyncSignal rx_req_sync_;

  NaFsmState rx_state_ = NaFsmState::Wait;
  NaFsmState tx_state_ = NaFsmState::Wait;
  std::optional<Packet> request_;
  bool bus_driven_ = false;
  bool handoff_wait_ = false;
  Packet response_{};
  bool tx_pending_ = false;
  Packet tx_packet_{};
};

}  // namespace nocsim
