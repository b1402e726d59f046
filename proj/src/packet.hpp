#pragma once
// Wire format. One WISHBONE transaction travels as a fixed 5-flit packet:
//   Head  route.packed
//   Body  return_route.packed
//   Body  adr
//   Body  data
//   Tail  kind(2) | sel(4) | tag(8) | status(1) | fwd_hops(5) | ret_hops(5)
// packed low-to-high in that order, remaining Tail bits zero. Routers read
// only the Head; the hop count rides beside the packed field as link-layer
// metadata consumed together with it.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "topology.hpp"

namespace nocsim {

enum class FlitKind : std::uint8_t { Head, Body, Tail };
const char* flit_kind_name(FlitKind k);

struct Flit {
  FlitKind kind = FlitKind::Body;
  std::uint32_t payload = 0;
  std::uint8_t head_hops = 0;  // meaningful for Head flits only

  bool operator==(const Flit& o) const { return kind == o.kind && payload == o.payload; }
};

enum class TxnKind : std::uint8_t {
  ReadRequest = 0,
  WriteRequest = 1,
  ReadResponse = 2,
  WriteAck = 3,
};
const char* txn_kind_name(TxnKind k);
bool is_request(TxnKind k);

enum class TxnStatus : std::uint8_t { Ok = 0, Err = 1 };

struct TransactionPayload {
  TxnKind kind = TxnKind::ReadRequest;
  std::uint32_t adr = 0;
  std::uint32_t data = 0;  // write data, read data, or zero
  std::uint8_t sel = 0;    // 4-bit byte lane select
  std::uint8_t tag = 0;    // transaction sequence tag; responses echo it
  TxnStatus status = TxnStatus::Ok;

  bool operator==(const TransactionPayload&) const = default;
};

struct Packet {
  SourceRoute route;         // forward route, consumed hop by hop
  SourceRoute return_route;  // carried so the responder can address the reply
  TransactionPayload txn;

  bool operator==(const Packet&) const = default;
};

constexpr std::size_t kFlitsPerPacket = 5;
using FlitArray = std::array<Flit, kFlitsPerPacket>;

FlitArray serialize(const Packet& p);

// Inverse of serialize. Wrong flit count, a broken kind sequence, or an
// oversized hop count is malformed and yields nullopt (dropped + counted at
// the call site).
std::optional<Packet> deserialize(std::span<const Flit> flits);

}  // namespace nocsim
