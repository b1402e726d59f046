#include "packet.hpp"

namespace nocsim {

const char* flit_kind_name(FlitKind k) {
  switch (k) {
    case FlitKind::Head: return "head";
    case FlitKind::Body: return "body";
    case FlitKind::Tail: return "tail";
  }
  return "?";
}

const char* txn_kind_name(TxnKind k) {
  switch (k) {
    case TxnKind::ReadRequest: return "read-req";
    case TxnKind::WriteRequest: return "write-req";
    case TxnKind::ReadResponse: return "read-resp";
    case TxnKind::WriteAck: return "write-ack";
  }
  return "?";
}

bool is_request(TxnKind k) {
  return k == TxnKind::ReadRequest || k == TxnKind::WriteRequest;
}

FlitArray serialize(const Packet& p) {
  std::uint32_t tail = static_cast<std::uint32_t>(p.txn.kind) |
                       (static_cast<std::uint32_t>(p.txn.sel & 0xFu) << 2) |
                       (static_cast<std::uint32_t>(p.txn.tag) << 6) |
                       (static_cast<std::uint32_t>(p.txn.status) << 14) |
                       (static_cast<std::uint32_t>(p.route.hops & 0x1Fu) << 15) |
                       (static_cast<std::uint32_t>(p.return_route.hops & 0x1Fu) << 20);
  return FlitArray{{
      {FlitKind::Head, p.route.packed, p.route.hops},
      {FlitKind::Body, p.return_route.packed, 0},
      {FlitKind::Body, p.txn.adr, 0},
      {FlitKind::Body, p.txn.data, 0},
      {FlitKind::Tail, tail, 0},
  }};
}

std::optional<Packet> deserialize(std::span<const Flit> flits) {
  if (flits.size() != kFlitsPerPacket) return std::nullopt;
  if (flits[0].kind != FlitKind::Head || flits[4].kind != FlitKind::Tail) return std::nullopt;
  for (int i = 1; i <= 3; ++i)
    if (flits[i].kind != FlitKind::Body) return std::nullopt;

  std::uint32_t tail = flits[4].payload;
  std::uint8_t fwd_hops = (tail >> 15) & 0x1Fu;
  std::uint8_t ret_hops = (tail >> 20) & 0x1Fu;
  if (fwd_hops > kMaxRouteHops || ret_hops > kMaxRouteHops) return std::nullopt;
  if (tail >> 25) return std::nullopt;  // reserved bits must be zero

  Packet p;
  p.route = {flits[0].payload, fwd_hops};
  p.return_route = {flits[1].payload, ret_hops};
  p.txn.adr = flits[2].payload;
  p.txn.data = flits[3].payload;
  p.txn.kind = static_cast<TxnKind>(tail & 0x3u);
  p.txn.sel = static_cast<std::uint8_t>((tail >> 2) & 0xFu);
  p.txn.tag = static_cast<std::uint8_t>((tail >> 6) & 0xFFu);
  p.txn.status = static_cast<TxnStatus>((tail >> 14) & 0x1u);
  return p;
}

}  // namespace nocsim
