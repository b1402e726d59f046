#pragma once
// Mesh geometry, 2-bit direction codes, X-first source-route generation,
// and the packed per-hop route field consumed by routers. The terminal hop
// of every route is the code of the destination's arrival port; a router
// that sees its own arrival port requested delivers the packet locally.

#include <cstdint>
#include <optional>
#include <vector>

namespace nocsim {

// Compass codes: N=00, E=01, S=10, W=11. Local has no wire code.
enum class Direction : std::uint8_t { North = 0, East = 1, South = 2, West = 3, Local = 4 };

constexpr int kPortCount = 5;

const char* direction_name(Direction d);
Direction opposite(Direction d);  // compass only

struct MeshDims {
  int cols = 0;
  int rows = 0;
  int node_count() const { return cols * rows; }
  // Node index must fit the 4-bit address prefix.
  bool valid() const { return cols > 0 && rows > 0 && cols * rows <= 16; }
};

struct NodeCoord {
  int x = 0;
  int y = 0;  // grows southward from the top-left origin
  bool operator==(const NodeCoord&) const = default;
};

// node_index = y*cols + x
NodeCoord coord_of(int node_index, MeshDims dims);
int index_of(NodeCoord c, MeshDims dims);
NodeCoord neighbor(NodeCoord c, Direction d);  // no bounds check

struct SourceRoute {
  std::uint32_t packed = 0;  // 2-bit hop codes, least-significant pair first
  std::uint8_t hops = 0;     // valid pairs; pairs beyond hops are zero
  bool operator==(const SourceRoute&) const = default;
};

constexpr int kMaxRouteHops = 16;

// X-first minimal path (all east/west hops, then all north/south), followed
// by one terminator: the code of the port the packet arrives on at the
// destination. Length is |dx|+|dy|+1. Throws std::invalid_argument when
// src == dst (callers use the adapter loopback path instead).
std::vector<Direction> compute_route(NodeCoord src, NodeCoord dst);

// Packs hop k into bit pair k. Throws std::invalid_argument on an empty,
// oversized, or non-compass hop list.
SourceRoute encode_route(const std::vector<Direction>& hops);

struct NextHop {
  Direction out_port;
  SourceRoute remaining;
};

// Consumes the low pair. A compass arrival whose port code equals the pair
// selects the Local output (delivery). hops == 0 is a malformed header and
// yields nullopt (caller drops and counts the packet).
std::optional<NextHop> decode_next_hop(SourceRoute route, Direction arrived_from);

}  // namespace nocsim
