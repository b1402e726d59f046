#include "topology.hpp"

#include <stdexcept>

namespace nocsim {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::North: return "N";
    case Direction::East: return "E";
    case Direction::South: return "S";
    case Direction::West: return "W";
    case Direction::Local: return "L";
  }
  return "?";
}

Direction opposite(Direction d) {
  if (d == Direction::Local) throw std::invalid_argument("Local has no opposite");
  return static_cast<Direction>(static_cast<std::uint8_t>(d) ^ 2u);
}

NodeCoord coord_of(int node_index, MeshDims dims) {
  if (!dims.valid()) throw std::invalid_argument("invalid mesh dimensions");
  if (node_index < 0 || node_index >= dims.node_count())
    throw std::out_of_range("node index outside mesh");
  return NodeCoord{node_index % dims.cols, node_index / dims.cols};
}

int index_of(NodeCoord c, MeshDims dims) {
  if (c.x < 0 || c.x >= dims.cols || c.y < 0 || c.y >= dims.rows)
    throw std::out_of_range("coordinate outside mesh");
  return c.y * dims.cols + c.x;
}

NodeCoord neighbor(NodeCoord c, Direction d) {
  switch (d) {
    case Direction::North: return {c.x, c.y - 1};
    case Direction::South: return {c.x, c.y + 1};
    case Direction::East: return {c.x + 1, c.y};
    case Direction::West: return {c.x - 1, c.y};
    case Direction::Local: return c;
  }
  return c;
}

std::vector<Direction> compute_route(NodeCoord src, NodeCoord dst) {
  if (src == dst) throw std::invalid_argument("zero-hop route; use local loopback");
  std::vector<Direction> hops;
  int dx = dst.x - src.x;
  int dy = dst.y - src.y;
  for (int i = 0; i < (dx > 0 ? dx : -dx); ++i)
    hops.push_back(dx > 0 ? Direction::East : Direction::West);
  for (int i = 0; i < (dy > 0 ? dy : -dy); ++i)
    hops.push_back(dy > 0 ? Direction::South : Direction::North);
  // Arrival port at the destination router, read there as "deliver locally".
  hops.push_back(opposite(hops.back()));
  return hops;
}

SourceRoute encode_route(const std::vector<Direction>& hops) {
  if (hops.empty()) throw std::invalid_argument("empty route");
  if (hops.size() > kMaxRouteHops) throw std::invalid_argument("route exceeds 16 hops");
  SourceRoute r;
  for (std::size_t k = 0; k < hops.size(); ++k) {
    if (hops[k] == Direction::Local)
      throw std::invalid_argument("route hops must be compass codes");
    r.packed |= static_cast<std::uint32_t>(hops[k]) << (2 * k);
  }
  r.hops = static_cast<std::uint8_t>(hops.size());
  return r;
}

std::optional<NextHop> decode_next_hop(SourceRoute route, Direction arrived_from) {
  if (route.hops == 0) return std::nullopt;
  auto code = static_cast<Direction>(route.packed & 0x3u);
  SourceRoute remaining{route.packed >> 2, static_cast<std::uint8_t>(route.hops - 1)};
  Direction out = code;
  if (arrived_from != Direction::Local && code == arrived_from) out = Direction::Local;
  return NextHop{out, remaining};
}

}  // namespace nocsim
