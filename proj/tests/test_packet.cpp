#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "packet.hpp"

using namespace nocsim;

namespace {

Packet random_packet(std::mt19937_64& rng) {
  Packet p;
  std::size_t fwd = 1 + rng() % 16;
  std::vector<Direction> hops;
  for (std::size_t i = 0; i < fwd; ++i) hops.push_back(static_cast<Direction>(rng() % 4));
  p.route = encode_route(hops);
  if (rng() & 1) {
    std::vector<Direction> back;
    std::size_t ret = 1 + rng() % 16;
    for (std::size_t i = 0; i < ret; ++i) back.push_back(static_cast<Direction>(rng() % 4));
    p.return_route = encode_route(back);
  }
  p.txn.kind = static_cast<TxnKind>(rng() % 4);
  p.txn.adr = static_cast<std::uint32_t>(rng());
  p.txn.data = static_cast<std::uint32_t>(rng());
  p.txn.sel = static_cast<std::uint8_t>(1 + rng() % 15);
  p.txn.tag = static_cast<std::uint8_t>(rng());
  p.txn.status = static_cast<TxnStatus>(rng() % 2);
  return p;
}

}  // namespace

TEST_CASE("packets are always five flits: Head, Body x3, Tail") {
  Packet p;
  p.route = encode_route({Direction::East});
  FlitArray flits = serialize(p);
  CHECK(flits.size() == 5);
  CHECK(flits[0].kind == FlitKind::Head);
  CHECK(flits[1].kind == FlitKind::Body);
  CHECK(flits[2].kind == FlitKind::Body);
  CHECK(flits[3].kind == FlitKind::Body);
  CHECK(flits[4].kind == FlitKind::Tail);
}

TEST_CASE("zero packet with a one-hop East route has Head 0x00000001") {
  Packet p;
  p.route = encode_route({Direction::East});
  FlitArray flits = serialize(p);
  CHECK(flits[0].payload == 0x00000001u);
  CHECK(flits[1].payload == 0);  // empty return route
  CHECK(flits[2].payload == 0);
  CHECK(flits[3].payload == 0);
  // Tail: kind=0 sel=0 tag=0 status=0 fwd_hops=1 ret_hops=0
  CHECK(flits[4].payload == (1u << 15));
}

TEST_CASE("tail field packing, low to high") {
  Packet p;
  p.route = encode_route({Direction::West, Direction::North});
  p.return_route = encode_route({Direction::South});
  p.txn.kind = TxnKind::ReadResponse;  // 2
  p.txn.sel = 0x5;
  p.txn.tag = 0xAB;
  p.txn.status = TxnStatus::Err;
  std::uint32_t tail = serialize(p)[4].payload;
  CHECK((tail & 0x3u) == 2u);
  CHECK(((tail >> 2) & 0xFu) == 0x5u);
  CHECK(((tail >> 6) & 0xFFu) == 0xABu);
  CHECK(((tail >> 14) & 0x1u) == 1u);
  CHECK(((tail >> 15) & 0x1Fu) == 2u);
  CHECK(((tail >> 20) & 0x1Fu) == 1u);
  CHECK((tail >> 25) == 0u);
}

TEST_CASE("serialize/deserialize round trip on random valid packets") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    Packet p = random_packet(rng);
    auto back = deserialize(serialize(p));
    REQUIRE(back);
    CHECK(*back == p);
    // and re-serializing reproduces the identical flit payloads
    CHECK(serialize(*back) == serialize(p));
  }
}

TEST_CASE("malformed flit sequences are rejected") {
  Packet p;
  p.route = encode_route({Direction::East});
  FlitArray flits = serialize(p);

  CHECK(!deserialize(std::span<const Flit>(flits.data(), 4)));  // wrong count

  FlitArray reordered = flits;
  std::swap(reordered[1], reordered[4]);  // Tail before Body
  CHECK(!deserialize(reordered));

  FlitArray two_heads = flits;
  two_heads[1].kind = FlitKind::Head;
  CHECK(!deserialize(two_heads));

  FlitArray bad_count = flits;
  bad_count[4].payload |= 17u << 15;  // forward hop count beyond 16
  CHECK(!deserialize(bad_count));
}
