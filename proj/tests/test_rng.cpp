#include <doctest.h>

#include <set>

#include "brownruin/rng.hpp"

using brownruin::Philox4x32;
using brownruin::PhiloxEngine;

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("engine walks blocks of its own stream") {
  PhiloxEngine e(0x0123456789abcdefull, 7);
  for (std::uint32_t block = 0; block < 3; ++block) {
    const auto want =
        Philox4x32::bijection({block, 0, 7, 0}, {0x89abcdef, 0x01234567});
    for (int i = 0; i < 4; ++i) CHECK(e() == want[i]);
  }
}

TEST_CASE("streams and seeds differ") {
  std::set<std::uint32_t> first;
  for (std::uint64_t s = 0; s < 64; ++s) first.insert(PhiloxEngine(1, s)());
  for (std::uint64_t k = 0; k < 64; ++k) first.insert(PhiloxEngine(k + 2, 0)());
  CHECK(first.size() == 128);
}
