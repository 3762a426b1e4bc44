// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdint>

#include "dyto/rng.hpp"

using dyto::CounterRng;

// Shared test vectors for the counter generator. Any port must reproduce
// these exactly (normals to the last couple of ulps, since they go through
// libm log/cos).
TEST_CASE("counter rng matches sequential SplitMix64") {
  const CounterRng rng(1234567);
  const std::uint64_t expected[] = {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                    4593380528125082431ULL, 16408922859458223821ULL};
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(rng.bits(i) == expected[i]);
}

TEST_CASE("stream derivation vectors") {
  CHECK(CounterRng::derive(7, 0).key() == 236966933211079599ULL);
  CHECK(CounterRng::derive(7, 3).key() == 9858910714224638135ULL);
  CHECK(CounterRng::derive(0, 0).key() == 5197578548964807871ULL);
}

TEST_CASE("uniform and normal vectors") {
  const CounterRng rng(42);
  CHECK(rng.uniform(0) == 0.7415648787718233);
  CHECK(rng.uniform(1) == 0.1599103928769201);
  CHECK(rng.uniform(2) == 0.27860113025513866);
  CHECK(rng.normal(0) == doctest::Approx(0.8822489062222688).epsilon(1e-14));
  CHECK(rng.normal(1) == doctest::Approx(-0.4508498757188601).epsilon(1e-14));
  CHECK(rng.normal(2) == doctest::Approx(0.1883526341159315).epsilon(1e-14));
}

TEST_CASE("below stays in range") {
  const CounterRng rng(9);
  for (std::uint64_t i = 0; i < 1000; ++i) CHECK(rng.below(i, 7) < 7);
}
