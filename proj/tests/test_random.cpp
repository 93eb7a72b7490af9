#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "cypherforge/random.hpp"

using namespace cypherforge;

TEST_CASE("pcg streams are deterministic per seed") {
  Pcg a(42), b(42), c(43);
  std::vector<std::uint64_t> sa, sb, sc;
  for (int i = 0; i < 64; ++i) {
    sa.push_back(a.next());
    sb.push_back(b.next());
    sc.push_back(c.next());
  }
  CHECK(sa == sb);
  CHECK(sa != sc);
}

TEST_CASE("draw respects its bound") {
  Pcg rng(7);
  for (int bound = 1; bound <= 17; ++bound)
    for (int i = 0; i < 200; ++i)
      CHECK(rng.draw(static_cast<std::uint64_t>(bound), "t") <
            static_cast<std::uint64_t>(bound));
  CHECK_THROWS_AS(rng.draw(0, "t"), ContractError);
}

TEST_CASE("draw covers small ranges") {
  Pcg rng(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(rng.draw(4, "t"));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3});
}

TEST_CASE("unit stays in [0,1)") {
  Pcg rng(3);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 2000; ++i) {
    double u = rng.unit("t");
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // The stream actually spreads across the interval.
  CHECK(lo < 0.05);
  CHECK(hi > 0.95);
}

TEST_CASE("derived helpers route through draw and unit") {
  ScriptedRandom s;
  s.unit_step("coin", 0.29)
      .unit_step("coin", 0.31)
      .draw_step("pick", 2)
      .draw_step("span", 2);
  CHECK(s.chance(0.3, "coin"));
  CHECK_FALSE(s.chance(0.3, "coin"));
  CHECK(s.index(5, "pick") == 2);
  CHECK(s.between(5, 9, "span") == 7);
  CHECK(s.exhausted());
  CHECK(s.consumed() == 4);
}

TEST_CASE("between rejects an empty range") {
  Pcg rng(5);
  CHECK(rng.between(3, 3, "t") == 3);
  CHECK_THROWS_AS(rng.between(4, 3, "t"), ContractError);
}

TEST_CASE("stream_for gives independent per-index streams") {
  Pcg a0 = stream_for(42, 0);
  Pcg a0_again = stream_for(42, 0);
  Pcg a1 = stream_for(42, 1);
  Pcg b0 = stream_for(43, 0);
  std::vector<std::uint64_t> s0, s0x, s1, t0;
  for (int i = 0; i < 32; ++i) {
    s0.push_back(a0.next());
    s0x.push_back(a0_again.next());
    s1.push_back(a1.next());
    t0.push_back(b0.next());
  }
  CHECK(s0 == s0x);
  CHECK(s0 != s1);
  CHECK(s0 != t0);
}

TEST_CASE("scripted random replays its steps in order") {
  ScriptedRandom s;
  s.draw_step("a", 1).unit_step("b", 0.5).draw_step("a", 0);
  CHECK(s.draw(3, "a") == 1);
  CHECK(s.unit("b") == doctest::Approx(0.5));
  CHECK_FALSE(s.exhausted());
  CHECK(s.draw(1, "a") == 0);
  CHECK(s.exhausted());
}

TEST_CASE("scripted random fails loudly on drift") {
  SUBCASE("wrong tag") {
    ScriptedRandom s;
    s.draw_step("expected-tag", 0);
    try {
      s.draw(2, "other-tag");
      FAIL("expected ScriptMismatch");
    } catch (const ScriptMismatch& e) {
      std::string msg = e.what();
      CHECK(msg.find("expected-tag") != std::string::npos);
      CHECK(msg.find("other-tag") != std::string::npos);
    }
  }
  SUBCASE("wrong form") {
    ScriptedRandom s;
    s.unit_step("t", 0.5);
    CHECK_THROWS_AS(s.draw(2, "t"), ScriptMismatch);
  }
  SUBCASE("value out of bound") {
    ScriptedRandom s;
    s.draw_step("t", 5);
    CHECK_THROWS_AS(s.draw(3, "t"), ScriptMismatch);
  }
  SUBCASE("exhausted") {
    ScriptedRandom s;
    CHECK_THROWS_AS(s.draw(2, "t"), ScriptMismatch);
    CHECK_THROWS_AS(s.unit("t"), ScriptMismatch);
  }
}
