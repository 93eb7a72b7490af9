#pragma once

// Randomness abstraction. Every generator decision flows through a
// RandomSource so that (a) streams are portable and reproducible across
// platforms (no std::uniform_* distributions involved) and (b) tests can
// substitute a scripted source that replays a fixed decision sequence.
//
// The `what` tag names the decision being drawn. The PRNG ignores it; the
// scripted source checks it so a drifted decision order fails loudly.

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "cypherforge/types.hpp"

namespace cypherforge {

class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Uniform integer in [0, bound). Contract: bound >= 1.
  virtual std::uint64_t draw(std::uint64_t bound, const char* what) = 0;

  // Uniform double in [0, 1).
  virtual double unit(const char* what) = 0;

  bool chance(double p, const char* what) { return unit(what) < p; }

  std::size_t index(std::size_t n, const char* what) {
    return static_cast<std::size_t>(draw(n, what));
  }

  // Inclusive integer range.
  std::int64_t between(std::int64_t lo, std::int64_t hi, const char* what) {
    if (hi < lo) throw ContractError("between: empty range");
    return lo + static_cast<std::int64_t>(
                    draw(static_cast<std::uint64_t>(hi - lo) + 1, what));
  }
};

// xoshiro256++ seeded via splitmix64. Self-contained so streams are
// bit-identical on every platform.
class Pcg : public RandomSource {
 public:
  explicit Pcg(std::uint64_t seed);

  std::uint64_t draw(std::uint64_t bound, const char* what) override;
  double unit(const char* what) override;

  std::uint64_t next();

 private:
  std::uint64_t s_[4];
};

// Stream for query #index of a campaign seeded with `seed`. Independent of
// worker count and of any queries generated before it.
Pcg stream_for(std::uint64_t seed, std::uint64_t index);

// Thrown by ScriptedRandom when the consumed decision sequence diverges from
// the script (wrong tag, wrong draw form, or exhausted script).
struct ScriptMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

// Replays a fixed list of tagged decisions. Used by trace tests to force a
// specific generation path; the tags double as documentation of the path.
class ScriptedRandom : public RandomSource {
 public:
  struct Step {
    std::string what;
    bool is_unit = false;
    std::uint64_t value = 0;  // draw result
    double u = 0.0;           // unit result
  };

  ScriptedRandom& draw_step(std::string what, std::uint64_t value);
  ScriptedRandom& unit_step(std::string what, double u);

  std::uint64_t draw(std::uint64_t bound, const char* what) override;
  double unit(const char* what) override;

  bool exhausted() const { return script_.empty(); }
  std::size_t consumed() const { return consumed_; }

 private:
  std::deque<Step> script_;
  std::size_t consumed_ = 0;
};

}  // namespace cypherforge
