#include "cypherforge/random.hpp"

namespace cypherforge {

static std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

static std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

Pcg::Pcg(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Pcg::next() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Pcg::draw(std::uint64_t bound, const char*) {
  if (bound == 0) throw ContractError("draw: bound must be >= 1");
  // Multiply-shift bounded mapping: deterministic and nearly unbiased.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next()) * bound) >> 64);
}

double Pcg::unit(const char*) {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Pcg stream_for(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed;
  std::uint64_t a = splitmix64(x);
  x ^= index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
  std::uint64_t b = splitmix64(x);
  return Pcg(a ^ rotl(b, 29));
}

ScriptedRandom& ScriptedRandom::draw_step(std::string what,
                                          std::uint64_t value) {
  script_.push_back({std::move(what), false, value, 0.0});
  return *this;
}

ScriptedRandom& ScriptedRandom::unit_step(std::string what, double u) {
  script_.push_back({std::move(what), true, 0, u});
  return *this;
}

std::uint64_t ScriptedRandom::draw(std::uint64_t bound, const char* what) {
  if (script_.empty())
    throw ScriptMismatch("script exhausted at draw(" + std::string(what) +
                         ") after " + std::to_string(consumed_) + " steps");
  Step step = script_.front();
  if (step.is_unit || step.what != what)
    throw ScriptMismatch("script step " + std::to_string(consumed_) +
                         " expects " + (step.is_unit ? "unit(" : "draw(") +
                         step.what + ") but generator asked draw(" + what +
                         ")");
  if (step.value >= bound)
    throw ScriptMismatch("script step " + std::to_string(consumed_) + " (" +
                         step.what + ") value " + std::to_string(step.value) +
                         " out of bound " + std::to_string(bound));
  script_.pop_front();
  ++consumed_;
  return step.value;
}

double ScriptedRandom::unit(const char* what) {
  if (script_.empty())
    throw ScriptMismatch("script exhausted at unit(" + std::string(what) +
                         ") after " + std::to_string(consumed_) + " steps");
  Step step = script_.front();
  if (!step.is_unit || step.what != what)
    throw ScriptMismatch("script step " + std::to_string(consumed_) +
                         " expects " + (step.is_unit ? "unit(" : "draw(") +
                         step.what + ") but generator asked unit(" + what +
                         ")");
  script_.pop_front();
  ++consumed_;
  return step.u;
}

}  // namespace cypherforge
