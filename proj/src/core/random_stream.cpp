#include "htsgd/core/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace htsgd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = std::uint64_t(a) * std::uint64_t(b);
  hi = std::uint32_t(prod >> 32);
  lo = std::uint32_t(prod);
}

// splitmix64 finalizer, used only to derive substream ids
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> RandomStream::philox(std::array<std::uint32_t, 4> c,
                                                  std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

std::uint64_t RandomStream::block_word(std::uint64_t position) const {
  const std::uint64_t block = position >> 1;
  const std::array<std::uint32_t, 4> ctr = {std::uint32_t(block), std::uint32_t(block >> 32),
                                            std::uint32_t(stream_id_),
                                            std::uint32_t(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)};
  const auto out = philox(ctr, key);
  const std::size_t w = (position & 1u) ? 2 : 0;
  return (std::uint64_t(out[w + 1]) << 32) | out[w];
}

std::uint64_t RandomStream::next_u64() { return block_word(position_++); }

double RandomStream::uniform_at(std::uint64_t position) const {
  // (2k + 1) / 2^53 for a 52-bit k: exact in double and never 0 or 1
  return double(block_word(position) >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

double RandomStream::uniform() { return uniform_at(position_++); }

double RandomStream::sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

double RandomStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::exponential() { return -std::log(uniform()); }

RandomStream RandomStream::substream(std::uint64_t tag) const {
  return RandomStream(seed_, mix64(stream_id_ ^ mix64(tag + 0x5851F42D4C957F2Dull)));
}

}  // namespace htsgd
