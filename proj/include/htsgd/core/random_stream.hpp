#pragma once

#include <array>
#include <cstdint>

namespace htsgd {

/// Philox4x32-10 keyed block cipher in counter mode.
///
/// Each block holds four 32-bit words; the stream serves 64-bit draws, two per
/// block. A draw is addressable by its index so any prefix of a run can be
/// replayed without re-running it.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit draws consumed so far.
  std::uint64_t position() const noexcept { return position_; }
  void seek(std::uint64_t position) noexcept { position_ = position; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();
  /// Value that uniform() would return at the given draw index.
  double uniform_at(std::uint64_t position) const;
  /// Fair sign in {-1, +1}; consumes one draw.
  double sign();
  /// Standard normal via Box-Muller; consumes two draws.
  double normal();
  /// Rate-one exponential; consumes one draw.
  double exponential();

  /// Stream with the same seed and a derived id, used for draws that must not
  /// disturb this stream (for instance output selection).
  RandomStream substream(std::uint64_t tag) const;

  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  std::uint64_t block_word(std::uint64_t position) const;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
};

}  // namespace htsgd
