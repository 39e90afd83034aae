#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace ssalt {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output block i of stream s under key k is a pure function of (k, s, i),
/// so streams can be handed to parallel workers in any order.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key);
};

/// A reproducible stream of uniforms and normals, addressed by a seed and a
/// path of stream ids (for example {replicate, item}).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Stream for the given seed and id path; equal inputs give equal streams.
  static RandomStream derive(std::uint64_t seed,
                             std::initializer_list<std::uint64_t> path);

  /// Child stream of this one; does not advance this stream.
  RandomStream split(std::uint64_t child) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int buffered_ = 0;  // 64-bit words left in buffer_
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to hash stream-id paths.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ssalt
