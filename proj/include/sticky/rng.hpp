#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace sticky {

//! Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32
{
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key);
};

//! Counter-based stream keyed by (seed, stream id). Draw k of a stream is a
//! pure function of (seed, stream, k), so streams can be handed to threads
//! in any order without changing results.
class RandomStream
{
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  //! Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  void gaussian(Eigen::Ref<Eigen::VectorXd> out);
  Eigen::VectorXd gaussian_vector(Eigen::Index d);

  //! Independent child stream; children of distinct indices never overlap.
  RandomStream substream(std::uint64_t index) const;

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

} // namespace sticky
