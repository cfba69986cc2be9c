#include "sticky/rng.hpp"

#include <cmath>
#include <numbers>

namespace sticky {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

} // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k)
{
  for (int r = 0; r < 10; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::uint64_t mix64(std::uint64_t x)
{
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
  : seed_(seed)
  , stream_(stream)
{}

void RandomStream::refill()
{
  Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)};
  Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = Philox4x32::block(ctr, key);
  ++block_;
  pos_ = 0;
}

std::uint32_t RandomStream::next_u32()
{
  if (pos_ == 4)
    refill();
  return buf_[pos_++];
}

std::uint64_t RandomStream::next_u64()
{
  std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double RandomStream::uniform()
{
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gaussian()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

void RandomStream::gaussian(Eigen::Ref<Eigen::VectorXd> out)
{
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = gaussian();
}

Eigen::VectorXd RandomStream::gaussian_vector(Eigen::Index d)
{
  Eigen::VectorXd z(d);
  gaussian(z);
  return z;
}

RandomStream RandomStream::substream(std::uint64_t index) const
{
  return RandomStream(seed_, mix64(mix64(stream_) ^ mix64(index + 0x5851F42D4C957F2Dull)));
}

} // namespace sticky
