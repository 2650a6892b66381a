#include "hrcn/rng.hpp"

#include <cmath>

namespace hrcn {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + kGamma + (h << 6) + (h >> 2)));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : state_(mix64(seed + kGamma)), origin_(seed) {}

RngStream RngStream::fork(std::string_view label, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) const {
  std::uint64_t h = origin_;
  for (char ch : label) h = hash_combine(h, static_cast<std::uint64_t>(static_cast<unsigned char>(ch)));
  h = hash_combine(h, a);
  h = hash_combine(h, b);
  h = hash_combine(h, c);
  return RngStream(h);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // Box-Muller; u1 shifted away from 0 so the log is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::Vector3d RngStream::normal3() {
  Eigen::Vector3d v;
  v << normal(), normal(), normal();
  return v;
}

int RngStream::uniform_int(int n) {
  // Multiply-shift; bias is ~n / 2^64, irrelevant at simulation scale.
  return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                           static_cast<unsigned __int128>(n)) >>
                          64);
}

}  // namespace hrcn
