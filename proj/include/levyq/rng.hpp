#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace levyq {

// Counter-based stream: Philox4x32-10 keyed by (seed, stream_id).
// Identical (seed, stream_id) reproduces the same sequence; distinct
// stream_ids give statistically independent streams, so replication k
// of an ensemble simply uses stream_id = k.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id), counter_(0), have_spare_(false),
        spare_(0.0), buf_pos_(2) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64() {
    if (buf_pos_ >= 2) {
      philox_block();
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  // uniform on the open interval (0,1)
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // uniform integer in [0, n)
  std::uint64_t uniform_below(std::uint64_t n) {
    return next_u64() % n;  // bias negligible for n << 2^64
  }

 private:
  void philox_block() {
    std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = 0xD2511F53ull * c0;
      std::uint64_t p1 = 0xCD9E8D57ull * c2;
      std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t l0 = static_cast<std::uint32_t>(p0);
      std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t l1 = static_cast<std::uint32_t>(p1);
      std::uint32_t n0 = h1 ^ c1 ^ k0;
      std::uint32_t n1 = l1;
      std::uint32_t n2 = h0 ^ c3 ^ k1;
      std::uint32_t n3 = l0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
    buf_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    ++counter_;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  bool have_spare_;
  double spare_;
  std::uint64_t buf_[2];
  int buf_pos_;
};

}  // namespace levyq
