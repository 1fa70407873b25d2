#pragma once

#include "fg/space.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fg {

// Seeded collection of smooth test functions for inequality sweeps:
// polynomials, trigonometric modes, exponential tilts, bumps and random
// low-pass fields. Non-periodic domains get Neumann-compatible cosine modes
// alongside the polynomials; periodic domains use Fourier modes only.
class TestBank {
 public:
  struct Member {
    std::string name;
    ScalarField f;
  };

  TestBank(const WeightedSpace& space, std::uint64_t seed, std::size_t count = 20);

  const std::vector<Member>& members() const& { return members_; }
  std::vector<Member> members() && { return std::move(members_); }
  std::size_t size() const { return members_.size(); }
  const Member& operator[](std::size_t i) const { return members_[i]; }

  // exp of each member rescaled to unit sup-deviation from its mean; strictly
  // positive, values within [1/e, e].
  std::vector<Member> positive() const;

 private:
  std::vector<Member> members_;
};

}  // namespace fg
