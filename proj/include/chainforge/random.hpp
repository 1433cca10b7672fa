#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace chainforge {

// Deterministic random source. std::uniform_int_distribution is not
// portable across standard libraries, so draws are reduced by modulo;
// the slight bias is irrelevant for test corpora and keeps reports
// byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform-ish integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    if (hi < lo) return lo;
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  bool coin() { return (next_u64() & 1) != 0; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
  }

  std::string word(const std::string& letters, int len) {
    std::string w;
    for (int i = 0; i < len; ++i)
      w.push_back(letters[static_cast<std::size_t>(uniform_int(0, static_cast<int>(letters.size()) - 1))]);
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace chainforge
