#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tribo/automata.hpp"
#include "tribo/logic.hpp"
#include "tribo/word.hpp"

namespace tribo::test {

/// T and B bound, as every query in the suite expects.
inline Environment environment() {
  Environment env;
  env.sequences.emplace("T", tribonacci_dfao());
  env.sequences.emplace("B", dfao_map(tribonacci_dfao(), [](int a) { return a < 1 ? a : 1; }));
  return env;
}

inline const Kernel& kernel() {
  static const Kernel k(tribonacci_system());
  return k;
}

using Tuples = std::set<std::vector<std::uint64_t>>;

/// Accepted tuples whose components are all <= bound.
inline std::set<std::vector<std::uint64_t>> decode(const Dfa& a, std::uint64_t bound) {
  std::set<std::vector<std::uint64_t>> out;
  const std::size_t len = std::max<std::size_t>(1, canonical_rep(natural(bound)).size());
  for (const auto& t : kernel().enumerate(a, SIZE_MAX, len)) {
    std::vector<std::uint64_t> v;
    bool in = true;
    for (const auto& x : t) {
      in = in && x <= natural(bound);
      v.push_back(to_u64(x));
    }
    if (in) out.insert(v);
  }
  return out;
}

inline Word bits(const std::string& s) { return parse_word(s); }

}  // namespace tribo::test
