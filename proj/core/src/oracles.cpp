#include "tribo/oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace tribo::oracle {

namespace {

// z[i] = length of the longest common prefix of w and w[i..].
std::vector<std::size_t> z_function(const Letters& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> z(n, 0);
  if (n) z[0] = n;
  for (std::size_t i = 1, l = 0, r = 0; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && w[z[i]] == w[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
  return z;
}

// fail[n] = length of the longest proper border of s[0..n).
std::vector<std::size_t> failure(const std::uint8_t* s, std::size_t n) {
  std::vector<std::size_t> f(n + 1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = f[i];
    while (k > 0 && s[i] != s[k]) k = f[k];
    if (s[i] == s[k]) ++k;
    f[i + 1] = k;
  }
  return f;
}

struct Manacher {
  std::vector<std::size_t> odd, even;  // radii: w[i-k..i+k], w[i-k..i+k-1]
};

Manacher manacher(const Letters& w) {
  const std::size_t n = w.size();
  Manacher m{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0)};
  for (std::size_t i = 0, l = 0, r = 0; i < n; ++i) {
    std::size_t k = i < r ? std::min(m.odd[l + r - i], r - i) : 0;
    while (i + k + 1 < n && i >= k + 1 && w[i + k + 1] == w[i - k - 1]) ++k;
    m.odd[i] = k;
    if (i + k > r) {
      l = i - k;
      r = i + k;
    }
  }
  for (std::size_t i = 0, l = 0, r = 0; i < n; ++i) {
    std::size_t k = i < r ? std::min(m.even[l + r - i + 1], r - i + 1) : 0;
    while (i + k < n && i >= k + 1 && w[i + k] == w[i - k - 1]) ++k;
    m.even[i] = k;
    if (k > 0 && i + k - 1 > r) {
      l = i - k;
      r = i + k - 1;
    }
  }
  return m;
}

}  // namespace

std::set<std::size_t> power_orders(const Letters& w, unsigned k, std::size_t max_order) {
  std::set<std::size_t> out;
  for (std::size_t p = 1; p <= max_order && p < w.size(); ++p) {
    const std::size_t need = (k - 1) * p;
    std::size_t run = 0;
    for (std::size_t i = 0; i + p < w.size(); ++i) {
      run = w[i] == w[i + p] ? run + 1 : 0;
      if (run >= need) {
        out.insert(p);
        break;
      }
    }
  }
  return out;
}

std::set<std::pair<std::size_t, std::size_t>> power_positions(const Letters& w, unsigned k,
                                                              std::size_t bound) {
  if (bound + k * bound > w.size()) throw std::invalid_argument("power_positions: prefix too short");
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 1; p <= bound; ++p)
    for (std::size_t i = 0; i <= bound; ++i) {
      bool ok = true;
      for (std::size_t j = i; ok && j < i + (k - 1) * p; ++j) ok = w[j] == w[j + p];
      if (ok) out.emplace(p, i);
    }
  return out;
}

std::uint64_t count_power_occurrences(const Letters& w, std::size_t n, unsigned k) {
  if (n > w.size()) throw std::invalid_argument("count_power_occurrences: prefix too short");
  std::uint64_t count = 0;
  for (std::size_t j = 1; k * j <= n; ++j) {
    // match[t] = 1 iff w[t] == w[t + j]; a k-power at i needs (k-1)*j matches from i.
    const std::size_t need = (k - 1) * j;
    std::size_t run = 0;
    for (std::size_t t = n - j; t-- > 0;) {
      run = w[t] == w[t + j] ? run + 1 : 0;
      if (run >= need && t + k * j <= n) ++count;
    }
  }
  return count;
}

std::size_t max_even_palindrome_radius(const Letters& w) {
  const auto m = manacher(w);
  return w.empty() ? 0 : *std::max_element(m.even.begin(), m.even.end());
}

std::size_t max_odd_palindrome_radius(const Letters& w) {
  const auto m = manacher(w);
  return w.empty() ? 0 : *std::max_element(m.odd.begin(), m.odd.end());
}

std::set<std::size_t> palindromic_prefixes(const Letters& w, std::size_t max_n) {
  if (max_n > w.size()) throw std::invalid_argument("palindromic_prefixes: prefix too short");
  const auto m = manacher(w);
  std::set<std::size_t> out{0};
  for (std::size_t n = 1; n <= max_n; ++n) {
    const bool pal = n % 2 ? m.odd[(n - 1) / 2] >= (n - 1) / 2 : m.even[n / 2] >= n / 2;
    if (pal) out.insert(n);
  }
  return out;
}

std::set<std::size_t> quasiperiods(const Letters& w, std::size_t max_n) {
  const auto z = z_function(w);
  const std::size_t len = w.size();
  std::set<std::size_t> out;
  for (std::size_t n = 1; n <= max_n && 2 * n < len; ++n) {
    std::size_t last = 0;
    bool ok = true;
    for (std::size_t i = 1; ok && i + n <= len; ++i) {
      if (z[i] < n) continue;
      ok = i - last <= n;
      last = i;
    }
    // Past the last occurrence the next one lies beyond the prefix.
    if (ok && last + 2 * n < len) ok = false;
    if (ok) out.insert(n);
  }
  return out;
}

std::set<std::size_t> unbordered_lengths(const Letters& w, std::size_t starts, std::size_t max_n) {
  if (starts + max_n > w.size()) throw std::invalid_argument("unbordered_lengths: prefix too short");
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < starts; ++i) {
    const auto f = failure(w.data() + i, max_n);
    for (std::size_t n = 1; n <= max_n; ++n)
      if (f[n] == 0) out.insert(n);
  }
  return out;
}

std::set<std::size_t> lyndon_lengths(const Letters& w, std::size_t starts, std::size_t max_n) {
  if (starts + max_n > w.size()) throw std::invalid_argument("lyndon_lengths: prefix too short");
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < starts; ++i) {
    // Duval's scan: s[0..j] stays a prefix of a power of a Lyndon word with
    // period j - k; it is itself Lyndon exactly when that period is j + 1.
    const std::uint8_t* s = w.data() + i;
    out.insert(1);
    std::size_t k = 0;
    for (std::size_t j = 1; j < max_n; ++j) {
      if (s[k] > s[j]) break;
      if (s[k] < s[j]) {
        k = 0;
        out.insert(j + 1);
      } else {
        ++k;
      }
    }
  }
  return out;
}

std::vector<std::size_t> prefix_least_periods(const Letters& w, std::size_t max_n) {
  if (max_n > w.size()) throw std::invalid_argument("prefix_least_periods: prefix too short");
  const auto f = failure(w.data(), max_n);
  std::vector<std::size_t> p(max_n + 1, 1);
  for (std::size_t n = 1; n <= max_n; ++n) p[n] = n - f[n];
  return p;
}

std::set<std::size_t> power_prefixes(const Letters& w, std::size_t max_n) {
  const auto p = prefix_least_periods(w, max_n);
  std::set<std::size_t> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    if (p[n] < n && n % p[n] == 0) out.insert(n);
  return out;
}

std::array<std::uint64_t, 3> parikh(const Letters& w, std::size_t n) {
  if (n > w.size()) throw std::invalid_argument("parikh: prefix too short");
  std::array<std::uint64_t, 3> c{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] < 3) ++c[w[i]];
  return c;
}

}  // namespace tribo::oracle
