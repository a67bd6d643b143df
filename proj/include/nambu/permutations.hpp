#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace nambu {

inline int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

/// Calls fn(perm, sign) for every permutation of 0..n-1 in lexicographic order.
template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    fn(static_cast<const std::vector<int>&>(p), permutation_sign(p));
  } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace nambu
