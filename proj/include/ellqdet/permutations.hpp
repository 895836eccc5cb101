#pragma once

#include <span>
#include <vector>

namespace ellqdet {

/// Images sigma(1), ..., sigma(n), 1-based.
using Permutation = std::vector<int>;

bool is_permutation(std::span<const int> sigma);

/// All permutations of 1..n in lexicographic order.
std::vector<Permutation> all_permutations(int n);

int inversions(std::span<const int> sigma);
inline int sign(std::span<const int> sigma) { return inversions(sigma) % 2 == 0 ? 1 : -1; }

/// (sigma o tau)(i) = sigma(tau(i)).
Permutation compose(std::span<const int> sigma, std::span<const int> tau);

}  // namespace ellqdet
