#include "ellqdet/permutations.hpp"

#include <algorithm>
#include <numeric>

namespace ellqdet {

bool is_permutation(std::span<const int> sigma)
{
    const int n = static_cast<int>(sigma.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : sigma) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) return false;
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return true;
}

std::vector<Permutation> all_permutations(int n)
{
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int inversions(std::span<const int> sigma)
{
    int count = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        for (std::size_t j = i + 1; j < sigma.size(); ++j) {
            if (sigma[i] > sigma[j]) ++count;
        }
    }
    return count;
}

Permutation compose(std::span<const int> sigma, std::span<const int> tau)
{
    Permutation out(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) out[i] = sigma[static_cast<std::size_t>(tau[i] - 1)];
    return out;
}

}  // namespace ellqdet
