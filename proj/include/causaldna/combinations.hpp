#ifndef CAUSALDNA_COMBINATIONS_HPP
#define CAUSALDNA_COMBINATIONS_HPP

#include <vector>

namespace causaldna {

// Calls visit(combination) for every size-k subset of the pool until visit
// returns true; returns whether a visit did. Subsets are produced in
// lexicographic order of pool positions, so a sorted pool yields sorted
// combinations in lexicographic value order.
template <typename Visit>
bool for_each_combination(const std::vector<int>& pool, int k, Visit&& visit) {
    int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> combo(k);
    while (true) {
        for (int i = 0; i < k; ++i) combo[i] = pool[idx[i]];
        if (visit(combo)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace causaldna

#endif  // CAUSALDNA_COMBINATIONS_HPP
