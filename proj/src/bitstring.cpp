#include "aldim/bitstring.hpp"

#include <algorithm>
#include <set>

namespace aldim {

std::vector<BitString> minimal_prefix_set(std::vector<BitString> strings) {
    std::set<BitString> present(strings.begin(), strings.end());
    std::vector<BitString> out;
    for (const auto& w : present) {
        bool covered = false;
        for (std::size_t n = 0; n < w.size() && !covered; ++n)
            covered = present.count(w.prefix(n)) > 0;
        if (!covered) out.push_back(w);
    }
    return out; // std::set iteration is already lexicographic
}

} // namespace aldim
