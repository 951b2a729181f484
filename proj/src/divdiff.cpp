#include "nsroot/divdiff.hpp"

#include <utility>

#include "nsroot/errors.hpp"

namespace nsroot {

void DividedDifferenceTable::append(const Real& x, const Real& fx) {
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (nodes_[j] == x) {
            throw DuplicateNode(j);
        }
    }

    const std::size_t k = nodes_.size();
    std::vector<Real> next;
    next.reserve(k + 1);
    next.push_back(fx);
    int divisions = 0;
    for (std::size_t i = 1; i <= k; ++i) {
        // f[x_k..x_{k-i}] = (f[x_k..x_{k-i+1}] - f[x_{k-1}..x_{k-i}]) / (x_k - x_{k-i})
        next.push_back((next[i - 1] - diagonal_[i - 1]) / (x - nodes_[k - i]));
        ++divisions;
    }

    nodes_.push_back(x);
    values_.push_back(fx);
    diagonal_ = std::move(next);
    last_append_divisions_ = divisions;
}

Real DividedDifferenceTable::interpolant_at(const Real& x) const {
    if (empty()) {
        throw Error("interpolant of an empty table");
    }
    const std::size_t n = nodes_.size() - 1;
    // P = d[0] + (x-x_n)(d[1] + (x-x_{n-1})(d[2] + ...)), innermost term d[n].
    Real acc = diagonal_[n];
    for (std::size_t j = 1; j <= n; ++j) {
        acc = diagonal_[n - j] + (x - nodes_[j]) * acc;
    }
    return acc;
}

Real DividedDifferenceTable::derivative_at_last() const {
    if (size() < 2) {
        throw Error("derivative at last node needs at least two nodes");
    }
    const std::size_t k = nodes_.size() - 1;
    Real g = diagonal_[1];
    Real w = nodes_[k] - nodes_[k - 1];
    for (std::size_t i = 2; i <= k; ++i) {
        g = g + diagonal_[i] * w;
        w = w * (nodes_[k] - nodes_[k - i]);
    }
    return g;
}

}  // namespace nsroot
