#pragma once

#include <cstddef>
#include <vector>

#include "nsroot/real.hpp"

namespace nsroot {

// Incrementally grown divided-difference table over pairwise-distinct nodes
// x_0..x_k in arrival order (newest last). Only the newest anti-diagonal
// d[i] = f[x_k, x_{k-1}, ..., x_{k-i}] is kept, which is all the Newton-form
// interpolant and its derivative at the newest node need. Appending the k-th
// node costs exactly k divisions.
class DividedDifferenceTable {
  public:
    DividedDifferenceTable() = default;

    // Throws DuplicateNode when x coincides exactly with an existing node.
    void append(const Real& x, const Real& fx);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const Real& node(std::size_t j) const { return nodes_[j]; }
    const Real& value(std::size_t j) const { return values_[j]; }

    // diagonal()[i] = f[x_k, ..., x_{k-i}] for i = 0..k; diagonal()[0] = f(x_k).
    const std::vector<Real>& diagonal() const { return diagonal_; }

    // Newton-form interpolant P_k(x), evaluated by nested multiplication.
    Real interpolant_at(const Real& x) const;

    // P'_k(x_k) via the nested form
    //   G_k = d[1] + sum_{i=2}^{k} d[i] * prod_{j=1}^{i-1} (x_k - x_{k-j}),
    // which avoids forming any w-quotients. Requires at least two nodes.
    Real derivative_at_last() const;

    int last_append_divisions() const { return last_append_divisions_; }

  private:
    std::vector<Real> nodes_;
    std::vector<Real> values_;
    std::vector<Real> diagonal_;
    int last_append_divisions_ = 0;
};

}  // namespace nsroot
