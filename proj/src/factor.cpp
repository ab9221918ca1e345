// SPDX-License-Identifier: Apache-2.0
#include "factor.hpp"

#include <algorithm>

namespace rerisk::detail {

namespace {

std::vector<std::size_t> strides_of(const Factor& f) {
  std::vector<std::size_t> strides(f.vars.size());
  std::size_t stride = 1;
  for (std::size_t k = f.vars.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= f.cards[k];
  }
  return strides;
}

// Stride of each variable of `scope` inside `f`; 0 for variables f lacks.
std::vector<std::size_t> projected_strides(const std::vector<std::size_t>& scope, const Factor& f) {
  const auto own = strides_of(f);
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t k = 0; k < scope.size(); ++k) {
    const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), scope[k]);
    if (it != f.vars.end() && *it == scope[k]) out[k] = own[static_cast<std::size_t>(it - f.vars.begin())];
  }
  return out;
}

std::size_t table_size(const std::vector<std::size_t>& cards) {
  std::size_t size = 1;
  for (std::size_t c : cards) size *= c;
  return size;
}

// Walks every assignment of (vars, cards) in row-major order, keeping one
// running offset per projection.
class Odometer {
 public:
  Odometer(const std::vector<std::size_t>& cards, std::vector<std::vector<std::size_t>> strides)
      : cards_(cards), strides_(std::move(strides)), digits_(cards.size(), 0),
        offsets_(strides_.size(), 0) {}

  std::size_t offset(std::size_t projection) const { return offsets_[projection]; }
  std::size_t digit(std::size_t k) const { return digits_[k]; }

  void advance() {
    for (std::size_t k = cards_.size(); k-- > 0;) {
      ++digits_[k];
      for (std::size_t p = 0; p < strides_.size(); ++p) offsets_[p] += strides_[p][k];
      if (digits_[k] < cards_[k]) return;
      digits_[k] = 0;
      for (std::size_t p = 0; p < strides_.size(); ++p) offsets_[p] -= cards_[k] * strides_[p][k];
    }
  }

 private:
  const std::vector<std::size_t>& cards_;
  std::vector<std::vector<std::size_t>> strides_;
  std::vector<std::size_t> digits_;
  std::vector<std::size_t> offsets_;
};

}  // namespace

Factor node_factor(const BayesNet& net, std::size_t node) {
  const auto& parents = net.parent_indices(node);
  Factor f;
  f.vars = parents;
  f.vars.push_back(node);
  std::sort(f.vars.begin(), f.vars.end());
  for (std::size_t v : f.vars) f.cards.push_back(net.cardinality(v));
  f.values.assign(table_size(f.cards), 0.0);

  // Position of the node and of each parent inside f.vars.
  const auto position = [&](std::size_t v) {
    return static_cast<std::size_t>(std::lower_bound(f.vars.begin(), f.vars.end(), v) -
                                    f.vars.begin());
  };
  const std::size_t node_pos = position(node);
  std::vector<std::size_t> parent_pos;
  for (std::size_t p : parents) parent_pos.push_back(position(p));

  Odometer it(f.cards, {strides_of(f)});
  std::vector<std::size_t> parent_states(parents.size());
  for (std::size_t i = 0; i < f.values.size(); ++i, it.advance()) {
    for (std::size_t j = 0; j < parents.size(); ++j) parent_states[j] = it.digit(parent_pos[j]);
    f.values[it.offset(0)] = net.probability(node, it.digit(node_pos), parent_states);
  }
  return f;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  for (std::size_t v : out.vars) {
    const auto ia = std::lower_bound(a.vars.begin(), a.vars.end(), v);
    out.cards.push_back(ia != a.vars.end() && *ia == v
                            ? a.cards[static_cast<std::size_t>(ia - a.vars.begin())]
                            : b.cards[static_cast<std::size_t>(
                                  std::lower_bound(b.vars.begin(), b.vars.end(), v) -
                                  b.vars.begin())]);
  }
  out.values.resize(table_size(out.cards));
  Odometer it(out.cards, {projected_strides(out.vars, a), projected_strides(out.vars, b)});
  for (std::size_t i = 0; i < out.values.size(); ++i, it.advance()) {
    out.values[i] = a.values[it.offset(0)] * b.values[it.offset(1)];
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  Factor out;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] == var) continue;
    out.vars.push_back(f.vars[k]);
    out.cards.push_back(f.cards[k]);
  }
  out.values.assign(table_size(out.cards), 0.0);
  Odometer it(f.cards, {projected_strides(f.vars, out)});
  for (std::size_t i = 0; i < f.values.size(); ++i, it.advance()) {
    out.values[it.offset(0)] += f.values[i];
  }
  return out;
}

Factor reduce(const Factor& f, std::size_t var, std::size_t state) {
  const auto pos_it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
  if (pos_it == f.vars.end() || *pos_it != var) return f;
  const auto pos = static_cast<std::size_t>(pos_it - f.vars.begin());
  Factor out;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (k == pos) continue;
    out.vars.push_back(f.vars[k]);
    out.cards.push_back(f.cards[k]);
  }
  out.values.assign(table_size(out.cards), 0.0);
  Odometer it(f.cards, {projected_strides(f.vars, out)});
  for (std::size_t i = 0; i < f.values.size(); ++i, it.advance()) {
    if (it.digit(pos) == state) out.values[it.offset(0)] = f.values[i];
  }
  return out;
}

}  // namespace rerisk::detail
