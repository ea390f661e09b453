#pragma once

#include "tcpkit/tensor.hpp"

namespace fixture {

using tcpkit::Tensor;

// a111 = a222 = 1
inline Tensor cubic_diag() {
  return Tensor::from_entries(3, 2, {{{0, 0, 0}, 1}, {{1, 1, 1}, 1}});
}

// a1111 = 1, a1112 = -2, a1122 = 1, a2222 = 1
inline Tensor two_roots() {
  return Tensor::from_entries(
      4, 2,
      {{{0, 0, 0, 0}, 1}, {{0, 0, 0, 1}, -2}, {{0, 0, 1, 1}, 1}, {{1, 1, 1, 1}, 1}});
}

// a1111 = 1, a1222 = -1, a1122 = 1, a2222 = 1, a2111 = -1, a2211 = 1
inline Tensor quartic_skew() {
  return Tensor::from_entries(4, 2,
                              {{{0, 0, 0, 0}, 1},
                               {{0, 1, 1, 1}, -1},
                               {{0, 0, 1, 1}, 1},
                               {{1, 1, 1, 1}, 1},
                               {{1, 0, 0, 0}, -1},
                               {{1, 1, 0, 0}, 1}});
}

inline Tensor identity4() {
  return Tensor::from_entries(4, 2, {{{0, 0, 0, 0}, 1}, {{1, 1, 1, 1}, 1}});
}

inline Tensor scalar(int order, double c) {
  std::vector<int> idx(order, 0);
  return Tensor::from_entries(order, 1, {{idx, c}});
}

}  // namespace fixture
