/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace compass {

/// Row-major dense tensor with equal extent along every axis.
template <std::size_t Rank, typename T = double> class CubicTensor {
public:
  CubicTensor() = default;
  explicit CubicTensor(std::size_t extent)
      : extent_(extent), data_(volume(extent), T{}) {}

  std::size_t extent() const noexcept { return extent_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <typename... I> T &operator()(I... idx) noexcept {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <typename... I> const T &operator()(I... idx) const noexcept {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  const std::vector<T> &data() const noexcept { return data_; }
  std::vector<T> &data() noexcept { return data_; }

  bool operator==(const CubicTensor &) const = default;

private:
  static std::size_t volume(std::size_t extent) {
    std::size_t v = 1;
    for (std::size_t r = 0; r < Rank; ++r)
      v *= extent;
    return v;
  }
  std::size_t offset(const std::array<std::size_t, Rank> &idx) const noexcept {
    std::size_t off = 0;
    for (auto i : idx)
      off = off * extent_ + i;
    return off;
  }

  std::size_t extent_ = 0;
  std::vector<T> data_;
};

using Matrix2 = CubicTensor<2>;
using Tensor4 = CubicTensor<4>;

} // namespace compass
