/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace compass {

/// Resolves a requested worker count; 0 means hardware concurrency.
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0)
    return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to `threads` workers. Each task writes only
/// its own slot, so results are independent of scheduling. If any task throws,
/// the exception from the lowest failing index is rethrown after all workers
/// finish.
template <typename F> void parallel_for(std::size_t n, std::size_t threads, F &&f) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = n;
  std::exception_ptr err;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(err_mutex);
            if (i < err_index) {
              err_index = i;
              err = std::current_exception();
            }
          }
        }
      });
  }
  if (err)
    std::rethrow_exception(err);
}

/// Ordered map over [0, n).
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, std::size_t threads, F &&f) {
  std::vector<T> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

} // namespace compass
