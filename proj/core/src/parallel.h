#ifndef QAUTH_SRC_PARALLEL_H
#define QAUTH_SRC_PARALLEL_H

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qauth::detail {

/// Splits [0, n) into `shards` contiguous ranges and runs
/// body(shard, begin, end) for each, on its own thread when shards > 1.
/// The first exception thrown by any shard is rethrown.
template <typename Body>
void for_each_shard(uint64_t n, unsigned shards, Body&& body) {
  shards = std::max(1u, shards);
  std::vector<std::exception_ptr> errors(shards);
  auto run = [&](unsigned shard) {
    try {
      body(shard, n * shard / shards, n * (shard + 1) / shards);
    } catch (...) {
      errors[shard] = std::current_exception();
    }
  };
  if (shards == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) {
      threads.emplace_back(run, s);
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace qauth::detail

#endif  // QAUTH_SRC_PARALLEL_H
