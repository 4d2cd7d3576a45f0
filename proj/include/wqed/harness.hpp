#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wqed/errors.hpp"

namespace wqed {

/// Evaluates work(i) for i in [0, count) on `threads` workers and hands each
/// result to collect(i, result) on the calling thread in index order, so
/// output files see the same sequence regardless of scheduling.
///
/// When a point throws, every earlier point is still collected; the error is
/// then rethrown with label(i) prepended, keeping its category
/// (InvalidArgument or NumericalError).
template <class Result>
void run_ordered(std::size_t count, int threads,
                 const std::function<Result(std::size_t)>& work,
                 const std::function<void(std::size_t, Result&)>& collect,
                 const std::function<std::string(std::size_t)>& label) {
  struct Slot {
    std::optional<Result> value;
    std::exception_ptr error;
    bool done = false;
  };
  std::vector<Slot> slots(count);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || stop.load()) return;
      Slot local;
      try {
        local.value.emplace(work(i));
      } catch (...) {
        local.error = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        slots[i].value = std::move(local.value);
        slots[i].error = local.error;
        slots[i].done = true;
      }
      ready.notify_all();
    }
  };

  auto rethrow = [&](std::size_t i, std::exception_ptr error) {
    try {
      std::rethrow_exception(error);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(label(i) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(label(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw NumericalError(label(i) + ": " + e.what());
    }
  };

  const std::size_t pool = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(count, 1));
  if (pool == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      std::optional<Result> value;
      try {
        value.emplace(work(i));
      } catch (...) {
        rethrow(i, std::current_exception());
      }
      collect(i, *value);
    }
    return;
  }

  std::vector<std::thread> workers;
  workers.reserve(pool);
  for (std::size_t w = 0; w < pool; ++w) workers.emplace_back(worker);
  auto finish = [&] {
    stop.store(true);
    for (auto& t : workers) t.join();
  };

  for (std::size_t i = 0; i < count; ++i) {
    Slot slot;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[i].done; });
      slot = std::move(slots[i]);
      slots[i] = Slot{};
    }
    try {
      if (slot.error) rethrow(i, slot.error);
      collect(i, *slot.value);
    } catch (...) {
      finish();
      throw;
    }
  }
  finish();
}

}  // namespace wqed
