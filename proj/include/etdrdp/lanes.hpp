#pragma once

#include <array>
#include <cstddef>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace etdrdp {

/// Up to three execution lanes for the stage-parallel stepper.
///
/// `run` executes one stage: every non-null task runs to completion before `run` returns,
/// which is the barrier between stages. With one lane the tasks run in order on the caller.
class LanePool {
 public:
  static constexpr int kMaxLanes = 3;

  explicit LanePool(int lanes = 1);
  ~LanePool();
  LanePool(const LanePool&) = delete;
  LanePool& operator=(const LanePool&) = delete;

  int lanes() const { return lanes_; }

  template <typename F0, typename F1 = std::nullptr_t, typename F2 = std::nullptr_t>
  void run(F0&& lane0, F1&& lane1 = nullptr, F2&& lane2 = nullptr) {
    std::array<Task, kMaxLanes> tasks{make_task(lane0), make_task(lane1), make_task(lane2)};
    dispatch(tasks);
  }

 private:
  struct Task {
    void* object = nullptr;
    void (*call)(void*) = nullptr;
    explicit operator bool() const { return call != nullptr; }
    void operator()() const { call(object); }
  };

  template <typename F>
  static Task make_task(F& f) {
    if constexpr (std::is_same_v<std::decay_t<F>, std::nullptr_t>) {
      return Task{};
    } else {
      return Task{static_cast<void*>(&f), [](void* o) { (*static_cast<std::decay_t<F>*>(o))(); }};
    }
  }

  void dispatch(const std::array<Task, kMaxLanes>& tasks);
  void worker_loop(int lane);

  int lanes_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::array<Task, kMaxLanes> tasks_{};
  std::array<std::exception_ptr, kMaxLanes> errors_{};
  unsigned long generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace etdrdp
