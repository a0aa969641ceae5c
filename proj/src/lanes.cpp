#include "etdrdp/lanes.hpp"

#include "etdrdp/grid.hpp"

namespace etdrdp {

LanePool::LanePool(int lanes) : lanes_(lanes) {
  if (lanes != 1 && lanes != kMaxLanes) throw InvalidArgument("lane count must be 1 or 3");
  for (int lane = 1; lane < lanes_; ++lane) {
    workers_.emplace_back([this, lane] { worker_loop(lane); });
  }
}

LanePool::~LanePool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

void LanePool::dispatch(const std::array<Task, kMaxLanes>& tasks) {
  if (lanes_ == 1) {
    for (const auto& t : tasks) {
      if (t) t();
    }
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    tasks_ = tasks;
    errors_ = {};
    pending_ = 0;
    for (int lane = 1; lane < kMaxLanes; ++lane) {
      if (tasks_[static_cast<std::size_t>(lane)]) ++pending_;
    }
    ++generation_;
  }
  wake_.notify_all();

  std::exception_ptr own;
  if (tasks[0]) {
    try {
      tasks[0]();
    } catch (...) {
      own = std::current_exception();
    }
  }
  std::unique_lock<std::mutex> lock(mutex_);
  done_.wait(lock, [this] { return pending_ == 0; });
  if (own) std::rethrow_exception(own);
  for (const auto& e : errors_) {
    if (e) std::rethrow_exception(e);
  }
}

void LanePool::worker_loop(int lane) {
  unsigned long seen = 0;
  for (;;) {
    Task task;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      task = tasks_[static_cast<std::size_t>(lane)];
    }
    if (!task) continue;
    std::exception_ptr err;
    try {
      task();
    } catch (...) {
      err = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      errors_[static_cast<std::size_t>(lane)] = err;
      --pending_;
    }
    done_.notify_one();
  }
}

}  // namespace etdrdp
