#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace freeze {

// Worker cap for all parallel loops; 0 means hardware concurrency.
void set_thread_limit(unsigned threads);
unsigned thread_limit();

// Runs task(i) for i in [0, count) on up to thread_limit() workers. Tasks
// must write only to their own output slots; results then do not depend on
// the number of workers. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace freeze
