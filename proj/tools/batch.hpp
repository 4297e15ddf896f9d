#ifndef FBPAUG_TOOLS_BATCH_HPP
#define FBPAUG_TOOLS_BATCH_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace fbpaug::tools {

namespace fs = std::filesystem;

struct WorkItem {
  fs::path input;
  fs::path output;
};

/// A directory input maps every *.rimg inside it (sorted by name) to the same
/// name under `output`; the position in that order is the item index. A file
/// input is a single item with index 0.
inline std::vector<WorkItem> plan_items(const fs::path& input, const fs::path& output) {
  std::vector<WorkItem> items;
  if (!fs::is_directory(input)) {
    items.push_back({input, output});
    return items;
  }
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rimg") names.push_back(entry.path());
  }
  std::sort(names.begin(), names.end());
  fs::create_directories(output);
  for (auto& p : names) items.push_back({p, output / p.filename()});
  return items;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is handled
/// exactly once; the first exception is rethrown after all workers stop.
inline void run_indexed(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace fbpaug::tools

#endif  // FBPAUG_TOOLS_BATCH_HPP
