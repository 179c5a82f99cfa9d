#include "rnls/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace rnls {

namespace {
std::mutex g_sink_mutex;
WarningSink& sink() {
  static WarningSink s = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return s;
}

int& threads() {
  static int n = [] {
    if (const char* env = std::getenv("RNLS_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 1;
  }();
  return n;
}
}  // namespace

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(g_sink_mutex);
  sink() = std::move(s);
}

void warn(const std::string& message) {
  std::lock_guard lock(g_sink_mutex);
  if (sink()) sink()(message);
}

int thread_count() { return threads(); }
void set_thread_count(int n) { threads() = std::max(1, n); }

}  // namespace rnls
