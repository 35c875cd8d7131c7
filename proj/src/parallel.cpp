#include "plscore/parallel.hpp"

#include <cstdlib>
#include <string>

namespace plscore {

namespace {

unsigned initial_threads() {
  if (const char* env = std::getenv("PLSCORE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{initial_threads()};
  return value;
}

}  // namespace

unsigned num_threads() { return thread_setting().load(); }

void set_num_threads(unsigned n) { thread_setting().store(std::max(1u, n)); }

}  // namespace plscore
