#include "fraclap/parallel.hpp"

#include <algorithm>

namespace fraclap {

namespace {
std::atomic<bool> g_sequential{false};
}

void set_sequential(bool on) { g_sequential = on; }
bool sequential() { return g_sequential; }
unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace fraclap
