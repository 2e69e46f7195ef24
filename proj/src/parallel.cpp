#include "flowtree/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace flowtree {

namespace {

unsigned initial_threads() {
    if (const char* env = std::getenv("FLOWTREE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> value{initial_threads()};
    return value;
}

}  // namespace

unsigned default_threads() { return thread_setting().load(); }

void set_default_threads(unsigned n) { thread_setting().store(n == 0 ? initial_threads() : n); }

}  // namespace flowtree
