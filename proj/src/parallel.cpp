#include "whkit/parallel.hpp"

#include <omp.h>

namespace whkit {

namespace {
int g_threads = 0;
}

int thread_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void set_thread_count(int n) { g_threads = n > 0 ? n : 0; }

}  // namespace whkit
