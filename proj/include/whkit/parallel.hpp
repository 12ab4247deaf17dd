#pragma once

namespace whkit {

// Worker count used by every parallel loop in the library. Results never
// depend on this value.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the OpenMP default

}  // namespace whkit
