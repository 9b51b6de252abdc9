#pragma once

namespace boomprop {

/// Sets the OpenMP team size used by all kernels. 0 selects the hardware default.
void set_thread_count(int threads);

/// Current OpenMP team size.
int thread_count();

/// Number of hardware threads reported by the runtime.
int hardware_threads();

}  // namespace boomprop
