#pragma once

#include <mutex>

namespace nlgs::detail {

// The FFTW planner is not reentrant; every plan create/destroy goes through this.
std::mutex& fftw_planner_mutex();

}  // namespace nlgs::detail
