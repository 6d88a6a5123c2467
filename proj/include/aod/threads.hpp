#pragma once

#include <cstdlib>
#include <string>

namespace aod {

// Upper limit on worker threads taken from AOD_REPAIR_THREADS; unset, empty,
// or unparsable values mean "no cap".  A value below 1 forces serial runs.
inline int env_thread_cap() {
  const char* raw = std::getenv("AOD_REPAIR_THREADS");
  if (raw == nullptr || *raw == '\0') return 1 << 20;
  try {
    int v = std::stoi(raw);
    return v < 1 ? 1 : v;
  } catch (...) {
    return 1 << 20;
  }
}

// Effective worker count: the requested amount clamped to [1, env cap].
inline int resolve_threads(int requested) {
  int cap = env_thread_cap();
  if (requested < 1) requested = 1;
  return requested > cap ? cap : requested;
}

}  // namespace aod
