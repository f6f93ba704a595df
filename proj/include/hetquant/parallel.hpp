#pragma once

namespace hetquant {

/// Worker count for the OpenMP kernels. A positive request wins; otherwise
/// HETQUANT_THREADS caps the pool, falling back to the machine's parallelism.
int worker_count(int requested = 0);

}  // namespace hetquant
