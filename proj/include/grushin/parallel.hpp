#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace grushin {

// Worker count used by data-parallel loops. 1 (the default) is the bit-exact
// reference mode; results do not depend on this value because work is split
// into fixed chunks and reduced in a fixed order.
void set_thread_count(int n);
int thread_count();

// Runs body(chunk) for chunk in [0, n_chunks).
void parallel_for(std::size_t n_chunks, const std::function<void(std::size_t)>& body);

// Pairwise (tree) sum with a fixed association order.
double pairwise_sum(std::span<const double> values);

// Evaluates partial(chunk) for every chunk and combines the partials pairwise.
double chunked_sum(std::size_t n_chunks, const std::function<double(std::size_t)>& partial);

}  // namespace grushin
