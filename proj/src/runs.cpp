#include "rlemask/runs.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "rlemask/error.hpp"

namespace rlemask {

RunList extract_runs(std::span<const Label> vec) {
  RunList out;
  out.vector_length = static_cast<std::int64_t>(vec.size());
  const auto n = out.vector_length;
  std::int64_t i = 0;
  while (i < n) {
    const Label v = vec[static_cast<std::size_t>(i)];
    if (v < 0) throw InvalidArgument("negative label at index " + std::to_string(i));
    if (v == 0) {
      ++i;
      continue;
    }
    std::int64_t j = i + 1;
    while (j < n && vec[static_cast<std::size_t>(j)] == v) ++j;
    out.runs.push_back(Run{i, j - i, v, 0});
    i = j;
  }
  return out;
}

RunList split_runs(const RunList& runs, std::int64_t max_len) {
  if (max_len < 1) throw InvalidArgument("max_len must be >= 1");
  RunList out;
  out.vector_length = runs.vector_length;
  out.max_len = max_len;
  out.runs.reserve(runs.runs.size());
  for (const auto& r : runs.runs) {
    for (std::int64_t offset = 0; offset < r.length; offset += max_len) {
      out.runs.push_back(Run{r.start + offset, std::min(max_len, r.length - offset), r.cls, r.instance});
    }
  }
  return out;
}

std::vector<Label> runs_to_vector(const RunList& runs, std::int64_t length, ReconstructMode mode) {
  if (length < 0) throw InvalidArgument("negative vector length");
  std::vector<Label> out(static_cast<std::size_t>(length), 0);
  if (mode == ReconstructMode::kLenient) {
    for (const auto& r : runs.runs) {
      const auto begin = std::clamp<std::int64_t>(r.start, 0, length);
      const auto end = std::clamp<std::int64_t>(r.start + std::max<std::int64_t>(r.length, 0), 0, length);
      std::fill(out.begin() + begin, out.begin() + end, r.cls);
    }
    return out;
  }
  std::vector<bool> taken(out.size(), false);
  for (const auto& r : runs.runs) {
    if (r.start < 0 || r.length < 1 || r.start + r.length > length) {
      throw RangeError("run (" + std::to_string(r.start) + ", " + std::to_string(r.length) +
                       ") does not fit a vector of length " + std::to_string(length));
    }
    for (auto i = r.start; i < r.start + r.length; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (taken[k]) throw OverlapError("runs overlap at index " + std::to_string(i));
      taken[k] = true;
      out[k] = r.cls;
    }
  }
  return out;
}

RunList shuffle_runs(const RunList& runs, std::uint64_t seed) {
  RunList out = runs;
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates: std::shuffle's output is implementation-defined.
  for (std::size_t i = out.runs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng() % i);
    std::swap(out.runs[i - 1], out.runs[j]);
  }
  return out;
}

}  // namespace rlemask
