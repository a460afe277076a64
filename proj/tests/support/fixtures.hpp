#pragma once

#include <initializer_list>
#include <vector>

#include "rlemask/mask.hpp"

namespace fixtures {

inline rlemask::LabelMask grid(std::initializer_list<std::initializer_list<int>> rows, int classes) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.begin()->size());
  std::vector<rlemask::Label> px;
  for (const auto& r : rows) px.insert(px.end(), r.begin(), r.end());
  return rlemask::LabelMask(h, w, classes, std::move(px));
}

inline std::vector<rlemask::Label> labels(const rlemask::LabelMask& m) {
  return {m.labels().begin(), m.labels().end()};
}

}  // namespace fixtures
