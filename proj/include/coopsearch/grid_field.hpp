#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coopsearch/errors.hpp"

namespace coopsearch {

// Values sampled on a rectangular (axis1 x axis2) grid, axis1 major.
struct GridField {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;
  // Fixed parameters and notes carried into serialized output.
  std::map<std::string, std::string> metadata;

  GridField() = default;
  GridField(std::string name1, std::vector<double> ax1, std::string name2,
            std::vector<double> ax2)
      : axis1_name(std::move(name1)),
        axis2_name(std::move(name2)),
        axis1(std::move(ax1)),
        axis2(std::move(ax2)),
        values(axis1.size() * axis2.size(), 0.0) {
    if (axis1.empty() || axis2.empty()) throw ValidationError("GridField: empty axis");
  }

  double& at(std::size_t i, std::size_t j) { return values[i * axis2.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }

  bool consistent() const { return values.size() == axis1.size() * axis2.size(); }
};

}  // namespace coopsearch
