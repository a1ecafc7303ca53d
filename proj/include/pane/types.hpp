#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pane {

using NodeId = std::uint32_t;
using AttrId = std::uint32_t;

// Row-major for matrices whose rows are streamed (walk iterates, residuals),
// column-major where the CCD attribute phase and SVD factors want contiguous columns.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// A partition of [0, count) into disjoint id blocks, block order fixed.
using Partition = std::vector<std::vector<std::uint32_t>>;

// Thrown for unreadable/malformed input data; the CLI maps it to exit 1.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for invalid parameters or shape mismatches; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

Partition contiguous_partition(std::uint32_t count, std::uint32_t blocks);
void validate_partition(const Partition& part, std::uint32_t count, const char* what);

}  // namespace pane
