#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dbar {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::RowVectorXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

enum class ErrorCode {
  invalid_argument,
  config_parse,
  solver_failure,
  tolerance_failure,
  not_supported,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace dbar
