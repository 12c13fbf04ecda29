#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace etk {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Rejected input: bad dimensions, non-hermitian data, malformed files.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical routine failed to reach its target (solver breakdown, iteration cap).
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A claimed certificate could not be validated.
struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every tolerance used anywhere in the library, in one place.
struct Tolerances {
  double comparison = 1e-9;     // generic numeric comparisons and validation
  double hermiticity = 1e-10;   // max |A - A^dag| entry accepted as hermitian
  double jacobi_offdiag = 1e-12;  // eigensolver sweep target (relative)
  double solver = 1e-12;        // internal linear-algebra guards
  double sdp_gap = 1e-8;        // SDP duality-gap and feasibility target
  double psd_floor = 1e-9;      // eigenvalue floor accepted as PSD
  double rank_floor = 1e-8;     // relative singular-value cutoff for ranks
  double oracle_eps = 1e-7;     // witness certification threshold
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

inline constexpr const char* kVersion = "0.1.0";

}  // namespace etk
