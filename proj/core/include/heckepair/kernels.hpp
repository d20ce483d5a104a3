#pragma once

// Finite-scale certificates for kernels on X = Gamma/Lambda: positive type,
// conditionally negative type (CND), Schoenberg embeddings, and the exact
// transfer between Gamma-invariant kernels on X and Lambda-bi-invariant
// functions on Gamma (psi(Lambda s^-1 t Lambda) = k(s Lambda, t Lambda)).
//
// Eigendecompositions run in double precision. A "no" verdict is only
// returned once its witness vector has been re-evaluated in exact rational
// arithmetic from the stored doubles.

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "heckepair/coset_space.hpp"
#include "heckepair/error.hpp"

namespace heckepair {

inline constexpr double kDefaultTolerance = 1e-9;

enum class Normalization { none, negative_type, positive_type };

struct KernelMatrix {
  std::vector<CosetId> points;
  Eigen::MatrixXd values;
  double tol = kDefaultTolerance;
  Normalization normalized = Normalization::none;

  std::size_t size() const noexcept { return points.size(); }
  bool is_symmetric() const;
};

// Points 0..n-1 with the given entries.
KernelMatrix make_kernel(const Eigen::MatrixXd& values, double tol = kDefaultTolerance);

struct KernelVerdict {
  bool yes = true;
  std::vector<double> witness;  // empty on yes
  // Extreme eigenvalue behind the verdict: the minimum for positive type,
  // the maximum on the sum-zero hyperplane for CND.
  double eigenvalue = 0.0;
  // v^T K v for the witness, evaluated exactly and rounded for display.
  double witness_value = 0.0;
};

// yes iff the minimum eigenvalue is >= -tol; otherwise a witness v with
// v^T K v < -tol |v|^2.
KernelVerdict is_positive_type(const KernelMatrix& k, double tol);

// yes iff v^T K v <= tol |v|^2 for all v with sum(v) = 0; otherwise a witness
// with sum(v) = 0 and v^T K v > tol |v|^2. Requires a zero diagonal.
KernelVerdict is_cnd(const KernelMatrix& k, double tol);

// Evaluates v^T K v exactly, treating every double as the rational it encodes.
Rational exact_quadratic_form(const KernelMatrix& k, const std::vector<double>& v);

class KernelRejected : public InvalidInput {
 public:
  KernelRejected(const std::string& what, std::vector<double> witness)
      : InvalidInput(what), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

// Points f(x) with |f(x) - f(y)|^2 = k(x, y), from the Gram matrix
// G(x, y) = (k(x, base) + k(y, base) - k(x, y)) / 2. Throws KernelRejected
// carrying the witness when k is not CND.
std::vector<std::vector<double>> schoenberg_embed(const KernelMatrix& k, std::size_t base, double tol);

struct BiinvariantFunction {
  std::map<std::size_t, double> values;  // double coset id -> nonzero value
  int support_radius = 0;                // values are defined on double cosets of depth <= support_radius

  friend bool operator==(const BiinvariantFunction&, const BiinvariantFunction&) = default;
};

// Two pairs of points in the same double coset with different kernel values.
struct TransferViolation {
  std::size_t double_coset = 0;
  std::pair<CosetId, CosetId> first;
  std::pair<CosetId, CosetId> second;
  double first_value = 0.0;
  double second_value = 0.0;
};

// Cosets with depth <= radius, in table order.
std::vector<CosetId> ball_points(const BallTable& table, int radius);

// Double coset id of Lambda rep(x)^-1 rep(y) for every pair of points.
std::vector<std::vector<std::size_t>> pair_double_cosets(const BallTable& table, const std::vector<CosetId>& points);

// k must be defined on a ball B(Lambda, r) of a table of radius >= 2r.
std::variant<BiinvariantFunction, TransferViolation> kernel_to_biinvariant(const KernelMatrix& k,
                                                                            const BallTable& table, double tol);

// Kernel on B(Lambda, radius); the table must have radius >= 2 * radius.
KernelMatrix biinvariant_to_kernel(const BiinvariantFunction& psi, const BallTable& table, int radius);

// max d(x, y) over nonzero entries (0 for the zero kernel).
int propagation(const KernelMatrix& k, const BallTable& table);

// (r, min k(x, y) over d(x, y) >= r). Evidence of effective properness, not a verdict.
std::vector<std::pair<int, double>> properness_profile(const KernelMatrix& k, const BallTable& table);

}  // namespace heckepair
