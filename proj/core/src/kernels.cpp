#include "heckepair/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace heckepair {

namespace {

Rational exact(double x) {
  if (!std::isfinite(x)) throw InvalidInput("kernel entry is not finite");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{Integer(scaled)};
  if (exponent > 0) r *= Rational(Integer(1) << exponent);
  if (exponent < 0) r /= Rational(Integer(1) << -exponent);
  return r;
}

void require_symmetric(const KernelMatrix& k) {
  if (k.values.rows() != k.values.cols() || static_cast<std::size_t>(k.values.rows()) != k.points.size())
    throw InvalidInput("kernel: matrix size does not match the point list");
  if (!k.is_symmetric()) throw InvalidInput("kernel: matrix is not symmetric");
}

// Scales so the largest entry has magnitude 1, first nonzero entry positive,
// and snaps entries that are integers up to roundoff.
std::vector<double> tidy_witness(const Eigen::VectorXd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  if (scale == 0.0) return out;
  double sign = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      sign = v(i) > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double x = sign * v(i) / scale;
    if (std::abs(x - std::round(x)) < 1e-9) x = std::round(x);
    // dyadic grid: sums of a few entries stay exact in double
    x = std::ldexp(std::round(std::ldexp(x, 40)), -40);
    out[static_cast<std::size_t>(i)] = x;
  }
  return out;
}

Rational exact_norm2(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

Rational exact_form(const KernelMatrix& k, const std::vector<Rational>& v) {
  Rational s = 0;
  const auto n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (v[j] != 0) row += exact(k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) * v[j];
    s += v[i] * row;
  }
  return s;
}

}  // namespace

bool KernelMatrix::is_symmetric() const {
  if (values.rows() != values.cols()) return false;
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = i + 1; j < values.cols(); ++j)
      if (values(i, j) != values(j, i)) return false;
  return true;
}

KernelMatrix make_kernel(const Eigen::MatrixXd& values, double tol) {
  KernelMatrix k;
  k.values = values;
  k.tol = tol;
  for (Eigen::Index i = 0; i < values.rows(); ++i) k.points.push_back(static_cast<CosetId>(i));
  require_symmetric(k);
  return k;
}

Rational exact_quadratic_form(const KernelMatrix& k, const std::vector<double>& v) {
  std::vector<Rational> r;
  r.reserve(v.size());
  for (double x : v) r.push_back(exact(x));
  return exact_form(k, r);
}

KernelVerdict is_positive_type(const KernelMatrix& k, double tol) {
  require_symmetric(k);
  KernelVerdict verdict;
  if (k.size() == 0) return verdict;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.values);
  verdict.eigenvalue = solver.eigenvalues()(0);
  if (verdict.eigenvalue >= -tol) return verdict;

  auto witness = tidy_witness(solver.eigenvectors().col(0));
  std::vector<Rational> r;
  for (double x : witness) r.push_back(exact(x));
  const Rational value = exact_form(k, r);
  if (value < -exact(tol) * exact_norm2(r)) {
    verdict.yes = false;
    verdict.witness = std::move(witness);
    verdict.witness_value = static_cast<double>(value);
  }
  return verdict;
}

KernelVerdict is_cnd(const KernelMatrix& k, double tol) {
  require_symmetric(k);
  const auto n = static_cast<Eigen::Index>(k.size());
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(k.values(i, i)) > tol) throw InvalidInput("is_cnd: kernel has a nonzero diagonal entry");
  KernelVerdict verdict;
  if (n < 2) return verdict;

  // orthonormal basis of the sum-zero hyperplane: Householder complement of the ones vector
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd basis = q.rightCols(n - 1);
  const Eigen::MatrixXd restricted = basis.transpose() * k.values * basis;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (restricted + restricted.transpose()));
  verdict.eigenvalue = solver.eigenvalues()(n - 2);
  if (verdict.eigenvalue <= tol) return verdict;

  auto witness = tidy_witness(basis * solver.eigenvectors().col(n - 2));
  // Restore sum(v) = 0 exactly on the largest entry.
  std::vector<Rational> r;
  for (double x : witness) r.push_back(exact(x));
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < witness.size(); ++i)
    if (std::abs(witness[i]) > std::abs(witness[pivot])) pivot = i;
  Rational rest = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (i != pivot) rest += r[i];
  r[pivot] = -rest;
  witness[pivot] = static_cast<double>(r[pivot]);

  const Rational value = exact_form(k, r);
  if (value > exact(tol) * exact_norm2(r)) {
    verdict.yes = false;
    verdict.witness = std::move(witness);
    verdict.witness_value = static_cast<double>(value);
  }
  return verdict;
}

std::vector<std::vector<double>> schoenberg_embed(const KernelMatrix& k, std::size_t base, double tol) {
  if (base >= k.size()) throw InvalidInput("schoenberg_embed: base index out of range");
  const KernelVerdict verdict = is_cnd(k, tol);
  if (!verdict.yes) throw KernelRejected("schoenberg_embed: kernel is not conditionally of negative type", verdict.witness);

  const auto n = static_cast<Eigen::Index>(k.size());
  const auto b = static_cast<Eigen::Index>(base);
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = 0.5 * (k.values(i, b) + k.values(j, b) - k.values(i, j));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);

  std::vector<std::vector<double>> coords(static_cast<std::size_t>(n));
  for (Eigen::Index e = n - 1; e >= 0; --e) {
    const double lambda = solver.eigenvalues()(e);
    if (lambda <= tol) break;
    Eigen::VectorXd v = solver.eigenvectors().col(e);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v(big) < 0) v = -v;
    const double s = std::sqrt(lambda);
    for (Eigen::Index i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)].push_back(v(i) * s);
  }
  return coords;
}

std::vector<CosetId> ball_points(const BallTable& table, int radius) {
  std::vector<CosetId> out;
  for (const auto& dc : double_cosets_up_to(table, radius)) out.insert(out.end(), dc.members.begin(), dc.members.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> pair_double_cosets(const BallTable& table, const std::vector<CosetId>& points) {
  std::vector<GroupElement> inverses;
  inverses.reserve(points.size());
  for (CosetId p : points) inverses.push_back(invert(table.rep(p)));
  std::vector<std::vector<std::size_t>> out(points.size(), std::vector<std::size_t>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto c = table.find(multiply(inverses[i], table.rep(points[j])));
      const auto o = c ? table.orbit_of(*c) : std::nullopt;
      if (!o) {
        const auto di = table.depth(points[i]), dj = table.depth(points[j]);
        throw OutOfRange("pair double coset outside table", di && dj ? *di + *dj : -1);
      }
      out[i][j] = *o;
    }
  }
  return out;
}

namespace {

// Radius r of the ball formed by the points, or InvalidInput.
int ball_radius_of(const KernelMatrix& k, const BallTable& table) {
  int r = 0;
  for (CosetId p : k.points) {
    if (p >= table.size()) throw InvalidInput("kernel point not in table");
    const auto d = table.depth(p);
    if (!d) throw InvalidInput("kernel point with unknown depth");
    r = std::max(r, *d);
  }
  if (r > table.radius()) throw OutOfRange("kernel points beyond table radius", r);
  std::vector<CosetId> sorted = k.points;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != ball_points(table, r)) throw InvalidInput("kernel points do not form a ball B(Lambda, r)");
  if (table.radius() < 2 * r)
    throw OutOfRange("kernel transfer needs a table of radius " + std::to_string(2 * r), 2 * r);
  return r;
}

}  // namespace

std::variant<BiinvariantFunction, TransferViolation> kernel_to_biinvariant(const KernelMatrix& k,
                                                                            const BallTable& table, double tol) {
  require_symmetric(k);
  const int r = ball_radius_of(k, table);
  const auto dc = pair_double_cosets(table, k.points);

  struct Seen {
    double value;
    std::pair<CosetId, CosetId> pair;
  };
  std::map<std::size_t, Seen> seen;
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double v = k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const std::pair<CosetId, CosetId> pair{k.points[i], k.points[j]};
      auto [it, fresh] = seen.try_emplace(dc[i][j], Seen{v, pair});
      if (!fresh && std::abs(it->second.value - v) > tol)
        return TransferViolation{dc[i][j], it->second.pair, pair, it->second.value, v};
    }
  }
  BiinvariantFunction psi;
  psi.support_radius = 2 * r;
  for (const auto& [d, s] : seen)
    if (s.value != 0.0) psi.values.emplace(d, s.value);
  return psi;
}

KernelMatrix biinvariant_to_kernel(const BiinvariantFunction& psi, const BallTable& table, int radius) {
  if (2 * radius > table.radius())
    throw OutOfRange("biinvariant_to_kernel needs a table of radius " + std::to_string(2 * radius), 2 * radius);
  KernelMatrix k;
  k.points = ball_points(table, radius);
  const auto dc = pair_double_cosets(table, k.points);
  const auto n = static_cast<Eigen::Index>(k.points.size());
  k.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto it = psi.values.find(dc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      if (it != psi.values.end()) k.values(i, j) = it->second;
    }
  }
  const Eigen::VectorXd diag = k.values.diagonal();
  if (n > 0 && (diag.array() == 0.0).all()) k.normalized = Normalization::negative_type;
  else if (n > 0 && (diag.array() == 1.0).all()) k.normalized = Normalization::positive_type;
  return k;
}

int propagation(const KernelMatrix& k, const BallTable& table) {
  const auto dc = pair_double_cosets(table, k.points);
  int out = 0;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j)
      if (k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0)
        out = std::max(out, table.orbits()[dc[i][j]].depth);
  return out;
}

std::vector<std::pair<int, double>> properness_profile(const KernelMatrix& k, const BallTable& table) {
  const auto dc = pair_double_cosets(table, k.points);
  std::map<int, double> min_at;  // exact distance -> min value
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      const int d = table.orbits()[dc[i][j]].depth;
      const double v = k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      auto [it, fresh] = min_at.try_emplace(d, v);
      if (!fresh) it->second = std::min(it->second, v);
    }
  }
  std::vector<std::pair<int, double>> out;
  double running = std::numeric_limits<double>::infinity();
  for (auto it = min_at.rbegin(); it != min_at.rend(); ++it) {
    running = std::min(running, it->second);
    out.emplace_back(it->first, running);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace heckepair
