#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

MatrixXd left_singular_columns(const MatrixXd& a, double tol) {
  if (a.cols() == 0) return MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

std::vector<VectorXd> sphere_samples(const MatrixXd& q, int points) {
  std::vector<VectorXd> out;
  if (q.cols() == 1) {
    out.push_back(q.col(0));
    out.push_back(-q.col(0));
  } else if (q.cols() == 2) {
    for (int i = 0; i < points; ++i) {
      const double t = 2.0 * std::numbers::pi * i / points;
      out.push_back(std::cos(t) * q.col(0) + std::sin(t) * q.col(1));
    }
  } else if (q.cols() == 3) {
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < points; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / points;
      const double r = std::sqrt(1.0 - z * z);
      const double t = golden * i;
      out.push_back(r * std::cos(t) * q.col(0) + r * std::sin(t) * q.col(1) + z * q.col(2));
    }
  } else if (q.cols() > 3) {
    throw std::invalid_argument("brute_force_cosine: dimension above 3");
  }
  return out;
}

void expand_into(const altproj::Word& w, std::vector<int>& out) {
  for (const auto& f : w.factors()) {
    for (std::uint64_t e = 0; e < f.exponent; ++e) {
      if (f.group) expand_into(*f.group, out);
      else out.push_back(f.letter);
    }
  }
}

}  // namespace

VectorXd pinv_solve(const MatrixXd& a, const VectorXd& c) {
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-12 * s(0);
  VectorXd utc = svd.matrixU().transpose() * c;
  for (Eigen::Index i = 0; i < s.size(); ++i) utc(i) = s(i) > cutoff ? utc(i) / s(i) : 0.0;
  return svd.matrixV() * utc;
}

MatrixXd intersection_basis(const std::vector<MatrixXd>& bases, double sv_tol) {
  const Eigen::Index n = bases.front().rows();
  MatrixXd stacked(n * static_cast<Eigen::Index>(bases.size()), n);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
        MatrixXd::Identity(n, n) - bases[i] * bases[i].transpose();
  }
  Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > sv_tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

double brute_force_cosine(const MatrixXd& q1, const MatrixXd& q2, int points) {
  const Eigen::Index n = q1.rows();
  const MatrixXd m = intersection_basis({q1, q2});
  const MatrixXd keep = MatrixXd::Identity(n, n) - m * m.transpose();
  const MatrixXd d1 = left_singular_columns(keep * q1, 1e-8);
  const MatrixXd d2 = left_singular_columns(keep * q2, 1e-8);
  const auto s1 = sphere_samples(d1, points);
  const auto s2 = sphere_samples(d2, points);
  double best = 0.0;
  for (const auto& x : s1)
    for (const auto& y : s2) best = std::max(best, std::abs(x.dot(y)));
  return best;
}

std::vector<int> expand(const altproj::Word& w) {
  std::vector<int> out;
  expand_into(w, out);
  return out;
}

MatrixXd word_product(const altproj::Word& w, const std::vector<MatrixXd>& ops) {
  const Eigen::Index n = ops.front().rows();
  MatrixXd out = MatrixXd::Identity(n, n);
  for (int a : expand(w)) out = out * ops.at(static_cast<std::size_t>(a - 1));
  return out;
}

double spectral_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.transpose() * a);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace oracle
