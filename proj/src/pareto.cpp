#include "rmobo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rmobo {

bool dominates(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: size");
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

std::vector<int> non_dominated_sort(const Matrix& Y) {
  const Eigen::Index n = Y.rows();
  if (n < 1) throw std::invalid_argument("non_dominated_sort: empty");
  std::vector<std::vector<int>> dominated_by(n);
  std::vector<int> dom_count(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Vector a = Y.row(i), b = Y.row(j);
      if (dominates(a, b)) {
        dominated_by[i].push_back(static_cast<int>(j));
        ++dom_count[j];
      } else if (dominates(b, a)) {
        dominated_by[j].push_back(static_cast<int>(i));
        ++dom_count[i];
      }
    }
  }
  std::vector<int> rank(n, -1);
  std::vector<int> current;
  for (Eigen::Index i = 0; i < n; ++i)
    if (dom_count[i] == 0) current.push_back(static_cast<int>(i));
  int r = 0;
  while (!current.empty()) {
    std::vector<int> next;
    for (int i : current) {
      rank[i] = r;
      for (int j : dominated_by[i])
        if (--dom_count[j] == 0) next.push_back(j);
    }
    current = std::move(next);
    ++r;
  }
  return rank;
}

ParetoFront extract_front(const Matrix& Y, const Matrix& inputs) {
  const auto rank = non_dominated_sort(Y);
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    if (rank[i] != 0) continue;
    bool dup = false;
    for (int k : keep) {
      if ((Y.row(i) - Y.row(k)).cwiseAbs().maxCoeff() <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(static_cast<int>(i));
  }
  ParetoFront front;
  front.points.resize(keep.size(), Y.cols());
  if (inputs.rows() == Y.rows())
    front.inputs.resize(keep.size(), inputs.cols());
  for (size_t k = 0; k < keep.size(); ++k) {
    front.points.row(k) = Y.row(keep[k]);
    if (inputs.rows() == Y.rows()) front.inputs.row(k) = inputs.row(keep[k]);
  }
  return front;
}

double hypervolume_2d(const Matrix& front, const Vector& ref) {
  if (front.cols() != 2 || ref.size() != 2)
    throw std::invalid_argument("hypervolume_2d: M != 2");
  std::vector<std::pair<double, double>> pts;
  for (Eigen::Index i = 0; i < front.rows(); ++i)
    if (front(i, 0) > ref[0] && front(i, 1) > ref[1])
      pts.emplace_back(front(i, 0), front(i, 1));
  if (pts.empty()) return 0.0;
  // Sweep from the largest first objective; area accrues whenever the
  // second objective improves on everything to the right.
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double hv = 0.0;
  double best_y2 = ref[1];
  for (const auto& [y1, y2] : pts) {
    if (y2 > best_y2) {
      hv += (y1 - ref[0]) * (y2 - best_y2);
      best_y2 = y2;
    }
  }
  return hv;
}

namespace {

double gd_p2(const Matrix& A, const Matrix& B) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      best = std::min(best, (A.row(i) - B.row(j)).squaredNorm());
    acc += best;
  }
  return std::sqrt(acc / static_cast<double>(A.rows()));
}

}  // namespace

double avd(const Matrix& F, const Matrix& F_star) {
  if (F.rows() == 0 || F_star.rows() == 0)
    throw std::invalid_argument("avd: empty set");
  if (F.cols() != F_star.cols()) throw std::invalid_argument("avd: M mismatch");
  return std::max(gd_p2(F, F_star), gd_p2(F_star, F));
}

Matrix scale_objectives(const Matrix& Y, const Matrix& F_star_raw) {
  if (F_star_raw.rows() == 0) throw std::invalid_argument("scale: empty ref");
  if (Y.cols() != F_star_raw.cols())
    throw std::invalid_argument("scale: M mismatch");
  const Vector lo = F_star_raw.colwise().minCoeff();
  const Vector hi = F_star_raw.colwise().maxCoeff();
  for (Eigen::Index j = 0; j < lo.size(); ++j)
    if (!(hi[j] > lo[j]))
      throw std::invalid_argument(
          "scale_objectives: zero range in objective " + std::to_string(j));
  Matrix out = Y;
  out.rowwise() -= lo.transpose();
  out.array().rowwise() /= (hi - lo).transpose().array();
  return out;
}

}  // namespace rmobo
