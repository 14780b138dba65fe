#include "p2d2/kdtree.hpp"

#include <limits>
#include <stdexcept>

namespace p2d2 {

KdTree::KdTree(int dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("KdTree: dim must be positive");
}

void KdTree::insert(const Eigen::VectorXd& point) {
  if (point.size() != dim_) {
    throw std::invalid_argument("KdTree::insert: dimension mismatch");
  }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{point, -1, -1});
  if (id == 0) return;

  int cur = 0;
  int axis = 0;
  for (;;) {
    Node& n = nodes_[cur];
    int& child = point[axis] < n.p[axis] ? n.left : n.right;
    if (child == -1) {
      child = id;
      return;
    }
    cur = child;
    axis = (axis + 1) % dim_;
  }
}

std::pair<int, double> KdTree::nearest(const Eigen::VectorXd& query) const {
  if (nodes_.empty()) throw std::logic_error("KdTree::nearest: empty tree");
  if (query.size() != dim_) {
    throw std::invalid_argument("KdTree::nearest: dimension mismatch");
  }
  std::pair<double, int> best{std::numeric_limits<double>::infinity(), -1};
  search(0, 0, query, best);
  return {best.second, best.first};
}

void KdTree::search(int id, int axis, const Eigen::VectorXd& query,
                    std::pair<double, int>& best) const {
  const Node& n = nodes_[id];
  double d2 = (n.p - query).squaredNorm();
  if (std::pair<double, int>{d2, id} < best) best = {d2, id};

  double diff = query[axis] - n.p[axis];
  int near = diff < 0.0 ? n.left : n.right;
  int far = diff < 0.0 ? n.right : n.left;
  int next_axis = (axis + 1) % dim_;
  if (near != -1) search(near, next_axis, query, best);
  if (far != -1 && diff * diff <= best.first) search(far, next_axis, query, best);
}

std::pair<int, double> brute_force_nearest(const std::vector<Eigen::VectorXd>& points,
                                           const Eigen::VectorXd& query) {
  if (points.empty()) throw std::logic_error("brute_force_nearest: no points");
  std::pair<double, int> best{std::numeric_limits<double>::infinity(), -1};
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    double d2 = (points[i] - query).squaredNorm();
    if (std::pair<double, int>{d2, i} < best) best = {d2, i};
  }
  return {best.second, best.first};
}

}  // namespace p2d2
