#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace p2d2 {

/// Exact incremental k-d tree over fixed-dimension points.
///
/// Points are appended one at a time (ids are insertion order) and never
/// moved, matching tree growth where every iteration queries the nodes added
/// so far. nearest() is exact: it returns the same (id, squared distance)
/// as a linear scan with ties broken by lowest id. Pruning compares the
/// splitting-plane distance with <= so equal-distance candidates on the far
/// side are still visited; IEEE rounding is monotone, so a subtree whose
/// plane distance exceeds the current best cannot contain a better point.
class KdTree {
 public:
  explicit KdTree(int dim);

  int size() const { return static_cast<int>(nodes_.size()); }
  int dim() const { return dim_; }

  /// Appends a point; its id is the current size().
  void insert(const Eigen::VectorXd& point);

  /// (id, squared distance) of the closest point, lowest id on ties.
  /// Requires a non-empty tree.
  std::pair<int, double> nearest(const Eigen::VectorXd& query) const;

  const Eigen::VectorXd& point(int id) const { return nodes_[id].p; }

 private:
  struct Node {
    Eigen::VectorXd p;
    int left = -1;
    int right = -1;
  };

  void search(int id, int axis, const Eigen::VectorXd& query,
              std::pair<double, int>& best) const;

  int dim_;
  std::vector<Node> nodes_;
};

/// Linear-scan reference with the same tie-break; the correctness oracle for
/// KdTree::nearest.
std::pair<int, double> brute_force_nearest(const std::vector<Eigen::VectorXd>& points,
                                           const Eigen::VectorXd& query);

}  // namespace p2d2
