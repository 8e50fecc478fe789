// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Exact nearest-neighbor queries over an immutable point-cloud snapshot.
// All queries return exactly what an exhaustive linear scan would, including
// the lowest-index tie-break: subtrees are only pruned when their bounding
// slab is strictly farther than the current best (distance², index) pair.

#ifndef GDM_CORE_SPATIAL_INDEX_HPP
#define GDM_CORE_SPATIAL_INDEX_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <queue>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

struct Neighbor {
  std::size_t index;
  double distance;
};

/// Static kd-tree over a snapshot of a PointCloud. Safe for concurrent reads.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud) : points_(cloud.data()) {
    if (points_.empty()) {
      throw EmptyInput("cannot index an empty cloud");
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, points_.size());
  }

  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

  /// Index and distance of the exact nearest point; ties -> lowest index.
  Neighbor nearest(const Vec3& query) const {
    Best best;
    search_nearest(root_, query, best);
    return {best.index, std::sqrt(best.d2)};
  }

  /// The k exact nearest points ordered by (distance, index) ascending.
  /// k is clamped to the cloud size.
  std::vector<Neighbor> k_nearest(const Vec3& query, std::size_t k) const {
    k = std::min(k, points_.size());
    if (k == 0) return {};
    KBest best(k);
    search_k(root_, query, best);
    std::vector<Key> keys(best.heap.begin(), best.heap.end());
    std::sort(keys.begin(), keys.end());
    std::vector<Neighbor> out;
    out.reserve(keys.size());
    for (const Key& key : keys) {
      out.push_back({key.index, std::sqrt(key.d2)});
    }
    return out;
  }

  /// Indices of all points with distance <= radius, ascending index order.
  std::vector<std::size_t> radius(const Vec3& query, double r) const {
    if (r < 0.0) {
      throw InvalidArgument("radius must be non-negative");
    }
    std::vector<std::size_t> out;
    search_radius(root_, query, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t kLeafSize = 16;

  struct Node {
    double split = 0.0;
    int axis = -1;  // -1 marks a leaf
    int left = -1;
    int right = -1;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  struct Key {
    double d2;
    std::size_t index;
    bool operator<(const Key& o) const {
      return d2 < o.d2 || (d2 == o.d2 && index < o.index);
    }
  };

  struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    bool beats(double cand_d2, std::size_t cand_index) const {
      return cand_d2 < d2 || (cand_d2 == d2 && cand_index < index);
    }
  };

  struct KBest {
    explicit KBest(std::size_t k) : capacity(k) { heap.reserve(k); }
    std::size_t capacity;
    std::vector<Key> heap;  // max-heap on (d2, index)

    bool full() const { return heap.size() == capacity; }
    const Key& worst() const { return heap.front(); }

    void offer(const Key& key) {
      if (!full()) {
        heap.push_back(key);
        std::push_heap(heap.begin(), heap.end());
      } else if (key < worst()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = key;
        std::push_heap(heap.begin(), heap.end());
      }
    }
  };

  int build(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin > kLeafSize) {
      // Split on the widest axis at the median.
      Vec3 lo = points_[order_[begin]];
      Vec3 hi = lo;
      for (std::size_t i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
      }
      int axis = 0;
      (hi - lo).maxCoeff(&axis);
      const std::size_t mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid,
                       order_.begin() + end,
                       [&](std::size_t a, std::size_t b) {
                         return points_[a][axis] < points_[b][axis];
                       });
      node.axis = axis;
      node.split = points_[order_[mid]][axis];
      const int id = static_cast<int>(nodes_.size());
      nodes_.push_back(node);
      const int left = build(begin, mid);
      const int right = build(mid, end);
      nodes_[id].left = left;
      nodes_[id].right = right;
      return id;
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    return id;
  }

  void scan_leaf(const Node& node, const Vec3& query, Best& best) const {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const double d2 = (points_[idx] - query).squaredNorm();
      if (best.beats(d2, idx)) {
        best.d2 = d2;
        best.index = idx;
      }
    }
  }

  void search_nearest(int node_id, const Vec3& query, Best& best) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      scan_leaf(node, query, best);
      return;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_nearest(near, query, best);
    // <= keeps equidistant candidates reachable so index ties stay exact.
    if (delta * delta <= best.d2) {
      search_nearest(far, query, best);
    }
  }

  void search_k(int node_id, const Vec3& query, KBest& best) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        best.offer({(points_[idx] - query).squaredNorm(), idx});
      }
      return;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_k(near, query, best);
    if (!best.full() || delta * delta <= best.worst().d2) {
      search_k(far, query, best);
    }
  }

  void search_radius(int node_id, const Vec3& query, double r2,
                     std::vector<std::size_t>& out) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        if ((points_[idx] - query).squaredNorm() <= r2) {
          out.push_back(idx);
        }
      }
      return;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_radius(near, query, r2, out);
    if (delta * delta <= r2) {
      search_radius(far, query, r2, out);
    }
  }

  std::vector<Vec3> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Convenience alias matching the module vocabulary.
inline SpatialIndex build_index(const PointCloud& cloud) {
  return SpatialIndex(cloud);
}

}  // namespace gdm

#endif  // GDM_CORE_SPATIAL_INDEX_HPP
