#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whkit/types.hpp"

namespace whkit {

using Face = std::array<std::size_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  std::size_t vertex_count() const { return vertices.size(); }
  /// Throws ContractError on out-of-range or repeated face indices, or non-finite coordinates.
  void validate() const;
  double total_area() const;
};

struct PointCloud {
  std::vector<Vec3> points;
  /// Ground-truth 2D coordinates, present only for synthetic data.
  std::optional<std::vector<Vec2>> parameterization;

  void validate() const;
};

/// Sorted, duplicate-free vertex indices lying on a surface boundary.
class BoundarySet {
public:
  BoundarySet() = default;
  /// Requires strictly increasing input; throws ContractError otherwise.
  explicit BoundarySet(std::vector<std::size_t> sorted_indices);
  static BoundarySet from_unsorted(std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t v) const;
  void check_range(std::size_t vertex_count) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  bool operator==(const BoundarySet&) const = default;

private:
  std::vector<std::size_t> indices_;
};

struct VertexAreas {
  Vector values;

  double total() const { return values.sum(); }
};

struct Arc {
  std::uint32_t target;
  double weight;
};

struct Edge {
  std::size_t u;
  std::size_t v;
  double weight;
};

/// Undirected weighted graph in compressed adjacency form. Each undirected
/// edge is stored as two arcs; parallel edges are kept as given.
class WeightedGraph {
public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return arcs_.size() / 2; }
  std::span<const Arc> neighbors(std::size_t v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  std::vector<Edge> edges() const;  // u < v, sorted

private:
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

/// Sample positions plus the edge graph whose weights are Euclidean edge lengths.
class SurfaceGraph {
public:
  SurfaceGraph() = default;
  /// Deduplicates vertex pairs (either orientation) and drops self loops.
  SurfaceGraph(std::vector<Vec3> coords, std::span<const std::pair<std::size_t, std::size_t>> pairs);

  std::size_t vertex_count() const { return coords_.size(); }
  std::size_t edge_count() const { return adjacency_.edge_count(); }
  const std::vector<Vec3>& coords() const { return coords_; }
  const WeightedGraph& adjacency() const { return adjacency_; }
  std::span<const Arc> neighbors(std::size_t v) const { return adjacency_.neighbors(v); }

private:
  std::vector<Vec3> coords_;
  WeightedGraph adjacency_;
};

/// Component label per vertex (labels ordered by smallest member) and component count.
struct Components {
  std::vector<std::size_t> label;
  std::size_t count = 0;
};
Components connected_components(const WeightedGraph& graph);

TriangleMesh parse_off(std::istream& in, const std::string& source = "<stream>");
TriangleMesh load_mesh(const std::filesystem::path& path);
void save_off(const std::filesystem::path& path, const TriangleMesh& mesh);

PointCloud parse_xyz(std::istream& in, const std::string& source = "<stream>");
PointCloud load_pointcloud(const std::filesystem::path& path);
void save_xyz(const std::filesystem::path& path, const PointCloud& cloud);

BoundarySet parse_boundary(std::istream& in, std::size_t vertex_count, const std::string& source = "<stream>");
BoundarySet load_boundary(const std::filesystem::path& path, std::size_t vertex_count);
void save_boundary(const std::filesystem::path& path, const BoundarySet& boundary);

/// Endpoints of edges incident to exactly one face.
BoundarySet extract_boundary(const TriangleMesh& mesh);

/// Barycentric lumped areas: each vertex takes a third of every incident triangle.
VertexAreas vertex_areas(const TriangleMesh& mesh);

SurfaceGraph mesh_graph(const TriangleMesh& mesh);

/// Union-symmetrized k-nearest-neighbour graph; ties broken by lower index.
SurfaceGraph knn_graph(const PointCloud& cloud, std::size_t k);

}  // namespace whkit
