#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace locdyn {

// Measurement/communication graph over n mobile nodes (0-based ids)
// plus the anchor set with per-node visibility lists.
// Immutable after build_network; safe to share across threads.
struct NetworkGraph {
  int n = 0;                                  // mobile node count
  int p = 2;                                  // embedding dimension
  std::vector<std::pair<int, int>> edges;     // i < j, sorted, deduplicated
  std::vector<Eigen::VectorXd> anchors;       // anchor positions, each in R^p
  std::vector<std::vector<int>> visibility;   // per node: sorted anchor ids

  std::vector<std::vector<int>> neighbors;    // per node: sorted neighbor ids
  std::vector<int> degree;

  int anchor_count() const { return static_cast<int>(anchors.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  // Index of edge {i,j} in `edges`, or -1.
  int edge_index(int i, int j) const;
};

// Arc-node incidence coefficients and graph Laplacian.
// Orientation: for edge e = {i, j} with i < j, C(e,i) = +1, C(e,j) = -1.
struct IncidenceStructure {
  Eigen::MatrixXd incidence;  // |E| x n
  Eigen::MatrixXd laplacian;  // n x n, C^T C
};

struct LocalizabilityReport {
  bool pass = false;
  std::vector<int> anchorless_nodes;  // warning only
  std::string explanation;
};

// Validates and canonicalizes the graph description. Edge pairs may be
// given in either order; duplicates collapse to one edge.
// Throws DisconnectedGraph, DuplicateSelfLoop, BadDimension.
NetworkGraph build_network(int n, int p,
                           const std::vector<std::pair<int, int>>& edges,
                           const std::vector<Eigen::VectorXd>& anchors,
                           const std::vector<std::vector<int>>& visibility);

IncidenceStructure incidence_and_laplacian(const NetworkGraph& graph);

// Anchor-count check: fails when m < p + 1; anchor-free nodes are a
// warning only, collaboration may still localize them.
LocalizabilityReport check_localizability(const NetworkGraph& graph);

// Loads a graph from a JSON file:
//   {"n": 3, "p": 2, "edges": [[0,1],[1,2]],
//    "anchors": [[0,0],[1,0],[0,1]], "visibility": [[0,1,2],[0,1,2],[0,1,2]]}
// "visibility" may be omitted, meaning every anchor visible to every node.
NetworkGraph load_network_json(const std::string& path);

}  // namespace locdyn
