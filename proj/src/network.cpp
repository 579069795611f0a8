#include "locdyn/network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <vector>

#include <json.hpp>

#include "locdyn/errors.hpp"

namespace locdyn {

int NetworkGraph::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, j));
  if (it == edges.end() || *it != std::make_pair(i, j)) return -1;
  return static_cast<int>(it - edges.begin());
}

NetworkGraph build_network(int n, int p,
                           const std::vector<std::pair<int, int>>& edges,
                           const std::vector<Eigen::VectorXd>& anchors,
                           const std::vector<std::vector<int>>& visibility) {
  if (p != 2 && p != 3) throw BadDimension("embedding dimension must be 2 or 3");
  if (n < 1) throw BadDimension("need at least one mobile node");
  for (const auto& a : anchors) {
    if (a.size() != p) throw BadDimension("anchor dimension does not match p");
  }
  const int m = static_cast<int>(anchors.size());
  if (visibility.size() != static_cast<std::size_t>(n))
    throw BadDimension("visibility list must have one entry per node");

  NetworkGraph g;
  g.n = n;
  g.p = p;
  g.anchors = anchors;

  std::set<std::pair<int, int>> edge_set;
  for (auto [i, j] : edges) {
    if (i == j) throw DuplicateSelfLoop("self-loop on node " + std::to_string(i));
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw BadDimension("edge endpoint out of range");
    if (i > j) std::swap(i, j);
    edge_set.insert({i, j});
  }
  g.edges.assign(edge_set.begin(), edge_set.end());

  g.visibility.resize(n);
  for (int i = 0; i < n; ++i) {
    std::set<int> vis(visibility[i].begin(), visibility[i].end());
    for (int k : vis) {
      if (k < 0 || k >= m) throw BadDimension("anchor id out of range");
    }
    g.visibility[i].assign(vis.begin(), vis.end());
  }

  g.neighbors.assign(n, {});
  g.degree.assign(n, 0);
  for (auto [i, j] : g.edges) {
    g.neighbors[i].push_back(j);
    g.neighbors[j].push_back(i);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  for (int i = 0; i < n; ++i) g.degree[i] = static_cast<int>(g.neighbors[i].size());

  // connectivity (BFS)
  if (n > 1) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    if (count != n) throw DisconnectedGraph("graph is not connected");
  }
  return g;
}

IncidenceStructure incidence_and_laplacian(const NetworkGraph& graph) {
  const int n = graph.n;
  const int e = graph.edge_count();
  IncidenceStructure s;
  s.incidence = Eigen::MatrixXd::Zero(e, n);
  for (int k = 0; k < e; ++k) {
    auto [i, j] = graph.edges[k];
    s.incidence(k, i) = 1.0;
    s.incidence(k, j) = -1.0;
  }
  s.laplacian = s.incidence.transpose() * s.incidence;
  return s;
}

LocalizabilityReport check_localizability(const NetworkGraph& graph) {
  LocalizabilityReport rep;
  const int m = graph.anchor_count();
  rep.pass = m >= graph.p + 1;
  if (!rep.pass) {
    rep.explanation = "need at least p+1 = " + std::to_string(graph.p + 1) +
                      " anchors, have " + std::to_string(m);
    return rep;
  }
  for (int i = 0; i < graph.n; ++i) {
    if (graph.visibility[i].empty()) rep.anchorless_nodes.push_back(i);
  }
  rep.explanation = "anchor count sufficient";
  if (!rep.anchorless_nodes.empty()) {
    rep.explanation += "; warning: " +
                       std::to_string(rep.anchorless_nodes.size()) +
                       " node(s) see no anchor (collaboration may still localize them)";
  }
  return rep;
}

NetworkGraph load_network_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  nlohmann::json j;
  in >> j;

  const int n = j.at("n").get<int>();
  const int p = j.at("p").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0), e.at(1));
  std::vector<Eigen::VectorXd> anchors;
  for (const auto& a : j.at("anchors")) {
    Eigen::VectorXd v(a.size());
    for (int d = 0; d < static_cast<int>(a.size()); ++d) v(d) = a.at(d);
    anchors.push_back(v);
  }
  std::vector<std::vector<int>> vis;
  if (j.contains("visibility")) {
    vis = j.at("visibility").get<std::vector<std::vector<int>>>();
  } else {
    std::vector<int> all(anchors.size());
    for (std::size_t k = 0; k < anchors.size(); ++k) all[k] = static_cast<int>(k);
    vis.assign(n, all);
  }
  return build_network(n, p, edges, anchors, vis);
}

}  // namespace locdyn
