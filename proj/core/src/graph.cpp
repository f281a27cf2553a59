#include "bfgsadmm/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

void validate_structure(int agents, std::span<const Edge> edges) {
  if (agents < 1) {
    throw Error("topology needs at least one agent, got " + std::to_string(agents));
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= agents || e.j >= agents) {
      throw Error("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                  ") references a vertex outside [0, " + std::to_string(agents) + ")");
    }
    if (e.i == e.j) {
      throw Error("self-loop at vertex " + std::to_string(e.i));
    }
    if (!seen.emplace(e.i, e.j).second) {
      throw Error("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
  }
}

}  // namespace

Topology::Topology(int agents, std::vector<Edge> edges) : agents_(agents), edges_(std::move(edges)) {
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  validate_structure(agents_, edges_);
  if (!is_connected(agents_, edges_)) {
    throw Error("topology with " + std::to_string(agents_) + " agents and " +
                std::to_string(edges_.size()) + " edges is not connected");
  }
  neighbors_.resize(static_cast<std::size_t>(agents_));
  for (const Edge& e : edges_) {
    neighbors_[e.i].push_back(e.j);
    neighbors_[e.j].push_back(e.i);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

Topology Topology::path(int agents) {
  std::vector<Edge> edges;
  for (int k = 0; k + 1 < agents; ++k) edges.push_back({k, k + 1});
  return Topology(agents, std::move(edges));
}

Topology Topology::star(int agents) {
  std::vector<Edge> edges;
  for (int k = 1; k < agents; ++k) edges.push_back({0, k});
  return Topology(agents, std::move(edges));
}

Topology Topology::complete(int agents) {
  std::vector<Edge> edges;
  for (int i = 0; i < agents; ++i)
    for (int j = i + 1; j < agents; ++j) edges.push_back({i, j});
  return Topology(agents, std::move(edges));
}

bool is_connected(int agents, std::span<const Edge> edges) {
  if (agents <= 0) return false;
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(agents));
  for (const Edge& e : edges) {
    adjacency[e.i].push_back(e.j);
    adjacency[e.j].push_back(e.i);
  }
  std::vector<char> visited(static_cast<std::size_t>(agents), 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adjacency[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == agents;
}

Topology build_random_binomial(int agents, double p, std::uint64_t seed, int max_attempts) {
  if (agents < 2) {
    throw Error("random binomial graph needs at least 2 agents, got " + std::to_string(agents));
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error("edge probability must lie in [0, 1], got " + std::to_string(p));
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int i = 0; i < agents; ++i) {
      for (int j = i + 1; j < agents; ++j) {
        if (coin(rng)) edges.push_back({i, j});
      }
    }
    if (is_connected(agents, edges)) return Topology(agents, std::move(edges));
  }
  std::ostringstream msg;
  msg << "could not draw a connected binomial graph with m=" << agents << ", p=" << p
      << ", seed=" << seed << " after " << max_attempts << " attempts";
  throw Error(msg.str());
}

GraphMatrices matrices(const Topology& topology) {
  const Eigen::Index m = topology.agents();
  const Eigen::Index n = topology.edge_count();
  GraphMatrices g;
  g.a_s = Eigen::MatrixXd::Zero(n, m);
  g.a_d = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Edge& e = topology.edges()[static_cast<std::size_t>(k)];
    g.a_s(k, e.i) = 1.0;
    g.a_d(k, e.j) = 1.0;
  }
  g.e_s = g.a_s - g.a_d;
  g.e_u = g.a_s + g.a_d;
  g.l_s = g.e_s.transpose() * g.e_s;
  g.l_u = g.e_u.transpose() * g.e_u;
  g.delta = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) g.delta(i, i) = topology.degree(static_cast<int>(i));
  return g;
}

void write_edge_list(std::ostream& out, const Topology& topology) {
  out << topology.agents() << ' ' << topology.edge_count() << '\n';
  for (const Edge& e : topology.edges()) out << e.i << ' ' << e.j << '\n';
}

Topology read_edge_list(std::istream& in) {
  int agents = 0;
  int count = 0;
  if (!(in >> agents >> count) || count < 0) {
    throw Error("edge list: expected header \"m n\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Edge e;
    if (!(in >> e.i >> e.j)) {
      throw Error("edge list: expected " + std::to_string(count) + " edges, read " + std::to_string(k));
    }
    edges.push_back(e);
  }
  return Topology(agents, std::move(edges));
}

}  // namespace bfgsadmm
