#include "sdpal/instances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdpal/errors.hpp"
#include "sdpal/rng.hpp"

namespace sdpal {

Graph Graph::from_edges(int num_vertices,
                        std::vector<std::pair<int, int>> edges) {
  if (num_vertices < 1) throw DimensionError("Graph: need at least one vertex");
  for (auto& [i, j] : edges) {
    if (i == j) {
      throw DimensionError("Graph: loop at vertex " + std::to_string(i));
    }
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= num_vertices) {
      throw DimensionError("Graph: edge (" + std::to_string(i) + "," +
                           std::to_string(j) + ") out of range");
    }
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw DimensionError("Graph: duplicate edge");
  }
  return Graph{num_vertices, std::move(edges)};
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph empty_graph(int n) { return Graph::from_edges(n, {}); }

Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, std::move(edges));
}

Graph petersen_graph() {
  // Outer 5-cycle, spokes, inner pentagram.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(i, i + 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph::from_edges(10, std::move(edges));
}

Graph random_gnp_graph(int n, double edge_probability, unsigned seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < edge_probability) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

SdpProblem theta_sdp(const Graph& g) {
  const int n = g.num_vertices;
  std::vector<ConstraintMatrix> constraints;
  constraints.reserve(g.edges.size() + 1);
  int idx = 0;
  for (const auto& [i, j] : g.edges) {
    constraints.emplace_back(idx++, n,
                             std::vector<SparseEntry>{{i, j, 1.0}});
  }
  std::vector<SparseEntry> trace_entries;
  trace_entries.reserve(n);
  for (int d = 0; d < n; ++d) trace_entries.push_back({d, d, 1.0});
  constraints.emplace_back(idx, n, std::move(trace_entries));

  Vector b = Vector::Zero(static_cast<int>(g.edges.size()) + 1);
  b[b.size() - 1] = 1.0;

  SdpProblem p(-Matrix::Ones(n, n), ConstraintOperator(n, std::move(constraints)),
               std::move(b), "theta");
  p.report_scale = -1.0;
  return p;
}

int lop_pair_index(int num_objects, int i, int j) {
  // Pairs (i, j), i < j, in lexicographic order, offset by the leading
  // scalar row/column.
  return 1 + i * num_objects - i * (i + 1) / 2 + (j - i - 1);
}

LopSpec random_lop_spec(int num_objects, unsigned seed) {
  Rng rng(seed);
  Matrix w = Matrix::Zero(num_objects, num_objects);
  for (int i = 0; i < num_objects; ++i) {
    for (int j = 0; j < num_objects; ++j) {
      if (i != j) w(i, j) = 10.0 * rng.uniform01();
    }
  }
  return LopSpec{num_objects, std::move(w)};
}

SdpProblem lop_sdp(const LopSpec& spec) {
  const int num = spec.num_objects;
  if (num < 3) {
    throw DimensionError("lop_sdp: need at least 3 objects");
  }
  if (spec.weights.rows() != num || spec.weights.cols() != num) {
    throw DimensionError("lop_sdp: weight matrix must be N x N");
  }
  const int n = 1 + num * (num - 1) / 2;

  std::vector<ConstraintMatrix> constraints;
  int idx = 0;
  for (int d = 0; d < n; ++d) {
    constraints.emplace_back(idx++, n, std::vector<SparseEntry>{{d, d, 1.0}});
  }
  std::vector<double> b_values(n, 1.0);

  for (int i = 0; i < num; ++i) {
    for (int j = i + 1; j < num; ++j) {
      for (int k = j + 1; k < num; ++k) {
        const int pij = lop_pair_index(num, i, j);
        const int pik = lop_pair_index(num, i, k);
        const int pjk = lop_pair_index(num, j, k);
        // y_{ij,jk} - y_{ij,ik} - y_{ik,jk} = -1; each unit coefficient is
        // half at the two mirrored positions.
        constraints.emplace_back(
            idx++, n,
            std::vector<SparseEntry>{
                {pij, pjk, 0.5}, {pij, pik, -0.5}, {pik, pjk, -0.5}});
        b_values.push_back(-1.0);
      }
    }
  }

  Vector b = Eigen::Map<Vector>(b_values.data(),
                                static_cast<Eigen::Index>(b_values.size()));

  // Profit of an ordering in the +/-1 pair variables y_ij:
  //   sum_{i<j} w_ji + sum_{i<j} (w_ij - w_ji) (1 + y_ij) / 2.
  // The y-independent half of the second sum sits on the fixed Z_00 = 1
  // entry; the first sum stays outside the SDP as report_offset.
  Matrix cost = Matrix::Zero(n, n);
  double constant = 0.0;
  for (int i = 0; i < num; ++i) {
    for (int j = i + 1; j < num; ++j) {
      const double diff = spec.weights(i, j) - spec.weights(j, i);
      const int p = lop_pair_index(num, i, j);
      cost(0, p) = cost(p, 0) = diff / 4.0;
      cost(0, 0) += diff / 2.0;
      constant += spec.weights(j, i);
    }
  }

  SdpProblem p(-cost, ConstraintOperator(n, std::move(constraints)),
               std::move(b), "lop");
  p.report_scale = -1.0;
  p.report_offset = constant;
  return p;
}

SdpProblem random_sdp(int n, int m, double density, unsigned seed,
                      RandomSdpWitness* witness) {
  if (n < 1 || m < 1) throw DimensionError("random_sdp: bad dimensions");
  if (m > n * (n + 1) / 2) {
    throw DimensionError("random_sdp: more constraints than degrees of "
                         "freedom");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw DimensionError("random_sdp: density must be in (0, 1]");
  }

  constexpr int kMaxAttempts = 10;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * static_cast<unsigned>(attempt));
    std::vector<ConstraintMatrix> constraints;
    constraints.reserve(m);
    for (int k = 0; k < m; ++k) {
      std::vector<SparseEntry> entries;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          if (rng.uniform01() < density) {
            entries.push_back({i, j, rng.normal()});
          }
        }
      }
      if (entries.empty()) {
        const int i = static_cast<int>(rng.below(n));
        const int j = static_cast<int>(rng.below(n));
        entries.push_back({std::min(i, j), std::max(i, j), rng.normal()});
      }
      constraints.emplace_back(k, n, std::move(entries));
    }

    try {
      ConstraintOperator op(n, std::move(constraints));

      Matrix g(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal() / std::sqrt(n);
      }
      const Matrix x0 = g * g.transpose() + Matrix::Identity(n, n);
      Vector y0(m);
      for (int k = 0; k < m; ++k) y0[k] = rng.normal();
      Matrix h(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) h(i, j) = rng.normal() / std::sqrt(n);
      }
      const Matrix z0 = h * h.transpose() + Matrix::Identity(n, n);

      Vector b = op.apply(x0);
      Matrix c = z0 + op.apply_adjoint(y0);
      SdpProblem p(std::move(c), std::move(op), std::move(b), "random");
      if (witness) *witness = {x0, y0, z0};
      return p;
    } catch (const RankError&) {
      // resample
    }
  }
  throw RankError("random_sdp: A A^T rank deficient after " +
                  std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace sdpal
