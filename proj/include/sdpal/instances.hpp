#pragma once

#include <utility>
#include <vector>

#include "sdpal/problem.hpp"

namespace sdpal {

// Simple undirected graph; vertices 0-based, edges normalized to i < j,
// sorted, duplicates and loops rejected.
struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  static Graph from_edges(int num_vertices,
                          std::vector<std::pair<int, int>> edges);
};

Graph complete_graph(int n);
Graph empty_graph(int n);
Graph cycle_graph(int n);
Graph petersen_graph();
// Erdos-Renyi G(n, p); deterministic for a given seed.
Graph random_gnp_graph(int n, double edge_probability, unsigned seed);

// Lovasz theta SDP of the graph:
//   max <J, X>  s.t.  X_ij = 0 for edges ij, trace X = 1, X PSD.
// Returned in min form with C = -J; report_scale restores theta's sign.
// The Gram matrix is diagonal: 2 per edge constraint, n for the trace.
SdpProblem theta_sdp(const Graph& g);

// Linear ordering problem: profits weights(u, v) collected for each pair
// ordered u before v; diagonal ignored.
struct LopSpec {
  int num_objects = 0;
  Matrix weights;
};

LopSpec random_lop_spec(int num_objects, unsigned seed);

// Matrix-lifting relaxation of the LOP over Z = [1 y^T; y Y] of order
// C(N,2) + 1: diag(Z) = e plus one transitivity constraint per triple
// i < j < k. The reported bound includes the constant profit part that the
// lifting leaves outside the SDP objective.
SdpProblem lop_sdp(const LopSpec& spec);

// Index of pair (i, j), i < j, within the LOP matrix (row/col 0 is the
// scalar 1; pairs follow in lexicographic order).
int lop_pair_index(int num_objects, int i, int j);

// Strictly feasible primal/dual pair the generator builds the data from.
struct RandomSdpWitness {
  Matrix x0;
  Vector y0;
  Matrix z0;
};

// Random standard-form instance with strictly feasible points on both sides
// (so strong duality holds by construction). Constraint matrices are sparse
// with the given expected density and standard-normal values; generation is
// resampled (up to 10 times) until A A^T is numerically full rank.
SdpProblem random_sdp(int n, int m, double density, unsigned seed,
                      RandomSdpWitness* witness = nullptr);

}  // namespace sdpal
