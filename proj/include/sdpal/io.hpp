#pragma once

#include <string>

#include "sdpal/instances.hpp"
#include "sdpal/problem.hpp"
#include "sdpal/solver.hpp"

namespace sdpal {

// SDPA sparse format (.dat-s), restricted to a single semidefinite block.
//
// The file describes the pair
//   (P) min c^T x  s.t.  X = sum_k x_k F_k - F_0, X PSD
//   (D) max <F_0, Y> s.t. <F_k, Y> = c_k, Y PSD,
// which maps onto this library's standard form as C = -F_0, A_k = F_k,
// b = c. reported objectives carry the sign flip back (report_scale = -1), so
// values printed by the CLI match the file's own orientation. See
// docs/formats.md for the byte-level details.
SdpProblem read_sdpa(const std::string& path);

// Inverse of read_sdpa: writes -C as the matno-0 block and the constraints in
// (matno, row, col) order with 17 significant digits, so write-read-write is
// byte-identical.
void write_sdpa(const SdpProblem& p, const std::string& path);

// Edge list: one "i j" pair per line, 1-based vertices, '#' comments. The
// vertex count is the largest endpoint.
Graph read_edge_list(const std::string& path);

// Per-iteration history: k,r_P,r_D,delta,sigma,rank,primal_obj,dual_obj,wall_ms
void write_history_csv(const SolveReport& report, const std::string& path);

// Dense text dump of the final (X, y, Z).
void write_solution(const SdpProblem& p, const SolveReport& report,
                    const std::string& path);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace sdpal
