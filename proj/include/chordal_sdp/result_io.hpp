#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "chordal_sdp/admm.hpp"

namespace chordal_sdp {

enum class ResultFormat { kJson, kCsv };

inline constexpr const char* kTraceCsvHeader = "iter,eps_p,eps_d,objective,rho";

// Extra context for the JSON form.
struct ResultAnnotations {
  std::string input;
  // Objective in the SDPA convention (min c^T x), i.e. the negated <b,y>.
  std::optional<double> sdpa_objective;
};

// JSON: summary fields, timings, counters and clique statistics (p, max, min).
// CSV: the per-iteration trace, one row per recorded iteration.
void write_result(std::ostream& out, const SolverResult& r, ResultFormat format,
                  const ResultAnnotations& notes = {});
std::string format_result(const SolverResult& r, ResultFormat format,
                          const ResultAnnotations& notes = {});

}  // namespace chordal_sdp
