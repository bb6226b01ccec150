#include "chordal_sdp/result_io.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chordal_sdp/sdpa.hpp"

namespace chordal_sdp {

namespace {

nlohmann::ordered_json to_json(const SolverResult& r, const ResultAnnotations& notes) {
  nlohmann::ordered_json j;
  if (!notes.input.empty()) j["input"] = notes.input;
  j["form"] = to_string(r.form);
  j["status"] = to_string(r.status);
  if (!r.message.empty()) j["message"] = r.message;
  j["objective"] = r.objective;
  if (notes.sdpa_objective) j["sdpa_objective"] = *notes.sdpa_objective;
  j["iterations"] = r.iterations;
  j["eps_p"] = r.eps_p;
  j["eps_d"] = r.eps_d;
  j["rho"] = r.rho;
  j["max_affine_residual"] = r.max_affine_residual;
  j["timings"] = {{"setup_s", r.timings.setup_s},
                  {"kkt_s", r.timings.kkt_s},
                  {"projection_s", r.timings.projection_s},
                  {"update_s", r.timings.update_s},
                  {"iterate_s", r.timings.iterate_s}};
  j["counters"] = {{"kkt_solves", r.counters.kkt_solves},
                   {"projections", r.counters.projections},
                   {"factorizations", r.counters.factorizations}};
  j["cliques"] = {{"p", r.cliques.count},
                  {"max_size", r.cliques.max_size},
                  {"min_size", r.cliques.min_size}};
  j["y"] = std::vector<double>(r.y.data(), r.y.data() + r.y.size());
  return j;
}

}  // namespace

void write_result(std::ostream& out, const SolverResult& r, ResultFormat format,
                  const ResultAnnotations& notes) {
  if (format == ResultFormat::kJson) {
    out << to_json(r, notes).dump(2) << '\n';
    return;
  }
  out << kTraceCsvHeader << '\n';
  for (const auto& rec : r.trace) {
    out << rec.iter << ',' << format_double(rec.eps_p) << ',' << format_double(rec.eps_d) << ','
        << format_double(rec.objective) << ',' << format_double(rec.rho) << '\n';
  }
}

std::string format_result(const SolverResult& r, ResultFormat format,
                          const ResultAnnotations& notes) {
  std::ostringstream out;
  write_result(out, r, format, notes);
  return out.str();
}

}  // namespace chordal_sdp
