#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conebary/barycenter.hpp"
#include "conebary/group.hpp"
#include "conebary/solver.hpp"

namespace conebary::io {

using json = nlohmann::json;

// All floating output goes through this: 12 significant digits.
std::string fmt(double v);

// Rounds to the printed precision so serialized reports carry exactly what
// fmt would show.
double round_real(double v);

json load_json_file(const std::string& path);

// Matrix files: { "dim": n, "entries": [[row-major]] }. NaN/Inf rejected.
// `context` names the file (or field) in diagnostics.
Mat parse_matrix(const json& j, const std::string& context);
Mat read_matrix(const std::string& path);
PosDefMatrix read_posdef(const std::string& path);

// Tuple files: { "points": [matrix, ...] }.
std::vector<PosDefMatrix> read_tuple(const std::string& path);

// Word tokens: "g3" is generator 3, "G3" its inverse.
int parse_word_token(const std::string& token, const std::string& context);
Word parse_word(const json& tokens, const std::string& context);

// Representation files:
// { "name", "dim", "generators": [matrix, ...], "relations": [["g0","G0"], ...] }.
GroupRep read_rep(const std::string& path);

json matrix_json(const Mat& m);
json tuple_json(const std::vector<PosDefMatrix>& pts);
json word_json(const Word& w);
json rep_json(const GroupRep& rep);

// All report fields plus the residual history and the per-radius size
// history sampled by rep_size.
json report_json(const FixedPointReport& report, const std::vector<double>& size_history);

std::string history_csv(const std::vector<HistoryRow>& rows);
std::string trace_csv(const std::vector<BarycenterTraceRow>& rows);

void write_text(const std::string& path, const std::string& content);

}  // namespace conebary::io
