#include "conebary/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conebary::io {

namespace {

double require_finite(double v, const std::string& context) {
    if (!std::isfinite(v)) {
        throw ParseError(context + ": non-finite entry");
    }
    return v;
}

const json& require_field(const json& j, const char* field, const std::string& context) {
    if (!j.is_object() || !j.contains(field)) {
        throw ParseError(context + ": missing field '" + field + "'");
    }
    return j.at(field);
}

}  // namespace

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double round_real(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    return std::stod(fmt(v));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

Mat parse_matrix(const json& j, const std::string& context) {
    const json& dim_j = require_field(j, "dim", context);
    if (!dim_j.is_number_integer() || dim_j.get<int>() <= 0) {
        throw ParseError(context + ": field 'dim' must be a positive integer");
    }
    const int dim = dim_j.get<int>();
    const json& rows = require_field(j, "entries", context);
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
        throw ParseError(context + ": field 'entries' must hold " + std::to_string(dim) +
                         " rows");
    }
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const json& row = rows[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw ParseError(context + ": entries row " + std::to_string(i) + " must hold " +
                             std::to_string(dim) + " numbers");
        }
        for (int k = 0; k < dim; ++k) {
            const json& cell = row[static_cast<size_t>(k)];
            if (!cell.is_number()) {
                throw ParseError(context + ": entries[" + std::to_string(i) + "][" +
                                 std::to_string(k) + "] is not a number");
            }
            m(i, k) = require_finite(cell.get<double>(),
                                     context + ": entries[" + std::to_string(i) + "][" +
                                         std::to_string(k) + "]");
        }
    }
    return m;
}

Mat read_matrix(const std::string& path) { return parse_matrix(load_json_file(path), path); }

PosDefMatrix read_posdef(const std::string& path) { return PosDefMatrix(read_matrix(path)); }

std::vector<PosDefMatrix> read_tuple(const std::string& path) {
    const json j = load_json_file(path);
    const json& pts = require_field(j, "points", path);
    if (!pts.is_array() || pts.empty()) {
        throw ParseError(path + ": field 'points' must be a non-empty array");
    }
    std::vector<PosDefMatrix> out;
    out.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        out.emplace_back(parse_matrix(pts[i], path + ": points[" + std::to_string(i) + "]"));
    }
    return out;
}

int parse_word_token(const std::string& token, const std::string& context) {
    if (token.size() < 2 || (token[0] != 'g' && token[0] != 'G')) {
        throw ParseError(context + ": word token '" + token + "' is not g<i> or G<i>");
    }
    int index = 0;
    for (size_t i = 1; i < token.size(); ++i) {
        if (token[i] < '0' || token[i] > '9') {
            throw ParseError(context + ": word token '" + token + "' has a non-numeric index");
        }
        index = index * 10 + (token[i] - '0');
    }
    return token[0] == 'g' ? index + 1 : -(index + 1);
}

Word parse_word(const json& tokens, const std::string& context) {
    if (!tokens.is_array()) throw ParseError(context + ": word must be an array of tokens");
    Word w;
    w.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!t.is_string()) throw ParseError(context + ": word tokens must be strings");
        w.push_back(parse_word_token(t.get<std::string>(), context));
    }
    return w;
}

GroupRep read_rep(const std::string& path) {
    const json j = load_json_file(path);
    const json& name_j = require_field(j, "name", path);
    if (!name_j.is_string()) throw ParseError(path + ": field 'name' must be a string");
    const json& dim_j = require_field(j, "dim", path);
    if (!dim_j.is_number_integer() || dim_j.get<int>() <= 0) {
        throw ParseError(path + ": field 'dim' must be a positive integer");
    }
    const int dim = dim_j.get<int>();

    const json& gens_j = require_field(j, "generators", path);
    if (!gens_j.is_array() || gens_j.empty()) {
        throw ParseError(path + ": field 'generators' must be a non-empty array");
    }
    std::vector<InvertibleMatrix> gens;
    gens.reserve(gens_j.size());
    for (size_t i = 0; i < gens_j.size(); ++i) {
        const std::string ctx = path + ": generators[" + std::to_string(i) + "]";
        Mat g = parse_matrix(gens_j[i], ctx);
        if (g.rows() != dim) throw ParseError(ctx + ": dimension differs from 'dim'");
        gens.emplace_back(std::move(g));
    }

    std::vector<Word> relations;
    if (j.contains("relations")) {
        const json& rels = j.at("relations");
        if (!rels.is_array()) throw ParseError(path + ": field 'relations' must be an array");
        relations.reserve(rels.size());
        for (size_t i = 0; i < rels.size(); ++i) {
            relations.push_back(
                parse_word(rels[i], path + ": relations[" + std::to_string(i) + "]"));
        }
    }
    return GroupRep(name_j.get<std::string>(), std::move(gens), std::move(relations));
}

json matrix_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(round_real(m(i, k)));
        rows.push_back(std::move(row));
    }
    return json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

json tuple_json(const std::vector<PosDefMatrix>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(matrix_json(p.entries()));
    return json{{"points", std::move(arr)}};
}

json word_json(const Word& w) {
    json arr = json::array();
    for (int tok : w) {
        arr.push_back((tok > 0 ? "g" : "G") + std::to_string(std::abs(tok) - 1));
    }
    return arr;
}

json rep_json(const GroupRep& rep) {
    json gens = json::array();
    for (const auto& g : rep.generators()) gens.push_back(matrix_json(g.entries()));
    json rels = json::array();
    for (const auto& r : rep.relations()) rels.push_back(word_json(r));
    return json{{"name", rep.name()},
                {"dim", rep.dim()},
                {"generators", std::move(gens)},
                {"relations", std::move(rels)}};
}

json report_json(const FixedPointReport& report, const std::vector<double>& size_history) {
    json rows = json::array();
    for (const auto& h : report.history) {
        rows.push_back(json{{"n", h.n},
                            {"residual", round_real(h.residual)},
                            {"size", round_real(h.size)},
                            {"distance", round_real(h.distance)}});
    }
    json sizes = json::array();
    for (double s : size_history) sizes.push_back(round_real(s));
    return json{
        {"fixed_point", matrix_json(report.fixed_point.entries())},
        {"normalized", matrix_json(report.normalized.entries())},
        {"unitariser", matrix_json(report.unitariser.entries())},
        {"residual", round_real(report.residual)},
        {"size_measured", round_real(report.size_measured)},
        {"rep_size", round_real(report.rep_size_value)},
        {"size_bound", round_real(report.size_bound)},
        {"distance_to_identity", round_real(report.distance_to_identity)},
        {"orbit_diam", round_real(report.orbit_diam)},
        {"xpi_margin", round_real(report.xpi_margin)},
        {"schedule_index_reached", report.schedule_index_reached},
        {"orbit_radius", report.orbit_radius},
        {"converged", report.converged},
        {"residual_history", std::move(rows)},
        {"size_history", std::move(sizes)},
    };
}

std::string history_csv(const std::vector<HistoryRow>& rows) {
    std::string out = "n,residual,size,distance\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + fmt(r.residual) + "," + fmt(r.size) + "," +
               fmt(r.distance) + "\n";
    }
    return out;
}

std::string trace_csv(const std::vector<BarycenterTraceRow>& rows) {
    std::string out = "round,tuple_diam\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round) + "," + fmt(r.tuple_diam) + "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

}  // namespace conebary::io
