#include "conebary/group.hpp"

#include <cmath>
#include <string>

namespace conebary {

namespace {

std::string word_str(const Word& w) {
    std::string s;
    for (int tok : w) {
        if (!s.empty()) s += ' ';
        s += (tok > 0 ? "g" : "G") + std::to_string(std::abs(tok) - 1);
    }
    return s.empty() ? "<identity>" : s;
}

const Mat& generator_image(const GroupRep& rep, int tok) {
    const int idx = std::abs(tok) - 1;
    if (idx < 0 || idx >= rep.num_generators()) {
        throw ParseError("word references generator " + std::to_string(idx) +
                         " but the representation has " +
                         std::to_string(rep.num_generators()));
    }
    const auto& g = rep.generators()[static_cast<size_t>(idx)];
    return tok > 0 ? g.entries() : g.inverse();
}

}  // namespace

GroupRep::GroupRep(std::string name, std::vector<InvertibleMatrix> generators,
                   std::vector<Word> relations)
    : name_(std::move(name)), generators_(std::move(generators)),
      relations_(std::move(relations)) {
    if (generators_.empty()) throw SizeMismatch("GroupRep: at least one generator required");
    const int d = generators_.front().dim();
    for (const auto& g : generators_) {
        if (g.dim() != d) throw DimMismatch("GroupRep: generators of mixed dimension");
    }
    for (const auto& rel : relations_) {
        const Mat value = evaluate_word(*this, rel);
        const double defect = op_norm(value - Mat::Identity(d, d));
        if (defect > kRelationTol) {
            throw Error("GroupRep '" + name_ + "': relation " + word_str(rel) +
                        " evaluates " + std::to_string(defect) + " away from the identity");
        }
    }
}

Mat evaluate_word(const GroupRep& rep, const Word& w) {
    Mat m = Mat::Identity(rep.dim(), rep.dim());
    for (int tok : w) m = m * generator_image(rep, tok);
    return m;
}

PosDefMatrix act(const GroupRep& rep, const Word& w, const PosDefMatrix& p) {
    if (p.dim() != rep.dim()) throw DimMismatch("act: point dimension differs from rep");
    const Mat g = evaluate_word(rep, w);
    return PosDefMatrix(detail::congruence_raw(g, p.entries()));
}

WordBall enumerate_ball(const GroupRep& rep, int radius, int max_elements, double dedup_tol) {
    if (radius < 0) throw TOutOfRange("enumerate_ball: negative radius");
    WordBall ball;
    ball.radius = radius;
    const int d = rep.dim();
    ball.words.push_back({});
    ball.elements.push_back(Mat::Identity(d, d));

    auto known = [&](const Mat& m) {
        for (const auto& e : ball.elements) {
            if ((e - m).norm() <= dedup_tol * std::max(1.0, m.norm())) return true;
        }
        return false;
    };

    std::vector<size_t> frontier{0};
    for (int r = 1; r <= radius; ++r) {
        std::vector<size_t> next;
        for (size_t idx : frontier) {
            const Word base = ball.words[idx];  // copy: elements vector reallocates
            const Mat m = ball.elements[idx];
            for (int gi = 0; gi < rep.num_generators(); ++gi) {
                for (int sign : {+1, -1}) {
                    // Skip immediate backtracking; the image would be a shorter word.
                    if (!base.empty() && base.back() == -sign * (gi + 1)) continue;
                    Mat cand = m * generator_image(rep, sign * (gi + 1));
                    if (known(cand)) continue;
                    if (static_cast<int>(ball.elements.size()) >= max_elements) {
                        throw BallTooLarge("enumerate_ball: more than " +
                                           std::to_string(max_elements) +
                                           " elements at radius " + std::to_string(r));
                    }
                    Word w = base;
                    w.push_back(sign * (gi + 1));
                    ball.words.push_back(std::move(w));
                    ball.elements.push_back(std::move(cand));
                    next.push_back(ball.elements.size() - 1);
                }
            }
        }
        if (next.empty()) break;  // the group is exhausted
        frontier = std::move(next);
    }
    return ball;
}

SizeEstimate rep_size(const GroupRep& rep, int radius, int max_elements) {
    if (radius < 0) throw TOutOfRange("rep_size: negative radius");
    SizeEstimate est;
    est.radius = radius;
    const int d = rep.dim();
    std::vector<Mat> elements{Mat::Identity(d, d)};
    std::vector<size_t> frontier{0};
    double running = 1.0;
    est.history.push_back(running);

    auto known = [&](const Mat& m) {
        for (const auto& e : elements) {
            if ((e - m).norm() <= kDedupTol * std::max(1.0, m.norm())) return true;
        }
        return false;
    };

    for (int r = 1; r <= radius; ++r) {
        std::vector<size_t> next;
        for (size_t idx : frontier) {
            const Mat m = elements[idx];
            for (int gi = 0; gi < rep.num_generators(); ++gi) {
                for (int sign : {+1, -1}) {
                    Mat cand = m * generator_image(rep, sign * (gi + 1));
                    if (known(cand)) continue;
                    if (static_cast<int>(elements.size()) >= max_elements) {
                        throw BallTooLarge("rep_size: ball exceeds " +
                                           std::to_string(max_elements) + " elements");
                    }
                    running = std::max(running, op_norm(cand));
                    elements.push_back(std::move(cand));
                    next.push_back(elements.size() - 1);
                }
            }
        }
        est.history.push_back(running);
        if (next.empty()) {
            // Group exhausted: the value is exact from here on; pad the
            // history so the plateau detector sees the stabilization.
            while (static_cast<int>(est.history.size()) <= radius) {
                est.history.push_back(running);
            }
            break;
        }
        frontier = std::move(next);
    }
    est.value = running;

    const auto& h = est.history;
    est.plateau = false;
    if (h.size() >= 3) {
        const size_t k = h.size() - 1;
        const double tol = 1e-9 * std::max(1.0, h[k]);
        est.plateau = std::abs(h[k] - h[k - 1]) <= tol && std::abs(h[k - 1] - h[k - 2]) <= tol;
    }
    est.suspected_unbounded = false;
    if (!est.plateau && h.size() >= 4) {
        const size_t k = h.size() - 1;
        // Three consecutive log increments of at least 0.05 read as growth.
        bool growing = true;
        for (size_t i = k - 2; i <= k; ++i) {
            if (std::log(h[i]) - std::log(h[i - 1]) < 0.05) growing = false;
        }
        est.suspected_unbounded = growing;
    }
    return est;
}

double rep_diam(const GroupRep& rep, int radius, int max_elements) {
    const WordBall ball = enumerate_ball(rep, radius, max_elements);
    const PosDefMatrix id(Mat::Identity(rep.dim(), rep.dim()));
    double diam = 0.0;
    for (const auto& g : ball.elements) {
        const PosDefMatrix orbit_point(symmetrize(g * g.adjoint()));
        diam = std::max(diam, thompson_dist(id, orbit_point));
    }
    return diam;
}

GroupRep interpolate_rep(const GroupRep& rep, const PosDefMatrix& s, double t) {
    if (s.dim() != rep.dim()) throw DimMismatch("interpolate_rep: dimensions differ");
    if (!(t >= 0.0 && t <= 1.0)) throw TOutOfRange("interpolate_rep: t outside [0, 1]");
    const Mat s_t = detail::power_raw(s.spectrum(), t);
    const Mat s_mt = detail::power_raw(s.spectrum(), -t);
    std::vector<InvertibleMatrix> gens;
    gens.reserve(static_cast<size_t>(rep.num_generators()));
    for (const auto& g : rep.generators()) {
        gens.emplace_back(s_mt * g.entries() * s_t);
    }
    return GroupRep(rep.name() + "_t" + std::to_string(t), std::move(gens), rep.relations());
}

InvertibleMatrix extract_unitariser(const PosDefMatrix& fixed_point) {
    return InvertibleMatrix(mat_sqrt(fixed_point).entries());
}

UnitariserReport verify_unitariser(const GroupRep& rep, const InvertibleMatrix& s, int radius,
                                   int max_elements) {
    if (s.dim() != rep.dim()) throw DimMismatch("verify_unitariser: dimensions differ");
    const WordBall ball = enumerate_ball(rep, radius, max_elements);
    const int d = rep.dim();
    const Mat id = Mat::Identity(d, d);
    double defect = 0.0;
    for (const auto& g : ball.elements) {
        const Mat c = s.inverse() * g * s.entries();
        defect = std::max(defect, op_norm(c * c.adjoint() - id));
    }
    return UnitariserReport{defect, operator_size(s), radius};
}

PosDefMatrix normalize_fixed_point(const PosDefMatrix& t) {
    const double scale = std::sqrt(t.lambda_min() * t.lambda_max());
    return PosDefMatrix(t.entries() / scale);
}

}  // namespace conebary
