#pragma once

#include <string>
#include <vector>

#include "conebary/thompson.hpp"

namespace conebary {

// Reduced word over generator indices: +k encodes generator k-1, -k its
// inverse. The empty word is the identity.
using Word = std::vector<int>;

inline constexpr double kRelationTol = 1e-8;
inline constexpr double kDedupTol = 1e-8;
inline constexpr int kDefaultBallCap = 4096;

// Finitely generated matrix representation. Relations, when declared, are
// verified to evaluate to the identity within kRelationTol at construction.
class GroupRep {
public:
    GroupRep(std::string name, std::vector<InvertibleMatrix> generators,
             std::vector<Word> relations = {});

    const std::string& name() const { return name_; }
    int dim() const { return generators_.front().dim(); }
    int num_generators() const { return static_cast<int>(generators_.size()); }
    const std::vector<InvertibleMatrix>& generators() const { return generators_; }
    const std::vector<Word>& relations() const { return relations_; }

private:
    std::string name_;
    std::vector<InvertibleMatrix> generators_;
    std::vector<Word> relations_;
};

// Product of generator images along the word.
Mat evaluate_word(const GroupRep& rep, const Word& w);

// rho(w, p) = pi(w) p pi(w)*.
PosDefMatrix act(const GroupRep& rep, const Word& w, const PosDefMatrix& p);

struct WordBall {
    std::vector<Word> words;     // one reduced word per element, identity first
    std::vector<Mat> elements;   // deduplicated matrix images, parallel to words
    int radius;
};

// Breadth-first ball of the given word radius. Elements closer than dedup_tol
// in Frobenius norm are identified; growth past max_elements raises
// BallTooLarge.
WordBall enumerate_ball(const GroupRep& rep, int radius, int max_elements = kDefaultBallCap,
                        double dedup_tol = kDedupTol);

struct SizeEstimate {
    double value;                 // max operator norm over the sampled ball
    int radius;
    std::vector<double> history;  // running value per radius 0..radius (monotone)
    bool plateau;                 // last three radii agree within 1e-9 relative
    bool suspected_unbounded;     // log-linear growth persists at the horizon
};

// |pi| sampled on word balls. NotUniformlyBounded is a diagnosis carried by
// the flags, not an error.
SizeEstimate rep_size(const GroupRep& rep, int radius, int max_elements = kDefaultBallCap);

// diam(pi) = max over the ball of d(I, pi(w) pi(w)*). Equals 2 ln |pi| at the
// matched radius because the ball is closed under inverses.
double rep_diam(const GroupRep& rep, int radius, int max_elements = kDefaultBallCap);

// pi_t: generators g -> s^{-t} g s^{t} for a positive definite s.
GroupRep interpolate_rep(const GroupRep& rep, const PosDefMatrix& s, double t);

// A fixed point t of the action yields the unitariser t^{1/2}.
InvertibleMatrix extract_unitariser(const PosDefMatrix& fixed_point);

struct UnitariserReport {
    double defect;  // max over the ball of | (s^-1 pi(w) s)(s^-1 pi(w) s)* - I |
    double size;    // operator_size(s)
    int radius;
};

UnitariserReport verify_unitariser(const GroupRep& rep, const InvertibleMatrix& s, int radius,
                                   int max_elements = kDefaultBallCap);

// t / sqrt(lambda_min lambda_max): the scaling with |t| = |t^-1|, realizing
// d(I, t) = ln sqrt(operator_size(t)).
PosDefMatrix normalize_fixed_point(const PosDefMatrix& t);

}  // namespace conebary
