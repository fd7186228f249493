#include <doctest.h>

#include <cmath>

#include "conebary/errors.hpp"
#include "conebary/solver.hpp"

using namespace conebary;

namespace {

Mat rot(double theta) {
    Mat r(2, 2);
    r(0, 0) = std::cos(theta);
    r(0, 1) = -std::sin(theta);
    r(1, 0) = std::sin(theta);
    r(1, 1) = std::cos(theta);
    return r;
}

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

GroupRep z_rotation() {
    const Mat s0 = diag2(2.0, 1.0);
    return GroupRep("z_rot", {InvertibleMatrix(s0 * rot(1.0) * s0.inverse())});
}

GroupRep c2_involution() {
    Mat a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 0.0;
    a(1, 1) = -1.0;
    return GroupRep("c2", {InvertibleMatrix(a)}, {{1, 1}});
}

Mat blkdiag(const Mat& a, const Mat& b) {
    Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

// C2 x C2 acting blockwise through two involutions.
GroupRep c2c2_block() {
    Mat a0(2, 2), b0(2, 2);
    a0 << 1, 1, 0, -1;
    b0 << 1, 0, 2, -1;
    const Mat i2 = Mat::Identity(2, 2);
    return GroupRep("c2c2",
                    {InvertibleMatrix(blkdiag(a0, i2)), InvertibleMatrix(blkdiag(i2, b0))},
                    {{1, 1}, {2, 2}, {1, 2, -1, -2}});
}

// Check that the report's derived fields are consistent with each other.
void check_report_consistency(const FixedPointReport& r) {
    CHECK(r.size_measured == doctest::Approx(std::exp(r.distance_to_identity)).epsilon(1e-9));
    CHECK(r.size_bound == doctest::Approx(r.rep_size_value * r.rep_size_value).epsilon(1e-9));
    CHECK(r.xpi_margin <= r.residual + 1e-6);
    REQUIRE(!r.history.empty());
    if (r.converged) {
        CHECK(r.history.back().residual == doctest::Approx(r.residual));
    }
    for (const auto& row : r.history) {
        CHECK(row.distance == doctest::Approx(std::log(row.size)).epsilon(1e-9));
    }
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("averaging set schedules") {
    const FolnerSchedule z = folner_for(GroupKind::Z);
    CHECK(z.epsilon(10) == doctest::Approx(0.3));
    CHECK(z.size_at(10) == 10);
    const auto zw = z.set_at(3);
    REQUIRE(zw.size() == 3);
    CHECK(zw[0].empty());
    CHECK(zw[1] == Word{1});
    CHECK(zw[2] == Word{1, 1});

    const FolnerSchedule z2 = folner_for(GroupKind::ZPow, 2);
    CHECK(z2.size_at(4) == 16);
    CHECK(z2.set_at(4).size() == 16);
    CHECK(z2.set_at(1).size() == 1);

    const FolnerSchedule fin = folner_for(GroupKind::Finite);
    CHECK_THROWS_AS(fin.set_at(2), UnsupportedGroup);

    CHECK_THROWS_AS(z.set_at(0), TOutOfRange);
    CHECK_THROWS_AS(folner_for(GroupKind::Z, 1, 2.0), UnsupportedGroup);
    CHECK_THROWS_AS(folner_for(GroupKind::ZPow, 0), UnsupportedGroup);
}

TEST_CASE("finite group averaging hits the closed form") {
    const GroupRep rep = c2_involution();
    const Mat a = rep.generators()[0].entries();
    const PosDefMatrix closed(mat_sqrt(PosDefMatrix(symmetrize(a * a.adjoint()))));

    const FixedPointReport r = solve_amenable(rep, folner_for(GroupKind::Finite));
    CHECK(r.converged);
    CHECK(r.residual <= 1e-9);
    CHECK(thompson_dist(r.fixed_point, closed) <= 1e-9);
    CHECK(r.schedule_index_reached == 2);
    CHECK(r.orbit_radius == 12);

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(r.rep_size_value == doctest::Approx(phi).epsilon(1e-9));
    CHECK(r.orbit_diam == doctest::Approx(2.0 * std::log(phi)).epsilon(1e-9));
    check_report_consistency(r);

    const CertificateResult cert = bound_certificate(r, BoundSpec{});
    CHECK(cert.holds);
    CHECK(cert.margin == doctest::Approx(std::log(phi)).epsilon(1e-6));
}

TEST_CASE("unitary images are fixed immediately") {
    const GroupRep rep("rot", {InvertibleMatrix(rot(1.0))});
    const FixedPointReport r = solve_amenable(rep, folner_for(GroupKind::Z));
    CHECK(r.converged);
    CHECK(r.residual <= 1e-12);
    CHECK(thompson_dist(r.fixed_point, PosDefMatrix(Mat::Identity(2, 2))) <= 1e-12);
    CHECK(r.size_measured == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.distance_to_identity <= 1e-12);
    CHECK(r.orbit_diam <= 1e-12);
    CHECK(bound_certificate(r, BoundSpec{}).holds);
}

TEST_CASE("interval averaging on a conjugated rotation") {
    const GroupRep rep = z_rotation();
    const FixedPointReport r = solve_amenable(rep, folner_for(GroupKind::Z));
    CHECK(r.converged);
    CHECK(r.residual <= 1e-6);
    // The doubling phase stalls around 1e-4; only the screened fine scan can
    // land on the near-period index.
    CHECK(r.schedule_index_reached == 355);

    // All interval iterates obey the one-point-exchange decay.
    for (const auto& row : r.history) {
        CHECK(row.residual <= r.orbit_diam / static_cast<double>(row.n) + 1e-6);
    }

    // The fixed ray is c * diag(4, 1); normalized, diag(2, 1/2).
    CHECK(thompson_dist(r.normalized, PosDefMatrix(diag2(2.0, 0.5))) <= 1e-4);
    CHECK(r.orbit_diam == doctest::Approx(std::log(4.0)).epsilon(1e-4));
    CHECK(r.size_measured <= r.rep_size_value * r.rep_size_value * (1.0 + 1e-3));
    check_report_consistency(r);

    const CertificateResult cert = bound_certificate(r, BoundSpec{});
    CHECK(cert.holds);
    CHECK(cert.margin == doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("box averaging over a commuting unitary pair") {
    const GroupRep rep("torus", {InvertibleMatrix(rot(1.0)), InvertibleMatrix(rot(0.6))},
                       {{1, 2, -1, -2}});
    const FixedPointReport r = solve_amenable(rep, folner_for(GroupKind::ZPow, 2));
    CHECK(r.converged);
    CHECK(r.residual <= 1e-12);
    CHECK(r.schedule_index_reached == 2);
}

TEST_CASE("solve prechecks") {
    const GroupRep growing("diag", {InvertibleMatrix(diag2(std::exp(1.0), 1.0))});
    CHECK_THROWS_AS(solve_amenable(growing, folner_for(GroupKind::Z)), NotUniformlyBounded);

    const GroupRep rep = c2_involution();
    CHECK_THROWS_AS(solve_amenable(rep, folner_for(GroupKind::Z),
                                   PosDefMatrix(Mat::Identity(3, 3))),
                    DimMismatch);
    CHECK_THROWS_AS(solve_amenable(rep, folner_for(GroupKind::ZPow, 2)), UnsupportedGroup);
}

TEST_CASE("coset promotion") {
    const GroupRep rep = c2_involution();
    const Mat a = rep.generators()[0].entries();
    const PosDefMatrix closed(mat_sqrt(PosDefMatrix(symmetrize(a * a.adjoint()))));
    const PosDefMatrix id(Mat::Identity(2, 2));

    // Trivial subgroup: promotion is plain orbit averaging.
    const std::vector<Word> no_gens;
    const std::vector<Word> cosets{{}, {1}};
    const FixedPointReport r = promote_finite_index(rep, id, no_gens, cosets);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-9);
    CHECK(thompson_dist(r.fixed_point, closed) <= 1e-10);
    check_report_consistency(r);

    // Coset order cannot matter.
    const std::vector<Word> swapped{{1}, {}};
    const FixedPointReport r2 = promote_finite_index(rep, id, no_gens, swapped);
    CHECK(thompson_dist(r2.fixed_point, r.fixed_point) <= 1e-10);

    // Index one: the input point passes through.
    const std::vector<Word> whole{{1}};
    const std::vector<Word> only_id{{}};
    const FixedPointReport r3 = promote_finite_index(rep, closed, whole, only_id);
    CHECK(thompson_dist(r3.fixed_point, closed) <= 1e-12);

    // diag(4,1) is fixed by every power of the conjugated rotation, so
    // promoting along 2Z -> Z returns it unchanged.
    const GroupRep zr = z_rotation();
    const std::vector<Word> dbl{{1, 1}};
    const FixedPointReport r4 =
        promote_finite_index(zr, PosDefMatrix(diag2(4.0, 1.0)), dbl, cosets);
    CHECK(r4.residual <= 1e-10);
    CHECK(thompson_dist(r4.fixed_point, PosDefMatrix(diag2(4.0, 1.0))) <= 1e-10);

    // Violated preconditions.
    CHECK_THROWS_AS(promote_finite_index(rep, PosDefMatrix(diag2(2.0, 1.0)), whole, cosets),
                    NotSubgroupFixed);
    CHECK_THROWS_AS(promote_finite_index(rep, id, no_gens, whole), SizeMismatch);
    CHECK_THROWS_AS(promote_finite_index(rep, PosDefMatrix(Mat::Identity(3, 3)), no_gens,
                                         cosets),
                    DimMismatch);
}

TEST_CASE("block involutions: direct, promoted, and extended solves agree") {
    const GroupRep rep = c2c2_block();
    const Mat a0 = rep.generators()[0].entries().topLeftCorner(2, 2);
    const Mat b0 = rep.generators()[1].entries().bottomRightCorner(2, 2);
    const Mat y0 = mat_sqrt(PosDefMatrix(symmetrize(a0 * a0.adjoint()))).entries();
    const Mat y1 = mat_sqrt(PosDefMatrix(symmetrize(b0 * b0.adjoint()))).entries();
    const PosDefMatrix closed(blkdiag(y0, y1));

    const FixedPointReport direct = solve_amenable(rep, folner_for(GroupKind::Finite));
    CHECK(direct.converged);
    CHECK(thompson_dist(direct.fixed_point, closed) <= 1e-7);

    const PosDefMatrix sub_fixed(blkdiag(y0, Mat::Identity(2, 2)));
    const std::vector<Word> sub_gens{{1}};
    const std::vector<Word> cosets{{}, {2}};
    const FixedPointReport promoted =
        promote_finite_index(rep, sub_fixed, sub_gens, cosets);
    CHECK(promoted.converged);
    CHECK(thompson_dist(promoted.fixed_point, closed) <= 1e-9);

    ExtensionSpec ext;
    ext.normal_gens = {{1}};
    ext.subgroup_schedule = folner_for(GroupKind::Finite);
    ext.section_words = {{2}};
    ext.quotient_schedule = folner_for(GroupKind::Finite);
    const FixedPointReport extended = solve_extension(rep, ext);
    CHECK(extended.converged);
    CHECK(extended.residual <= 1e-9);
    CHECK(thompson_dist(extended.fixed_point, closed) <= 1e-9);
    CHECK(thompson_dist(extended.fixed_point, promoted.fixed_point) <= 1e-8);
    check_report_consistency(extended);
}

TEST_CASE("extension over a commuting pair") {
    const Mat s0 = diag2(2.0, 1.0);
    const GroupRep rep("z2",
                       {InvertibleMatrix(s0 * rot(1.0) * s0.inverse()),
                        InvertibleMatrix(s0 * rot(0.6) * s0.inverse())},
                       {{1, 2, -1, -2}});

    ExtensionSpec ext;
    ext.normal_gens = {{1}};
    ext.subgroup_schedule = folner_for(GroupKind::Z);
    ext.section_words = {{2}};
    ext.quotient_schedule = folner_for(GroupKind::Z);

    const FixedPointReport r = solve_extension(rep, ext);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-6);
    for (const Word& g : {Word{1}, Word{2}}) {
        CHECK(thompson_dist(r.fixed_point, act(rep, g, r.fixed_point)) <= 1e-6);
    }
    CHECK(thompson_dist(r.normalized, PosDefMatrix(diag2(2.0, 0.5))) <= 1e-3);
    check_report_consistency(r);
    CHECK(bound_certificate(r, BoundSpec{1.0, 4.0}).holds);
}

TEST_CASE("extension input validation") {
    const GroupRep rep = c2c2_block();
    ExtensionSpec ext;
    ext.section_words = {{2}};
    CHECK_THROWS_AS(solve_extension(rep, ext), SizeMismatch);  // no normal generators
    ext.normal_gens = {{1}};
    ext.section_words.clear();
    CHECK_THROWS_AS(solve_extension(rep, ext), SizeMismatch);  // empty section

    // <A> is not normal in <A, B> for generic involutions in the same block.
    Mat a0(2, 2), b0(2, 2);
    a0 << 1, 1, 0, -1;
    b0 << 1, 0, 2, -1;
    const GroupRep nn("nonnormal", {InvertibleMatrix(a0), InvertibleMatrix(b0)});
    ExtensionSpec bad;
    bad.normal_gens = {{1}};
    bad.subgroup_schedule = folner_for(GroupKind::Finite);
    bad.section_words = {{2}};
    bad.quotient_schedule = folner_for(GroupKind::Finite);
    CHECK_THROWS_AS(solve_extension(nn, bad), NormalityViolated);
}

TEST_CASE("certificate evaluation") {
    const FixedPointReport r = solve_amenable(c2_involution(), folner_for(GroupKind::Finite));
    CHECK_THROWS_AS((bound_certificate(r, BoundSpec{0.5, 2.0})), TOutOfRange);
    CHECK_THROWS_AS((bound_certificate(r, BoundSpec{1.0, 0.0})), TOutOfRange);

    // A hopelessly small exponent fails: the point sits at ln(phi) but the
    // certified bound collapses to nearly zero.
    const CertificateResult weak = bound_certificate(r, BoundSpec{1.0, 1e-6});
    CHECK_FALSE(weak.holds);
    CHECK(weak.margin < 0.0);

    const CertificateResult ok = bound_certificate(r, BoundSpec{1.0, 2.0});
    CHECK(ok.holds);
    CHECK(ok.bound ==
          doctest::Approx(std::log(1.0) + r.orbit_diam).epsilon(1e-12));
    CHECK(ok.margin == doctest::Approx(ok.bound - r.distance_to_identity).epsilon(1e-12));
}

}  // TEST_SUITE
