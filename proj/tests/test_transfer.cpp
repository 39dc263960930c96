#include "dilation/transfer.hpp"

#include <doctest.h>

#include <cmath>

using namespace dilation;

namespace {

const Dilation kLine{DilationKind::DyadicLine};
const Dilation kPlane{DilationKind::TwinDragonPlane};

QuadScalar qs(long an, long ad, long bn, long bd) {
    return QuadScalar(Rational(an, ad), Rational(bn, bd), 3);
}

CoefficientMask d4_line() {
    WeightMap c;
    c.emplace(LatticeElem{0, 0}, qs(1, 8, 1, 8));
    c.emplace(LatticeElem{1, 0}, qs(3, 8, 1, 8));
    c.emplace(LatticeElem{2, 0}, qs(3, 8, -1, 8));
    c.emplace(LatticeElem{3, 0}, qs(1, 8, -1, 8));
    return CoefficientMask(kLine, 3, std::move(c));
}

CoefficientMask d4_plane_lift() {
    WeightMap c;
    c.emplace(LatticeElem{0, 0}, qs(1, 8, 1, 8));
    c.emplace(LatticeElem{1, 0}, qs(3, 8, 1, 8));
    c.emplace(LatticeElem{1, 1}, qs(3, 8, -1, 8));
    c.emplace(LatticeElem{2, 1}, qs(1, 8, -1, 8));
    return CoefficientMask(kPlane, 3, std::move(c));
}

CoefficientMask dragon3(const QuadScalar& p1, const QuadScalar& pi) {
    WeightMap c;
    c.emplace(LatticeElem{0, 0}, QuadScalar(1, 2));
    c.emplace(LatticeElem{1, 0}, p1);
    c.emplace(LatticeElem{0, 1}, pi);
    return CoefficientMask(kPlane, 3, std::move(c));
}

CoefficientMask haar_plane() {
    WeightMap c;
    c.emplace(LatticeElem{0, 0}, QuadScalar(1, 2));
    c.emplace(LatticeElem{1, 0}, QuadScalar(1, 2));
    return CoefficientMask(kPlane, 3, std::move(c));
}

std::vector<LatticeElem> parse_tiles(const std::string& text) {
    return TileSystem::from_text(kPlane, text).translates;
}

// The four-coefficient system's translate lists in their published order:
// the 14 observed tiles, then the 14 extra push-out survivors.
const std::vector<LatticeElem> kDragon4Observed =
    parse_tiles("0\n-i\n1-i\n1\n1+i\ni\n-1+i\n-1\n-1-i\n-2i\n1-2i\n2-2i\n2-i\n2\n");
const std::vector<LatticeElem> kDragon4Extra = parse_tiles(
    "2i\n-1+2i\n-2+i\n-2\n-2-i\n-1-2i\n-3i\n1-3i\n2-3i\n3-2i\n3-i\n3\n2+i\n1+2i\n");

// The three-coefficient system's 16 translates in their published order.
const std::vector<LatticeElem> kDragon3Tiles = parse_tiles(
    "0\ni\n1+i\n1\n1-i\n-i\n-1\n-1+i\n2i\n1+2i\n2+i\n2\n2-i\n1-2i\n-2i\n-1-i\n");

LatticeSet as_set(const std::vector<LatticeElem>& v) { return LatticeSet(v.begin(), v.end()); }

}  // namespace

TEST_CASE("tile system basics") {
    TileSystem tiles(kPlane, kDragon3Tiles);
    CHECK(tiles.index_of({0, 1}) == 1);
    CHECK(!tiles.index_of({5, 5}).has_value());
    CHECK(TileSystem::from_text(kPlane, tiles.to_text()).translates == tiles.translates);
    CHECK_THROWS_AS(TileSystem(kLine, {{1, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("candidate translates") {
    SUBCASE("line d4: integers within |z| <= 6") {
        CandidateSet cand = candidate_translates(d4_line());
        CHECK(cand.bound == doctest::Approx(6.0));
        CHECK(cand.elems.size() == 13);
        CHECK(as_set(cand.elems).count({-6, 0}) == 1);
        CHECK(as_set(cand.elems).count({7, 0}) == 0);
    }
    SUBCASE("four-coefficient dragon: bound 7.6344") {
        CandidateSet cand = candidate_translates(d4_plane_lift());
        CHECK(std::round(cand.bound * 1e4) / 1e4 == doctest::Approx(7.6344));
        // |z|^2 <= 30 + 20 sqrt(2) ~ 58.28: 185 Gaussian integers
        CHECK(cand.elems.size() == 185);
        CHECK(cand.bound_sq == QuadScalar(Rational(30), Rational(20), 2));
    }
    SUBCASE("three-coefficient dragon: bound 2/(sqrt(2)-1)") {
        CandidateSet cand = candidate_translates(dragon3(QuadScalar(1, 4), QuadScalar(1, 4)));
        CHECK(cand.bound == doctest::Approx(4.828427));
        CHECK(cand.elems.size() == 69);
    }
}

TEST_CASE("observed translates") {
    SUBCASE("line d4 at n=8 sees {0,1,2}") {
        CHECK(observed_translates(d4_line(), 8) == LatticeSet{{0, 0}, {1, 0}, {2, 0}});
    }
    SUBCASE("four-coefficient dragon at n=12 sees the 14 published tiles") {
        CHECK(observed_translates(d4_plane_lift(), 12) == as_set(kDragon4Observed));
    }
    SUBCASE("three-coefficient dragon at n=12 sees the 16 published tiles") {
        CHECK(observed_translates(dragon3(QuadScalar(1, 4), QuadScalar(1, 4)), 12) ==
              as_set(kDragon3Tiles));
    }
    SUBCASE("monotone in n and inside the survivors") {
        CoefficientMask mask = d4_plane_lift();
        LatticeSet survivors = push_out(mask, candidate_translates(mask).elems);
        LatticeSet prev;
        for (unsigned n = 1; n <= 10; ++n) {
            LatticeSet cur = observed_translates(mask, n);
            for (LatticeElem z : prev) CHECK(cur.count(z) == 1);
            for (LatticeElem z : cur) CHECK(survivors.count(z) == 1);
            prev = std::move(cur);
        }
    }
}

TEST_CASE("dependency rows") {
    CoefficientMask d4 = d4_line();
    QuadScalar p0 = qs(1, 8, 1, 8), p1 = qs(3, 8, 1, 8), p2 = qs(3, 8, -1, 8),
               p3 = qs(1, 8, -1, 8);

    SUBCASE("line z=0") {
        WeightMap row = dependency_row(d4, {0, 0});
        CHECK(row.at({0, 0}) == p0 + p1);
        CHECK(row.at({1, 0}) == p0);
        CHECK(row.at({-1, 0}) == p1 + p2);
        CHECK(row.at({-2, 0}) == p2 + p3);
        CHECK(row.at({-3, 0}) == p3);
        CHECK(row.size() == 5);
    }
    SUBCASE("line z=2") {
        WeightMap row = dependency_row(d4, {2, 0});
        CHECK(row.at({1, 0}) == p3);
        CHECK(row.at({2, 0}) == p2 + p3);
    }
    SUBCASE("plane z=0 reproduces the published first equation") {
        WeightMap row = dependency_row(d4_plane_lift(), {0, 0});
        // V_1 = (p0+p1)V_1 + p_{1+i}V_2 + p0 V_4 + p1 V_8 + (p_{1+i}+p_{2+i})V_9 + p_{2+i}V_19
        CHECK(row.at({0, 0}) == p0 + p1);
        CHECK(row.at({0, -1}) == p2);
        CHECK(row.at({1, 0}) == p0);
        CHECK(row.at({-1, 0}) == p1);
        CHECK(row.at({-1, -1}) == p2 + p3);
        CHECK(row.at({-2, -1}) == p3);
        CHECK(row.size() == 6);
    }
}

TEST_CASE("push out") {
    SUBCASE("line d4 keeps the self-looping shifts only") {
        LatticeSet survivors = push_out(d4_line(), candidate_translates(d4_line()).elems);
        CHECK(survivors == LatticeSet{{-1, 0}, {0, 0}, {1, 0}, {2, 0}, {3, 0}});
    }
    SUBCASE("four-coefficient dragon keeps the 28 published tiles") {
        LatticeSet survivors = push_out(d4_plane_lift(), candidate_translates(d4_plane_lift()).elems);
        LatticeSet expected = as_set(kDragon4Observed);
        for (LatticeElem z : kDragon4Extra) expected.insert(z);
        CHECK(survivors == expected);
    }
    SUBCASE("three-coefficient dragon has no extra survivors") {
        CoefficientMask mask = dragon3(QuadScalar(1, 4), QuadScalar(1, 4));
        CHECK(push_out(mask, candidate_translates(mask).elems) == as_set(kDragon3Tiles));
    }
}

TEST_CASE("build_matrix warns on uncertified discards") {
    TileSystem short_list(kLine, {{0, 0}, {1, 0}, {2, 0}});
    TransferMatrix no_cert = build_matrix(short_list, d4_line());
    CHECK(!no_cert.uncertified_discards.empty());
    TransferMatrix with_cert =
        build_matrix(short_list, d4_line(), [](LatticeElem) { return true; });
    CHECK(with_cert.uncertified_discards.empty());
    CHECK(no_cert.matrix == with_cert.matrix);
}

TEST_CASE("line d4 transfer system") {
    std::vector<LatticeElem> order{{0, 0}, {1, 0}, {2, 0}, {-1, 0}, {3, 0}};
    SolveResult solved = solve_tile_system(d4_line(), 8, {}, &order);
    CHECK(solved.uncertified_discards.empty());
    CHECK(solved.observed == std::vector<LatticeElem>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(solved.lower_left_zero);
    CHECK(!solved.det_extra_minus_i.is_zero());
    REQUIRE(solved.reduced);

    // the published 3x3 matrix, entry by entry in the scalar grammar
    REQUIRE(solved.matrix.rows() == 3);
    const char* expected[3][3] = {
        {"1/2+1/4*sqrt(3)", "1/8+1/8*sqrt(3)", "0/1"},
        {"1/2-1/4*sqrt(3)", "3/4", "1/2+1/4*sqrt(3)"},
        {"0/1", "1/8-1/8*sqrt(3)", "1/2-1/4*sqrt(3)"},
    };
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(solved.matrix(i, j).to_string() == expected[i][j]);

    for (auto& s : column_sums(solved.matrix)) CHECK(s == QuadScalar(1));

    REQUIRE(solved.eigenvectors.size() == 1);
    std::vector<QuadScalar> v = normalize_eigenvector(solved.eigenvectors[0], NormalizeMode::Sum1);
    CHECK(v[0] == qs(5, 12, 1, 4));   // (5+3sqrt3)/12
    CHECK(v[1] == QuadScalar(1, 6));
    CHECK(v[2] == qs(5, 12, -1, 4));  // (5-3sqrt3)/12
    CHECK(solved.matrix.apply(solved.eigenvectors[0]) == solved.eigenvectors[0]);
}

TEST_CASE("haar plane reduces to the unit system") {
    SolveResult solved = solve_tile_system(haar_plane(), 10);
    CHECK(solved.observed == std::vector<LatticeElem>{{0, 0}});
    CHECK(solved.lower_left_zero);
    CHECK(solved.reduced);
    REQUIRE(solved.matrix.rows() == 1);
    CHECK(solved.matrix(0, 0) == QuadScalar(1));
    REQUIRE(solved.eigenvectors.size() == 1);
    CHECK(normalize_eigenvector(solved.eigenvectors[0], NormalizeMode::Sum1) ==
          std::vector<QuadScalar>{QuadScalar(1)});
}

TEST_CASE("four-coefficient dragon block system") {
    std::vector<LatticeElem> order = kDragon4Observed;
    order.insert(order.end(), kDragon4Extra.begin(), kDragon4Extra.end());
    SolveResult solved = solve_tile_system(d4_plane_lift(), 12, {}, &order);
    CHECK(solved.uncertified_discards.empty());
    REQUIRE(solved.full_matrix.rows() == 28);
    CHECK(solved.lower_left_zero);
    CHECK(solved.reduced);
    REQUIRE(solved.matrix.rows() == 14);

    // the published upper-left block in terms of the coefficients
    QuadScalar z, p0 = qs(1, 8, 1, 8), p1 = qs(3, 8, 1, 8), p2 = qs(3, 8, -1, 8),
                  p3 = qs(1, 8, -1, 8);
    QuadScalar P01 = p0 + p1, P23 = p2 + p3;
    QuadScalar expected[14][14] = {
        {P01, p2, z, p0, z, z, z, p1, P23, z, z, z, z, z},
        {z, p1, P01, z, z, z, z, z, z, P23, p2, z, p0, z},
        {z, p3, P23, p1, z, z, z, z, z, z, z, z, p2, P01},
        {P23, z, z, p2, P01, p1, z, p3, z, z, z, z, z, z},
        {z, z, z, z, z, p2, P23, z, z, z, z, z, z, z},
        {z, z, z, z, z, p0, P01, p2, z, z, z, z, z, z},
        {z, z, z, z, z, z, z, p0, z, z, z, z, z, z},
        {z, p0, z, z, z, z, z, z, P01, z, z, z, z, z},
        {z, z, z, z, z, z, z, z, z, P01, p0, z, z, z},
        {z, z, z, z, z, z, z, z, z, z, p1, P01, z, z},
        {z, z, z, z, z, z, z, z, z, z, p3, P23, p1, z},
        {z, z, z, z, z, z, z, z, z, z, z, z, p3, z},
        {z, z, z, p3, z, z, z, z, z, z, z, z, z, P23},
        {z, z, z, z, P23, p3, z, z, z, z, z, z, z, z},
    };
    for (std::size_t i = 0; i < 14; ++i)
        for (std::size_t j = 0; j < 14; ++j) CHECK(solved.matrix(i, j) == expected[i][j]);

    for (auto& s : column_sums(solved.matrix)) CHECK(s == QuadScalar(1));

    REQUIRE(solved.eigenvectors.size() == 1);
    CHECK(solved.matrix.apply(solved.eigenvectors[0]) == solved.eigenvectors[0]);

    // the published unit eigenvector, 14 decimals
    const double published[14] = {
        0.988473215486, 0.0991927845318, 0.0476287661136, 0.0956000986321, 0.00421010706117,
        0.0221507197936, 0.0104401680866, 0.0305709339159, -0.00354125079226, -0.00205532069064,
        -0.00475426145644, 0.000811194910171, -0.00886490283771, -0.00174490784237};
    std::vector<double> unit = normalize_eigenvector_unit(solved.eigenvectors[0]);
    REQUIRE(unit.size() == 14);
    double dot = 0, norm = 0;
    for (std::size_t i = 0; i < 14; ++i) {
        dot += unit[i] * published[i];
        norm += published[i] * published[i];
    }
    if (dot < 0)
        for (double& x : unit) x = -x;
    double cosine = std::abs(dot) / std::sqrt(norm);
    CHECK(cosine >= 1.0 - 1e-9);
    for (std::size_t i = 0; i < 14; ++i) CHECK(std::abs(unit[i] - published[i]) <= 1e-6);
}

TEST_CASE("three-coefficient dragon system") {
    CoefficientMask mask = dragon3(QuadScalar(1, 4), QuadScalar(1, 4));
    SolveResult solved = solve_tile_system(mask, 12, {}, &kDragon3Tiles);
    CHECK(solved.uncertified_discards.empty());
    CHECK(solved.reduced);
    REQUIRE(solved.matrix.rows() == 16);

    // the published numeric matrix A(1/2, 1/4, 1/4), frozen as rationals
    const int num[16][16] = {
        {3, 0, 0, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 2, 0, 0, 0, 0, 1, 3, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 1, 1, 0, 0, 0, 0, 0, 3, 2, 0, 0, 0, 0, 0, 0},
        {0, 1, 3, 1, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0, 0, 0},
        {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 3, 1, 0, 0, 0},
        {0, 0, 0, 0, 3, 1, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0},
        {0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1, 3},
        {0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1},
        {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 3, 0},
    };
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j)
            CHECK(solved.matrix(i, j) == QuadScalar(num[i][j], 4));

    REQUIRE(solved.eigenvectors.size() == 1);
    std::vector<QuadScalar> v = normalize_eigenvector(solved.eigenvectors[0], NormalizeMode::First1);
    auto frac = [](long n, long d) { return QuadScalar(Rational(n, d)); };
    std::vector<QuadScalar> published{
        frac(1, 1),
        frac(767262, 1370695),
        frac(795934, 4112085),
        frac(104324, 274139),
        frac(130917, 1370695),
        frac(131013, 1370695),
        frac(13105, 274139),
        frac(32768, 1370695),
        frac(8192, 1370695),
        frac(2048, 1370695),
        frac(512, 1370695),
        frac(128, 274139),
        frac(128, 1370695),
        frac(32, 1370695),
        frac(8, 1370695),
        frac(22, 1370695),
    };
    CHECK(v == published);
}

TEST_CASE("three-coefficient family is uniquely solvable across p_i") {
    for (long num : {1L, 2L, 3L}) {
        QuadScalar pi(num, 8);
        QuadScalar p1 = QuadScalar(1, 2) - pi;
        SolveResult solved = solve_tile_system(dragon3(p1, pi), 12);
        CHECK(solved.reduced);
        CHECK(solved.eigenvectors.size() == 1);
    }
}

TEST_CASE("normalization modes") {
    std::vector<QuadScalar> v{QuadScalar(1, 2), QuadScalar(1, 4), QuadScalar(-1, 4)};
    auto sum1 = normalize_eigenvector(v, NormalizeMode::Sum1);
    QuadScalar total;
    for (auto& x : sum1) total += x;
    CHECK(total == QuadScalar(1));
    auto first1 = normalize_eigenvector(v, NormalizeMode::First1);
    CHECK(first1[0] == QuadScalar(1));
    CHECK(first1[1] == QuadScalar(1, 2));
    std::vector<QuadScalar> zero_sum{QuadScalar(1), QuadScalar(-1)};
    CHECK_THROWS_AS(normalize_eigenvector(zero_sum, NormalizeMode::Sum1), std::domain_error);
    auto unit = normalize_eigenvector_unit(v);
    CHECK(unit[0] * unit[0] + unit[1] * unit[1] + unit[2] * unit[2] == doctest::Approx(1.0));
    CHECK(unit[0] > 0);  // sign convention: largest-magnitude entry positive
}

TEST_CASE("determinant identity for the four-coefficient family") {
    SUBCASE("the d4 lift values") {
        DetIdentitySample sample = det_identity_at(
            {qs(1, 8, 1, 8), qs(3, 8, 1, 8), qs(3, 8, -1, 8), qs(1, 8, -1, 8)}, 3);
        CHECK(sample.pass);
        CHECK(sample.det.to_double() == doctest::Approx(1.0000029).epsilon(1e-6));
    }
    SUBCASE("degenerate corner p0=1") {
        DetIdentitySample sample =
            det_identity_at({QuadScalar(1), QuadScalar(0), QuadScalar(0), QuadScalar(0)}, 3);
        CHECK(sample.pass);
        CHECK(sample.det == QuadScalar(1));
    }
    SUBCASE("twenty seeded rational samples") {
        auto samples = det_identity_check(20, 20240817);
        REQUIRE(samples.size() == 20);
        for (auto& sample : samples) CHECK(sample.pass);
    }
}

TEST_CASE("all-ones is a left eigenvector whenever columns sum to 1") {
    CoefficientMask mask = dragon3(QuadScalar(1, 4), QuadScalar(1, 4));
    SolveResult solved = solve_tile_system(mask, 12);
    auto sums = column_sums(solved.matrix);
    bool all_one = true;
    for (auto& s : sums) all_one = all_one && s == QuadScalar(1);
    REQUIRE(all_one);
    // (1 ... 1) A = (1 ... 1) is exactly the column-sum statement
    QuadMatrix t(solved.matrix.cols(), solved.matrix.rows());
    for (std::size_t i = 0; i < solved.matrix.rows(); ++i)
        for (std::size_t j = 0; j < solved.matrix.cols(); ++j) t(j, i) = solved.matrix(i, j);
    std::vector<QuadScalar> ones(solved.matrix.rows(), QuadScalar(1));
    CHECK(t.apply(ones) == ones);
}

TEST_CASE("matrix csv round trip") {
    SolveResult solved = solve_tile_system(d4_line(), 8);
    QuadMatrix back = matrix_from_csv(matrix_to_csv(solved.matrix));
    CHECK(back == solved.matrix);
}

TEST_CASE("kernel and determinant basics") {
    QuadMatrix a(2, 2);
    a(0, 0) = QuadScalar(1);
    a(0, 1) = QuadScalar(2);
    a(1, 0) = QuadScalar(2);
    a(1, 1) = QuadScalar(4);
    auto kernel = kernel_basis(a);
    REQUIRE(kernel.size() == 1);
    CHECK(a.apply(kernel[0]) == std::vector<QuadScalar>{QuadScalar(), QuadScalar()});
    CHECK(determinant(a) == QuadScalar());

    QuadMatrix b(2, 2);
    b(0, 0) = qs(1, 1, 1, 1);
    b(0, 1) = QuadScalar(1, 2);
    b(1, 0) = QuadScalar(3);
    b(1, 1) = qs(0, 1, -1, 1);
    // det = (1+sqrt3)(-sqrt3) - 3/2 = -3 - sqrt3 - 3/2
    CHECK(determinant(b) == qs(-9, 2, -1, 1));
}
