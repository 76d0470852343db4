#include "doctest.h"

#include "agiopp/channel.hpp"
#include "agiopp/rrbasis.hpp"

using namespace agiopp;

namespace {

std::vector<Fe> hermitian_roots(const Field& F, u64 q) {
    std::vector<Fe> roots;
    for (u128 i = 0; i < F.cardinality(); ++i) {
        Fe x = F.element(i);
        if (F.is_zero(F.add(F.pow(x, q), x))) roots.push_back(x);
    }
    return roots;
}

Divisor inf_divisor(i64 b) {
    Divisor D;
    D.set(PointKey::inf(), b);
    return D;
}

}  // namespace

TEST_CASE("hu-yang basis: y^3 = x(x+1) over F_4, D = 3 Pinf") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    auto basis = hu_yang_basis(c, 0, inf_divisor(3));
    REQUIRE(basis.size() == 3);  // deg - g + 1 = 3 - 1 + 1
    // exponent pairs (j, j_2): (0,0), (1,0), (3,-1), i.e. {1, y, y^3/(x-1)}
    CHECK(basis[0].e == std::vector<i64>{0, 0});
    CHECK(basis[1].e == std::vector<i64>{1, 0});
    CHECK(basis[2].e == std::vector<i64>{3, -1});

    // D = 0 -> constants only
    CHECK(hu_yang_basis(c, 0, inf_divisor(0)).size() == 1);

    // Hermitian q=4 over F_16, D = 15 Pinf -> 10 functions (15 - 6 + 1)
    Field F16 = Field::make(2, 4);
    KummerCurve h = KummerCurve::make(F16, 5, hermitian_roots(F16, 4));
    CHECK(hu_yang_basis(h, 0, inf_divisor(15)).size() == 10);
}

TEST_CASE("hu-yang dimension matches Riemann-Roch for deg >= 2g - 1") {
    Field F16 = Field::make(2, 4);
    KummerCurve h = KummerCurve::make(F16, 5, hermitian_roots(F16, 4));
    i64 g = h.genus(0);
    for (i64 d = 2 * g - 1; d <= 40; ++d)
        CHECK(i64(hu_yang_basis(h, 0, inf_divisor(d)).size()) == d - g + 1);
    // below 2g - 1 the dimension is still >= max(deg - g + 1, 0)
    for (i64 d = 0; d < 2 * g - 1; ++d)
        CHECK(i64(hu_yang_basis(h, 0, inf_divisor(d)).size()) >= std::max<i64>(d - g + 1, 1));
}

TEST_CASE("tower basis: level 1, q = 2, m = 6 and trivials") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    auto b = tower_basis(t, 1, 6);
    REQUIRE(b.size() == 6);  // m - g + 1 = 6 - 1 + 1
    // {1, x_0, x_0^2, x_0^3, x_1, x_0 x_1} with weights 2 a_0 + 3 a_1 <= 6
    std::vector<std::vector<i64>> got;
    for (auto& f : b) got.push_back(f.e);
    std::vector<std::vector<i64>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {3, 0}};
    CHECK(got == want);

    CHECK(tower_basis(t, 1, 0).size() == 1);
    CHECK(tower_basis(t, 0, 5).size() == 6);  // line: polynomials of degree <= 5

    // Riemann-Roch at level 2 (g = 6) for m >= 2g - 1
    for (i64 m = 11; m <= 30; ++m) CHECK(i64(tower_basis(t, 2, m).size()) == m - 6 + 1);
}

TEST_CASE("basis function evaluation") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    BasisContext ctx{&F4, &c};

    // constant
    BasisFunction one{BasisFunction::Kind::kummer, {0, 0}};
    Fe pt[2] = {F4.element(2), F4.element(1)};  // (w, 1)
    CHECK(evaluate_basis_function(ctx, one, pt, 2) == F4.one());

    // y at (w, 1) -> 1
    BasisFunction y{BasisFunction::Kind::kummer, {1, 0}};
    CHECK(evaluate_basis_function(ctx, y, pt, 2) == F4.one());

    // y^3/(x - 1) at x = 1 is a pole
    BasisFunction f3{BasisFunction::Kind::kummer, {3, -1}};
    Fe bad[2] = {F4.one(), F4.zero()};
    CHECK_THROWS_AS(evaluate_basis_function(ctx, f3, bad, 2), error);
}

TEST_CASE("encode: zero, unit, and full-rank generator") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    BasisContext ctx{&F4, &c};
    EvalDomain dom = build_eval_domain(c);
    auto basis = hu_yang_basis(c, 0, inf_divisor(3));
    Matrix G = generator_matrix(ctx, basis, dom);
    REQUIRE(G.rows == 3);
    REQUIRE(G.cols == 6);

    std::vector<Fe> zero_msg(3, F4.zero());
    auto zero_cw = encode(F4, G, zero_msg);
    for (Fe v : zero_cw) CHECK(F4.is_zero(v));

    // unit message on the constant basis function -> all-ones codeword
    std::vector<Fe> e0{F4.one(), F4.zero(), F4.zero()};
    auto ones = encode(F4, G, e0);
    for (Fe v : ones) CHECK(v == F4.one());

    RowSpace rs(F4, G);
    CHECK(rs.rank() == 3);  // 3x6 generator has full rank
}

TEST_CASE("minimum distance, exhaustive") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    BasisContext ctx{&F4, &c};
    EvalDomain dom = build_eval_domain(c);
    Matrix G = generator_matrix(ctx, hu_yang_basis(c, 0, inf_divisor(3)), dom);
    CHECK(min_distance_exhaustive(F4, G) == Rat(1, 2));  // [6,3], Delta = 1 - 3/6

    // RS[4,3] over F_4: Delta = 1/2 (Singleton equality)
    EvalDomain line;
    line.coord_count = 1;
    for (u128 i = 0; i < 4; ++i) line.coords.push_back(F4.element(i));
    BasisContext lctx{&F4, nullptr};
    Matrix Grs = generator_matrix(lctx, line_basis(2), line);
    CHECK(min_distance_exhaustive(F4, Grs) == Rat(1, 2));

    // dimension-1 repetition code
    Matrix Grep = generator_matrix(lctx, line_basis(0), line);
    CHECK(min_distance_exhaustive(F4, Grep) == Rat(1, 1));
}

TEST_CASE("rowspace membership") {
    Field F4 = Field::make(2, 2);
    EvalDomain line;
    line.coord_count = 1;
    for (u128 i = 0; i < 4; ++i) line.coords.push_back(F4.element(i));
    BasisContext lctx{&F4, nullptr};
    Matrix G = generator_matrix(lctx, line_basis(1), line);  // RS[4, deg <= 1]
    RowSpace rs(F4, G);
    CHECK(rs.rank() == 2);

    Coins rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Fe> msg{rng.field_element(F4), rng.field_element(F4)};
        CHECK(rs.contains(encode(F4, G, msg)));
    }
    // x^2 is not an affine function on F_4
    std::vector<Fe> sq;
    for (u128 i = 0; i < 4; ++i) sq.push_back(F4.mul(F4.element(i), F4.element(i)));
    CHECK(!rs.contains(sq));
}
