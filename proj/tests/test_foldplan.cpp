#include "doctest.h"

#include "agiopp/validate.hpp"

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

TEST_CASE("principal divisors") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    Divisor dy = principal_divisor_y(c, 0);
    CHECK(dy.at(PointKey::root(1)) == 1);
    CHECK(dy.at(PointKey::root(2)) == 1);
    CHECK(dy.at(PointKey::inf()) == -2);  // div(y) = P_1 + P_2 - 2 Pinf
    CHECK(dy.degree() == 0);

    Divisor dx = principal_divisor_x_minus_alpha(c, 0, 1);
    CHECK(dx.at(PointKey::root(1)) == 3);
    CHECK(dx.at(PointKey::inf()) == -3);

    TowerCurve t = TowerCurve::make(F4, 2);
    Divisor dx1 = principal_divisor_xi(t, 1);
    CHECK(dx1.at(PointKey::origin()) == 3);   // (q+1)^1 (P - Pinf)
    CHECK(dx1.at(PointKey::inf()) == -3);
    CHECK(tower_infinity_valuation(t, 1, 0) == -2);  // v_{Pinf^(1)}(x_0) = -q
    CHECK(tower_infinity_valuation(t, 2, 1) == -6);  // -q (q+1)
}

TEST_CASE("balancing exponents: greedy largest-first with backtracking") {
    CHECK(balancing_exponents(2, 1, 2) == std::vector<i64>{2});        // gens {1}: nu = x_0^2
    CHECK(balancing_exponents(2, 2, 5) == std::vector<i64>{1, 1});     // gens {2,3}: x_0 x_1
    CHECK(balancing_exponents(2, 2, 7) == std::vector<i64>{2, 1});     // 7 = 2*2 + 3
    CHECK_THROWS_AS(balancing_exponents(2, 2, 1), error);              // 1 is a gap of <2,3>
    CHECK(balancing_exponents(2, 2, 0) == std::vector<i64>{0, 0});
    // q = 4, i = 2: gens {16, 20, 25}... at level 1: {4, 5}
    CHECK(balancing_exponents(4, 2, 13) == std::vector<i64>{2, 1});    // 13 = 2*4 + 5
}

TEST_CASE("kummer plan on F_4: the [6,3] chain") {
    Field F4 = Field::make(2, 2);
    KummerCurve c = KummerCurve::make(F4, 3, hermitian_roots(F4, 2));
    EvalDomain P0 = build_eval_domain(c);
    FoldingPlan plan = plan_kummer(F4, c, inf_divisor(3), P0);

    REQUIRE(plan.levels.size() == 3);  // [6,3] -> [2, d=1] -> [1, d=0]
    CHECK(plan.levels[0].n == 6);
    CHECK(plan.levels[0].dim == 3);
    CHECK(plan.levels[0].p == 3);
    CHECK(plan.levels[1].n == 2);
    CHECK(plan.levels[1].dim == 2);
    CHECK(plan.levels[1].deg == 1);
    CHECK(plan.levels[1].p == 2);
    CHECK(plan.levels[2].n == 1);
    CHECK(plan.levels[2].dim == 1);
    CHECK(plan.levels[0].delta == Rat(1, 2));
    CHECK(plan.levels[1].delta == Rat(1, 2));
    CHECK(plan.levels[2].delta == Rat(1, 1));  // terminal [1,1] repetition point
    CHECK(plan.lambda == Rat(1, 2));
    CHECK(plan.p_max == 3);
    CHECK(plan.group_order == 6);
    CHECK(plan.proof_length() == 3);  // 2 + 1 < 6

    // E_{0,0} = D_1 exactly (Kummer), E_{0,j} = D_1 - j Pinf
    CHECK(plan.levels[0].E[0] == plan.levels[1].D);
    CHECK(plan.levels[0].E[1].at(PointKey::inf()) == 0);
    CHECK(plan.levels[0].E[2].at(PointKey::inf()) == -1);

    PlanReport rep = validate_plan(plan);
    for (auto* f : rep.failures()) MESSAGE(f->name, ": ", f->detail);
    CHECK(rep.all_pass());
}

TEST_CASE("kummer plan: Hermitian q=4 [60,10] -> RS[12,3] -> tail") {
    Field F16 = Field::make(2, 4);
    KummerCurve h = KummerCurve::make(F16, 5, hermitian_roots(F16, 4));
    EvalDomain P0 = build_eval_domain(h);
    FoldingPlan plan = plan_kummer(F16, h, inf_divisor(15), P0);

    REQUIRE(plan.levels.size() == 4);  // 60 -> 12 -> 6 -> 3
    CHECK(plan.levels[0].n == 60);
    CHECK(plan.levels[0].dim == 10);
    CHECK(plan.levels[0].p == 5);
    CHECK(plan.levels[1].n == 12);
    CHECK(plan.levels[1].deg == 3);
    CHECK(plan.levels[1].dim == 4);
    CHECK(plan.levels[2].n == 6);
    CHECK(plan.levels[2].deg == 1);
    CHECK(plan.levels[3].n == 3);
    CHECK(plan.levels[3].deg == 0);
    CHECK(plan.levels[0].delta == Rat(3, 4));
    CHECK(plan.lambda == Rat(3, 4));
    CHECK(plan.proof_length() == 21);  // 12 + 6 + 3 < 60

    PlanReport rep = validate_plan(plan);
    for (auto* f : rep.failures()) MESSAGE(f->name, ": ", f->detail);
    CHECK(rep.all_pass());
}

TEST_CASE("kummer plan rejections") {
    Field F16 = Field::make(2, 4);
    KummerCurve h = KummerCurve::make(F16, 5, hermitian_roots(F16, 4));
    EvalDomain P0 = build_eval_domain(h);

    // coefficients not divisible by N
    CHECK_THROWS_WITH_AS(plan_kummer(F16, h, inf_divisor(12), P0) /* 5 does not divide 12 */,
                         doctest::Contains("not divisible by N"), error);

    // deg D >= n
    CHECK_THROWS_AS(plan_kummer(F16, h, inf_divisor(60), P0), error);

    // m not congruent to -1 mod N: y^3 = x^4 + x over F_16 has m = 4, N = 3
    KummerCurve bad = KummerCurve::make(F16, 3, hermitian_roots(F16, 4));
    EvalDomain Pb = build_eval_domain(bad);
    CHECK_THROWS_WITH_AS(plan_kummer(F16, bad, inf_divisor(3), Pb), doctest::Contains("not congruent to -1 mod N"),
                         error);
}

TEST_CASE("tower degree recursion reference values") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    // q=2, top=1, d_1 = 4 -> d_0 = 2
    CHECK(tower_degree_sequence(t, 1, 4) == std::vector<i64>{2, 4});
    // q=2, top=2, d_2 = 8 -> d_1 = 4 + 2 g_1 = 6, d_0 = 3
    CHECK(tower_degree_sequence(t, 2, 8) == std::vector<i64>{3, 6, 8});
    // no-bump variant drops the 2g term
    CHECK(tower_degree_sequence(t, 2, 8, true) == std::vector<i64>{2, 4, 8});
}

TEST_CASE("tower plan q=2 top=1 d=4: [8,4] -> RS[4,2] -> tail") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    FoldingPlan plan = plan_tower(F4, t, 1, 4);
    REQUIRE(plan.levels.size() == 4);  // 8 -> 4 -> 2 -> 1
    CHECK(plan.levels[0].n == 8);
    CHECK(plan.levels[0].dim == 4);
    CHECK(plan.levels[1].n == 4);
    CHECK(plan.levels[1].deg == 2);
    CHECK(plan.levels[1].dim == 3);
    CHECK(plan.levels[2].deg == 1);
    CHECK(plan.levels[3].deg == 0);

    PlanReport rep = validate_plan(plan);
    for (auto* f : rep.failures()) MESSAGE(f->name, ": ", f->detail);
    CHECK(rep.all_pass());
}

TEST_CASE("tower plan q=2 top=2 d=1: the canonical folding-test plan") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    FoldingPlan plan = plan_tower(F4, t, 2, 1);
    REQUIRE(plan.levels.size() == 4);  // 16 -> 8 -> 4 -> 2 (d: 1, 2, 1, 0)
    CHECK(plan.levels[0].n == 16);
    CHECK(plan.levels[0].deg == 1);
    CHECK(plan.levels[0].dim == 1);
    CHECK(plan.levels[1].n == 8);
    CHECK(plan.levels[1].deg == 2);
    CHECK(plan.levels[1].dim == 2);
    CHECK(plan.levels[2].n == 4);
    CHECK(plan.levels[2].deg == 1);
    CHECK(plan.levels[3].n == 2);
    CHECK(plan.levels[3].deg == 0);
    CHECK(plan.levels[3].dim == 1);

    // balancing functions: fold 0 has nu_0 = x_0 (pole 2 = 2 g_1), nu_1 = x_1^2 (pole 6)
    CHECK(plan.levels[0].nu_desc[0] == std::vector<i64>{1, 0});
    CHECK(plan.levels[0].nu_desc[1] == std::vector<i64>{0, 2});
    CHECK(plan.levels[0].nu_poles[1].at(PointKey::inf()) == 6);
    // fold 1: nu_1 = x_0^2
    CHECK(plan.levels[1].nu_desc[1] == std::vector<i64>{2});

    PlanReport rep = validate_plan(plan);
    for (auto* f : rep.failures()) MESSAGE(f->name, ": ", f->detail);
    CHECK(rep.all_pass());
}

TEST_CASE("tower plan rejections") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    // d_2 = 8 gives d_0 = 3 on a 4-point line: rate 1, degenerate
    CHECK_THROWS_WITH_AS(plan_tower(F4, t, 2, 8), doctest::Contains("rate >= 1"), error);

    // the no-genus-bump rule fails compatibility at i >= 2:
    // q=2, top=4, d_4 = 10: m_{4,1} = 41 is a gap of <8,12,18,27>
    CHECK_THROWS_WITH_AS(plan_tower(F4, t, 4, 10, {}, PlanOptions{Rat(1, 2), true}),
                         doctest::Contains("not in the Weierstrass semigroup"), error);

    // and at i = 2 with q = 3 (F_9), d_2 = 19: m_{2,1} = 5 is a gap of <3,4>
    Field F9 = Field::make(3, 2);
    TowerCurve t3 = TowerCurve::make(F9, 3);
    CHECK_THROWS_WITH_AS(plan_tower(F9, t3, 2, 19, {}, PlanOptions{Rat(1, 2), true}),
                         doctest::Contains("not in the Weierstrass semigroup"), error);
}

TEST_CASE("rs plans over BabyBear cosets") {
    Field F = Field::make(2013265921, 1);
    std::vector<Fe> dom = rs_coset_domain(F, 6, F.one());
    FoldingPlan plan = plan_rs(F, dom, 15);
    CHECK(plan.levels[0].n == 64);
    CHECK(plan.levels[0].dim == 16);
    // d: 15 -> 7 -> 3 -> 1 -> 0
    REQUIRE(plan.levels.size() == 5);
    CHECK(plan.levels[4].deg == 0);
    CHECK(plan.levels[4].n == 4);
    PlanReport rep = validate_plan(plan);
    for (auto* f : rep.failures()) MESSAGE(f->name, ": ", f->detail);
    CHECK(rep.all_pass());

    // d = 2 on 8 points: first fold must use nu = x (even-degree guard)
    FoldingPlan p2 = plan_rs(F, rs_coset_domain(F, 3, F.one()), 2);
    CHECK(p2.levels[0].nu_desc[1] == std::vector<i64>{1});
    // d = 3: nu = 1 at the first fold (odd degree)
    FoldingPlan p3 = plan_rs(F, rs_coset_domain(F, 3, F.one()), 3);
    CHECK(p3.levels[0].nu_desc[1] == std::vector<i64>{0});
    // d sequence 3 -> 1 -> 0: two fold levels + terminal
    CHECK(p3.levels.size() == 3);

    // d = 0: empty tail, plan is a single terminal level
    FoldingPlan p0 = plan_rs(F, rs_coset_domain(F, 3, F.one()), 0);
    CHECK(p0.levels.size() == 1);

    // domains without 2-adic structure error out
    std::vector<Fe> bad{F.element(1), F.element(2), F.element(3), F.element(5)};
    CHECK_THROWS_WITH_AS(plan_rs(F, bad, 1), doctest::Contains("2-adic"), error);
}

TEST_CASE("rs tail on char-2 domains (additive structure)") {
    Field F16 = Field::make(2, 4);
    // F_16 \ F_4 is a union of F_4-cosets: foldable twice (12 -> 6 -> 3)
    std::vector<Fe> pts;
    for (u128 i = 0; i < 16; ++i) {
        Fe x = F16.element(i);
        if (!(F16.pow(x, 4) == x)) pts.push_back(x);
    }
    FoldingPlan plan = plan_rs(F16, pts, 3);
    REQUIRE(plan.levels.size() == 3);
    CHECK(plan.levels[0].n == 12);
    CHECK(plan.levels[1].n == 6);
    CHECK(plan.levels[2].n == 3);
    PlanReport rep = validate_plan(plan);
    CHECK(rep.all_pass());
}

TEST_CASE("plan digests are deterministic and parameter-sensitive") {
    Field F4 = Field::make(2, 2);
    TowerCurve t = TowerCurve::make(F4, 2);
    FoldingPlan a = plan_tower(F4, t, 2, 1);
    FoldingPlan b = plan_tower(F4, t, 2, 1);
    FoldingPlan c = plan_tower(F4, t, 1, 4);
    CHECK(a.digest == b.digest);
    CHECK(!(a.digest == c.digest));
}

TEST_CASE("rate bound certifies the reference parameter rows") {
    auto rows = reference_tower_rows();
    REQUIRE(rows.size() == 9);
    for (auto& row : rows) {
        // block length q^{top+2}
        i128 n = TowerCurve::ipow(i128(row.q), row.top + 2);
        CHECK(n == TowerCurve::ipow(2, row.log_n));
        i64 d_top = tower_divisor_degree_for_rate(row.q, row.top, row.rate);
        Rat rho = Rat(1) - row.one_minus_rho;
        TowerRateBound rb = tower_rate_bound(row.q, row.top, d_top, rho, i64(row.q) * i64(row.q));
        CHECK(rb.certified);
    }
}

TEST_CASE("tower degree sequence obeys the telescoped bound") {
    // d_{top-j} <= floor(d_top / q^j) + sum_k floor(2 g_{top-k} / q^{j-k}) + (j-1)
    Field F4 = Field::make(2, 2);
    Field F16 = Field::make(2, 4);
    for (auto [Fp, q] : std::vector<std::pair<const Field*, u64>>{{&F4, 2}, {&F16, 4}}) {
        TowerCurve t = TowerCurve::make(*Fp, q);
        for (unsigned top = 1; top <= 5; ++top) {
            for (i64 dtop : {1, 3, 7, 20, 111}) {
                auto d = tower_degree_sequence(t, top, dtop);
                for (unsigned j = 1; j <= top; ++j) {
                    i64 rhs = floor_div(dtop, i64(TowerCurve::ipow(i128(q), j)));
                    for (unsigned k = 1; k <= j; ++k)
                        rhs += floor_div(2 * i64(t.genus(top - k)), i64(TowerCurve::ipow(i128(q), j - k)));
                    rhs += i64(j) - 1;
                    CHECK(d[top - j] <= rhs);
                }
            }
        }
    }
}

TEST_CASE("kummer degree/length ratio is constant along the AG chain") {
    Field F16 = Field::make(2, 4);
    std::vector<Fe> roots;
    for (u128 i = 0; i < 16; ++i) {
        Fe x = F16.element(i);
        if (F16.is_zero(F16.add(F16.pow(x, 4), x))) roots.push_back(x);
    }
    KummerCurve h = KummerCurve::make(F16, 5, roots);
    Divisor D;
    D.set(PointKey::inf(), 15);
    FoldingPlan plan = plan_kummer(F16, h, D, build_eval_domain(h));
    Rat r0(i128(plan.levels[0].deg), i128(plan.levels[0].n));
    for (unsigned l = 0; l <= plan.ag_folds; ++l)
        CHECK(Rat(i128(plan.levels[l].deg), i128(plan.levels[l].n)) == r0);
}
