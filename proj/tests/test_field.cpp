#include "doctest.h"

#include "agiopp/channel.hpp"
#include "agiopp/field.hpp"
#include "agiopp/poly.hpp"

using namespace agiopp;

namespace {

void check_axioms(const Field& F, size_t samples) {
    Coins rng(0xf00dull ^ F.p ^ F.k);
    for (size_t i = 0; i < samples; ++i) {
        Fe a = rng.field_element(F), b = rng.field_element(F), c = rng.field_element(F);
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        CHECK(F.add(a, F.neg(a)) == F.zero());
        CHECK(F.mul(a, F.one()) == a);
        if (!F.is_zero(a)) {
            CHECK(F.mul(a, F.inv(a)) == F.one());
        }
        CHECK(F.sub(a, b) == F.add(a, F.neg(b)));
    }
}

}  // namespace

TEST_CASE("make_field: deterministic moduli and the budget error") {
    Field F4 = Field::make(2, 2);
    // the unique degree-2 irreducible over F_2: w^2 + w + 1
    CHECK(F4.modulus == std::vector<u64>{1, 1, 1});
    CHECK(F4.cardinality() == 4);

    Field F16 = Field::make(2, 4);
    CHECK(F16.modulus == std::vector<u64>{1, 1, 0, 0, 1});  // t^4 + t + 1

    Field F256 = Field::make(2, 8);
    CHECK(F256.cardinality() == 256);

    CHECK_THROWS_AS(Field::make(4, 1), error);      // 4 not prime
    CHECK_THROWS_AS(Field::make(3, 5), error);      // odd p beyond quadratic
    CHECK_THROWS_AS(Field::make(2, 200), error);    // binary budget

    // Mersenne prime and its quadratic extension (t^2 + 1 since -1 is a non-residue)
    Field Fq = Field::make((u64(1) << 61) - 1, 1);
    CHECK(Fq.cardinality() == u128((u64(1) << 61) - 1));
    Field Fq2 = Field::make((u64(1) << 61) - 1, 2);
    CHECK(Fq2.modulus == std::vector<u64>{1, 0, 1});
    CHECK(Fq2.cardinality() == u128((u64(1) << 61) - 1) * ((u64(1) << 61) - 1));
}

TEST_CASE("field axioms on sampled triples") {
    check_axioms(Field::make(2, 2), 10000);
    check_axioms(Field::make(2, 4), 10000);
    check_axioms(Field::make(2, 8), 10000);
    check_axioms(Field::make(2, 48), 10000);
    check_axioms(Field::make(2013265921, 1), 10000);  // 15 * 2^27 + 1
    check_axioms(Field::make((u64(1) << 61) - 1, 1), 10000);
    check_axioms(Field::make((u64(1) << 61) - 1, 2), 10000);
    check_axioms(Field::make(3, 2), 10000);  // F_9
}

TEST_CASE("primitive roots of unity") {
    Field F4 = Field::make(2, 2);
    Fe g = F4.primitive_root_of_unity(3);
    CHECK(F4.order(g) == 3);
    CHECK(F4.to_uint(g) >= 2);  // w or w^2
    CHECK_THROWS_AS(F4.primitive_root_of_unity(5), error);  // 5 does not divide 3

    Field F16 = Field::make(2, 4);
    Fe g5 = F16.primitive_root_of_unity(5);
    CHECK(F16.pow(g5, 5) == F16.one());
    CHECK(F16.order(g5) == 5);
    // exhaustive cross-check: x^5 = 1 and x != 1 for the returned element
    size_t order5 = 0;
    for (u128 i = 1; i < 16; ++i) {
        Fe x = F16.element(i);
        if (F16.pow(x, 5) == F16.one() && !(x == F16.one())) ++order5;
    }
    CHECK(order5 == 4);

    Field Fb = Field::make(2013265921, 1);
    Fe r = Fb.primitive_root_of_unity(u128(1) << 16);
    CHECK(Fb.order(r) == (u128(1) << 16));

    // g^d != 1 for every proper divisor d of N
    Field F256 = Field::make(2, 8);
    const u128 N = 85;  // 5 * 17, divides 255
    Fe g85 = F256.primitive_root_of_unity(N);
    for (u128 d = 1; d < N; ++d)
        if (N % d == 0) CHECK(!(F256.pow(g85, d) == F256.one()));
    CHECK(F256.pow(g85, N) == F256.one());
}

TEST_CASE("interpolation: stated examples and round trip") {
    Field F16 = Field::make(2, 4);

    // constant data -> constant polynomial
    std::vector<Fe> xs{F16.element(3), F16.element(7), F16.element(9)};
    Fe c = F16.element(11);
    Poly p = interpolate(F16, xs, {c, c, c});
    CHECK(p.degree() == 0);
    CHECK(p.c[0] == c);

    // (0,0), (1,1) -> X
    Poly idp = interpolate(F16, {F16.zero(), F16.one()}, {F16.zero(), F16.one()});
    CHECK(idp.degree() == 1);
    CHECK(idp.c[0] == F16.zero());
    CHECK(idp.c[1] == F16.one());

    CHECK_THROWS_AS(interpolate(F16, {F16.one(), F16.one()}, {F16.zero(), F16.one()}), error);

    // random degree-2 polynomial recovered from 3 evaluations
    Coins rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        Poly q;
        q.c = {rng.field_element(F16), rng.field_element(F16), rng.field_element(F16)};
        q.trim(F16);
        std::vector<Fe> pts{F16.element(1), F16.element(6), F16.element(13)};
        Poly rec = interpolate(F16, pts, poly_eval_many(F16, q, pts));
        for (Fe x : pts) CHECK(poly_eval(F16, rec, x) == poly_eval(F16, q, x));
        CHECK(rec.c == q.c);
    }

    // exhaustive round trip over F_4: every polynomial of degree < 4 on all 4 points
    Field F4 = Field::make(2, 2);
    std::vector<Fe> all{F4.element(0), F4.element(1), F4.element(2), F4.element(3)};
    for (u128 code = 0; code < 256; ++code) {
        Poly q;
        u128 cc = code;
        for (int i = 0; i < 4; ++i) {
            q.c.push_back(F4.element(cc % 4));
            cc /= 4;
        }
        q.trim(F4);
        Poly rec = interpolate(F4, all, poly_eval_many(F4, q, all));
        CHECK(rec.c == q.c);
    }
}

TEST_CASE("serialization round trip and byte lengths") {
    for (auto [p, k] : std::vector<std::pair<u64, unsigned>>{{2, 2}, {2, 4}, {2, 8}, {2, 48}, {2013265921, 1},
                                                             {(u64(1) << 61) - 1, 2}}) {
        Field F = Field::make(p, k);
        Coins rng(p + k);
        std::vector<u8> buf(F.byte_len());
        for (int i = 0; i < 500; ++i) {
            Fe a = rng.field_element(F);
            F.write(a, buf.data());
            CHECK(F.read(buf.data()) == a);
        }
    }
    CHECK(Field::make(2, 2).byte_len() == 1);
    CHECK(Field::make(2, 8).byte_len() == 1);
    CHECK(Field::make(2, 48).byte_len() == 6);
    CHECK(Field::make((u64(1) << 61) - 1, 2).byte_len() == 16);
}

TEST_CASE("binary subfield embedding is a ring homomorphism") {
    Field F16 = Field::make(2, 4);
    Field E = Field::make(2, 48);
    FieldEmbedding emb(F16, E);
    Coins rng(7);
    for (int i = 0; i < 2000; ++i) {
        Fe a = rng.field_element(F16), b = rng.field_element(F16);
        CHECK(emb.lift(F16.add(a, b)) == E.add(emb.lift(a), emb.lift(b)));
        CHECK(emb.lift(F16.mul(a, b)) == E.mul(emb.lift(a), emb.lift(b)));
    }
    CHECK(emb.lift(F16.one()) == E.one());
    // injectivity on the subfield
    std::vector<Fe> seen;
    for (u128 i = 0; i < 16; ++i) seen.push_back(emb.lift(F16.element(i)));
    std::sort(seen.begin(), seen.end());
    CHECK(std::unique(seen.begin(), seen.end()) == seen.end());
}
