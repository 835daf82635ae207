#include <doctest.h>

#include <algorithm>
#include <vector>

#include "shiftsim/check.hpp"
#include "shiftsim/logic.hpp"
#include "shiftsim/netlist.hpp"

using namespace shiftsim;

namespace {
const LogicValue kAll[] = {L0, L1, LX, LZ};
}

TEST_CASE("resolve basics") {
    std::vector<LogicValue> v;
    CHECK(resolve(v) == LZ); // undriven net floats

    v = {LZ, L1};
    CHECK(resolve(v) == L1); // single strong driver wins
    v = {L0, L1};
    CHECK(resolve(v) == LX); // driver conflict
    v = {LZ, LZ, LZ};
    CHECK(resolve(v) == LZ);
    v = {L1, L1};
    CHECK(resolve(v) == L1);
    v = {LZ, LX, L1};
    CHECK(resolve(v) == LX);
    v = {LX};
    CHECK(resolve(v) == LX);
}

TEST_CASE("resolve is order-independent") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<LogicValue> v;
        int n = 1 + static_cast<int>(rng.bits(3));
        for (int i = 0; i < n; ++i) v.push_back(kAll[rng.bits(2)]);
        LogicValue base = resolve(v);
        for (int p = 0; p < 8; ++p) {
            for (std::size_t i = v.size(); i > 1; --i)
                std::swap(v[i - 1], v[rng.next() % i]);
            CHECK(resolve(v) == base);
        }
    }
}

TEST_CASE("resolve is associative over partitions") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<LogicValue> v;
        int n = 2 + static_cast<int>(rng.bits(3));
        for (int i = 0; i < n; ++i) v.push_back(kAll[rng.bits(2)]);
        std::size_t cut = 1 + rng.next() % (v.size() - 1);
        std::vector<LogicValue> left(v.begin(), v.begin() + cut);
        std::vector<LogicValue> right(v.begin() + cut, v.end());
        std::vector<LogicValue> folded = {resolve(left), resolve(right)};
        CHECK(resolve(folded) == resolve(v));
    }
}

TEST_CASE("gates match the boolean tables on strong inputs") {
    auto b = [](LogicValue v) { return v == L1; };
    auto lv = [](bool v) { return v ? L1 : L0; };
    for (LogicValue a : {L0, L1}) {
        std::vector<LogicValue> in1 = {a};
        CHECK(eval_primitive(PrimitiveKind::Not, in1) == lv(!b(a)));
        CHECK(eval_primitive(PrimitiveKind::Buf, in1) == lv(b(a)));
        for (LogicValue c : {L0, L1}) {
            std::vector<LogicValue> in2 = {a, c};
            CHECK(eval_primitive(PrimitiveKind::And2, in2) == lv(b(a) && b(c)));
            CHECK(eval_primitive(PrimitiveKind::Nand2, in2) == lv(!(b(a) && b(c))));
            CHECK(eval_primitive(PrimitiveKind::Or2, in2) == lv(b(a) || b(c)));
            CHECK(eval_primitive(PrimitiveKind::Nor2, in2) == lv(!(b(a) || b(c))));
            CHECK(eval_primitive(PrimitiveKind::Xor2, in2) == lv(b(a) != b(c)));
        }
    }
}

TEST_CASE("controlling values beat unknowns") {
    std::vector<LogicValue> in = {L1, L1};
    CHECK(eval_primitive(PrimitiveKind::Nand2, in) == L0);
    in = {L0, LX};
    CHECK(eval_primitive(PrimitiveKind::Nand2, in) == L1); // L0 controls NAND
    CHECK(eval_primitive(PrimitiveKind::And2, in) == L0);
    in = {L1, LX};
    CHECK(eval_primitive(PrimitiveKind::Or2, in) == L1);
    in = {LX, LX};
    CHECK(eval_primitive(PrimitiveKind::Xor2, in) == LX);
    in = {LZ, L1};
    CHECK(eval_primitive(PrimitiveKind::And2, in) == LX); // floating input reads X
}

TEST_CASE("transmission gate") {
    auto tg = [](LogicValue in, LogicValue en, LogicValue en_b) {
        std::vector<LogicValue> v = {in, en, en_b};
        return eval_primitive(PrimitiveKind::Tgate, v);
    };
    CHECK(tg(L1, L1, L0) == L1);
    CHECK(tg(L0, L1, L0) == L0);
    CHECK(tg(L1, L0, L1) == LZ); // gate off floats
    CHECK(tg(L1, LX, LX) == LX);
    CHECK(tg(L1, LX, L0) == L1);  // the other pass device pins it on
    CHECK(tg(L1, L1, L1) == L1);  // either device conducting passes
    CHECK(tg(L1, L0, L0) == L1);
    CHECK(tg(LZ, L1, L0) == LZ);  // passes a floating input as floating
}

TEST_CASE("clocked inverter") {
    auto cinv = [](LogicValue in, LogicValue en, LogicValue en_b) {
        std::vector<LogicValue> v = {in, en, en_b};
        return eval_primitive(PrimitiveKind::Cinv, v);
    };
    CHECK(cinv(L0, L1, L0) == L1);
    CHECK(cinv(L1, L1, L0) == L0);
    CHECK(cinv(L1, L0, L1) == LZ);
    CHECK(cinv(L0, L0, L1) == LZ);
    // Skewed enables drive one rail alone.
    CHECK(cinv(L1, L1, L1) == L0); // pull-down active, pull-up blocked
    CHECK(cinv(L0, L1, L1) == LZ);
    CHECK(cinv(L0, L0, L0) == L1);
    CHECK(cinv(L1, L0, L0) == LZ);
    CHECK(cinv(LX, L1, L0) == LX);
}

TEST_CASE("constants and arity checks") {
    std::vector<LogicValue> none;
    CHECK(eval_primitive(PrimitiveKind::Const0, none) == L0);
    CHECK(eval_primitive(PrimitiveKind::Const1, none) == L1);
    std::vector<LogicValue> one = {L1};
    CHECK_THROWS_AS(eval_primitive(PrimitiveKind::And2, one), Error);
    CHECK_THROWS_AS(eval_primitive(PrimitiveKind::Const0, one), Error);
}

TEST_CASE("X never flips a determined output") {
    // Replacing any strong input with X must keep the output or weaken it
    // to X, never flip it to the opposite strong value.
    for (auto k : {PrimitiveKind::Not, PrimitiveKind::Buf, PrimitiveKind::And2,
                   PrimitiveKind::Nand2, PrimitiveKind::Or2, PrimitiveKind::Nor2,
                   PrimitiveKind::Xor2, PrimitiveKind::Tgate, PrimitiveKind::Cinv}) {
        std::size_t arity = primitive_inputs(k).size();
        for (unsigned bits = 0; bits < (1u << arity); ++bits) {
            std::vector<LogicValue> in(arity);
            for (std::size_t i = 0; i < arity; ++i) in[i] = (bits >> i) & 1 ? L1 : L0;
            LogicValue base = eval_primitive(k, in);
            for (std::size_t i = 0; i < arity; ++i) {
                std::vector<LogicValue> weak = in;
                weak[i] = LX;
                LogicValue got = eval_primitive(k, weak);
                if (is_strong(base)) CHECK((got == base || got == LX || got == LZ));
            }
        }
    }
}

TEST_CASE("word conversions") {
    Word4 w = Word4::from_uint(11);
    CHECK(w.str() == "1011"); // F1 is the MSB
    CHECK(w.to_uint() == 11u);
    CHECK(Word4::from_uint(0).str() == "0000");
    CHECK(Word4::from_uint(8).str() == "1000");

    Word4 x;
    CHECK(x.str() == "xxxx");
    CHECK(!x.to_uint());
    CHECK(!x.all_strong());

    auto parsed = Word4::parse("10x1");
    REQUIRE(parsed);
    CHECK((*parsed)[2] == LX);
    CHECK(!Word4::parse("10"));
    CHECK(!Word4::parse("10q1"));

    for (unsigned v = 0; v < 16; ++v) CHECK(Word4::from_uint(v).to_uint() == v);
}
