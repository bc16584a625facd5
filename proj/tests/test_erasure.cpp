#include "codedfog/erasure.hpp"

#include "codedfog/gf256.hpp"
#include "codedfog/mapfn.hpp"

#include <doctest.h>

#include <cmath>

using namespace codedfog;

namespace {

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - (k - i)) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

std::vector<std::vector<std::uint8_t>> random_blocks(int k, std::size_t len, std::uint64_t seed) {
    std::vector<std::vector<std::uint8_t>> blocks(static_cast<std::size_t>(k));
    std::uint64_t state = seed;
    for (auto& b : blocks) {
        b.resize(len);
        for (auto& byte : b) byte = static_cast<std::uint8_t>(splitmix64(state));
    }
    return blocks;
}

double rel_err(const std::vector<double>& got, const std::vector<double>& want) {
    double scale = 0.0, worst = 0.0;
    for (double v : want) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
    }
    return worst;
}

}  // namespace

TEST_CASE("gf256 field sanity") {
    for (int a = 1; a < 256; ++a) {
        CHECK(gf256::mul(static_cast<std::uint8_t>(a), gf256::inv(static_cast<std::uint8_t>(a))) == 1);
    }
    CHECK(gf256::mul(2, 0x80) == 0x1D);   // x^8 reduction by 0x11D
    CHECK(gf256::add(0x53, 0x53) == 0);
    CHECK_THROWS_AS(gf256::inv(0), std::domain_error);
}

TEST_CASE("xor parity preset encodes to (A1, A2, A1+A2)") {
    const auto code = xor_parity_code();
    const std::vector<std::vector<double>> blocks{{1.0, 2.0}, {3.0, 5.0}};
    const auto coded = encode_real(code, blocks);
    CHECK(coded[0] == blocks[0]);
    CHECK(coded[1] == blocks[1]);
    CHECK(coded[2] == std::vector<double>{4.0, 7.0});

    // straggler scenario: nodes 1 and 3 respond.
    const auto decoded = decode_real(code, {{0, coded[0]}, {2, coded[2]}});
    CHECK(rel_err(decoded.blocks[0], blocks[0]) == 0.0);
    CHECK(rel_err(decoded.blocks[1], blocks[1]) <= 1e-12);
}

TEST_CASE("identity code when n = k") {
    const auto code = make_mds(4, 4, Field::GF256, 1);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(code.coeffGf[static_cast<std::size_t>(i) * 4 + j] == (i == j ? 1 : 0));
        }
    }
}

TEST_CASE("GF256 (5,3): every 3x3 submatrix invertible") {
    const auto code = make_mds(5, 3, Field::GF256, 1);
    for_each_combination(5, 3, [&](const std::vector<int>& rows) {
        std::vector<std::uint8_t> sub(9);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                sub[static_cast<std::size_t>(i) * 3 + j] =
                    code.coeffGf[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) * 3 + j];
            }
        }
        CHECK(gf256::invertible(std::move(sub), 3));
    });
}

TEST_CASE("GF256 systematic prefix and XOR parity special case") {
    const auto code = make_mds(3, 2, Field::GF256, 1);
    const auto blocks = random_blocks(2, 16, 5);
    const auto coded = encode_gf(code, blocks);
    CHECK(coded[0] == blocks[0]);
    CHECK(coded[1] == blocks[1]);

    // A parity row of ones is plain XOR.
    MdsCode xorCode;
    xorCode.n = 3;
    xorCode.k = 2;
    xorCode.field = Field::GF256;
    xorCode.coeffGf = {1, 0, 0, 1, 1, 1};
    const auto xorCoded = encode_gf(xorCode, blocks);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(xorCoded[2][i] == (blocks[0][i] ^ blocks[1][i]));
    }

    // All-zero input stays zero.
    const auto zero = encode_gf(code, {std::vector<std::uint8_t>(8, 0), std::vector<std::uint8_t>(8, 0)});
    for (const auto& c : zero) CHECK(c == std::vector<std::uint8_t>(8, 0));
}

TEST_CASE("GF256 any-k-of-n round trip, exhaustive for n <= 12") {
    for (const auto [n, k] : {std::pair{6, 3}, std::pair{5, 2}, std::pair{12, 8}}) {
        const auto code = make_mds(n, k, Field::GF256, 2);
        const auto blocks = random_blocks(k, 32, static_cast<std::uint64_t>(n * 100 + k));
        const auto coded = encode_gf(code, blocks);
        for_each_combination(n, k, [&](const std::vector<int>& rows) {
            std::map<int, std::vector<std::uint8_t>> available;
            for (int idx : rows) available[idx] = coded[static_cast<std::size_t>(idx)];
            CHECK(decode_gf(code, available) == blocks);
        });
    }
}

TEST_CASE("decode uses the lowest available indices and reports deficits") {
    const auto code = make_mds(6, 3, Field::GF256, 2);
    const auto blocks = random_blocks(3, 8, 11);
    const auto coded = encode_gf(code, blocks);
    std::map<int, std::vector<std::uint8_t>> available;
    available[0] = coded[0];
    available[1] = coded[1];
    CHECK_THROWS_WITH_AS(decode_gf(code, available), doctest::Contains("short by 1"),
                         std::runtime_error);
    available[5] = coded[5];
    CHECK(decode_gf(code, available) == blocks);
}

TEST_CASE("ragged blocks rejected") {
    const auto code = make_mds(3, 2, Field::GF256, 1);
    CHECK_THROWS_AS(encode_gf(code, {{1, 2}, {3}}), std::invalid_argument);
    const auto rc = make_mds(3, 2, Field::Real, 1);
    CHECK_THROWS_AS(encode_real(rc, {{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("GF256 size limit") {
    CHECK_THROWS_AS(make_mds(300, 10, Field::GF256, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_mds(3, 0, Field::GF256, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_mds(3, 4, Field::GF256, 1), std::invalid_argument);
}

TEST_CASE("Real any-k-of-n within 1e-8") {
    const auto code = make_mds(6, 3, Field::Real, 77);
    std::uint64_t state = 13;
    std::vector<std::vector<double>> blocks(3);
    for (auto& b : blocks) {
        b.resize(10);
        for (auto& v : b) v = (splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
    const auto coded = encode_real(code, blocks);
    CHECK(coded[0] == blocks[0]);   // systematic
    for_each_combination(6, 3, [&](const std::vector<int>& rows) {
        std::map<int, std::vector<double>> available;
        for (int idx : rows) available[idx] = coded[static_cast<std::size_t>(idx)];
        const auto decoded = decode_real(code, available);
        for (int j = 0; j < 3; ++j) {
            CHECK(rel_err(decoded.blocks[static_cast<std::size_t>(j)],
                          blocks[static_cast<std::size_t>(j)]) <= 1e-8);
        }
    });
}

TEST_CASE("Real encode is linear") {
    const auto code = make_mds(5, 2, Field::Real, 3);
    std::uint64_t state = 21;
    const auto rnd = [&] {
        std::vector<double> v(6);
        for (auto& x : v) x = (splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
        return v;
    };
    const std::vector<std::vector<double>> x{rnd(), rnd()};
    const std::vector<std::vector<double>> y{rnd(), rnd()};
    const double alpha = 0.37, beta = -1.9;
    std::vector<std::vector<double>> combo(2);
    for (int j = 0; j < 2; ++j) {
        combo[static_cast<std::size_t>(j)].resize(6);
        for (int i = 0; i < 6; ++i) {
            combo[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                alpha * x[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +
                beta * y[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        }
    }
    const auto ex = encode_real(code, x);
    const auto ey = encode_real(code, y);
    const auto ec = encode_real(code, combo);
    for (int i = 0; i < 5; ++i) {
        for (int b = 0; b < 6; ++b) {
            const double want = alpha * ex[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] +
                                beta * ey[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
            CHECK(std::abs(ec[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] - want) <= 1e-9);
        }
    }
}

TEST_CASE("repetition code recovery iff every symbol has a survivor") {
    const RepetitionCode rep(6, 3);
    CHECK(rep.replication() == 2);
    for (int mask = 0; mask < 64; ++mask) {
        std::vector<bool> survived(6);
        for (int i = 0; i < 6; ++i) survived[static_cast<std::size_t>(i)] = (mask >> i) & 1;
        bool expect = true;
        for (int s = 0; s < 3; ++s) {
            bool any = false;
            for (int i = 0; i < 6; ++i) {
                if (survived[static_cast<std::size_t>(i)] && rep.source_of(i) == s) any = true;
            }
            expect = expect && any;
        }
        CHECK(rep.recoverable(survived) == expect);
    }
    CHECK_THROWS_AS(RepetitionCode(5, 3), std::invalid_argument);
}

TEST_CASE("generator export formats") {
    const auto gf = make_mds(3, 2, Field::GF256, 1);
    CHECK(gf.generator_text().substr(0, 5) == "01 00");
    const auto re = xor_parity_code();
    CHECK(re.generator_text() == "1,0\n0,1\n1,1\n");
}
